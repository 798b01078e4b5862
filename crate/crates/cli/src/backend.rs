//! Solver backend selection and oracle-call accounting.

use std::sync::atomic::{AtomicU64, Ordering};

use cardsat::logic::{CnfFormula, Literal};
use cardsat::sat::{Dpll, ExternalSolver, Oracle, SatResult};
use cardsat::Result;

/// Wraps any oracle and counts its invocations.
pub struct CountingOracle {
    inner: Box<dyn Oracle>,
    calls: AtomicU64,
}

impl CountingOracle {
    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }
}

impl Oracle for CountingOracle {
    fn solve(&self, formula: &CnfFormula, assumptions: &[Literal]) -> Result<SatResult> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.solve(formula, assumptions)
    }

    fn name(&self) -> &str {
        self.inner.name()
    }
}

/// Resolves the backend: the --backend flag wins, then the CARDSAT_BACKEND
/// environment variable, then the built-in solver. Anything other than
/// "builtin" is an external command line speaking DIMACS.
pub fn select(flag: Option<&str>) -> Result<CountingOracle> {
    let choice = flag
        .map(str::to_string)
        .or_else(|| std::env::var("CARDSAT_BACKEND").ok())
        .unwrap_or_else(|| "builtin".to_string());
    let inner: Box<dyn Oracle> = if choice == "builtin" {
        Box::new(Dpll)
    } else {
        Box::new(ExternalSolver::from_command(&choice)?)
    };
    Ok(CountingOracle {
        inner,
        calls: AtomicU64::new(0),
    })
}
