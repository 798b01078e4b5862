//! Acceptance suite: every gate criterion runs at its stated scale and
//! prints one pass/fail line. All thresholds are pinned here.

use std::time::Duration;

use cardsat::harness::{
    suite_cardopt_exhaustive, suite_cardopt_random, suite_classifier, suite_horn_minimal_model,
    suite_reduction_abduction, suite_reduction_dalal, suite_reduction_drop_bound,
    suite_reduction_duplication, suite_reduction_graph_to_krom, suite_reduction_loglex,
    suite_reduction_r4p, suite_reduction_s01, suite_reduction_satoh, suite_reduction_triangle,
    suite_revision_gadget_classes, suite_satoh_poly_check, suite_theorem_walk,
    suite_width2affine, Fault, SuiteReport, XcheckConfig,
};

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn criterion(&mut self, number: u32, label: &str, reports: &[&SuiteReport]) {
        let checked: u64 = reports.iter().map(|r| r.checked).sum();
        let mismatches: u64 = reports.iter().map(|r| r.mismatches).sum();
        let wall: Duration = reports.iter().map(|r| r.wall).sum();
        let pass = mismatches == 0;
        println!(
            "criterion {number} ({label}): {} - {checked} checks, {mismatches} mismatches, {:.1}s",
            if pass { "PASS" } else { "FAIL" },
            wall.as_secs_f64(),
        );
        if !pass {
            let detail = reports
                .iter()
                .filter_map(|r| r.first_failure.as_deref())
                .next()
                .unwrap_or("no detail");
            self.failures
                .push(format!("criterion {number} ({label}): {detail}"));
        }
    }

    fn runtime_bound(&mut self, number: u32, wall: Duration, bound: Duration) {
        let pass = wall <= bound;
        println!(
            "criterion {number} runtime: {} - {:.1}s of allowed {:.0}s",
            if pass { "PASS" } else { "FAIL" },
            wall.as_secs_f64(),
            bound.as_secs_f64(),
        );
        if !pass {
            self.failures
                .push(format!("criterion {number} exceeded its runtime bound"));
        }
    }
}

#[test]
fn acceptance() {
    let config = XcheckConfig::default();
    let mut gate = Gate { failures: Vec::new() };

    // 1. Solver/oracle equivalence on the exhaustive deduplicated Krom
    //    corpus (n <= 5, m <= 6) and 500 random Krom instances (n <= 16),
    //    within 60 seconds. The oracle-call budget
    //    ceil(log2(n+1)) + 1 is enforced inside both suites.
    let exhaustive = suite_cardopt_exhaustive(&config).expect("suite runs");
    let random = suite_cardopt_random(&config).expect("suite runs");
    gate.criterion(1, "solver/oracle equivalence", &[&exhaustive, &random]);
    gate.runtime_bound(1, exhaustive.wall + random.wall, Duration::from_secs(60));

    // 2. Polynomial cases: Horn minimal model on 500 instances (n <= 12)
    //    and the width-2 affine cluster algorithm on 500 instances
    //    (n <= 12), both against enumeration.
    let horn = suite_horn_minimal_model(&config).expect("suite runs");
    let w2a = suite_width2affine(&config).expect("suite runs");
    gate.criterion(2, "polynomial-case correctness", &[&horn, &w2a]);

    // 3. All nine reductions preserve their decision answers on the stated
    //    corpora, brute force on both sides.
    let reductions = [
        suite_reduction_loglex(&config).expect("suite runs"),
        suite_reduction_triangle(&config).expect("suite runs"),
        suite_reduction_drop_bound(&config).expect("suite runs"),
        suite_reduction_graph_to_krom(&config).expect("suite runs"),
        suite_reduction_duplication(&config).expect("suite runs"),
        suite_reduction_dalal(&config, Fault::None).expect("suite runs"),
        suite_reduction_satoh(&config).expect("suite runs"),
        suite_reduction_abduction(&config).expect("suite runs"),
        suite_reduction_r4p(&config).expect("suite runs"),
        suite_reduction_s01(&config).expect("suite runs"),
    ];
    gate.criterion(
        3,
        "reduction preservation",
        &reductions.iter().collect::<Vec<_>>(),
    );

    // 4. The revision gadget outputs are simultaneously Horn and Krom on
    //    every generated instance.
    let classes = suite_revision_gadget_classes(&config, Fault::None).expect("suite runs");
    gate.criterion(4, "revision gadgets Horn-and-Krom", &[&classes]);

    // 5. The polynomial Satoh minimality check agrees with brute-force
    //    inclusion minimality on 500 Krom and 500 Horn triples (n <= 10).
    let satoh = suite_satoh_poly_check(&config).expect("suite runs");
    gate.criterion(5, "Satoh polynomial check", &[&satoh]);

    // 6. Classifier verdicts on the named languages and closure flags
    //    against the polymorphism cross-path on relations of arity <= 4.
    let classifier = suite_classifier(&config).expect("suite runs");
    gate.criterion(6, "classifier", &[&classifier]);

    // 7. End-to-end walk: cardinality minimization, revision model
    //    checking/implication, and abduction relevance answer as one.
    let walk = suite_theorem_walk(&config).expect("suite runs");
    gate.criterion(7, "end-to-end theorem walk", &[&walk]);

    assert!(
        gate.failures.is_empty(),
        "acceptance failures:\n{}",
        gate.failures.join("\n")
    );
}
