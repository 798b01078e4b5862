//! Command-line front end: cardinality-optimal SAT queries, the reduction
//! gadgets, belief revision, abduction, constraint-language
//! classification, and the cross-validation harness.
//!
//! Exit codes: 0 answer true / success, 1 answer false, 2 usage or format
//! error, 3 refusal of an oversized input. Answers go to standard output,
//! diagnostics to standard error.

mod backend;
mod report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cardsat::abduction::{any_relevance, leq_relevance, subset_relevance};
use cardsat::clones::{classify_language, hard_case_construction, VerdictClass};
use cardsat::error::Error;
use cardsat::harness::{run_all, Fault, XcheckConfig};
use cardsat::io;
use cardsat::logic::{Assignment, CnfFormula, Variable, VariableOrder, DEFAULT_ENUMERATION_CAP};
use cardsat::optsat::{card_max_sat, card_min_sat, lex_max_model, log_lex_max_sat, LogLexAnswer, OptQuery};
use cardsat::reductions::{
    drop_bound, graph_to_negative_krom, negkrom_cardmax_to_poskrom_cardmin,
    reduce_3sat_to_satoh_mc, reduce_cardmax3cnf_to_maxindset, reduce_cardmin_to_abduction,
    reduce_cardmin_to_dalal, reduce_loglex_to_cardmax, reduce_or2_to_r4p, s01_witness_reduction,
    CspQuery, IndSetInstance,
};
use cardsat::revision::{
    dalal_implication, dalal_implication_oracle, dalal_model_check, dalal_model_check_oracle,
    dalal_revise, satoh_implication, satoh_model_check, satoh_revise, RevisionInstance,
};

#[derive(Parser)]
#[command(name = "cardsat", version, about = "cardinality-optimal satisfiability and friends")]
struct Cli {
    /// Solver backend: "builtin" or an external command speaking DIMACS
    /// (also via the CARDSAT_BACKEND environment variable).
    #[arg(long, global = true)]
    backend: Option<String>,

    /// Emit a machine-readable run report instead of human text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Is the atom true in some cardinality-minimal model?
    Cardminsat(CardArgs),
    /// Is the atom true in some cardinality-maximal model?
    Cardmaxsat(CardArgs),
    /// Lexicographically maximal model, or maximal extendable prefix when
    /// the order covers only part of the universe.
    Lexmaxsat(LexArgs),
    /// Apply one of the constructive reductions and write the target
    /// instance plus a variable-correspondence sidecar.
    Reduce(ReduceArgs),
    /// Belief revision: model checking or implication under Dalal or
    /// Satoh semantics.
    Revise(ReviseArgs),
    /// Hypothesis relevance for a propositional abduction problem.
    Abduce(AbduceArgs),
    /// Complexity classification of a constraint language.
    Classify(ClassifyArgs),
    /// Run the oracle-equivalence and reduction-preservation suites.
    Xcheck(XcheckArgs),
}

#[derive(Args)]
struct CardArgs {
    /// DIMACS CNF input.
    input: PathBuf,
    /// Queried atom (1-based).
    #[arg(long)]
    query: u32,
}

#[derive(Args)]
struct LexArgs {
    /// DIMACS CNF input.
    input: PathBuf,
    /// Comma-separated variable order, most significant first.
    #[arg(long, value_delimiter = ',')]
    order: Vec<u32>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Problem {
    Loglexmaxsat,
    Cardmaxsat,
    Cardminsat,
    Maxindset,
    MaxindsetBounded,
    DalalMc,
    SatohMc,
    Abduction,
    #[value(name = "3sat")]
    ThreeSat,
    Or2,
    R4p,
    S01,
}

#[derive(Args)]
struct ReduceArgs {
    /// Source problem.
    #[arg(long, value_enum)]
    from: Problem,
    /// Target problem.
    #[arg(long, value_enum)]
    to: Problem,
    /// Source instance file (format depends on --from).
    input: PathBuf,
    /// Output path prefix; files get suffixes per target format.
    #[arg(long)]
    out: PathBuf,
    /// Queried atom, for sources that carry one.
    #[arg(long)]
    query: Option<u32>,
    /// Variable order for loglexmaxsat sources.
    #[arg(long, value_delimiter = ',')]
    order: Vec<u32>,
    /// Relation file providing S then R, for the s01 target.
    #[arg(long)]
    rels: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum RevisionOp {
    Dalal,
    Satoh,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum RevisionTask {
    Mc,
    Imp,
}

#[derive(Args)]
struct ReviseArgs {
    /// Belief set, DIMACS CNF.
    psi: PathBuf,
    /// New belief, DIMACS CNF.
    mu: PathBuf,
    #[arg(long, value_enum)]
    op: RevisionOp,
    #[arg(long, value_enum)]
    task: RevisionTask,
    /// Universe size overriding both headers (must cover both).
    #[arg(long)]
    shared_universe: Option<u32>,
    /// Model bit string for model checking, variable 1 leftmost.
    #[arg(long)]
    model: Option<String>,
    /// Queried atom for implication.
    #[arg(long)]
    query: Option<u32>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Preorder {
    Card,
    Subset,
    Any,
}

#[derive(Args)]
struct AbduceArgs {
    /// Abduction problem file.
    input: PathBuf,
    /// Queried hypothesis.
    #[arg(long)]
    query: u32,
    #[arg(long, value_enum, default_value = "card")]
    preorder: Preorder,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Relation file with one block per relation.
    input: PathBuf,
    /// Also print the closure report and the applicable hard-case
    /// construction.
    #[arg(long)]
    explain: bool,
}

#[derive(Args)]
struct XcheckArgs {
    /// Master seed for corpus generation.
    #[arg(long, default_value_t = XcheckConfig::default().seed)]
    seed: u64,
    /// Run the scaled-down corpora.
    #[arg(long)]
    quick: bool,
    /// Override the per-suite random instance counts.
    #[arg(long)]
    instances: Option<u32>,
    /// Override the per-reduction instance counts.
    #[arg(long)]
    reduction_instances: Option<u32>,
    /// Override the exhaustive corpus bounds as <max-vars>,<max-clauses>.
    #[arg(long, value_delimiter = ',')]
    exhaustive: Option<Vec<u32>>,
}

struct Outcome {
    exit: i32,
    human: String,
    payload: Value,
}

fn answer_exit(answer: bool) -> i32 {
    if answer {
        0
    } else {
        1
    }
}

fn bitstring(a: &Assignment) -> String {
    (1..=a.universe_size())
        .map(|v| {
            if a.contains(Variable::new(v)) {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

fn parse_bitstring(s: &str, universe: u32) -> Result<Assignment, Error> {
    if s.len() as u32 != universe || !s.chars().all(|c| c == '0' || c == '1') {
        return Err(Error::contract(format!(
            "model must be a {universe}-bit string of 0s and 1s"
        )));
    }
    Assignment::new(
        universe,
        s.chars()
            .enumerate()
            .filter(|(_, c)| *c == '1')
            .map(|(i, _)| i as u32 + 1),
    )
}

fn read_input(path: &PathBuf, inputs: &mut Vec<report::InputDigest>) -> Result<String, Error> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    inputs.push(report::digest(&path.display().to_string(), &bytes));
    String::from_utf8(bytes).map_err(|_| Error::Io(format!("{}: not utf-8", path.display())))
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    let mut inputs = Vec::new();
    let oracle = match backend::select(cli.backend.as_deref()) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    };

    let (subcommand, seed, result) = match &cli.command {
        Command::Cardminsat(args) => ("cardminsat", None, cmd_card(args, &oracle, true, &mut inputs)),
        Command::Cardmaxsat(args) => ("cardmaxsat", None, cmd_card(args, &oracle, false, &mut inputs)),
        Command::Lexmaxsat(args) => ("lexmaxsat", None, cmd_lex(args, &oracle, &mut inputs)),
        Command::Reduce(args) => ("reduce", None, cmd_reduce(args, &mut inputs)),
        Command::Revise(args) => ("revise", None, cmd_revise(args, &oracle, &mut inputs)),
        Command::Abduce(args) => ("abduce", None, cmd_abduce(args, &oracle, &mut inputs)),
        Command::Classify(args) => ("classify", None, cmd_classify(args, &mut inputs)),
        Command::Xcheck(args) => ("xcheck", Some(args.seed), cmd_xcheck(args)),
    };

    match result {
        Ok(outcome) => {
            if cli.json {
                let report = report::RunReport {
                    subcommand: subcommand.to_string(),
                    inputs,
                    payload: outcome.payload,
                    oracle_calls: oracle.calls(),
                    wall_ms: started.elapsed().as_millis() as u64,
                    seed,
                };
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            } else {
                print!("{}", outcome.human);
            }
            std::process::exit(outcome.exit);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(if e.is_refusal() { 3 } else { 2 });
        }
    }
}

fn cmd_card(
    args: &CardArgs,
    oracle: &backend::CountingOracle,
    minimize: bool,
    inputs: &mut Vec<report::InputDigest>,
) -> Result<Outcome, Error> {
    let formula = io::parse_dimacs(&read_input(&args.input, inputs)?)?;
    let q = OptQuery::new(formula, Variable::new(args.query))?;
    let (ans, usage) = if minimize {
        card_min_sat(oracle, &q)?
    } else {
        card_max_sat(oracle, &q)?
    };
    let mut human = String::new();
    match ans.optimum {
        Some(k) => {
            human.push_str(&format!("{}\noptimum {k}\n", ans.answer));
            if let Some(w) = &ans.witness {
                human.push_str(&format!("witness {}\n", bitstring(w)));
            }
        }
        None => human.push_str("false\nunsat\n"),
    }
    Ok(Outcome {
        exit: answer_exit(ans.answer),
        human,
        payload: json!({
            "answer": ans.answer,
            "optimum": ans.optimum,
            "witness": ans.witness.as_ref().map(bitstring),
            "bounded_calls": usage.bounded_calls,
        }),
    })
}

fn cmd_lex(
    args: &LexArgs,
    oracle: &backend::CountingOracle,
    inputs: &mut Vec<report::InputDigest>,
) -> Result<Outcome, Error> {
    let formula = io::parse_dimacs(&read_input(&args.input, inputs)?)?;
    let order = VariableOrder::from_ids(&args.order)?;
    order.check_within(formula.universe_size())?;
    if order.covers(formula.universe_size()) {
        let model = lex_max_model(oracle, &formula, &order)?;
        let last = *order.vars().last().ok_or_else(|| Error::contract("empty order"))?;
        return Ok(match model {
            Some(m) => {
                let answer = m.contains(last);
                Outcome {
                    exit: answer_exit(answer),
                    human: format!("{answer}\nmodel {}\n", bitstring(&m)),
                    payload: json!({"answer": answer, "model": bitstring(&m)}),
                }
            }
            None => Outcome {
                exit: 1,
                human: "false\nunsat\n".to_string(),
                payload: json!({"answer": false, "model": Value::Null}),
            },
        });
    }
    // Partial order: prefix maximization. The logarithmic-length promise
    // is advisory, so an oversized prefix only warns.
    if 1u64.checked_shl(order.len() as u32).is_none_or(|p| {
        p > formula.size() as u64
    }) {
        eprintln!(
            "warning: prefix length {} exceeds the logarithm of the formula size {}",
            order.len(),
            formula.size()
        );
    }
    match log_lex_max_sat(oracle, &formula, &order)? {
        LogLexAnswer::Unsat => Ok(Outcome {
            exit: 1,
            human: "false\nunsat\n".to_string(),
            payload: json!({"answer": false, "prefix": Value::Null}),
        }),
        LogLexAnswer::Prefix { bits, answer } => {
            let prefix: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
            Ok(Outcome {
                exit: answer_exit(answer),
                human: format!("{answer}\nprefix {prefix}\n"),
                payload: json!({"answer": answer, "prefix": prefix}),
            })
        }
    }
}

fn write_output(path: PathBuf, contents: &str, written: &mut Vec<String>) -> Result<(), Error> {
    std::fs::write(&path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    written.push(path.display().to_string());
    Ok(())
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

fn cmd_reduce(args: &ReduceArgs, inputs: &mut Vec<report::InputDigest>) -> Result<Outcome, Error> {
    let text = read_input(&args.input, inputs)?;
    let need_query = || {
        args.query
            .ok_or_else(|| Error::contract("this reduction needs --query"))
    };
    let mut written: Vec<String> = Vec::new();
    let mut facts: Vec<(String, Value)> = Vec::new();
    let var_map: BTreeMap<u32, u32>;

    match (args.from, args.to) {
        (Problem::Loglexmaxsat, Problem::Cardmaxsat) => {
            let formula = io::parse_dimacs(&text)?;
            let order = VariableOrder::from_ids(&args.order)?;
            let out = reduce_loglex_to_cardmax(&formula, &order)?;
            var_map = out.var_map;
            let query = out.target.query_var().id();
            write_output(
                with_suffix(&args.out, ".cnf"),
                &format!("c query {query}\n{}", io::render_dimacs(out.target.formula())),
                &mut written,
            )?;
            facts.push(("query".into(), json!(query)));
        }
        (Problem::Cardmaxsat, Problem::Maxindset) => {
            let formula = io::parse_dimacs(&text)?;
            let q = OptQuery::new(formula, Variable::new(need_query()?))?;
            let out = reduce_cardmax3cnf_to_maxindset(&q)?;
            var_map = out.var_map;
            let file = io::GraphInstanceFile {
                graph: out.target.graph().clone(),
                query_vertex: Some(out.target.query_vertex()),
                bound: out.target.bound(),
            };
            write_output(
                with_suffix(&args.out, ".graph"),
                &io::render_graph_instance(&file),
                &mut written,
            )?;
            facts.push(("query_vertex".into(), json!(out.target.query_vertex())));
            facts.push(("bound".into(), json!(out.target.bound())));
        }
        (Problem::MaxindsetBounded, Problem::Maxindset) => {
            let file = io::parse_graph_instance(&text)?;
            let q = file
                .query_vertex
                .ok_or_else(|| Error::contract("graph file needs a 'q' line"))?;
            let inst = IndSetInstance::new(file.graph, q, file.bound)?;
            let out = drop_bound(&inst)?;
            var_map = out.var_map;
            let file = io::GraphInstanceFile {
                graph: out.target.graph().clone(),
                query_vertex: Some(out.target.query_vertex()),
                bound: None,
            };
            write_output(
                with_suffix(&args.out, ".graph"),
                &io::render_graph_instance(&file),
                &mut written,
            )?;
        }
        (Problem::Maxindset, Problem::Cardmaxsat) => {
            let file = io::parse_graph_instance(&text)?;
            let q = file
                .query_vertex
                .ok_or_else(|| Error::contract("graph file needs a 'q' line"))?;
            let inst = IndSetInstance::new(file.graph, q, file.bound)?;
            let out = graph_to_negative_krom(&inst)?;
            var_map = out.var_map;
            let query = out.target.query_var().id();
            write_output(
                with_suffix(&args.out, ".cnf"),
                &format!("c query {query}\n{}", io::render_dimacs(out.target.formula())),
                &mut written,
            )?;
            facts.push(("query".into(), json!(query)));
        }
        (Problem::Cardmaxsat, Problem::Cardminsat) => {
            let formula = io::parse_dimacs(&text)?;
            let q = OptQuery::new(formula, Variable::new(need_query()?))?;
            let out = negkrom_cardmax_to_poskrom_cardmin(&q)?;
            var_map = out.var_map;
            let query = out.target.query_var().id();
            write_output(
                with_suffix(&args.out, ".cnf"),
                &format!("c query {query}\n{}", io::render_dimacs(out.target.formula())),
                &mut written,
            )?;
            facts.push(("query".into(), json!(query)));
        }
        (Problem::Cardminsat, Problem::DalalMc) => {
            let formula = io::parse_dimacs(&text)?;
            let q = OptQuery::new(formula, Variable::new(need_query()?))?;
            let out = reduce_cardmin_to_dalal(&q)?;
            var_map = out.var_map;
            write_output(
                with_suffix(&args.out, ".psi.cnf"),
                &io::render_dimacs(&out.target.psi),
                &mut written,
            )?;
            write_output(
                with_suffix(&args.out, ".mu.cnf"),
                &io::render_dimacs(&out.target.mu),
                &mut written,
            )?;
            write_output(
                with_suffix(&args.out, ".models"),
                &format!(
                    "m1 {}\nm2 {}\nflag {}\n",
                    bitstring(&out.target.m1),
                    bitstring(&out.target.m2),
                    out.target.flag.id()
                ),
                &mut written,
            )?;
            facts.push(("flag".into(), json!(out.target.flag.id())));
        }
        (Problem::ThreeSat, Problem::SatohMc) => {
            let formula = io::parse_dimacs(&text)?;
            let out = reduce_3sat_to_satoh_mc(&formula)?;
            var_map = out.var_map;
            write_output(
                with_suffix(&args.out, ".psi.cnf"),
                &io::render_dimacs(&out.target.psi),
                &mut written,
            )?;
            write_output(
                with_suffix(&args.out, ".mu.cnf"),
                &io::render_dimacs(&out.target.mu),
                &mut written,
            )?;
            write_output(
                with_suffix(&args.out, ".models"),
                &format!("m {}\nd {}\n", bitstring(&out.target.m), out.target.d.id()),
                &mut written,
            )?;
            facts.push(("escape".into(), json!(out.target.d.id())));
        }
        (Problem::Cardminsat, Problem::Abduction) => {
            let formula = io::parse_dimacs(&text)?;
            let q = OptQuery::new(formula, Variable::new(need_query()?))?;
            let out = reduce_cardmin_to_abduction(&q)?;
            var_map = out.var_map;
            let (pap, h) = &out.target;
            write_output(with_suffix(&args.out, ".pap"), &io::render_pap(pap), &mut written)?;
            facts.push(("hypothesis".into(), json!(h.id())));
        }
        (Problem::Or2, Problem::R4p) => {
            let cf = io::parse_constraint_formula(&text)?;
            let q = CspQuery::new(cf, Variable::new(need_query()?))?;
            let out = reduce_or2_to_r4p(&q)?;
            var_map = out.var_map;
            write_output(
                with_suffix(&args.out, ".csp"),
                &io::render_constraint_formula(&out.target.formula),
                &mut written,
            )?;
            facts.push(("query".into(), json!(out.target.query_var.id())));
        }
        (Problem::Or2, Problem::S01) => {
            let cf = io::parse_constraint_formula(&text)?;
            let q = CspQuery::new(cf, Variable::new(need_query()?))?;
            let rels_path = args
                .rels
                .as_ref()
                .ok_or_else(|| Error::contract("the s01 target needs --rels with S then R"))?;
            let rels = io::parse_relations(&read_input(rels_path, inputs)?)?;
            if rels.len() != 2 {
                return Err(Error::contract("--rels must contain exactly S then R"));
            }
            let out = s01_witness_reduction(&q, &rels[0].1, &rels[1].1)?;
            var_map = out.var_map;
            write_output(
                with_suffix(&args.out, ".csp"),
                &io::render_constraint_formula(&out.target.formula),
                &mut written,
            )?;
            facts.push(("query".into(), json!(out.target.query_var.id())));
        }
        _ => {
            return Err(Error::contract(
                "unsupported reduction pair; see the README for the available ones",
            ))
        }
    }

    write_output(with_suffix(&args.out, ".map"), &io::render_var_map(&var_map), &mut written)?;
    let mut human = String::new();
    for path in &written {
        human.push_str(&format!("wrote {path}\n"));
    }
    for (k, v) in &facts {
        human.push_str(&format!("{k} {v}\n"));
    }
    let payload = json!({
        "written": written,
        "facts": facts.into_iter().collect::<serde_json::Map<String, Value>>(),
    });
    Ok(Outcome {
        exit: 0,
        human,
        payload,
    })
}

fn cmd_revise(
    args: &ReviseArgs,
    oracle: &backend::CountingOracle,
    inputs: &mut Vec<report::InputDigest>,
) -> Result<Outcome, Error> {
    let psi = io::parse_dimacs(&read_input(&args.psi, inputs)?)?;
    let mu = io::parse_dimacs(&read_input(&args.mu, inputs)?)?;
    let universe = args
        .shared_universe
        .unwrap_or_else(|| psi.universe_size().max(mu.universe_size()));
    if universe < psi.universe_size() || universe < mu.universe_size() {
        return Err(Error::contract(
            "--shared-universe must cover both formulas",
        ));
    }
    let psi = CnfFormula::new(universe, psi.clauses().to_vec())?;
    let mu = CnfFormula::new(universe, mu.clauses().to_vec())?;
    let inst = RevisionInstance::new(psi, mu)?;
    let brute = universe <= DEFAULT_ENUMERATION_CAP;

    let (answer, extra): (bool, Value) = match (args.op, args.task) {
        (RevisionOp::Dalal, RevisionTask::Mc) => {
            let m = parse_bitstring(
                args.model
                    .as_deref()
                    .ok_or_else(|| Error::contract("model checking needs --model"))?,
                universe,
            )?;
            if brute {
                let r = dalal_revise(&inst)?;
                (dalal_model_check(&inst, &m)?, json!({"delta_min": r.delta_min}))
            } else {
                (dalal_model_check_oracle(oracle, &inst, &m)?, json!({}))
            }
        }
        (RevisionOp::Dalal, RevisionTask::Imp) => {
            let x = Variable::new(
                args.query
                    .ok_or_else(|| Error::contract("implication needs --query"))?,
            );
            if brute {
                let r = dalal_revise(&inst)?;
                (dalal_implication(&inst, x)?, json!({"delta_min": r.delta_min}))
            } else {
                (dalal_implication_oracle(oracle, &inst, x)?, json!({}))
            }
        }
        (RevisionOp::Satoh, task) => {
            if !brute {
                return Err(Error::EnumerationCap {
                    universe,
                    cap: DEFAULT_ENUMERATION_CAP,
                });
            }
            let r = satoh_revise(&inst)?;
            let diffs: Vec<Vec<u32>> = r
                .minimal_diffs
                .iter()
                .map(|d| d.iter().copied().collect())
                .collect();
            let answer = match task {
                RevisionTask::Mc => {
                    let m = parse_bitstring(
                        args.model
                            .as_deref()
                            .ok_or_else(|| Error::contract("model checking needs --model"))?,
                        universe,
                    )?;
                    satoh_model_check(&inst, &m)?
                }
                RevisionTask::Imp => {
                    let x = Variable::new(
                        args.query
                            .ok_or_else(|| Error::contract("implication needs --query"))?,
                    );
                    satoh_implication(&inst, x)?
                }
            };
            (answer, json!({"minimal_diffs": diffs}))
        }
    };

    let mut payload = json!({"answer": answer});
    if let Value::Object(extra) = extra {
        payload.as_object_mut().expect("object").extend(extra);
    }
    Ok(Outcome {
        exit: answer_exit(answer),
        human: format!("{answer}\n"),
        payload,
    })
}

fn cmd_abduce(
    args: &AbduceArgs,
    oracle: &backend::CountingOracle,
    inputs: &mut Vec<report::InputDigest>,
) -> Result<Outcome, Error> {
    let pap = io::parse_pap(&read_input(&args.input, inputs)?)?;
    let h = Variable::new(args.query);
    match args.preorder {
        Preorder::Card => {
            let ans = leq_relevance(oracle, &pap, h)?;
            let mut human = format!("{}\n", ans.relevant);
            if let Some(k) = ans.min_size {
                human.push_str(&format!("min_size {k}\n"));
            }
            if let Some(w) = &ans.witness_solution {
                human.push_str(&format!(
                    "witness {}\n",
                    w.iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                ));
            }
            Ok(Outcome {
                exit: answer_exit(ans.relevant),
                human,
                payload: json!({
                    "answer": ans.relevant,
                    "min_size": ans.min_size,
                    "witness": ans.witness_solution.as_ref().map(|w| w.iter().copied().collect::<Vec<u32>>()),
                }),
            })
        }
        Preorder::Subset => {
            let answer = subset_relevance(&pap, h)?;
            Ok(Outcome {
                exit: answer_exit(answer),
                human: format!("{answer}\n"),
                payload: json!({"answer": answer}),
            })
        }
        Preorder::Any => {
            let answer = any_relevance(&pap, h)?;
            Ok(Outcome {
                exit: answer_exit(answer),
                human: format!("{answer}\n"),
                payload: json!({"answer": answer}),
            })
        }
    }
}

fn cmd_classify(args: &ClassifyArgs, inputs: &mut Vec<report::InputDigest>) -> Result<Outcome, Error> {
    let relations = io::parse_relations(&read_input(&args.input, inputs)?)?;
    let language: Vec<_> = relations.iter().map(|(_, r)| r.clone()).collect();
    let verdict = classify_language(&language)?;
    let verdict_name = match verdict.class {
        VerdictClass::Polynomial => "polynomial",
        VerdictClass::Theta2Complete => "Theta2-complete",
        VerdictClass::OutsideScope => "outside-scope",
    };
    let mut human = format!("{verdict_name}\n");
    let case = if verdict.class == VerdictClass::Theta2Complete {
        hard_case_construction(&language)
    } else {
        None
    };
    if args.explain {
        human.push_str(&format!("reason: {}\n", verdict.reason));
        let r = verdict.report;
        human.push_str(&format!(
            "closure: horn={} dual_horn={} affine={} krom={} width2affine={} 0-valid={} 1-valid={}\n",
            r.horn, r.dual_horn, r.affine, r.krom, r.width2affine, r.zero_valid, r.one_valid
        ));
        match (&case, verdict.class) {
            (Some(c), _) => human.push_str(&format!("construction: {c}\n")),
            (None, VerdictClass::Theta2Complete) => human.push_str(
                "construction: not identified (finer co-clone data out of scope)\n",
            ),
            _ => {}
        }
    }
    let r = verdict.report;
    Ok(Outcome {
        exit: 0,
        human,
        payload: json!({
            "verdict": verdict_name,
            "reason": verdict.reason,
            "construction": case,
            "closure": {
                "horn": r.horn, "dual_horn": r.dual_horn, "affine": r.affine,
                "krom": r.krom, "width2affine": r.width2affine,
                "zero_valid": r.zero_valid, "one_valid": r.one_valid,
            },
        }),
    })
}

fn cmd_xcheck(args: &XcheckArgs) -> Result<Outcome, Error> {
    let mut config = if args.quick {
        XcheckConfig::quick(args.seed)
    } else {
        XcheckConfig::default()
    };
    config.seed = args.seed;
    if let Some(n) = args.instances {
        config.random_krom_instances = n;
        config.horn_instances = n;
        config.w2a_instances = n;
        config.satoh_check_instances = n;
        config.walk_instances = n;
    }
    if let Some(n) = args.reduction_instances {
        config.reduction_instances = n;
    }
    if let Some(bounds) = &args.exhaustive {
        if bounds.len() != 2 {
            return Err(Error::contract(
                "--exhaustive takes <max-vars>,<max-clauses>",
            ));
        }
        config.exhaustive_max_vars = bounds[0];
        config.exhaustive_max_clauses = bounds[1];
    }
    let reports = run_all(&config, Fault::None)?;
    let mut human = String::new();
    let mut all_ok = true;
    for r in &reports {
        all_ok &= r.passed();
        human.push_str(&format!(
            "{}: {} ({} checks, {} mismatches, {:.1}s)\n",
            r.name,
            if r.passed() { "pass" } else { "FAIL" },
            r.checked,
            r.mismatches,
            r.wall.as_secs_f64()
        ));
        if let Some(detail) = &r.first_failure {
            human.push_str(&format!("  first failure: {detail}\n"));
        }
    }
    human.push_str(if all_ok { "all suites passed\n" } else { "FAILURES\n" });
    let payload = json!({
        "seed": config.seed,
        "suites": reports.iter().map(|r| json!({
            "name": r.name,
            "checked": r.checked,
            "mismatches": r.mismatches,
        })).collect::<Vec<_>>(),
        "passed": all_ok,
    });
    Ok(Outcome {
        exit: if all_ok { 0 } else { 1 },
        human,
        payload,
    })
}
