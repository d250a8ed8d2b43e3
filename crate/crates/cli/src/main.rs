mod input;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pmas_core::encoder::{encode, encode_goal, AbPmas, Semantics};
use pmas_core::engine::{breach, check_locality, extract_run_template, BreachOptions, BreachReport, TraceStep, Verdict};
use pmas_core::mcmt::{emit_mcmt, explain, format_mcmt_witness, parse_mcmt_witness};
use pmas_core::model::Model;
use pmas_core::oracle::{
    compare, count_vectors, cross_check, enumerate_reachable, oracle_search, CrossCheck, CrossCheckOptions, OracleOptions,
};

use input::InputError;

const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "pmas", version, about = "Safety checker for parameterised multi-agent systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Model file.
    model: PathBuf,
    #[arg(long, default_value = "interleaved")]
    semantics: Semantics,
    /// Goal formula to use instead of the model's own.
    #[arg(long)]
    goal: Option<String>,
}

#[derive(Args)]
struct Budgets {
    #[arg(long, default_value_t = 200)]
    max_depth: usize,
    #[arg(long, default_value_t = 100_000)]
    max_cubes: usize,
}

impl Budgets {
    fn options(&self) -> BreachOptions {
        BreachOptions { max_depth: self.max_depth, max_cubes: self.max_cubes }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a goal state is reachable for some number of agents.
    Check {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        budgets: Budgets,
        /// Write the rule trace as JSON lines.
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Summarise the array-based encoding.
    Encode {
        #[command(flatten)]
        common: Common,
    },
    /// Write the encoding in MCMT input syntax.
    EmitMcmt {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Explore one concrete instance up to a depth bound.
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Agents per template, e.g. `Att=3`; others get one agent.
        #[arg(long)]
        counts: Option<String>,
        /// Relation tuples, one `R(c1, ..., cm)` per line.
        #[arg(long)]
        interp: Option<PathBuf>,
        #[arg(long, default_value_t = 15)]
        max_depth: usize,
        #[arg(long, default_value_t = 200_000)]
        max_states: usize,
    },
    /// Decode an MCMT witness such as `[t2][t17][t3_1]` into model steps.
    ExplainWitness {
        #[command(flatten)]
        common: Common,
        /// Witness text.
        witness: String,
        /// File emitted by `emit-mcmt`; its transitions must match the model.
        #[arg(long)]
        mcmt: Option<PathBuf>,
    },
    /// Compare the engine with bounded explicit-state search.
    CrossCheck {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        budgets: Budgets,
        /// Largest number of agents per template tried by the oracle.
        #[arg(long, default_value_t = 3)]
        max_count: usize,
        #[arg(long, default_value_t = 15)]
        oracle_depth: usize,
        #[arg(long, default_value_t = 4096)]
        max_interpretations: usize,
        /// Fix the relations instead of trying every interpretation.
        #[arg(long)]
        interp: Option<PathBuf>,
    },
}

/// Line-oriented `key: value` report on stdout.
struct Report(Vec<(String, String)>);

impl Report {
    fn new() -> Self {
        Report(Vec::new())
    }

    fn put(&mut self, k: &str, v: impl ToString) {
        self.0.push((k.to_string(), v.to_string()));
    }

    fn print(&self) {
        let mut out = std::io::stdout().lock();
        for (k, v) in &self.0 {
            let _ = writeln!(out, "{k}: {v}");
        }
    }
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Safe => 0,
        Verdict::Unsafe => 1,
        Verdict::Unknown(_) => 2,
    }
}

fn setup(c: &Common) -> Result<(Model, AbPmas, pmas_core::model::MFormula), InputError> {
    let m = input::load_model(&c.model)?;
    let f = input::goal(&m, c.goal.as_deref())?;
    let ab = encode(&m, c.semantics).map_err(|e| InputError::Other(e.to_string()))?;
    Ok((m, ab, f))
}

fn write_file(path: &Path, text: &str) -> Result<(), InputError> {
    std::fs::write(path, text).map_err(|source| InputError::Io { path: path.to_owned(), source })
}

fn put_trace(rep: &mut Report, m: &Model, ab: &AbPmas, trace: &[TraceStep]) {
    rep.put("witness", format_mcmt_witness(trace));
    for s in trace {
        rep.put("rule", format!("t{} {}", s.rule, s.label));
    }
    match extract_run_template(m, ab, trace) {
        Ok(steps) => {
            rep.put("run_steps", steps.len());
            for s in steps {
                rep.put("step", s.describe(m));
            }
        }
        Err(e) => eprintln!("warning: no run template: {e}"),
    }
}

fn trace_jsonl(r: &BreachReport) -> String {
    r.trace
        .iter()
        .enumerate()
        .map(|(i, s)| serde_json::json!({ "step": i, "rule": s.rule, "label": s.label }).to_string() + "\n")
        .collect()
}

fn check(common: &Common, budgets: &Budgets, trace_out: Option<&Path>) -> Result<u8, InputError> {
    let (m, ab, f) = setup(common)?;
    let g = encode_goal(&ab, &f).map_err(|e| InputError::Other(e.to_string()))?;
    let r = breach(&ab, &g, &budgets.options()).map_err(|e| InputError::Other(e.to_string()))?;
    let loc = check_locality(&ab, &g);
    let mut rep = Report::new();
    rep.put("model", common.model.display());
    rep.put("semantics", common.semantics);
    rep.put("verdict", r.verdict);
    rep.put("depth", r.depth);
    rep.put("cubes", r.cubes);
    if r.verdict == Verdict::Unsafe {
        rep.put("spurious_possible", r.spurious_possible);
        put_trace(&mut rep, &m, &ab, &r.trace);
    }
    rep.put("protocols_local", loc.protocols_local);
    rep.put("goal_local", loc.goal_local);
    rep.put("guaranteed_termination", loc.guaranteed_termination);
    for o in &loc.offending {
        rep.put("non_local", o);
    }
    rep.print();
    eprintln!("elapsed: {} ms", r.elapsed_ms);
    if let Some(p) = trace_out {
        write_file(p, &trace_jsonl(&r))?;
    }
    Ok(verdict_code(r.verdict))
}

fn encode_summary(common: &Common) -> Result<u8, InputError> {
    let (_, ab, _) = setup(common)?;
    let mut rep = Report::new();
    rep.put("semantics", ab.semantics);
    rep.put("index_sorts", ab.arrays.iter().flatten().count());
    rep.put("arrays", ab.sig.num_arrays());
    rep.put("globals", ab.sig.num_globals());
    rep.put("rules", ab.rules.len());
    for (i, r) in ab.rules.iter().enumerate() {
        rep.put("rule", format!("t{i} {} vars={} uguards={}", r.label, r.vars.len(), r.uguards.len()));
    }
    for (from, label, to) in ab.phase_graph() {
        rep.put("phase_edge", format!("{} -> {} by {label}", ab.sig.const_name(from), ab.sig.const_name(to)));
    }
    rep.print();
    Ok(0)
}

fn emit(common: &Common, out: Option<&Path>) -> Result<u8, InputError> {
    let (_, ab, f) = setup(common)?;
    let g = encode_goal(&ab, &f).map_err(|e| InputError::Other(e.to_string()))?;
    let text = emit_mcmt(&ab, &g).map_err(|e| InputError::Other(e.to_string()))?;
    match out {
        Some(p) => {
            write_file(p, &text)?;
            let mut rep = Report::new();
            rep.put("out", p.display());
            rep.put("transitions", ab.rules.len());
            rep.print();
        }
        None => print!("{text}"),
    }
    Ok(0)
}

fn oracle(common: &Common, counts: Option<&str>, interp: Option<&Path>, opts: OracleOptions) -> Result<u8, InputError> {
    let (m, _, f) = setup(common)?;
    let counts = input::counts(&m, counts)?;
    let i0 = input::interpretation(&m, interp)?;
    let r = enumerate_reachable(&m, common.semantics, &counts, &i0, &f, &opts);
    let mut rep = Report::new();
    rep.put("counts", input::show_counts(&m, &counts));
    rep.put("interpretation", input::show_interpretation(&m, &i0));
    rep.put("reached", r.reached());
    rep.put("states", r.states);
    rep.put("truncated", r.truncated);
    if let Some(path) = &r.path {
        rep.put("run_steps", path.len());
        for s in path {
            rep.put("step", s.describe(&m));
        }
    }
    rep.print();
    Ok(match (r.reached(), r.truncated) {
        (true, _) => 1,
        (false, false) => 0,
        (false, true) => 2,
    })
}

/// Transition labels of an emitted file, in order.
fn mcmt_labels(text: &str) -> Vec<&str> {
    text.lines().filter_map(|l| l.strip_prefix(":comment ")).collect()
}

fn explain_witness(common: &Common, witness: &str, mcmt: Option<&Path>) -> Result<u8, InputError> {
    let (m, ab, _) = setup(common)?;
    if let Some(p) = mcmt {
        let text = input::read(p)?;
        let labels = mcmt_labels(&text);
        let ours: Vec<&str> = ab.rules.iter().map(|r| r.label.as_str()).collect();
        if labels != ours {
            return Err(InputError::Other(format!(
                "{}: transitions do not match the encoding of {} under {} semantics",
                p.display(),
                common.model.display(),
                common.semantics
            )));
        }
    }
    let toks = parse_mcmt_witness(witness).map_err(|e| InputError::Other(format!("witness: {e}")))?;
    let trace = explain(&ab, &toks).map_err(|e| InputError::Other(format!("witness: {e}")))?;
    let mut rep = Report::new();
    rep.put("tokens", toks.len());
    put_trace(&mut rep, &m, &ab, &trace);
    rep.print();
    Ok(0)
}

fn cross(common: &Common, opts: CrossCheckOptions, interp: Option<&Path>) -> Result<u8, InputError> {
    let m = input::load_model(&common.model)?;
    let f = input::goal(&m, common.goal.as_deref())?;
    let cc = match interp {
        None => cross_check(&m, common.semantics, &f, &opts).map_err(|e| InputError::Other(e.to_string()))?,
        Some(p) => {
            let i0 = input::interpretation(&m, Some(p))?;
            let (_, ab, _) = setup(common)?;
            let g = encode_goal(&ab, &f).map_err(|e| InputError::Other(e.to_string()))?;
            let engine = breach(&ab, &g, &opts.breach).map_err(|e| InputError::Other(e.to_string()))?;
            let counts = count_vectors(&m, opts.max_count);
            let oracle = oracle_search(&m, common.semantics, &f, &counts, &[i0], &opts.oracle);
            let agreement = compare(engine.verdict, oracle.as_ref());
            CrossCheck { engine, oracle, agreement }
        }
    };
    let mut rep = Report::new();
    rep.put("semantics", common.semantics);
    rep.put("verdict", cc.engine.verdict);
    rep.put("depth", cc.engine.depth);
    rep.put("oracle_reached", cc.oracle.is_some());
    if let Some(h) = &cc.oracle {
        rep.put("oracle_counts", input::show_counts(&m, &h.counts));
        rep.put("oracle_interpretation", input::show_interpretation(&m, &h.interpretation));
        for s in &h.path {
            rep.put("step", s.describe(&m));
        }
    }
    rep.put("agreement", cc.agreement);
    rep.print();
    Ok(verdict_code(cc.engine.verdict))
}

fn run(cli: Cli) -> Result<u8, InputError> {
    match cli.command {
        Command::Check { common, budgets, trace_out } => check(&common, &budgets, trace_out.as_deref()),
        Command::Encode { common } => encode_summary(&common),
        Command::EmitMcmt { common, out } => emit(&common, out.as_deref()),
        Command::Oracle { common, counts, interp, max_depth, max_states } => {
            oracle(&common, counts.as_deref(), interp.as_deref(), OracleOptions { max_depth, max_states })
        }
        Command::ExplainWitness { common, witness, mcmt } => explain_witness(&common, &witness, mcmt.as_deref()),
        Command::CrossCheck { common, budgets, max_count, oracle_depth, max_interpretations, interp } => cross(
            &common,
            CrossCheckOptions {
                breach: budgets.options(),
                oracle: OracleOptions { max_depth: oracle_depth, ..Default::default() },
                max_count,
                max_interpretations,
            },
            interp.as_deref(),
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
