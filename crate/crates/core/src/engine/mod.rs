//! Backward reachability over the encoded system.

mod locality;
mod preimage;
mod template;

use std::fmt;
use std::time::Instant;

use crate::encoder::{AbPmas, Semantics};
use crate::logic::euf::sat_lits;
use crate::logic::{entails_cube, Budget, Cube, Lit, LogicError, StateFormula, Term};

pub use locality::{check_locality, LocalityReport};
pub use preimage::preimage;
pub use template::{extract_run_template, RunStep, RunStepKind, TemplateError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnknownReason {
    Depth,
    CubeBudget,
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnknownReason::Depth => "depth",
            UnknownReason::CubeBudget => "cube-budget",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Safe,
    Unsafe,
    Unknown(UnknownReason),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Safe => f.write_str("SAFE"),
            Verdict::Unsafe => f.write_str("UNSAFE"),
            Verdict::Unknown(r) => write!(f, "UNKNOWN({r})"),
        }
    }
}

/// One rule application of a counterexample, in forward order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: usize,
    pub label: String,
}

#[derive(Clone, Copy, Debug)]
pub struct BreachOptions {
    pub max_depth: usize,
    pub max_cubes: usize,
}

impl Default for BreachOptions {
    fn default() -> Self {
        BreachOptions { max_depth: 200, max_cubes: 100_000 }
    }
}

#[derive(Clone, Debug)]
pub struct BreachReport {
    pub verdict: Verdict,
    /// Number of preimage layers computed.
    pub depth: usize,
    /// Cubes kept in the explored set.
    pub cubes: usize,
    pub trace: Vec<TraceStep>,
    /// The run may not exist in the model: set for concurrent encodings,
    /// whose universal guards are over-approximated.
    pub spurious_possible: bool,
    pub elapsed_ms: u128,
}

struct Node {
    cube: Cube,
    /// Producing rule and parent node; `None` for goal cubes.
    from: Option<(usize, usize)>,
}

/// Whether some initial state satisfies the cube.
pub fn meets_init(ab: &AbPmas, c: &Cube) -> bool {
    let lits: Vec<Lit> = c
        .lits
        .iter()
        .map(|l| Lit::new(l.atom.map_terms(&mut |t| Term::Const(ab.init_value(t).unwrap())), l.pos))
        .collect();
    sat_lits(&lits)
}

fn var_profile(c: &Cube) -> Vec<(u32, usize)> {
    let mut p: Vec<(u32, usize)> = Vec::new();
    for v in &c.vars {
        match p.iter_mut().find(|(s, _)| *s == v.sort.0) {
            Some(e) => e.1 += 1,
            None => p.push((v.sort.0, 1)),
        }
    }
    p
}

fn fits(small: &[(u32, usize)], big: &[(u32, usize)]) -> bool {
    small.iter().all(|(s, n)| big.iter().any(|(t, m)| s == t && n <= m))
}

/// Explored set with a cheap prefilter in front of the semantic
/// entailment check.
struct Explored {
    nodes: Vec<Node>,
    profiles: Vec<Vec<(u32, usize)>>,
}

impl Explored {
    fn covers(&self, c: &Cube, budget: &mut Budget) -> Result<bool, LogicError> {
        let prof = var_profile(c);
        let mut cands: Vec<&Cube> = Vec::new();
        for (n, p) in self.nodes.iter().zip(&self.profiles) {
            if !fits(p, &prof) {
                continue;
            }
            let d = &n.cube;
            if d.vars.len() == c.vars.len() && d.lits.iter().all(|l| c.lits.binary_search(l).is_ok()) {
                return Ok(true);
            }
            cands.push(d);
        }
        if cands.is_empty() {
            return Ok(false);
        }
        entails_cube(c, &cands, budget)
    }

    fn push(&mut self, n: Node) -> usize {
        self.profiles.push(var_profile(&n.cube));
        self.nodes.push(n);
        self.nodes.len() - 1
    }
}

fn trace_from(ab: &AbPmas, ex: &Explored, mut at: usize) -> Vec<TraceStep> {
    let mut out = Vec::new();
    while let Some((rule, parent)) = ex.nodes[at].from {
        out.push(TraceStep { rule, label: ab.rules[rule].label.clone() });
        at = parent;
    }
    out
}

/// Layered backward reachability from the goal. Each layer holds the
/// preimages of the previous one that the explored set does not already
/// cover; an empty layer is a fixpoint.
pub fn breach(ab: &AbPmas, goal: &StateFormula, opts: &BreachOptions) -> Result<BreachReport, LogicError> {
    let start = Instant::now();
    let spurious_possible = ab.semantics == Semantics::Concurrent;
    let mut ex = Explored { nodes: Vec::new(), profiles: Vec::new() };
    let mut budget = Budget::unlimited();
    let report = |verdict, depth, ex: &Explored, trace| BreachReport {
        verdict,
        depth,
        cubes: ex.nodes.len(),
        trace,
        spurious_possible: spurious_possible && verdict == Verdict::Unsafe,
        elapsed_ms: start.elapsed().as_millis(),
    };
    let mut frontier = Vec::new();
    for c in &goal.cubes {
        let Some(c) = preimage::close_domains(&ab.sig, c) else { continue };
        if !sat_lits(&c.lits) || ex.covers(&c, &mut budget)? {
            continue;
        }
        frontier.push(ex.push(Node { cube: c, from: None }));
    }
    let mut depth = 0;
    loop {
        for &i in &frontier {
            if meets_init(ab, &ex.nodes[i].cube) {
                let trace = trace_from(ab, &ex, i);
                return Ok(report(Verdict::Unsafe, depth, &ex, trace));
            }
        }
        if frontier.is_empty() {
            return Ok(report(Verdict::Safe, depth, &ex, Vec::new()));
        }
        if depth == opts.max_depth {
            return Ok(report(Verdict::Unknown(UnknownReason::Depth), depth, &ex, Vec::new()));
        }
        depth += 1;
        let mut next = Vec::new();
        for &i in &frontier {
            for (ri, rule) in ab.rules.iter().enumerate() {
                let pre = match preimage(&ab.sig, rule, &ex.nodes[i].cube, &mut budget) {
                    Ok(p) => p,
                    Err(LogicError::Budget { .. }) => {
                        return Ok(report(Verdict::Unknown(UnknownReason::CubeBudget), depth, &ex, Vec::new()))
                    }
                    Err(e) => return Err(e),
                };
                for p in pre {
                    if ex.covers(&p, &mut budget)? {
                        continue;
                    }
                    next.push(ex.push(Node { cube: p, from: Some((ri, i)) }));
                    if ex.nodes.len() > opts.max_cubes {
                        return Ok(report(Verdict::Unknown(UnknownReason::CubeBudget), depth, &ex, Vec::new()));
                    }
                }
            }
        }
        frontier = next;
    }
}
