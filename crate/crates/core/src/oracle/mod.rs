//! Explicit-state exploration of concrete instances, used to validate
//! verdicts of the symbolic engine.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;

use crate::encoder::Semantics;
use crate::engine::{RunStep, RunStepKind};
use crate::model::{eval_agent_formula, ActionKind, MFormula, Model, RelInterpretation, Snapshot, Who};

/// A concrete global state: the snapshot plus whose turn it is.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct State {
    pub snap: Snapshot,
    pub turn: Option<u8>,
}

impl State {
    pub fn initial(m: &Model, counts: &[usize]) -> State {
        State { snap: Snapshot::initial(m, counts), turn: m.groups.as_ref().map(|_| 0) }
    }

    /// Agents are interchangeable within a template, so states that only
    /// differ by a permutation of ids share a key.
    fn key(&self) -> (Vec<Vec<Vec<u16>>>, Vec<u16>, Option<u8>) {
        let agents = self
            .snap
            .agents
            .iter()
            .map(|a| {
                let mut v: Vec<Vec<u16>> = a.iter().map(|x| x.vals.clone()).collect();
                v.sort();
                v
            })
            .collect();
        (agents, self.snap.env.clone(), self.turn)
    }
}

pub struct Stepper<'a> {
    pub m: &'a Model,
    pub semantics: Semantics,
    pub i0: &'a RelInterpretation,
}

type Choice = (Who, usize);

impl Stepper<'_> {
    fn enabled(&self, s: &State, who: Who, t: usize, a: usize) -> bool {
        eval_agent_formula(self.m, &s.snap, self.i0, &self.m.templates[t].actions[a].pre, Some(who))
    }

    fn in_turn(&self, s: &State, group: Option<u8>) -> bool {
        match (s.turn, group) {
            (Some(cur), Some(g)) => cur == g,
            _ => true,
        }
    }

    fn toggle(&self, s: &State) -> Option<u8> {
        s.turn.map(|g| 1 - g)
    }

    /// Apply the effects of the chosen (agent, action) pairs, all read
    /// from the pre-state.
    fn apply(&self, s: &State, choices: &[Choice]) -> State {
        let mut next = s.clone();
        for &(who, a) in choices {
            match who {
                Who::Env => {
                    for &(v, c) in &self.m.templates[self.m.env].actions[a].eff {
                        next.snap.env[v] = c;
                    }
                }
                Who::Agent(t, k) => {
                    for &(v, c) in &self.m.templates[t].actions[a].eff {
                        next.snap.agents[t][k].vals[v] = c;
                    }
                }
            }
        }
        next.turn = self.toggle(s);
        next
    }

    fn label(&self, kind: RunStepKind, choices: &[Choice]) -> RunStep {
        let actions = choices
            .iter()
            .map(|&(who, a)| {
                let t = match who {
                    Who::Env => self.m.env,
                    Who::Agent(t, _) => t,
                };
                (t, self.m.templates[t].actions[a].name.clone())
            })
            .collect();
        RunStep { kind, actions }
    }

    fn members(&self, s: &State, t: usize) -> Vec<Who> {
        if t == self.m.env {
            vec![Who::Env]
        } else {
            (0..s.snap.agents[t].len()).map(|k| Who::Agent(t, k)).collect()
        }
    }

    fn local_steps(&self, s: &State, out: &mut Vec<(RunStep, State)>) {
        // per acting participant: the local actions it may take
        let mut options: Vec<(Who, Vec<usize>)> = Vec::new();
        for (t, tm) in self.m.templates.iter().enumerate() {
            if !self.in_turn(s, self.m.group(t)) {
                continue;
            }
            for who in self.members(s, t) {
                let acts: Vec<usize> = (0..tm.actions.len())
                    .filter(|&a| tm.actions[a].kind == ActionKind::Local && self.enabled(s, who, t, a))
                    .collect();
                if !acts.is_empty() {
                    options.push((who, acts));
                }
            }
        }
        let forced = self.semantics == Semantics::Concurrent;
        let mut cur: Vec<Choice> = Vec::new();
        fn go(st: &Stepper<'_>, s: &State, opts: &[(Who, Vec<usize>)], forced: bool, cur: &mut Vec<Choice>, out: &mut Vec<(RunStep, State)>) {
            let Some(((who, acts), rest)) = opts.split_first() else {
                if !cur.is_empty() {
                    out.push((st.label(RunStepKind::Local, cur), st.apply(s, cur)));
                }
                return;
            };
            if !forced {
                go(st, s, rest, forced, cur, out);
            }
            for &a in acts {
                cur.push((*who, a));
                go(st, s, rest, forced, cur, out);
                cur.pop();
            }
        }
        go(self, s, &options, forced, &mut cur, out);
    }

    fn sync_steps(&self, s: &State, out: &mut Vec<(RunStep, State)>) {
        for sa in &self.m.sync {
            if !self.in_turn(s, self.m.sync_group(sa)) || !self.enabled(s, Who::Env, self.m.env, sa.env_action) {
                continue;
            }
            let able: Vec<Choice> = sa
                .participants
                .iter()
                .flat_map(|&(t, a)| self.members(s, t).into_iter().map(move |w| (w, a, t)))
                .filter(|&(w, a, t)| self.enabled(s, w, t, a))
                .map(|(w, a, _)| (w, a))
                .collect();
            if able.is_empty() {
                continue;
            }
            let env = (Who::Env, sa.env_action);
            match sa.kind {
                ActionKind::Individual => {
                    for &c in &able {
                        let ch = [env, c];
                        out.push((self.label(RunStepKind::Individual, &ch), self.apply(s, &ch)));
                    }
                }
                ActionKind::Sync if self.semantics == Semantics::Concurrent => {
                    let mut ch = vec![env];
                    ch.extend(&able);
                    out.push((self.label(RunStepKind::Sync, &ch), self.apply(s, &ch)));
                }
                ActionKind::Sync => {
                    for mask in 1u64..(1u64 << able.len()) {
                        let mut ch = vec![env];
                        ch.extend((0..able.len()).filter(|i| mask >> i & 1 == 1).map(|i| able[i]));
                        out.push((self.label(RunStepKind::Sync, &ch), self.apply(s, &ch)));
                    }
                }
                ActionKind::Local => unreachable!(),
            }
        }
    }

    /// Every global step available in `s`, labelled with the action set
    /// taken.
    pub fn successors(&self, s: &State) -> Vec<(RunStep, State)> {
        let mut out = Vec::new();
        self.local_steps(s, &mut out);
        self.sync_steps(s, &mut out);
        out
    }
}

#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    pub max_depth: usize,
    pub max_states: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { max_depth: 15, max_states: 200_000 }
    }
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    /// Steps from the initial state to a goal state, if one was found.
    pub path: Option<Vec<RunStep>>,
    pub states: usize,
    /// The state cap stopped exploration before the depth bound.
    pub truncated: bool,
}

impl OracleResult {
    pub fn reached(&self) -> bool {
        self.path.is_some()
    }
}

/// Breadth-first search up to `max_depth` global steps for a state that
/// satisfies `goal`.
pub fn enumerate_reachable(
    m: &Model,
    semantics: Semantics,
    counts: &[usize],
    i0: &RelInterpretation,
    goal: &MFormula,
    opts: &OracleOptions,
) -> OracleResult {
    let st = Stepper { m, semantics, i0 };
    let init = State::initial(m, counts);
    let mut seen: HashMap<_, usize> = HashMap::new();
    let mut nodes: Vec<(State, Option<(usize, RunStep)>)> = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(init.key(), 0);
    nodes.push((init, None));
    queue.push_back((0usize, 0usize));
    let path_to = |nodes: &Vec<(State, Option<(usize, RunStep)>)>, mut i: usize| {
        let mut p = Vec::new();
        while let Some((parent, step)) = &nodes[i].1 {
            p.push(step.clone());
            i = *parent;
        }
        p.reverse();
        p
    };
    let mut truncated = false;
    while let Some((i, d)) = queue.pop_front() {
        if eval_agent_formula(m, &nodes[i].0.snap, i0, goal, None) {
            return OracleResult { path: Some(path_to(&nodes, i)), states: nodes.len(), truncated };
        }
        if d == opts.max_depth {
            continue;
        }
        for (step, next) in st.successors(&nodes[i].0) {
            let k = next.key();
            if seen.contains_key(&k) {
                continue;
            }
            if nodes.len() >= opts.max_states {
                truncated = true;
                continue;
            }
            seen.insert(k, nodes.len());
            nodes.push((next, Some((i, step))));
            queue.push_back((nodes.len() - 1, d + 1));
        }
    }
    OracleResult { path: None, states: nodes.len(), truncated }
}

/// Whether some concrete run follows `steps` exactly (step by step, same
/// kind and action set) and ends in a goal state. Returns the states of one
/// such run.
pub fn replay_run_template(
    m: &Model,
    semantics: Semantics,
    counts: &[usize],
    i0: &RelInterpretation,
    goal: &MFormula,
    steps: &[RunStep],
) -> Option<Vec<State>> {
    let st = Stepper { m, semantics, i0 };
    let mut layer: Vec<Vec<State>> = vec![vec![State::initial(m, counts)]];
    for want in steps {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for run in &layer {
            for (step, s) in st.successors(run.last().unwrap()) {
                if step == *want && seen.insert(s.key()) {
                    let mut r = run.clone();
                    r.push(s);
                    next.push(r);
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        layer = next;
    }
    layer.into_iter().find(|run| eval_agent_formula(m, &run.last().unwrap().snap, i0, goal, None))
}

/// All interpretations of the relations, or `None` when there would be more
/// than `limit`.
pub fn interpretations(m: &Model, limit: usize) -> Option<Vec<RelInterpretation>> {
    let mut spaces: Vec<Vec<Vec<u16>>> = Vec::new();
    for r in &m.rels {
        let mut tuples: Vec<Vec<u16>> = vec![Vec::new()];
        for &s in &r.args {
            let n = m.sorts[s].values.len() as u16;
            tuples = tuples.into_iter().flat_map(|t| (0..n).map(move |v| [t.clone(), vec![v]].concat())).collect();
        }
        spaces.push(tuples);
    }
    let bits: usize = spaces.iter().map(Vec::len).sum();
    if bits >= usize::BITS as usize || (1usize << bits) > limit {
        return None;
    }
    let mut out = Vec::with_capacity(1 << bits);
    for mask in 0..(1usize << bits) {
        let mut i0 = RelInterpretation::empty(m);
        let mut b = 0;
        for (r, space) in spaces.iter().enumerate() {
            for t in space {
                if mask >> b & 1 == 1 {
                    i0.tuples[r].insert(t.clone());
                }
                b += 1;
            }
        }
        out.push(i0);
    }
    Some(out)
}

/// All count vectors giving each agent template between 1 and `max`
/// agents.
pub fn count_vectors(m: &Model, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0; m.templates.len()]];
    for t in m.agent_templates() {
        out = out
            .into_iter()
            .flat_map(|c| {
                (1..=max).map(move |k| {
                    let mut c = c.clone();
                    c[t] = k;
                    c
                })
            })
            .collect();
    }
    out
}

/// A goal state found by the oracle.
#[derive(Clone, Debug)]
pub struct OracleHit {
    pub counts: Vec<usize>,
    pub interpretation: RelInterpretation,
    pub path: Vec<RunStep>,
}

/// Search every count vector and interpretation in parallel, stopping at
/// the first goal state found.
pub fn oracle_search(
    m: &Model,
    semantics: Semantics,
    goal: &MFormula,
    counts: &[Vec<usize>],
    interps: &[RelInterpretation],
    opts: &OracleOptions,
) -> Option<OracleHit> {
    let jobs: Vec<(&Vec<usize>, &RelInterpretation)> =
        counts.iter().flat_map(|c| interps.iter().map(move |i| (c, i))).collect();
    jobs.par_iter().find_map_any(|&(c, i0)| {
        enumerate_reachable(m, semantics, c, i0, goal, opts)
            .path
            .map(|path| OracleHit { counts: c.clone(), interpretation: i0.clone(), path })
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Agreement {
    Agree,
    EngineSafeOracleReached,
    EngineUnsafeOracleSilent,
    EngineUnknown,
}

impl std::fmt::Display for Agreement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Agreement::Agree => "agree",
            Agreement::EngineSafeOracleReached => "engine-safe-oracle-reached",
            Agreement::EngineUnsafeOracleSilent => "engine-unsafe-oracle-silent",
            Agreement::EngineUnknown => "engine-unknown",
        })
    }
}

pub fn compare(verdict: crate::engine::Verdict, hit: Option<&OracleHit>) -> Agreement {
    use crate::engine::Verdict::*;
    match (verdict, hit) {
        (Safe, None) | (Unsafe, Some(_)) => Agreement::Agree,
        (Safe, Some(_)) => Agreement::EngineSafeOracleReached,
        (Unsafe, None) => Agreement::EngineUnsafeOracleSilent,
        (Unknown(_), _) => Agreement::EngineUnknown,
    }
}

#[derive(Clone, Debug)]
pub struct CrossCheck {
    pub engine: crate::engine::BreachReport,
    pub oracle: Option<OracleHit>,
    pub agreement: Agreement,
}

#[derive(Clone, Debug)]
pub struct CrossCheckOptions {
    pub breach: crate::engine::BreachOptions,
    pub oracle: OracleOptions,
    pub max_count: usize,
    pub max_interpretations: usize,
}

impl Default for CrossCheckOptions {
    fn default() -> Self {
        CrossCheckOptions {
            breach: Default::default(),
            oracle: Default::default(),
            max_count: 3,
            max_interpretations: 1 << 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CrossCheckError {
    #[error(transparent)]
    Encode(#[from] crate::encoder::EncodeError),
    #[error(transparent)]
    Logic(#[from] crate::logic::LogicError),
    #[error("more than {0} relation interpretations")]
    TooManyInterpretations(usize),
}

/// Run the engine and the oracle on the same model and goal and classify
/// the outcome.
pub fn cross_check(m: &Model, semantics: Semantics, goal: &MFormula, opts: &CrossCheckOptions) -> Result<CrossCheck, CrossCheckError> {
    let ab = crate::encoder::encode(m, semantics)?;
    let g = crate::encoder::encode_goal(&ab, goal)?;
    let engine = crate::engine::breach(&ab, &g, &opts.breach)?;
    let interps = interpretations(m, opts.max_interpretations)
        .ok_or(CrossCheckError::TooManyInterpretations(opts.max_interpretations))?;
    let oracle = oracle_search(m, semantics, goal, &count_vectors(m, opts.max_count), &interps, &opts.oracle);
    let agreement = compare(engine.verdict, oracle.as_ref());
    Ok(CrossCheck { engine, oracle, agreement })
}
