//! Translation of a validated model into an array-based transition system.

mod goal;
mod rules;
mod translate;

use std::fmt;

use thiserror::Error;

use crate::logic::{
    ArrayId, ConstId, Formula, GlobalId, IVar, LogicError, Lit, RelId, Signature, SortId, SortKind, StateFormula,
};
use crate::model::Model;

pub use goal::encode_goal;
pub use translate::{translate_agent_formula, Translated};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Semantics {
    Interleaved,
    Concurrent,
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::Interleaved => "interleaved",
            Semantics::Concurrent => "concurrent",
        })
    }
}

impl std::str::FromStr for Semantics {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "interleaved" => Ok(Semantics::Interleaved),
            "concurrent" => Ok(Semantics::Concurrent),
            _ => Err(format!("unknown semantics `{s}` (expected interleaved or concurrent)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("name clash in encoding: {0}")]
    Clash(String),
    #[error("goal may not mention `self`")]
    SelfInGoal,
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// Which step of the phase progression a rule implements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StepKind {
    Declare,
    BulkLocal,
    GateLocal,
    SyncStart,
    SyncJoin,
    GateSync,
    SyncCommit,
    Individual,
}

impl StepKind {
    /// Rules of this kind finish a global step of the model.
    pub fn completes_step(self) -> bool {
        matches!(self, StepKind::BulkLocal | StepKind::SyncCommit | StepKind::Individual)
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepKind::Declare => "declare",
            StepKind::BulkLocal => "bulk-local",
            StepKind::GateLocal => "gate-local",
            StepKind::SyncStart => "sync-start",
            StepKind::SyncJoin => "sync-join",
            StepKind::GateSync => "gate-sync",
            StepKind::SyncCommit => "sync-commit",
            StepKind::Individual => "individual",
        })
    }
}

/// `forall vars. cond`, kept un-instantiated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalGuard {
    pub vars: Vec<IVar>,
    pub cond: Formula,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BulkVal {
    Const(ConstId),
    Keep,
}

/// `array' = λ bound. case { guard_1: c_1; ...; else: default }`. Every
/// branch guard is a single literal over `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseFn {
    pub array: ArrayId,
    pub bound: IVar,
    pub branches: Vec<(Lit, ConstId)>,
    pub default: BulkVal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionRule {
    pub label: String,
    pub kind: StepKind,
    /// Model action committed or declared by the rule.
    pub action: Option<String>,
    /// Model template acting in the rule (the environment for its own
    /// declarations).
    pub template: Option<usize>,
    /// Existential index variables; the acting agent comes first.
    pub vars: Vec<IVar>,
    pub guard: Vec<Lit>,
    pub uguards: Vec<UniversalGuard>,
    pub global_updates: Vec<(GlobalId, ConstId)>,
    pub point_updates: Vec<(ArrayId, IVar, ConstId)>,
    pub bulk: Vec<CaseFn>,
}

impl TransitionRule {
    pub fn global_update(&self, g: GlobalId) -> Option<ConstId> {
        self.global_updates.iter().find(|(h, _)| *h == g).map(|(_, c)| *c)
    }

    pub fn bulk_update(&self, a: ArrayId) -> Option<&CaseFn> {
        self.bulk.iter().find(|c| c.array == a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateArrays {
    pub index: SortId,
    pub vars: Vec<ArrayId>,
    pub act: ArrayId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Phases {
    pub p0: ConstId,
    pub pl: ConstId,
    pub ps: ConstId,
    pub pl2: Option<ConstId>,
    pub ps2: Option<ConstId>,
}

/// An array-based system together with the bookkeeping needed to map it
/// back to the model.
#[derive(Clone, Debug)]
pub struct AbPmas {
    pub sig: Signature,
    pub semantics: Semantics,
    /// Per model template; `None` for the environment.
    pub arrays: Vec<Option<TemplateArrays>>,
    /// One global per environment variable.
    pub env_globals: Vec<GlobalId>,
    pub act_env: GlobalId,
    pub phase: GlobalId,
    pub turn: Option<GlobalId>,
    pub phases: Phases,
    pub turn_consts: Option<[ConstId; 2]>,
    pub nop: ConstId,
    pub action_sort: SortId,
    /// Action constants by name, in declaration order.
    pub actions: Vec<(String, ConstId)>,
    /// Element constant of each (model sort, value).
    pub values: Vec<Vec<ConstId>>,
    pub rels: Vec<RelId>,
    pub init_globals: Vec<ConstId>,
    pub init_arrays: Vec<ConstId>,
    pub rules: Vec<TransitionRule>,
}

impl AbPmas {
    pub fn action_const(&self, name: &str) -> Option<ConstId> {
        self.actions.iter().find(|(n, _)| n == name).map(|(_, c)| *c)
    }

    pub fn index_sort(&self, t: usize) -> Option<SortId> {
        self.arrays[t].as_ref().map(|a| a.index)
    }

    /// Template owning an index sort.
    pub fn template_of_sort(&self, s: SortId) -> Option<usize> {
        self.arrays.iter().position(|a| a.as_ref().is_some_and(|a| a.index == s))
    }

    /// Initial value of a term; arrays hold the same value at every index.
    pub fn init_value(&self, t: crate::logic::Term) -> Option<ConstId> {
        match t {
            crate::logic::Term::Global(g) => Some(self.init_globals[g.index()]),
            crate::logic::Term::Read(a, _) => Some(self.init_arrays[a.index()]),
            crate::logic::Term::Const(c) => Some(c),
        }
    }

    /// Distinct phase constants a rule may leave the system in.
    pub fn phase_constants(&self) -> Vec<ConstId> {
        let p = self.phases;
        [Some(p.p0), Some(p.pl), Some(p.ps), p.pl2, p.ps2].into_iter().flatten().collect()
    }

    /// Static phase graph: (from, rule label, to).
    pub fn phase_graph(&self) -> Vec<(ConstId, String, ConstId)> {
        let mut out = Vec::new();
        for r in &self.rules {
            let from = r
                .guard
                .iter()
                .find_map(|l| match (&l.atom, l.pos) {
                    (crate::logic::Atom::Eq(crate::logic::Term::Global(g), crate::logic::Term::Const(c)), true)
                        if *g == self.phase =>
                    {
                        Some(*c)
                    }
                    _ => None,
                })
                .unwrap_or(self.phases.p0);
            let to = r.global_update(self.phase).unwrap_or(from);
            out.push((from, r.label.clone(), to));
        }
        out
    }
}

/// Encode a model under the given semantics.
pub fn encode(m: &Model, semantics: Semantics) -> Result<AbPmas, EncodeError> {
    let mut sig = Signature::new();
    let clash = |e: LogicError| match e {
        LogicError::Duplicate(n) => EncodeError::Clash(n),
        other => EncodeError::Logic(other),
    };
    let action_sort = sig.add_sort("Action", SortKind::Action).map_err(clash)?;
    let phase_sort = sig.add_sort("PhaseSort", SortKind::Phase).map_err(clash)?;
    let mut elem_sorts = Vec::new();
    for s in &m.sorts {
        elem_sorts.push(sig.add_sort(&s.name, SortKind::Element).map_err(clash)?);
    }
    let turn_sort = match m.groups {
        Some(_) => Some(sig.add_sort("TurnSort", SortKind::Element).map_err(clash)?),
        None => None,
    };
    let mut rels = Vec::new();
    for r in &m.rels {
        rels.push(sig.add_rel(&r.name, r.args.iter().map(|&a| elem_sorts[a]).collect()).map_err(clash)?);
    }
    let mut actions: Vec<(String, ConstId)> = Vec::new();
    for t in &m.templates {
        for a in &t.actions {
            if !actions.iter().any(|(n, _)| n == &a.name) {
                actions.push((a.name.clone(), sig.add_const(action_sort, &a.name).map_err(clash)?));
            }
        }
    }
    let nop = sig.add_const(action_sort, "Nop_Action").map_err(clash)?;
    let mut values = Vec::new();
    for (i, s) in m.sorts.iter().enumerate() {
        let mut vs = Vec::new();
        for v in &s.values {
            vs.push(sig.add_const(elem_sorts[i], v).map_err(clash)?);
        }
        values.push(vs);
    }
    let concurrent = semantics == Semantics::Concurrent;
    let phases = Phases {
        p0: sig.add_const(phase_sort, "P0")?,
        pl: sig.add_const(phase_sort, "PL")?,
        ps: sig.add_const(phase_sort, "PS")?,
        pl2: if concurrent { Some(sig.add_const(phase_sort, "PL2")?) } else { None },
        ps2: if concurrent { Some(sig.add_const(phase_sort, "PS2")?) } else { None },
    };
    let turn_consts = match turn_sort {
        Some(s) => Some([sig.add_const(s, "turnG1")?, sig.add_const(s, "turnG2")?]),
        None => None,
    };

    let mut arrays = Vec::new();
    let mut init_arrays = Vec::new();
    for (ti, t) in m.templates.iter().enumerate() {
        if ti == m.env {
            arrays.push(None);
            continue;
        }
        let upper = t.name.to_uppercase();
        let index = sig.add_sort(&format!("Idx{}", t.name), SortKind::Index).map_err(clash)?;
        let mut vars = Vec::new();
        for v in &t.vars {
            vars.push(sig.add_array(&format!("{}{upper}", v.name), index, elem_sorts[v.sort]).map_err(clash)?);
            init_arrays.push(values[v.sort][v.init as usize]);
        }
        let act = sig.add_array(&format!("act{upper}"), index, action_sort).map_err(clash)?;
        init_arrays.push(nop);
        arrays.push(Some(TemplateArrays { index, vars, act }));
    }
    let mut env_globals = Vec::new();
    let mut init_globals = Vec::new();
    for v in &m.templates[m.env].vars {
        env_globals.push(sig.add_global(&v.name, elem_sorts[v.sort]).map_err(clash)?);
        init_globals.push(values[v.sort][v.init as usize]);
    }
    let act_env = sig.add_global("actEnv", action_sort).map_err(clash)?;
    init_globals.push(nop);
    let phase = sig.add_global("phase", phase_sort).map_err(clash)?;
    init_globals.push(phases.p0);
    let turn = match (turn_sort, turn_consts) {
        (Some(s), Some(tc)) => {
            let g = sig.add_global("turn", s).map_err(clash)?;
            init_globals.push(tc[0]);
            Some(g)
        }
        _ => None,
    };

    let mut ab = AbPmas {
        sig,
        semantics,
        arrays,
        env_globals,
        act_env,
        phase,
        turn,
        phases,
        turn_consts,
        nop,
        action_sort,
        actions,
        values,
        rels,
        init_globals,
        init_arrays,
        rules: Vec::new(),
    };
    ab.rules = rules::generate(m, &ab);
    Ok(ab)
}

pub fn encode_interleaved(m: &Model) -> Result<AbPmas, EncodeError> {
    encode(m, Semantics::Interleaved)
}

pub fn encode_concurrent(m: &Model) -> Result<AbPmas, EncodeError> {
    encode(m, Semantics::Concurrent)
}

/// Encode the model's own goal; a model without a goal yields false.
pub fn model_goal(m: &Model, ab: &AbPmas) -> Result<StateFormula, EncodeError> {
    match &m.goal {
        Some(g) => encode_goal(ab, g),
        None => Ok(StateFormula::bottom()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Show;
    use crate::model::parse_pmas;

    fn model(src: &str) -> Model {
        Model::new(&parse_pmas(src).unwrap()).unwrap()
    }

    fn cannon() -> Model {
        model(include_str!("../../fixtures/cannon.pmas"))
    }

    fn guard_text(ab: &AbPmas, r: &TransitionRule) -> Vec<String> {
        r.guard.iter().map(|l| Show(&ab.sig, l).to_string()).collect()
    }

    #[test]
    fn one_local_action_and_idle_environment_give_three_rules() {
        let m = model(
            "sort S { a, b }
             template E env { }
             template T { var v: S = a  action m : local { pre: v[self] = a; eff: v := b } }",
        );
        let ab = encode_interleaved(&m).unwrap();
        let labels: Vec<&str> = ab.rules.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels, ["declare:P0:m:T", "declare:PL:m:T", "bulk-local:idle"]);
    }

    #[test]
    fn cannon_declare_rule_for_gotob() {
        let ab = encode_interleaved(&cannon()).unwrap();
        let r = ab.rules.iter().find(|r| r.label == "declare:P0:gotoB:Att").unwrap();
        let g = guard_text(&ab, r);
        for want in ["phase = P0", "actATT[z0] = Nop_Action", "locATT[z0] = init", "destroyedATT[z0] = FALSE", "pulseLoc != B", "not Snow(init, B)", "turn = turnG2"] {
            assert!(g.iter().any(|l| l == want), "missing {want} in {g:?}");
        }
    }

    #[test]
    fn cannon_bulk_rule_has_four_branches_for_loc() {
        let ab = encode_interleaved(&cannon()).unwrap();
        let r = ab.rules.iter().find(|r| r.label == "bulk-local:pulseA").unwrap();
        let loc = ab.sig.array_by_name("locATT").unwrap();
        assert_eq!(r.bulk_update(loc).unwrap().branches.len(), 4);
        assert!(r.global_update(ab.turn.unwrap()).is_some());
    }

    #[test]
    fn concurrent_adds_gates_with_universal_guards() {
        let ab = encode_concurrent(&cannon()).unwrap();
        let gates: Vec<&TransitionRule> =
            ab.rules.iter().filter(|r| matches!(r.kind, StepKind::GateLocal | StepKind::GateSync)).collect();
        assert!(!gates.is_empty());
        assert!(gates.iter().all(|r| !r.uguards.is_empty()));
        let inter = encode_interleaved(&cannon()).unwrap();
        assert!(inter.rules.iter().all(|r| r.uguards.is_empty()));
    }

    #[test]
    fn individual_actions_fuse_into_one_rule() {
        let m = model(include_str!("../../fixtures/trains.pmas"));
        let ab = encode_interleaved(&m).unwrap();
        let ind: Vec<&str> =
            ab.rules.iter().filter(|r| r.kind == StepKind::Individual).map(|r| r.label.as_str()).collect();
        assert_eq!(
            ind,
            ["individual:p_enter:PTrain", "individual:p_exit:PTrain", "individual:n_enter:NTrain", "individual:n_exit:NTrain"]
        );
        let r = ab.rules.iter().find(|r| r.label == "individual:p_enter:PTrain").unwrap();
        assert!(r.global_update(ab.phase).is_none());
        assert_eq!(r.point_updates.len(), 1);
    }

    #[test]
    fn labels_are_deterministic() {
        let a = encode_interleaved(&cannon()).unwrap();
        let b = encode_interleaved(&cannon()).unwrap();
        assert_eq!(a.rules, b.rules);
    }
}
