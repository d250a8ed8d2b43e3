use std::collections::HashMap;

use super::ast::*;
use super::diag::Diagnostic;
use super::validate::validate_pmas;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MSort {
    pub name: String,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MRel {
    pub name: String,
    pub args: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MVar {
    pub name: String,
    pub sort: usize,
    pub init: u16,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MAction {
    pub name: String,
    pub kind: ActionKind,
    pub initiator: bool,
    pub pre: MFormula,
    pub eff: Vec<(usize, u16)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MTemplate {
    pub name: String,
    pub is_env: bool,
    pub vars: Vec<MVar>,
    pub actions: Vec<MAction>,
}

impl MTemplate {
    pub fn action(&self, name: &str) -> Option<usize> {
        self.actions.iter().position(|a| a.name == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MIdx {
    SelfId,
    Env,
    Var(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MTerm {
    Read { tmpl: usize, var: usize, idx: MIdx },
    Const { sort: usize, value: u16 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MF {
    True,
    False,
    Eq(MTerm, MTerm),
    Rel(usize, Vec<MTerm>),
    IdxEq(MIdx, MIdx),
    Not(Box<MF>),
    And(Vec<MF>),
    Or(Vec<MF>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MIVar {
    pub name: String,
    /// The template whose ids the variable ranges over; `None` when the
    /// variable never indexes a read and so ranges over every id.
    pub template: Option<usize>,
}

/// Agent formula with resolved symbols and numbered index variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MFormula {
    pub ivars: Vec<MIVar>,
    pub body: MF,
}

/// A synchronisation event: the environment's declaration plus every
/// agent template that takes part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyncAction {
    pub name: String,
    pub kind: ActionKind,
    pub env_action: usize,
    pub participants: Vec<(usize, usize)>,
    pub initiator: Option<usize>,
}

/// A validated model with every name resolved to an index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub sorts: Vec<MSort>,
    pub rels: Vec<MRel>,
    pub templates: Vec<MTemplate>,
    pub env: usize,
    /// Turn group (0 or 1) of each template when alternation is declared.
    pub groups: Option<Vec<u8>>,
    pub sync: Vec<SyncAction>,
    pub goal: Option<MFormula>,
    pub source: Pmas,
}

struct Names {
    sorts: HashMap<String, usize>,
    consts: HashMap<String, (usize, u16)>,
    rels: HashMap<String, usize>,
    vars: HashMap<String, (usize, usize)>,
}

impl Names {
    fn new(p: &Pmas) -> Self {
        let sorts = p.sorts.iter().enumerate().map(|(i, s)| (s.name.clone(), i)).collect();
        let consts = p
            .sorts
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.values.iter().enumerate().map(move |(k, v)| (v.clone(), (i, k as u16))))
            .collect();
        let rels = p.relations.iter().enumerate().map(|(i, r)| (r.name.clone(), i)).collect();
        let vars = p
            .templates
            .iter()
            .enumerate()
            .flat_map(|(t, tm)| tm.vars.iter().enumerate().map(move |(v, d)| (d.name.clone(), (t, v))))
            .collect();
        Names { sorts, consts, rels, vars }
    }

    fn formula(&self, f: &AgentFormula) -> MFormula {
        let mut ivars: Vec<MIVar> = Vec::new();
        let body = self.body(f, &mut ivars);
        MFormula { ivars, body }
    }

    fn idx(&self, i: &IndexTerm, ivars: &mut Vec<MIVar>, tmpl: Option<usize>) -> MIdx {
        match i {
            IndexTerm::SelfId => MIdx::SelfId,
            IndexTerm::Env => MIdx::Env,
            IndexTerm::Var(name) => {
                let k = match ivars.iter().position(|v| &v.name == name) {
                    Some(k) => k,
                    None => {
                        ivars.push(MIVar { name: name.clone(), template: None });
                        ivars.len() - 1
                    }
                };
                if tmpl.is_some() && ivars[k].template.is_none() {
                    ivars[k].template = tmpl;
                }
                MIdx::Var(k)
            }
        }
    }

    fn term(&self, t: &ElemTerm, ivars: &mut Vec<MIVar>) -> MTerm {
        match t {
            ElemTerm::Const(c) => {
                let (sort, value) = self.consts[c];
                MTerm::Const { sort, value }
            }
            ElemTerm::Read { var, index } => {
                let (tmpl, v) = self.vars[var];
                MTerm::Read { tmpl, var: v, idx: self.idx(index, ivars, Some(tmpl)) }
            }
        }
    }

    fn body(&self, f: &AgentFormula, ivars: &mut Vec<MIVar>) -> MF {
        match f {
            AgentFormula::True => MF::True,
            AgentFormula::False => MF::False,
            AgentFormula::Eq(a, b) => MF::Eq(self.term(a, ivars), self.term(b, ivars)),
            AgentFormula::Rel(r, args) => MF::Rel(self.rels[r], args.iter().map(|a| self.term(a, ivars)).collect()),
            AgentFormula::IdxEq(a, b) => MF::IdxEq(self.idx(a, ivars, None), self.idx(b, ivars, None)),
            AgentFormula::Not(inner) => MF::Not(Box::new(self.body(inner, ivars))),
            AgentFormula::And(ps) => MF::And(ps.iter().map(|p| self.body(p, ivars)).collect()),
            AgentFormula::Or(ps) => MF::Or(ps.iter().map(|p| self.body(p, ivars)).collect()),
        }
    }
}

impl Model {
    /// Validate and resolve a parsed model.
    pub fn new(p: &Pmas) -> Result<Model, Vec<Diagnostic>> {
        let diags = validate_pmas(p);
        if !diags.is_empty() {
            return Err(diags);
        }
        let names = Names::new(p);
        let sorts = p.sorts.iter().map(|s| MSort { name: s.name.clone(), values: s.values.clone() }).collect();
        let rels = p
            .relations
            .iter()
            .map(|r| MRel { name: r.name.clone(), args: r.args.iter().map(|a| names.sorts[a]).collect() })
            .collect();
        let templates: Vec<MTemplate> = p
            .templates
            .iter()
            .map(|t| MTemplate {
                name: t.name.clone(),
                is_env: t.is_env,
                vars: t
                    .vars
                    .iter()
                    .map(|v| MVar { name: v.name.clone(), sort: names.sorts[&v.sort], init: names.consts[&v.init].1 })
                    .collect(),
                actions: t
                    .actions
                    .iter()
                    .map(|a| MAction {
                        name: a.name.clone(),
                        kind: a.kind,
                        initiator: a.initiator,
                        pre: names.formula(&a.pre),
                        eff: a.eff.iter().map(|(v, c)| (names.vars[v].1, names.consts[c].1)).collect(),
                    })
                    .collect(),
            })
            .collect();
        let env = templates.iter().position(|t| t.is_env).unwrap();
        let groups = p.alternation.as_ref().map(|(g1, _)| {
            templates.iter().map(|t| if g1.contains(&t.name) { 0 } else { 1 }).collect()
        });
        let mut sync: Vec<SyncAction> = Vec::new();
        for t in &templates {
            for a in &t.actions {
                if a.kind == ActionKind::Local || sync.iter().any(|s| s.name == a.name) {
                    continue;
                }
                let participants = templates
                    .iter()
                    .enumerate()
                    .filter(|(_, u)| !u.is_env)
                    .filter_map(|(ui, u)| u.action(&a.name).map(|k| (ui, k)))
                    .collect();
                let initiator = templates
                    .iter()
                    .position(|u| u.actions.iter().any(|b| b.name == a.name && b.initiator));
                sync.push(SyncAction {
                    name: a.name.clone(),
                    kind: a.kind,
                    env_action: templates[env].action(&a.name).unwrap(),
                    participants,
                    initiator,
                });
            }
        }
        let goal = p.goal.as_ref().map(|g| names.formula(g));
        Ok(Model { sorts, rels, templates, env, groups, sync, goal, source: p.clone() })
    }

    /// Resolve a formula against this model; the formula must validate in
    /// the goal position.
    pub fn resolve_goal(&self, f: &AgentFormula) -> Result<MFormula, Vec<Diagnostic>> {
        let mut p = self.source.clone();
        p.goal = Some(f.clone());
        let diags = validate_pmas(&p);
        if !diags.is_empty() {
            return Err(diags);
        }
        Ok(Names::new(&p).formula(f))
    }

    pub fn template_index(&self, name: &str) -> Option<usize> {
        self.templates.iter().position(|t| t.name == name)
    }

    pub fn agent_templates(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.templates.len()).filter(|&t| t != self.env)
    }

    pub fn group(&self, t: usize) -> Option<u8> {
        self.groups.as_ref().map(|g| g[t])
    }

    /// Turn group allowed to start a synchronisation action.
    pub fn sync_group(&self, s: &SyncAction) -> Option<u8> {
        match (&self.groups, s.initiator) {
            (Some(g), Some(t)) => Some(g[t]),
            _ => None,
        }
    }

    pub fn value_name(&self, sort: usize, v: u16) -> &str {
        &self.sorts[sort].values[v as usize]
    }

    pub fn const_value(&self, name: &str) -> Option<(usize, u16)> {
        self.sorts.iter().enumerate().find_map(|(i, s)| s.values.iter().position(|v| v == name).map(|k| (i, k as u16)))
    }
}
