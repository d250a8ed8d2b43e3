use std::fmt;

/// A parameterised multi-agent system as written in the modelling language.
/// Names are kept as strings; [`crate::model::Model`] is the resolved form.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Pmas {
    pub sorts: Vec<SortDef>,
    pub relations: Vec<RelationDef>,
    pub templates: Vec<Template>,
    pub alternation: Option<(Vec<String>, Vec<String>)>,
    pub goal: Option<AgentFormula>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortDef {
    pub name: String,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationDef {
    pub name: String,
    pub args: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub sort: String,
    pub init: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ActionKind {
    Local,
    Sync,
    Individual,
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ActionKind::Local => "local",
            ActionKind::Sync => "sync",
            ActionKind::Individual => "individual",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionDecl {
    pub name: String,
    pub kind: ActionKind,
    pub initiator: bool,
    pub pre: AgentFormula,
    /// `(variable, value)` assignments; unlisted variables keep their value.
    pub eff: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    pub name: String,
    pub is_env: bool,
    pub vars: Vec<VarDecl>,
    pub actions: Vec<ActionDecl>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexTerm {
    SelfId,
    Env,
    Var(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ElemTerm {
    Read { var: String, index: IndexTerm },
    Const(String),
}

/// Quantifier-free agent formula; free index variables are read
/// existentially.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AgentFormula {
    True,
    False,
    Eq(ElemTerm, ElemTerm),
    Rel(String, Vec<ElemTerm>),
    IdxEq(IndexTerm, IndexTerm),
    Not(Box<AgentFormula>),
    And(Vec<AgentFormula>),
    Or(Vec<AgentFormula>),
}

impl AgentFormula {
    pub fn negation(f: AgentFormula) -> AgentFormula {
        AgentFormula::Not(Box::new(f))
    }

    /// Whether a disjunction survives negation normalisation.
    pub fn has_disjunction(&self) -> bool {
        fn go(f: &AgentFormula, pos: bool) -> bool {
            match f {
                AgentFormula::Not(inner) => go(inner, !pos),
                AgentFormula::And(ps) => !pos && ps.len() > 1 || ps.iter().any(|p| go(p, pos)),
                AgentFormula::Or(ps) => pos && ps.len() > 1 || ps.iter().any(|p| go(p, pos)),
                _ => false,
            }
        }
        go(self, true)
    }

    pub fn index_terms(&self, out: &mut Vec<IndexTerm>) {
        let term = |t: &ElemTerm, out: &mut Vec<IndexTerm>| {
            if let ElemTerm::Read { index, .. } = t {
                out.push(index.clone());
            }
        };
        match self {
            AgentFormula::Eq(a, b) => {
                term(a, out);
                term(b, out);
            }
            AgentFormula::Rel(_, args) => args.iter().for_each(|a| term(a, out)),
            AgentFormula::IdxEq(a, b) => out.extend([a.clone(), b.clone()]),
            AgentFormula::Not(inner) => inner.index_terms(out),
            AgentFormula::And(ps) | AgentFormula::Or(ps) => ps.iter().for_each(|p| p.index_terms(out)),
            AgentFormula::True | AgentFormula::False => {}
        }
    }

    /// Visit every element term.
    pub fn for_each_term(&self, f: &mut impl FnMut(&ElemTerm)) {
        match self {
            AgentFormula::Eq(a, b) => {
                f(a);
                f(b);
            }
            AgentFormula::Rel(_, args) => args.iter().for_each(&mut *f),
            AgentFormula::Not(inner) => inner.for_each_term(f),
            AgentFormula::And(ps) | AgentFormula::Or(ps) => ps.iter().for_each(|p| p.for_each_term(f)),
            _ => {}
        }
    }
}

impl Pmas {
    pub fn template(&self, name: &str) -> Option<&Template> {
        self.templates.iter().find(|t| t.name == name)
    }

    pub fn env(&self) -> Option<&Template> {
        self.templates.iter().find(|t| t.is_env)
    }

    /// The template owning a variable name.
    pub fn var_owner(&self, var: &str) -> Option<(&Template, &VarDecl)> {
        self.templates
            .iter()
            .find_map(|t| t.vars.iter().find(|v| v.name == var).map(|v| (t, v)))
    }

    pub fn sort_of_const(&self, c: &str) -> Option<&SortDef> {
        self.sorts.iter().find(|s| s.values.iter().any(|v| v == c))
    }
}
