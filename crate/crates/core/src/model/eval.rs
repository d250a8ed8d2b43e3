use std::collections::BTreeSet;

use super::resolved::{MFormula, MIdx, MTerm, Model, MF};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Agent {
    pub id: u32,
    pub vals: Vec<u16>,
}

/// Concrete global state: the agents of each template (the environment's
/// entry stays empty) and the environment's local state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Snapshot {
    pub agents: Vec<Vec<Agent>>,
    pub env: Vec<u16>,
}

impl Snapshot {
    /// Initial snapshot with the given number of agents per template.
    pub fn initial(m: &Model, counts: &[usize]) -> Snapshot {
        let mut next = 0u32;
        let agents = m
            .templates
            .iter()
            .enumerate()
            .map(|(t, tm)| {
                if t == m.env {
                    return Vec::new();
                }
                (0..counts[t])
                    .map(|_| {
                        next += 1;
                        Agent { id: next, vals: tm.vars.iter().map(|v| v.init).collect() }
                    })
                    .collect()
            })
            .collect();
        Snapshot { agents, env: m.templates[m.env].vars.iter().map(|v| v.init).collect() }
    }
}

/// Fixed interpretation of the relations: the value tuples each holds on.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RelInterpretation {
    pub tuples: Vec<BTreeSet<Vec<u16>>>,
}

impl RelInterpretation {
    pub fn empty(m: &Model) -> Self {
        RelInterpretation { tuples: vec![BTreeSet::new(); m.rels.len()] }
    }

    pub fn holds(&self, r: usize, args: &[u16]) -> bool {
        self.tuples[r].contains(args)
    }
}

/// An element of the id domain of a snapshot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Who {
    Env,
    Agent(usize, usize),
}

struct Env<'a> {
    m: &'a Model,
    g: &'a Snapshot,
    i0: &'a RelInterpretation,
    me: Option<Who>,
}

impl Env<'_> {
    fn who(&self, idx: MIdx, sigma: &[Who]) -> Option<Who> {
        match idx {
            MIdx::SelfId => self.me,
            MIdx::Env => Some(Who::Env),
            MIdx::Var(k) => Some(sigma[k]),
        }
    }

    fn value(&self, t: &MTerm, sigma: &[Who]) -> Option<u16> {
        match *t {
            MTerm::Const { value, .. } => Some(value),
            MTerm::Read { tmpl, var, idx } => match self.who(idx, sigma)? {
                Who::Env if tmpl == self.m.env => Some(self.g.env[var]),
                Who::Agent(t, k) if t == tmpl => Some(self.g.agents[t][k].vals[var]),
                _ => None,
            },
        }
    }

    fn holds(&self, f: &MF, sigma: &[Who]) -> bool {
        match f {
            MF::True => true,
            MF::False => false,
            MF::Eq(a, b) => match (self.value(a, sigma), self.value(b, sigma)) {
                (Some(x), Some(y)) => x == y,
                _ => false,
            },
            MF::Rel(r, args) => {
                let vals: Option<Vec<u16>> = args.iter().map(|a| self.value(a, sigma)).collect();
                vals.is_some_and(|v| self.i0.holds(*r, &v))
            }
            MF::IdxEq(a, b) => match (self.who(*a, sigma), self.who(*b, sigma)) {
                (Some(x), Some(y)) => x == y,
                _ => false,
            },
            MF::Not(inner) => !self.holds(inner, sigma),
            MF::And(ps) => ps.iter().all(|p| self.holds(p, sigma)),
            MF::Or(ps) => ps.iter().any(|p| self.holds(p, sigma)),
        }
    }
}

/// Candidate ids for each index variable of `f` in `g`.
pub fn grounding_domains(m: &Model, g: &Snapshot, f: &MFormula) -> Vec<Vec<Who>> {
    f.ivars
        .iter()
        .map(|v| match v.template {
            Some(t) if t == m.env => vec![Who::Env],
            Some(t) => (0..g.agents[t].len()).map(|k| Who::Agent(t, k)).collect(),
            None => std::iter::once(Who::Env)
                .chain(g.agents.iter().enumerate().flat_map(|(t, a)| (0..a.len()).map(move |k| Who::Agent(t, k))))
                .collect(),
        })
        .collect()
}

/// `g |= f` (relative to `self_id` when given): some grounding of the
/// index variables over ids of the right templates satisfies `f`.
pub fn eval_agent_formula(m: &Model, g: &Snapshot, i0: &RelInterpretation, f: &MFormula, self_id: Option<Who>) -> bool {
    let env = Env { m, g, i0, me: self_id };
    let domains = grounding_domains(m, g, f);
    let mut sigma = Vec::with_capacity(domains.len());
    fn go(env: &Env<'_>, f: &MF, domains: &[Vec<Who>], sigma: &mut Vec<Who>) -> bool {
        if sigma.len() == domains.len() {
            return env.holds(f, sigma);
        }
        for &w in &domains[sigma.len()] {
            sigma.push(w);
            if go(env, f, domains, sigma) {
                return true;
            }
            sigma.pop();
        }
        false
    }
    go(&env, &f.body, &domains, &mut sigma)
}

/// Evaluate under one explicit grounding.
pub fn eval_grounded(m: &Model, g: &Snapshot, i0: &RelInterpretation, f: &MFormula, self_id: Option<Who>, sigma: &[Who]) -> bool {
    Env { m, g, i0, me: self_id }.holds(&f.body, sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parser::{parse_formula, parse_pmas};

    const SRC: &str = "
        sort N { five, six }
        sort Loc { init, A, B }
        relation Snow(Loc, Loc)
        template Env env { var pulse: Loc = init
            action pulseA : local { eff: pulse := A } }
        template Ag { var v1: N = five  var loc: Loc = init
            action gotoA : local { pre: not Snow(init, A) and pulse[e] != A; eff: loc := A } }
    ";

    fn two_agents() -> (Model, Snapshot) {
        let m = Model::new(&parse_pmas(SRC).unwrap()).unwrap();
        let g = Snapshot {
            agents: vec![vec![], vec![Agent { id: 3, vals: vec![1, 0] }, Agent { id: 7, vals: vec![0, 0] }]],
            env: vec![0],
        };
        (m, g)
    }

    #[test]
    fn self_and_existential_index() {
        let (m, g) = two_agents();
        let f = m.resolve_goal(&parse_formula("v1[j] = five", &m.source).unwrap()).unwrap();
        let i0 = RelInterpretation::empty(&m);
        assert!(eval_agent_formula(&m, &g, &i0, &f, None));
        // self-relative formula built from an action precondition shape
        let mut p = m.source.clone();
        p.templates[1].actions[0].pre = parse_formula("v1[self] = six and v1[j] = five", &p).unwrap();
        let m2 = Model::new(&p).unwrap();
        let pre = &m2.templates[1].actions[0].pre;
        assert!(eval_agent_formula(&m2, &g, &i0, pre, Some(Who::Agent(1, 0))));
        assert!(!eval_agent_formula(&m2, &g, &i0, pre, Some(Who::Agent(1, 1))));
    }

    #[test]
    fn reflexive_index_equality() {
        let (m, g) = two_agents();
        let f = m.resolve_goal(&parse_formula("j = j and loc[j] = init", &m.source).unwrap()).unwrap();
        assert!(eval_agent_formula(&m, &g, &RelInterpretation::empty(&m), &f, None));
    }

    #[test]
    fn snow_blocks_goto() {
        let (m, mut g) = two_agents();
        g.agents[1].truncate(1);
        let mut i0 = RelInterpretation::empty(&m);
        i0.tuples[0].insert(vec![0, 1]);
        let pre = &m.templates[1].actions[0].pre;
        assert!(!eval_agent_formula(&m, &g, &i0, pre, Some(Who::Agent(1, 0))));
        assert!(eval_agent_formula(&m, &g, &RelInterpretation::empty(&m), pre, Some(Who::Agent(1, 0))));
    }

    #[test]
    fn missing_template_instances_make_formula_false() {
        let (m, mut g) = two_agents();
        g.agents[1].clear();
        let f = m.resolve_goal(&parse_formula("not v1[j] = five", &m.source).unwrap()).unwrap();
        assert!(!eval_agent_formula(&m, &g, &RelInterpretation::empty(&m), &f, None));
    }
}
