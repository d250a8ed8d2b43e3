use crate::logic::{Atom, Formula, IVar, Lit, Term};
use crate::model::{MFormula, MIdx, MTerm, MF};

use super::AbPmas;

/// A translated agent formula and the fresh existential index variables
/// standing for its index variables (in order of the formula's variables).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Translated {
    pub vars: Vec<IVar>,
    pub formula: Formula,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ix {
    Env,
    Var(IVar),
}

struct Cx<'a> {
    ab: &'a AbPmas,
    me: Option<Ix>,
    vars: &'a [IVar],
}

impl Cx<'_> {
    fn ix(&self, i: MIdx) -> Ix {
        match i {
            MIdx::Env => Ix::Env,
            MIdx::SelfId => self.me.expect("self outside an action precondition"),
            MIdx::Var(k) => Ix::Var(self.vars[k]),
        }
    }

    fn term(&self, t: &MTerm) -> Option<Term> {
        match *t {
            MTerm::Const { sort, value } => Some(Term::Const(self.ab.values[sort][value as usize])),
            MTerm::Read { tmpl, var, idx } => match (self.ix(idx), &self.ab.arrays[tmpl]) {
                (Ix::Env, None) => Some(Term::Global(self.ab.env_globals[var])),
                (Ix::Var(v), Some(arrs)) if v.sort == arrs.index => Some(Term::Read(arrs.vars[var], v)),
                // a read through an id of the wrong template has no grounding
                _ => None,
            },
        }
    }

    fn formula(&self, f: &MF) -> Formula {
        match f {
            MF::True => Formula::True,
            MF::False => Formula::False,
            MF::Eq(a, b) => match (self.term(a), self.term(b)) {
                (Some(a), Some(b)) => Formula::Lit(Lit::eq(a, b)),
                _ => Formula::False,
            },
            MF::Rel(r, args) => {
                let ts: Option<Vec<Term>> = args.iter().map(|a| self.term(a)).collect();
                match ts {
                    Some(ts) => Formula::Lit(Lit::pos(Atom::Rel(self.ab.rels[*r], ts))),
                    None => Formula::False,
                }
            }
            MF::IdxEq(a, b) => match (self.ix(*a), self.ix(*b)) {
                (Ix::Env, Ix::Env) => Formula::True,
                (Ix::Var(x), Ix::Var(y)) if x == y => Formula::True,
                (Ix::Var(x), Ix::Var(y)) if x.sort == y.sort => Formula::Lit(Lit::pos(Atom::idx_eq(x, y))),
                _ => Formula::False,
            },
            MF::Not(inner) => Formula::not(self.formula(inner)),
            MF::And(ps) => Formula::and(ps.iter().map(|p| self.formula(p)).collect()),
            MF::Or(ps) => Formula::or(ps.iter().map(|p| self.formula(p)).collect()),
        }
    }
}

/// Translate an agent formula: `self` becomes `self_var` (or the
/// environment's globals when `self_var` is `None`), each index variable a
/// fresh variable numbered from `*fresh` in its template's index sort.
pub fn translate_agent_formula(
    ab: &AbPmas,
    f: &MFormula,
    self_var: Option<IVar>,
    fresh: &mut u32,
) -> Translated {
    let vars: Vec<IVar> = f
        .ivars
        .iter()
        .map(|v| {
            let t = v.template.expect("index variable without template");
            let sort = ab.index_sort(t).expect("index variable over the environment");
            let iv = IVar::new(*fresh, sort);
            *fresh += 1;
            iv
        })
        .collect();
    let me = Some(match self_var {
        Some(v) => Ix::Var(v),
        None => Ix::Env,
    });
    let formula = Cx { ab, me, vars: &vars }.formula(&f.body);
    Translated { vars, formula }
}

/// The literals of a conjunctive formula; `None` when it is false.
pub(crate) fn guard_lits(f: &Formula) -> Option<Vec<Lit>> {
    fn go(f: &Formula, out: &mut Vec<Lit>) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Lit(l) => {
                out.push(l.clone());
                true
            }
            Formula::And(ps) => ps.iter().all(|p| go(p, out)),
            Formula::Or(_) | Formula::Not(_) => panic!("precondition is not a conjunction of literals"),
        }
    }
    let mut out = Vec::new();
    go(&f.nnf(), &mut out).then_some(out)
}
