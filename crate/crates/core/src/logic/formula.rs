use std::collections::{BTreeMap, HashMap};

use super::sig::{ConstId, Signature};
use super::term::{Atom, IVar, Lit, Term};
use super::LogicError;

/// Quantifier-free formula with arbitrary boolean structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Lit(Lit),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub fn lit(l: Lit) -> Formula {
        Formula::Lit(l)
    }

    pub fn and(parts: Vec<Formula>) -> Formula {
        let mut out = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(inner) => out.extend(inner),
                p => out.push(p),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    pub fn or(parts: Vec<Formula>) -> Formula {
        let mut out = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(inner) => out.extend(inner),
                p => out.push(p),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        match f {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Lit(l) => Formula::Lit(l.negate()),
            Formula::Not(inner) => *inner,
            f => Formula::Not(Box::new(f)),
        }
    }

    pub fn conj(lits: &[Lit]) -> Formula {
        Formula::and(lits.iter().cloned().map(Formula::Lit).collect())
    }

    /// Negation normal form: negations only on literals, which are folded
    /// into the literal polarity.
    pub fn nnf(&self) -> Formula {
        self.nnf_with(true)
    }

    fn nnf_with(&self, positive: bool) -> Formula {
        match self {
            Formula::True => if positive { Formula::True } else { Formula::False },
            Formula::False => if positive { Formula::False } else { Formula::True },
            Formula::Lit(l) => Formula::Lit(if positive { l.clone() } else { l.negate() }),
            Formula::Not(inner) => inner.nnf_with(!positive),
            Formula::And(ps) => {
                let parts = ps.iter().map(|p| p.nnf_with(positive)).collect();
                if positive { Formula::and(parts) } else { Formula::or(parts) }
            }
            Formula::Or(ps) => {
                let parts = ps.iter().map(|p| p.nnf_with(positive)).collect();
                if positive { Formula::or(parts) } else { Formula::and(parts) }
            }
        }
    }

    pub fn map_vars(&self, f: &mut impl FnMut(IVar) -> IVar) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Lit(l) => Formula::Lit(l.map_vars(f)),
            Formula::Not(inner) => Formula::Not(Box::new(inner.map_vars(f))),
            Formula::And(ps) => Formula::And(ps.iter().map(|p| p.map_vars(f)).collect()),
            Formula::Or(ps) => Formula::Or(ps.iter().map(|p| p.map_vars(f)).collect()),
        }
    }

    pub fn subst(&self, map: &HashMap<IVar, IVar>) -> Formula {
        self.map_vars(&mut |v| *map.get(&v).unwrap_or(&v))
    }

    pub fn for_each_lit(&self, f: &mut impl FnMut(&Lit)) {
        match self {
            Formula::Lit(l) => f(l),
            Formula::Not(inner) => inner.for_each_lit(f),
            Formula::And(ps) | Formula::Or(ps) => ps.iter().for_each(|p| p.for_each_lit(f)),
            Formula::True | Formula::False => {}
        }
    }

    pub fn index_vars(&self) -> Vec<IVar> {
        let mut out = Vec::new();
        self.for_each_lit(&mut |l| l.atom.index_vars(&mut out));
        out.sort();
        out.dedup();
        out
    }

    pub fn check(&self, sig: &Signature) -> Result<(), LogicError> {
        let mut res = Ok(());
        self.for_each_lit(&mut |l| {
            if res.is_ok() {
                res = l.atom.check(sig);
            }
        });
        res
    }

    /// Evaluate under a total valuation of literals.
    pub fn eval(&self, lit_value: &mut impl FnMut(&Lit) -> bool) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Lit(l) => lit_value(l),
            Formula::Not(inner) => !inner.eval(lit_value),
            Formula::And(ps) => ps.iter().all(|p| p.eval(lit_value)),
            Formula::Or(ps) => ps.iter().any(|p| p.eval(lit_value)),
        }
    }
}

/// A conjunction of literals under an existential prefix of pairwise
/// distinct index variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cube {
    pub vars: Vec<IVar>,
    pub lits: Vec<Lit>,
}

/// A disjunction of cubes; no cubes means false.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StateFormula {
    pub cubes: Vec<Cube>,
}

impl StateFormula {
    pub fn bottom() -> Self {
        StateFormula { cubes: Vec::new() }
    }
    pub fn is_bottom(&self) -> bool {
        self.cubes.is_empty()
    }
}

impl Cube {
    pub fn new(vars: Vec<IVar>, lits: Vec<Lit>) -> Cube {
        Cube { vars, lits }
    }

    pub fn top() -> Cube {
        Cube { vars: Vec::new(), lits: Vec::new() }
    }

    /// Every index variable occurring in a literal belongs to the prefix.
    pub fn is_closed(&self) -> bool {
        self.lits.iter().all(|l| l.index_vars().iter().all(|v| self.vars.contains(v)))
    }

    pub fn to_formula(&self) -> Formula {
        Formula::conj(&self.lits)
    }

    /// Cheap simplification of a differentiated cube: resolves index
    /// equalities syntactically, propagates `t = c` definitions into the
    /// remaining literals and drops trivially true ones. Returns `None` when
    /// a syntactic contradiction shows up. The result is not guaranteed
    /// satisfiable.
    pub fn normalize(&self) -> Option<Cube> {
        let mut defs: HashMap<Term, ConstId> = HashMap::new();
        for l in &self.lits {
            if let (true, Atom::Eq(t, Term::Const(c))) = (l.pos, &l.atom) {
                if matches!(t, Term::Const(_)) {
                    continue;
                }
                if let Some(prev) = defs.insert(*t, *c) {
                    if prev != *c {
                        return None;
                    }
                }
            }
        }
        let resolve = |t: Term| match t {
            Term::Const(_) => t,
            _ => defs.get(&t).map(|c| Term::Const(*c)).unwrap_or(t),
        };

        let mut out: Vec<Lit> = Vec::with_capacity(self.lits.len());
        for l in &self.lits {
            let lit = match &l.atom {
                Atom::IdxEq(a, b) => {
                    let same = a == b;
                    if same == l.pos {
                        continue;
                    }
                    return None;
                }
                Atom::Eq(t, Term::Const(c)) if l.pos && !matches!(t, Term::Const(_)) => {
                    Lit::eq(*t, Term::Const(*c))
                }
                atom => Lit::new(atom.map_terms(&mut |t| resolve(t)), l.pos),
            };
            if let Atom::Eq(a, b) = &lit.atom {
                if a == b {
                    if lit.pos {
                        continue;
                    }
                    return None;
                }
                if let (Term::Const(_), Term::Const(_)) = (a, b) {
                    if lit.pos {
                        return None;
                    }
                    continue;
                }
            }
            out.push(lit);
        }
        out.sort();
        out.dedup();
        for w in out.windows(2) {
            if w[0].atom == w[1].atom {
                return None;
            }
        }
        let mut vars = self.vars.clone();
        vars.sort();
        vars.dedup();
        Some(Cube { vars, lits: out })
    }

    /// Renumber index variables to `0..k` in a deterministic order that only
    /// depends on the literal structure, and sort literals.
    pub fn canonical(&self) -> Cube {
        let mut keyed: Vec<(IVar, (u32, Vec<Lit>))> = self
            .vars
            .iter()
            .map(|&v| {
                let mut masked: Vec<Lit> = self
                    .lits
                    .iter()
                    .filter(|l| l.index_vars().contains(&v))
                    .map(|l| {
                        l.map_vars(&mut |w| {
                            IVar::new(if w == v { u32::MAX } else { u32::MAX - 1 }, w.sort)
                        })
                    })
                    .collect();
                masked.sort();
                (v, (v.sort.0, masked))
            })
            .collect();
        keyed.sort_by(|a, b| a.1.cmp(&b.1));
        let map: BTreeMap<IVar, IVar> = keyed
            .iter()
            .enumerate()
            .map(|(i, (v, _))| (*v, IVar::new(i as u32, v.sort)))
            .collect();
        let mut lits: Vec<Lit> = self.lits.iter().map(|l| l.map_vars(&mut |v| map[&v])).collect();
        lits.sort();
        lits.dedup();
        let vars = keyed.iter().enumerate().map(|(i, (v, _))| IVar::new(i as u32, v.sort)).collect();
        Cube { vars, lits }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::sig::{GlobalId, SortId};

    fn g(i: u32) -> Term {
        Term::Global(GlobalId(i))
    }
    fn c(i: u32) -> Term {
        Term::Const(ConstId(i))
    }

    #[test]
    fn nnf_pushes_negation_to_literals() {
        let f = Formula::not(Formula::and(vec![
            Formula::lit(Lit::eq(g(0), c(0))),
            Formula::not(Formula::lit(Lit::eq(g(1), c(1)))),
        ]));
        let n = f.nnf();
        assert_eq!(
            n,
            Formula::Or(vec![Formula::lit(Lit::ne(g(0), c(0))), Formula::lit(Lit::eq(g(1), c(1)))])
        );
    }

    #[test]
    fn normalize_propagates_definitions() {
        let s = SortId(0);
        let cube = Cube::new(
            vec![],
            vec![Lit::eq(g(0), c(0)), Lit::ne(g(0), c(1)), Lit::eq(g(1), g(0))],
        );
        let n = cube.normalize().unwrap();
        assert_eq!(n.lits, vec![Lit::eq(g(0), c(0)), Lit::eq(g(1), c(0))]);
        let bad = Cube::new(vec![IVar::new(0, s)], vec![Lit::eq(g(0), c(0)), Lit::eq(g(0), c(1))]);
        assert!(bad.normalize().is_none());
    }

    #[test]
    fn normalize_resolves_index_equalities() {
        let s = SortId(0);
        let (x, y) = (IVar::new(0, s), IVar::new(1, s));
        let ok = Cube::new(vec![x, y], vec![Lit::neg(Atom::idx_eq(x, y))]);
        assert!(ok.normalize().unwrap().lits.is_empty());
        let bad = Cube::new(vec![x, y], vec![Lit::pos(Atom::idx_eq(x, y))]);
        assert!(bad.normalize().is_none());
    }

    #[test]
    fn canonical_is_invariant_under_renaming() {
        let s = SortId(0);
        let a = crate::logic::sig::ArrayId(0);
        let cube = |p: u32, q: u32| {
            Cube::new(
                vec![IVar::new(p, s), IVar::new(q, s)],
                vec![Lit::eq(Term::Read(a, IVar::new(p, s)), c(0)), Lit::eq(Term::Read(a, IVar::new(q, s)), c(1))],
            )
        };
        assert_eq!(cube(7, 3).canonical(), cube(2, 9).canonical());
    }
}
