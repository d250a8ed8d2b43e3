use super::formula::Formula;
use super::ground::{sat_ground_unchecked, Budget};
use super::sig::RelId;
use super::term::{Atom, IVar, Lit, Term};
use super::LogicError;

/// `λ bound. body`, applied to index variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lambda {
    pub bound: IVar,
    pub body: Box<UTerm>,
}

/// Element term extended with case-defined functions and λ application.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UTerm {
    Term(Term),
    /// Guarded alternatives; guards are assumed exhaustive and mutually
    /// exclusive.
    Case(Vec<(Formula, UTerm)>),
    App(Lambda, IVar),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UAtom {
    Eq(UTerm, UTerm),
    Rel(RelId, Vec<UTerm>),
    Plain(Atom),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UFormula {
    True,
    False,
    Atom(UAtom, bool),
    Not(Box<UFormula>),
    And(Vec<UFormula>),
    Or(Vec<UFormula>),
}

impl UTerm {
    /// A case function whose last branch fires when no earlier guard does.
    pub fn case_with_default(branches: Vec<(Formula, UTerm)>, default: UTerm) -> UTerm {
        let rest = Formula::and(branches.iter().map(|(g, _)| Formula::not(g.clone())).collect());
        let mut all = branches;
        all.push((rest, default));
        UTerm::Case(all)
    }

    pub fn map_vars(&self, f: &mut dyn FnMut(IVar) -> IVar) -> UTerm {
        match self {
            UTerm::Term(t) => UTerm::Term(t.map_vars(&mut |w| f(w))),
            UTerm::Case(bs) => UTerm::Case(bs.iter().map(|(g, t)| (g.map_vars(&mut |w| f(w)), t.map_vars(&mut *f))).collect()),
            UTerm::App(l, v) => {
                let bound = l.bound;
                let body = l.body.map_vars(&mut |w| if w == bound { w } else { f(w) });
                UTerm::App(Lambda { bound, body: Box::new(body) }, f(*v))
            }
        }
    }

    /// Flatten into guarded plain terms.
    pub fn flatten(&self) -> Vec<(Formula, Term)> {
        match self {
            UTerm::Term(t) => vec![(Formula::True, *t)],
            UTerm::Case(bs) => {
                let mut out = Vec::new();
                for (g, t) in bs {
                    for (h, s) in t.flatten() {
                        let guard = Formula::and(vec![g.clone(), h]);
                        if guard != Formula::False {
                            out.push((guard, s));
                        }
                    }
                }
                out
            }
            UTerm::App(l, v) => {
                let bound = l.bound;
                let arg = *v;
                l.body.map_vars(&mut |w| if w == bound { arg } else { w }).flatten()
            }
        }
    }
}

fn product(args: &[UTerm]) -> Vec<(Formula, Vec<Term>)> {
    let mut acc: Vec<(Formula, Vec<Term>)> = vec![(Formula::True, Vec::new())];
    for a in args {
        let alts = a.flatten();
        let mut next = Vec::with_capacity(acc.len() * alts.len());
        for (g, ts) in &acc {
            for (h, t) in &alts {
                let mut ts = ts.clone();
                ts.push(*t);
                next.push((Formula::and(vec![g.clone(), h.clone()]), ts));
            }
        }
        acc = next;
    }
    acc
}

fn reduce_atom(atom: &UAtom, pos: bool) -> Formula {
    match atom {
        UAtom::Plain(a) => Formula::Lit(Lit::new(a.clone(), pos)),
        UAtom::Eq(a, b) => {
            let alts = product(&[a.clone(), b.clone()]);
            Formula::or(
                alts.into_iter()
                    .map(|(g, ts)| Formula::and(vec![g, Formula::Lit(Lit::new(Atom::eq(ts[0], ts[1]), pos))]))
                    .collect(),
            )
        }
        UAtom::Rel(r, args) => Formula::or(
            product(args)
                .into_iter()
                .map(|(g, ts)| Formula::and(vec![g, Formula::Lit(Lit::new(Atom::Rel(*r, ts), pos))]))
                .collect(),
        ),
    }
}

fn reduce(f: &UFormula, pos: bool) -> Formula {
    match f {
        UFormula::True => if pos { Formula::True } else { Formula::False },
        UFormula::False => if pos { Formula::False } else { Formula::True },
        UFormula::Atom(a, p) => reduce_atom(a, *p == pos),
        UFormula::Not(inner) => reduce(inner, !pos),
        UFormula::And(ps) => {
            let parts = ps.iter().map(|p| reduce(p, pos)).collect();
            if pos { Formula::and(parts) } else { Formula::or(parts) }
        }
        UFormula::Or(ps) => {
            let parts = ps.iter().map(|p| reduce(p, pos)).collect();
            if pos { Formula::or(parts) } else { Formula::and(parts) }
        }
    }
}

/// Eliminate λ-applications and case functions. An atom `A(F(v))` with
/// `F = case{k1: t1; ...}` becomes `(k1 and A(t1)) or ...`; negative
/// occurrences expand the same way, which is sound because the guards
/// partition the domain.
pub fn reduce_updates(f: &UFormula) -> Formula {
    reduce(f, true)
}

/// Check that the guards of a case function are pairwise exclusive and
/// jointly exhaustive, treating free index variables as distinct constants.
pub fn check_partition(guards: &[Formula], budget: &mut Budget) -> Result<(), LogicError> {
    let none = Formula::and(guards.iter().map(|g| Formula::not(g.clone())).collect());
    if sat_ground_unchecked(&none, &[], budget)? {
        return Err(LogicError::Partition("exhaustive"));
    }
    for i in 0..guards.len() {
        for j in i + 1..guards.len() {
            let both = Formula::and(vec![guards[i].clone(), guards[j].clone()]);
            if sat_ground_unchecked(&both, &[], budget)? {
                return Err(LogicError::Partition("mutually exclusive"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::sig::{ArrayId, ConstId, GlobalId, SortId};

    fn c(i: u32) -> Term {
        Term::Const(ConstId(i))
    }

    #[test]
    fn constant_lambda_applies_to_constant() {
        let j = IVar::new(9, SortId(0));
        let z = IVar::new(0, SortId(0));
        let t = UTerm::App(Lambda { bound: j, body: Box::new(UTerm::Term(c(3))) }, z);
        assert_eq!(t.flatten(), vec![(Formula::True, c(3))]);
    }

    #[test]
    fn case_atom_expands_per_branch() {
        let g = Term::Global(GlobalId(0));
        let k1 = Formula::Lit(Lit::eq(g, c(0)));
        let k2 = Formula::Lit(Lit::ne(g, c(0)));
        let f = UFormula::Atom(
            UAtom::Eq(UTerm::Case(vec![(k1.clone(), UTerm::Term(c(1))), (k2.clone(), UTerm::Term(c(2)))]), UTerm::Term(c(1))),
            true,
        );
        let r = reduce_updates(&f);
        let expected = Formula::Or(vec![
            Formula::And(vec![k1, Formula::Lit(Lit::eq(c(1), c(1)))]),
            Formula::And(vec![k2, Formula::Lit(Lit::eq(c(2), c(1)))]),
        ]);
        assert_eq!(r, expected);
    }

    #[test]
    fn lambda_substitutes_bound_index() {
        let s = SortId(0);
        let (j, z) = (IVar::new(9, s), IVar::new(0, s));
        let a = ArrayId(0);
        let act = ArrayId(1);
        let body = UTerm::case_with_default(
            vec![(Formula::Lit(Lit::eq(Term::Read(act, j), c(5))), UTerm::Term(c(1)))],
            UTerm::Term(Term::Read(a, j)),
        );
        let flat = UTerm::App(Lambda { bound: j, body: Box::new(body) }, z).flatten();
        assert_eq!(flat.len(), 2);
        assert_eq!(flat[0].1, c(1));
        assert_eq!(flat[1].1, Term::Read(a, z));
        assert_eq!(flat[1].0, Formula::Lit(Lit::ne(Term::Read(act, z), c(5))));
    }

    #[test]
    fn partition_checks() {
        let g = Term::Global(GlobalId(0));
        let k1 = Formula::Lit(Lit::eq(g, c(0)));
        let k2 = Formula::Lit(Lit::ne(g, c(0)));
        let mut b = Budget::unlimited();
        assert!(check_partition(&[k1.clone(), k2], &mut b).is_ok());
        assert_eq!(check_partition(std::slice::from_ref(&k1), &mut b), Err(LogicError::Partition("exhaustive")));
        assert_eq!(
            check_partition(&[k1.clone(), k1, Formula::True], &mut b),
            Err(LogicError::Partition("mutually exclusive"))
        );
    }
}
