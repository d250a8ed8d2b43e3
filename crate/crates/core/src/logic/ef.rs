use std::collections::HashMap;

use super::formula::{Cube, Formula};
use super::ground::{sat_ground_unchecked, Budget, Facts};
use super::sig::Signature;
use super::term::{IVar, Lit};
use super::LogicError;

/// `exists e. forall u. matrix`, with every universal of index sort.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EfFormula {
    pub exists: Vec<IVar>,
    pub forall: Vec<IVar>,
    pub matrix: Formula,
}

/// All ways of identifying same-sort variables of `vars`. Each map sends a
/// variable to the representative of its block (the earliest member).
pub fn alldiff_partitions(vars: &[IVar]) -> Vec<HashMap<IVar, IVar>> {
    fn go(vars: &[IVar], i: usize, reps: &mut Vec<IVar>, cur: &mut HashMap<IVar, IVar>, out: &mut Vec<HashMap<IVar, IVar>>) {
        if i == vars.len() {
            out.push(cur.clone());
            return;
        }
        let v = vars[i];
        for k in 0..reps.len() {
            let r = reps[k];
            if r.sort == v.sort {
                cur.insert(v, r);
                go(vars, i + 1, reps, cur, out);
            }
        }
        reps.push(v);
        cur.insert(v, v);
        go(vars, i + 1, reps, cur, out);
        reps.pop();
        cur.remove(&v);
    }
    let mut out = Vec::new();
    go(vars, 0, &mut Vec::new(), &mut HashMap::new(), &mut out);
    out
}

/// Conjunction of all sort-matching instantiations of the universals by
/// the given (pairwise distinct) existentials.
fn instantiate(forall: &[IVar], reps: &[IVar], matrix: &Formula) -> Formula {
    let choices: Vec<Vec<IVar>> = forall
        .iter()
        .map(|u| reps.iter().copied().filter(|r| r.sort == u.sort).collect())
        .collect();
    if choices.iter().any(|c| c.is_empty()) {
        return Formula::True;
    }
    let mut parts = Vec::new();
    let mut idx = vec![0usize; forall.len()];
    loop {
        let map: HashMap<IVar, IVar> =
            forall.iter().enumerate().map(|(p, u)| (*u, choices[p][idx[p]])).collect();
        parts.push(matrix.subst(&map));
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Formula::and(parts);
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Satisfiability of an exists-forall formula: expand the existentials into
/// all equality partitions, instantiate the universals over the surviving
/// representatives and decide the ground remainder.
pub fn sat_exists_forall(sig: &Signature, f: &EfFormula, budget: &mut Budget) -> Result<bool, LogicError> {
    f.matrix.check(sig)?;
    for p in alldiff_partitions(&f.exists) {
        let mut reps: Vec<IVar> = p.values().copied().collect();
        reps.sort();
        reps.dedup();
        let m = f.matrix.subst(&p);
        let g = instantiate(&f.forall, &reps, &m);
        if sat_ground_unchecked(&g, &[], budget)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// As [`sat_exists_forall`] for a formula whose existentials are already
/// known to be pairwise distinct.
pub fn sat_differentiated(f: &EfFormula, budget: &mut Budget) -> Result<bool, LogicError> {
    let g = instantiate(&f.forall, &f.exists, &f.matrix);
    sat_ground_unchecked(&g, &[], budget)
}

/// Whether the differentiated cube `c` entails the disjunction of `ds`.
///
/// `c and not(d1 or ... or dn)` is an exists-forall formula; its universals
/// are the variables of the `di`, instantiated injectively over the
/// variables of `c` (non-injective instances falsify the implicit
/// distinctness of `di` and contribute nothing). Instances are simplified
/// against the literals of `c` before the ground check.
pub fn entails_cube(c: &Cube, ds: &[&Cube], budget: &mut Budget) -> Result<bool, LogicError> {
    let Some(facts) = Facts::from_lits(&c.lits) else {
        return Ok(true);
    };
    let mut clauses: Vec<Formula> = Vec::new();
    for d in ds {
        let mut trivially = false;
        injective_maps(d, &c.vars, &facts, &mut |open: Vec<Lit>| {
            if open.is_empty() {
                trivially = true;
                return true;
            }
            clauses.push(Formula::or(open.into_iter().map(|l| Formula::Lit(l.negate())).collect()));
            false
        });
        if trivially {
            return Ok(true);
        }
    }
    let sat = sat_ground_unchecked(&Formula::and(clauses), &c.lits, budget)?;
    Ok(!sat)
}

/// Enumerate injective sort-preserving maps from `d.vars` into `targets`,
/// pruning maps under which some literal of `d` is already false. The
/// callback receives the literals not yet decided by `facts` and returns
/// `true` to stop.
fn injective_maps(d: &Cube, targets: &[IVar], facts: &Facts, f: &mut dyn FnMut(Vec<Lit>) -> bool) {
    // Literals grouped by the position of their last variable in d.vars.
    let pos: HashMap<IVar, usize> = d.vars.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut by_level: Vec<Vec<&Lit>> = vec![Vec::new(); d.vars.len() + 1];
    for l in &d.lits {
        let lvl = l.index_vars().iter().map(|v| pos[v] + 1).max().unwrap_or(0);
        by_level[lvl].push(l);
    }
    let mut open0 = Vec::new();
    for l in &by_level[0] {
        match facts.value(l) {
            Some(false) => return,
            Some(true) => {}
            None => open0.push((*l).clone()),
        }
    }
    let mut map: HashMap<IVar, IVar> = HashMap::new();
    let mut used = vec![false; targets.len()];
    go(d, targets, facts, &by_level, 0, &mut map, &mut used, &mut open0, f);

    #[allow(clippy::too_many_arguments)]
    fn go(
        d: &Cube,
        targets: &[IVar],
        facts: &Facts,
        by_level: &[Vec<&Lit>],
        i: usize,
        map: &mut HashMap<IVar, IVar>,
        used: &mut [bool],
        open: &mut Vec<Lit>,
        f: &mut dyn FnMut(Vec<Lit>) -> bool,
    ) -> bool {
        if i == d.vars.len() {
            return f(open.clone());
        }
        let v = d.vars[i];
        for k in 0..targets.len() {
            if used[k] || targets[k].sort != v.sort {
                continue;
            }
            map.insert(v, targets[k]);
            let mark = open.len();
            let mut dead = false;
            for l in &by_level[i + 1] {
                let inst = l.map_vars(&mut |w| map[&w]);
                match facts.value(&inst) {
                    Some(false) => {
                        dead = true;
                        break;
                    }
                    Some(true) => {}
                    None => open.push(inst),
                }
            }
            if !dead {
                used[k] = true;
                let stop = go(d, targets, facts, by_level, i + 1, map, used, open, f);
                used[k] = false;
                if stop {
                    open.truncate(mark);
                    map.remove(&v);
                    return true;
                }
            }
            open.truncate(mark);
            map.remove(&v);
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::sig::{SortId, SortKind};
    use crate::logic::term::{Atom, Term};

    fn bell(n: usize) -> usize {
        let mut row = vec![1usize];
        for _ in 0..n {
            let mut next = vec![*row.last().unwrap()];
            for &x in &row {
                let y = *next.last().unwrap() + x;
                next.push(y);
            }
            row = next;
        }
        row[0]
    }

    #[test]
    fn partitions_count_is_bell_number() {
        for k in 0..6 {
            let vars: Vec<IVar> = (0..k).map(|i| IVar::new(i, SortId(0))).collect();
            assert_eq!(alldiff_partitions(&vars).len(), bell(k as usize));
        }
        let mixed = [IVar::new(0, SortId(0)), IVar::new(1, SortId(1)), IVar::new(2, SortId(0))];
        assert_eq!(alldiff_partitions(&mixed).len(), 2);
    }

    fn boolean_array() -> (Signature, crate::logic::ArrayId, Term, Term, SortId) {
        let mut sig = Signature::new();
        let idx = sig.add_sort("Idx", SortKind::Index).unwrap();
        let b = sig.add_sort("B", SortKind::Element).unwrap();
        let t = sig.add_const(b, "T").unwrap();
        let f = sig.add_const(b, "F").unwrap();
        let a = sig.add_array("a", idx, b).unwrap();
        (sig, a, Term::Const(t), Term::Const(f), idx)
    }

    #[test]
    fn trivial_exists_is_sat() {
        let (sig, _, _, _, idx) = boolean_array();
        let f = EfFormula { exists: vec![IVar::new(0, idx)], forall: vec![], matrix: Formula::True };
        assert!(sat_exists_forall(&sig, &f, &mut Budget::unlimited()).unwrap());
    }

    #[test]
    fn universal_equal_to_existential_is_sat() {
        let (sig, _, _, _, idx) = boolean_array();
        let (e, i) = (IVar::new(0, idx), IVar::new(1, idx));
        let f = EfFormula { exists: vec![e], forall: vec![i], matrix: Formula::Lit(Lit::pos(Atom::idx_eq(i, e))) };
        assert!(sat_exists_forall(&sig, &f, &mut Budget::unlimited()).unwrap());
    }

    #[test]
    fn universal_contradicts_existential_witness() {
        let (sig, a, t, fl, idx) = boolean_array();
        let (e1, e2, i) = (IVar::new(0, idx), IVar::new(1, idx), IVar::new(2, idx));
        let matrix = Formula::and(vec![
            Formula::Lit(Lit::neg(Atom::idx_eq(e1, e2))),
            Formula::Lit(Lit::eq(Term::Read(a, e1), t)),
            Formula::Lit(Lit::eq(Term::Read(a, e2), fl)),
            Formula::Lit(Lit::eq(Term::Read(a, i), t)),
        ]);
        let f = EfFormula { exists: vec![e1, e2], forall: vec![i], matrix };
        assert!(!sat_exists_forall(&sig, &f, &mut Budget::unlimited()).unwrap());
    }

    #[test]
    fn cube_entailment() {
        let (_, a, t, fl, idx) = boolean_array();
        let z = |i| IVar::new(i, idx);
        let c = Cube::new(vec![z(0), z(1)], vec![Lit::eq(Term::Read(a, z(0)), t), Lit::eq(Term::Read(a, z(1)), fl)]);
        let d = Cube::new(vec![z(0)], vec![Lit::eq(Term::Read(a, z(0)), fl)]);
        assert!(entails_cube(&c, &[&d], &mut Budget::unlimited()).unwrap());
        assert!(!entails_cube(&d, &[&c], &mut Budget::unlimited()).unwrap());
        // Semantic only: a[z] = T or a[z] = F is not forced by the open sort,
        // but a[z] != T entails "a[z] != T".
        let e = Cube::new(vec![z(0)], vec![Lit::ne(Term::Read(a, z(0)), t)]);
        let g1 = Cube::new(vec![z(0)], vec![Lit::eq(Term::Read(a, z(0)), fl)]);
        assert!(!entails_cube(&e, &[&g1], &mut Budget::unlimited()).unwrap());
        assert!(entails_cube(&g1, &[&e], &mut Budget::unlimited()).unwrap());
    }
}
