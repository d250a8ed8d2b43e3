use std::collections::HashMap;

use crate::encoder::{BulkVal, CaseFn, TransitionRule};
use crate::logic::{
    dnf_cubes, reduce_updates, Atom, Budget, ConstId, Cube, Formula, IVar, Lit, LogicError, Signature, SortId,
    SortKind, Term, UAtom, UFormula, UTerm,
};

/// Rule variables are renamed into this range before they meet cube
/// variables, which are always numbered from 0.
const RULE_BASE: u32 = 1 << 20;

/// Every way of placing the rule variables: onto a cube variable of the
/// same sort, onto a block opened by an earlier rule variable, or into a
/// fresh block. Returns the substitution and the fresh block variables.
fn placements(rule_vars: &[IVar], cube_vars: &[IVar]) -> Vec<(HashMap<IVar, IVar>, Vec<IVar>)> {
    fn go(
        rest: &[IVar],
        cube_vars: &[IVar],
        map: &mut HashMap<IVar, IVar>,
        fresh: &mut Vec<IVar>,
        next: &mut u32,
        out: &mut Vec<(HashMap<IVar, IVar>, Vec<IVar>)>,
    ) {
        let Some((&v, rest)) = rest.split_first() else {
            out.push((map.clone(), fresh.clone()));
            return;
        };
        let targets: Vec<IVar> = cube_vars.iter().chain(fresh.iter()).copied().filter(|w| w.sort == v.sort).collect();
        for w in targets {
            map.insert(v, w);
            go(rest, cube_vars, map, fresh, next, out);
        }
        let w = IVar::new(*next, v.sort);
        *next += 1;
        fresh.push(w);
        map.insert(v, w);
        go(rest, cube_vars, map, fresh, next, out);
        fresh.pop();
        *next -= 1;
        map.remove(&v);
    }
    let mut next = cube_vars.iter().map(|v| v.id + 1).max().unwrap_or(0);
    let mut out = Vec::new();
    go(rule_vars, cube_vars, &mut HashMap::new(), &mut Vec::new(), &mut next, &mut out);
    out
}

fn bulk_term(f: &CaseFn, z: IVar) -> UTerm {
    let bind = |l: &Lit| Formula::Lit(l.map_vars(&mut |w| if w == f.bound { z } else { w }));
    let branches = f.branches.iter().map(|(g, c)| (bind(g), UTerm::Term(Term::Const(*c)))).collect();
    let default = match f.default {
        BulkVal::Const(c) => Term::Const(c),
        BulkVal::Keep => Term::Read(f.array, z),
    };
    if f.branches.is_empty() {
        UTerm::Term(default)
    } else {
        UTerm::case_with_default(branches, UTerm::Term(default))
    }
}

struct Post<'a> {
    rule: &'a TransitionRule,
    points: Vec<(crate::logic::ArrayId, IVar, ConstId)>,
}

impl Post<'_> {
    /// Value of a post-state term in terms of the pre-state. Variables are
    /// pairwise distinct at this point, so point updates resolve
    /// syntactically.
    fn term(&self, t: Term) -> UTerm {
        match t {
            Term::Const(_) => UTerm::Term(t),
            Term::Global(g) => UTerm::Term(self.rule.global_update(g).map(Term::Const).unwrap_or(t)),
            Term::Read(a, z) => {
                if let Some(&(_, _, c)) = self.points.iter().find(|(b, x, _)| *b == a && *x == z) {
                    return UTerm::Term(Term::Const(c));
                }
                match self.rule.bulk_update(a) {
                    Some(f) => bulk_term(f, z),
                    None => UTerm::Term(t),
                }
            }
        }
    }

    fn lit(&self, l: &Lit) -> UFormula {
        let atom = match &l.atom {
            Atom::Eq(a, b) => UAtom::Eq(self.term(*a), self.term(*b)),
            Atom::Rel(r, args) => UAtom::Rel(*r, args.iter().map(|t| self.term(*t)).collect()),
            a @ Atom::IdxEq(..) => UAtom::Plain(a.clone()),
        };
        UFormula::Atom(atom, l.pos)
    }
}

/// Instantiate a universal guard over every sort-matching tuple of `vars`.
fn instantiate(uvars: &[IVar], cond: &Formula, vars: &[IVar]) -> Formula {
    let choices: Vec<Vec<IVar>> =
        uvars.iter().map(|u| vars.iter().copied().filter(|v| v.sort == u.sort).collect()).collect();
    if choices.iter().any(|c| c.is_empty()) {
        return Formula::True;
    }
    let mut parts = Vec::new();
    let mut idx = vec![0usize; uvars.len()];
    loop {
        let map: HashMap<IVar, IVar> = uvars.iter().enumerate().map(|(p, u)| (*u, choices[p][idx[p]])).collect();
        parts.push(cond.subst(&map));
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

/// Finite-domain closure: a term that differs from all but one value of
/// its enumerated sort equals the remaining one, and a term that differs
/// from all of them makes the cube unsatisfiable.
pub(crate) fn close_domains(sig: &Signature, c: &Cube) -> Option<Cube> {
    let mut diseq: HashMap<Term, Vec<ConstId>> = HashMap::new();
    for l in &c.lits {
        if let (false, Atom::Eq(t, Term::Const(k))) = (l.pos, &l.atom) {
            if !matches!(t, Term::Const(_)) {
                diseq.entry(*t).or_default().push(*k);
            }
        }
    }
    let mut extra = Vec::new();
    for (t, ks) in diseq {
        let sort: SortId = t.sort(sig);
        if sig.sort(sort).kind == SortKind::Index {
            continue;
        }
        let mut left = sig.constants().filter(|(id, d)| d.sort == sort && !ks.contains(id)).map(|(id, _)| id);
        match (left.next(), left.next()) {
            (None, _) => return None,
            (Some(k), None) => extra.push(Lit::eq(t, Term::Const(k))),
            _ => {}
        }
    }
    if extra.is_empty() {
        return Some(c.clone());
    }
    let mut lits = c.lits.clone();
    lits.extend(extra);
    Cube::new(c.vars.clone(), lits).normalize()
}

/// Preimage of a differentiated cube under one rule, as a list of
/// canonical differentiated cubes. Universal guards are instantiated over
/// the variables of each resulting cube, which over-approximates the exact
/// preimage.
pub fn preimage(sig: &Signature, rule: &TransitionRule, c: &Cube, budget: &mut Budget) -> Result<Vec<Cube>, LogicError> {
    let rename: HashMap<IVar, IVar> =
        rule.vars.iter().enumerate().map(|(i, v)| (*v, IVar::new(RULE_BASE + i as u32, v.sort))).collect();
    let rule_vars: Vec<IVar> = rule.vars.iter().map(|v| rename[v]).collect();
    let mut out: Vec<Cube> = Vec::new();
    for (place, fresh) in placements(&rule_vars, &c.vars) {
        let sub = |v: IVar| {
            let r = rename.get(&v).copied().unwrap_or(v);
            place.get(&r).copied().unwrap_or(r)
        };
        let guard: Vec<Lit> = rule.guard.iter().map(|l| l.map_vars(&mut |v| sub(v))).collect();
        let points = rule.point_updates.iter().map(|&(a, x, k)| (a, sub(x), k)).collect();
        let post = Post { rule, points };
        let body = reduce_updates(&UFormula::And(c.lits.iter().map(|l| post.lit(l)).collect()));
        let mut vars = c.vars.clone();
        vars.extend(&fresh);
        let mut parts = vec![body];
        for ug in &rule.uguards {
            parts.push(instantiate(&ug.vars, &ug.cond, &vars));
        }
        for lits in dnf_cubes(&Formula::and(parts), &guard, budget)? {
            let Some(cube) = Cube::new(vars.clone(), lits).normalize() else { continue };
            let Some(cube) = close_domains(sig, &cube) else { continue };
            let cube = cube.canonical();
            if !out.contains(&cube) {
                out.push(cube);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn placements_count_set_partitions_relative_to_cube() {
        let s = SortId(0);
        let t = SortId(1);
        let rv = [IVar::new(RULE_BASE, s), IVar::new(RULE_BASE + 1, s)];
        // no cube vars: {a}{b} or {ab}
        assert_eq!(placements(&rv, &[]).len(), 2);
        // one cube var z: each of a, b goes to z / own block / the other's block
        assert_eq!(placements(&rv, &[IVar::new(0, s)]).len(), 5);
        // other sort in the cube contributes nothing
        assert_eq!(placements(&rv, &[IVar::new(0, t)]).len(), 2);
    }
}
