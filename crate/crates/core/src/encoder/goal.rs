use std::collections::HashSet;

use crate::logic::{alldiff_partitions, dnf_cubes, Budget, Cube, IVar, StateFormula};
use crate::model::{MFormula, MIdx, MF};

use super::translate::translate_agent_formula;
use super::{AbPmas, EncodeError};

fn mentions_self(f: &MF) -> bool {
    match f {
        MF::True | MF::False => false,
        MF::Eq(a, b) => [a, b].iter().any(|t| matches!(t, crate::model::MTerm::Read { idx: MIdx::SelfId, .. })),
        MF::Rel(_, args) => args.iter().any(|t| matches!(t, crate::model::MTerm::Read { idx: MIdx::SelfId, .. })),
        MF::IdxEq(a, b) => *a == MIdx::SelfId || *b == MIdx::SelfId,
        MF::Not(inner) => mentions_self(inner),
        MF::And(ps) | MF::Or(ps) => ps.iter().any(mentions_self),
    }
}

/// Translate a goal into a disjunction of differentiated cubes: one cube
/// per consistent disjunct of the DNF, for every way of identifying its
/// index variables.
pub fn encode_goal(ab: &AbPmas, f: &MFormula) -> Result<StateFormula, EncodeError> {
    if mentions_self(&f.body) {
        return Err(EncodeError::SelfInGoal);
    }
    let mut fresh = 0;
    let tr = translate_agent_formula(ab, f, None, &mut fresh);
    let mut seen = HashSet::new();
    let mut cubes = Vec::new();
    let mut budget = Budget::default();
    for p in alldiff_partitions(&tr.vars) {
        let mut reps: Vec<IVar> = p.values().copied().collect();
        reps.sort();
        reps.dedup();
        let g = tr.formula.subst(&p);
        for lits in dnf_cubes(&g, &[], &mut budget)? {
            let Some(c) = Cube::new(reps.clone(), lits).normalize() else { continue };
            let c = c.canonical();
            if seen.insert(c.clone()) {
                cubes.push(c);
            }
        }
    }
    Ok(StateFormula { cubes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::encode_interleaved;
    use crate::logic::{Lit, Term};
    use crate::model::{parse_formula, parse_pmas, Model};

    const SRC: &str = "
        sort Loc { init, target }
        template Env env { }
        template Att { var loc: Loc = init
            action go : local { eff: loc := target } }
    ";

    fn goal(src: &str) -> (AbPmas, StateFormula) {
        let m = Model::new(&parse_pmas(SRC).unwrap()).unwrap();
        let ab = encode_interleaved(&m).unwrap();
        let f = m.resolve_goal(&parse_formula(src, &m.source).unwrap()).unwrap();
        let g = encode_goal(&ab, &f).unwrap();
        (ab, g)
    }

    #[test]
    fn single_index_goal() {
        let (ab, g) = goal("loc[j] = target");
        assert_eq!(g.cubes.len(), 1);
        let z = g.cubes[0].vars[0];
        let loc = ab.sig.array_by_name("locATT").unwrap();
        let target = ab.sig.const_by_name("target").unwrap();
        assert_eq!(g.cubes[0].lits, vec![Lit::eq(Term::Read(loc, z), Term::Const(target))]);
    }

    #[test]
    fn distinct_pair_goal_is_one_cube() {
        let (_, g) = goal("loc[j1] = target and loc[j2] = target and j1 != j2");
        assert_eq!(g.cubes.len(), 1);
        assert_eq!(g.cubes[0].vars.len(), 2);
    }

    #[test]
    fn unconstrained_pair_expands_over_partitions() {
        let (_, g) = goal("loc[j1] = target and loc[j2] = target");
        let mut sizes: Vec<usize> = g.cubes.iter().map(|c| c.vars.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2]);
    }

    #[test]
    fn false_goal_has_no_cubes() {
        let (_, g) = goal("false");
        assert!(g.is_bottom());
    }
}
