//! The encoded rules and the explicit-state step relation describe the same
//! global steps.
mod common;

use std::collections::{HashSet, VecDeque};

use common::{concrete_rels, encode_state, index_sizes, random_interpretation, random_model, rng, AbState, Concrete};
use pmas_core::encoder::{encode, AbPmas, Semantics};
use pmas_core::oracle::{State, Stepper};

/// States at phase P0 reachable from `s` through at least one rule and no
/// intermediate P0 state.
fn rule_successors(ab: &AbPmas, c: &Concrete<'_>, s: &AbState) -> HashSet<AbState> {
    let p0 = ab.phases.p0;
    let mut out = HashSet::new();
    let mut seen = HashSet::new();
    let mut todo = vec![s.clone()];
    while let Some(cur) = todo.pop() {
        for r in &ab.rules {
            for next in c.step(r, &cur) {
                if next.globals[ab.phase.index()] == p0 {
                    out.insert(next);
                } else if seen.insert(next.clone()) {
                    todo.push(next);
                }
            }
        }
    }
    out
}

/// Returns the number of global steps compared.
fn agree_on(seed: u64, semantics: Semantics) -> usize {
    let (m, src) = random_model(seed);
    let ab = encode(&m, semantics).unwrap();
    let mut r = rng(seed ^ 0x5eed);
    let counts: Vec<usize> = (0..m.templates.len()).map(|t| if t == m.env { 0 } else { 1 + (seed as usize + t) % 2 }).collect();
    let i0 = random_interpretation(&m, &mut r);
    let conc = Concrete { ab: &ab, sizes: index_sizes(&m, &ab, &counts), rels: concrete_rels(&m, &ab, &i0) };
    let st = Stepper { m: &m, semantics, i0: &i0 };
    let mut queue = VecDeque::from([State::initial(&m, &counts)]);
    let mut seen = HashSet::new();
    let mut checked = 0;
    let mut steps = 0;
    while let Some(s) = queue.pop_front() {
        if checked == 25 || !seen.insert(s.clone()) {
            continue;
        }
        checked += 1;
        let succ = st.successors(&s);
        let via_oracle: HashSet<AbState> = succ.iter().map(|(_, n)| encode_state(&m, &ab, n)).collect();
        let via_rules = rule_successors(&ab, &conc, &encode_state(&m, &ab, &s));
        steps += via_rules.len();
        assert_eq!(via_oracle, via_rules, "seed {seed} {semantics} counts {counts:?}\n{src}\nstate {s:?}");
        queue.extend(succ.into_iter().map(|(_, n)| n));
    }
    steps
}

#[test]
fn interleaved_rules_match_oracle_steps() {
    let steps: usize = (0..200).map(|seed| agree_on(seed, Semantics::Interleaved)).sum();
    assert!(steps > 500, "only {steps} steps compared");
}

#[test]
fn concurrent_rules_match_oracle_steps() {
    let steps: usize = (0..200).map(|seed| agree_on(seed, Semantics::Concurrent)).sum();
    assert!(steps > 300, "only {steps} steps compared");
}
