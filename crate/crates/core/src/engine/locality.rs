use crate::encoder::{AbPmas, Semantics};
use crate::logic::{Atom, Lit, Show, StateFormula};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalityReport {
    pub protocols_local: bool,
    pub goal_local: bool,
    pub guaranteed_termination: bool,
    /// Human-readable description of each non-local literal.
    pub offending: Vec<String>,
}

fn local(l: &Lit) -> bool {
    matches!(l.atom, Atom::IdxEq(..)) || l.index_vars().len() <= 1
}

/// A literal is local when it mentions at most one index variable (index
/// equalities aside). Backward search is guaranteed to terminate for
/// interleaved encodings whose rule guards and goal are all local.
pub fn check_locality(ab: &AbPmas, goal: &StateFormula) -> LocalityReport {
    let mut offending = Vec::new();
    let mut protocols_local = true;
    for r in &ab.rules {
        for l in r.guard.iter().filter(|l| !local(l)) {
            protocols_local = false;
            offending.push(format!("{}: {}", r.label, Show(&ab.sig, l)));
        }
        for ug in &r.uguards {
            ug.cond.for_each_lit(&mut |l| {
                if !local(l) {
                    protocols_local = false;
                    offending.push(format!("{}: {}", r.label, Show(&ab.sig, l)));
                }
            });
        }
    }
    let mut goal_local = true;
    for c in &goal.cubes {
        for l in c.lits.iter().filter(|l| !local(l)) {
            goal_local = false;
            offending.push(format!("goal: {}", Show(&ab.sig, l)));
        }
    }
    LocalityReport {
        protocols_local,
        goal_local,
        guaranteed_termination: ab.semantics == Semantics::Interleaved && protocols_local && goal_local,
        offending,
    }
}
