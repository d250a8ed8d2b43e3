use std::collections::HashMap;

use super::euf::sat_lits;
use super::formula::Formula;
use super::sig::{ConstId, Signature};
use super::term::{Atom, Lit, Term};
use super::LogicError;

pub const DEFAULT_CUBE_BUDGET: usize = 100_000;

/// Counts search nodes across one or more solver calls.
#[derive(Clone, Debug)]
pub struct Budget {
    limit: usize,
    used: usize,
}

impl Budget {
    pub fn new(limit: usize) -> Self {
        Budget { limit, used: 0 }
    }

    pub fn unlimited() -> Self {
        Budget { limit: usize::MAX, used: 0 }
    }

    pub fn used(&self) -> usize {
        self.used
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn tick(&mut self) -> Result<(), LogicError> {
        self.used += 1;
        if self.used > self.limit {
            Err(LogicError::Budget { limit: self.limit })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_CUBE_BUDGET)
    }
}

/// A partial assignment built from asserted literals, used for cheap
/// three-valued evaluation during search. It only detects conflicts that
/// follow from literal identity and `t = c` definitions; congruence closure
/// is run at the leaves.
#[derive(Clone, Debug, Default)]
pub struct Facts {
    atoms: HashMap<Atom, bool>,
    defs: HashMap<Term, ConstId>,
    pub lits: Vec<Lit>,
}

impl Facts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_lits(lits: &[Lit]) -> Option<Facts> {
        let mut f = Facts::new();
        for l in lits {
            if !f.add(l) {
                return None;
            }
        }
        Some(f)
    }

    fn resolve(&self, t: Term) -> Term {
        match t {
            Term::Const(_) => t,
            _ => self.defs.get(&t).map(|c| Term::Const(*c)).unwrap_or(t),
        }
    }

    fn resolved_atom(&self, a: &Atom) -> Atom {
        match a {
            Atom::Rel(..) | Atom::Eq(..) => a.map_terms(&mut |t| self.resolve(t)),
            Atom::IdxEq(..) => a.clone(),
        }
    }

    pub fn value(&self, lit: &Lit) -> Option<bool> {
        let v = match &lit.atom {
            Atom::IdxEq(a, b) => Some(a == b),
            Atom::Eq(a, b) => {
                let (ra, rb) = (self.resolve(*a), self.resolve(*b));
                if ra == rb {
                    Some(true)
                } else if let (Term::Const(_), Term::Const(_)) = (ra, rb) {
                    Some(false)
                } else {
                    self.atoms
                        .get(&lit.atom)
                        .or_else(|| self.atoms.get(&Atom::eq(ra, rb)))
                        .copied()
                }
            }
            Atom::Rel(..) => self
                .atoms
                .get(&lit.atom)
                .or_else(|| self.atoms.get(&self.resolved_atom(&lit.atom)))
                .copied(),
        };
        v.map(|v| v == lit.pos)
    }

    /// Record a literal; `false` signals a conflict.
    pub fn add(&mut self, lit: &Lit) -> bool {
        if let Some(v) = self.value(lit) {
            return v;
        }
        if let (true, Atom::Eq(t, Term::Const(c))) = (lit.pos, &lit.atom) {
            self.defs.insert(*t, *c);
        }
        self.atoms.insert(lit.atom.clone(), lit.pos);
        let resolved = self.resolved_atom(&lit.atom);
        if resolved != lit.atom {
            self.atoms.insert(resolved, lit.pos);
        }
        self.lits.push(lit.clone());
        true
    }

    pub fn eval(&self, f: &Formula) -> Option<bool> {
        match f {
            Formula::True => Some(true),
            Formula::False => Some(false),
            Formula::Lit(l) => self.value(l),
            Formula::Not(inner) => self.eval(inner).map(|v| !v),
            Formula::And(ps) => {
                let mut all = true;
                for p in ps {
                    match self.eval(p) {
                        Some(false) => return Some(false),
                        None => all = false,
                        _ => {}
                    }
                }
                all.then_some(true)
            }
            Formula::Or(ps) => {
                let mut none = true;
                for p in ps {
                    match self.eval(p) {
                        Some(true) => return Some(true),
                        None => none = false,
                        _ => {}
                    }
                }
                none.then_some(false)
            }
        }
    }
}

enum Flow {
    Continue,
    Stop,
}

/// Depth-first enumeration of the satisfiable DNF cubes of an NNF formula.
/// `leaf` receives the literal set of each consistent leaf and returns
/// `true` to stop the search.
fn search<'a>(
    mut todo: Vec<&'a Formula>,
    mut facts: Facts,
    budget: &mut Budget,
    leaf: &mut dyn FnMut(&Facts) -> bool,
) -> Result<Flow, LogicError> {
    budget.tick()?;
    let mut ors: Vec<&'a Formula> = Vec::new();
    loop {
        while let Some(f) = todo.pop() {
            match f {
                Formula::True => {}
                Formula::False => return Ok(Flow::Continue),
                Formula::Lit(l) => {
                    if !facts.add(l) {
                        return Ok(Flow::Continue);
                    }
                }
                Formula::And(ps) => todo.extend(ps.iter()),
                Formula::Or(_) => ors.push(f),
                Formula::Not(_) => unreachable!("search expects negation normal form"),
            }
        }
        let mut kept: Vec<&'a Formula> = Vec::with_capacity(ors.len());
        for or in ors.drain(..) {
            let Formula::Or(alts) = or else { unreachable!() };
            let mut open = 0;
            let mut last = None;
            let mut satisfied = false;
            for a in alts {
                match facts.eval(a) {
                    Some(true) => {
                        satisfied = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        open += 1;
                        last = Some(a);
                    }
                }
            }
            if satisfied {
                continue;
            }
            match open {
                0 => return Ok(Flow::Continue),
                1 => todo.push(last.unwrap()),
                _ => kept.push(or),
            }
        }
        ors = kept;
        if todo.is_empty() {
            break;
        }
    }
    if ors.is_empty() {
        if sat_lits(&facts.lits) && leaf(&facts) {
            return Ok(Flow::Stop);
        }
        return Ok(Flow::Continue);
    }
    let open_count = |f: &Formula| match f {
        Formula::Or(alts) => alts.iter().filter(|a| facts.eval(a).is_none()).count(),
        _ => 0,
    };
    let pick = (0..ors.len()).min_by_key(|&i| open_count(ors[i])).unwrap();
    let Formula::Or(alts) = ors.swap_remove(pick) else { unreachable!() };
    for a in alts {
        if facts.eval(a) == Some(false) {
            continue;
        }
        let mut next = ors.clone();
        next.push(a);
        if let Flow::Stop = search(next, facts.clone(), budget, leaf)? {
            return Ok(Flow::Stop);
        }
    }
    Ok(Flow::Continue)
}

/// Satisfiability of a quantifier-free formula with index variables read as
/// distinct constants.
pub fn sat_ground(sig: &Signature, f: &Formula, budget: &mut Budget) -> Result<bool, LogicError> {
    f.check(sig)?;
    sat_ground_unchecked(f, &[], budget)
}

pub(crate) fn sat_ground_unchecked(f: &Formula, base: &[Lit], budget: &mut Budget) -> Result<bool, LogicError> {
    let Some(facts) = Facts::from_lits(base) else {
        return Ok(false);
    };
    let n = f.nnf();
    let mut found = false;
    search(vec![&n], facts, budget, &mut |_| {
        found = true;
        true
    })?;
    Ok(found)
}

/// The consistent cubes of the disjunctive normal form of `f`, each
/// extended with the literals of `base`.
pub fn dnf_cubes(f: &Formula, base: &[Lit], budget: &mut Budget) -> Result<Vec<Vec<Lit>>, LogicError> {
    let Some(facts) = Facts::from_lits(base) else {
        return Ok(Vec::new());
    };
    let n = f.nnf();
    let mut out = Vec::new();
    search(vec![&n], facts, budget, &mut |facts| {
        out.push(facts.lits.clone());
        false
    })?;
    Ok(out)
}
