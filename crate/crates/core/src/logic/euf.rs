use std::collections::HashMap;

use super::sig::{RelId, Signature};
use super::term::{Atom, Lit, Term};
use super::LogicError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Key {
    Leaf(Term),
    App(RelId, Vec<usize>),
    Bool(bool),
}

/// Congruence closure over ground element terms and relation
/// applications. Relation applications are function applications into a
/// two-valued sort whose elements are the `Bool` nodes.
///
/// Index variables are treated as pairwise distinct skolem constants, so
/// array reads at syntactically different indexes are unrelated leaves.
#[derive(Clone, Debug, Default)]
pub struct Euf {
    keys: HashMap<Key, usize>,
    parent: Vec<usize>,
    size: Vec<usize>,
    tag: Vec<Option<u32>>,
    uses: Vec<Vec<usize>>,
    apps: Vec<Option<(RelId, Vec<usize>)>>,
    table: HashMap<(RelId, Vec<usize>), usize>,
    diseqs: Vec<(usize, usize)>,
    conflict: bool,
}

const TAG_TRUE: u32 = u32::MAX;
const TAG_FALSE: u32 = u32::MAX - 1;

impl Euf {
    pub fn new() -> Self {
        Self::default()
    }

    fn find(&self, mut n: usize) -> usize {
        while self.parent[n] != n {
            n = self.parent[n];
        }
        n
    }

    fn find_mut(&mut self, n: usize) -> usize {
        let root = self.find(n);
        let mut cur = n;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn fresh(&mut self, key: Key, tag: Option<u32>, app: Option<(RelId, Vec<usize>)>) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        self.size.push(1);
        self.tag.push(tag);
        self.uses.push(Vec::new());
        self.apps.push(app);
        self.keys.insert(key, id);
        id
    }

    fn leaf(&mut self, t: Term) -> usize {
        if let Some(&n) = self.keys.get(&Key::Leaf(t)) {
            return n;
        }
        let tag = t.as_const().map(|c| c.0);
        self.fresh(Key::Leaf(t), tag, None)
    }

    fn boolean(&mut self, b: bool) -> usize {
        if let Some(&n) = self.keys.get(&Key::Bool(b)) {
            return n;
        }
        self.fresh(Key::Bool(b), Some(if b { TAG_TRUE } else { TAG_FALSE }), None)
    }

    fn signature(&mut self, app: usize) -> (RelId, Vec<usize>) {
        let (r, args) = self.apps[app].clone().expect("application node");
        (r, args.into_iter().map(|a| self.find_mut(a)).collect())
    }

    fn app(&mut self, r: RelId, args: &[Term]) -> usize {
        let arg_nodes: Vec<usize> = args.iter().map(|t| self.leaf(*t)).collect();
        let key = Key::App(r, arg_nodes.clone());
        if let Some(&n) = self.keys.get(&key) {
            return n;
        }
        let n = self.fresh(key, None, Some((r, arg_nodes.clone())));
        for &a in &arg_nodes {
            let ra = self.find_mut(a);
            self.uses[ra].push(n);
        }
        let sig = self.signature(n);
        if let Some(&other) = self.table.get(&sig) {
            if self.signature(other) == sig {
                self.merge(n, other);
                return n;
            }
        }
        self.table.insert(sig, n);
        n
    }

    fn merge(&mut self, a: usize, b: usize) {
        let mut pending = vec![(a, b)];
        while let Some((a, b)) = pending.pop() {
            let (ra, rb) = (self.find_mut(a), self.find_mut(b));
            if ra == rb {
                continue;
            }
            match (self.tag[ra], self.tag[rb]) {
                (Some(x), Some(y)) if x != y => {
                    self.conflict = true;
                    return;
                }
                _ => {}
            }
            let (small, large) = if self.size[ra] < self.size[rb] { (ra, rb) } else { (rb, ra) };
            self.parent[small] = large;
            self.size[large] += self.size[small];
            if self.tag[large].is_none() {
                self.tag[large] = self.tag[small];
            }
            let moved = std::mem::take(&mut self.uses[small]);
            for &u in &moved {
                let sig = self.signature(u);
                match self.table.get(&sig).copied() {
                    Some(v) if v != u && self.signature(v) == sig => pending.push((u, v)),
                    _ => {
                        self.table.insert(sig, u);
                    }
                }
            }
            self.uses[large].extend(moved);
        }
    }

    /// Adds a literal; returns `false` once the set is known inconsistent.
    pub fn assert_lit(&mut self, lit: &Lit) -> bool {
        if self.conflict {
            return false;
        }
        match &lit.atom {
            Atom::Eq(a, b) => {
                let (na, nb) = (self.leaf(*a), self.leaf(*b));
                if lit.pos {
                    self.merge(na, nb);
                } else {
                    self.diseqs.push((na, nb));
                }
            }
            Atom::IdxEq(a, b) => {
                if (a == b) != lit.pos {
                    self.conflict = true;
                }
            }
            Atom::Rel(r, args) => {
                let n = self.app(*r, args);
                let v = self.boolean(lit.pos);
                self.merge(n, v);
            }
        }
        !self.conflict
    }

    /// Whether the asserted literals are jointly satisfiable.
    pub fn is_sat(&mut self) -> bool {
        if self.conflict {
            return false;
        }
        let diseqs = std::mem::take(&mut self.diseqs);
        let ok = diseqs.iter().all(|&(a, b)| self.find_mut(a) != self.find_mut(b));
        self.diseqs = diseqs;
        ok
    }

    /// Whether two terms are known equal.
    pub fn equal(&mut self, a: Term, b: Term) -> bool {
        let (na, nb) = (self.leaf(a), self.leaf(b));
        self.find_mut(na) == self.find_mut(nb)
    }
}

/// Ground satisfiability of a conjunction of literals, with index
/// variables read as pairwise distinct constants.
pub fn euf_sat_cube(sig: &Signature, lits: &[Lit]) -> Result<bool, LogicError> {
    for l in lits {
        l.atom.check(sig)?;
    }
    Ok(sat_lits(lits))
}

pub(crate) fn sat_lits(lits: &[Lit]) -> bool {
    let mut cc = Euf::new();
    for l in lits {
        if !cc.assert_lit(l) {
            return false;
        }
    }
    cc.is_sat()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::sig::{SortKind};

    fn setup() -> (Signature, Term, Term, Term, Term, Term, RelId) {
        let mut sig = Signature::new();
        let s = sig.add_sort("S", SortKind::Element).unwrap();
        let a = sig.add_const(s, "A").unwrap();
        let b = sig.add_const(s, "B").unwrap();
        let x = sig.add_global("x", s).unwrap();
        let y = sig.add_global("y", s).unwrap();
        let z = sig.add_global("z", s).unwrap();
        let r = sig.add_rel("R", vec![s, s]).unwrap();
        (sig, Term::Const(a), Term::Const(b), Term::Global(x), Term::Global(y), Term::Global(z), r)
    }

    #[test]
    fn repeated_equality_is_sat() {
        let (sig, a, _, x, ..) = setup();
        assert!(euf_sat_cube(&sig, &[Lit::eq(x, a), Lit::eq(x, a)]).unwrap());
    }

    #[test]
    fn distinct_constants_clash() {
        let (sig, a, b, x, ..) = setup();
        assert!(!euf_sat_cube(&sig, &[Lit::eq(x, a), Lit::eq(x, b)]).unwrap());
    }

    #[test]
    fn congruence_on_relation_arguments() {
        let (sig, _, _, x, y, z, r) = setup();
        let lits = [
            Lit::pos(Atom::Rel(r, vec![x, y])),
            Lit::neg(Atom::Rel(r, vec![z, y])),
            Lit::eq(x, z),
        ];
        assert!(!euf_sat_cube(&sig, &lits).unwrap());
        assert!(euf_sat_cube(&sig, &lits[..2]).unwrap());
    }

    #[test]
    fn congruence_found_after_late_merge() {
        let (sig, a, _, x, y, z, r) = setup();
        let lits = [
            Lit::pos(Atom::Rel(r, vec![x, a])),
            Lit::neg(Atom::Rel(r, vec![y, z])),
            Lit::eq(z, a),
            Lit::eq(y, x),
        ];
        assert!(!euf_sat_cube(&sig, &lits).unwrap());
    }

    #[test]
    fn disequality_through_transitivity() {
        let (sig, _, _, x, y, z, _) = setup();
        let lits = [Lit::eq(x, y), Lit::eq(y, z), Lit::ne(x, z)];
        assert!(!euf_sat_cube(&sig, &lits).unwrap());
    }

    #[test]
    fn ill_typed_literal_is_rejected() {
        let (mut sig, a, ..) = setup();
        let t = sig.add_sort("T", SortKind::Element).unwrap();
        let c = sig.add_const(t, "C").unwrap();
        assert!(matches!(
            euf_sat_cube(&sig, &[Lit::eq(a, Term::Const(c))]),
            Err(LogicError::IllTyped(_))
        ));
    }
}
