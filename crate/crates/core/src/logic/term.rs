use std::fmt;

use super::sig::{ArrayId, ConstId, GlobalId, RelId, Signature, SortId};
use super::LogicError;

/// An index variable. Its sort travels with it so that substitutions and
/// instantiations never need a separate typing context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IVar {
    pub id: u32,
    pub sort: SortId,
}

impl IVar {
    pub fn new(id: u32, sort: SortId) -> Self {
        IVar { id, sort }
    }
}

/// Element-level term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Global(GlobalId),
    Read(ArrayId, IVar),
    Const(ConstId),
}

impl Term {
    pub fn sort(&self, sig: &Signature) -> SortId {
        match *self {
            Term::Const(c) => sig.constant(c).sort,
            Term::Global(g) => sig.global(g).sort,
            Term::Read(a, _) => sig.array(a).elem,
        }
    }

    pub fn index_var(&self) -> Option<IVar> {
        match *self {
            Term::Read(_, v) => Some(v),
            _ => None,
        }
    }

    pub fn map_vars(&self, f: &mut impl FnMut(IVar) -> IVar) -> Term {
        match *self {
            Term::Read(a, v) => Term::Read(a, f(v)),
            t => t,
        }
    }

    pub fn as_const(&self) -> Option<ConstId> {
        match *self {
            Term::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn check(&self, sig: &Signature) -> Result<(), LogicError> {
        if let Term::Read(a, v) = *self {
            let decl = sig.array(a);
            if decl.index != v.sort {
                return Err(LogicError::IllTyped(format!(
                    "array {} read at index of sort {}",
                    decl.name,
                    sig.sort(v.sort).name
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// Element equality; constructors put a constant, if any, on the right.
    Eq(Term, Term),
    IdxEq(IVar, IVar),
    Rel(RelId, Vec<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub atom: Atom,
    pub pos: bool,
}

impl Atom {
    pub fn eq(a: Term, b: Term) -> Atom {
        match (a, b) {
            (Term::Const(_), Term::Const(_)) if b < a => Atom::Eq(b, a),
            (Term::Const(_), _) => Atom::Eq(b, a),
            (_, Term::Const(_)) => Atom::Eq(a, b),
            _ if b < a => Atom::Eq(b, a),
            _ => Atom::Eq(a, b),
        }
    }

    pub fn idx_eq(a: IVar, b: IVar) -> Atom {
        if b < a {
            Atom::IdxEq(b, a)
        } else {
            Atom::IdxEq(a, b)
        }
    }

    pub fn map_vars(&self, f: &mut impl FnMut(IVar) -> IVar) -> Atom {
        match self {
            Atom::Eq(a, b) => Atom::eq(a.map_vars(f), b.map_vars(f)),
            Atom::IdxEq(a, b) => Atom::idx_eq(f(*a), f(*b)),
            Atom::Rel(r, args) => Atom::Rel(*r, args.iter().map(|t| t.map_vars(f)).collect()),
        }
    }

    pub fn map_terms(&self, f: &mut impl FnMut(Term) -> Term) -> Atom {
        match self {
            Atom::Eq(a, b) => Atom::eq(f(*a), f(*b)),
            Atom::IdxEq(a, b) => Atom::IdxEq(*a, *b),
            Atom::Rel(r, args) => Atom::Rel(*r, args.iter().map(|t| f(*t)).collect()),
        }
    }

    pub fn index_vars(&self, out: &mut Vec<IVar>) {
        match self {
            Atom::Eq(a, b) => out.extend(a.index_var().into_iter().chain(b.index_var())),
            Atom::IdxEq(a, b) => out.extend([*a, *b]),
            Atom::Rel(_, args) => out.extend(args.iter().filter_map(|t| t.index_var())),
        }
    }

    pub fn check(&self, sig: &Signature) -> Result<(), LogicError> {
        match self {
            Atom::Eq(a, b) => {
                a.check(sig)?;
                b.check(sig)?;
                if a.sort(sig) != b.sort(sig) {
                    return Err(LogicError::IllTyped(format!(
                        "equality between sorts {} and {}",
                        sig.sort(a.sort(sig)).name,
                        sig.sort(b.sort(sig)).name
                    )));
                }
            }
            Atom::IdxEq(a, b) => {
                if a.sort != b.sort {
                    return Err(LogicError::IllTyped("index equality across sorts".into()));
                }
            }
            Atom::Rel(r, args) => {
                let decl = sig.rel(*r);
                if decl.args.len() != args.len() {
                    return Err(LogicError::IllTyped(format!("arity mismatch for {}", decl.name)));
                }
                for (t, s) in args.iter().zip(&decl.args) {
                    t.check(sig)?;
                    if t.sort(sig) != *s {
                        return Err(LogicError::IllTyped(format!(
                            "argument of sort {} passed to {}",
                            sig.sort(t.sort(sig)).name,
                            decl.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

impl Lit {
    pub fn new(atom: Atom, pos: bool) -> Lit {
        Lit { atom, pos }
    }
    pub fn pos(atom: Atom) -> Lit {
        Lit { atom, pos: true }
    }
    pub fn neg(atom: Atom) -> Lit {
        Lit { atom, pos: false }
    }
    pub fn eq(a: Term, b: Term) -> Lit {
        Lit::pos(Atom::eq(a, b))
    }
    pub fn ne(a: Term, b: Term) -> Lit {
        Lit::neg(Atom::eq(a, b))
    }
    pub fn negate(&self) -> Lit {
        Lit { atom: self.atom.clone(), pos: !self.pos }
    }
    pub fn map_vars(&self, f: &mut impl FnMut(IVar) -> IVar) -> Lit {
        Lit { atom: self.atom.map_vars(f), pos: self.pos }
    }
    pub fn index_vars(&self) -> Vec<IVar> {
        let mut v = Vec::new();
        self.atom.index_vars(&mut v);
        v.sort();
        v.dedup();
        v
    }
}

/// Pretty-printer that resolves ids against a signature.
pub struct Show<'a, T: ?Sized>(pub &'a Signature, pub &'a T);

impl fmt::Display for Show<'_, Term> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = self.0;
        match *self.1 {
            Term::Const(c) => write!(f, "{}", sig.constant(c).name),
            Term::Global(g) => write!(f, "{}", sig.global(g).name),
            Term::Read(a, v) => write!(f, "{}[z{}]", sig.array(a).name, v.id),
        }
    }
}

impl fmt::Display for Show<'_, Lit> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = self.0;
        let lit = self.1;
        match &lit.atom {
            Atom::Eq(a, b) => {
                let op = if lit.pos { "=" } else { "!=" };
                write!(f, "{} {op} {}", Show(sig, a), Show(sig, b))
            }
            Atom::IdxEq(a, b) => {
                let op = if lit.pos { "=" } else { "!=" };
                write!(f, "z{} {op} z{}", a.id, b.id)
            }
            Atom::Rel(r, args) => {
                if !lit.pos {
                    f.write_str("not ")?;
                }
                write!(f, "{}(", sig.rel(*r).name)?;
                for (i, t) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", Show(sig, t))?;
                }
                f.write_str(")")
            }
        }
    }
}
