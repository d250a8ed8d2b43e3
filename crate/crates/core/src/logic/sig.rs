use std::collections::HashMap;
use std::fmt;

use super::LogicError;

macro_rules! id_type {
    ($name:ident) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(pub u32);

        impl $name {
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }
    };
}

id_type!(SortId);
id_type!(ConstId);
id_type!(RelId);
id_type!(GlobalId);
id_type!(ArrayId);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SortKind {
    Index,
    Element,
    Action,
    Phase,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortDecl {
    pub name: String,
    pub kind: SortKind,
    pub constants: Vec<ConstId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstDecl {
    pub name: String,
    pub sort: SortId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelDecl {
    pub name: String,
    pub args: Vec<SortId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalDecl {
    pub name: String,
    pub sort: SortId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrayDecl {
    pub name: String,
    pub index: SortId,
    pub elem: SortId,
}

/// Sorts, constants and relations, together with the state vocabulary
/// (global variables and arrays) of an array-based system.
///
/// Constants of the same non-index sort are pairwise distinct. Index sorts
/// carry no constants.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    sorts: Vec<SortDecl>,
    consts: Vec<ConstDecl>,
    rels: Vec<RelDecl>,
    globals: Vec<GlobalDecl>,
    arrays: Vec<ArrayDecl>,
    names: HashMap<String, Symbol>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Symbol {
    Sort(SortId),
    Const(ConstId),
    Rel(RelId),
    Global(GlobalId),
    Array(ArrayId),
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    fn claim(&mut self, name: &str, sym: Symbol) -> Result<(), LogicError> {
        if self.names.contains_key(name) {
            return Err(LogicError::Duplicate(name.to_string()));
        }
        self.names.insert(name.to_string(), sym);
        Ok(())
    }

    pub fn add_sort(&mut self, name: &str, kind: SortKind) -> Result<SortId, LogicError> {
        let id = SortId(self.sorts.len() as u32);
        self.claim(name, Symbol::Sort(id))?;
        self.sorts.push(SortDecl { name: name.to_string(), kind, constants: Vec::new() });
        Ok(id)
    }

    pub fn add_const(&mut self, sort: SortId, name: &str) -> Result<ConstId, LogicError> {
        if self.sorts[sort.index()].kind == SortKind::Index {
            return Err(LogicError::IllTyped(format!(
                "index sort {} cannot declare constant {name}",
                self.sorts[sort.index()].name
            )));
        }
        let id = ConstId(self.consts.len() as u32);
        self.claim(name, Symbol::Const(id))?;
        self.consts.push(ConstDecl { name: name.to_string(), sort });
        self.sorts[sort.index()].constants.push(id);
        Ok(id)
    }

    pub fn add_rel(&mut self, name: &str, args: Vec<SortId>) -> Result<RelId, LogicError> {
        if args.is_empty() {
            return Err(LogicError::IllTyped(format!("relation {name} has arity 0")));
        }
        if let Some(s) = args.iter().find(|s| self.sorts[s.index()].kind == SortKind::Index) {
            return Err(LogicError::IllTyped(format!(
                "relation {name} takes index sort {}",
                self.sorts[s.index()].name
            )));
        }
        let id = RelId(self.rels.len() as u32);
        self.claim(name, Symbol::Rel(id))?;
        self.rels.push(RelDecl { name: name.to_string(), args });
        Ok(id)
    }

    pub fn add_global(&mut self, name: &str, sort: SortId) -> Result<GlobalId, LogicError> {
        let id = GlobalId(self.globals.len() as u32);
        self.claim(name, Symbol::Global(id))?;
        self.globals.push(GlobalDecl { name: name.to_string(), sort });
        Ok(id)
    }

    pub fn add_array(&mut self, name: &str, index: SortId, elem: SortId) -> Result<ArrayId, LogicError> {
        if self.sorts[index.index()].kind != SortKind::Index {
            return Err(LogicError::IllTyped(format!("array {name} is not indexed by an index sort")));
        }
        let id = ArrayId(self.arrays.len() as u32);
        self.claim(name, Symbol::Array(id))?;
        self.arrays.push(ArrayDecl { name: name.to_string(), index, elem });
        Ok(id)
    }

    pub fn sort(&self, id: SortId) -> &SortDecl {
        &self.sorts[id.index()]
    }
    pub fn constant(&self, id: ConstId) -> &ConstDecl {
        &self.consts[id.index()]
    }
    pub fn rel(&self, id: RelId) -> &RelDecl {
        &self.rels[id.index()]
    }
    pub fn global(&self, id: GlobalId) -> &GlobalDecl {
        &self.globals[id.index()]
    }
    pub fn array(&self, id: ArrayId) -> &ArrayDecl {
        &self.arrays[id.index()]
    }

    pub fn sorts(&self) -> impl Iterator<Item = (SortId, &SortDecl)> {
        self.sorts.iter().enumerate().map(|(i, s)| (SortId(i as u32), s))
    }
    pub fn constants(&self) -> impl Iterator<Item = (ConstId, &ConstDecl)> {
        self.consts.iter().enumerate().map(|(i, c)| (ConstId(i as u32), c))
    }
    pub fn rels(&self) -> impl Iterator<Item = (RelId, &RelDecl)> {
        self.rels.iter().enumerate().map(|(i, r)| (RelId(i as u32), r))
    }
    pub fn globals(&self) -> impl Iterator<Item = (GlobalId, &GlobalDecl)> {
        self.globals.iter().enumerate().map(|(i, g)| (GlobalId(i as u32), g))
    }
    pub fn arrays(&self) -> impl Iterator<Item = (ArrayId, &ArrayDecl)> {
        self.arrays.iter().enumerate().map(|(i, a)| (ArrayId(i as u32), a))
    }

    pub fn num_consts(&self) -> usize {
        self.consts.len()
    }
    pub fn num_globals(&self) -> usize {
        self.globals.len()
    }
    pub fn num_arrays(&self) -> usize {
        self.arrays.len()
    }

    pub fn sort_by_name(&self, name: &str) -> Option<SortId> {
        match self.names.get(name) {
            Some(Symbol::Sort(s)) => Some(*s),
            _ => None,
        }
    }
    pub fn const_by_name(&self, name: &str) -> Option<ConstId> {
        match self.names.get(name) {
            Some(Symbol::Const(c)) => Some(*c),
            _ => None,
        }
    }
    pub fn rel_by_name(&self, name: &str) -> Option<RelId> {
        match self.names.get(name) {
            Some(Symbol::Rel(r)) => Some(*r),
            _ => None,
        }
    }
    pub fn global_by_name(&self, name: &str) -> Option<GlobalId> {
        match self.names.get(name) {
            Some(Symbol::Global(g)) => Some(*g),
            _ => None,
        }
    }
    pub fn array_by_name(&self, name: &str) -> Option<ArrayId> {
        match self.names.get(name) {
            Some(Symbol::Array(a)) => Some(*a),
            _ => None,
        }
    }

    pub fn const_name(&self, id: ConstId) -> &str {
        &self.consts[id.index()].name
    }
}

impl fmt::Display for SortKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SortKind::Index => "index",
            SortKind::Element => "element",
            SortKind::Action => "action",
            SortKind::Phase => "phase",
        };
        f.write_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_names_are_unique_across_sorts() {
        let mut sig = Signature::new();
        let a = sig.add_sort("Loc", SortKind::Element).unwrap();
        let b = sig.add_sort("Other", SortKind::Element).unwrap();
        sig.add_const(a, "A").unwrap();
        assert_eq!(sig.add_const(b, "A"), Err(LogicError::Duplicate("A".into())));
    }

    #[test]
    fn index_sorts_reject_constants_and_relations() {
        let mut sig = Signature::new();
        let i = sig.add_sort("Idx", SortKind::Index).unwrap();
        assert!(sig.add_const(i, "k").is_err());
        assert!(sig.add_rel("R", vec![i]).is_err());
        assert!(sig.add_rel("Q", vec![]).is_err());
    }
}
