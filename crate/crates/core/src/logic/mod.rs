//! Many-sorted logic kernel: signatures, terms, formulas, ground EUF
//! satisfiability and the exists-forall decision procedure.

pub mod ef;
pub mod euf;
pub mod formula;
pub mod ground;
pub mod sig;
pub mod term;
pub mod update;

pub use ef::{alldiff_partitions, entails_cube, sat_differentiated, sat_exists_forall, EfFormula};
pub use euf::{euf_sat_cube, Euf};
pub use formula::{Cube, Formula, StateFormula};
pub use ground::{dnf_cubes, sat_ground, Budget, Facts, DEFAULT_CUBE_BUDGET};
pub use sig::{ArrayId, ConstId, GlobalId, RelId, Signature, SortId, SortKind};
pub use term::{Atom, IVar, Lit, Show, Term};
pub use update::{check_partition, reduce_updates, Lambda, UAtom, UFormula, UTerm};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("ill-typed input: {0}")]
    IllTyped(String),
    #[error("duplicate symbol `{0}`")]
    Duplicate(String),
    #[error("cube budget of {limit} exhausted")]
    Budget { limit: usize },
    #[error("case partition is not {0}")]
    Partition(&'static str),
}
