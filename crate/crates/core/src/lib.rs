//! Safety checking for parameterised multi-agent systems: a modelling
//! language, its encoding into array-based transition systems, symbolic
//! backward reachability, an explicit-state oracle and MCMT export.

pub mod encoder;
pub mod engine;
pub mod logic;
pub mod mcmt;
pub mod model;
pub mod oracle;

pub use encoder::{encode, model_goal, AbPmas, EncodeError, Semantics, TransitionRule};
pub use engine::{breach, BreachOptions, BreachReport, TraceStep, UnknownReason, Verdict};
pub use logic::{Cube, LogicError, Signature, StateFormula};
pub use model::{parse_pmas, Model, Positioned};
