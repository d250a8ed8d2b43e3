//! Parameterised multi-agent systems: the modelling language, validation,
//! the resolved model and the satisfaction relation for agent formulas.

pub mod ast;
pub mod diag;
pub mod eval;
pub mod parser;
pub mod printer;
pub mod resolved;
pub mod validate;

pub use ast::{ActionDecl, ActionKind, AgentFormula, ElemTerm, IndexTerm, Pmas, RelationDef, SortDef, Template, VarDecl};
pub use diag::{Diagnostic, Location, Positioned, SourceMap};
pub use eval::{eval_agent_formula, Agent, RelInterpretation, Snapshot, Who};
pub use parser::{parse_document, parse_formula, parse_pmas};
pub use printer::{print_formula, print_pmas};
pub use resolved::{MAction, MFormula, MIdx, MTemplate, MTerm, Model, SyncAction, MF};
pub use validate::validate_pmas;
