//! Shared inputs for the benchmarks.

use pmas_core::encoder::{encode, model_goal, AbPmas, Semantics};
use pmas_core::logic::StateFormula;
use pmas_core::model::{parse_pmas, Model};

pub const CANNON: &str = include_str!("../../core/fixtures/cannon.pmas");
pub const TRAINS: &str = include_str!("../../core/fixtures/trains.pmas");

pub fn load(src: &str, semantics: Semantics) -> (Model, AbPmas, StateFormula) {
    let m = Model::new(&parse_pmas(src).expect("fixture parses")).expect("fixture validates");
    let ab = encode(&m, semantics).expect("fixture encodes");
    let g = model_goal(&m, &ab).expect("goal encodes");
    (m, ab, g)
}
