// Regenerates fixtures/cannon.mcmt after an intentional format change.
use pmas_core::encoder::{encode, model_goal, Semantics};
use pmas_core::mcmt::emit_mcmt;
use pmas_core::model::{parse_pmas, Model};

fn main() {
    let m = Model::new(&parse_pmas(include_str!("../fixtures/cannon.pmas")).unwrap()).unwrap();
    let ab = encode(&m, Semantics::Interleaved).unwrap();
    let g = model_goal(&m, &ab).unwrap();
    print!("{}", emit_mcmt(&ab, &g).unwrap());
}
