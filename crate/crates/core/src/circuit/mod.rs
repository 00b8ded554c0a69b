//! Gate-model circuits, their text format and an exact statevector simulator.

mod gate;
mod parse;
mod state;

pub use gate::{Circuit, Gate, GateKind};
pub use parse::{eval_angle, parse_circuit};
pub use state::{coherence, populations, simulate, StateVector};
