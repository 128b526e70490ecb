//! Text formats: the HyTech-style model language, reference valuations and
//! parameter rectangles.
//!
//! ```text
//! var x: clock; p1, p2: parameter;
//! automaton toy
//! synclabs: a, b;
//! loc q0: while x <= p1 do
//!   when x = p1 sync a goto q1;
//!   when x >= p2 sync b do {x' = 0} goto q2;
//! loc q1: while True do
//! loc q2: while True do
//! end
//! init := loc[toy] = q0 & x = 0;
//! ```
//!
//! Conjuncts of the init block that mention only parameters form the initial
//! constraint; conjuncts with clocks pin the initial clock values; `d = n`
//! sets a discrete variable (default 0).

mod lexer;
mod model;
mod printer;
mod values;

pub use model::parse_model;
pub use printer::print_model;
pub use values::{parse_pi0, parse_v0};
