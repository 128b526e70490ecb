pub mod cartography;
pub mod cli;
pub mod diagnostic;
pub mod fixtures;
pub mod inverse_method;
pub mod linarith;
pub mod model;
pub mod output;
pub mod parser;
pub mod reachability;
