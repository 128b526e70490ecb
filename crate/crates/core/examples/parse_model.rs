//! Parse a model file (default: the bundled SR latch), report diagnostics with
//! positions, and pretty-print the resolved network.
//!
//! cargo run --example parse_model -- path/to/model.imi

use ptasynth::fixtures::SR_LATCH_MODEL;
use ptasynth::parser::{parse_model, print_model};

fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(&path).expect("readable model file"),
        None => SR_LATCH_MODEL.to_string(),
    };
    match parse_model(&text) {
        Ok(net) => {
            println!(
                "{} automata, {} clocks, {} parameters, {} actions",
                net.components.len(),
                net.registry.clocks().len(),
                net.parameter_count(),
                net.actions.len()
            );
            print!("{}", print_model(&net));
        }
        Err(diags) => {
            for d in diags.iter() {
                eprintln!("{d}");
            }
            std::process::exit(1);
        }
    }

    let broken = "var x: clock;\nautomaton A synclabs: ;\nloc l0: while z <= 1 do\nend\ninit := loc[A] = l0;";
    let diags = parse_model(broken).unwrap_err();
    println!("\nbroken input:\n{diags}");
}
