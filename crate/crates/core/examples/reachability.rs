//! Symbolic state space of the toy model, parametric and instantiated.

use ptasynth::fixtures::toy;
use ptasynth::linarith::ParameterValuation;
use ptasynth::output::{emit_state_listing, emit_trace_dot};
use ptasynth::reachability::{reachable, trace_set, ReachOptions};

fn main() {
    let net = toy();
    let options = ReachOptions::default();

    let space = reachable(&net, &options).unwrap();
    println!("parametric: {:?}", space.termination());
    print!("{}", emit_state_listing(&net, &space));

    for point in [[1, 2], [2, 1]] {
        let pi = ParameterValuation::from_integers(&point);
        let space = reachable(&net.instantiate(&pi).unwrap(), &options).unwrap();
        println!(
            "\nat {pi}: {} states, {} transitions",
            space.state_count(),
            space.edge_count()
        );
        print!("{}", emit_trace_dot(&net, &trace_set(&space)));
    }
}
