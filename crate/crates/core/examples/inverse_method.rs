//! Constraint synthesis around reference valuations of the toy model, with the
//! in-place and the recomputing refinement.

use ptasynth::fixtures::toy;
use ptasynth::inverse_method::{im, ImOptions};
use ptasynth::linarith::ParameterValuation;

fn main() {
    let net = toy();
    for point in [[1, 2], [2, 1], [3, 3]] {
        let pi0 = ParameterValuation::from_integers(&point);
        for optimized in [true, false] {
            let options = ImOptions {
                optimized,
                ..Default::default()
            };
            let r = im(&net, &pi0, &options).unwrap();
            println!(
                "{pi0} optimized={optimized:<5} K0 = {:<24} iterations={} refinements={} states={}",
                r.k0.render(&net.registry),
                r.stats.iterations,
                r.stats.refinements,
                r.stats.states
            );
        }
    }
}
