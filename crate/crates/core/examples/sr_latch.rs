//! SR latch built from two NOR gates: synthesis around a reference timing,
//! then a full cartography of the bundled parameter box, reporting for each
//! tile whether the `Q` gate ever switches to `Q=1`.

use ptasynth::cartography::{bc, coverage_stats, BcMode};
use ptasynth::fixtures::SR_LATCH_MODEL;
use ptasynth::inverse_method::{im, ImOptions};
use ptasynth::parser::{parse_model, parse_pi0, parse_v0};

fn main() {
    let net = parse_model(SR_LATCH_MODEL).unwrap();
    let pi0 = parse_pi0(include_str!("../models/sr_latch.pi0"), &net.registry).unwrap();
    let r = im(&net, &pi0, &ImOptions::default()).unwrap();
    println!("around {pi0}: {}", r.k0.render(&net.registry));
    println!(
        "  {} iterations, {} refinements, {} states, {} transitions",
        r.stats.iterations, r.stats.refinements, r.stats.states, r.stats.transitions
    );

    let v0 = parse_v0(include_str!("../models/sr_latch.v0"), &net.registry).unwrap();
    let tiling = bc(&net, &v0, BcMode::Full, &ImOptions::default()).unwrap();
    for (i, tile) in tiling.tiles.iter().enumerate() {
        let stored = tile
            .traces
            .nodes
            .iter()
            .any(|k| net.components[1].locations[k.locations[1]].name == "b0q1");
        println!(
            "tile {} {}: {} ({} trace nodes, sets Q: {stored})",
            i + 1,
            tile.witness,
            tile.constraint.render(&net.registry),
            tile.traces.node_count()
        );
    }
    println!("{}", coverage_stats(&tiling, &v0, 2).unwrap());
}
