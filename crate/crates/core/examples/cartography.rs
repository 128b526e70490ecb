//! Tiling of [0,2]² for the toy model, classified by reachability of `q2`,
//! followed by a seeded random-mode run.

use ptasynth::cartography::{bc, classify, coverage_stats, BcMode, TraceProperty};
use ptasynth::fixtures::toy;
use ptasynth::inverse_method::ImOptions;
use ptasynth::model::RectangleV0;

fn main() {
    let net = toy();
    let v0 = RectangleV0::from_integers(&[(0, 2), (0, 2)]).unwrap();
    let tiling = bc(&net, &v0, BcMode::Full, &ImOptions::default()).unwrap();
    let property = TraceProperty::forbidden_locations(&net, &["q2"]).unwrap();
    let verdicts = classify(&tiling, &property);
    for (i, (tile, verdict)) in tiling.tiles.iter().zip(&verdicts).enumerate() {
        println!(
            "tile {}: witness {} -> {} [{verdict}]",
            i + 1,
            tile.witness,
            tile.constraint.render(&net.registry)
        );
    }
    println!("{}", coverage_stats(&tiling, &v0, 4).unwrap());

    let random = bc(
        &net,
        &v0,
        BcMode::Random { draws: 3, seed: 11 },
        &ImOptions::default(),
    )
    .unwrap();
    println!("\nrandom mode: {} tiles", random.tiles.len());
    for t in &random.tiles {
        println!(
            "  {} from {}",
            t.constraint.render(&net.registry),
            t.witness
        );
    }
}
