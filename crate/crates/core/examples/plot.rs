//! Writes the toy cartography as an SVG (first argument, default `toy_cart.svg`).

use ptasynth::cartography::{bc, classify, BcMode, TraceProperty};
use ptasynth::fixtures::toy;
use ptasynth::inverse_method::ImOptions;
use ptasynth::model::RectangleV0;
use ptasynth::output::{emit_cartography_svg, tile_polygon, PlotViewport};

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "toy_cart.svg".into());
    let net = toy();
    let v0 = RectangleV0::from_integers(&[(0, 3), (0, 3)]).unwrap();
    let tiling = bc(&net, &v0, BcMode::Full, &ImOptions::default()).unwrap();
    let verdicts = classify(
        &tiling,
        &TraceProperty::action_precedes(&net, "a", "b").unwrap(),
    );
    let viewport = PlotViewport::new(0, 1, v0).unwrap();
    for tile in &tiling.tiles {
        let corners: Vec<String> = tile_polygon(&tile.constraint, &viewport)
            .iter()
            .map(|(x, y)| format!("({x}, {y})"))
            .collect();
        println!(
            "{}: {}",
            tile.constraint.render(&net.registry),
            corners.join(" ")
        );
    }
    let svg = emit_cartography_svg(&net, &tiling, &viewport, Some(&verdicts)).unwrap();
    std::fs::write(&path, svg).unwrap();
    println!("wrote {path}");
}
