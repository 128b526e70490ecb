//! Text renderings of analysis results: DOT trace graphs, SVG cartographies,
//! state listings, and the `.res` / `.cart` summaries.
//!
//! Every emitter is a pure function of its inputs, so emitting twice gives
//! byte-identical text.

use std::cmp::Ordering;
use std::fmt::Write;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::cartography::{CoverageReport, Tiling, Verdict};
use crate::inverse_method::ImResult;
use crate::linarith::rational::{format_decimal, int, ratio};
use crate::linarith::{LinExpr, LinearInequality, Polyhedron, Rational, Relation};
use crate::model::{Network, RectangleV0};
use crate::reachability::{StateKey, StateSpace, TraceSet};

pub const GOOD_FILL: &str = "#8fd18f";
pub const BAD_FILL: &str = "#f28e8e";
pub const UNCLASSIFIED_FILL: &str = "#c8c8c8";

const CANVAS: i64 = 400;
const PAD: i64 = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlotError {
    #[error("plotted parameters must be two distinct indices below {0}")]
    BadParameters(usize),
    #[error("rectangle has {got} dimensions, the model has {expected} parameters")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{got} verdicts for {expected} tiles")]
    VerdictCount { expected: usize, got: usize },
}

fn key_label(net: &Network, key: &StateKey, sep: &str) -> String {
    let locs: Vec<&str> = net
        .components
        .iter()
        .zip(&key.locations)
        .map(|(c, &l)| c.locations[l].name.as_str())
        .collect();
    let mut out = locs.join(", ");
    if !key.discretes.is_empty() {
        out.push_str(sep);
        out.push_str(&discrete_text(net, key));
    }
    out
}

fn discrete_text(net: &Network, key: &StateKey) -> String {
    if key.discretes.is_empty() {
        return "-".into();
    }
    net.registry
        .discretes()
        .iter()
        .zip(&key.discretes)
        .map(|(n, v)| format!("{n}={v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Directed graph of a trace set in DOT syntax.
pub fn emit_trace_dot(net: &Network, traces: &TraceSet) -> String {
    let mut out = String::from("digraph traces {\n");
    for (i, key) in traces.nodes.iter().enumerate() {
        let label = key_label(net, key, "\\n");
        writeln!(out, "  s{i} [label=\"{label}\"];").unwrap();
    }
    for &(s, a, d) in &traces.edges {
        writeln!(out, "  s{s} -> s{d} [label=\"{}\"];", net.action_label(a)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// One `STATE` line per live state, in id order.
pub fn emit_state_listing(net: &Network, space: &StateSpace) -> String {
    let mut out = String::new();
    for (id, s) in space.states() {
        let locs: Vec<&str> = net
            .components
            .iter()
            .zip(&s.key.locations)
            .map(|(c, &l)| c.locations[l].name.as_str())
            .collect();
        writeln!(
            out,
            "STATE {id}: {} | {} | {}",
            locs.join(", "),
            discrete_text(net, &s.key),
            s.constraint.render(&net.registry)
        )
        .unwrap();
    }
    out
}

/// Inverse-method summary: the constraint line, then counters.
pub fn render_res(
    net: &Network,
    result: &ImResult,
    timings: bool,
    partial: Option<&str>,
) -> String {
    let mut out = String::new();
    writeln!(out, "{}", result.k0.render(&net.registry)).unwrap();
    writeln!(out, "iterations: {}", result.stats.iterations).unwrap();
    writeln!(out, "refinements: {}", result.stats.refinements).unwrap();
    writeln!(out, "states: {}", result.stats.states).unwrap();
    writeln!(out, "transitions: {}", result.stats.transitions).unwrap();
    let ms = if timings {
        result.stats.elapsed.as_millis()
    } else {
        0
    };
    writeln!(out, "time_ms: {ms}").unwrap();
    if let Some(reason) = partial {
        writeln!(out, "partial: {reason}").unwrap();
    }
    out
}

/// Tiling summary: one `TILE` line per tile (numbered from 1), then coverage.
pub fn render_cart(
    net: &Network,
    tiling: &Tiling,
    verdicts: &[Verdict],
    report: &CoverageReport,
) -> String {
    let mut out = String::new();
    for (i, tile) in tiling.tiles.iter().enumerate() {
        let verdict = verdicts.get(i).copied().unwrap_or(Verdict::Unclassified);
        writeln!(
            out,
            "TILE {}: witness={} ; constraint={} ; verdict={verdict}",
            i + 1,
            tile.witness,
            tile.constraint.render(&net.registry)
        )
        .unwrap();
    }
    writeln!(out, "{report}").unwrap();
    for f in &tiling.failures {
        writeln!(out, "uncovered {}: {}", f.point, f.reason).unwrap();
    }
    out
}

/// Two plotted parameters over a rectangle, with a margin around it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlotViewport {
    pub x_param: usize,
    pub y_param: usize,
    pub v0: RectangleV0,
    /// Fraction of each side added on both ends of the view.
    pub margin: Rational,
}

impl PlotViewport {
    pub fn new(x_param: usize, y_param: usize, v0: RectangleV0) -> Result<Self, PlotError> {
        let m = v0.dimension();
        if x_param == y_param || x_param >= m || y_param >= m {
            return Err(PlotError::BadParameters(m));
        }
        Ok(PlotViewport {
            x_param,
            y_param,
            v0,
            margin: ratio(1, 2),
        })
    }

    fn side(&self, param: usize) -> (Rational, Rational) {
        let (lo, hi) = &self.v0.bounds()[param];
        let mut extent = hi - lo;
        if extent.is_zero() {
            extent = int(1);
        }
        let m = &extent * &self.margin;
        (lo - &m, hi + &m)
    }

    /// `(x_lo, x_hi, y_lo, y_hi)` of the visible box.
    pub fn view_box(&self) -> (Rational, Rational, Rational, Rational) {
        let (xl, xh) = self.side(self.x_param);
        let (yl, yh) = self.side(self.y_param);
        (xl, xh, yl, yh)
    }
}

/// Closed half-plane `a·x + b·y + c ≥ 0`.
type HalfPlane = (Rational, Rational, Rational);

fn half_planes(constraint: &Polyhedron, viewport: &PlotViewport) -> Option<Vec<HalfPlane>> {
    let space = constraint.space();
    let xc = space.parameter_column(viewport.x_param);
    let yc = space.parameter_column(viewport.y_param);
    let others: Vec<usize> = (0..space.dimension())
        .filter(|&c| c != xc && c != yc)
        .collect();
    let flat = constraint.eliminate(&others);
    if flat.is_bottom() || !flat.is_satisfiable() {
        return None;
    }
    let r = |n: &num_bigint::BigInt| Rational::from_integer(n.clone());
    let mut out = Vec::new();
    for row in flat.inequalities() {
        let rows = match row.relation() {
            Relation::Eq => row.decompose(),
            _ => vec![row.clone()],
        };
        for h in rows {
            out.push((r(&h.coeffs()[xc]), r(&h.coeffs()[yc]), r(h.constant())));
        }
    }
    let (xl, xh, yl, yh) = viewport.view_box();
    let (one, zero) = (int(1), int(0));
    out.push((one.clone(), zero.clone(), -xl));
    out.push((-one.clone(), zero.clone(), xh));
    out.push((zero.clone(), one.clone(), -yl));
    out.push((zero, -one, yh));
    Some(out)
}

fn angular_cmp(u: &(Rational, Rational), v: &(Rational, Rational)) -> Ordering {
    let half = |p: &(Rational, Rational)| {
        if p.1.is_positive() || (p.1.is_zero() && !p.0.is_negative()) {
            0
        } else {
            1
        }
    };
    half(u).cmp(&half(v)).then_with(|| {
        let cross = &u.0 * &v.1 - &u.1 * &v.0;
        if cross.is_positive() {
            Ordering::Less
        } else if cross.is_negative() {
            Ordering::Greater
        } else {
            (&u.0 * &u.0 + &u.1 * &u.1).cmp(&(&v.0 * &v.0 + &v.1 * &v.1))
        }
    })
}

/// Vertices of the closure of `constraint`, restricted to the plotted pair and
/// clipped to the view box, counter-clockwise from the lowest one. Empty when nothing is visible.
pub fn tile_polygon(constraint: &Polyhedron, viewport: &PlotViewport) -> Vec<(Rational, Rational)> {
    let Some(planes) = half_planes(constraint, viewport) else {
        return Vec::new();
    };
    let inside = |x: &Rational, y: &Rational| {
        planes
            .iter()
            .all(|(a, b, c)| !(a * x + b * y + c).is_negative())
    };
    let mut vertices: Vec<(Rational, Rational)> = Vec::new();
    for i in 0..planes.len() {
        for j in i + 1..planes.len() {
            let (a1, b1, c1) = &planes[i];
            let (a2, b2, c2) = &planes[j];
            let det = a1 * b2 - a2 * b1;
            if det.is_zero() {
                continue;
            }
            let x = (b1 * c2 - b2 * c1) / &det;
            let y = (a2 * c1 - a1 * c2) / &det;
            if inside(&x, &y) && !vertices.contains(&(x.clone(), y.clone())) {
                vertices.push((x, y));
            }
        }
    }
    if vertices.len() < 3 {
        vertices.sort();
        return vertices;
    }
    let n = Rational::from_integer(vertices.len().into());
    let cx = vertices.iter().map(|v| v.0.clone()).sum::<Rational>() / &n;
    let cy = vertices.iter().map(|v| v.1.clone()).sum::<Rational>() / &n;
    vertices.sort_by(|u, v| angular_cmp(&(&u.0 - &cx, &u.1 - &cy), &(&v.0 - &cx, &v.1 - &cy)));
    // start from the lowest, then leftmost, vertex
    let start = (0..vertices.len())
        .min_by(|&i, &j| (&vertices[i].1, &vertices[i].0).cmp(&(&vertices[j].1, &vertices[j].0)))
        .unwrap_or(0);
    vertices.rotate_left(start);
    vertices
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

struct Canvas {
    x_lo: Rational,
    y_hi: Rational,
    sx: Rational,
    sy: Rational,
}

impl Canvas {
    fn new(viewport: &PlotViewport) -> Self {
        let (xl, xh, yl, yh) = viewport.view_box();
        Canvas {
            sx: int(CANVAS) / (&xh - &xl),
            sy: int(CANVAS) / (&yh - &yl),
            x_lo: xl,
            y_hi: yh,
        }
    }

    fn x(&self, v: &Rational) -> Rational {
        (v - &self.x_lo) * &self.sx + int(PAD)
    }

    fn y(&self, v: &Rational) -> Rational {
        (&self.y_hi - v) * &self.sy + int(PAD)
    }

    fn point(&self, p: &(Rational, Rational)) -> String {
        format!("{},{}", coord(&self.x(&p.0)), coord(&self.y(&p.1)))
    }
}

fn coord(v: &Rational) -> String {
    format_decimal(v, 6)
}

/// Cartography of two parameters as a standalone SVG document. Without
/// verdicts every tile is drawn as unclassified.
pub fn emit_cartography_svg(
    net: &Network,
    tiling: &Tiling,
    viewport: &PlotViewport,
    verdicts: Option<&[Verdict]>,
) -> Result<String, PlotError> {
    let m = net.parameter_count();
    if viewport.v0.dimension() != m {
        return Err(PlotError::DimensionMismatch {
            expected: m,
            got: viewport.v0.dimension(),
        });
    }
    if viewport.x_param == viewport.y_param || viewport.x_param >= m || viewport.y_param >= m {
        return Err(PlotError::BadParameters(m));
    }
    if let Some(v) = verdicts {
        if v.len() != tiling.tiles.len() {
            return Err(PlotError::VerdictCount {
                expected: tiling.tiles.len(),
                got: v.len(),
            });
        }
    }
    let canvas = Canvas::new(viewport);
    let size = CANVAS + 2 * PAD;
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
    )
    .unwrap();
    writeln!(
        out,
        "  <rect x=\"{PAD}\" y=\"{PAD}\" width=\"{CANVAS}\" height=\"{CANVAS}\" fill=\"white\" stroke=\"#888888\"/>"
    )
    .unwrap();
    out.push_str("  <g id=\"tiles\">\n");
    for (i, tile) in tiling.tiles.iter().enumerate() {
        let polygon = tile_polygon(&tile.constraint, viewport);
        if polygon.is_empty() {
            continue;
        }
        let fill = match verdicts.map(|v| v[i]) {
            Some(Verdict::Good) => GOOD_FILL,
            Some(Verdict::Bad) => BAD_FILL,
            _ => UNCLASSIFIED_FILL,
        };
        let points: Vec<String> = polygon.iter().map(|p| canvas.point(p)).collect();
        writeln!(
            out,
            "    <polygon points=\"{}\" fill=\"{fill}\" fill-opacity=\"0.8\" stroke=\"#333333\" stroke-width=\"1\"><title>tile {}: {}</title></polygon>",
            points.join(" "),
            i + 1,
            xml_escape(&tile.constraint.render(&net.registry))
        )
        .unwrap();
    }
    out.push_str("  </g>\n");
    out.push_str("  <g id=\"witnesses\">\n");
    for tile in &tiling.tiles {
        let w = tile.witness.values();
        let p = (w[viewport.x_param].clone(), w[viewport.y_param].clone());
        writeln!(
            out,
            "    <circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"black\"/>",
            coord(&canvas.x(&p.0)),
            coord(&canvas.y(&p.1))
        )
        .unwrap();
    }
    out.push_str("  </g>\n");
    let (xl, xh) = &viewport.v0.bounds()[viewport.x_param];
    let (yl, yh) = &viewport.v0.bounds()[viewport.y_param];
    writeln!(
        out,
        "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>",
        coord(&canvas.x(xl)),
        coord(&canvas.y(yh)),
        coord(&((xh - xl) * &canvas.sx)),
        coord(&((yh - yl) * &canvas.sy))
    )
    .unwrap();
    let names = net.registry.parameters();
    writeln!(
        out,
        "  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">{}</text>",
        PAD + CANVAS / 2,
        size - PAD / 3,
        xml_escape(&names[viewport.x_param])
    )
    .unwrap();
    writeln!(
        out,
        "  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" transform=\"rotate(-90 {} {})\">{}</text>",
        PAD / 2,
        PAD + CANVAS / 2,
        PAD / 2,
        PAD + CANVAS / 2,
        xml_escape(&names[viewport.y_param])
    )
    .unwrap();
    out.push_str("</svg>\n");
    Ok(out)
}

/// Rows bounding the view box, over the space of `constraint`.
pub fn viewport_rows(constraint: &Polyhedron, viewport: &PlotViewport) -> Vec<LinearInequality> {
    let space = constraint.space();
    let dim = space.dimension();
    let (xl, xh, yl, yh) = viewport.view_box();
    let x = LinExpr::var(dim, space.parameter_column(viewport.x_param));
    let y = LinExpr::var(dim, space.parameter_column(viewport.y_param));
    vec![
        x.ge(&LinExpr::constant(dim, xl)),
        x.le(&LinExpr::constant(dim, xh)),
        y.ge(&LinExpr::constant(dim, yl)),
        y.le(&LinExpr::constant(dim, yh)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartography::{bc, classify, BcMode, TraceProperty};
    use crate::fixtures::toy;
    use crate::inverse_method::{im, ImOptions};
    use crate::linarith::ParameterValuation;
    use crate::reachability::{reachable, ReachOptions};

    fn toy_tiling() -> Tiling {
        let v0 = RectangleV0::from_integers(&[(0, 2), (0, 2)]).unwrap();
        bc(&toy(), &v0, BcMode::Full, &ImOptions::default()).unwrap()
    }

    fn pt(a: i64, b: i64) -> (Rational, Rational) {
        (int(a), int(b))
    }

    #[test]
    fn trace_dot_for_toy() {
        let net = toy();
        let r = im(
            &net,
            &ParameterValuation::from_integers(&[1, 2]),
            &ImOptions::default(),
        )
        .unwrap();
        let dot = emit_trace_dot(&net, &r.traces);
        assert_eq!(
            dot,
            "digraph traces {\n  s0 [label=\"q0\"];\n  s1 [label=\"q1\"];\n  s0 -> s1 [label=\"a\"];\n}\n"
        );
        assert_eq!(dot, emit_trace_dot(&net, &r.traces));

        let listing = emit_state_listing(&net, &r.space);
        assert_eq!(listing.lines().count(), 2);
        assert!(listing.starts_with("STATE 0: q0 | - | "));
    }

    #[test]
    fn single_node_dot_and_listing() {
        let net = toy();
        let opts = ReachOptions {
            depth_limit: Some(0),
            ..Default::default()
        };
        let s = reachable(&net, &opts).unwrap();
        let dot = emit_trace_dot(&net, &crate::reachability::trace_set(&s));
        assert!(!dot.contains("->"));
        assert_eq!(
            emit_state_listing(&net, &s),
            "STATE 0: q0 | - | 0 <= x & x <= p1\n"
        );
    }

    #[test]
    fn toy_polygons_meet_on_the_diagonal() {
        let tiling = toy_tiling();
        let vp = PlotViewport::new(0, 1, tiling.v0.clone()).unwrap();
        assert_eq!(vp.view_box(), (int(-1), int(3), int(-1), int(3)));
        // p2 <= p1, p1 >= 0 within [-1,3]^2
        let below = tile_polygon(&tiling.tiles[0].constraint, &vp);
        assert_eq!(below, vec![pt(0, -1), pt(3, -1), pt(3, 3), pt(0, 0)]);
        // p1 < p2, p1 >= 0
        let above = tile_polygon(&tiling.tiles[1].constraint, &vp);
        assert_eq!(above, vec![pt(0, 0), pt(3, 3), pt(0, 3)]);
    }

    #[test]
    fn universe_tile_fills_viewport() {
        let net = toy();
        let vp = PlotViewport::new(0, 1, RectangleV0::from_integers(&[(0, 2), (0, 2)]).unwrap())
            .unwrap();
        let poly = tile_polygon(&Polyhedron::universe(net.space()), &vp);
        assert_eq!(poly, vec![pt(-1, -1), pt(3, -1), pt(3, 3), pt(-1, 3)]);
    }

    #[test]
    fn svg_output() {
        let net = toy();
        let tiling = toy_tiling();
        let vp = PlotViewport::new(0, 1, tiling.v0.clone()).unwrap();
        let prop = TraceProperty::forbidden_locations(&net, &["q2"]).unwrap();
        let verdicts = classify(&tiling, &prop);
        let svg = emit_cartography_svg(&net, &tiling, &vp, Some(&verdicts)).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 2);
        assert!(svg.contains(BAD_FILL) && svg.contains(GOOD_FILL));
        assert!(svg.contains("width=\"480\" height=\"480\""));
        assert!(svg.contains("0 &lt;= p1 &amp; p1 &lt; p2"));
        // [0,2]^2 outline: x from 140 to 340
        assert!(svg.contains(
            "<rect x=\"140.000000\" y=\"140.000000\" width=\"200.000000\" height=\"200.000000\""
        ));
        assert_eq!(
            svg,
            emit_cartography_svg(&net, &tiling, &vp, Some(&verdicts)).unwrap()
        );

        let empty = Tiling {
            tiles: vec![],
            ..tiling.clone()
        };
        let svg = emit_cartography_svg(&net, &empty, &vp, None).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 0);
        assert!(svg.contains("stroke=\"black\""));
    }

    #[test]
    fn viewport_validation() {
        let v0 = RectangleV0::from_integers(&[(0, 2), (0, 2)]).unwrap();
        assert_eq!(
            PlotViewport::new(0, 0, v0.clone()),
            Err(PlotError::BadParameters(2))
        );
        assert_eq!(
            PlotViewport::new(0, 2, v0),
            Err(PlotError::BadParameters(2))
        );
    }
}
