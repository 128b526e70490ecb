//! Covering a parameter rectangle with behavioral tiles.
//!
//! Each uncovered integer point of the rectangle seeds one inverse-method run;
//! the resulting constraint is a tile on which the trace set is constant.
//! Tiles are then split into good and bad ones by a property of their traces.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::inverse_method::{im, ImOptions, ImStats};
use crate::linarith::{ParameterValuation, Polyhedron, Rational};
use crate::model::{ActionId, LocationId, Network, RectangleV0};
use crate::reachability::TraceSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcMode {
    /// Every integer point of the rectangle, in ascending lexicographic order.
    Full,
    /// `draws` integer points drawn uniformly from the rectangle.
    Random { draws: usize, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct Tile {
    pub constraint: Polyhedron,
    pub witness: ParameterValuation,
    pub traces: TraceSet,
    pub stats: ImStats,
}

/// A point whose inverse-method run did not finish.
#[derive(Debug, Clone)]
pub struct PointFailure {
    pub point: ParameterValuation,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct Tiling {
    pub tiles: Vec<Tile>,
    pub v0: RectangleV0,
    pub mode: BcMode,
    pub failures: Vec<PointFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartError {
    #[error("the model has no parameter")]
    NoParameters,
    #[error("rectangle has {got} dimensions, the model has {expected} parameters")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("rectangle bounds do not fit in 64-bit integers")]
    BoundsTooLarge,
    #[error("unknown location `{0}`")]
    UnknownLocation(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
}

fn to_i64(n: &BigInt) -> Result<i64, CartError> {
    n.to_i64().ok_or(CartError::BoundsTooLarge)
}

/// Inclusive integer range of every dimension of `v0` after scaling by `denominator`.
fn scaled_ranges(v0: &RectangleV0, denominator: i64) -> Result<Vec<(i64, i64)>, CartError> {
    let d = Rational::from_integer(denominator.into());
    v0.bounds()
        .iter()
        .map(|(lo, hi)| {
            Ok((
                to_i64(&(lo * &d).ceil().to_integer())?,
                to_i64(&(hi * &d).floor().to_integer())?,
            ))
        })
        .collect()
}

/// Grid points of `v0` at spacing `1/denominator`, ascending lexicographically.
fn grid_points(v0: &RectangleV0, denominator: i64) -> Result<Vec<ParameterValuation>, CartError> {
    let ranges = scaled_ranges(v0, denominator)?;
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut current: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        out.push(ParameterValuation(
            current
                .iter()
                .map(|&n| Rational::new(n.into(), denominator.into()))
                .collect(),
        ));
        let mut k = ranges.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if current[k] < ranges[k].1 {
                current[k] += 1;
                break;
            }
            current[k] = ranges[k].0;
        }
    }
}

/// Integer points of `v0` in ascending lexicographic order.
pub fn integer_points(v0: &RectangleV0) -> Result<Vec<ParameterValuation>, CartError> {
    grid_points(v0, 1)
}

/// Some tile's constraint holds at `point`.
pub fn covered(point: &ParameterValuation, tiling: &Tiling) -> bool {
    covered_by(point, &tiling.tiles)
}

fn covered_by(point: &ParameterValuation, tiles: &[Tile]) -> bool {
    tiles
        .iter()
        .any(|t| t.constraint.satisfies_point(point).unwrap_or(false))
}

/// Runs the cartography over `v0`.
pub fn bc(
    net: &Network,
    v0: &RectangleV0,
    mode: BcMode,
    options: &ImOptions,
) -> Result<Tiling, CartError> {
    let m = net.parameter_count();
    if m == 0 {
        return Err(CartError::NoParameters);
    }
    if v0.dimension() != m {
        return Err(CartError::DimensionMismatch {
            expected: m,
            got: v0.dimension(),
        });
    }
    let points = match mode {
        BcMode::Full => integer_points(v0)?,
        BcMode::Random { draws, seed } => {
            let ranges = scaled_ranges(v0, 1)?;
            if ranges.iter().any(|(lo, hi)| lo > hi) {
                Vec::new()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..draws)
                    .map(|_| {
                        ParameterValuation(
                            ranges
                                .iter()
                                .map(|&(lo, hi)| {
                                    Rational::from_integer(rng.random_range(lo..=hi).into())
                                })
                                .collect(),
                        )
                    })
                    .collect()
            }
        }
    };
    let mut tiling = Tiling {
        tiles: Vec::new(),
        v0: v0.clone(),
        mode,
        failures: Vec::new(),
    };
    let mut failed: HashSet<ParameterValuation> = HashSet::new();
    for point in points {
        if covered_by(&point, &tiling.tiles) || failed.contains(&point) {
            continue;
        }
        match im(net, &point, options) {
            Ok(r) => tiling.tiles.push(Tile {
                constraint: r.k0,
                witness: point,
                traces: r.traces,
                stats: r.stats,
            }),
            Err(e) => {
                let reason = e.to_string();
                failed.insert(point.clone());
                tiling.failures.push(PointFailure { point, reason });
            }
        }
    }
    Ok(tiling)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    pub tiles: usize,
    pub integer_total: usize,
    pub integer_covered: usize,
    pub grid_denominator: i64,
    pub grid_total: usize,
    pub grid_covered: usize,
}

impl CoverageReport {
    pub fn integer_fraction(&self) -> f64 {
        fraction(self.integer_covered, self.integer_total)
    }

    pub fn grid_fraction(&self) -> f64 {
        fraction(self.grid_covered, self.grid_total)
    }
}

fn fraction(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

impl fmt::Display for CoverageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tiles: {}", self.tiles)?;
        writeln!(
            f,
            "integer coverage: {}/{}",
            self.integer_covered, self.integer_total
        )?;
        write!(
            f,
            "grid coverage (1/{}): {}/{}",
            self.grid_denominator, self.grid_covered, self.grid_total
        )
    }
}

/// Coverage of the integer points and of the grid at spacing `1/denominator`.
pub fn coverage_stats(
    tiling: &Tiling,
    v0: &RectangleV0,
    denominator: i64,
) -> Result<CoverageReport, CartError> {
    assert!(denominator >= 1, "grid denominator must be positive");
    let count = |points: Vec<ParameterValuation>| {
        let covered = points.iter().filter(|p| covered(p, tiling)).count();
        (points.len(), covered)
    };
    let (integer_total, integer_covered) = count(integer_points(v0)?);
    let (grid_total, grid_covered) = count(grid_points(v0, denominator)?);
    Ok(CoverageReport {
        tiles: tiling.tiles.len(),
        integer_total,
        integer_covered,
        grid_denominator: denominator,
        grid_total,
        grid_covered,
    })
}

/// Linear-time property of traces used to split tiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceProperty {
    /// No trace visits any of these (component, location) pairs.
    ForbiddenLocations(Vec<(usize, LocationId)>),
    /// No trace takes `then` before its first `first`.
    ActionPrecedes { first: ActionId, then: ActionId },
}

impl TraceProperty {
    /// Locations are `component.location`, or a bare location name matched in
    /// every component.
    pub fn forbidden_locations(net: &Network, names: &[&str]) -> Result<Self, CartError> {
        let mut out = Vec::new();
        for &name in names {
            let found: Vec<(usize, LocationId)> = match name.split_once('.') {
                Some((comp, loc)) => net
                    .components
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.name == comp)
                    .filter_map(|(i, c)| c.location_id(loc).map(|l| (i, l)))
                    .collect(),
                None => net
                    .components
                    .iter()
                    .enumerate()
                    .filter_map(|(i, c)| c.location_id(name).map(|l| (i, l)))
                    .collect(),
            };
            if found.is_empty() {
                return Err(CartError::UnknownLocation(name.to_string()));
            }
            out.extend(found);
        }
        out.sort_unstable();
        out.dedup();
        Ok(TraceProperty::ForbiddenLocations(out))
    }

    pub fn action_precedes(net: &Network, first: &str, then: &str) -> Result<Self, CartError> {
        let id = |name: &str| {
            net.action_id(name)
                .ok_or_else(|| CartError::UnknownAction(name.to_string()))
        };
        Ok(TraceProperty::ActionPrecedes {
            first: id(first)?,
            then: id(then)?,
        })
    }

    /// Every trace of `traces` satisfies the property.
    pub fn holds(&self, traces: &TraceSet) -> bool {
        match self {
            TraceProperty::ForbiddenLocations(bad) => !traces.nodes.iter().any(|key| {
                bad.iter()
                    .any(|&(comp, loc)| key.locations.get(comp) == Some(&loc))
            }),
            TraceProperty::ActionPrecedes { first, then } => {
                // search for a `then` edge reachable without crossing `first`
                if traces.nodes.is_empty() {
                    return true;
                }
                let mut seen = vec![false; traces.nodes.len()];
                let mut queue = VecDeque::from([0]);
                seen[0] = true;
                while let Some(n) = queue.pop_front() {
                    for &(s, a, d) in &traces.edges {
                        if s != n || a == Some(*first) {
                            continue;
                        }
                        if a == Some(*then) {
                            return false;
                        }
                        if !seen[d] {
                            seen[d] = true;
                            queue.push_back(d);
                        }
                    }
                }
                true
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Good,
    Bad,
    Unclassified,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Good => "good",
            Verdict::Bad => "bad",
            Verdict::Unclassified => "unclassified",
        })
    }
}

/// One verdict per tile, in tile order.
pub fn classify(tiling: &Tiling, property: &TraceProperty) -> Vec<Verdict> {
    tiling
        .tiles
        .iter()
        .map(|t| {
            if property.holds(&t.traces) {
                Verdict::Good
            } else {
                Verdict::Bad
            }
        })
        .collect()
}
