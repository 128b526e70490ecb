//! Random model generation shared by the integration tests.
#![allow(dead_code)]

use std::fmt::Write;
use std::time::Duration;

use ptasynth::linarith::{ParameterValuation, Polyhedron, Rational};
use ptasynth::model::Network;
use ptasynth::parser::parse_model;
use ptasynth::reachability::{reachable, trace_set, ReachOptions, Termination, TraceSet};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Size bounds for generated networks.
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_components: usize,
    pub max_locations: usize,
    pub max_clocks: usize,
    pub max_parameters: usize,
    pub max_coefficient: i64,
}

pub const SMALL: Shape = Shape {
    max_components: 2,
    max_locations: 5,
    max_clocks: 3,
    max_parameters: 2,
    max_coefficient: 5,
};

pub struct Generated {
    pub source: String,
    pub net: Network,
    pub pi0: ParameterValuation,
}

fn signed_term(out: &mut String, coeff: i64, name: &str, first: &mut bool) {
    if coeff == 0 {
        return;
    }
    let sign = if coeff < 0 {
        "-"
    } else if *first {
        ""
    } else {
        "+"
    };
    let mag = coeff.abs();
    if !*first {
        out.push(' ');
    }
    out.push_str(sign);
    if !*first {
        out.push(' ');
    }
    if mag == 1 {
        out.push_str(name);
    } else {
        write!(out, "{mag}*{name}").unwrap();
    }
    *first = false;
}

/// `lhs rel c1*p + c0` with small coefficients.
fn atom(
    rng: &mut ChaCha8Rng,
    shape: Shape,
    clocks: &[String],
    params: &[String],
    for_invariant: bool,
) -> String {
    let k = shape.max_coefficient;
    let lhs = if !for_invariant && clocks.len() > 1 && rng.random_ratio(1, 5) {
        let a = clocks.choose(rng).unwrap();
        let b = clocks.iter().find(|c| *c != a).unwrap();
        format!("{a} - {b}")
    } else {
        clocks.choose(rng).unwrap().clone()
    };
    let rel = if for_invariant {
        *["<=", "<"].choose(rng).unwrap()
    } else {
        *["<=", "<", "=", ">=", ">"].choose(rng).unwrap()
    };
    let mut rhs = String::new();
    let mut first = true;
    for p in params {
        if rng.random_ratio(2, 3) {
            let c = rng.random_range(-k..=k);
            // keep bounds mostly positive so something is reachable
            let c = if rng.random_ratio(3, 4) { c.abs() } else { c };
            signed_term(&mut rhs, c, p, &mut first);
        }
    }
    let c0 = rng.random_range(-k..=k);
    let c0 = if rng.random_ratio(3, 4) { c0.abs() } else { c0 };
    if c0 != 0 || first {
        if first {
            write!(rhs, "{c0}").unwrap();
        } else if c0 < 0 {
            write!(rhs, " - {}", -c0).unwrap();
        } else {
            write!(rhs, " + {c0}").unwrap();
        }
    }
    format!("{lhs} {rel} {rhs}")
}

/// A random network in the model language, with a random integer reference point.
pub fn random_network(seed: u64, shape: Shape) -> Generated {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_clocks = rng.random_range(1..=shape.max_clocks);
    let n_params = rng.random_range(1..=shape.max_parameters);
    let n_comps = rng.random_range(1..=shape.max_components);
    let clocks: Vec<String> = (1..=n_clocks).map(|i| format!("x{i}")).collect();
    let params: Vec<String> = (1..=n_params).map(|i| format!("p{i}")).collect();
    let mut src = String::new();
    writeln!(
        src,
        "var {}: clock; {}: parameter;",
        clocks.join(", "),
        params.join(", ")
    )
    .unwrap();
    let mut init = Vec::new();
    for c in 0..n_comps {
        let own = vec![format!("a{c}"), format!("b{c}")];
        let shared = n_comps > 1;
        let mut alphabet = own.clone();
        if shared {
            alphabet.push("s".into());
        }
        writeln!(src, "automaton A{c}\nsynclabs: {};", alphabet.join(", ")).unwrap();
        let n_locs = rng.random_range(1..=shape.max_locations);
        for l in 0..n_locs {
            let inv = if rng.random_ratio(1, 2) {
                "True".to_string()
            } else {
                atom(&mut rng, shape, &clocks, &params, true)
            };
            writeln!(src, "loc l{l}: while {inv} do").unwrap();
            for _ in 0..rng.random_range(0..=3) {
                let guard = match rng.random_range(0..4) {
                    0 => "True".to_string(),
                    1 | 2 => atom(&mut rng, shape, &clocks, &params, false),
                    _ => format!(
                        "{} & {}",
                        atom(&mut rng, shape, &clocks, &params, false),
                        atom(&mut rng, shape, &clocks, &params, false)
                    ),
                };
                let label = match rng.random_range(0..4) {
                    0 => String::new(),
                    1 if shared => " sync s".to_string(),
                    _ => format!(" sync {}", own.choose(&mut rng).unwrap()),
                };
                let resets: Vec<String> = clocks
                    .iter()
                    .filter(|_| rng.random_ratio(1, 3))
                    .map(|c| format!("{c}' = 0"))
                    .collect();
                let update = if resets.is_empty() {
                    String::new()
                } else {
                    format!(" do {{{}}}", resets.join(", "))
                };
                let target = rng.random_range(0..n_locs);
                writeln!(src, "  when {guard}{label}{update} goto l{target};").unwrap();
            }
        }
        writeln!(src, "end").unwrap();
        init.push(format!("loc[A{c}] = l0"));
    }
    for c in &clocks {
        init.push(format!("{c} = 0"));
    }
    for p in &params {
        init.push(format!("{p} >= 0"));
    }
    writeln!(src, "init := {};", init.join(" & ")).unwrap();
    let net =
        parse_model(&src).unwrap_or_else(|d| panic!("generated model must parse:\n{src}\n{d}"));
    let pi0 = ParameterValuation::from_integers(
        &(0..n_params)
            .map(|_| rng.random_range(0..=shape.max_coefficient))
            .collect::<Vec<_>>(),
    );
    Generated {
        source: src,
        net,
        pi0,
    }
}

/// Parameter part of a point sampled from a constraint over the full space.
pub fn sample_parameters(k: &Polyhedron, rng: &mut ChaCha8Rng) -> Option<ParameterValuation> {
    let space = k.space();
    let point = k.sample_point(rng)?;
    let values: Vec<Rational> = space
        .parameter_columns()
        .map(|c| point[c].clone())
        .collect();
    Some(ParameterValuation(values))
}

/// Trace set of the network instantiated at `pi`, or `None` if exploration
/// did not reach a fixpoint within the limits.
pub fn instantiated_traces(
    net: &Network,
    pi: &ParameterValuation,
    depth: usize,
    time: Duration,
) -> Option<TraceSet> {
    let options = ReachOptions {
        depth_limit: Some(depth),
        time_limit: Some(time),
        ..Default::default()
    };
    let inst = net.instantiate(pi).ok()?;
    let space = reachable(&inst, &options).ok()?;
    (space.termination() == Termination::Fixpoint).then(|| trace_set(&space))
}
