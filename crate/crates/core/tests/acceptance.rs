//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits non-zero if any fails.
//!
//! cargo test -p ptasynth --test acceptance

mod common;

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use ptasynth::cartography::{bc, classify, coverage_stats, BcMode, TraceProperty, Verdict};
use ptasynth::fixtures::{toy, SR_LATCH_MODEL};
use ptasynth::inverse_method::{im, ImError, ImOptions, ImResult};
use ptasynth::linarith::rational::int;
use ptasynth::linarith::{
    LinExpr, LinearInequality, ParameterValuation, Polyhedron, Rational, Relation, Space,
};
use ptasynth::model::{Network, RectangleV0};
use ptasynth::parser::{parse_model, parse_pi0, parse_v0};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn same_constraint(a: &Polyhedron, b: &Polyhedron) -> bool {
    a.equivalent(b).unwrap_or(false)
}

fn toy_rows(rows: Vec<LinearInequality>) -> Polyhedron {
    Polyhedron::from_inequalities(toy().space(), rows)
}

fn v(i: usize) -> LinExpr {
    LinExpr::var(3, i)
}

fn zero() -> LinExpr {
    LinExpr::constant(3, int(0))
}

fn below_diagonal() -> Polyhedron {
    toy_rows(vec![v(1).ge(&zero()), v(1).lt(&v(2))])
}

fn above_diagonal() -> Polyhedron {
    toy_rows(vec![v(1).ge(&zero()), v(2).le(&v(1))])
}

fn criterion_1() -> Outcome {
    let net = toy();
    let started = Instant::now();
    let r = im(
        &net,
        &ParameterValuation::from_integers(&[1, 2]),
        &ImOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let t1 = started.elapsed();
    check(same_constraint(&r.k0, &below_diagonal()), || {
        format!("K0 at (1,2) is {}", r.k0.render(&net.registry))
    })?;
    check(r.stats.refinements == 1, || {
        format!("{} refinements at (1,2)", r.stats.refinements)
    })?;
    let q = |n: usize| {
        net.components[0].locations[r.traces.nodes[n].locations[0]]
            .name
            .clone()
    };
    check(
        r.traces.nodes.len() == 2
            && r.traces.edges == vec![(0, net.action_id("a"), 1)]
            && q(0) == "q0"
            && q(1) == "q1",
        || format!("trace set at (1,2): {:?}", r.traces),
    )?;

    let started = Instant::now();
    let r = im(
        &net,
        &ParameterValuation::from_integers(&[2, 1]),
        &ImOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let t2 = started.elapsed();
    check(same_constraint(&r.k0, &above_diagonal()), || {
        format!("K0 at (2,1) is {}", r.k0.render(&net.registry))
    })?;
    check(r.stats.refinements == 0, || {
        format!("{} refinements at (2,1)", r.stats.refinements)
    })?;
    check(
        t1 < Duration::from_secs(1) && t2 < Duration::from_secs(1),
        || format!("too slow: {t1:?}, {t2:?}"),
    )?;
    Ok(format!("K0(1,2) and K0(2,1) exact, {t1:?} / {t2:?}"))
}

fn criterion_2() -> Outcome {
    let net = toy();
    let v0 = RectangleV0::from_integers(&[(0, 2), (0, 2)]).unwrap();
    let started = Instant::now();
    let tiling = bc(&net, &v0, BcMode::Full, &ImOptions::default()).map_err(|e| e.to_string())?;
    let report = coverage_stats(&tiling, &v0, 2).map_err(|e| e.to_string())?;
    let verdicts = classify(
        &tiling,
        &TraceProperty::forbidden_locations(&net, &["q2"]).map_err(|e| e.to_string())?,
    );
    let elapsed = started.elapsed();
    check(tiling.tiles.len() == 2, || {
        format!("{} tiles", tiling.tiles.len())
    })?;
    check(
        report.integer_covered == 9 && report.integer_total == 9,
        || {
            format!(
                "integer coverage {}/{}",
                report.integer_covered, report.integer_total
            )
        },
    )?;
    check(report.grid_covered == 25 && report.grid_total == 25, || {
        format!(
            "grid coverage {}/{}",
            report.grid_covered, report.grid_total
        )
    })?;
    let verdict_of = |expected: &Polyhedron| {
        tiling
            .tiles
            .iter()
            .position(|t| same_constraint(&t.constraint, expected))
            .map(|i| verdicts[i])
    };
    check(verdict_of(&below_diagonal()) == Some(Verdict::Good), || {
        "tile p1 < p2 is missing or not good".into()
    })?;
    check(verdict_of(&above_diagonal()) == Some(Verdict::Bad), || {
        "tile p2 <= p1 is missing or not bad".into()
    })?;
    check(elapsed < Duration::from_secs(2), || {
        format!("too slow: {elapsed:?}")
    })?;
    Ok(format!(
        "2 tiles, 9/9 integer, 25/25 grid, good/bad as expected, {elapsed:?}"
    ))
}

const RANDOM_NETWORKS: u64 = 120;
const DEPTH: usize = 12;
const TIME: Duration = Duration::from_secs(5);

fn random_options(optimized: bool) -> ImOptions {
    ImOptions {
        optimized,
        depth_limit: Some(DEPTH),
        time_limit: Some(TIME),
        ..Default::default()
    }
}

fn outcome_kind(r: &Result<ImResult, ImError>) -> &'static str {
    match r {
        Ok(_) => "ok",
        Err(ImError::Limit { .. }) => "limit",
        Err(ImError::IncompatibleInitialState) => "incompatible",
        Err(ImError::OutsideInitialConstraint) => "outside",
        Err(ImError::Reach(_)) => "empty",
        Err(ImError::ValuationLength { .. }) => "length",
    }
}

struct RandomRun {
    net: Network,
    pi0: ParameterValuation,
    result: ImResult,
}

fn criterion_3(terminated: &mut Vec<RandomRun>) -> Outcome {
    let mut outcomes: BTreeMap<&str, usize> = BTreeMap::new();
    let mut both = 0;
    let mut discrepancies = Vec::new();
    for seed in 0..RANDOM_NETWORKS {
        let g = common::random_network(seed, common::SMALL);
        let fast = im(&g.net, &g.pi0, &random_options(true));
        let slow = im(&g.net, &g.pi0, &random_options(false));
        let (kf, ks) = (outcome_kind(&fast), outcome_kind(&slow));
        *outcomes.entry(kf).or_default() += 1;
        let limit = |k| k == "limit";
        if kf != ks && !limit(kf) && !limit(ks) {
            discrepancies.push(format!("seed {seed}: {kf} vs {ks}"));
            continue;
        }
        if let (Ok(a), Ok(b)) = (fast, slow) {
            both += 1;
            if !same_constraint(&a.k0, &b.k0) {
                discrepancies.push(format!(
                    "seed {seed}: K0 {} vs {}",
                    a.k0.render(&g.net.registry),
                    b.k0.render(&g.net.registry)
                ));
            }
            if !a.traces.same_graph(&b.traces) {
                discrepancies.push(format!("seed {seed}: trace sets differ"));
            }
            terminated.push(RandomRun {
                net: g.net,
                pi0: g.pi0,
                result: a,
            });
        }
    }
    check(discrepancies.is_empty(), || discrepancies.join("; "))?;
    check(both > 0, || "no instance terminated".into())?;
    Ok(format!(
        "{RANDOM_NETWORKS} networks, {both} terminated in both variants, 0 discrepancies (outcomes {outcomes:?})"
    ))
}

fn preserved_at_samples(
    net: &Network,
    pi0: &ParameterValuation,
    k0: &Polyhedron,
    rng: &mut ChaCha8Rng,
) -> Result<(), String> {
    let reference = common::instantiated_traces(net, pi0, 200, TIME)
        .ok_or_else(|| format!("no fixpoint at π0 = {pi0}"))?;
    for _ in 0..5 {
        let pi = common::sample_parameters(k0, rng).ok_or("K0 has no sample point")?;
        check(k0.satisfies_point(&pi).unwrap(), || {
            format!("sample {pi} outside K0")
        })?;
        let traces = common::instantiated_traces(net, &pi, 200, TIME)
            .ok_or_else(|| format!("no fixpoint at {pi}"))?;
        check(traces.same_graph(&reference), || {
            format!("trace set at {pi} differs from π0 = {pi0}")
        })?;
    }
    Ok(())
}

fn criterion_4(runs: &[RandomRun]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let net = toy();
    for point in [[1, 2], [2, 1]] {
        let pi0 = ParameterValuation::from_integers(&point);
        let r = im(&net, &pi0, &ImOptions::default()).map_err(|e| e.to_string())?;
        preserved_at_samples(&net, &pi0, &r.k0, &mut rng).map_err(|e| format!("toy: {e}"))?;
    }
    let mut failures = Vec::new();
    for (i, run) in runs.iter().enumerate() {
        if let Err(e) = preserved_at_samples(&run.net, &run.pi0, &run.result.k0, &mut rng) {
            failures.push(format!("instance {i}: {e}"));
        }
    }
    check(failures.is_empty(), || failures.join("; "))?;
    Ok(format!(
        "toy plus {} random instances, 5 samples each, 0 discrepancies",
        runs.len()
    ))
}

/// Interval of values for column `k` compatible with `point` in `rows`
/// (other columns fixed), checked directly without elimination.
fn witness_interval_nonempty(rows: &[LinearInequality], k: usize, point: &[Rational]) -> bool {
    let mut lower: Option<(Rational, bool)> = None;
    let mut upper: Option<(Rational, bool)> = None;
    // replace when strictly tighter, or equal and now strict
    let tighten_lower = |cur: &mut Option<(Rational, bool)>, b: Rational, strict: bool| {
        let replace = match cur {
            None => true,
            Some((v, s)) => b > *v || (b == *v && strict && !*s),
        };
        if replace {
            *cur = Some((b, strict));
        }
    };
    let tighten_upper = |cur: &mut Option<(Rational, bool)>, b: Rational, strict: bool| {
        let replace = match cur {
            None => true,
            Some((v, s)) => b < *v || (b == *v && strict && !*s),
        };
        if replace {
            *cur = Some((b, strict));
        }
    };
    for row in rows {
        let a = Rational::from_integer(row.coeffs()[k].clone());
        let mut rest = Rational::from_integer(row.constant().clone());
        for (j, c) in row.coeffs().iter().enumerate() {
            if j != k {
                rest += Rational::from_integer(c.clone()) * &point[j];
            }
        }
        if a.is_zero() {
            let ok = match row.relation() {
                Relation::Ge => !rest.is_negative(),
                Relation::Gt => rest.is_positive(),
                Relation::Eq => rest.is_zero(),
            };
            if !ok {
                return false;
            }
            continue;
        }
        // a*y + rest rel 0  <=>  y rel' -rest/a
        let bound = -rest / &a;
        let strict = row.relation() == Relation::Gt;
        match row.relation() {
            Relation::Eq => {
                tighten_lower(&mut lower, bound.clone(), false);
                tighten_upper(&mut upper, bound, false);
            }
            _ if a.is_positive() => tighten_lower(&mut lower, bound, strict),
            _ => tighten_upper(&mut upper, bound, strict),
        }
    }
    match (lower, upper) {
        (Some((l, ls)), Some((u, us))) => l < u || (l == u && !ls && !us),
        _ => true,
    }
}

fn random_system(rng: &mut ChaCha8Rng) -> Vec<LinearInequality> {
    let n = rng.random_range(1..=6);
    (0..n)
        .map(|_| {
            let coeffs: Vec<_> = (0..3).map(|_| rng.random_range(-3i64..=3).into()).collect();
            let relation = match rng.random_range(0..5) {
                0 => Relation::Eq,
                1 | 2 => Relation::Gt,
                _ => Relation::Ge,
            };
            LinearInequality::new(coeffs, rng.random_range(-3i64..=3).into(), relation)
        })
        .collect()
}

fn criterion_5() -> Outcome {
    let started = Instant::now();
    let space = Space::new(3, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    let (mut nonempty, mut checked_points) = (0, 0);
    for case in 0..500 {
        let rows = random_system(&mut rng);
        let c = Polyhedron::from_inequalities(space, rows.clone());
        let k = rng.random_range(0..3);
        let projected = c.eliminate(&[k]);
        if projected.inequalities().iter().any(|r| r.mentions(k)) {
            failures.push(format!("case {case}: column {k} survives elimination"));
        }
        if c.is_satisfiable() {
            nonempty += 1;
        }
        for _ in 0..4 {
            if let Some(p) = c.sample_point(&mut rng) {
                checked_points += 1;
                if !rows.iter().all(|r| r.holds_at(&p)) {
                    failures.push(format!("case {case}: sample outside the system"));
                }
                if !projected.contains(&p) {
                    failures.push(format!("case {case}: point of C not in projection"));
                }
            }
            if let Some(mut q) = projected.sample_point(&mut rng) {
                checked_points += 1;
                q[k] = int(rng.random_range(-50i64..=50));
                if !witness_interval_nonempty(&rows, k, &q) {
                    failures.push(format!("case {case}: projected point has no witness"));
                }
            }
        }
        if !c.is_satisfiable() && projected.is_satisfiable() {
            failures.push(format!("case {case}: empty system, nonempty projection"));
        }
    }
    let elapsed = started.elapsed();
    check(failures.is_empty(), || {
        failures[..failures.len().min(5)].join("; ")
    })?;
    check(elapsed < Duration::from_secs(30), || {
        format!("too slow: {elapsed:?}")
    })?;
    Ok(format!(
        "500 systems ({nonempty} satisfiable), {checked_points} points checked both ways, {elapsed:?}"
    ))
}

fn run_cli(dir: &Path, args: &[&str]) -> i32 {
    let status = Command::new(env!("CARGO_BIN_EXE_ptasynth"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs");
    status.status.code().unwrap_or(-1)
}

fn directory_snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap())
        .map(|e| {
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect()
}

const THIRD_MODEL: &str = "var x: clock; p1, p2: parameter;
automaton toy
synclabs: a, b;
loc q0: while x <= p1 do
  when x = p1 sync a goto q1;
  when x >= 1/3*p2 sync b goto q2;
loc q1: while True do
loc q2: while True do
end
init := loc[toy] = q0 & x = 0;
";

fn criterion_6() -> Outcome {
    let inputs: [(&str, &str); 7] = [
        ("toy.imi", ptasynth::fixtures::TOY_MODEL),
        ("toy.pi0", "p1 = 1\np2 = 2\n"),
        ("toy.v0", "p1 = 0..2\np2 = 0..2\n"),
        ("latch.imi", SR_LATCH_MODEL),
        ("latch.v0", include_str!("../models/sr_latch.v0")),
        ("third.imi", THIRD_MODEL),
        ("third.pi0", "p1 = 1\np2 = 6\n"),
    ];
    let runs: [&[&str]; 8] = [
        &["toy.imi", "-o", "reach"],
        &["toy.imi", "--pi0", "toy.pi0", "-o", "inv"],
        &[
            "toy.imi", "--pi0", "toy.pi0", "--no-opt", "--incl", "-o", "naive",
        ],
        &[
            "toy.imi",
            "--v0",
            "toy.v0",
            "--forbid",
            "q2",
            "--grid-denominator",
            "3",
            "-o",
            "cover",
        ],
        &[
            "toy.imi", "--v0", "toy.v0", "--random", "4", "--seed", "9", "-o", "random",
        ],
        &[
            "latch.imi",
            "--v0",
            "latch.v0",
            "--plot-params",
            "0",
            "1",
            "--plot",
            "-o",
            "latch",
        ],
        &["latch.imi", "--depth", "2", "-o", "shallow"],
        &["third.imi", "--pi0", "third.pi0", "-o", "third"],
    ];
    let mut snapshots = Vec::new();
    let mut codes = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        for (name, text) in inputs {
            std::fs::write(dir.path().join(name), text).map_err(|e| e.to_string())?;
        }
        let mut run_codes = Vec::new();
        for args in runs {
            let mut full = args.to_vec();
            full.push("--no-timings");
            run_codes.push(run_cli(dir.path(), &full));
        }
        codes.push(run_codes);
        snapshots.push(directory_snapshot(dir.path()));
    }
    check(codes[0] == [0, 0, 0, 0, 0, 0, 2, 0], || {
        format!("exit codes {:?}", codes[0])
    })?;
    check(codes[0] == codes[1], || {
        "exit codes differ between runs".into()
    })?;
    let (a, b) = (&snapshots[0], &snapshots[1]);
    check(a.keys().eq(b.keys()), || "different file sets".into())?;
    for (name, bytes) in a {
        check(&b[name] == bytes, || format!("{name} differs between runs"))?;
    }
    let third = String::from_utf8_lossy(&a["third.res"]).into_owned();
    let first_line = third.lines().next().unwrap_or_default();
    check(first_line.contains("1/3*p2"), || {
        format!("third.res starts with `{first_line}`")
    })?;
    let net = parse_model(THIRD_MODEL).map_err(|d| d.to_string())?;
    let expected = Polyhedron::from_inequalities(
        net.space(),
        vec![
            v(1).ge(&zero()),
            v(1).lt(&v(2).scale(&ptasynth::linarith::rational::ratio(1, 3))),
        ],
    );
    let reparsed = parse_model(&format!(
        "var x: clock; p1, p2: parameter;\nautomaton t\nsynclabs: ;\nloc l: while True do\nend\ninit := loc[t] = l & {first_line};"
    ))
    .map_err(|d| d.to_string())?;
    check(
        same_constraint(&reparsed.initial_constraint, &expected),
        || format!("`{first_line}` does not read back as 0 <= p1 < p2/3"),
    )?;
    Ok(format!(
        "{} runs x2, {} files byte-identical, 1/3 exact: `{first_line}`",
        runs.len(),
        a.len()
    ))
}

fn criterion_7() -> Outcome {
    let net = parse_model(SR_LATCH_MODEL).map_err(|d| d.to_string())?;
    let pi0 = parse_pi0(include_str!("../models/sr_latch.pi0"), &net.registry)
        .map_err(|d| d.to_string())?;
    let r = im(&net, &pi0, &ImOptions::default()).map_err(|e| e.to_string())?;
    check(r.k0.satisfies_point(&pi0).unwrap(), || {
        "π0 outside K0".into()
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    preserved_at_samples(&net, &pi0, &r.k0, &mut rng)?;

    let v0 = parse_v0(include_str!("../models/sr_latch.v0"), &net.registry)
        .map_err(|d| d.to_string())?;
    let tiling = bc(&net, &v0, BcMode::Full, &ImOptions::default()).map_err(|e| e.to_string())?;
    let report = coverage_stats(&tiling, &v0, 1).map_err(|e| e.to_string())?;
    check(
        report.integer_covered == report.integer_total && report.integer_total == 36,
        || {
            format!(
                "integer coverage {}/{}",
                report.integer_covered, report.integer_total
            )
        },
    )?;
    for (i, tile) in tiling.tiles.iter().enumerate() {
        check(
            tile.constraint.satisfies_point(&tile.witness).unwrap(),
            || format!("tile {} misses its witness", i + 1),
        )?;
        preserved_at_samples(&net, &tile.witness, &tile.constraint, &mut rng)
            .map_err(|e| format!("tile {}: {e}", i + 1))?;
    }
    Ok(format!(
        "K0 = {} contains π0, traces preserved at 5 samples, {} tiles cover 36/36, each tile honest",
        r.k0.render(&net.registry),
        tiling.tiles.len()
    ))
}

fn main() {
    let mut terminated = Vec::new();
    let results: Vec<(&str, Outcome)> = vec![
        ("toy inverse method", criterion_1()),
        ("toy cartography", criterion_2()),
        (
            "in-place vs recomputing refinement",
            criterion_3(&mut terminated),
        ),
        ("trace-set preservation", criterion_4(&terminated)),
        ("elimination oracle", criterion_5()),
        ("determinism and exact rationals", criterion_6()),
        ("SR latch case study", criterion_7()),
    ];
    let mut failed = 0;
    for (i, (name, result)) in results.iter().enumerate() {
        match result {
            Ok(detail) => println!("criterion {} ({name}): PASS - {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL - {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
