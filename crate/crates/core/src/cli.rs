//! Command-line front end.
//!
//! ```text
//! ptasynth model.imi                      # reachability
//! ptasynth model.imi --pi0 ref.pi0        # inverse method
//! ptasynth model.imi --v0 box.v0 --plot   # cartography
//! ptasynth model.imi --v0 box.v0 --random 20 --seed 3
//! ```
//!
//! Exit codes: 0 success, 1 diagnostics (bad input or usage), 2 a depth or
//! time limit cut the analysis short (partial files are still written).

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Parser, ValueEnum};

use crate::cartography::{bc, classify, coverage_stats, BcMode, TraceProperty, Verdict};
use crate::inverse_method::{im, ImError, ImOptions, ImResult};
use crate::model::Network;
use crate::output::{
    emit_cartography_svg, emit_state_listing, emit_trace_dot, render_cart, render_res, PlotViewport,
};
use crate::parser::{parse_model, parse_pi0, parse_v0};
use crate::reachability::{reachable, trace_set, FixpointMode, ReachOptions, Termination};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Reach,
    Inverse,
    Cover,
    BorderRandom,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Reach => "reach",
            Mode::Inverse => "inverse",
            Mode::Cover => "cover",
            Mode::BorderRandom => "border-random",
        })
    }
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "ptasynth",
    version,
    about = "Parameter synthesis for networks of parametric timed automata"
)]
pub struct RunConfig {
    /// Model file.
    pub model: PathBuf,
    /// Analysis to run; inferred from --pi0 / --v0 / --random when omitted.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Reference valuation file (inverse mode).
    #[arg(long, value_name = "FILE")]
    pub pi0: Option<PathBuf>,
    /// Parameter rectangle file (cover and border-random modes).
    #[arg(long, value_name = "FILE")]
    pub v0: Option<PathBuf>,
    /// Maximum number of successor layers.
    #[arg(long, value_name = "N")]
    pub depth: Option<usize>,
    /// Time limit in seconds (per point in the cartography modes).
    #[arg(long, value_name = "SECONDS")]
    pub time: Option<f64>,
    /// Skip duplicate-state checks.
    #[arg(long)]
    pub acyclic: bool,
    /// Stop on constraint inclusion instead of equality.
    #[arg(long)]
    pub incl: bool,
    /// Recompute the state set after each refinement instead of updating it in place.
    #[arg(long = "no-opt")]
    pub no_opt: bool,
    /// Write the cartography SVG even when the model has more than two parameters
    /// (requires --plot-params).
    #[arg(long)]
    pub plot: bool,
    /// Number of random points (border-random mode).
    #[arg(long, value_name = "N")]
    pub random: Option<usize>,
    /// Seed for border-random mode.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Parameter indices (0-based) on the horizontal and vertical axes.
    #[arg(long, num_args = 2, value_names = ["I", "J"])]
    pub plot_params: Option<Vec<usize>>,
    /// Grid spacing 1/d used to estimate coverage.
    #[arg(long, default_value_t = 1, value_name = "D")]
    pub grid_denominator: i64,
    /// Prefix of every written file; defaults to the model path without extension.
    #[arg(long, short, value_name = "PREFIX")]
    pub output: Option<PathBuf>,
    /// Write 0 for every time measurement, so repeated runs give identical files.
    #[arg(long)]
    pub no_timings: bool,
    /// Location that makes a tile bad (`loc` or `automaton.loc`); repeatable.
    #[arg(long, value_name = "LOC")]
    pub forbid: Vec<String>,
    /// Tiles are bad when action B can occur before action A.
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    pub precedes: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Diag,
    Limit,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Diag => 1,
            Status::Limit => 2,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Ok => "ok",
            Status::Diag => "diag",
            Status::Limit => "limit",
        })
    }
}

/// Failure carrying the messages shown to the user.
struct Failure(Vec<String>);

impl<T: fmt::Display> From<T> for Failure {
    fn from(e: T) -> Self {
        Failure(vec![e.to_string()])
    }
}

type Outcome = Result<Status, Failure>;

impl RunConfig {
    /// Mode after applying the defaults; rejects contradictory flags.
    pub fn resolved_mode(&self) -> Result<Mode, String> {
        let inferred = if self.pi0.is_some() && self.v0.is_some() {
            return Err("--pi0 and --v0 cannot be used together".into());
        } else if self.pi0.is_some() {
            Mode::Inverse
        } else if self.v0.is_some() {
            if self.random.is_some() {
                Mode::BorderRandom
            } else {
                Mode::Cover
            }
        } else if self.random.is_some() {
            Mode::BorderRandom
        } else {
            Mode::Reach
        };
        let mode = self.mode.unwrap_or(inferred);
        match mode {
            Mode::Inverse if self.pi0.is_none() => return Err("inverse mode needs --pi0".into()),
            Mode::Cover | Mode::BorderRandom if self.v0.is_none() => {
                return Err(format!("{mode} mode needs --v0"))
            }
            Mode::BorderRandom if self.random.is_none() => {
                return Err("border-random mode needs --random N".into())
            }
            _ => {}
        }
        if self.pi0.is_some() && mode != Mode::Inverse {
            return Err(format!("--pi0 is not used in {mode} mode"));
        }
        if self.v0.is_some() && !matches!(mode, Mode::Cover | Mode::BorderRandom) {
            return Err(format!("--v0 is not used in {mode} mode"));
        }
        if self.random.is_some() && mode != Mode::BorderRandom {
            return Err(format!("--random is not used in {mode} mode"));
        }
        if self.random == Some(0) {
            return Err("--random needs at least 1 point".into());
        }
        if self.time.is_some_and(|t| !(t >= 0.0 && t.is_finite())) {
            return Err("--time must be a non-negative number of seconds".into());
        }
        if self.grid_denominator < 1 {
            return Err("--grid-denominator must be at least 1".into());
        }
        let cartography = matches!(mode, Mode::Cover | Mode::BorderRandom);
        if !cartography
            && (self.plot
                || self.plot_params.is_some()
                || !self.forbid.is_empty()
                || self.precedes.is_some())
        {
            return Err(format!(
                "--plot, --plot-params, --forbid and --precedes only apply to cartography, not {mode} mode"
            ));
        }
        if !self.forbid.is_empty() && self.precedes.is_some() {
            return Err("--forbid and --precedes cannot be used together".into());
        }
        Ok(mode)
    }

    fn prefix(&self) -> PathBuf {
        self.output
            .clone()
            .unwrap_or_else(|| self.model.with_extension(""))
    }

    fn time_limit(&self) -> Option<Duration> {
        self.time.map(Duration::from_secs_f64)
    }

    fn im_options(&self) -> ImOptions {
        ImOptions {
            optimized: !self.no_opt,
            fixpoint: self.fixpoint(),
            depth_limit: self.depth,
            time_limit: self.time_limit(),
            acyclic: self.acyclic,
            ..Default::default()
        }
    }

    fn fixpoint(&self) -> FixpointMode {
        if self.incl {
            FixpointMode::Inclusion
        } else {
            FixpointMode::Equality
        }
    }
}

fn read(flag: &str, path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| {
        Failure(vec![format!(
            "{flag}: cannot read `{}`: {e}",
            path.display()
        )])
    })
}

fn write(path: PathBuf, text: &str) -> Result<(), Failure> {
    fs::write(&path, text)
        .map_err(|e| Failure(vec![format!("cannot write `{}`: {e}", path.display())]))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn diagnostics(path: &Path, diags: &crate::diagnostic::Diagnostics) -> Failure {
    Failure(
        diags
            .iter()
            .map(|d| format!("{}:{d}", path.display()))
            .collect(),
    )
}

fn limit_name(t: Termination) -> &'static str {
    match t {
        Termination::DepthLimit => "depth limit",
        Termination::TimeLimit => "time limit",
        Termination::Fixpoint => "fixpoint",
    }
}

fn run_reach(config: &RunConfig, net: &Network, prefix: &Path) -> Outcome {
    let options = ReachOptions {
        depth_limit: config.depth,
        time_limit: config.time_limit(),
        acyclic: config.acyclic,
        fixpoint: config.fixpoint(),
        ..Default::default()
    };
    let space = reachable(net, &options)?;
    write(
        with_suffix(prefix, ".states"),
        &emit_state_listing(net, &space),
    )?;
    write(
        with_suffix(prefix, ".dot"),
        &emit_trace_dot(net, &trace_set(&space)),
    )?;
    eprintln!(
        "{} states, {} transitions",
        space.state_count(),
        space.edge_count()
    );
    Ok(match space.termination() {
        Termination::Fixpoint => Status::Ok,
        t => {
            eprintln!("stopped early: {}", limit_name(t));
            Status::Limit
        }
    })
}

fn write_im(
    config: &RunConfig,
    net: &Network,
    prefix: &Path,
    r: &ImResult,
    partial: Option<&str>,
) -> Result<(), Failure> {
    write(
        with_suffix(prefix, ".res"),
        &render_res(net, r, !config.no_timings, partial),
    )?;
    write(
        with_suffix(prefix, ".states"),
        &emit_state_listing(net, &r.space),
    )?;
    write(with_suffix(prefix, ".dot"), &emit_trace_dot(net, &r.traces))
}

fn run_inverse(config: &RunConfig, net: &Network, prefix: &Path) -> Outcome {
    let path = config.pi0.as_ref().expect("checked by resolved_mode");
    let pi0 = parse_pi0(&read("--pi0", path)?, &net.registry).map_err(|d| diagnostics(path, &d))?;
    match im(net, &pi0, &config.im_options()) {
        Ok(r) => {
            write_im(config, net, prefix, &r, None)?;
            eprintln!("K0: {}", r.k0.render(&net.registry));
            Ok(Status::Ok)
        }
        Err(ImError::Limit { reason, partial }) => {
            write_im(config, net, prefix, &partial, Some(limit_name(reason)))?;
            eprintln!(
                "stopped early: {}; partial K0: {}",
                limit_name(reason),
                partial.k0.render(&net.registry)
            );
            Ok(Status::Limit)
        }
        Err(e) => Err(e.into()),
    }
}

fn run_cartography(config: &RunConfig, mode: Mode, net: &Network, prefix: &Path) -> Outcome {
    let path = config.v0.as_ref().expect("checked by resolved_mode");
    let v0 = parse_v0(&read("--v0", path)?, &net.registry).map_err(|d| diagnostics(path, &d))?;
    let m = net.parameter_count();
    let plot_params = match &config.plot_params {
        Some(p) => {
            if p[0] == p[1] || p[0] >= m || p[1] >= m {
                return Err(format!("--plot-params: need two distinct indices below {m}").into());
            }
            Some((p[0], p[1]))
        }
        None if m == 2 => Some((0, 1)),
        None if config.plot => {
            return Err(format!(
                "--plot: the model has {m} parameters; choose two with --plot-params"
            )
            .into())
        }
        None => None,
    };
    let property = if !config.forbid.is_empty() {
        let names: Vec<&str> = config.forbid.iter().map(String::as_str).collect();
        Some(TraceProperty::forbidden_locations(net, &names)?)
    } else if let Some(p) = &config.precedes {
        Some(TraceProperty::action_precedes(net, &p[0], &p[1])?)
    } else {
        None
    };
    let bc_mode = match mode {
        Mode::BorderRandom => BcMode::Random {
            draws: config.random.expect("checked by resolved_mode"),
            seed: config.seed,
        },
        _ => BcMode::Full,
    };
    let tiling = bc(net, &v0, bc_mode, &config.im_options())?;
    let verdicts = match &property {
        Some(p) => classify(&tiling, p),
        None => vec![Verdict::Unclassified; tiling.tiles.len()],
    };
    let report = coverage_stats(&tiling, &v0, config.grid_denominator)?;
    write(
        with_suffix(prefix, ".cart"),
        &render_cart(net, &tiling, &verdicts, &report),
    )?;
    for (i, tile) in tiling.tiles.iter().enumerate() {
        write(
            with_suffix(prefix, &format!("_tile{}.dot", i + 1)),
            &emit_trace_dot(net, &tile.traces),
        )?;
    }
    if let Some((x, y)) = plot_params {
        let viewport = PlotViewport::new(x, y, v0.clone())?;
        let classified = property.as_ref().map(|_| verdicts.as_slice());
        write(
            with_suffix(prefix, "_cart.svg"),
            &emit_cartography_svg(net, &tiling, &viewport, classified)?,
        )?;
    }
    eprintln!("{report}");
    if tiling.failures.is_empty() {
        Ok(Status::Ok)
    } else {
        eprintln!("{} points left uncovered", tiling.failures.len());
        Ok(Status::Limit)
    }
}

fn execute(config: &RunConfig, mode: Mode) -> Outcome {
    let net =
        parse_model(&read("model", &config.model)?).map_err(|d| diagnostics(&config.model, &d))?;
    let prefix = config.prefix();
    match mode {
        Mode::Reach => run_reach(config, &net, &prefix),
        Mode::Inverse => run_inverse(config, &net, &prefix),
        Mode::Cover | Mode::BorderRandom => run_cartography(config, mode, &net, &prefix),
    }
}

fn summary(mode: &str, status: Status, started: Instant, timings: bool) {
    let ms = if timings {
        started.elapsed().as_millis()
    } else {
        0
    };
    println!("mode={mode} status={status} time_ms={ms}");
}

/// Runs one analysis and returns the process exit code.
pub fn run(config: &RunConfig) -> i32 {
    let started = Instant::now();
    let mode = match config.resolved_mode() {
        Ok(m) => m,
        Err(msg) => {
            eprintln!("error: {msg}");
            let shown = config.mode.map_or("unknown".to_string(), |m| m.to_string());
            summary(&shown, Status::Diag, started, !config.no_timings);
            return Status::Diag.exit_code();
        }
    };
    let status = match execute(config, mode) {
        Ok(s) => s,
        Err(Failure(messages)) => {
            for m in messages {
                eprintln!("error: {m}");
            }
            Status::Diag
        }
    };
    summary(&mode.to_string(), status, started, !config.no_timings);
    status.exit_code()
}

/// Parses `args` (program name first) and runs; usage errors exit with 1.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(config) => run(&config),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            if code == 1 {
                println!("mode=unknown status=diag time_ms=0");
            }
            code
        }
    }
}
