//! Parameter synthesis around a reference valuation.
//!
//! Starting from the reference point `π0`, forward exploration proceeds layer
//! by layer. Whenever a stored state's parameter projection excludes `π0`, a
//! violated inequality `J` of that projection is chosen and `¬J` is conjoined
//! onto the working constraint. The result `K0` is the intersection of the
//! parameter projections of all states at the fixpoint; every valuation in it
//! yields the same trace set as `π0`.
//!
//! By default `¬J` is conjoined in place onto the stored states (states that
//! become empty are dropped). With `optimized = false` the state set is
//! instead recomputed from scratch under the refined constraint, which is
//! slower but follows the textbook loop literally.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::linarith::{LinearInequality, ParameterValuation, Polyhedron, Relation};
use crate::model::Network;
use crate::reachability::{
    trace_set, Explorer, FixpointMode, ReachError, ReachOptions, StateId, StateSpace, Termination,
    TraceSet,
};

#[derive(Debug, Clone)]
pub struct ImOptions {
    pub optimized: bool,
    pub fixpoint: FixpointMode,
    /// Maximum number of BFS layers explored.
    pub depth_limit: Option<usize>,
    pub time_limit: Option<Duration>,
    /// Store every successor without duplicate checks.
    pub acyclic: bool,
    pub prune_redundant: bool,
}

impl Default for ImOptions {
    fn default() -> Self {
        ImOptions {
            optimized: true,
            fixpoint: FixpointMode::Equality,
            depth_limit: None,
            time_limit: None,
            acyclic: false,
            prune_redundant: true,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ImStats {
    /// BFS layers explored.
    pub iterations: usize,
    pub refinements: usize,
    /// Rows of the returned constraint.
    pub inequalities: usize,
    pub states: usize,
    pub transitions: usize,
    pub elapsed: Duration,
    /// The negated inequalities in the order they were conjoined.
    pub refinement_log: Vec<LinearInequality>,
}

#[derive(Debug, Clone)]
pub struct ImResult {
    pub k0: Polyhedron,
    /// Final states, renumbered without gaps.
    pub space: StateSpace,
    pub traces: TraceSet,
    pub stats: ImStats,
}

#[derive(Debug, Clone, Error)]
pub enum ImError {
    #[error("reference valuation has {got} values, expected {expected}")]
    ValuationLength { expected: usize, got: usize },
    #[error("reference valuation violates the initial parameter constraint")]
    OutsideInitialConstraint,
    #[error(transparent)]
    Reach(#[from] ReachError),
    #[error("initial state is incompatible with the reference valuation")]
    IncompatibleInitialState,
    #[error("{} after {} iterations; result is partial", limit_text(*.reason), .partial.stats.iterations)]
    Limit {
        reason: Termination,
        partial: Box<ImResult>,
    },
}

fn limit_text(t: Termination) -> &'static str {
    match t {
        Termination::DepthLimit => "depth limit reached",
        Termination::TimeLimit => "time limit reached",
        Termination::Fixpoint => "fixpoint reached",
    }
}

/// First row of `c`, in canonical order, that `π0` violates. Equalities are
/// split into their two non-strict halves and the violated half is returned.
pub fn select_incompatible(c: &Polyhedron, pi0: &ParameterValuation) -> Option<LinearInequality> {
    let point = c.lift(pi0);
    c.inequalities()
        .iter()
        .flat_map(|row| match row.relation() {
            Relation::Eq => row.decompose(),
            _ => vec![row.clone()],
        })
        .find(|row| !row.holds_at(&point))
}

struct Run<'a> {
    net: &'a Network,
    pi0: &'a ParameterValuation,
    options: &'a ImOptions,
    deadline: Option<Instant>,
    started: Instant,
    k: Polyhedron,
    explorer: Explorer,
    iterations: usize,
    refinements: usize,
    log: Vec<LinearInequality>,
}

impl Run<'_> {
    fn reach_options(&self) -> ReachOptions {
        ReachOptions {
            depth_limit: None,
            time_limit: None,
            acyclic: self.options.acyclic,
            fixpoint: self.options.fixpoint,
            prune_redundant: self.options.prune_redundant,
        }
    }

    fn compatible(&mut self, id: StateId) -> bool {
        self.explorer
            .space
            .parameter_projection(id)
            .satisfies_point(self.pi0)
            .expect("projection is over parameters and π0 has the right length")
    }

    /// Refines until every state from `ids` on is compatible with `π0`.
    fn refine(&mut self, mut ids: Vec<StateId>) -> Result<(), Termination> {
        let mut pos = 0;
        while pos < ids.len() {
            let id = ids[pos];
            if !self.explorer.space.is_alive(id) || self.compatible(id) {
                pos += 1;
                continue;
            }
            if self.explorer.timed_out() {
                return Err(Termination::TimeLimit);
            }
            let projection = self.explorer.space.parameter_projection(id).clone();
            let j = select_incompatible(&projection, self.pi0)
                .expect("an incompatible projection has a violated row");
            let not_j = j.negate().expect("selected rows are never equalities");
            let restriction = Polyhedron::from_inequalities(self.k.space(), vec![not_j.clone()]);
            let refined = self.k.meet(&restriction);
            debug_assert!(
                refined.included_in(&self.k) && !self.k.included_in(&refined),
                "working constraint must strictly shrink"
            );
            self.k = refined;
            self.refinements += 1;
            self.log.push(not_j);
            if self.options.optimized {
                self.explorer.space.restrict_all(&restriction);
            } else {
                let net_k = self.net.with_initial_constraint(self.k.clone());
                let mut explorer = Explorer::new(&net_k, self.reach_options(), self.deadline)
                    .expect("π0 stays inside the refined initial state");
                if explorer.run(&net_k, Some(self.iterations)) == Termination::TimeLimit {
                    self.explorer = explorer;
                    return Err(Termination::TimeLimit);
                }
                self.explorer = explorer;
                ids = self.explorer.space.ids().collect();
                pos = 0;
            }
        }
        Ok(())
    }

    fn current_net(&self) -> Network {
        if self.options.optimized {
            self.net.clone()
        } else {
            self.net.with_initial_constraint(self.k.clone())
        }
    }

    fn finish(mut self) -> ImResult {
        let ids: Vec<StateId> = self.explorer.space.ids().collect();
        let mut k0 = Polyhedron::universe(self.net.space());
        for id in ids {
            k0 = k0.meet(self.explorer.space.parameter_projection(id));
        }
        let k0 = k0.minimize();
        let space = self.explorer.space.compacted();
        let traces = trace_set(&space);
        let stats = ImStats {
            iterations: self.iterations,
            refinements: self.refinements,
            inequalities: k0.len(),
            states: space.state_count(),
            transitions: space.edge_count(),
            elapsed: self.started.elapsed(),
            refinement_log: self.log,
        };
        ImResult {
            k0,
            space,
            traces,
            stats,
        }
    }
}

/// Synthesizes `K0` around `π0` for `net`.
pub fn im(
    net: &Network,
    pi0: &ParameterValuation,
    options: &ImOptions,
) -> Result<ImResult, ImError> {
    let started = Instant::now();
    let expected = net.parameter_count();
    if pi0.len() != expected {
        return Err(ImError::ValuationLength {
            expected,
            got: pi0.len(),
        });
    }
    if !net
        .initial_constraint
        .satisfies_point(pi0)
        .map_err(|_| ImError::OutsideInitialConstraint)?
    {
        return Err(ImError::OutsideInitialConstraint);
    }
    let deadline = options.time_limit.map(|t| started + t);
    let reach = ReachOptions {
        acyclic: options.acyclic,
        fixpoint: options.fixpoint,
        prune_redundant: options.prune_redundant,
        ..Default::default()
    };
    let explorer = Explorer::new(net, reach, deadline)?;
    let mut run = Run {
        net,
        pi0,
        options,
        deadline,
        started,
        k: net.initial_constraint.clone(),
        explorer,
        iterations: 0,
        refinements: 0,
        log: Vec::new(),
    };
    if !run.compatible(0) {
        return Err(ImError::IncompatibleInitialState);
    }
    let mut fresh: Vec<StateId> = Vec::new();
    let stop = loop {
        if let Err(t) = run.refine(std::mem::take(&mut fresh)) {
            break Some(t);
        }
        if options.depth_limit.is_some_and(|d| run.iterations > d) {
            break Some(Termination::DepthLimit);
        }
        if run.explorer.timed_out() {
            break Some(Termination::TimeLimit);
        }
        let net_k = run.current_net();
        match run.explorer.expand(&net_k) {
            Err(t) => break Some(t),
            Ok(new) if new.is_empty() => break None,
            Ok(new) => {
                run.iterations += 1;
                fresh = new;
            }
        }
    };
    match stop {
        None => Ok(run.finish()),
        Some(reason) => Err(ImError::Limit {
            reason,
            partial: Box::new(run.finish()),
        }),
    }
}
