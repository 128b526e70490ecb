//! Symbolic semantics and layered forward exploration.
//!
//! A symbolic state is a location per component, a valuation of the discrete
//! variables and a polyhedron over clocks and parameters. States are stored
//! under the key (locations, discretes); each key maps to the list of
//! constraints seen with it.
//!
//! One step: `C' = elapse(reset(C ∧ g, ρ) ∧ I(q')) ∧ I(q')`. Actions in the
//! alphabet of several components fire only jointly (guards conjoined, resets
//! unioned); unlabeled steps interleave.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::linarith::{Polyhedron, Space};
use crate::model::{ActionId, LocationId, Network, TransitionRecord, UpdateValue};

pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateKey {
    pub locations: Vec<LocationId>,
    pub discretes: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicState {
    pub key: StateKey,
    pub constraint: Polyhedron,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FixpointMode {
    /// A new state is a duplicate when some stored constraint under its key is equal to it.
    #[default]
    Equality,
    /// A new state is a duplicate when some stored constraint under its key contains it.
    Inclusion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Fixpoint,
    DepthLimit,
    TimeLimit,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReachError {
    #[error("empty initial state")]
    EmptyInitialState,
}

#[derive(Debug, Clone)]
pub struct ReachOptions {
    pub depth_limit: Option<usize>,
    pub time_limit: Option<Duration>,
    /// Skip duplicate detection entirely.
    pub acyclic: bool,
    pub fixpoint: FixpointMode,
    /// Remove rows entailed by the others from every new constraint.
    pub prune_redundant: bool,
}

impl Default for ReachOptions {
    fn default() -> Self {
        ReachOptions {
            depth_limit: None,
            time_limit: None,
            acyclic: false,
            fixpoint: FixpointMode::Equality,
            prune_redundant: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AddOutcome {
    New(StateId),
    Duplicate(StateId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub source: StateId,
    pub action: Option<ActionId>,
    pub target: StateId,
}

#[derive(Debug, Clone)]
struct Stored {
    state: SymbolicState,
    alive: bool,
    projection: Option<Polyhedron>,
}

/// Reachable states with stable ids, action edges and BFS layers.
#[derive(Debug, Clone)]
pub struct StateSpace {
    space: Space,
    mode: FixpointMode,
    acyclic: bool,
    states: Vec<Stored>,
    index: HashMap<StateKey, Vec<StateId>>,
    edges: Vec<Edge>,
    edge_set: HashSet<Edge>,
    layers: Vec<Vec<StateId>>,
    termination: Termination,
}

impl StateSpace {
    pub fn new(space: Space, mode: FixpointMode, acyclic: bool) -> Self {
        StateSpace {
            space,
            mode,
            acyclic,
            states: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            edge_set: HashSet::new(),
            layers: Vec::new(),
            termination: Termination::Fixpoint,
        }
    }

    pub fn constraint_space(&self) -> Space {
        self.space
    }

    pub fn termination(&self) -> Termination {
        self.termination
    }

    pub fn set_termination(&mut self, t: Termination) {
        self.termination = t;
    }

    /// Inserts `state` unless a stored state under the same key makes it redundant.
    pub fn add_state(&mut self, state: SymbolicState) -> AddOutcome {
        assert!(
            state.constraint.is_satisfiable(),
            "empty states are never stored"
        );
        if !self.acyclic {
            if let Some(ids) = self.index.get(&state.key) {
                for &id in ids {
                    let stored = &self.states[id].state.constraint;
                    let duplicate = match self.mode {
                        FixpointMode::Equality => {
                            stored == &state.constraint
                                || (state.constraint.included_in(stored)
                                    && stored.included_in(&state.constraint))
                        }
                        FixpointMode::Inclusion => state.constraint.included_in(stored),
                    };
                    if duplicate {
                        return AddOutcome::Duplicate(id);
                    }
                }
            }
        }
        let id = self.states.len();
        self.index.entry(state.key.clone()).or_default().push(id);
        self.states.push(Stored {
            state,
            alive: true,
            projection: None,
        });
        AddOutcome::New(id)
    }

    pub fn add_edge(&mut self, source: StateId, action: Option<ActionId>, target: StateId) {
        let e = Edge {
            source,
            action,
            target,
        };
        if self.edge_set.insert(e) {
            self.edges.push(e);
        }
    }

    pub fn state(&self, id: StateId) -> &SymbolicState {
        &self.states[id].state
    }

    pub fn is_alive(&self, id: StateId) -> bool {
        self.states.get(id).is_some_and(|s| s.alive)
    }

    /// Live state ids in increasing order.
    pub fn ids(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.states.len()).filter(|&i| self.states[i].alive)
    }

    pub fn states(&self) -> impl Iterator<Item = (StateId, &SymbolicState)> {
        self.ids().map(|i| (i, &self.states[i].state))
    }

    pub fn state_count(&self) -> usize {
        self.states.iter().filter(|s| s.alive).count()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// BFS layers of live states; layer 0 holds the initial state.
    pub fn layers(&self) -> Vec<Vec<StateId>> {
        self.layers
            .iter()
            .map(|l| {
                l.iter()
                    .copied()
                    .filter(|&i| self.states[i].alive)
                    .collect()
            })
            .collect()
    }

    pub fn depth(&self) -> usize {
        self.layers.len().saturating_sub(1)
    }

    fn push_layer(&mut self, layer: Vec<StateId>) {
        self.layers.push(layer);
    }

    fn frontier(&self) -> Vec<StateId> {
        self.layers
            .last()
            .map(|l| {
                l.iter()
                    .copied()
                    .filter(|&i| self.states[i].alive)
                    .collect()
            })
            .unwrap_or_default()
    }

    /// `∃ clocks: C` for a stored state, cached.
    pub fn parameter_projection(&mut self, id: StateId) -> &Polyhedron {
        let stored = &mut self.states[id];
        stored
            .projection
            .get_or_insert_with(|| stored.state.constraint.project_parameters())
    }

    /// Conjoins a parameter constraint onto every live state; states that become
    /// empty are deleted with their incident edges. Returns the number deleted.
    pub fn restrict_all(&mut self, extra: &Polyhedron) -> usize {
        debug_assert!(!extra.mentions_clocks());
        let mut deleted = HashSet::new();
        for (id, stored) in self.states.iter_mut().enumerate() {
            if !stored.alive {
                continue;
            }
            let c = stored.state.constraint.meet(extra);
            if c.is_satisfiable() {
                stored.state.constraint = c;
                if let Some(p) = &stored.projection {
                    stored.projection = Some(p.meet(extra));
                }
            } else {
                stored.alive = false;
                stored.projection = None;
                deleted.insert(id);
            }
        }
        if !deleted.is_empty() {
            for ids in self.index.values_mut() {
                ids.retain(|i| !deleted.contains(i));
            }
            self.edges
                .retain(|e| !deleted.contains(&e.source) && !deleted.contains(&e.target));
            self.edge_set
                .retain(|e| !deleted.contains(&e.source) && !deleted.contains(&e.target));
        }
        deleted.len()
    }

    /// Copy with deleted states dropped and ids renumbered in order.
    pub fn compacted(&self) -> StateSpace {
        let mut map = vec![usize::MAX; self.states.len()];
        let mut out = StateSpace::new(self.space, self.mode, self.acyclic);
        for id in self.ids() {
            map[id] = out.states.len();
            let s = &self.states[id];
            out.index
                .entry(s.state.key.clone())
                .or_default()
                .push(out.states.len());
            out.states.push(s.clone());
        }
        for e in &self.edges {
            out.add_edge(map[e.source], e.action, map[e.target]);
        }
        out.layers = self
            .layers()
            .into_iter()
            .map(|l| l.into_iter().map(|i| map[i]).collect())
            .collect();
        out.termination = self.termination;
        out
    }
}

fn invariant_at(net: &Network, locations: &[LocationId]) -> Polyhedron {
    net.components
        .iter()
        .zip(locations)
        .fold(Polyhedron::universe(net.space()), |acc, (c, &l)| {
            acc.meet(&c.locations[l].invariant)
        })
}

/// `C0 = elapse(K ∧ I(q0) ∧ x1 = … = xH ∧ x1 ≥ 0 ∧ pins) ∧ I(q0)`.
pub fn initial_state(net: &Network) -> Result<SymbolicState, ReachError> {
    initial_state_with(net, true)
}

fn initial_state_with(net: &Network, prune: bool) -> Result<SymbolicState, ReachError> {
    use crate::linarith::LinExpr;
    let space = net.space();
    let dim = space.dimension();
    let locations: Vec<LocationId> = net.components.iter().map(|c| c.initial_location).collect();
    let invariant = invariant_at(net, &locations);
    let mut rows = Vec::new();
    for i in 1..space.clocks {
        rows.push(LinExpr::var(dim, i - 1).eq(&LinExpr::var(dim, i)));
    }
    if space.clocks > 0 {
        rows.push(LinExpr::var(dim, 0).ge(&LinExpr::zero(dim)));
    }
    let start = Polyhedron::from_inequalities(space, rows)
        .meet(&net.initial_constraint)
        .meet(&net.initial_clocks)
        .meet(&invariant);
    let mut c0 = start.time_elapse().meet(&invariant);
    if !c0.is_satisfiable() {
        return Err(ReachError::EmptyInitialState);
    }
    if prune {
        c0 = c0.minimize();
    }
    Ok(SymbolicState {
        key: StateKey {
            locations,
            discretes: net.initial_discretes.clone(),
        },
        constraint: c0,
    })
}

/// A global step: its label and the (component, transition) pairs that move.
type Step<'n> = (Option<ActionId>, Vec<(usize, &'n TransitionRecord)>);

/// Global steps enabled at `key`.
fn combinations<'n>(net: &'n Network, key: &StateKey) -> Vec<Step<'n>> {
    let mut out = Vec::new();
    for (i, comp) in net.components.iter().enumerate() {
        for t in comp.outgoing(key.locations[i]) {
            let Some(a) = t.action else {
                out.push((None, vec![(i, t)]));
                continue;
            };
            let participants = net.participants(a);
            if participants.first() != Some(&i) {
                continue;
            }
            let mut partial: Vec<Vec<(usize, &TransitionRecord)>> = vec![vec![(i, t)]];
            for &j in &participants[1..] {
                let options: Vec<&TransitionRecord> = net.components[j]
                    .outgoing(key.locations[j])
                    .filter(|u| u.action == Some(a))
                    .collect();
                partial = partial
                    .into_iter()
                    .flat_map(|prefix| {
                        options.iter().map(move |&u| {
                            let mut p = prefix.clone();
                            p.push((j, u));
                            p
                        })
                    })
                    .collect();
                if partial.is_empty() {
                    break;
                }
            }
            out.extend(partial.into_iter().map(|combo| (Some(a), combo)));
        }
    }
    out
}

/// One-step successors of `state`, in deterministic order.
pub fn successors(net: &Network, state: &SymbolicState) -> Vec<(Option<ActionId>, SymbolicState)> {
    successors_with(net, state, true)
}

pub fn successors_with(
    net: &Network,
    state: &SymbolicState,
    prune: bool,
) -> Vec<(Option<ActionId>, SymbolicState)> {
    let mut out = Vec::new();
    for (action, combo) in combinations(net, &state.key) {
        let enabled = combo.iter().all(|(_, t)| {
            t.discrete_guard
                .iter()
                .all(|g| g.comparison.holds(state.key.discretes[g.variable], g.value))
        });
        if !enabled {
            continue;
        }
        let mut guarded = state.constraint.clone();
        let mut resets = BTreeSet::new();
        let mut locations = state.key.locations.clone();
        let mut discretes = state.key.discretes.clone();
        for (i, t) in &combo {
            guarded = guarded.meet(&t.guard);
            resets.extend(t.resets.iter().copied());
            locations[*i] = t.target;
            for u in &t.discrete_updates {
                discretes[u.variable] = match u.value {
                    UpdateValue::Constant(n) => n,
                    UpdateValue::Variable(v) => state.key.discretes[v],
                };
            }
        }
        if !guarded.is_satisfiable() {
            continue;
        }
        let resets: Vec<usize> = resets.into_iter().collect();
        let invariant = invariant_at(net, &locations);
        let entered = guarded.reset_clocks(&resets).meet(&invariant);
        if !entered.is_satisfiable() {
            continue;
        }
        let mut next = entered.time_elapse().meet(&invariant);
        if !next.is_satisfiable() {
            continue;
        }
        if prune {
            next = next.minimize();
        }
        out.push((
            action,
            SymbolicState {
                key: StateKey {
                    locations,
                    discretes,
                },
                constraint: next,
            },
        ));
    }
    out
}

/// Layered forward exploration shared by plain reachability and the inverse method.
#[derive(Debug, Clone)]
pub struct Explorer {
    options: ReachOptions,
    deadline: Option<Instant>,
    pub space: StateSpace,
}

impl Explorer {
    pub fn new(
        net: &Network,
        options: ReachOptions,
        deadline: Option<Instant>,
    ) -> Result<Self, ReachError> {
        let s0 = initial_state_with(net, options.prune_redundant)?;
        let mut space = StateSpace::new(net.space(), options.fixpoint, options.acyclic);
        let AddOutcome::New(id) = space.add_state(s0) else {
            unreachable!("first state is always new")
        };
        space.push_layer(vec![id]);
        Ok(Explorer {
            options,
            deadline,
            space,
        })
    }

    pub fn timed_out(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    /// Successors of the last layer; the ones not already stored become the next
    /// layer (possibly empty, which means fixpoint).
    pub fn expand(&mut self, net: &Network) -> Result<Vec<StateId>, Termination> {
        let frontier = self.space.frontier();
        let mut fresh = Vec::new();
        for id in frontier {
            if self.timed_out() {
                return Err(Termination::TimeLimit);
            }
            let state = self.space.state(id).clone();
            for (action, next) in successors_with(net, &state, self.options.prune_redundant) {
                let target = match self.space.add_state(next) {
                    AddOutcome::New(t) => {
                        fresh.push(t);
                        t
                    }
                    AddOutcome::Duplicate(t) => t,
                };
                self.space.add_edge(id, action, target);
            }
        }
        self.space.push_layer(fresh.clone());
        Ok(fresh)
    }

    /// Explores until fixpoint, `depth_limit` layers, or the deadline.
    pub fn run(&mut self, net: &Network, depth_limit: Option<usize>) -> Termination {
        let termination = loop {
            if self.space.frontier().is_empty() {
                break Termination::Fixpoint;
            }
            if depth_limit.is_some_and(|d| self.space.depth() >= d) {
                break Termination::DepthLimit;
            }
            if self.timed_out() {
                break Termination::TimeLimit;
            }
            match self.expand(net) {
                Ok(fresh) if fresh.is_empty() => break Termination::Fixpoint,
                Ok(_) => {}
                Err(t) => break t,
            }
        };
        self.space.set_termination(termination);
        termination
    }
}

/// Full forward exploration from the initial state.
pub fn reachable(net: &Network, options: &ReachOptions) -> Result<StateSpace, ReachError> {
    let deadline = options.time_limit.map(|t| Instant::now() + t);
    let mut explorer = Explorer::new(net, options.clone(), deadline)?;
    explorer.run(net, options.depth_limit);
    Ok(explorer.space)
}

/// Quotient of a state space onto (locations, discretes) nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceSet {
    /// Node keys numbered by first reachable state.
    pub nodes: Vec<StateKey>,
    /// `(source node, action, target node)`, sorted and distinct.
    pub edges: Vec<(usize, Option<ActionId>, usize)>,
}

impl TraceSet {
    /// Same labeled graph, ignoring node numbering.
    pub fn same_graph(&self, other: &TraceSet) -> bool {
        let nodes = |t: &TraceSet| t.nodes.iter().cloned().collect::<BTreeSet<_>>();
        let edges = |t: &TraceSet| {
            t.edges
                .iter()
                .map(|&(s, a, d)| (t.nodes[s].clone(), a, t.nodes[d].clone()))
                .collect::<BTreeSet<_>>()
        };
        self.nodes.first() == other.nodes.first()
            && nodes(self) == nodes(other)
            && edges(self) == edges(other)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

pub fn trace_set(space: &StateSpace) -> TraceSet {
    let mut numbering: HashMap<&StateKey, usize> = HashMap::new();
    let mut nodes = Vec::new();
    let mut node_of = HashMap::new();
    for (id, s) in space.states() {
        let n = *numbering.entry(&s.key).or_insert_with(|| {
            nodes.push(s.key.clone());
            nodes.len() - 1
        });
        node_of.insert(id, n);
    }
    let edges: BTreeSet<(usize, Option<ActionId>, usize)> = space
        .edges()
        .iter()
        .map(|e| (node_of[&e.source], e.action, node_of[&e.target]))
        .collect();
    TraceSet {
        nodes,
        edges: edges.into_iter().collect(),
    }
}
