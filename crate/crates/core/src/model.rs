//! Networks of parametric timed automata with integer discrete variables.

use std::collections::HashSet;
use std::fmt;

use crate::diagnostic::Diagnostic;
use crate::linarith::{
    LinError, LinExpr, ParameterValuation, Polyhedron, Rational, Space, VariableRegistry,
};

pub type LocationId = usize;
pub type ActionId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Comparison {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Comparison {
    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Comparison::Lt => lhs < rhs,
            Comparison::Le => lhs <= rhs,
            Comparison::Eq => lhs == rhs,
            Comparison::Ge => lhs >= rhs,
            Comparison::Gt => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Comparison::Lt => "<",
            Comparison::Le => "<=",
            Comparison::Eq => "=",
            Comparison::Ge => ">=",
            Comparison::Gt => ">",
        }
    }

    /// The comparison read right-to-left (`c < d` is `d > c`).
    pub fn mirrored(self) -> Self {
        match self {
            Comparison::Lt => Comparison::Gt,
            Comparison::Le => Comparison::Ge,
            Comparison::Eq => Comparison::Eq,
            Comparison::Ge => Comparison::Le,
            Comparison::Gt => Comparison::Lt,
        }
    }
}

/// `discrete <op> constant`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiscreteGuard {
    pub variable: usize,
    pub comparison: Comparison,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum UpdateValue {
    Constant(i64),
    Variable(usize),
}

/// `discrete' = value`, evaluated against the valuation before the step.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiscreteUpdate {
    pub variable: usize,
    pub value: UpdateValue,
}

/// A step `(source, guard, action, resets, target)` plus discrete guard and updates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionRecord {
    pub source: LocationId,
    pub guard: Polyhedron,
    pub discrete_guard: Vec<DiscreteGuard>,
    /// `None` for internal steps.
    pub action: Option<ActionId>,
    /// Clock indices reset to 0, sorted.
    pub resets: Vec<usize>,
    pub discrete_updates: Vec<DiscreteUpdate>,
    pub target: LocationId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    pub name: String,
    pub invariant: Polyhedron,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PTAComponent {
    pub name: String,
    pub alphabet: Vec<ActionId>,
    pub locations: Vec<Location>,
    pub initial_location: LocationId,
    pub transitions: Vec<TransitionRecord>,
}

impl PTAComponent {
    pub fn location_id(&self, name: &str) -> Option<LocationId> {
        self.locations.iter().position(|l| l.name == name)
    }

    pub fn outgoing(&self, location: LocationId) -> impl Iterator<Item = &TransitionRecord> {
        self.transitions
            .iter()
            .filter(move |t| t.source == location)
    }

    pub fn synchronizes_on(&self, action: ActionId) -> bool {
        self.alphabet.contains(&action)
    }
}

/// Network of components composed on the fly by shared actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    pub registry: VariableRegistry,
    pub actions: Vec<String>,
    pub components: Vec<PTAComponent>,
    /// Constraint on the parameters (K).
    pub initial_constraint: Polyhedron,
    /// Clock constraints from the init block, e.g. `x = 0`; `True` when absent.
    pub initial_clocks: Polyhedron,
    pub initial_discretes: Vec<i64>,
}

impl Network {
    pub fn space(&self) -> Space {
        self.registry.space()
    }

    pub fn parameter_count(&self) -> usize {
        self.registry.parameters().len()
    }

    pub fn action_id(&self, name: &str) -> Option<ActionId> {
        self.actions.iter().position(|a| a == name)
    }

    /// Label used in traces; internal steps are `eps`.
    pub fn action_label(&self, action: Option<ActionId>) -> &str {
        match action {
            Some(a) => &self.actions[a],
            None => "eps",
        }
    }

    /// Components whose alphabet contains `action`, in declaration order.
    pub fn participants(&self, action: ActionId) -> Vec<usize> {
        self.components
            .iter()
            .enumerate()
            .filter(|(_, c)| c.synchronizes_on(action))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn with_initial_constraint(&self, k: Polyhedron) -> Network {
        Network {
            initial_constraint: k,
            ..self.clone()
        }
    }

    /// `A[π]`: the initial constraint becomes `K ∧ ⋀ p_i = π_i`.
    pub fn instantiate(&self, valuation: &ParameterValuation) -> Result<Network, LinError> {
        Ok(self.with_initial_constraint(
            self.initial_constraint
                .intersect(&pin_parameters(self.space(), valuation)?)?,
        ))
    }

    /// Structural consistency of a resolved network. Never aborts.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let space = self.space();
        let clocks = space.clocks;
        let discretes = self.registry.discretes().len();
        let mut names = HashSet::new();
        if self.components.is_empty() {
            out.push(Diagnostic::new("no automaton declared"));
        }
        for comp in &self.components {
            if !names.insert(comp.name.as_str()) {
                out.push(Diagnostic::new(format!(
                    "automaton `{}` declared twice",
                    comp.name
                )));
            }
            let loc_name = |id: LocationId| {
                comp.locations
                    .get(id)
                    .map_or_else(|| format!("#{id}"), |l| l.name.clone())
            };
            if comp.initial_location >= comp.locations.len() {
                out.push(Diagnostic::new(format!(
                    "automaton `{}`: initial location #{} does not exist",
                    comp.name, comp.initial_location
                )));
            }
            for &a in &comp.alphabet {
                if a >= self.actions.len() {
                    out.push(Diagnostic::new(format!(
                        "automaton `{}`: action #{a} is not declared",
                        comp.name
                    )));
                }
            }
            for loc in &comp.locations {
                if loc.invariant.space() != space {
                    out.push(Diagnostic::new(format!(
                        "automaton `{}`: invariant of `{}` is over a different variable set",
                        comp.name, loc.name
                    )));
                }
            }
            for t in &comp.transitions {
                let what = format!(
                    "automaton `{}`: transition {} -> {}",
                    comp.name,
                    loc_name(t.source),
                    loc_name(t.target)
                );
                for (id, role) in [(t.source, "source"), (t.target, "target")] {
                    if id >= comp.locations.len() {
                        out.push(Diagnostic::new(format!(
                            "{what}: {role} location {} does not exist",
                            loc_name(id)
                        )));
                    }
                }
                if t.guard.space() != space {
                    out.push(Diagnostic::new(format!(
                        "{what}: guard is over a different variable set"
                    )));
                }
                for &r in &t.resets {
                    if r >= clocks {
                        out.push(Diagnostic::new(format!(
                            "{what}: reset of undeclared clock #{r}"
                        )));
                    }
                }
                for g in &t.discrete_guard {
                    if g.variable >= discretes {
                        out.push(Diagnostic::new(format!(
                            "{what}: guard on undeclared discrete #{}",
                            g.variable
                        )));
                    }
                }
                let mut updated = HashSet::new();
                for u in &t.discrete_updates {
                    let source_ok = match u.value {
                        UpdateValue::Variable(v) => v < discretes,
                        UpdateValue::Constant(_) => true,
                    };
                    if u.variable >= discretes || !source_ok {
                        out.push(Diagnostic::new(format!(
                            "{what}: update mentions an undeclared discrete"
                        )));
                    } else if !updated.insert(u.variable) {
                        out.push(Diagnostic::new(format!(
                            "{what}: `{}` updated twice",
                            self.registry.discretes()[u.variable]
                        )));
                    }
                }
                if let Some(a) = t.action {
                    if !comp.alphabet.contains(&a) {
                        let name = self.actions.get(a).cloned().unwrap_or(format!("#{a}"));
                        out.push(Diagnostic::new(format!(
                            "{what}: action `{name}` is not in the synclabs of `{}`",
                            comp.name
                        )));
                    }
                }
            }
        }
        if self.initial_constraint.space() != space || self.initial_constraint.mentions_clocks() {
            out.push(Diagnostic::new(
                "initial constraint must mention parameters only",
            ));
        }
        if self.initial_clocks.space() != space {
            out.push(Diagnostic::new(
                "initial clock constraint is over a different variable set",
            ));
        }
        if self.initial_discretes.len() != discretes {
            out.push(Diagnostic::new(format!(
                "{} initial discrete values for {} discrete variables",
                self.initial_discretes.len(),
                discretes
            )));
        }
        out
    }
}

/// `⋀ p_i = π_i` over the full space.
pub fn pin_parameters(
    space: Space,
    valuation: &ParameterValuation,
) -> Result<Polyhedron, LinError> {
    if valuation.len() != space.parameters {
        return Err(LinError::ValuationLength {
            expected: space.parameters,
            got: valuation.len(),
        });
    }
    let dim = space.dimension();
    Ok(Polyhedron::from_inequalities(
        space,
        valuation.values().iter().enumerate().map(|(i, v)| {
            LinExpr::var(dim, space.parameter_column(i)).eq(&LinExpr::constant(dim, v.clone()))
        }),
    ))
}

/// Closed bounds `[lo_i, hi_i]` per parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectangleV0 {
    bounds: Vec<(Rational, Rational)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("empty interval for parameter #{0}")]
pub struct EmptyInterval(pub usize);

impl RectangleV0 {
    pub fn new(bounds: Vec<(Rational, Rational)>) -> Result<Self, EmptyInterval> {
        if let Some(i) = bounds.iter().position(|(lo, hi)| lo > hi) {
            return Err(EmptyInterval(i));
        }
        Ok(RectangleV0 { bounds })
    }

    pub fn from_integers(bounds: &[(i64, i64)]) -> Result<Self, EmptyInterval> {
        Self::new(
            bounds
                .iter()
                .map(|&(lo, hi)| {
                    (
                        Rational::from_integer(lo.into()),
                        Rational::from_integer(hi.into()),
                    )
                })
                .collect(),
        )
    }

    pub fn bounds(&self) -> &[(Rational, Rational)] {
        &self.bounds
    }

    pub fn dimension(&self) -> usize {
        self.bounds.len()
    }

    pub fn contains(&self, valuation: &ParameterValuation) -> bool {
        valuation.len() == self.bounds.len()
            && valuation
                .values()
                .iter()
                .zip(&self.bounds)
                .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }
}

impl fmt::Display for RectangleV0 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::linarith::rational::format_rational;
        let parts: Vec<String> = self
            .bounds
            .iter()
            .map(|(lo, hi)| format!("[{}, {}]", format_rational(lo), format_rational(hi)))
            .collect();
        f.write_str(&parts.join(" x "))
    }
}
