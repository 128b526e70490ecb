//! Small bundled models used by the examples and tests.

use crate::linarith::{LinExpr, Polyhedron, Rational, VariableRegistry};
use crate::model::{Location, Network, PTAComponent, TransitionRecord};

/// Source of the two-transition toy model (see [`toy`]).
pub const TOY_MODEL: &str = include_str!("../models/toy.imi");
/// A NOR-gate SR latch driven by a set pulse of parametric width.
pub const SR_LATCH_MODEL: &str = include_str!("../models/sr_latch.imi");

/// One automaton, clock `x`, parameters `p1, p2`:
///
/// ```text
/// q0 (x <= p1) --[x = p1] a--> q1
/// q0           --[x >= p2] b--> q2
/// ```
///
/// Built directly rather than parsed; `x = 0` initially and `K = True`.
pub fn toy() -> Network {
    let registry =
        VariableRegistry::new(["x"], ["p1", "p2"], Vec::<&str>::new()).expect("distinct names");
    let space = registry.space();
    let v = |i| LinExpr::var(3, i);
    let zero = LinExpr::constant(3, Rational::from_integer(0.into()));
    let (x, p1, p2) = (0, 1, 2);
    let poly = |rows| Polyhedron::from_inequalities(space, rows);
    let component = PTAComponent {
        name: "toy".into(),
        alphabet: vec![0, 1],
        locations: vec![
            Location {
                name: "q0".into(),
                invariant: poly(vec![v(x).le(&v(p1))]),
            },
            Location {
                name: "q1".into(),
                invariant: Polyhedron::universe(space),
            },
            Location {
                name: "q2".into(),
                invariant: Polyhedron::universe(space),
            },
        ],
        initial_location: 0,
        transitions: vec![
            TransitionRecord {
                source: 0,
                guard: poly(vec![v(x).eq(&v(p1))]),
                discrete_guard: vec![],
                action: Some(0),
                resets: vec![],
                discrete_updates: vec![],
                target: 1,
            },
            TransitionRecord {
                source: 0,
                guard: poly(vec![v(x).ge(&v(p2))]),
                discrete_guard: vec![],
                action: Some(1),
                resets: vec![],
                discrete_updates: vec![],
                target: 2,
            },
        ],
    };
    Network {
        registry,
        actions: vec!["a".into(), "b".into()],
        components: vec![component],
        initial_constraint: Polyhedron::universe(space),
        initial_clocks: poly(vec![v(x).eq(&zero)]),
        initial_discretes: vec![],
    }
}
