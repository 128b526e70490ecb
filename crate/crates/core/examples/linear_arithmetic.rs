//! Exact constraint manipulation: intersection, projection, time elapse,
//! reset and inclusion on a small polyhedron over `x, p1, p2`.

use ptasynth::linarith::rational::{int, ratio};
use ptasynth::linarith::{LinExpr, Polyhedron, VariableRegistry};

fn main() {
    let registry = VariableRegistry::new(["x"], ["p1", "p2"], Vec::<&str>::new()).unwrap();
    let space = registry.space();
    let v = |i| LinExpr::var(3, i);
    let c = |n| LinExpr::constant(3, int(n));

    let window =
        Polyhedron::from_inequalities(space, vec![v(2).le(&v(0)), v(0).le(&v(1)), v(1).le(&c(4))]);
    println!("window      : {}", window.display(&registry));
    println!(
        "∃x          : {}",
        window.project_parameters().display(&registry)
    );

    let start = Polyhedron::from_inequalities(space, vec![v(0).eq(&c(0))]);
    println!("x = 0, elapse: {}", start.time_elapse().display(&registry));
    println!(
        "reset x     : {}",
        window.reset_clocks(&[0]).display(&registry)
    );

    let contradiction = window.with_inequality(v(1).lt(&v(2)));
    println!(
        "with p1 < p2: satisfiable = {}",
        contradiction.is_satisfiable()
    );

    let third = Polyhedron::from_inequalities(
        space,
        vec![
            v(0).scale(&int(3)).le(&c(1)),
            v(0).ge(&LinExpr::constant(3, ratio(1, 6))),
        ],
    );
    println!("thirds      : {}", third.display(&registry));
    println!(
        "included in x <= 1: {}",
        third
            .is_subset_of(&Polyhedron::from_inequalities(space, vec![v(0).le(&c(1))]))
            .unwrap()
    );

    let mut rng = rand::rng();
    if let Some(point) = window.sample_point(&mut rng) {
        let shown: Vec<String> = point.iter().map(|q| q.to_string()).collect();
        println!("sample      : ({})", shown.join(", "));
    }
}
