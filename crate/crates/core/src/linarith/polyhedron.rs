use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::elimination::{eliminate_column, eliminate_columns, normalize, satisfiable};
use super::inequality::{LinearInequality, Relation};
use super::rational::{format_rational, int, Rational};
use super::registry::{Space, VariableRegistry};
use super::LinError;

/// One rational value per parameter, in registry order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParameterValuation(pub Vec<Rational>);

impl ParameterValuation {
    pub fn from_integers(values: &[i64]) -> Self {
        ParameterValuation(values.iter().map(|&v| int(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }
}

impl fmt::Display for ParameterValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Convex polyhedron over clocks and parameters, possibly with strict rows.
///
/// Stored in constraint form only. The row list is canonical (normalized,
/// sorted, duplicate-free); an empty list is `true`.
#[derive(Debug, Clone)]
pub struct Polyhedron {
    space: Space,
    rows: Vec<LinearInequality>,
    bottom: bool,
    satisfiable: OnceLock<bool>,
}

impl PartialEq for Polyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.bottom == other.bottom && self.rows == other.rows
    }
}

impl Eq for Polyhedron {}

impl Hash for Polyhedron {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.space.hash(state);
        self.bottom.hash(state);
        self.rows.hash(state);
    }
}

impl Polyhedron {
    pub fn universe(space: Space) -> Self {
        Polyhedron {
            space,
            rows: Vec::new(),
            bottom: false,
            satisfiable: OnceLock::from(true),
        }
    }

    /// Holds the single row `-1 >= 0`, so its rows rebuild it.
    pub fn empty(space: Space) -> Self {
        let falsum = LinearInequality::new(
            vec![BigInt::zero(); space.dimension()],
            -BigInt::one(),
            Relation::Ge,
        );
        Polyhedron {
            space,
            rows: vec![falsum],
            bottom: true,
            satisfiable: OnceLock::from(false),
        }
    }

    pub fn from_inequalities(
        space: Space,
        rows: impl IntoIterator<Item = LinearInequality>,
    ) -> Self {
        let rows: Vec<_> = rows.into_iter().collect();
        for r in &rows {
            assert_eq!(
                r.dimension(),
                space.dimension(),
                "inequality dimension does not match the space"
            );
        }
        match normalize(rows) {
            Some(rows) => Polyhedron {
                space,
                rows,
                bottom: false,
                satisfiable: OnceLock::new(),
            },
            None => Polyhedron::empty(space),
        }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn inequalities(&self) -> &[LinearInequality] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_universe(&self) -> bool {
        !self.bottom && self.rows.is_empty()
    }

    /// Canonically empty (a contradiction was detected syntactically).
    pub fn is_bottom(&self) -> bool {
        self.bottom
    }

    fn check_space(&self, other: &Polyhedron) -> Result<(), LinError> {
        if self.space != other.space {
            return Err(LinError::SpaceMismatch {
                left: self.space,
                right: other.space,
            });
        }
        Ok(())
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron, LinError> {
        self.check_space(other)?;
        Ok(self.meet(other))
    }

    pub(crate) fn meet(&self, other: &Polyhedron) -> Polyhedron {
        debug_assert_eq!(self.space, other.space);
        if self.bottom || other.bottom {
            return Polyhedron::empty(self.space);
        }
        if other.rows.is_empty() {
            return self.clone();
        }
        if self.rows.is_empty() {
            return other.clone();
        }
        Polyhedron::from_inequalities(self.space, self.rows.iter().chain(&other.rows).cloned())
    }

    pub fn with_inequality(&self, row: LinearInequality) -> Polyhedron {
        if self.bottom {
            return self.clone();
        }
        Polyhedron::from_inequalities(self.space, self.rows.iter().cloned().chain([row]))
    }

    /// True iff some rational point satisfies every row, strictness respected.
    pub fn is_satisfiable(&self) -> bool {
        *self.satisfiable.get_or_init(|| satisfiable(&self.rows))
    }

    pub fn is_empty(&self) -> bool {
        !self.is_satisfiable()
    }

    /// Existential projection: the given columns become unconstrained.
    pub fn eliminate(&self, columns: &[usize]) -> Polyhedron {
        if self.bottom {
            return self.clone();
        }
        match eliminate_columns(self.rows.clone(), columns) {
            Some(rows) => Polyhedron::from_inequalities(self.space, rows),
            None => Polyhedron::empty(self.space),
        }
    }

    /// `∃ clocks: self`, a constraint on parameters only.
    pub fn project_parameters(&self) -> Polyhedron {
        let clocks: Vec<usize> = self.space.clock_columns().collect();
        self.eliminate(&clocks)
    }

    pub fn mentions_clocks(&self) -> bool {
        self.rows
            .iter()
            .any(|r| self.space.clock_columns().any(|c| r.mentions(c)))
    }

    /// `{ v + d·1_clocks | v ∈ self, d ≥ 0 }`.
    pub fn time_elapse(&self) -> Polyhedron {
        if self.bottom || self.space.clocks == 0 {
            return self.clone();
        }
        let dim = self.space.dimension();
        // substitute x ↦ x − d for every clock, add d ≥ 0, then eliminate d
        let mut rows: Vec<LinearInequality> = self
            .rows
            .iter()
            .map(|r| {
                let drift: BigInt = r.coeffs()[..self.space.clocks].iter().sum();
                let mut coeffs = r.coeffs().to_vec();
                coeffs.push(-drift);
                LinearInequality::new(coeffs, r.constant().clone(), r.relation())
            })
            .collect();
        let mut delay = vec![BigInt::zero(); dim + 1];
        delay[dim] = BigInt::one();
        rows.push(LinearInequality::new(delay, BigInt::zero(), Relation::Ge));
        let Some(rows) = normalize(rows).and_then(|rows| eliminate_column(&rows, dim)) else {
            return Polyhedron::empty(self.space);
        };
        Polyhedron::from_inequalities(
            self.space,
            rows.into_iter().map(|r| {
                let mut coeffs = r.coeffs().to_vec();
                coeffs.truncate(dim);
                LinearInequality::new(coeffs, r.constant().clone(), r.relation())
            }),
        )
    }

    /// `(∃ resets: self) ∧ ⋀ x = 0`.
    pub fn reset_clocks(&self, clocks: &[usize]) -> Polyhedron {
        if clocks.is_empty() || self.bottom {
            return self.clone();
        }
        let projected = self.eliminate(clocks);
        let dim = self.space.dimension();
        let pins = clocks.iter().map(|&c| {
            debug_assert!(self.space.is_clock(c));
            let mut coeffs = vec![BigInt::zero(); dim];
            coeffs[c] = BigInt::one();
            LinearInequality::new(coeffs, BigInt::zero(), Relation::Eq)
        });
        if projected.bottom {
            return projected;
        }
        Polyhedron::from_inequalities(self.space, projected.rows.iter().cloned().chain(pins))
    }

    /// Solution set of `self` is contained in that of `other`.
    pub fn is_subset_of(&self, other: &Polyhedron) -> Result<bool, LinError> {
        self.check_space(other)?;
        Ok(self.included_in(other))
    }

    pub(crate) fn included_in(&self, other: &Polyhedron) -> bool {
        if !self.is_satisfiable() {
            return true;
        }
        if other.bottom {
            return false;
        }
        other.rows.iter().all(|row| self.entails(row))
    }

    /// `self ∧ ¬row` is unsatisfiable.
    pub fn entails(&self, row: &LinearInequality) -> bool {
        row.decompose().iter().all(|half| {
            let negation = half.negate().expect("halves are inequalities");
            !self.with_inequality(negation).is_satisfiable()
        })
    }

    /// Same solution set.
    pub fn equivalent(&self, other: &Polyhedron) -> Result<bool, LinError> {
        Ok(self.is_subset_of(other)? && other.is_subset_of(self)?)
    }

    /// Drops every row entailed by the remaining ones.
    pub fn minimize(&self) -> Polyhedron {
        if self.bottom || self.rows.len() < 2 {
            return self.clone();
        }
        if !self.is_satisfiable() {
            return Polyhedron::empty(self.space);
        }
        let mut kept = self.rows.clone();
        let mut i = 0;
        while i < kept.len() {
            let others = Polyhedron {
                space: self.space,
                rows: kept
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, r)| r.clone())
                    .collect(),
                bottom: false,
                satisfiable: OnceLock::from(true),
            };
            if others.entails(&kept[i]) {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        Polyhedron {
            space: self.space,
            rows: kept,
            bottom: false,
            satisfiable: OnceLock::from(true),
        }
    }

    /// Membership of a full point (clocks then parameters).
    pub fn contains(&self, point: &[Rational]) -> bool {
        assert_eq!(point.len(), self.space.dimension());
        !self.bottom && self.rows.iter().all(|r| r.holds_at(point))
    }

    /// Membership in the topological closure.
    pub fn closure_contains(&self, point: &[Rational]) -> bool {
        assert_eq!(point.len(), self.space.dimension());
        !self.bottom && self.rows.iter().all(|r| r.closure_holds_at(point))
    }

    /// `π ⊨ self` for a parameter-only constraint.
    pub fn satisfies_point(&self, valuation: &ParameterValuation) -> Result<bool, LinError> {
        if valuation.len() != self.space.parameters {
            return Err(LinError::ValuationLength {
                expected: self.space.parameters,
                got: valuation.len(),
            });
        }
        if let Some(column) = self
            .space
            .clock_columns()
            .find(|&c| self.rows.iter().any(|r| r.mentions(c)))
        {
            return Err(LinError::MentionsClock(column));
        }
        Ok(self.contains(&self.lift(valuation)))
    }

    /// Embeds a parameter valuation with all clocks at 0.
    pub fn lift(&self, valuation: &ParameterValuation) -> Vec<Rational> {
        let mut point = vec![Rational::zero(); self.space.clocks];
        point.extend(valuation.0.iter().cloned());
        point
    }

    /// Draws a point of the polyhedron by back-substitution through successive
    /// projections. `None` when empty.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Vec<Rational>> {
        if self.bottom {
            return None;
        }
        let dim = self.space.dimension();
        let mut systems = vec![normalize(self.rows.clone())?];
        for k in 0..dim {
            let next = eliminate_column(systems.last().unwrap(), k)?;
            systems.push(next);
        }
        let mut point = vec![Rational::zero(); dim];
        for k in (0..dim).rev() {
            let mut lower: Option<(Rational, bool)> = None;
            let mut upper: Option<(Rational, bool)> = None;
            let mut exact: Option<Rational> = None;
            for row in &systems[k] {
                let a = &row.coeffs()[k];
                if a.is_zero() {
                    continue;
                }
                let rest = row.coeffs().iter().zip(&point).skip(k + 1).fold(
                    Rational::from_integer(row.constant().clone()),
                    |acc, (c, v)| acc + Rational::from_integer(c.clone()) * v,
                );
                let bound = -rest / Rational::from_integer(a.clone());
                let strict = row.relation().is_strict();
                match row.relation() {
                    Relation::Eq => exact = Some(bound),
                    _ if a.is_positive() => {
                        if lower
                            .as_ref()
                            .is_none_or(|(b, s)| bound > *b || (bound == *b && strict && !s))
                        {
                            lower = Some((bound, strict));
                        }
                    }
                    _ => {
                        if upper
                            .as_ref()
                            .is_none_or(|(b, s)| bound < *b || (bound == *b && strict && !s))
                        {
                            upper = Some((bound, strict));
                        }
                    }
                }
            }
            point[k] = match (exact, lower, upper) {
                (Some(v), _, _) => v,
                (None, Some((lo, ls)), Some((hi, hs))) => {
                    if lo == hi {
                        lo
                    } else {
                        let steps = 4;
                        let mut t = rng.random_range(0..=steps);
                        if (t == 0 && ls) || (t == steps && hs) {
                            t = steps / 2;
                        }
                        &lo + (&hi - &lo) * Rational::new(BigInt::from(t), BigInt::from(steps))
                    }
                }
                (None, Some((lo, strict)), None) => {
                    let step = rng.random_range(if strict { 1..=3 } else { 0..=3 });
                    lo + int(step)
                }
                (None, None, Some((hi, strict))) => {
                    let step = rng.random_range(if strict { 1..=3 } else { 0..=3 });
                    hi - int(step)
                }
                (None, None, None) => int(rng.random_range(-3..=3)),
            };
        }
        debug_assert!(self.contains(&point));
        Some(point)
    }

    pub fn display<'a>(&'a self, registry: &'a VariableRegistry) -> PolyhedronDisplay<'a> {
        PolyhedronDisplay {
            poly: self,
            registry,
        }
    }

    pub fn render(&self, registry: &VariableRegistry) -> String {
        self.display(registry).to_string()
    }
}

/// Renders rows joined by ` & `, `True` for the universe and `False` when
/// canonically empty.
pub struct PolyhedronDisplay<'a> {
    poly: &'a Polyhedron,
    registry: &'a VariableRegistry,
}

impl fmt::Display for PolyhedronDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.bottom {
            return f.write_str("False");
        }
        if self.poly.rows.is_empty() {
            return f.write_str("True");
        }
        let name = |i: usize| self.registry.column_name(i).to_string();
        let parts: Vec<String> = self.poly.rows.iter().map(|r| r.render(&name)).collect();
        f.write_str(&parts.join(" & "))
    }
}
