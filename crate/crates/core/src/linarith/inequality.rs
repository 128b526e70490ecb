use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, Rational};
use super::LinError;

/// Relation of a linear form against zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Ge,
    Gt,
    Eq,
}

impl Relation {
    pub fn is_strict(self) -> bool {
        self == Relation::Gt
    }

    fn holds(self, value: &Rational) -> bool {
        match self {
            Relation::Ge => !value.is_negative(),
            Relation::Gt => value.is_positive(),
            Relation::Eq => value.is_zero(),
        }
    }
}

/// Linear expression with rational coefficients, used while building constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinExpr {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
}

impl LinExpr {
    pub fn zero(dim: usize) -> Self {
        LinExpr {
            coeffs: vec![Rational::zero(); dim],
            constant: Rational::zero(),
        }
    }

    pub fn var(dim: usize, column: usize) -> Self {
        let mut e = Self::zero(dim);
        e.coeffs[column] = Rational::one();
        e
    }

    pub fn constant(dim: usize, value: Rational) -> Self {
        let mut e = Self::zero(dim);
        e.constant = value;
        e
    }

    pub fn dimension(&self) -> usize {
        self.coeffs.len()
    }

    pub fn plus(mut self, other: &LinExpr) -> Self {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        self.constant += &other.constant;
        self
    }

    pub fn minus(self, other: &LinExpr) -> Self {
        self.plus(&other.clone().scale(&-Rational::one()))
    }

    pub fn scale(mut self, factor: &Rational) -> Self {
        for a in &mut self.coeffs {
            *a *= factor;
        }
        self.constant *= factor;
        self
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `self >= other`
    pub fn ge(&self, other: &LinExpr) -> LinearInequality {
        LinearInequality::from_expr(&self.clone().minus(other), Relation::Ge)
    }

    /// `self > other`
    pub fn gt(&self, other: &LinExpr) -> LinearInequality {
        LinearInequality::from_expr(&self.clone().minus(other), Relation::Gt)
    }

    /// `self <= other`
    pub fn le(&self, other: &LinExpr) -> LinearInequality {
        other.ge(self)
    }

    /// `self < other`
    pub fn lt(&self, other: &LinExpr) -> LinearInequality {
        other.gt(self)
    }

    /// `self = other`
    pub fn eq(&self, other: &LinExpr) -> LinearInequality {
        LinearInequality::from_expr(&self.clone().minus(other), Relation::Eq)
    }
}

/// `coeffs · v + constant  REL  0` with integer coefficients in canonical form.
///
/// Canonical form: coefficients and constant are coprime; equalities have a
/// positive leading coefficient; trivial rows are `0 >= 0` (true) or `-1 >= 0`
/// (false).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearInequality {
    coeffs: Vec<BigInt>,
    constant: BigInt,
    relation: Relation,
}

impl LinearInequality {
    pub fn new(coeffs: Vec<BigInt>, constant: BigInt, relation: Relation) -> Self {
        let mut row = LinearInequality {
            coeffs,
            constant,
            relation,
        };
        row.canonicalize();
        row
    }

    pub fn from_expr(expr: &LinExpr, relation: Relation) -> Self {
        let lcm = expr
            .coeffs
            .iter()
            .chain(std::iter::once(&expr.constant))
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let scale = |q: &Rational| (q * Rational::from_integer(lcm.clone())).to_integer();
        Self::new(
            expr.coeffs.iter().map(scale).collect(),
            scale(&expr.constant),
            relation,
        )
    }

    fn canonicalize(&mut self) {
        if self.coeffs.iter().all(Zero::is_zero) {
            let truth = self
                .relation
                .holds(&Rational::from_integer(self.constant.clone()));
            self.relation = Relation::Ge;
            self.constant = if truth {
                BigInt::zero()
            } else {
                -BigInt::one()
            };
            return;
        }
        let g = self
            .coeffs
            .iter()
            .fold(self.constant.abs(), |acc, c| acc.gcd(c));
        if !g.is_one() {
            for c in &mut self.coeffs {
                *c /= &g;
            }
            self.constant /= &g;
        }
        if self.relation == Relation::Eq {
            let leading = self.coeffs.iter().find(|c| !c.is_zero()).unwrap();
            if leading.is_negative() {
                for c in &mut self.coeffs {
                    *c = -&*c;
                }
                self.constant = -&self.constant;
            }
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn constant(&self) -> &BigInt {
        &self.constant
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn dimension(&self) -> usize {
        self.coeffs.len()
    }

    /// `Some(truth)` when no variable occurs.
    pub fn triviality(&self) -> Option<bool> {
        if self.coeffs.iter().all(Zero::is_zero) {
            Some(self.constant.is_zero())
        } else {
            None
        }
    }

    pub fn mentions(&self, column: usize) -> bool {
        !self.coeffs[column].is_zero()
    }

    /// Strictness flips: `¬(t >= 0)` is `-t > 0` and `¬(t > 0)` is `-t >= 0`.
    pub fn negate(&self) -> Result<LinearInequality, LinError> {
        let relation = match self.relation {
            Relation::Ge => Relation::Gt,
            Relation::Gt => Relation::Ge,
            Relation::Eq => return Err(LinError::NegateEquality),
        };
        Ok(LinearInequality::new(
            self.coeffs.iter().map(|c| -c).collect(),
            -&self.constant,
            relation,
        ))
    }

    /// Splits an equality into its two non-strict halves; other rows are returned as is.
    pub fn decompose(&self) -> Vec<LinearInequality> {
        match self.relation {
            Relation::Eq => vec![
                LinearInequality::new(self.coeffs.clone(), self.constant.clone(), Relation::Ge),
                LinearInequality::new(
                    self.coeffs.iter().map(|c| -c).collect(),
                    -&self.constant,
                    Relation::Ge,
                ),
            ],
            _ => vec![self.clone()],
        }
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(point)
            .filter(|(c, _)| !c.is_zero())
            .fold(
                Rational::from_integer(self.constant.clone()),
                |acc, (c, v)| acc + Rational::from_integer(c.clone()) * v,
            )
    }

    pub fn holds_at(&self, point: &[Rational]) -> bool {
        self.relation.holds(&self.evaluate(point))
    }

    /// Satisfaction of the topological closure (strict rows read as non-strict).
    pub fn closure_holds_at(&self, point: &[Rational]) -> bool {
        let value = self.evaluate(point);
        match self.relation {
            Relation::Eq => value.is_zero(),
            _ => !value.is_negative(),
        }
    }

    fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
    }

    /// Renders with the first occurring variable scaled to coefficient ±1, e.g. `x <= p1`,
    /// `0 <= p1`, `1/3*p2 <= p1`, `x = 0`.
    pub fn render(&self, name: &dyn Fn(usize) -> String) -> String {
        if let Some(truth) = self.triviality() {
            return if truth { "True".into() } else { "False".into() };
        }
        let lead = self.coeffs.iter().find(|c| !c.is_zero()).unwrap().abs();
        let norm = |c: &BigInt| Rational::new(c.clone(), lead.clone());
        let mut positive = Vec::new();
        let mut negative = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let q = norm(c);
            let term = |q: &Rational| {
                if q.is_one() {
                    name(i)
                } else {
                    format!("{}*{}", format_rational(q), name(i))
                }
            };
            if q.is_positive() {
                positive.push(term(&q));
            } else {
                negative.push(term(&-q));
            }
        }
        let constant = norm(&self.constant);
        if constant.is_positive() {
            positive.push(format_rational(&constant));
        } else if constant.is_negative() {
            negative.push(format_rational(&-constant));
        }
        let side = |terms: Vec<String>| {
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            }
        };
        let (p, n) = (side(positive), side(negative));
        match self.relation {
            Relation::Ge => format!("{n} <= {p}"),
            Relation::Gt => format!("{n} < {p}"),
            Relation::Eq => format!("{p} = {n}"),
        }
    }
}

impl Ord for LinearInequality {
    /// Fewer variables first, then by which variables occur, then lower bounds
    /// before upper bounds, then relation and constant.
    fn cmp(&self, other: &Self) -> Ordering {
        let count = |r: &LinearInequality| r.support().count();
        count(self)
            .cmp(&count(other))
            .then_with(|| self.support().cmp(other.support()))
            .then_with(|| other.coeffs.cmp(&self.coeffs))
            .then_with(|| self.relation.cmp(&other.relation))
            .then_with(|| self.constant.cmp(&other.constant))
    }
}

impl PartialOrd for LinearInequality {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LinearInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&|i| format!("v{i}")))
    }
}
