//! Fourier–Motzkin elimination over canonical rows.
//!
//! Rows are kept in a normal form after every step: trivially true rows are
//! dropped, parallel rows keep only the tightest bound, opposite bounds that
//! meet collapse into an equality, and any contradiction among parallel rows
//! turns the whole system into `None` (empty).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::inequality::{LinearInequality as Row, Relation};
use super::rational::Rational;

fn primitive(row: &Row) -> (Vec<BigInt>, BigInt) {
    let g = row
        .coeffs()
        .iter()
        .fold(BigInt::zero(), |acc, c| acc.gcd(c));
    (row.coeffs().iter().map(|c| c / &g).collect(), g)
}

fn negated(v: &[BigInt]) -> Vec<BigInt> {
    v.iter().map(|c| -c).collect()
}

fn leading_positive(v: &[BigInt]) -> bool {
    v.iter()
        .find(|c| !c.is_zero())
        .is_some_and(|c| c.is_positive())
}

fn rebuild(prim: &[BigInt], constant: &Rational, relation: Relation) -> Row {
    Row::new(
        prim.iter().map(|c| c * constant.denom()).collect(),
        constant.numer().clone(),
        relation,
    )
}

/// Normal form of a conjunction; `None` when a contradiction is found syntactically.
pub(crate) fn normalize(rows: impl IntoIterator<Item = Row>) -> Option<Vec<Row>> {
    // prim·v + c = 0
    let mut eqs: HashMap<Vec<BigInt>, Rational> = HashMap::new();
    // prim·v + c (>= | >) 0, tightest c kept
    let mut bounds: HashMap<Vec<BigInt>, (Rational, bool)> = HashMap::new();
    for row in rows {
        match row.triviality() {
            Some(true) => continue,
            Some(false) => return None,
            None => {}
        }
        let (prim, g) = primitive(&row);
        let c = Rational::new(row.constant().clone(), g);
        match row.relation() {
            Relation::Eq => match eqs.get(&prim) {
                Some(existing) if *existing != c => return None,
                Some(_) => {}
                None => {
                    eqs.insert(prim, c);
                }
            },
            rel => {
                let strict = rel.is_strict();
                let tighter = match bounds.get(&prim) {
                    Some((old, old_strict)) => c < *old || (c == *old && strict && !old_strict),
                    None => true,
                };
                if tighter {
                    bounds.insert(prim, (c, strict));
                }
            }
        }
    }

    // An equality decides every bound parallel to it.
    for (prim, c) in &eqs {
        for flip in [false, true] {
            let dir = if flip { negated(prim) } else { prim.clone() };
            if let Some((ci, strict)) = bounds.remove(&dir) {
                // dir·v = ∓c, so the row reads ci ∓ c (>= | >) 0
                let value = if flip { ci + c } else { ci - c };
                let ok = if strict {
                    value.is_positive()
                } else {
                    !value.is_negative()
                };
                if !ok {
                    return None;
                }
            }
        }
    }

    // Opposite bounds: prim·v >= -c1 and prim·v <= c2.
    let mut keys: Vec<Vec<BigInt>> = bounds
        .keys()
        .filter(|k| leading_positive(k))
        .cloned()
        .collect();
    keys.sort();
    for prim in keys {
        let neg = negated(&prim);
        let (Some((c1, s1)), Some((c2, s2))) = (bounds.get(&prim), bounds.get(&neg)) else {
            continue;
        };
        let lower = -c1;
        if lower > *c2 {
            return None;
        }
        if lower == *c2 {
            if *s1 || *s2 {
                return None;
            }
            let c1 = c1.clone();
            bounds.remove(&prim);
            bounds.remove(&neg);
            eqs.insert(prim, c1);
        }
    }

    let mut out: Vec<Row> = eqs
        .iter()
        .map(|(p, c)| rebuild(p, c, Relation::Eq))
        .chain(bounds.iter().map(|(p, (c, strict))| {
            rebuild(p, c, if *strict { Relation::Gt } else { Relation::Ge })
        }))
        .collect();
    out.sort();
    out.dedup();
    Some(out)
}

fn combine(a: &Row, scale_a: &BigInt, b: &Row, scale_b: &BigInt, relation: Relation) -> Row {
    Row::new(
        a.coeffs()
            .iter()
            .zip(b.coeffs())
            .map(|(x, y)| x * scale_a + y * scale_b)
            .collect(),
        a.constant() * scale_a + b.constant() * scale_b,
        relation,
    )
}

/// One elimination step on column `k`.
pub(crate) fn eliminate_column(rows: &[Row], k: usize) -> Option<Vec<Row>> {
    if let Some(pivot) = rows
        .iter()
        .find(|r| r.relation() == Relation::Eq && r.mentions(k))
    {
        // Gaussian substitution: r' = |a|·r − sign(a)·b·pivot
        let a = &pivot.coeffs()[k];
        let abs_a = a.abs();
        let out = rows.iter().filter(|r| *r != pivot).map(|r| {
            let b = &r.coeffs()[k];
            if b.is_zero() {
                r.clone()
            } else {
                let factor = if a.is_positive() { -b } else { b.clone() };
                combine(r, &abs_a, pivot, &factor, r.relation())
            }
        });
        return normalize(out.collect::<Vec<_>>());
    }

    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut out = Vec::new();
    for r in rows {
        let c = &r.coeffs()[k];
        if c.is_positive() {
            lower.push(r);
        } else if c.is_negative() {
            upper.push(r);
        } else {
            out.push(r.clone());
        }
    }
    for l in &lower {
        for u in &upper {
            let a = &l.coeffs()[k];
            let b = -&u.coeffs()[k];
            // strict with anything is strict
            let relation = if l.relation().is_strict() || u.relation().is_strict() {
                Relation::Gt
            } else {
                Relation::Ge
            };
            out.push(combine(l, &b, u, a, relation));
        }
    }
    normalize(out)
}

/// Eliminates the given columns, cheapest first.
pub(crate) fn eliminate_columns(rows: Vec<Row>, columns: &[usize]) -> Option<Vec<Row>> {
    let mut rows = rows;
    let mut pending: Vec<usize> = columns.to_vec();
    pending.sort_unstable();
    pending.dedup();
    while !pending.is_empty() {
        pending.retain(|&k| rows.iter().any(|r| r.mentions(k)));
        let Some(&choice) = pending.iter().min_by_key(|&&k| cost(&rows, k)) else {
            break;
        };
        rows = eliminate_column(&rows, choice)?;
        pending.retain(|&k| k != choice);
    }
    Some(rows)
}

fn cost(rows: &[Row], k: usize) -> (usize, usize) {
    if rows
        .iter()
        .any(|r| r.relation() == Relation::Eq && r.mentions(k))
    {
        return (0, 0);
    }
    let lower = rows.iter().filter(|r| r.coeffs()[k].is_positive()).count();
    let upper = rows.iter().filter(|r| r.coeffs()[k].is_negative()).count();
    (1, lower * upper)
}

pub(crate) fn satisfiable(rows: &[Row]) -> bool {
    let Some(rows) = normalize(rows.to_vec()) else {
        return false;
    };
    let dim = rows.first().map_or(0, Row::dimension);
    let all: Vec<usize> = (0..dim).collect();
    eliminate_columns(rows, &all).is_some()
}
