//! Exact feasibility of `A x = b, x ≥ 0` over the rationals.
//!
//! The equalities are reduced to row echelon form, pivot variables are
//! written in terms of the free ones, and the resulting inequality system on
//! the free variables is decided by Fourier–Motzkin elimination. A feasible
//! point is recovered by back-substitution, always taking the smallest
//! admissible value for each free variable, so the returned point is
//! deterministic.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

/// One linear equality `Σ coeffs[i] · x_i = rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equality {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Equality {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Equality { coeffs, rhs }
    }
}

/// `Σ coeffs[i] · y_i + constant ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Inequality {
    coeffs: Vec<Rational>,
    constant: Rational,
}

impl Inequality {
    fn is_tautology(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero) && !self.constant.is_negative()
    }
}

/// Finds a nonnegative solution of the system, or `None` if there is none.
///
/// Every equality must have exactly `num_vars` coefficients.
pub fn nonnegative_solution(num_vars: usize, equalities: &[Equality]) -> Option<Vec<Rational>> {
    assert!(
        equalities.iter().all(|e| e.coeffs.len() == num_vars),
        "equality width must match the variable count"
    );
    let (rows, pivots) = row_echelon(num_vars, equalities)?;

    let free: Vec<usize> = (0..num_vars).filter(|v| !pivots.contains(v)).collect();
    let position = |v: usize| free.iter().position(|&f| f == v);

    // y_f >= 0 for free variables
    let mut system: Vec<Inequality> = (0..free.len())
        .map(|i| {
            let mut coeffs = vec![Rational::zero(); free.len()];
            coeffs[i] = Rational::from_integer(1.into());
            Inequality {
                coeffs,
                constant: Rational::zero(),
            }
        })
        .collect();
    // x_p = rhs - Σ a_f y_f >= 0 for pivot variables
    for (row, _) in rows.iter().zip(&pivots) {
        let mut coeffs = vec![Rational::zero(); free.len()];
        for (v, a) in row.coeffs.iter().enumerate() {
            if let Some(i) = position(v) {
                coeffs[i] = -a.clone();
            }
        }
        system.push(Inequality {
            coeffs,
            constant: row.rhs.clone(),
        });
    }

    // stages[k] constrains only y_0..y_{k-1}
    let mut stages = vec![system];
    for k in (0..free.len()).rev() {
        let next = eliminate(stages.last().expect("nonempty"), k);
        stages.push(next);
    }
    stages.reverse();
    if stages[0].iter().any(|ineq| ineq.constant.is_negative()) {
        return None;
    }

    let mut y: Vec<Rational> = Vec::with_capacity(free.len());
    for k in 0..free.len() {
        let mut lower: Option<Rational> = None;
        for ineq in &stages[k + 1] {
            let c = &ineq.coeffs[k];
            if !c.is_positive() {
                continue;
            }
            let rest = ineq
                .coeffs
                .iter()
                .zip(&y)
                .fold(ineq.constant.clone(), |acc, (a, v)| acc + a * v);
            let bound = -rest / c;
            if lower.as_ref().map_or(true, |l| bound > *l) {
                lower = Some(bound);
            }
        }
        y.push(lower.unwrap_or_else(Rational::zero));
    }

    let mut x = vec![Rational::zero(); num_vars];
    for (i, &f) in free.iter().enumerate() {
        x[f] = y[i].clone();
    }
    for (row, &p) in rows.iter().zip(&pivots) {
        let mut value = row.rhs.clone();
        for (i, &f) in free.iter().enumerate() {
            value -= &row.coeffs[f] * &y[i];
        }
        x[p] = value;
    }
    debug_assert!(x.iter().all(|v| !v.is_negative()));
    Some(x)
}

/// Reduced row echelon form. Returns the nonzero rows with their pivot
/// columns, or `None` when the system is inconsistent.
fn row_echelon(num_vars: usize, equalities: &[Equality]) -> Option<(Vec<Equality>, Vec<usize>)> {
    let mut rows: Vec<Equality> = equalities.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..num_vars {
        let Some(found) = (r..rows.len()).find(|&i| !rows[i].coeffs[col].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = rows[r].coeffs[col].recip();
        for a in rows[r].coeffs.iter_mut() {
            *a *= &inv;
        }
        rows[r].rhs *= &inv;
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row.coeffs[col].is_zero() {
                continue;
            }
            let factor = row.coeffs[col].clone();
            for (a, p) in row.coeffs.iter_mut().zip(&pivot_row.coeffs) {
                *a -= &factor * p;
            }
            row.rhs -= &factor * &pivot_row.rhs;
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row.rhs.is_zero()) {
        return None;
    }
    rows.truncate(r);
    Some((rows, pivots))
}

/// Removes variable `k` by pairing every lower bound with every upper bound.
fn eliminate(system: &[Inequality], k: usize) -> Vec<Inequality> {
    let mut out: Vec<Inequality> = Vec::new();
    let mut push = |ineq: Inequality| {
        if !ineq.is_tautology() && !out.contains(&ineq) {
            out.push(ineq);
        }
    };
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for ineq in system {
        let c = &ineq.coeffs[k];
        if c.is_positive() {
            pos.push(ineq);
        } else if c.is_negative() {
            neg.push(ineq);
        } else {
            push(ineq.clone());
        }
    }
    for p in &pos {
        for q in &neg {
            let (cp, cq) = (&p.coeffs[k], -&q.coeffs[k]);
            let coeffs = p
                .coeffs
                .iter()
                .zip(&q.coeffs)
                .map(|(a, b)| a * &cq + b * cp)
                .collect();
            let constant = &p.constant * &cq + &q.constant * cp;
            push(normalize(Inequality { coeffs, constant }));
        }
    }
    out
}

/// Scales so the largest absolute coefficient is 1, which keeps duplicate
/// detection effective.
fn normalize(mut ineq: Inequality) -> Inequality {
    let scale = ineq
        .coeffs
        .iter()
        .map(|c| c.abs())
        .fold(Rational::zero(), |m, c| if c > m { c } else { m });
    if !scale.is_zero() {
        for c in ineq.coeffs.iter_mut() {
            *c /= &scale;
        }
        ineq.constant /= &scale;
    }
    ineq
}
