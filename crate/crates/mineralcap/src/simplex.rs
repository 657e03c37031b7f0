//! Dense simplex over exact rationals for tiny allocation programs.
//!
//! Solves `maximize c.x  s.t.  A x <= b, x >= 0` with `b >= 0`, so the
//! origin is always a feasible starting basis and no phase-one step is
//! needed. Bland's rule guarantees termination. Problem sizes here are at
//! most six variables by eight constraints, so exact pivoting is cheap and
//! removes any need for feasibility tolerances.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, Zero};

use crate::error::{Error, Result};

/// Convert an f64 into a rational. Every finite f64 is a dyadic rational,
/// so the conversion is lossless and all pivoting stays exact.
fn rational(x: f64) -> Result<BigRational> {
    BigRational::from_f64(x)
        .ok_or_else(|| Error::validation("simplex", format!("non-finite coefficient {x}")))
}

/// Maximize `objective . x` subject to `constraints[i] . x <= bounds[i]`
/// and `x >= 0`. Returns the optimal solution and objective value.
pub fn maximize(
    objective: &[f64],
    constraints: &[Vec<f64>],
    bounds: &[f64],
) -> Result<(Vec<f64>, f64)> {
    let n = objective.len();
    let m = constraints.len();
    if bounds.len() != m || constraints.iter().any(|row| row.len() != n) {
        return Err(Error::validation("simplex", "inconsistent dimensions"));
    }
    if bounds.iter().any(|&b| b < 0.0) {
        return Err(Error::validation("simplex", "negative bound"));
    }

    // Tableau rows: m constraint rows over n structural + m slack columns,
    // plus the right-hand side; final row is the objective.
    let zero = BigRational::zero();
    let mut tableau: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut row: Vec<BigRational> = Vec::with_capacity(n + m + 1);
        for &coeff in &constraints[i] {
            row.push(rational(coeff)?);
        }
        for k in 0..m {
            row.push(if k == i {
                BigRational::from_integer(BigInt::from(1))
            } else {
                zero.clone()
            });
        }
        row.push(rational(bounds[i])?);
        tableau.push(row);
    }
    let mut obj_row: Vec<BigRational> = Vec::with_capacity(n + m + 1);
    for &coeff in objective {
        obj_row.push(-rational(coeff)?);
    }
    obj_row.resize(n + m + 1, zero.clone());
    tableau.push(obj_row);

    let mut basis: Vec<usize> = (n..n + m).collect();

    while let Some(entering) = (0..n + m).find(|&j| tableau[m][j].is_negative()) {
        // Bland's rule: the entering column is the lowest-index negative
        // reduced cost; the leaving row is the minimum ratio.
        let mut leaving: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if tableau[i][entering].is_positive() {
                let ratio = &tableau[i][n + m] / &tableau[i][entering];
                let better = match &leaving {
                    None => true,
                    Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
        }
        let (pivot_row, _) = leaving.ok_or(Error::Unbounded)?;

        let pivot = tableau[pivot_row][entering].clone();
        for cell in tableau[pivot_row].iter_mut() {
            *cell /= &pivot;
        }
        for i in 0..=m {
            if i == pivot_row || tableau[i][entering].is_zero() {
                continue;
            }
            let factor = tableau[i][entering].clone();
            let pivot_row_values = tableau[pivot_row].clone();
            for (cell, pivot_cell) in tableau[i].iter_mut().zip(&pivot_row_values) {
                *cell -= &factor * pivot_cell;
            }
        }
        basis[pivot_row] = entering;
    }

    let mut solution = vec![0.0; n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            solution[var] = rational_to_f64(&tableau[i][n + m]);
        }
    }
    let objective_value = rational_to_f64(&tableau[m][n + m]);
    Ok((solution, objective_value))
}

fn rational_to_f64(r: &BigRational) -> f64 {
    let numer = bigint_to_f64(r.numer());
    let denom = bigint_to_f64(r.denom());
    numer / denom
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    // BigInt -> f64 via string round-trip keeps 17 significant digits,
    // fine for reporting floored pack counts.
    x.to_string().parse::<f64>().unwrap_or(f64::NAN)
}
