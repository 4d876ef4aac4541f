//! Exact phase-one simplex (Bland's rule) with Farkas certificates.
//!
//! Everything here is a feasibility question. The optimal phase-one basis
//! either yields a solution or, read through the artificial columns' reduced
//! costs, a certificate that none exists.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::linalg::dot;
use crate::rational::{primitive_scale, Q};

#[derive(Debug, Clone, PartialEq)]
pub enum NonnegResult {
    /// `y >= 0` with `M y = b`.
    Solution(Vec<Q>),
    /// `pi` with `pi^T M <= 0` and `pi^T b > 0`.
    Certificate(Vec<Q>),
}

/// Decides whether `M y = b, y >= 0` has a solution.
///
/// Rows are scaled to integers and pivoted fraction-free: the tableau is kept
/// as integers over a common positive denominator, which is the previous
/// pivot, so every division is exact.
pub fn nonneg_solve(m: &[Vec<Q>], b: &[Q]) -> NonnegResult {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let width = cols + rows + 1;
    let rhs = width - 1;

    let mut scales = Vec::with_capacity(rows);
    let mut t: Vec<Vec<BigInt>> = Vec::with_capacity(rows);
    for r in 0..rows {
        let mut full: Vec<Q> = m[r].clone();
        full.push(b[r].clone());
        let mut scale = primitive_scale(&full);
        if b[r].is_negative() {
            scale = -scale;
        }
        let mut row: Vec<BigInt> = m[r].iter().map(|x| (x * &scale).to_integer()).collect();
        for k in 0..rows {
            row.push(if k == r { BigInt::one() } else { BigInt::zero() });
        }
        row.push((&b[r] * &scale).to_integer());
        t.push(row);
        scales.push(scale);
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();
    let mut cost = vec![BigInt::zero(); width];
    for row in &t {
        for j in 0..cols {
            cost[j] -= &row[j];
        }
        cost[rhs] -= &row[rhs];
    }
    let mut den = BigInt::one();

    loop {
        let Some(enter) = (0..cols).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<usize> = None;
        for r in 0..rows {
            if !t[r][enter].is_positive() {
                continue;
            }
            let better = match leave {
                None => true,
                Some(l) => {
                    // compare t[r][rhs]/t[r][enter] with t[l][rhs]/t[l][enter]
                    let lhs = &t[r][rhs] * &t[l][enter];
                    let rhs_v = &t[l][rhs] * &t[r][enter];
                    lhs < rhs_v || (lhs == rhs_v && basis[r] < basis[l])
                }
            };
            if better {
                leave = Some(r);
            }
        }
        // phase one is bounded below by zero, so some row always qualifies
        let r = leave.expect("phase-one objective is bounded");
        den = pivot(&mut t, &mut cost, r, enter, &den);
        basis[r] = enter;
    }

    if cost[rhs].is_zero() {
        let mut y = vec![Q::zero(); cols];
        for (r, &j) in basis.iter().enumerate() {
            if j < cols {
                y[j] = Q::new(t[r][rhs].clone(), den.clone());
            }
        }
        NonnegResult::Solution(y)
    } else {
        let pi: Vec<Q> = (0..rows)
            .map(|r| (Q::one() - Q::new(cost[cols + r].clone(), den.clone())) * &scales[r])
            .collect();
        NonnegResult::Certificate(pi)
    }
}

/// Fraction-free pivot on `(r, c)`; returns the new common denominator.
fn pivot(t: &mut [Vec<BigInt>], cost: &mut [BigInt], r: usize, c: usize, den: &BigInt) -> BigInt {
    let p = t[r][c].clone();
    let prow = t[r].clone();
    let update = |row: &mut Vec<BigInt>| {
        let f = row[c].clone();
        for (x, pr) in row.iter_mut().zip(&prow) {
            let v = &p * &*x - &f * pr;
            *x = v / den;
        }
    };
    for (i, row) in t.iter_mut().enumerate() {
        if i != r {
            update(row);
        }
    }
    let mut cost_row = cost.to_vec();
    update(&mut cost_row);
    cost.clone_from_slice(&cost_row);
    p
}

#[derive(Debug, Clone, PartialEq)]
pub enum StrictFeasibility {
    /// `h` with `A h <= -1` in every row.
    Feasible(Vec<Q>),
    /// `y >= 0`, `sum y = 1`, `y^T A = 0`: the rows cannot all be negative.
    Infeasible(Vec<Q>),
}

/// Decides `A h <= -1` (equivalently `A h < 0`) for free `h`, via the dual
/// system `A^T y = 0, 1^T y = 1, y >= 0`.
pub fn strict_feasibility(a: &[Vec<Q>], vars: usize) -> StrictFeasibility {
    let m = a.len();
    let mut dual: Vec<Vec<Q>> = (0..vars).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect();
    dual.push(vec![Q::one(); m]);
    let mut b = vec![Q::zero(); vars];
    b.push(Q::one());
    match nonneg_solve(&dual, &b) {
        NonnegResult::Solution(y) => StrictFeasibility::Infeasible(y),
        NonnegResult::Certificate(pi) => {
            let scale = pi[vars].clone();
            debug_assert!(scale.is_positive());
            let h: Vec<Q> = pi[..vars].iter().map(|x| x / &scale).collect();
            debug_assert!(a.iter().all(|row| dot(row, &h) <= -Q::one()));
            StrictFeasibility::Feasible(h)
        }
    }
}
