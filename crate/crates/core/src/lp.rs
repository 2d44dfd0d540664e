//! Exact rational simplex for standard-form feasibility problems.
//!
//! Decides `{ y ≥ 0 : A y = b }` with Bland's rule. When the system is
//! infeasible the phase-one duals give a Farkas vector `z` with
//! `Aᵀ z ≥ 0` and `b · z < 0`.

use num_traits::{One, Signed, Zero};

use crate::lattice::{dot, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    /// A nonnegative solution of `A y = b`.
    Feasible(Vec<Rational>),
    /// A vector `z` with `Aᵀ z ≥ 0` and `b · z < 0`.
    Infeasible(Vec<Rational>),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// Decides `{ y ≥ 0 : A y = b }`; `a` is given row-wise, all rows the same length.
pub fn solve_nonnegative(a: &[Vec<Rational>], b: &[Rational]) -> Feasibility {
    assert_eq!(a.len(), b.len(), "row count of A and b differ");
    let m = a.len();
    let k = a.first().map_or(0, Vec::len);
    assert!(a.iter().all(|r| r.len() == k), "ragged constraint matrix");

    // Row signs so that the right-hand side is nonnegative.
    let signs: Vec<bool> = b.iter().map(Signed::is_negative).collect();
    let width = k + m;
    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(width);
        for x in &a[i] {
            row.push(if signs[i] { -x } else { x.clone() });
        }
        for j in 0..m {
            row.push(if i == j {
                Rational::one()
            } else {
                Rational::zero()
            });
        }
        tab.push(row);
        rhs.push(b[i].abs());
    }
    let mut basis: Vec<usize> = (k..k + m).collect();

    // Phase-one reduced costs: c_j - Σ_i c_{B_i} T[i][j], with c = 1 on artificials.
    let mut cost = vec![Rational::zero(); width];
    for row in &tab {
        for j in 0..k {
            cost[j] -= &row[j];
        }
    }
    let mut value: Rational = rhs.iter().sum();

    while let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if tab[i][enter].is_positive() {
                let ratio = &rhs[i] / &tab[i][enter];
                let better = match &leave {
                    None => true,
                    Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // Phase one is bounded below by zero, so a pivot row always exists.
        let (r, _) = leave.expect("phase-one objective is bounded");
        pivot(&mut tab, &mut rhs, &mut cost, &mut value, r, enter);
        basis[r] = enter;
    }

    if value.is_zero() {
        let mut y = vec![Rational::zero(); k];
        for (i, &j) in basis.iter().enumerate() {
            if j < k {
                y[j] = rhs[i].clone();
            }
        }
        Feasibility::Feasible(y)
    } else {
        // cost[k+i] = 1 - π_i, so z = -π = cost[k+i] - 1 (sign restored per row).
        let z = (0..m)
            .map(|i| {
                let zi = &cost[k + i] - Rational::one();
                if signs[i] {
                    -zi
                } else {
                    zi
                }
            })
            .collect();
        Feasibility::Infeasible(z)
    }
}

fn pivot(
    tab: &mut [Vec<Rational>],
    rhs: &mut [Rational],
    cost: &mut [Rational],
    value: &mut Rational,
    r: usize,
    c: usize,
) {
    let inv = tab[r][c].recip();
    for x in tab[r].iter_mut() {
        *x = &*x * &inv;
    }
    rhs[r] = &rhs[r] * &inv;
    let pivot_row = tab[r].clone();
    let pivot_rhs = rhs[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (x, p) in row.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *x = &*x - &f * p;
            }
        }
        rhs[i] = &rhs[i] - &f * &pivot_rhs;
    }
    if !cost[c].is_zero() {
        let f = cost[c].clone();
        for (x, p) in cost.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *x = &*x - &f * p;
            }
        }
        *value = &*value + &f * &pivot_rhs;
    }
}

/// Checks a claimed solution exactly.
pub fn check_feasible(a: &[Vec<Rational>], b: &[Rational], y: &[Rational]) -> bool {
    y.iter().all(|v| !v.is_negative()) && a.iter().zip(b).all(|(row, bi)| dot(row, y) == *bi)
}

/// Checks a claimed Farkas vector exactly.
pub fn check_farkas(a: &[Vec<Rational>], b: &[Rational], z: &[Rational]) -> bool {
    let k = a.first().map_or(0, Vec::len);
    let cols_ok = (0..k).all(|j| {
        let s: Rational = a.iter().zip(z).map(|(row, zi)| &row[j] * zi).sum();
        !s.is_negative()
    });
    cols_ok && dot(b, z).is_negative()
}
