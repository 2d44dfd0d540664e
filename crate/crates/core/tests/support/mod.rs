//! Shared helpers for integration tests, including an independent
//! projectivity decider by Fourier–Motzkin elimination.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use toric::intersection::all_relations;
use toric::Fan;

type Q = BigRational;

#[derive(Clone, Debug)]
struct Ineq {
    /// `coeffs · x ≥ rhs`
    coeffs: Vec<Q>,
    rhs: Q,
    history: BTreeSet<usize>,
}

/// Column indices whose restriction keeps the row space rank.
fn independent_columns(rows: &[Vec<Q>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut chosen: Vec<usize> = Vec::new();
    for j in 0..ncols {
        let mut trial = chosen.clone();
        trial.push(j);
        if rank(rows, &trial) == trial.len() {
            chosen = trial;
        }
    }
    chosen
}

fn rank(rows: &[Vec<Q>], cols: &[usize]) -> usize {
    let mut m: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| cols.iter().map(|&j| r[j].clone()).collect())
        .collect();
    let mut rank = 0;
    for c in 0..cols.len() {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && !row[c].is_zero() {
                let f = &row[c] / &pivot[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Whether `{x : A x ≥ 1}` is nonempty, by Fourier–Motzkin elimination
/// with Chernikov's history rule.
pub fn fm_feasible(a: &[Vec<Q>]) -> bool {
    let cols = independent_columns(a);
    let mut system: Vec<Ineq> = a
        .iter()
        .enumerate()
        .map(|(i, r)| Ineq {
            coeffs: cols.iter().map(|&j| r[j].clone()).collect(),
            rhs: Q::one(),
            history: BTreeSet::from([i]),
        })
        .collect();
    for k in 0..cols.len() {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for ineq in system {
            if ineq.coeffs[k].is_positive() {
                pos.push(ineq);
            } else if ineq.coeffs[k].is_negative() {
                neg.push(ineq);
            } else {
                rest.push(ineq);
            }
        }
        for p in &pos {
            for n in &neg {
                let history: BTreeSet<usize> = p.history.union(&n.history).copied().collect();
                if history.len() > k + 2 {
                    continue;
                }
                let (sp, sn) = (-&n.coeffs[k], p.coeffs[k].clone());
                let coeffs: Vec<Q> = p
                    .coeffs
                    .iter()
                    .zip(&n.coeffs)
                    .map(|(x, y)| x * &sp + y * &sn)
                    .collect();
                let rhs = &p.rhs * &sp + &n.rhs * &sn;
                if coeffs.iter().all(Zero::is_zero) {
                    if rhs.is_positive() {
                        return false;
                    }
                    continue;
                }
                rest.push(Ineq {
                    coeffs,
                    rhs,
                    history,
                });
            }
        }
        system = rest;
    }
    true
}

/// Projectivity of a smooth complete fan decided by the oracle.
pub fn fm_projective(f: &Fan) -> bool {
    let rows: Vec<Vec<Q>> = all_relations(f)
        .unwrap()
        .into_iter()
        .map(|r| r.coeffs.into_iter().map(Q::from_integer).collect())
        .collect();
    fm_feasible(&rows)
}

/// Applies `count` random star subdivisions to `f`.
pub fn random_subdivisions<R: Rng>(f: &Fan, count: usize, rng: &mut R) -> Vec<(Fan, Vec<usize>)> {
    let mut out = Vec::new();
    let mut current = f.clone();
    for _ in 0..count {
        let cone = current.max_cones().choose(rng).unwrap().clone();
        let size = rng.gen_range(2..=current.dim());
        let mut center: Vec<usize> = cone.choose_multiple(rng, size).copied().collect();
        center.sort_unstable();
        out.push((current.clone(), center.clone()));
        current = toric::birational::star_subdivision(&current, &center)
            .unwrap()
            .result;
    }
    out
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
