//! Exact integer and rational linear algebra.
//!
//! Everything here is arbitrary precision. Lattice points carry [`BigInt`]
//! coordinates, and anything that needs division works over [`BigRational`].

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// An element of the lattice `N`, stored as integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint(Vec<BigInt>);

impl LatticePoint {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticePoint(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticePoint(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        LatticePoint(vec![BigInt::zero(); dim])
    }

    /// The `i`-th standard basis vector of `Z^dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        LatticePoint(self.0.iter().map(|c| c * k).collect())
    }

    /// Appends one coordinate, embedding `N` into `N ⊕ Z`.
    pub fn extended(&self, last: BigInt) -> Self {
        let mut c = self.0.clone();
        c.push(last);
        LatticePoint(c)
    }

    pub fn to_rational(&self) -> Vec<Rational> {
        self.0
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect()
    }

    /// Coordinates as `i64`, if they all fit.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|c| i64::try_from(c).ok()).collect()
    }

    /// Sum of a collection of points of the given dimension.
    pub fn sum<'a>(dim: usize, points: impl IntoIterator<Item = &'a LatticePoint>) -> Self {
        points.into_iter().fold(Self::zero(dim), |acc, p| &acc + p)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &LatticePoint {
    type Output = LatticePoint;
    fn add(self, rhs: &LatticePoint) -> LatticePoint {
        assert_eq!(
            self.dim(),
            rhs.dim(),
            "adding lattice points of different dimension"
        );
        LatticePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticePoint {
    type Output = LatticePoint;
    fn sub(self, rhs: &LatticePoint) -> LatticePoint {
        assert_eq!(
            self.dim(),
            rhs.dim(),
            "subtracting lattice points of different dimension"
        );
        LatticePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> LatticePoint {
        LatticePoint(self.0.iter().map(|c| -c).collect())
    }
}

/// Divides `v` by the gcd of its coordinates.
pub fn primitive_vector(v: &LatticePoint) -> Result<LatticePoint> {
    let g = v.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(LatticePoint(v.0.iter().map(|c| c / &g).collect()))
}

pub fn is_primitive(v: &LatticePoint) -> bool {
    v.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c)).is_one()
}

/// Determinant of the matrix whose rows are `vs`, by fraction-free Bareiss
/// elimination.
pub fn determinant(vs: &[LatticePoint]) -> Result<BigInt> {
    let n = vs.len();
    if let Some(bad) = vs.iter().find(|v| v.dim() != n) {
        return Err(Error::DimensionMismatch(format!(
            "{n} vectors but a vector of dimension {}",
            bad.dim()
        )));
    }
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m: Vec<Vec<BigInt>> = vs.iter().map(|v| v.0.clone()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                // Bareiss guarantees exact division here.
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    Ok(sign * &m[n - 1][n - 1])
}

/// Reduces `rows` to row echelon form in place and returns the pivot columns.
fn echelon(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let (pivot_row, row) = if i < r {
                    let (a, b) = rows.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = rows.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (x, p) in row.iter_mut().zip(pivot_row) {
                    *x = &*x - &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// Rank of a rational matrix given by rows.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    echelon(&mut m).len()
}

pub fn integer_rank(rows: &[Vec<BigInt>]) -> usize {
    let m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|c| Rational::from_integer(c.clone()))
                .collect()
        })
        .collect();
    rank(&m)
}

/// Solves `Σ c_i basis_i = target` for linearly independent `basis`.
/// Returns `None` when `target` lies outside the span.
pub fn solve_in_span(
    basis: &[LatticePoint],
    target: &LatticePoint,
) -> Result<Option<Vec<Rational>>> {
    let dim = target.dim();
    if let Some(b) = basis.iter().find(|b| b.dim() != dim) {
        return Err(Error::DimensionMismatch(format!(
            "basis vector of dimension {} against target of dimension {dim}",
            b.dim()
        )));
    }
    let k = basis.len();
    // Augmented system: one row per coordinate, columns = basis vectors | target.
    let mut rows: Vec<Vec<Rational>> = (0..dim)
        .map(|i| {
            basis
                .iter()
                .map(|b| Rational::from_integer(b.0[i].clone()))
                .chain(std::iter::once(Rational::from_integer(target.0[i].clone())))
                .collect()
        })
        .collect();
    let pivots = echelon(&mut rows);
    if pivots.contains(&k) {
        return Ok(None);
    }
    if pivots.len() < k {
        return Err(Error::DimensionMismatch(
            "basis is linearly dependent".into(),
        ));
    }
    let mut sol = vec![Rational::zero(); k];
    for (r, &c) in pivots.iter().enumerate() {
        sol[c] = rows[r][k].clone();
    }
    Ok(Some(sol))
}

/// Coefficients `c` with `Σ targets = Σ c_i basis_i`.
pub fn solve_integer_relation(
    targets: &[LatticePoint],
    basis: &[LatticePoint],
) -> Result<Vec<Rational>> {
    let dim = targets
        .first()
        .or_else(|| basis.first())
        .map(LatticePoint::dim)
        .ok_or_else(|| Error::DimensionMismatch("no vectors given".into()))?;
    if let Some(t) = targets.iter().find(|t| t.dim() != dim) {
        return Err(Error::DimensionMismatch(format!(
            "target of dimension {} against {dim}",
            t.dim()
        )));
    }
    let total = LatticePoint::sum(dim, targets);
    solve_in_span(basis, &total)?.ok_or(Error::NotInSpan)
}

/// Canonical `"p/q"` rendering with `q > 0`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int(a: &[Rational], b: &[BigInt]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| {
        acc + x * Rational::from_integer(y.clone())
    })
}

/// `true` if `a = t·b` for some rational `t > 0`.
pub fn positively_proportional(a: &[BigInt], b: &[BigInt]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let Some(i) = b.iter().position(|x| !x.is_zero()) else {
        return a.iter().all(Zero::is_zero);
    };
    if a[i].is_zero() || a[i].is_negative() != b[i].is_negative() {
        return false;
    }
    // a_j * b_i == a_i * b_j for all j
    a.iter().zip(b).all(|(aj, bj)| aj * &b[i] == &a[i] * bj)
}
