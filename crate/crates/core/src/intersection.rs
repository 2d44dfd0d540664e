//! Wall relations and intersection numbers of invariant curves.
//!
//! For a wall `⟨e_1, …, e_{n-1}⟩` with apexes `e_n`, `e_{n+1}` there is a
//! unique relation `e_n + e_{n+1} + Σ a_i e_i = 0`. The vector of its
//! coefficients, indexed by all rays, is the intersection vector of the
//! invariant curve against every ray divisor, and the `a_i` are the degrees
//! of its normal bundle.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fan::{bigint_to_json, Fan, Wall};
use crate::lattice::{integer_rank, solve_integer_relation, LatticePoint};

/// Numerical class of an invariant curve: `D_ρ · C` for every ray `ρ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurveClass(pub Vec<BigInt>);

impl CurveClass {
    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    /// Intersection number with the divisor of `ray`.
    pub fn dot_divisor(&self, ray: usize) -> &BigInt {
        &self.0[ray]
    }

    /// Intersection with `-K`, the sum of all ray divisors.
    pub fn anticanonical_degree(&self) -> BigInt {
        self.0.iter().sum()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(bigint_to_json).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallRelation {
    pub wall: Wall,
    pub coeffs: Vec<BigInt>,
}

impl WallRelation {
    pub fn class(&self) -> CurveClass {
        CurveClass(self.coeffs.clone())
    }

    /// The `a_i`, in the order of `wall.rays`.
    pub fn normal_degrees(&self) -> Vec<BigInt> {
        self.wall
            .rays
            .iter()
            .map(|&r| self.coeffs[r].clone())
            .collect()
    }

    pub fn degree_at(&self, ray: usize) -> &BigInt {
        &self.coeffs[ray]
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rays": self.wall.rays,
            "apexes": self.wall.apexes,
            "coeffs": Value::Array(self.coeffs.iter().map(bigint_to_json).collect()),
        })
    }
}

/// The relation across `w`; fails with `NotAWall` unless `w` is a wall of `f`.
pub fn wall_relation(f: &Fan, w: &Wall) -> Result<WallRelation> {
    let actual = f.wall(&w.rays)?;
    if actual.apexes != w.apexes {
        return Err(Error::NotAWall(format!(
            "{:?} has apexes {:?}, not {:?}",
            w.rays, actual.apexes, w.apexes
        )));
    }
    let apexes: Vec<LatticePoint> = w.apexes.iter().map(|&i| f.ray(i).clone()).collect();
    let basis = f.cone_rays(&w.rays);
    let c = solve_integer_relation(&apexes, &basis).map_err(|e| match e {
        Error::NotInSpan => Error::InvariantViolation(format!(
            "apexes of wall {:?} do not sum into its span; the fan is not simplicial there",
            w.rays
        )),
        other => other,
    })?;
    let mut coeffs = vec![BigInt::zero(); f.num_rays()];
    for &a in &w.apexes {
        coeffs[a] = BigInt::one();
    }
    for (&r, ci) in w.rays.iter().zip(&c) {
        if !ci.is_integer() {
            return Err(Error::InvariantViolation(format!(
                "non-integral coefficient {ci} on wall {:?}; the fan is not smooth",
                w.rays
            )));
        }
        coeffs[r] = -ci.to_integer();
    }
    Ok(WallRelation {
        wall: w.clone(),
        coeffs,
    })
}

/// Relations for every wall, in wall order.
pub fn all_relations(f: &Fan) -> Result<Vec<WallRelation>> {
    f.walls()?.iter().map(|w| wall_relation(f, w)).collect()
}

/// `2 + Σ a_i`.
pub fn anticanonical_degree(rel: &WallRelation) -> BigInt {
    BigInt::from(2) + rel.normal_degrees().iter().sum::<BigInt>()
}

/// `-K` is positive on every invariant curve.
pub fn is_fano(f: &Fan) -> Result<bool> {
    Ok(all_relations(f)?
        .iter()
        .all(|r| anticanonical_degree(r).is_positive()))
}

/// Euler characteristic of the normal bundle: `-K·C + n - 3`.
pub fn chi_normal_curve(f: &Fan, w: &Wall) -> Result<BigInt> {
    let rel = wall_relation(f, w)?;
    Ok(anticanonical_degree(&rel) + BigInt::from(f.dim()) - BigInt::from(3))
}

/// Rank of the matrix whose rows are all wall classes.
pub fn wall_class_rank(f: &Fan) -> Result<usize> {
    let rows: Vec<Vec<BigInt>> = all_relations(f)?.into_iter().map(|r| r.coeffs).collect();
    Ok(integer_rank(&rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::projective_space;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn f1() -> Fan {
        Fan::from_i64(
            2,
            &[&[1, 0], &[0, 1], &[-1, 1], &[0, -1]],
            &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]],
        )
        .unwrap()
    }

    #[test]
    fn p2_line() {
        let p2 = projective_space(2);
        let w = p2.wall(&[0]).unwrap();
        let rel = wall_relation(&p2, &w).unwrap();
        assert_eq!(rel.normal_degrees(), ints(&[1]));
        assert_eq!(anticanonical_degree(&rel), 3.into());
        // All three classes of P^2 coincide.
        for r in all_relations(&p2).unwrap() {
            assert_eq!(r.coeffs, ints(&[1, 1, 1]));
        }
        assert!(is_fano(&p2).unwrap());
    }

    #[test]
    fn f1_exceptional_curve() {
        let f = f1();
        let rel = wall_relation(&f, &f.wall(&[1]).unwrap()).unwrap();
        assert_eq!(rel.normal_degrees(), ints(&[-1]));
        let mut degrees: Vec<BigInt> = all_relations(&f)
            .unwrap()
            .iter()
            .map(anticanonical_degree)
            .collect();
        degrees.sort();
        assert_eq!(degrees, ints(&[1, 2, 2, 3]));
        assert!(is_fano(&f).unwrap());
    }

    #[test]
    fn line_in_p3() {
        let p3 = projective_space(3);
        let w = p3.wall(&[0, 1]).unwrap();
        assert_eq!(
            wall_relation(&p3, &w).unwrap().normal_degrees(),
            ints(&[1, 1])
        );
        assert_eq!(chi_normal_curve(&p3, &w).unwrap(), 4.into());
    }

    #[test]
    fn relation_rejects_non_walls() {
        let p2 = projective_space(2);
        let fake = Wall {
            rays: vec![0],
            apexes: [0, 1],
        };
        assert!(matches!(wall_relation(&p2, &fake), Err(Error::NotAWall(_))));
    }

    #[test]
    fn rank_equals_picard_number() {
        assert_eq!(wall_class_rank(&projective_space(3)).unwrap(), 1);
        assert_eq!(wall_class_rank(&f1()).unwrap(), 2);
    }

    #[test]
    fn relation_json() {
        let p2 = projective_space(2);
        let rel = wall_relation(&p2, &p2.wall(&[2]).unwrap()).unwrap();
        assert_eq!(
            rel.to_json().to_string(),
            r#"{"apexes":[0,1],"coeffs":[1,1,1],"rays":[2]}"#
        );
    }
}
