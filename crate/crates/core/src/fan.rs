//! Smooth complete fans: rays, maximal cones, walls and validation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Number, Value};

use crate::error::{Error, Result};
use crate::lattice::{determinant, primitive_vector, solve_in_span, LatticePoint, Rational};
use crate::lp::solve_nonnegative;

/// A fan given by primitive ray generators and maximal cones as sorted
/// index sets into the ray list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<LatticePoint>,
    cones: Vec<Vec<usize>>,
}

/// A codimension-one cone together with the two rays completing it to the
/// adjacent maximal cones.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Wall {
    pub rays: Vec<usize>,
    pub apexes: [usize; 2],
}

impl Wall {
    pub fn contains(&self, ray: usize) -> bool {
        self.rays.binary_search(&ray).is_ok()
    }

    /// The apex other than `ray`, if `ray` is one of them.
    pub fn other_apex(&self, ray: usize) -> Option<usize> {
        match self.apexes {
            [a, b] if a == ray => Some(b),
            [a, b] if b == ray => Some(a),
            _ => None,
        }
    }

    /// `true` if the invariant curve meets the divisor of `ray`.
    pub fn meets(&self, ray: usize) -> bool {
        self.contains(ray) || self.apexes.contains(&ray)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub smooth: bool,
    pub complete: bool,
    pub proper: bool,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.smooth && self.complete && self.proper
    }
}

impl Fan {
    /// Builds a fan, canonicalizing rays to primitive form and sorting cones.
    ///
    /// Only structural checks happen here; geometric checks live in
    /// [`Fan::validate`].
    pub fn new(dim: usize, rays: Vec<LatticePoint>, cones: Vec<Vec<usize>>) -> Result<Fan> {
        if dim == 0 {
            return Err(Error::MalformedInput("dimension must be positive".into()));
        }
        let mut prim = Vec::with_capacity(rays.len());
        let mut seen = HashMap::new();
        for (i, r) in rays.iter().enumerate() {
            if r.dim() != dim {
                return Err(Error::MalformedInput(format!(
                    "ray {i} has {} coordinates, expected {dim}",
                    r.dim()
                )));
            }
            let p = primitive_vector(r)
                .map_err(|_| Error::MalformedInput(format!("ray {i} is the zero vector")))?;
            if let Some(j) = seen.insert(p.clone(), i) {
                return Err(Error::MalformedInput(format!("rays {j} and {i} coincide")));
            }
            prim.push(p);
        }
        let mut sorted = BTreeSet::new();
        for (k, c) in cones.into_iter().enumerate() {
            if c.len() != dim {
                return Err(Error::MalformedInput(format!(
                    "cone {k} has {} rays, expected {dim}",
                    c.len()
                )));
            }
            if let Some(&bad) = c.iter().find(|&&i| i >= prim.len()) {
                return Err(Error::MalformedInput(format!(
                    "cone {k} refers to missing ray {bad}"
                )));
            }
            let mut c = c;
            c.sort_unstable();
            if c.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::MalformedInput(format!("cone {k} repeats a ray")));
            }
            if !sorted.insert(c) {
                return Err(Error::MalformedInput(format!("cone {k} is listed twice")));
            }
        }
        Ok(Fan {
            dim,
            rays: prim,
            cones: sorted.into_iter().collect(),
        })
    }

    pub fn from_i64(dim: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Result<Fan> {
        Fan::new(
            dim,
            rays.iter().map(|r| LatticePoint::from_i64(r)).collect(),
            cones.iter().map(|c| c.to_vec()).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticePoint] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &LatticePoint {
        &self.rays[i]
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn picard_number(&self) -> usize {
        self.rays.len() - self.dim
    }

    pub fn cone_rays(&self, cone: &[usize]) -> Vec<LatticePoint> {
        cone.iter().map(|&i| self.rays[i].clone()).collect()
    }

    pub fn index_of_ray(&self, v: &LatticePoint) -> Option<usize> {
        self.rays.iter().position(|r| r == v)
    }

    /// `true` if `face` (any order) is contained in some maximal cone.
    pub fn is_face(&self, face: &[usize]) -> bool {
        self.cones
            .iter()
            .any(|c| face.iter().all(|i| c.binary_search(i).is_ok()))
    }

    /// Maximal cones containing `ray`.
    pub fn star(&self, ray: usize) -> Vec<Vec<usize>> {
        self.cones
            .iter()
            .filter(|c| c.binary_search(&ray).is_ok())
            .cloned()
            .collect()
    }

    /// Maximal cones containing every ray of `face`.
    pub fn star_of_face(&self, face: &[usize]) -> Vec<Vec<usize>> {
        self.cones
            .iter()
            .filter(|c| face.iter().all(|i| c.binary_search(i).is_ok()))
            .cloned()
            .collect()
    }

    /// Every facet of a maximal cone with the rays completing it.
    fn facet_map(&self) -> BTreeMap<Vec<usize>, Vec<usize>> {
        let mut map: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for c in &self.cones {
            for (k, &apex) in c.iter().enumerate() {
                let mut face = c.clone();
                face.remove(k);
                map.entry(face).or_default().push(apex);
            }
        }
        map
    }

    /// All walls in lexicographic order of their ray sets.
    pub fn walls(&self) -> Result<Vec<Wall>> {
        self.facet_map()
            .into_iter()
            .map(|(rays, apexes)| match apexes[..] {
                [a, b] => Ok(Wall {
                    rays,
                    apexes: [a.min(b), a.max(b)],
                }),
                _ => Err(Error::NotComplete(format!(
                    "face {rays:?} lies in {} maximal cones",
                    apexes.len()
                ))),
            })
            .collect()
    }

    /// Looks up the wall with the given ray set (any order).
    pub fn wall(&self, rays: &[usize]) -> Result<Wall> {
        let mut key = rays.to_vec();
        key.sort_unstable();
        if key.len() + 1 != self.dim {
            return Err(Error::NotAWall(format!(
                "{key:?} has {} rays, a wall needs {}",
                key.len(),
                self.dim - 1
            )));
        }
        let apexes: Vec<usize> = self
            .cones
            .iter()
            .filter(|c| key.iter().all(|i| c.binary_search(i).is_ok()))
            .map(|c| {
                *c.iter()
                    .find(|i| key.binary_search(i).is_err())
                    .expect("cone exceeds face")
            })
            .collect();
        match apexes[..] {
            [a, b] => Ok(Wall {
                rays: key,
                apexes: [a.min(b), a.max(b)],
            }),
            _ => Err(Error::NotAWall(format!(
                "{key:?} is a face of {} maximal cones",
                apexes.len()
            ))),
        }
    }

    /// Checks smoothness, completeness and the fan property.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport {
            smooth: true,
            complete: !self.cones.is_empty(),
            proper: true,
            failures: Vec::new(),
        };
        if self.cones.is_empty() {
            report.failures.push("fan has no maximal cones".into());
        }
        for c in &self.cones {
            let d = determinant(&self.cone_rays(c)).expect("cone size checked at construction");
            if !d.abs().is_one() {
                report.smooth = false;
                report
                    .failures
                    .push(format!("cone {c:?} has determinant {d}"));
            }
        }
        for (face, apexes) in self.facet_map() {
            if apexes.len() != 2 {
                report.complete = false;
                report.failures.push(format!(
                    "face {face:?} lies in {} maximal cones",
                    apexes.len()
                ));
            }
        }
        for (i, j) in (0..self.cones.len()).tuple_combinations() {
            if !self.cones_meet_properly(&self.cones[i], &self.cones[j]) {
                report.proper = false;
                report.failures.push(format!(
                    "cones {:?} and {:?} overlap beyond their common face",
                    self.cones[i], self.cones[j]
                ));
            }
        }
        for (k, r) in self.rays.iter().enumerate() {
            if !self.cones.iter().any(|c| c.binary_search(&k).is_ok()) {
                report.complete = false;
                report
                    .failures
                    .push(format!("ray {k} {r} lies in no maximal cone"));
            }
        }
        report
    }

    /// Exact test that two simplicial cones intersect in their common face.
    ///
    /// Looks for `x = Σ λ_u u + Σ γ_t t = Σ μ_v v` with `u` in the first cone
    /// only, `v` in the second only, `t` shared, `λ, μ ≥ 0`, `γ` free and
    /// `Σ λ + Σ μ = 1`. Any solution is a point outside the shared face.
    fn cones_meet_properly(&self, a: &[usize], b: &[usize]) -> bool {
        let only_a: Vec<usize> = a
            .iter()
            .copied()
            .filter(|i| b.binary_search(i).is_err())
            .collect();
        let only_b: Vec<usize> = b
            .iter()
            .copied()
            .filter(|i| a.binary_search(i).is_err())
            .collect();
        let shared: Vec<usize> = a
            .iter()
            .copied()
            .filter(|i| b.binary_search(i).is_ok())
            .collect();
        if only_a.is_empty() || only_b.is_empty() {
            return true;
        }
        // Columns: λ (only_a), μ (only_b, negated), γ⁺ and γ⁻ (shared).
        let mut cols: Vec<(Vec<Rational>, bool)> = Vec::new();
        for &u in &only_a {
            cols.push((self.rays[u].to_rational(), true));
        }
        for &v in &only_b {
            cols.push((
                self.rays[v].to_rational().into_iter().map(|x| -x).collect(),
                true,
            ));
        }
        for &t in &shared {
            let r = self.rays[t].to_rational();
            cols.push((r.iter().map(|x| -x).collect(), false));
            cols.push((r, false));
        }
        let mut rows: Vec<Vec<Rational>> = (0..self.dim)
            .map(|k| cols.iter().map(|(c, _)| c[k].clone()).collect())
            .collect();
        rows.push(
            cols.iter()
                .map(|(_, counted)| {
                    if *counted {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
        );
        let mut rhs = vec![Rational::zero(); self.dim];
        rhs.push(Rational::one());
        !solve_nonnegative(&rows, &rhs).is_feasible()
    }

    /// Same rays and cones up to a permutation of the ray list.
    pub fn same_up_to_ray_order(&self, other: &Fan) -> bool {
        if self.dim != other.dim
            || self.rays.len() != other.rays.len()
            || self.cones.len() != other.cones.len()
        {
            return false;
        }
        let Some(perm) = self
            .rays
            .iter()
            .map(|r| other.index_of_ray(r))
            .collect::<Option<Vec<usize>>>()
        else {
            return false;
        };
        self.cones_map_onto(other, &perm)
    }

    fn cones_map_onto(&self, other: &Fan, perm: &[usize]) -> bool {
        let target: BTreeSet<&Vec<usize>> = other.cones.iter().collect();
        self.cones.iter().all(|c| {
            let mut img: Vec<usize> = c.iter().map(|&i| perm[i]).collect();
            img.sort_unstable();
            target.contains(&img)
        })
    }

    /// Searches for a lattice automorphism carrying this fan onto `other`.
    /// Returns the ray permutation when one exists.
    pub fn lattice_isomorphism(&self, other: &Fan) -> Option<Vec<usize>> {
        if self.dim != other.dim
            || self.rays.len() != other.rays.len()
            || self.cones.len() != other.cones.len()
        {
            return None;
        }
        let n = self.dim;
        let source = self.cones.first()?;
        let basis = self.cone_rays(source);
        // Coordinates of every ray and every unit vector in the source basis.
        let coords = |v: &LatticePoint| solve_in_span(&basis, v).ok().flatten();
        let ray_coords: Vec<Vec<Rational>> = self.rays.iter().map(coords).collect::<Option<_>>()?;
        let unit_coords: Vec<Vec<Rational>> = (0..n)
            .map(|i| coords(&LatticePoint::unit(n, i)))
            .collect::<Option<_>>()?;
        let ray_index: HashMap<&LatticePoint, usize> =
            other.rays.iter().enumerate().map(|(i, r)| (r, i)).collect();

        let apply = |c: &[Rational], images: &[&LatticePoint]| -> Option<LatticePoint> {
            let mut out = vec![Rational::zero(); n];
            for (ci, img) in c.iter().zip(images) {
                for (o, x) in out.iter_mut().zip(img.coords()) {
                    *o += ci * Rational::from_integer(x.clone());
                }
            }
            out.iter()
                .map(|x| x.is_integer().then(|| x.to_integer()))
                .collect::<Option<Vec<BigInt>>>()
                .map(LatticePoint::new)
        };

        for target in &other.cones {
            for order in target.iter().permutations(n) {
                let images: Vec<&LatticePoint> = order.iter().map(|&&i| &other.rays[i]).collect();
                let Some(columns) = unit_coords
                    .iter()
                    .map(|c| apply(c, &images))
                    .collect::<Option<Vec<_>>>()
                else {
                    continue;
                };
                if !determinant(&columns)
                    .map(|d| d.abs().is_one())
                    .unwrap_or(false)
                {
                    continue;
                }
                let perm: Option<Vec<usize>> = ray_coords
                    .iter()
                    .map(|c| apply(c, &images).and_then(|p| ray_index.get(&p).copied()))
                    .collect();
                if let Some(perm) = perm {
                    if perm.iter().collect::<BTreeSet<_>>().len() == perm.len()
                        && self.cones_map_onto(other, &perm)
                    {
                        return Some(perm);
                    }
                }
            }
        }
        None
    }

    pub fn is_lattice_isomorphic(&self, other: &Fan) -> bool {
        self.lattice_isomorphism(other).is_some()
    }

    /// Canonical JSON value: `{"dim", "rays", "max_cones"}`.
    pub fn to_json(&self) -> Value {
        let rays: Vec<Value> = self
            .rays
            .iter()
            .map(|r| Value::Array(r.coords().iter().map(bigint_to_json).collect()))
            .collect();
        json!({
            "dim": self.dim,
            "rays": rays,
            "max_cones": self.cones,
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("fan serializes")
    }

    pub fn from_json(value: &Value) -> Result<Fan> {
        let bad = |m: &str| Error::MalformedInput(m.to_string());
        let obj = value
            .as_object()
            .ok_or_else(|| bad("fan must be a JSON object"))?;
        let dim = obj
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing or invalid \"dim\""))? as usize;
        let rays = obj
            .get("rays")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"rays\""))?
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| bad("each ray must be an array"))?
                    .iter()
                    .map(json_to_bigint)
                    .collect::<Result<Vec<_>>>()
                    .map(LatticePoint::new)
            })
            .collect::<Result<Vec<_>>>()?;
        let cones = obj
            .get("max_cones")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"max_cones\""))?
            .iter()
            .map(|c| {
                c.as_array()
                    .ok_or_else(|| bad("each cone must be an array"))?
                    .iter()
                    .map(|i| {
                        i.as_u64()
                            .map(|i| i as usize)
                            .ok_or_else(|| bad("cone entries must be ray indices"))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Fan::new(dim, rays, cones)
    }

    pub fn from_json_str(s: &str) -> Result<Fan> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::MalformedInput(e.to_string()))?;
        Fan::from_json(&v)
    }
}

pub(crate) fn bigint_to_json(b: &BigInt) -> Value {
    Value::Number(Number::from_str(&b.to_string()).expect("integers are valid JSON numbers"))
}

fn json_to_bigint(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse::<BigInt>()
            .map_err(|_| Error::MalformedInput(format!("{n} is not an integer"))),
        other => Err(Error::MalformedInput(format!("{other} is not an integer"))),
    }
}

/// Builds the fan of projective space `P^n`.
pub fn projective_space(n: usize) -> Fan {
    let mut rays: Vec<LatticePoint> = (0..n).map(|i| LatticePoint::unit(n, i)).collect();
    rays.push(LatticePoint::new(vec![-BigInt::one(); n]));
    let cones = (0..=n)
        .map(|skip| (0..=n).filter(|&i| i != skip).collect())
        .collect();
    Fan::new(n, rays, cones).expect("projective space fan is well formed")
}

/// `true` if every coordinate of `v` is zero.
pub fn is_zero_vector(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Fan {
        Fan::from_i64(
            2,
            &[&[1, 0], &[0, 1], &[-1, -1]],
            &[&[0, 1], &[1, 2], &[0, 2]],
        )
        .unwrap()
    }

    fn p1xp1() -> Fan {
        Fan::from_i64(
            2,
            &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]],
            &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]],
        )
        .unwrap()
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
    fn p2_is_smooth_complete() {
        let r = p2().validate();
        assert!(r.is_valid(), "{:?}", r.failures);
        assert_eq!(p2().picard_number(), 1);
        assert_eq!(f1().picard_number(), 2);
    }

    #[test]
    fn singular_cone_detected() {
        let f = Fan::from_i64(
            2,
            &[&[1, 0], &[1, 2], &[-1, -1]],
            &[&[0, 1], &[1, 2], &[0, 2]],
        )
        .unwrap();
        let r = f.validate();
        assert!(!r.smooth);
    }

    #[test]
    fn wall_counts() {
        assert_eq!(p2().walls().unwrap().len(), 3);
        assert_eq!(p1xp1().walls().unwrap().len(), 4);
        let p3 = projective_space(3);
        assert_eq!(p3.walls().unwrap().len(), 6);
    }

    #[test]
    fn star_counts() {
        assert_eq!(p2().star(0).len(), 2);
        let f = Fan::from_i64(
            2,
            &[&[1, 0], &[0, 1], &[-1, -1], &[5, 7]],
            &[&[0, 1], &[1, 2], &[0, 2]],
        )
        .unwrap();
        assert!(f.star(3).is_empty());
        assert!(!f.validate().complete);
    }

    #[test]
    fn incomplete_and_overlapping_fans() {
        // Half of P^2: boundary walls lie in one cone only.
        let half = Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2]]).unwrap();
        let r = half.validate();
        assert!(!r.complete);
        assert!(matches!(half.walls(), Err(Error::NotComplete(_))));
        // Closed cycle of unimodular cones that doubles back: ⟨(-1,1),(0,1)⟩
        // sits inside ⟨(1,0),(-1,1)⟩.
        let folded = Fan::from_i64(
            2,
            &[&[1, 0], &[-1, 1], &[-1, 0], &[0, -1], &[0, 1]],
            &[&[0, 1], &[1, 4], &[2, 4], &[2, 3], &[0, 3]],
        )
        .unwrap();
        let r = folded.validate();
        assert!(r.smooth);
        assert!(r.complete);
        assert!(!r.proper);
    }

    #[test]
    fn malformed_input() {
        assert!(matches!(
            Fan::from_i64(2, &[&[1, 0], &[0, 1]], &[&[0, 2]]),
            Err(Error::MalformedInput(_))
        ));
        assert!(matches!(
            Fan::from_i64(2, &[&[1, 0], &[0, 1]], &[&[0]]),
            Err(Error::MalformedInput(_))
        ));
        assert!(matches!(
            Fan::from_i64(2, &[&[1, 0], &[2, 0]], &[&[0, 1]]),
            Err(Error::MalformedInput(_))
        ));
    }

    #[test]
    fn rays_canonicalized_on_load() {
        let f = Fan::from_i64(
            2,
            &[&[2, 0], &[0, 3], &[-4, -4]],
            &[&[0, 1], &[1, 2], &[0, 2]],
        )
        .unwrap();
        assert_eq!(f, p2());
    }

    #[test]
    fn wall_lookup() {
        let w = p2().wall(&[0]).unwrap();
        assert_eq!(w.apexes, [1, 2]);
        assert!(matches!(p2().wall(&[0, 1]), Err(Error::NotAWall(_))));
    }

    #[test]
    fn json_round_trip() {
        let f = f1();
        let s = f.to_json_string();
        assert_eq!(
            s,
            r#"{"dim":2,"max_cones":[[0,1],[0,3],[1,2],[2,3]],"rays":[[1,0],[0,1],[-1,1],[0,-1]]}"#
        );
        assert_eq!(Fan::from_json_str(&s).unwrap(), f);
        assert!(matches!(
            Fan::from_json_str("{\"dim\":2}"),
            Err(Error::MalformedInput(_))
        ));
        assert!(matches!(
            Fan::from_json_str(r#"{"dim":1,"rays":[[1.5],[-1]],"max_cones":[[0],[1]]}"#),
            Err(Error::MalformedInput(_))
        ));
    }

    #[test]
    fn big_coordinates_survive_json() {
        let s = r#"{"dim":2,"rays":[[1,0],[0,1],[-1,-123456789012345678901234567890]],"max_cones":[[0,1],[1,2],[0,2]]}"#;
        let f = Fan::from_json_str(s).unwrap();
        assert_eq!(
            f.ray(2).coords()[1].to_string(),
            "-123456789012345678901234567890"
        );
        assert!(f
            .to_json_string()
            .contains("-123456789012345678901234567890"));
    }

    #[test]
    fn isomorphism_detection() {
        // P^2 with rays permuted and transformed by a unimodular map.
        let q = Fan::from_i64(
            2,
            &[&[1, 1], &[-1, 0], &[0, -1]],
            &[&[0, 1], &[1, 2], &[0, 2]],
        )
        .unwrap();
        assert!(p2().is_lattice_isomorphic(&q));
        assert!(!p2().is_lattice_isomorphic(&f1()));
        assert!(!p1xp1().is_lattice_isomorphic(&f1()));
        assert!(f1().same_up_to_ray_order(&f1()));
    }

    #[test]
    fn validation_is_order_independent() {
        let a = f1();
        let b = Fan::from_i64(
            2,
            &[&[0, -1], &[-1, 1], &[0, 1], &[1, 0]],
            &[&[3, 2], &[2, 1], &[1, 0], &[3, 0]],
        )
        .unwrap();
        assert!(a.same_up_to_ray_order(&b));
        assert_eq!(a.validate(), b.validate());
    }
}
