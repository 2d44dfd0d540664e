//! Star subdivisions (blow-ups along invariant subvarieties) and their
//! inverses.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::fan::{Fan, Wall};
use crate::lattice::{determinant, is_primitive, LatticePoint};

/// The result of a star subdivision together with its bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupRecord {
    pub base: Fan,
    pub result: Fan,
    /// Sorted ray indices of the blown-up cone in `base`.
    pub center: Vec<usize>,
    /// Index of the new ray (the sum of the center) in `result`.
    pub new_ray: usize,
    /// Walls of `result` lying in fibers of the blow-down.
    pub exceptional_walls: Vec<Wall>,
    /// Walls of `result` on the exceptional divisor mapping isomorphically
    /// onto the center; only filled for curve centers.
    pub section_walls: Vec<Wall>,
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Subdivides every maximal cone containing `center` by the sum of the
/// center's generators.
pub fn star_subdivision(f: &Fan, center: &[usize]) -> Result<BlowupRecord> {
    let center = sorted(center);
    if center.len() < 2 || center.len() > f.dim() || center.iter().any(|&i| i >= f.num_rays()) {
        return Err(Error::NotAFace(center));
    }
    if !f.is_face(&center) {
        return Err(Error::NotAFace(center));
    }
    let e = LatticePoint::sum(f.dim(), center.iter().map(|&i| f.ray(i)));
    if !is_primitive(&e) {
        return Err(Error::InvariantViolation(format!(
            "sum of center {center:?} is not primitive; the base fan is not smooth there"
        )));
    }
    let new_ray = f.num_rays();
    let mut rays = f.rays().to_vec();
    rays.push(e);
    let mut cones = Vec::new();
    for c in f.max_cones() {
        if center.iter().all(|i| c.binary_search(i).is_ok()) {
            for s in &center {
                cones.push(
                    c.iter()
                        .copied()
                        .filter(|i| i != s)
                        .chain([new_ray])
                        .collect(),
                );
            }
        } else {
            cones.push(c.clone());
        }
    }
    let result = Fan::new(f.dim(), rays, cones)?;
    let mut exceptional_walls = Vec::new();
    let mut section_walls = Vec::new();
    for w in result.walls()? {
        if !w.contains(new_ray) {
            continue;
        }
        let in_center = |r: usize| center.binary_search(&r).is_ok();
        if w.apexes.iter().all(|&a| in_center(a)) {
            exceptional_walls.push(w);
        } else if center.len() + 1 == f.dim() {
            section_walls.push(w);
        }
    }
    Ok(BlowupRecord {
        base: f.clone(),
        result,
        center,
        new_ray,
        exceptional_walls,
        section_walls,
    })
}

/// Blow-up along the invariant curve of `curve`.
pub fn blow_up_curve(f: &Fan, curve: &Wall) -> Result<BlowupRecord> {
    if curve.rays.len() < 2 || curve.rays.len() + 1 != f.dim() {
        return Err(Error::NotAWall(format!(
            "{:?} is not a curve center with at least two rays in dimension {}",
            curve.rays,
            f.dim()
        )));
    }
    let actual = f.wall(&curve.rays)?;
    if actual.apexes != curve.apexes {
        return Err(Error::NotAWall(format!(
            "{:?} has apexes {:?}, not {:?}",
            curve.rays, actual.apexes, curve.apexes
        )));
    }
    star_subdivision(f, &curve.rays)
}

/// Inverse star subdivision: removes `ray`, whose generator must be the sum
/// of the generators in `decomposition`.
///
/// Ray indices above `ray` shift down by one in the result; see
/// [`index_after_removal`].
pub fn blow_down(f: &Fan, ray: usize, decomposition: &[usize]) -> Result<Fan> {
    let s = sorted(decomposition);
    if ray >= f.num_rays()
        || s.contains(&ray)
        || s.iter().any(|&i| i >= f.num_rays())
        || s.len() < 2
    {
        return Err(Error::SumMismatch {
            ray,
            decomposition: s,
        });
    }
    let sum = LatticePoint::sum(f.dim(), s.iter().map(|&i| f.ray(i)));
    if &sum != f.ray(ray) {
        return Err(Error::SumMismatch {
            ray,
            decomposition: s,
        });
    }
    // Group the star by the part outside S ∪ {ray}.
    let mut groups: BTreeMap<Vec<usize>, Vec<Vec<usize>>> = BTreeMap::new();
    for c in f.star(ray) {
        let in_s = c.iter().filter(|i| s.binary_search(i).is_ok()).count();
        if in_s + 1 != s.len() {
            return Err(Error::BadStarShape(
                ray,
                format!("cone {c:?} meets the decomposition in {in_s} rays"),
            ));
        }
        let outside: Vec<usize> = c
            .iter()
            .copied()
            .filter(|&i| i != ray && s.binary_search(&i).is_err())
            .collect();
        groups.entry(outside).or_default().push(c);
    }
    if groups.is_empty() {
        return Err(Error::BadStarShape(
            ray,
            "ray lies in no maximal cone".into(),
        ));
    }
    let mut replacements = Vec::new();
    for (outside, members) in &groups {
        if members.len() != s.len() {
            return Err(Error::BadStarShape(
                ray,
                format!(
                    "{} cones over {outside:?}, expected {}",
                    members.len(),
                    s.len()
                ),
            ));
        }
        let cone: Vec<usize> = s.iter().chain(outside).copied().sorted().collect();
        let d = determinant(&f.cone_rays(&cone)).expect("cone has dim rays");
        if d.abs() != num_bigint::BigInt::from(1) {
            return Err(Error::ResultSingular(cone));
        }
        replacements.push(cone);
    }
    let keep = |i: usize| index_after_removal(i, ray);
    let rays: Vec<LatticePoint> = f
        .rays()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != ray)
        .map(|(_, r)| r.clone())
        .collect();
    let cones: Vec<Vec<usize>> = f
        .max_cones()
        .iter()
        .filter(|c| c.binary_search(&ray).is_err())
        .chain(&replacements)
        .map(|c| c.iter().map(|&i| keep(i)).collect())
        .collect();
    let result = Fan::new(f.dim(), rays, cones)?;
    let report = result.validate();
    if !report.smooth {
        return Err(Error::ResultSingular(vec![ray]));
    }
    if !report.is_valid() {
        return Err(Error::BadStarShape(ray, report.failures.join("; ")));
    }
    Ok(result)
}

/// Index of ray `i` after ray `removed` is deleted.
pub fn index_after_removal(i: usize, removed: usize) -> usize {
    assert_ne!(i, removed, "removed ray has no index");
    if i > removed {
        i - 1
    } else {
        i
    }
}

/// All ways to blow down some ray of `f`, found by subset search.
///
/// Exhaustive over subsets, so only meant for small fans.
pub fn blow_down_candidates(f: &Fan) -> Vec<(usize, Vec<usize>)> {
    let mut out = Vec::new();
    for ray in 0..f.num_rays() {
        let others: Vec<usize> = (0..f.num_rays()).filter(|&i| i != ray).collect();
        for k in 2..=f.dim() {
            for s in others.iter().copied().combinations(k) {
                let sum = LatticePoint::sum(f.dim(), s.iter().map(|&i| f.ray(i)));
                if &sum == f.ray(ray) && blow_down(f, ray, &s).is_ok() {
                    out.push((ray, s));
                }
            }
        }
    }
    out
}
