//! Suspension of a fan over a one-parameter subgroup, and the blow-down that
//! turns it into a variety of one dimension more with the same Picard number.

use num_bigint::BigInt;

use crate::birational::{blow_down, blow_up_curve, index_after_removal};
use crate::error::{Error, Result};
use crate::fan::{Fan, Wall};
use crate::lattice::LatticePoint;
use crate::mori::is_projective;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuspensionRecord {
    pub base: Fan,
    pub v: LatticePoint,
    pub suspended: Fan,
    /// Index of `(v, 1)`.
    pub ray_up: usize,
    /// Index of `(0, -1)`.
    pub ray_down: usize,
    /// Base ray `i` becomes suspended ray `lifted_rays[i]`.
    pub lifted_rays: Vec<usize>,
}

/// The fan with cones `σ + (v,1)` and `σ + (0,-1)` over every maximal `σ`.
pub fn suspend(base: &Fan, v: &LatticePoint) -> Result<SuspensionRecord> {
    if v.dim() != base.dim() {
        return Err(Error::DimensionMismatch(format!(
            "v has dimension {}, base fan {}",
            v.dim(),
            base.dim()
        )));
    }
    let r = base.num_rays();
    let mut rays: Vec<LatticePoint> = base
        .rays()
        .iter()
        .map(|w| w.extended(BigInt::from(0)))
        .collect();
    rays.push(v.extended(BigInt::from(1)));
    rays.push(LatticePoint::zero(base.dim()).extended(BigInt::from(-1)));
    let cones = base
        .max_cones()
        .iter()
        .flat_map(|c| [r, r + 1].map(|extra| c.iter().copied().chain([extra]).collect::<Vec<_>>()))
        .collect();
    let suspended = Fan::new(base.dim() + 1, rays, cones)?;
    let report = suspended.validate();
    if !report.is_valid() {
        return Err(Error::InvariantViolation(format!(
            "suspension is not smooth and complete: {}",
            report.failures.join("; ")
        )));
    }
    Ok(SuspensionRecord {
        base: base.clone(),
        v: v.clone(),
        suspended,
        ray_up: r,
        ray_down: r + 1,
        lifted_rays: (0..r).collect(),
    })
}

/// Contracts the lift of `divisor_ray` in a suspension by its own generator.
pub fn ewald_blow_down(rec: &SuspensionRecord, divisor_ray: usize) -> Result<Fan> {
    if divisor_ray >= rec.base.num_rays() || rec.base.ray(divisor_ray) != &rec.v {
        return Err(Error::VMismatch(divisor_ray));
    }
    blow_down(
        &rec.suspended,
        rec.lifted_rays[divisor_ray],
        &[rec.ray_up, rec.ray_down],
    )
}

/// `X_{v_D}` directly from a base fan and a ray.
pub fn ewald_variety(base: &Fan, divisor_ray: usize) -> Result<Fan> {
    if divisor_ray >= base.num_rays() {
        return Err(Error::VMismatch(divisor_ray));
    }
    ewald_blow_down(&suspend(base, base.ray(divisor_ray))?, divisor_ray)
}

/// Index in `X_{v_D}` of base ray `i`; `None` for `D` itself.
pub fn lifted_index(divisor_ray: usize, i: usize) -> Option<usize> {
    (i != divisor_ray).then(|| index_after_removal(i, divisor_ray))
}

/// One step of a tower together with the divisor used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerStep {
    pub fan: Fan,
    pub curve: Wall,
    /// The divisor ray of the previous fan used to build this one.
    pub divisor_ray: Option<usize>,
}

/// Iterates the Ewald construction along divisors containing the curve.
///
/// Returns `steps + 1` entries, the first being the input.
pub fn ewald_tower(base: &Fan, curve: &Wall, steps: usize) -> Result<Vec<TowerStep>> {
    check_pair(base, curve)?;
    let mut out = vec![TowerStep {
        fan: base.clone(),
        curve: curve.clone(),
        divisor_ray: None,
    }];
    for _ in 0..steps {
        let last = out.last().expect("tower is nonempty");
        let (fan, curve, d) = tower_step(&last.fan, &last.curve)?;
        check_pair(&fan, &curve)?;
        out.push(TowerStep {
            fan,
            curve,
            divisor_ray: Some(d),
        });
    }
    Ok(out)
}

fn tower_step(x: &Fan, curve: &Wall) -> Result<(Fan, Wall, usize)> {
    let &d = curve
        .rays
        .iter()
        .min()
        .ok_or_else(|| Error::NoSuitableDivisor(curve.rays.clone()))?;
    let rec = suspend(x, x.ray(d))?;
    let next = ewald_blow_down(&rec, d)?;
    let up = index_after_removal(rec.ray_up, d);
    let down = index_after_removal(rec.ray_down, d);
    let mut rays: Vec<usize> = curve
        .rays
        .iter()
        .filter(|&&r| r != d)
        .map(|&r| index_after_removal(r, d))
        .chain([up, down])
        .collect();
    rays.sort_unstable();
    let wall = next.wall(&rays)?;
    Ok((next, wall, d))
}

fn check_pair(x: &Fan, curve: &Wall) -> Result<()> {
    if is_projective(x)?.projective {
        return Err(Error::Precondition("tower fan is projective".into()));
    }
    let rec = blow_up_curve(x, curve)?;
    if !is_projective(&rec.result)?.projective {
        return Err(Error::Precondition(format!(
            "blow-up along {:?} is not projective",
            curve.rays
        )));
    }
    Ok(())
}
