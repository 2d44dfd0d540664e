//! Analysis of a non-projective variety that becomes projective after one
//! blow-up along an invariant curve.
//!
//! Every Mori-extremal wall of the blow-up that meets the exceptional divisor
//! is matched against the three admissible sign patterns and the matching
//! blow-down is carried out and validated. Anything outside those patterns is
//! reported as an invariant violation.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::birational::{blow_down, blow_up_curve, index_after_removal, BlowupRecord};
use crate::error::{Error, Result};
use crate::fan::{bigint_to_json, Fan, Wall};
use crate::intersection::{anticanonical_degree, is_fano, wall_relation, WallRelation};
use crate::mori::{MoriCone, ProjectivityVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PhenomenonKind {
    TrivialReduction,
    ForbiddenFlip,
    ElementaryTransformation,
}

impl PhenomenonKind {
    pub fn name(self) -> &'static str {
        match self {
            PhenomenonKind::TrivialReduction => "TrivialReduction",
            PhenomenonKind::ForbiddenFlip => "ForbiddenFlip",
            PhenomenonKind::ElementaryTransformation => "ElementaryTransformation",
        }
    }
}

/// A cone given by ray indices in the named fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedCone {
    pub name: String,
    pub fan: String,
    pub rays: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhenomenonFinding {
    pub kind: PhenomenonKind,
    pub witness_wall: Wall,
    pub e_dot_omega: BigInt,
    /// Constructed fans by name: `Y`, and `X'` for a trivial reduction.
    pub fans: Vec<(String, Fan)>,
    /// `Z`, `p` or `⟨e, e'⟩`, depending on the kind.
    pub centers: Vec<NamedCone>,
    /// For a forbidden flip: the normal degrees of `Z` on each wall of `Y`
    /// containing it.
    pub z_normal_degrees: Vec<[BigInt; 2]>,
}

impl PhenomenonFinding {
    pub fn fan(&self, name: &str) -> Option<&Fan> {
        self.fans.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn center(&self, name: &str) -> Option<&NamedCone> {
        self.centers.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Value {
        let mut fans = serde_json::Map::new();
        for (name, f) in &self.fans {
            fans.insert(name.clone(), f.to_json());
        }
        let mut centers = serde_json::Map::new();
        for c in &self.centers {
            centers.insert(c.name.clone(), json!({"fan": c.fan, "rays": c.rays}));
        }
        let mut v = json!({
            "kind": self.kind.name(),
            "witness_wall": {"rays": self.witness_wall.rays, "apexes": self.witness_wall.apexes},
            "e_dot_omega": bigint_to_json(&self.e_dot_omega),
            "constructed": Value::Object(fans),
            "centers": Value::Object(centers),
        });
        if !self.z_normal_degrees.is_empty() {
            v["z_normal_degrees"] = self
                .z_normal_degrees
                .iter()
                .map(|d| Value::Array(d.iter().map(bigint_to_json).collect()))
                .collect();
        }
        v
    }
}

#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub x_projective: bool,
    pub xt_projective: bool,
    pub x_verdict: ProjectivityVerdict,
    pub xt_verdict: ProjectivityVerdict,
    pub blowup: BlowupRecord,
    /// Index of the exceptional ray `e` in the blow-up.
    pub exceptional_ray: usize,
    pub findings: Vec<PhenomenonFinding>,
    /// Extremal walls meeting `E` on which `-K` is not positive.
    pub unclassified: Vec<WallRelation>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> Value {
        json!({
            "x_projective": self.x_projective,
            "xt_projective": self.xt_projective,
            "x_verdict": self.x_verdict.to_json(),
            "xt_verdict": self.xt_verdict.to_json(),
            "blowup": self.blowup.result.to_json(),
            "exceptional_ray": self.exceptional_ray,
            "findings": self.findings.iter().map(PhenomenonFinding::to_json).collect::<Vec<_>>(),
            "unclassified": self.unclassified.iter().map(WallRelation::to_json).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GuaranteeReason {
    Fano,
    EnoughMoriRays,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GuaranteeReport {
    pub guaranteed: bool,
    pub reason: GuaranteeReason,
}

fn violation(msg: String) -> Error {
    Error::InvariantViolation(msg)
}

/// Whether a curve in a fiber of the blow-down spans an extremal ray.
///
/// When the blow-up is projective, this is checked to agree with the
/// projectivity of the base.
pub fn fiber_class_extremal(rec: &BlowupRecord) -> Result<bool> {
    let fiber = rec.exceptional_walls.first().ok_or(Error::NoFiberWall)?;
    let cone = MoriCone::new(&rec.result)?;
    let extremal = cone.is_extremal(fiber)?;
    if cone.is_projective()?.projective {
        let base = MoriCone::new(&rec.base)?.is_projective()?.projective;
        if base != extremal {
            return Err(violation(format!(
                "fiber wall {:?} extremal = {extremal} but base projective = {base}",
                fiber.rays
            )));
        }
    }
    Ok(extremal)
}

/// Whether the blow-up satisfies one of the two sufficient conditions for
/// some Mori-extremal ray to meet the exceptional divisor.
pub fn hypothesis_guarantee(rec: &BlowupRecord) -> Result<GuaranteeReport> {
    let cone = MoriCone::new(&rec.result)?;
    let reason = if is_fano(&rec.result)? {
        GuaranteeReason::Fano
    } else if cone.mori_extremal_ray_count()? >= rec.base.picard_number() {
        GuaranteeReason::EnoughMoriRays
    } else {
        GuaranteeReason::None
    };
    let guaranteed = reason != GuaranteeReason::None;
    if guaranteed
        && cone.is_projective()?.projective
        && !MoriCone::new(&rec.base)?.is_projective()?.projective
    {
        let mut found = false;
        for rel in cone.relations() {
            if !rel.degree_at(rec.new_ray).is_zero() && cone.is_mori_extremal(&rel.wall)? {
                found = true;
                break;
            }
        }
        if !found {
            return Err(violation(
                "guarantee holds but no Mori-extremal ray meets the exceptional divisor".into(),
            ));
        }
    }
    Ok(GuaranteeReport { guaranteed, reason })
}

/// Blows up `x` along `curve` and classifies how the blow-up is reached from
/// a projective variety.
pub fn analyze_pair(x: &Fan, curve: &Wall) -> Result<AnalysisReport> {
    let rec = blow_up_curve(x, curve)?;
    let xt = &rec.result;
    let e = rec.new_ray;
    let x_verdict = MoriCone::new(x)?.is_projective()?;
    let cone = MoriCone::new(xt)?;
    let xt_verdict = cone.is_projective()?;
    let active = !x_verdict.projective && xt_verdict.projective;

    let mut findings = Vec::new();
    let mut unclassified = Vec::new();
    for rel in cone.relations() {
        let w = &rel.wall;
        if !w.meets(e) || !cone.is_extremal(w)? {
            continue;
        }
        if !anticanonical_degree(rel).is_positive() {
            unclassified.push(rel.clone());
            continue;
        }
        let e_dot = rel.degree_at(e).clone();
        if !active {
            continue;
        }
        if !e_dot.is_negative() && w.contains(e) {
            return Err(violation(format!(
                "Mori-extremal wall {:?} lies in the exceptional divisor with E·ω = {e_dot}",
                w.rays
            )));
        }
        if e_dot.is_zero() {
            continue;
        }
        let finding = if e_dot == -BigInt::one() {
            forbidden_flip(x, &rec, rel)?
        } else if e_dot.is_one() {
            positive_case(x, &rec, rel)?
        } else {
            return Err(violation(format!("E·ω = {e_dot} on wall {:?}", w.rays)));
        };
        for (name, f) in &finding.fans {
            if !f.validate().is_valid() {
                return Err(violation(format!("constructed {name} does not validate")));
            }
        }
        let y = finding.fan("Y").expect("every finding constructs Y");
        if !MoriCone::new(y)?.is_projective()?.projective {
            return Err(violation(format!(
                "{} via {:?} produced a non-projective Y",
                finding.kind.name(),
                w.rays
            )));
        }
        findings.push(finding);
    }
    Ok(AnalysisReport {
        x_projective: x_verdict.projective,
        xt_projective: xt_verdict.projective,
        x_verdict,
        xt_verdict,
        exceptional_ray: e,
        blowup: rec,
        findings,
        unclassified,
    })
}

fn forbidden_flip(x: &Fan, rec: &BlowupRecord, rel: &WallRelation) -> Result<PhenomenonFinding> {
    let w = &rel.wall;
    let e = rec.new_ray;
    let curve = x.wall(&rec.center)?;
    if !w.contains(e) || w.apexes != curve.apexes {
        return Err(violation(format!(
            "E·ω = -1 on {:?} (apexes {:?}), which is not a fiber over the curve",
            w.rays, w.apexes
        )));
    }
    if w.rays
        .iter()
        .any(|&r| r != e && !rel.degree_at(r).is_zero())
    {
        return Err(violation(format!(
            "fiber wall {:?} has nonzero degrees off e",
            w.rays
        )));
    }
    let c_rel = wall_relation(x, &curve)?;
    if c_rel.normal_degrees().iter().any(|a| *a != -BigInt::one()) {
        return Err(violation(format!(
            "forbidden flip over a curve with normal degrees {:?}",
            c_rel.normal_degrees()
        )));
    }
    let [p, q] = curve.apexes;
    let y = blow_down(&rec.result, e, &[p, q])?;
    let z = vec![index_after_removal(p, e), index_after_removal(q, e)];
    let mut z_normal_degrees = Vec::new();
    for w in y.walls()? {
        if z.iter().all(|r| w.rays.contains(r)) {
            let r = wall_relation(&y, &w)?;
            let d = [r.degree_at(z[0]).clone(), r.degree_at(z[1]).clone()];
            if d.iter().any(|a| *a != -BigInt::one()) {
                return Err(violation(format!(
                    "Z has normal degrees {d:?} on wall {:?} of Y",
                    w.rays
                )));
            }
            z_normal_degrees.push(d);
        }
    }
    if z_normal_degrees.is_empty() {
        return Err(violation("no wall of Y contains Z".into()));
    }
    Ok(PhenomenonFinding {
        kind: PhenomenonKind::ForbiddenFlip,
        witness_wall: w.clone(),
        e_dot_omega: -BigInt::one(),
        fans: vec![("Y".into(), y)],
        centers: vec![NamedCone {
            name: "Z".into(),
            fan: "Y".into(),
            rays: z,
        }],
        z_normal_degrees,
    })
}

fn positive_case(x: &Fan, rec: &BlowupRecord, rel: &WallRelation) -> Result<PhenomenonFinding> {
    let w = &rel.wall;
    let e = rec.new_ray;
    let curve = x.wall(&rec.center)?;
    let Some(e_prime) = w.other_apex(e) else {
        return Err(violation(format!(
            "E·ω = 1 but e is not an apex of {:?}",
            w.rays
        )));
    };
    let sides: Vec<usize> = w
        .rays
        .iter()
        .copied()
        .filter(|r| curve.apexes.contains(r))
        .collect();
    let on_curve = w.rays.iter().filter(|r| rec.center.contains(r)).count();
    if sides.len() != 1 || on_curve + 2 != x.dim() {
        return Err(violation(format!(
            "wall {:?} through e is not spanned by n-2 curve rays and one apex",
            w.rays
        )));
    }
    let side = sides[0];
    let mut negative = Vec::new();
    for &r in &w.rays {
        let b = rel.degree_at(r);
        if b.is_positive() {
            return Err(violation(format!(
                "positive degree {b} at ray {r} of {:?}",
                w.rays
            )));
        }
        if b.is_negative() {
            if *b != -BigInt::one() {
                return Err(violation(format!("degree {b} at ray {r} of {:?}", w.rays)));
            }
            negative.push(r);
        }
    }
    match negative.as_slice() {
        [] => Err(violation(format!(
            "all degrees vanish on {:?}, which forces X to be projective",
            w.rays
        ))),
        [r] if *r == side => {
            let y = blow_down(&rec.result, side, &[e, e_prime])?;
            let mut sum: Vec<usize> = rec.center.clone();
            sum.push(e_prime);
            let x_prime = blow_down(x, side, &sum)?;
            let mut p: Vec<usize> = sum.iter().map(|&i| index_after_removal(i, side)).collect();
            p.sort_unstable();
            Ok(PhenomenonFinding {
                kind: PhenomenonKind::TrivialReduction,
                witness_wall: w.clone(),
                e_dot_omega: BigInt::one(),
                fans: vec![("Y".into(), y), ("X'".into(), x_prime)],
                centers: vec![NamedCone {
                    name: "p".into(),
                    fan: "X'".into(),
                    rays: p,
                }],
                z_normal_degrees: Vec::new(),
            })
        }
        [r] => {
            let r = *r;
            let y = blow_down(&rec.result, r, &[e, e_prime])?;
            let mut center = vec![index_after_removal(e, r), index_after_removal(e_prime, r)];
            center.sort_unstable();
            Ok(PhenomenonFinding {
                kind: PhenomenonKind::ElementaryTransformation,
                witness_wall: w.clone(),
                e_dot_omega: BigInt::one(),
                fans: vec![("Y".into(), y)],
                centers: vec![NamedCone {
                    name: "center".into(),
                    fan: "Y".into(),
                    rays: center,
                }],
                z_normal_degrees: Vec::new(),
            })
        }
        _ => Err(violation(format!(
            "several negative degrees {negative:?} on {:?}",
            w.rays
        ))),
    }
}
