//! Mori cone generators, extremality, projectivity with certificates and the
//! classification of extremal contractions.
//!
//! The cone of curves of a smooth complete toric variety is spanned by the
//! classes of its wall curves. Projectivity is decided as feasibility of
//! `{ d : ⟨d, class(w)⟩ ≥ 1 for every wall w }`; the system is homogeneous up to
//! scaling, so `≥ 1` stands in for `> 0`. By Gordan's alternative the system
//! is infeasible exactly when some nonnegative, nonzero combination of wall
//! classes vanishes, and that combination is returned as the certificate.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fan::{Fan, Wall};
use crate::intersection::{all_relations, anticanonical_degree, CurveClass, WallRelation};
use crate::lattice::{dot_int, format_rational, positively_proportional, Rational};
use crate::lp::{solve_nonnegative, Feasibility};

/// One distinct wall class with every wall realizing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoriGenerator {
    pub class: CurveClass,
    pub walls: Vec<Wall>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateEntry {
    /// Position of the wall in [`Fan::walls`] order.
    pub wall_index: usize,
    pub wall: Wall,
    pub y: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectivityVerdict {
    pub projective: bool,
    /// Rational divisor (one coefficient per ray) positive on every wall.
    pub ample_witness: Option<Vec<Rational>>,
    /// Nonnegative weights on walls whose classes sum to zero.
    pub degeneracy_certificate: Option<Vec<CertificateEntry>>,
}

impl ProjectivityVerdict {
    /// Re-checks the witness or certificate against the fan's wall classes.
    pub fn verify(&self, f: &Fan) -> Result<bool> {
        let rels = all_relations(f)?;
        Ok(self.verify_against(&rels))
    }

    fn verify_against(&self, rels: &[WallRelation]) -> bool {
        match (
            self.projective,
            &self.ample_witness,
            &self.degeneracy_certificate,
        ) {
            (true, Some(d), None) => rels
                .iter()
                .all(|r| dot_int(d, &r.coeffs) >= Rational::one()),
            (false, None, Some(cert)) => {
                let Some(first) = rels.first() else {
                    return false;
                };
                let mut sum = vec![Rational::zero(); first.coeffs.len()];
                let mut any_positive = false;
                for e in cert {
                    if e.y.is_negative() || rels.get(e.wall_index).map(|r| &r.wall) != Some(&e.wall)
                    {
                        return false;
                    }
                    any_positive |= e.y.is_positive();
                    for (s, c) in sum.iter_mut().zip(&rels[e.wall_index].coeffs) {
                        *s += &e.y * Rational::from_integer(c.clone());
                    }
                }
                any_positive && sum.iter().all(Zero::is_zero)
            }
            _ => false,
        }
    }

    pub fn to_json(&self) -> Value {
        match (&self.ample_witness, &self.degeneracy_certificate) {
            (Some(d), _) => json!({
                "projective": true,
                "witness": d.iter().map(format_rational).collect::<Vec<_>>(),
            }),
            (None, Some(cert)) => json!({
                "projective": false,
                "certificate": cert
                    .iter()
                    .map(|e| json!({"wall": e.wall_index, "y": format_rational(&e.y)}))
                    .collect::<Vec<_>>(),
            }),
            (None, None) => json!({ "projective": self.projective }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContractionKind {
    Fibration {
        base_dim: usize,
    },
    Birational {
        exceptional_dim: usize,
        image_dim: usize,
        fiber_dim: usize,
        divisorial: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ContractionInfo {
    /// Number of negative normal degrees.
    pub alpha: usize,
    /// Number of nonpositive normal degrees.
    pub beta: usize,
    pub kind: ContractionKind,
    /// `-K` is positive on the ray.
    pub mori_extremal: bool,
}

impl ContractionInfo {
    pub fn to_json(&self) -> Value {
        let kind = match self.kind {
            ContractionKind::Fibration { base_dim } => {
                json!({"type": "fibration", "base_dim": base_dim})
            }
            ContractionKind::Birational {
                exceptional_dim,
                image_dim,
                fiber_dim,
                divisorial,
            } => json!({
                "type": "birational",
                "exceptional_dim": exceptional_dim,
                "image_dim": image_dim,
                "fiber_dim": fiber_dim,
                "divisorial": divisorial,
            }),
        };
        json!({
            "alpha": self.alpha,
            "beta": self.beta,
            "kind": kind,
            "mori_extremal": self.mori_extremal,
        })
    }
}

/// Contraction data read off a wall relation, without checking extremality.
pub fn contraction_data(rel: &WallRelation, dim: usize) -> ContractionInfo {
    let degrees = rel.normal_degrees();
    let alpha = degrees.iter().filter(|a| a.is_negative()).count();
    let beta = degrees.iter().filter(|a| !a.is_positive()).count();
    let kind = if alpha == 0 {
        ContractionKind::Fibration { base_dim: beta }
    } else {
        ContractionKind::Birational {
            exceptional_dim: dim - alpha,
            image_dim: beta - alpha,
            fiber_dim: dim - beta,
            divisorial: alpha == 1,
        }
    };
    ContractionInfo {
        alpha,
        beta,
        kind,
        mori_extremal: anticanonical_degree(rel).is_positive(),
    }
}

/// Wall relations and distinct classes of a fan, computed once.
#[derive(Clone, Debug)]
pub struct MoriCone {
    dim: usize,
    relations: Vec<WallRelation>,
    generators: Vec<MoriGenerator>,
    /// For each wall, the index of its generator.
    wall_generator: Vec<usize>,
}

impl MoriCone {
    pub fn new(f: &Fan) -> Result<MoriCone> {
        let relations = all_relations(f)?;
        let mut generators: Vec<MoriGenerator> = Vec::new();
        let mut wall_generator = Vec::with_capacity(relations.len());
        for rel in &relations {
            let class = rel.class();
            match generators.iter().position(|g| g.class == class) {
                Some(k) => {
                    generators[k].walls.push(rel.wall.clone());
                    wall_generator.push(k);
                }
                None => {
                    wall_generator.push(generators.len());
                    generators.push(MoriGenerator {
                        class,
                        walls: vec![rel.wall.clone()],
                    });
                }
            }
        }
        Ok(MoriCone {
            dim: f.dim(),
            relations,
            generators,
            wall_generator,
        })
    }

    pub fn relations(&self) -> &[WallRelation] {
        &self.relations
    }

    pub fn generators(&self) -> &[MoriGenerator] {
        &self.generators
    }

    pub fn relation(&self, w: &Wall) -> Result<&WallRelation> {
        self.position(w).map(|i| &self.relations[i])
    }

    fn position(&self, w: &Wall) -> Result<usize> {
        self.relations
            .iter()
            .position(|r| r.wall == *w)
            .ok_or_else(|| Error::NotAWall(format!("{:?} with apexes {:?}", w.rays, w.apexes)))
    }

    fn num_rays(&self) -> usize {
        self.relations.first().map_or(0, |r| r.coeffs.len())
    }

    pub fn is_projective(&self) -> Result<ProjectivityVerdict> {
        let r = self.num_rays();
        let m = self.generators.len();
        // Columns are the distinct classes; last row normalizes Σ y = 1.
        let mut rows: Vec<Vec<Rational>> = (0..r)
            .map(|k| {
                self.generators
                    .iter()
                    .map(|g| Rational::from_integer(g.class.0[k].clone()))
                    .collect()
            })
            .collect();
        rows.push(vec![Rational::one(); m]);
        let mut rhs = vec![Rational::zero(); r];
        rhs.push(Rational::one());

        let verdict = match solve_nonnegative(&rows, &rhs) {
            Feasibility::Feasible(y) => {
                let cert = y
                    .into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| {
                        let wall = self.generators[j].walls[0].clone();
                        let wall_index = self.position(&wall).expect("generator wall is a wall");
                        CertificateEntry {
                            wall_index,
                            wall,
                            y: v,
                        }
                    })
                    .collect();
                ProjectivityVerdict {
                    projective: false,
                    ample_witness: None,
                    degeneracy_certificate: Some(cert),
                }
            }
            Feasibility::Infeasible(z) => {
                // A u + t·1 ≥ 0 with t < 0, so d = u / (-t) has A d ≥ 1.
                let t = -z[r].clone();
                let d = z[..r].iter().map(|u| u / &t).collect();
                ProjectivityVerdict {
                    projective: true,
                    ample_witness: Some(d),
                    degeneracy_certificate: None,
                }
            }
        };
        if !verdict.verify_against(&self.relations) {
            return Err(Error::InvariantViolation(
                "projectivity certificate failed exact re-verification".into(),
            ));
        }
        Ok(verdict)
    }

    /// A nonnegative combination of non-proportional generators equal to the
    /// class of `w`, or `None` when the class spans an edge.
    pub fn decomposition(&self, w: &Wall) -> Result<Option<Vec<(CurveClass, Rational)>>> {
        let target = &self.generators[self.wall_generator[self.position(w)?]].class;
        let others: Vec<&CurveClass> = self
            .generators
            .iter()
            .map(|g| &g.class)
            .filter(|c| !positively_proportional(&c.0, &target.0))
            .collect();
        if others.is_empty() {
            return Ok(None);
        }
        let rows: Vec<Vec<Rational>> = (0..self.num_rays())
            .map(|k| {
                others
                    .iter()
                    .map(|c| Rational::from_integer(c.0[k].clone()))
                    .collect()
            })
            .collect();
        let rhs: Vec<Rational> = target
            .0
            .iter()
            .map(|x| Rational::from_integer(x.clone()))
            .collect();
        match solve_nonnegative(&rows, &rhs) {
            Feasibility::Feasible(lambda) => {
                let combo: Vec<(CurveClass, Rational)> = others
                    .into_iter()
                    .zip(lambda)
                    .filter(|(_, l)| !l.is_zero())
                    .map(|(c, l)| (c.clone(), l))
                    .collect();
                let mut sum = vec![Rational::zero(); rhs.len()];
                for (c, l) in &combo {
                    for (s, x) in sum.iter_mut().zip(&c.0) {
                        *s += l * Rational::from_integer(x.clone());
                    }
                }
                if sum != rhs {
                    return Err(Error::InvariantViolation(
                        "extremality decomposition does not re-verify".into(),
                    ));
                }
                Ok(Some(combo))
            }
            Feasibility::Infeasible(_) => Ok(None),
        }
    }

    pub fn is_extremal(&self, w: &Wall) -> Result<bool> {
        Ok(self.decomposition(w)?.is_none())
    }

    /// Extremal and `-K`-positive.
    pub fn is_mori_extremal(&self, w: &Wall) -> Result<bool> {
        let rel = self.relation(w)?;
        Ok(anticanonical_degree(rel).is_positive() && self.is_extremal(w)?)
    }

    pub fn classify_contraction(&self, w: &Wall) -> Result<ContractionInfo> {
        if !self.is_extremal(w)? {
            return Err(Error::NotExtremal(w.rays.clone()));
        }
        Ok(contraction_data(self.relation(w)?, self.dim))
    }

    /// Generators spanning edges of the cone.
    pub fn extremal_generators(&self) -> Result<Vec<&MoriGenerator>> {
        let mut out = Vec::new();
        for g in &self.generators {
            if self.is_extremal(&g.walls[0])? {
                out.push(g);
            }
        }
        Ok(out)
    }

    /// Number of edges with positive anticanonical degree, counting
    /// proportional generators once.
    pub fn mori_extremal_ray_count(&self) -> Result<usize> {
        let mut rays: Vec<&CurveClass> = Vec::new();
        for g in self.extremal_generators()? {
            if g.class.anticanonical_degree() > BigInt::zero()
                && !rays
                    .iter()
                    .any(|c| positively_proportional(&c.0, &g.class.0))
            {
                rays.push(&g.class);
            }
        }
        Ok(rays.len())
    }
}

pub fn mori_generators(f: &Fan) -> Result<Vec<MoriGenerator>> {
    Ok(MoriCone::new(f)?.generators)
}

pub fn is_projective(f: &Fan) -> Result<ProjectivityVerdict> {
    MoriCone::new(f)?.is_projective()
}

pub fn is_extremal(f: &Fan, w: &Wall) -> Result<bool> {
    MoriCone::new(f)?.is_extremal(w)
}

pub fn classify_contraction(f: &Fan, w: &Wall) -> Result<ContractionInfo> {
    MoriCone::new(f)?.classify_contraction(w)
}
