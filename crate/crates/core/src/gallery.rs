//! Named fans: standard fixtures and the non-projective examples.
//!
//! Fixed fans are stored in the fan file format. Families whose rays depend
//! on parameters store their cone lists as constants. Every entry's notes are
//! recomputed on load.

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::birational::blow_up_curve;
use crate::error::{Error, Result};
use crate::ewald::ewald_tower;
use crate::fan::{projective_space, Fan, Wall};
use crate::intersection::all_relations;
use crate::lattice::LatticePoint;
use crate::mori::is_projective;

const P1XP1: &str =
    r#"{"dim":2,"max_cones":[[0,1],[1,2],[2,3],[0,3]],"rays":[[1,0],[0,1],[-1,0],[0,-1]]}"#;

/// Rays n1, n2, n3, n0, n'1, n'2, n'3 with n0 = -n1-n2-n3 and n'i = n0 + ni.
const ODA3: &str = r#"{"dim":3,"max_cones":[[0,1,2],[3,4,5],[3,5,6],[3,4,6],[0,1,4],[1,2,5],[0,2,6],[1,4,5],[2,5,6],[0,4,6]],"rays":[[1,0,0],[0,1,0],[0,0,1],[-1,-1,-1],[0,-1,-1],[-1,0,-1],[-1,-1,0]]}"#;

/// The three walls of the Oda fan whose curves have normal degrees (-1,-1).
const ODA3_CURVES: [[usize; 2]; 3] = [[1, 4], [2, 5], [0, 6]];

/// Cones of `X_{a,b}` on rays n, n', n'', -n', -n'', -n-n'-n'', -n+bn', n+n'+an''.
const XAB_CONES: [[usize; 3]; 12] = [
    [2, 3, 6],
    [3, 5, 6],
    [1, 4, 5],
    [1, 5, 6],
    [0, 4, 7],
    [1, 4, 7],
    [0, 2, 7],
    [0, 2, 3],
    [0, 3, 5],
    [0, 4, 5],
    [1, 2, 6],
    [1, 2, 7],
];

/// A curve of a non-projective `X_{a,b}` with projective blow-up, if any.
fn xab_curve(a: i64, b: i64) -> Option<[usize; 2]> {
    match (a, b) {
        (-1, _) => Some([2, 7]),
        (1, _) => Some([4, 7]),
        (_, 0) => Some([3, 6]),
        (_, -2) => Some([1, 6]),
        _ => None,
    }
}

/// Expected properties, recomputed whenever an entry is built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GalleryNotes {
    pub dim: usize,
    pub rho: usize,
    pub projective: bool,
    /// Curves of interest; for non-projective entries these have projective
    /// blow-ups.
    pub distinguished_walls: Vec<Wall>,
}

impl GalleryNotes {
    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "rho": self.rho,
            "projective": self.projective,
            "distinguished_walls": self
                .distinguished_walls
                .iter()
                .map(|w| json!({"rays": w.rays, "apexes": w.apexes}))
                .collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GalleryEntry {
    pub name: String,
    pub params: Vec<i64>,
    pub fan: Fan,
    pub notes: GalleryNotes,
}

impl GalleryEntry {
    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "params": self.params,
            "fan": self.fan.to_json(),
            "notes": self.notes.to_json(),
        })
    }
}

pub const NAMES: [&str; 6] = ["pn", "hirzebruch", "p1xp1", "oda3", "xab", "ewald-tower"];

fn bad(name: &str, reason: impl Into<String>) -> Error {
    Error::BadParams {
        name: name.to_string(),
        reason: reason.into(),
    }
}

fn arity(name: &str, params: &[i64], n: usize) -> Result<()> {
    if params.len() != n {
        return Err(bad(
            name,
            format!("expected {n} parameter(s), got {}", params.len()),
        ));
    }
    Ok(())
}

/// Builds the named fan and checks its notes.
pub fn get_fan(name: &str, params: &[i64]) -> Result<GalleryEntry> {
    let (fan, projective, walls) = match name {
        "pn" => {
            arity(name, params, 1)?;
            let n = usize::try_from(params[0])
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| bad(name, "n must be at least 1"))?;
            (projective_space(n), true, Vec::new())
        }
        "hirzebruch" => {
            arity(name, params, 1)?;
            (hirzebruch(params[0]), true, Vec::new())
        }
        "p1xp1" => {
            arity(name, params, 0)?;
            (Fan::from_json_str(P1XP1)?, true, Vec::new())
        }
        "oda3" => {
            arity(name, params, 0)?;
            let f = Fan::from_json_str(ODA3)?;
            let walls = oda3_curves(&f)?;
            (f, false, walls)
        }
        "xab" => {
            arity(name, params, 2)?;
            let (a, b) = (params[0], params[1]);
            let f = xab(a, b);
            let projective = a == 0 || b == -1;
            let walls = match xab_curve(a, b) {
                Some(c) if !projective => vec![f.wall(&c)?],
                _ => Vec::new(),
            };
            (f, projective, walls)
        }
        "ewald-tower" => {
            arity(name, params, 1)?;
            let steps =
                usize::try_from(params[0]).map_err(|_| bad(name, "steps must be nonnegative"))?;
            let base = Fan::from_json_str(ODA3)?;
            let curve = oda3_curves(&base)?.remove(0);
            let top = ewald_tower(&base, &curve, steps)?
                .pop()
                .expect("tower has its base");
            (top.fan, false, vec![top.curve])
        }
        other => return Err(Error::UnknownName(other.to_string())),
    };
    let notes = GalleryNotes {
        dim: fan.dim(),
        rho: fan.picard_number(),
        projective,
        distinguished_walls: walls,
    };
    let entry = GalleryEntry {
        name: name.to_string(),
        params: params.to_vec(),
        fan,
        notes,
    };
    verify_notes(&entry)?;
    Ok(entry)
}

/// Recomputes everything the notes claim.
pub fn verify_notes(entry: &GalleryEntry) -> Result<()> {
    let f = &entry.fan;
    let fail = |what: String| {
        Err(Error::InvariantViolation(format!(
            "gallery entry {}: {what}",
            entry.name
        )))
    };
    let report = f.validate();
    if !report.is_valid() {
        return fail(report.failures.join("; "));
    }
    if f.dim() != entry.notes.dim || f.picard_number() != entry.notes.rho {
        return fail("dimension or Picard number differ from notes".into());
    }
    let projective = is_projective(f)?.projective;
    if projective != entry.notes.projective {
        return fail(format!(
            "projective = {projective}, notes say {}",
            entry.notes.projective
        ));
    }
    for w in &entry.notes.distinguished_walls {
        if f.wall(&w.rays)? != *w {
            return fail(format!("{:?} is not a wall", w.rays));
        }
        if !projective && !is_projective(&blow_up_curve(f, w)?.result)?.projective {
            return fail(format!("blow-up along {:?} is not projective", w.rays));
        }
    }
    Ok(())
}

/// Walls of `f` whose relation degrees are all -1.
pub fn minus_one_walls(f: &Fan) -> Result<Vec<Wall>> {
    Ok(all_relations(f)?
        .into_iter()
        .filter(|r| r.normal_degrees().iter().all(|a| *a == BigInt::from(-1)))
        .map(|r| r.wall)
        .collect())
}

fn oda3_curves(f: &Fan) -> Result<Vec<Wall>> {
    let pinned: Vec<Wall> = ODA3_CURVES
        .iter()
        .map(|w| f.wall(w))
        .collect::<Result<_>>()?;
    let mut found = minus_one_walls(f)?;
    found.sort_by(|a, b| a.rays.cmp(&b.rays));
    let mut sorted = pinned.clone();
    sorted.sort_by(|a, b| a.rays.cmp(&b.rays));
    if found != sorted {
        return Err(Error::InvariantViolation(format!(
            "oda3 (-1,-1) walls are {:?}",
            found.iter().map(|w| &w.rays).collect::<Vec<_>>()
        )));
    }
    Ok(pinned)
}

pub fn hirzebruch(a: i64) -> Fan {
    let rays = [[1, 0], [0, 1], [-1, a], [0, -1]]
        .map(|r| LatticePoint::from_i64(&r))
        .to_vec();
    Fan::new(
        2,
        rays,
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
    )
    .expect("Hirzebruch fan")
}

pub fn xab(a: i64, b: i64) -> Fan {
    let rays = [
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
        [0, -1, 0],
        [0, 0, -1],
        [-1, -1, -1],
        [-1, b, 0],
        [1, 1, a],
    ]
    .map(|r| LatticePoint::from_i64(&r))
    .to_vec();
    Fan::new(3, rays, XAB_CONES.iter().map(|c| c.to_vec()).collect()).expect("X_{a,b} fan")
}
