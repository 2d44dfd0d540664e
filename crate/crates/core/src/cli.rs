//! Command-line front end. Reports go to stdout as JSON, summaries to stderr.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::analyzer::analyze_pair;
use crate::birational::{blow_down, star_subdivision};
use crate::error::Error;
use crate::ewald::{ewald_blow_down, ewald_tower, suspend};
use crate::fan::Fan;
use crate::gallery::get_fan;
use crate::intersection::{anticanonical_degree, is_fano};
use crate::lattice::LatticePoint;
use crate::mori::MoriCone;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "toric",
    version,
    about = "Smooth complete toric varieties: projectivity, Mori cones, blow-ups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a fan and decide projectivity.
    Check { fan: PathBuf },
    /// Walls, relations, Mori cone generators and contractions.
    Mori { fan: PathBuf },
    /// Star subdivision along a cone.
    Blowup {
        fan: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        center: Vec<usize>,
    },
    /// Remove a ray that is the sum of the given rays.
    Blowdown {
        fan: PathBuf,
        #[arg(long)]
        ray: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        sum: Vec<usize>,
    },
    /// Blow up a curve and classify the result.
    Analyze {
        fan: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        curve: Vec<usize>,
    },
    #[command(subcommand)]
    Ewald(EwaldCommand),
    /// Print a built-in fan.
    Gallery {
        name: String,
        #[arg(allow_negative_numbers = true)]
        params: Vec<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum EwaldCommand {
    /// Suspension over the one-parameter subgroup v.
    Suspend {
        fan: PathBuf,
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            required = true
        )]
        v: Vec<i64>,
    },
    /// The variety X_{v_D} for the divisor of a ray.
    Blowdown {
        fan: PathBuf,
        #[arg(long)]
        ray: usize,
    },
    /// Iterate the construction along a curve with projective blow-up.
    Tower {
        fan: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        curve: Vec<usize>,
        #[arg(long)]
        steps: usize,
    },
}

/// Why a command stopped.
#[derive(Debug)]
enum Failure {
    Malformed(String),
    Check(String),
    Invariant(String),
}

/// Exit code reported for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvariantViolation(_) => EXIT_INVARIANT,
        Error::MalformedInput(_)
        | Error::DimensionMismatch(_)
        | Error::ZeroVector
        | Error::UnknownName(_)
        | Error::BadParams { .. } => EXIT_MALFORMED,
        _ => EXIT_CHECK_FAILED,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match exit_code(&e) {
            EXIT_INVARIANT => Failure::Invariant(msg),
            EXIT_MALFORMED => Failure::Malformed(msg),
            _ => Failure::Check(msg),
        }
    }
}

struct Outcome {
    report: Value,
    summary: String,
    code: i32,
}

impl Outcome {
    fn ok(report: Value, summary: String) -> Self {
        Outcome {
            report,
            summary,
            code: EXIT_OK,
        }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_MALFORMED
            } else {
                EXIT_OK
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command) {
        Ok(o) => {
            let _ = writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&o.report).expect("JSON value serializes")
            );
            let _ = writeln!(err, "{}", o.summary);
            o.code
        }
        Err(f) => {
            let (code, msg) = match f {
                Failure::Malformed(m) => (EXIT_MALFORMED, m),
                Failure::Check(m) => (EXIT_CHECK_FAILED, m),
                Failure::Invariant(m) => (EXIT_INVARIANT, m),
            };
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn read_fan(path: &PathBuf) -> Result<Fan, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))?;
    Ok(Fan::from_json_str(&text)?)
}

fn read_valid_fan(path: &PathBuf) -> Result<Fan, Failure> {
    let f = read_fan(path)?;
    let report = f.validate();
    if !report.is_valid() {
        return Err(Failure::Check(format!(
            "invalid fan: {}",
            report.failures.join("; ")
        )));
    }
    Ok(f)
}

fn execute(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Check { fan } => check(&read_fan(&fan)?),
        Command::Mori { fan } => mori(&read_valid_fan(&fan)?),
        Command::Blowup { fan, center } => {
            let rec = star_subdivision(&read_valid_fan(&fan)?, &center)?;
            let summary = format!(
                "blew up {:?}; new ray {} = {}",
                rec.center,
                rec.new_ray,
                rec.result.ray(rec.new_ray)
            );
            Ok(Outcome::ok(rec.result.to_json(), summary))
        }
        Command::Blowdown { fan, ray, sum } => {
            let f = blow_down(&read_valid_fan(&fan)?, ray, &sum)?;
            let summary = format!("blew down ray {ray}; {} rays remain", f.num_rays());
            Ok(Outcome::ok(f.to_json(), summary))
        }
        Command::Analyze { fan, curve } => {
            let f = read_valid_fan(&fan)?;
            let mut rays = curve;
            rays.sort_unstable();
            let wall = f.wall(&rays)?;
            let report = analyze_pair(&f, &wall)?;
            let kinds: Vec<&str> = report.findings.iter().map(|x| x.kind.name()).collect();
            let summary = format!(
                "X projective: {}; blow-up projective: {}; findings: {}",
                report.x_projective,
                report.xt_projective,
                if kinds.is_empty() {
                    "none".to_string()
                } else {
                    kinds.join(", ")
                }
            );
            Ok(Outcome::ok(report.to_json(), summary))
        }
        Command::Ewald(EwaldCommand::Suspend { fan, v }) => {
            let rec = suspend(&read_valid_fan(&fan)?, &LatticePoint::from_i64(&v))?;
            let summary = format!(
                "suspension: up ray {}, down ray {}",
                rec.ray_up, rec.ray_down
            );
            Ok(Outcome::ok(rec.suspended.to_json(), summary))
        }
        Command::Ewald(EwaldCommand::Blowdown { fan, ray }) => {
            let base = read_valid_fan(&fan)?;
            if ray >= base.num_rays() {
                return Err(Failure::Check(format!("ray {ray} out of range")));
            }
            let rec = suspend(&base, base.ray(ray))?;
            let f = ewald_blow_down(&rec, ray)?;
            let summary = format!("dimension {}, Picard number {}", f.dim(), f.picard_number());
            Ok(Outcome::ok(f.to_json(), summary))
        }
        Command::Ewald(EwaldCommand::Tower { fan, curve, steps }) => {
            let f = read_valid_fan(&fan)?;
            let mut rays = curve;
            rays.sort_unstable();
            let wall = f.wall(&rays)?;
            let tower = ewald_tower(&f, &wall, steps)?;
            let report: Vec<Value> = tower
                .iter()
                .map(|s| {
                    json!({
                        "fan": s.fan.to_json(),
                        "curve": {"rays": s.curve.rays, "apexes": s.curve.apexes},
                        "divisor_ray": s.divisor_ray,
                    })
                })
                .collect();
            let top = &tower.last().expect("tower has its base").fan;
            let summary = format!(
                "{} steps; top dimension {}, Picard number {}",
                steps,
                top.dim(),
                top.picard_number()
            );
            Ok(Outcome::ok(Value::Array(report), summary))
        }
        Command::Gallery { name, params, out } => {
            let entry = get_fan(&name, &params)?;
            if let Some(path) = out {
                fs::write(&path, entry.fan.to_json_string() + "\n")
                    .map_err(|e| Failure::Check(format!("{}: {e}", path.display())))?;
            }
            let summary = format!(
                "{name}: dimension {}, Picard number {}, projective {}",
                entry.notes.dim, entry.notes.rho, entry.notes.projective
            );
            Ok(Outcome::ok(entry.to_json(), summary))
        }
    }
}

fn check(f: &Fan) -> Result<Outcome, Failure> {
    let v = f.validate();
    let mut report = json!({
        "dim": f.dim(),
        "smooth": v.smooth,
        "complete": v.complete,
        "proper": v.proper,
        "rho": f.picard_number(),
    });
    if !v.is_valid() {
        report["failures"] = json!(v.failures);
        return Ok(Outcome {
            summary: format!("invalid fan: {}", v.failures.join("; ")),
            report,
            code: EXIT_CHECK_FAILED,
        });
    }
    let verdict = MoriCone::new(f)?.is_projective()?;
    report["projective"] = json!(verdict.projective);
    report["fano"] = json!(is_fano(f)?);
    report["verdict"] = verdict.to_json();
    let summary = format!(
        "smooth, complete; rho = {}; {}",
        f.picard_number(),
        if verdict.projective {
            "projective"
        } else {
            "not projective"
        }
    );
    Ok(Outcome::ok(report, summary))
}

fn mori(f: &Fan) -> Result<Outcome, Failure> {
    let cone = MoriCone::new(f)?;
    let mut walls = Vec::new();
    for rel in cone.relations() {
        let extremal = cone.is_extremal(&rel.wall)?;
        let mut w = rel.to_json();
        w["anticanonical_degree"] = crate::fan::bigint_to_json(&anticanonical_degree(rel));
        w["extremal"] = json!(extremal);
        if extremal {
            w["contraction"] = cone.classify_contraction(&rel.wall)?.to_json();
        }
        walls.push(w);
    }
    let relations = cone.relations();
    let generators: Vec<Value> = cone
        .generators()
        .iter()
        .map(|g| {
            let idx: Vec<usize> = g
                .walls
                .iter()
                .map(|w| {
                    relations
                        .iter()
                        .position(|r| &r.wall == w)
                        .expect("generator wall")
                })
                .collect();
            json!({"class": g.class.to_json(), "walls": idx})
        })
        .collect();
    let verdict = cone.is_projective()?;
    let summary = format!(
        "{} walls, {} distinct classes, {} Mori-extremal rays",
        relations.len(),
        generators.len(),
        cone.mori_extremal_ray_count()?
    );
    let report = json!({
        "walls": walls,
        "generators": generators,
        "projectivity": verdict.to_json(),
    });
    Ok(Outcome::ok(report, summary))
}
