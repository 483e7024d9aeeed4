//! The `irjoint` command line.
//!
//! Every subcommand reads a spec document (or flags), prints JSON to stdout
//! unless an output path is given, and reports failures on stderr as
//! `{"error": {"kind", "module", "message"}}`. Exit status is 0 on success,
//! 1 for domain and file errors, 2 for usage and schema errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::chain::{self, JointAngle, SimulationMode};
use crate::io::{self, DocumentError, SpecDocument};
use crate::joint::BendingDirection;
use crate::reduce::{self, DEFAULT_WINDOW_FRACTION};
use crate::search;
use crate::section::{stiffness_ratio, SectionSpec};
use crate::tendon;
use crate::units::{parse_quantity, Dimension};
use crate::Error;

#[derive(Debug, Parser)]
#[command(name = "irjoint", version, about = "Inflated rotational joint models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Maximum restoring and wrinkle-onset moments of a section.
    Mmax(MmaxArgs),
    /// Sampled moment-rotation curve of a joint as CSV.
    MomentCurve(CurveArgs),
    /// Lever arm and buckle threshold for one route, or a servo routing sweep.
    Tendon(TendonArgs),
    /// Quasi-static tension ramp of a chain.
    Sequence(SequenceArgs),
    /// Plate frames of a chain at given joint angles, as CSV.
    Shape(ShapeArgs),
    /// Plateau, pressure scaling and law fits of measured curves.
    Fit(FitArgs),
    /// Enumerate chain designs that buckle in a target order.
    Search(SearchArgs),
}

fn length(s: &str) -> Result<f64, String> {
    parse_quantity(s, Dimension::Length).map_err(|e| e.to_string())
}
fn pressure(s: &str) -> Result<f64, String> {
    parse_quantity(s, Dimension::Pressure).map_err(|e| e.to_string())
}
fn angle(s: &str) -> Result<f64, String> {
    parse_quantity(s, Dimension::Angle).map_err(|e| e.to_string())
}
fn force(s: &str) -> Result<f64, String> {
    parse_quantity(s, Dimension::Force).map_err(|e| e.to_string())
}
fn fraction(s: &str) -> Result<f64, String> {
    parse_quantity(s, Dimension::Dimensionless).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
struct SpecArgs {
    /// JSON spec document.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MmaxArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Section name in the spec.
    #[arg(long)]
    section: Option<String>,
    /// Joint name in the spec; reports the moment along --direction too.
    #[arg(long, conflicts_with = "section")]
    joint: Option<String>,
    #[arg(long, value_parser = angle, requires = "joint")]
    direction: Option<f64>,
    #[arg(long, value_parser = length)]
    radius: Option<f64>,
    #[arg(long, value_parser = length)]
    thickness: Option<f64>,
    #[arg(long, value_parser = pressure)]
    pressure: Option<f64>,
    #[arg(long, value_parser = angle, conflicts_with_all = ["theta1", "tape_width"])]
    delta_theta: Option<f64>,
    #[arg(long, value_parser = angle, requires = "theta2")]
    theta1: Option<f64>,
    #[arg(long, value_parser = angle, requires = "theta1")]
    theta2: Option<f64>,
    #[arg(long, value_parser = length, conflicts_with = "theta1")]
    tape_width: Option<f64>,
}

#[derive(Debug, Args)]
struct CurveArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long)]
    joint: Option<String>,
    /// Deflection direction from the soft plane.
    #[arg(long, value_parser = angle, default_value = "0")]
    direction: f64,
    /// Samples from zero to the rotation limit.
    #[arg(long, default_value_t = 101)]
    points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TendonArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long)]
    joint: Option<String>,
    #[arg(long, conflicts_with = "sweep")]
    route: Option<String>,
    /// Sweep servo angle pairs instead of a single route.
    #[arg(long)]
    sweep: bool,
    /// Servo horn radius for the sweep.
    #[arg(long, value_parser = length, requires = "sweep")]
    anchor_radius: Option<f64>,
    /// Servo angle step for the sweep.
    #[arg(long, value_parser = angle, default_value = "20deg")]
    step: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Coupled,
    Independent,
}

impl From<ModeArg> for SimulationMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Coupled => SimulationMode::Coupled,
            ModeArg::Independent => SimulationMode::Independent,
        }
    }
}

#[derive(Debug, Args)]
struct SequenceArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long)]
    chain: Option<String>,
    #[arg(long, value_parser = force)]
    max_tension: f64,
    #[arg(long, value_enum, default_value = "coupled")]
    mode: ModeArg,
    /// Grasp energy of the ramp is added to the report.
    #[arg(long)]
    energy: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Final plate frames as CSV.
    #[arg(long)]
    frames: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ShapeArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long)]
    chain: Option<String>,
    /// Comma-separated joint angles, one per unit.
    #[arg(long, value_delimiter = ',', value_parser = angle)]
    angles: Vec<f64>,
    /// Comma-separated deflection directions; soft plane if omitted.
    #[arg(long, value_delimiter = ',', value_parser = angle)]
    directions: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Measurement set name in the spec.
    #[arg(long)]
    set: Option<String>,
    #[arg(long, value_parser = fraction, default_value_t = DEFAULT_WINDOW_FRACTION)]
    window: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long)]
    problem: Option<String>,
    /// Keep only the best solutions.
    #[arg(long)]
    top: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Schema(String),
    Io { path: PathBuf, source: std::io::Error },
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        match e {
            DocumentError::Missing { .. } | DocumentError::Ambiguous { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Schema(e.to_string()),
        }
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) | Failure::Schema(_) => 2,
            Failure::Io { .. } | Failure::Domain(_) => 1,
        }
    }

    fn to_json(&self) -> serde_json::Value {
        let (kind, module, message) = match self {
            Failure::Usage(m) => ("usage", "cli_io", m.clone()),
            Failure::Schema(m) => ("schema", "cli_io", m.clone()),
            Failure::Io { path, source } => ("io", "cli_io", format!("{}: {source}", path.display())),
            Failure::Domain(e) => (e.kind(), e.module().as_str(), e.to_string()),
        };
        json!({"error": {"kind": kind, "module": module, "message": message}})
    }
}

type Outcome = Result<(), Failure>;

/// Runs the command line and returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "{}", f.to_json());
            f.exit_code()
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Outcome {
    match command {
        Command::Mmax(a) => mmax(a, stdout),
        Command::MomentCurve(a) => moment_curve(a, stdout),
        Command::Tendon(a) => tendon_cmd(a, stdout),
        Command::Sequence(a) => sequence(a, stdout),
        Command::Shape(a) => shape(a, stdout),
        Command::Fit(a) => fit(a, stdout),
        Command::Search(a) => search_cmd(a, stdout),
    }
}

fn load(spec: &SpecArgs) -> Result<SpecDocument, Failure> {
    let path = spec
        .spec
        .as_ref()
        .ok_or_else(|| Failure::Usage("--spec is required".into()))?;
    let text = fs::read_to_string(path).map_err(|source| Failure::Io {
        path: path.clone(),
        source,
    })?;
    Ok(SpecDocument::parse(&text)?)
}

fn write_file(path: &Path, bytes: &[u8]) -> Outcome {
    fs::write(path, bytes).map_err(|source| Failure::Io {
        path: path.to_owned(),
        source,
    })
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>, stdout: &mut dyn Write) -> Outcome {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    match out {
        Some(p) => write_file(p, text.as_bytes()),
        None => stdout.write_all(text.as_bytes()).map_err(|source| Failure::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn emit_csv(
    out: Option<&Path>,
    stdout: &mut dyn Write,
    write: impl FnOnce(&mut Vec<u8>) -> csv::Result<()>,
) -> Outcome {
    let mut buf = Vec::new();
    write(&mut buf).expect("CSV into memory");
    match out {
        Some(p) => write_file(p, &buf),
        None => stdout.write_all(&buf).map_err(|source| Failure::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn mmax(a: MmaxArgs, stdout: &mut dyn Write) -> Outcome {
    let geometry = a.radius.is_some() || a.thickness.is_some() || a.pressure.is_some();
    let (section, joint) = if let Some(name) = &a.joint {
        let doc = load(&a.spec)?;
        let (_, j) = io::select(&doc.joints, "joint", Some(name))?;
        (j.section, Some(*j))
    } else if a.spec.spec.is_some() && !geometry {
        let doc = load(&a.spec)?;
        (*io::select(&doc.sections, "section", a.section.as_deref())?.1, None)
    } else {
        let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| Failure::Usage(format!("{flag} is required")));
        let (r, t, p) = (
            need(a.radius, "--radius")?,
            need(a.thickness, "--thickness")?,
            need(a.pressure, "--pressure")?,
        );
        let s = match (a.delta_theta, a.theta1.zip(a.theta2), a.tape_width) {
            (Some(d), _, _) => SectionSpec::symmetric(r, t, p, d)?,
            (_, Some((t1, t2)), _) => SectionSpec::new(r, t, p, t1, t2)?,
            (_, _, Some(w)) => SectionSpec::from_tape_width(r, t, p, w)?,
            _ => SectionSpec::isotropic(r, t, p)?,
        };
        (s, None)
    };
    let mut report = json!({
        "moment_unit": section.moment_unit(),
        "max_restoring_moment": section.max_restoring_moment(),
        "wrinkle_onset_moment": section.wrinkle_onset_moment(),
        "theta1": section.theta1,
        "theta2": section.theta2,
        "delta_theta": section.delta_theta(),
        "stiffness_ratio": stiffness_ratio(section.delta_theta())?,
    });
    if let Some(j) = joint {
        let dir = BendingDirection::new(a.direction.unwrap_or(0.0));
        report["direction"] = json!(dir.psi());
        report["directional_max_moment"] = json!(j.directional_max_moment(dir));
        report["directional_onset_moment"] = json!(j.directional_onset_moment(dir));
        report["rotation_limit"] = json!(j.rotation_limit());
    }
    emit_json(&report, None, stdout)
}

fn moment_curve(a: CurveArgs, stdout: &mut dyn Write) -> Outcome {
    if a.points < 2 {
        return Err(Failure::Usage("--points must be at least 2".into()));
    }
    let doc = load(&a.spec)?;
    let (_, joint) = io::select(&doc.joints, "joint", a.joint.as_deref())?;
    let dir = BendingDirection::new(a.direction);
    let limit = joint.rotation_limit();
    let pts = (0..a.points)
        .map(|i| {
            let phi = limit * i as f64 / (a.points - 1) as f64;
            Ok((phi, joint.restoring_moment_curve(dir, phi)?))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    emit_csv(a.out.as_deref(), stdout, |buf| io::write_curve_csv(buf, &pts))
}

fn tendon_cmd(a: TendonArgs, stdout: &mut dyn Write) -> Outcome {
    let doc = load(&a.spec)?;
    let (_, joint) = io::select(&doc.joints, "joint", a.joint.as_deref())?;
    if a.sweep {
        if a.step.is_nan() || a.step <= 0.0 {
            return Err(Failure::Usage("--step must be positive".into()));
        }
        let grid = tendon::servo_grid(a.step.to_degrees());
        let radius = a.anchor_radius.unwrap_or(0.5 * joint.section.radius);
        let entries = tendon::routing_sweep(joint, &grid, &grid, radius)?;
        return emit_csv(a.out.as_deref(), stdout, |buf| io::write_sweep_csv(buf, &entries));
    }
    let (name, route) = io::select(&doc.routes, "route", a.route.as_deref())?;
    let lever = tendon::unit_tension_moment(joint, route)?;
    let threshold = tendon::threshold_for_lever(joint, &lever);
    let report = json!({"route": name, "lever": lever, "threshold": threshold});
    emit_json(&report, a.out.as_deref(), stdout)
}

fn sequence(a: SequenceArgs, stdout: &mut dyn Write) -> Outcome {
    let doc = load(&a.spec)?;
    let (_, chain) = io::select(&doc.chains, "chain", a.chain.as_deref())?;
    let report = chain::simulate_ramp(chain, a.max_tension, a.mode.into())?;
    if let Some(path) = &a.frames {
        emit_csv(Some(path), stdout, |buf| io::write_frames_csv(buf, &report.final_shape))?;
    }
    if a.energy {
        let mut value = serde_json::to_value(&report).expect("reports serialize");
        value["energy"] = json!(chain::grasp_energy(chain, &report)?);
        return emit_json(&value, a.out.as_deref(), stdout);
    }
    emit_json(&report, a.out.as_deref(), stdout)
}

fn shape(a: ShapeArgs, stdout: &mut dyn Write) -> Outcome {
    let doc = load(&a.spec)?;
    let (_, chain) = io::select(&doc.chains, "chain", a.chain.as_deref())?;
    if a.angles.len() != chain.len() {
        return Err(Failure::Usage(format!(
            "--angles has {} values for {} units",
            a.angles.len(),
            chain.len()
        )));
    }
    if !a.directions.is_empty() && a.directions.len() != chain.len() {
        return Err(Failure::Usage(format!(
            "--directions has {} values for {} units",
            a.directions.len(),
            chain.len()
        )));
    }
    let angles: Vec<JointAngle> = a
        .angles
        .iter()
        .enumerate()
        .map(|(i, &angle)| JointAngle {
            angle,
            direction: BendingDirection::new(a.directions.get(i).copied().unwrap_or(0.0)),
        })
        .collect();
    let frames = chain::forward_kinematics(chain, &angles)?;
    emit_csv(a.out.as_deref(), stdout, |buf| io::write_frames_csv(buf, &frames))
}

fn fit(a: FitArgs, stdout: &mut dyn Write) -> Outcome {
    let doc = load(&a.spec)?;
    let (name, set) = io::select(&doc.measurements, "measurement set", a.set.as_deref())?;
    let curves = set
        .iter()
        .map(|m| {
            let law = reduce::fit_joint_law(&m.curve, a.window)?;
            Ok(json!({"pressure": m.pressure, "plateau": law.plateau, "law": {
                "elastic_slope": law.elastic_slope,
                "plateau_onset_angle": law.plateau_onset_angle,
            }}))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let pressured: Vec<(f64, reduce::MeasuredCurve)> = set
        .iter()
        .filter_map(|m| m.pressure.map(|p| (p, m.curve.clone())))
        .collect();
    let scaling = if pressured.len() == set.len() && !set.is_empty() {
        Some(reduce::fit_pressure_scaling(&pressured, a.window)?)
    } else {
        None
    };
    let report = json!({
        "set": name,
        "window_fraction": a.window,
        "curves": curves,
        "pressure_scaling": scaling,
    });
    emit_json(&report, a.out.as_deref(), stdout)
}

fn search_cmd(a: SearchArgs, stdout: &mut dyn Write) -> Outcome {
    let doc = load(&a.spec)?;
    let (_, problem) = io::select(&doc.problems, "problem", a.problem.as_deref())?;
    let mut solutions = search::enumerate_designs(problem)?;
    if let Some(k) = a.top {
        solutions.truncate(k);
    }
    emit_json(&solutions, a.out.as_deref(), stdout)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("irjoint").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn mmax_from_flags() {
        let (code, out, _) = run_args(&[
            "mmax",
            "--radius",
            "33.5mm",
            "--thickness",
            "50um",
            "--pressure",
            "6.89kPa",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(format!("{:.4}", v["max_restoring_moment"].as_f64().unwrap()), "0.8138");
    }

    #[test]
    fn usage_errors_exit_two() {
        let (code, _, err) = run_args(&["frobnicate"]);
        assert_eq!(code, 2);
        assert!(err.contains("Usage"));
        let (code, _, _) = run_args(&["mmax", "--radius", "3 furlongs"]);
        assert_eq!(code, 2);
        let (code, _, err) = run_args(&["mmax", "--radius", "1cm"]);
        assert_eq!(code, 2);
        assert!(err.contains("\"usage\""));
    }

    #[test]
    fn domain_errors_exit_one() {
        let (code, _, err) = run_args(&["mmax", "--radius=-1mm", "--thickness", "50um", "--pressure", "1kPa"]);
        assert_eq!(code, 1);
        let v: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"]["module"], "section_mechanics");
    }

    #[test]
    fn missing_file_is_io() {
        let (code, _, err) = run_args(&["search", "--spec", "/nonexistent/spec.json"]);
        assert_eq!(code, 1);
        assert!(err.contains("\"io\""));
    }
}
