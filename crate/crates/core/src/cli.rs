//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for domain errors, 64 for usage errors and 1 when an
//! output file cannot be written or a verification disagrees.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{FrameVector, StructureData};
use crate::geodesic::{integrate, GeodesicTrace, GeodesicVelocity};
use crate::report::{build_report, to_json_string, ReportDocument};
use crate::subalgebra::{classify, SubalgebraLabel};
use crate::surface::{initial_normal, orbit_profile_with, FrameConvention, ShapeReport};
use crate::sweep::{sweep_oracle, SweepResult};
use crate::tables::TableId;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Largest integration substep used by `profile`.
const MAX_SUBSTEP: f64 = 1e-3;

#[derive(Debug, Parser)]
#[command(
    name = "polar3",
    version,
    about = "Subgroup actions and orbit geometry of three-dimensional metric Lie groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify cohomogeneity-one and polar cohomogeneity-two actions (JSON report).
    Classify(CommonArgs),
    /// Curvature profile of the orbits of one class along its normal geodesic.
    Profile(CommonArgs),
    /// Integrate a geodesic and dump its frame components.
    Geodesic(GeodesicArgs),
    /// Print the static reference tables.
    Tables(TablesArgs),
    /// Cross-check the classification against the brute-force sphere sweep.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false, id = "family")]
pub struct FamilyArgs {
    /// Unimodular structure constants.
    #[arg(long, num_args = 3, value_names = ["L1", "L2", "L3"], allow_negative_numbers = true)]
    pub unimodular: Option<Vec<f64>>,
    /// Non-unimodular parameters.
    #[arg(long, num_args = 2, value_names = ["ALPHA", "BETA"], allow_negative_numbers = true)]
    pub nonunimodular: Option<Vec<f64>>,
}

impl FamilyArgs {
    pub fn structure(&self) -> Result<StructureData> {
        match (&self.unimodular, &self.nonunimodular) {
            (Some(l), None) => StructureData::unimodular(l[0], l[1], l[2]),
            (None, Some(p)) => StructureData::non_unimodular(p[0], p[1]),
            _ => unreachable!("clap enforces exactly one family"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Subalgebra class (e.g. h0, h1, h2, h+, h-, plane, abelian, nonabelian).
    #[arg(long)]
    pub case: Option<String>,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub t_max: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GeodesicArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Initial unit velocity; defaults to the normal of `--case`.
    #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"], allow_negative_numbers = true)]
    pub v0: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args)]
pub struct TablesArgs {
    /// One table (default: all).
    #[arg(long, value_parser = clap::builder::ValueParser::new(parse_table))]
    pub which: Option<TableId>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_table(s: &str) -> std::result::Result<TableId, String> {
    s.parse()
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Sphere grid size.
    #[arg(long, default_value_t = 5000)]
    pub n: usize,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn check_numeric(args: &CommonArgs) -> Result<()> {
    if !(args.step.is_finite() && args.step > 0.0) {
        return Err(Error::InvalidStep(args.step));
    }
    if !args.t_max.is_finite() || !args.tolerance.is_finite() || args.tolerance < 0.0 {
        return Err(Error::NonFinite);
    }
    Ok(())
}

fn resolve_case(s: &StructureData, name: &Option<String>) -> Result<Option<SubalgebraLabel>> {
    name.as_deref()
        .map(|n| SubalgebraLabel::resolve(n, s.group()))
        .transpose()
}

pub fn cmd_classify(args: &CommonArgs) -> Result<ReportDocument> {
    check_numeric(args)?;
    let s = args.family.structure()?;
    build_report(&s, args.t_max.max(0.0), args.step, args.tolerance)
}

/// `{k·step : |k·step| ≤ t_max}`, empty when `t_max < 0`.
pub fn profile_grid(t_max: f64, step: f64) -> Vec<f64> {
    if t_max < 0.0 {
        return Vec::new();
    }
    let k_max = (t_max / step * (1.0 + 1e-12)).floor() as i64;
    (-k_max..=k_max).map(|k| k as f64 * step).collect()
}

pub fn cmd_profile(args: &CommonArgs) -> Result<Vec<ShapeReport>> {
    check_numeric(args)?;
    let s = args.family.structure()?;
    let case = match resolve_case(&s, &args.case)? {
        Some(c) => c,
        None => {
            // a single class needs no --case
            let classes = classify(&s)?;
            match classes.representatives.as_slice() {
                [only] => only.label.expect("labelled"),
                _ => {
                    return Err(Error::UnknownCase(
                        "--case is required for this group".into(),
                    ))
                }
            }
        }
    };
    let grid = profile_grid(args.t_max, args.step);
    orbit_profile_with(
        &s,
        case,
        &grid,
        args.step.min(MAX_SUBSTEP),
        args.tolerance,
        FrameConvention::PerCase,
    )
}

pub fn cmd_geodesic(args: &GeodesicArgs) -> Result<GeodesicTrace> {
    let c = &args.common;
    check_numeric(c)?;
    let s = c.family.structure()?;
    let v0 = match (&args.v0, resolve_case(&s, &c.case)?) {
        (Some(v), _) => FrameVector::new(v[0], v[1], v[2]),
        (None, Some(case)) => initial_normal(&s, case)?,
        (None, None) => return Err(Error::UnknownCase("give --v0 or --case".into())),
    };
    integrate(&s, &GeodesicVelocity::at(0.0, v0), c.t_max, c.step)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub input: StructureData,
    pub multiplicity: usize,
    pub sweep_classes: usize,
    pub sweep_clusters: usize,
    pub max_residual: f64,
    /// Sweep class of each classified representative (`null` when not found).
    pub representative_classes: Vec<Option<usize>>,
    pub agree: bool,
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<VerifySummary> {
    let s = args.family.structure()?;
    let classes = classify(&s)?;
    let sweep: SweepResult = sweep_oracle(&s, args.n)?;
    let representative_classes: Vec<Option<usize>> = classes
        .representatives
        .iter()
        .map(|r| {
            sweep
                .cluster_of(&r.normal())
                .map(|i| sweep.clusters[i].class)
        })
        .collect();
    let mut seen: Vec<usize> = representative_classes.iter().flatten().copied().collect();
    seen.sort_unstable();
    seen.dedup();
    let agree = sweep.class_count() == classes.multiplicity
        && seen.len() == classes.multiplicity
        && representative_classes.iter().all(|c| c.is_some());
    Ok(VerifySummary {
        input: s,
        multiplicity: classes.multiplicity,
        sweep_classes: sweep.class_count(),
        sweep_clusters: sweep.clusters.len(),
        max_residual: sweep.max_residual,
        representative_classes,
        agree,
    })
}

pub fn profile_csv(reports: &[ShapeReport]) -> String {
    let mut out = String::from("t,k1,k2,mean,minimal,totally_geodesic\n");
    for r in reports {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.t,
            r.principal_curvatures.0,
            r.principal_curvatures.1,
            r.mean_curvature,
            r.minimal,
            r.totally_geodesic
        )
        .unwrap();
    }
    out
}

pub fn trace_csv(trace: &GeodesicTrace) -> String {
    let mut out = String::from("t,x,y,z,norm_drift\n");
    for v in &trace.samples {
        writeln!(out, "{},{},{},{},{}", v.t, v.x, v.y, v.z, v.norm_drift()).unwrap();
    }
    out
}

fn verify_text(v: &VerifySummary) -> String {
    let mut out = String::new();
    writeln!(out, "input: {}", v.input).unwrap();
    writeln!(out, "classified classes: {}", v.multiplicity).unwrap();
    writeln!(
        out,
        "sweep clusters: {} (classes after automorphisms: {})",
        v.sweep_clusters, v.sweep_classes
    )
    .unwrap();
    writeln!(out, "max residual: {:e}", v.max_residual).unwrap();
    for (i, c) in v.representative_classes.iter().enumerate() {
        match c {
            Some(c) => writeln!(out, "representative {i}: sweep class {c}").unwrap(),
            None => writeln!(out, "representative {i}: not found by sweep").unwrap(),
        }
    }
    writeln!(out, "{}", if v.agree { "agree" } else { "DISAGREE" }).unwrap();
    out
}

fn emit(out: &Option<PathBuf>, text: &str) -> std::result::Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| e.to_string())
        }
    }
}

enum Failure {
    Domain(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn dispatch(cli: &Cli) -> std::result::Result<(String, Option<PathBuf>, bool), Failure> {
    let forbid_csv = |f: Option<Format>, what: &str| match f {
        Some(Format::Csv) => Err(Failure::Usage(format!("{what} has no CSV output"))),
        _ => Ok(()),
    };
    Ok(match &cli.command {
        Command::Classify(a) => {
            forbid_csv(a.format, "classify")?;
            (to_json_string(&cmd_classify(a)?), a.out.clone(), true)
        }
        Command::Profile(a) => {
            let reports = cmd_profile(a)?;
            let text = match a.format.unwrap_or(Format::Csv) {
                Format::Csv => profile_csv(&reports),
                Format::Json => to_json_string(&reports),
            };
            (text, a.out.clone(), true)
        }
        Command::Geodesic(a) => {
            let trace = cmd_geodesic(a)?;
            let text = match a.common.format.unwrap_or(Format::Csv) {
                Format::Csv => trace_csv(&trace),
                Format::Json => to_json_string(&trace),
            };
            (text, a.common.out.clone(), true)
        }
        Command::Tables(a) => {
            let ids: Vec<TableId> = match a.which {
                Some(id) => vec![id],
                None => TableId::ALL.to_vec(),
            };
            let doc = serde_json::json!({
                "schema_version": crate::report::SCHEMA_VERSION,
                "tables": ids.iter().map(|t| t.load()).collect::<Vec<_>>(),
            });
            (to_json_string(&doc), a.out.clone(), true)
        }
        Command::Verify(a) => {
            forbid_csv(a.format, "verify")?;
            let v = cmd_verify(a)?;
            let text = match a.format {
                Some(Format::Json) => to_json_string(&v),
                _ => verify_text(&v),
            };
            (text, a.out.clone(), v.agree)
        }
    })
}

/// Parse `args` (including the program name), run the command and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok((text, out, ok)) => match emit(&out, &text) {
            Ok(()) if ok => EXIT_OK,
            Ok(()) => EXIT_FAILURE,
            Err(msg) => {
                eprintln!("error: {msg}");
                EXIT_FAILURE
            }
        },
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            EXIT_DOMAIN
        }
    }
}
