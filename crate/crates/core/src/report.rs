//! Machine-readable reports and their diff-stable JSON encoding.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;
use crate::frame::StructureData;
use crate::polarity::{classify_polar_c2, PolarAction};
use crate::subalgebra::{classify, ClassificationResult, SubalgebraLabel};
use crate::surface::{orbit_profile_with, FrameConvention, ShapeReport};

pub const SCHEMA_VERSION: &str = "1.0";

/// Number of curvature samples per case in a report.
pub const REPORT_SAMPLES: usize = 11;

/// Sampled curvature data for one cohomogeneity-one class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSummary {
    pub case: SubalgebraLabel,
    pub t: Vec<f64>,
    pub k1: Vec<f64>,
    pub k2: Vec<f64>,
    pub mean: Vec<f64>,
    pub all_minimal: bool,
    pub constant_mean_curvature: bool,
    /// Sample times whose orbit is totally geodesic.
    pub totally_geodesic_at: Vec<f64>,
    /// Mean curvature strictly monotone along the samples.
    pub mean_strictly_monotone: bool,
}

impl ProfileSummary {
    pub fn from_reports(case: SubalgebraLabel, reports: &[ShapeReport], tol: f64) -> Self {
        let mean: Vec<f64> = reports.iter().map(|r| r.mean_curvature).collect();
        let increasing = mean.windows(2).all(|w| w[1] > w[0]);
        let decreasing = mean.windows(2).all(|w| w[1] < w[0]);
        let constant = mean.iter().all(|m| (m - mean[0]).abs() <= tol);
        ProfileSummary {
            case,
            t: reports.iter().map(|r| r.t).collect(),
            k1: reports.iter().map(|r| r.principal_curvatures.0).collect(),
            k2: reports.iter().map(|r| r.principal_curvatures.1).collect(),
            all_minimal: reports.iter().all(|r| r.minimal),
            constant_mean_curvature: !mean.is_empty() && constant,
            totally_geodesic_at: reports
                .iter()
                .filter(|r| r.totally_geodesic)
                .map(|r| r.t)
                .collect(),
            mean_strictly_monotone: mean.len() > 1 && (increasing || decreasing),
            mean,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub input: StructureData,
    pub classification: ClassificationResult,
    pub polar_c2: Vec<PolarAction>,
    pub profiles: Vec<ProfileSummary>,
}

/// `n` equally spaced points on `[-t_max, t_max]` (just `0` when `t_max = 0`).
pub fn symmetric_grid(t_max: f64, n: usize) -> Vec<f64> {
    if t_max < 0.0 || n == 0 {
        return Vec::new();
    }
    if t_max == 0.0 || n == 1 {
        return vec![0.0];
    }
    let h = 2.0 * t_max / (n - 1) as f64;
    (0..n)
        .map(|k| {
            if 2 * k + 1 == n {
                0.0
            } else {
                -t_max + h * k as f64
            }
        })
        .collect()
}

/// Classification, polar actions and sampled orbit geometry for one structure.
pub fn build_report(s: &StructureData, t_max: f64, step: f64, tol: f64) -> Result<ReportDocument> {
    let classification = classify(s)?;
    let polar_c2 = classify_polar_c2(s)?;
    let grid = symmetric_grid(t_max, REPORT_SAMPLES);
    let mut profiles = Vec::new();
    for rep in &classification.representatives {
        let case = rep.label.expect("classified planes are labelled");
        let reports = orbit_profile_with(s, case, &grid, step, tol, FrameConvention::PerCase)?;
        profiles.push(ProfileSummary::from_reports(case, &reports, tol));
    }
    Ok(ReportDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        input: *s,
        classification,
        polar_c2,
        profiles,
    })
}

/// Pretty JSON with sorted keys and floats written with 17 significant digits.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report types serialize to JSON");
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    out
}

pub fn report_from_json(text: &str) -> serde_json::Result<ReportDocument> {
    serde_json::from_str(text)
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat_n(' ', n));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                write!(out, "{i}").unwrap();
            } else if let Some(u) = n.as_u64() {
                write!(out, "{u}").unwrap();
            } else {
                write!(out, "{:.16e}", n.as_f64().expect("finite number")).unwrap();
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                pad(out, indent + 2);
                write_value(out, item, indent + 2);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            for (k, key) in keys.iter().enumerate() {
                pad(out, indent + 2);
                out.push_str(&serde_json::to_string(key).expect("key"));
                out.push_str(": ");
                write_value(out, &map[*key], indent + 2);
                out.push_str(if k + 1 < keys.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
    }
}
