//! CSV, JSON and SVG export of trajectories.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{FlowConfig, ParticleState, Trajectory, TrajectoryClass};
use crate::scalar::Real;

/// Significant digits of CSV numbers.
pub const CSV_DIGITS: usize = 12;

/// `%g`-style formatting with `digits` significant digits: fixed notation for
/// decimal exponents in `[-4, digits)`, scientific otherwise, trailing zeros
/// removed.
pub fn format_g(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { "-" } else { "+" };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, v)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// CSV with header `t,x,z,u,v` and one row per sample.
pub fn export_csv<T: Real>(trajectory: &Trajectory<T>) -> Result<Vec<u8>> {
    if trajectory.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let mut out = String::with_capacity(64 * (trajectory.len() + 1));
    out.push_str("t,x,z,u,v\n");
    for s in &trajectory.samples {
        let row = [s.t, s.x, s.z, s.u, s.v].map(|v| format_g(v.as_f64(), CSV_DIGITS));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out.into_bytes())
}

/// Rows of a CSV produced by [`export_csv`].
pub fn parse_csv(bytes: &[u8]) -> Result<Vec<[f64; 5]>> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| Error::InvalidArgument(format!("CSV is not UTF-8: {e}")))?;
    let mut lines = text.lines();
    if lines.next() != Some("t,x,z,u,v") {
        return Err(Error::InvalidArgument(
            "missing CSV header t,x,z,u,v".into(),
        ));
    }
    lines
        .map(|line| {
            let mut row = [0.0; 5];
            let mut fields = line.split(',');
            for slot in row.iter_mut() {
                let f = fields
                    .next()
                    .ok_or_else(|| Error::InvalidArgument(format!("short CSV row: {line}")))?;
                *slot = f
                    .parse()
                    .map_err(|e| Error::InvalidArgument(format!("bad number {f}: {e}")))?;
            }
            if fields.next().is_some() {
                return Err(Error::InvalidArgument(format!("long CSV row: {line}")));
            }
            Ok(row)
        })
        .collect()
}

/// Metadata block of the JSON export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub config: FlowConfig<f64>,
    pub init: ParticleState<f64>,
    pub class: Option<TrajectoryClass>,
    pub period: Option<f64>,
    pub drift: Option<f64>,
}

/// The JSON export: `{meta, samples: [[t, x, z, u, v], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryDocument {
    pub meta: TrajectoryMeta,
    pub samples: Vec<[f64; 5]>,
}

impl TrajectoryDocument {
    pub fn from_trajectory<T: Real>(trajectory: &Trajectory<T>) -> Self {
        let c = &trajectory.config;
        Self {
            meta: TrajectoryMeta {
                config: FlowConfig {
                    c0: c.c0.as_f64(),
                    omega0: c.omega0.as_f64(),
                    g: c.g.as_f64(),
                    h0: c.h0.as_f64(),
                    shear: c.shear.as_f64(),
                },
                init: ParticleState {
                    x0: trajectory.init.x0.as_f64(),
                    z0: trajectory.init.z0.as_f64(),
                },
                class: trajectory.class.clone(),
                period: trajectory.period.map(|v| v.as_f64()),
                drift: trajectory.drift.map(|v| v.as_f64()),
            },
            samples: trajectory
                .samples
                .iter()
                .map(|s| [s.t, s.x, s.z, s.u, s.v].map(|v| v.as_f64()))
                .collect(),
        }
    }
}

/// JSON export; numbers use the shortest representation that parses back to
/// the same `f64`.
pub fn export_json<T: Real>(trajectory: &Trajectory<T>) -> Result<Vec<u8>> {
    if trajectory.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let doc = TrajectoryDocument::from_trajectory(trajectory);
    let mut out = serde_json::to_vec(&doc)
        .map_err(|e| Error::InvalidArgument(format!("JSON encoding failed: {e}")))?;
    out.push(b'\n');
    Ok(out)
}

pub fn parse_json(bytes: &[u8]) -> Result<TrajectoryDocument> {
    serde_json::from_slice(bytes).map_err(|e| Error::InvalidArgument(format!("bad JSON: {e}")))
}

/// SVG plot of the `(x, z)` path: one polyline, `z` upward, 5% margin, and
/// the class name in a text element.
pub fn export_svg<T: Real>(trajectory: &Trajectory<T>) -> Result<Vec<u8>> {
    if trajectory.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let pts: Vec<(f64, f64)> = trajectory
        .samples
        .iter()
        .map(|s| (s.x.as_f64(), s.z.as_f64()))
        .collect();
    let (mut xmin, mut xmax, mut zmin, mut zmax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, z) in &pts {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        zmin = zmin.min(z);
        zmax = zmax.max(z);
    }
    let span = |lo: f64, hi: f64| {
        let w = hi - lo;
        if w > 1e-12 * lo.abs().max(hi.abs()).max(1.0) {
            w
        } else {
            1.0
        }
    };
    let (w, h) = (span(xmin, xmax), span(zmin, zmax));
    let (mx, mz) = (0.05 * w, 0.05 * h);
    let (vx, vy, vw, vh) = (xmin - mx, -(zmax + mz), w + 2.0 * mx, h + 2.0 * mz);
    let g = |v: f64| format_g(v, CSV_DIGITS);
    let points: Vec<String> = pts
        .iter()
        .map(|&(x, z)| format!("{},{}", g(x), g(-z)))
        .collect();
    let label = trajectory
        .class
        .as_ref()
        .map(|c| c.kind.name())
        .unwrap_or("unclassified");
    let font = 0.04 * vh.min(vw);
    let svg = format!(
        concat!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" ",
            "width=\"800\" height=\"600\" preserveAspectRatio=\"none\">\n",
            "  <polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" ",
            "vector-effect=\"non-scaling-stroke\" points=\"{}\"/>\n",
            "  <text x=\"{}\" y=\"{}\" font-size=\"{}\" font-family=\"sans-serif\">{}</text>\n",
            "</svg>\n"
        ),
        g(vx),
        g(vy),
        g(vw),
        g(vh),
        points.join(" "),
        g(vx + 0.5 * mx),
        g(vy + font * 1.2),
        g(font),
        label
    );
    Ok(svg.into_bytes())
}
