use std::fmt::Write as _;

use super::cases::{run_case, CaseResult};
use super::config::CaseConfig;
use crate::error::{Error, Result};
use crate::par;
use crate::stability::CflRow;

/// `√(Σ(u − u_ex)² / Σ u_ex²)`.
pub fn l2_error(numeric: &[f64], exact: &[f64]) -> Result<f64> {
    if numeric.len() != exact.len() {
        return Err(Error::Domain(format!("fields differ in length: {} vs {}", numeric.len(), exact.len())));
    }
    let den: f64 = exact.iter().map(|e| e * e).sum();
    if !(den > 0.0) {
        return Err(Error::Domain("exact field has zero norm".into()));
    }
    let num: f64 = numeric.iter().zip(exact).map(|(u, e)| (u - e) * (u - e)).sum();
    Ok((num / den).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub l2: f64,
    /// `log₂(L2(N/2) / L2(N))`; absent on the first row.
    pub rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    /// Build rows from `(N, L2)` pairs, filling in the observed orders.
    pub fn from_errors(errors: &[(usize, f64)]) -> Self {
        let rows = errors
            .iter()
            .enumerate()
            .map(|(i, &(n, l2))| ConvergenceRow { n, l2, rate: (i > 0).then(|| (errors[i - 1].1 / l2).log2()) })
            .collect();
        Self { rows }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnudsenRow {
    /// Kinetic speed at the final time.
    pub a: f64,
    pub epsilon: f64,
    pub l2: f64,
    /// Consistency order between this and the previous row, `ln(L2ratio)/ln(εratio)`.
    pub rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct KnudsenReport {
    pub rows: Vec<KnudsenRow>,
}

impl KnudsenReport {
    pub fn from_rows(points: &[(f64, f64, f64)]) -> Self {
        let rows = points
            .iter()
            .enumerate()
            .map(|(i, &(a, epsilon, l2))| {
                let rate = (i > 0).then(|| {
                    let (_, e0, l0) = points[i - 1];
                    (l0 / l2).ln() / (e0 / epsilon).ln()
                });
                KnudsenRow { a, epsilon, l2, rate }
            })
            .collect();
        Self { rows }
    }
}

fn error_of(result: &CaseResult) -> Result<f64> {
    result.l2.ok_or_else(|| Error::Unsupported("case has no reference solution".into()))
}

/// Run the case once per mesh size and tabulate the errors.
/// Cases run concurrently; rows come back in mesh order.
pub fn convergence_study(template: &CaseConfig, meshes: &[usize]) -> Result<ConvergenceReport> {
    if meshes.len() < 2 {
        return Err(Error::Config("a convergence study needs at least two meshes".into()));
    }
    for w in meshes.windows(2) {
        if w[1] != 2 * w[0] {
            return Err(Error::Config(format!("meshes must double: {} is followed by {}", w[0], w[1])));
        }
    }
    let results = par::map_collect(meshes.len(), |i| {
        let mut cfg = template.clone();
        cfg.grid.n = Some(meshes[i]);
        run_case(&cfg).and_then(|r| error_of(&r))
    });
    let errors = meshes.iter().zip(results).map(|(&n, r)| r.map(|e| (n, e))).collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport::from_errors(&errors))
}

/// Vary the kinetic speed at fixed mesh. `speeds` are values of `a` for
/// constant-speed cases and of the ratio for adaptive ones.
pub fn knudsen_sweep(template: &CaseConfig, speeds: &[f64]) -> Result<KnudsenReport> {
    if speeds.is_empty() {
        return Err(Error::Config("no speeds given".into()));
    }
    if template.run.ell.is_none() {
        return Err(Error::Config("a Knudsen sweep needs `run.ell`".into()));
    }
    let adaptive = template.wave.ratio.is_some();
    let results = par::map_collect(speeds.len(), |i| {
        let mut cfg = template.clone();
        if adaptive {
            cfg.wave.ratio = Some(speeds[i]);
        } else {
            cfg.wave.a = Some(speeds[i]);
        }
        run_case(&cfg).and_then(|r| {
            let eps = r.epsilon.expect("ell checked above");
            Ok((r.trajectory.final_state.a, eps, error_of(&r)?))
        })
    });
    let points = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(KnudsenReport::from_rows(&points))
}

/// Output layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "text" | "table" => Ok(Format::Text),
            _ => Err(Error::Config(format!("unknown format `{s}` (csv or text)"))),
        }
    }
}

/// Eight significant digits: fixed notation for moderate magnitudes, scientific otherwise.
pub fn sig8(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    if (-3..7).contains(&e) {
        format!("{:.*}", (7 - e) as usize, x)
    } else {
        format!("{x:.7e}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(sig8).unwrap_or_default()
}

/// Render rows either as CSV or as a right-aligned text table.
fn layout(header: &[&str], rows: &[Vec<String>], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str(&header.join(","));
            out.push('\n');
            for r in rows {
                out.push_str(&r.join(","));
                out.push('\n');
            }
        }
        Format::Text => {
            let mut w: Vec<usize> = header.iter().map(|h| h.len()).collect();
            for r in rows {
                for (i, c) in r.iter().enumerate() {
                    w[i] = w[i].max(c.len());
                }
            }
            let line = |cells: &mut dyn Iterator<Item = &str>, out: &mut String| {
                let s: Vec<String> = cells.enumerate().map(|(i, c)| format!("{c:>width$}", width = w[i])).collect();
                out.push_str(s.join("  ").trim_end());
                out.push('\n');
            };
            line(&mut header.iter().copied(), &mut out);
            let total = w.iter().sum::<usize>() + 2 * w.len().saturating_sub(1);
            out.push_str(&"-".repeat(total));
            out.push('\n');
            for r in rows {
                line(&mut r.iter().map(|s| s.as_str()), &mut out);
            }
        }
    }
    out
}

/// Anything that can be written as a table.
pub trait Emit {
    fn emit(&self, format: Format) -> String;
}

impl Emit for ConvergenceReport {
    fn emit(&self, format: Format) -> String {
        let rows: Vec<Vec<String>> = self.rows.iter().map(|r| vec![r.n.to_string(), sig8(r.l2), opt(r.rate)]).collect();
        layout(&["N", "L2", "r"], &rows, format)
    }
}

impl Emit for KnudsenReport {
    fn emit(&self, format: Format) -> String {
        let rows: Vec<Vec<String>> =
            self.rows.iter().map(|r| vec![sig8(r.a), sig8(r.epsilon), sig8(r.l2), opt(r.rate)]).collect();
        layout(&["a", "epsilon", "L2", "r"], &rows, format)
    }
}

impl Emit for [CflRow] {
    fn emit(&self, format: Format) -> String {
        let m = self.iter().map(|r| r.values.len()).max().unwrap_or(0);
        let names: Vec<String> = (1..=m).map(|k| format!("M={k}")).collect();
        let mut header = vec!["order", "space"];
        header.extend(names.iter().map(|s| s.as_str()));
        let rows: Vec<Vec<String>> = self
            .iter()
            .map(|r| {
                let mut v = vec![r.order.to_string(), r.space.name().to_string()];
                v.extend(r.values.iter().map(|x| format!("{x:.2}")));
                v
            })
            .collect();
        layout(&header, &rows, format)
    }
}

impl Emit for CaseResult {
    /// Final-time profile: `x`, the conserved components, then the reference.
    fn emit(&self, format: Format) -> String {
        let states = self.trajectory.final_states();
        let p = states.first().map_or(0, |u| u.len());
        let mut header: Vec<String> = vec!["x".into()];
        header.extend((0..p).map(|c| format!("u{c}")));
        if self.exact.is_some() {
            header.extend((0..p).map(|c| format!("exact_u{c}")));
        }
        let rows: Vec<Vec<String>> = (0..states.len())
            .map(|i| {
                let mut r = vec![sig8(self.x[i])];
                r.extend(states[i].iter().map(|&v| sig8(v)));
                if let Some(ex) = &self.exact {
                    r.extend(ex[i].iter().map(|&v| sig8(v)));
                }
                r
            })
            .collect();
        let h: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
        layout(&h, &rows, format)
    }
}

/// Snapshot profiles in long form: `t,x,u0,...`.
pub fn snapshots_csv(result: &CaseResult) -> String {
    let mut out = String::new();
    let p = result.trajectory.final_states().first().map_or(0, |u| u.len());
    out.push_str("t,x");
    for c in 0..p {
        let _ = write!(out, ",u{c}");
    }
    out.push('\n');
    for s in &result.trajectory.snapshots {
        for (x, u) in result.x.iter().zip(&s.states) {
            let _ = write!(out, "{},{}", sig8(s.t), sig8(*x));
            for v in u.iter() {
                let _ = write!(out, ",{}", sig8(*v));
            }
            out.push('\n');
        }
    }
    out
}
