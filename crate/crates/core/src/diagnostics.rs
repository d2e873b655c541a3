//! Summary diagnostics for a fitted decomposition: the singular spectrum of
//! the fitted matrix, both eigenvalue sets, the top-k modes restored to
//! original spatial coordinates, and their time dynamics — exportable as
//! JSON/CSV plus a static SVG rendering of the 3×3 panel layout.

use std::io::Write as IoWrite;
use std::path::Path;

use serde_json::json;

use crate::error::{DmdError, Result, Warning};
use crate::exact::{amplitude_order, dynamics, DmdResult};
use crate::linalg::{singular_values, C64, CMat, CVec, RMat, RVec};
use crate::snapshots::{hankel_embed, load_matrix_csv, HankelConfig, SnapshotMatrix};

/// Number of leading modes included in a summary when the caller does not
/// ask for a specific count.
pub const DEFAULT_SUMMARY_K: usize = 3;

/// Data behind a diagnostic summary: everything needed to render the 3×3
/// panel grid (singular spectrum, both eigenvalue planes, k mode profiles,
/// k dynamics traces) or to re-plot with external tooling.
#[derive(Debug, Clone)]
pub struct SummaryBundle {
    /// Descending singular values of the matrix actually fitted (post-delay).
    pub singular_values: RVec,
    /// Discrete-time eigenvalues, amplitude-ordered.
    pub eigs_discrete: CVec,
    /// Continuous-time eigenvalues, amplitude-ordered.
    pub eigs_continuous: CVec,
    /// Leading k modes in original spatial coordinates (delay-0 block).
    pub selected_modes: CMat,
    /// Row j = b_j·exp(ω_j·t) over the fit grid, for the leading k modes.
    pub dynamics: CMat,
    /// All r amplitudes, amplitude-ordered.
    pub amplitudes: CVec,
    /// Permutation applied to the fit result (old index per output slot).
    pub order: Vec<usize>,
    /// Fit-grid step when uniform.
    pub dt: Option<f64>,
}

/// Permutation ordering a fit's modes by descending amplitude magnitude,
/// ties broken by descending Im(ω).
pub fn order_modes(result: &DmdResult) -> Vec<usize> {
    amplitude_order(&result.amplitudes, &result.eigs_continuous)
}

/// Assemble the summary for `result`, which was fitted on `x` after optional
/// Hankel embedding with `hankel`. Singular values are computed from the
/// embedded matrix; mode shapes are restored to the original coordinates by
/// taking the delay-0 block. `k` defaults to [`DEFAULT_SUMMARY_K`] and is
/// clamped to the fit rank with a warning.
pub fn build_summary(
    result: &DmdResult,
    x: &SnapshotMatrix,
    hankel: Option<&HankelConfig>,
    k: Option<usize>,
) -> Result<(SummaryBundle, Vec<Warning>)> {
    let d = hankel.map_or(1, |h| h.delays);
    let fitted = if d > 1 {
        hankel_embed(x, &HankelConfig::new(d)?)?
    } else {
        x.clone()
    };
    if result.modes.nrows() != fitted.n_space() {
        return Err(DmdError::Shape(format!(
            "modes have {} rows but the fitted matrix has {} (delays={d})",
            result.modes.nrows(),
            fitted.n_space()
        )));
    }
    if result.time.len() != fitted.n_time() {
        return Err(DmdError::Shape(format!(
            "fit grid has {} stamps but the fitted matrix has {} columns",
            result.time.len(),
            fitted.n_time()
        )));
    }
    let r = result.rank;
    let k_req = k.unwrap_or(DEFAULT_SUMMARY_K);
    let mut warnings = Vec::new();
    let k_eff = if k_req > r {
        warnings.push(Warning::KClamped { requested: k_req, clamped: r });
        r
    } else {
        k_req
    };

    let order = order_modes(result);
    let pick = |v: &CVec| CVec::from_fn(r, |j, _| v[order[j]]);
    let eigs_discrete = pick(&result.eigs_discrete);
    let eigs_continuous = pick(&result.eigs_continuous);
    let amplitudes = pick(&result.amplitudes);

    let n_space = x.n_space();
    let mut selected_modes = CMat::zeros(n_space, k_eff);
    for j in 0..k_eff {
        selected_modes.set_column(j, &result.modes.column(order[j]).rows(0, n_space));
    }
    let omega_k = CVec::from_fn(k_eff, |j, _| eigs_continuous[j]);
    let b_k = CVec::from_fn(k_eff, |j, _| amplitudes[j]);
    let dyn_rows = dynamics(&omega_k, &b_k, &result.time);

    Ok((
        SummaryBundle {
            singular_values: singular_values(fitted.values()),
            eigs_discrete,
            eigs_continuous,
            selected_modes,
            dynamics: dyn_rows,
            amplitudes,
            order,
            dt: result.time.uniform_step(),
        },
        warnings,
    ))
}

/// Serialize the bundle to the summary JSON schema:
/// `{singular_values, eigs_discrete, eigs_continuous, amplitudes, order, k, dt}`
/// with complex numbers as `{re, im}` objects and `dt` null on uneven grids.
pub fn summary_json(bundle: &SummaryBundle) -> serde_json::Value {
    let complex_list = |v: &CVec| {
        v.iter()
            .map(|z| json!({"re": z.re, "im": z.im}))
            .collect::<Vec<_>>()
    };
    json!({
        "singular_values": bundle.singular_values.iter().copied().collect::<Vec<f64>>(),
        "eigs_discrete": complex_list(&bundle.eigs_discrete),
        "eigs_continuous": complex_list(&bundle.eigs_continuous),
        "amplitudes": complex_list(&bundle.amplitudes),
        "order": bundle.order,
        "k": bundle.dynamics.nrows(),
        "dt": bundle.dt,
    })
}

/// Write [`summary_json`] to `path`.
pub fn write_summary_json(bundle: &SummaryBundle, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(&summary_json(bundle))
        .map_err(|e| DmdError::Numerical(format!("JSON serialization failed: {e}")))?;
    std::fs::write(path, text)?;
    Ok(())
}

/// Write a real matrix as headerless CSV, one row per line.
pub fn write_matrix_csv(m: &RMat, path: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{}", m[(i, j)])).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Write a complex matrix as a pair of real CSV files (re, im).
pub fn write_complex_csv_pair(m: &CMat, re_path: &Path, im_path: &Path) -> Result<()> {
    write_matrix_csv(&m.map(|z| z.re), re_path)?;
    write_matrix_csv(&m.map(|z| z.im), im_path)
}

/// Read a complex matrix previously written by [`write_complex_csv_pair`].
pub fn read_complex_csv_pair(re_path: &Path, im_path: &Path) -> Result<CMat> {
    let re = load_matrix_csv(re_path)?;
    let im = load_matrix_csv(im_path)?;
    if re.shape() != im.shape() {
        return Err(DmdError::Shape(format!(
            "real part is {}x{} but imaginary part is {}x{}",
            re.nrows(),
            re.ncols(),
            im.nrows(),
            im.ncols()
        )));
    }
    Ok(CMat::from_fn(re.nrows(), re.ncols(), |i, j| {
        C64::new(re[(i, j)], im[(i, j)])
    }))
}

const PANEL: f64 = 300.0;
const PAD: f64 = 36.0;

/// Map a value range onto panel pixel coordinates with padding.
struct Axis {
    lo: f64,
    hi: f64,
    px_lo: f64,
    px_hi: f64,
}

impl Axis {
    fn new(lo: f64, hi: f64, px_lo: f64, px_hi: f64) -> Self {
        let (lo, hi) = if hi - lo > 1e-300 { (lo, hi) } else { (lo - 1.0, hi + 1.0) };
        Self { lo, hi, px_lo, px_hi }
    }

    fn at(&self, v: f64) -> f64 {
        self.px_lo + (v - self.lo) / (self.hi - self.lo) * (self.px_hi - self.px_lo)
    }
}

fn data_bounds<I: Iterator<Item = f64>>(vals: I) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in vals {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        (0.0, 1.0)
    } else {
        let span = (hi - lo).max(1e-12);
        (lo - 0.1 * span, hi + 0.1 * span)
    }
}

fn polyline(points: &[(f64, f64)], style: &str) -> String {
    let coords: Vec<String> = points.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    format!("<polyline fill=\"none\" {} points=\"{}\"/>", style, coords.join(" "))
}

/// Scatter of eigenvalues with marker radius proportional to |b| and exact
/// values carried in data-re/data-im attributes.
fn eig_panel(
    svg: &mut String,
    title: &str,
    eigs: &CVec,
    amps: &CVec,
    x0: f64,
    y0: f64,
    unit_circle: bool,
) {
    let max_amp = amps.iter().map(|b| b.norm()).fold(0.0f64, f64::max).max(1e-300);
    let mut re_lo = eigs.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let mut re_hi = eigs.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let mut im_lo = eigs.iter().map(|z| z.im).fold(f64::INFINITY, f64::min);
    let mut im_hi = eigs.iter().map(|z| z.im).fold(f64::NEG_INFINITY, f64::max);
    if unit_circle {
        re_lo = re_lo.min(-1.0);
        re_hi = re_hi.max(1.0);
        im_lo = im_lo.min(-1.0);
        im_hi = im_hi.max(1.0);
    }
    if !re_lo.is_finite() {
        (re_lo, re_hi, im_lo, im_hi) = (-1.0, 1.0, -1.0, 1.0);
    }
    let span = ((re_hi - re_lo).max(im_hi - im_lo)).max(1e-6) * 1.2;
    let (cx, cy) = ((re_lo + re_hi) / 2.0, (im_lo + im_hi) / 2.0);
    let ax = Axis::new(cx - span / 2.0, cx + span / 2.0, x0 + PAD, x0 + PANEL - PAD);
    // SVG y axis points down; flip the imaginary axis.
    let ay = Axis::new(cy - span / 2.0, cy + span / 2.0, y0 + PANEL - PAD, y0 + PAD);
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">{}</text>",
        x0 + PAD,
        y0 + 20.0,
        title
    ));
    // Axis cross at the origin.
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#ccc\"/>",
        ax.at(ax.lo),
        ay.at(0.0),
        ax.at(ax.hi),
        ay.at(0.0)
    ));
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#ccc\"/>",
        ax.at(0.0),
        ay.at(ay.lo),
        ax.at(0.0),
        ay.at(ay.hi)
    ));
    if unit_circle {
        let rpx = ax.at(1.0) - ax.at(0.0);
        svg.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{:.2}\" fill=\"none\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>",
            ax.at(0.0),
            ay.at(0.0),
            rpx
        ));
    }
    for (j, z) in eigs.iter().enumerate() {
        let radius = 2.0 + 8.0 * amps[j].norm() / max_amp;
        svg.push_str(&format!(
            "<circle class=\"eig\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"{:.2}\" fill=\"#1f77b4\" fill-opacity=\"0.7\" data-re=\"{}\" data-im=\"{}\"/>",
            ax.at(z.re),
            ay.at(z.im),
            radius,
            z.re,
            z.im
        ));
    }
}

fn trace_panel(svg: &mut String, title: &str, xs: &[f64], re: &[f64], im: &[f64], x0: f64, y0: f64) {
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">{}</text>",
        x0 + PAD,
        y0 + 20.0,
        title
    ));
    if xs.is_empty() {
        return;
    }
    let (xlo, xhi) = data_bounds(xs.iter().copied());
    let (ylo, yhi) = data_bounds(re.iter().chain(im.iter()).copied());
    let ax = Axis::new(xlo, xhi, x0 + PAD, x0 + PANEL - PAD);
    let ay = Axis::new(ylo, yhi, y0 + PANEL - PAD, y0 + PAD);
    let repts: Vec<(f64, f64)> = xs.iter().zip(re).map(|(&x, &v)| (ax.at(x), ay.at(v))).collect();
    let impts: Vec<(f64, f64)> = xs.iter().zip(im).map(|(&x, &v)| (ax.at(x), ay.at(v))).collect();
    svg.push_str(&polyline(&repts, "stroke=\"#1f77b4\" stroke-width=\"1.5\""));
    svg.push_str(&polyline(
        &impts,
        "stroke=\"#d62728\" stroke-width=\"1.5\" stroke-dasharray=\"5 3\"",
    ));
}

/// Render the 3×3 summary grid as a standalone SVG: row 1 holds the singular
/// spectrum and both eigenvalue planes (unit circle on the discrete panel),
/// rows 2 and 3 hold up to three mode profiles and dynamics traces. All nine
/// panel groups are present regardless of k.
pub fn emit_svg(bundle: &SummaryBundle, path: &Path) -> Result<()> {
    let size = 3.0 * PANEL;
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\
         <rect width=\"{size}\" height=\"{size}\" fill=\"white\"/>"
    );
    let k = bundle.dynamics.nrows();

    for row in 0..3usize {
        for col in 0..3usize {
            let (x0, y0) = (col as f64 * PANEL, row as f64 * PANEL);
            svg.push_str(&format!("<g class=\"panel\" id=\"panel-{row}-{col}\">"));
            svg.push_str(&format!(
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{PANEL}\" height=\"{PANEL}\" fill=\"none\" stroke=\"#ddd\"/>",
                x0, y0
            ));
            match (row, col) {
                (0, 0) => {
                    // Singular spectrum on a log10 scale, normalized to σ₁.
                    let s1 = bundle.singular_values.get(0).copied().unwrap_or(1.0).max(1e-300);
                    let xs: Vec<f64> = (0..bundle.singular_values.len()).map(|i| i as f64).collect();
                    let ys: Vec<f64> = bundle
                        .singular_values
                        .iter()
                        .map(|&s| (s / s1).max(1e-18).log10())
                        .collect();
                    svg.push_str(&format!(
                        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">singular values (log10 σ/σ1)</text>",
                        x0 + PAD,
                        y0 + 20.0
                    ));
                    if !xs.is_empty() {
                        let (xlo, xhi) = data_bounds(xs.iter().copied());
                        let (ylo, yhi) = data_bounds(ys.iter().copied());
                        let ax = Axis::new(xlo, xhi, x0 + PAD, x0 + PANEL - PAD);
                        let ay = Axis::new(ylo, yhi, y0 + PANEL - PAD, y0 + PAD);
                        for (i, (&x, &y)) in xs.iter().zip(&ys).enumerate() {
                            svg.push_str(&format!(
                                "<circle class=\"sv\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"#2ca02c\" data-index=\"{i}\"/>",
                                ax.at(x),
                                ay.at(y)
                            ));
                        }
                    }
                }
                (0, 1) => eig_panel(
                    &mut svg,
                    "discrete eigenvalues",
                    &bundle.eigs_discrete,
                    &bundle.amplitudes,
                    x0,
                    y0,
                    true,
                ),
                (0, 2) => eig_panel(
                    &mut svg,
                    "continuous eigenvalues",
                    &bundle.eigs_continuous,
                    &bundle.amplitudes,
                    x0,
                    y0,
                    false,
                ),
                (1, j) if j < k => {
                    let col_v = bundle.selected_modes.column(j);
                    let xs: Vec<f64> = (0..col_v.len()).map(|i| i as f64).collect();
                    let re: Vec<f64> = col_v.iter().map(|z| z.re).collect();
                    let im: Vec<f64> = col_v.iter().map(|z| z.im).collect();
                    trace_panel(&mut svg, &format!("mode {}", j + 1), &xs, &re, &im, x0, y0);
                }
                (2, j) if j < k => {
                    let row_v = bundle.dynamics.row(j);
                    let xs: Vec<f64> = (0..row_v.len()).map(|i| i as f64).collect();
                    let re: Vec<f64> = row_v.iter().map(|z| z.re).collect();
                    let im: Vec<f64> = row_v.iter().map(|z| z.im).collect();
                    trace_panel(&mut svg, &format!("dynamics {}", j + 1), &xs, &re, &im, x0, y0);
                }
                _ => {}
            }
            svg.push_str("</g>");
        }
    }
    svg.push_str("</svg>");
    std::fs::write(path, svg)?;
    Ok(())
}
