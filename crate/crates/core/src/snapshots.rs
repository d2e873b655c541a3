//! Snapshot matrices, time grids, and Hankel time-delay embedding.

use std::path::Path;

use crate::error::{DmdError, Result};
use crate::linalg::{RMat, RVec};

/// Relative tolerance used to decide whether a time grid is uniform.
pub const UNIFORM_REL_TOL: f64 = 1e-9;

/// Real n×m data matrix: rows are spatial samples, columns are time samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotMatrix {
    values: RMat,
}

impl SnapshotMatrix {
    pub fn new(values: RMat) -> Result<Self> {
        if values.nrows() < 1 || values.ncols() < 2 {
            return Err(DmdError::Validation(format!(
                "snapshot matrix must be at least 1x2, got {}x{}",
                values.nrows(),
                values.ncols()
            )));
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(DmdError::Validation(
                "snapshot matrix contains NaN or infinite entries".into(),
            ));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &RMat {
        &self.values
    }

    pub fn n_space(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_time(&self) -> usize {
        self.values.ncols()
    }
}

/// Strictly increasing time stamps; `uniform_step` is present iff the spacing
/// is uniform within a relative tolerance of 1e-9.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
    uniform_step: Option<f64>,
}

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.is_empty() {
            return Err(DmdError::Validation("time grid is empty".into()));
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(DmdError::Validation("time grid contains non-finite stamps".into()));
        }
        for w in times.windows(2) {
            if w[1] <= w[0] {
                return Err(DmdError::Validation(format!(
                    "time stamps must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        let uniform_step = detect_uniform_step(&times);
        Ok(Self { times, uniform_step })
    }

    /// Uniform grid t_k = t0 + k·dt for k = 0..m-1.
    pub fn uniform(m: usize, t0: f64, dt: f64) -> Result<Self> {
        if m == 0 {
            return Err(DmdError::Validation("time grid is empty".into()));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(DmdError::Validation(format!("time step must be positive, got {dt}")));
        }
        let times: Vec<f64> = (0..m).map(|k| t0 + k as f64 * dt).collect();
        Ok(Self { times, uniform_step: Some(dt) })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn uniform_step(&self) -> Option<f64> {
        self.uniform_step
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Mean spacing; equals the uniform step on uniform grids.
    pub fn mean_step(&self) -> f64 {
        if self.times.len() < 2 {
            return 0.0;
        }
        (self.times[self.times.len() - 1] - self.times[0]) / (self.times.len() - 1) as f64
    }
}

fn detect_uniform_step(times: &[f64]) -> Option<f64> {
    if times.len() < 2 {
        return None;
    }
    let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    if dt <= 0.0 {
        return None;
    }
    let ok = times
        .windows(2)
        .all(|w| ((w[1] - w[0]) - dt).abs() <= UNIFORM_REL_TOL * dt);
    ok.then_some(dt)
}

/// Number of stacked time-shifted copies; d = 1 means no embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HankelConfig {
    pub delays: usize,
}

impl HankelConfig {
    pub fn new(delays: usize) -> Result<Self> {
        if delays < 1 {
            return Err(DmdError::Config("delay count must be at least 1".into()));
        }
        Ok(Self { delays })
    }
}

/// Parse a rectangular numeric CSV (rows = space, columns = time). Lines
/// starting with '#' are skipped; scientific notation accepted.
pub fn load_csv(path: &Path) -> Result<SnapshotMatrix> {
    let values = load_matrix_csv(path)?;
    SnapshotMatrix::new(values)
}

/// Shared numeric-grid reader used for snapshot, mode, and time files.
pub fn load_matrix_csv(path: &Path) -> Result<RMat> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| DmdError::Format(format!("{}: {e}", path.display())))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| DmdError::Format(format!("{}: {e}", path.display())))?;
        let mut row = Vec::with_capacity(record.len());
        for (j, field) in record.iter().enumerate() {
            if field.is_empty() && record.len() == 1 {
                continue; // blank line
            }
            let v: f64 = field.parse().map_err(|_| DmdError::Parse {
                row: i + 1,
                col: j + 1,
                msg: format!("not a number: {field:?}"),
            })?;
            if !v.is_finite() {
                return Err(DmdError::Validation(format!(
                    "non-finite value at row {}, col {}",
                    i + 1,
                    j + 1
                )));
            }
            row.push(v);
        }
        if row.is_empty() {
            continue;
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(DmdError::Format(format!(
                    "ragged rows: row {} has {} fields, expected {w}",
                    i + 1,
                    row.len()
                )))
            }
            _ => {}
        }
        rows.push(row);
    }
    let ncols = width.ok_or_else(|| DmdError::Format("empty file".into()))?;
    let nrows = rows.len();
    Ok(RMat::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

/// Read a one-column CSV of time stamps.
pub fn load_times_csv(path: &Path) -> Result<TimeGrid> {
    let m = load_matrix_csv(path)?;
    if m.ncols() != 1 {
        return Err(DmdError::Shape(format!(
            "time file must have one column, got {}",
            m.ncols()
        )));
    }
    TimeGrid::new(m.column(0).iter().copied().collect())
}

/// Subtract the temporal mean of each row. Returns the centered matrix and the
/// mean vector needed to undo the shift.
pub fn center(x: &SnapshotMatrix) -> (SnapshotMatrix, RVec) {
    let v = x.values();
    let m = v.ncols() as f64;
    let mean = RVec::from_fn(v.nrows(), |i, _| v.row(i).sum() / m);
    let mut out = v.clone();
    for j in 0..v.ncols() {
        for i in 0..v.nrows() {
            out[(i, j)] -= mean[i];
        }
    }
    (SnapshotMatrix { values: out }, mean)
}

/// Stack d time-shifted copies: output column k is
/// [x(t_k); x(t_{k+1}); …; x(t_{k+d-1})], giving an (n·d) × (m-d+1) matrix.
/// Block order is all of space at delay 0, then delay 1, and so on.
pub fn hankel_embed(x: &SnapshotMatrix, cfg: &HankelConfig) -> Result<SnapshotMatrix> {
    let d = cfg.delays;
    let (n, m) = (x.n_space(), x.n_time());
    if d < 1 || d > m - 1 {
        return Err(DmdError::Config(format!(
            "delay count must satisfy 1 <= d <= n_time - 1, got d={d} with n_time={m}"
        )));
    }
    let cols = m - d + 1;
    let v = x.values();
    let out = RMat::from_fn(n * d, cols, |row, k| {
        let delta = row / n;
        let i = row % n;
        v[(i, k + delta)]
    });
    Ok(SnapshotMatrix { values: out })
}

/// Inverse of `hankel_embed`: every original entry is recovered as the average
/// of all Hankel cells that contain it. Exact for true embeddings.
pub fn hankel_unembed(h: &SnapshotMatrix, cfg: &HankelConfig, n_space: usize) -> Result<SnapshotMatrix> {
    let d = cfg.delays;
    if n_space == 0 || h.n_space() != n_space * d {
        return Err(DmdError::Shape(format!(
            "embedded matrix has {} rows, expected n_space*d = {}*{}",
            h.n_space(),
            n_space,
            d
        )));
    }
    let k_cols = h.n_time();
    let m = k_cols + d - 1;
    let v = h.values();
    let mut sums = RMat::zeros(n_space, m);
    let mut counts = RMat::zeros(n_space, m);
    for k in 0..k_cols {
        for delta in 0..d {
            for i in 0..n_space {
                sums[(i, k + delta)] += v[(delta * n_space + i, k)];
                counts[(i, k + delta)] += 1.0;
            }
        }
    }
    let out = RMat::from_fn(n_space, m, |i, j| sums[(i, j)] / counts[(i, j)]);
    Ok(SnapshotMatrix { values: out })
}

/// Time stamps of the embedded columns: the first m-d+1 stamps (each embedded
/// column is stamped by its earliest snapshot).
pub fn truncate_times(t: &TimeGrid, cfg: &HankelConfig) -> Result<TimeGrid> {
    let d = cfg.delays;
    if t.len() < d {
        return Err(DmdError::Config(format!(
            "grid of length {} too short for d={d}",
            t.len()
        )));
    }
    TimeGrid::new(t.times()[..t.len() - d + 1].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn mat(rows: usize, cols: usize, data: &[f64]) -> SnapshotMatrix {
        SnapshotMatrix::new(RMat::from_row_slice(rows, cols, data)).unwrap()
    }

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn load_csv_parses_grid() {
        let f = write_temp("1,2,3\n4,5,6\n");
        let x = load_csv(f.path()).unwrap();
        assert_eq!((x.n_space(), x.n_time()), (2, 3));
        assert_eq!(x.values()[(1, 2)], 6.0);
    }

    #[test]
    fn load_csv_skips_comment_header() {
        let f = write_temp("# t0 t1 t2\n1,2,3\n4,5e0,6\n");
        let x = load_csv(f.path()).unwrap();
        assert_eq!((x.n_space(), x.n_time()), (2, 3));
        assert_eq!(x.values()[(1, 1)], 5.0);
    }

    #[test]
    fn load_csv_rejects_ragged_rows() {
        let f = write_temp("1,2,3\n4,5\n");
        match load_csv(f.path()) {
            Err(DmdError::Format(_)) => {}
            other => panic!("expected FormatError, got {other:?}"),
        }
    }

    #[test]
    fn load_csv_reports_parse_position() {
        let f = write_temp("1,2\n3,oops\n");
        match load_csv(f.path()) {
            Err(DmdError::Parse { row: 2, col: 2, .. }) => {}
            other => panic!("expected ParseError at (2,2), got {other:?}"),
        }
    }

    #[test]
    fn load_csv_rejects_nan() {
        let f = write_temp("1,2\nNaN,4\n");
        match load_csv(f.path()) {
            Err(DmdError::Validation(_)) => {}
            other => panic!("expected ValidationError, got {other:?}"),
        }
    }

    #[test]
    fn center_constant_row() {
        let (c, mean) = center(&mat(1, 3, &[1.0, 1.0, 1.0]));
        assert_eq!(c.values().as_slice(), &[0.0, 0.0, 0.0]);
        assert_eq!(mean[0], 1.0);
    }

    #[test]
    fn center_two_point_mean() {
        let (c, mean) = center(&mat(2, 2, &[1.0, 3.0, 2.0, 2.0]));
        assert_eq!(c.values()[(0, 0)], -1.0);
        assert_eq!(c.values()[(0, 1)], 1.0);
        assert_eq!(c.values()[(1, 0)], 0.0);
        assert_eq!(mean.as_slice(), &[2.0, 2.0]);
    }

    #[test]
    fn center_round_trips() {
        let x = mat(
            5,
            7,
            &(0..35).map(|i| ((i * 13 % 17) as f64 * 0.71).sin()).collect::<Vec<_>>(),
        );
        let (c, mean) = center(&x);
        let mut restored = c.values().clone();
        for j in 0..7 {
            for i in 0..5 {
                restored[(i, j)] += mean[i];
            }
        }
        let err = (restored - x.values()).abs().max();
        assert!(err <= 1e-14);
        // Row means of the centered matrix are tiny relative to the data scale.
        let scale = x.values().abs().max();
        for i in 0..5 {
            assert!((c.values().row(i).sum() / 7.0).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn center_is_idempotent() {
        let x = mat(3, 6, &(0..18).map(|i| (i as f64 * 0.37).cos()).collect::<Vec<_>>());
        let (c1, _) = center(&x);
        let (c2, _) = center(&c1);
        assert!((c1.values() - c2.values()).abs().max() <= 1e-14);
    }

    #[test]
    fn hankel_identity_when_d_is_1() {
        let x = mat(1, 3, &[1.0, 2.0, 3.0]);
        let h = hankel_embed(&x, &HankelConfig::new(1).unwrap()).unwrap();
        assert_eq!(h.values(), x.values());
    }

    #[test]
    fn hankel_stacks_delayed_copies() {
        let x = mat(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let h = hankel_embed(&x, &HankelConfig::new(2).unwrap()).unwrap();
        let expected = RMat::from_row_slice(4, 2, &[1.0, 2.0, 4.0, 5.0, 2.0, 3.0, 5.0, 6.0]);
        assert_eq!(h.values(), &expected);
    }

    #[test]
    fn hankel_embed_rejects_out_of_range_d() {
        let x = mat(1, 3, &[1.0, 2.0, 3.0]);
        match hankel_embed(&x, &HankelConfig::new(3).unwrap()) {
            Err(DmdError::Config(_)) => {}
            other => panic!("expected ConfigError, got {other:?}"),
        }
    }

    #[test]
    fn hankel_unembed_inverts_the_stacking_example() {
        let h = mat(4, 2, &[1.0, 2.0, 4.0, 5.0, 2.0, 3.0, 5.0, 6.0]);
        let x = hankel_unembed(&h, &HankelConfig::new(2).unwrap(), 2).unwrap();
        let expected = RMat::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert!((x.values() - expected).abs().max() <= 1e-12);
    }

    #[test]
    fn hankel_round_trip_random() {
        let x = mat(4, 9, &(0..36).map(|i| ((i * 7 % 23) as f64 * 0.41).sin()).collect::<Vec<_>>());
        for d in [1usize, 2, 3, 5, 8] {
            let cfg = HankelConfig::new(d).unwrap();
            let h = hankel_embed(&x, &cfg).unwrap();
            assert_eq!(h.n_space(), 4 * d);
            assert_eq!(h.n_time(), 9 - d + 1);
            let back = hankel_unembed(&h, &cfg, 4).unwrap();
            assert!((back.values() - x.values()).abs().max() <= 1e-12);
        }
    }

    #[test]
    fn hankel_unembed_rejects_bad_row_count() {
        let h = mat(3, 2, &[1.0; 6]);
        match hankel_unembed(&h, &HankelConfig::new(2).unwrap(), 2) {
            Err(DmdError::Shape(_)) => {}
            other => panic!("expected ShapeError, got {other:?}"),
        }
    }

    #[test]
    fn truncate_times_examples() {
        let t = TimeGrid::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let t2 = truncate_times(&t, &HankelConfig::new(2).unwrap()).unwrap();
        assert_eq!(t2.times(), &[0.0, 1.0, 2.0]);
        let t1 = truncate_times(&t, &HankelConfig::new(1).unwrap()).unwrap();
        assert_eq!(t1.times(), t.times());
    }

    #[test]
    fn uniform_detection_tolerance() {
        let t = TimeGrid::new(vec![0.0, 0.1, 0.2, 0.30000000001]).unwrap();
        assert!(t.uniform_step().is_some());
        let t = TimeGrid::new(vec![0.0, 0.1, 0.2, 0.35]).unwrap();
        assert!(t.uniform_step().is_none());
        let t = TimeGrid::uniform(129, 0.0, 4.0 * std::f64::consts::PI / 128.0).unwrap();
        assert_eq!(t.len(), 129);
        assert!(t.uniform_step().is_some());
    }

    #[test]
    fn time_grid_rejects_non_increasing() {
        assert!(TimeGrid::new(vec![0.0, 1.0, 1.0]).is_err());
        assert!(TimeGrid::new(vec![0.0, -1.0]).is_err());
    }
}
