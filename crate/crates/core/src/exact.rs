//! Exact DMD: truncated-SVD fit of the one-step advance operator, reduced
//! eigendecomposition, mode lifting, amplitudes, reconstruction, forecasting.

use crate::error::{DmdError, Result, Warning};
use crate::linalg::{
    eig_real, lstsq, numerical_rank, thin_svd, to_complex, C64, CMat, CVec, RMat, RVec,
};
use crate::snapshots::{SnapshotMatrix, TimeGrid};

/// Relative cutoff defining the numerical rank in `auto` mode.
pub const AUTO_RANK_REL_TOL: f64 = 1e-10;
/// Discrete eigenvalues below this magnitude are excluded from the
/// continuous-time result (their logarithm is meaningless).
pub const DEGENERATE_LAMBDA_TOL: f64 = 1e-12;

/// How many singular triplets to keep.
#[derive(Debug, Clone, PartialEq)]
pub enum RankSpec {
    Exact(usize),
    /// Smallest r whose retained squared singular values reach this fraction
    /// of the total energy; strictly between 0 and 1.
    Energy(f64),
    Full,
    /// Keep singular values above 1e-10 times the largest.
    Auto,
}

/// Truncated SVD X ≈ U diag(s) Vᵀ restricted to the leading `rank` triplets.
#[derive(Debug, Clone)]
pub struct TruncatedSvd {
    pub u: RMat,
    pub s: RVec,
    pub v: RMat,
    pub rank: usize,
    pub warnings: Vec<Warning>,
}

/// The r×r reduced operator Ã with its eigendecomposition and the projection
/// basis used to lift reduced eigenvectors back to state space.
#[derive(Debug, Clone)]
pub struct ReducedOperator {
    pub a_tilde: RMat,
    pub proj_basis: RMat,
    pub eigvals: CVec,
    pub eigvecs_reduced: CMat,
}

/// Fitted decomposition: unit-norm mode columns, eigenvalues in both clocks,
/// amplitudes, ordered by descending |b| (ties: descending Im ω).
#[derive(Debug, Clone)]
pub struct DmdResult {
    pub modes: CMat,
    pub eigs_discrete: CVec,
    pub eigs_continuous: CVec,
    pub amplitudes: CVec,
    pub rank: usize,
    pub time: TimeGrid,
    pub warnings: Vec<Warning>,
}

pub fn svd_truncate(x: &RMat, rank: &RankSpec) -> Result<TruncatedSvd> {
    let (u, s, v) = thin_svd(x)?;
    let kmax = s.len();
    let numrank = numerical_rank(&s, AUTO_RANK_REL_TOL);
    let mut warnings = Vec::new();
    let r = match rank {
        RankSpec::Exact(r) => {
            if *r == 0 || *r > kmax {
                return Err(DmdError::Config(format!(
                    "requested rank {r} out of range for a {}x{} matrix",
                    x.nrows(),
                    x.ncols()
                )));
            }
            if *r > numrank {
                warnings.push(Warning::RankDeficiency { requested: *r, effective: numrank });
                numrank
            } else {
                *r
            }
        }
        RankSpec::Energy(f) => {
            if !(*f > 0.0 && *f < 1.0) {
                return Err(DmdError::Config(format!(
                    "energy fraction must lie strictly between 0 and 1, got {f}"
                )));
            }
            let total: f64 = s.iter().map(|x| x * x).sum();
            if total <= 0.0 {
                0
            } else {
                let mut acc = 0.0;
                let mut r = kmax;
                for (i, sv) in s.iter().enumerate() {
                    acc += sv * sv;
                    if acc / total >= *f {
                        r = i + 1;
                        break;
                    }
                }
                r
            }
        }
        RankSpec::Full => kmax,
        RankSpec::Auto => numrank,
    };
    Ok(TruncatedSvd {
        u: u.columns(0, r).clone_owned(),
        s: s.rows(0, r).clone_owned(),
        v: v.columns(0, r).clone_owned(),
        rank: r,
        warnings,
    })
}

/// Reduced operator plus the lift basis X₂VΣ⁻¹ shared with the mode
/// construction.
pub struct Reduction {
    pub op: ReducedOperator,
    pub lift: RMat,
    pub warnings: Vec<Warning>,
}

/// Form Ã = Uᵀ X₂ V Σ⁻¹ from the truncated SVD of X₁ and eigendecompose it.
pub fn reduce(x1: &RMat, x2: &RMat, rank: &RankSpec) -> Result<Reduction> {
    let tsvd = svd_truncate(x1, rank)?;
    let r = tsvd.rank;
    if r == 0 {
        return Err(DmdError::DegenerateData(
            "data matrix has numerical rank zero".into(),
        ));
    }
    let mut lift = x2 * &tsvd.v;
    for j in 0..r {
        let inv = 1.0 / tsvd.s[j];
        lift.column_mut(j).scale_mut(inv);
    }
    let a_tilde = tsvd.u.transpose() * &lift;
    let (eigvals, eigvecs_reduced) = eig_real(&a_tilde)?;
    Ok(Reduction {
        op: ReducedOperator { a_tilde, proj_basis: tsvd.u, eigvals, eigvecs_reduced },
        lift,
        warnings: tsvd.warnings,
    })
}

/// Principal-branch map λ → log(λ)/Δt. Frequencies are only identifiable up
/// to aliasing at ±π/Δt; no unwrapping is attempted.
pub fn discrete_to_continuous(lambda: C64, dt: f64) -> Result<C64> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(DmdError::Config(format!("time step must be positive, got {dt}")));
    }
    if lambda.norm() == 0.0 {
        return Err(DmdError::SingularEigenvalue(
            "cannot map a zero eigenvalue to continuous time".into(),
        ));
    }
    Ok(lambda.ln() / dt)
}

/// Least-squares amplitudes b minimizing ‖Φb − x(t₁)‖₂ (Moore–Penrose).
/// Rank-deficient mode bases fall back to the minimum-norm solution with a
/// warning.
pub fn compute_amplitudes(modes: &CMat, x1: &CVec) -> Result<(CVec, Vec<Warning>)> {
    if modes.nrows() != x1.len() {
        return Err(DmdError::Shape(format!(
            "mode rows {} do not match state length {}",
            modes.nrows(),
            x1.len()
        )));
    }
    let rhs = CMat::from_fn(x1.len(), 1, |i, _| x1[i]);
    let (b, rank, _cond) = lstsq(modes, &rhs, 1e-12)?;
    let mut warnings = Vec::new();
    if rank < modes.ncols() {
        warnings.push(Warning::RankDeficiency { requested: modes.ncols(), effective: rank });
    }
    Ok((CVec::from_fn(modes.ncols(), |j, _| b[(j, 0)]), warnings))
}

/// Ordering permutation: descending |b|, near-ties (relative 1e-12) broken by
/// descending Im ω, then original index. Two passes keep the comparator a
/// strict order.
pub fn amplitude_order(b: &CVec, omega: &CVec) -> Vec<usize> {
    let r = b.len();
    let mags: Vec<f64> = b.iter().map(|z| z.norm()).collect();
    let mut idx: Vec<usize> = (0..r).collect();
    idx.sort_by(|&i, &j| {
        mags[j]
            .partial_cmp(&mags[i])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });
    let mut out = Vec::with_capacity(r);
    let mut k = 0;
    while k < r {
        let lead = mags[idx[k]];
        let mut end = k + 1;
        while end < r && (lead - mags[idx[end]]) <= 1e-12 * lead.max(f64::MIN_POSITIVE) {
            end += 1;
        }
        let mut group = idx[k..end].to_vec();
        group.sort_by(|&i, &j| {
            omega[j]
                .im
                .partial_cmp(&omega[i].im)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(i.cmp(&j))
        });
        out.extend(group);
        k = end;
    }
    out
}

fn permute_result(
    perm: &[usize],
    modes: &CMat,
    lambda: &CVec,
    omega: &CVec,
    b: &CVec,
) -> (CMat, CVec, CVec, CVec) {
    let r = perm.len();
    let mut pm = CMat::zeros(modes.nrows(), r);
    for (c, &p) in perm.iter().enumerate() {
        pm.set_column(c, &modes.column(p));
    }
    (
        pm,
        CVec::from_fn(r, |j, _| lambda[perm[j]]),
        CVec::from_fn(r, |j, _| omega[perm[j]]),
        CVec::from_fn(r, |j, _| b[perm[j]]),
    )
}

/// Exact DMD on a uniformly sampled snapshot matrix.
pub fn fit_exact(x: &SnapshotMatrix, t: &TimeGrid, rank: &RankSpec) -> Result<DmdResult> {
    if t.len() != x.n_time() {
        return Err(DmdError::Shape(format!(
            "time grid length {} does not match {} snapshots",
            t.len(),
            x.n_time()
        )));
    }
    let dt = t.uniform_step().ok_or(DmdError::NonUniformTime)?;
    let m = x.n_time();
    if m < 3 {
        return Err(DmdError::Validation(format!(
            "exact DMD needs at least 3 snapshots, got {m}"
        )));
    }
    let v = x.values();
    let x1 = v.columns(0, m - 1).clone_owned();
    let x2 = v.columns(1, m - 1).clone_owned();
    if x1.amax() == 0.0 {
        return Err(DmdError::DegenerateData("data matrix is identically zero".into()));
    }
    let red = reduce(&x1, &x2, rank)?;
    let mut warnings = red.warnings.clone();
    let phi_raw = to_complex(&red.lift) * &red.op.eigvecs_reduced;

    // Exclude eigenvalues too small to carry to continuous time.
    let keep: Vec<usize> = (0..red.op.eigvals.len())
        .filter(|&j| red.op.eigvals[j].norm() >= DEGENERATE_LAMBDA_TOL)
        .collect();
    if keep.len() < red.op.eigvals.len() {
        warnings.push(Warning::DegenerateEigenvalue);
    }
    if keep.is_empty() {
        return Err(DmdError::DegenerateData(
            "every eigenvalue is numerically zero".into(),
        ));
    }
    let r = keep.len();
    let mut modes = CMat::zeros(x.n_space(), r);
    let mut lambda = CVec::zeros(r);
    for (c, &j) in keep.iter().enumerate() {
        let col = phi_raw.column(j).clone_owned();
        let norm = col.norm();
        if norm > 0.0 {
            modes.set_column(c, &(col / C64::new(norm, 0.0)));
        } else {
            modes[(0, c)] = C64::new(1.0, 0.0);
        }
        lambda[c] = red.op.eigvals[j];
    }
    let mut omega = CVec::zeros(r);
    for j in 0..r {
        omega[j] = discrete_to_continuous(lambda[j], dt)?;
    }
    let first = CVec::from_fn(x.n_space(), |i, _| C64::new(v[(i, 0)], 0.0));
    let (b, amp_warnings) = compute_amplitudes(&modes, &first)?;
    warnings.extend(amp_warnings);

    let perm = amplitude_order(&b, &omega);
    let (modes, lambda, omega, b) = permute_result(&perm, &modes, &lambda, &omega, &b);
    Ok(DmdResult {
        modes,
        eigs_discrete: lambda,
        eigs_continuous: omega,
        amplitudes: b,
        rank: r,
        time: t.clone(),
        warnings,
    })
}

/// Rows b_j·exp(ω_j·t_k): the time dynamics of each mode.
pub fn dynamics(omega: &CVec, b: &CVec, t: &TimeGrid) -> CMat {
    CMat::from_fn(omega.len(), t.len(), |j, k| {
        b[j] * (omega[j] * t.times()[k]).exp()
    })
}

/// Evaluate Φ·diag(b)·T(ω) with T(ω)_{jk} = exp(ω_j·t_k) at arbitrary
/// strictly increasing times (interpolation and extrapolation alike).
pub fn reconstruct(result: &DmdResult, t: &TimeGrid) -> CMat {
    &result.modes * dynamics(&result.eigs_continuous, &result.amplitudes, t)
}

/// Same evaluation as `reconstruct`; named separately because extrapolating
/// beyond the training window is a different claim than reproducing it.
pub fn forecast(result: &DmdResult, horizon_times: &TimeGrid) -> CMat {
    reconstruct(result, horizon_times)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::linear_system_data;

    fn diag_system(m: usize) -> (SnapshotMatrix, TimeGrid) {
        let a = RMat::from_diagonal(&RVec::from_vec(vec![0.9, 0.5]));
        let x0 = RVec::from_vec(vec![1.0, 1.0]);
        linear_system_data(&a, &x0, m, 1.0).unwrap()
    }

    fn find_close(set: &CVec, target: C64, tol: f64) -> bool {
        set.iter().any(|z| (z - target).norm() <= tol)
    }

    #[test]
    fn svd_truncate_auto_thresholds_tiny_values() {
        let x = RMat::from_diagonal(&RVec::from_vec(vec![1.0, 1e-16]));
        let t = svd_truncate(&x, &RankSpec::Auto).unwrap();
        assert_eq!(t.rank, 1);
    }

    #[test]
    fn svd_truncate_full_keeps_min_dim() {
        let x = RMat::from_fn(3, 5, |i, j| (i + j) as f64 + 1.0);
        let t = svd_truncate(&x, &RankSpec::Full).unwrap();
        assert_eq!(t.rank, 3);
    }

    #[test]
    fn svd_truncate_energy_fraction() {
        let x = RMat::from_diagonal(&RVec::from_vec(vec![4.0, 3.0]));
        // sigma = {4, 3}: first singular value carries 16/25 = 0.64 of energy.
        assert_eq!(svd_truncate(&x, &RankSpec::Energy(0.5)).unwrap().rank, 1);
        assert_eq!(svd_truncate(&x, &RankSpec::Energy(0.7)).unwrap().rank, 2);
        assert!(svd_truncate(&x, &RankSpec::Energy(1.0)).is_err());
    }

    #[test]
    fn svd_truncate_rejects_oversized_exact_rank() {
        let x = RMat::from_fn(3, 5, |i, j| (i * j) as f64);
        match svd_truncate(&x, &RankSpec::Exact(4)) {
            Err(DmdError::Config(_)) => {}
            other => panic!("expected ConfigError, got {other:?}"),
        }
    }

    #[test]
    fn svd_truncate_reduces_past_numerical_rank() {
        // Rank-1 matrix, exact(2) requested.
        let x = RMat::from_fn(4, 4, |i, j| ((i + 1) * (j + 1)) as f64);
        let t = svd_truncate(&x, &RankSpec::Exact(2)).unwrap();
        assert_eq!(t.rank, 1);
        assert!(matches!(
            t.warnings[0],
            Warning::RankDeficiency { requested: 2, effective: 1 }
        ));
    }

    #[test]
    fn fit_recovers_diagonal_spectrum() {
        let (x, t) = diag_system(8);
        let res = fit_exact(&x, &t, &RankSpec::Auto).unwrap();
        assert_eq!(res.rank, 2);
        assert!(find_close(&res.eigs_discrete, C64::new(0.9, 0.0), 1e-10));
        assert!(find_close(&res.eigs_discrete, C64::new(0.5, 0.0), 1e-10));
        assert!(find_close(&res.eigs_continuous, C64::new(0.9f64.ln(), 0.0), 1e-10));
        assert!(find_close(&res.eigs_continuous, C64::new(0.5f64.ln(), 0.0), 1e-10));
    }

    #[test]
    fn fit_constant_columns_gives_unit_eigenvalue() {
        let v = RMat::from_fn(3, 5, |i, _| [2.0, -1.0, 0.5][i]);
        let x = SnapshotMatrix::new(v).unwrap();
        let t = TimeGrid::uniform(5, 0.0, 1.0).unwrap();
        let res = fit_exact(&x, &t, &RankSpec::Auto).unwrap();
        assert_eq!(res.rank, 1);
        assert!((res.eigs_discrete[0] - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(res.eigs_continuous[0].norm() < 1e-12);
    }

    #[test]
    fn fit_rejects_non_uniform_grid() {
        let (x, _) = diag_system(4);
        let t = TimeGrid::new(vec![0.0, 1.0, 2.5, 3.0]).unwrap();
        match fit_exact(&x, &t, &RankSpec::Auto) {
            Err(DmdError::NonUniformTime) => {}
            other => panic!("expected NonUniformTimeError, got {other:?}"),
        }
    }

    #[test]
    fn fit_rejects_zero_matrix() {
        let x = SnapshotMatrix::new(RMat::zeros(3, 5)).unwrap();
        let t = TimeGrid::uniform(5, 0.0, 1.0).unwrap();
        match fit_exact(&x, &t, &RankSpec::Auto) {
            Err(DmdError::DegenerateData(_)) => {}
            other => panic!("expected DegenerateDataError, got {other:?}"),
        }
    }

    #[test]
    fn fit_excludes_near_zero_eigenvalue_with_warning() {
        // Second state dies immediately: its eigenvalue is numerically zero.
        let a = RMat::from_diagonal(&RVec::from_vec(vec![0.9, 0.0]));
        let x0 = RVec::from_vec(vec![1.0, 1.0]);
        let (x, t) = linear_system_data(&a, &x0, 6, 1.0).unwrap();
        let res = fit_exact(&x, &t, &RankSpec::Auto).unwrap();
        assert_eq!(res.rank, 1);
        assert!((res.eigs_discrete[0] - C64::new(0.9, 0.0)).norm() < 1e-8);
        assert!(res.warnings.contains(&Warning::DegenerateEigenvalue));
    }

    #[test]
    fn reduced_operator_invariants() {
        let (x, _) = diag_system(8);
        let v = x.values();
        let x1 = v.columns(0, 7).clone_owned();
        let x2 = v.columns(1, 7).clone_owned();
        let red = reduce(&x1, &x2, &RankSpec::Auto).unwrap();
        let op = &red.op;
        // Orthonormal projection basis.
        let gram = op.proj_basis.transpose() * &op.proj_basis;
        assert!((gram - RMat::identity(op.a_tilde.nrows(), op.a_tilde.nrows())).amax() <= 1e-12);
        // Reduced eigenpairs.
        let ac = to_complex(&op.a_tilde);
        for j in 0..op.eigvals.len() {
            let w = op.eigvecs_reduced.column(j).clone_owned();
            let resid = (&ac * &w - &w * op.eigvals[j]).norm();
            assert!(resid <= 1e-10 * op.a_tilde.norm());
        }
    }

    #[test]
    fn modes_have_unit_norm_and_lambda_omega_agree() {
        let (x, t) = diag_system(8);
        let res = fit_exact(&x, &t, &RankSpec::Auto).unwrap();
        let dt = t.uniform_step().unwrap();
        for j in 0..res.rank {
            assert!((res.modes.column(j).norm() - 1.0).abs() <= 1e-12);
            let back = (res.eigs_continuous[j] * dt).exp();
            let rel = (back - res.eigs_discrete[j]).norm() / res.eigs_discrete[j].norm();
            assert!(rel <= 1e-12);
        }
    }

    #[test]
    fn discrete_to_continuous_examples() {
        assert_eq!(discrete_to_continuous(C64::new(1.0, 0.0), 0.1).unwrap(), C64::new(0.0, 0.0));
        let w = discrete_to_continuous(C64::new(0.2f64.exp(), 0.0), 1.0).unwrap();
        assert!((w - C64::new(0.2, 0.0)).norm() < 1e-14);
        // log(i) = iπ/2 on the principal branch.
        let w = discrete_to_continuous(C64::new(0.0, 1.0), std::f64::consts::FRAC_PI_2).unwrap();
        assert!((w - C64::new(0.0, 1.0)).norm() < 1e-14);
        match discrete_to_continuous(C64::new(0.0, 0.0), 1.0) {
            Err(DmdError::SingularEigenvalue(_)) => {}
            other => panic!("expected SingularEigenvalueError, got {other:?}"),
        }
    }

    #[test]
    fn amplitudes_identity_basis() {
        let phi = CMat::identity(2, 2);
        let x1 = CVec::from_vec(vec![C64::new(3.0, 0.0), C64::new(4.0, 0.0)]);
        let (b, w) = compute_amplitudes(&phi, &x1).unwrap();
        assert!(w.is_empty());
        assert!((b[0] - C64::new(3.0, 0.0)).norm() < 1e-15);
        assert!((b[1] - C64::new(4.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn amplitudes_orthonormal_basis_is_adjoint_product() {
        // Orthonormal complex basis from the SVD of a fixed matrix.
        let a = CMat::from_fn(6, 3, |i, j| {
            C64::new(((i * 3 + j) as f64 * 0.7).sin(), ((i + j) as f64 * 0.4).cos())
        });
        let svd = a.svd(true, false);
        let q = svd.u.unwrap().columns(0, 3).clone_owned();
        let x1 = CVec::from_fn(6, |i, _| C64::new(i as f64 * 0.3 - 1.0, (i as f64).sin()));
        let (b, _) = compute_amplitudes(&q, &x1).unwrap();
        let oracle = q.adjoint() * &x1;
        assert!((&b - oracle).norm() < 1e-12);
    }

    #[test]
    fn amplitudes_match_normal_equations() {
        let phi = CMat::from_fn(6, 3, |i, j| {
            C64::new(((2 * i + j) as f64 * 0.9).cos(), ((i * j + 1) as f64 * 0.31).sin())
        });
        let x1 = CVec::from_fn(6, |i, _| C64::new((i as f64 * 1.3).sin(), 0.2 * i as f64));
        let (b, _) = compute_amplitudes(&phi, &x1).unwrap();
        let gram = phi.adjoint() * &phi;
        let rhs = phi.adjoint() * CMat::from_fn(6, 1, |i, _| x1[i]);
        let oracle = gram.lu().solve(&rhs).unwrap();
        for j in 0..3 {
            assert!((b[j] - oracle[(j, 0)]).norm() < 1e-10);
        }
    }

    #[test]
    fn amplitudes_rank_deficient_warns() {
        let mut phi = CMat::zeros(4, 2);
        for i in 0..4 {
            phi[(i, 0)] = C64::new(1.0, 0.0);
            phi[(i, 1)] = C64::new(1.0, 0.0);
        }
        let x1 = CVec::from_element(4, C64::new(2.0, 0.0));
        let (_, w) = compute_amplitudes(&phi, &x1).unwrap();
        assert!(matches!(w[0], Warning::RankDeficiency { .. }));
    }

    #[test]
    fn reconstruct_constant_mode() {
        let res = DmdResult {
            modes: CMat::from_element(1, 1, C64::new(1.0, 0.0)),
            eigs_discrete: CVec::from_element(1, C64::new(1.0, 0.0)),
            eigs_continuous: CVec::from_element(1, C64::new(0.0, 0.0)),
            amplitudes: CVec::from_element(1, C64::new(1.0, 0.0)),
            rank: 1,
            time: TimeGrid::uniform(3, 0.0, 1.0).unwrap(),
            warnings: vec![],
        };
        let t = TimeGrid::new(vec![0.0, 1.0, 2.0]).unwrap();
        let rec = reconstruct(&res, &t);
        for k in 0..3 {
            assert!((rec[(0, k)] - C64::new(1.0, 0.0)).norm() < 1e-15);
            let f = forecast(&res, &TimeGrid::new(vec![k as f64 * 10.0 + 1.0]).unwrap());
            assert!((f[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn reconstruct_training_data() {
        let (x, t) = diag_system(8);
        let res = fit_exact(&x, &t, &RankSpec::Auto).unwrap();
        let rec = reconstruct(&res, &t);
        let mut err = 0.0f64;
        for j in 0..8 {
            for i in 0..2 {
                err += (rec[(i, j)] - C64::new(x.values()[(i, j)], 0.0)).norm_sqr();
            }
        }
        let rel = err.sqrt() / x.values().norm();
        assert!(rel <= 1e-8, "relative reconstruction error {rel}");
    }

    #[test]
    fn forecast_matches_direct_iteration() {
        let (x, t) = diag_system(8);
        let res = fit_exact(&x, &t, &RankSpec::Auto).unwrap();
        // Snapshots 9 and 10 continue the iteration at t = 8, 9.
        let horizon = TimeGrid::new(vec![8.0, 9.0]).unwrap();
        let f = forecast(&res, &horizon);
        for (k, tk) in [8.0f64, 9.0].iter().enumerate() {
            let expect = [0.9f64.powf(*tk), 0.5f64.powf(*tk)];
            for i in 0..2 {
                assert!((f[(i, k)] - C64::new(expect[i], 0.0)).norm() < 1e-8);
            }
        }
        let _ = t;
    }

    #[test]
    fn real_data_spectrum_is_conjugate_closed() {
        // Damped rotation: eigenvalues form a conjugate pair.
        let a = RMat::from_row_slice(2, 2, &[0.8, -0.5, 0.5, 0.8]);
        let x0 = RVec::from_vec(vec![1.0, 0.3]);
        let (x, t) = linear_system_data(&a, &x0, 10, 1.0).unwrap();
        let res = fit_exact(&x, &t, &RankSpec::Auto).unwrap();
        for j in 0..res.rank {
            let conj = res.eigs_discrete[j].conj();
            assert!(
                find_close(&res.eigs_discrete, conj, 1e-10),
                "conjugate of eigenvalue {j} missing"
            );
        }
    }

    #[test]
    fn ordering_is_by_descending_amplitude() {
        let b = CVec::from_vec(vec![C64::new(1.0, 0.0), C64::new(3.0, 0.0), C64::new(2.0, 0.0)]);
        let w = CVec::from_vec(vec![C64::new(0.0, 1.0); 3]);
        assert_eq!(amplitude_order(&b, &w), vec![1, 2, 0]);
        // Equal amplitudes: +Im first.
        let b = CVec::from_vec(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);
        let w = CVec::from_vec(vec![C64::new(0.0, -2.0), C64::new(0.0, 2.0)]);
        assert_eq!(amplitude_order(&b, &w), vec![1, 0]);
    }
}
