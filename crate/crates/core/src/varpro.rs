//! Optimized DMD: minimize ‖X − Φ_b·T(ω)‖_F over (Φ_b, ω) by variable
//! projection. The linear factor is eliminated through a pseudoinverse at
//! each step and Levenberg–Marquardt drives the eigenvalues, so unevenly
//! sampled time grids are handled naturally.
//!
//! Internally the problem is transposed: Y = Zᵀ ≈ Θ(ω)·C with
//! Θ(ω)_{kj} = exp(ω_j·t_k), where Z is the data projected onto its r leading
//! left singular directions. The Jacobian uses Kaufman's approximation to the
//! Golub–Pereyra form (the second projector term is dropped), and the complex
//! eigenvalues are optimized as 2r independent real parameters.

use crate::error::{DmdError, Result, Warning};
use crate::exact::{fit_exact, svd_truncate, RankSpec};
use crate::linalg::{eig_real, leading_left_basis, lstsq, to_complex, C64, CMat, CVec, RMat};
use crate::snapshots::{SnapshotMatrix, TimeGrid};

/// Condition-number threshold above which T(ω) is reported ill-conditioned.
pub const ILL_CONDITION_LIMIT: f64 = 1e12;

/// Levenberg–Marquardt controls for the variable-projection solver.
#[derive(Debug, Clone)]
pub struct VarproOptions {
    /// Convergence tolerance on relative residual improvement.
    pub tol: f64,
    /// Maximum accepted iterations.
    pub max_iter: usize,
    /// Initial damping value.
    pub init_damping: f64,
    /// Factor by which damping grows after a rejected step.
    pub damping_increase: f64,
    /// Damping growth attempts per iteration before giving up.
    pub max_damping_steps: usize,
    /// Print one tab-separated line per accepted iteration to stderr.
    pub verbose: bool,
}

impl Default for VarproOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iter: 30,
            init_damping: 1.0,
            damping_increase: 2.0,
            max_damping_steps: 52,
            verbose: false,
        }
    }
}

impl VarproOptions {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(DmdError::Config(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter < 1 {
            return Err(DmdError::Config("max_iter must be at least 1".into()));
        }
        if !(self.damping_increase > 1.0) {
            return Err(DmdError::Config(format!(
                "damping_increase must exceed 1, got {}",
                self.damping_increase
            )));
        }
        Ok(())
    }
}

/// Solver output: eigenvalues, the unnormalized spatial factor Φ_b, and the
/// full-space Frobenius residual after each accepted step.
#[derive(Debug, Clone)]
pub struct VarproSolution {
    pub omega: CVec,
    pub phi_b: CMat,
    pub residual_history: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub warnings: Vec<Warning>,
}

/// Basis matrix Θ(ω)_{kj} = exp(ω_j·t_k).
pub fn exp_basis(omega: &CVec, t: &TimeGrid) -> CMat {
    CMat::from_fn(t.len(), omega.len(), |k, j| (omega[j] * t.times()[k]).exp())
}

/// Minimizer Φ_b of ‖X − Φ_b·T(ω)‖_F for fixed ω (X is n×m, T is r×m).
/// Rank-deficient T(ω) falls back to the minimum-norm solution with an
/// `IllConditionedBasis` warning.
pub fn project_linear(x: &CMat, omega: &CVec, t: &TimeGrid) -> Result<(CMat, Vec<Warning>)> {
    if x.ncols() != t.len() {
        return Err(DmdError::Shape(format!(
            "data has {} columns but the grid has {} stamps",
            x.ncols(),
            t.len()
        )));
    }
    if t.len() < omega.len() {
        return Err(DmdError::Config(format!(
            "need at least {} samples to fit {} exponentials",
            omega.len(),
            omega.len()
        )));
    }
    let theta = exp_basis(omega, t);
    // X ≈ Φ_b Θᵀ  ⇔  Xᵀ ≈ Θ Φ_bᵀ (plain transposes).
    let (phib_t, rank, cond) = lstsq(&theta, &x.transpose(), 1e-12)?;
    let mut warnings = Vec::new();
    if rank < omega.len() || cond > ILL_CONDITION_LIMIT {
        warnings.push(Warning::IllConditionedBasis);
    }
    Ok((phib_t.transpose(), warnings))
}

/// Projected residual R = Y − Θ(ω)·pinv(Θ(ω))·Y and the coefficients C, in
/// the transposed formulation (Y is m×p with rows indexed by time).
pub fn projected_residual(y: &CMat, t: &TimeGrid, omega: &CVec) -> Result<(CMat, CMat)> {
    let ev = Eval::at(y, t, omega)?;
    Ok((ev.residual, ev.coeffs))
}

/// Kaufman variable-projection Jacobian: column j is the derivative of
/// vec(R) (column-major) with respect to Re ω_j. The derivative with respect
/// to Im ω_j is i times the same column.
pub fn kaufman_jacobian(y: &CMat, t: &TimeGrid, omega: &CVec) -> Result<CMat> {
    let ev = Eval::at(y, t, omega)?;
    let (m, p) = (y.nrows(), y.ncols());
    let r = omega.len();
    let mut jac = CMat::zeros(m * p, r);
    for j in 0..r {
        let q = ev.perp_scaled_column(t, j);
        // J_j = −q·C[j,:]: column l of the m×p matrix is −q·C[j,l].
        for l in 0..p {
            let c = ev.coeffs[(j, l)];
            for k in 0..m {
                jac[(l * m + k, j)] = -q[k] * c;
            }
        }
    }
    Ok(jac)
}

/// One linear solve at fixed ω: basis, orthonormal range, coefficients,
/// residual.
struct Eval {
    theta: CMat,
    /// Orthonormal basis of the numerical range of Θ.
    range: CMat,
    coeffs: CMat,
    residual: CMat,
    res_norm: f64,
    rank: usize,
    cond: f64,
}

impl Eval {
    fn at(y: &CMat, t: &TimeGrid, omega: &CVec) -> Result<Self> {
        let theta = exp_basis(omega, t);
        if !theta.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(DmdError::Numerical(
                "exponential basis overflowed; eigenvalue real parts too large".into(),
            ));
        }
        let svd = theta.clone().svd(true, true);
        let u = svd
            .u
            .as_ref()
            .ok_or_else(|| DmdError::Numerical("SVD did not produce U".into()))?;
        let v_t = svd
            .v_t
            .as_ref()
            .ok_or_else(|| DmdError::Numerical("SVD did not produce V^H".into()))?;
        let s = &svd.singular_values;
        let smax = s.iter().fold(0.0f64, |a, &b| a.max(b));
        let rank = s.iter().filter(|&&x| x > 1e-12 * smax).count().max(if smax > 0.0 { 1 } else { 0 });
        let cond = if rank > 0 && s[s.len() - 1] > 0.0 {
            s[0] / s[s.len() - 1]
        } else {
            f64::INFINITY
        };
        let range = u.columns(0, rank).clone_owned();
        // C = V_r Σ_r⁻¹ U_rᴴ Y
        let mut uhy = range.adjoint() * y;
        for i in 0..rank {
            let inv = 1.0 / s[i];
            for c in 0..uhy.ncols() {
                uhy[(i, c)] *= inv;
            }
        }
        let coeffs = v_t.rows(0, rank).adjoint() * uhy;
        let residual = y - &theta * &coeffs;
        let res_norm = residual.norm();
        Ok(Self { theta, range, coeffs, residual, res_norm, rank, cond })
    }

    /// q_j = P⊥·(t ⊙ θ_j), the projected derivative direction for column j.
    fn perp_scaled_column(&self, t: &TimeGrid, j: usize) -> CVec {
        let m = self.theta.nrows();
        let d = CVec::from_fn(m, |k, _| self.theta[(k, j)] * t.times()[k]);
        let coef = self.range.adjoint() * &d;
        &d - &self.range * coef
    }
}

/// Initial eigenvalues for the nonlinear solve. Uniform grids delegate to
/// exact DMD; uneven grids project the data to rank r and fit a linear
/// generator dz/dt ≈ G·z by central differences, taking its eigenvalues.
pub fn init_eigs(x: &SnapshotMatrix, t: &TimeGrid, rank: &RankSpec) -> Result<(CVec, Vec<Warning>)> {
    if t.len() != x.n_time() {
        return Err(DmdError::Shape(format!(
            "time grid length {} does not match {} snapshots",
            t.len(),
            x.n_time()
        )));
    }
    if t.uniform_step().is_some() && x.n_time() >= 3 {
        let res = fit_exact(x, t, rank)?;
        return Ok((res.eigs_continuous, res.warnings));
    }
    if x.n_time() < 3 {
        return Err(DmdError::Validation(
            "need at least 3 snapshots to initialize on an uneven grid".into(),
        ));
    }
    let tsvd = svd_truncate(x.values(), rank)?;
    let r = tsvd.rank;
    if r == 0 {
        return Err(DmdError::DegenerateData(
            "data matrix has numerical rank zero".into(),
        ));
    }
    let z = tsvd.u.transpose() * x.values(); // r × m
    let m = z.ncols();
    let ts = t.times();
    // Uneven-grid central differences on the interior stamps.
    let mut zdot = RMat::zeros(r, m - 2);
    let mut zint = RMat::zeros(r, m - 2);
    for k in 1..m - 1 {
        let h1 = ts[k] - ts[k - 1];
        let h2 = ts[k + 1] - ts[k];
        let (a, b, c) = (
            -h2 / (h1 * (h1 + h2)),
            (h2 - h1) / (h1 * h2),
            h1 / (h2 * (h1 + h2)),
        );
        for i in 0..r {
            zdot[(i, k - 1)] = a * z[(i, k - 1)] + b * z[(i, k)] + c * z[(i, k + 1)];
            zint[(i, k - 1)] = z[(i, k)];
        }
    }
    // Least-squares generator: zdot ≈ G·zint  ⇔  zintᵀ·Gᵀ ≈ zdotᵀ.
    let (gt, _, _) = lstsq(&to_complex(&zint.transpose()), &to_complex(&zdot.transpose()), 1e-12)?;
    let g = RMat::from_fn(r, r, |i, j| gt[(j, i)].re);
    let (eigs, _) = eig_real(&g)?;
    Ok((eigs, tsvd.warnings))
}

/// Variable-projection Levenberg–Marquardt. A damped step is applied only
/// when it improves the residual by at least `tol` relative; an improving but
/// sub-tolerance step signals convergence at the current iterate, which makes
/// converged points exact fixed points of the solver (re-solving from a
/// solution returns it unchanged).
pub fn solve_varpro(
    x: &SnapshotMatrix,
    t: &TimeGrid,
    rank: &RankSpec,
    init: &CVec,
    opts: &VarproOptions,
) -> Result<VarproSolution> {
    opts.validate()?;
    if t.len() != x.n_time() {
        return Err(DmdError::Shape(format!(
            "time grid length {} does not match {} snapshots",
            t.len(),
            x.n_time()
        )));
    }
    let (n, m) = (x.n_space(), x.n_time());
    let r = init.len();
    if r == 0 || r > n.min(m) {
        return Err(DmdError::Config(format!(
            "initial eigenvalue count {r} out of range for a {n}x{m} matrix"
        )));
    }
    if m <= r {
        return Err(DmdError::Config(format!(
            "need more than {r} snapshots to fit {r} exponentials, got {m}"
        )));
    }
    let resolved = match rank {
        RankSpec::Exact(rr) => *rr,
        other => svd_truncate(x.values(), other)?.rank,
    };
    if resolved != r {
        return Err(DmdError::Config(format!(
            "rank {resolved} does not match the {r} initial eigenvalues"
        )));
    }

    // Project the data onto its r leading left singular directions; the
    // energy outside that subspace is a constant summand of the residual.
    // Computed as the norm of the explicit complement X − U·UᵀX rather than
    // ‖X‖² − ‖Z‖², which cancels catastrophically when the projection is
    // lossless.
    let u_basis = leading_left_basis(x.values(), r)?;
    let z = u_basis.transpose() * x.values();
    let discard_sq = (x.values() - &u_basis * &z).norm_squared();
    let y = to_complex(&z).transpose(); // m × r, rows indexed by time

    let full_res = |proj: f64| (proj * proj + discard_sq).sqrt();
    let res_floor = 1e-13 * x.values().norm().max(1.0);

    let mut omega = init.clone();
    let mut eval = Eval::at(&y, t, &omega)?;
    if !eval.res_norm.is_finite() {
        return Err(DmdError::Numerical("non-finite residual at the initial point".into()));
    }
    let mut warnings: Vec<Warning> = Vec::new();
    let mut history = vec![full_res(eval.res_norm)];
    let mut converged = false;
    let mut iterations = 0usize;
    let mut damping = opts.init_damping.max(f64::MIN_POSITIVE);

    if history[0] > res_floor {
        'outer: for iter in 1..=opts.max_iter {
            // Gram data for the Kaufman Jacobian at the current iterate.
            let q: Vec<CVec> = (0..r).map(|j| eval.perp_scaled_column(t, j)).collect();
            let s_gram = &eval.coeffs * eval.coeffs.adjoint(); // r×r, S = C Cᴴ
            let rc_h = &eval.residual * eval.coeffs.adjoint(); // m×r, R Cᴴ
            let mut k_gram = CMat::zeros(r, r);
            let mut w = CVec::zeros(r);
            for j in 0..r {
                for kk in 0..r {
                    k_gram[(j, kk)] = q[j].dotc(&q[kk]) * s_gram[(j, kk)].conj();
                }
                w[j] = -q[j].dotc(&rc_h.column(j).clone_owned());
            }
            // Real 2r×2r normal equations over (Re ω, Im ω).
            let mut g_mat = RMat::zeros(2 * r, 2 * r);
            let mut g_vec = RMat::zeros(2 * r, 1);
            for j in 0..r {
                for kk in 0..r {
                    g_mat[(j, kk)] = k_gram[(j, kk)].re;
                    g_mat[(j, r + kk)] = -k_gram[(j, kk)].im;
                    g_mat[(r + j, kk)] = k_gram[(j, kk)].im;
                    g_mat[(r + j, r + kk)] = k_gram[(j, kk)].re;
                }
                g_vec[(j, 0)] = w[j].re;
                g_vec[(r + j, 0)] = w[j].im;
            }
            let max_diag = (0..2 * r).map(|i| g_mat[(i, i)]).fold(0.0f64, f64::max);

            // First-order stationarity: nothing to gain from any step.
            let grad_inf = (0..2 * r).map(|i| g_vec[(i, 0)].abs()).fold(0.0f64, f64::max);
            if grad_inf <= 1e-8 * max_diag.sqrt() * eval.res_norm {
                converged = true;
                break 'outer;
            }

            let mut accepted = false;
            for _ in 0..opts.max_damping_steps {
                let mut lhs = g_mat.clone();
                for i in 0..2 * r {
                    let d = g_mat[(i, i)].max(1e-12 * max_diag.max(f64::MIN_POSITIVE));
                    lhs[(i, i)] += damping * d;
                }
                let step = match lhs.lu().solve(&(-&g_vec)) {
                    Some(s) if s.iter().all(|v| v.is_finite()) => s,
                    _ => {
                        damping *= opts.damping_increase;
                        continue;
                    }
                };
                let trial_omega =
                    CVec::from_fn(r, |j, _| omega[j] + C64::new(step[(j, 0)], step[(r + j, 0)]));
                let trial = match Eval::at(&y, t, &trial_omega) {
                    Ok(e) if e.res_norm.is_finite() => e,
                    _ => {
                        damping *= opts.damping_increase;
                        continue;
                    }
                };
                let cur = full_res(eval.res_norm);
                let new = full_res(trial.res_norm);
                if new < cur {
                    let rel_improvement = (cur - new) / cur.max(f64::MIN_POSITIVE);
                    if rel_improvement < opts.tol {
                        // Improvement below tolerance: converge at the
                        // current iterate, discarding the step.
                        converged = true;
                        break 'outer;
                    }
                    omega = trial_omega;
                    eval = trial;
                    history.push(new);
                    iterations += 1;
                    damping = (damping / opts.damping_increase).max(1e-16);
                    accepted = true;
                    if opts.verbose {
                        eprintln!("{iter}\t{new:e}\t{damping:e}");
                    }
                    break;
                }
                damping *= opts.damping_increase;
            }
            if !accepted {
                if iterations == 0 {
                    // Line search failed outright at a non-stationary start.
                    warnings.push(Warning::Stall);
                    converged = false;
                } else {
                    // No further improvement possible: improvement 0 < tol.
                    converged = true;
                }
                break 'outer;
            }
            if full_res(eval.res_norm) <= res_floor {
                converged = true;
                break 'outer;
            }
        }
    } else {
        converged = true;
    }

    if eval.rank < r || eval.cond > ILL_CONDITION_LIMIT {
        warnings.push(Warning::IllConditionedBasis);
    }
    // Lift Φ_b = U_r·Cᵀ back to state space.
    let phi_b = to_complex(&u_basis) * eval.coeffs.transpose();
    Ok(VarproSolution {
        omega,
        phi_b,
        residual_history: history,
        converged,
        iterations,
        warnings,
    })
}

/// Factor Φ_b into unit-norm modes and non-negative amplitudes
/// (b_j = ‖column j‖). Zero columns get b_j = 0, an arbitrary unit mode, and
/// an inactive flag.
pub fn split_solution(sol: &VarproSolution) -> (CMat, CVec, Vec<bool>) {
    split_phi_b(&sol.phi_b)
}

/// See [`split_solution`]; operates on a bare spatial factor.
pub fn split_phi_b(phi_b: &CMat) -> (CMat, CVec, Vec<bool>) {
    let (n, r) = (phi_b.nrows(), phi_b.ncols());
    let mut modes = CMat::zeros(n, r);
    let mut b = CVec::zeros(r);
    let mut active = vec![true; r];
    for j in 0..r {
        let col = phi_b.column(j).clone_owned();
        let norm = col.norm();
        if norm > 0.0 {
            modes.set_column(j, &(col / C64::new(norm, 0.0)));
            b[j] = C64::new(norm, 0.0);
        } else {
            modes[(0, j)] = C64::new(1.0, 0.0);
            active[j] = false;
        }
    }
    (modes, b, active)
}

/// Optimized DMD as a fitting pipeline: initialize, solve, split, order.
/// On uneven grids the discrete eigenvalues are nominal (mean step).
pub fn fit_optimized(
    x: &SnapshotMatrix,
    t: &TimeGrid,
    rank: &RankSpec,
    opts: &VarproOptions,
) -> Result<crate::exact::DmdResult> {
    let (init, mut warnings) = init_eigs(x, t, rank)?;
    let sol = solve_varpro(x, t, &RankSpec::Exact(init.len()), &init, opts)?;
    warnings.extend(sol.warnings.clone());
    let (modes, b, _) = split_solution(&sol);
    let dt = t.uniform_step().unwrap_or_else(|| t.mean_step());
    let r = sol.omega.len();
    let lambda = CVec::from_fn(r, |j, _| (sol.omega[j] * dt).exp());
    let perm = crate::exact::amplitude_order(&b, &sol.omega);
    let mut pm = CMat::zeros(modes.nrows(), r);
    for (c, &p) in perm.iter().enumerate() {
        pm.set_column(c, &modes.column(p));
    }
    Ok(crate::exact::DmdResult {
        modes: pm,
        eigs_discrete: CVec::from_fn(r, |j, _| lambda[perm[j]]),
        eigs_continuous: CVec::from_fn(r, |j, _| sol.omega[perm[j]]),
        amplitudes: CVec::from_fn(r, |j, _| b[perm[j]]),
        rank: r,
        time: t.clone(),
        warnings,
    })
}
