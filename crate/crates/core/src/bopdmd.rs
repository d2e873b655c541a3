//! Bagging and optimization for DMD: run the variable-projection solver on
//! many random column subsets of the data, apply eigenvalue constraints to
//! each trial, align trial modes against a reference fit, and report
//! mean/spread statistics alongside the averaged model.
//!
//! Trials are independent and seeded per-index, so results are identical for
//! any thread count.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{DmdError, Result};
use crate::exact::{amplitude_order, DmdResult, RankSpec};
use crate::linalg::{to_complex, C64, CMat, CVec};
use crate::snapshots::{SnapshotMatrix, TimeGrid};
use crate::varpro::{
    init_eigs, project_linear, solve_varpro, split_phi_b, VarproOptions,
};

/// How many snapshot columns each bagging trial sees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrialSize {
    /// Fraction of the snapshot count in (0, 1]; the subset size is the
    /// ceiling of fraction·m.
    Fraction(f64),
    /// Absolute number of columns.
    Count(usize),
}

impl TrialSize {
    fn resolve(&self, m: usize) -> Result<usize> {
        match *self {
            TrialSize::Fraction(f) => {
                if !(f > 0.0 && f <= 1.0) {
                    return Err(DmdError::Config(format!(
                        "trial size fraction must lie in (0, 1], got {f}"
                    )));
                }
                Ok(((f * m as f64).ceil() as usize).min(m))
            }
            TrialSize::Count(c) => {
                if c == 0 || c > m {
                    return Err(DmdError::Config(format!(
                        "trial size {c} out of range for {m} snapshots"
                    )));
                }
                Ok(c)
            }
        }
    }
}

/// Structural constraints applied to each trial's eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EigConstraint {
    /// Project every eigenvalue onto the imaginary axis.
    Imag,
    /// Pair eigenvalues with their nearest conjugates and average each pair
    /// into an exact conjugate pair. Applied before the other constraints.
    ConjugatePairs,
    /// Clamp real parts to be non-positive.
    Stable,
}

impl FromStr for EigConstraint {
    type Err = DmdError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "imag" => Ok(EigConstraint::Imag),
            "conjugate_pairs" => Ok(EigConstraint::ConjugatePairs),
            "stable" => Ok(EigConstraint::Stable),
            other => Err(DmdError::Config(format!(
                "unknown eigenvalue constraint '{other}' (expected imag, conjugate_pairs, or stable)"
            ))),
        }
    }
}

impl fmt::Display for EigConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EigConstraint::Imag => write!(f, "imag"),
            EigConstraint::ConjugatePairs => write!(f, "conjugate_pairs"),
            EigConstraint::Stable => write!(f, "stable"),
        }
    }
}

/// Bagging configuration.
#[derive(Debug, Clone)]
pub struct BopConfig {
    pub num_trials: usize,
    pub trial_size: TrialSize,
    pub eig_constraints: Vec<EigConstraint>,
    pub seed: u64,
    pub varpro: VarproOptions,
}

impl Default for BopConfig {
    fn default() -> Self {
        Self {
            num_trials: 100,
            trial_size: TrialSize::Fraction(0.8),
            eig_constraints: Vec::new(),
            seed: 0,
            varpro: VarproOptions::default(),
        }
    }
}

/// Cross-trial spread of the bagged model. Standard deviations are
/// population statistics stored componentwise: `re` holds the deviation of
/// the real parts and `im` of the imaginary parts.
#[derive(Debug, Clone)]
pub struct BagStatistics {
    pub omega_mean: CVec,
    pub omega_std: CVec,
    pub amplitude_mean: CVec,
    pub amplitude_std: CVec,
    pub modes_mean: CMat,
    pub trials_converged: usize,
}

/// Apply eigenvalue constraints. `ConjugatePairs` runs first: unpaired
/// eigenvalues are greedily matched to their nearest conjugate partner and
/// each pair (ω_a, ω_b) is replaced by (μ, conj(μ)) with
/// μ = (ω_a + conj(ω_b))/2; with an odd count the leftover is unchanged.
/// `Imag` then zeroes real parts; `Stable` clamps them to ≤ 0. Requesting
/// both `Imag` and `Stable` is a configuration error.
pub fn apply_constraints(omega: &CVec, constraints: &[EigConstraint]) -> Result<CVec> {
    let imag = constraints.contains(&EigConstraint::Imag);
    let stable = constraints.contains(&EigConstraint::Stable);
    let pairs = constraints.contains(&EigConstraint::ConjugatePairs);
    if imag && stable {
        return Err(DmdError::Config(
            "eigenvalue constraints 'imag' and 'stable' are mutually exclusive".into(),
        ));
    }
    let mut out = omega.clone();
    let r = out.len();
    if pairs {
        let mut unpaired: Vec<usize> = (0..r).collect();
        while unpaired.len() >= 2 {
            // Globally nearest conjugate pair among the remaining entries.
            let (mut best, mut best_cost) = ((0usize, 0usize), f64::INFINITY);
            for (pi, &i) in unpaired.iter().enumerate() {
                for &j in unpaired.iter().skip(pi + 1) {
                    let cost = (out[i] - out[j].conj()).norm();
                    if cost < best_cost {
                        best_cost = cost;
                        best = (i, j);
                    }
                }
            }
            let (i, j) = best;
            let mu = (out[i] + out[j].conj()) * C64::new(0.5, 0.0);
            out[i] = mu;
            out[j] = mu.conj();
            unpaired.retain(|&k| k != i && k != j);
        }
    }
    for k in 0..r {
        if imag {
            out[k] = C64::new(0.0, out[k].im);
        } else if stable {
            out[k] = C64::new(out[k].re.min(0.0), out[k].im);
        }
    }
    Ok(out)
}

/// splitmix64 finalizer over (seed, trial index): decorrelated per-trial
/// streams that do not depend on thread scheduling.
fn trial_seed(seed: u64, trial: u64) -> u64 {
    let mut z = seed.wrapping_add((trial + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Minimum-cost assignment of trial eigenvalues to reference slots under
/// squared distance. Exact bitmask dynamic program for r ≤ 16, greedy
/// nearest-slot fallback beyond. Returns perm with perm[slot] = trial index.
fn align_to_reference(trial: &CVec, reference: &CVec) -> Vec<usize> {
    let r = reference.len();
    if r <= 16 {
        let full = (1usize << r) - 1;
        let mut dp = vec![f64::INFINITY; full + 1];
        let mut choice = vec![usize::MAX; full + 1];
        dp[0] = 0.0;
        for mask in 0..full {
            if !dp[mask].is_finite() {
                continue;
            }
            let i = mask.count_ones() as usize; // next trial eigenvalue
            for j in 0..r {
                if mask & (1 << j) != 0 {
                    continue;
                }
                let cost = dp[mask] + (trial[i] - reference[j]).norm_sqr();
                let nm = mask | (1 << j);
                if cost < dp[nm] {
                    dp[nm] = cost;
                    choice[nm] = j;
                }
            }
        }
        let mut perm = vec![0usize; r];
        let mut mask = full;
        while mask != 0 {
            let i = mask.count_ones() as usize - 1;
            let j = choice[mask];
            perm[j] = i;
            mask &= !(1 << j);
        }
        perm
    } else {
        let mut used = vec![false; r];
        let mut perm = vec![0usize; r];
        for i in 0..r {
            let mut best = usize::MAX;
            let mut best_cost = f64::INFINITY;
            for (j, &u) in used.iter().enumerate() {
                if u {
                    continue;
                }
                let cost = (trial[i] - reference[j]).norm_sqr();
                if cost < best_cost {
                    best_cost = cost;
                    best = j;
                }
            }
            used[best] = true;
            perm[best] = i;
        }
        perm
    }
}

struct TrialOutcome {
    omega: CVec,
    modes: CMat,
    amps: CVec,
    /// Unit phase e^{iδ} removed from each mode during canonicalization.
    phases: CVec,
    converged: bool,
}

/// Bagged, optimized DMD. A reference variable-projection fit on the full
/// data seeds `num_trials` fits on random column subsets (drawn without
/// replacement, kept in temporal order). Each trial's eigenvalues are
/// constrained, its spatial factor is re-solved under the constrained
/// eigenvalues, and its modes are aligned to the reference before averaging.
pub fn fit_bop(
    x: &SnapshotMatrix,
    t: &TimeGrid,
    rank: &RankSpec,
    cfg: &BopConfig,
) -> Result<(DmdResult, BagStatistics)> {
    if cfg.num_trials == 0 {
        return Err(DmdError::Config("num_trials must be at least 1".into()));
    }
    // Validates constraint compatibility before any heavy work.
    apply_constraints(&CVec::zeros(0), &cfg.eig_constraints)?;
    let m = x.n_time();
    if t.len() != m {
        return Err(DmdError::Shape(format!(
            "time grid length {} does not match {} snapshots",
            t.len(),
            m
        )));
    }
    let subset_size = cfg.trial_size.resolve(m)?;

    // Reference fit on the full data.
    let (init, mut warnings) = init_eigs(x, t, rank)?;
    let r = init.len();
    if subset_size < 2 * r {
        return Err(DmdError::Config(format!(
            "trial size {subset_size} is too small for rank {r}; need at least {}",
            2 * r
        )));
    }
    let ref_sol = solve_varpro(x, t, &RankSpec::Exact(r), &init, &cfg.varpro)?;
    warnings.extend(ref_sol.warnings.clone());
    let omega_ref = apply_constraints(&ref_sol.omega, &cfg.eig_constraints)?;
    let xc = to_complex(x.values());
    let (phi_ref_b, _) = project_linear(&xc, &omega_ref, t)?;
    let (phi_ref, _, _) = split_phi_b(&phi_ref_b);
    // Anchor rows: the largest-magnitude entry of each reference mode pins
    // the phase convention used to average trial modes.
    let anchors: Vec<usize> = (0..r)
        .map(|j| {
            let col = phi_ref.column(j);
            (0..col.len())
                .max_by(|&a, &b| col[a].norm().partial_cmp(&col[b].norm()).unwrap())
                .unwrap_or(0)
        })
        .collect();

    let run_trial = |k: usize| -> Result<TrialOutcome> {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, k as u64));
        let mut idx = rand::seq::index::sample(&mut rng, m, subset_size).into_vec();
        idx.sort_unstable();
        let sub_x = SnapshotMatrix::new(x.values().select_columns(idx.iter()))?;
        let sub_t = TimeGrid::new(idx.iter().map(|&i| t.times()[i]).collect())?;
        let sol = solve_varpro(&sub_x, &sub_t, &RankSpec::Exact(r), &ref_sol.omega, &cfg.varpro)?;
        let omega = apply_constraints(&sol.omega, &cfg.eig_constraints)?;
        let (phi_b, _) = project_linear(&to_complex(sub_x.values()), &omega, &sub_t)?;
        let (modes_raw, amps_raw, _) = split_phi_b(&phi_b);
        let perm = align_to_reference(&omega, &omega_ref);
        let n = modes_raw.nrows();
        let mut modes = CMat::zeros(n, r);
        let mut amps = CVec::zeros(r);
        let mut phases = CVec::zeros(r);
        let mut omega_aligned = CVec::zeros(r);
        for slot in 0..r {
            let i = perm[slot];
            omega_aligned[slot] = omega[i];
            let col = modes_raw.column(i).clone_owned();
            let anchor_val = col[anchors[slot]];
            let phase = if anchor_val.norm() > 0.0 {
                anchor_val / anchor_val.norm()
            } else {
                C64::new(1.0, 0.0)
            };
            modes.set_column(slot, &(col / phase));
            amps[slot] = amps_raw[i] * phase;
            phases[slot] = phase;
        }
        Ok(TrialOutcome { omega: omega_aligned, modes, amps, phases, converged: sol.converged })
    };

    let raw: Vec<Result<TrialOutcome>> =
        (0..cfg.num_trials).into_par_iter().map(run_trial).collect();
    let mut outcomes = Vec::with_capacity(cfg.num_trials);
    let mut last_err = None;
    for res in raw {
        match res {
            Ok(o) => outcomes.push(o),
            Err(e) => last_err = Some(e),
        }
    }
    if outcomes.is_empty() {
        let detail = last_err.map(|e| e.to_string()).unwrap_or_default();
        return Err(DmdError::BaggingFailed(format!(
            "all {} trials failed; last error: {detail}",
            cfg.num_trials
        )));
    }

    let n_tr = outcomes.len() as f64;
    let n_space = x.n_space();
    let mut omega_mean = CVec::zeros(r);
    let mut amp_mean = CVec::zeros(r);
    let mut modes_mean = CMat::zeros(n_space, r);
    let mut phase_sum = CVec::zeros(r);
    for o in &outcomes {
        omega_mean += &o.omega;
        amp_mean += &o.amps;
        modes_mean += &o.modes;
        phase_sum += &o.phases;
    }
    omega_mean /= C64::new(n_tr, 0.0);
    amp_mean /= C64::new(n_tr, 0.0);
    modes_mean /= C64::new(n_tr, 0.0);

    let mut omega_std = CVec::zeros(r);
    let mut amp_std = CVec::zeros(r);
    for j in 0..r {
        let (mut sre, mut sim, mut are, mut aim) = (0.0, 0.0, 0.0, 0.0);
        for o in &outcomes {
            sre += (o.omega[j].re - omega_mean[j].re).powi(2);
            sim += (o.omega[j].im - omega_mean[j].im).powi(2);
            are += (o.amps[j].re - amp_mean[j].re).powi(2);
            aim += (o.amps[j].im - amp_mean[j].im).powi(2);
        }
        omega_std[j] = C64::new((sre / n_tr).sqrt(), (sim / n_tr).sqrt());
        amp_std[j] = C64::new((are / n_tr).sqrt(), (aim / n_tr).sqrt());
    }

    // Undo the anchor-phase gauge by the circular mean of the removed
    // phases, so the averaged model matches the raw trial gauge.
    for j in 0..r {
        let gauge = if phase_sum[j].norm() > 0.0 {
            phase_sum[j] / phase_sum[j].norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let col = modes_mean.column(j) * gauge;
        modes_mean.set_column(j, &col);
        amp_mean[j] /= gauge;
    }

    // Constraints hold exactly on the averaged eigenvalues as well.
    let omega_final = apply_constraints(&omega_mean, &cfg.eig_constraints)?;
    let trials_converged = outcomes.iter().filter(|o| o.converged).count();

    // Point estimate: unit-norm averaged modes, norms folded into the
    // amplitudes.
    let mut modes_unit = CMat::zeros(n_space, r);
    let mut amps_final = CVec::zeros(r);
    for j in 0..r {
        let col = modes_mean.column(j).clone_owned();
        let norm = col.norm();
        if norm > 0.0 {
            modes_unit.set_column(j, &(col / C64::new(norm, 0.0)));
            amps_final[j] = amp_mean[j] * norm;
        } else {
            modes_unit[(0, j)] = C64::new(1.0, 0.0);
        }
    }
    let dt = t.uniform_step().unwrap_or_else(|| t.mean_step());
    let order = amplitude_order(&amps_final, &omega_final);
    let pick_vec = |v: &CVec| CVec::from_fn(r, |j, _| v[order[j]]);
    let pick_mat = |mm: &CMat| {
        let mut out = CMat::zeros(n_space, r);
        for (c, &p) in order.iter().enumerate() {
            out.set_column(c, &mm.column(p));
        }
        out
    };
    let result = DmdResult {
        modes: pick_mat(&modes_unit),
        eigs_discrete: CVec::from_fn(r, |j, _| (omega_final[order[j]] * dt).exp()),
        eigs_continuous: pick_vec(&omega_final),
        amplitudes: pick_vec(&amps_final),
        rank: r,
        time: t.clone(),
        warnings,
    };
    let stats = BagStatistics {
        omega_mean: pick_vec(&omega_final),
        omega_std: pick_vec(&omega_std),
        amplitude_mean: pick_vec(&amp_mean),
        amplitude_std: pick_vec(&amp_std),
        modes_mean: pick_mat(&modes_mean),
        trials_converged,
    };
    Ok((result, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::add_noise;
    use crate::linalg::RMat;
    use crate::varpro::fit_optimized;

    fn cv(v: Vec<C64>) -> CVec {
        CVec::from_vec(v)
    }

    fn tone_matrix(sigma: f64, nu: f64, ts: &[f64]) -> RMat {
        RMat::from_fn(2, ts.len(), |i, k| {
            let d = (sigma * ts[k]).exp();
            if i == 0 {
                d * (nu * ts[k]).cos()
            } else {
                d * (nu * ts[k]).sin()
            }
        })
    }

    #[test]
    fn imag_constraint_zeroes_real_parts() {
        let out = apply_constraints(&cv(vec![C64::new(0.5, 2.0)]), &[EigConstraint::Imag]).unwrap();
        assert_eq!(out[0].re, 0.0);
        assert_eq!(out[0].im, 2.0);
    }

    #[test]
    fn conjugate_pairs_average_nearest_partners() {
        let out = apply_constraints(
            &cv(vec![C64::new(0.1, 2.0), C64::new(-0.1, -1.9)]),
            &[EigConstraint::ConjugatePairs],
        )
        .unwrap();
        assert!((out[0] - C64::new(0.0, 1.95)).norm() < 1e-15);
        assert!((out[1] - C64::new(0.0, -1.95)).norm() < 1e-15);
        assert_eq!(out[0], out[1].conj());
    }

    #[test]
    fn pairing_runs_before_imag_projection() {
        for order in [
            vec![EigConstraint::Imag, EigConstraint::ConjugatePairs],
            vec![EigConstraint::ConjugatePairs, EigConstraint::Imag],
        ] {
            let out = apply_constraints(
                &cv(vec![C64::new(0.3, 2.29), C64::new(0.3, -2.31)]),
                &order,
            )
            .unwrap();
            assert!((out[0] - C64::new(0.0, 2.3)).norm() < 1e-12);
            assert!((out[1] - C64::new(0.0, -2.3)).norm() < 1e-12);
            assert_eq!(out[0].re, 0.0);
        }
    }

    #[test]
    fn stable_clamps_only_positive_real_parts() {
        let out = apply_constraints(
            &cv(vec![C64::new(0.5, 2.0), C64::new(-0.3, 1.0)]),
            &[EigConstraint::Stable],
        )
        .unwrap();
        assert_eq!(out[0], C64::new(0.0, 2.0));
        assert_eq!(out[1], C64::new(-0.3, 1.0));
    }

    #[test]
    fn odd_count_leaves_one_eigenvalue_unpaired() {
        let out = apply_constraints(
            &cv(vec![C64::new(0.0, 2.0), C64::new(0.0, -2.0), C64::new(-0.5, 0.0)]),
            &[EigConstraint::ConjugatePairs],
        )
        .unwrap();
        assert_eq!(out[2], C64::new(-0.5, 0.0));
        assert_eq!(out[0], out[1].conj());
    }

    #[test]
    fn imag_and_stable_conflict() {
        match apply_constraints(&cv(vec![]), &[EigConstraint::Imag, EigConstraint::Stable]) {
            Err(DmdError::Config(_)) => {}
            other => panic!("expected ConfigError, got {other:?}"),
        }
    }

    #[test]
    fn constraint_names_round_trip() {
        for c in [EigConstraint::Imag, EigConstraint::ConjugatePairs, EigConstraint::Stable] {
            assert_eq!(c.to_string().parse::<EigConstraint>().unwrap(), c);
        }
        assert!("ellipse".parse::<EigConstraint>().is_err());
    }

    #[test]
    fn alignment_restores_a_shuffle() {
        let reference = cv(vec![
            C64::new(0.0, 2.0),
            C64::new(0.0, -2.0),
            C64::new(-0.5, 0.3),
        ]);
        let shuffled = cv(vec![
            C64::new(-0.49, 0.31),
            C64::new(0.01, 2.02),
            C64::new(0.0, -1.98),
        ]);
        let perm = align_to_reference(&shuffled, &reference);
        assert_eq!(perm, vec![1, 2, 0]);
    }

    #[test]
    fn trial_seeds_are_distinct_and_deterministic() {
        let a: Vec<u64> = (0..32).map(|k| trial_seed(7, k)).collect();
        let b: Vec<u64> = (0..32).map(|k| trial_seed(7, k)).collect();
        assert_eq!(a, b);
        let mut uniq = a.clone();
        uniq.sort_unstable();
        uniq.dedup();
        assert_eq!(uniq.len(), a.len());
    }

    #[test]
    fn full_coverage_bagging_equals_single_fit() {
        let t = TimeGrid::uniform(40, 0.0, 0.15).unwrap();
        let x = SnapshotMatrix::new(tone_matrix(-0.1, 2.0, t.times())).unwrap();
        let single = fit_optimized(&x, &t, &RankSpec::Exact(2), &VarproOptions::default()).unwrap();
        let cfg = BopConfig {
            num_trials: 5,
            trial_size: TrialSize::Fraction(1.0),
            seed: 7,
            ..BopConfig::default()
        };
        let (bagged, stats) = fit_bop(&x, &t, &RankSpec::Exact(2), &cfg).unwrap();
        assert_eq!(stats.trials_converged, 5);
        assert!((&bagged.eigs_continuous - &single.eigs_continuous).norm() < 1e-12);
        assert!((&bagged.amplitudes - &single.amplitudes).norm() < 1e-12);
        assert!((&bagged.modes - &single.modes).norm() < 1e-12);
        assert!(stats.omega_std.iter().all(|s| s.re < 1e-13 && s.im < 1e-13));
    }

    #[test]
    fn constrained_bagging_recovers_tone_from_noise() {
        let t = TimeGrid::uniform(60, 0.0, 0.12).unwrap();
        let clean = SnapshotMatrix::new(tone_matrix(0.0, 2.0, t.times())).unwrap();
        let x = add_noise(&clean, 0.02, 13).unwrap();
        let cfg = BopConfig {
            num_trials: 24,
            trial_size: TrialSize::Fraction(0.8),
            eig_constraints: vec![EigConstraint::Imag, EigConstraint::ConjugatePairs],
            seed: 99,
            ..BopConfig::default()
        };
        let (res, stats) = fit_bop(&x, &t, &RankSpec::Exact(2), &cfg).unwrap();
        assert!(stats.trials_converged > 0);
        for j in 0..2 {
            assert_eq!(res.eigs_continuous[j].re, 0.0, "imag constraint must hold exactly");
            assert!((res.eigs_continuous[j].im.abs() - 2.0).abs() < 0.05);
            assert!(stats.omega_std[j].im.is_finite());
        }
        assert_eq!(res.eigs_continuous[0], res.eigs_continuous[1].conj());
        assert!(stats.omega_std.iter().any(|s| s.im > 0.0));
    }

    #[test]
    fn same_seed_reproduces_bitwise() {
        let t = TimeGrid::uniform(36, 0.0, 0.2).unwrap();
        let clean = SnapshotMatrix::new(tone_matrix(-0.05, 1.3, t.times())).unwrap();
        let x = add_noise(&clean, 0.01, 4).unwrap();
        let cfg = BopConfig {
            num_trials: 10,
            trial_size: TrialSize::Count(24),
            seed: 42,
            ..BopConfig::default()
        };
        let (a, sa) = fit_bop(&x, &t, &RankSpec::Exact(2), &cfg).unwrap();
        let (b, sb) = fit_bop(&x, &t, &RankSpec::Exact(2), &cfg).unwrap();
        assert_eq!(a.eigs_continuous.as_slice(), b.eigs_continuous.as_slice());
        assert_eq!(a.amplitudes.as_slice(), b.amplitudes.as_slice());
        assert_eq!(sa.omega_std.as_slice(), sb.omega_std.as_slice());
    }

    #[test]
    fn config_validation_errors() {
        let t = TimeGrid::uniform(20, 0.0, 0.3).unwrap();
        let x = SnapshotMatrix::new(tone_matrix(0.0, 1.0, t.times())).unwrap();
        let base = BopConfig::default();
        for cfg in [
            BopConfig { num_trials: 0, ..base.clone() },
            BopConfig { trial_size: TrialSize::Fraction(0.0), ..base.clone() },
            BopConfig { trial_size: TrialSize::Fraction(1.2), ..base.clone() },
            BopConfig { trial_size: TrialSize::Count(21), ..base.clone() },
            BopConfig { trial_size: TrialSize::Count(3), ..base.clone() },
            BopConfig {
                eig_constraints: vec![EigConstraint::Imag, EigConstraint::Stable],
                ..base.clone()
            },
        ] {
            match fit_bop(&x, &t, &RankSpec::Exact(2), &cfg) {
                Err(DmdError::Config(_)) => {}
                other => panic!("expected ConfigError for {cfg:?}, got {other:?}"),
            }
        }
    }
}
