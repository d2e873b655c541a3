//! Shared dense linear-algebra helpers: thin SVDs, minimum-norm least squares,
//! and a small-matrix eigendecomposition built from the real Schur form.

use nalgebra::{Complex, DMatrix, DVector, Schur, SymmetricEigen};

use crate::error::{DmdError, Result};

pub type C64 = Complex<f64>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub fn to_complex(a: &RMat) -> CMat {
    CMat::from_fn(a.nrows(), a.ncols(), |i, j| C64::new(a[(i, j)], 0.0))
}

/// Thin real SVD, singular values descending. A ≈ U diag(s) Vᵀ.
pub fn thin_svd(a: &RMat) -> Result<(RMat, RVec, RMat)> {
    let svd = a.clone().svd(true, true);
    let u = svd
        .u
        .ok_or_else(|| DmdError::Numerical("SVD did not produce U".into()))?;
    let v_t = svd
        .v_t
        .ok_or_else(|| DmdError::Numerical("SVD did not produce V^T".into()))?;
    Ok((u, svd.singular_values, v_t.transpose()))
}

/// Singular values only, descending.
pub fn singular_values(a: &RMat) -> RVec {
    a.clone().svd(false, false).singular_values
}

/// Count of singular values above `rel_tol` times the largest.
pub fn numerical_rank(s: &RVec, rel_tol: f64) -> usize {
    if s.len() == 0 || s[0] <= 0.0 {
        return 0;
    }
    let cut = rel_tol * s[0];
    s.iter().filter(|&&x| x > cut).count()
}

/// Minimum-norm least-squares solution of A X = B via complex SVD.
/// Singular values at or below `rcond * s1` are treated as zero.
/// Returns (X, effective rank, condition number s1/s_min of A).
pub fn lstsq(a: &CMat, b: &CMat, rcond: f64) -> Result<(CMat, usize, f64)> {
    let svd = a.clone().svd(true, true);
    let u = svd
        .u
        .ok_or_else(|| DmdError::Numerical("SVD did not produce U".into()))?;
    let v_t = svd
        .v_t
        .ok_or_else(|| DmdError::Numerical("SVD did not produce V^H".into()))?;
    let s = &svd.singular_values;
    let kmax = s.len();
    if kmax == 0 || s[0] <= 0.0 {
        return Ok((CMat::zeros(a.ncols(), b.ncols()), 0, f64::INFINITY));
    }
    let cond = if s[kmax - 1] > 0.0 {
        s[0] / s[kmax - 1]
    } else {
        f64::INFINITY
    };
    let rank = s.iter().filter(|&&x| x > rcond * s[0]).count();
    // X = V_r diag(1/s) U_rᴴ B
    let mut uhb = u.columns(0, rank).adjoint() * b;
    for i in 0..rank {
        let inv = 1.0 / s[i];
        for j in 0..uhb.ncols() {
            uhb[(i, j)] *= inv;
        }
    }
    let x = v_t.rows(0, rank).adjoint() * uhb;
    Ok((x, rank, cond))
}

/// Eigendecomposition of a real square matrix: complex eigenvalues in Schur
/// order, unit-norm eigenvectors as columns. Conjugate pairs share conjugated
/// vectors; repeated (semisimple) eigenvalues get independent vectors from the
/// clustered null space of A - λI.
pub fn eig_real(a: &RMat) -> Result<(CVec, CMat)> {
    let n = a.nrows();
    if n != a.ncols() || n == 0 {
        return Err(DmdError::Shape(format!(
            "eigendecomposition needs a nonempty square matrix, got {}x{}",
            n,
            a.ncols()
        )));
    }
    if n == 1 {
        return Ok((
            CVec::from_element(1, C64::new(a[(0, 0)], 0.0)),
            CMat::from_element(1, 1, C64::new(1.0, 0.0)),
        ));
    }
    let schur = Schur::try_new(a.clone(), f64::EPSILON, 0)
        .ok_or_else(|| DmdError::Numerical("Schur iteration failed to converge".into()))?;
    let eigs = schur.complex_eigenvalues();
    let scale = eigs.iter().map(|e| e.norm()).fold(0.0, f64::max).max(1.0);
    let ctol = 1e-10 * scale;
    let ac = to_complex(a);
    let mut vecs = CMat::zeros(n, n);
    let mut done = vec![false; n];
    for i in 0..n {
        if done[i] {
            continue;
        }
        let cluster: Vec<usize> = (0..n)
            .filter(|&j| !done[j] && (eigs[j] - eigs[i]).norm() <= ctol)
            .collect();
        let g = cluster.len();
        let mut shifted = ac.clone();
        for d in 0..n {
            shifted[(d, d)] -= eigs[i];
        }
        let svd = shifted.svd(false, true);
        let v_t = svd
            .v_t
            .ok_or_else(|| DmdError::Numerical("SVD did not produce V^H".into()))?;
        let mut cluster_vecs: Vec<CVec> = Vec::with_capacity(g);
        for (c, &j) in cluster.iter().enumerate() {
            // Smallest singular directions sit at the bottom of the sorted SVD.
            let v = v_t.row(n - 1 - c).adjoint();
            vecs.set_column(j, &v);
            cluster_vecs.push(v);
            done[j] = true;
        }
        if eigs[i].im.abs() > ctol {
            let conj_val = eigs[i].conj();
            let partner: Vec<usize> = (0..n)
                .filter(|&j| !done[j] && (eigs[j] - conj_val).norm() <= ctol)
                .collect();
            for (c, &j) in partner.iter().enumerate().take(g) {
                vecs.set_column(j, &cluster_vecs[c].map(|z| z.conj()));
                done[j] = true;
            }
        }
    }
    Ok((eigs, vecs))
}

/// Orthonormal basis of the r leading left singular directions, computed from
/// the smaller Gram matrix. Cheaper than a full SVD when one dimension
/// dominates; accurate enough for subspace projection, not for rank detection
/// (the Gram squares the spectrum).
pub fn leading_left_basis(x: &RMat, r: usize) -> Result<RMat> {
    let (n, m) = x.shape();
    if r == 0 || r > n.min(m) {
        return Err(DmdError::Config(format!(
            "projection rank {r} out of range for a {n}x{m} matrix"
        )));
    }
    let order_desc = |vals: &RVec| -> Vec<usize> {
        let mut idx: Vec<usize> = (0..vals.len()).collect();
        idx.sort_by(|&a, &b| vals[b].partial_cmp(&vals[a]).unwrap_or(std::cmp::Ordering::Equal));
        idx
    };
    if n <= m {
        let se = SymmetricEigen::new(x * x.transpose());
        let idx = order_desc(&se.eigenvalues);
        let mut u = RMat::zeros(n, r);
        for (c, &i) in idx.iter().take(r).enumerate() {
            u.set_column(c, &se.eigenvectors.column(i));
        }
        Ok(u)
    } else {
        let se = SymmetricEigen::new(x.transpose() * x);
        let idx = order_desc(&se.eigenvalues);
        let mut u = RMat::zeros(n, r);
        for (c, &i) in idx.iter().take(r).enumerate() {
            let sigma = se.eigenvalues[i].max(0.0).sqrt();
            if sigma <= 0.0 {
                return Err(DmdError::Numerical(
                    "projection basis collapsed: zero singular value".into(),
                ));
            }
            u.set_column(c, &(x * se.eigenvectors.column(i) / sigma));
        }
        // Guard against loss of orthogonality from the squared spectrum.
        let qr = u.qr();
        Ok(qr.q())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det_matrix(n: usize, m: usize, salt: f64) -> RMat {
        RMat::from_fn(n, m, |i, j| ((i * 31 + j * 17) as f64 * 0.37 + salt).sin())
    }

    #[test]
    fn thin_svd_reconstructs_and_is_sorted() {
        let a = det_matrix(6, 4, 0.3);
        let (u, s, v) = thin_svd(&a).unwrap();
        for w in s.as_slice().windows(2) {
            assert!(w[0] >= w[1]);
        }
        let recon = &u * RMat::from_diagonal(&s) * v.transpose();
        assert!((&a - recon).norm() < 1e-12);
        assert!((u.transpose() * &u - RMat::identity(4, 4)).norm() < 1e-12);
    }

    #[test]
    fn lstsq_matches_normal_equations() {
        let a = CMat::from_fn(6, 3, |i, j| {
            C64::new(((i + 2 * j) as f64 * 0.61).cos(), ((i * j) as f64 * 0.23).sin())
        });
        let b = CMat::from_fn(6, 1, |i, _| C64::new(i as f64 * 0.5 - 1.0, (i as f64).cos()));
        let (x, rank, cond) = lstsq(&a, &b, 1e-12).unwrap();
        assert_eq!(rank, 3);
        assert!(cond < 1e3);
        // Normal-equations oracle: (AᴴA) x = Aᴴ b.
        let gram = a.adjoint() * &a;
        let rhs = a.adjoint() * &b;
        let oracle = gram.lu().solve(&rhs).unwrap();
        assert!((&x - oracle).norm() < 1e-10);
    }

    #[test]
    fn lstsq_minimum_norm_on_duplicate_columns() {
        let mut a = CMat::zeros(4, 2);
        for i in 0..4 {
            let v = C64::new(1.0 + i as f64, -(i as f64) * 0.5);
            a[(i, 0)] = v;
            a[(i, 1)] = v;
        }
        let b = a.columns(0, 1).clone_owned() * C64::new(2.0, 0.0);
        let (x, rank, cond) = lstsq(&a, &b, 1e-12).unwrap();
        assert_eq!(rank, 1);
        assert!(cond.is_infinite() || cond > 1e12);
        // Minimum-norm solution spreads the coefficient evenly.
        assert!((x[(0, 0)] - x[(1, 0)]).norm() < 1e-12);
        assert!((&a * &x - b).norm() < 1e-10);
    }

    #[test]
    fn eig_real_known_spectrum() {
        // Companion matrix of (x-2)(x^2+2x+10): eigenvalues 2, -1±3i.
        let a = RMat::from_row_slice(3, 3, &[0.0, 0.0, 20.0, 1.0, 0.0, -6.0, 0.0, 1.0, 0.0]);
        let (eigs, vecs) = eig_real(&a).unwrap();
        let ac = to_complex(&a);
        let norm_a = a.norm();
        for j in 0..3 {
            let v = vecs.column(j).clone_owned();
            let resid = (&ac * &v - &v * eigs[j]).norm();
            assert!(resid <= 1e-10 * norm_a, "residual {resid}");
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
        let mut re_sorted: Vec<f64> = eigs.iter().map(|e| e.re).collect();
        re_sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((re_sorted[2] - 2.0).abs() < 1e-10);
        assert!((re_sorted[0] + 1.0).abs() < 1e-10);
    }

    #[test]
    fn eig_real_repeated_eigenvalue_gets_independent_vectors() {
        let a = RMat::from_diagonal(&RVec::from_vec(vec![2.0, 2.0, 5.0]));
        let (eigs, vecs) = eig_real(&a).unwrap();
        let twos: Vec<usize> = (0..3).filter(|&j| (eigs[j].re - 2.0).abs() < 1e-12).collect();
        assert_eq!(twos.len(), 2);
        let inner = vecs
            .column(twos[0])
            .dotc(&vecs.column(twos[1]))
            .norm();
        assert!(inner < 1e-8, "repeated-eigenvalue vectors not independent: {inner}");
    }

    #[test]
    fn eig_real_conjugate_pair_vectors_are_conjugate() {
        let a = RMat::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let (eigs, vecs) = eig_real(&a).unwrap();
        assert!((eigs[0].im.abs() - 1.0).abs() < 1e-12);
        let pos = if eigs[0].im > 0.0 { 0 } else { 1 };
        let neg = 1 - pos;
        let diff = (vecs.column(pos).map(|z| z.conj()) - vecs.column(neg).clone_owned()).norm();
        assert!(diff < 1e-12);
    }

    #[test]
    fn leading_left_basis_matches_svd_subspace() {
        for &(n, m) in &[(5usize, 12usize), (12, 5), (9, 9)] {
            // Build a matrix with a well-separated spectrum so the leading
            // subspace is uniquely defined.
            let k = n.min(m);
            let left = det_matrix(n, k, 0.9).qr().q();
            let right = det_matrix(m, k, 2.3).qr().q();
            let sigma = RMat::from_fn(k, k, |i, j| if i == j { 8.0 / (1 << i) as f64 } else { 0.0 });
            let a = left * sigma * right.transpose();
            let r = 3;
            let u1 = leading_left_basis(&a, r).unwrap();
            let (u2, _, _) = thin_svd(&a).unwrap();
            let u2 = u2.columns(0, r).clone_owned();
            let p1 = &u1 * u1.transpose();
            let p2 = &u2 * u2.transpose();
            assert!((u1.transpose() * &u1 - RMat::identity(r, r)).norm() < 1e-10);
            assert!((p1 - p2).norm() < 1e-8, "subspace mismatch for {n}x{m}");
        }
    }
}
