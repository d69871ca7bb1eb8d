//! Small dense linear-algebra helpers shared across the crate.
//!
//! Everything here works on matrices of dimension at most a few dozen, so the
//! implementations favour robustness over asymptotics: series exponentials
//! with scaling and squaring, modified Gram-Schmidt with a re-orthogonalization
//! pass, SVD-based ranks and nullspaces.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex<f64>>;

/// Matrix exponential by scaling and squaring with a Taylor tail.
pub fn exp_real(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let norm = a.norm();
    let scalings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a / 2f64.powi(scalings as i32);
    let mut term = DMatrix::identity(n, n);
    let mut sum = DMatrix::identity(n, n);
    for k in 1..=24 {
        term = (&term * &scaled) / k as f64;
        sum += &term;
    }
    let mut result = sum;
    for _ in 0..scalings {
        result = &result * &result;
    }
    result
}

/// Complex matrix exponential, same scheme as [`exp_real`].
pub fn exp_complex(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let norm = a.norm();
    let scalings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.map(|z| z / 2f64.powi(scalings as i32));
    let mut term = CMatrix::identity(n, n);
    let mut sum = CMatrix::identity(n, n);
    for k in 1..=24 {
        term = (&term * &scaled).map(|z| z / k as f64);
        sum += &term;
    }
    let mut result = sum;
    for _ in 0..scalings {
        result = &result * &result;
    }
    result
}

/// Operator (spectral) norm via power iteration on `AᵀA`.
///
/// Iterative with a fixed cap: degenerate top singular values (the common
/// case for the near-orthogonal matrices passing through here) are harmless
/// for the Rayleigh quotient, and the cap rules out the convergence stalls
/// that general-purpose SVD iterations can hit on such inputs.
pub fn op_norm(a: &DMatrix<f64>) -> f64 {
    let n = a.ncols();
    if n == 0 {
        return 0.0;
    }
    let gram = a.transpose() * a;
    let mut v = DVector::from_fn(n, |i, _| 1.0 + (i as f64) * 1e-3);
    v /= v.norm();
    let mut lambda = 0.0;
    for _ in 0..64 {
        let w = &gram * &v;
        let norm = w.norm();
        if norm < 1e-300 {
            return 0.0;
        }
        lambda = v.dot(&w);
        v = w / norm;
    }
    lambda.max(0.0).sqrt()
}

/// Distance from the identity in operator norm.
pub fn dist_from_identity(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    op_norm(&(a - DMatrix::identity(n, n)))
}

/// Principal logarithm of a special orthogonal matrix near the identity.
///
/// Requires `‖A − I‖ < 0.5` in operator norm; the Mercator series then
/// converges geometrically. The result is antisymmetrized to remove rounding.
pub fn so_log_small(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let dist = dist_from_identity(a);
    if dist >= 0.5 {
        return Err(Error::LogOutOfRange(dist));
    }
    let e = a - DMatrix::identity(n, n);
    let mut power = e.clone();
    let mut log = DMatrix::zeros(n, n);
    for m in 1..=96 {
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        log += &power * (sign / m as f64);
        power = &power * &e;
        if power.norm() < 1e-18 {
            break;
        }
    }
    // exact antisymmetry is an invariant of logs of orthogonal matrices
    let log = (&log - log.transpose()) * 0.5;
    Ok(log)
}

/// Orthogonality residual `‖AᵀA − I‖` plus a determinant-sign penalty.
pub fn so_residual(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let gram = a.transpose() * a;
    let mut res = (gram - DMatrix::identity(n, n)).norm();
    if a.determinant() < 0.0 {
        res += 2.0;
    }
    res
}

/// Modified Gram-Schmidt with one re-orthogonalization pass and rank
/// detection. Vectors whose remainder falls below `tol` are dropped.
pub fn orthonormalize(vectors: &[DVector<f64>], tol: f64) -> Vec<DVector<f64>> {
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&w);
                w -= b * c;
            }
        }
        let norm = w.norm();
        if norm > tol {
            basis.push(w / norm);
        }
    }
    basis
}

/// Rank of the matrix whose columns are the given vectors.
pub fn rank_of(vectors: &[DVector<f64>], tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let rows = vectors[0].len();
    let mut m = DMatrix::zeros(rows, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        m.set_column(j, v);
    }
    let svd = m
        .try_svd(false, false, 1e-14, 4096)
        .expect("svd did not converge");
    svd.singular_values.iter().filter(|s| **s > tol).count()
}

/// Orthonormal basis of the nullspace of `m`.
///
/// Wide inputs are padded with zero rows first: the padding leaves singular
/// values untouched but makes the thin `V^T` square, so the kernel is fully
/// exposed (a thin SVD of a wide matrix truncates it).
pub fn nullspace(m: &DMatrix<f64>, tol: f64) -> Vec<DVector<f64>> {
    let (rows, cols) = (m.nrows(), m.ncols());
    let work = if rows < cols {
        let mut padded = DMatrix::zeros(cols, cols);
        padded.view_mut((0, 0), (rows, cols)).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let svd = work
        .try_svd(false, true, 1e-14, 4096)
        .expect("svd did not converge");
    let vt = svd.v_t.expect("svd requested v_t");
    let mut out = Vec::new();
    for i in 0..vt.nrows() {
        let sv = if i < svd.singular_values.len() {
            svd.singular_values[i]
        } else {
            0.0
        };
        if sv <= tol {
            out.push(vt.row(i).transpose());
        }
    }
    out
}

/// Haar-ish random special orthogonal matrix from a Gaussian QR.
pub fn random_special_orthogonal(n: usize, rng: &mut impl rand::Rng) -> DMatrix<f64> {
    loop {
        let g = DMatrix::from_fn(n, n, |_, _| {
            // Box-Muller from two uniforms
            let u1: f64 = rng.random::<f64>().max(1e-12);
            let u2: f64 = rng.random();
            (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
        });
        let qr = g.qr();
        let mut q = qr.q();
        let r = qr.r();
        // fix the sign convention so the distribution is Haar
        for j in 0..n {
            if r[(j, j)] < 0.0 {
                for i in 0..n {
                    q[(i, j)] = -q[(i, j)];
                }
            }
        }
        if q.determinant() < 0.0 {
            // flip one column to land in SO(n)
            for i in 0..n {
                q[(i, 0)] = -q[(i, 0)];
            }
        }
        if so_residual(&q) < 1e-10 {
            return q;
        }
    }
}

/// Flatten a matrix into a vector (column-major).
pub fn vectorize(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(m.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn exp_of_zero_is_identity() {
        let z = DMatrix::zeros(4, 4);
        assert!((exp_real(&z) - DMatrix::identity(4, 4)).norm() < 1e-15);
    }

    #[test]
    fn exp_log_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [2usize, 3, 5, 9] {
            for _ in 0..20 {
                let mut omega = DMatrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..i {
                        let x: f64 = rng.random::<f64>() - 0.5;
                        omega[(i, j)] = 0.3 * x;
                        omega[(j, i)] = -0.3 * x;
                    }
                }
                let a = exp_real(&omega);
                let back = so_log_small(&a).unwrap();
                assert!(
                    (&back - &omega).norm() < 1e-12,
                    "round trip failed at n={n}"
                );
            }
        }
    }

    #[test]
    fn log_rejects_far_matrices() {
        let a = exp_real(&DMatrix::from_row_slice(2, 2, &[0.0, -2.0, 2.0, 0.0]));
        assert!(matches!(so_log_small(&a), Err(Error::LogOutOfRange(_))));
    }

    #[test]
    fn small_rotation_log_orientation() {
        let theta: f64 = 0.1;
        let a = DMatrix::from_row_slice(
            2,
            2,
            &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()],
        );
        let log = so_log_small(&a).unwrap();
        assert!((log[(1, 0)] - theta).abs() < 1e-14);
        assert!((log[(0, 1)] + theta).abs() < 1e-14);
    }

    #[test]
    fn orthonormalize_detects_rank() {
        let v1 = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        let v2 = DVector::from_vec(vec![1.0, 1e-12, 0.0]);
        let v3 = DVector::from_vec(vec![0.0, 1.0, 0.0]);
        let basis = orthonormalize(&[v1, v2, v3], 1e-8);
        assert_eq!(basis.len(), 2);
    }

    #[test]
    fn random_so_is_special_orthogonal() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in [2usize, 5, 15] {
            let q = random_special_orthogonal(n, &mut rng);
            assert!(so_residual(&q) < 1e-10);
        }
    }
}
