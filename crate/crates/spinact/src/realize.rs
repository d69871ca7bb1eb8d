//! Real-matrix realizations of complex and quaternionic matrix groups.
//!
//! Complex `m x m` matrices become real `2m x 2m` matrices in the interleaved
//! basis `(Re v0, Im v0, Re v1, Im v1, ...)`; quaternionic `m x m` matrices
//! act by left multiplication on the coordinates `(a0, b0, c0, d0, a1, ...)`
//! of `H^m = R^{4m}`. These orderings make the familiar block pictures (a
//! unit complex scalar becoming a plane rotation, a unit quaternion becoming
//! two plane rotations under conjugation) appear literally.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::octonion::Quaternion;

/// Provenance of a realized real matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Real,
    Complexified(usize),
    Quaternionified(usize),
}

/// A real matrix remembered together with how it was produced.
#[derive(Debug, Clone)]
pub struct RealizedMatrix {
    pub entries: DMatrix<f64>,
    pub origin: Origin,
}

/// A dense matrix of quaternions.
#[derive(Debug, Clone)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Quaternion>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Quaternion::new(0.0, 0.0, 0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Quaternion::one();
        }
        m
    }

    /// Diagonal matrix with the same quaternion at every slot.
    pub fn scalar(n: usize, q: Quaternion) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = q;
        }
        m
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Quaternion::new(0.0, 0.0, 0.0, 0.0);
                for k in 0..self.cols {
                    acc = acc + self[(i, k)] * other[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> QMatrix {
        let mut out = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Quaternion;
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion {
        &mut self.data[i * self.cols + j]
    }
}

/// Uniform random unit quaternion (rejection-sampled Gaussian-ish cube).
pub fn random_unit_quaternion(rng: &mut impl rand::Rng) -> Quaternion {
    loop {
        let q = Quaternion::new(
            rng.random::<f64>() - 0.5,
            rng.random::<f64>() - 0.5,
            rng.random::<f64>() - 0.5,
            rng.random::<f64>() - 0.5,
        );
        let n = q.norm();
        if n > 1e-3 {
            return q.scale(1.0 / n);
        }
    }
}

/// Realize a complex `m x m` matrix as a real `2m x 2m` one.
pub fn realize_complex(a: &CMatrix) -> RealizedMatrix {
    let m = a.nrows();
    assert_eq!(m, a.ncols());
    let mut out = DMatrix::zeros(2 * m, 2 * m);
    for p in 0..m {
        for q in 0..m {
            let z = a[(p, q)];
            out[(2 * p, 2 * q)] = z.re;
            out[(2 * p, 2 * q + 1)] = -z.im;
            out[(2 * p + 1, 2 * q)] = z.im;
            out[(2 * p + 1, 2 * q + 1)] = z.re;
        }
    }
    RealizedMatrix {
        entries: out,
        origin: Origin::Complexified(m),
    }
}

/// The realized multiplication-by-i operator on `C^m = R^{2m}`.
pub fn complex_structure(m: usize) -> DMatrix<f64> {
    realize_complex(&CMatrix::from_diagonal_element(m, m, Complex::new(0.0, 1.0))).entries
}

/// The 4x4 real matrix of left multiplication by `q` on `H = R^4`.
pub fn left_mult_block(q: &Quaternion) -> DMatrix<f64> {
    let [a, b, c, d] = q.coeffs;
    DMatrix::from_row_slice(
        4,
        4,
        &[
            a, -b, -c, -d, //
            b, a, -d, c, //
            c, d, a, -b, //
            d, -c, b, a,
        ],
    )
}

/// The 4x4 real matrix of right multiplication by `w` on `H = R^4`.
pub fn right_mult_block(w: &Quaternion) -> DMatrix<f64> {
    let [a, b, c, d] = w.coeffs;
    DMatrix::from_row_slice(
        4,
        4,
        &[
            a, -b, -c, -d, //
            b, a, d, -c, //
            c, -d, a, b, //
            d, c, -b, a,
        ],
    )
}

/// Realize a quaternionic `m x m` matrix acting by left multiplication on
/// `H^m = R^{4m}`.
pub fn realize_quaternionic(a: &QMatrix) -> RealizedMatrix {
    assert_eq!(a.rows, a.cols);
    let m = a.rows;
    let mut out = DMatrix::zeros(4 * m, 4 * m);
    for p in 0..m {
        for q in 0..m {
            let block = left_mult_block(&a[(p, q)]);
            out.view_mut((4 * p, 4 * q), (4, 4)).copy_from(&block);
        }
    }
    RealizedMatrix {
        entries: out,
        origin: Origin::Quaternionified(m),
    }
}

/// Realize the coordinate-wise right multiplication by `w` on `H^m`.
pub fn realize_right_mult(w: &Quaternion, m: usize) -> DMatrix<f64> {
    let block = right_mult_block(w);
    let mut out = DMatrix::zeros(4 * m, 4 * m);
    for p in 0..m {
        out.view_mut((4 * p, 4 * p), (4, 4)).copy_from(&block);
    }
    out
}

/// Convert a complex `2n x 2n` matrix in the block form `[[A, -B̄], [B, Ā]]`
/// back to the quaternionic `n x n` matrix it realizes (entries `A + jB`).
pub fn complex_pair_to_quaternionic(u: &CMatrix) -> Result<QMatrix> {
    let d = u.nrows();
    if d % 2 != 0 || d != u.ncols() {
        return Err(Error::DimensionMismatch {
            left: d,
            right: u.ncols(),
        });
    }
    let n = d / 2;
    let mut out = QMatrix::zeros(n, n);
    let mut residual: f64 = 0.0;
    for p in 0..n {
        for q in 0..n {
            let alpha = u[(p, q)];
            let beta = u[(p + n, q)];
            residual = residual.max((u[(p, q + n)] + beta.conj()).norm());
            residual = residual.max((u[(p + n, q + n)] - alpha.conj()).norm());
            out[(p, q)] = Quaternion::new(alpha.re, alpha.im, beta.re, -beta.im);
        }
    }
    if residual > 1e-9 {
        return Err(Error::Invalid(format!(
            "matrix is not quaternionic-structured (residual {residual})"
        )));
    }
    Ok(out)
}

/// Realize a quaternionic matrix as the complex `2n x 2n` matrix
/// `[[A, -B̄], [B, Ā]]`, where `M = A + jB` (so `w + xi + yj + zk` has
/// `A = w + xi`, `B = y - zi`). This is multiplicative and its trace is the
/// character of the standard complex representation.
pub fn quaternionic_to_complex(a: &QMatrix) -> CMatrix {
    let n = a.rows;
    let mut out = CMatrix::zeros(2 * n, 2 * n);
    for p in 0..n {
        for q in 0..n {
            let [w, x, y, z] = a[(p, q)].coeffs;
            let alpha = Complex::new(w, x);
            let beta = Complex::new(y, -z);
            out[(p, q)] = alpha;
            out[(p, q + n)] = -beta.conj();
            out[(p + n, q)] = beta;
            out[(p + n, q + n)] = alpha.conj();
        }
    }
    out
}
