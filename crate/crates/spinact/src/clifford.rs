//! Sparse real Clifford algebra `Cl_n` and the group `Spin(n)`.
//!
//! Generators satisfy `e_i e_j + e_j e_i = -2 δ_ij` (negative-definite
//! convention). Blades are bitmasks over the generators, so the dimension is
//! capped at 15 to keep a blade in a `u16`; that covers every rotation group
//! needed here (the largest tangent space is 15-dimensional).
//!
//! Sign convention for the double cover: `λ(exp(θ/2 · e_i e_j))` is the
//! rotation by `+θ` moving `e_i` toward `e_j`. Everything downstream (bivector
//! transfer, path lifting, parity reads) shares this one calibration, which is
//! pinned by a matrix-exponential oracle in the tests.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;

/// Hard ceiling on the Clifford dimension (blades are `u16` bitmasks).
pub const MAX_DIM: usize = 15;

/// Coefficients below this are dropped after every product.
pub const PRUNE_TOL: f64 = 1e-13;

/// Allowed mass outside grade 1 when reading off `λ(s)` columns.
pub const GRADE_TOL: f64 = 1e-6;

/// Above this many stored terms, `λ` columns are extracted with the targeted
/// grade-1 product instead of a full product.
const FULL_PRODUCT_THRESHOLD: usize = 512;

// ---------------------------------------------------------------------------
// blade sign machinery
// ---------------------------------------------------------------------------

/// Parity of `#{(i, j) : i ∈ a, j ∈ b, i > j}` for byte masks.
fn byte_parity_table() -> &'static [[u8; 256]; 256] {
    static TABLE: OnceLock<Box<[[u8; 256]; 256]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Box::new([[0u8; 256]; 256]);
        for a in 0..256u32 {
            for b in 0..256u32 {
                let mut shifted = a >> 1;
                let mut count = 0u32;
                while shifted != 0 {
                    count += (shifted & b).count_ones();
                    shifted >>= 1;
                }
                t[a as usize][b as usize] = (count & 1) as u8;
            }
        }
        t
    })
}

/// Sign of `e_a * e_b` (reordering transpositions plus `e_i^2 = -1` factors).
#[inline]
fn product_sign(a: u16, b: u16) -> f64 {
    let t = byte_parity_table();
    let reorder = t[(a & 0xff) as usize][(b & 0xff) as usize]
        ^ t[(a >> 8) as usize][(b >> 8) as usize]
        ^ ((((a >> 8).count_ones() & (b & 0xff).count_ones()) & 1) as u8);
    let metric = ((a & b).count_ones() & 1) as u8;
    if (reorder ^ metric) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

// ---------------------------------------------------------------------------
// Multivector
// ---------------------------------------------------------------------------

/// Sparse multivector: sorted `(blade, coefficient)` pairs, zero-free.
#[derive(Debug, Clone, PartialEq)]
pub struct Multivector {
    dim: usize,
    terms: Vec<(u16, f64)>,
}

impl Multivector {
    pub fn zero(dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::DimensionCeiling(dim));
        }
        Ok(Multivector { dim, terms: vec![] })
    }

    pub fn scalar(dim: usize, value: f64) -> Result<Self> {
        let mut mv = Multivector::zero(dim)?;
        if value.abs() > 0.0 {
            mv.terms.push((0, value));
        }
        Ok(mv)
    }

    pub fn one(dim: usize) -> Result<Self> {
        Multivector::scalar(dim, 1.0)
    }

    /// The generator `e_i`, 1-indexed as in the usual notation `e_1 ... e_n`.
    pub fn basis_vector(dim: usize, i: usize) -> Result<Self> {
        if i == 0 || i > dim {
            return Err(Error::Invalid(format!("generator e_{i} out of range")));
        }
        let mut mv = Multivector::zero(dim)?;
        mv.terms.push((1 << (i - 1), 1.0));
        Ok(mv)
    }

    /// Build from raw `(blade, coefficient)` pairs; merges duplicates, sorts
    /// and prunes.
    pub fn from_terms(dim: usize, raw: Vec<(u16, f64)>) -> Result<Self> {
        let mut mv = Multivector::zero(dim)?;
        let mut raw = raw;
        raw.sort_unstable_by_key(|(b, _)| *b);
        for (blade, coeff) in raw {
            if blade as usize >= (1usize << dim) {
                return Err(Error::Invalid(format!(
                    "blade {blade:#x} outside Cl_{dim}"
                )));
            }
            match mv.terms.last_mut() {
                Some((last, c)) if *last == blade => *c += coeff,
                _ => mv.terms.push((blade, coeff)),
            }
        }
        mv.terms.retain(|(_, c)| c.abs() > PRUNE_TOL);
        Ok(mv)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(u16, f64)] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, blade: u16) -> f64 {
        match self.terms.binary_search_by_key(&blade, |(b, _)| *b) {
            Ok(idx) => self.terms[idx].1,
            Err(_) => 0.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient l2 norm.
    pub fn norm(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c * c).sum::<f64>().sqrt()
    }

    pub fn scalar_part(&self) -> f64 {
        self.coeff(0)
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        for (_, c) in &mut out.terms {
            *c *= s;
        }
        out.terms.retain(|(_, c)| c.abs() > PRUNE_TOL);
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for (_, c) in &mut out.terms {
            *c = -*c;
        }
        out
    }

    pub fn add(&self, rhs: &Multivector) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        let mut raw = self.terms.clone();
        raw.extend_from_slice(&rhs.terms);
        Multivector::from_terms(self.dim, raw)
    }

    pub fn sub(&self, rhs: &Multivector) -> Result<Self> {
        self.add(&rhs.neg())
    }

    /// The Clifford product.
    pub fn mul(&self, rhs: &Multivector) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        let size = 1usize << self.dim;
        let mut scratch = vec![0.0f64; size];
        let mut touched = vec![false; size];
        let mut blades: Vec<u16> = Vec::new();
        for &(a, ca) in &self.terms {
            for &(b, cb) in &rhs.terms {
                let blade = a ^ b;
                let idx = blade as usize;
                scratch[idx] += product_sign(a, b) * ca * cb;
                if !touched[idx] {
                    touched[idx] = true;
                    blades.push(blade);
                }
            }
        }
        blades.sort_unstable();
        let mut terms = Vec::with_capacity(blades.len());
        for blade in blades {
            let c = scratch[blade as usize];
            if c.abs() > PRUNE_TOL {
                terms.push((blade, c));
            }
        }
        Ok(Multivector {
            dim: self.dim,
            terms,
        })
    }

    /// Right-multiply by the generator `e_i` (1-indexed). Cheap: one output
    /// term per stored term.
    pub fn mul_basis_vector(&self, i: usize) -> Result<Self> {
        if i == 0 || i > self.dim {
            return Err(Error::Invalid(format!("generator e_{i} out of range")));
        }
        let b = 1u16 << (i - 1);
        let mut raw: Vec<(u16, f64)> = self
            .terms
            .iter()
            .map(|&(a, c)| (a ^ b, product_sign(a, b) * c))
            .collect();
        raw.sort_unstable_by_key(|(blade, _)| *blade);
        Ok(Multivector {
            dim: self.dim,
            terms: raw,
        })
    }

    /// Grade-1 part of `self * rhs`, without materializing the full product.
    pub fn grade1_product(&self, rhs: &Multivector) -> Result<DVector<f64>> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        let mut out = DVector::zeros(self.dim);
        for i in 0..self.dim {
            let m = 1u16 << i;
            let mut acc = 0.0;
            for &(a, ca) in &self.terms {
                let b = a ^ m;
                let cb = rhs.coeff(b);
                if cb != 0.0 {
                    acc += product_sign(a, b) * ca * cb;
                }
            }
            out[i] = acc;
        }
        Ok(out)
    }

    /// Reversal anti-automorphism: grade `k` picks up `(-1)^{k(k-1)/2}`.
    pub fn reverse(&self) -> Self {
        let mut out = self.clone();
        for (blade, c) in &mut out.terms {
            let k = blade.count_ones() as usize;
            if (k * (k.saturating_sub(1)) / 2) % 2 == 1 {
                *c = -*c;
            }
        }
        out
    }

    pub fn grade_part(&self, k: usize) -> Self {
        Multivector {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|(b, _)| b.count_ones() as usize == k)
                .collect(),
        }
    }

    /// Norm of everything outside grade `k`.
    pub fn off_grade_norm(&self, k: usize) -> f64 {
        self.terms
            .iter()
            .filter(|(b, _)| b.count_ones() as usize != k)
            .map(|(_, c)| c * c)
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_even(&self) -> bool {
        self.terms.iter().all(|(b, _)| b.count_ones() % 2 == 0)
    }

    pub fn is_grade(&self, k: usize) -> bool {
        self.terms
            .iter()
            .all(|(b, _)| b.count_ones() as usize == k)
    }

    /// Coefficients of the grade-1 part as a vector.
    pub fn vector_part(&self) -> DVector<f64> {
        let mut v = DVector::zeros(self.dim);
        for &(b, c) in &self.terms {
            if b.count_ones() == 1 {
                v[b.trailing_zeros() as usize] = c;
            }
        }
        v
    }

    /// l2 distance to the scalar `value`.
    pub fn distance_to_scalar(&self, value: f64) -> f64 {
        let mut sq = 0.0;
        let mut saw_scalar = false;
        for &(b, c) in &self.terms {
            if b == 0 {
                sq += (c - value) * (c - value);
                saw_scalar = true;
            } else {
                sq += c * c;
            }
        }
        if !saw_scalar {
            sq += value * value;
        }
        sq.sqrt()
    }
}

// ---------------------------------------------------------------------------
// SpinElement
// ---------------------------------------------------------------------------

/// An element of `Spin(n)`: an even multivector with `s · reverse(s) = 1`.
#[derive(Debug, Clone)]
pub struct SpinElement {
    mv: Multivector,
}

impl SpinElement {
    /// Validating constructor: evenness and twisted unit norm are checked.
    pub fn new(mv: Multivector) -> Result<Self> {
        if !mv.is_even() {
            return Err(Error::Invalid(
                "spin element must be supported on even grades".into(),
            ));
        }
        let unit_residual = mv.mul(&mv.reverse())?.distance_to_scalar(1.0);
        if unit_residual > 1e-7 {
            return Err(Error::NotUnit(unit_residual));
        }
        Ok(SpinElement { mv })
    }

    /// Wrap without validation; for internal use where the factors are known
    /// unit rotors.
    pub(crate) fn from_unchecked(mv: Multivector) -> Self {
        SpinElement { mv }
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Ok(SpinElement {
            mv: Multivector::one(dim)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.mv.dim
    }

    pub fn mv(&self) -> &Multivector {
        &self.mv
    }

    pub fn mul(&self, rhs: &SpinElement) -> Result<SpinElement> {
        Ok(SpinElement {
            mv: self.mv.mul(&rhs.mv)?,
        })
    }

    /// Inverse; equals the reversal for unit spin elements.
    pub fn inverse(&self) -> SpinElement {
        SpinElement {
            mv: self.mv.reverse(),
        }
    }

    pub fn neg(&self) -> SpinElement {
        SpinElement { mv: self.mv.neg() }
    }

    /// Residual of the defining unit condition `s · reverse(s) = 1`.
    pub fn unit_residual(&self) -> Result<f64> {
        Ok(self.mv.mul(&self.mv.reverse())?.distance_to_scalar(1.0))
    }
}

/// The double cover `λ: Spin(n) -> SO(n)`, `λ(s) x = s x s^{-1}`.
///
/// Column `j` is the vector part of `s e_j s^{-1}`; mass outside grade 1
/// beyond [`GRADE_TOL`] reports an invalid spin element.
pub fn lambda_map(s: &SpinElement) -> Result<DMatrix<f64>> {
    let n = s.dim();
    let srev = s.mv.reverse();
    let full = s.mv.term_count() <= FULL_PRODUCT_THRESHOLD;
    let mut out = DMatrix::zeros(n, n);
    for j in 1..=n {
        let t = s.mv.mul_basis_vector(j)?;
        let column = if full {
            let prod = t.mul(&srev)?;
            let off = prod.off_grade_norm(1);
            if off > GRADE_TOL {
                return Err(Error::GradeResidual {
                    grade: 1,
                    residual: off,
                });
            }
            prod.vector_part()
        } else {
            // unit rotors conjugate orthogonally, so the squared column norm
            // defect bounds the off-grade mass (up to the rotor's own unit
            // drift, which sits many orders below this gate)
            let v = t.grade1_product(&srev)?;
            let off_sq = (1.0 - v.norm_squared()).abs();
            if off_sq > GRADE_TOL {
                return Err(Error::GradeResidual {
                    grade: 1,
                    residual: off_sq,
                });
            }
            v
        };
        out.set_column(j - 1, &column);
    }
    let res = linalg::so_residual(&out);
    if res > 1e-6 {
        return Err(Error::NotSpecialOrthogonal(res));
    }
    Ok(out)
}

/// Exponential of a grade-2 multivector.
///
/// Single-blade bivectors use the closed form `cos θ + sin θ · B̂`; general
/// bivectors fall back to the power series with an iteration cap.
pub fn bivector_exp(beta: &Multivector) -> Result<SpinElement> {
    if !beta.is_grade(2) && !beta.is_zero() {
        return Err(Error::GradeResidual {
            grade: 2,
            residual: beta.off_grade_norm(2),
        });
    }
    if beta.is_zero() {
        return SpinElement::identity(beta.dim());
    }
    if beta.term_count() == 1 {
        let (blade, theta) = beta.terms[0];
        let mv =
            Multivector::from_terms(beta.dim(), vec![(0, theta.cos()), (blade, theta.sin())])?;
        return Ok(SpinElement::from_unchecked(mv));
    }
    let mut sum = Multivector::one(beta.dim())?;
    let mut term = Multivector::one(beta.dim())?;
    let mut converged = false;
    for k in 1..=256 {
        term = term.mul(beta)?.scale(1.0 / k as f64);
        if term.is_zero() {
            converged = true;
            break;
        }
        sum = sum.add(&term)?;
        if term.norm() < 1e-16 * sum.norm().max(1.0) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::SeriesDiverged);
    }
    Ok(SpinElement::from_unchecked(sum))
}

/// Transfer an antisymmetric matrix to the grade-2 part of the algebra:
/// `ω ↦ Σ_{i<j} (ω_ji / 2) e_{i+1} e_{j+1}` (matrix indices 0-based).
///
/// Calibrated so that `λ(bivector_exp(bivector_from_so(ω))) = exp(ω)`.
pub fn bivector_from_so(omega: &DMatrix<f64>) -> Result<Multivector> {
    let n = omega.nrows();
    if n != omega.ncols() {
        return Err(Error::DimensionMismatch {
            left: n,
            right: omega.ncols(),
        });
    }
    let mut raw = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let c = omega[(j, i)] * 0.5;
            if c != 0.0 {
                raw.push(((1u16 << i) | (1u16 << j), c));
            }
        }
    }
    Multivector::from_terms(n, raw)
}

/// Plane bivector `B(a, b) = Σ_{i<j} (a_i b_j - a_j b_i) e_{i+1} e_{j+1}`
/// for an orthonormal pair; `λ(exp(θ/2 · B))` rotates `a` toward `b` by `θ`.
pub fn plane_bivector(a: &DVector<f64>, b: &DVector<f64>) -> Result<Multivector> {
    let n = a.len();
    let mut raw = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let c = a[i] * b[j] - a[j] * b[i];
            if c != 0.0 {
                raw.push(((1u16 << i) | (1u16 << j), c));
            }
        }
    }
    Multivector::from_terms(n, raw)
}

/// Decompose an antisymmetric matrix into rotation planes `(θ, a, b)` with
/// `ω a = θ b`, `ω b = -θ a`.
///
/// Works through the symmetric eigenstructure of `-ω²`: eigenvalues are
/// grouped into clusters (repeated angles are the common case for the block
/// loops here) and each cluster's eigenspace is peeled into `ω`-invariant
/// planes two dimensions at a time. The decomposition is verified by
/// reconstructing `ω` before returning.
pub fn plane_split(
    omega: &DMatrix<f64>,
    tol: f64,
) -> Result<Vec<(f64, DVector<f64>, DVector<f64>)>> {
    let n = omega.nrows();
    let sym = -(omega * omega);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .partial_cmp(&eig.eigenvalues[j])
            .expect("finite eigenvalues")
    });
    let scale = eig.eigenvalues.iter().cloned().fold(1.0f64, f64::max);
    let cluster_tol = 1e-10 * scale;
    let mut planes = Vec::new();
    let mut idx = 0;
    while idx < n {
        let lambda = eig.eigenvalues[order[idx]];
        let mut block: Vec<DVector<f64>> = vec![eig.eigenvectors.column(order[idx]).into_owned()];
        let mut end = idx + 1;
        while end < n && (eig.eigenvalues[order[end]] - lambda).abs() <= cluster_tol {
            block.push(eig.eigenvectors.column(order[end]).into_owned());
            end += 1;
        }
        idx = end;
        let theta_floor = tol.max(1e-9 * omega.norm());
        if lambda <= theta_floor * theta_floor {
            continue;
        }
        let theta = lambda.sqrt();
        // peel ω-invariant planes out of the cluster's eigenspace
        while !block.is_empty() {
            let a = block.remove(0);
            let mut b = omega * &a / theta;
            b -= &a * a.dot(&b);
            let bn = b.norm();
            if bn < 0.5 {
                // a true plane always has a unit partner (ωa ⊥ a with
                // |ωa| = θ); a collapsing partner identifies this cluster
                // as numerical kernel noise, which carries no rotation
                break;
            }
            b /= bn;
            planes.push((theta, a.clone(), b.clone()));
            // project the remainder off the extracted plane, then rebuild an
            // orthonormal basis with column pivoting: renormalizing a nearly
            // exhausted direction would amplify noise into a garbage plane
            for u in &mut block {
                *u -= &a * a.dot(u);
                *u -= &b * b.dot(u);
            }
            let mut rest: Vec<DVector<f64>> = Vec::new();
            loop {
                let Some((imax, norm)) = block
                    .iter()
                    .enumerate()
                    .map(|(i, u)| (i, u.norm()))
                    .max_by(|x, y| x.1.partial_cmp(&y.1).expect("finite norms"))
                else {
                    break;
                };
                if norm < 1e-6 {
                    break;
                }
                let v = block.remove(imax) / norm;
                for u in &mut block {
                    *u -= &v * v.dot(u);
                }
                rest.push(v);
            }
            block = rest;
        }
    }
    // the split must reassemble the generator exactly
    let mut recon = DMatrix::zeros(n, n);
    for (theta, a, b) in &planes {
        recon += (b * a.transpose() - a * b.transpose()) * *theta;
    }
    // eigenvectors inside high-multiplicity clusters carry ~sqrt(eps) fuzz;
    // a structural failure would show up at the scale of ω itself
    let residual = (&recon - omega).norm();
    if residual > 1e-6 * omega.norm().max(1.0) {
        return Err(Error::Invalid(format!(
            "plane split reconstruction residual {residual}"
        )));
    }
    Ok(planes)
}

/// Lift a special orthogonal matrix near the identity into `Spin(n)` as a
/// product of commuting plane rotors.
///
/// Algebraically this equals
/// `bivector_exp(bivector_from_so(so_log_small(r)))`; the factored form stays
/// sparse one factor at a time, which matters when the rotor is later
/// multiplied into a large accumulated lift.
pub fn rotor_from_rotation(r: &DMatrix<f64>) -> Result<SpinElement> {
    let omega = linalg::so_log_small(r)?;
    rotor_from_generator(&omega)
}

/// The commuting plane-rotor factors of the lift. Multiplying them into an
/// accumulated lift one at a time keeps every product sparse-by-small, which
/// is what makes long lifts in high dimension affordable.
pub fn rotor_factors_from_generator(omega: &DMatrix<f64>) -> Result<Vec<SpinElement>> {
    let n = omega.nrows();
    let mut factors = Vec::new();
    for (theta, a, b) in plane_split(omega, 1e-13)? {
        let blade = plane_bivector(&a, &b)?;
        let half = theta / 2.0;
        let factor = Multivector::scalar(n, half.cos())?.add(&blade.scale(half.sin()))?;
        factors.push(SpinElement::from_unchecked(factor));
    }
    Ok(factors)
}

/// Same as [`rotor_from_rotation`] but starting from the antisymmetric
/// generator.
pub fn rotor_from_generator(omega: &DMatrix<f64>) -> Result<SpinElement> {
    let n = omega.nrows();
    let mut rotor = SpinElement::from_unchecked(Multivector::one(n)?);
    for factor in rotor_factors_from_generator(omega)? {
        rotor = rotor.mul(&factor)?;
    }
    Ok(rotor)
}
