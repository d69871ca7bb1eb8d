//! Exceptional actions, verified mechanically through octonion arithmetic:
//! the automorphism group fixing an imaginary unit (a copy of SU(3)), the
//! eight-dimensional Clifford module over the imaginary octonions behind the
//! `Spin(7)` action, the sixteen-dimensional picture behind `Spin(9)`, the
//! order-4 lift of the antipodal-type involution, and the double cover of the
//! unitary group by determinant square roots.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::clifford::{lambda_map, Multivector, SpinElement};
use crate::error::{Error, Result};
use crate::linalg::{rank_of, CMatrix};
use crate::octonion::Octonion;

/// The 8x8 matrix of left multiplication by `z` on the octonions.
pub fn l_operator(z: &Octonion) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(8, 8);
    for k in 0..8 {
        let col = *z * Octonion::unit(k);
        for r in 0..8 {
            m[(r, k)] = col.coeffs[r];
        }
    }
    m
}

fn oct_to_vec(z: &Octonion) -> DVector<f64> {
    DVector::from_column_slice(&z.coeffs)
}

// ---------------------------------------------------------------------------
// Cayley triples and the stabilizer copy of SU(3)
// ---------------------------------------------------------------------------

/// Whether `(e1, e2, e3)` is a Cayley triple, in the orthogonality
/// formulation: for unit imaginary octonions the anticommutation conditions
/// amount to `e2 ⊥ e1`, `e3 ⊥ e1`, `e3 ⊥ e2` and `e3 ⊥ e1·e2`.
pub fn is_cayley_triple(e1: &Octonion, e2: &Octonion, e3: &Octonion) -> Result<bool> {
    for e in [e1, e2, e3] {
        if (e.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::NotUnit(e.norm()));
        }
        if !e.is_imaginary(1e-9) {
            return Err(Error::Invalid(
                "Cayley triple entries must be imaginary".into(),
            ));
        }
    }
    let tol = 1e-9;
    Ok(e2.dot(e1).abs() < tol
        && e3.dot(e1).abs() < tol
        && e3.dot(e2).abs() < tol
        && e3.dot(&(*e1 * *e2)).abs() < tol)
}

/// Extend a special unitary 3x3 matrix to an algebra automorphism of the
/// octonions fixing `span{1, i1}`.
///
/// The complex structure is `C = span{1, i1}`, and the three complex
/// coordinate slots sit on the real coordinate pairs `(i2, i4)`, `(i3, i7)`,
/// `(i5, i6)` — each pair being `(b, i1·b)` for the slot's basis unit `b`.
pub fn su3_extend_to_g2(a: &CMatrix) -> Result<DMatrix<f64>> {
    if a.nrows() != 3 || a.ncols() != 3 {
        return Err(Error::DimensionMismatch {
            left: a.nrows(),
            right: 3,
        });
    }
    let unitary_res = (a.adjoint() * a - CMatrix::identity(3, 3)).norm();
    let det = a.determinant();
    let det_res = (det - Complex::new(1.0, 0.0)).norm();
    if unitary_res > 1e-9 || det_res > 1e-9 {
        return Err(Error::NotSpecialUnitary(unitary_res.max(det_res)));
    }
    // (real, imaginary) coordinate pairs of the three complex slots
    const SLOTS: [(usize, usize); 3] = [(2, 4), (3, 7), (5, 6)];
    let mut phi = DMatrix::zeros(8, 8);
    phi[(0, 0)] = 1.0;
    phi[(1, 1)] = 1.0;
    for (k, (re_k, im_k)) in SLOTS.iter().enumerate() {
        for (j, (re_j, im_j)) in SLOTS.iter().enumerate() {
            let z = a[(j, k)];
            // multiplication by z maps slot k into slot j
            phi[(*re_j, *re_k)] += z.re;
            phi[(*im_j, *re_k)] += z.im;
            phi[(*re_j, *im_k)] -= z.im;
            phi[(*im_j, *im_k)] += z.re;
        }
    }
    Ok(phi)
}

/// Multiplicativity defect of a candidate algebra automorphism:
/// `max ‖φ(xy) − φ(x)φ(y)‖` over random octonion pairs.
pub fn automorphism_residual(phi: &DMatrix<f64>, pairs: &[(Octonion, Octonion)]) -> f64 {
    let mut worst: f64 = 0.0;
    for (x, y) in pairs {
        let lhs = phi * oct_to_vec(&(*x * *y));
        let px = phi * oct_to_vec(x);
        let py = phi * oct_to_vec(y);
        let gx = Octonion::new([px[0], px[1], px[2], px[3], px[4], px[5], px[6], px[7]]);
        let gy = Octonion::new([py[0], py[1], py[2], py[3], py[4], py[5], py[6], py[7]]);
        let rhs = oct_to_vec(&(gx * gy));
        worst = worst.max((lhs - rhs).norm());
    }
    worst
}

// ---------------------------------------------------------------------------
// the Clifford module over the imaginary octonions
// ---------------------------------------------------------------------------

/// Max residual of `L_u L_v + L_v L_u + 2<u,v> Id` over all 28 pairs of
/// basis imaginary units (including the diagonal pairs).
pub fn spin7_clifford_check() -> f64 {
    let mut worst: f64 = 0.0;
    for a in 1..8 {
        for b in a..8 {
            let u = Octonion::unit(a);
            let v = Octonion::unit(b);
            let lu = l_operator(&u);
            let lv = l_operator(&v);
            let residual =
                (&lu * &lv + &lv * &lu + DMatrix::identity(8, 8) * (2.0 * u.dot(&v))).norm();
            worst = worst.max(residual);
        }
    }
    worst
}

/// Dimension of the span of `[L_u, L_v]·1` over basis imaginary pairs: the
/// commutators of imaginary octonions.
pub fn so7_orbit_span_dim() -> usize {
    let mut vectors = Vec::new();
    for a in 1..8 {
        for b in (a + 1)..8 {
            let u = Octonion::unit(a);
            let v = Octonion::unit(b);
            let c = u * v - v * u;
            vectors.push(oct_to_vec(&c));
        }
    }
    rank_of(&vectors, 1e-8)
}

/// The module matrix of an element of `Cl_7` acting on the octonions: each
/// blade acts as the composite of left multiplications by its generators in
/// ascending order.
pub fn spin7_module_matrix(mv: &Multivector) -> Result<DMatrix<f64>> {
    if mv.dim() != 7 {
        return Err(Error::DimensionMismatch {
            left: mv.dim(),
            right: 7,
        });
    }
    let l: Vec<DMatrix<f64>> = (1..8).map(|k| l_operator(&Octonion::unit(k))).collect();
    let mut out = DMatrix::zeros(8, 8);
    for &(blade, coeff) in mv.terms() {
        let mut factor = DMatrix::identity(8, 8);
        for g in 0..7 {
            if blade >> g & 1 == 1 {
                factor = factor * &l[g];
            }
        }
        out += factor * coeff;
    }
    Ok(out)
}

/// Consistency of the module action with the double cover on vectors:
/// `ρ(s) L_u ρ(s)^{-1} = L_{λ(s)u}` for a rotor `s` and `u ∈ Im(O)`.
pub fn spin7_module_cover_residual(s: &SpinElement) -> Result<f64> {
    let rho = spin7_module_matrix(s.mv())?;
    let rho_inv = spin7_module_matrix(&s.mv().reverse())?;
    let lam = lambda_map(s)?;
    let mut worst: f64 = 0.0;
    for j in 0..7 {
        let lhs = &rho * l_operator(&Octonion::unit(j + 1)) * &rho_inv;
        let mut image = Octonion::ZERO;
        for i in 0..7 {
            image.coeffs[i + 1] = lam[(i, j)];
        }
        worst = worst.max((lhs - l_operator(&image)).norm());
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// the sixteen-dimensional picture
// ---------------------------------------------------------------------------

/// Generator of the rank-9 Clifford structure on `O² = R^16` attached to
/// `(r, z) ∈ R ⊕ O`: the block matrix `[[r, L_z], [L_z̄, -r]]`.
pub fn spin9_generator(r: f64, z: &Octonion) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(16, 16);
    let lz = l_operator(z);
    let lzbar = l_operator(&z.conj());
    for i in 0..8 {
        m[(i, i)] = r;
        m[(i + 8, i + 8)] = -r;
        for j in 0..8 {
            m[(i, j + 8)] = lz[(i, j)];
            m[(i + 8, j)] = lzbar[(i, j)];
        }
    }
    m
}

/// The wedge of two rank-9 vectors, realized as the commutator of their
/// generators. Normalization anchor: acting on `(1, 0)` with
/// `(r, u) = (1, 0)`, `(r', v) = (0, v)` gives exactly `(0, -2v̄)`.
pub fn spin9_wedge(r: f64, u: &Octonion, rp: f64, v: &Octonion) -> DMatrix<f64> {
    let gu = spin9_generator(r, u);
    let gv = spin9_generator(rp, v);
    &gu * &gv - &gv * &gu
}

/// Residual of the displayed commutator identity: the wedge against the
/// block matrix assembled from `L`-operator products.
pub fn spin9_commutator_identity(u: &Octonion, v: &Octonion, r: f64, rp: f64) -> f64 {
    let got = spin9_wedge(r, u, rp, v);
    let (lu, lv) = (l_operator(u), l_operator(v));
    let (lub, lvb) = (l_operator(&u.conj()), l_operator(&v.conj()));
    let mut expected = DMatrix::zeros(16, 16);
    let block11 = &lu * &lvb - &lv * &lub;
    let block12 = (&lv * r - &lu * rp) * 2.0;
    let block21 = (&lub * rp - &lvb * r) * 2.0;
    let block22 = &lub * &lv - &lvb * &lu;
    for i in 0..8 {
        for j in 0..8 {
            expected[(i, j)] = block11[(i, j)];
            expected[(i, j + 8)] = block12[(i, j)];
            expected[(i + 8, j)] = block21[(i, j)];
            expected[(i + 8, j + 8)] = block22[(i, j)];
        }
    }
    (got - expected).norm()
}

fn base_point_16() -> DVector<f64> {
    let mut v = DVector::zeros(16);
    v[0] = 1.0;
    v
}

/// Rank of `{wedge · (1, 0)}` over the 36 basis pairs of `R ⊕ O`: the
/// dimension of the orbit's tangent space.
pub fn spin9_tangent_dim() -> usize {
    rank_of(&spin9_tangent_vectors(), 1e-8)
}

fn spin9_tangent_vectors() -> Vec<DVector<f64>> {
    // basis of R ⊕ O: (1, 0) and (0, i_k), k = 0..7
    let mut gens: Vec<(f64, Octonion)> = vec![(1.0, Octonion::ZERO)];
    for k in 0..8 {
        gens.push((0.0, Octonion::unit(k)));
    }
    let o = base_point_16();
    let mut vectors = Vec::new();
    for a in 0..gens.len() {
        for b in (a + 1)..gens.len() {
            let w = spin9_wedge(gens[a].0, &gens[a].1, gens[b].0, &gens[b].1);
            vectors.push(&w * &o);
        }
    }
    vectors
}

/// Residual of a subspace containment: how far each target direction is from
/// the span of `vectors`.
fn containment_residual(vectors: &[DVector<f64>], targets: &[DVector<f64>]) -> f64 {
    let basis = crate::linalg::orthonormalize(vectors, 1e-10);
    let mut worst: f64 = 0.0;
    for t in targets {
        let mut w = t.clone();
        for b in &basis {
            let c = b.dot(&w);
            w -= b * c;
        }
        worst = worst.max(w.norm());
    }
    worst
}

/// How completely the tangent span contains the second octonion summand and
/// the imaginary part of the first: `(residual on (0, O), residual on
/// (Im O, 0))`.
pub fn spin9_tangent_contains() -> (f64, f64) {
    let vectors = spin9_tangent_vectors();
    let mut second = Vec::new();
    for k in 0..8 {
        let mut v = DVector::zeros(16);
        v[8 + k] = 1.0;
        second.push(v);
    }
    let mut im_first = Vec::new();
    for k in 1..8 {
        let mut v = DVector::zeros(16);
        v[k] = 1.0;
        im_first.push(v);
    }
    (
        containment_residual(&vectors, &second),
        containment_residual(&vectors, &im_first),
    )
}

/// The isotropy generator `T_{u,v} = u ∧ v + ½([u,v] ∧ 1)` for imaginary
/// `u, v`, realized on `R^16`.
///
/// Convention anchor: the wedge here is a quarter of the generator
/// commutator — the scale on which a unit coordinate plane acts as an exact
/// 90-degree rotation, which is what makes the rotation table below come out
/// on the nose.
pub fn spin9_isotropy_generator(u: &Octonion, v: &Octonion) -> DMatrix<f64> {
    let quarter = 0.25;
    let commutator = *u * *v - *v * *u;
    let first = spin9_wedge(0.0, u, 0.0, v) * quarter;
    let second = spin9_wedge(0.0, &commutator, 0.0, &Octonion::one()) * (quarter * 0.5);
    first + second
}

/// The induced operator on the imaginary octonions (rows/cols 1..7 of the
/// first block).
pub fn spin9_phi(u: &Octonion, v: &Octonion) -> DMatrix<f64> {
    let t = spin9_isotropy_generator(u, v);
    t.view((1, 1), (7, 7)).into_owned()
}

/// Summary of the isotropy verifications on the sixteen-dimensional picture.
#[derive(Debug, Clone)]
pub struct IsotropyReport {
    /// max `‖T_{u,v} · (1,0)‖` over basis pairs
    pub annihilation_residual: f64,
    /// rank of the span of the `T_{u,v}`
    pub span_dim: usize,
    /// max `‖φ + φᵀ‖` over basis pairs
    pub phi_skew_residual: f64,
    /// rank of the span of the `φ(T_{u,v})`
    pub phi_rank: usize,
    /// deviation of `φ(T_{i1,i2})` from its exact rotation table
    pub rotation_table_residual: f64,
}

pub fn spin9_isotropy_checks() -> IsotropyReport {
    let o = base_point_16();
    let mut t_vectors = Vec::new();
    let mut phi_vectors = Vec::new();
    let mut annihilation_residual: f64 = 0.0;
    let mut phi_skew_residual: f64 = 0.0;
    for a in 1..8 {
        for b in (a + 1)..8 {
            let u = Octonion::unit(a);
            let v = Octonion::unit(b);
            let t = spin9_isotropy_generator(&u, &v);
            annihilation_residual = annihilation_residual.max((&t * &o).norm());
            t_vectors.push(crate::linalg::vectorize(&t));
            let phi = spin9_phi(&u, &v);
            phi_skew_residual = phi_skew_residual.max((&phi + phi.transpose()).norm());
            phi_vectors.push(crate::linalg::vectorize(&phi));
        }
    }
    // φ(T_{i1,i2}) kills span{i1, i2, i4} and rotates (i3, i6) and (i5, i7)
    // by 90 degrees: i3 ↦ -i6 ↦ i3 and i5 ↦ i7 ↦ -i5 (ambient indices)
    let phi12 = spin9_phi(&Octonion::unit(1), &Octonion::unit(2));
    let mut expected = DMatrix::zeros(7, 7);
    let col = |j: usize| j - 1; // ambient unit index -> 7x7 index
    expected[(col(6), col(3))] = -1.0;
    expected[(col(3), col(6))] = 1.0;
    expected[(col(7), col(5))] = 1.0;
    expected[(col(5), col(7))] = -1.0;
    let rotation_table_residual = (&phi12 - expected).norm();
    IsotropyReport {
        annihilation_residual,
        span_dim: rank_of(&t_vectors, 1e-8),
        phi_skew_residual,
        phi_rank: rank_of(&phi_vectors, 1e-8),
        rotation_table_residual,
    }
}

// ---------------------------------------------------------------------------
// the order-4 lift and the metaunitary cover
// ---------------------------------------------------------------------------

/// Order of `e_n · e_{n+1}` in the spin group over `Cl_{n+1}`, together with
/// exactness checks for `f² = -1` and the covered rotation
/// `diag(Id_{n-1}, -Id_2)`. All arithmetic is exact sign flips, so the
/// comparisons are equality, not tolerance.
pub fn z4_lift_order(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::Invalid("need n >= 2".into()));
    }
    let dim = n + 1;
    let f = Multivector::basis_vector(dim, n)?.mul(&Multivector::basis_vector(dim, n + 1)?)?;
    // f^2 = -1 exactly
    let f2 = f.mul(&f)?;
    if f2 != Multivector::scalar(dim, -1.0)? {
        return Err(Error::Invalid("lift does not square to -1 exactly".into()));
    }
    // covered rotation: identity except -1 on the last two axes
    let lam = lambda_map(&SpinElement::new(f.clone())?)?;
    let mut expected = DMatrix::identity(dim, dim);
    expected[(n - 1, n - 1)] = -1.0;
    expected[(n, n)] = -1.0;
    if (lam - expected).norm() != 0.0 {
        return Err(Error::Invalid("lift covers the wrong rotation".into()));
    }
    let one = Multivector::one(dim)?;
    let mut power = f.clone();
    let mut order = 1;
    while power != one {
        power = power.mul(&f)?;
        order += 1;
        if order > 8 {
            return Err(Error::Invalid("unexpected order".into()));
        }
    }
    Ok(order)
}

/// Sample pairs `(A, z)` with `det A = z²` and verify closure under products
/// and inverses, plus the two-to-one fiber over the identity. Returns the
/// worst determinant residual seen.
pub fn metaunitary_check(n: usize, trials: usize, seed: u64) -> Result<f64> {
    use rand::{Rng, SeedableRng};
    let dim = n + 1;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let sample_unitary = |rng: &mut rand_chacha::ChaCha8Rng| -> CMatrix {
        let x = CMatrix::from_fn(dim, dim, |i, j| {
            if i < j {
                Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            } else if i == j {
                Complex::new(0.0, rng.random::<f64>() - 0.5)
            } else {
                Complex::new(0.0, 0.0)
            }
        });
        let skew = &x - &x.adjoint();
        crate::linalg::exp_complex(&(skew * Complex::new(0.5, 0.0)))
    };
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let a = sample_unitary(&mut rng);
        let b = sample_unitary(&mut rng);
        let (da, db) = (a.determinant(), b.determinant());
        // both square roots of the determinant give members of the cover
        let za = da.sqrt() * if rng.random::<bool>() { 1.0 } else { -1.0 };
        let zb = db.sqrt() * if rng.random::<bool>() { 1.0 } else { -1.0 };
        worst = worst.max((za * za - da).norm());
        // closure under the product
        let dab = (&a * &b).determinant();
        worst = worst.max((za * zb * za * zb - dab).norm());
        // closure under the inverse
        let dinv = a.adjoint().determinant();
        let zinv = 1.0 / za;
        worst = worst.max((zinv * zinv - dinv).norm());
    }
    // fiber over the identity is exactly {(Id, 1), (Id, -1)}
    let id_det = CMatrix::identity(dim, dim).determinant();
    worst = worst.max((Complex::new(1.0, 0.0) * Complex::new(1.0, 0.0) - id_det).norm());
    worst = worst.max((Complex::new(-1.0, 0.0) * Complex::new(-1.0, 0.0) - id_det).norm());
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{bivector_exp, rotor_from_generator};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_octonion(rng: &mut ChaCha8Rng) -> Octonion {
        let mut coeffs = [0.0; 8];
        for c in &mut coeffs {
            *c = rng.random::<f64>() * 2.0 - 1.0;
        }
        Octonion::new(coeffs)
    }

    fn random_su3(rng: &mut ChaCha8Rng) -> CMatrix {
        let x = CMatrix::from_fn(3, 3, |i, j| {
            if i < j {
                Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            } else {
                Complex::new(0.0, 0.0)
            }
        });
        let mut skew = &x - &x.adjoint();
        let d0 = rng.random::<f64>() - 0.5;
        let d1 = rng.random::<f64>() - 0.5;
        skew[(0, 0)] = Complex::new(0.0, d0);
        skew[(1, 1)] = Complex::new(0.0, d1);
        skew[(2, 2)] = Complex::new(0.0, -d0 - d1);
        crate::linalg::exp_complex(&skew)
    }

    #[test]
    fn l_operator_basics() {
        assert!((l_operator(&Octonion::one()) - DMatrix::identity(8, 8)).norm() < 1e-15);
        for k in 1..8 {
            let l = l_operator(&Octonion::unit(k));
            assert!((&l + l.transpose()).norm() < 1e-15, "L_i antisymmetric");
            assert!((&l * &l + DMatrix::identity(8, 8)).norm() < 1e-15);
        }
    }

    #[test]
    fn cayley_triples() {
        let i = Octonion::unit;
        assert!(is_cayley_triple(&i(1), &i(2), &i(3)).unwrap());
        // i4 = i1 i2 fails the last orthogonality condition
        assert!(!is_cayley_triple(&i(1), &i(2), &i(4)).unwrap());
        assert!(!is_cayley_triple(&i(1), &i(1), &i(3)).unwrap());
        assert!(is_cayley_triple(&Octonion::one(), &i(2), &i(3)).is_err());
    }

    #[test]
    fn su3_extension_is_an_automorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
        let id = su3_extend_to_g2(&CMatrix::identity(3, 3)).unwrap();
        assert!((&id - DMatrix::identity(8, 8)).norm() < 1e-14);
        for _ in 0..20 {
            let a = random_su3(&mut rng);
            let phi = su3_extend_to_g2(&a).unwrap();
            // fixes 1 and i1
            let e0 = DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
            let e1 = DVector::from_vec(vec![0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
            assert!((phi.column(0) - e0).norm() < 1e-12);
            assert!((phi.column(1) - e1).norm() < 1e-12);
            // orthogonal (preserves the inner product)
            assert!(crate::linalg::so_residual(&phi) < 1e-9);
            // multiplicative on 100 random pairs
            let pairs: Vec<_> = (0..100)
                .map(|_| (random_octonion(&mut rng), random_octonion(&mut rng)))
                .collect();
            assert!(automorphism_residual(&phi, &pairs) < 1e-8);
        }
        let not_su = CMatrix::identity(3, 3) * Complex::new(2.0, 0.0);
        assert!(su3_extend_to_g2(&not_su).is_err());
    }

    #[test]
    fn clifford_module_relations() {
        assert!(spin7_clifford_check() < 1e-12);
        // single pairs
        let l1 = l_operator(&Octonion::unit(1));
        assert!((&l1 * &l1 + DMatrix::identity(8, 8)).norm() < 1e-15);
        let l2 = l_operator(&Octonion::unit(2));
        assert!((&l1 * &l2 + &l2 * &l1).norm() < 1e-15);
    }

    #[test]
    fn orbit_span_is_the_imaginaries() {
        assert_eq!(so7_orbit_span_dim(), 7);
        // every spanning vector is imaginary, and one sample pair points
        // along i4
        let c = Octonion::unit(1) * Octonion::unit(2) - Octonion::unit(2) * Octonion::unit(1);
        assert!(c.is_imaginary(1e-15));
        let mut expected = [0.0; 8];
        expected[4] = 2.0;
        assert_eq!(c.coeffs, expected);
    }

    #[test]
    fn module_action_is_a_homomorphism_and_covers_lambda() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            // random even rotor in Cl_7
            let mut omega = DMatrix::zeros(7, 7);
            for i in 0..7 {
                for j in 0..i {
                    let x = 0.5 * (rng.random::<f64>() - 0.5);
                    omega[(i, j)] = x;
                    omega[(j, i)] = -x;
                }
            }
            let s = rotor_from_generator(&omega).unwrap();
            assert!(spin7_module_cover_residual(&s).unwrap() < 1e-9);
        }
        // plain multiplicativity on random multivectors
        let mv = |rng: &mut ChaCha8Rng| {
            let raw: Vec<(u16, f64)> = (0..6)
                .map(|_| (rng.random::<u16>() & 0x7f, rng.random::<f64>() - 0.5))
                .collect();
            Multivector::from_terms(7, raw).unwrap()
        };
        for _ in 0..20 {
            let a = mv(&mut rng);
            let b = mv(&mut rng);
            let lhs = spin7_module_matrix(&a.mul(&b).unwrap()).unwrap();
            let rhs = spin7_module_matrix(&a).unwrap() * spin7_module_matrix(&b).unwrap();
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn spin9_commutator_identity_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        // equal arguments commute
        let u = random_octonion(&mut rng);
        assert!(spin9_commutator_identity(&u, &u, 0.3, 0.3) < 1e-12);
        for _ in 0..20 {
            let u = random_octonion(&mut rng);
            let v = random_octonion(&mut rng);
            let r = rng.random::<f64>() - 0.5;
            let rp = rng.random::<f64>() - 0.5;
            assert!(spin9_commutator_identity(&u, &v, r, rp) < 1e-10);
        }
    }

    #[test]
    fn spin9_wedge_anchor_examples() {
        let o = base_point_16();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..10 {
            let v = random_octonion(&mut rng);
            // (1,0) ∧ (0,v) on the base point gives (0, -2v̄)
            let w = spin9_wedge(1.0, &Octonion::ZERO, 0.0, &v) * &o;
            let vbar = v.conj();
            for k in 0..8 {
                assert!((w[k]).abs() < 1e-13);
                assert!((w[8 + k] + 2.0 * vbar.coeffs[k]).abs() < 1e-13);
            }
            // (0,1) ∧ (0,v) gives (v̄ - v, 0)
            let w = spin9_wedge(0.0, &Octonion::one(), 0.0, &v) * &o;
            let diff = vbar - v;
            for k in 0..8 {
                assert!((w[k] - diff.coeffs[k]).abs() < 1e-13);
                assert!((w[8 + k]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn spin9_tangent_space() {
        assert_eq!(spin9_tangent_dim(), 15);
        let (second, im_first) = spin9_tangent_contains();
        assert!(second < 1e-9, "span contains the full second summand");
        assert!(im_first < 1e-9, "span contains the imaginary first summand");
    }

    #[test]
    fn spin9_isotropy_report() {
        let report = spin9_isotropy_checks();
        assert!(report.annihilation_residual < 1e-10);
        assert_eq!(report.span_dim, 21);
        assert!(report.phi_skew_residual < 1e-10);
        assert_eq!(report.phi_rank, 21);
        assert!(report.rotation_table_residual < 1e-10);
    }

    #[test]
    fn z4_orders() {
        for n in 2..=7 {
            assert_eq!(z4_lift_order(n).unwrap(), 4, "n = {n}");
        }
        assert!(z4_lift_order(1).is_err());
    }

    #[test]
    fn metaunitary_double_cover() {
        for n in [1usize, 2, 3] {
            assert!(metaunitary_check(n, 100, crate::DEFAULT_SEED).unwrap() < 1e-9);
        }
    }

    #[test]
    fn single_plane_rotors_act_consistently_through_l_composites() {
        // exp(θ/2 e1e2) acts on O as cos(θ/2) + sin(θ/2) L_{i1}L_{i2}
        let theta = 0.8f64;
        let beta = Multivector::from_terms(7, vec![(0b11, theta / 2.0)]).unwrap();
        let s = bivector_exp(&beta).unwrap();
        let rho = spin7_module_matrix(s.mv()).unwrap();
        let expected = DMatrix::identity(8, 8) * (theta / 2.0).cos()
            + l_operator(&Octonion::unit(1)) * l_operator(&Octonion::unit(2))
                * (theta / 2.0).sin();
        assert!((rho - expected).norm() < 1e-13);
    }
}
