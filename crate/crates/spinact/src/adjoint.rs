//! The adjoint route to the isotropy representation.
//!
//! For each classical action the acting group's Lie algebra is realized as
//! antisymmetric matrices on the ambient space: antisymmetric for the real
//! family, realized skew-Hermitian for the complex families, realized
//! quaternionic skew-Hermitian (plus the right-multiplication generators for
//! the quotient families). The stabilizer subalgebra is cut out as the
//! annihilator of the base point, and the tangent space is its orthogonal
//! complement under `<X, Y> = -tr(XY)`, which on these realizations is the
//! Frobenius inner product. Conjugating the complement basis by the loop
//! samples then yields the isotropy path a second time, independently of the
//! block-restriction route.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::actions::{ActionSpec, Family, GroupLoop, RotationPath};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::octonion::Quaternion;
use crate::realize::{realize_complex, realize_quaternionic, realize_right_mult, QMatrix};

/// Rank-detection threshold for the orthonormalization passes.
pub const RANK_TOL: f64 = 1e-8;

/// Orthonormal bases (Frobenius) for the realized algebra of the acting
/// group, its stabilizer subalgebra, and the reductive complement.
#[derive(Debug, Clone)]
pub struct LieAlgebraBasis {
    pub ambient_dim: usize,
    pub g_basis: Vec<DMatrix<f64>>,
    pub h_basis: Vec<DMatrix<f64>>,
    pub m_basis: Vec<DMatrix<f64>>,
}

fn frobenius(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn orthonormalize_matrices(mats: &[DMatrix<f64>], tol: f64) -> Vec<DMatrix<f64>> {
    let vectors: Vec<DVector<f64>> = mats.iter().map(linalg::vectorize).collect();
    let basis = linalg::orthonormalize(&vectors, tol);
    let (r, c) = (mats[0].nrows(), mats[0].ncols());
    basis
        .into_iter()
        .map(|v| DMatrix::from_column_slice(r, c, v.as_slice()))
        .collect()
}

/// Spanning set (possibly redundant) for the realized Lie algebra of the
/// acting group.
fn raw_algebra_span(spec: &ActionSpec) -> Result<Vec<DMatrix<f64>>> {
    let mut out = Vec::new();
    match spec.family {
        Family::SO => {
            let d = spec.n + 1;
            for i in 0..d {
                for j in (i + 1)..d {
                    let mut m = DMatrix::zeros(d, d);
                    m[(i, j)] = 1.0;
                    m[(j, i)] = -1.0;
                    out.push(m);
                }
            }
        }
        Family::U | Family::SU => {
            let m = spec.n + 1;
            let mut push = |c: CMatrix| out.push(realize_complex(&c).entries);
            for p in 0..m {
                for q in (p + 1)..m {
                    let mut real = CMatrix::zeros(m, m);
                    real[(p, q)] = Complex::new(1.0, 0.0);
                    real[(q, p)] = Complex::new(-1.0, 0.0);
                    push(real);
                    let mut imag = CMatrix::zeros(m, m);
                    imag[(p, q)] = Complex::new(0.0, 1.0);
                    imag[(q, p)] = Complex::new(0.0, 1.0);
                    push(imag);
                }
            }
            if spec.family == Family::U {
                for p in 0..m {
                    let mut diag = CMatrix::zeros(m, m);
                    diag[(p, p)] = Complex::new(0.0, 1.0);
                    push(diag);
                }
            } else {
                // traceless diagonal directions only
                for p in 0..m - 1 {
                    let mut diag = CMatrix::zeros(m, m);
                    diag[(p, p)] = Complex::new(0.0, 1.0);
                    diag[(p + 1, p + 1)] = Complex::new(0.0, -1.0);
                    push(diag);
                }
            }
        }
        Family::Sp | Family::SpU1 | Family::SpSp1 => {
            let m = spec.n + 1;
            let units = [Quaternion::i(), Quaternion::j(), Quaternion::k()];
            for p in 0..m {
                for q in (p + 1)..m {
                    let mut anti = QMatrix::zeros(m, m);
                    anti[(p, q)] = Quaternion::one();
                    anti[(q, p)] = Quaternion::one().scale(-1.0);
                    out.push(realize_quaternionic(&anti).entries);
                    for u in units {
                        let mut sym = QMatrix::zeros(m, m);
                        sym[(p, q)] = u;
                        sym[(q, p)] = u;
                        out.push(realize_quaternionic(&sym).entries);
                    }
                }
            }
            for p in 0..m {
                for u in units {
                    let mut diag = QMatrix::zeros(m, m);
                    diag[(p, p)] = u;
                    out.push(realize_quaternionic(&diag).entries);
                }
            }
            // right-multiplication generators of the scalar factor
            match spec.family {
                Family::SpU1 => out.push(realize_right_mult(&Quaternion::i(), m)),
                Family::SpSp1 => {
                    for u in units {
                        out.push(realize_right_mult(&u, m));
                    }
                }
                _ => {}
            }
        }
        _ => {
            return Err(Error::UnsupportedFamily(spec.family.token().to_string()));
        }
    }
    Ok(out)
}

/// Expected dimension of the realized algebra, for cross-checking.
pub fn expected_g_dim(spec: &ActionSpec) -> Result<usize> {
    let m = spec.n + 1;
    Ok(match spec.family {
        Family::SO => m * (m - 1) / 2,
        Family::U => m * m,
        Family::SU => m * m - 1,
        Family::Sp => m * (2 * m + 1),
        Family::SpU1 => m * (2 * m + 1) + 1,
        Family::SpSp1 => m * (2 * m + 1) + 3,
        _ => return Err(Error::UnsupportedFamily(spec.family.token().to_string())),
    })
}

/// Build the group algebra and its stabilizer subalgebra, then complete the
/// reductive split.
pub fn lie_basis(spec: &ActionSpec) -> Result<LieAlgebraBasis> {
    let span = raw_algebra_span(spec)?;
    let g_basis = orthonormalize_matrices(&span, RANK_TOL);
    if g_basis.len() != expected_g_dim(spec)? {
        return Err(Error::Invalid(format!(
            "algebra dimension {} does not match the expected {}",
            g_basis.len(),
            expected_g_dim(spec)?
        )));
    }
    // stabilizer subalgebra: kernel of X ↦ X·o over the coefficient space
    let d = spec.ambient_dim;
    let o = spec.base_point();
    let mut action = DMatrix::zeros(d, g_basis.len());
    for (j, x) in g_basis.iter().enumerate() {
        action.set_column(j, &(x * &o));
    }
    let kernel = linalg::nullspace(&action, RANK_TOL);
    let h_raw: Vec<DMatrix<f64>> = kernel
        .iter()
        .map(|coeffs| {
            let mut m = DMatrix::zeros(d, d);
            for (j, x) in g_basis.iter().enumerate() {
                m += x * coeffs[j];
            }
            m
        })
        .collect();
    let h_basis = if h_raw.is_empty() {
        vec![]
    } else {
        orthonormalize_matrices(&h_raw, RANK_TOL)
    };
    let partial = LieAlgebraBasis {
        ambient_dim: d,
        g_basis,
        h_basis,
        m_basis: vec![],
    };
    reductive_split(partial, spec)
}

/// Complete `m` as the orthogonal complement of the stabilizer subalgebra and
/// verify its invariance under conjugation by sampled stabilizer elements.
pub fn reductive_split(basis: LieAlgebraBasis, spec: &ActionSpec) -> Result<LieAlgebraBasis> {
    let mut residuals = Vec::new();
    for x in &basis.g_basis {
        let mut w = x.clone();
        for _ in 0..2 {
            for h in &basis.h_basis {
                let c = frobenius(h, &w);
                w -= h * c;
            }
            for m in &residuals {
                let c = frobenius(m, &w);
                w -= m * c;
            }
        }
        let norm = w.norm();
        if norm > RANK_TOL {
            residuals.push(w / norm);
        }
    }
    let out = LieAlgebraBasis {
        m_basis: residuals,
        ..basis
    };
    if out.m_basis.len() != spec.sphere_dim {
        return Err(Error::Invalid(format!(
            "reductive complement has dimension {}, expected {}",
            out.m_basis.len(),
            spec.sphere_dim
        )));
    }
    // verified, not assumed: Ad(H)-invariance of m on sampled stabilizer
    // elements (exponentials of random subalgebra directions)
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(crate::DEFAULT_SEED);
    for _ in 0..8 {
        let h = sample_stabilizer_element(&out, &mut rng);
        for m in &out.m_basis {
            let conj = &h * m * h.transpose();
            let residual = project_residual(&conj, &out.m_basis);
            if residual > 1e-7 {
                return Err(Error::SubspaceViolation(residual));
            }
        }
        let _ = rng.random::<f64>();
    }
    Ok(out)
}

/// Exponential of a random element of `span(h_basis)`.
pub fn sample_stabilizer_element(
    basis: &LieAlgebraBasis,
    rng: &mut impl rand::Rng,
) -> DMatrix<f64> {
    let d = basis.ambient_dim;
    let mut x = DMatrix::zeros(d, d);
    for h in &basis.h_basis {
        x += h * (rng.random::<f64>() * 2.0 - 1.0);
    }
    linalg::exp_real(&x)
}

fn project_residual(x: &DMatrix<f64>, basis: &[DMatrix<f64>]) -> f64 {
    let mut w = x.clone();
    for b in basis {
        let c = frobenius(b, &w);
        w -= b * c;
    }
    w.norm()
}

/// The isotropy path computed as the adjoint action of the loop samples on
/// the reductive complement, in `m_basis` coordinates.
pub fn adjoint_isotropy_path(
    spec: &ActionSpec,
    group_loop: &GroupLoop,
    basis: &LieAlgebraBasis,
) -> Result<RotationPath> {
    if group_loop.spec != *spec {
        return Err(Error::Invalid("loop belongs to a different action".into()));
    }
    let dim = basis.m_basis.len();
    let mut samples = Vec::with_capacity(group_loop.samples.len());
    for h in &group_loop.samples {
        let mut mat = DMatrix::zeros(dim, dim);
        for (j, m) in basis.m_basis.iter().enumerate() {
            let conj = h * m * h.transpose();
            for (i, mi) in basis.m_basis.iter().enumerate() {
                mat[(i, j)] = frobenius(mi, &conj);
            }
            // conjugation must not leave the complement
            let mut w = conj;
            for (i, mi) in basis.m_basis.iter().enumerate() {
                w -= mi * mat[(i, j)];
            }
            let residual = w.norm();
            if residual > 1e-7 {
                return Err(Error::SubspaceViolation(residual));
            }
        }
        samples.push(mat);
    }
    RotationPath::new(samples)
}

/// Residual of the restriction identity: the adjoint character of the group
/// minus the adjoint character of the stabilizer minus the isotropy trace,
/// at one stabilizer element.
pub fn adjoint_character_residual(basis: &LieAlgebraBasis, h: &DMatrix<f64>) -> f64 {
    let htr = h.transpose();
    let trace_on = |family: &[DMatrix<f64>]| -> f64 {
        family
            .iter()
            .map(|x| frobenius(x, &(h * x * &htr)))
            .sum::<f64>()
    };
    let ad_g = trace_on(&basis.g_basis);
    let ad_h = trace_on(&basis.h_basis);
    let sigma = h.trace() - 1.0;
    (ad_g - ad_h - sigma).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::stabilizer_loop;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dimensions_small_cases() {
        let spec = ActionSpec::new(Family::SO, 2).unwrap();
        let b = lie_basis(&spec).unwrap();
        assert_eq!((b.g_basis.len(), b.h_basis.len(), b.m_basis.len()), (3, 1, 2));

        let spec = ActionSpec::new(Family::SpU1, 1).unwrap();
        let b = lie_basis(&spec).unwrap();
        assert_eq!((b.g_basis.len(), b.h_basis.len(), b.m_basis.len()), (11, 4, 7));

        let spec = ActionSpec::new(Family::U, 2).unwrap();
        let b = lie_basis(&spec).unwrap();
        assert_eq!(b.g_basis.len() - b.h_basis.len(), 5);
        assert_eq!(b.m_basis.len(), 5);
    }

    #[test]
    fn dimensions_all_families() {
        for (family, range) in [
            (Family::SO, 2..=8usize),
            (Family::U, 1..=5),
            (Family::SU, 1..=5),
            (Family::Sp, 1..=3),
            (Family::SpU1, 1..=3),
            (Family::SpSp1, 1..=3),
        ] {
            for n in range {
                let spec = ActionSpec::new(family, n).unwrap();
                let b = lie_basis(&spec).unwrap();
                assert_eq!(
                    b.m_basis.len(),
                    spec.sphere_dim,
                    "complement dim for {family} n={n}"
                );
                assert_eq!(
                    b.g_basis.len(),
                    b.h_basis.len() + b.m_basis.len(),
                    "split dims for {family} n={n}"
                );
            }
        }
    }

    #[test]
    fn exceptional_families_unsupported() {
        let spec = ActionSpec::new(Family::G2, 0).unwrap();
        assert!(matches!(
            lie_basis(&spec),
            Err(Error::UnsupportedFamily(_))
        ));
    }

    #[test]
    fn realized_algebras_are_antisymmetric() {
        for (family, n) in [
            (Family::SO, 4),
            (Family::U, 2),
            (Family::SU, 3),
            (Family::Sp, 2),
            (Family::SpU1, 1),
            (Family::SpSp1, 1),
        ] {
            let spec = ActionSpec::new(family, n).unwrap();
            for x in raw_algebra_span(&spec).unwrap() {
                assert!((&x + x.transpose()).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn subalgebra_closure_and_orthogonality() {
        for (family, n) in [(Family::SO, 4), (Family::U, 2), (Family::SpSp1, 1)] {
            let spec = ActionSpec::new(family, n).unwrap();
            let b = lie_basis(&spec).unwrap();
            // h is a subalgebra: commutators project back into h
            for x in &b.h_basis {
                for y in &b.h_basis {
                    let comm = x * y - y * x;
                    assert!(
                        project_residual(&comm, &b.h_basis) < 1e-9,
                        "closure fails for {family}"
                    );
                }
            }
            // h ⊥ m
            for x in &b.h_basis {
                for y in &b.m_basis {
                    assert!(frobenius(x, y).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn so_complement_is_first_row_column() {
        let spec = ActionSpec::new(Family::SO, 4).unwrap();
        let b = lie_basis(&spec).unwrap();
        // explicit complement: antisymmetric matrices supported on the first
        // row and column
        for m in &b.m_basis {
            for i in 1..5 {
                for j in 1..5 {
                    assert!(m[(i, j)].abs() < 1e-10);
                }
            }
        }
        let mut explicit = Vec::new();
        for i in 1..5 {
            let mut x = DMatrix::zeros(5, 5);
            x[(0, i)] = 1.0;
            x[(i, 0)] = -1.0;
            explicit.push(x);
        }
        for e in &explicit {
            assert!(project_residual(e, &b.m_basis) < 1e-10);
        }
    }

    #[test]
    fn adjoint_path_starts_at_identity_and_is_orthogonal() {
        for (family, n) in [(Family::SO, 3), (Family::U, 2), (Family::SpU1, 1)] {
            let spec = ActionSpec::new(family, n).unwrap();
            let lp = stabilizer_loop(&spec, 64).unwrap();
            let b = lie_basis(&spec).unwrap();
            let path = adjoint_isotropy_path(&spec, &lp, &b).unwrap();
            assert_eq!(path.dim, spec.sphere_dim);
            assert!(crate::linalg::dist_from_identity(&path.samples[0]) < 1e-10);
            for s in &path.samples {
                assert!(crate::linalg::so_residual(s) < 1e-9);
            }
        }
    }

    #[test]
    fn adjoint_and_differential_paths_have_matching_eigenstructure() {
        // the two routes differ by a fixed orthogonal change of basis, so the
        // characteristic polynomials agree sample by sample
        for n in [1usize, 2, 3] {
            let spec = ActionSpec::new(Family::SpU1, n).unwrap();
            let lp = stabilizer_loop(&spec, 64).unwrap();
            let b = lie_basis(&spec).unwrap();
            let adj = adjoint_isotropy_path(&spec, &lp, &b).unwrap();
            let diff = crate::actions::isotropy_path_differential(&spec, &lp).unwrap();
            for (a, d) in adj.samples.iter().zip(diff.samples.iter()) {
                // compare traces of powers (equivalent to char polys, stabler)
                let (mut ap, mut dp) = (DMatrix::identity(adj.dim, adj.dim), DMatrix::identity(diff.dim, diff.dim));
                for _ in 0..4 {
                    ap = &ap * a;
                    dp = &dp * d;
                    assert!((ap.trace() - dp.trace()).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn character_identity_on_sampled_stabilizer_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
        for (family, n) in [
            (Family::SO, 4),
            (Family::U, 2),
            (Family::SU, 2),
            (Family::Sp, 1),
            (Family::SpU1, 2),
            (Family::SpSp1, 1),
        ] {
            let spec = ActionSpec::new(family, n).unwrap();
            let b = lie_basis(&spec).unwrap();
            for _ in 0..10 {
                let h = sample_stabilizer_element(&b, &mut rng);
                let res = adjoint_character_residual(&b, &h);
                assert!(res < 1e-8, "character identity fails for {family} n={n}: {res}");
            }
        }
    }
}
