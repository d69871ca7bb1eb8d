//! Named verification suites behind `spinact verify`: each check runs a
//! residual against a pinned tolerance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::actions::{ActionSpec, Family};
use crate::characters::{verify_decomposition, Embedding, RepExpr, Sampler};
use crate::error::Result;
use crate::octonion::Octonion;

/// One named check: a residual measured against a pinned tolerance. Exact
/// integer checks (ranks, orders) report the absolute deviation with a zero
/// tolerance.
#[derive(Debug, Clone)]
pub struct SuiteCheck {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
}

impl SuiteCheck {
    fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        SuiteCheck {
            name: name.into(),
            residual,
            tolerance,
        }
    }

    fn exact_count(name: impl Into<String>, got: usize, want: usize) -> Self {
        SuiteCheck {
            name: name.into(),
            residual: (got as f64 - want as f64).abs(),
            tolerance: 0.0,
        }
    }

    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// The representation-theoretic identities: restriction chains, weight
/// decompositions, and the isotropy-trace comparison for every classical
/// row at its default parameters.
pub fn character_suite(seed: u64, trials: usize) -> Result<Vec<SuiteCheck>> {
    let mut checks = Vec::new();

    for n in 3..=6usize {
        let mut s = Sampler::new(seed);
        let mut sample = || s.orthogonal(n);
        let lhs = RepExpr::restrict(
            Embedding::BlockOrthogonal,
            RepExpr::ext2(RepExpr::StdSO(n + 1)),
        );
        let rhs = RepExpr::sum(RepExpr::ext2(RepExpr::StdSO(n)), RepExpr::StdSO(n));
        let res = verify_decomposition(&lhs, &rhs, &mut sample, trials)?;
        checks.push(SuiteCheck::new(
            format!("exterior-square restriction chain (n={n})"),
            res,
            1e-8,
        ));
    }

    for n in 2..=4usize {
        let mut s = Sampler::new(seed);
        let mut sample = || s.unitary(n);
        let lhs = RepExpr::restrict(
            Embedding::BlockUnitary,
            RepExpr::tensor(RepExpr::StdU(n + 1), RepExpr::ConjStdU(n + 1)),
        );
        let rhs = RepExpr::sum_of(vec![
            RepExpr::tensor(RepExpr::StdU(n), RepExpr::ConjStdU(n)),
            RepExpr::ConjStdU(n),
            RepExpr::StdU(n),
            RepExpr::Trivial,
        ]);
        let res = verify_decomposition(&lhs, &rhs, &mut sample, trials)?;
        checks.push(SuiteCheck::new(
            format!("unitary tensor restriction chain (n={n})"),
            res,
            1e-8,
        ));
    }

    for n in 1..=3usize {
        let mut s = Sampler::new(seed);
        let mut sample = || s.symplectic(n);
        let lhs = RepExpr::restrict(
            Embedding::BlockSymplectic,
            RepExpr::sym2(RepExpr::StdSp(n + 1)),
        );
        let rhs = RepExpr::sum_of(vec![
            RepExpr::sym2(RepExpr::StdSp(n)),
            RepExpr::StdSp(n),
            RepExpr::StdSp(n),
            RepExpr::Trivial,
            RepExpr::Trivial,
            RepExpr::Trivial,
        ]);
        let res = verify_decomposition(&lhs, &rhs, &mut sample, trials)?;
        checks.push(SuiteCheck::new(
            format!("symmetric-square restriction chain (n={n})"),
            res,
            1e-8,
        ));
    }

    {
        let mut s = Sampler::new(seed);
        let mut sample = || s.circle();
        let lhs = RepExpr::restrict(Embedding::CircleInSp1, RepExpr::StdSp(1));
        let rhs = RepExpr::sum(RepExpr::Weight(1), RepExpr::Weight(-1));
        let res = verify_decomposition(&lhs, &rhs, &mut sample, trials)?;
        checks.push(SuiteCheck::new("circle weights of the standard line", res, 1e-8));

        let lhs = RepExpr::restrict(Embedding::CircleInSp1, RepExpr::AdjointSp1);
        let rhs = RepExpr::sum_of(vec![
            RepExpr::Weight(2),
            RepExpr::Trivial,
            RepExpr::Weight(-2),
        ]);
        let res = verify_decomposition(&lhs, &rhs, &mut sample, trials)?;
        checks.push(SuiteCheck::new("circle weights of the adjoint", res, 1e-8));
    }

    for n in 1..=3usize {
        let mut s = Sampler::new(seed);
        let mut sample = || s.sp_u1(n);
        let lhs = crate::characters::isotropy_expr(Family::SpU1, n)?;
        let rhs = RepExpr::sum(
            RepExpr::external(
                RepExpr::StdSp(n),
                RepExpr::sum(RepExpr::Weight(-1), RepExpr::Weight(1)),
            ),
            RepExpr::external(
                RepExpr::Trivial,
                RepExpr::sum_of(vec![
                    RepExpr::Weight(2),
                    RepExpr::Trivial,
                    RepExpr::Weight(-2),
                ]),
            ),
        );
        let res = verify_decomposition(&lhs, &rhs, &mut sample, trials)?;
        checks.push(SuiteCheck::new(
            format!("quotient isotropy weight decomposition (n={n})"),
            res,
            1e-8,
        ));
    }

    // isotropy-trace comparison per classical row, at >= 50 samples
    let rows: Vec<(Family, Vec<usize>)> = vec![
        (Family::SO, (2..=8).collect()),
        (Family::U, (1..=5).collect()),
        (Family::SU, (1..=5).collect()),
        (Family::Sp, (1..=3).collect()),
        (Family::SpU1, (1..=3).collect()),
        (Family::SpSp1, (1..=3).collect()),
    ];
    for (family, ns) in rows {
        for n in ns {
            let spec = ActionSpec::new(family, n)?;
            let res = crate::characters::table_isotropy_check(&spec, trials.max(50), seed)?;
            checks.push(SuiteCheck::new(
                format!("isotropy trace vs claimed representation ({family}, n={n})"),
                res,
                1e-7,
            ));
        }
    }

    Ok(checks)
}

/// The exceptional-geometry checks: octonion identities, the Clifford module
/// over the imaginary octonions, the sixteen-dimensional picture, the
/// order-4 lift, and the metaunitary cover.
pub fn appendix_suite(seed: u64) -> Result<Vec<SuiteCheck>> {
    use crate::exceptional as exc;
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_octonion = |rng: &mut ChaCha8Rng| {
        let mut coeffs = [0.0; 8];
        for c in &mut coeffs {
            *c = rng.random::<f64>() * 2.0 - 1.0;
        }
        Octonion::new(coeffs)
    };

    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let x = random_octonion(&mut rng);
        let y = random_octonion(&mut rng);
        worst = worst.max(((x * y).norm() - x.norm() * y.norm()).abs());
    }
    checks.push(SuiteCheck::new("octonion norm multiplicativity (10^4 samples)", worst, 1e-10));

    checks.push(SuiteCheck::exact_count(
        "imaginary commutator span",
        exc::so7_orbit_span_dim(),
        7,
    ));
    checks.push(SuiteCheck::new(
        "Clifford module relations (28 pairs)",
        exc::spin7_clifford_check(),
        1e-12,
    ));

    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let u = random_octonion(&mut rng);
        let v = random_octonion(&mut rng);
        let r = rng.random::<f64>() - 0.5;
        let rp = rng.random::<f64>() - 0.5;
        worst = worst.max(exc::spin9_commutator_identity(&u, &v, r, rp));
    }
    checks.push(SuiteCheck::new("rank-9 commutator identity", worst, 1e-10));

    checks.push(SuiteCheck::exact_count(
        "sixteen-dimensional tangent rank",
        exc::spin9_tangent_dim(),
        15,
    ));
    let report = exc::spin9_isotropy_checks();
    checks.push(SuiteCheck::exact_count(
        "isotropy span rank",
        report.span_dim,
        21,
    ));
    checks.push(SuiteCheck::new(
        "isotropy annihilates the base point",
        report.annihilation_residual,
        1e-10,
    ));
    checks.push(SuiteCheck::new(
        "isotropy action is skew",
        report.phi_skew_residual,
        1e-10,
    ));
    checks.push(SuiteCheck::exact_count(
        "isotropy action rank (faithfulness)",
        report.phi_rank,
        21,
    ));
    checks.push(SuiteCheck::new(
        "isotropy rotation table",
        report.rotation_table_residual,
        1e-10,
    ));

    // automorphism extension: 20 samples x 100 pairs
    let mut worst: f64 = 0.0;
    {
        let mut sampler = Sampler::new(seed);
        for _ in 0..20 {
            let phi = match sampler.automorphism() {
                crate::characters::GroupElement::Automorphism(m) => m,
                _ => unreachable!(),
            };
            let pairs: Vec<_> = (0..100)
                .map(|_| (random_octonion(&mut rng), random_octonion(&mut rng)))
                .collect();
            worst = worst.max(exc::automorphism_residual(&phi, &pairs));
        }
    }
    checks.push(SuiteCheck::new(
        "unitary extension multiplicativity (20 x 100)",
        worst,
        1e-8,
    ));

    for n in 2..=7usize {
        let order = exc::z4_lift_order(n)?;
        checks.push(SuiteCheck::exact_count(
            format!("order-4 lift of the double half-turn (n={n})"),
            order,
            4,
        ));
    }

    let worst = exc::metaunitary_check(2, 100, seed)?;
    checks.push(SuiteCheck::new("metaunitary double cover", worst, 1e-9));

    Ok(checks)
}

/// Core algebra invariants: alternativity, Clifford associativity, the
/// homomorphism property of the double cover, and transfer round trips.
pub fn algebra_suite(seed: u64) -> Result<Vec<SuiteCheck>> {
    use crate::clifford::{bivector_exp, bivector_from_so, lambda_map, Multivector};
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut worst: f64 = 0.0;
    for _ in 0..1_000 {
        let mut coeffs = [0.0; 8];
        for c in &mut coeffs {
            *c = rng.random::<f64>() * 2.0 - 1.0;
        }
        let x = Octonion::new(coeffs);
        for c in &mut coeffs {
            *c = rng.random::<f64>() * 2.0 - 1.0;
        }
        let y = Octonion::new(coeffs);
        worst = worst.max((x * (x * y) - (x * x) * y).norm());
        worst = worst.max(((y * x) * x - y * (x * x)).norm());
    }
    checks.push(SuiteCheck::new("octonion alternativity", worst, 1e-10));

    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let dim = 3 + (rng.random::<u32>() % 7) as usize;
        let mv = |rng: &mut ChaCha8Rng| {
            let raw: Vec<(u16, f64)> = (0..6)
                .map(|_| {
                    (
                        rng.random::<u16>() & ((1u16 << dim) - 1),
                        rng.random::<f64>() - 0.5,
                    )
                })
                .collect();
            Multivector::from_terms(dim, raw).unwrap()
        };
        let (a, b, c) = (mv(&mut rng), mv(&mut rng), mv(&mut rng));
        let lhs = a.mul(&b)?.mul(&c)?;
        let rhs = a.mul(&b.mul(&c)?)?;
        worst = worst.max(lhs.sub(&rhs)?.norm());
    }
    checks.push(SuiteCheck::new("Clifford associativity", worst, 1e-12));

    let mut worst: f64 = 0.0;
    let mut roundtrip: f64 = 0.0;
    for dim in 3..=9usize {
        for _ in 0..100 / 7 + 5 {
            let mut omega = nalgebra::DMatrix::zeros(dim, dim);
            for i in 0..dim {
                for j in 0..i {
                    let x = 0.3 * (rng.random::<f64>() - 0.5);
                    omega[(i, j)] = x;
                    omega[(j, i)] = -x;
                }
            }
            let s = bivector_exp(&bivector_from_so(&omega)?)?;
            roundtrip = roundtrip.max((lambda_map(&s)? - crate::linalg::exp_real(&omega)).norm());
            let mut omega2 = nalgebra::DMatrix::zeros(dim, dim);
            for i in 0..dim {
                for j in 0..i {
                    let x = 0.3 * (rng.random::<f64>() - 0.5);
                    omega2[(i, j)] = x;
                    omega2[(j, i)] = -x;
                }
            }
            let t = bivector_exp(&bivector_from_so(&omega2)?)?;
            let lhs = lambda_map(&s.mul(&t)?)?;
            let rhs = lambda_map(&s)? * lambda_map(&t)?;
            worst = worst.max((lhs - rhs).norm());
        }
    }
    checks.push(SuiteCheck::new("double cover homomorphism", worst, 1e-9));
    checks.push(SuiteCheck::new("generator transfer round trip", roundtrip, 1e-9));

    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_at_default_seed() {
        for checks in [
            character_suite(crate::DEFAULT_SEED, 100).unwrap(),
            appendix_suite(crate::DEFAULT_SEED).unwrap(),
            algebra_suite(crate::DEFAULT_SEED).unwrap(),
        ] {
            assert!(!checks.is_empty());
            for c in &checks {
                assert!(c.passed(), "{}: residual {} > {}", c.name, c.residual, c.tolerance);
            }
        }
    }

    #[test]
    fn suites_pass_at_other_seeds() {
        for seed in [7u64, 42] {
            for c in character_suite(seed, 40).unwrap() {
                assert!(c.passed(), "{} at seed {seed}", c.name);
            }
        }
    }
}
