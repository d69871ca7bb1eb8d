//! Acceptance suite: the exit criteria for the whole artifact, one test per
//! criterion, each printing a pass line once its assertions hold.
//!
//! Criteria:
//!  1. full table reproduction, exact categorical match;
//!  2. quotient-family parity law `(n+1) mod 2`, both routes plus the oracle;
//!  3. double-cover calibration against plane rotations;
//!  4. method agreement on every record;
//!  5. the character identity suite at 1e-8 over seeded samples;
//!  6. isotropy traces vs claimed representations at 1e-7;
//!  7. the exceptional-geometry suite (octonion and rank-9/16 checks);
//!  8. the order-4 lift with exact integer arithmetic;
//!  9. parity robustness under re-sampling and global conjugation.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use spinact::actions::{
    isotropy_path_differential, stabilizer_loop, ActionSpec, Family, RotationPath,
};
use spinact::clifford::{bivector_exp, lambda_map, Multivector};
use spinact::lifting::{classify, expected_verdict, loop_parity, winding_parity_oracle, Verdict};
use spinact::linalg::random_special_orthogonal;
use spinact::{DEFAULT_SEED, DEFAULT_STEPS};

fn default_rows() -> Vec<(Family, usize)> {
    let mut rows = Vec::new();
    for family in Family::ALL {
        let (min, max) = family.supported_range();
        for n in min..=max {
            rows.push((family, n));
        }
    }
    rows
}

#[test]
fn criterion_1_table_reproduction() {
    let records: Vec<_> = default_rows()
        .par_iter()
        .map(|(family, n)| {
            let spec = ActionSpec::new(*family, *n).expect("row in range");
            classify(&spec, DEFAULT_STEPS).expect("classification runs")
        })
        .collect();
    assert_eq!(records.len(), 29);
    for r in &records {
        let expected = match r.family {
            Family::SO | Family::U => Verdict::No,
            Family::SU | Family::Sp | Family::G2 | Family::Spin7 | Family::Spin9 => Verdict::Yes,
            Family::SpU1 | Family::SpSp1 => {
                if r.n % 2 == 1 {
                    Verdict::Yes
                } else {
                    Verdict::No
                }
            }
        };
        assert_eq!(
            r.verdict, expected,
            "verdict mismatch for {} n={}",
            r.family, r.n
        );
        assert!(r.matches);
    }
    println!("criterion 1 (table reproduction, 29 rows): PASS");
}

#[test]
fn criterion_2_quotient_parity_law() {
    for family in [Family::SpU1, Family::SpSp1] {
        for n in 1..=3usize {
            let spec = ActionSpec::new(family, n).unwrap();
            let record = classify(&spec, DEFAULT_STEPS).unwrap();
            let want = ((n + 1) % 2) as u8;
            assert_eq!(record.parity.differential, want, "{family} n={n}");
            assert_eq!(record.parity.adjoint, want, "{family} n={n}");
            assert_eq!(record.parity.oracle, want, "{family} n={n}");
        }
    }
    println!("criterion 2 (quotient parity law): PASS");
}

#[test]
fn criterion_3_double_cover_calibration() {
    let mut worst: f64 = 0.0;
    for dim in [3usize, 7, 11] {
        for k in 0..=64 {
            let theta = k as f64 * std::f64::consts::PI / 32.0;
            let beta = Multivector::from_terms(dim, vec![(0b11, theta / 2.0)]).unwrap();
            let rotor = bivector_exp(&beta).unwrap();
            let image = lambda_map(&rotor).unwrap();
            let mut expected = DMatrix::identity(dim, dim);
            expected[(0, 0)] = theta.cos();
            expected[(0, 1)] = -theta.sin();
            expected[(1, 0)] = theta.sin();
            expected[(1, 1)] = theta.cos();
            worst = worst.max((image - expected).norm());
        }
    }
    assert!(worst < 1e-9, "calibration residual {worst}");
    println!("criterion 3 (double-cover calibration, residual {worst:.2e}): PASS");
}

#[test]
fn criterion_4_method_agreement() {
    // classify() hard-fails on disagreement; assert the triple explicitly too
    let records: Vec<_> = default_rows()
        .par_iter()
        .map(|(family, n)| {
            let spec = ActionSpec::new(*family, *n).unwrap();
            classify(&spec, DEFAULT_STEPS).unwrap()
        })
        .collect();
    for r in &records {
        assert_eq!(r.parity.differential, r.parity.adjoint, "{} n={}", r.family, r.n);
        assert_eq!(r.parity.differential, r.parity.oracle, "{} n={}", r.family, r.n);
    }
    println!("criterion 4 (method agreement on {} records): PASS", records.len());
}

#[test]
fn criterion_5_character_suite() {
    let checks = spinact::suites::character_suite(DEFAULT_SEED, 100).unwrap();
    for c in &checks {
        assert!(
            c.passed(),
            "character check '{}' failed: residual {} > {}",
            c.name,
            c.residual,
            c.tolerance
        );
    }
    println!("criterion 5 (character suite, {} checks): PASS", checks.len());
}

#[test]
fn criterion_6_isotropy_representation_column() {
    let rows: Vec<(Family, Vec<usize>)> = vec![
        (Family::SO, (2..=8).collect()),
        (Family::U, (1..=5).collect()),
        (Family::SU, (1..=5).collect()),
        (Family::Sp, (1..=3).collect()),
        (Family::SpU1, (1..=3).collect()),
        (Family::SpSp1, (1..=3).collect()),
    ];
    let mut count = 0;
    for (family, ns) in rows {
        for n in ns {
            let spec = ActionSpec::new(family, n).unwrap();
            let residual = spinact::characters::table_isotropy_check(&spec, 50, DEFAULT_SEED)
                .unwrap();
            assert!(residual < 1e-7, "{family} n={n}: residual {residual}");
            count += 1;
        }
    }
    println!("criterion 6 (isotropy column on {count} classical rows): PASS");
}

#[test]
fn criterion_7_exceptional_suite() {
    let checks = spinact::suites::appendix_suite(DEFAULT_SEED).unwrap();
    for c in &checks {
        assert!(
            c.passed(),
            "exceptional check '{}' failed: residual {} > {}",
            c.name,
            c.residual,
            c.tolerance
        );
    }
    println!("criterion 7 (exceptional suite, {} checks): PASS", checks.len());
}

#[test]
fn criterion_8_order_four_lift() {
    for n in 2..=7usize {
        // exactness of f² = -1 and the covered rotation is checked inside
        assert_eq!(spinact::exceptional::z4_lift_order(n).unwrap(), 4, "n = {n}");
    }
    println!("criterion 8 (order-4 lift for n = 2..7): PASS");
}

fn differential_path(family: Family, n: usize, steps: usize) -> Option<RotationPath> {
    let spec = ActionSpec::new(family, n).unwrap();
    let lp = stabilizer_loop(&spec, steps).unwrap();
    if lp.trivial_pi1 {
        return None;
    }
    Some(isotropy_path_differential(&spec, &lp).unwrap())
}

#[test]
fn criterion_9_parity_robustness() {
    // re-sampling invariance at K = 128 and 512
    for (family, n) in default_rows() {
        let Some(base) = differential_path(family, n, DEFAULT_STEPS) else {
            continue;
        };
        let reference = loop_parity(&base).unwrap();
        for steps in [128usize, 512] {
            let path = differential_path(family, n, steps).unwrap();
            assert_eq!(
                loop_parity(&path).unwrap(),
                reference,
                "re-sampling changed parity for {family} n={n} at K={steps}"
            );
        }
    }
    println!("criterion 9a (re-sampling invariance): PASS");

    // invariance under 20 random global conjugations of each path
    let rows = default_rows();
    rows.par_iter().for_each(|(family, n)| {
        let Some(base) = differential_path(*family, *n, DEFAULT_STEPS) else {
            // constant paths stay constant under conjugation
            return;
        };
        let reference = loop_parity(&base).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ (*n as u64) ^ ((base.dim as u64) << 8));
        for trial in 0..20 {
            let q = random_special_orthogonal(base.dim, &mut rng);
            let conjugated = base.conjugated(&q);
            let lifted = loop_parity(&conjugated).unwrap();
            assert_eq!(
                lifted, reference,
                "conjugation {trial} changed lift parity for {family} n={n}"
            );
            let wound = winding_parity_oracle(&conjugated).unwrap();
            assert_eq!(
                wound, reference,
                "conjugation {trial} changed winding parity for {family} n={n}"
            );
        }
    });
    println!("criterion 9b (conjugation invariance, 20 frames per path): PASS");
}

#[test]
fn expected_verdicts_follow_the_stated_law() {
    // the expected column itself: simply connected, or quotient at odd n
    for (family, n) in default_rows() {
        let want = match family {
            Family::SO | Family::U => Verdict::No,
            Family::SpU1 | Family::SpSp1 if n % 2 == 0 => Verdict::No,
            _ => Verdict::Yes,
        };
        assert_eq!(expected_verdict(family, n), want);
    }
}
