//! Lifting rotation paths through `Spin(m) -> SO(m)` and reading off the
//! `Z/2` class of a loop from the endpoint sign, plus the classification
//! driver that runs both isotropy routes and the winding oracle.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::actions::{
    isotropy_path_differential, stabilizer_loop, ActionSpec, Family, RotationPath,
};
use crate::adjoint::{adjoint_isotropy_path, lie_basis};
use crate::clifford::{lambda_map, rotor_factors_from_generator, SpinElement, MAX_DIM};
use crate::error::{Error, Result};
use crate::linalg::dist_from_identity;

/// Maximum tolerated drift of the lifted path under the double cover.
pub const TRACKING_TOL: f64 = 1e-6;

/// Endpoint classification threshold: the lift must land within this distance
/// of `+1` or `-1`. Anything in between is a genuine failure, not rounding.
pub const ENDPOINT_TOL: f64 = 0.1;

/// A step-by-step lift of a rotation path into the spin group.
#[derive(Debug, Clone)]
pub struct SpinPath {
    pub samples: Vec<SpinElement>,
    pub source: RotationPath,
    /// Largest observed `‖λ(s_k) − A_k‖` over the checked samples.
    pub max_residual: f64,
}

/// Lift a rotation path through the double cover, starting at `1`.
///
/// Each step lifts the relative increment `A_{k+1} A_k^T` (which stays near
/// the identity regardless of where the path has wandered) to a rotor and
/// left-multiplies it onto the running lift.
///
/// Tracking is verified against the source path; for compact lifts every
/// sample is checked, for large ones (dense rotors in high dimension) the
/// check is thinned out but always includes the endpoint.
pub fn lift_path(path: &RotationPath) -> Result<SpinPath> {
    if path.dim > MAX_DIM {
        return Err(Error::DimensionCeiling(path.dim));
    }
    path.validate()?;
    let mut samples = Vec::with_capacity(path.samples.len());
    let mut current = SpinElement::identity(path.dim)?;
    samples.push(current.clone());
    let mut max_residual: f64 = 0.0;
    let last = path.samples.len() - 1;
    for k in 1..=last {
        let increment = &path.samples[k] * path.samples[k - 1].transpose();
        let step = dist_from_identity(&increment);
        if step >= 0.5 {
            return Err(Error::StepTooLarge {
                index: k,
                size: step,
            });
        }
        // multiply the commuting plane factors in one at a time; the
        // accumulated lift can be dense, the factors never are
        let omega = crate::linalg::so_log_small(&increment)?;
        for factor in rotor_factors_from_generator(&omega)? {
            current = factor.mul(&current)?;
        }
        let compact = current.mv().term_count() <= 512;
        if compact || k % 32 == 0 || k == last {
            let image = lambda_map(&current)?;
            let residual = (image - &path.samples[k]).norm();
            max_residual = max_residual.max(residual);
            if residual > TRACKING_TOL {
                return Err(Error::TrackingFailure(residual));
            }
        }
        samples.push(current.clone());
    }
    Ok(SpinPath {
        samples,
        source: path.clone(),
        max_residual,
    })
}

/// The `Z/2` class of a loop of rotations: `0` when the lift closes at `+1`,
/// `1` when it ends at `-1`.
pub fn loop_parity(path: &RotationPath) -> Result<u8> {
    if !path.is_loop(1e-7) {
        return Err(Error::Invalid(
            "parity is only defined for closed paths".into(),
        ));
    }
    let lifted = lift_path(path)?;
    let endpoint = lifted.samples.last().expect("non-empty").mv();
    let to_plus = endpoint.distance_to_scalar(1.0);
    let to_minus = endpoint.distance_to_scalar(-1.0);
    if to_plus < ENDPOINT_TOL {
        Ok(0)
    } else if to_minus < ENDPOINT_TOL {
        Ok(1)
    } else {
        Err(Error::EndpointAmbiguous(to_plus.min(to_minus)))
    }
}

/// Lift-free parity oracle: total eigenphase winding of the loop, mod 2.
///
/// Eigenvalue arguments are folded into `[0, π]`, tracked by sorted position,
/// and unfolded per index against the previous sample; reflections at the
/// fold points are what make a half-turn count. The grand total of the
/// unfolded increments is `4π ×` the winding number, whose parity is
/// returned. Matching requires every phase to move by less than `π/4` per
/// step; anything else reports an ambiguity.
pub fn winding_parity_oracle(path: &RotationPath) -> Result<u8> {
    if !path.is_loop(1e-7) {
        return Err(Error::Invalid(
            "parity is only defined for closed paths".into(),
        ));
    }
    // |arg| of the eigenvalues of a rotation, read from its symmetric part:
    // eigenvalues of (A + Aᵀ)/2 are exactly cos(phase), with the right
    // multiplicities, and the symmetric eigensolver is robust on the
    // maximally degenerate spectra block loops produce
    let folded_phases = |m: &DMatrix<f64>| -> Vec<f64> {
        let sym = (m + m.transpose()) * 0.5;
        let mut phases: Vec<f64> = sym
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .map(|c| c.clamp(-1.0, 1.0).acos())
            .collect();
        phases.sort_by(|a, b| a.partial_cmp(b).expect("finite phases"));
        phases
    };
    let mut unfolded = folded_phases(&path.samples[0]);
    let start_sum: f64 = unfolded.iter().sum();
    let mut velocity = vec![0.0f64; unfolded.len()];
    for (k, sample) in path.samples.iter().enumerate().skip(1) {
        let reps = folded_phases(sample);
        for ((psi, rep), vel) in unfolded.iter_mut().zip(reps.iter()).zip(velocity.iter_mut()) {
            // nearest preimage of the folded representative, biased toward
            // continuing the current direction of motion; the bias is what
            // carries a phase straight through the fold points 0 and π
            // when a sample lands exactly on them
            let tau = std::f64::consts::TAU;
            let target = *psi + *vel;
            let base = ((target - rep) / tau).round();
            let c1 = base * tau + rep;
            let base2 = ((target + rep) / tau).round();
            let c2 = base2 * tau - rep;
            let next = if (c1 - target).abs() <= (c2 - target).abs() {
                c1
            } else {
                c2
            };
            if (next - *psi).abs() >= std::f64::consts::FRAC_PI_4 {
                return Err(Error::PhaseAmbiguity(k));
            }
            *vel = next - *psi;
            *psi = next;
        }
    }
    let total = unfolded.iter().sum::<f64>() - start_sum;
    let winding = total / (2.0 * std::f64::consts::TAU);
    let rounded = winding.round();
    if (winding - rounded).abs() > 0.05 {
        return Err(Error::WindingNotIntegral(winding));
    }
    Ok((rounded.abs() as u64 % 2) as u8)
}

/// Outcome of a classification: is the sphere's spin structure invariant
/// under the action?
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Yes,
    No,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "Yes",
            Verdict::No => "No",
        })
    }
}

/// The known answer: invariant iff the group is simply connected, or the
/// quotient families at odd `n`.
pub fn expected_verdict(family: Family, n: usize) -> Verdict {
    match family {
        Family::SO | Family::U => Verdict::No,
        Family::SU | Family::Sp | Family::G2 | Family::Spin7 | Family::Spin9 => Verdict::Yes,
        Family::SpU1 | Family::SpSp1 => {
            if n % 2 == 1 {
                Verdict::Yes
            } else {
                Verdict::No
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityTriple {
    pub differential: u8,
    pub adjoint: u8,
    pub oracle: u8,
}

/// Per-(family, n) classification outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub family: Family,
    pub n: usize,
    pub sphere_dim: usize,
    pub stabilizer: String,
    pub parity: ParityTriple,
    pub verdict: Verdict,
    pub expected: Verdict,
    #[serde(rename = "match")]
    pub matches: bool,
}

/// Classify one action: run the differential route, the adjoint route and
/// the winding oracle, demand agreement, and compare with the known answer.
pub fn classify(spec: &ActionSpec, steps: usize) -> Result<ClassificationRecord> {
    let parity = if spec.family.simply_connected() {
        // contractible stabilizer loop: everything lifts
        ParityTriple {
            differential: 0,
            adjoint: 0,
            oracle: 0,
        }
    } else {
        let group_loop = stabilizer_loop(spec, steps)?;
        let differential_path = isotropy_path_differential(spec, &group_loop)?;
        let p_differential = loop_parity(&differential_path)?;
        let basis = lie_basis(spec)?;
        let adjoint_path = adjoint_isotropy_path(spec, &group_loop, &basis)?;
        let p_adjoint = loop_parity(&adjoint_path)?;
        let p_oracle = winding_parity_oracle(&differential_path)?;
        if p_differential != p_adjoint || p_differential != p_oracle {
            return Err(Error::MethodDisagreement {
                differential: p_differential,
                adjoint: p_adjoint,
                oracle: p_oracle,
            });
        }
        ParityTriple {
            differential: p_differential,
            adjoint: p_adjoint,
            oracle: p_oracle,
        }
    };
    let verdict = if parity.differential == 0 {
        Verdict::Yes
    } else {
        Verdict::No
    };
    let expected = expected_verdict(spec.family, spec.n);
    Ok(ClassificationRecord {
        family: spec.family,
        n: spec.n,
        sphere_dim: spec.sphere_dim,
        stabilizer: spec.family.stabilizer_label(spec.n),
        parity,
        verdict,
        expected,
        matches: verdict == expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::rotation_2pi;
    use crate::linalg::random_special_orthogonal;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn block_loop(dim: usize, steps: usize, turns: f64) -> RotationPath {
        let samples = (0..=steps)
            .map(|k| {
                let t = turns * k as f64 / steps as f64;
                let mut m = DMatrix::identity(dim, dim);
                m.view_mut((dim - 2, dim - 2), (2, 2))
                    .copy_from(&rotation_2pi(t));
                m
            })
            .collect();
        RotationPath::new(samples).unwrap()
    }

    #[test]
    fn constant_path_lifts_to_constant_one() {
        let path =
            RotationPath::new(vec![DMatrix::identity(3, 3); 65]).unwrap();
        let lifted = lift_path(&path).unwrap();
        for s in &lifted.samples {
            assert!(s.mv().distance_to_scalar(1.0) < 1e-12);
        }
        assert_eq!(loop_parity(&path).unwrap(), 0);
        assert_eq!(winding_parity_oracle(&path).unwrap(), 0);
    }

    #[test]
    fn full_turn_lifts_to_minus_one() {
        let path = block_loop(3, 128, 1.0);
        let lifted = lift_path(&path).unwrap();
        let endpoint = lifted.samples.last().unwrap().mv();
        assert!(endpoint.distance_to_scalar(-1.0) < 1e-9);
        assert_eq!(loop_parity(&path).unwrap(), 1);
        assert!(lifted.max_residual < 1e-9);
    }

    #[test]
    fn double_turn_lifts_back_to_plus_one() {
        let path = block_loop(3, 256, 2.0);
        let lifted = lift_path(&path).unwrap();
        assert!(lifted.samples.last().unwrap().mv().distance_to_scalar(1.0) < 1e-9);
        assert_eq!(loop_parity(&path).unwrap(), 0);
        assert_eq!(winding_parity_oracle(&path).unwrap(), 0);
    }

    #[test]
    fn oracle_counts_blocks() {
        // one block winding once
        assert_eq!(winding_parity_oracle(&block_loop(5, 128, 1.0)).unwrap(), 1);
        // several commuting blocks winding together
        for blocks in 1..=3usize {
            let dim = 2 * blocks + 1;
            let steps = 128;
            let samples = (0..=steps)
                .map(|k| {
                    let t = k as f64 / steps as f64;
                    let mut m = DMatrix::identity(dim, dim);
                    for b in 0..blocks {
                        m.view_mut((2 * b + 1, 2 * b + 1), (2, 2))
                            .copy_from(&rotation_2pi(t));
                    }
                    m
                })
                .collect();
            let path = RotationPath::new(samples).unwrap();
            assert_eq!(
                winding_parity_oracle(&path).unwrap(),
                (blocks % 2) as u8,
                "blocks = {blocks}"
            );
            assert_eq!(loop_parity(&path).unwrap(), (blocks % 2) as u8);
        }
    }

    #[test]
    fn step_too_large_is_reported() {
        let path = block_loop(3, 128, 1.0);
        let coarse = RotationPath {
            dim: 3,
            samples: path.samples.iter().step_by(32).cloned().collect(),
        };
        assert!(matches!(
            lift_path(&coarse),
            Err(Error::StepTooLarge { .. })
        ));
    }

    #[test]
    fn open_path_has_no_parity() {
        let mut samples = block_loop(3, 128, 1.0).samples;
        samples.truncate(100);
        let path = RotationPath { dim: 3, samples };
        assert!(loop_parity(&path).is_err());
    }

    #[test]
    fn so_family_parities() {
        for n in 3..=7usize {
            let spec = ActionSpec::new(Family::SO, n).unwrap();
            let lp = stabilizer_loop(&spec, 128).unwrap();
            let path = isotropy_path_differential(&spec, &lp).unwrap();
            assert_eq!(loop_parity(&path).unwrap(), 1, "n = {n}");
        }
    }

    #[test]
    fn quotient_family_parity_law() {
        // parity = (n+1) mod 2
        for n in [1usize, 2] {
            let spec = ActionSpec::new(Family::SpU1, n).unwrap();
            let lp = stabilizer_loop(&spec, 128).unwrap();
            let path = isotropy_path_differential(&spec, &lp).unwrap();
            assert_eq!(loop_parity(&path).unwrap(), ((n + 1) % 2) as u8, "n = {n}");
        }
    }

    #[test]
    fn classify_matches_known_answers() {
        for (family, n, expected) in [
            (Family::SO, 4, Verdict::No),
            (Family::SU, 3, Verdict::Yes),
            (Family::SpSp1, 1, Verdict::Yes),
        ] {
            let spec = ActionSpec::new(family, n).unwrap();
            let rec = classify(&spec, 128).unwrap();
            assert_eq!(rec.verdict, expected);
            assert!(rec.matches);
            assert_eq!(
                rec.parity.differential, rec.parity.adjoint,
                "methods must agree"
            );
            assert_eq!(rec.parity.differential, rec.parity.oracle);
        }
    }

    #[test]
    fn parity_is_resampling_invariant() {
        let spec = ActionSpec::new(Family::U, 2).unwrap();
        let mut parities = Vec::new();
        for steps in [128usize, 512] {
            let lp = stabilizer_loop(&spec, steps).unwrap();
            let path = isotropy_path_differential(&spec, &lp).unwrap();
            parities.push(loop_parity(&path).unwrap());
        }
        assert_eq!(parities[0], parities[1]);
    }

    #[test]
    fn parity_is_conjugation_invariant_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
        let spec = ActionSpec::new(Family::SpU1, 1).unwrap();
        let lp = stabilizer_loop(&spec, 128).unwrap();
        let path = isotropy_path_differential(&spec, &lp).unwrap();
        let base = loop_parity(&path).unwrap();
        for _ in 0..5 {
            let q = random_special_orthogonal(path.dim, &mut rng);
            let conj = path.conjugated(&q);
            assert_eq!(loop_parity(&conj).unwrap(), base);
            assert_eq!(winding_parity_oracle(&conj).unwrap(), base);
        }
    }
}
