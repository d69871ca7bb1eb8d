//! The nine transitive sphere actions: ambient realizations, stabilizer loop
//! generators, and the differential-route isotropy path.
//!
//! Every action here is linear on the ambient Euclidean space, so the
//! differential of the action at the base point is the ambient matrix itself,
//! restricted to the tangent hyperplane. The base point is always
//! `o = (1, 0, ..., 0)` and the tangent basis the remaining coordinate axes.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dist_from_identity, so_residual, CMatrix};
use crate::octonion::{iota_embed, Quaternion};
use crate::realize::{realize_complex, realize_quaternionic, realize_right_mult, QMatrix};

/// Tolerance for "fixes the base point" and friends.
pub const STABILIZER_TOL: f64 = 1e-10;

/// The nine families of transitive, effective actions on spheres.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "so")]
    SO,
    #[serde(rename = "u")]
    U,
    #[serde(rename = "su")]
    SU,
    #[serde(rename = "sp")]
    Sp,
    #[serde(rename = "sp-u1")]
    SpU1,
    #[serde(rename = "sp-sp1")]
    SpSp1,
    #[serde(rename = "g2")]
    G2,
    #[serde(rename = "spin7")]
    Spin7,
    #[serde(rename = "spin9")]
    Spin9,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::SO,
        Family::U,
        Family::SU,
        Family::Sp,
        Family::SpU1,
        Family::SpSp1,
        Family::G2,
        Family::Spin7,
        Family::Spin9,
    ];

    pub fn parse(s: &str) -> Result<Family> {
        match s.to_ascii_lowercase().as_str() {
            "so" => Ok(Family::SO),
            "u" => Ok(Family::U),
            "su" => Ok(Family::SU),
            "sp" => Ok(Family::Sp),
            "sp-u1" | "spu1" | "sp.u1" => Ok(Family::SpU1),
            "sp-sp1" | "spsp1" | "sp.sp1" => Ok(Family::SpSp1),
            "g2" => Ok(Family::G2),
            "spin7" => Ok(Family::Spin7),
            "spin9" => Ok(Family::Spin9),
            other => Err(Error::UnsupportedFamily(other.to_string())),
        }
    }

    pub fn token(&self) -> &'static str {
        match self {
            Family::SO => "so",
            Family::U => "u",
            Family::SU => "su",
            Family::Sp => "sp",
            Family::SpU1 => "sp-u1",
            Family::SpSp1 => "sp-sp1",
            Family::G2 => "g2",
            Family::Spin7 => "spin7",
            Family::Spin9 => "spin9",
        }
    }

    /// Whether the acting group is simply connected (the stabilizer loop is
    /// then contractible and the lift exists for free).
    pub fn simply_connected(&self) -> bool {
        matches!(
            self,
            Family::SU | Family::Sp | Family::G2 | Family::Spin7 | Family::Spin9
        )
    }

    /// Whether the family takes a meaningful `n` parameter.
    pub fn parameterized(&self) -> bool {
        !matches!(self, Family::G2 | Family::Spin7 | Family::Spin9)
    }

    /// Supported parameter range at desk scale (spheres up to `S^15`).
    pub fn supported_range(&self) -> (usize, usize) {
        match self {
            Family::SO => (2, 8),
            Family::U | Family::SU => (1, 5),
            Family::Sp | Family::SpU1 | Family::SpSp1 => (1, 3),
            Family::G2 | Family::Spin7 | Family::Spin9 => (0, 0),
        }
    }

    pub fn sphere_dim(&self, n: usize) -> usize {
        match self {
            Family::SO => n,
            Family::U | Family::SU => 2 * n + 1,
            Family::Sp | Family::SpU1 | Family::SpSp1 => 4 * n + 3,
            Family::G2 => 6,
            Family::Spin7 => 7,
            Family::Spin9 => 15,
        }
    }

    pub fn group_label(&self, n: usize) -> String {
        match self {
            Family::SO => format!("SO({})", n + 1),
            Family::U => format!("U({})", n + 1),
            Family::SU => format!("SU({})", n + 1),
            Family::Sp => format!("Sp({})", n + 1),
            Family::SpU1 => format!("Sp({})U(1)", n + 1),
            Family::SpSp1 => format!("Sp({})Sp(1)", n + 1),
            Family::G2 => "G2".to_string(),
            Family::Spin7 => "Spin(7)".to_string(),
            Family::Spin9 => "Spin(9)".to_string(),
        }
    }

    pub fn stabilizer_label(&self, n: usize) -> String {
        match self {
            Family::SO => format!("SO({n})"),
            Family::U => format!("U({n})"),
            Family::SU => format!("SU({n})"),
            Family::Sp => format!("Sp({n})"),
            Family::SpU1 => format!("Sp({n})U(1)"),
            Family::SpSp1 => format!("Sp({n})Sp(1)"),
            Family::G2 => "SU(3)".to_string(),
            Family::Spin7 => "G2".to_string(),
            Family::Spin9 => "Spin(7)".to_string(),
        }
    }

    /// Claimed isotropy representation, as printed in the summary table.
    pub fn isotropy_label(&self, n: usize) -> String {
        match self {
            Family::SO => format!("λ_{n}"),
            Family::U | Family::SU => format!("μ_{n}^R ⊕ 1"),
            Family::Sp => format!("ν_{n}^R ⊕ 1 ⊕ 1 ⊕ 1"),
            Family::SpU1 => format!("ν̃_{n}^R ⊕ Ad|U(1)"),
            Family::SpSp1 => format!("ν̃_{n}^R ⊕ Ad^Sp(1)"),
            Family::G2 => "μ_3^R".to_string(),
            Family::Spin7 => "ζ".to_string(),
            Family::Spin9 => "λ_7 ⊕ Δ_7".to_string(),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.token())
    }
}

/// One transitive sphere action, pinned to a parameter `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActionSpec {
    pub family: Family,
    pub n: usize,
    pub sphere_dim: usize,
    pub ambient_dim: usize,
}

impl ActionSpec {
    pub fn new(family: Family, n: usize) -> Result<ActionSpec> {
        let (min, max) = family.supported_range();
        if n < min || n > max {
            return Err(Error::ParameterOutOfRange {
                family: family.token().to_string(),
                n,
                min,
                max,
            });
        }
        let sphere_dim = family.sphere_dim(n);
        Ok(ActionSpec {
            family,
            n,
            sphere_dim,
            ambient_dim: sphere_dim + 1,
        })
    }

    /// Base point `o = (1, 0, ..., 0)` in ambient coordinates.
    pub fn base_point(&self) -> DVector<f64> {
        let mut o = DVector::zeros(self.ambient_dim);
        o[0] = 1.0;
        o
    }
}

/// The usual plane rotation by `2πt`.
pub fn rotation_2pi(t: f64) -> DMatrix<f64> {
    let a = std::f64::consts::TAU * t;
    DMatrix::from_row_slice(2, 2, &[a.cos(), -a.sin(), a.sin(), a.cos()])
}

/// A discretized loop of realized group elements, each fixing the base point.
#[derive(Debug, Clone)]
pub struct GroupLoop {
    pub spec: ActionSpec,
    pub samples: Vec<DMatrix<f64>>,
    /// Set when the stabilizer has trivial fundamental group and the loop is
    /// the constant identity.
    pub trivial_pi1: bool,
}

/// A discretized path of special orthogonal matrices.
#[derive(Debug, Clone)]
pub struct RotationPath {
    pub dim: usize,
    pub samples: Vec<DMatrix<f64>>,
}

impl RotationPath {
    pub fn new(samples: Vec<DMatrix<f64>>) -> Result<RotationPath> {
        if samples.is_empty() {
            return Err(Error::Invalid("empty rotation path".into()));
        }
        let dim = samples[0].nrows();
        let path = RotationPath { dim, samples };
        path.validate()?;
        Ok(path)
    }

    pub fn validate(&self) -> Result<()> {
        let first = &self.samples[0];
        if dist_from_identity(first) > 1e-9 {
            return Err(Error::Invalid("path must start at the identity".into()));
        }
        for (k, s) in self.samples.iter().enumerate() {
            if s.nrows() != self.dim || s.ncols() != self.dim {
                return Err(Error::DimensionMismatch {
                    left: s.nrows(),
                    right: self.dim,
                });
            }
            let res = so_residual(s);
            if res > 1e-9 {
                return Err(Error::NotSpecialOrthogonal(res));
            }
            if k > 0 {
                let step = dist_from_identity(&(s * self.samples[k - 1].transpose()));
                if step >= 0.5 {
                    return Err(Error::StepTooLarge {
                        index: k,
                        size: step,
                    });
                }
            }
        }
        Ok(())
    }

    /// Whether the path closes up as matrices.
    pub fn is_loop(&self, tol: f64) -> bool {
        let last = self.samples.last().expect("non-empty");
        (last - &self.samples[0]).norm() < tol
    }

    /// Conjugate every sample by a fixed special orthogonal matrix.
    pub fn conjugated(&self, q: &DMatrix<f64>) -> RotationPath {
        RotationPath {
            dim: self.dim,
            samples: self
                .samples
                .iter()
                .map(|s| q * s * q.transpose())
                .collect(),
        }
    }

    /// Keep every `stride`-th sample (plus the final one).
    pub fn subsampled(&self, stride: usize) -> RotationPath {
        let mut samples: Vec<DMatrix<f64>> = self
            .samples
            .iter()
            .step_by(stride.max(1))
            .cloned()
            .collect();
        let last = self.samples.last().expect("non-empty");
        if samples.last() != Some(last) {
            samples.push(last.clone());
        }
        RotationPath {
            dim: self.dim,
            samples,
        }
    }
}

/// Realized ambient matrix of the quotient-family loop element at time `t`:
/// coordinate-wise conjugation `v_i ↦ w v_i w^{-1}` with `w = ι(e^{iπt})`.
fn quotient_loop_sample(coords: usize, t: f64) -> Result<DMatrix<f64>> {
    let theta = std::f64::consts::PI * t;
    let w = iota_embed(theta.cos(), theta.sin())?;
    let left = realize_quaternionic(&QMatrix::scalar(coords, w)).entries;
    let right = realize_right_mult(&w.inverse(), coords);
    Ok(left * right)
}

/// Generating loop of the stabilizer's fundamental group, realized on the
/// ambient space.
///
/// For the simply connected families the constant identity loop is returned,
/// flagged with `trivial_pi1`, so classification can treat all nine rows
/// uniformly.
pub fn stabilizer_loop(spec: &ActionSpec, steps: usize) -> Result<GroupLoop> {
    if steps < 64 {
        return Err(Error::Invalid(format!(
            "need at least 64 loop samples, got {steps}"
        )));
    }
    let d = spec.ambient_dim;
    if spec.family.simply_connected() {
        return Ok(GroupLoop {
            spec: *spec,
            samples: vec![DMatrix::identity(d, d); steps + 1],
            trivial_pi1: true,
        });
    }
    let mut samples = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let t = k as f64 / steps as f64;
        let sample = match spec.family {
            // block rotation in the last two coordinates of the stabilizer
            Family::SO => {
                let mut m = DMatrix::identity(d, d);
                m.view_mut((d - 2, d - 2), (2, 2)).copy_from(&rotation_2pi(t));
                m
            }
            // complex diag(1, ..., 1, e^{2πit}), realized
            Family::U => {
                let m = spec.n + 1;
                let mut c = CMatrix::identity(m, m);
                c[(m - 1, m - 1)] = Complex::from_polar(1.0, std::f64::consts::TAU * t);
                realize_complex(&c).entries
            }
            Family::SpU1 | Family::SpSp1 => quotient_loop_sample(spec.n + 1, t)?,
            _ => unreachable!("simply connected families returned above"),
        };
        samples.push(sample);
    }
    let loop_ = GroupLoop {
        spec: *spec,
        samples,
        trivial_pi1: false,
    };
    for (k, s) in loop_.samples.iter().enumerate() {
        let moved = (s * spec.base_point() - spec.base_point()).norm();
        if moved > STABILIZER_TOL {
            return Err(Error::BasePointMoved(moved));
        }
        if k > 0 {
            let step = dist_from_identity(&(s * loop_.samples[k - 1].transpose()));
            if step >= 0.5 {
                return Err(Error::StepTooLarge {
                    index: k,
                    size: step,
                });
            }
        }
    }
    Ok(loop_)
}

/// The differential-route isotropy path: each ambient sample restricted to
/// the tangent hyperplane `o^⊥`, in the coordinate tangent basis.
///
/// The actions are restrictions of linear maps, so the differential is the
/// matrix itself; fixing `o = e_1` makes the restriction literally the lower
/// `(d-1) x (d-1)` block.
pub fn isotropy_path_differential(spec: &ActionSpec, group_loop: &GroupLoop) -> Result<RotationPath> {
    if group_loop.spec != *spec {
        return Err(Error::Invalid("loop belongs to a different action".into()));
    }
    let d = spec.ambient_dim;
    let o = spec.base_point();
    let mut samples = Vec::with_capacity(group_loop.samples.len());
    for s in &group_loop.samples {
        let moved = (s * &o - &o).norm();
        if moved > STABILIZER_TOL {
            return Err(Error::BasePointMoved(moved));
        }
        samples.push(s.view((1, 1), (d - 1, d - 1)).into_owned());
    }
    RotationPath::new(samples)
}

/// Apply a realized group element to an ambient unit vector.
pub fn action_apply(
    spec: &ActionSpec,
    g: &DMatrix<f64>,
    v: &DVector<f64>,
) -> Result<DVector<f64>> {
    if g.nrows() != spec.ambient_dim {
        return Err(Error::DimensionMismatch {
            left: g.nrows(),
            right: spec.ambient_dim,
        });
    }
    let norm = v.norm();
    if (norm - 1.0).abs() > crate::octonion::UNIT_TOL {
        return Err(Error::NotUnit(norm));
    }
    let image = g * (v / norm);
    let out_norm = image.norm();
    if (out_norm - 1.0).abs() > crate::octonion::UNIT_TOL {
        return Err(Error::NotUnit(out_norm));
    }
    Ok(image)
}

/// Realized ambient stabilizer element of a classical family from its
/// stabilizer-group data. Used by the character-side checks to sample the
/// isotropy representation away from the generator loop.
pub struct StabilizerElement {
    pub ambient: DMatrix<f64>,
}

impl StabilizerElement {
    /// `diag(1, h)` realized, for `h` in the matrix stabilizer of the plain
    /// families (SO real, U/SU complex, Sp quaternionic).
    pub fn block_so(spec: &ActionSpec, h: &DMatrix<f64>) -> Result<Self> {
        let d = spec.ambient_dim;
        if h.nrows() + 1 != d {
            return Err(Error::DimensionMismatch {
                left: h.nrows() + 1,
                right: d,
            });
        }
        let mut m = DMatrix::identity(d, d);
        m.view_mut((1, 1), (d - 1, d - 1)).copy_from(h);
        Ok(StabilizerElement { ambient: m })
    }

    pub fn block_unitary(spec: &ActionSpec, h: &CMatrix) -> Result<Self> {
        let m = spec.n + 1;
        if h.nrows() + 1 != m {
            return Err(Error::DimensionMismatch {
                left: h.nrows() + 1,
                right: m,
            });
        }
        let mut c = CMatrix::identity(m, m);
        c.view_mut((1, 1), (m - 1, m - 1)).copy_from(h);
        Ok(StabilizerElement {
            ambient: realize_complex(&c).entries,
        })
    }

    pub fn block_symplectic(spec: &ActionSpec, h: &QMatrix) -> Result<Self> {
        let m = spec.n + 1;
        if h.rows + 1 != m {
            return Err(Error::DimensionMismatch {
                left: h.rows + 1,
                right: m,
            });
        }
        let mut q = QMatrix::identity(m);
        for i in 0..h.rows {
            for j in 0..h.rows {
                q[(i + 1, j + 1)] = h[(i, j)];
            }
        }
        Ok(StabilizerElement {
            ambient: realize_quaternionic(&q).entries,
        })
    }

    /// `[diag(w, A), w]` acting by `v ↦ diag(w, A) v w^{-1}`, for the
    /// quotient families (`w = ι(z)` or a unit quaternion).
    pub fn quotient(spec: &ActionSpec, a: &QMatrix, w: &Quaternion) -> Result<Self> {
        let m = spec.n + 1;
        if a.rows + 1 != m {
            return Err(Error::DimensionMismatch {
                left: a.rows + 1,
                right: m,
            });
        }
        if (w.norm() - 1.0).abs() > crate::octonion::UNIT_TOL {
            return Err(Error::NotUnit(w.norm()));
        }
        let mut q = QMatrix::zeros(m, m);
        q[(0, 0)] = *w;
        for i in 0..a.rows {
            for j in 0..a.rows {
                q[(i + 1, j + 1)] = a[(i, j)];
            }
        }
        let left = realize_quaternionic(&q).entries;
        let right = realize_right_mult(&w.inverse(), m);
        Ok(StabilizerElement {
            ambient: left * right,
        })
    }

    /// Trace of the isotropy representation at this element: the ambient
    /// trace minus the fixed direction.
    pub fn isotropy_trace(&self) -> f64 {
        self.ambient.trace() - 1.0
    }
}
