//! Character calculus for the compact groups in play.
//!
//! Representations are expression trees over a handful of leaves (standard
//! representations, circle weights, the three-dimensional adjoint of the unit
//! quaternions, and the two exceptional leaves evaluated through explicit
//! matrices). Characters evaluate pointwise on sampled group elements;
//! identities between expressions are certified numerically: matching
//! dimension at the identity plus agreement on a seeded sample set, which for
//! characters of a compact group is decisive at these sizes.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::actions::{ActionSpec, Family, StabilizerElement};
use crate::clifford::{lambda_map, rotor_from_generator, SpinElement};
use crate::error::{Error, Result};
use crate::exceptional::{spin7_module_matrix, su3_extend_to_g2};
use crate::linalg::{exp_complex, CMatrix};
use crate::octonion::{iota_embed, Quaternion};
use crate::realize::{complex_pair_to_quaternionic, quaternionic_to_complex, QMatrix};

type C64 = Complex<f64>;

/// A sampled group element, carrying whichever realization its group's
/// representations evaluate through.
#[derive(Debug, Clone)]
pub enum GroupElement {
    /// SO(n) element.
    Orthogonal(nalgebra::DMatrix<f64>),
    /// U(n) or SU(n) element.
    Unitary(CMatrix),
    /// Sp(n) element as a quaternionic matrix.
    Symplectic(QMatrix),
    /// U(1) element.
    Circle(C64),
    /// Sp(1) element.
    UnitQuaternion(Quaternion),
    /// An element of a product group, component-wise.
    Product(Box<GroupElement>, Box<GroupElement>),
    /// An octonion-algebra automorphism fixing `span{1, i1}` (8x8 matrix).
    Automorphism(nalgebra::DMatrix<f64>),
    /// An even Clifford rotor in `Cl_7`.
    Rotor(SpinElement),
}

impl GroupElement {
    fn kind(&self) -> &'static str {
        match self {
            GroupElement::Orthogonal(_) => "orthogonal",
            GroupElement::Unitary(_) => "unitary",
            GroupElement::Symplectic(_) => "symplectic",
            GroupElement::Circle(_) => "circle",
            GroupElement::UnitQuaternion(_) => "unit-quaternion",
            GroupElement::Product(_, _) => "product",
            GroupElement::Automorphism(_) => "automorphism",
            GroupElement::Rotor(_) => "rotor",
        }
    }

    /// The identity of the same group (shape-preserving).
    pub fn identity_like(&self) -> Result<GroupElement> {
        Ok(match self {
            GroupElement::Orthogonal(m) => {
                GroupElement::Orthogonal(nalgebra::DMatrix::identity(m.nrows(), m.nrows()))
            }
            GroupElement::Unitary(m) => {
                GroupElement::Unitary(CMatrix::identity(m.nrows(), m.nrows()))
            }
            GroupElement::Symplectic(q) => GroupElement::Symplectic(QMatrix::identity(q.rows)),
            GroupElement::Circle(_) => GroupElement::Circle(C64::new(1.0, 0.0)),
            GroupElement::UnitQuaternion(_) => GroupElement::UnitQuaternion(Quaternion::one()),
            GroupElement::Product(a, b) => GroupElement::Product(
                Box::new(a.identity_like()?),
                Box::new(b.identity_like()?),
            ),
            GroupElement::Automorphism(m) => {
                GroupElement::Automorphism(nalgebra::DMatrix::identity(m.nrows(), m.nrows()))
            }
            GroupElement::Rotor(s) => GroupElement::Rotor(SpinElement::identity(s.dim())?),
        })
    }

    /// `g^k` for the power-sum rules behind the exterior and symmetric
    /// squares.
    pub fn pow(&self, k: u32) -> Result<GroupElement> {
        let mut acc = self.identity_like()?;
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    fn mul(&self, rhs: &GroupElement) -> Result<GroupElement> {
        Ok(match (self, rhs) {
            (GroupElement::Orthogonal(a), GroupElement::Orthogonal(b)) => {
                GroupElement::Orthogonal(a * b)
            }
            (GroupElement::Unitary(a), GroupElement::Unitary(b)) => GroupElement::Unitary(a * b),
            (GroupElement::Symplectic(a), GroupElement::Symplectic(b)) => {
                GroupElement::Symplectic(a.mul(b))
            }
            (GroupElement::Circle(a), GroupElement::Circle(b)) => GroupElement::Circle(a * b),
            (GroupElement::UnitQuaternion(a), GroupElement::UnitQuaternion(b)) => {
                GroupElement::UnitQuaternion(*a * *b)
            }
            (GroupElement::Product(a1, a2), GroupElement::Product(b1, b2)) => {
                GroupElement::Product(Box::new(a1.mul(b1)?), Box::new(a2.mul(b2)?))
            }
            (GroupElement::Automorphism(a), GroupElement::Automorphism(b)) => {
                GroupElement::Automorphism(a * b)
            }
            (GroupElement::Rotor(a), GroupElement::Rotor(b)) => GroupElement::Rotor(a.mul(b)?),
            _ => {
                return Err(Error::Invalid(format!(
                    "cannot multiply {} by {}",
                    self.kind(),
                    rhs.kind()
                )))
            }
        })
    }
}

/// Subgroup embeddings carried by restriction nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Embedding {
    /// `SO(n) ∋ h ↦ diag(1, h) ∈ SO(n+1)`.
    BlockOrthogonal,
    /// `U(n) ∋ h ↦ diag(1, h) ∈ U(n+1)`.
    BlockUnitary,
    /// `Sp(n) ∋ h ↦ diag(1, h) ∈ Sp(n+1)`.
    BlockSymplectic,
    /// `U(1) ∋ z ↦ ι(z) ∈ Sp(1)` (as a 1x1 quaternionic matrix).
    CircleInSp1,
}

impl Embedding {
    pub fn apply(&self, g: &GroupElement) -> Result<GroupElement> {
        match (self, g) {
            (Embedding::BlockOrthogonal, GroupElement::Orthogonal(h)) => {
                let n = h.nrows();
                let mut m = nalgebra::DMatrix::identity(n + 1, n + 1);
                m.view_mut((1, 1), (n, n)).copy_from(h);
                Ok(GroupElement::Orthogonal(m))
            }
            (Embedding::BlockUnitary, GroupElement::Unitary(h)) => {
                let n = h.nrows();
                let mut m = CMatrix::identity(n + 1, n + 1);
                m.view_mut((1, 1), (n, n)).copy_from(h);
                Ok(GroupElement::Unitary(m))
            }
            (Embedding::BlockSymplectic, GroupElement::Symplectic(h)) => {
                let n = h.rows;
                let mut m = QMatrix::identity(n + 1);
                for i in 0..n {
                    for j in 0..n {
                        m[(i + 1, j + 1)] = h[(i, j)];
                    }
                }
                Ok(GroupElement::Symplectic(m))
            }
            (Embedding::CircleInSp1, GroupElement::Circle(z)) => {
                let q = iota_embed(z.re, z.im)?;
                let mut m = QMatrix::zeros(1, 1);
                m[(0, 0)] = q;
                Ok(GroupElement::Symplectic(m))
            }
            _ => Err(Error::IncompatibleLeaf {
                leaf: format!("{self:?}"),
                group: g.kind().to_string(),
            }),
        }
    }
}

/// A virtual-representation expression.
#[derive(Debug, Clone)]
pub enum RepExpr {
    /// Standard representation of SO(n) on `R^n`.
    StdSO(usize),
    /// Standard representation of U(n) on `C^n`.
    StdU(usize),
    /// Its conjugate.
    ConjStdU(usize),
    /// Standard complex representation of Sp(n) on `C^{2n}`.
    StdSp(usize),
    /// One-dimensional trivial representation.
    Trivial,
    /// Circle weight `z ↦ z^m`.
    Weight(i32),
    /// Three-dimensional adjoint of Sp(1) (conjugation on the imaginary
    /// quaternions); also accepts 1x1 symplectic elements.
    AdjointSp1,
    /// Seven-dimensional representation of the octonion automorphisms on the
    /// imaginary octonions.
    Zeta,
    /// Eight-dimensional module of an even `Cl_7` rotor through composed
    /// left multiplications.
    Delta7,
    /// Seven-dimensional image of a `Cl_7` rotor under the double cover.
    Lambda7,
    Sum(Box<RepExpr>, Box<RepExpr>),
    Tensor(Box<RepExpr>, Box<RepExpr>),
    /// Second exterior power.
    Ext2(Box<RepExpr>),
    /// Second symmetric power.
    Sym2(Box<RepExpr>),
    Dual(Box<RepExpr>),
    /// Underlying real representation of a complex one.
    Realify(Box<RepExpr>),
    /// Restriction along a subgroup embedding.
    Restrict(Embedding, Box<RepExpr>),
    /// External product across a product group.
    External(Box<RepExpr>, Box<RepExpr>),
}

impl RepExpr {
    pub fn sum(a: RepExpr, b: RepExpr) -> RepExpr {
        RepExpr::Sum(Box::new(a), Box::new(b))
    }

    pub fn tensor(a: RepExpr, b: RepExpr) -> RepExpr {
        RepExpr::Tensor(Box::new(a), Box::new(b))
    }

    pub fn ext2(a: RepExpr) -> RepExpr {
        RepExpr::Ext2(Box::new(a))
    }

    pub fn sym2(a: RepExpr) -> RepExpr {
        RepExpr::Sym2(Box::new(a))
    }

    pub fn realify(a: RepExpr) -> RepExpr {
        RepExpr::Realify(Box::new(a))
    }

    pub fn restrict(e: Embedding, a: RepExpr) -> RepExpr {
        RepExpr::Restrict(e, Box::new(a))
    }

    pub fn external(a: RepExpr, b: RepExpr) -> RepExpr {
        RepExpr::External(Box::new(a), Box::new(b))
    }

    pub fn sum_of(parts: Vec<RepExpr>) -> RepExpr {
        let mut iter = parts.into_iter();
        let first = iter.next().expect("non-empty sum");
        iter.fold(first, RepExpr::sum)
    }
}

fn incompatible(expr: &RepExpr, g: &GroupElement) -> Error {
    Error::IncompatibleLeaf {
        leaf: format!("{expr:?}"),
        group: g.kind().to_string(),
    }
}

/// Conjugation matrix of a unit quaternion on the imaginary quaternions.
fn sp1_adjoint_matrix(q: &Quaternion) -> nalgebra::DMatrix<f64> {
    let qi = q.inverse();
    let mut m = nalgebra::DMatrix::zeros(3, 3);
    for (j, u) in [Quaternion::i(), Quaternion::j(), Quaternion::k()]
        .iter()
        .enumerate()
    {
        let image = *q * *u * qi;
        for i in 0..3 {
            m[(i, j)] = image.coeffs[i + 1];
        }
    }
    m
}

/// Evaluate the character of `expr` at `g`.
pub fn char_eval(expr: &RepExpr, g: &GroupElement) -> Result<C64> {
    Ok(match (expr, g) {
        (RepExpr::StdSO(n), GroupElement::Orthogonal(m)) => {
            if m.nrows() != *n {
                return Err(incompatible(expr, g));
            }
            C64::new(m.trace(), 0.0)
        }
        (RepExpr::StdU(n), GroupElement::Unitary(m)) => {
            if m.nrows() != *n {
                return Err(incompatible(expr, g));
            }
            m.trace()
        }
        (RepExpr::ConjStdU(n), GroupElement::Unitary(m)) => {
            if m.nrows() != *n {
                return Err(incompatible(expr, g));
            }
            m.trace().conj()
        }
        (RepExpr::StdSp(n), GroupElement::Symplectic(q)) => {
            if q.rows != *n {
                return Err(incompatible(expr, g));
            }
            quaternionic_to_complex(q).trace()
        }
        (RepExpr::StdSp(1), GroupElement::UnitQuaternion(q)) => {
            let mut m = QMatrix::zeros(1, 1);
            m[(0, 0)] = *q;
            quaternionic_to_complex(&m).trace()
        }
        (RepExpr::Trivial, _) => C64::new(1.0, 0.0),
        (RepExpr::Weight(m), GroupElement::Circle(z)) => z.powi(*m),
        (RepExpr::AdjointSp1, GroupElement::UnitQuaternion(q)) => {
            C64::new(sp1_adjoint_matrix(q).trace(), 0.0)
        }
        (RepExpr::AdjointSp1, GroupElement::Symplectic(q)) if q.rows == 1 => {
            C64::new(sp1_adjoint_matrix(&q[(0, 0)]).trace(), 0.0)
        }
        (RepExpr::Zeta, GroupElement::Automorphism(m)) => C64::new(m.trace() - 1.0, 0.0),
        (RepExpr::Delta7, GroupElement::Rotor(s)) => {
            C64::new(spin7_module_matrix(s.mv())?.trace(), 0.0)
        }
        (RepExpr::Lambda7, GroupElement::Rotor(s)) => C64::new(lambda_map(s)?.trace(), 0.0),
        (RepExpr::Sum(a, b), _) => char_eval(a, g)? + char_eval(b, g)?,
        (RepExpr::Tensor(a, b), _) => char_eval(a, g)? * char_eval(b, g)?,
        (RepExpr::Ext2(a), _) => {
            let chi = char_eval(a, g)?;
            let chi2 = char_eval(a, &g.pow(2)?)?;
            (chi * chi - chi2) * 0.5
        }
        (RepExpr::Sym2(a), _) => {
            let chi = char_eval(a, g)?;
            let chi2 = char_eval(a, &g.pow(2)?)?;
            (chi * chi + chi2) * 0.5
        }
        (RepExpr::Dual(a), _) => char_eval(a, g)?.conj(),
        (RepExpr::Realify(a), _) => {
            let chi = char_eval(a, g)?;
            chi + chi.conj()
        }
        (RepExpr::Restrict(emb, a), _) => char_eval(a, &emb.apply(g)?)?,
        (RepExpr::External(a, b), GroupElement::Product(x, y)) => {
            char_eval(a, x)? * char_eval(b, y)?
        }
        _ => return Err(incompatible(expr, g)),
    })
}

/// Dimension of the virtual representation: the character at the identity of
/// the same group as the witness element.
pub fn dimension_at_identity(expr: &RepExpr, witness: &GroupElement) -> Result<f64> {
    let chi = char_eval(expr, &witness.identity_like()?)?;
    if chi.im.abs() > 1e-9 || (chi.re - chi.re.round()).abs() > 1e-9 || chi.re < -1e-9 {
        return Err(Error::Invalid(format!(
            "virtual dimension {chi} is not a non-negative integer"
        )));
    }
    Ok(chi.re)
}

// ---------------------------------------------------------------------------
// seeded samplers
// ---------------------------------------------------------------------------

/// Deterministic group-element sampler: exponentials of random Lie-algebra
/// elements with entries uniform in `[-1, 1]`.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>() * 2.0 - 1.0
    }

    pub fn orthogonal(&mut self, n: usize) -> GroupElement {
        let mut omega = nalgebra::DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..i {
                let x = self.uniform();
                omega[(i, j)] = x;
                omega[(j, i)] = -x;
            }
        }
        GroupElement::Orthogonal(crate::linalg::exp_real(&omega))
    }

    fn skew_hermitian(&mut self, n: usize, traceless: bool) -> CMatrix {
        let mut x = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..i {
                let z = C64::new(self.uniform(), self.uniform());
                x[(j, i)] = z;
                x[(i, j)] = -z.conj();
            }
        }
        let mut diag: Vec<f64> = (0..n).map(|_| self.uniform()).collect();
        if traceless {
            let mean = diag.iter().sum::<f64>() / n as f64;
            for d in &mut diag {
                *d -= mean;
            }
        }
        for (i, d) in diag.iter().enumerate() {
            x[(i, i)] = C64::new(0.0, *d);
        }
        x
    }

    pub fn unitary(&mut self, n: usize) -> GroupElement {
        GroupElement::Unitary(exp_complex(&self.skew_hermitian(n, false)))
    }

    pub fn special_unitary(&mut self, n: usize) -> GroupElement {
        GroupElement::Unitary(exp_complex(&self.skew_hermitian(n, true)))
    }

    /// Random quaternionic skew-Hermitian matrix (the algebra of Sp(n)).
    fn sp_algebra(&mut self, n: usize) -> QMatrix {
        let mut x = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..i {
                let q = Quaternion::new(
                    self.uniform(),
                    self.uniform(),
                    self.uniform(),
                    self.uniform(),
                );
                x[(j, i)] = q;
                x[(i, j)] = q.conj().scale(-1.0);
            }
            x[(i, i)] = Quaternion::new(0.0, self.uniform(), self.uniform(), self.uniform());
        }
        x
    }

    pub fn symplectic(&mut self, n: usize) -> GroupElement {
        let x = self.sp_algebra(n);
        let exp = exp_complex(&quaternionic_to_complex(&x));
        GroupElement::Symplectic(
            complex_pair_to_quaternionic(&exp).expect("exponential preserves the structure"),
        )
    }

    pub fn circle(&mut self) -> GroupElement {
        let theta = self.uniform() * std::f64::consts::PI;
        GroupElement::Circle(C64::from_polar(1.0, theta))
    }

    pub fn unit_quaternion(&mut self) -> GroupElement {
        GroupElement::UnitQuaternion(crate::realize::random_unit_quaternion(&mut self.rng))
    }

    pub fn sp_u1(&mut self, n: usize) -> GroupElement {
        let a = self.symplectic(n);
        let z = self.circle();
        GroupElement::Product(Box::new(a), Box::new(z))
    }

    pub fn sp_sp1(&mut self, n: usize) -> GroupElement {
        let a = self.symplectic(n);
        let z = self.unit_quaternion();
        GroupElement::Product(Box::new(a), Box::new(z))
    }

    /// Octonion automorphism sample through the stabilizer copy of SU(3).
    pub fn automorphism(&mut self) -> GroupElement {
        let a = match self.special_unitary(3) {
            GroupElement::Unitary(m) => m,
            _ => unreachable!(),
        };
        GroupElement::Automorphism(su3_extend_to_g2(&a).expect("sample is special unitary"))
    }

    /// Even rotor in `Cl_7`.
    pub fn rotor7(&mut self) -> GroupElement {
        let mut omega = nalgebra::DMatrix::zeros(7, 7);
        for i in 0..7 {
            for j in 0..i {
                let x = self.uniform();
                omega[(i, j)] = x;
                omega[(j, i)] = -x;
            }
        }
        GroupElement::Rotor(rotor_from_generator(&omega).expect("generator is antisymmetric"))
    }
}

// ---------------------------------------------------------------------------
// identity certification
// ---------------------------------------------------------------------------

/// Certify `lhs ≅ rhs` numerically: equal dimension at the identity, then
/// max character residual over sampled elements.
pub fn verify_decomposition(
    lhs: &RepExpr,
    rhs: &RepExpr,
    sample: &mut dyn FnMut() -> GroupElement,
    trials: usize,
) -> Result<f64> {
    let witness = sample();
    let dim_l = dimension_at_identity(lhs, &witness)?;
    let dim_r = dimension_at_identity(rhs, &witness)?;
    if (dim_l - dim_r).abs() > 1e-9 {
        return Err(Error::DimensionAtIdentity {
            left: dim_l,
            right: dim_r,
        });
    }
    let mut worst: f64 = 0.0;
    let mut g = witness;
    for _ in 0..trials {
        let chi_l = char_eval(lhs, &g)?;
        let chi_r = char_eval(rhs, &g)?;
        worst = worst.max((chi_l - chi_r).norm());
        g = sample();
    }
    Ok(worst)
}

/// Claimed isotropy representation of a classical family, as an expression
/// over the stabilizer group.
pub fn isotropy_expr(family: Family, n: usize) -> Result<RepExpr> {
    Ok(match family {
        Family::SO => RepExpr::StdSO(n),
        Family::U | Family::SU => RepExpr::sum(RepExpr::realify(RepExpr::StdU(n)), RepExpr::Trivial),
        Family::Sp => RepExpr::sum_of(vec![
            RepExpr::realify(RepExpr::StdSp(n)),
            RepExpr::Trivial,
            RepExpr::Trivial,
            RepExpr::Trivial,
        ]),
        Family::SpU1 => RepExpr::sum(
            RepExpr::external(
                RepExpr::StdSp(n),
                RepExpr::restrict(Embedding::CircleInSp1, RepExpr::StdSp(1)),
            ),
            RepExpr::external(
                RepExpr::Trivial,
                RepExpr::restrict(Embedding::CircleInSp1, RepExpr::AdjointSp1),
            ),
        ),
        Family::SpSp1 => RepExpr::sum(
            RepExpr::external(RepExpr::StdSp(n), RepExpr::StdSp(1)),
            RepExpr::external(RepExpr::Trivial, RepExpr::AdjointSp1),
        ),
        _ => return Err(Error::UnsupportedFamily(family.token().to_string())),
    })
}

/// Compare the numerically computed isotropy trace against the claimed
/// representation's character on sampled stabilizer elements. Returns the
/// max residual.
pub fn table_isotropy_check(spec: &ActionSpec, trials: usize, seed: u64) -> Result<f64> {
    let mut sampler = Sampler::new(seed);
    let expr = isotropy_expr(spec.family, spec.n)?;
    let n = spec.n;
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let (ambient, group_part): (StabilizerElement, GroupElement) = match spec.family {
            Family::SO => {
                let h = match sampler.orthogonal(n) {
                    GroupElement::Orthogonal(m) => m,
                    _ => unreachable!(),
                };
                (
                    StabilizerElement::block_so(spec, &h)?,
                    GroupElement::Orthogonal(h),
                )
            }
            Family::U | Family::SU => {
                let sample = if spec.family == Family::U {
                    sampler.unitary(n)
                } else {
                    sampler.special_unitary(n)
                };
                let h = match sample {
                    GroupElement::Unitary(m) => m,
                    _ => unreachable!(),
                };
                (
                    StabilizerElement::block_unitary(spec, &h)?,
                    GroupElement::Unitary(h),
                )
            }
            Family::Sp => {
                let h = match sampler.symplectic(n) {
                    GroupElement::Symplectic(q) => q,
                    _ => unreachable!(),
                };
                (
                    StabilizerElement::block_symplectic(spec, &h)?,
                    GroupElement::Symplectic(h),
                )
            }
            Family::SpU1 => {
                let a = match sampler.symplectic(n) {
                    GroupElement::Symplectic(q) => q,
                    _ => unreachable!(),
                };
                let z = match sampler.circle() {
                    GroupElement::Circle(z) => z,
                    _ => unreachable!(),
                };
                let w = iota_embed(z.re, z.im)?;
                (
                    StabilizerElement::quotient(spec, &a, &w)?,
                    GroupElement::Product(
                        Box::new(GroupElement::Symplectic(a)),
                        Box::new(GroupElement::Circle(z)),
                    ),
                )
            }
            Family::SpSp1 => {
                let a = match sampler.symplectic(n) {
                    GroupElement::Symplectic(q) => q,
                    _ => unreachable!(),
                };
                let w = match sampler.unit_quaternion() {
                    GroupElement::UnitQuaternion(q) => q,
                    _ => unreachable!(),
                };
                (
                    StabilizerElement::quotient(spec, &a, &w)?,
                    GroupElement::Product(
                        Box::new(GroupElement::Symplectic(a)),
                        Box::new(GroupElement::UnitQuaternion(w)),
                    ),
                )
            }
            _ => return Err(Error::UnsupportedFamily(spec.family.token().to_string())),
        };
        let sigma_trace = ambient.isotropy_trace();
        let chi = char_eval(&expr, &group_part)?;
        if chi.im.abs() > 1e-9 {
            return Err(Error::Invalid(format!(
                "real representation evaluated to a complex character {chi}"
            )));
        }
        worst = worst.max((sigma_trace - chi.re).abs());
    }
    Ok(worst)
}
