//! Octonion and quaternion arithmetic.
//!
//! The octonion basis is `1 = i0, i1, ..., i7`. The multiplication table is
//! generated programmatically from the index relations
//!
//! ```text
//! i_k i_{k+1} = i_{k+3},   i_{k+1} i_{k+3} = i_k,   i_{k+3} i_k = i_{k+1}
//! ```
//!
//! (imaginary indices mod 7, kept in `1..=7`), together with `i_k^2 = -1` and
//! anticommutativity of distinct imaginary units. Generating the table instead
//! of hand-entering it removes transcription risk; the generator's internal
//! consistency (every entry written exactly once) is asserted at build time
//! and re-derived in the tests.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// `TABLE[a][b] = (c, sign)` meaning `i_a * i_b = sign * i_c`.
type MulTable = [[(usize, f64); 8]; 8];

fn wrap7(k: usize) -> usize {
    (k - 1) % 7 + 1
}

fn build_table() -> MulTable {
    let mut table = [[(usize::MAX, 0.0); 8]; 8];
    let set = |t: &mut MulTable, a: usize, b: usize, c: usize, s: f64| {
        assert_eq!(t[a][b].0, usize::MAX, "table entry ({a},{b}) set twice");
        t[a][b] = (c, s);
    };
    // unit element and squares of imaginary units
    set(&mut table, 0, 0, 0, 1.0);
    for k in 1..8 {
        set(&mut table, 0, k, k, 1.0);
        set(&mut table, k, 0, k, 1.0);
        set(&mut table, k, k, 0, -1.0);
    }
    // one cyclic triple per k, plus anticommutativity
    for k in 1..8 {
        let (a, b, c) = (k, wrap7(k + 1), wrap7(k + 3));
        set(&mut table, a, b, c, 1.0);
        set(&mut table, b, c, a, 1.0);
        set(&mut table, c, a, b, 1.0);
        set(&mut table, b, a, c, -1.0);
        set(&mut table, c, b, a, -1.0);
        set(&mut table, a, c, b, -1.0);
    }
    for (a, row) in table.iter().enumerate() {
        for (b, entry) in row.iter().enumerate() {
            assert_ne!(entry.0, usize::MAX, "table entry ({a},{b}) never set");
        }
    }
    table
}

fn table() -> &'static MulTable {
    static TABLE: OnceLock<MulTable> = OnceLock::new();
    TABLE.get_or_init(build_table)
}

/// An element of the eight-dimensional real division algebra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Octonion {
    pub coeffs: [f64; 8],
}

impl Octonion {
    pub const ZERO: Octonion = Octonion { coeffs: [0.0; 8] };

    pub fn new(coeffs: [f64; 8]) -> Self {
        Octonion { coeffs }
    }

    pub fn one() -> Self {
        Octonion::unit(0)
    }

    /// The basis element `i_k`.
    pub fn unit(k: usize) -> Self {
        assert!(k < 8);
        let mut coeffs = [0.0; 8];
        coeffs[k] = 1.0;
        Octonion { coeffs }
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut coeffs = self.coeffs;
        for c in &mut coeffs {
            *c *= s;
        }
        Octonion { coeffs }
    }

    pub fn conj(&self) -> Self {
        let mut coeffs = self.coeffs;
        for c in coeffs.iter_mut().skip(1) {
            *c = -*c;
        }
        Octonion { coeffs }
    }

    pub fn re(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn im(&self) -> Self {
        let mut coeffs = self.coeffs;
        coeffs[0] = 0.0;
        Octonion { coeffs }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn is_imaginary(&self, tol: f64) -> bool {
        self.coeffs[0].abs() < tol
    }

    /// Commutator `xy - yx`.
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }
}

impl Add for Octonion {
    type Output = Octonion;
    fn add(self, rhs: Octonion) -> Octonion {
        let mut coeffs = self.coeffs;
        for (c, r) in coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *c += r;
        }
        Octonion { coeffs }
    }
}

impl Sub for Octonion {
    type Output = Octonion;
    fn sub(self, rhs: Octonion) -> Octonion {
        let mut coeffs = self.coeffs;
        for (c, r) in coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *c -= r;
        }
        Octonion { coeffs }
    }
}

impl Neg for Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        self.scale(-1.0)
    }
}

impl Mul for Octonion {
    type Output = Octonion;
    fn mul(self, rhs: Octonion) -> Octonion {
        let t = table();
        let mut coeffs = [0.0; 8];
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            for (b, &cb) in rhs.coeffs.iter().enumerate() {
                if cb == 0.0 {
                    continue;
                }
                let (c, sign) = t[a][b];
                coeffs[c] += sign * ca * cb;
            }
        }
        Octonion { coeffs }
    }
}

/// A quaternion in the basis `1, i, j, k`.
///
/// Inside the octonions the quaternions sit as `span{1, i1, i2, i4}`: the
/// triple `(i1, i2)` generates an associative subalgebra with `i1 i2 = i4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub coeffs: [f64; 4],
}

impl Quaternion {
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion {
            coeffs: [w, x, y, z],
        }
    }

    pub fn one() -> Self {
        Quaternion::new(1.0, 0.0, 0.0, 0.0)
    }

    pub fn i() -> Self {
        Quaternion::new(0.0, 1.0, 0.0, 0.0)
    }

    pub fn j() -> Self {
        Quaternion::new(0.0, 0.0, 1.0, 0.0)
    }

    pub fn k() -> Self {
        Quaternion::new(0.0, 0.0, 0.0, 1.0)
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(
            self.coeffs[0],
            -self.coeffs[1],
            -self.coeffs[2],
            -self.coeffs[3],
        )
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Quaternion::new(
            self.coeffs[0] * s,
            self.coeffs[1] * s,
            self.coeffs[2] * s,
            self.coeffs[3] * s,
        )
    }

    pub fn inverse(&self) -> Self {
        let n2 = self.coeffs.iter().map(|c| c * c).sum::<f64>();
        self.conj().scale(1.0 / n2)
    }

    /// Embed into the octonions on `span{1, i1, i2, i4}`.
    pub fn to_octonion(&self) -> Octonion {
        let mut coeffs = [0.0; 8];
        coeffs[0] = self.coeffs[0];
        coeffs[1] = self.coeffs[1];
        coeffs[2] = self.coeffs[2];
        coeffs[4] = self.coeffs[3];
        Octonion { coeffs }
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.coeffs[0] + rhs.coeffs[0],
            self.coeffs[1] + rhs.coeffs[1],
            self.coeffs[2] + rhs.coeffs[2],
            self.coeffs[3] + rhs.coeffs[3],
        )
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        let [a0, a1, a2, a3] = self.coeffs;
        let [b0, b1, b2, b3] = rhs.coeffs;
        Quaternion::new(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )
    }
}

/// Tolerance inside which near-unit inputs are renormalized instead of
/// rejected. Path sampling accumulates rounding, so an exact-unit gate would
/// be too brittle.
pub const UNIT_TOL: f64 = 1e-9;

/// Embed a unit complex number `a + ib` as the unit quaternion `a + bi`.
pub fn iota_embed(re: f64, im: f64) -> Result<Quaternion> {
    let norm = (re * re + im * im).sqrt();
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::NotUnit(norm));
    }
    Ok(Quaternion::new(re / norm, im / norm, 0.0, 0.0))
}
