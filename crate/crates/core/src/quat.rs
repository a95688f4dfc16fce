//! Quaternion arithmetic, the quaternionic hermitian form on `H^2` and
//! rotations of `Im H` by Sp(1)-conjugation.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance below which a candidate Sp(1) element is silently renormalised.
pub const UNIT_RENORMALIZE_TOL: f64 = 1e-9;

/// Quaternion `a + b i + c j + d k`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub const fn real(a: f64) -> Self {
        Self::new(a, 0.0, 0.0, 0.0)
    }

    pub fn from_array(x: [f64; 4]) -> Self {
        Self::new(x[0], x[1], x[2], x[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn conj(self) -> Self {
        Self::new(self.a, -self.b, -self.c, -self.d)
    }

    pub fn norm_sqr(self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Euclidean inner product on `H = R^4`, i.e. `Re(p̄ q)`.
    pub fn dot(self, other: Self) -> f64 {
        self.a * other.a + self.b * other.b + self.c * other.c + self.d * other.d
    }

    pub fn im(self) -> ImQuaternion {
        ImQuaternion::new(self.b, self.c, self.d)
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn inverse(self) -> Self {
        self.conj().scale(1.0 / self.norm_sqr())
    }

    /// Validates `self` as an element of Sp(1), renormalising tiny drift.
    pub fn to_unit(self) -> Result<Self> {
        let n = self.norm();
        if (1.0 - n).abs() < UNIT_RENORMALIZE_TOL {
            Ok(self.scale(1.0 / n))
        } else {
            Err(Error::Precondition(format!(
                "expected a unit quaternion, |xi| = {n}"
            )))
        }
    }
}

/// Hamilton product.
pub fn qmul(p: Quaternion, q: Quaternion) -> Quaternion {
    Quaternion::new(
        p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
        p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
        p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
        p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a,
    )
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        qmul(self, rhs)
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: f64) -> Quaternion {
        self.scale(rhs)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.a + rhs.a,
            self.b + rhs.b,
            self.c + rhs.c,
            self.d + rhs.d,
        )
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, rhs: Quaternion) {
        *self = *self + rhs;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.a - rhs.a,
            self.b - rhs.b,
            self.c - rhs.c,
            self.d - rhs.d,
        )
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.a, self.b, self.c, self.d)
    }
}

/// Pure quaternion `b i + c j + d k`, identified with `R^3` in the ordered basis `(i, j, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ImQuaternion {
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl ImQuaternion {
    pub const ZERO: ImQuaternion = ImQuaternion::new(0.0, 0.0, 0.0);
    pub const I: ImQuaternion = ImQuaternion::new(1.0, 0.0, 0.0);
    pub const J: ImQuaternion = ImQuaternion::new(0.0, 1.0, 0.0);
    pub const K: ImQuaternion = ImQuaternion::new(0.0, 0.0, 1.0);

    pub const fn new(b: f64, c: f64, d: f64) -> Self {
        Self { b, c, d }
    }

    pub fn from_array(x: [f64; 3]) -> Self {
        Self::new(x[0], x[1], x[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.b, self.c, self.d]
    }

    pub fn to_quaternion(self) -> Quaternion {
        Quaternion::new(0.0, self.b, self.c, self.d)
    }

    pub fn dot(self, o: Self) -> f64 {
        self.b * o.b + self.c * o.c + self.d * o.d
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.b * s, self.c * s, self.d * s)
    }

    pub fn normalized(self) -> Self {
        self.scale(1.0 / self.norm())
    }
}

impl Add for ImQuaternion {
    type Output = ImQuaternion;
    fn add(self, o: ImQuaternion) -> ImQuaternion {
        ImQuaternion::new(self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for ImQuaternion {
    type Output = ImQuaternion;
    fn sub(self, o: ImQuaternion) -> ImQuaternion {
        ImQuaternion::new(self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for ImQuaternion {
    type Output = ImQuaternion;
    fn neg(self) -> ImQuaternion {
        ImQuaternion::new(-self.b, -self.c, -self.d)
    }
}

/// Cross product on `Im H = R^3`; `i × j = k`.
pub fn im_cross(u: ImQuaternion, v: ImQuaternion) -> ImQuaternion {
    ImQuaternion::new(
        u.c * v.d - u.d * v.c,
        u.d * v.b - u.b * v.d,
        u.b * v.c - u.c * v.b,
    )
}

/// Returns `ξ q ξ̄` for a unit quaternion `ξ`.
pub fn sp1_conjugate(xi: Quaternion, q: Quaternion) -> Result<Quaternion> {
    let xi = xi.to_unit()?;
    Ok(xi * q * xi.conj())
}

/// Rotation of `Im H` induced by conjugation with a unit quaternion, as a row-major 3×3 matrix.
pub fn rotation_matrix(xi: Quaternion) -> [[f64; 3]; 3] {
    let basis = [Quaternion::I, Quaternion::J, Quaternion::K];
    let mut m = [[0.0; 3]; 3];
    for (col, e) in basis.iter().enumerate() {
        let img = (xi * *e * xi.conj()).im().to_array();
        for row in 0..3 {
            m[row][col] = img[row];
        }
    }
    m
}

/// Unit quaternion whose conjugation realises the rotation matrix `r` (Shepperd's method).
pub fn quaternion_from_rotation(r: &[[f64; 3]; 3]) -> Quaternion {
    let trace = r[0][0] + r[1][1] + r[2][2];
    let q = if trace > 0.0 {
        let s = (trace + 1.0).sqrt() * 2.0;
        Quaternion::new(
            0.25 * s,
            (r[2][1] - r[1][2]) / s,
            (r[0][2] - r[2][0]) / s,
            (r[1][0] - r[0][1]) / s,
        )
    } else if r[0][0] > r[1][1] && r[0][0] > r[2][2] {
        let s = (1.0 + r[0][0] - r[1][1] - r[2][2]).sqrt() * 2.0;
        Quaternion::new(
            (r[2][1] - r[1][2]) / s,
            0.25 * s,
            (r[0][1] + r[1][0]) / s,
            (r[0][2] + r[2][0]) / s,
        )
    } else if r[1][1] > r[2][2] {
        let s = (1.0 + r[1][1] - r[0][0] - r[2][2]).sqrt() * 2.0;
        Quaternion::new(
            (r[0][2] - r[2][0]) / s,
            (r[0][1] + r[1][0]) / s,
            0.25 * s,
            (r[1][2] + r[2][1]) / s,
        )
    } else {
        let s = (1.0 + r[2][2] - r[0][0] - r[1][1]).sqrt() * 2.0;
        Quaternion::new(
            (r[1][0] - r[0][1]) / s,
            (r[0][2] + r[2][0]) / s,
            (r[1][2] + r[2][1]) / s,
            0.25 * s,
        )
    };
    q.scale(1.0 / q.norm())
}

/// Targets with norm below this are treated as zero by [`rotation_aligning`].
pub const ZERO_TARGET_TOL: f64 = 1e-12;
/// Maximal cosine between two nonzero targets still accepted as orthogonal.
pub const ORTHOGONALITY_TOL: f64 = 1e-6;

/// Finds `ξ ∈ Sp(1)` whose conjugation carries the axes `(i, j, -k)` onto the
/// directions of `targets`.
///
/// The first two nonzero targets are matched exactly. The remaining axis is
/// fixed by orientation, so a third nonzero target is matched up to sign.
/// Zero targets are completed with the first standard axis (in the order
/// `i, j, k`) whose distance from the span of the nonzero targets exceeds 0.5.
pub fn rotation_aligning(targets: [ImQuaternion; 3]) -> Result<Quaternion> {
    let sources = [ImQuaternion::I, ImQuaternion::J, -ImQuaternion::K];
    let nonzero: Vec<usize> = (0..3)
        .filter(|&a| targets[a].norm() > ZERO_TARGET_TOL)
        .collect();
    for (x, &a) in nonzero.iter().enumerate() {
        for &b in &nonzero[x + 1..] {
            let cos = targets[a].dot(targets[b]) / (targets[a].norm() * targets[b].norm());
            if cos.abs() > ORTHOGONALITY_TOL {
                return Err(Error::Structural(format!(
                    "targets {a} and {b} are not orthogonal (cosine {cos:e})"
                )));
            }
        }
    }
    if nonzero.is_empty() {
        return Ok(Quaternion::ONE);
    }

    // Pairs (source axis, unit target) that the rotation must respect.
    let mut pairs: Vec<(ImQuaternion, ImQuaternion)> = nonzero
        .iter()
        .take(2)
        .map(|&a| (sources[a], targets[a].normalized()))
        .collect();
    if pairs.len() == 1 {
        let fixed = pairs[0].1;
        let axes = [ImQuaternion::I, ImQuaternion::J, ImQuaternion::K];
        let mut completion = None;
        for e in axes {
            let residual = e - fixed.scale(fixed.dot(e));
            if residual.norm() > 0.5 {
                completion = Some(residual.normalized());
                break;
            }
        }
        let completion = completion.expect("some standard axis is far from a line");
        let free_source = (0..3)
            .find(|&a| a != nonzero[0])
            .map(|a| sources[a])
            .unwrap();
        pairs.push((free_source, completion));
    }
    let (s1, t1) = pairs[0];
    let (s2, t2) = pairs[1];
    let t2 = (t2 - t1.scale(t1.dot(t2))).normalized();
    let s3 = im_cross(s1, s2);
    let t3 = im_cross(t1, t2);
    // R = [t1 t2 t3] [s1 s2 s3]^T
    let ts = [t1.to_array(), t2.to_array(), t3.to_array()];
    let ss = [s1.to_array(), s2.to_array(), s3.to_array()];
    let mut r = [[0.0; 3]; 3];
    for (row, r_row) in r.iter_mut().enumerate() {
        for (col, entry) in r_row.iter_mut().enumerate() {
            *entry = (0..3).map(|m| ts[m][row] * ss[m][col]).sum();
        }
    }
    Ok(quaternion_from_rotation(&r))
}

/// Point of `H^2`, a right quaternionic vector space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HVector {
    pub v1: Quaternion,
    pub v2: Quaternion,
}

impl HVector {
    pub const fn new(v1: Quaternion, v2: Quaternion) -> Self {
        Self { v1, v2 }
    }

    /// Real coordinates in `R^8`, ordered `(1, i, j, k)` per quaternionic slot.
    pub fn to_real(self) -> [f64; 8] {
        let a = self.v1.to_array();
        let b = self.v2.to_array();
        [a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3]]
    }

    pub fn from_real(x: &[f64; 8]) -> Self {
        Self::new(
            Quaternion::new(x[0], x[1], x[2], x[3]),
            Quaternion::new(x[4], x[5], x[6], x[7]),
        )
    }

    /// Right scalar multiplication `v · q`.
    pub fn right_mul(self, q: Quaternion) -> Self {
        Self::new(self.v1 * q, self.v2 * q)
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.v1.scale(s), self.v2.scale(s))
    }

    pub fn norm(self) -> f64 {
        (self.v1.norm_sqr() + self.v2.norm_sqr()).sqrt()
    }
}

impl Add for HVector {
    type Output = HVector;
    fn add(self, o: HVector) -> HVector {
        HVector::new(self.v1 + o.v1, self.v2 + o.v2)
    }
}

impl Sub for HVector {
    type Output = HVector;
    fn sub(self, o: HVector) -> HVector {
        HVector::new(self.v1 - o.v1, self.v2 - o.v2)
    }
}

/// The standard quaternionic hermitian form `K(v, w) = v̄₁ w₁ + v̄₂ w₂`.
pub fn kform(v: HVector, w: HVector) -> Quaternion {
    v.v1.conj() * w.v1 + v.v2.conj() * w.v2
}
