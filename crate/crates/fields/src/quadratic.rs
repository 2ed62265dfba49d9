use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::FieldsError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaKind {
    /// `θ = (-1 + √-d)/2`
    HalfTrace,
    /// `θ = √radicand`
    PureRoot,
}

/// `Q(√radicand)` together with the generator `θ` of its maximal order.
///
/// `θ` is a root of `X^2 + b_theta X + c_theta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticField {
    pub radicand: i64,
    pub theta_kind: ThetaKind,
    pub b_theta: i64,
    pub c_theta: i64,
}

impl QuadraticField {
    /// The imaginary field `Q(√-d)`.
    pub fn imaginary(d: i64) -> Result<Self, FieldsError> {
        if d <= 0 || !is_squarefree(d as u64) {
            return Err(FieldsError::Input(format!("d = {d} is not a positive squarefree integer")));
        }
        Ok(if (-d).rem_euclid(4) == 1 {
            Self { radicand: -d, theta_kind: ThetaKind::HalfTrace, b_theta: 1, c_theta: (1 + d) / 4 }
        } else {
            Self { radicand: -d, theta_kind: ThetaKind::PureRoot, b_theta: 0, c_theta: d }
        })
    }

    /// The real field `Q(√delta)`, for `delta ≡ 2, 3 mod 4` so that `θ = √delta`.
    pub fn real(delta: i64) -> Result<Self, FieldsError> {
        if delta <= 1 || !is_squarefree(delta as u64) {
            return Err(FieldsError::Input(format!("delta = {delta} is not a squarefree integer > 1")));
        }
        if delta % 4 == 1 {
            return Err(FieldsError::Input(format!("delta = {delta} is 1 mod 4; only Z[√delta] orders are handled")));
        }
        Ok(Self { radicand: delta, theta_kind: ThetaKind::PureRoot, b_theta: 0, c_theta: -delta })
    }

    pub fn is_imaginary(&self) -> bool {
        self.radicand < 0
    }

    /// Field discriminant.
    pub fn discriminant(&self) -> i64 {
        match self.theta_kind {
            ThetaKind::HalfTrace => self.radicand,
            ThetaKind::PureRoot => 4 * self.radicand,
        }
    }
}

/// `s θ + t` in the order generated by `θ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub s: BigInt,
    pub t: BigInt,
}

impl QuadInt {
    pub fn new(s: impl Into<BigInt>, t: impl Into<BigInt>) -> Self {
        Self { s: s.into(), t: t.into() }
    }

    /// Both coordinates reduced into `[0, n)`.
    pub fn reduce(&self, n: &BigInt) -> Self {
        Self { s: self.s.mod_floor(n), t: self.t.mod_floor(n) }
    }

    pub fn mul(&self, o: &Self, f: &QuadraticField) -> Self {
        // θ^2 = -Bθ - C
        let ss = &self.s * &o.s;
        let s = &self.s * &o.t + &self.t * &o.s - &ss * f.b_theta;
        let t = &self.t * &o.t - ss * f.c_theta;
        Self { s, t }
    }

    /// `N_{F/Q}(sθ + t)`.
    pub fn norm(&self, f: &QuadraticField) -> BigInt {
        &self.t * &self.t - &self.s * &self.t * f.b_theta + &self.s * &self.s * f.c_theta
    }
}

pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut m = n;
    let mut q = 2u64;
    while q * q <= m {
        if m % q == 0 {
            m /= q;
            if m % q == 0 {
                return false;
            }
        }
        q += 1;
    }
    true
}

/// A unit `x + y√delta` with its norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unit {
    pub x: BigInt,
    pub y: BigInt,
    pub norm: i8,
}

/// Smallest unit `> 1` of `Z[√delta]`, from the continued fraction of `√delta`.
pub fn fundamental_unit(delta: u64) -> Result<Unit, FieldsError> {
    if delta < 2 || !is_squarefree(delta) {
        return Err(FieldsError::Input(format!("delta = {delta} is not a squarefree integer > 1")));
    }
    let a0 = isqrt(delta);
    let d = BigInt::from(delta);
    let (mut m, mut q, mut a) = (0u64, 1u64, a0);
    let (mut h0, mut h1) = (BigInt::one(), BigInt::from(a0));
    let (mut k0, mut k1) = (BigInt::zero(), BigInt::one());
    loop {
        let n = &h1 * &h1 - &d * &k1 * &k1;
        if n.abs().is_one() {
            let norm = if n.is_positive() { 1 } else { -1 };
            return Ok(Unit { x: h1, y: k1, norm });
        }
        m = a * q - m;
        q = (delta - m * m) / q;
        a = (a0 + m) / q;
        let h2 = &h1 * a + &h0;
        let k2 = &k1 * a + &k0;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
    }
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Class number of `Q(√-d)` by counting reduced forms of the field discriminant.
pub fn class_number_imaginary(d: u64) -> Result<u64, FieldsError> {
    let f = QuadraticField::imaginary(d as i64)?;
    Ok(reduced_forms(-f.discriminant()).len() as u64)
}

/// Reduced positive definite forms `(a, b, c)` with `b^2 - 4ac = -disc`.
///
/// Every form of a fundamental discriminant is primitive, so this is the class group.
pub fn reduced_forms(disc: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= disc {
        for b in -a + 1..=a {
            let num = b * b + disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            out.push((a, b, c));
        }
        a += 1;
    }
    out
}
