use std::fmt;

use num_integer::Integer;
use rcf_fields::{QuadraticField, ThetaKind};
use serde::Serialize;

use crate::SiegelError;

/// `(a1/M, a2/M)`.
///
/// Ordering is lexicographic on `(M, a1, a2)`, which is the order orbit
/// factors are multiplied in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SiegelIndex {
    pub m: u64,
    pub a1: i64,
    pub a2: i64,
}

/// An integer 2×2 matrix `[[m11, m12], [m21, m22]]` acting on row vectors.
pub type Mat2 = [[i64; 2]; 2];

impl SiegelIndex {
    pub fn new(a1: i64, a2: i64, m: u64) -> Result<Self, SiegelError> {
        if m < 2 || m > i32::MAX as u64 {
            return Err(SiegelError::Input(format!("denominator {m} outside [2, 2^31)")));
        }
        Ok(Self { m, a1, a2 })
    }

    /// `(n1/d1, n2/d2)` written over the common denominator `m`.
    pub fn from_fractions((n1, d1): (i64, i64), (n2, d2): (i64, i64), m: u64) -> Result<Self, SiegelError> {
        let lift = |n: i64, d: i64| {
            if d <= 0 || m as i64 % d != 0 {
                return Err(SiegelError::Input(format!("{n}/{d} does not have denominator dividing {m}")));
            }
            Ok(n * (m as i64 / d))
        };
        Self::new(lift(n1, d1)?, lift(n2, d2)?, m)
    }

    pub fn is_integral(&self) -> bool {
        let m = self.m as i64;
        self.a1.rem_euclid(m) == 0 && self.a2.rem_euclid(m) == 0
    }

    /// Canonical representative of `±(r1, r2) + Z^2`: numerators reduced
    /// into `[0, M)`, then the lexicographically smaller of `v` and `-v`.
    pub fn normalize(&self) -> Result<Self, SiegelError> {
        if self.is_integral() {
            return Err(SiegelError::IntegralIndex(self.to_string()));
        }
        let m = self.m as i64;
        let pos = (self.a1.rem_euclid(m), self.a2.rem_euclid(m));
        let neg = ((-self.a1).rem_euclid(m), (-self.a2).rem_euclid(m));
        let (a1, a2) = pos.min(neg);
        Ok(Self { m: self.m, a1, a2 })
    }

    /// `(r1, r2) · α`, normalized.
    pub fn act_matrix(&self, alpha: &Mat2) -> Result<Self, SiegelError> {
        let m = self.m as i64;
        let det = (alpha[0][0] as i128 * alpha[1][1] as i128 - alpha[0][1] as i128 * alpha[1][0] as i128).rem_euclid(m as i128);
        if (det as i64).gcd(&m) != 1 {
            return Err(SiegelError::Singular(*alpha, self.m));
        }
        let red = |v: i64| v.rem_euclid(m) as i128;
        let (x, y) = (red(self.a1), red(self.a2));
        let b1 = (x * red(alpha[0][0]) + y * red(alpha[1][0])).rem_euclid(m as i128) as i64;
        let b2 = (x * red(alpha[0][1]) + y * red(alpha[1][1])).rem_euclid(m as i128) as i64;
        Self { m: self.m, a1: b1, a2: b2 }.normalize()
    }

    /// Action of the Artin symbol of `ω = sθ + t`.
    pub fn act_artin(&self, s: i64, t: i64, field: &QuadraticField) -> Result<Self, SiegelError> {
        self.act_matrix(&artin_matrix(s, t, field))
    }

    pub fn r1(&self) -> (i64, i64) {
        reduced(self.a1, self.m)
    }

    pub fn r2(&self) -> (i64, i64) {
        reduced(self.a2, self.m)
    }
}

fn reduced(a: i64, m: u64) -> (i64, i64) {
    let g = a.gcd(&(m as i64)).max(1);
    (a / g, m as i64 / g)
}

impl fmt::Display for SiegelIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |(n, d): (i64, i64)| if n == 0 { "0".to_string() } else { format!("{n}/{d}") };
        write!(f, "({}, {})", show(self.r1()), show(self.r2()))
    }
}

/// Matrix of multiplication by `sθ + t` where `θ^2 + Bθ + C = 0`.
pub fn artin_matrix(s: i64, t: i64, field: &QuadraticField) -> Mat2 {
    [[t - field.b_theta * s, -field.c_theta * s], [s, t]]
}

/// The index whose value at `θ` is the complex conjugate of `g_v(θ)`.
pub fn conjugate_index(v: &SiegelIndex, field: &QuadraticField) -> Result<SiegelIndex, SiegelError> {
    let a2 = match field.theta_kind {
        // conj θ = -(θ + 1)
        ThetaKind::HalfTrace => v.a1 - v.a2,
        // conj θ = -θ
        ThetaKind::PureRoot => -v.a2,
    };
    SiegelIndex { a2, ..*v }.normalize()
}
