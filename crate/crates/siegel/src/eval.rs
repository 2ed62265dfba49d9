use num_bigint::BigInt;
use rcf_fields::{QuadraticField, ThetaKind};
use rcf_numerics::{e_of_rational, BigComplex, BigReal, Bits};

use crate::index::SiegelIndex;
use crate::SiegelError;

/// [`eval_g12`] at precision `prec` has relative error below `2^(EVAL_ERROR_BITS - prec)`.
pub const EVAL_ERROR_BITS: i64 = 4;

/// A point `τ = x + i y` in the upper half plane with `x` rational and `y^2`
/// rational, which covers `θ1 = (-1+√-d1)/2` and `θ2 = √-d2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmPoint {
    /// 1 or 2 for the CM points of the tower, 0 for anything else.
    pub subfield: u8,
    pub re: (i64, i64),
    pub im_sq: (i64, i64),
}

impl CmPoint {
    /// The generator `θ` of the maximal order of the imaginary field.
    pub fn theta(subfield: u8, field: &QuadraticField) -> Result<Self, SiegelError> {
        if !field.is_imaginary() {
            return Err(SiegelError::CmPoint(format!("Q(√{}) is not imaginary", field.radicand)));
        }
        let d = -field.radicand;
        let (re, im_sq) = match field.theta_kind {
            ThetaKind::HalfTrace => ((-1, 2), (d, 4)),
            ThetaKind::PureRoot => ((0, 1), (d, 1)),
        };
        Self::new(subfield, re, im_sq)
    }

    pub fn new(subfield: u8, re: (i64, i64), im_sq: (i64, i64)) -> Result<Self, SiegelError> {
        if re.1 <= 0 || im_sq.1 <= 0 {
            return Err(SiegelError::CmPoint("denominators must be positive".into()));
        }
        if im_sq.0 <= 0 {
            return Err(SiegelError::CmPoint(format!("Im(τ)^2 = {}/{} is not positive, so |q| ≥ 1", im_sq.0, im_sq.1)));
        }
        Ok(Self { subfield, re, im_sq })
    }

    pub fn im(&self, prec: Bits) -> BigReal {
        let r = BigReal::from_ratio(&self.im_sq.0.into(), &self.im_sq.1.into(), prec + 8);
        r.sqrt().expect("positive").round(prec)
    }

    pub fn to_complex(&self, prec: Bits) -> BigComplex {
        BigComplex::new(BigReal::from_ratio(&self.re.0.into(), &self.re.1.into(), prec), self.im(prec))
    }

    /// `-log2 |q|`.
    fn log2_inv_q(&self) -> f64 {
        let y = (self.im_sq.0 as f64 / self.im_sq.1 as f64).sqrt();
        2.0 * std::f64::consts::PI * y * std::f64::consts::LOG2_E
    }
}

/// Number of factors `T` kept in the q-product so that
/// `Σ_{m>T} |q|^m (|q_z| + |q_z|^-1) < 2^-bits`, for `r1 = a1/M` in `[0, 1)`.
pub fn truncation_index(cm: &CmPoint, r1: f64, bits: Bits) -> u64 {
    let lq = cm.log2_inv_q();
    // |q_z|^-1 ≤ |q|^-r1 dominates, and the geometric tail adds 1/(1-|q|)
    let tail = -(1.0 - (-lq * std::f64::consts::LN_2).exp()).log2();
    let need = (bits as f64 + 2.0 + tail) / lq + r1 - 1.0;
    need.ceil().max(0.0) as u64 + 1
}

fn log2_ceil(x: u64) -> usize {
    (64 - x.leading_zeros()) as usize
}

/// `g_v^(12 M n)(τ)` where `M` is the denominator of `v`.
///
/// The prefactor `-q^(B2(r1)/2) e(r2 (r1 - 1)/2)` is raised to `12 M n`
/// symbolically: its q-exponent and phase are exact rationals, and the sign
/// disappears. Only the product part is raised numerically.
pub fn eval_g12(v: &SiegelIndex, cm: &CmPoint, n: u64, prec: Bits) -> Result<BigComplex, SiegelError> {
    if prec < 64 {
        return Err(SiegelError::Input(format!("precision {prec} below 64 bits")));
    }
    if n == 0 {
        return Err(SiegelError::Input("exponent multiple must be positive".into()));
    }
    let v = v.normalize()?;
    let (a, b, m) = (v.a1 as i128, v.a2 as i128, v.m as i128);
    let e = 12u64
        .checked_mul(v.m)
        .and_then(|x| x.checked_mul(n))
        .ok_or_else(|| SiegelError::Input("exponent 12 M n overflows".into()))?;
    let t = truncation_index(cm, a as f64 / m as f64, prec + 32 + log2_ceil(e));
    let w = prec + 32 + log2_ceil(e) + log2_ceil(v.m) + log2_ceil(2 * t + 2);
    let (xn, xd) = (cm.re.0 as i128, cm.re.1 as i128);
    let y = cm.im(w);
    let scaled = |num: i128, den: i128| -> BigReal { &BigReal::from_ratio(&BigInt::from(num), &BigInt::from(den), w) * &y };

    // 12 M n · B2(r1)/2 = n (6 a^2 - 6 a M + M^2) / M
    let c = n as i128 * (6 * a * a - 6 * a * m + m * m);
    let pref = e_of_rational(c * xn, m * xd, &scaled(c, m), w)?;
    // 12 M n · r2 (r1 - 1)/2 = 6 n b (a - M) / M
    let phase = e_of_rational(6 * n as i128 * b * (a - m), m, &BigReal::zero(w), w)?;

    let q = e_of_rational(xn, xd, &y, w)?;
    // z = r1 τ + r2
    let (zn, zd) = (a * xn + b * xd, m * xd);
    let qz = e_of_rational(zn, zd, &scaled(a, m), w)?;
    let qz_inv = e_of_rational(-zn, zd, &scaled(-a, m), w)?;
    let one = BigComplex::one(w);
    let mut prod = &one - &qz;
    let mut qm = q.clone();
    for _ in 0..t {
        let f1 = &one - &qm.checked_mul(&qz)?;
        let f2 = &one - &qm.checked_mul(&qz_inv)?;
        prod = prod.checked_mul(&f1)?.checked_mul(&f2)?;
        qm = qm.checked_mul(&q)?;
    }
    let out = pref.checked_mul(&phase)?.checked_mul(&prod.pow_int(e)?)?;
    Ok(out.round(prec))
}
