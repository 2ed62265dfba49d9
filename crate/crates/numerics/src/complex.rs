use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::{BigReal, Bits, NumericsError};

#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        Self { re, im }
    }

    pub fn zero(prec: Bits) -> Self {
        Self::new(BigReal::zero(prec), BigReal::zero(prec))
    }

    pub fn one(prec: Bits) -> Self {
        Self::from_real(BigReal::one(prec))
    }

    pub fn i(prec: Bits) -> Self {
        Self::new(BigReal::zero(prec), BigReal::one(prec))
    }

    pub fn from_real(re: BigReal) -> Self {
        let p = re.prec();
        Self::new(re, BigReal::zero(p))
    }

    pub fn from_i64(re: i64, im: i64, prec: Bits) -> Self {
        Self::new(BigReal::from_i64(re, prec), BigReal::from_i64(im, prec))
    }

    pub fn prec(&self) -> Bits {
        self.re.prec().max(self.im.prec())
    }

    pub fn round(&self, prec: Bits) -> Self {
        Self::new(self.re.round(prec), self.im.round(prec))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> BigReal {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn abs(&self) -> BigReal {
        self.norm_sqr().sqrt().expect("nonnegative")
    }

    /// Approximate `log2 |z|`.
    pub fn log2_abs(&self) -> f64 {
        let (a, b) = (self.re.log2_abs(), self.im.log2_abs());
        let hi = a.max(b);
        if hi == f64::NEG_INFINITY {
            return hi;
        }
        hi + 0.5 * (1.0 + 2f64.powf(2.0 * (a.min(b) - hi))).log2()
    }

    pub fn scale(&self, r: &BigReal) -> Self {
        Self::new(&self.re * r, &self.im * r)
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, NumericsError> {
        let ac = self.re.checked_mul(&o.re)?;
        let bd = self.im.checked_mul(&o.im)?;
        let ad = self.re.checked_mul(&o.im)?;
        let bc = self.im.checked_mul(&o.re)?;
        Ok(Self::new(&ac - &bd, &ad + &bc))
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, NumericsError> {
        let d = o.norm_sqr();
        let n = self.checked_mul(&o.conj())?;
        Ok(Self::new(n.re.checked_div(&d)?, n.im.checked_div(&d)?))
    }

    /// `z^k` by binary exponentiation.
    ///
    /// The relative error is at most about `k * 2^(2-prec)`: each of the
    /// `O(log k)` products adds a rounding error, and every error already
    /// present is raised to the remaining power.
    pub fn pow_int(&self, k: u64) -> Result<Self, NumericsError> {
        let p = self.prec();
        let mut acc = Self::one(p);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }
}

/// `e^(2 pi i z)`.
///
/// Internally works with `32 + log2 |z|` guard bits so the relative error of
/// the result stays below `2^(8-prec)`.
pub fn e_of(z: &BigComplex, prec: Bits) -> Result<BigComplex, NumericsError> {
    let guard = 32 + z.re.log2_abs().max(z.im.log2_abs()).max(0.0).ceil() as usize;
    let w = prec + guard;
    let frac = z.re.round(w).fract();
    e_of_parts(&frac, &z.im.round(w), prec)
}

/// `e(num/den + i*im)` with the rational real part reduced exactly.
pub fn e_of_rational(num: i128, den: i128, im: &BigReal, prec: Bits) -> Result<BigComplex, NumericsError> {
    if den == 0 {
        return Err(NumericsError::Domain("e_of_rational: zero denominator"));
    }
    let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
    let r = num.rem_euclid(den);
    let guard = 32 + im.log2_abs().max(0.0).ceil() as usize;
    let w = prec + guard;
    let x = BigReal::from_ratio(&r.into(), &den.into(), w);
    e_of_parts(&x, &im.round(w), prec)
}

fn e_of_parts(frac: &BigReal, im: &BigReal, prec: Bits) -> Result<BigComplex, NumericsError> {
    let w = frac.prec().max(im.prec());
    let two_pi = BigReal::pi(w).mul_pow2(1);
    let mag = (-&(&two_pi * im)).exp()?;
    let (s, c) = (&two_pi * frac).sin_cos()?;
    Ok(BigComplex::new((&mag * &c).round(prec), (&mag * &s).round(prec)))
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re.to_sci(20), self.im.to_sci(20))
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(-&self.re, -&self.im)
    }
}

impl Add for &BigComplex {
    type Output = BigComplex;
    fn add(self, o: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re - &o.re, &self.im - &o.im)
    }
}

/// Panics on exponent overflow; see [`BigComplex::checked_mul`].
impl Mul for &BigComplex {
    type Output = BigComplex;
    fn mul(self, o: &BigComplex) -> BigComplex {
        self.checked_mul(o).unwrap_or_else(|e| panic!("{e}"))
    }
}
