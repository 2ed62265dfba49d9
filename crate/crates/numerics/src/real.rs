use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_traits::{ToPrimitive, Zero};

use crate::{Bits, NumericsError, EXP_LIMIT};

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

fn bit_len(v: i64) -> usize {
    (64 - v.unsigned_abs().leading_zeros()) as usize
}

/// Real number `m * 2^e` with `m` zero or `|m|` in `[1/2, 1)`.
#[derive(Clone)]
pub struct BigReal {
    m: BigFloat,
    e: i64,
    prec: Bits,
}

impl BigReal {
    fn wrap(mut m: BigFloat, e: i64, prec: Bits, op: &'static str) -> Result<Self, NumericsError> {
        if m.is_nan() {
            return Err(NumericsError::Domain(op));
        }
        if m.is_inf() {
            return Err(NumericsError::Overflow(op));
        }
        if m.is_zero() {
            return Ok(Self::zero(prec));
        }
        let shift = m.exponent().expect("finite nonzero") as i64;
        m.set_exponent(0);
        let e = e + shift;
        if e.abs() > EXP_LIMIT {
            return Err(NumericsError::Overflow(op));
        }
        Ok(Self { m, e, prec })
    }

    /// Significand scaled to carry the full value; only valid for moderate exponents.
    fn to_float(&self) -> Result<BigFloat, NumericsError> {
        if self.is_zero() {
            return Ok(BigFloat::from_i64(0, self.prec));
        }
        if self.e.abs() > (1 << 30) {
            return Err(NumericsError::Overflow("to_float"));
        }
        let mut f = self.m.clone();
        f.set_exponent(self.e as i32);
        Ok(f)
    }

    pub fn zero(prec: Bits) -> Self {
        Self { m: BigFloat::from_i64(0, prec), e: 0, prec }
    }

    pub fn one(prec: Bits) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: Bits) -> Self {
        Self::wrap(BigFloat::from_i64(v, prec.max(64)), 0, prec, "from_i64").expect("small integer")
    }

    pub fn from_f64(v: f64, prec: Bits) -> Self {
        Self::wrap(BigFloat::from_f64(v, prec.max(64)), 0, prec, "from_f64").expect("finite f64")
    }

    /// Rounds `n` to `prec` bits.
    pub fn from_bigint(n: &BigInt, prec: Bits) -> Self {
        if n.is_zero() {
            return Self::zero(prec);
        }
        let mag = n.magnitude();
        let bits = mag.bits() as i64;
        let keep = (prec + 128) as i64;
        let drop = (bits - keep).max(0);
        let top: BigUint = mag >> (drop as usize);
        let w = prec + 128;
        let mut acc = BigFloat::from_i64(0, w);
        for (i, d) in top.to_u64_digits().iter().enumerate() {
            if *d == 0 {
                continue;
            }
            let mut f = BigFloat::from_u64(*d, w);
            let ex = f.exponent().expect("nonzero") as i64 + 64 * i as i64;
            f.set_exponent(ex as i32);
            acc = acc.add(&f, w, RM);
        }
        let mut r = Self::wrap(acc, drop, prec, "from_bigint").expect("finite");
        if n.sign() == BigSign::Minus {
            r = -r;
        }
        r.round(prec)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: Bits) -> Self {
        let w = prec + 64;
        let a = Self::from_bigint(num, w);
        let b = Self::from_bigint(den, w);
        (&a / &b).round(prec)
    }

    /// Parses `[-]d[.ddd][e[-]k]`.
    pub fn from_decimal_str(s: &str, prec: Bits) -> Result<Self, NumericsError> {
        let bad = || NumericsError::Parse(s.to_string());
        let t = s.trim();
        let (mant, exp) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| bad())?),
            None => (t, 0),
        };
        let (neg, mant) = match mant.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, mant.strip_prefix('+').unwrap_or(mant)),
        };
        let (ip, fp) = match mant.find('.') {
            Some(i) => (&mant[..i], &mant[i + 1..]),
            None => (mant, ""),
        };
        let digits = format!("{ip}{fp}");
        if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let k = exp - fp.len() as i64;
        let w = prec + 64 + bit_len(k);
        let mut v = Self::from_bigint(&n, w);
        let p10 = Self::pow10(k.abs(), w)?;
        v = if k >= 0 { &v * &p10 } else { &v / &p10 };
        if neg {
            v = -v;
        }
        Ok(v.round(prec))
    }

    fn pow10(k: i64, prec: Bits) -> Result<Self, NumericsError> {
        let mut base = Self::from_i64(10, prec);
        let mut acc = Self::one(prec);
        let mut k = k as u64;
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

    pub fn prec(&self) -> Bits {
        self.prec
    }

    /// Same value rounded (or padded) to `prec` bits.
    pub fn round(&self, prec: Bits) -> Self {
        let mut m = self.m.clone();
        m.set_precision(prec.max(64), RM).expect("precision change");
        Self::wrap(m, self.e, prec, "round").expect("rounding keeps the exponent in range")
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.m.is_negative()
    }

    /// Binary exponent `e` with `2^(e-1) <= |x| < 2^e`; `None` for zero.
    pub fn exponent(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.e)
    }

    pub fn abs(&self) -> Self {
        Self { m: self.m.abs(), e: self.e, prec: self.prec }
    }

    /// `x * 2^k`, exact.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let e = self.e + k;
        assert!(e.abs() <= EXP_LIMIT, "binary exponent out of range in mul_pow2");
        Self { m: self.m.clone(), e, prec: self.prec }
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, NumericsError> {
        let p = self.prec.max(o.prec);
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(p));
        }
        Self::wrap(self.m.mul(&o.m, p, RM), self.e + o.e, p, "mul")
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, NumericsError> {
        let p = self.prec.max(o.prec);
        if o.is_zero() {
            return Err(NumericsError::Domain("division by zero"));
        }
        if self.is_zero() {
            return Ok(Self::zero(p));
        }
        Self::wrap(self.m.div(&o.m, p, RM), self.e - o.e, p, "div")
    }

    fn add_impl(&self, o: &Self) -> Self {
        let p = self.prec.max(o.prec);
        if o.is_zero() {
            return self.round_if(p);
        }
        if self.is_zero() {
            return o.round_if(p);
        }
        let (a, b) = if self.e >= o.e { (self, o) } else { (o, self) };
        let d = a.e - b.e;
        if d > p as i64 + 64 {
            return a.round_if(p);
        }
        let mut bm = b.m.clone();
        bm.set_exponent(-(d as i32));
        Self::wrap(a.m.add(&bm, p, RM), a.e, p, "add").expect("sum stays in range")
    }

    fn round_if(&self, p: Bits) -> Self {
        if p == self.prec {
            self.clone()
        } else {
            self.round(p)
        }
    }

    pub fn sqrt(&self) -> Result<Self, NumericsError> {
        if self.is_negative() {
            return Err(NumericsError::Domain("sqrt"));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let mut m = self.m.clone();
        let mut e = self.e;
        if e.rem_euclid(2) == 1 {
            m.set_exponent(1);
            e -= 1;
        }
        Self::wrap(m.sqrt(self.prec, RM), e / 2, self.prec, "sqrt")
    }

    pub fn pi(prec: Bits) -> Self {
        let f = with_consts(|cc| cc.pi(prec.max(64), RM));
        Self::wrap(f, 0, prec, "pi").expect("pi")
    }

    pub fn ln2(prec: Bits) -> Self {
        let f = with_consts(|cc| cc.ln_2(prec.max(64), RM));
        Self::wrap(f, 0, prec, "ln2").expect("ln2")
    }

    /// Natural logarithm of a positive value.
    pub fn ln(&self) -> Result<Self, NumericsError> {
        if self.is_zero() || self.is_negative() {
            return Err(NumericsError::Domain("ln"));
        }
        let p = self.prec;
        let w = p + 64 + bit_len(self.e);
        let lm = with_consts(|cc| self.m.ln(w, RM, cc));
        let lm = Self::wrap(lm, 0, w, "ln")?;
        let tail = &Self::from_i64(self.e, w) * &Self::ln2(w);
        Ok((&lm + &tail).round(p))
    }

    /// `e^x`; fails when the result exponent leaves the supported range.
    pub fn exp(&self) -> Result<Self, NumericsError> {
        let p = self.prec;
        if self.is_zero() {
            return Ok(Self::one(p));
        }
        if self.e > 62 {
            return Err(NumericsError::Overflow("exp"));
        }
        let w = p + 64 + self.e.max(0) as usize;
        let x = self.round(w).to_float()?;
        let ln2 = with_consts(|cc| cc.ln_2(w, RM));
        let k = x.div(&ln2, w, RM).round(0, RM);
        let k = Self::wrap(k, 0, w, "exp")?.to_bigint_round().to_i64().ok_or(NumericsError::Overflow("exp"))?;
        if k.abs() > EXP_LIMIT {
            return Err(NumericsError::Overflow("exp"));
        }
        let r = x.sub(&BigFloat::from_i64(k, w).mul(&ln2, w, RM), w, RM);
        let er = with_consts(|cc| r.exp(p + 64, RM, cc));
        Ok(Self::wrap(er, k, p + 64, "exp")?.round(p))
    }

    /// Reduces modulo `2*pi` and returns `(sin x, cos x)`.
    pub fn sin_cos(&self) -> Result<(Self, Self), NumericsError> {
        let p = self.prec;
        if self.is_zero() {
            return Ok((Self::zero(p), Self::one(p)));
        }
        if self.e > 1 << 20 {
            return Err(NumericsError::Overflow("sin_cos"));
        }
        let w = p + 64 + self.e.max(0) as usize;
        let x = self.round(w).to_float()?;
        let two_pi = {
            let mut t = with_consts(|cc| cc.pi(w, RM));
            let e = t.exponent().expect("pi") + 1;
            t.set_exponent(e);
            t
        };
        let n = x.div(&two_pi, w, RM).round(0, RM);
        let r = x.sub(&n.mul(&two_pi, w, RM), w, RM);
        let (s, c) = with_consts(|cc| (r.sin(p + 32, RM, cc), r.cos(p + 32, RM, cc)));
        Ok((Self::wrap(s, 0, p + 32, "sin")?.round(p), Self::wrap(c, 0, p + 32, "cos")?.round(p)))
    }

    /// Largest integer not above `x`, as a `BigReal`.
    pub fn floor(&self) -> Self {
        if self.is_zero() || self.e >= self.m_bits() as i64 {
            return self.clone();
        }
        if self.e <= 0 {
            return if self.is_negative() { Self::from_i64(-1, self.prec) } else { Self::zero(self.prec) };
        }
        let f = self.to_float().expect("moderate exponent").floor();
        Self::wrap(f, 0, self.prec, "floor").expect("floor")
    }

    /// `x - floor(x)`, in `[0, 1)`.
    pub fn fract(&self) -> Self {
        self - &self.floor()
    }

    fn m_bits(&self) -> usize {
        self.m.mantissa_max_bit_len().unwrap_or(64)
    }

    /// Nearest integer (ties away from zero).
    pub fn to_bigint_round(&self) -> BigInt {
        if self.is_zero() || self.e < 0 {
            return BigInt::zero();
        }
        let (words, _, sign, _, _) = self.m.as_raw_parts().expect("finite");
        let width = 64 * words.len() as i64;
        let mant = BigUint::from_slice(
            &words.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect::<Vec<_>>(),
        );
        let shift = self.e - width;
        let mag = if shift >= 0 {
            mant << (shift as usize)
        } else {
            let s = (-shift) as usize;
            (mant + (BigUint::from(1u8) << (s - 1))) >> s
        };
        let s = if sign == Sign::Neg { BigSign::Minus } else { BigSign::Plus };
        BigInt::from_biguint(s, mag)
    }

    /// Approximate `log2 |x|`; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.e as f64 + self.mantissa_f64().abs().log2()
    }

    fn mantissa_f64(&self) -> f64 {
        let (words, _, sign, _, _) = self.m.as_raw_parts().expect("finite");
        let top = *words.last().expect("nonempty") as f64 / 2f64.powi(64);
        if sign == Sign::Neg {
            -top
        } else {
            top
        }
    }

    /// Nearest `f64`, saturating to 0 or infinity outside the `f64` range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let m = self.mantissa_f64();
        if self.e > 1100 {
            return m.signum() * f64::INFINITY;
        }
        if self.e < -1100 {
            return 0.0;
        }
        let half = (self.e / 2) as i32;
        m * 2f64.powi(half) * 2f64.powi(self.e as i32 - half)
    }

    /// Scientific notation with `digits` significant digits, e.g. `2.1204525e-6180`.
    pub fn to_sci(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let digits = digits.max(1);
        let w = self.prec + 64 + bit_len(self.e);
        let x = self.abs().round(w);
        let mut k = (x.log2_abs() * std::f64::consts::LOG10_2).floor() as i64;
        let scaled = loop {
            let shift = digits as i64 - 1 - k;
            let p = Self::pow10(shift.abs(), w).expect("decimal scale in range");
            let y = if shift >= 0 { &x * &p } else { &x / &p };
            let n = y.to_bigint_round();
            let lo = num_traits::pow(BigInt::from(10), digits - 1);
            let hi = &lo * 10;
            if n < lo {
                k -= 1;
            } else if n >= hi {
                k += 1;
            } else {
                break n;
            }
        };
        let s = scaled.to_string();
        let sign = if self.is_negative() { "-" } else { "" };
        if digits == 1 {
            format!("{sign}{s}e{k}")
        } else {
            format!("{sign}{}.{}e{k}", &s[..1], &s[1..])
        }
    }

    /// `|self - other| / |other|`.
    pub fn rel_diff(&self, other: &Self) -> Self {
        let d = (self - other).abs();
        if other.is_zero() {
            return d;
        }
        &d / &other.abs()
    }
}

impl PartialEq for BigReal {
    fn eq(&self, o: &Self) -> bool {
        self.partial_cmp(o) == Some(Ordering::Equal)
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        let d = self - o;
        Some(if d.is_zero() {
            Ordering::Equal
        } else if d.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        })
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({} @{}b)", self.to_sci(20), self.prec)
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or(((self.prec as f64) * std::f64::consts::LOG10_2) as usize);
        f.write_str(&self.to_sci(d.max(1)))
    }
}

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        -&self
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal { m: BigFloat::neg(&self.m), e: self.e, prec: self.prec }
    }
}

impl Add for &BigReal {
    type Output = BigReal;
    fn add(self, o: &BigReal) -> BigReal {
        self.add_impl(o)
    }
}

impl Sub for &BigReal {
    type Output = BigReal;
    fn sub(self, o: &BigReal) -> BigReal {
        self.add_impl(&-o)
    }
}

/// Panics on exponent overflow; use [`BigReal::checked_mul`] where that can happen.
impl Mul for &BigReal {
    type Output = BigReal;
    fn mul(self, o: &BigReal) -> BigReal {
        self.checked_mul(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

/// Panics on a zero divisor or exponent overflow.
impl Div for &BigReal {
    type Output = BigReal;
    fn div(self, o: &BigReal) -> BigReal {
        self.checked_div(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for BigReal {
            type Output = BigReal;
            fn $f(self, o: BigReal) -> BigReal { (&self).$f(&o) }
        }
        impl $tr<&BigReal> for BigReal {
            type Output = BigReal;
            fn $f(self, o: &BigReal) -> BigReal { (&self).$f(o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_round_trip() {
        for v in [0i64, 1, -1, 7, -123456789, i64::MAX, i64::MIN + 1] {
            let x = BigReal::from_i64(v, 128);
            assert_eq!(x.to_bigint_round(), BigInt::from(v));
        }
        let big: BigInt = "931322574615478515625931322574615478515625".parse().unwrap();
        assert_eq!(BigReal::from_bigint(&big, 256).to_bigint_round(), big);
        assert_eq!(BigReal::from_bigint(&-big.clone(), 256).to_bigint_round(), -big);
    }

    #[test]
    fn rounding_to_nearest_integer() {
        let x = BigReal::from_f64(2.5, 64);
        assert_eq!(x.to_bigint_round(), BigInt::from(3));
        assert_eq!(BigReal::from_f64(-2.4, 64).to_bigint_round(), BigInt::from(-2));
        assert_eq!(BigReal::from_f64(0.49, 64).to_bigint_round(), BigInt::zero());
        assert_eq!(BigReal::from_f64(0.51, 64).to_bigint_round(), BigInt::from(1));
    }

    #[test]
    fn scientific_formatting() {
        let x = BigReal::from_decimal_str("2.1204525e-6180", 256).unwrap();
        assert_eq!(x.to_sci(8), "2.1204525e-6180");
        assert_eq!(BigReal::from_i64(9833, 64).to_sci(3), "9.83e3");
        assert_eq!(BigReal::from_f64(-0.000999999, 64).to_sci(3), "-1.00e-3");
        assert_eq!(BigReal::from_i64(5, 64).to_sci(1), "5e0");
    }

    #[test]
    fn exp_ln_and_huge_range() {
        let p = 256;
        let x = BigReal::from_i64(-30_000_000, p);
        let y = x.exp().unwrap();
        // e^-3e7 = 10^-13028834.3...
        let l = y.log2_abs() * std::f64::consts::LOG10_2;
        assert!((l + 13_028_834.3).abs() < 1.0, "{l}");
        let back = y.ln().unwrap();
        assert!(back.rel_diff(&x).log2_abs() < -240.0);
        assert!(BigReal::from_i64(1i64 << 62, p).exp().is_err());
    }

    #[test]
    fn sin_cos_basic() {
        let p = 192;
        let (s, c) = (&BigReal::pi(p) / &BigReal::from_i64(6, p)).sin_cos().unwrap();
        assert!((&s - &BigReal::from_f64(0.5, p)).abs().log2_abs() < -180.0);
        let three = BigReal::from_i64(3, p).sqrt().unwrap();
        assert!((&(&c + &c) - &three).abs().log2_abs() < -180.0);
    }

    #[test]
    fn floor_and_fract() {
        let p = 128;
        assert_eq!(BigReal::from_f64(-0.25, p).floor(), BigReal::from_i64(-1, p));
        assert_eq!(BigReal::from_f64(7.75, p).fract(), BigReal::from_f64(0.75, p));
        assert_eq!(BigReal::from_f64(-7.75, p).fract(), BigReal::from_f64(0.25, p));
    }
}
