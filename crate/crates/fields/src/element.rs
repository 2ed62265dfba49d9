use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::quadratic::QuadInt;
use crate::FieldsError;

/// `(a + b√-d1 + c√-d2 + d√(d1 d2)) / 2` with `a ≡ b` and `c ≡ d` mod 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OkElement {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl OkElement {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self, FieldsError> {
        let x = Self { a: a.into(), b: b.into(), c: c.into(), d: d.into() };
        if (&x.a - &x.b).is_odd() || (&x.c - &x.d).is_odd() {
            return Err(FieldsError::Input(format!("half-coordinates {x:?} violate a ≡ b, c ≡ d mod 2")));
        }
        Ok(x)
    }

    /// `a + b√-d1 + c√-d2 + d√(d1 d2)` with integer coefficients.
    pub fn from_whole(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        let two = |v: BigInt| v * 2;
        Self { a: two(a.into()), b: two(b.into()), c: two(c.into()), d: two(d.into()) }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::from_whole(n, 0, 0, 0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn coords(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Coordinates `(A, B, C, D)` over the integral basis `{1, θ1, θ2, θ1θ2}`.
    pub fn to_basis(&self) -> [BigInt; 4] {
        [(&self.a + &self.b) / 2, self.b.clone(), (&self.c - &self.d) / 2, -&self.d]
    }

    pub fn from_basis(v: &[BigInt; 4]) -> Self {
        let [aa, bb, cc, dd] = v;
        Self { a: aa * 2 - bb, b: bb.clone(), c: cc * 2 - dd, d: -dd }
    }

    /// Is this element in `n O_K`?
    pub fn divisible_by(&self, n: &BigInt) -> bool {
        if self.coords().iter().any(|v| !v.is_multiple_of(n)) {
            return false;
        }
        let q = |v: &BigInt| v / n;
        (q(&self.a) - q(&self.b)).is_even() && (q(&self.c) - q(&self.d)).is_even()
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|v| v.is_zero())
    }
}

/// Arithmetic in `O_K` for `K = Q(√-d1, √-d2)` with `-d1 ≡ 1` and `-d2 ≡ 2, 3 mod 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Biquad {
    pub d1: i64,
    pub d2: i64,
}

impl Biquad {
    pub fn new(d1: i64, d2: i64) -> Self {
        Self { d1, d2 }
    }

    pub fn delta(&self) -> i64 {
        self.d1 * self.d2
    }

    pub fn add(&self, x: &OkElement, y: &OkElement) -> OkElement {
        OkElement { a: &x.a + &y.a, b: &x.b + &y.b, c: &x.c + &y.c, d: &x.d + &y.d }
    }

    pub fn sub(&self, x: &OkElement, y: &OkElement) -> OkElement {
        OkElement { a: &x.a - &y.a, b: &x.b - &y.b, c: &x.c - &y.c, d: &x.d - &y.d }
    }

    pub fn mul(&self, x: &OkElement, y: &OkElement) -> OkElement {
        let (d1, d2) = (self.d1, self.d2);
        let (a, b, c, d) = (&x.a, &x.b, &x.c, &x.d);
        let (e, f, g, h) = (&y.a, &y.b, &y.c, &y.d);
        // u = √-d1, v = √-d2, w = √(d1 d2): u^2 = -d1, v^2 = -d2, w^2 = d1 d2, uv = -w, uw = d1 v, vw = d2 u
        let r1 = a * e - b * f * d1 - c * g * d2 + d * h * (d1 * d2);
        let ru = a * f + b * e + (c * h + d * g) * d2;
        let rv = a * g + c * e + (b * h + d * f) * d1;
        let rw = a * h + d * e - (b * g + c * f);
        // product of halves is a quarter; bring back to halves
        let half = |v: BigInt| {
            debug_assert!(v.is_even());
            v / 2
        };
        OkElement { a: half(r1), b: half(ru), c: half(rv), d: half(rw) }
    }

    pub fn pow(&self, x: &OkElement, mut k: u64) -> OkElement {
        let mut acc = OkElement::one();
        let mut base = x.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// The nontrivial automorphism of `K` fixing `K_i`.
    ///
    /// `σ1` fixes `√-d1`, `σ2` fixes `√-d2`, `σ3` fixes `√(d1 d2)`.
    pub fn sigma(&self, x: &OkElement, i: u8) -> OkElement {
        let n = |v: &BigInt| -v;
        let x = x.clone();
        match i {
            1 => OkElement { c: n(&x.c), d: n(&x.d), ..x },
            2 => OkElement { b: n(&x.b), d: n(&x.d), ..x },
            3 => OkElement { b: n(&x.b), c: n(&x.c), ..x },
            _ => panic!("subfield index {i} not in 1..=3"),
        }
    }

    /// Complex conjugation, i.e. `σ3`.
    pub fn conj(&self, x: &OkElement) -> OkElement {
        self.sigma(x, 3)
    }

    /// `N_{K/K_i}(x)` as `sθ_i + t`, with `θ3 = √(d1 d2)`.
    pub fn norm_to_subfield(&self, x: &OkElement, i: u8) -> QuadInt {
        let (d1, d2) = (self.d1, self.d2);
        let dd = d1 * d2;
        let (a, b, c, d) = (&x.a, &x.b, &x.c, &x.d);
        let sq = |v: &BigInt| v * v;
        match i {
            1 => {
                // N = (x4 + 2 y2 √-d1)/4 and √-d1 = 2θ1 + 1
                let x4 = sq(a) - sq(b) * d1 + sq(c) * d2 - sq(d) * dd;
                let y2 = a * b - c * d * d2;
                let t = (&x4 + &y2 * 2) / 4;
                QuadInt { s: y2, t }
            }
            2 => {
                let x4 = sq(a) + sq(b) * d1 - sq(c) * d2 - sq(d) * dd;
                let y2 = a * c - b * d * d1;
                QuadInt { s: y2 / 2, t: x4 / 4 }
            }
            3 => {
                let x4 = sq(a) + sq(b) * d1 + sq(c) * d2 + sq(d) * dd;
                let y2 = a * d + b * c;
                QuadInt { s: y2 / 2, t: x4 / 4 }
            }
            _ => panic!("subfield index {i} not in 1..=3"),
        }
    }

    /// `N_{K/Q}(x)`.
    pub fn norm(&self, x: &OkElement) -> BigInt {
        let n3 = self.norm_to_subfield(x, 3);
        &n3.t * &n3.t - &n3.s * &n3.s * self.delta()
    }

    /// Embed `sθ_i + t` of the subfield `K_i` into `O_K`.
    pub fn embed(&self, z: &QuadInt, i: u8) -> OkElement {
        let (s, t) = (&z.s, &z.t);
        match i {
            // θ1 = (-1 + √-d1)/2
            1 => OkElement { a: t * 2 - s, b: s.clone(), c: BigInt::zero(), d: BigInt::zero() },
            2 => OkElement { a: t * 2, b: BigInt::zero(), c: s * 2, d: BigInt::zero() },
            3 => OkElement { a: t * 2, b: BigInt::zero(), c: BigInt::zero(), d: s * 2 },
            _ => panic!("subfield index {i} not in 1..=3"),
        }
    }

    /// Reduce modulo `n O_K` for odd `n` to the representative with whole coordinates in `[0, n)`.
    ///
    /// For odd `n`, 2 is invertible, so every class has a representative
    /// `a + b√-d1 + c√-d2 + d√(d1 d2)` with integer `a, b, c, d`.
    pub fn reduce_odd(&self, x: &OkElement, n: &BigInt) -> OkElement {
        debug_assert!(n.is_odd());
        let inv2 = (n + BigInt::one()) / 2;
        let r = |v: &BigInt| -> BigInt { Integer::mod_floor(&(v * &inv2), n) };
        OkElement::from_whole(r(&x.a), r(&x.b), r(&x.c), r(&x.d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_round_trip() {
        let x = OkElement::new(3, 1, 4, 2).unwrap();
        assert_eq!(OkElement::from_basis(&x.to_basis()), x);
        assert!(OkElement::new(1, 0, 0, 0).is_err());
    }

    #[test]
    fn extra_unit_squares_to_minus_eps() {
        // (7,2): η = √-7 + 2√-2 has η^2 = -(15 + 4√14)
        let k = Biquad::new(7, 2);
        let eta = OkElement::new(0, 2, 4, 0).unwrap();
        assert_eq!(k.mul(&eta, &eta), OkElement::from_whole(-15, 0, 0, -4));
    }

    #[test]
    fn divisibility() {
        let k = Biquad::new(15, 26);
        let x = OkElement::new(5, 15, 10, 0).unwrap();
        assert!(x.divisible_by(&5.into()));
        assert!(!x.divisible_by(&3.into()));
        assert!(!k.mul(&x, &OkElement::new(1, 1, 0, 0).unwrap()).divisible_by(&25.into()));
    }
}
