use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rcf_fields::OkElement;

use crate::arith::{factorize, legendre, mod_i};
use crate::ResidueError;

/// Class of `a + b√-d1 + c√-d2 + d√(d1 d2)` modulo `n O_K`, coordinates in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RElt(pub [u64; 4]);

/// `O_K / n O_K` for odd `n`, where 2 is invertible and whole coordinates suffice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidueRing {
    pub n: u64,
    pub d1: i64,
    pub d2: i64,
}

impl ResidueRing {
    pub fn new(n: u64, d1: i64, d2: i64) -> Result<Self, ResidueError> {
        if n < 3 || n % 2 == 0 {
            return Err(ResidueError::Input(format!("modulus {n} must be odd and at least 3")));
        }
        if n > (1 << 31) {
            return Err(ResidueError::Input(format!("modulus {n} too large for word arithmetic")));
        }
        Ok(Self { n, d1, d2 })
    }

    pub fn elt(&self, a: i64, b: i64, c: i64, d: i64) -> RElt {
        RElt([a, b, c, d].map(|v| mod_i(v, self.n)))
    }

    pub fn one(&self) -> RElt {
        self.elt(1, 0, 0, 0)
    }

    pub fn scalar(&self, k: i64) -> RElt {
        self.elt(k, 0, 0, 0)
    }

    fn k(&self, v: i64) -> u64 {
        mod_i(v, self.n)
    }

    pub fn add(&self, x: RElt, y: RElt) -> RElt {
        let n = self.n;
        RElt([0, 1, 2, 3].map(|i| (x.0[i] + y.0[i]) % n))
    }

    pub fn neg(&self, x: RElt) -> RElt {
        let n = self.n;
        RElt(x.0.map(|v| (n - v) % n))
    }

    pub fn mul(&self, x: RElt, y: RElt) -> RElt {
        let n = self.n as u128;
        let (d1, d2) = (self.k(self.d1) as u128, self.k(self.d2) as u128);
        let dd = d1 * d2 % n;
        let [a, b, c, d] = x.0.map(|v| v as u128);
        let [e, f, g, h] = y.0.map(|v| v as u128);
        let sub = |p: u128, q: u128| (p % n + n - q % n) % n;
        // u^2 = -d1, v^2 = -d2, w^2 = d1 d2, uv = -w, uw = d1 v, vw = d2 u
        let r1 = sub(a * e % n + d * h % n * dd, b * f % n * d1 + c * g % n * d2);
        let ru = (a * f + b * e + (c * h + d * g) % n * d2) % n;
        let rv = (a * g + c * e + (b * h + d * f) % n * d1) % n;
        let rw = sub(a * h + d * e, b * g + c * f);
        RElt([r1, ru, rv, rw].map(|v| v as u64))
    }

    pub fn pow(&self, x: RElt, mut k: u64) -> RElt {
        let mut acc = self.one();
        let mut base = x;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Multiplicative order of a unit.
    pub fn order(&self, x: RElt) -> u64 {
        let one = self.one();
        let mut acc = x;
        let mut k = 1;
        while acc != one {
            acc = self.mul(acc, x);
            k += 1;
        }
        k
    }

    /// `N_{K/K_i}(x) = x σ_i(x)` as `(s, t)` meaning `s √r_i + t` with
    /// `r_1 = -d1`, `r_2 = -d2`, `r_3 = d1 d2`.
    pub fn norm_to(&self, x: RElt, i: u8) -> (u64, u64) {
        let n = self.n as u128;
        let (d1, d2) = (self.k(self.d1) as u128, self.k(self.d2) as u128);
        let dd = d1 * d2 % n;
        let [a, b, c, d] = x.0.map(|v| v as u128);
        let sq = |v: u128| v * v % n;
        let neg = |v: u128| (n - v % n) % n;
        let (t, s) = match i {
            1 => (sq(a) + neg(sq(b) * d1) + sq(c) * d2 + neg(sq(d) * dd), a * b + neg(c * d % n * d2)),
            2 => (sq(a) + sq(b) * d1 + neg(sq(c) * d2) + neg(sq(d) * dd), a * c + neg(b * d % n * d1)),
            3 => (sq(a) + sq(b) * d1 + sq(c) * d2 + sq(d) * dd, a * d + b * c),
            _ => panic!("subfield index {i} not in 1..=3"),
        };
        ((2 * s % n) as u64, (t % n) as u64)
    }

    /// `N_{K/Q}(x)` mod `n`.
    pub fn norm(&self, x: RElt) -> u64 {
        let n = self.n as u128;
        let (s, t) = self.norm_to(x, 3);
        let dd = self.k(self.d1 * self.d2) as u128;
        let (s, t) = (s as u128, t as u128);
        ((t * t % n + n - s * s % n * dd % n) % n) as u64
    }

    pub fn is_unit(&self, x: RElt) -> bool {
        self.norm(x).gcd(&self.n) == 1
    }

    pub fn from_ok(&self, x: &OkElement) -> RElt {
        let n = BigInt::from(self.n);
        let inv2 = (&n + 1u32) / 2u32;
        RElt(x.coords().map(|v| (v * &inv2).mod_floor(&n).to_u64().unwrap()))
    }

    pub fn to_ok(&self, x: RElt) -> OkElement {
        let [a, b, c, d] = x.0;
        OkElement::from_whole(a, b, c, d)
    }

    /// Every class of `O_K / n O_K`, lexicographically.
    pub fn elements(&self) -> impl Iterator<Item = RElt> + '_ {
        let n = self.n;
        (0..n.pow(4)).map(move |k| RElt([k / (n * n * n), k / (n * n) % n, k / n % n, k % n]))
    }

    pub fn units(&self) -> impl Iterator<Item = RElt> + '_ {
        self.elements().filter(|x| self.is_unit(*x))
    }
}

/// Which order: the biquadratic `O_K` or `Z[θ]` of a quadratic field with `θ^2 + Bθ + C = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Biquad { d1: i64, d2: i64 },
    Quadratic { radicand: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitGroupOrder {
    pub order: u64,
    /// Exhaustive count, computed when `n ≤ 50`.
    pub enumerated: Option<u64>,
}

/// `|(O / n O)^×|` from the splitting of each prime dividing `n`.
pub fn unit_group_order(order: Order, n: u64) -> Result<UnitGroupOrder, ResidueError> {
    if n < 2 || n % 2 == 0 {
        return Err(ResidueError::Input(format!("modulus {n} must be odd")));
    }
    let mut total = 1u64;
    for (q, e) in factorize(n) {
        // (f, g) per prime of O above q, from the splitting data
        let (deg, fs): (u32, Vec<u32>) = match order {
            Order::Quadratic { radicand } => (2, quadratic_residue_degrees(radicand, q)),
            Order::Biquad { d1, d2 } => {
                let l1 = legendre(-d1, q);
                let l2 = legendre(-d2, q);
                let l3 = legendre(d1 * d2, q);
                let fs = if l1 == 0 {
                    quadratic_residue_degrees(-d2, q)
                } else if l2 == 0 {
                    quadratic_residue_degrees(-d1, q)
                } else if l1 == 1 && l2 == 1 {
                    vec![1, 1, 1, 1]
                } else {
                    debug_assert!(l1 * l2 == l3);
                    vec![2, 2]
                };
                (4, fs)
            }
        };
        let norm_q = q.pow(deg * e);
        // N(q^e O) · Π (1 - 1/NP)
        let mut part = norm_q;
        for f in fs {
            part = part / q.pow(f) * (q.pow(f) - 1);
        }
        total *= part;
    }
    let enumerated = (n <= 50).then(|| count_units(order, n));
    if let Some(c) = enumerated {
        if c != total {
            return Err(ResidueError::Internal(format!("unit group of order {total} by formula but {c} by enumeration (n = {n})")));
        }
    }
    Ok(UnitGroupOrder { order: total, enumerated })
}

/// Residue degrees of the primes above `q` in `Q(√r)` (with ramified primes of degree 1).
fn quadratic_residue_degrees(r: i64, q: u64) -> Vec<u32> {
    match legendre(r, q) {
        1 => vec![1, 1],
        -1 => vec![2],
        _ => vec![1],
    }
}

fn count_units(order: Order, n: u64) -> u64 {
    match order {
        Order::Biquad { d1, d2 } => {
            let r = ResidueRing { n, d1, d2 };
            r.units().count() as u64
        }
        Order::Quadratic { radicand } => {
            let (b, c) = if radicand.rem_euclid(4) == 1 { (1i64, (1 - radicand) / 4) } else { (0, -radicand) };
            let mut k = 0;
            for s in 0..n as i64 {
                for t in 0..n as i64 {
                    let nm = mod_i(t * t - b * s * t + c * s * s, n);
                    if nm.gcd(&n) == 1 {
                        k += 1;
                    }
                }
            }
            k
        }
    }
}
