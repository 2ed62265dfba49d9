use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::tower::FieldTower;
use crate::FieldsError;

/// Orders of `ε0` modulo `N` and `Np^μ`.
///
/// `ε0' = sign · ε0^m0 ≡ 1 mod N`, `n0` is the order of `ε0'` mod `Np`,
/// `l0` the order of `ε0` mod `Np`, and
/// `ε0^l0 = 1 + N p^mu0 (alpha0 + beta0 √(d1 d2))` with `p ∤ beta0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitExponents {
    pub m0: u64,
    pub sign: i8,
    pub n0: u64,
    pub l0: u64,
    pub mu0: u32,
    pub alpha0: BigInt,
    pub beta0: BigInt,
}

/// `x + y√delta` modulo `n`. Since `O_K ∩ K3 = Z[√delta]`, congruences
/// mod `n O_K` between elements of `K3` are coordinatewise.
fn mulmod(u: &(BigInt, BigInt), v: &(BigInt, BigInt), delta: i64, n: &BigInt) -> (BigInt, BigInt) {
    let x = (&u.0 * &v.0 + &u.1 * &v.1 * delta).mod_floor(n);
    let y = (&u.0 * &v.1 + &u.1 * &v.0).mod_floor(n);
    (x, y)
}

fn is_const(u: &(BigInt, BigInt), c: i64, n: &BigInt) -> bool {
    u.1.is_zero() && u.0 == BigInt::from(c).mod_floor(n)
}

/// Smallest `k ≥ 1` with `base^k ≡ 1 mod n`.
fn order_mod(base: &(BigInt, BigInt), delta: i64, n: &BigInt, bound: u64) -> Option<u64> {
    let mut acc = base.clone();
    for k in 1..=bound {
        if is_const(&acc, 1, n) {
            return Some(k);
        }
        acc = mulmod(&acc, base, delta, n);
    }
    None
}

pub fn unit_exponents(tower: &FieldTower, n: u64, p: u64) -> Result<UnitExponents, FieldsError> {
    if n == 0 || p < 3 || !is_prime(p) || n.gcd(&p) != 1 {
        return Err(FieldsError::Input(format!("need N ≥ 1 and an odd prime p coprime to N (N = {n}, p = {p})")));
    }
    let delta = tower.d1 * tower.d2;
    let eps = (tower.eps0.x.clone(), tower.eps0.y.clone());
    let nn = BigInt::from(n);
    let np = BigInt::from(n * p);
    // the unit groups involved have order below (Np)^2
    let bound = (n * p) * (n * p);
    let (m0, sign) = if n == 1 {
        (1, 1)
    } else {
        let red = |u: &(BigInt, BigInt)| (u.0.mod_floor(&nn), u.1.mod_floor(&nn));
        let mut acc = red(&eps);
        let mut k = 1u64;
        loop {
            if is_const(&acc, 1, &nn) {
                break (k, 1);
            }
            if is_const(&acc, -1, &nn) {
                break (k, -1);
            }
            k += 1;
            if k > bound {
                return Err(FieldsError::Internal(format!("ε0 has no finite order mod {n}")));
            }
            acc = mulmod(&acc, &eps, delta, &nn);
        }
    };
    let pw = pow_mod(&eps, m0, delta, &np);
    let eps_prime = ((&pw.0 * BigInt::from(sign)).mod_floor(&np), (&pw.1 * BigInt::from(sign)).mod_floor(&np));
    let n0 = order_mod(&eps_prime, delta, &np, bound).ok_or_else(|| FieldsError::Internal("n0 not found".into()))?;
    let eps_np = (eps.0.mod_floor(&np), eps.1.mod_floor(&np));
    let l0 = order_mod(&eps_np, delta, &np, bound).ok_or_else(|| FieldsError::Internal("l0 not found".into()))?;

    let (x, y) = pow_exact(&eps, l0, delta);
    let (mut a, mut b) = ((x - 1u32) / &nn, y / &nn);
    let bp = BigInt::from(p);
    let mut mu0 = 0;
    while a.is_multiple_of(&bp) && b.is_multiple_of(&bp) {
        a /= &bp;
        b /= &bp;
        mu0 += 1;
    }
    debug_assert!(mu0 >= 1 && a.is_multiple_of(&bp));
    Ok(UnitExponents { m0, sign, n0, l0, mu0, alpha0: a, beta0: b })
}

fn pow_mod(u: &(BigInt, BigInt), mut k: u64, delta: i64, n: &BigInt) -> (BigInt, BigInt) {
    let mut acc = (BigInt::one().mod_floor(n), BigInt::zero());
    let mut base = (u.0.mod_floor(n), u.1.mod_floor(n));
    while k > 0 {
        if k & 1 == 1 {
            acc = mulmod(&acc, &base, delta, n);
        }
        base = mulmod(&base, &base, delta, n);
        k >>= 1;
    }
    acc
}

fn pow_exact(u: &(BigInt, BigInt), mut k: u64, delta: i64) -> (BigInt, BigInt) {
    let mul = |s: &(BigInt, BigInt), t: &(BigInt, BigInt)| (&s.0 * &t.0 + &s.1 * &t.1 * delta, &s.0 * &t.1 + &s.1 * &t.0);
    let mut acc = (BigInt::one(), BigInt::zero());
    let mut base = u.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc = mul(&acc, &base);
        }
        k >>= 1;
        if k > 0 {
            base = mul(&base, &base);
        }
    }
    acc
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            return false;
        }
        q += 1;
    }
    true
}
