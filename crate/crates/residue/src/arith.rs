use num_integer::Integer;

use crate::ResidueError;

pub(crate) fn mod_i(v: i64, n: u64) -> u64 {
    v.rem_euclid(n as i64) as u64
}

pub fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    (a as u128 * b as u128 % n as u128) as u64
}

pub fn powmod(mut a: u64, mut k: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    a %= n;
    while k > 0 {
        if k & 1 == 1 {
            acc = mulmod(acc, a, n);
        }
        a = mulmod(a, a, n);
        k >>= 1;
    }
    acc
}

/// Inverse of `a` mod `n` by extended gcd.
pub fn inv_mod(a: i64, n: u64) -> Option<u64> {
    let e = Integer::extended_gcd(&(mod_i(a, n) as i128), &(n as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(n as i128) as u64)
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: i64, p: u64) -> i64 {
    match powmod(mod_i(a, p), (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        let mut e = 0;
        while n % q == 0 {
            n /= q;
            e += 1;
        }
        if e > 0 {
            out.push((q, e));
        }
        q += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Smallest nonnegative `x` with `x^2 ≡ a mod p`.
pub fn sqrt_mod(a: i64, p: u64) -> Result<u64, ResidueError> {
    let a = mod_i(a, p);
    (0..p)
        .find(|&x| mulmod(x, x, p) == a)
        .ok_or_else(|| ResidueError::Input(format!("{a} is not a square mod {p}")))
}

/// Smallest generator of `(Z/p)^×`.
pub fn primitive_root(p: u64) -> Result<u64, ResidueError> {
    if p < 3 || !rcf_fields::is_prime(p) {
        return Err(ResidueError::Input(format!("{p} is not an odd prime")));
    }
    let qs: Vec<u64> = factorize(p - 1).into_iter().map(|f| f.0).collect();
    (2..p)
        .find(|&g| qs.iter().all(|q| powmod(g, (p - 1) / q, p) != 1))
        .ok_or_else(|| ResidueError::Internal(format!("no primitive root mod {p}")))
}

/// Multiplicative order of `a` mod `n`.
pub fn order_mod(a: u64, n: u64) -> u64 {
    let mut k = 1;
    let mut x = a % n;
    while x != 1 % n {
        x = mulmod(x, a, n);
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(sqrt_mod(-1, 37).unwrap(), 6);
        assert_eq!(sqrt_mod(4, 101).unwrap(), 2);
        assert!(sqrt_mod(2, 5).is_err());
        assert_eq!(primitive_root(5).unwrap(), 2);
        assert_eq!(primitive_root(37).unwrap(), 2);
        assert_eq!(primitive_root(41).unwrap(), 6);
        assert_eq!(inv_mod(26, 37).unwrap() * 26 % 37, 1);
        assert_eq!(legendre(14, 37), -1);
        assert_eq!(factorize(185), vec![(5, 1), (37, 1)]);
    }
}
