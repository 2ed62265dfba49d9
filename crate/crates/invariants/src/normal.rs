use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rcf_numerics::{e_of_rational, BigComplex, BigReal, Bits};

use crate::conjugates::{hilbert_conjugates_at, ConjugateSet};
use crate::spec::{escalate, CertifiedReal, InvariantSpec};
use crate::InvariantsError;

#[derive(Debug, Clone)]
pub struct FrobeniusMargin {
    pub character: usize,
    /// `log2 |Σ_k χ(σ_k^-1) β^(σ_k)|`
    pub log2_abs: f64,
    pub log2_err: f64,
}

impl FrobeniusMargin {
    pub fn margin_bits(&self) -> f64 {
        self.log2_abs - self.log2_err
    }
}

#[derive(Debug, Clone)]
pub struct NormalBasisResult {
    pub conjugates: ConjugateSet,
    /// `S(i, j)`, indexed `[i][j]`.
    pub s: Vec<Vec<BigComplex>>,
    pub n: Vec<Vec<BigInt>>,
    pub m: Vec<Vec<BigInt>>,
    /// `Σ_i 1/M(i, j)` for each `j`.
    pub coefficients: Vec<BigReal>,
    pub beta: CertifiedReal,
    pub frobenius: Vec<FrobeniusMargin>,
    /// Worst `log2` distance of an `N(i, j)` enclosure from its integer.
    pub n_residual_exp2: f64,
    pub prec: Bits,
}

/// `M_i = 1 + N_i ∏_{k<i} M_k` with `M_0 = 1`.
pub fn lemma_sequence(n: &[BigInt]) -> Vec<BigInt> {
    let mut prod = BigInt::one();
    let mut out = Vec::with_capacity(n.len());
    for ni in n {
        let mi = BigInt::one() + ni * &prod;
        prod *= &mi;
        out.push(mi);
    }
    out
}

fn coprime(a: &BigInt, b: &BigInt) -> bool {
    if b.is_zero() {
        return a.abs().is_one();
    }
    // one division first: for the sequence above the remainder is 1 outright
    let r = a.mod_floor(b);
    r.is_one() || b.gcd(&r).is_one()
}

/// Checks `M_i ≥ 1 + N_i`, `gcd(M_i, N_i) = 1` and pairwise coprimality,
/// the last as `gcd(M_i, ∏_{j<i} M_j) = 1` for every `i`.
pub fn check_lemma_sequence(n: &[BigInt], m: &[BigInt]) -> Result<(), String> {
    if n.len() != m.len() {
        return Err(format!("{} N values but {} M values", n.len(), m.len()));
    }
    let mut prod = BigInt::one();
    for (i, (ni, mi)) in n.iter().zip(m).enumerate() {
        if ni.is_negative() || !mi.is_positive() {
            return Err(format!("cell {i}: N must be nonnegative and M positive"));
        }
        if *mi < BigInt::one() + ni {
            return Err(format!("cell {i}: M < 1 + N"));
        }
        if !coprime(mi, ni) {
            return Err(format!("cell {i}: gcd(M, N) ≠ 1"));
        }
        if !coprime(mi, &prod) {
            return Err(format!("cell {i}: M shares a factor with an earlier M"));
        }
        prod *= mi;
    }
    Ok(())
}

fn totient_units(d: u64) -> Vec<u64> {
    (1..d).filter(|a| a.gcd(&d) == 1).collect()
}

fn pow2(e: f64, w: Bits) -> BigReal {
    BigReal::one(w).mul_pow2(e.ceil() as i64)
}

/// Normal basis of `(K3)_(p)` over `K3` from `γ_0` when `h_I = h_3 = 1`.
pub fn normal_basis_at(spec: &InvariantSpec, prec: Bits) -> Result<NormalBasisResult, InvariantsError> {
    let p = spec.p;
    if spec.level != 1 || spec.mu != 0 {
        return Err(InvariantsError::Hypothesis(format!("needs N = 1 and μ = 0, got N = {}, μ = {}", spec.level, spec.mu)));
    }
    if p % 4 != 1 {
        return Err(InvariantsError::Hypothesis(format!("p = {p} is not 1 mod 4")));
    }
    if spec.h_field() != 1 {
        return Err(InvariantsError::OutOfScope(format!("h_I = {} > 1", spec.h_field())));
    }
    if spec.tower.h3 != 1 {
        return Err(InvariantsError::OutOfScope(format!("h3 = {} > 1 needs the Hilbert class field of K3", spec.tower.h3)));
    }
    let conjugates = hilbert_conjugates_at(spec, prec)?;
    let d = (p - 1) as usize;
    let w = prec + 32;
    let gam: Vec<BigReal> = conjugates.values.iter().map(|v| v.value.round(w)).collect();
    let delta = conjugates.values.iter().map(|v| v.rel_err_exp2).max().unwrap_or(0).max(8 - w as i64) as f64;
    let zeta = (0..d).map(|m| e_of_rational(m as i128, d as i128, &BigReal::zero(w), w)).collect::<Result<Vec<_>, _>>()?;
    let mut pw = vec![vec![BigReal::one(w); d]; d];
    for k in 0..d {
        for j in 1..d {
            pw[k][j] = &pw[k][j - 1] * &gam[k];
        }
    }
    // log2 Σ_k |γ_k|^j, the scale of the absolute error of any character sum
    let scale: Vec<f64> = (0..d)
        .map(|j| {
            let mut t = BigReal::zero(64);
            for row in &pw {
                t = &t + &row[j].abs().round(64);
            }
            t.log2_abs()
        })
        .collect();
    let sum_err = |j: usize| if j == 0 { f64::NEG_INFINITY } else { scale[j] + ((j + 3) as f64).log2() + delta };
    let char_sum = |i: usize, j: usize, shift: usize| -> BigComplex {
        if j == 0 {
            let v = if i % d == 0 { d as i64 } else { 0 };
            return BigComplex::from_i64(v, 0, w);
        }
        let mut acc = BigComplex::zero(w);
        for k in 0..d {
            let z = &zeta[(d - (k * i) % d) % d];
            acc = &acc + &z.scale(&pw[(k + shift) % d][j]);
        }
        acc
    };

    let s: Vec<Vec<BigComplex>> = (0..d).map(|i| (0..d).map(|j| char_sum(i, j, 0)).collect()).collect();
    let units = totient_units(d as u64);
    let mut n = vec![vec![BigInt::zero(); d]; d];
    let mut worst = f64::NEG_INFINITY;
    for i in 0..d {
        for j in 0..d {
            if j == 0 {
                if i == 0 {
                    let e = (units.len() * d) as u32;
                    n[i][j] = num_traits::pow(BigInt::from(d), 2 * e as usize);
                }
                continue;
            }
            // enclose |∏_{a, s} Σ_k ζ^(-k i a) γ_{k+s}^j|^2 in [lo, hi]
            let (mut lo, mut hi) = (BigReal::one(w), BigReal::one(w));
            for &a in &units {
                for sh in 0..d {
                    let t = char_sum(i * a as usize, j, sh).abs();
                    let e = pow2(sum_err(j) + 1.0, w);
                    let l = &t - &e;
                    lo = if l.is_negative() { BigReal::zero(w) } else { &lo * &l };
                    hi = &hi * &(&t + &e);
                }
            }
            let (lo, hi) = (&lo * &lo, &hi * &hi);
            let mid = (&lo + &hi).mul_pow2(-1);
            let r = mid.to_bigint_round();
            let rr = BigReal::from_bigint(&r, w);
            let off = (&hi - &rr).abs().log2_abs().max((&rr - &lo).abs().log2_abs());
            worst = worst.max(off);
            if off >= -2.0 {
                return Err(InvariantsError::Uncertified(format!("N({i},{j}) ≈ {} is not certified to an integer", mid.to_sci(12)), prec));
            }
            n[i][j] = r;
        }
    }

    let flat: Vec<BigInt> = n.iter().flatten().cloned().collect();
    let mflat = lemma_sequence(&flat);
    let m: Vec<Vec<BigInt>> = mflat.chunks(d).map(|c| c.to_vec()).collect();

    let coefficients: Vec<BigReal> = (0..d)
        .map(|j| {
            let mut c = BigReal::zero(w);
            for row in &m {
                c = &c + &(&BigReal::one(w) / &BigReal::from_bigint(&row[j], w));
            }
            c
        })
        .collect();

    let mut beta = BigReal::zero(w);
    let mut beta_err = BigReal::zero(64);
    for j in 0..d {
        let term = &coefficients[j] * &pw[0][j];
        beta_err = &beta_err + &term.abs().round(64).mul_pow2(((j + 3) as f64).log2().ceil() as i64 + delta as i64);
        beta = &beta + &term;
    }
    let rel = (beta_err.log2_abs() - beta.log2_abs()).ceil() as i64;
    let beta = CertifiedReal { value: beta.round(prec), rel_err_exp2: rel.max(1 - prec as i64), imag_residual_exp2: f64::NEG_INFINITY, prec };

    let mut frobenius = Vec::with_capacity(d);
    for l in 0..d {
        let mut f = BigComplex::zero(w);
        let mut err = f64::NEG_INFINITY;
        for j in 0..d {
            f = &f + &s[l][j].scale(&coefficients[j]);
            err = log2_add(err, coefficients[j].log2_abs() + sum_err(j));
        }
        let log2_abs = f.log2_abs();
        let log2_err = log2_add(err, log2_abs + 8.0 - w as f64);
        if !(log2_abs > log2_err + 1.0) {
            return Err(InvariantsError::Uncertified(format!("Frobenius sum for χ_{l} is not certified nonzero"), prec));
        }
        frobenius.push(FrobeniusMargin { character: l, log2_abs, log2_err });
    }
    Ok(NormalBasisResult { conjugates, s, n, m, coefficients, beta, frobenius, n_residual_exp2: worst, prec })
}

fn log2_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let hi = a.max(b);
    hi + (1.0 + 2f64.powf(a.min(b) - hi)).log2()
}

pub fn normal_basis(spec: &InvariantSpec) -> Result<NormalBasisResult, InvariantsError> {
    escalate(spec.ladder, |prec| normal_basis_at(spec, prec))
}
