use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rcf_numerics::BigReal;

use crate::conjugates::{hilbert_conjugates_at, ConjugateSet};
use crate::spec::{escalate, InvariantSpec};
use crate::InvariantsError;

#[derive(Debug, Clone)]
pub struct MinimalPolynomial {
    /// Leading coefficient first.
    pub coeffs: Vec<BigInt>,
    /// `log2` of the worst `|c - round(c)| + error bound` over the coefficients.
    pub rounding_residual_exp2: f64,
    /// `log2 |P(γ_k)|` for each conjugate.
    pub eval_residual_exp2: Vec<f64>,
}

/// `∏ (X - γ_k)` from the real coefficients, rounded to integers.
fn expand(roots: &[BigReal], prec: usize) -> Vec<BigReal> {
    // ascending coefficients
    let mut c = vec![BigReal::one(prec)];
    for r in roots {
        let mut next = vec![BigReal::zero(prec); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] = &next[i + 1] + ci;
            next[i] = &next[i] - &(ci * r);
        }
        c = next;
    }
    c
}

/// Integer minimal polynomial of `γ_0` over `Q` from its conjugates.
///
/// Needs `h_I = 1`, so the conjugates over the Hilbert class field are all
/// the conjugates over `Q`.
pub fn minimal_polynomial_from(set: &ConjugateSet, h_field: u64) -> Result<MinimalPolynomial, InvariantsError> {
    if h_field != 1 {
        return Err(InvariantsError::OutOfScope(format!("h_I = {h_field} > 1 needs the action of the Hilbert class group on γ_k")));
    }
    let prec = set.prec;
    let w = prec + 16;
    let d = set.values.len();
    let roots: Vec<BigReal> = set.values.iter().map(|v| v.value.round(w)).collect();
    let coeffs = expand(&roots, w);
    let abs_roots: Vec<BigReal> = roots.iter().map(|r| -&r.abs().round(64)).collect();
    // |e_r(γ)| ≤ e_r(|γ|), read off ∏ (X + |γ_k|)
    let bounds = expand(&abs_roots, 64);
    let delta = set.values.iter().map(|v| v.rel_err_exp2).max().unwrap_or(0).max(4 - w as i64) as f64;
    let slack = ((d + 1) as f64).log2() + 1.0;

    let mut out = Vec::with_capacity(d + 1);
    let mut worst = f64::NEG_INFINITY;
    for (c, b) in coeffs.iter().zip(&bounds) {
        let n = c.to_bigint_round();
        let resid = (c - &BigReal::from_bigint(&n, w)).abs().log2_abs();
        let err = b.abs().log2_abs() + delta + slack;
        let total = log2_add(resid, err);
        worst = worst.max(total);
        if total >= -2.0 {
            return Err(InvariantsError::Uncertified(format!("coefficient {} is not within 1/4 of an integer", c.to_sci(20)), prec));
        }
        out.push(n);
    }
    out.reverse();

    let max_coeff = out.iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero);
    let max_log = if max_coeff.is_zero() { 0.0 } else { BigReal::from_bigint(&max_coeff, 64).log2_abs() };
    let mut evals = Vec::with_capacity(d);
    for r in &roots {
        let mut acc = BigReal::zero(w);
        for c in &out {
            acc = &(&acc * r) + &BigReal::from_bigint(c, w);
        }
        let got = acc.abs().log2_abs();
        let bound = (d as f64).log2() + max_log + d as f64 * r.log2_abs().max(0.0) + 40.0 - prec as f64;
        if got >= bound {
            return Err(InvariantsError::Uncertified(format!("P(γ) residual 2^{got:.1} exceeds 2^{bound:.1}"), prec));
        }
        evals.push(got);
    }
    Ok(MinimalPolynomial { coeffs: out, rounding_residual_exp2: worst, eval_residual_exp2: evals })
}

fn log2_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let hi = a.max(b);
    hi + (1.0 + 2f64.powf(a.min(b) - hi)).log2()
}

pub fn minimal_polynomial(spec: &InvariantSpec) -> Result<(ConjugateSet, MinimalPolynomial), InvariantsError> {
    if spec.h_field() != 1 {
        return Err(InvariantsError::OutOfScope(format!("h_I = {} > 1 needs the action of the Hilbert class group on γ_k", spec.h_field())));
    }
    escalate(spec.ladder, |prec| {
        let set = hilbert_conjugates_at(spec, prec)?;
        let poly = minimal_polynomial_from(&set, spec.h_field())?;
        Ok((set, poly))
    })
}
