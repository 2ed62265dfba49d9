use num_integer::Integer;
use rcf_fields::{is_prime, FieldTower};
use rcf_numerics::{BigReal, Bits};
use rcf_siegel::{CmPoint, SiegelIndex};

use crate::InvariantsError;

pub const LADDER_START: Bits = 512;
pub const LADDER_MAX: Bits = 8192;

/// Precision range for [`escalate`]: start bits and the cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ladder {
    pub start: Bits,
    pub max: Bits,
}

impl Default for Ladder {
    fn default() -> Self {
        Self { start: LADDER_START, max: LADDER_MAX }
    }
}

/// Inputs shared by every invariant: the tower, `N`, `p`, `μ`, the imaginary
/// subfield `I` whose CM point is used, and the exponent multiple `n`.
#[derive(Debug, Clone)]
pub struct InvariantSpec {
    pub tower: FieldTower,
    pub level: u64,
    pub p: u64,
    pub mu: u32,
    pub field: u8,
    pub power: u64,
    pub ladder: Ladder,
}

impl InvariantSpec {
    pub fn new(tower: FieldTower, level: u64, p: u64, mu: u32, field: u8, power: u64) -> Result<Self, InvariantsError> {
        if level == 0 || power == 0 {
            return Err(InvariantsError::Input("N and n must be positive".into()));
        }
        if p < 3 || !is_prime(p) {
            return Err(InvariantsError::Input(format!("p = {p} is not an odd prime")));
        }
        if level.gcd(&p) != 1 {
            return Err(InvariantsError::Hypothesis(format!("gcd(N, p) = gcd({level}, {p}) ≠ 1")));
        }
        if field != 1 && field != 2 {
            return Err(InvariantsError::Input(format!("I = {field} must be 1 or 2")));
        }
        let s = Self { tower, level, p, mu, field, power, ladder: Ladder::default() };
        s.modulus()?;
        Ok(s)
    }

    pub fn with_ladder(mut self, ladder: Ladder) -> Result<Self, InvariantsError> {
        if ladder.start < 64 || ladder.max < ladder.start {
            return Err(InvariantsError::Input(format!("precision range {}..{} bits is empty or below 64", ladder.start, ladder.max)));
        }
        self.ladder = ladder;
        Ok(self)
    }

    /// `N p^(μ+1)`, the denominator of the seed index.
    pub fn modulus(&self) -> Result<u64, InvariantsError> {
        self.p
            .checked_pow(self.mu + 1)
            .and_then(|q| q.checked_mul(self.level))
            .filter(|&m| m < 1 << 31)
            .ok_or_else(|| InvariantsError::Input("N p^(μ+1) must stay below 2^31".into()))
    }

    /// `(0, 1/(N p^(μ+1)))`.
    pub fn seed(&self) -> SiegelIndex {
        SiegelIndex { m: self.modulus().expect("checked in new"), a1: 0, a2: 1 }
    }

    pub fn cm_point(&self) -> CmPoint {
        CmPoint::theta(self.field, self.tower.subfield(self.field)).expect("imaginary subfield")
    }

    /// Class number of `K_I`.
    pub fn h_field(&self) -> u64 {
        if self.field == 1 {
            self.tower.h1
        } else {
            self.tower.h2
        }
    }
}

/// A real number with a proven bound on its relative error.
#[derive(Debug, Clone)]
pub struct CertifiedReal {
    pub value: BigReal,
    /// `|computed - true| ≤ 2^rel_err_exp2 |true|`.
    pub rel_err_exp2: i64,
    /// `log2(|Im| / |value|)` of the complex value before truncation to its real part.
    pub imag_residual_exp2: f64,
    pub prec: Bits,
}

impl CertifiedReal {
    /// Decimal digits justified by the error bound, capped at `cap`.
    pub fn digits(&self, cap: usize) -> usize {
        let d = ((-self.rel_err_exp2 - 1) as f64 * std::f64::consts::LOG10_2).floor();
        (d.max(1.0) as usize).min(cap)
    }

    pub fn to_sci(&self, cap: usize) -> String {
        self.value.to_sci(self.digits(cap))
    }
}

/// Runs `f` at `start`, `2 start`, ... bits up to `ladder.max` until it stops
/// reporting [`InvariantsError::Uncertified`].
pub fn escalate<T>(ladder: Ladder, mut f: impl FnMut(Bits) -> Result<T, InvariantsError>) -> Result<T, InvariantsError> {
    let mut prec = ladder.start.max(64);
    loop {
        match f(prec) {
            Err(InvariantsError::Uncertified(msg, at)) => {
                if prec >= ladder.max {
                    return Err(InvariantsError::Certification(msg, at));
                }
                prec = (prec * 2).min(ladder.max);
            }
            other => return other,
        }
    }
}
