use num_traits::ToPrimitive;
use rayon::prelude::*;
use rcf_numerics::{BigComplex, Bits};
use rcf_residue::{galois_generators, hilbert_generator, ArtinElement};
use rcf_siegel::{artin_matrix, eval_g12, orbit_product, Mat2, SiegelIndex, EVAL_ERROR_BITS};
use serde::Serialize;

use crate::spec::{escalate, CertifiedReal, InvariantSpec};
use crate::InvariantsError;

/// Extra bits requested from the Siegel layer on top of the caller's precision.
const GUARD: Bits = 8;

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorInfo {
    pub label: String,
    pub order: u64,
    /// `N_{K/K_I}(ω) = sθ + t` reduced mod `N p^(μ+1)`.
    pub norm: (i64, i64),
    pub matrix: Mat2,
}

#[derive(Debug, Clone)]
pub struct NormGenerator {
    pub value: CertifiedReal,
    pub orbit: Vec<SiegelIndex>,
    pub generators: Vec<GeneratorInfo>,
    pub group_order: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SigmaInfo {
    /// The primitive root `C` with `N_{K/Q}(Ω_C) ≡ C mod p`.
    pub primitive_root: u64,
    pub generator: GeneratorInfo,
}

/// `γ_k = γ_0^(σ^k)` for `0 ≤ k ≤ p-2`.
#[derive(Debug, Clone)]
pub struct ConjugateSet {
    pub values: Vec<CertifiedReal>,
    pub orbits: Vec<Vec<SiegelIndex>>,
    pub sigma: SigmaInfo,
    pub generators: Vec<GeneratorInfo>,
    pub prec: Bits,
}

fn info(a: &ArtinElement, spec: &InvariantSpec) -> GeneratorInfo {
    let small = |v: &num_bigint::BigInt| v.to_i64().expect("reduced mod a 31-bit modulus");
    let (s, t) = (small(&a.norm.s), small(&a.norm.t));
    GeneratorInfo { label: a.label.clone(), order: a.order, norm: (s, t), matrix: artin_matrix(s, t, spec.tower.subfield(spec.field)) }
}

fn certify_real(z: &BigComplex, rel_err_exp2: i64, prec: Bits) -> Result<CertifiedReal, InvariantsError> {
    let residual = z.im.log2_abs() - z.log2_abs();
    if z.re.is_zero() || residual >= 32.0 - prec as f64 {
        return Err(InvariantsError::Uncertified(format!("imaginary residual 2^{residual:.1} is not below 2^(32-{prec})"), prec));
    }
    Ok(CertifiedReal { value: z.re.round(prec), rel_err_exp2: rel_err_exp2 + 1, imag_residual_exp2: residual, prec })
}

/// `γ_{μ+1,I}^n = g_(0, 1/(N p^(μ+1)))^(12 N p^(μ+1) n)(θ_I)` at `prec` bits.
pub fn gamma_at(spec: &InvariantSpec, prec: Bits) -> Result<CertifiedReal, InvariantsError> {
    let z = eval_g12(&spec.seed(), &spec.cm_point(), spec.power, prec + GUARD)?;
    certify_real(&z, EVAL_ERROR_BITS - (prec + GUARD) as i64, prec)
}

pub fn gamma(spec: &InvariantSpec) -> Result<CertifiedReal, InvariantsError> {
    escalate(spec.ladder, |prec| gamma_at(spec, prec))
}

fn generators(spec: &InvariantSpec) -> Result<Vec<GeneratorInfo>, InvariantsError> {
    let g = galois_generators(&spec.tower, spec.level, spec.p, spec.mu, spec.field)?;
    debug_assert_eq!(g.modulus, spec.modulus()?);
    Ok(g.generators.iter().map(|a| info(a, spec)).collect())
}

/// The norm of `γ_{μ+1,I}^n` from `K~^I` down to `K~^3`, as a product over the Galois orbit.
pub fn norm_generator_at(spec: &InvariantSpec, prec: Bits) -> Result<NormGenerator, InvariantsError> {
    let gens = generators(spec)?;
    let mats: Vec<Mat2> = gens.iter().map(|g| g.matrix).collect();
    let out = orbit_product(&spec.seed(), &mats, &spec.cm_point(), spec.power, prec + GUARD)?;
    let value = certify_real(&out.value, EVAL_ERROR_BITS - (prec + GUARD) as i64, prec)?;
    Ok(NormGenerator { value, orbit: out.orbit, generators: gens, group_order: out.group_order })
}

pub fn norm_generator(spec: &InvariantSpec) -> Result<NormGenerator, InvariantsError> {
    escalate(spec.ladder, |prec| norm_generator_at(spec, prec))
}

/// The `p - 1` conjugates of `γ_0` over the Hilbert class field `K_(1)`
/// (over `K_(N)` when `N > 1`).
pub fn hilbert_conjugates_at(spec: &InvariantSpec, prec: Bits) -> Result<ConjugateSet, InvariantsError> {
    if spec.mu != 0 {
        return Err(InvariantsError::OutOfScope("conjugates over the Hilbert class field are built for μ = 0 only".into()));
    }
    let gens = generators(spec)?;
    let mats: Vec<Mat2> = gens.iter().map(|g| g.matrix).collect();
    let (c, omega) = hilbert_generator(&spec.tower, spec.level, spec.p, spec.field)?;
    let sigma = SigmaInfo { primitive_root: c, generator: info(&omega, spec) };
    let mut seeds = vec![spec.seed()];
    for k in 1..spec.p - 1 {
        seeds.push(seeds[k as usize - 1].act_matrix(&sigma.generator.matrix)?);
    }
    let cm = spec.cm_point();
    let w = prec + GUARD;
    let products = seeds.par_iter().map(|s| orbit_product(s, &mats, &cm, spec.power, w)).collect::<Result<Vec<_>, _>>()?;
    let mut values = Vec::with_capacity(products.len());
    let mut orbits = Vec::with_capacity(products.len());
    for out in products {
        values.push(certify_real(&out.value, EVAL_ERROR_BITS - w as i64, prec)?);
        orbits.push(out.orbit);
    }
    check_distinct(&values, prec)?;
    Ok(ConjugateSet { values, orbits, sigma, generators: gens, prec })
}

pub fn hilbert_conjugates(spec: &InvariantSpec) -> Result<ConjugateSet, InvariantsError> {
    escalate(spec.ladder, |prec| hilbert_conjugates_at(spec, prec))
}

/// Pairwise distinctness beyond the combined error bounds.
fn check_distinct(values: &[CertifiedReal], prec: Bits) -> Result<(), InvariantsError> {
    for (i, a) in values.iter().enumerate() {
        for (j, b) in values.iter().enumerate().skip(i + 1) {
            let gap = (&a.value - &b.value).abs().log2_abs();
            let err = (a.value.log2_abs() + a.rel_err_exp2 as f64).max(b.value.log2_abs() + b.rel_err_exp2 as f64) + 1.0;
            if gap <= err {
                return Err(InvariantsError::Uncertified(format!("γ_{i} and γ_{j} agree within their error bounds"), prec));
            }
        }
    }
    Ok(())
}
