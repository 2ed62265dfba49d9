use num_bigint::BigInt;
use rcf_fields::{unit_exponents, FieldTower, OkElement, QuadInt};

use crate::arith::primitive_root;
use crate::lattice::LatticeContext;
use crate::ring::{RElt, ResidueRing};
use crate::ResidueError;

/// An element `ω ≡ 1 mod N` whose Artin symbol is a Galois generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArtinElement {
    pub label: String,
    /// Whole coordinates of `ω` modulo `p^{μ+1}`.
    pub residue: [u64; 4],
    /// Lift with whole coordinates in `[0, N p^{μ+1})`.
    pub omega: OkElement,
    /// `N_{K/K_I}(ω)` as `sθ_I + t` reduced mod `N p^{μ+1}`.
    pub norm: QuadInt,
    /// Order of the restricted Artin symbol.
    pub order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisGenerators {
    pub field: u8,
    /// `N p^{μ+1}`.
    pub modulus: u64,
    pub generators: Vec<ArtinElement>,
    pub order: u64,
}

/// Coordinatewise CRT: `≡ 1` (first coordinate) or `0` mod `N`, `≡ r` mod `m`.
fn crt_lift(r: [u64; 4], n: u64, m: u64) -> [u64; 4] {
    let mut out = [0; 4];
    for (k, v) in r.iter().enumerate() {
        let want_n = if k == 0 { 1 % n } else { 0 };
        // v + m t ≡ want_n mod N
        let t = (0..n).find(|t| (v + m * t) % n == want_n).expect("gcd(N, p) = 1");
        out[k] = v + m * t;
    }
    out
}

fn artin(tower: &FieldTower, label: &str, residue: [u64; 4], n: u64, m: u64, field: u8, order: u64) -> ArtinElement {
    let lift = crt_lift(residue, n, m);
    let [a, b, c, d] = lift;
    let omega = OkElement::from_whole(a, b, c, d);
    debug_assert!(tower.ring.sub(&omega, &OkElement::one()).divisible_by(&BigInt::from(n)));
    let norm = tower.ring.norm_to_subfield(&omega, field).reduce(&BigInt::from(n * m));
    ArtinElement { label: label.into(), residue, omega, norm, order }
}

/// Generators of `Gal(K~^I / K~^3)` at level `N p^{μ+1}`.
pub fn galois_generators(tower: &FieldTower, n: u64, p: u64, mu: u32, field: u8) -> Result<GaloisGenerators, ResidueError> {
    if field != 1 && field != 2 {
        return Err(ResidueError::Input(format!("I = {field} must be 1 or 2")));
    }
    if mu > 0 {
        return galois_generators_mu(tower, n, p, mu, field);
    }
    let ctx = LatticeContext::new(tower, n, p)?;
    if !ctx.n0_is_maximal() {
        return Err(ResidueError::Hypothesis(format!("n0 = {} is neither (p+1)/2 nor p+1", ctx.n0())));
    }
    let ne1 = n != 1;
    let mut gens = Vec::new();
    let mk = |label: &str, x: RElt, order: u64| artin(tower, label, x.0, n, p, field, order);
    if field == ctx.i0p {
        if ne1 {
            gens.push(mk("D_i0", ctx.dfrak, 2));
        }
        gens.push(mk("Omega_i0'", ctx.omega_i0p, (p + 1) / 2));
    } else {
        gens.push(mk("B", ctx.b, 2));
        gens.push(mk("Omega_i0", ctx.omega_i0, if ne1 { (p - 1) / 2 } else { (p - 1) / 4 }));
    }
    let order = gens.iter().map(|g| g.order).product();
    Ok(GaloisGenerators { field, modulus: n * p, generators: gens, order })
}

fn galois_generators_mu(tower: &FieldTower, n: u64, p: u64, mu: u32, field: u8) -> Result<GaloisGenerators, ResidueError> {
    let u = unit_exponents(tower, n, p)?;
    if mu < u.mu0 {
        return Err(ResidueError::Hypothesis(format!("μ = {mu} is below μ0 = {}", u.mu0)));
    }
    let pm = p.checked_pow(mu).and_then(|v| v.checked_mul(n)).ok_or_else(|| ResidueError::Input("N p^μ overflows".into()))?;
    let m = pm * p;
    // 1 + N p^μ √-d_I is already ≡ 1 mod N
    let (b, c) = if field == 1 { (pm, 0) } else { (0, pm) };
    let omega = OkElement::from_whole(1, b, c, 0);
    let norm = tower.ring.norm_to_subfield(&omega, field).reduce(&BigInt::from(m));
    let mp = m / n;
    let residue = [1, b % mp, c % mp, 0];
    let label = format!("1+{pm}sqrt(-d{field})");
    let gen = ArtinElement { label, residue, omega, norm, order: p };
    Ok(GaloisGenerators { field, modulus: m, generators: vec![gen], order: p })
}

/// `Ω_C ≡ 1 mod N` with `N_{K/Q}(Ω_C) ≡ C mod p` for the smallest primitive root `C`.
///
/// The residue mod `p` is the lexicographically first with that norm.
pub fn hilbert_generator(tower: &FieldTower, n: u64, p: u64, field: u8) -> Result<(u64, ArtinElement), ResidueError> {
    let c = primitive_root(p)?;
    let ring = ResidueRing::new(p, tower.d1, tower.d2)?;
    let x = ring
        .elements()
        .find(|&x| ring.norm(x) == c)
        .ok_or_else(|| ResidueError::Hypothesis(format!("no element of norm {c} mod {p} in {} candidates", p.pow(4))))?;
    Ok((c, artin(tower, "Omega_C", x.0, n, p, field, p - 1)))
}

/// Lift of explicit residue data, for elements fixed elsewhere.
pub fn lift_residue(tower: &FieldTower, residue: [u64; 4], n: u64, p: u64, field: u8, order: u64, label: &str) -> ArtinElement {
    artin(tower, label, residue, n, p, field, order)
}

