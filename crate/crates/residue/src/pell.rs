use crate::arith::{legendre, mod_i, mulmod};
use crate::ring::{Order, ResidueRing};
use crate::ResidueError;

/// The norm-one conic `x^2 - Δ y^2 = 1` over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellGroup {
    pub delta: i64,
    pub p: u64,
    pub order: u64,
    /// Lexicographically first point of full order.
    pub generator: (u64, u64),
}

pub fn pell_add(a: (u64, u64), b: (u64, u64), delta: i64, p: u64) -> (u64, u64) {
    let dl = mod_i(delta, p);
    let x = (mulmod(a.0, b.0, p) + mulmod(mulmod(a.1, b.1, p), dl, p)) % p;
    let y = (mulmod(a.0, b.1, p) + mulmod(a.1, b.0, p)) % p;
    (x, y)
}

fn point_order(pt: (u64, u64), delta: i64, p: u64) -> u64 {
    let mut acc = pt;
    let mut k = 1;
    while acc != (1, 0) {
        acc = pell_add(acc, pt, delta, p);
        k += 1;
    }
    k
}

pub fn pell_count(delta: i64, p: u64) -> Result<PellGroup, ResidueError> {
    if p < 3 || !rcf_fields::is_prime(p) || mod_i(delta, p) == 0 {
        return Err(ResidueError::Input(format!("need an odd prime p not dividing Δ (Δ = {delta}, p = {p})")));
    }
    let dl = mod_i(delta, p);
    let points: Vec<(u64, u64)> = (0..p)
        .flat_map(|x| (0..p).map(move |y| (x, y)))
        .filter(|&(x, y)| (mulmod(x, x, p) + p - mulmod(mulmod(y, y, p), dl, p)) % p == 1)
        .collect();
    let order = points.len() as u64;
    let expected = (p as i64 - legendre(delta, p)) as u64;
    if order != expected {
        return Err(ResidueError::Internal(format!("conic over F_{p} with Δ = {delta} has {order} points, expected {expected}")));
    }
    let generator = points
        .iter()
        .copied()
        .find(|&pt| point_order(pt, delta, p) == order)
        .ok_or_else(|| ResidueError::Internal(format!("conic over F_{p} with Δ = {delta} is not cyclic")))?;
    Ok(PellGroup { delta, p, order, generator })
}

/// Preimages under the norm map onto `(Z/p)^×`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormImage {
    /// `(c, x)`: lexicographically first unit `x` with norm `c`, for `c = 1..p-1`.
    pub preimages: Vec<(u64, Vec<u64>)>,
    pub kernel: u64,
}

/// Surjectivity of the norm `(O/pO)^× → (Z/p)^×`, by enumeration.
pub fn norm_map_image(order: Order, p: u64) -> Result<NormImage, ResidueError> {
    if p < 3 || !rcf_fields::is_prime(p) {
        return Err(ResidueError::Input(format!("{p} is not an odd prime")));
    }
    let mut first: Vec<Option<Vec<u64>>> = vec![None; p as usize];
    let mut kernel = 0;
    let mut record = |nm: u64, coords: Vec<u64>| {
        if nm == 1 {
            kernel += 1;
        }
        if nm != 0 && first[nm as usize].is_none() {
            first[nm as usize] = Some(coords);
        }
    };
    match order {
        Order::Quadratic { radicand } => {
            if mod_i(radicand, p) == 0 {
                return Err(ResidueError::Hypothesis(format!("p = {p} divides the radicand {radicand}")));
            }
            for t in 0..p {
                for s in 0..p {
                    let nm = (mulmod(t, t, p) + p - mulmod(mulmod(s, s, p), mod_i(radicand, p), p)) % p;
                    record(nm, vec![t, s]);
                }
            }
        }
        Order::Biquad { d1, d2 } => {
            if legendre(d1 * d2, p) != -1 {
                return Err(ResidueError::Hypothesis(format!("(d1 d2 / p) = -1 fails for p = {p}")));
            }
            let ring = ResidueRing::new(p, d1, d2)?;
            for x in ring.elements() {
                record(ring.norm(x), x.0.to_vec());
            }
        }
    }
    let mut preimages = Vec::new();
    for c in 1..p {
        match first[c as usize].take() {
            Some(x) => preimages.push((c, x)),
            None => return Err(ResidueError::Hypothesis(format!("norm map mod {p} misses the class {c}"))),
        }
    }
    Ok(NormImage { preimages, kernel })
}
