use std::collections::BTreeSet;

use num_integer::Integer;
use rayon::prelude::*;
use rcf_numerics::{BigComplex, Bits};

use crate::eval::{eval_g12, CmPoint};
use crate::index::{Mat2, SiegelIndex};
use crate::SiegelError;

#[derive(Debug, Clone)]
pub struct OrbitProduct {
    pub value: BigComplex,
    /// `seed · α` for every `α` in the group, sorted; repeats mean a nontrivial stabilizer.
    pub orbit: Vec<SiegelIndex>,
    pub group_order: usize,
}

fn mat_mul(x: &Mat2, y: &Mat2, m: i64) -> Mat2 {
    let mut out = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let s = x[i][0] as i128 * y[0][j] as i128 + x[i][1] as i128 * y[1][j] as i128;
            out[i][j] = s.rem_euclid(m as i128) as i64;
        }
    }
    out
}

/// The subgroup of `GL2(Z/MZ)` generated by `gens`, identity first, the rest sorted.
pub fn matrix_group(gens: &[Mat2], m: u64) -> Result<Vec<Mat2>, SiegelError> {
    let mi = m as i64;
    let red: Vec<Mat2> = gens.iter().map(|g| g.map(|row| row.map(|x| x.rem_euclid(mi)))).collect();
    for (g, r) in gens.iter().zip(&red) {
        let det = (r[0][0] as i128 * r[1][1] as i128 - r[0][1] as i128 * r[1][0] as i128).rem_euclid(mi as i128) as i64;
        if det.gcd(&mi) != 1 {
            return Err(SiegelError::Singular(*g, m));
        }
    }
    let id = [[1 % mi, 0], [0, 1 % mi]];
    let mut seen = BTreeSet::from([id]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in &red {
            let y = mat_mul(&x, g, mi);
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    seen.remove(&id);
    Ok(std::iter::once(id).chain(seen).collect())
}

/// `∏_α g_{seed·α}^(12 M n)(τ)` over the group generated by `gens`.
///
/// Factors are evaluated in parallel and multiplied sequentially in sorted
/// index order, so the result does not depend on the thread schedule.
pub fn orbit_product(seed: &SiegelIndex, gens: &[Mat2], cm: &CmPoint, n: u64, prec: Bits) -> Result<OrbitProduct, SiegelError> {
    let group = matrix_group(gens, seed.m)?;
    let mut orbit = group.iter().map(|g| seed.act_matrix(g)).collect::<Result<Vec<_>, _>>()?;
    orbit.sort();
    let w = prec + 8 + (usize::BITS - orbit.len().leading_zeros()) as usize;
    let factors = orbit.par_iter().map(|v| eval_g12(v, cm, n, w)).collect::<Result<Vec<_>, _>>()?;
    let mut value = BigComplex::one(w);
    for f in &factors {
        value = value.checked_mul(f)?;
    }
    Ok(OrbitProduct { value: value.round(prec), orbit, group_order: group.len() })
}
