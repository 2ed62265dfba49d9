use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::element::{Biquad, OkElement};
use crate::quadratic::{class_number_imaginary, fundamental_unit, is_squarefree, QuadraticField, Unit};
use crate::FieldsError;

/// `K = Q(√-d1, √-d2)` with its subfields `K1 = Q(√-d1)`, `K2 = Q(√-d2)`, `K3 = Q(√(d1 d2))`.
#[derive(Debug, Clone)]
pub struct FieldTower {
    pub d1: i64,
    pub d2: i64,
    pub k1: QuadraticField,
    pub k2: QuadraticField,
    pub k3: QuadraticField,
    pub eps0: Unit,
    /// Unit index `[O_K^× : O_K1^× O_K2^× O_K3^×]`.
    pub q: u8,
    pub h1: u64,
    pub h2: u64,
    pub h3: u64,
    /// A unit with `η^2 = -ε0`; present exactly when `q = 2`.
    pub eta: Option<OkElement>,
    pub ring: Biquad,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct TowerOptions {
    pub h3: Option<u64>,
    pub q: Option<u8>,
    /// Admit `d1 = 3` or `d2 = 1`.
    pub allow_extra_roots_of_unity: bool,
}

/// Tower data the examples fix: `(d1, d2, h3, Q)`.
const KNOWN: &[(i64, i64, u64, u8)] = &[(15, 26, 2, 1), (7, 2, 1, 2), (31, 2, 1, 2)];

/// Fields with `Q(K) h1 h2 = 2`: `Q = 2` with `h1 = h2 = 1`, and `Q = 1` with `h1 h2 = 2`.
const Q2_FIELDS: &[(i64, i64)] = &[(7, 2), (11, 2), (19, 2), (43, 2), (67, 2), (163, 2)];
const Q1_FIELDS: &[(i64, &[i64])] = &[
    (15, &[2]),
    (35, &[2]),
    (91, &[2]),
    (115, &[2]),
    (403, &[2]),
    (7, &[5, 10, 13]),
    (11, &[6, 13, 58]),
    (19, &[6, 13, 37, 58]),
    (43, &[5, 6, 10, 22, 37, 58]),
    (67, &[5, 6, 10, 13, 22]),
    (163, &[5, 6, 10, 13, 22, 37, 58]),
];

/// Tabulated `Q(K)` for `(d1, d2)`, if listed.
pub fn tabulated_q(d1: i64, d2: i64) -> Option<u8> {
    if let Some(&(.., q)) = KNOWN.iter().find(|t| (t.0, t.1) == (d1, d2)) {
        return Some(q);
    }
    if Q2_FIELDS.contains(&(d1, d2)) {
        return Some(2);
    }
    Q1_FIELDS.iter().any(|(a, bs)| *a == d1 && bs.contains(&d2)).then_some(1)
}

pub fn tabulated_h3(d1: i64, d2: i64) -> Option<u64> {
    KNOWN.iter().find(|t| (t.0, t.1) == (d1, d2)).map(|t| t.2)
}

/// Checks the standing hypotheses and assembles the tower.
///
/// `Q` falls back to the table, then to the unit computation; `h3` falls
/// back to the table only. A supplied `Q` that disagrees with the unit
/// computation is rejected.
pub fn make_tower(d1: i64, d2: i64, opts: TowerOptions) -> Result<FieldTower, FieldsError> {
    let hyp = |m: String| Err(FieldsError::Hypothesis(m));
    if d1 <= 0 || d2 <= 0 || !is_squarefree(d1 as u64) || !is_squarefree(d2 as u64) {
        return hyp(format!("d1 = {d1}, d2 = {d2} must be positive and squarefree"));
    }
    if (-d1).rem_euclid(4) != 1 {
        return hyp(format!("-d1 ≡ 1 mod 4 fails for d1 = {d1}"));
    }
    if (-d2).rem_euclid(4) == 1 {
        return hyp(format!("-d2 ≡ 2, 3 mod 4 fails for d2 = {d2}"));
    }
    if d1.gcd(&d2) != 1 {
        return hyp(format!("gcd(d1, d2) = {} ≠ 1", d1.gcd(&d2)));
    }
    if !opts.allow_extra_roots_of_unity && (d1 == 3 || d2 == 1) {
        return hyp("K1 or K2 is Q(√-3) or Q(√-1); pass the allowance flag to proceed".into());
    }
    let ring = Biquad::new(d1, d2);
    let eps0 = fundamental_unit((d1 * d2) as u64)?;
    if eps0.norm != 1 {
        return hyp(format!("fundamental unit of Q(√{}) has norm -1", d1 * d2));
    }
    let eta = extra_unit(&ring, &eps0);
    let computed_q = if eta.is_some() { 2 } else { 1 };
    let q = opts.q.or(tabulated_q(d1, d2)).unwrap_or(computed_q);
    if q != computed_q {
        return hyp(format!("Q(K) = {q} supplied but the unit group of K gives Q(K) = {computed_q}"));
    }
    let h3 = match opts.h3.or(tabulated_h3(d1, d2)) {
        Some(h) if h > 0 => h,
        Some(_) => return Err(FieldsError::Input("h3 must be positive".into())),
        None => return Err(FieldsError::Input(format!("h3 for Q(√{}) is not tabulated; supply it", d1 * d2))),
    };
    Ok(FieldTower {
        d1,
        d2,
        k1: QuadraticField::imaginary(d1)?,
        k2: QuadraticField::imaginary(d2)?,
        k3: QuadraticField::real(d1 * d2)?,
        eps0,
        q,
        h1: class_number_imaginary(d1 as u64)?,
        h2: class_number_imaginary(d2 as u64)?,
        h3,
        eta,
        ring,
    })
}

/// `(b√-d1 + c√-d2)/2` squaring to `-ε0`, if it exists.
///
/// Writing `P = b^2 d1`, `R = c^2 d2`, the conditions `P + R = 4x` and
/// `PR = 4y^2 d1 d2` force `{P, R} = {2x + 2, 2x - 2}`.
pub fn extra_unit(ring: &Biquad, eps0: &Unit) -> Option<OkElement> {
    for (p, r) in [(&eps0.x * 2 + 2, &eps0.x * 2 - 2), (&eps0.x * 2 - 2, &eps0.x * 2 + 2)] {
        let (Some(b), Some(c)) = (exact_sqrt_quot(&p, ring.d1), exact_sqrt_quot(&r, ring.d2)) else {
            continue;
        };
        if b.is_odd() || c.is_odd() || &b * &c != &eps0.y * 2 {
            continue;
        }
        let eta = OkElement::new(0, b, c, 0).ok()?;
        debug_assert_eq!(ring.mul(&eta, &eta), OkElement::from_whole(-eps0.x.clone(), 0, 0, -eps0.y.clone()));
        return Some(eta);
    }
    None
}

fn exact_sqrt_quot(v: &BigInt, d: i64) -> Option<BigInt> {
    if v.is_negative() || !v.is_multiple_of(&d.into()) {
        return None;
    }
    let q = v / d;
    let r = q.sqrt();
    (&r * &r == q).then_some(r)
}

impl FieldTower {
    /// `h_K = Q h1 h2 h3 / 2`.
    pub fn class_number(&self) -> Result<u64, FieldsError> {
        biquad_class_number(self.q, self.h1, self.h2, self.h3)
    }

    pub fn subfield(&self, i: u8) -> &QuadraticField {
        match i {
            1 => &self.k1,
            2 => &self.k2,
            3 => &self.k3,
            _ => panic!("subfield index {i} not in 1..=3"),
        }
    }

    pub fn d_of(&self, i: u8) -> i64 {
        match i {
            1 => self.d1,
            2 => self.d2,
            _ => panic!("imaginary subfield index {i} not in 1..=2"),
        }
    }

    pub fn eps0_element(&self) -> OkElement {
        OkElement::from_whole(self.eps0.x.clone(), 0, 0, self.eps0.y.clone())
    }

    pub fn eps0_small(&self) -> Option<(i64, i64)> {
        Some((self.eps0.x.to_i64()?, self.eps0.y.to_i64()?))
    }
}

pub fn biquad_class_number(q: u8, h1: u64, h2: u64, h3: u64) -> Result<u64, FieldsError> {
    let twice = q as u64 * h1 * h2 * h3;
    if twice % 2 != 0 {
        return Err(FieldsError::Hypothesis(format!("Q h1 h2 h3 = {twice} is odd, so h_K is not an integer")));
    }
    Ok(twice / 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_towers() {
        let t = make_tower(15, 26, TowerOptions::default()).unwrap();
        assert_eq!((t.eps0.x.clone(), t.eps0.y.clone()), (79.into(), 4.into()));
        assert_eq!((t.q, t.h1, t.h2, t.h3), (1, 2, 6, 2));
        let t = make_tower(7, 2, TowerOptions::default()).unwrap();
        assert_eq!((t.q, t.class_number().unwrap()), (2, 1));
        let t = make_tower(31, 2, TowerOptions::default()).unwrap();
        assert_eq!((t.eps0.x.clone(), t.eps0.y.clone()), (63.into(), 8.into()));
        assert_eq!((t.h1, t.class_number().unwrap()), (3, 3));
    }

    #[test]
    fn hypothesis_diagnostics() {
        let err = |d1, d2| make_tower(d1, d2, TowerOptions { h3: Some(1), ..Default::default() }).unwrap_err().to_string();
        assert!(err(5, 2).contains("-d1 ≡ 1 mod 4"));
        assert!(err(7, 11).contains("-d2 ≡ 2, 3 mod 4"));
        assert!(err(3, 2).contains("allowance"));
        assert!(err(7, 14).contains("gcd"));
        let bad_q = make_tower(7, 2, TowerOptions { q: Some(1), ..Default::default() });
        assert!(bad_q.unwrap_err().to_string().contains("Q(K)"));
    }

    #[test]
    fn tabulated_q_agrees_with_units() {
        for &(d1, d2) in Q2_FIELDS {
            let t = make_tower(d1, d2, TowerOptions { h3: Some(1), ..Default::default() }).unwrap();
            assert_eq!((t.q, t.h1 * t.h2), (2, 1), "({d1},{d2})");
        }
        for (d1, d2s) in Q1_FIELDS {
            for &d2 in d2s.iter() {
                let t = make_tower(*d1, d2, TowerOptions { h3: Some(1), ..Default::default() }).unwrap();
                assert_eq!((t.q, t.h1 * t.h2), (1, 2), "({d1},{d2})");
            }
        }
    }

    #[test]
    fn class_number_formula() {
        assert_eq!(biquad_class_number(1, 2, 2, 1).unwrap(), 2);
        assert_eq!(biquad_class_number(2, 3, 1, 1).unwrap(), 3);
        assert!(biquad_class_number(1, 1, 1, 1).is_err());
    }
}
