//! Exhaustive counts over `O_K / M O_K` with exact integer arithmetic.
//!
//! These are independent of the closed forms and of the word-sized ring
//! code, and are meant for small `p` only.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rcf_fields::{unit_exponents, Biquad, FieldTower, OkElement, QuadInt};

use crate::lattice::Group;
use crate::ResidueError;

struct Exact<'a> {
    tower: &'a FieldTower,
    ring: Biquad,
    m: BigInt,
}

impl<'a> Exact<'a> {
    fn new(tower: &'a FieldTower, m: u64) -> Self {
        Self { tower, ring: tower.ring, m: BigInt::from(m) }
    }

    fn norm(&self, x: &OkElement, i: u8) -> QuadInt {
        self.ring.norm_to_subfield(x, i).reduce(&self.m)
    }

    fn is_unit(&self, x: &OkElement) -> bool {
        self.ring.norm(x).gcd(&self.m).is_one()
    }

    fn reduce(&self, x: &OkElement) -> OkElement {
        self.ring.reduce_odd(x, &self.m)
    }

    fn mul(&self, x: &OkElement, y: &OkElement) -> OkElement {
        self.reduce(&self.ring.mul(x, y))
    }

    /// Residues of `±u^k` for the generators of `O_K^×` modulo `-1`, as a set.
    fn unit_residues(&self) -> Vec<OkElement> {
        let gen = self.tower.eta.clone().unwrap_or_else(|| self.tower.eps0_element());
        let one = self.reduce(&OkElement::one());
        let g = self.reduce(&gen);
        let mut out = vec![];
        let mut acc = one.clone();
        loop {
            out.push(acc.clone());
            out.push(self.reduce(&self.ring.sub(&OkElement::from_int(0), &acc)));
            acc = self.mul(&acc, &g);
            if acc == one {
                break;
            }
        }
        out
    }

    /// Powers of `x` as elements of `K3`, recorded as `(s, t)` in `s√(d1 d2) + t`.
    fn k3_powers(&self, x: &OkElement) -> HashSet<QuadInt> {
        let mut set = HashSet::new();
        let one = self.reduce(&OkElement::one());
        let mut acc = one.clone();
        loop {
            set.insert(QuadInt::new(&acc.d / 2, &acc.a / 2));
            acc = self.mul(&acc, x);
            if acc == one {
                return set;
            }
        }
    }
}

/// Members of the `W~` groups, `|H/S|` and `|(O_K/p)^×|` for `μ = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeCounts {
    /// Whole coordinates mod `p` of each member.
    pub members: BTreeMap<Group, HashSet<[u64; 4]>>,
    pub hs: u64,
    pub units: u64,
}

impl LatticeCounts {
    pub fn order(&self, g: Group) -> u64 {
        self.members[&g].len() as u64
    }
}

/// Enumerates `(O_K / p O_K)^×` and tests the defining norm conditions.
pub fn lattice_counts(tower: &FieldTower, n: u64, p: u64) -> Result<LatticeCounts, ResidueError> {
    if n % 2 == 0 || n.gcd(&p) != 1 {
        return Err(ResidueError::Input(format!("enumeration needs odd N coprime to p (N = {n})")));
    }
    let ex = Exact::new(tower, p);
    let u = unit_exponents(tower, n, p)?;
    // ε0' modulo p
    let np = Exact::new(tower, n * p);
    let mut eps = np.reduce(&tower.ring.pow(&tower.eps0_element(), u.m0));
    if u.sign < 0 {
        eps = np.reduce(&tower.ring.sub(&OkElement::from_int(0), &eps));
    }
    let mut eps_set = ex.k3_powers(&ex.reduce(&eps));
    if n == 1 {
        let neg: Vec<QuadInt> = eps_set.iter().map(|q| QuadInt::new(-&q.s, -&q.t).reduce(&ex.m)).collect();
        eps_set.extend(neg);
    }
    let pm1 = BigInt::from(p - 1);
    let is_pm1 = |q: &QuadInt| q.s.is_zero() && (q.t.is_one() || (n == 1 && q.t == pm1));
    let is_1 = |q: &QuadInt| q.s.is_zero() && q.t.is_one();

    let groups = [
        Group::Primed12,
        Group::Primed13,
        Group::Primed23,
        Group::Primed3,
        Group::Primed,
        Group::Full12,
        Group::Full13,
        Group::Full23,
        Group::Full1,
        Group::Full2,
        Group::Full3,
        Group::Full,
        Group::Zero,
    ];
    let mut members: BTreeMap<Group, HashSet<[u64; 4]>> = groups.iter().map(|&g| (g, HashSet::new())).collect();
    let mut units = 0;
    for k in 0..p.pow(4) {
        let c = [k / p.pow(3), k / p.pow(2) % p, k / p % p, k % p];
        let x = OkElement::from_whole(c[0], c[1], c[2], c[3]);
        if !ex.is_unit(&x) {
            continue;
        }
        units += 1;
        let nm = [ex.norm(&x, 1), ex.norm(&x, 2), ex.norm(&x, 3)];
        let primed = [is_1(&nm[0]), is_1(&nm[1]), is_1(&nm[2])];
        let full = [is_pm1(&nm[0]), is_pm1(&nm[1]), eps_set.contains(&nm[2])];
        let abs = ex.ring.norm(&x).mod_floor(&ex.m);
        for (g, hit) in [
            (Group::Primed12, primed[0] && primed[1]),
            (Group::Primed13, primed[0] && primed[2]),
            (Group::Primed23, primed[1] && primed[2]),
            (Group::Primed3, primed[2]),
            (Group::Primed, primed.iter().all(|&b| b)),
            (Group::Full12, full[0] && full[1]),
            (Group::Full13, full[0] && full[2]),
            (Group::Full23, full[1] && full[2]),
            (Group::Full1, full[0]),
            (Group::Full2, full[1]),
            (Group::Full3, full[2]),
            (Group::Full, full.iter().all(|&b| b)),
            (Group::Zero, abs.is_one()),
        ] {
            if hit {
                members.get_mut(&g).unwrap().insert(c);
            }
        }
    }
    // image mod p of the units that are ≡ 1 mod N
    let nn = BigInt::from(n);
    let mut image = HashSet::new();
    for v in np.unit_residues() {
        if tower.ring.sub(&v, &OkElement::one()).divisible_by(&nn) {
            image.insert(ex.reduce(&v));
        }
    }
    Ok(LatticeCounts { members, hs: image.len() as u64, units })
}

/// Orders for `μ > 0`: `|S_μ/S_{μ+1}|`, `|W^X/S_{μ+1}|`, `|H/S|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelCounts {
    pub s_quotient: u64,
    /// `|S^{(i)}_μ / S^{(i)}_{μ+1}|` for `i = 1, 2, 3`.
    pub s_sub_quotient: [u64; 3],
    /// Keyed by `"1"`, `"2"`, `"3"`, `"1,2"`, `""` (all three).
    pub w: BTreeMap<String, u64>,
    pub hs: u64,
}

/// Enumerates classes `1 + N p^μ y` modulo `N p^{μ+1}`.
///
/// The quotient sizes are counted over all of `O_K / N p^{μ+1}` when that
/// has at most `limit` classes and otherwise over the parametrization.
pub fn level_counts(tower: &FieldTower, n: u64, p: u64, mu: u32, limit: u64) -> Result<LevelCounts, ResidueError> {
    if mu == 0 || n % 2 == 0 || n.gcd(&p) != 1 {
        return Err(ResidueError::Input("need μ > 0 and odd N coprime to p".into()));
    }
    let u = unit_exponents(tower, n, p)?;
    let pm = n * p.pow(mu);
    let m = pm * p;
    let ex = Exact::new(tower, m);
    let bpm = BigInt::from(pm);
    let one = OkElement::one();
    let in_s = |x: &OkElement| tower.ring.sub(x, &one).divisible_by(&bpm);

    let (s_quotient, s_sub_quotient) = if m.pow(4) <= limit {
        let mut s = 0;
        let mut sub = [0u64; 3];
        for k in 0..m.pow(4) {
            let c = [k / m.pow(3), k / m.pow(2) % m, k / m % m, k % m];
            let x = OkElement::from_whole(c[0], c[1], c[2], c[3]);
            if in_s(&x) {
                s += 1;
                // elements of the subfields: K1 has c = d = 0, K2 has b = d = 0, K3 has b = c = 0
                for (i, hit) in [c[2] == 0 && c[3] == 0, c[1] == 0 && c[3] == 0, c[1] == 0 && c[2] == 0].iter().enumerate() {
                    if *hit {
                        sub[i] += 1;
                    }
                }
            }
        }
        (s, sub)
    } else {
        let mut set = HashSet::new();
        for k in 0..p.pow(4) {
            let c = [k / p.pow(3), k / p.pow(2) % p, k / p % p, k % p];
            let y = OkElement::from_whole(c[0], c[1], c[2], c[3]);
            let x = ex.reduce(&tower.ring.add(&one, &tower.ring.mul(&OkElement::from_int(pm), &y)));
            set.insert(x);
        }
        (set.len() as u64, [p * p; 3])
    };

    let e3 = if mu >= u.mu0 {
        let base = tower.ring.pow(&tower.eps0_element(), u.l0);
        let mut acc = ex.reduce(&base);
        for _ in 0..mu - u.mu0 {
            acc = (0..p).fold(ex.reduce(&one), |a, _| ex.mul(&a, &acc));
        }
        ex.k3_powers(&acc)
    } else {
        HashSet::from([QuadInt::new(0, 1)])
    };
    let is_1 = |q: &QuadInt| q.s.is_zero() && q.t.is_one();
    let mut w: BTreeMap<String, u64> = ["1", "2", "3", "1,2", ""].iter().map(|k| (k.to_string(), 0)).collect();
    for k in 0..p.pow(4) {
        let c = [k / p.pow(3), k / p.pow(2) % p, k / p % p, k % p];
        let y = OkElement::from_whole(c[0], c[1], c[2], c[3]);
        let x = ex.reduce(&tower.ring.add(&one, &tower.ring.mul(&OkElement::from_int(pm), &y)));
        let h = [is_1(&ex.norm(&x, 1)), is_1(&ex.norm(&x, 2)), e3.contains(&ex.norm(&x, 3))];
        for (key, hit) in [("1", h[0]), ("2", h[1]), ("3", h[2]), ("1,2", h[0] && h[1]), ("", h.iter().all(|&b| b))] {
            if hit {
                *w.get_mut(key).unwrap() += 1;
            }
        }
    }
    let mut image = HashSet::new();
    for v in ex.unit_residues() {
        if in_s(&v) {
            image.insert(v);
        }
    }
    Ok(LevelCounts { s_quotient, s_sub_quotient, w, hs: image.len() as u64 })
}
