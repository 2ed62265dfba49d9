use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rcf_fields::{unit_exponents, FieldTower, UnitExponents};

use crate::arith::{factorize, inv_mod, legendre, mod_i, sqrt_mod};
use crate::pell::pell_count;
use crate::ring::{RElt, ResidueRing};
use crate::ResidueError;

/// Norm-condition subgroups of `(O_K / p O_K)^×`.
///
/// `Primed*` ask `N_{K/K_i} ≡ 1`; `Full*` ask the `W~` conditions
/// (`±1` allowed for `N = 1`, and powers of `ε0'` on `K3`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    Primed12,
    Primed13,
    Primed23,
    Primed3,
    Primed,
    Full12,
    Full13,
    Full23,
    Full1,
    Full2,
    Full3,
    Full,
    Zero,
}

impl Group {
    fn conditions(self) -> (bool, &'static [u8]) {
        use Group::*;
        match self {
            Primed12 => (true, &[1, 2]),
            Primed13 => (true, &[1, 3]),
            Primed23 => (true, &[2, 3]),
            Primed3 => (true, &[3]),
            Primed => (true, &[1, 2, 3]),
            Full12 => (false, &[1, 2]),
            Full13 => (false, &[1, 3]),
            Full23 => (false, &[2, 3]),
            Full1 => (false, &[1]),
            Full2 => (false, &[2]),
            Full3 => (false, &[3]),
            Full => (false, &[1, 2, 3]),
            Zero => (false, &[]),
        }
    }

    pub fn label(self) -> String {
        let (primed, idx) = self.conditions();
        let mark = if primed { "'" } else { "" };
        match idx.len() {
            0 => "W~^0".into(),
            3 => format!("W~{mark}"),
            _ => format!("W~{mark}^{{{}}}", idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")),
        }
    }

    fn with_3(i: u8, primed: bool) -> Group {
        match (i, primed) {
            (1, true) => Group::Primed13,
            (2, true) => Group::Primed23,
            (1, false) => Group::Full13,
            _ => Group::Full23,
        }
    }

    fn single(i: u8) -> Group {
        if i == 1 {
            Group::Full1
        } else {
            Group::Full2
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub element: RElt,
    /// Multiplicative order in `(O_K / p O_K)^×`.
    pub order: u64,
    /// Index this generator adds over the subgroup generated by the earlier ones.
    pub steps: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupDescriptor {
    pub label: String,
    pub group: Group,
    pub order: u64,
    /// The product of the `steps` is `order`.
    pub generators: Vec<Generator>,
    /// Subgroup the coset representatives are taken over.
    pub base: Option<Group>,
    pub coset_reps: Vec<RElt>,
}

/// The elements modulo `p` the decompositions are written in, for `μ = 0`.
#[derive(Debug, Clone)]
pub struct LatticeContext {
    pub ring: ResidueRing,
    pub n: u64,
    pub p: u64,
    pub q_k: u64,
    pub i0: u8,
    pub i0p: u8,
    pub units: UnitExponents,
    /// `A^2 ≡ -1`.
    pub a: u64,
    /// `D_{i0}^2 ≡ -d_{i0}`, the smaller root.
    pub d_i0: u64,
    pub eps_prime: RElt,
    /// `D_{i0}^{-1} √-d_{i0}`.
    pub dfrak: RElt,
    pub b: RElt,
    /// Generator of `W~'^{1,2}`, in `O_{K3}`.
    pub omega0: RElt,
    /// Generator of `W~'^{i0,3}`, in `O_{K_{i0'}}`, of order `p + 1`.
    pub omega_i0p: RElt,
    /// Generator of `W~'^{i0',3}`, in `O_{K_{i0}}`, of order `p - 1`.
    pub omega_i0: RElt,
    /// Generator of the cyclic kernel of `N_{K/K3}`, of order `p^2 - 1`.
    pub omega3: RElt,
    eps_powers: HashSet<(u64, u64)>,
}

impl LatticeContext {
    pub fn new(tower: &FieldTower, n: u64, p: u64) -> Result<Self, ResidueError> {
        let hyp = |m: String| Err(ResidueError::Hypothesis(m));
        if p < 3 || !rcf_fields::is_prime(p) {
            return hyp(format!("p = {p} is not an odd prime"));
        }
        if n == 0 || n.gcd(&p) != 1 {
            return hyp(format!("(N, p) = 1 fails for N = {n}, p = {p}"));
        }
        if n == 2 {
            return hyp("N = 2 is excluded".into());
        }
        if p % 4 != 1 {
            return hyp(format!("p ≡ 1 mod 4 fails for p = {p}"));
        }
        let (d1, d2) = (tower.d1, tower.d2);
        if legendre(d1 * d2, p) != -1 {
            return hyp(format!("(d1 d2 / p) = -1 fails for d1 d2 = {}, p = {p}", d1 * d2));
        }
        let ring = ResidueRing::new(p, d1, d2)?;
        let (i0, i0p) = if legendre(-d1, p) == 1 { (1u8, 2u8) } else { (2, 1) };
        let d_of = |i: u8| if i == 1 { d1 } else { d2 };
        let units = unit_exponents(tower, n, p)?;
        let a = sqrt_mod(-1, p)?;
        let d_i0 = sqrt_mod(-d_of(i0), p)?;
        let dinv = inv_mod(d_i0 as i64, p).expect("D is a unit") as i64;
        let on = |i: u8, v: i64| if i == 1 { ring.elt(0, v, 0, 0) } else { ring.elt(0, 0, v, 0) };
        let dfrak = on(i0, dinv);

        // B ≡ (p+1)/2 · A [(1 + d'^{-1}) √-d' + D^{-1} (1 - d'^{-1}) √(d1 d2)], d' = d_{i0'}
        let dpi = inv_mod(d_of(i0p), p).expect("p ∤ d") as i64;
        let red = |v: i64| mod_i(v, p) as i64;
        let inner = ring.add(on(i0p, red(1 + dpi)), ring.elt(0, 0, 0, red(dinv * red(1 - dpi))));
        let b = ring.mul(ring.scalar(red(((p + 1) / 2) as i64 * a as i64)), inner);

        let eps = ring.elt(big_mod(&tower.eps0.x, p), 0, 0, big_mod(&tower.eps0.y, p));
        let mut eps_prime = ring.pow(eps, units.m0);
        if units.sign < 0 {
            eps_prime = ring.neg(eps_prime);
        }
        let g = pell_count(d1 * d2, p)?.generator;
        let omega0 = ring.elt(g.0 as i64, 0, 0, g.1 as i64);
        let g = pell_count(-d_of(i0p), p)?.generator;
        let omega_i0p = ring.add(ring.scalar(g.0 as i64), on(i0p, g.1 as i64));
        let g = pell_count(-d_of(i0), p)?.generator;
        let omega_i0 = ring.add(ring.scalar(g.0 as i64), on(i0, g.1 as i64));
        let omega3 = kernel_generator(&ring, p)?;

        let mut eps_powers = HashSet::new();
        let mut acc = ring.one();
        while eps_powers.insert((acc.0[3], acc.0[0])) {
            if n == 1 {
                eps_powers.insert(((p - acc.0[3]) % p, (p - acc.0[0]) % p));
            }
            acc = ring.mul(acc, eps_prime);
        }
        let ctx = Self {
            ring,
            n,
            p,
            q_k: tower.q as u64,
            i0,
            i0p,
            units,
            a,
            d_i0,
            eps_prime,
            dfrak,
            b,
            omega0,
            omega_i0p,
            omega_i0,
            omega3,
            eps_powers,
        };
        ctx.check_fixed_elements()?;
        Ok(ctx)
    }

    fn check_fixed_elements(&self) -> Result<(), ResidueError> {
        let r = &self.ring;
        let m1 = (0, self.p - 1);
        let fail = |what: &str| Err(ResidueError::Internal(format!("{what} fails mod {}", self.p)));
        if r.norm_to(self.dfrak, self.i0) != (0, 1) || r.norm_to(self.dfrak, self.i0p) != m1 || r.norm_to(self.dfrak, 3) != m1 {
            return fail("norms of D^{-1}√-d_{i0} ≡ 1, -1, -1");
        }
        if r.norm_to(self.b, self.i0p) != (0, 1) || r.norm_to(self.b, 3) != m1 {
            return fail("norms of B ≡ 1, -1 on K_{i0'}, K3");
        }
        Ok(())
    }

    pub fn n0(&self) -> u64 {
        self.units.n0
    }

    /// `n0 ∈ {(p+1)/2, p+1}`, assumed for everything past `W~^{1,2}` and `W~`.
    pub fn n0_is_maximal(&self) -> bool {
        let p = self.p;
        self.n0() == (p + 1) / 2 || self.n0() == p + 1
    }

    /// `|H / S|` in closed form.
    pub fn hs_order(&self) -> u64 {
        let n0 = self.n0();
        match (self.n == 1, n0 % 2 == 1) {
            (false, _) => n0,
            (true, true) => 2 * n0 * self.q_k,
            (true, false) => n0 * self.q_k,
        }
    }

    /// `[W~^0 : W~^3]`, also `[W~^{i0} : W~^{i0,3}]` and `[W~^{i0'} : W~^{i0',3}]`.
    pub fn split_factor(&self) -> u64 {
        if self.n != 1 && self.n0() == (self.p + 1) / 2 {
            2
        } else {
            1
        }
    }

    pub fn contains(&self, g: Group, x: RElt) -> bool {
        let r = &self.ring;
        if !r.is_unit(x) {
            return false;
        }
        if g == Group::Zero {
            return r.norm(x) == 1;
        }
        let p = self.p;
        let (primed, idx) = g.conditions();
        idx.iter().all(|&i| {
            let v = r.norm_to(x, i);
            if primed {
                v == (0, 1)
            } else if i == 3 {
                self.eps_powers.contains(&v)
            } else {
                v == (0, 1) || (self.n == 1 && v == (0, p - 1))
            }
        })
    }

    /// Closed-form order of each group, where the standing assumptions cover it.
    pub fn expected_order(&self, g: Group) -> Option<u64> {
        use Group::*;
        let p = self.p;
        let n0 = self.n0();
        let ne1 = self.n != 1;
        let q = self.q_k;
        let i03 = Group::with_3(self.i0, false);
        let i0p3 = Group::with_3(self.i0p, false);
        let early = match g {
            Primed12 => Some(p + 1),
            Primed3 => Some(p * p - 1),
            Primed => Some(2),
            Full12 => Some(if ne1 { p + 1 } else { 4 * (p + 1) }),
            Full => Some(match (ne1, n0 % 2 == 1) {
                (true, true) => 2 * n0,
                (true, false) => n0,
                (false, true) => 8 * n0,
                (false, false) => 4 * n0,
            }),
            Zero => Some((p + 1) * (p + 1) * (p - 1)),
            _ if g == Group::with_3(self.i0, true) => Some(p + 1),
            _ if g == Group::with_3(self.i0p, true) => Some(p - 1),
            _ => None,
        };
        if early.is_some() {
            return early;
        }
        if !self.n0_is_maximal() {
            return None;
        }
        let hs = self.hs_order();
        let k_i03 = if ne1 { p + 1 } else { 2 * (p + 1) / q };
        let k_i0p3 = if ne1 { p - 1 } else { 2 * (p - 1) / q };
        let s = self.split_factor();
        match g {
            Full3 => Some((p + 1) * (p + 1) * (p - 1) / s),
            _ if g == i03 => Some(hs * k_i03),
            _ if g == i0p3 => Some(hs * k_i0p3),
            _ if g == Group::single(self.i0) => Some(hs * k_i03 * s),
            _ if g == Group::single(self.i0p) => Some(hs * k_i0p3 * s),
            _ => None,
        }
    }

    fn inverse(&self, x: RElt) -> RElt {
        let r = &self.ring;
        r.pow(x, r.order(x) - 1)
    }

    /// All products `Π g_i^{e_i}` with `0 ≤ e_i < range_i`.
    fn products(&self, terms: &[(RElt, u64)]) -> Vec<RElt> {
        let r = &self.ring;
        let mut out = vec![r.one()];
        for &(g, range) in terms {
            let mut next = Vec::with_capacity(out.len() * range as usize);
            for &x in &out {
                let mut y = x;
                for _ in 0..range {
                    next.push(y);
                    y = r.mul(y, g);
                }
            }
            out = next;
        }
        out
    }

    /// Decomposition of `g` as cosets over a base group, as written out for `μ = 0`.
    fn decomposition(&self, g: Group) -> Option<(Group, Vec<(RElt, u64)>)> {
        use Group::*;
        let p = self.p;
        let n0 = self.n0();
        let ne1 = self.n != 1;
        let half = (p + 1) / 2;
        let (eps, a, df, b) = (self.eps_prime, self.ring.scalar(self.a as i64), self.dfrak, self.b);
        let maximal = self.n0_is_maximal();
        let i03 = Group::with_3(self.i0, false);
        let i0p3 = Group::with_3(self.i0p, false);
        let s = self.split_factor();
        Some(match g {
            Full12 if ne1 => (Primed12, vec![]),
            Full12 => (Primed12, vec![(a, 2), (df, 2)]),
            Full => {
                let range = if n0 % 2 == 1 { n0 } else { n0 / 2 };
                if ne1 {
                    (Primed, vec![(eps, range)])
                } else {
                    (Primed, vec![(eps, range), (a, 2), (df, 2)])
                }
            }
            _ if !maximal => return None,
            _ if g == i03 => {
                let base = Group::with_3(self.i0, true);
                match (ne1, n0 == half) {
                    (true, true) => (base, vec![(eps, half)]),
                    (true, false) => (base, vec![(eps, half), (df, 2)]),
                    (false, _) => (base, vec![(eps, half), (a, 2), (df, 2)]),
                }
            }
            _ if g == i0p3 => {
                let base = Group::with_3(self.i0p, true);
                match (ne1, n0 == half) {
                    (true, true) => (base, vec![(eps, half)]),
                    (true, false) => (base, vec![(eps, half), (b, 2)]),
                    (false, _) => (base, vec![(eps, half), (a, 2), (b, 2)]),
                }
            }
            Zero => (Full3, vec![(df, s)]),
            _ if g == Group::single(self.i0) => (i03, vec![(df, s)]),
            _ if g == Group::single(self.i0p) => (i0p3, vec![(b, s)]),
            _ => return None,
        })
    }

    /// Named elements that may generate `g`, in the order they are tried.
    fn candidates(&self) -> Vec<(&'static str, RElt)> {
        let r = &self.ring;
        vec![
            ("Omega0", self.omega0),
            ("Omega_i0'", self.omega_i0p),
            ("Omega_i0", self.omega_i0),
            ("Omega3", self.omega3),
            ("-1", r.neg(r.one())),
            ("eps0'", self.eps_prime),
            ("A", r.scalar(self.a as i64)),
            ("D^-1 sqrt(-d_i0)", self.dfrak),
            ("B", self.b),
            ("eps0' D^-1 sqrt(-d_i0)", r.mul(self.eps_prime, self.dfrak)),
            ("eps0' B", r.mul(self.eps_prime, self.b)),
        ]
    }

    /// Greedy generating set from the candidate elements lying in `g`.
    fn generators(&self, g: Group, order: u64) -> Result<Vec<Generator>, ResidueError> {
        let r = &self.ring;
        let mut seen: HashSet<RElt> = HashSet::from([r.one()]);
        let mut elems = vec![r.one()];
        let mut out = Vec::new();
        for (label, x) in self.candidates() {
            if elems.len() as u64 == order {
                break;
            }
            if !self.contains(g, x) || seen.contains(&x) {
                continue;
            }
            // smallest k with x^k in the current subgroup
            let mut steps = 1;
            let mut y = x;
            while !seen.contains(&y) {
                y = r.mul(y, x);
                steps += 1;
            }
            let mut layer = elems.clone();
            for _ in 1..steps {
                layer = layer.iter().map(|&e| r.mul(e, x)).collect();
                for &e in &layer {
                    seen.insert(e);
                }
                elems.extend_from_slice(&layer);
            }
            out.push(Generator { label: label.into(), element: x, order: r.order(x), steps });
        }
        if elems.len() as u64 != order {
            return Err(ResidueError::Internal(format!("{} generated to order {} of {order}", g.label(), elems.len())));
        }
        Ok(out)
    }

    pub fn descriptor(&self, g: Group) -> Result<Option<SubgroupDescriptor>, ResidueError> {
        let Some(order) = self.expected_order(g) else {
            return Ok(None);
        };
        let generators = self.generators(g, order)?;
        let (base, coset_reps) = match self.decomposition(g) {
            Some((base, terms)) => (Some(base), self.products(&terms)),
            None => (None, vec![]),
        };
        if let Some(base) = base {
            self.check_cosets(g, base, &coset_reps, order)?;
        }
        Ok(Some(SubgroupDescriptor { label: g.label(), group: g, order, generators, base, coset_reps }))
    }

    /// Each representative lies in `g`, no two share a coset, and the count is the index.
    fn check_cosets(&self, g: Group, base: Group, reps: &[RElt], order: u64) -> Result<(), ResidueError> {
        let err = |m: String| Err(ResidueError::Internal(format!("{}: {m}", g.label())));
        let base_order = self.expected_order(base).expect("base groups have closed-form orders");
        if base_order * reps.len() as u64 != order {
            return err(format!("{} cosets of a group of order {base_order} for order {order}", reps.len()));
        }
        for (i, &x) in reps.iter().enumerate() {
            if !self.contains(g, x) {
                return err(format!("representative {x:?} outside the group"));
            }
            let xi = self.inverse(x);
            if reps[..i].iter().any(|&y| self.contains(base, self.ring.mul(xi, y))) {
                return err(format!("representative {x:?} repeats a coset of {}", base.label()));
            }
        }
        Ok(())
    }

    /// Descriptors of every group the standing assumptions cover.
    pub fn lattice(&self) -> Result<Vec<SubgroupDescriptor>, ResidueError> {
        use Group::*;
        let groups = [
            Primed12,
            Group::with_3(self.i0, true),
            Group::with_3(self.i0p, true),
            Primed3,
            Primed,
            Full12,
            Full,
            Group::with_3(self.i0, false),
            Group::with_3(self.i0p, false),
            Full3,
            Zero,
            Group::single(self.i0),
            Group::single(self.i0p),
        ];
        let mut out = Vec::new();
        for g in groups {
            if let Some(d) = self.descriptor(g)? {
                out.push(d);
            }
        }
        Ok(out)
    }
}

/// `μ = 0` lattice of `W~` groups for `(tower, N, p)`.
pub fn wtilde_lattice(tower: &FieldTower, n: u64, p: u64) -> Result<Vec<SubgroupDescriptor>, ResidueError> {
    LatticeContext::new(tower, n, p)?.lattice()
}

/// Lexicographically first element of order `p^2 - 1` in the kernel of `N_{K/K3}`.
fn kernel_generator(ring: &ResidueRing, p: u64) -> Result<RElt, ResidueError> {
    let m = p * p - 1;
    let qs: Vec<u64> = factorize(m).into_iter().map(|f| f.0).collect();
    ring.elements()
        .filter(|&x| ring.norm_to(x, 3) == (0, 1))
        .find(|&x| qs.iter().all(|q| ring.pow(x, m / q) != ring.one()))
        .ok_or_else(|| ResidueError::Internal(format!("kernel of N_{{K/K3}} mod {p} is not cyclic")))
}

fn big_mod(v: &BigInt, p: u64) -> i64 {
    v.mod_floor(&BigInt::from(p)).to_i64().unwrap()
}
