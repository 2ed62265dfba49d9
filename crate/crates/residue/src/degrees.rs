use std::collections::BTreeMap;

use num_integer::Integer;
use rcf_fields::{unit_exponents, FieldTower};
use serde::Serialize;

use crate::lattice::{Group, LatticeContext};
use crate::ResidueError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeEntry {
    pub from: String,
    pub to: String,
    pub index: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeTable {
    pub case: String,
    pub entries: Vec<DegreeEntry>,
}

impl DegreeTable {
    pub fn get(&self, from: &str, to: &str) -> Option<u64> {
        self.entries.iter().find(|e| e.from == from && e.to == to).map(|e| e.index)
    }

    /// Every pair of nodes joined by several paths gets the same product along each.
    pub fn check_paths(&self) -> Result<(), ResidueError> {
        let mut adj: BTreeMap<&str, Vec<(&str, u64)>> = BTreeMap::new();
        for e in &self.entries {
            adj.entry(&e.from).or_default().push((&e.to, e.index));
        }
        for start in adj.keys() {
            let mut reached: BTreeMap<&str, u64> = BTreeMap::new();
            let mut stack = vec![(*start, 1u64, 0usize)];
            while let Some((node, acc, depth)) = stack.pop() {
                if depth > self.entries.len() {
                    return Err(ResidueError::Internal(format!("cycle through {node}")));
                }
                if node != *start {
                    match reached.get(node) {
                        Some(&v) if v != acc => {
                            return Err(ResidueError::Internal(format!("[{start} : {node}] is {v} along one path and {acc} along another")));
                        }
                        _ => {
                            reached.insert(node, acc);
                        }
                    }
                }
                for &(next, idx) in adj.get(node).map(Vec::as_slice).unwrap_or(&[]) {
                    stack.push((next, acc * idx, depth + 1));
                }
            }
        }
        Ok(())
    }
}

struct Builder(Vec<DegreeEntry>);

impl Builder {
    /// Repeated edges are kept only when they disagree, so `check_paths` reports them.
    fn add(&mut self, from: &str, to: &str, index: u64) {
        if self.0.iter().any(|e| e.from == from && e.to == to && e.index == index) {
            return;
        }
        self.0.push(DegreeEntry { from: from.into(), to: to.into(), index });
    }
}

fn tilde(idx: &str) -> String {
    format!("K~^{{{idx}}}")
}

/// All indices of the `μ = 0` and `μ > 0` diagrams for `(tower, N, p, μ)`.
pub fn degree_table(tower: &FieldTower, n: u64, p: u64, mu: u32) -> Result<DegreeTable, ResidueError> {
    if mu == 0 {
        degree_table_mu0(tower, n, p)
    } else {
        degree_table_mu(tower, n, p, mu)
    }
}

fn degree_table_mu0(tower: &FieldTower, n: u64, p: u64) -> Result<DegreeTable, ResidueError> {
    let ctx = LatticeContext::new(tower, n, p)?;
    let n0 = ctx.n0();
    let hs = ctx.hs_order();
    let ne1 = n != 1;
    let q = ctx.q_k;
    let top = format!("K_({})", n * p);
    let bottom = format!("K_({n})");
    let deg = |g: Group| ctx.expected_order(g).map(|w| w / hs);
    let mut b = Builder(Vec::new());

    let hs3 = if ne1 || n0 % 2 == 0 { n0 } else { 2 * n0 };
    b.add(&top, &bottom, (p + 1) * (p + 1) * (p - 1) * (p - 1) / hs);
    b.add(&format!("(K3)_({})", n * p), &format!("(K3)_({n})"), (p + 1) * (p - 1) / hs3);
    if !ne1 {
        b.add(&format!("(K3)_({p}inf)"), &format!("(K3)_({p})"), if n0 % 2 == 1 { 4 } else { 2 });
    }
    let k12 = tilde("1,2");
    b.add(&top, &k12, deg(Group::Full12).unwrap());
    b.add(&top, "K~", deg(Group::Full).unwrap());

    let parity = if n0 % 2 == 1 { "odd" } else { "even" };
    if !ctx.n0_is_maximal() {
        let case = format!("mu=0, {}, n0={n0} {parity}, n0 not in {{(p+1)/2, p+1}}", if ne1 { "N!=1" } else { "N=1" });
        return Ok(DegreeTable { case, entries: b.0 });
    }
    let (i0, i0p) = (ctx.i0, ctx.i0p);
    let k_i03 = tilde(&format!("{i0},3"));
    let k_i0p3 = tilde(&format!("{i0p},3"));
    let k_i0 = tilde(&i0.to_string());
    let k_i0p = tilde(&i0p.to_string());
    let (k3, k0) = (tilde("3"), tilde("0"));
    let with3 = |i: u8| if i == 1 { Group::Full13 } else { Group::Full23 };
    let single = |i: u8| if i == 1 { Group::Full1 } else { Group::Full2 };
    for (node, g) in [(&k_i03, with3(i0)), (&k_i0p3, with3(i0p)), (&k_i0, single(i0)), (&k_i0p, single(i0p)), (&k3, Group::Full3), (&k0, Group::Zero)] {
        b.add(&top, node, deg(g).unwrap());
    }

    // diagram edges
    let half = (p + 1) / 2;
    let s = ctx.split_factor();
    let case = if ne1 && n0 == half {
        b.add(&top, &k12, 2);
        b.add(&k12, &k_i03, half);
        b.add(&k12, &k_i0p3, (p - 1) / 2);
        "mu=0, N!=1, n0=(p+1)/2"
    } else if ne1 {
        b.add(&top, &k12, 1);
        b.add(&k12, &k_i03, p + 1);
        b.add(&k12, &k_i0p3, p - 1);
        "mu=0, N!=1, n0=p+1"
    } else {
        b.add(&top, &k12, 4 / q);
        b.add(&k12, &k_i03, half);
        b.add(&k12, &k_i0p3, (p - 1) / 2);
        if n0 == half {
            "mu=0, N=1, n0=(p+1)/2"
        } else {
            "mu=0, N=1, n0=p+1"
        }
    };
    // the sides of the two squares K~^{i,3} > K~^3, K~^i > K~^0 carry equal labels
    let (down_i0, down_i0p) = if ne1 { (p - 1, p + 1) } else { ((p - 1) / 2, half) };
    b.add(&k_i03, &k3, down_i0);
    b.add(&k_i0p3, &k3, down_i0p);
    b.add(&k_i0, &k0, down_i0);
    b.add(&k_i0p, &k0, down_i0p);
    b.add("K~", &k12, 1);
    b.add(&k_i03, &k_i0, s);
    b.add(&k_i0p3, &k_i0p, s);
    b.add(&k3, &k0, s);
    b.add(&k0, &bottom, p - 1);
    let table = DegreeTable { case: case.into(), entries: b.0 };
    table.check_paths()?;
    Ok(table)
}

fn degree_table_mu(tower: &FieldTower, n: u64, p: u64, mu: u32) -> Result<DegreeTable, ResidueError> {
    if n == 0 || n == 2 || p < 3 || !rcf_fields::is_prime(p) || n.gcd(&p) != 1 {
        return Err(ResidueError::Hypothesis(format!("need N ≠ 2 and an odd prime p with (N, p) = 1 (N = {n}, p = {p})")));
    }
    let mu0 = unit_exponents(tower, n, p)?.mu0;
    let pm = p.checked_pow(mu).and_then(|v| v.checked_mul(n)).ok_or_else(|| ResidueError::Input("N p^μ overflows".into()))?;
    let top = format!("K_({})", pm * p);
    let low = format!("K_({pm})");
    let (k12, k1, k2, k3) = (tilde("1,2"), tilde("1"), tilde("2"), tilde("3"));
    let mut b = Builder(Vec::new());
    let below = mu < mu0;
    b.add(&top, &low, if below { p.pow(4) } else { p.pow(3) });
    b.add(&format!("(K3)_({})", pm * p), &format!("(K3)_({pm})"), if below { p * p } else { p });
    b.add(&top, "K~", 1);
    b.add("K~", &k12, if below { p } else { 1 });
    b.add(&top, &k12, if below { p } else { 1 });
    for k in [&k1, &k2] {
        b.add(&top, k, if below { p * p } else { p });
        b.add(&k12, k, p);
    }
    b.add(&top, &k3, p * p);
    if below {
        for k in [&k1, &k2, &k3] {
            b.add(k, &low, p * p);
        }
    } else {
        b.add(&k1, &k3, p);
        b.add(&k2, &k3, p);
        b.add(&k3, &low, p);
    }
    let case = format!("mu={mu} {} mu0={mu0}", if below { "<" } else { ">=" });
    let table = DegreeTable { case, entries: b.0 };
    table.check_paths()?;
    Ok(table)
}
