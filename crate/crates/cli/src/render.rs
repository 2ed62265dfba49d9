use std::io::Write;

use rcf_invariants::{CertifiedReal, Decimal, InvariantReport};
use rcf_residue::DegreeTable;

use crate::CliError;

pub fn certified(c: &CertifiedReal) -> String {
    format!("{}  (rel. err. ≤ 2^{}, {} bits, imaginary residual 2^{:.0})", c.to_sci(40), c.rel_err_exp2, c.prec, c.imag_residual_exp2)
}

fn decimal(d: &Decimal) -> String {
    format!("{}  (rel. err. ≤ 2^{})", d.value, d.rel_err_exp2)
}

/// Long integers keep their first and last digits.
pub(crate) fn abbreviate(s: &str) -> String {
    if s.len() <= 40 {
        return s.to_string();
    }
    let head = if s.starts_with('-') { 13 } else { 12 };
    format!("{}…{} ({} digits)", &s[..head], &s[s.len() - 6..], s.trim_start_matches('-').len())
}

fn polynomial(coeffs: &[String]) -> String {
    let deg = coeffs.len().saturating_sub(1);
    let mut s = String::new();
    for (k, c) in coeffs.iter().enumerate() {
        let e = deg - k;
        let (neg, mag) = match c.strip_prefix('-') {
            Some(m) => (true, m),
            None => (false, c.as_str()),
        };
        if mag == "0" {
            continue;
        }
        if s.is_empty() {
            s.push_str(if neg { "-" } else { "" });
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let x = match e {
            0 => String::new(),
            1 => "X".into(),
            _ => format!("X^{e}"),
        };
        match (mag, e) {
            (_, 0) => s.push_str(mag),
            ("1", _) => s.push_str(&x),
            _ => s.push_str(&format!("{mag} {x}")),
        }
    }
    s
}

pub fn degrees(out: &mut dyn Write, t: &DegreeTable) -> Result<(), CliError> {
    writeln!(out, "degrees ({}):", t.case)?;
    for e in &t.entries {
        writeln!(out, "  [{} : {}] = {}", e.from, e.to, e.index)?;
    }
    Ok(())
}

pub fn report(out: &mut dyn Write, r: &InvariantReport) -> Result<(), CliError> {
    if let Some(i) = &r.inputs {
        writeln!(out, "K = Q(√-{}, √-{}), N = {}, p = {}, μ = {}, I = {}, n = {}", i.d1, i.d2, i.level, i.p, i.mu, i.field, i.power)?;
    }
    if let Some(t) = &r.tower {
        writeln!(out, "ε0 = {} + {}√d, Q = {}, h = {:?}, h_K = {}", t.eps0[0], t.eps0[1], t.q, t.h, t.h_k)?;
        writeln!(out, "m0 = {}, n0 = {}, l0 = {}, μ0 = {}", t.m0, t.n0, t.l0, t.mu0)?;
    }
    if let Some(t) = &r.degree_table {
        degrees(out, t)?;
    }
    if let Some(g) = &r.norm_generator {
        writeln!(out, "norm generator = {}", decimal(&g.value))?;
        writeln!(out, "  imaginary residual 2^{:.0}, group order {}", g.imag_residual_exp2, g.group_order)?;
        for a in &g.generators {
            writeln!(out, "  generator {} of order {}: norm {}θ + {}, matrix {:?}", a.label, a.order, a.norm.0, a.norm.1, a.matrix)?;
        }
        writeln!(out, "  orbit ({}): {}", g.orbit.len(), g.orbit.join(" "))?;
    }
    if let Some(c) = &r.conjugates {
        let sg = &c.sigma.generator;
        writeln!(out, "conjugates (σ from primitive root {}, matrix {:?}):", c.sigma.primitive_root, sg.matrix)?;
        for (k, (v, o)) in c.values.iter().zip(&c.orbits).enumerate() {
            writeln!(out, "  γ_{k} = {}  [{} factors]", decimal(v), o.len())?;
        }
    }
    if let Some(m) = &r.minimal_polynomial {
        writeln!(out, "minimal polynomial: {}", polynomial(m))?;
    }
    if let Some(nb) = &r.normal_basis {
        writeln!(out, "normal basis at {} bits ({} flattening):", nb.precision_bits, nb.flattening)?;
        writeln!(out, "  β = {}", decimal(&nb.beta))?;
        for (i, row) in nb.n.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|x| abbreviate(x)).collect();
            writeln!(out, "  N({i}, ·) = {}", cells.join(", "))?;
        }
        for (i, row) in nb.m.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|x| x.bits.to_string()).collect();
            writeln!(out, "  bits of M({i}, ·) = {}", cells.join(", "))?;
        }
        writeln!(out, "  lemma conditions: {}", if nb.lemma_checks { "hold" } else { "FAIL" })?;
        let margins: Vec<String> = nb.frobenius_margin_bits.iter().map(|m| format!("{m:.1}")).collect();
        writeln!(out, "  Frobenius sums nonzero by margins of {} bits", margins.join(", "))?;
    }
    Ok(())
}
