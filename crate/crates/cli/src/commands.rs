use std::io::Write;

use num_integer::Integer;
use rcf_fields::{make_tower, unit_exponents, FieldTower, QuadraticField, TowerOptions};
use rcf_invariants::{gamma, report, validate_report, InvariantReport, InvariantSpec, Ladder, ReportRequest};
use rcf_residue::{degree_table, norm_map_image, pell_count, Order};
use rcf_siegel::{eval_g12, CmPoint, SiegelIndex, EVAL_ERROR_BITS};
use serde_json::{json, Value};

use crate::presets::preset;
use crate::render;
use crate::{Cli, CliError, Command, ReportArgs, SpecArgs, TowerArgs};

fn tower(t: &TowerArgs) -> Result<FieldTower, CliError> {
    Ok(make_tower(t.d1, t.d2, TowerOptions { h3: t.h3, q: t.q, ..Default::default() })?)
}

fn spec(a: &SpecArgs) -> Result<InvariantSpec, CliError> {
    let s = InvariantSpec::new(tower(&a.tower)?, a.level.level, a.level.p, a.level.mu, a.field, a.power)?;
    Ok(s.with_ladder(Ladder { start: a.prec_bits, max: a.max_prec_bits })?)
}

/// `a/M`, or a bare integer.
fn fraction(s: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::Usage(format!("{s:?} is not a fraction a/M"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?),
        None => (s.trim().parse().map_err(|_| bad())?, 1),
    };
    if d <= 0 {
        return Err(bad());
    }
    Ok((n, d))
}

fn emit_json(out: &mut dyn Write, v: &impl serde::Serialize) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn emit_report(cli: &Cli, out: &mut dyn Write, rep: &InvariantReport) -> Result<(), CliError> {
    if cli.json {
        emit_json(out, rep)
    } else {
        render::report(out, rep)
    }
}

fn request(cmd: &Command) -> ReportRequest {
    let mut r = ReportRequest::default();
    match cmd {
        Command::NormGen(_) => r.norm_generator = true,
        Command::Conjugates(_) => r.conjugates = true,
        Command::Minpoly(_) => r.minimal_polynomial = true,
        Command::NormalBasis(_) => r.normal_basis = true,
        Command::Report(ReportArgs { degrees, norm_generator, conjugates, minpoly, normal_basis, .. }) => {
            r = ReportRequest { degrees: *degrees, norm_generator: *norm_generator, conjugates: *conjugates, minimal_polynomial: *minpoly, normal_basis: *normal_basis };
            if !(r.degrees || r.norm_generator || r.conjugates || r.minimal_polynomial || r.normal_basis) {
                r.degrees = true;
                r.norm_generator = true;
            }
        }
        _ => {}
    }
    r
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Unit { tower: t, level, p } => unit(cli, out, &tower(t)?, *level, *p),
        Command::Pell { delta, p } => pell(cli, out, *delta, *p),
        Command::Degrees { tower: t, level } => {
            let tw = tower(t)?;
            let table = degree_table(&tw, level.level, level.p, level.mu)?;
            table.check_paths()?;
            if cli.json {
                let inputs = json!({ "d1": t.d1, "d2": t.d2, "level": level.level, "p": level.p, "mu": level.mu });
                emit_json(out, &json!({ "inputs": inputs, "degree_table": table }))
            } else {
                render::degrees(out, &table)
            }
        }
        Command::SiegelEval { r1, r2, field, d, pow_mult, prec_bits } => siegel_eval(cli, out, r1, r2, *field, *d, *pow_mult, *prec_bits),
        Command::Gamma(a) => {
            let s = spec(a)?;
            let g = gamma(&s)?;
            if cli.json {
                let v: rcf_invariants::Decimal = (&g).into();
                emit_json(out, &json!({ "gamma": v, "imag_residual_exp2": g.imag_residual_exp2, "precision_bits": g.prec }))
            } else {
                writeln!(out, "γ = {}", render::certified(&g))?;
                Ok(())
            }
        }
        Command::NormGen(a) | Command::Conjugates(a) | Command::Minpoly(a) | Command::NormalBasis(a) => {
            let rep = report(Some(&spec(a)?), request(&cli.command))?;
            emit_report(cli, out, &rep)
        }
        Command::Report(r) => {
            let rep = report(Some(&spec(&r.spec)?), request(&cli.command))?;
            let text = serde_json::to_string_pretty(&rep)?;
            if let Some(path) = &r.out {
                std::fs::write(path, format!("{text}\n"))?;
            }
            writeln!(out, "{text}")?;
            Ok(())
        }
        Command::Validate { path } => {
            let v: Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            validate_report(&v).map_err(CliError::Report)?;
            if cli.json {
                emit_json(out, &json!({ "valid": true }))
            } else {
                writeln!(out, "{}: valid", path.display())?;
                Ok(())
            }
        }
        Command::Reproduce { example } => {
            let pre = preset(*example);
            let rep = report(Some(&pre.spec()?), pre.request)?;
            if !cli.json {
                writeln!(out, "example {}", pre.name)?;
            }
            emit_report(cli, out, &rep)
        }
    }
}

fn unit(cli: &Cli, out: &mut dyn Write, t: &FieldTower, level: u64, p: Option<u64>) -> Result<(), CliError> {
    let delta = t.d1 * t.d2;
    let e = &t.eps0;
    let u = p.map(|p| unit_exponents(t, level, p)).transpose()?;
    if cli.json {
        let exps = u.as_ref().map(|u| {
            json!({ "level": level, "p": p, "m0": u.m0, "sign": u.sign, "n0": u.n0, "l0": u.l0, "mu0": u.mu0,
                    "alpha0": u.alpha0.to_string(), "beta0": u.beta0.to_string() })
        });
        return emit_json(
            out,
            &json!({ "delta": delta, "eps0": [e.x.to_string(), e.y.to_string()], "norm": e.norm,
                     "q": t.q, "h": [t.h1, t.h2, t.h3], "h_k": t.class_number()?, "exponents": exps }),
        );
    }
    writeln!(out, "ε0 = {} + {}√{delta}  (norm {:+})", e.x, e.y, e.norm)?;
    writeln!(out, "Q(K) = {}, h1 = {}, h2 = {}, h3 = {}, h_K = {}", t.q, t.h1, t.h2, t.h3, t.class_number()?)?;
    if let (Some(u), Some(p)) = (u, p) {
        writeln!(out, "N = {level}, p = {p}: m0 = {} (sign {:+}), n0 = {}, l0 = {}, μ0 = {}", u.m0, u.sign, u.n0, u.l0, u.mu0)?;
        let (a, b) = (render::abbreviate(&u.alpha0.to_string()), render::abbreviate(&u.beta0.to_string()));
        writeln!(out, "ε0^l0 = 1 + N p^μ0 (α0 + β0√{delta}), α0 = {a}, β0 = {b}")?;
    }
    Ok(())
}

fn pell(cli: &Cli, out: &mut dyn Write, delta: i64, p: u64) -> Result<(), CliError> {
    let g = pell_count(delta, p)?;
    let img = norm_map_image(Order::Quadratic { radicand: delta }, p)?;
    let surjective = img.preimages.len() as u64 == p - 1;
    if cli.json {
        return emit_json(out, &json!({ "delta": delta, "p": p, "order": g.order, "generator": [g.generator.0, g.generator.1],
                                       "norm_surjective": surjective, "norm_kernel": img.kernel }));
    }
    writeln!(out, "x^2 - {delta} y^2 = 1 over F_{p}: {} points, cyclic, generator ({}, {})", g.order, g.generator.0, g.generator.1)?;
    writeln!(out, "norm onto F_{p}^×: {}, kernel of order {}", if surjective { "surjective" } else { "not surjective" }, img.kernel)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn siegel_eval(cli: &Cli, out: &mut dyn Write, r1: &str, r2: &str, field: u8, d: i64, n: u64, prec: usize) -> Result<(), CliError> {
    if prec < 64 {
        return Err(CliError::Usage(format!("--prec-bits {prec} is below 64")));
    }
    let (a, b) = (fraction(r1)?, fraction(r2)?);
    let m = a.1.lcm(&b.1);
    if m < 2 {
        return Err(CliError::Usage("both entries are integers; the Siegel function is undefined there".into()));
    }
    let v = SiegelIndex::from_fractions(a, b, m as u64)?;
    let cm = CmPoint::theta(field, &QuadraticField::imaginary(d)?)?;
    let z = eval_g12(&v, &cm, n, prec)?;
    let err = EVAL_ERROR_BITS - prec as i64;
    let digits = (((-err - 1) as f64 * std::f64::consts::LOG10_2) as usize).clamp(1, 40);
    let (re, im) = (z.re.to_sci(digits), z.im.to_sci(digits));
    if cli.json {
        return emit_json(out, &json!({ "index": v.to_string(), "exponent": 12 * m as u64 * n, "re": re, "im": im, "rel_err_exp2": err, "precision_bits": prec }));
    }
    let (sign, im_abs) = match im.strip_prefix('-') {
        Some(rest) => ('-', rest),
        None => ('+', im.as_str()),
    };
    writeln!(out, "g_{v}^{}(θ{field}) = {re} {sign} {im_abs} i", 12 * m as u64 * n)?;
    writeln!(out, "|error| ≤ 2^{err} |value|")?;
    Ok(())
}
