use num_bigint::BigInt;
use rcf_fields::unit_exponents;
use rcf_numerics::BigReal;
use rcf_residue::{degree_table, DegreeTable};
use serde::Serialize;
use serde_json::Value;

use crate::conjugates::{norm_generator, GeneratorInfo, SigmaInfo};
use crate::spec::CertifiedReal;
use crate::minpoly::minimal_polynomial;
use crate::normal::normal_basis;
use crate::spec::InvariantSpec;
use crate::InvariantsError;

pub const SCHEMA_VERSION: &str = "rcf-invariants/1";

/// A decimal string carrying its own error bound.
#[derive(Debug, Clone, Serialize)]
pub struct Decimal {
    pub value: String,
    pub rel_err_exp2: i64,
}

impl From<&CertifiedReal> for Decimal {
    fn from(c: &CertifiedReal) -> Self {
        Self { value: c.to_sci(40), rel_err_exp2: c.rel_err_exp2 }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ReportRequest {
    pub degrees: bool,
    pub norm_generator: bool,
    pub conjugates: bool,
    pub minimal_polynomial: bool,
    pub normal_basis: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Inputs {
    pub d1: i64,
    pub d2: i64,
    pub level: u64,
    pub p: u64,
    pub mu: u32,
    pub field: u8,
    pub power: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TowerData {
    pub eps0: [String; 2],
    pub q: u8,
    pub h: [u64; 3],
    pub h_k: u64,
    pub m0: u64,
    pub n0: u64,
    pub l0: u64,
    pub mu0: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormGeneratorJson {
    pub value: Decimal,
    pub imag_residual_exp2: f64,
    pub generators: Vec<GeneratorInfo>,
    pub group_order: usize,
    pub orbit: Vec<String>,
    pub precision_bits: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugatesJson {
    pub sigma: SigmaInfo,
    pub values: Vec<Decimal>,
    pub orbits: Vec<Vec<String>>,
    pub precision_bits: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct IntSummary {
    pub bits: u64,
    pub digits: u64,
    pub leading: String,
    /// Full decimal expansion for values below 2^256.
    pub exact: Option<String>,
}

impl From<&BigInt> for IntSummary {
    fn from(n: &BigInt) -> Self {
        let bits = n.bits();
        let leading = BigReal::from_bigint(n, 128).to_sci(20);
        let digits = match leading.split_once('e') {
            Some((_, k)) => k.parse::<u64>().unwrap_or(0) + 1,
            None => 1,
        };
        Self { bits, digits, leading, exact: (bits <= 256).then(|| n.to_string()) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalBasisJson {
    pub beta: Decimal,
    pub flattening: &'static str,
    pub n: Vec<Vec<String>>,
    pub m: Vec<Vec<IntSummary>>,
    pub lemma_checks: bool,
    pub frobenius_margin_bits: Vec<f64>,
    pub precision_bits: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantReport {
    pub schema_version: &'static str,
    pub inputs: Option<Inputs>,
    pub tower: Option<TowerData>,
    pub degree_table: Option<DegreeTable>,
    pub norm_generator: Option<NormGeneratorJson>,
    pub conjugates: Option<ConjugatesJson>,
    pub minimal_polynomial: Option<Vec<String>>,
    pub normal_basis: Option<NormalBasisJson>,
}

/// Collects the requested invariants; `None` gives the empty skeleton.
pub fn report(spec: Option<&InvariantSpec>, req: ReportRequest) -> Result<InvariantReport, InvariantsError> {
    let mut out = InvariantReport {
        schema_version: SCHEMA_VERSION,
        inputs: None,
        tower: None,
        degree_table: None,
        norm_generator: None,
        conjugates: None,
        minimal_polynomial: None,
        normal_basis: None,
    };
    let Some(spec) = spec else {
        return Ok(out);
    };
    let t = &spec.tower;
    out.inputs = Some(Inputs { d1: t.d1, d2: t.d2, level: spec.level, p: spec.p, mu: spec.mu, field: spec.field, power: spec.power });
    let u = unit_exponents(t, spec.level, spec.p)?;
    out.tower = Some(TowerData {
        eps0: [t.eps0.x.to_string(), t.eps0.y.to_string()],
        q: t.q,
        h: [t.h1, t.h2, t.h3],
        h_k: t.class_number()?,
        m0: u.m0,
        n0: u.n0,
        l0: u.l0,
        mu0: u.mu0,
    });
    if req.degrees {
        out.degree_table = Some(degree_table(t, spec.level, spec.p, spec.mu)?);
    }
    if req.norm_generator {
        let g = norm_generator(spec)?;
        out.norm_generator = Some(NormGeneratorJson {
            value: (&g.value).into(),
            imag_residual_exp2: g.value.imag_residual_exp2,
            generators: g.generators,
            group_order: g.group_order,
            orbit: g.orbit.iter().map(|v| v.to_string()).collect(),
            precision_bits: g.value.prec,
        });
    }
    let conj_json = |c: &crate::ConjugateSet| ConjugatesJson {
        sigma: c.sigma.clone(),
        values: c.values.iter().map(Decimal::from).collect(),
        orbits: c.orbits.iter().map(|o| o.iter().map(|v| v.to_string()).collect()).collect(),
        precision_bits: c.prec,
    };
    if req.minimal_polynomial {
        let (set, poly) = minimal_polynomial(spec)?;
        out.conjugates = Some(conj_json(&set));
        out.minimal_polynomial = Some(poly.coeffs.iter().map(|c| c.to_string()).collect());
    } else if req.conjugates {
        out.conjugates = Some(conj_json(&crate::hilbert_conjugates(spec)?));
    }
    if req.normal_basis {
        let nb = normal_basis(spec)?;
        let flat_n: Vec<BigInt> = nb.n.iter().flatten().cloned().collect();
        let flat_m: Vec<BigInt> = nb.m.iter().flatten().cloned().collect();
        if out.conjugates.is_none() {
            out.conjugates = Some(conj_json(&nb.conjugates));
        }
        out.normal_basis = Some(NormalBasisJson {
            beta: (&nb.beta).into(),
            flattening: "row-major",
            n: nb.n.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
            m: nb.m.iter().map(|r| r.iter().map(IntSummary::from).collect()).collect(),
            lemma_checks: crate::check_lemma_sequence(&flat_n, &flat_m).is_ok(),
            frobenius_margin_bits: nb.frobenius.iter().map(|f| f.margin_bits()).collect(),
            precision_bits: nb.prec,
        });
    }
    Ok(out)
}

/// Structural check of a serialized report against the schema.
pub fn validate_report(v: &Value) -> Result<(), String> {
    let obj = v.as_object().ok_or("report is not an object")?;
    match obj.get("schema_version").and_then(Value::as_str) {
        Some(SCHEMA_VERSION) => {}
        other => return Err(format!("schema_version {other:?} ≠ {SCHEMA_VERSION:?}")),
    }
    const KEYS: [&str; 7] = ["inputs", "tower", "degree_table", "norm_generator", "conjugates", "minimal_polynomial", "normal_basis"];
    for k in KEYS {
        if !obj.contains_key(k) {
            return Err(format!("missing key {k}"));
        }
    }
    if let Some(extra) = obj.keys().find(|k| *k != "schema_version" && !KEYS.contains(&k.as_str())) {
        return Err(format!("unexpected key {extra}"));
    }
    let present = |k: &str| obj.get(k).filter(|x| !x.is_null());
    if let Some(i) = present("inputs") {
        for k in ["d1", "d2", "level", "p", "mu", "field", "power"] {
            i.get(k).and_then(Value::as_i64).ok_or(format!("inputs.{k} is not an integer"))?;
        }
    }
    if let Some(d) = present("degree_table") {
        d.get("case").and_then(Value::as_str).ok_or("degree_table.case is not a string")?;
        for e in d.get("entries").and_then(Value::as_array).ok_or("degree_table.entries is not an array")? {
            e.get("index").and_then(Value::as_u64).ok_or("degree entry without integer index")?;
        }
    }
    if let Some(g) = present("norm_generator") {
        decimal(g.get("value"), "norm_generator.value")?;
        strings(g.get("orbit"), "norm_generator.orbit")?;
    }
    if let Some(c) = present("conjugates") {
        for (i, x) in c.get("values").and_then(Value::as_array).ok_or("conjugates.values is not an array")?.iter().enumerate() {
            decimal(Some(x), &format!("conjugates.values[{i}]"))?;
        }
    }
    if let Some(m) = present("minimal_polynomial") {
        for c in strings(Some(m), "minimal_polynomial")? {
            c.parse::<BigInt>().map_err(|_| format!("coefficient {c:?} is not an integer"))?;
        }
    }
    if let Some(nb) = present("normal_basis") {
        decimal(nb.get("beta"), "normal_basis.beta")?;
        nb.get("m").and_then(Value::as_array).ok_or("normal_basis.m is not an array")?;
        nb.get("lemma_checks").and_then(Value::as_bool).ok_or("normal_basis.lemma_checks is not a bool")?;
    }
    Ok(())
}

fn decimal(v: Option<&Value>, at: &str) -> Result<(), String> {
    let v = v.ok_or(format!("{at} missing"))?;
    let s = v.get("value").and_then(Value::as_str).ok_or(format!("{at}.value is not a string"))?;
    BigReal::from_decimal_str(s, 64).map_err(|_| format!("{at}.value {s:?} is not a decimal"))?;
    v.get("rel_err_exp2").and_then(Value::as_i64).ok_or(format!("{at}.rel_err_exp2 is not an integer"))?;
    Ok(())
}

fn strings<'a>(v: Option<&'a Value>, at: &str) -> Result<Vec<&'a str>, String> {
    v.and_then(Value::as_array)
        .ok_or(format!("{at} is not an array"))?
        .iter()
        .map(|x| x.as_str().ok_or(format!("{at} holds a non-string")))
        .collect()
}
