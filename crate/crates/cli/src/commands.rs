//! Subcommand implementations. Each returns certificates plus a human
//! summary; the binary decides how to print them.

use std::fmt;
use std::path::Path;

use serde_json::{json, Value};
use spinlab::constructions::{
    build_z, chain_spin_form, korkmaz_cadavid, group_fibration, u_v_factorizations,
    uniform_spin_form, z_factorization,
};
use spinlab::factorization::{check_relation, check_spin, PositiveFactorization};
use spinlab::homology::QuadraticForm;
use spinlab::invariants::{
    enumerate_region, invariants_of, realize, HyperellipticCertificate, SignatureSource,
};
use spinlab::presentations::{fibration_h1, FinitePresentation};

use crate::certificate::Certificate;
use crate::script::{self, ErrorKind};

/// A failure with its exit code: 2 for parse errors, 3 for preconditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        CliError { code: 3, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<script::ScriptError> for CliError {
    fn from(e: script::ScriptError) -> Self {
        let code = if e.kind == ErrorKind::Precondition { 3 } else { 2 };
        CliError { code, message: e.to_string() }
    }
}

fn pre(e: spinlab::Error) -> CliError {
    CliError::precondition(e.to_string())
}

#[derive(Debug, Clone)]
pub struct Output {
    pub certificates: Vec<Certificate>,
    /// Human-readable lines.
    pub text: Vec<String>,
    /// Tab-separated rows, for commands that have them.
    pub tsv: Option<String>,
    /// Print certificates as an array even when there is only one.
    pub stream: bool,
}

impl Output {
    fn single(cert: Certificate, text: Vec<String>) -> Self {
        Output { certificates: vec![cert], text, tsv: None, stream: false }
    }

    pub fn passes(&self) -> bool {
        self.certificates.iter().all(|c| c.verdict)
    }

    pub fn json(&self) -> Value {
        match self.certificates.as_slice() {
            [one] if !self.stream => one.to_value(),
            many => Value::Array(many.iter().map(Certificate::to_value).collect()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    BuildingBlock,
    U,
    V,
    Z,
}

impl Family {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "building-block" => Ok(Family::BuildingBlock),
            "u" => Ok(Family::U),
            "v" => Ok(Family::V),
            "z" => Ok(Family::Z),
            other => Err(CliError::parse(format!(
                "unknown family `{other}` (building-block, u, v, z)"
            ))),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Family::BuildingBlock => "building-block",
            Family::U => "u",
            Family::V => "v",
            Family::Z => "z",
        }
    }
}

/// Where a factorization comes from.
#[derive(Debug, Clone)]
pub enum Source {
    File(String),
    Family { family: Family, g: usize, k: u32 },
}

/// A loaded factorization with the text that identifies it.
pub struct Loaded {
    pub p: PositiveFactorization,
    pub family: Option<(Family, u32)>,
    pub describe: String,
    pub inputs: Vec<u8>,
}

pub fn load(source: &Source) -> Result<Loaded, CliError> {
    match source {
        Source::File(path) => {
            let text = read(path)?;
            let value: Value = serde_json::from_str(&text)
                .map_err(|e| CliError::parse(format!("{path}: {e}")))?;
            let p = PositiveFactorization::from_json(&value)
                .map_err(|e| CliError::parse(format!("{path}: {e}")))?;
            Ok(Loaded { p, family: None, describe: path.clone(), inputs: text.into_bytes() })
        }
        Source::Family { family, g, k } => {
            let p = match family {
                Family::BuildingBlock => korkmaz_cadavid(*g),
                Family::U => u_v_factorizations(*g).map(|(u, _)| u),
                Family::V => u_v_factorizations(*g).map(|(_, v)| v),
                Family::Z => z_factorization(*g, *k),
            }
            .map_err(pre)?;
            let describe = match family {
                Family::Z => format!("--family z --g {g} --k {k}"),
                f => format!("--family {} --g {g}", f.name()),
            };
            Ok(Loaded { p, family: Some((*family, *k)), inputs: describe.clone().into_bytes(), describe })
        }
    }
}

pub fn read(path: impl AsRef<Path>) -> Result<String, CliError> {
    let path = path.as_ref();
    std::fs::read_to_string(path)
        .map_err(|e| CliError::precondition(format!("{}: {e}", path.display())))
}

/// `uniform`, `chain`, or explicit values such as `x*:1 y1:1 y3:1`.
pub fn parse_form(text: &str, g: usize) -> Result<QuadraticForm, CliError> {
    match text {
        "uniform" => Ok(uniform_spin_form(g)),
        "chain" => Ok(chain_spin_form(g)),
        other => QuadraticForm::parse(other, g).map_err(|e| CliError::parse(e.to_string())),
    }
}

fn with_inputs(loaded: &Loaded, extra: &str) -> Vec<u8> {
    let mut v = loaded.inputs.clone();
    v.push(0);
    v.extend_from_slice(extra.as_bytes());
    v
}

pub fn check_spin_cmd(source: &Source, form: Option<&str>) -> Result<Output, CliError> {
    let loaded = load(source)?;
    let g = loaded.p.genus();
    let form_text = match (form, loaded.family) {
        (Some(f), _) => f,
        (None, Some((Family::BuildingBlock, _))) => "uniform",
        (None, Some(_)) => "chain",
        (None, None) => return Err(CliError::parse("--form is required for a factorization file")),
    };
    let q = parse_form(form_text, g)?;
    let cert = check_spin(&loaded.p, &q).map_err(pre)?;
    let failing = cert.failing_labels();
    let text = vec![
        format!("spin structure: {q}"),
        format!("q = 1 on all {} twists: {}", cert.values.len(), cert.all_ones),
        format!("boundary power {} is even: {}", cert.boundary_power, cert.power_even),
        format!("failing: {}", if failing.is_empty() { "none".to_string() } else { failing.join(" ") }),
    ];
    let mut results = serde_json::to_value(&cert).expect("serializable");
    results["form"] = Value::String(q.to_string());
    let command = format!("check-spin {} --form {form_text}", loaded.describe);
    let c = Certificate::new(command, &with_inputs(&loaded, form_text), cert.verdict, results);
    Ok(Output::single(c, text))
}

pub fn check_relation_cmd(source: &Source) -> Result<Output, CliError> {
    let loaded = load(source)?;
    let r = check_relation(&loaded.p);
    let integral = r.integral.map_or("n/a".to_string(), |b| b.to_string());
    let text = vec![
        format!("length {}, boundary power {}", loaded.p.len(), loaded.p.boundary_power()),
        format!("relation mod 2: {}", r.mod2),
        format!("relation over Z: {integral}"),
    ];
    let mut results = serde_json::to_value(r).expect("serializable");
    results["length"] = json!(loaded.p.len());
    results["boundary_power"] = json!(loaded.p.boundary_power());
    let c = Certificate::new(format!("check-relation {}", loaded.describe), &loaded.inputs, r.holds(), results);
    Ok(Output::single(c, text))
}

pub fn invariants_cmd(source: &Source, signature: Option<&str>) -> Result<Output, CliError> {
    let loaded = load(source)?;
    let choice = match (signature, loaded.family) {
        (Some(s), _) => s,
        (None, Some((Family::Z, _))) => "bred",
        (None, _) => "meyer",
    };
    let src = match choice {
        "meyer" => SignatureSource::Meyer,
        "endo" => SignatureSource::EndoHyperelliptic(HyperellipticCertificate::asserted(
            "asserted on the command line",
        )),
        "bred" => match loaded.family {
            Some((Family::Z, k)) => SignatureSource::BredFamily { k },
            _ => return Err(CliError::precondition("--signature bred needs --family z")),
        },
        other => {
            return Err(CliError::parse(format!("unknown signature method `{other}` (meyer, endo, bred)")))
        }
    };
    let inv = invariants_of(&loaded.p, &src).map_err(pre)?;
    let mut text = vec![
        format!("euler characteristic {}", inv.euler),
        format!("signature {} ({})", inv.signature, inv.signature_method),
        format!("chi_h {}", inv.chi_h),
        format!("c1^2 {}", inv.c1sq),
    ];
    let mut results = serde_json::to_value(inv).expect("serializable");
    if let Some(pt) = inv.point() {
        let realized = realize(pt);
        if let Some((g, k)) = realized {
            text.push(format!("realized by the bred family at g = {g}, k = {k}"));
        }
        results["realized_by"] = match realized {
            Some((g, k)) => json!({"g": g, "k": k}),
            None => Value::Null,
        };
    }
    let command = format!("invariants {} --signature {choice}", loaded.describe);
    let c = Certificate::new(command, &with_inputs(&loaded, choice), true, results);
    Ok(Output::single(c, text))
}

pub fn h1_cmd(source: &Source) -> Result<Output, CliError> {
    let loaded = load(source)?;
    let h = fibration_h1(&loaded.p);
    let mut results = serde_json::to_value(&h).expect("serializable");
    results["display"] = Value::String(h.to_string());
    let c = Certificate::new(format!("h1 {}", loaded.describe), &loaded.inputs, true, results);
    Ok(Output::single(c, vec![format!("H1 = {h}")]))
}

pub fn geography_cmd(max_m: u64) -> Result<Output, CliError> {
    let points = enumerate_region(max_m).map_err(pre)?;
    let mut rows = Vec::new();
    let mut tsv = String::from("m\tn\tg\tk\n");
    let mut all_realized = true;
    for pt in &points {
        match realize(*pt) {
            Some((g, k)) => {
                tsv += &format!("{}\t{}\t{g}\t{k}\n", pt.m, pt.n);
                rows.push(json!({"m": pt.m, "n": pt.n, "g": g, "k": k}));
            }
            None => {
                all_realized = false;
                tsv += &format!("{}\t{}\t-\t-\n", pt.m, pt.n);
                rows.push(json!({"m": pt.m, "n": pt.n, "g": null, "k": null}));
            }
        }
    }
    let text = vec![format!("{} lattice points with m <= {max_m}, all realized: {all_realized}", points.len())];
    let results = json!({"max_m": max_m, "count": points.len(), "points": rows});
    let command = format!("geography --max-m {max_m}");
    let c = Certificate::new(command.clone(), command.as_bytes(), all_realized, results);
    Ok(Output { certificates: vec![c], text, tsv: Some(tsv), stream: false })
}

/// Points and bounding lines, as `a m + b n = c` coefficients.
pub fn plot_data(max_m: u64) -> Result<Value, CliError> {
    let points = enumerate_region(max_m).map_err(pre)?;
    let pts: Vec<Value> = points.iter().map(|p| json!([p.m, p.n])).collect();
    Ok(json!({
        "max_m": max_m,
        "points": pts,
        "lines": [
            {"name": "n = 8(m - 6)", "a": -8, "b": 1, "c": -48},
            {"name": "3n = 16m", "a": -16, "b": 3, "c": 0},
        ],
    }))
}

pub fn thm_a_cmd(path: &str) -> Result<Output, CliError> {
    let text = read(path)?;
    let g = FinitePresentation::parse(&text).map_err(|e| CliError::parse(e.to_string()))?;
    let (_, cert) = group_fibration(&g).map_err(pre)?;
    let lines = vec![
        format!("presentation {}", cert.presentation),
        format!("normal form {}", cert.normalized),
        format!("genus {}, {} blocks, length {}, boundary power {}", cert.genus, cert.blocks, cert.length, cert.boundary_power),
        format!("spin: {}", cert.spin.verdict),
        format!("abelianization {}, H1 {}", cert.abelianization, cert.h1),
    ];
    let results = serde_json::to_value(&cert).expect("serializable");
    let c = Certificate::new("thm-a --presentation FILE", text.as_bytes(), cert.passes(), results);
    Ok(Output::single(c, lines))
}

pub fn thm_b_cmd(g: usize, k: u32) -> Result<Output, CliError> {
    let (_, cert) = build_z(g, k).map_err(pre)?;
    let inv = cert.invariants;
    let text = vec![
        format!("length {}, boundary power {}", cert.length, cert.boundary_power),
        format!("relation mod 2: {}", cert.relation.mod2),
        format!("spin: {}", cert.spin.verdict),
        format!("e = {}, sigma = {}, chi_h = {}, c1^2 = {}", inv.euler, inv.signature, inv.chi_h, inv.c1sq),
        format!("H1 mod 2 dimension {}", cert.h1_mod2_dimension),
    ];
    let results = serde_json::to_value(&cert).expect("serializable");
    let command = format!("thm-b --g {g} --k {k}");
    let c = Certificate::new(command.clone(), command.as_bytes(), cert.passes(), results);
    Ok(Output::single(c, text))
}

/// Parses and runs a script: one certificate per query.
pub fn run_cmd(text: &str) -> Result<Output, CliError> {
    let parsed = script::parse_script(text)?;
    let outcomes = script::run_script(&parsed)?;
    let mut certificates = Vec::new();
    let mut lines = Vec::new();
    for o in outcomes {
        let mark = if o.verdict { "ok" } else { "FAIL" };
        lines.push(format!("{}: {}: {} [{mark}]", o.pos.line, o.statement, o.summary));
        certificates.push(Certificate::new(o.statement, o.prefix.as_bytes(), o.verdict, o.result));
    }
    Ok(Output { certificates, text: lines, tsv: None, stream: true })
}
