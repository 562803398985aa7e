//! Command execution: each subcommand resolves its workspace bindings, runs
//! the corresponding library routine, and produces a [`Report`] that renders
//! either as human-readable text or as a stable JSON envelope.

use clap::ValueEnum;
use modspectra::{
    classify, localalg, run_suite, spectrum, Matrix, PrimeIdeal, Provenance, SuiteConfig,
    SuiteKind,
};
use serde_json::{json, Map, Value};

use crate::dsl::{self, Workspace};
use crate::error::{CliError, CliResult};

/// Outcome of one command, ready for emission in either format.
#[derive(Debug)]
pub struct Report {
    command: &'static str,
    inputs: Value,
    ring: Option<String>,
    result: Value,
    provenance: Provenance,
    seed: Option<u64>,
    text: String,
    verification_failed: bool,
}

impl Report {
    /// The stable JSON envelope: same inputs produce byte-identical output
    /// (object keys are emitted in sorted order).
    pub fn envelope(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "ring": self.ring,
            "result": self.result,
            "provenance": self.provenance.as_str(),
            "proved": matches!(self.provenance, Provenance::Proved),
            "sampled": matches!(self.provenance, Provenance::Sampled),
            "seed": self.seed,
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    /// True when a verification suite ran and found a counterexample.
    pub fn verification_failed(&self) -> bool {
        self.verification_failed
    }
}

fn prime_json(p: &PrimeIdeal) -> Value {
    Value::Array(
        p.ideal().canonical_basis().iter().map(|g| Value::String(g.to_string())).collect(),
    )
}

fn primes_json(ps: &[PrimeIdeal]) -> Value {
    Value::Array(ps.iter().map(prime_json).collect())
}

fn primes_text(ps: &[PrimeIdeal]) -> String {
    if ps.is_empty() {
        return "{}".to_string();
    }
    format!("{{ {} }}", ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "))
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols()).map(|j| Value::String(m.entry(i, j).to_string())).collect(),
                )
            })
            .collect(),
    )
}

pub fn ass(ws: &Workspace, module: &str) -> CliResult<Report> {
    let m = ws.module(module)?;
    let primes = spectrum::ass_enumerate(m)?;
    Ok(Report {
        command: "ass",
        inputs: json!({ "module": module }),
        ring: Some(m.ring().to_string()),
        result: json!({ "ass": primes_json(&primes) }),
        provenance: Provenance::Proved,
        seed: None,
        text: format!("Ass({module}) = {}", primes_text(&primes)),
        verification_failed: false,
    })
}

pub fn supp(ws: &Workspace, module: &str) -> CliResult<Report> {
    let m = ws.module(module)?;
    let set = spectrum::supp_set(m)?;
    Ok(Report {
        command: "supp",
        inputs: json!({ "module": module }),
        ring: Some(m.ring().to_string()),
        result: json!({ "supp": primes_json(set.minimal_primes()) }),
        provenance: Provenance::Proved,
        seed: None,
        text: format!("Supp({module}) = {set}"),
        verification_failed: false,
    })
}

pub fn filtration(ws: &Workspace, module: &str) -> CliResult<Report> {
    let m = ws.module(module)?;
    let filt = spectrum::prime_filtration(m)?;
    filt.verify()?;
    let steps: Vec<Value> = filt
        .steps()
        .iter()
        .map(|s| {
            let witness: Vec<String> =
                (0..s.witness.rows()).map(|i| s.witness.entry(i, 0).to_string()).collect();
            json!({ "prime": prime_json(&s.prime), "witness": witness })
        })
        .collect();
    let mut text = format!("prime filtration of {module} ({} steps):", filt.len());
    for (i, s) in filt.steps().iter().enumerate() {
        text.push_str(&format!("\n  {}. R/{}", i + 1, s.prime));
    }
    Ok(Report {
        command: "filtration",
        inputs: json!({ "module": module }),
        ring: Some(m.ring().to_string()),
        result: json!({ "length": filt.len(), "steps": steps, "verified": true }),
        provenance: Provenance::Proved,
        seed: None,
        text,
        verification_failed: false,
    })
}

pub fn spectral(ws: &Workspace, module: &str) -> CliResult<Report> {
    let m = ws.module(module)?;
    let witness = spectrum::is_spectral(m)?;
    let (result, text) = match &witness {
        Some(p) => (
            json!({ "spectral": true, "prime": prime_json(p) }),
            format!("{module} is spectral with prime {p}"),
        ),
        None => (
            json!({ "spectral": false, "prime": Value::Null }),
            format!("{module} is not spectral"),
        ),
    };
    Ok(Report {
        command: "spectral",
        inputs: json!({ "module": module }),
        ring: Some(m.ring().to_string()),
        result,
        provenance: Provenance::Proved,
        seed: None,
        text,
        verification_failed: false,
    })
}

pub fn torsion(ws: &Workspace, module: &str, set: &str) -> CliResult<Report> {
    let m = ws.module(module)?;
    let s = ws.spec_set(set)?;
    let d = localalg::torsion_decompose(m, s)?;
    d.sequence().verify()?;
    let t = d.torsion_part();
    let f = d.torsion_free_part();
    let text = format!(
        "torsion decomposition of {module} along {s}:\n  torsion part: coker {}\n  torsion-free part: coker {}\n  saturation exponent: {}",
        dsl::render_matrix(t.relations()),
        dsl::render_matrix(f.relations()),
        d.exponent(),
    );
    Ok(Report {
        command: "torsion",
        inputs: json!({ "module": module, "set": set }),
        ring: Some(m.ring().to_string()),
        result: json!({
            "set": primes_json(s.minimal_primes()),
            "exponent": d.exponent(),
            "torsion": { "gens": t.gens(), "relations": matrix_json(t.relations()) },
            "torsion_free": { "gens": f.gens(), "relations": matrix_json(f.relations()) },
            "verified": true,
        }),
        provenance: Provenance::Proved,
        seed: None,
        text,
        verification_failed: false,
    })
}

/// Parses the inclusive `k0..k1` degree range of the `bass` command.
pub fn parse_range(text: &str) -> CliResult<(usize, usize)> {
    let parts: Vec<&str> = text.split("..").collect();
    let bad = || CliError::usage(format!("invalid range `{text}` (expected `k0..k1`, e.g. `0..2`)"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let k0: usize = parts[0].parse().map_err(|_| bad())?;
    let k1: usize = parts[1].parse().map_err(|_| bad())?;
    if k0 > k1 {
        return Err(CliError::usage(format!("empty range `{text}` (start exceeds end)")));
    }
    Ok((k0, k1))
}

fn resolve_prime(ws: &Workspace, m_ring: &modspectra::Ring, spec: &str) -> CliResult<PrimeIdeal> {
    if spec.trim_start().starts_with('(') {
        dsl::parse_prime_literal(m_ring, spec, "--prime")
    } else {
        ws.prime(spec).cloned()
    }
}

pub fn bass(ws: &Workspace, module: &str, prime: &str, range: &str) -> CliResult<Report> {
    let m = ws.module(module)?;
    let p = resolve_prime(ws, m.ring(), prime)?;
    let (k0, k1) = parse_range(range)?;
    let mut flags = Vec::new();
    for k in k0..=k1 {
        flags.push(localalg::bass_nonvanishing(&p, k, m)?);
    }
    let flags_text =
        format!("[{}]", flags.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(", "));
    Ok(Report {
        command: "bass",
        inputs: json!({ "module": module, "prime": prime, "range": range }),
        ring: Some(m.ring().to_string()),
        result: json!({ "prime": prime_json(&p), "degrees": [k0, k1], "nonvanishing": flags }),
        provenance: Provenance::Proved,
        seed: None,
        text: format!("bass-number nonvanishing for {module} at {p}, degrees {k0}..={k1}: {flags_text}"),
        verification_failed: false,
    })
}

pub fn injres(ws: &Workspace, module: &str, upto: usize) -> CliResult<Report> {
    let m = ws.module(module)?;
    let table = localalg::symbolic_injective_resolution(m, upto, None)?;
    let terms: Vec<String> = (0..=upto).map(|k| table.formal_sum(k)).collect();
    let mut text = format!(
        "symbolic injective resolution of {module} up to degree {upto}, restricted to candidate primes {}:",
        primes_text(table.primes()),
    );
    for (k, term) in terms.iter().enumerate() {
        text.push_str(&format!("\n  E^{k} = {term}"));
    }
    Ok(Report {
        command: "injres",
        inputs: json!({ "module": module, "upto": upto }),
        ring: Some(m.ring().to_string()),
        result: json!({
            "upto": upto,
            "candidates": primes_json(table.primes()),
            "terms": terms,
        }),
        provenance: Provenance::Proved,
        seed: None,
        text,
        verification_failed: false,
    })
}

/// Subcategory memberships testable through `member --class`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MemberClass {
    /// Serre subcategory of a specialization-closed set.
    Serre,
    /// Torsion class of a specialization-closed set.
    Torsion,
    /// Torsion-free class of a specialization-closed set.
    Torsionfree,
    /// One-resolving subcategory of a specialization-closed set.
    Oneres,
    /// Kernel category of a bound decreasing sequence (`--gseq`).
    Ctilde,
    /// Filtration-closed category of a bound point set (`--set`).
    Psi,
}

impl MemberClass {
    fn name(self) -> &'static str {
        match self {
            MemberClass::Serre => "serre",
            MemberClass::Torsion => "torsion",
            MemberClass::Torsionfree => "torsionfree",
            MemberClass::Oneres => "oneres",
            MemberClass::Ctilde => "ctilde",
            MemberClass::Psi => "psi",
        }
    }
}

pub fn member(
    ws: &Workspace,
    module: &str,
    class: MemberClass,
    set: Option<&str>,
    gseq: Option<&str>,
) -> CliResult<Report> {
    let m = ws.module(module)?;
    fn need_set<'a>(flag: &Option<&'a str>, class: MemberClass) -> CliResult<&'a str> {
        flag.ok_or_else(|| {
            CliError::usage(format!("member --class {} needs --set <NAME>", class.name()))
        })
    }
    let (holds, provenance, argument) = match class {
        MemberClass::Serre => {
            let name = need_set(&set, class)?;
            (classify::serre_member(m, ws.spec_set(name)?)?, Provenance::Proved, name)
        }
        MemberClass::Torsion => {
            let name = need_set(&set, class)?;
            (localalg::torsion_class_member(m, ws.spec_set(name)?)?, Provenance::Proved, name)
        }
        MemberClass::Torsionfree => {
            let name = need_set(&set, class)?;
            (localalg::torsion_free_member(m, ws.spec_set(name)?)?, Provenance::Proved, name)
        }
        MemberClass::Oneres => {
            let name = need_set(&set, class)?;
            (classify::one_resolving_member(m, ws.spec_set(name)?)?, Provenance::Proved, name)
        }
        MemberClass::Ctilde => {
            let name = gseq.ok_or_else(|| {
                CliError::usage("member --class ctilde needs --gseq <NAME>".to_string())
            })?;
            let verdict = classify::c_tilde_member(m, ws.gseq(name)?)?;
            (verdict.holds(), verdict.provenance(), name)
        }
        MemberClass::Psi => {
            let name = need_set(&set, class)?;
            (classify::psi_member(m, ws.point_set(name)?)?, Provenance::Proved, name)
        }
    };
    Ok(Report {
        command: "member",
        inputs: json!({ "module": module, "class": class.name(), "set": set, "gseq": gseq }),
        ring: Some(m.ring().to_string()),
        result: json!({ "class": class.name(), "member": holds }),
        provenance,
        seed: None,
        text: format!(
            "{module} ∈ {}({argument}): {holds} [{}]",
            class.name(),
            provenance.as_str()
        ),
        verification_failed: false,
    })
}

fn suite_kind(token: &str) -> CliResult<SuiteKind> {
    match token {
        "p3_9" => Ok(SuiteKind::SerreSupport),
        "ashah" => Ok(SuiteKind::NarrowSerre),
        "dr9_4" => Ok(SuiteKind::AssSubsets),
        "bass" => Ok(SuiteKind::BassCriterion),
        "torsionpair" => Ok(SuiteKind::TorsionPairs),
        "supp_ass" => Ok(SuiteKind::SupportFormula),
        other => Err(CliError::usage(format!(
            "unknown suite `{other}` (expected one of p3_9, ashah, dr9_4, bass, torsionpair, supp_ass)"
        ))),
    }
}

pub fn verify(
    suite: &str,
    ring: Option<&str>,
    bound: Option<u64>,
    seed: Option<u64>,
    samples: Option<usize>,
) -> CliResult<Report> {
    let kind = suite_kind(suite)?;
    let mut config = SuiteConfig::default();
    if let Some(text) = ring {
        config.ring = Some(dsl::parse_ring_literal(text, "--ring")?);
    }
    if let Some(b) = bound {
        config.bound = b;
    }
    if let Some(s) = seed {
        config.seed = s;
    }
    if let Some(n) = samples {
        config.samples = n;
    }
    let report = run_suite(kind, &config)?;

    let mut result = match report.result() {
        Value::Object(map) => map.clone(),
        other => {
            let mut map = Map::new();
            map.insert("detail".to_string(), other.clone());
            map
        }
    };
    result.insert("passed".to_string(), Value::Bool(report.passed()));

    let ring_label = ring
        .map(|r| r.to_string())
        .or_else(|| result.get("ring").and_then(|v| v.as_str()).map(|s| s.to_string()));

    let mut text = format!(
        "suite {suite} ({}): {} [{}]",
        kind.name(),
        if report.passed() { "PASS" } else { "FAIL" },
        report.provenance().as_str()
    );
    if let (Some(l), Some(r)) = (result.get("lhs"), result.get("rhs")) {
        text.push_str(&format!("\n  lhs = {l}, rhs = {r}"));
    }
    if let Some(c) = result.get("checks") {
        let f = result.get("failures").cloned().unwrap_or(Value::Null);
        text.push_str(&format!("\n  checks = {c}, failures = {f}"));
    }
    if let Some(seed) = report.seed() {
        text.push_str(&format!("\n  seed = {seed}"));
    }
    if !report.passed() {
        if let Some(ce) = result.get("counterexample") {
            text.push_str(&format!("\n  counterexample: {ce}"));
        }
    }

    Ok(Report {
        command: "verify",
        inputs: json!({
            "suite": suite,
            "ring": ring,
            "bound": bound,
            "seed": seed,
            "samples": samples,
        }),
        ring: ring_label,
        result: Value::Object(result),
        provenance: report.provenance(),
        seed: report.seed(),
        text,
        verification_failed: !report.passed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_workspace;

    fn ws(text: &str) -> Workspace {
        parse_workspace(text, "test").unwrap()
    }

    #[test]
    fn ass_of_z12_lists_two_and_three() {
        let ws = ws("ring R = ZZ\nmodule M = coker [[12]]");
        let report = ass(&ws, "M").unwrap();
        assert_eq!(report.envelope()["result"]["ass"], json!([["2"], ["3"]]));
        assert_eq!(report.envelope()["ring"], json!("ZZ"));
        assert_eq!(report.envelope()["provenance"], json!("proved"));
    }

    #[test]
    fn bass_flags_of_the_free_module_at_two() {
        let ws = ws("ring R = ZZ\nmodule Z = coker [[]]");
        let report = bass(&ws, "Z", "(2)", "0..2").unwrap();
        assert_eq!(report.envelope()["result"]["nonvanishing"], json!([false, true, false]));
    }

    #[test]
    fn range_parsing_is_inclusive_and_validated() {
        assert_eq!(parse_range("0..2").unwrap(), (0, 2));
        assert_eq!(parse_range("1..1").unwrap(), (1, 1));
        assert!(parse_range("2..0").is_err());
        assert!(parse_range("x..2").is_err());
        assert!(parse_range("0..1..2").is_err());
    }

    #[test]
    fn member_requires_the_matching_flag() {
        let ws = ws("ring R = ZZ\nprime p = (2)\nset S = closure{ p }\nmodule M = coker [[2]]");
        let err = member(&ws, "M", MemberClass::Serre, None, None).unwrap_err();
        assert!(err.to_string().contains("--set"), "got: {err}");
        let report = member(&ws, "M", MemberClass::Serre, Some("S"), None).unwrap();
        assert_eq!(report.envelope()["result"]["member"], json!(true));
    }

    #[test]
    fn unknown_suite_token_is_a_usage_error() {
        let err = verify("nope", None, None, None, None).unwrap_err();
        assert!(err.to_string().contains("unknown suite"), "got: {err}");
    }
}
