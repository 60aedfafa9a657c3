//! Uniform verdict reports and the corpus runner behind the `corpus` command.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::exact::rat;
use crate::germ::{
    germ_incidence_verdict, parse_germ, sigma2_corpus, sigma2_restriction, sigma_index, xayb,
    GermError, GermReport, SourceWeights,
};
use crate::quiver::{
    enumerate_orbits, ext_order, ext_table, orbit_incidence_verdict, OrbitReport, QuiverError,
    QuiverSpec,
};
use crate::schubert::{incidence_verdict, PartialPermutation, SchubertReport};
use crate::weights::{positivity, verify_functional, PositivityCertificate, WeightSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Schubert,
    Quiver,
    Germ,
    RawWeights,
}

/// `true`/`false`, or `"not-applicable"` when no orbit is involved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Incidence {
    Holds(bool),
    NotApplicable,
}

impl Serialize for Incidence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Incidence::Holds(b) => s.serialize_bool(*b),
            Incidence::NotApplicable => s.serialize_str("not-applicable"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerdictReport {
    pub family: Family,
    pub input: Value,
    pub weight_system: WeightSystem,
    pub certificate: PositivityCertificate,
    pub incidence: Incidence,
    pub diagnostics: Vec<String>,
    /// Family-specific data (permutation, multiplicities, codimension, ...).
    pub details: Value,
}

impl VerdictReport {
    pub fn raw(ws: WeightSystem) -> Self {
        let certificate = positivity(&ws);
        let mut diagnostics = Vec::new();
        if ws.contains_zero_weight() {
            diagnostics.push("the zero weight is present".to_string());
        }
        VerdictReport {
            family: Family::RawWeights,
            input: serde_json::to_value(&ws).expect("serializable"),
            weight_system: ws,
            certificate,
            incidence: Incidence::NotApplicable,
            diagnostics,
            details: Value::Null,
        }
    }

    pub fn from_schubert(r: &SchubertReport) -> Self {
        VerdictReport {
            family: Family::Schubert,
            input: json!({ "matrix": r.matrix }),
            weight_system: r.weight_system(),
            certificate: r.certificate.clone(),
            incidence: Incidence::Holds(r.incidence),
            diagnostics: Vec::new(),
            details: json!({ "pi": r.pi, "codim": r.codim }),
        }
    }

    pub fn from_orbit(q: &QuiverSpec, r: &OrbitReport) -> Self {
        VerdictReport {
            family: Family::Quiver,
            input: json!({
                "diagram": q.kind().to_string(),
                "orientation": q.orientation_string(),
                "mu": r.mu,
            }),
            weight_system: r.weight_system(),
            certificate: r.certificate.clone(),
            incidence: Incidence::Holds(r.incidence),
            diagnostics: Vec::new(),
            details: json!({ "dim": r.dim, "codim": r.codim }),
        }
    }

    pub fn from_germ(r: &GermReport) -> Self {
        VerdictReport {
            family: Family::Germ,
            input: json!({ "germ": r.germ, "jet": r.jet }),
            weight_system: r.weight_system(),
            certificate: r.certificate.clone(),
            incidence: Incidence::Holds(r.incidence),
            diagnostics: r.diagnostics.clone(),
            details: json!({ "codim": r.codim }),
        }
    }

    /// The certificate verifies and the incidence flag agrees with it.
    pub fn is_consistent(&self) -> bool {
        self.certificate.verify(&self.weight_system)
            && match self.incidence {
                Incidence::Holds(b) => b == self.certificate.is_positive(),
                Incidence::NotApplicable => true,
            }
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("bad corpus configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Germ(#[from] GermError),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct RangeConfig {
    pub max: u32,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct SchubertConfig {
    pub max_n: usize,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct QuiverSweep {
    pub diagram: String,
    #[serde(default)]
    pub orientation: Option<String>,
    #[serde(default)]
    pub all_orientations: bool,
    pub dim_bound: u32,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct Sigma2Config {
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub count: usize,
}

fn default_seed() -> u64 {
    1
}

/// Families and bounds to sweep; absent entries are skipped.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct CorpusConfig {
    #[serde(default)]
    pub xayb: Option<RangeConfig>,
    #[serde(default)]
    pub iiiab: Option<RangeConfig>,
    #[serde(default)]
    pub schubert: Option<SchubertConfig>,
    #[serde(default)]
    pub quiver: Vec<QuiverSweep>,
    #[serde(default)]
    pub sigma2: Option<Sigma2Config>,
}

impl CorpusConfig {
    pub fn from_json(text: &str) -> Result<Self, ReportError> {
        serde_json::from_str(text).map_err(|e| ReportError::Config(e.to_string()))
    }
}

/// Outcome of a corpus run: the aggregate JSON and the number of property
/// violations found.
#[derive(Clone, Debug)]
pub struct CorpusOutcome {
    pub aggregate: Value,
    pub violations: usize,
}

fn xayb_sweep(max: u32) -> Result<Value, ReportError> {
    let pairs: Vec<(u32, u32)> = (2..=max).flat_map(|a| (a..=max).map(move |b| (a, b))).collect();
    let reports: Vec<GermReport> = pairs
        .par_iter()
        .map(|&(a, b)| germ_incidence_verdict(&xayb(a, b), SourceWeights::Include))
        .collect::<Result<_, _>>()?;
    let mut positive = Vec::new();
    let mut violations = Vec::new();
    for (&(a, b), r) in pairs.iter().zip(&reports) {
        if r.incidence {
            positive.push([a, b]);
        }
        if !r.certificate.verify(&r.weight_system()) {
            violations.push(format!("certificate for (x^{a}, y^{b}) does not verify"));
        }
    }
    Ok(json!({
        "count": pairs.len(),
        "positive": positive,
        "notPositive": pairs.len() - positive.len(),
        "violations": violations,
    }))
}

fn iiiab_sweep(max: u32) -> Result<Value, ReportError> {
    let pairs: Vec<(u32, u32)> = (2..=max).flat_map(|a| (2..=max).map(move |b| (a, b))).collect();
    let rows: Vec<(GermReport, bool)> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let f = parse_germ(&format!("x^{a}, x*y, y^{b}"))?.with_jet(a + b)?;
            let r = germ_incidence_verdict(&f, SourceWeights::Include)?;
            let lambda = [rat(b as i64), rat(a as i64)];
            let ok = verify_functional(&r.weight_system(), &lambda);
            Ok((r, ok))
        })
        .collect::<Result<_, GermError>>()?;
    let mut violations = Vec::new();
    let mut positive = 0;
    for (&(a, b), (r, functional_ok)) in pairs.iter().zip(&rows) {
        if r.incidence {
            positive += 1;
        } else {
            violations.push(format!("III_{{{a},{b}}} is not positive"));
        }
        if !functional_ok {
            violations.push(format!("({b}, {a}) is not positive on III_{{{a},{b}}}"));
        }
        if !r.certificate.verify(&r.weight_system()) {
            violations.push(format!("certificate for III_{{{a},{b}}} does not verify"));
        }
    }
    Ok(json!({
        "count": pairs.len(),
        "positive": positive,
        "notPositive": pairs.len() - positive,
        "violations": violations,
    }))
}

fn schubert_sweep(max_n: usize) -> Value {
    let orbits: Vec<PartialPermutation> = (1..=max_n).flat_map(PartialPermutation::all).collect();
    let reports: Vec<SchubertReport> = orbits.par_iter().map(incidence_verdict).collect();
    let mut violations = Vec::new();
    let mut positive = 0;
    for r in &reports {
        if r.incidence {
            positive += 1;
        } else {
            violations.push(format!("orbit {:?} is not positive", r.matrix));
        }
        if !r.certificate.verify(&r.weight_system()) {
            violations.push(format!("certificate for {:?} does not verify", r.matrix));
        }
    }
    json!({
        "count": reports.len(),
        "positive": positive,
        "notPositive": reports.len() - positive,
        "violations": violations,
    })
}

fn quiver_sweep(sweep: &QuiverSweep, seed: u64) -> Result<Vec<Value>, ReportError> {
    let quivers = if sweep.all_orientations {
        QuiverSpec::all_orientations(&sweep.diagram)?
    } else {
        vec![QuiverSpec::from_diagram(&sweep.diagram, sweep.orientation.as_deref())?]
    };
    let mut out = Vec::new();
    for q in &quivers {
        let table = ext_table(q, seed)?;
        let orbits = enumerate_orbits(&table, sweep.dim_bound);
        let reports: Vec<OrbitReport> = orbits
            .par_iter()
            .map(|mu| orbit_incidence_verdict(&table, mu))
            .collect::<Result<_, _>>()?;
        let acyclic = ext_order(&table).is_some();
        let mut violations = Vec::new();
        if !acyclic {
            violations.push("the Ext digraph has a cycle".to_string());
        }
        let mut positive = 0;
        for (mu, r) in orbits.iter().zip(&reports) {
            if r.incidence {
                positive += 1;
            } else {
                violations.push(format!("orbit {} is not positive", mu.label()));
            }
            if !r.certificate.verify(&r.weight_system()) {
                violations.push(format!("certificate for {} does not verify", mu.label()));
            }
        }
        out.push(json!({
            "diagram": q.kind().to_string(),
            "orientation": q.orientation_string(),
            "dimBound": sweep.dim_bound,
            "orbits": reports.len(),
            "positive": positive,
            "notPositive": reports.len() - positive,
            "extAcyclic": acyclic,
            "violations": violations,
        }));
    }
    Ok(out)
}

fn sigma2_sweep(config: &Sigma2Config) -> Result<Value, ReportError> {
    let corpus = sigma2_corpus(config.seed, config.count);
    let rows: Vec<(String, usize, bool, bool)> = corpus
        .par_iter()
        .map(|g| {
            let r = sigma2_restriction(&g.germ)?;
            Ok((
                g.germ.to_string(),
                sigma_index(&g.germ),
                r.polynomial.is_zero(),
                r.monomial_model.is_some(),
            ))
        })
        .collect::<Result<_, GermError>>()?;
    let mut violations = Vec::new();
    let (mut vanishing, mut promoted) = (0, 0);
    for (germ, sigma, zero, promo) in &rows {
        vanishing += usize::from(*zero);
        promoted += usize::from(*promo);
        if *zero != (*sigma < 2) {
            violations.push(format!(
                "({germ}): sigma index {sigma} but the restriction {} zero",
                if *zero { "is" } else { "is not" }
            ));
        }
    }
    Ok(json!({
        "count": rows.len(),
        "vanishing": vanishing,
        "nonvanishing": rows.len() - vanishing,
        "promoted": promoted,
        "violations": violations,
    }))
}

fn count_violations(v: &Value) -> usize {
    match v {
        Value::Array(items) => items.iter().map(count_violations).sum(),
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| {
                if k == "violations" {
                    v.as_array().map_or(0, Vec::len)
                } else {
                    count_violations(v)
                }
            })
            .sum(),
        _ => 0,
    }
}

/// Runs every configured sweep. `quiver_seed` drives the sampling of
/// indecomposables; results do not depend on it.
pub fn run_corpus(config: &CorpusConfig, quiver_seed: u64) -> Result<CorpusOutcome, ReportError> {
    let mut aggregate = serde_json::Map::new();
    if let Some(c) = &config.xayb {
        aggregate.insert("xayb".into(), xayb_sweep(c.max)?);
    }
    if let Some(c) = &config.iiiab {
        aggregate.insert("iiiab".into(), iiiab_sweep(c.max)?);
    }
    if let Some(c) = &config.schubert {
        aggregate.insert("schubert".into(), schubert_sweep(c.max_n));
    }
    if !config.quiver.is_empty() {
        let mut all = Vec::new();
        for sweep in &config.quiver {
            all.extend(quiver_sweep(sweep, quiver_seed)?);
        }
        aggregate.insert("quiver".into(), Value::Array(all));
    }
    if let Some(c) = &config.sigma2 {
        aggregate.insert("sigma2".into(), sigma2_sweep(c)?);
    }
    let mut aggregate = Value::Object(aggregate);
    let violations = count_violations(&aggregate);
    aggregate["totalViolations"] = json!(violations);
    Ok(CorpusOutcome {
        aggregate,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raw_report_shape() {
        let ws = WeightSystem::with_rank(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let r = VerdictReport::raw(ws);
        assert!(r.is_consistent());
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["family"], "raw-weights");
        assert_eq!(v["incidence"], "not-applicable");
        assert_eq!(v["certificate"]["verdict"], "Positive");
        assert!(v["weightSystem"]["weights"].is_array());
    }

    #[test]
    fn small_corpus() {
        let config = CorpusConfig::from_json(
            r#"{"xayb": {"max": 4}, "schubert": {"maxN": 2},
                "quiver": [{"diagram": "A2", "dimBound": 2}],
                "sigma2": {"count": 10}}"#,
        )
        .unwrap();
        let out = run_corpus(&config, 1).unwrap();
        assert_eq!(out.violations, 0);
        assert_eq!(out.aggregate["xayb"]["positive"], json!([[2, 2], [2, 3], [2, 4]]));
        assert_eq!(out.aggregate["schubert"]["count"], 9);
        assert_eq!(out.aggregate["totalViolations"], 0);
        assert!(CorpusConfig::from_json(r#"{"bogus": 1}"#).is_err());
    }
}
