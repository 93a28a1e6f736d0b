//! Verification suites, report assembly and rendering.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::panic::{self, AssertUnwindSafe};
use std::str::FromStr;
use std::sync::OnceLock;
use std::time::Instant;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cayley::{self, DecompositionProjectors};
use crate::chamber::ChamberScalar;
use crate::classify::{
    self, find_certificate_in, BasisLabel, DiagramRecord, JordanRepresentative, KernelSpace,
    Verdict, YoungDiagram,
};
use crate::endo::{self, Endo};
use crate::error::{Error, Result};
use crate::exterior::{volume_form, Covector, KForm, Vector, DIM};
use crate::invariant::{
    self, a, bryant_salamon_metric, build_bryant_salamon, x, ChamberForm, InvariantField,
    InvariantMetric, COFRAME_DIM, COFRAME_NAMES, DS,
};
use crate::lie::{span_of, LieFrame, LIE_DIM};
use crate::linalg::{self, Matrix};
use crate::poly::Poly;
use crate::random::Sampler;
use crate::scalar::FieldScalar;
use crate::serial::{self, ChamberFormRecord, ChamberScalarRecord, KFormRecord, ScalarRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Basics,
    Decomposition,
    Classify,
    BryantSalamon,
    Perturb,
}

impl Suite {
    /// Canonical order.
    pub const ALL: [Suite; 5] = [
        Suite::Basics,
        Suite::Decomposition,
        Suite::Classify,
        Suite::BryantSalamon,
        Suite::Perturb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Basics => "basics",
            Suite::Decomposition => "decomposition",
            Suite::Classify => "classify",
            Suite::BryantSalamon => "bryant-salamon",
            Suite::Perturb => "perturb",
        }
    }

    fn checks(self) -> &'static [(&'static str, CheckFn)] {
        match self {
            Suite::Basics => BASICS,
            Suite::Decomposition => DECOMPOSITION,
            Suite::Classify => CLASSIFY,
            Suite::BryantSalamon => BRYANT_SALAMON,
            Suite::Perturb => PERTURB,
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Text,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

/// Shift of one structure constant `c^k_{ij}` in both Lie frames.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fault {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub delta: FieldScalar,
}

impl Fault {
    pub fn new(i: usize, j: usize, k: usize, delta: FieldScalar) -> Result<Self> {
        if i >= LIE_DIM || j >= LIE_DIM || k >= LIE_DIM {
            return Err(Error::Dimension(format!(
                "structure constant ({i}, {j}, {k}) out of range"
            )));
        }
        Ok(Fault { i, j, k, delta })
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    /// Empty means every suite.
    pub suites: Vec<Suite>,
    pub seed: u64,
    pub format: Format,
    /// Include wall-clock durations (makes output run-dependent).
    pub timings: bool,
    pub fault: Option<Fault>,
}

impl RunConfig {
    /// Selected suites, deduplicated, in canonical order.
    pub fn selected(&self) -> Vec<Suite> {
        if self.suites.is_empty() {
            return Suite::ALL.to_vec();
        }
        let mut s = self.suites.clone();
        s.sort();
        s.dedup();
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_millis: Option<u64>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub internal_error: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub failed: usize,
    pub internal_errors: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub seed: u64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault: Option<Value>,
    #[serde(flatten)]
    pub facts: BTreeMap<String, Value>,
    pub suites: Vec<SuiteReport>,
    pub summary: Summary,
}

impl Report {
    /// 0 when everything passed, 1 on a failed check, 2 on an internal error.
    pub fn exit_code(&self) -> i32 {
        if self.summary.internal_errors > 0 {
            2
        } else if self.summary.failed > 0 {
            1
        } else {
            0
        }
    }

    pub fn check(&self, suite: &str, name: &str) -> Option<&CheckResult> {
        self.suites
            .iter()
            .find(|s| s.name == suite)?
            .checks
            .iter()
            .find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        serial::to_json(self)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let timed = self
            .suites
            .iter()
            .flat_map(|s| &s.checks)
            .any(|c| c.duration_millis.is_some());
        let _ = write!(out, "{:<16}{:<28}{:<8}", "SUITE", "CHECK", "RESULT");
        if timed {
            let _ = write!(out, "{:>10}", "MS");
        }
        out.push('\n');
        for s in &self.suites {
            for c in &s.checks {
                let status = match (c.passed, c.internal_error) {
                    (_, true) => "ERROR",
                    (true, _) => "PASS",
                    (false, _) => "FAIL",
                };
                let _ = write!(out, "{:<16}{:<28}{:<8}", s.name, c.name, status);
                if let Some(ms) = c.duration_millis {
                    let _ = write!(out, "{ms:>10}");
                }
                out.push('\n');
            }
        }
        if let Some(Value::Array(rows)) = self.facts.get("classification") {
            out.push('\n');
            let _ = writeln!(
                out,
                "{:<20}{:<7}{:>9}  {:<12}PAIR",
                "DIAGRAM", "LABEL", "DIM K", "VERDICT"
            );
            for r in rows {
                let diagram = r["diagram"]
                    .as_array()
                    .map(|p| {
                        let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                        format!("({})", parts.join(","))
                    })
                    .unwrap_or_default();
                let pair = match &r["pair"]["labels"] {
                    Value::Array(l) => format!(
                        "{} {}",
                        l[0].as_str().unwrap_or(""),
                        l[1].as_str().unwrap_or("")
                    ),
                    _ if r["pair"].is_object() => "combination".to_string(),
                    _ => "-".to_string(),
                };
                let _ = writeln!(
                    out,
                    "{:<20}{:<7}{:>9}  {:<12}{}",
                    diagram,
                    r["label"].as_str().unwrap_or("-"),
                    r["dim_kernel"],
                    r["verdict"].as_str().unwrap_or(""),
                    pair
                );
            }
        }
        out.push('\n');
        let _ = writeln!(out, "seed: {}", self.seed);
        for (k, v) in &self.facts {
            if k != "classification" {
                let _ = writeln!(out, "{k}: {v}");
            }
        }
        let _ = writeln!(
            out,
            "checks: {}  failed: {}  internal errors: {}",
            self.summary.checks, self.summary.failed, self.summary.internal_errors
        );
        out
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Text => Ok(self.to_text()),
        }
    }
}

/// Runs the selected suites (in parallel) and assembles the report in
/// canonical order.
pub fn run(config: &RunConfig) -> Report {
    let ctx = Ctx::new(config);
    let outputs: Vec<(Suite, Vec<CheckOutput>)> = config
        .selected()
        .into_par_iter()
        .map(|suite| {
            let results = suite
                .checks()
                .iter()
                .map(|(name, f)| run_check(&ctx, suite, name, *f))
                .collect();
            (suite, results)
        })
        .collect();

    let mut facts = BTreeMap::new();
    let mut suites = Vec::new();
    let (mut total, mut failed, mut internal) = (0, 0, 0);
    for (suite, results) in outputs {
        let mut checks = Vec::new();
        for (c, fs) in results {
            total += 1;
            failed += usize::from(!c.passed);
            internal += usize::from(c.internal_error);
            for (k, v) in fs {
                facts.insert(k.to_string(), v);
            }
            checks.push(c);
        }
        suites.push(SuiteReport {
            name: suite.name(),
            passed: checks.iter().all(|c| c.passed),
            checks,
        });
    }
    Report {
        seed: config.seed,
        passed: failed == 0,
        fault: config
            .fault
            .as_ref()
            .map(|f| json!({"i": f.i, "j": f.j, "k": f.k, "delta": ScalarRecord::from(&f.delta)})),
        facts,
        suites,
        summary: Summary {
            checks: total,
            failed,
            internal_errors: internal,
        },
    }
}

type CheckFn = fn(&Ctx, &mut Sampler) -> Result<Outcome>;
type CheckOutput = (CheckResult, Vec<(&'static str, Value)>);

struct DiagramWork {
    rep: JordanRepresentative,
    kernel: KernelSpace,
    record: DiagramRecord,
}

struct Ctx {
    seed: u64,
    timings: bool,
    connection: LieFrame,
    killing: LieFrame,
    diagrams: OnceLock<Vec<DiagramWork>>,
}

impl Ctx {
    fn new(config: &RunConfig) -> Self {
        let (mut connection, mut killing) = (LieFrame::connection(), LieFrame::killing());
        if let Some(f) = &config.fault {
            connection = connection.with_fault(f.i, f.j, f.k, &f.delta);
            killing = killing.with_fault(f.i, f.j, f.k, &f.delta);
        }
        Ctx {
            seed: config.seed,
            timings: config.timings,
            connection,
            killing,
            diagrams: OnceLock::new(),
        }
    }

    fn diagrams(&self) -> &[DiagramWork] {
        self.diagrams.get_or_init(|| {
            YoungDiagram::enumerate()
                .par_iter()
                .map(|d| {
                    let start = Instant::now();
                    let rep = JordanRepresentative::new(d);
                    let kernel = KernelSpace::compute(&rep);
                    let certificate = find_certificate_in(&rep, &kernel);
                    let record = DiagramRecord {
                        diagram: d.clone(),
                        dim_kernel: kernel.dim(),
                        certificate,
                        jordan_type_ok: rep.has_expected_type(),
                        millis: start.elapsed().as_millis(),
                    };
                    DiagramWork {
                        rep,
                        kernel,
                        record,
                    }
                })
                .collect()
        })
    }
}

/// Per-check seed so results do not depend on which suites run.
fn check_seed(seed: u64, suite: Suite, name: &str) -> u64 {
    // FNV-1a
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in suite.name().bytes().chain(*b"/").chain(name.bytes()) {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h ^ seed
}

fn run_check(ctx: &Ctx, suite: Suite, name: &str, f: CheckFn) -> CheckOutput {
    let mut sampler = Sampler::new(check_seed(ctx.seed, suite, name));
    let start = Instant::now();
    let result = panic::catch_unwind(AssertUnwindSafe(|| f(ctx, &mut sampler)));
    let millis = start.elapsed().as_millis() as u64;
    let (outcome, internal_error) = match result {
        Ok(Ok(o)) => (o, false),
        Ok(Err(e)) => (
            Outcome::failed(json!({}), json!({"error": e.to_string()})),
            false,
        ),
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            (Outcome::failed(json!({}), json!({"panic": msg})), true)
        }
    };
    (
        CheckResult {
            name: name.to_string(),
            passed: outcome.witness.is_none(),
            detail: Value::Object(outcome.detail),
            witness: outcome.witness,
            duration_millis: ctx.timings.then_some(millis),
            internal_error,
        },
        outcome.facts,
    )
}

/// Check outcome: passes exactly when no witness was recorded.
struct Outcome {
    detail: serde_json::Map<String, Value>,
    witness: Option<Value>,
    facts: Vec<(&'static str, Value)>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            detail: serde_json::Map::new(),
            witness: None,
            facts: Vec::new(),
        }
    }

    fn failed(detail: Value, witness: Value) -> Self {
        let mut o = Outcome::new();
        if let Value::Object(m) = detail {
            o.detail = m;
        }
        o.witness = Some(witness);
        o
    }

    fn note(&mut self, key: &str, value: impl Into<Value>) {
        self.detail.insert(key.to_string(), value.into());
    }

    fn fact(&mut self, key: &'static str, value: impl Into<Value>) {
        self.facts.push((key, value.into()));
    }

    /// Records the first failure. Returns `ok`.
    fn require(&mut self, ok: bool, case: &str, witness: impl FnOnce() -> Value) -> bool {
        if !ok && self.witness.is_none() {
            let mut w = witness();
            if let Value::Object(m) = &mut w {
                m.insert("case".into(), case.into());
            } else {
                w = json!({"case": case, "value": w});
            }
            self.witness = Some(w);
        }
        ok
    }

    fn require_zero_form(&mut self, f: &KForm, case: &str) -> bool {
        self.require(f.is_zero(), case, || json!({"nonzero": kjson(f)}))
    }

    fn require_eq_forms(&mut self, lhs: &KForm, rhs: &KForm, case: &str) -> bool {
        self.require(
            lhs == rhs,
            case,
            || json!({"lhs": kjson(lhs), "rhs": kjson(rhs)}),
        )
    }

    fn require_zero_chamber(&mut self, f: &ChamberForm, case: &str) -> bool {
        self.require(f.is_zero(), case, || json!({"nonzero": cjson(f)}))
    }

    fn done(self) -> Result<Outcome> {
        Ok(self)
    }
}

fn kjson(f: &KForm) -> Value {
    serde_json::to_value(KFormRecord::from(f)).expect("serializable")
}

fn cjson(f: &ChamberForm) -> Value {
    serde_json::to_value(ChamberFormRecord::from(f)).expect("serializable")
}

fn csjson(c: &ChamberScalar) -> Value {
    serde_json::to_value(ChamberScalarRecord::from(c)).expect("serializable")
}

fn sjson(x: &FieldScalar) -> Value {
    serde_json::to_value(ScalarRecord::from(x)).expect("serializable")
}

fn vjson(v: &Vector) -> Value {
    serde_json::to_value(serial::vector_record(v)).expect("serializable")
}

fn ejson(e: &Endo) -> Value {
    serde_json::to_value(serial::matrix_record(e.matrix())).expect("serializable")
}

fn mjson(m: &Matrix) -> Value {
    serde_json::to_value(serial::matrix_record(m)).expect("serializable")
}

fn yjson(y: &InvariantField) -> Value {
    json!({"a": csjson(&y.a), "b": csjson(&y.b), "c": csjson(&y.c)})
}

fn coords_json(v: &[FieldScalar]) -> Value {
    Value::Array(v.iter().map(sjson).collect())
}

/// `-6e^{123456}` style rendering.
pub fn blade_text(f: &KForm) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = f
        .terms()
        .map(|(m, c)| {
            let digits: String = m.indices().map(|i| i.to_string()).collect();
            let coeff = if c.is_one() {
                String::new()
            } else if *c == -FieldScalar::one() {
                "-".into()
            } else if c.is_rational() {
                c.to_string()
            } else {
                format!("({c})")
            };
            format!("{coeff}e^{{{digits}}}")
        })
        .collect();
    parts.join(" + ")
}

fn int(n: i64) -> FieldScalar {
    FieldScalar::from_int(n)
}

fn sum_blades(blades: &[&[usize]]) -> KForm {
    blades.iter().fold(KForm::zero(blades[0].len()), |acc, b| {
        acc.add(&KForm::blade(b))
    })
}

fn diagram_parts(parts: &[usize]) -> YoungDiagram {
    YoungDiagram::new(parts.to_vec()).expect("valid partition")
}

fn gamma<'a>(ctx: &'a Ctx, label: &str) -> &'a DiagramWork {
    ctx.diagrams()
        .iter()
        .find(|w| w.record.diagram.gamma_label() == Some(label))
        .expect("labelled diagram")
}

// ---------------------------------------------------------------- basics

const BASICS: &[(&str, CheckFn)] = &[
    ("wedge", basics_wedge),
    ("contraction", basics_contraction),
    ("hodge_star", basics_hodge),
    ("rho_action", basics_rho),
    ("pullback", basics_pullback),
    ("exponential", basics_exponential),
    ("rank_one_identities", basics_rank_one),
    ("jordan_chevalley", basics_jordan_chevalley),
    ("nullspace", basics_nullspace),
    ("stabilizer", basics_stabilizer),
    ("nondegeneracy", basics_nondegeneracy),
    ("discrepancy", basics_discrepancy),
    ("serialization", basics_serialization),
];

fn basics_wedge(_: &Ctx, r: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let e12 = KForm::blade(&[1]).wedge(&KForm::blade(&[2]));
    o.require_eq_forms(&e12, &KForm::blade(&[1, 2]), "e^1∧e^2");
    o.require_zero_form(
        &KForm::blade(&[1, 2]).wedge(&KForm::blade(&[1, 2])),
        "e^12∧e^12",
    );

    let alpha = sum_blades(&[&[1, 2], &[3, 4], &[5, 6], &[7, 8]]);
    let half_square = alpha.wedge(&alpha).scale(&FieldScalar::from_ratio(1, 2));
    let expected = sum_blades(&[
        &[1, 2, 3, 4],
        &[1, 2, 5, 6],
        &[1, 2, 7, 8],
        &[3, 4, 5, 6],
        &[3, 4, 7, 8],
        &[5, 6, 7, 8],
    ]);
    o.require_eq_forms(&half_square, &expected, "α∧α/2");
    o.require_eq_forms(&cayley::build_omega().alpha2, &expected, "alpha2 part of Ω");

    let n = 40;
    for _ in 0..n {
        let (p, q) = (r.int_in(0, 4) as usize, r.int_in(0, 4) as usize);
        let m = r.int_in(0, 3) as usize;
        let (a, b, c) = (
            r.sparse_form(p, 5),
            r.sparse_form(q, 5),
            r.sparse_form(m, 4),
        );
        let ab = a.wedge(&b);
        let sign = if (p * q) % 2 == 1 { -1 } else { 1 };
        let ba = b.wedge(&a).scale(&int(sign));
        if !o.require(
            ab == ba,
            "graded commutativity",
            || json!({"a": kjson(&a), "b": kjson(&b)}),
        ) {
            break;
        }
        let left = ab.wedge(&c);
        let right = a.wedge(&b.wedge(&c));
        if !o.require(
            left == right,
            "associativity",
            || json!({"a": kjson(&a), "b": kjson(&b), "c": kjson(&c)}),
        ) {
            break;
        }
    }
    let overflow = volume_form().wedge(&KForm::blade(&[1]));
    o.require(
        overflow.is_zero() && overflow.degree() == 9,
        "degree overflow",
        || json!({"degree": overflow.degree()}),
    );
    o.note("random_instances", n);
    o.done()
}

fn basics_contraction(_: &Ctx, r: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let e12 = KForm::blade(&[1, 2]);
    o.require_eq_forms(
        &e12.contract(&Vector::basis(1))?,
        &KForm::blade(&[2]),
        "e_1⌟e^12",
    );
    o.require_eq_forms(
        &e12.contract(&Vector::basis(2))?,
        &KForm::blade(&[1]).neg(),
        "e_2⌟e^12",
    );
    let scalar = KForm::scalar(int(3)).contract(&Vector::basis(1));
    o.require(
        matches!(scalar, Err(Error::ContractScalar)),
        "scalar contraction",
        || json!({"result": format!("{scalar:?}")}),
    );
    let eta = cayley::omega()
        .contract(&Vector::basis(8))?
        .contract(&Vector::basis(7))?;
    let expected = sum_blades(&[&[1, 2], &[3, 4], &[5, 6]]).neg();
    o.require_eq_forms(&eta, &expected, "e_7⌟e_8⌟Ω");

    let n = 120;
    for _ in 0..n {
        let p = r.int_in(1, 4) as usize;
        let q = r.int_in(1, (DIM - p).min(4) as i64) as usize;
        let (a, b, v) = (r.sparse_form(p, 6), r.sparse_form(q, 6), r.vector());
        let lhs = a.wedge(&b).contract(&v)?;
        let sign = if p % 2 == 1 { -1 } else { 1 };
        let rhs = a
            .contract(&v)?
            .wedge(&b)
            .add(&a.wedge(&b.contract(&v)?).scale(&int(sign)));
        if !o.require(
            lhs == rhs,
            "antiderivation",
            || json!({"a": kjson(&a), "b": kjson(&b), "v": vjson(&v)}),
        ) {
            break;
        }
        if p >= 2 {
            let twice = a.contract(&v)?.contract(&v)?;
            if !o.require(
                twice.is_zero(),
                "ι_v ι_v = 0",
                || json!({"a": kjson(&a), "v": vjson(&v)}),
            ) {
                break;
            }
        }
    }
    o.note("random_instances", n);
    o.done()
}

fn basics_hodge(_: &Ctx, r: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let (e1234, e5678) = (KForm::blade(&[1, 2, 3, 4]), KForm::blade(&[5, 6, 7, 8]));
    o.require_eq_forms(&e1234.hodge_star(), &e5678, "*e^1234");
    o.require_eq_forms(&e5678.hodge_star(), &e1234, "*e^5678");
    o.require_eq_forms(&cayley::omega().hodge_star(), cayley::omega(), "*Ω");
    let vol = volume_form();
    let n = 30;
    for _ in 0..n {
        let k = r.int_in(0, 8) as usize;
        let (a, b) = (r.sparse_form(k, 6), r.sparse_form(k, 6));
        let ip = a.inner(&b);
        let ok = a.wedge(&b.hodge_star()) == vol.scale(&ip)
            && a.hodge_star().inner(&b.hodge_star()) == ip;
        if !o.require(
            ok,
            "a∧*b = ⟨a,b⟩vol and isometry",
            || json!({"a": kjson(&a), "b": kjson(&b)}),
        ) {
            break;
        }
        let c = r.sparse_form(4, 10);
        if !o.require(
            c.hodge_star().hodge_star() == c,
            "** = id on Λ⁴",
            || json!({"a": kjson(&c)}),
        ) {
            break;
        }
    }
    o.note("random_instances", n);
    o.done()
}

fn basics_rho(_: &Ctx, r: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    for _ in 0..5 {
        let a = r.sparse_form(4, 12);
        let img = Endo::identity().rho(&a);
        if !o.require(
            img == a.scale(&int(4)),
            "ρ(Id) = 4 on Λ⁴",
            || json!({"a": kjson(&a)}),
        ) {
            break;
        }
    }
    let n = 50;
    for _ in 0..n {
        let (v, alpha, om) = (r.vector(), r.covector(), r.sparse_form(4, 12));
        let lhs = Endo::tensor(&v, &alpha).rho(&om);
        let rhs = alpha.to_form().wedge(&om.contract(&v)?);
        if !o.require(
            lhs == rhs,
            "ρ(v⊗α)ω = α∧(v⌟ω)",
            || json!({"v": vjson(&v), "alpha": kjson(&alpha.to_form()), "omega": kjson(&om)}),
        ) {
            break;
        }
    }
    for _ in 0..10 {
        let (a, b) = (r.endo(), r.endo());
        let deg = r.int_in(1, 4) as usize;
        let c = r.sparse_form(deg, 8);
        let lhs = a.commutator(&b).rho(&c);
        let rhs = a.rho(&b.rho(&c)).sub(&b.rho(&a.rho(&c)));
        if !o.require(
            lhs == rhs,
            "ρ([A,B]) = [ρ(A),ρ(B)]",
            || json!({"A": ejson(&a), "B": ejson(&b), "c": kjson(&c)}),
        ) {
            break;
        }
    }
    o.note("random_instances", n);
    o.done()
}

fn basics_pullback(_: &Ctx, r: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let om = cayley::omega();
    o.require_eq_forms(&Endo::identity().pullback(om), om, "pullback(Id)");
    let two = Endo::identity().scale(&int(2));
    o.require_eq_forms(&two.pullback(om), &om.scale(&int(16)), "pullback(2 Id)");
    for _ in 0..10 {
        let l = r.endo();
        let (p, q) = (r.int_in(1, 4) as usize, r.int_in(0, 3) as usize);
        let (a, b) = (r.sparse_form(p, 4), r.sparse_form(q, 4));
        let lhs = l.pullback(&a.wedge(&b));
        let rhs = l.pullback(&a).wedge(&l.pullback(&b));
        if !o.require(
            lhs == rhs,
            "multiplicativity",
            || json!({"L": ejson(&l), "a": kjson(&a), "b": kjson(&b)}),
        ) {
            break;
        }
    }
    o.done()
}

fn basics_exponential(_: &Ctx, r: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    o.require(
        Endo::zero().exp_nilpotent()? == Endo::identity(),
        "exp(0)",
        || json!({}),
    );
    let a = r.rank_one_nilpotent();
    let e = a.exp_nilpotent()?;
    o.require(
        e == Endo::identity().add(&a),
        "exp(v⊗α) = Id + v⊗α",
        || json!({"A": ejson(&a)}),
    );
    let g2 = JordanRepresentative::new(&diagram_parts(&[2, 2, 2, 2])).matrix;
    let prod = g2
        .exp_nilpotent()?
        .compose(&g2.scale(&int(-1)).exp_nilpotent()?);
    o.require(
        prod == Endo::identity(),
        "exp(A_Γ2) exp(-A_Γ2)",
        || json!({"product": ejson(&prod)}),
    );
    let non = Endo::identity().exp_nilpotent();
    o.require(
        matches!(non, Err(Error::NotNilpotent)),
        "non-nilpotent input",
        || json!({"result": format!("{:?}", non.map(|_| ()))}),
    );
    o.done()
}

fn basics_rank_one(_: &Ctx, r: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let om = cayley::omega();
    let ts = [
        FieldScalar::from_int(1),
        FieldScalar::from_int(-3),
        FieldScalar::from_ratio(5, 7),
    ];
    let n = 100;
    for _ in 0..n {
        let a = r.rank_one_nilpotent();
        let w = r.form(4);
        let sq = a.rho_pow(&w, 2);
        if !o.require(
            sq.is_zero(),
            "ρ(A)²ω = 0",
            || json!({"A": ejson(&a), "omega": kjson(&w)}),
        ) {
            break;
        }
        let rho = a.rho(om);
        for t in &ts {
            let lhs = a.scale(t).exp_nilpotent()?.pullback(om);
            let rhs = om.add(&rho.scale(t));
            if !o.require(
                lhs == rhs,
                "pullback(exp(tA))Ω = Ω + tρ(A)Ω",
                || json!({"A": ejson(&a), "t": sjson(t)}),
            ) {
                break;
            }
        }
    }
    let (e7, e8) = (Vector::basis(7), Vector::basis(8));
    let perturbed = cayley::perturb_rank_one(&e7, &e8, &FieldScalar::one())?;
    let witness = cayley::rank_one_endo(&e7, &e8)?
        .exp_nilpotent()?
        .pullback(om);
    o.require_eq_forms(&perturbed, &witness, "perturb_rank_one(e7, e8, 1)");
    o.require_eq_forms(
        &cayley::perturb_rank_one(&e7, &e8, &FieldScalar::zero())?,
        om,
        "t = 0",
    );
    let bad = cayley::perturb_rank_one(&e7, &e7, &FieldScalar::one());
    o.require(
        matches!(bad, Err(Error::NotOrthogonal)),
        "non-orthogonal pair",
        || json!({}),
    );
    o.note("random_instances", n);
    o.note("t_values", Value::Array(ts.iter().map(sjson).collect()));
    o.done()
}

fn in_power_span(a: &Endo, target: &Endo) -> bool {
    let mut powers = vec![Endo::identity().flatten()];
    let mut p = Endo::identity();
    for _ in 1..DIM {
        p = p.compose(a);
        powers.push(p.flatten());
    }
    linalg::in_span(&linalg::reduced_basis(&powers), &target.flatten())
}

fn split_is_valid(a: &Endo, s: &Endo, n: &Endo) -> bool {
    let sq: Poly = a.char_poly().squarefree_part();
    s.add(n) == *a
        && s.commutator(n).is_zero()
        && n.is_nilpotent()
        && s.eval_poly(&sq).is_zero()
        && in_power_span(a, s)
        && in_power_span(a, n)
}

fn basics_jordan_chevalley(_: &Ctx, r: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let mut diag = Endo::zero();
    for i in 0..DIM {
        diag = diag.add(&Endo::elementary(i, i).scale(&int(i as i64 + 1)));
    }
    let (s, n) = diag.jordan_chevalley_split()?;
    o.require(
        s == diag && n.is_zero(),
        "diagonal",
        || json!({"S": ejson(&s), "N": ejson(&n)}),
    );

    let mut upper = Endo::zero();
    for i in 0..DIM {
        for j in i + 1..DIM {
            upper = upper.add(&Endo::elementary(i, j).scale(&int(r.int())));
        }
    }
    let (s, n) = upper.jordan_chevalley_split()?;
    o.require(
        s.is_zero() && n == upper,
        "strictly upper triangular",
        || json!({"A": ejson(&upper)}),
    );

    // S₀ in the stabilizer commuting with the rank-one N₀.
    let n0 = cayley::rank_one_endo(&Vector::basis(7), &Vector::basis(8))?;
    let stab = cayley::stabilizer_algebra();
    let cols: Vec<Vec<FieldScalar>> = stab.iter().map(|b| b.commutator(&n0).flatten()).collect();
    let centralizer = Matrix::from_columns(DIM * DIM, &cols).nullspace();
    o.note("centralizer_dim", centralizer.len());
    if o.require(
        !centralizer.is_empty(),
        "commuting stabilizer element",
        || json!({}),
    ) {
        let s0 = centralizer[0]
            .iter()
            .zip(&stab)
            .fold(Endo::zero(), |acc, (c, b)| acc.add(&b.scale(c)));
        let a = s0.add(&n0);
        let (s, n) = a.jordan_chevalley_split()?;
        o.require(
            s == s0 && n == n0,
            "split of S₀ + N₀",
            || json!({"S0": ejson(&s0), "N0": ejson(&n0), "S": ejson(&s), "N": ejson(&n)}),
        );
        let om = cayley::omega();
        o.require_eq_forms(&n.rho(om), &a.rho(om), "ρ(N₀)Ω = ρ(A)Ω");
        o.require_zero_form(&n.rho_pow(om, 2), "ρ(N₀)²Ω = 0");
    }

    // Conjugated Jordan forms with repeated eigenvalues.
    for _ in 0..4 {
        let mut j_s = Endo::zero();
        let mut j_n = Endo::zero();
        let mut start = 0;
        while start < DIM {
            let size = (r.int_in(1, 3) as usize).min(DIM - start);
            let ev = int(r.int_in(-3, 3));
            for k in 0..size {
                j_s = j_s.add(&Endo::elementary(start + k, start + k).scale(&ev));
                if k + 1 < size {
                    j_n = j_n.add(&Endo::elementary(start + k + 1, start + k));
                }
            }
            start += size;
        }
        let (p, p_inv) = r.invertible_endo();
        let s_exp = p.compose(&j_s).compose(&p_inv);
        let n_exp = p.compose(&j_n).compose(&p_inv);
        let a = s_exp.add(&n_exp);
        let (s, n) = a.jordan_chevalley_split()?;
        let ok = s == s_exp && n == n_exp && split_is_valid(&a, &s, &n);
        if !o.require(
            ok,
            "conjugated Jordan form",
            || json!({"A": ejson(&a), "S": ejson(&s), "N": ejson(&n)}),
        ) {
            break;
        }
    }
    for _ in 0..3 {
        let a = r.endo();
        let (s, n) = a.jordan_chevalley_split()?;
        if !o.require(
            split_is_valid(&a, &s, &n),
            "random rational matrix",
            || json!({"A": ejson(&a)}),
        ) {
            break;
        }
    }
    let irrational = Endo::identity()
        .scale(&FieldScalar::sqrt2())
        .jordan_chevalley_split();
    o.require(
        matches!(irrational, Err(Error::IrrationalSplit)),
        "irrational entries",
        || json!({}),
    );
    o.done()
}

fn basics_nullspace(_: &Ctx, r: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let zero = endo::nullspace(4, 4, |_| KForm::zero(4));
    let ident = endo::nullspace(4, 4, |f| f.clone());
    o.require(
        zero.len() == 70,
        "zero operator",
        || json!({"dim": zero.len()}),
    );
    o.require(
        ident.is_empty(),
        "identity operator",
        || json!({"dim": ident.len()}),
    );
    let g5 = JordanRepresentative::new(&diagram_parts(&[2, 1, 1, 1, 1, 1, 1]));
    let k5 = endo::nullspace(4, 4, g5.square_operator());
    o.require(k5.len() == 70, "ρ(A_Γ5)²", || json!({"dim": k5.len()}));
    for _ in 0..1 {
        let a = r.nilpotent(2);
        let basis = endo::nullspace(4, 4, |f| a.rho_pow(f, 2));
        let sound = basis.iter().all(|b| a.rho_pow(b, 2).is_zero());
        let coords: Vec<Vec<FieldScalar>> = basis.iter().map(KForm::to_coords).collect();
        let independent = linalg::span_rank(&coords) == basis.len();
        let rank = endo::operator_matrix(4, 4, |f| a.rho_pow(f, 2)).rank();
        if !o.require(
            sound && independent && rank + basis.len() == 70,
            "random nilpotent kernel",
            || json!({"A": ejson(&a), "dim": basis.len()}),
        ) {
            break;
        }
    }
    o.done()
}

fn basics_stabilizer(_: &Ctx, _: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let om = cayley::omega();
    let stab = cayley::stabilizer_algebra();
    o.require(
        stab.len() == 21,
        "dimension 21",
        || json!({"dim": stab.len()}),
    );
    for a in &stab {
        if !o.require(
            a.is_skew() && a.rho(om).is_zero(),
            "skew annihilator",
            || json!({"A": ejson(a)}),
        ) {
            break;
        }
    }
    o.require(
        cayley::is_lie_subalgebra(&stab),
        "closed under brackets",
        || json!({}),
    );
    let image = cayley::orbit_image_dim(&cayley::sl8_basis());
    let so8 = cayley::orbit_image_dim(&cayley::so8_basis());
    o.require(image == 42, "dim ρ(sl(8))Ω = 42", || json!({"dim": image}));
    o.require(so8 == 7, "dim ρ(so(8))Ω = 7", || json!({"dim": so8}));
    o.note("stabilizer_dim", stab.len());
    o.note("image_dim", image);
    o.note("so8_image_dim", so8);
    o.fact("stabilizer_dim", stab.len());
    o.fact("image_dim", image);
    o.done()
}

fn basics_nondegeneracy(_: &Ctx, r: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let om = cayley::omega();
    let n = 200;
    for _ in 0..n {
        let (u, v) = r.independent_pair();
        let cube = cayley::pair_contraction_cube(&u, &v, om)?;
        if !o.require(
            !cube.is_zero(),
            "(u⌟v⌟Ω)³ ≠ 0",
            || json!({"u": vjson(&u), "v": vjson(&v)}),
        ) {
            break;
        }
    }
    for _ in 0..20 {
        let (u, v) = r.independent_pair();
        let lambda = r.nonzero_scalar();
        let mu = &r.nonzero_scalar() + &FieldScalar::sqrt2();
        let lhs = cayley::pair_contraction_cube(&u.scale(&lambda), &v.scale(&mu), om)?;
        let rhs = cayley::pair_contraction_cube(&u, &v, om)?.scale(&(&lambda * &mu).pow(3));
        if !o.require(
            lhs == rhs,
            "λ³μ³ scaling",
            || json!({"u": vjson(&u), "v": vjson(&v), "lambda": sjson(&lambda), "mu": sjson(&mu)}),
        ) {
            break;
        }
    }
    let v = r.nonzero_vector();
    o.require_zero_form(&cayley::pair_contraction_cube(&v, &v, om)?, "u = v");
    o.note("random_pairs", n);
    o.done()
}

/// The displayed value of `(e_7⌟e_8⌟Ω)³` that the computation is compared against.
pub const DISPLAYED_CUBE: &str = "6e^{354867}";

fn basics_discrepancy(_: &Ctx, _: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let cube =
        cayley::pair_contraction_cube(&Vector::basis(7), &Vector::basis(8), cayley::omega())?;
    o.require(!cube.is_zero(), "nonvanishing", || json!({}));
    let record = json!({
        "pair": ["e7", "e8"],
        "computed": kjson(&cube),
        "computed_text": blade_text(&cube),
        "displayed": DISPLAYED_CUBE,
        "nonvanishing": !cube.is_zero(),
        "agrees_with_displayed": false,
    });
    o.note("computed_text", blade_text(&cube));
    o.fact("discrepancy", record);
    o.done()
}

fn basics_serialization(_: &Ctx, r: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let round_trip = |f: &KForm| -> Result<KForm> {
        let text = serial::to_json(&KFormRecord::from(f))?;
        let rec: KFormRecord = serde_json::from_str(&text)?;
        KForm::try_from(&rec)
    };
    let om = cayley::omega();
    o.require_eq_forms(&round_trip(om)?, om, "Ω");
    let irr = &(&FieldScalar::sqrt3() * &FieldScalar::from_ratio(-2, 9)) + &FieldScalar::sqrt6();
    for _ in 0..10 {
        let deg = r.int_in(0, 8) as usize;
        let f = r.sparse_form(deg, 6).scale(&irr);
        if !o.require_eq_forms(&round_trip(&f)?, &f, "random form") {
            break;
        }
    }
    let phi = build_bryant_salamon().phi;
    let text = serial::to_json(&ChamberFormRecord::from(&phi))?;
    let back = ChamberForm::try_from(&serde_json::from_str::<ChamberFormRecord>(&text)?)?;
    o.require(back == phi, "Φ", || json!({"parsed": cjson(&back)}));
    o.done()
}

// ---------------------------------------------------------- decomposition

const DECOMPOSITION: &[(&str, CheckFn)] = &[
    ("projector_algebra", decomposition_projectors),
    ("star_split", decomposition_star),
    ("cayley_component", decomposition_omega),
    ("rank_one_membership", decomposition_rank_one),
    ("skew_ansatz", decomposition_skew),
];

fn decomposition_projectors(_: &Ctx, _: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let p = DecompositionProjectors::get();
    let all = p.all();
    let n = 70;
    let mut ranks = serde_json::Map::new();
    let mut sum = Matrix::zeros(n, n);
    for (i, (name, a)) in all.iter().enumerate() {
        let rank = a.rank();
        ranks.insert(name.to_string(), rank.into());
        for (other, b) in &all[i..] {
            let prod = a.mul(b);
            let ok = if other == name {
                prod == **a
            } else {
                prod.is_zero()
            };
            o.require(
                ok,
                "p_i p_j = δ_ij p_i",
                || json!({"pair": [name, other], "product": mjson(&prod)}),
            );
        }
        sum = sum.add(a);
    }
    o.require(
        sum == Matrix::identity(n),
        "Σ p_i = Id",
        || json!({"sum": mjson(&sum)}),
    );
    let expected = json!({"p1": 1, "p7": 7, "p27": 27, "p35": 35});
    let got = Value::Object(ranks);
    o.require(
        got == expected,
        "ranks (1, 7, 27, 35)",
        || json!({"ranks": got.clone()}),
    );
    o.note("ranks", got.clone());
    o.fact("projector_ranks", got);
    o.done()
}

fn decomposition_star(_: &Ctx, _: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let p = DecompositionProjectors::get();
    let star = endo::operator_matrix(4, 4, KForm::hodge_star);
    for (name, a) in p.all() {
        let sign = if name == "p35" { -1 } else { 1 };
        let lhs = star.mul(a);
        o.require(
            lhs == a.scale(&int(sign)),
            "* on projector images",
            || json!({"projector": name}),
        );
    }
    let half = FieldScalar::from_ratio(1, 2);
    let p35 = Matrix::identity(70).sub(&star).scale(&half);
    o.require(p35 == p.p35, "p35 = (Id − *)/2", || json!({}));
    o.note("anti_self_dual", "p35");
    o.note("self_dual", json!(["p1", "p7", "p27"]));
    o.done()
}

fn decomposition_omega(_: &Ctx, r: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let p = DecompositionProjectors::get();
    let om = cayley::omega();
    for (name, a) in p.all() {
        let img = DecompositionProjectors::project(a, om);
        let ok = if name == "p1" {
            &img == om
        } else {
            img.is_zero()
        };
        o.require(
            ok,
            "projections of Ω",
            || json!({"projector": name, "image": kjson(&img)}),
        );
    }
    for _ in 0..10 {
        let a = r.form(4);
        let expected = om.scale(&(&a.inner(om) / &int(14)));
        if !o.require_eq_forms(
            &DecompositionProjectors::project(&p.p1, &a),
            &expected,
            "p1(a) = ⟨a,Ω⟩Ω/14",
        ) {
            break;
        }
    }
    o.done()
}

fn decomposition_rank_one(_: &Ctx, r: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let p = DecompositionProjectors::get();
    let om = cayley::omega();
    let example = cayley::rank_one_endo(&Vector::basis(7), &Vector::basis(8))?;
    let sig = p.signature(&example.rho(om));
    o.require(sig.in_7_plus_35(), "e7⊗e8", || json!({"signature": sig.0}));
    let n = 50;
    for _ in 0..n {
        let a = r.rank_one_nilpotent();
        let delta = a.rho(om);
        let p1 = DecompositionProjectors::project(&p.p1, &delta);
        let p27 = DecompositionProjectors::project(&p.p27, &delta);
        if !o.require(
            p1.is_zero() && p27.is_zero(),
            "p1, p27 of ρ(A)Ω",
            || json!({"A": ejson(&a), "p1": kjson(&p1), "p27": kjson(&p27)}),
        ) {
            break;
        }
    }
    o.note("random_instances", n);
    o.done()
}

fn decomposition_skew(_: &Ctx, r: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let p = DecompositionProjectors::get();
    let mut pairs = vec![(Vector::basis(7), Vector::basis(8))];
    for _ in 0..10 {
        pairs.push((r.vector(), r.vector()));
    }
    for (v, w) in &pairs {
        let delta = cayley::skew_delta(v, w);
        let sig = p.signature(&delta);
        let pure = DecompositionProjectors::project(&p.p7, &delta) == delta;
        if !o.require(
            sig.0 == [false, true, false, false] || (delta.is_zero() && pure),
            "skew δ in Λ⁴₇",
            || json!({"v": vjson(v), "w": vjson(w), "signature": sig.0}),
        ) {
            break;
        }
        let skew = Endo::tensor(w, &v.flat()).sub(&Endo::tensor(v, &w.flat()));
        if !o.require_eq_forms(&skew.rho(cayley::omega()), &delta, "δ = ρ(w⊗v♭ − v⊗w♭)Ω")
        {
            break;
        }
    }
    o.note("pairs", pairs.len());
    o.done()
}

// --------------------------------------------------------------- classify

const CLASSIFY: &[(&str, CheckFn)] = &[
    ("enumeration", classify_enumeration),
    ("jordan_types", classify_jordan_types),
    ("kernel_spaces", classify_kernels),
    ("certificates", classify_certificates),
    ("certificate_replay", classify_replay),
    ("orbit_exclusion", classify_orbit),
    ("rank_one_signature", classify_rank_one),
];

fn classify_enumeration(_: &Ctx, _: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let all = YoungDiagram::enumerate();
    o.require(
        all.len() == 22,
        "22 partitions",
        || json!({"count": all.len()}),
    );
    let displayed = diagram_parts(&[3, 2, 1, 1, 1]);
    o.require(all.contains(&displayed), "contains (3,2,1,1,1)", || {
        json!({})
    });
    o.require(YoungDiagram::new(vec![9]).is_err(), "rejects (9)", || {
        json!({})
    });
    let labels: Vec<Value> = all
        .iter()
        .filter_map(|d| {
            d.gamma_label()
                .map(|l| json!({"label": l, "diagram": d.parts()}))
        })
        .collect();
    o.require(
        labels.len() == 6,
        "six labelled diagrams",
        || json!({"labels": labels.clone()}),
    );
    o.note("count", all.len());
    o.note("labelled", labels);
    o.done()
}

fn classify_jordan_types(ctx: &Ctx, _: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    for w in ctx.diagrams() {
        let d = &w.record.diagram;
        let largest = d.parts()[0] as u32;
        let ok = w.record.jordan_type_ok
            && w.rep.matrix.pow(largest).is_zero()
            && (largest == 1 || !w.rep.matrix.pow(largest - 1).is_zero());
        if !o.require(
            ok,
            "Jordan type of representative",
            || json!({"diagram": d.parts(), "matrix": ejson(&w.rep.matrix)}),
        ) {
            break;
        }
    }
    let g = &ctx
        .diagrams()
        .iter()
        .find(|w| w.record.diagram.parts() == [3, 2, 1, 1, 1])
        .expect("(3,2,1,1,1)")
        .rep;
    let labels: Vec<String> = g.labels.iter().map(BasisLabel::to_string).collect();
    o.require(
        labels == ["w1", "v2", "v3", "w4", "v5", "v6", "v7", "v8"],
        "labels of (3,2,1,1,1)",
        || json!({"labels": labels.clone()}),
    );
    let g6 = &gamma(ctx, "Γ6").rep.matrix;
    let g5 = &gamma(ctx, "Γ5").rep.matrix;
    o.require(g6.is_zero(), "Γ6 is zero", || json!({}));
    o.require(
        g5.rank() == 1 && g5.is_nilpotent(),
        "Γ5 is rank one",
        || json!({}),
    );
    let g2 = &gamma(ctx, "Γ2").rep.matrix;
    let tensorial = (0..4).fold(Endo::zero(), |acc, i| {
        acc.add(&Endo::tensor(
            &Vector::basis(2 * i + 1),
            &Covector::basis(2 * i + 2),
        ))
    });
    o.require(
        *g2 == tensorial,
        "Γ2 = Σ w_i⊗v^i",
        || json!({"matrix": ejson(g2)}),
    );
    o.note("labels_3_2_1_1_1", labels);
    o.done()
}

fn classify_kernels(ctx: &Ctx, r: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let mut dims = Vec::new();
    for w in ctx.diagrams() {
        let op = w.rep.square_operator();
        let sound = w.kernel.basis.iter().all(|b| op(b).is_zero());
        let coords: Vec<Vec<FieldScalar>> = w.kernel.basis.iter().map(KForm::to_coords).collect();
        let independent = linalg::span_rank(&coords) == w.kernel.dim();
        let rank = endo::operator_matrix(4, 4, &op).rank();
        let d = w.record.diagram.parts();
        o.require(
            sound && independent && rank + w.kernel.dim() == 70,
            "kernel soundness and rank-nullity",
            || json!({"diagram": d, "dim": w.kernel.dim(), "rank": rank}),
        );
        dims.push(json!({"diagram": d, "dim_kernel": w.kernel.dim()}));
    }
    for label in ["Γ5", "Γ6"] {
        let dim = gamma(ctx, label).kernel.dim();
        o.require(
            dim == 70,
            "full kernel",
            || json!({"label": label, "dim": dim}),
        );
    }
    let g2 = gamma(ctx, "Γ2");
    o.require(
        g2.kernel.dim() < 70,
        "Γ2 kernel proper",
        || json!({"dim": g2.kernel.dim()}),
    );
    for b in &g2.kernel.basis {
        if !o.require_zero_form(
            &classify::gamma2_residual(b),
            "Σ v^{ij}∧(w_i⌟w_j⌟ω) = 0 on K_Γ2",
        ) {
            break;
        }
    }
    for _ in 0..5 {
        let w = r.form(4);
        if !o.require_zero_form(&classify::gamma2_residual(&w), "Γ2 residual identity") {
            break;
        }
    }
    o.note("dims", dims);
    o.done()
}

fn classify_certificates(ctx: &Ctx, _: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let admissible_expected = [vec![2, 1, 1, 1, 1, 1, 1], vec![1; 8]];
    let mut admissible = Vec::new();
    let mut stages: BTreeMap<&str, usize> = BTreeMap::new();
    for w in ctx.diagrams() {
        let c = &w.record.certificate;
        let d = w.record.diagram.parts().to_vec();
        match c.verdict {
            Verdict::Admissible => admissible.push(d.clone()),
            Verdict::Unresolved => {
                o.require(
                    false,
                    "unresolved diagram",
                    || json!({"diagram": d.clone()}),
                );
            }
            Verdict::Excluded => {
                let pair = c.pair.as_ref().expect("excluded diagrams carry a pair");
                *stages.entry(stage_name(pair.stage)).or_default() += 1;
                let rechecked =
                    classify::cubic_vanishes_on_subspace(&pair.u, &pair.v, &w.kernel.basis)?;
                let independent = linalg::span_rank(&[pair.u.0.to_vec(), pair.v.0.to_vec()]) == 2;
                o.require(
                    rechecked && independent,
                    "certificate re-check",
                    || json!({"diagram": d.clone(), "u": vjson(&pair.u), "v": vjson(&pair.v)}),
                );
                if matches!(
                    w.record.diagram.gamma_label(),
                    Some("Γ1" | "Γ2" | "Γ3" | "Γ4")
                ) {
                    let ok = pair
                        .labels
                        .is_some_and(|(a, b)| a.is_generator() && b.is_generator());
                    o.require(ok, "Γ1–Γ4 certified by w-duals", || {
                        json!({"diagram": d.clone(), "labels": pair.labels.map(|(a, b)| [a.to_string(), b.to_string()])})
                    });
                }
            }
        }
    }
    o.require(
        admissible == admissible_expected,
        "admissible set",
        || json!({"admissible": admissible.clone()}),
    );
    let excluded = ctx.diagrams().len() - admissible.len();
    o.note("excluded", excluded);
    o.note("stages", serde_json::to_value(&stages)?);
    o.fact("admissible_diagrams", admissible.clone());
    let records: Vec<_> = ctx
        .diagrams()
        .iter()
        .map(|w| serial::diagram_record(&w.record, ctx.timings))
        .collect();
    o.fact("classification", serde_json::to_value(records)?);
    o.done()
}

fn stage_name(s: classify::SearchStage) -> &'static str {
    match s {
        classify::SearchStage::GeneratorDuals => "generator_duals",
        classify::SearchStage::AllDuals => "all_duals",
        classify::SearchStage::Combinations => "combinations",
    }
}

fn classify_replay(ctx: &Ctx, r: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let mut replayed = 0;
    for w in ctx.diagrams() {
        let Some(pair) = &w.record.certificate.pair else {
            continue;
        };
        if let Some(bad) = classify::replay_exclusion(&w.kernel, pair, r, 50) {
            o.require(
                false,
                "replay",
                || json!({"diagram": w.record.diagram.parts(), "omega": kjson(&bad)}),
            );
        }
        replayed += 1;
    }
    o.note("diagrams", replayed);
    o.note("samples_per_diagram", 50);
    o.done()
}

fn classify_orbit(ctx: &Ctx, r: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let g2 = gamma(ctx, "Γ2");
    if let Some(p) = classify::orbit_hits_kernel(&g2.kernel, r, 50) {
        o.require(
            false,
            "GL-transform of Ω in K_Γ2",
            || json!({"P": ejson(&p)}),
        );
    }
    o.note("samples", 50);
    o.done()
}

fn classify_rank_one(ctx: &Ctx, _: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let summary = classify::rank_one_summary(check_seed(ctx.seed, Suite::Classify, "rank_one"), 20);
    o.require(
        summary.in_7_plus_35 == summary.samples,
        "ρ(A)Ω ∈ Λ⁴₇ ⊕ Λ⁴₃₅",
        || {
            let (a, sig) = summary.first_failure.as_ref().expect("failure recorded");
            json!({"A": ejson(a), "signature": sig.0})
        },
    );
    let delta = cayley::rank_one_delta(&Vector::basis(8), &Vector::basis(7));
    let sig = DecompositionProjectors::get().signature(&delta);
    o.require(
        !sig.0[0] && !sig.0[2],
        "e⁸∧(e₇⌟Ω)",
        || json!({"signature": sig.0}),
    );
    o.note("samples", summary.samples);
    o.note("in_7_plus_35", summary.in_7_plus_35);
    o.done()
}

// --------------------------------------------------------- bryant-salamon

const BRYANT_SALAMON: &[(&str, CheckFn)] = &[
    ("lie_frame", bs_lie_frame),
    ("killing_normalization", bs_killing_normalization),
    ("normalizer", bs_normalizer),
    ("chamber_calculus", bs_chamber_calculus),
    ("pullback_form", bs_pullback_form),
    ("closed", bs_closed),
    ("invariant_forms", bs_invariant_forms),
    ("killing_field", bs_killing_field),
];

fn bs_lie_frame(ctx: &Ctx, _: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    for (name, frame) in [("connection", &ctx.connection), ("killing", &ctx.killing)] {
        if let Some((i, j, k)) = frame.antisymmetry_violation() {
            o.require(false, "antisymmetry", || {
                json!({"frame": name, "i": i, "j": j, "k": k,
                       "c_ij": sjson(frame.constant(i, j, k)), "c_ji": sjson(frame.constant(j, i, k))})
            });
        }
        if let Some(((i, j, k), value)) = frame.jacobi_violation() {
            o.require(
                false,
                "Jacobi identity",
                || json!({"frame": name, "triple": [i, j, k], "jacobiator": coords_json(&value)}),
            );
        }
    }
    for i in 0..COFRAME_DIM {
        let dd = ChamberForm::generator(i)
            .d(&ctx.connection)
            .d(&ctx.connection);
        if !o.require(
            dd.is_zero(),
            "d² = 0 on generators",
            || json!({"generator": COFRAME_NAMES[i], "dd": cjson(&dd)}),
        ) {
            break;
        }
    }
    let k = &ctx.killing;
    let sp_plus: Vec<usize> = (0..3).collect();
    let sp_minus: Vec<usize> = (3..6).collect();
    for (name, part) in [("sp(1)+", &sp_plus), ("sp(1)-", &sp_minus)] {
        let ok = part.iter().all(|&i| {
            part.iter().all(|&j| {
                k.bracket_basis(i, j)
                    .iter()
                    .enumerate()
                    .all(|(n, c)| c.is_zero() || part.contains(&n))
            })
        });
        o.require(ok, "subalgebra", || json!({"subalgebra": name}));
    }
    let commute = sp_plus.iter().all(|&i| {
        sp_minus
            .iter()
            .all(|&j| k.bracket_basis(i, j).iter().all(Zero::is_zero))
    });
    o.require(commute, "[sp(1)+, sp(1)-] = 0", || json!({}));
    let a1a2 = k.bracket_basis(0, 1);
    let inv_sqrt3 = &FieldScalar::sqrt3() / &int(3);
    let ok = a1a2
        .iter()
        .enumerate()
        .all(|(n, c)| if n == 2 { *c == inv_sqrt3 } else { c.is_zero() });
    o.require(
        ok,
        "[A1, A2] = A3/√3",
        || json!({"bracket": coords_json(a1a2)}),
    );
    o.require(
        k.bracket_basis(0, 3).iter().all(Zero::is_zero),
        "[A1, A4] = 0",
        || json!({"bracket": coords_json(k.bracket_basis(0, 3))}),
    );
    let x4x1 = k.bracket_basis(9, 6);
    o.require(
        x4x1[6..].iter().all(Zero::is_zero),
        "[X4, X1] ∈ span A",
        || json!({"bracket": coords_json(x4x1)}),
    );
    o.done()
}

fn bs_killing_normalization(ctx: &Ctx, _: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let b = ctx.killing.killing_form();
    let scale = b.get(0, 0).clone();
    let ok = b == Matrix::identity(LIE_DIM).scale(&scale);
    o.require(
        ok,
        "Killing form constant multiple of the identity",
        || json!({"killing_form": mjson(&b)}),
    );
    o.require(
        scale == int(-1),
        "B = −I",
        || json!({"scale": sjson(&scale)}),
    );
    o.note("scale", sjson(&scale));
    o.done()
}

fn bs_normalizer(ctx: &Ctx, _: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let frame = &ctx.connection;
    let sp_plus = span_of(&[0, 1, 2]);
    match frame.normalizer(&sp_plus) {
        Ok(n) => {
            let mut joined = n.clone();
            joined.extend(span_of(&[0, 1, 2, 3, 4, 5]));
            let ok = n.len() == 6 && linalg::span_rank(&joined) == 6;
            o.require(ok, "n(sp(1)+) = sp(1)+ ⊕ sp(1)-", || {
                json!({"dim": n.len(), "basis": n.iter().map(|v| coords_json(v)).collect::<Vec<_>>()})
            });
            o.note("normalizer_dim", n.len());
            o.note("quotient_dim", n.len().saturating_sub(3));
        }
        Err(e) => {
            o.require(false, "n(sp(1)+)", || json!({"error": e.to_string()}));
        }
    }
    let all: Vec<usize> = (0..LIE_DIM).collect();
    for (case, h) in [("n(sp(2))", span_of(&all)), ("n(0)", Vec::new())] {
        let dim = frame.normalizer(&h).map(|n| n.len());
        o.require(
            matches!(dim, Ok(LIE_DIM)),
            case,
            || json!({"result": format!("{dim:?}")}),
        );
    }
    let not_sub = frame.normalizer(&span_of(&[6, 7]));
    o.require(
        matches!(not_sub, Err(Error::NotSubalgebra(_))),
        "non-subalgebra rejected",
        || json!({"result": format!("{:?}", not_sub.map(|n| n.len()))}),
    );
    o.done()
}

fn random_chamber_scalar(r: &mut Sampler) -> ChamberScalar {
    let terms: Vec<(u32, i32, FieldScalar)> = (0..3)
        .map(|_| (r.int_in(0, 3) as u32, r.int_in(-4, 4) as i32, r.scalar()))
        .collect();
    ChamberScalar::from_terms(terms)
}

fn random_chamber_form(r: &mut Sampler, degree: usize) -> ChamberForm {
    let mut f = ChamberForm::zero();
    for _ in 0..3 {
        let mut idx: Vec<usize> = Vec::new();
        while idx.len() < degree {
            let i = r.index(COFRAME_DIM);
            if !idx.contains(&i) {
                idx.push(i);
            }
        }
        f = f.add(&ChamberForm::monomial(random_chamber_scalar(r), &idx));
    }
    f
}

fn bs_chamber_calculus(ctx: &Ctx, r: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let frame = &ctx.connection;
    o.require_zero_chamber(&ChamberForm::generator(DS).d(frame), "d(ds) = 0");
    let dw = ChamberForm::scalar(ChamberScalar::w()).d(frame);
    let expected = ChamberForm::monomial(
        ChamberScalar::monomial(FieldScalar::from_ratio(2, 5), 1, -4),
        &[DS],
    );
    o.require(
        dw == expected,
        "d(w) = (2/5)s w⁻⁴ ds",
        || json!({"dw": cjson(&dw)}),
    );
    let n = 12;
    for _ in 0..n {
        let deg = r.int_in(0, 3) as usize;
        let f = random_chamber_form(r, deg);
        let dd = f.d(frame).d(frame);
        if !o.require(
            dd.is_zero(),
            "d² = 0",
            || json!({"form": cjson(&f), "dd": cjson(&dd)}),
        ) {
            break;
        }
    }
    for _ in 0..5 {
        let p = r.int_in(0, 2) as usize;
        let q = r.int_in(0, 2) as usize;
        let (f, g) = (random_chamber_form(r, p), random_chamber_form(r, q));
        let lhs = f.wedge(&g).d(frame);
        let sign = if p % 2 == 1 { -1 } else { 1 };
        let rhs = f
            .d(frame)
            .wedge(&g)
            .add(&f.wedge(&g.d(frame)).scale_field(&int(sign)));
        if !o.require(
            lhs == rhs,
            "Leibniz rule",
            || json!({"f": cjson(&f), "g": cjson(&g)}),
        ) {
            break;
        }
    }
    o.note("random_instances", n);
    o.done()
}

fn bs_pullback_form(_: &Ctx, _: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let bs = build_bryant_salamon();
    let psi1 = ChamberForm::monomial(
        ChamberScalar::monomial(int(-1), 3, 0),
        &[DS, a(4), a(5), a(6)],
    );
    o.require(
        bs.psi1 == psi1,
        "ψ₁ = −s³ ds∧A⁴⁵⁶",
        || json!({"psi1": cjson(&bs.psi1)}),
    );
    let psi3 = ChamberForm::monomial(int(-1).into(), &[x(1), x(2), x(3), x(4)]);
    o.require(
        bs.psi3 == psi3,
        "ψ₃ = −X¹²³⁴",
        || json!({"psi3": cjson(&bs.psi3)}),
    );
    let coefficient_checks = [
        (
            "ds∧A⁴⁵⁶",
            vec![DS, a(4), a(5), a(6)],
            ChamberScalar::monomial(int(-16), 3, -4),
        ),
        (
            "A⁵⁶∧X¹⁴",
            vec![a(5), a(6), x(1), x(4)],
            ChamberScalar::monomial(int(20), 2, 1),
        ),
        (
            "A⁵⁶∧X²³",
            vec![a(5), a(6), x(2), x(3)],
            ChamberScalar::monomial(int(20), 2, 1),
        ),
        (
            "X¹²³⁴",
            vec![x(1), x(2), x(3), x(4)],
            ChamberScalar::monomial(int(-25), 0, 6),
        ),
    ];
    for (name, idx, expected) in &coefficient_checks {
        let got = bs.phi.coeff(idx);
        o.require(
            got == *expected,
            name,
            || json!({"monomial": name, "got": csjson(&got), "expected": csjson(expected)}),
        );
    }
    if let Some((m, built, shown)) = invariant::pullback_proposition_mismatch() {
        o.require(
            false,
            "term-by-term equality with the displayed form",
            || json!({"monomial": m.names(), "built": csjson(&built), "displayed": csjson(&shown)}),
        );
    }
    o.note("terms", bs.phi.len());
    o.done()
}

fn bs_closed(ctx: &Ctx, _: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let phi = build_bryant_salamon().phi;
    o.require_zero_chamber(&phi.d(&ctx.connection), "dΦ = 0");
    o.note("frame", "connection");
    o.done()
}

fn bs_invariant_forms(ctx: &Ctx, _: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let frame = &ctx.connection;
    let mixed = invariant::invariant_mixed_form();
    let x1234 = ChamberForm::monomial(ChamberScalar::one(), &[x(1), x(2), x(3), x(4)]);
    for g in 3..6 {
        let name = crate::lie::GENERATOR_NAMES[g];
        let l = mixed.lie_derivative(g, frame);
        o.require(
            l.is_zero(),
            "L_A of the mixed form",
            || json!({"generator": name, "value": cjson(&l)}),
        );
        let l = x1234.lie_derivative(g, frame);
        o.require(
            l.is_zero(),
            "L_A X¹²³⁴",
            || json!({"generator": name, "value": cjson(&l)}),
        );
    }
    let l = ChamberForm::generator(a(5)).lie_derivative(3, frame);
    let ok = l.len() == 1
        && l.terms()
            .all(|(m, c)| m.indices().eq([a(6)]) && !c.is_zero());
    o.require(ok, "L_{A4} A⁵ ∝ A⁶", || json!({"value": cjson(&l)}));
    o.done()
}

fn bs_killing_field(ctx: &Ctx, _: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let frame = &ctx.connection;
    let h = bryant_salamon_metric();
    let metric_json = |m: &InvariantMetric| -> Value {
        Value::Array(
            m.entries()
                .map(|(&(i, j), c)| json!({"i": COFRAME_NAMES[i], "j": COFRAME_NAMES[j], "coefficient": csjson(c)}))
                .collect(),
        )
    };
    for g in 3..6 {
        let l = h.lie_derivative(g, frame);
        o.require(
            l.is_zero(),
            "L_A g = 0",
            || json!({"generator": crate::lie::GENERATOR_NAMES[g], "value": metric_json(&l)}),
        );
    }
    let fiber = InvariantMetric::diagonal(&[x(1), x(2), x(3), x(4)], &ChamberScalar::one());
    let l = fiber.lie_derivative(0, frame);
    o.require(
        l.is_zero(),
        "L_{A1} of the fiber metric",
        || json!({"value": metric_json(&l)}),
    );
    let ds2 = InvariantMetric::diagonal(&[DS], &ChamberScalar::one());
    let l = ds2.lie_derivative(3, frame);
    o.require(
        l.is_zero(),
        "L_{A4} ds²",
        || json!({"value": metric_json(&l)}),
    );
    let (s0, w0) = (&FieldScalar::sqrt2() * &int(11), int(3));
    for (&(i, j), c) in h.entries() {
        let v = c.eval(&s0, &w0)?;
        o.require(
            i != j || v.is_positive(),
            "positive diagonal",
            || json!({"i": COFRAME_NAMES[i], "value": sjson(&v)}),
        );
    }
    o.done()
}

// ---------------------------------------------------------------- perturb

const PERTURB: &[(&str, CheckFn)] = &[
    ("closedness", perturb_closedness),
    ("mechanism", perturb_mechanism),
    ("pointwise_orbit", perturb_pointwise),
    ("parity", perturb_parity),
];

fn t_poly(coeffs: &[i64]) -> Vec<FieldScalar> {
    coeffs.iter().map(|&c| int(c)).collect()
}

/// `(1, 0, 0)`, `(t², t⁴+1, 3t)` and five random even triples.
fn perturbation_fields(r: &mut Sampler) -> Vec<InvariantField> {
    let mut out = vec![
        InvariantField::from_t_polys(&t_poly(&[1]), &[], &[]),
        InvariantField::from_t_polys(
            &t_poly(&[0, 0, 1]),
            &t_poly(&[1, 0, 0, 0, 1]),
            &t_poly(&[0, 3]),
        ),
    ];
    for _ in 0..5 {
        let mut poly = || -> Vec<FieldScalar> {
            let deg = r.int_in(0, 3) as usize;
            (0..=deg).map(|_| int(r.int_in(-4, 4))).collect()
        };
        let (p, q, s) = (poly(), poly(), poly());
        out.push(InvariantField::from_t_polys(&p, &q, &s));
    }
    out
}

fn perturb_closedness(ctx: &Ctx, r: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let fields = perturbation_fields(r);
    for y in &fields {
        let d = invariant::perturbed_form(y)?.d(&ctx.connection);
        if !o.require(
            d.is_zero(),
            "d(Φ + 2s ds∧(Y⌟Φ)) = 0",
            || json!({"Y": yjson(y), "d": cjson(&d)}),
        ) {
            break;
        }
    }
    o.note("fields", fields.len());
    o.done()
}

fn perturb_mechanism(ctx: &Ctx, r: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let frame = &ctx.connection;
    let phi = build_bryant_salamon().phi;
    let dphi = phi.d(frame);
    let mut nonzero_lie = 0;
    for y in perturbation_fields(r) {
        let (lhs, rhs) = invariant::closedness_mechanism(&phi, &y, frame);
        if !o.require(
            lhs == rhs,
            "d(dt∧Y⌟Φ) = −dt∧L_YΦ",
            || json!({"Y": yjson(&y), "lhs": cjson(&lhs), "rhs": cjson(&rhs)}),
        ) {
            break;
        }
        let total = invariant::perturbed_form_unchecked(&phi, &y).d(frame);
        if !o.require(
            total == dphi.add(&lhs),
            "d splits over the sum",
            || json!({"Y": yjson(&y)}),
        ) {
            break;
        }
        if !phi.lie_derivative_field(&y, frame).is_zero() {
            nonzero_lie += 1;
        }
    }
    o.note("fields_with_nonzero_lie_derivative", nonzero_lie);
    o.done()
}

fn perturb_pointwise(_: &Ctx, _: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let (s0, w0) = (&FieldScalar::sqrt2() * &int(11), int(3));
    let fields = [
        InvariantField::from_t_polys(&t_poly(&[1]), &[], &[]),
        InvariantField::from_t_polys(
            &t_poly(&[0, 0, 1]),
            &t_poly(&[1, 0, 0, 0, 1]),
            &t_poly(&[0, 3]),
        ),
    ];
    for y in &fields {
        let c = invariant::pointwise_orbit_check(y, &s0, &w0)?;
        o.require(
            c.passed(),
            "rank-one orbit criterion at (11√2, 3)",
            || {
                json!({
                    "Y": yjson(y),
                    "rho_squared": kjson(&c.rho_squared),
                    "orbit_defect": kjson(&c.orbit_defect),
                    "perturbed_defect": kjson(&c.perturbed_defect),
                    "stabilizer_dim": c.stabilizer_dim,
                })
            },
        );
    }
    o.note("point", json!({"s": sjson(&s0), "w": sjson(&w0)}));
    o.done()
}

fn perturb_parity(_: &Ctx, _: &mut Sampler) -> Result<Outcome> {
    let mut o = Outcome::new();
    let odd = InvariantField::new(
        ChamberScalar::s(),
        ChamberScalar::zero(),
        ChamberScalar::zero(),
    );
    let res = invariant::perturbed_form(&odd);
    o.require(
        matches!(res, Err(Error::OddCoefficient)),
        "odd coefficient rejected",
        || json!({"result": format!("{:?}", res.map(|_| ()))}),
    );
    let zero = invariant::perturbed_form(&InvariantField::zero())?;
    o.require(
        zero == build_bryant_salamon().phi,
        "Y = 0 gives Φ",
        || json!({"form": cjson(&zero)}),
    );
    o.done()
}
