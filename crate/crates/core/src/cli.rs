//! Job configurations, subcommand dispatch and JSON reports.
//!
//! A job is a JSON document:
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "p": 5, "f": 1, "H": [],
//!   "S": [7, 11],
//!   "lambda": { "mode": "table", "table": { "all": 0 } },
//!   "precision": { "stickelberger": 8 },
//!   "oracle": { "levels": [1, 2], "primes": [7, 11] },
//!   "characters": ["omega^3"]
//! }
//! ```
//!
//! Only `p` is required. Exit codes: 0 ok, 2 invalid config, 3 lambda
//! unavailable, 4 internal inconsistency.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::is_prime;
use crate::characters::{conjugacy_classes, enumerate_characters, CharacterSummary, DirichletCharacter, FieldSpec};
use crate::error::{Error, Result};
use crate::frobenius::{inertia_trivial, m_index, sigma0_ok};
use crate::rank::{rank_total, LambdaProvider, RankRecord};
use crate::residue::{chi_quotient_order, rank_estimate, residue_module, stabilization_level};
use crate::stickelberger::{lambda_minus_with, DEFAULT_PRECISION};

pub const SCHEMA_VERSION: u64 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_LAMBDA: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;

/// Stickelberger precision is doubled at most this many times on a precision error.
const PRECISION_RETRIES: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaMode {
    #[default]
    Table,
    GreenbergEven,
    Stickelberger,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLambda {
    #[serde(default)]
    mode: LambdaMode,
    #[serde(default)]
    table: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPrecision {
    stickelberger: Option<u32>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOracle {
    levels: Option<(u32, u32)>,
    primes: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    schema_version: Option<u64>,
    p: u64,
    #[serde(default = "one")]
    f: u64,
    #[serde(default, rename = "H")]
    h: Vec<u64>,
    #[serde(default, rename = "S")]
    s: Vec<u64>,
    #[serde(default)]
    lambda: RawLambda,
    #[serde(default)]
    precision: RawPrecision,
    #[serde(default)]
    oracle: RawOracle,
    characters: Option<Vec<String>>,
}

fn one() -> u64 {
    1
}

/// A validated job.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub field: FieldSpec,
    pub s: Vec<u64>,
    pub lambda_mode: LambdaMode,
    pub lambda_table: BTreeMap<String, u64>,
    pub stickelberger_precision: u32,
    pub oracle_levels: Option<(u32, u32)>,
    pub oracle_primes: Option<Vec<u64>>,
    /// Labels selecting characters for the `lambda` subcommand.
    pub characters: Option<Vec<String>>,
}

fn check_primes(name: &str, list: &[u64], p: u64, out: &mut Vec<String>) {
    if list.contains(&p) {
        out.push(format!("{name} must not contain p"));
    }
    for (i, &q) in list.iter().enumerate() {
        if !is_prime(q) {
            out.push(format!("{name} entry {q} is not prime"));
        }
        if list[..i].contains(&q) {
            out.push(format!("{name} entry {q} is repeated"));
        }
    }
}

/// Parses and validates a job document. On failure the `Config` error lists
/// every violated invariant, separated by `; `.
pub fn parse_config(text: &str) -> Result<JobConfig> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| Error::Config(format!("malformed document: {e}")))?;
    let mut bad = Vec::new();
    if let Some(v) = raw.schema_version {
        if v != SCHEMA_VERSION {
            bad.push(format!("unsupported schema_version {v} (expected {SCHEMA_VERSION})"));
        }
    }
    let p = raw.p;
    if p < 3 || !is_prime(p) {
        bad.push(format!("p = {p} must be an odd prime"));
    }
    check_primes("S", &raw.s, p, &mut bad);
    if let Some(primes) = &raw.oracle.primes {
        check_primes("oracle.primes", primes, p, &mut bad);
    }
    if let Some((a, b)) = raw.oracle.levels {
        if b <= a {
            bad.push(format!("oracle levels ({a}, {b}) must satisfy n0 < n1"));
        }
    }
    if raw.precision.stickelberger == Some(0) {
        bad.push("precision.stickelberger must be positive".into());
    }
    let field = if p >= 3 && is_prime(p) {
        match FieldSpec::new(p, raw.f, raw.h.clone()) {
            Ok(f) => Some(f),
            Err(Error::Config(m)) => {
                bad.push(m);
                None
            }
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    if !bad.is_empty() {
        return Err(Error::Config(bad.join("; ")));
    }
    Ok(JobConfig {
        field: field.expect("validated"),
        s: raw.s,
        lambda_mode: raw.lambda.mode,
        lambda_table: raw.lambda.table,
        stickelberger_precision: raw.precision.stickelberger.unwrap_or(DEFAULT_PRECISION),
        oracle_levels: raw.oracle.levels,
        oracle_primes: raw.oracle.primes,
        characters: raw.characters,
    })
}

/// Parses a lambda table file: a JSON object from labels to integers.
pub fn parse_lambda_table(text: &str) -> Result<BTreeMap<String, u64>> {
    serde_json::from_str(text).map_err(|e| Error::Config(format!("malformed lambda table: {e}")))
}

#[derive(Debug, Clone)]
pub enum Command {
    Rank { assume_greenberg: bool, lambda_table: Option<BTreeMap<String, u64>> },
    Oracle { levels: Option<(u32, u32)> },
    Lambda,
    Chars,
}

/// Result of a run: the report (possibly present even on failure) and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub report: Option<String>,
    pub diagnostic: Option<String>,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Domain(_) => EXIT_CONFIG,
        Error::LambdaUnavailable(_) => EXIT_LAMBDA,
        Error::Precision(_) | Error::Inconsistency(_) => EXIT_INCONSISTENT,
    }
}

impl Outcome {
    fn failed(err: Error) -> Self {
        Self { code: exit_code(&err), report: None, diagnostic: Some(err.to_string()) }
    }
}

fn render<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

/// Parses `text` and runs `cmd`.
pub fn run_text(text: &str, cmd: &Command) -> Outcome {
    match parse_config(text) {
        Ok(job) => run(&job, cmd),
        Err(e) => Outcome::failed(e),
    }
}

pub fn run(job: &JobConfig, cmd: &Command) -> Outcome {
    let result = match cmd {
        Command::Rank { assume_greenberg, lambda_table } => {
            rank_report(job, *assume_greenberg, lambda_table.as_ref()).map(|r| (render(&r), EXIT_OK))
        }
        Command::Oracle { levels } => oracle_report(job, levels.or(job.oracle_levels)).map(|r| {
            let code = if r.pass { EXIT_OK } else { EXIT_INCONSISTENT };
            (render(&r), code)
        }),
        Command::Lambda => lambda_report(job).map(|r| (render(&r), EXIT_OK)),
        Command::Chars => Ok((render(&chars_report(job)), EXIT_OK)),
    };
    match result {
        Ok((report, code)) => Outcome {
            code,
            report: Some(report),
            diagnostic: (code != EXIT_OK).then(|| "oracle verification failed".to_string()),
        },
        Err(e) => Outcome::failed(e),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldReport {
    pub p: u64,
    pub f: u64,
    #[serde(rename = "H")]
    pub h: Vec<u64>,
}

impl From<&FieldSpec> for FieldReport {
    fn from(field: &FieldSpec) -> Self {
        Self { p: field.p(), f: field.f(), h: field.h_generators().to_vec() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RankReport {
    pub schema_version: u64,
    pub field: FieldReport,
    #[serde(rename = "S")]
    pub s: Vec<u64>,
    pub records: Vec<RankRecord>,
    pub total: u64,
    pub conjectural: bool,
}

pub fn rank_report(
    job: &JobConfig,
    assume_greenberg: bool,
    extra_table: Option<&BTreeMap<String, u64>>,
) -> Result<RankReport> {
    let mut table = job.lambda_table.clone();
    if let Some(extra) = extra_table {
        table.extend(extra.iter().map(|(k, v)| (k.clone(), *v)));
    }
    let provider =
        LambdaProvider::table(table).with_greenberg(assume_greenberg || job.lambda_mode == LambdaMode::GreenbergEven);
    let t = rank_total(&job.field, &job.s, &provider)?;
    Ok(RankReport {
        schema_version: SCHEMA_VERSION,
        field: (&job.field).into(),
        s: job.s.clone(),
        records: t.records,
        total: t.total,
        conjectural: t.conjectural,
    })
}

/// One cell of the verification grid: the chi-quotient orders at two levels
/// against the predicted rank `d_chi p^{m_q}` (or 0).
#[derive(Debug, Clone, Serialize)]
pub struct OracleRow {
    pub q: u64,
    pub character: String,
    pub levels: (u32, u32),
    pub exponents: Option<(u32, u32)>,
    pub rank_estimate: Option<u64>,
    pub predicted: u64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub schema_version: u64,
    pub field: FieldReport,
    pub rows: Vec<OracleRow>,
    pub pass: bool,
}

fn class_reps(field: &FieldSpec) -> Vec<(String, DirichletCharacter)> {
    let chars = enumerate_characters(field);
    conjugacy_classes(&chars, field.p()).into_iter().map(|c| (chars[c[0]].label(c[0]), chars[c[0]].clone())).collect()
}

pub fn oracle_report(job: &JobConfig, levels: Option<(u32, u32)>) -> Result<OracleReport> {
    if let Some((a, b)) = levels {
        if b <= a {
            return Err(Error::Config(format!("oracle levels ({a}, {b}) must satisfy n0 < n1")));
        }
    }
    let field = &job.field;
    let p = field.p();
    let primes = job.oracle_primes.as_ref().unwrap_or(&job.s);
    let reps = class_reps(field);
    let mut rows = Vec::new();
    for &q in primes {
        let (n0, n1) = match levels {
            Some(l) => l,
            None => {
                let n0 = stabilization_level(field, q)?;
                (n0, n0 + 1)
            }
        };
        let lower = residue_module(field, q, n0)?;
        let upper = residue_module(field, q, n1)?;
        let m = m_index(q, p)?;
        for (label, chi) in &reps {
            let predicted = if inertia_trivial(chi, q) && sigma0_ok(chi, q)? { chi.d_chi() * p.pow(m) } else { 0 };
            let exponents = (chi_quotient_order(&lower, chi)?, chi_quotient_order(&upper, chi)?);
            let estimate = match rank_estimate(field, q, chi, n0, n1) {
                Ok(r) => Some(r),
                Err(Error::Inconsistency(_)) => None,
                Err(e) => return Err(e),
            };
            rows.push(OracleRow {
                q,
                character: label.clone(),
                levels: (n0, n1),
                exponents: Some(exponents),
                rank_estimate: estimate,
                predicted,
                pass: estimate == Some(predicted),
            });
        }
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(OracleReport { schema_version: SCHEMA_VERSION, field: field.into(), rows, pass })
}

#[derive(Debug, Clone, Serialize)]
pub struct LambdaRow {
    pub character: String,
    pub lambda: u64,
    pub zp_rank: u64,
    pub mu_zero: bool,
    pub levels_used: Vec<u32>,
    pub precision: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct LambdaReport {
    pub schema_version: u64,
    pub field: FieldReport,
    pub rows: Vec<LambdaRow>,
}

/// Stickelberger lambda for the selected characters, or for every odd class
/// other than omega.
pub fn lambda_report(job: &JobConfig) -> Result<LambdaReport> {
    let reps = class_reps(&job.field);
    let selected: Vec<&(String, DirichletCharacter)> = match &job.characters {
        Some(labels) => labels
            .iter()
            .map(|l| {
                reps.iter().find(|(label, _)| label == l).ok_or_else(|| Error::Config(format!("unknown character {l}")))
            })
            .collect::<Result<_>>()?,
        None => reps.iter().filter(|(_, c)| c.is_odd() && !c.is_teichmuller()).collect(),
    };
    let mut rows = Vec::new();
    for (label, chi) in selected {
        if chi.is_even() || chi.is_teichmuller() {
            return Err(Error::LambdaUnavailable(label.clone()));
        }
        let mut precision = job.stickelberger_precision;
        let mut attempt = 0;
        let l = loop {
            match lambda_minus_with(chi, precision) {
                Err(Error::Precision(_)) if attempt < PRECISION_RETRIES => {
                    precision *= 2;
                    attempt += 1;
                }
                other => break other?,
            }
        };
        rows.push(LambdaRow {
            character: label.clone(),
            lambda: l.lambda,
            zp_rank: l.zp_rank(chi),
            mu_zero: l.mu_zero,
            levels_used: l.levels_used,
            precision: l.precision,
        });
    }
    Ok(LambdaReport { schema_version: SCHEMA_VERSION, field: (&job.field).into(), rows })
}

#[derive(Debug, Clone, Serialize)]
pub struct CharacterRow {
    pub index: usize,
    pub label: String,
    #[serde(flatten)]
    pub summary: CharacterSummary,
    /// Enumeration indices of the conjugacy class, representative first.
    pub class: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CharsReport {
    pub schema_version: u64,
    pub field: FieldReport,
    pub group_order: u64,
    pub characters: Vec<CharacterRow>,
}

pub fn chars_report(job: &JobConfig) -> CharsReport {
    let chars = enumerate_characters(&job.field);
    let characters = conjugacy_classes(&chars, job.field.p())
        .into_iter()
        .map(|class| {
            let i = class[0];
            CharacterRow { index: i, label: chars[i].label(i), summary: chars[i].summary(), class }
        })
        .collect();
    CharsReport {
        schema_version: SCHEMA_VERSION,
        field: (&job.field).into(),
        group_order: job.field.group_order(),
        characters,
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::inconsistency(format!("report lacks `{key}`")))
}

fn uint(v: &Value, key: &str) -> Result<u64> {
    field(v, key)?.as_u64().ok_or_else(|| Error::inconsistency(format!("`{key}` is not a non-negative integer")))
}

/// Recomputes every rank of a rank report from its own fields:
/// `rank = lambda + sum_{q in S_chi} d_chi p^{m_q} - P_chi` when `S_chi` is
/// nonempty and `rank = lambda` otherwise, with `P_chi` rederived from the
/// parity, the label and `degF`. Also checks `total` and `conjectural`.
pub fn validate_rank_report(report: &Value) -> Result<()> {
    if uint(report, "schema_version")? != SCHEMA_VERSION {
        return Err(Error::inconsistency("unexpected schema_version"));
    }
    let p = uint(field(report, "field")?, "p")?;
    let records =
        field(report, "records")?.as_array().ok_or_else(|| Error::inconsistency("`records` is not an array"))?;
    let (mut total, mut conjectural) = (0u64, false);
    for r in records {
        let name = field(r, "character")?.as_str().unwrap_or("?").to_string();
        let d = uint(r, "d_chi")?;
        let lambda = field(r, "lambda")?;
        let lam = uint(lambda, "value")?;
        let conj = field(lambda, "conjectural")?.as_bool().unwrap_or(false);
        let s_chi = field(r, "S_chi")?.as_array().map(|a| a.len()).unwrap_or(0);
        let m_map = field(r, "m_map")?.as_object().ok_or_else(|| Error::inconsistency("`m_map` is not an object"))?;
        if m_map.len() != s_chi {
            return Err(Error::inconsistency(format!("{name}: m_map and S_chi differ in size")));
        }
        let odd = field(r, "parity")?.as_str() == Some("odd");
        let deg_f = uint(r, "degF")?;
        let p_chi = match (name.as_str(), odd) {
            ("omega", _) => 1,
            (_, true) => 0,
            (_, false) => d * deg_f,
        };
        let expected = if s_chi == 0 {
            lam
        } else {
            let tame: u64 = m_map.values().map(|m| d * p.pow(m.as_u64().unwrap_or(0) as u32)).sum();
            (lam + tame).checked_sub(p_chi).ok_or_else(|| Error::inconsistency(format!("{name}: negative rank")))?
        };
        if s_chi > 0 && uint(r, "P_chi")? != p_chi {
            return Err(Error::inconsistency(format!("{name}: P_chi should be {p_chi}")));
        }
        let rank = uint(r, "rank")?;
        if rank != expected {
            return Err(Error::inconsistency(format!("{name}: rank {rank} but fields give {expected}")));
        }
        total += rank;
        conjectural |= conj;
    }
    if uint(report, "total")? != total {
        return Err(Error::inconsistency(format!("total should be {total}")));
    }
    if field(report, "conjectural")?.as_bool() != Some(conjectural) {
        return Err(Error::inconsistency("conjectural flag does not match the records"));
    }
    Ok(())
}
