//! Command-line front end.
//!
//! Exit codes: 0 success, 1 malformed input or usage error, 2 when the
//! classifier cannot produce or check its evidence (coverage gap, failed
//! edge-case evidence, failed identity, oracle mismatch, failed check in
//! `verify`).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::classifier::{
    classify_with, closed_forms, trail_is_complete, verify_closed_form, verify_identity_lemmas, Classification,
    ClassifyError,
};
use crate::curve::Curve;
use crate::enumerator::{check_residual, enumerate, SeriesTruncation};
use crate::exactalg::{BiPoly, Rat, Ring};
use crate::model::{Model, ModelError, Step, StepSet, Weighting};
use crate::par;
use crate::sigmadist::{build_matrices_with, shift_blocks, MatrixOptions, DEFAULT_WINDOW, MAX_WINDOW};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_EVIDENCE: i32 = 2;

/// Digits after the point in phase-scan ratios.
const DECIMALS: usize = 12;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("verification failed for {0} model(s)")]
    VerifyFailed(usize),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Model(_) | CliError::Io(_) | CliError::Csv(_) => EXIT_INPUT,
            CliError::Classify(ClassifyError::NotApplicable(_)) => EXIT_INPUT,
            CliError::Classify(_) | CliError::VerifyFailed(_) => EXIT_EVIDENCE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "quadwalk", version, about = "Exact classification of weighted quadrant walks with interacting boundaries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a model and print the verdict with its evidence trail.
    Classify(Common),
    /// Count walks: Q(x, y) modulo t^(order+1).
    Enumerate(Common),
    /// Print the σ-distance matrices M1 and M2.
    Matrix(Common),
    /// Check every piece of evidence against the walk enumeration, for one
    /// model or for a seeded random sample of weightings.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Random weightings per step set when no model is given.
        #[arg(long, default_value_t = 3)]
        samples: usize,
    },
    /// Ratios [t^n]Q(1,0)/[t^n]Q(1,1) and [t^n]Q(0,1)/[t^n]Q(1,1) over a grid of (a, b).
    PhaseScan {
        #[command(flatten)]
        common: Common,
        /// Comma-separated values of a (defaults to the model's a).
        #[arg(long, value_delimiter = ',')]
        a_values: Vec<String>,
        /// Comma-separated values of b (defaults to the model's b).
        #[arg(long, value_delimiter = ',')]
        b_values: Vec<String>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Model file (JSON).
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Truncation order N.
    #[arg(long, default_value_t = 12)]
    pub order: usize,
    /// Explicit orbit window W.
    #[arg(long, default_value_t = DEFAULT_WINDOW, value_parser = parse_window)]
    pub window: usize,
    /// Output format; json by default, csv for phase-scan.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn parse_window(s: &str) -> Result<usize, String> {
    let w: usize = s.parse().map_err(|e| format!("{e}"))?;
    if (2..=MAX_WINDOW).contains(&w) {
        Ok(w)
    } else {
        Err(format!("window must lie in [2, {MAX_WINDOW}]"))
    }
}

impl Common {
    fn format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }

    fn matrix_options(&self) -> MatrixOptions {
        MatrixOptions { window: self.window, seed: self.seed, ..MatrixOptions::default() }
    }

    fn load_model(&self) -> Result<Model, CliError> {
        let path = self.model.as_ref().ok_or_else(|| CliError::Input("--model is required".into()))?;
        read_model(path)
    }
}

pub fn read_model(path: &Path) -> Result<Model, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(Model::from_json(&text)?)
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Classify(c) => cmd_classify(c, out),
        Command::Enumerate(c) => cmd_enumerate(c, out),
        Command::Matrix(c) => cmd_matrix(c, out),
        Command::Verify { common, samples } => cmd_verify(common, *samples, out),
        Command::PhaseScan { common, a_values, b_values } => cmd_phase_scan(common, a_values, b_values, out),
    }
}

fn write_json(out: &mut dyn Write, v: &Value) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, v).map_err(|e| CliError::Io(e.into()))?;
    writeln!(out)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// classify

pub fn cmd_classify(c: &Common, out: &mut dyn Write) -> Result<(), CliError> {
    let model = c.load_model()?;
    let cl = classify_with(&model, &c.matrix_options())?;
    match c.format() {
        Format::Json => write_json(out, &cl.to_json()),
        Format::Text => {
            write!(out, "{}", classification_text(&cl))?;
            Ok(())
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["stepset", "a", "b", "verdict", "qx0", "q0y", "rules"])?;
            let (qx, qy) = match &cl.closed_forms {
                Some(f) => (f.qx0.to_string(), f.q0y.to_string()),
                None => (String::new(), String::new()),
            };
            let rules: Vec<&str> = cl.trail.iter().map(|e| e.rule.as_str()).collect();
            w.write_record([
                model.stepset().name().to_string(),
                model.a().to_string(),
                model.b().to_string(),
                cl.verdict.to_string(),
                qx,
                qy,
                rules.join(";"),
            ])?;
            w.flush()?;
            Ok(())
        }
    }
}

fn classification_text(cl: &Classification) -> String {
    let mut s = format!("model: {}\nverdict: {}\n", cl.model, cl.verdict);
    if let Some(f) = &cl.closed_forms {
        s.push_str(&format!("{}\n{}\n", f.qx0, f.q0y));
    }
    for e in &cl.trail {
        s.push_str(&format!("rule: {}\n", e.rule));
    }
    s
}

// ---------------------------------------------------------------------------
// enumerate

fn bipoly_string(p: &BiPoly<Rat>) -> String {
    let terms = p.terms();
    if terms.is_empty() {
        return "0".into();
    }
    let parts: Vec<String> = terms
        .into_iter()
        .map(|(i, j, c)| {
            let mut m = Vec::new();
            if i > 0 {
                m.push(if i == 1 { "x".to_string() } else { format!("x^{i}") });
            }
            if j > 0 {
                m.push(if j == 1 { "y".to_string() } else { format!("y^{j}") });
            }
            match (m.is_empty(), c == Rat::one()) {
                (true, _) => c.to_string(),
                (false, true) => m.join("*"),
                (false, false) => format!("{c}*{}", m.join("*")),
            }
        })
        .collect();
    parts.join(" + ")
}

pub fn cmd_enumerate(c: &Common, out: &mut dyn Write) -> Result<(), CliError> {
    let model = c.load_model()?;
    let series = enumerate(&model, c.order);
    match c.format() {
        Format::Json => write_json(out, &series_json(&model, &series)),
        Format::Text => {
            for (n, p) in series.terms().iter().enumerate() {
                writeln!(out, "t^{n}: {}", bipoly_string(p))?;
            }
            Ok(())
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["n", "i", "j", "coeff"])?;
            for (n, p) in series.terms().iter().enumerate() {
                for (i, j, coef) in p.terms() {
                    w.write_record([n.to_string(), i.to_string(), j.to_string(), coef.to_string()])?;
                }
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn series_json(model: &Model, s: &SeriesTruncation) -> Value {
    let strs = |v: Vec<Rat>| v.into_iter().map(|r| r.to_string()).collect::<Vec<_>>();
    let terms: Value = serde_json::from_str(&s.to_json()).expect("series JSON is valid");
    json!({
        "model": serde_json::to_value(model.to_file()).expect("model serializes"),
        "order": s.order(),
        "terms": terms,
        "q11": strs(s.at_one()),
        "q10": strs(s.x_axis_at_one()),
        "q01": strs(s.y_axis_at_one()),
    })
}

// ---------------------------------------------------------------------------
// matrix

pub fn cmd_matrix(c: &Common, out: &mut dyn Write) -> Result<(), CliError> {
    let model = c.load_model()?;
    let curve = Curve::new(&model);
    let (m1, m2) = build_matrices_with(&curve, &c.matrix_options()).map_err(ClassifyError::from)?;
    match c.format() {
        Format::Json => write_json(out, &json!({"m1": m1.to_json(), "m2": m2.to_json()})),
        Format::Text => {
            write!(out, "{}\n{}", m1.to_text(), m2.to_text())?;
            Ok(())
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["matrix", "row", "col", "distance"])?;
            for m in [&m1, &m2] {
                for r in 0..4 {
                    for k in 0..4 {
                        w.write_record([m.which.to_string(), m.rows[r].to_string(), m.cols[k].to_string(), m.get(r, k).to_string()])?;
                    }
                }
            }
            w.flush()?;
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// verify

/// One verified model; `failures` is empty when every check passed.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub model: Model,
    pub verdict: Option<String>,
    pub checks: Vec<String>,
    pub failures: Vec<String>,
}

impl VerifyReport {
    fn to_json(&self) -> Value {
        json!({
            "model": serde_json::to_value(self.model.to_file()).expect("model serializes"),
            "verdict": self.verdict,
            "checks": self.checks,
            "failures": self.failures,
            "ok": self.failures.is_empty(),
        })
    }
}

/// Runs every check that applies to `model`: the functional equation on the
/// enumeration, the curve identities, matrix symmetry and shift, the
/// classification trail and, when present, the closed forms.
pub fn verify_model(model: &Model, order: usize, opts: &MatrixOptions) -> VerifyReport {
    let mut checks = Vec::new();
    let mut failures = Vec::new();
    let mut verdict = None;
    let series = enumerate(model, order);
    match check_residual(model, &series) {
        Ok(()) => checks.push(format!("functional equation holds mod t^{}", order + 1)),
        Err(e) => failures.push(e.to_string()),
    }
    match verify_identity_lemmas(model) {
        Ok(ids) => checks.push(format!("{} curve identities", ids.len())),
        Err(e) => failures.push(e.to_string()),
    }
    match build_matrices_with(&Curve::new(model), opts) {
        Ok((m1, m2)) => {
            if m1.is_symmetric() && m2.is_symmetric() && shift_blocks(&m1) == m2 {
                checks.push("matrices symmetric and shifted".into());
            } else {
                failures.push("matrix symmetry or shift fails".into());
            }
        }
        Err(e) => failures.push(e.to_string()),
    }
    match classify_with(model, opts) {
        Ok(cl) => {
            verdict = Some(cl.verdict.to_string());
            if trail_is_complete(&cl) {
                checks.push("classification trail complete".into());
            } else {
                failures.push("classification trail incomplete".into());
            }
        }
        Err(e) => failures.push(e.to_string()),
    }
    if closed_forms(model).is_some() {
        match verify_closed_form(model, order) {
            Ok(r) => checks.push(format!("closed forms match {} enumerated coefficients", r.matched_terms)),
            Err(e) => failures.push(e.to_string()),
        }
    }
    VerifyReport { model: model.clone(), verdict, checks, failures }
}

/// Weightings drawn from small rationals; `a` and `b` come from a list that
/// hits the special lines `A = 1/2` and `A + B = 1` with positive probability.
pub fn random_models(seed: u64, per_stepset: usize) -> Vec<Model> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ab = [(1, 1), (2, 1), (3, 1), (3, 2), (4, 3), (5, 2), (1, 2), (4, 1)];
    let mut out = Vec::new();
    for set in StepSet::ALL {
        for _ in 0..per_stepset {
            let steps: Vec<(Step, Rat)> = set
                .steps()
                .iter()
                .map(|&s| (s, Rat::new(rng.random_range(1..=4), rng.random_range(1..=3))))
                .collect();
            let (an, ad) = ab[rng.random_range(0..ab.len())];
            let (bn, bd) = ab[rng.random_range(0..ab.len())];
            let w = Weighting::new(&steps, Rat::new(an, ad), Rat::new(bn, bd));
            out.push(Model::new(set, w).expect("positive weights on the support"));
        }
    }
    out
}

pub fn cmd_verify(c: &Common, samples: usize, out: &mut dyn Write) -> Result<(), CliError> {
    let models = match &c.model {
        Some(p) => vec![read_model(p)?],
        None => random_models(c.seed, samples),
    };
    let opts = c.matrix_options();
    let reports = par::map(&models, |m| verify_model(m, c.order, &opts));
    let failed = reports.iter().filter(|r| !r.failures.is_empty()).count();
    match c.format() {
        Format::Json => write_json(out, &Value::Array(reports.iter().map(VerifyReport::to_json).collect()))?,
        Format::Text => {
            for r in &reports {
                let status = if r.failures.is_empty() { "ok" } else { "FAILED" };
                writeln!(out, "{status} {} -> {}", r.model, r.verdict.as_deref().unwrap_or("-"))?;
                for f in &r.failures {
                    writeln!(out, "  {f}")?;
                }
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["model", "verdict", "ok", "failures"])?;
            for r in &reports {
                w.write_record([
                    r.model.to_string(),
                    r.verdict.clone().unwrap_or_default(),
                    r.failures.is_empty().to_string(),
                    r.failures.join("; "),
                ])?;
            }
            w.flush()?;
        }
    }
    if failed > 0 {
        return Err(CliError::VerifyFailed(failed));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// phase-scan

/// One row of the phase scan.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseRow {
    pub a: Rat,
    pub b: Rat,
    pub n: usize,
    pub ratio_x_axis: Rat,
    pub ratio_y_axis: Rat,
}

fn parse_rats(vals: &[String]) -> Result<Vec<Rat>, CliError> {
    vals.iter()
        .map(|s| s.parse::<Rat>().map_err(|_| CliError::Input(format!("bad rational {s:?}"))))
        .collect()
}

/// Ratio sequences for every `(a, b)` of the grid, in grid order (a outer).
pub fn phase_scan(model: &Model, a_values: &[Rat], b_values: &[Rat], order: usize) -> Result<Vec<PhaseRow>, CliError> {
    if order < 4 {
        return Err(CliError::Input(format!("phase scan needs --order >= 4, got {order}")));
    }
    let mut grid = Vec::new();
    for a in a_values {
        for b in b_values {
            let w = Weighting::new(&model.steps(), a.clone(), b.clone());
            grid.push(Model::new(model.stepset(), w)?);
        }
    }
    let rows = par::map(&grid, |m| {
        let s = enumerate(m, order);
        let (all, x, y) = (s.at_one(), s.x_axis_at_one(), s.y_axis_at_one());
        (0..=order)
            .map(|n| PhaseRow {
                a: m.a().clone(),
                b: m.b().clone(),
                n,
                ratio_x_axis: &x[n] / &all[n],
                ratio_y_axis: &y[n] / &all[n],
            })
            .collect::<Vec<_>>()
    });
    Ok(rows.into_iter().flatten().collect())
}

pub fn cmd_phase_scan(c: &Common, a_values: &[String], b_values: &[String], out: &mut dyn Write) -> Result<(), CliError> {
    let model = c.load_model()?;
    let mut avs = parse_rats(a_values)?;
    let mut bvs = parse_rats(b_values)?;
    if avs.is_empty() {
        avs.push(model.a().clone());
    }
    if bvs.is_empty() {
        bvs.push(model.b().clone());
    }
    let rows = phase_scan(&model, &avs, &bvs, c.order)?;
    let dec = |r: &Rat| r.to_decimal(DECIMALS);
    match c.format.unwrap_or(Format::Csv) {
        Format::Csv | Format::Text => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["a", "b", "n", "ratio_x_axis", "ratio_y_axis"])?;
            for r in &rows {
                w.write_record([dec(&r.a), dec(&r.b), r.n.to_string(), dec(&r.ratio_x_axis), dec(&r.ratio_y_axis)])?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "a": r.a.to_string(),
                        "b": r.b.to_string(),
                        "n": r.n,
                        "ratio_x_axis": dec(&r.ratio_x_axis),
                        "ratio_y_axis": dec(&r.ratio_y_axis),
                    })
                })
                .collect();
            write_json(out, &Value::Array(v))
        }
    }
}
