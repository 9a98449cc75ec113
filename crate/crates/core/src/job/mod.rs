//! Batch jobs: a JSON job specification in, a results document plus CSV and
//! SVG artifacts out.
//!
//! Exit codes: `0` success, `1` input error, `2` validation failure. Every
//! document carries a `status` field and, on failure, an `error` object with
//! `kind` and `message`.

mod output;
mod plot;

pub use output::{to_json_compact, to_json_pretty};
pub use plot::{Plot, Series};

use crate::error::Error;
use crate::krein::{Relation, Subspace};
use crate::lattice::{
    classify, direct_sum_weyl, membership, renormalize, BlockFamily, BlockTransform, ClassificationReport, LatticeSpec,
    MembershipTarget, WeightedSequence,
};
use crate::mfunction::{m_function, PotentialPiece, SLProblem};
use crate::models::ModelKind;
use crate::numerics::{
    c, json, max_abs, operator_norm, psd_check, rel_diff, upper_half_plane_grid, zeros, Complex64, ComplexMatrix,
    ExpSum, Tolerance, I,
};
use crate::ryzhov::{RandomOptions, RyzhovTriple};
use crate::spectral::{
    a0_resolvent, build_theta, det_scan, krein_resolvent_element, pieces_inner, shooting_oracle, BoundaryCondition,
    Cutoff, SpectrumResult,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Classify,
    WeylEval,
    Membership,
    Spectrum,
    Resolvent,
    Renormalize,
    Validate,
    Mfunction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?} (expected json or csv)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumMethod {
    DetScan,
    Shooting,
    #[default]
    Both,
}

/// Finite sandbox triple, drawn at random from the job seed or given explicitly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SandboxSpec {
    Random {
        state_dim: usize,
        boundary_dim: usize,
        #[serde(default)]
        positive_a0: bool,
        #[serde(default)]
        nonpositive_e: bool,
    },
    Explicit {
        #[serde(flatten)]
        triple: RyzhovTriple,
    },
}

/// `Theta = ker [C_0 C_1]` in the boundary coordinates of the truncation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CustomTheta {
    #[serde(with = "crate::numerics::json")]
    pub c0: ComplexMatrix,
    #[serde(with = "crate::numerics::json")]
    pub c1: ComplexMatrix,
}

/// One exponential term `coeff * exp(rate t)` of resolvent input data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataTerm {
    pub rate: [f64; 2],
    pub coeff: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub gap_point: Option<f64>,
    /// Evaluation points `[re, im]`; defaults to a fixed 25-point upper half-plane grid.
    pub z: Option<Vec<[f64; 2]>>,
    pub sequence: Option<WeightedSequence>,
    pub target: Option<MembershipTarget>,
    /// Couplings at the interior lattice points.
    pub alpha: Option<Vec<f64>>,
    pub cutoff: Option<Cutoff>,
    pub theta: Option<CustomTheta>,
    /// Hermitian parameter of a sandbox extension, as rows of `[re, im]`.
    pub theta_matrix: Option<Vec<Vec<[f64; 2]>>>,
    pub interval: Option<[f64; 2]>,
    pub method: Option<SpectrumMethod>,
    pub lambda: Option<[f64; 2]>,
    /// Piecewise input data for the resolvent, one list of terms per interval.
    pub data: Option<Vec<Vec<DataTerm>>>,
    pub scheme: Option<BlockTransform>,
    pub sandbox: Option<SandboxSpec>,
    pub potential: Option<Vec<PotentialPiece>>,
    pub lambdas: Option<Vec<[f64; 2]>>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub task: Task,
    #[serde(default)]
    pub model: Option<ModelKind>,
    #[serde(default)]
    pub chain: Vec<BlockTransform>,
    #[serde(default)]
    pub lattice: Option<LatticeSpec>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub params: Params,
}

impl JobSpec {
    pub fn from_json(s: &str) -> Result<Self, JobError> {
        serde_json::from_str(s).map_err(|e| JobError::input(format!("invalid job specification: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Input,
    Validation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JobError {
    pub kind: ErrorKind,
    pub message: String,
}

impl JobError {
    pub fn input(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Input, message: message.into() }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Validation, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Input => 1,
            ErrorKind::Validation => 2,
        }
    }
}

impl From<Error> for JobError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotHermitian { .. } | Error::NonSelfadjointTheta { .. } => Self::validation(e.to_string()),
            _ => Self::input(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub output: PathBuf,
    pub tol: Option<f64>,
    pub grid: Option<usize>,
    pub threads: Option<usize>,
    pub plot: bool,
    pub format: Format,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { output: PathBuf::from("."), tol: None, grid: None, threads: None, plot: false, format: Format::Json }
    }
}

/// Computed result of a task before anything is written.
pub struct TaskOutput {
    pub result: Value,
    /// Scan samples `(file name, CSV text)`, always written.
    pub dumps: Vec<(String, String)>,
    /// Result tables `(file name, CSV text)`, written with `Format::Csv`.
    pub tables: Vec<(String, String)>,
    pub plots: Vec<(String, Plot)>,
    /// Set when a check inside the task failed.
    pub failure: Option<String>,
}

impl TaskOutput {
    fn new(result: Value) -> Self {
        Self { result, dumps: Vec::new(), tables: Vec::new(), plots: Vec::new(), failure: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub document: Value,
    pub files: Vec<PathBuf>,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

fn cpx(p: [f64; 2]) -> Complex64 {
    c(p[0], p[1])
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn rows(m: &ComplexMatrix) -> Value {
    to_value(&json::to_rows(m))
}

fn require<T: Clone>(v: &Option<T>, name: &str) -> Result<T, JobError> {
    v.clone().ok_or_else(|| JobError::input(format!("missing required field {name:?}")))
}

fn family(job: &JobSpec) -> Result<BlockFamily, JobError> {
    Ok(BlockFamily::new(require(&job.model, "model")?, job.chain.clone())?)
}

fn z_grid(job: &JobSpec) -> Vec<Complex64> {
    job.params.z.as_ref().map_or_else(upper_half_plane_grid, |z| z.iter().map(|p| cpx(*p)).collect())
}

fn tolerance(job: &JobSpec, opts: &RunOptions, default: f64) -> Result<Tolerance, JobError> {
    let t = opts.tol.or(job.params.tol).unwrap_or(default);
    Ok(Tolerance::new(0.0, t)?)
}

fn sandbox(job: &JobSpec) -> Result<Option<RyzhovTriple>, JobError> {
    Ok(match &job.params.sandbox {
        None => None,
        Some(SandboxSpec::Random { state_dim, boundary_dim, positive_a0, nonpositive_e }) => {
            if *boundary_dim == 0 || boundary_dim > state_dim {
                return Err(JobError::input("sandbox needs 1 <= boundary_dim <= state_dim"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(job.seed.unwrap_or(0));
            let opts = RandomOptions { positive_a0: *positive_a0, nonpositive_e: *nonpositive_e };
            Some(RyzhovTriple::random(*state_dim, *boundary_dim, opts, &mut rng))
        }
        Some(SandboxSpec::Explicit { triple }) => {
            Some(RyzhovTriple::new(triple.a0inv().clone(), triple.g().clone(), triple.e().clone())?)
        }
    })
}

/// `Theta` from a custom relation or from interior couplings and an end condition.
fn theta(job: &JobSpec, model: ModelKind, lattice: &LatticeSpec) -> Result<BoundaryCondition, JobError> {
    if let Some(t) = &job.params.theta {
        let bc = BoundaryCondition::custom(t.c0.clone(), t.c1.clone())?;
        let dim = model.boundary_dim() * lattice.len();
        if bc.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: bc.dim() }.into());
        }
        let residual = bc.selfadjoint_residual();
        if residual > 1e-10 {
            return Err(Error::NonSelfadjointTheta { residual }.into());
        }
        return Ok(bc);
    }
    let alpha = job.params.alpha.clone().unwrap_or_else(|| vec![0.0; lattice.len() - 1]);
    let cutoff = job.params.cutoff.unwrap_or(match model {
        ModelKind::Schroedinger => Cutoff::DirichletEnd,
        ModelKind::Dirac { .. } => Cutoff::DiracHardWall,
        ModelKind::Momentum => Cutoff::Periodic,
    });
    Ok(build_theta(model, lattice, &alpha, cutoff)?)
}

/// Runs the computation of a job without touching the file system.
pub fn execute(job: &JobSpec, opts: &RunOptions) -> Result<TaskOutput, JobError> {
    match opts.threads {
        Some(0) => Err(JobError::input("--threads must be positive")),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| JobError::input(e.to_string()))?
            .install(|| dispatch(job, opts)),
        None => dispatch(job, opts),
    }
}

fn dispatch(job: &JobSpec, opts: &RunOptions) -> Result<TaskOutput, JobError> {
    match job.task {
        Task::Classify => task_classify(job),
        Task::WeylEval => task_weyl_eval(job),
        Task::Membership => task_membership(job),
        Task::Spectrum => task_spectrum(job, opts),
        Task::Resolvent => task_resolvent(job),
        Task::Renormalize => task_renormalize(job),
        Task::Validate => task_validate(job, opts),
        Task::Mfunction => task_mfunction(job),
    }
}

fn classification_table(report: &ClassificationReport, lattice: &LatticeSpec) -> String {
    let cv = &report.curves;
    let gap = cv.norm_m_a.is_some();
    let mut out = String::from("n,d,norm_m_i,norm_inv_im_m_i,norm_im_m_i");
    if gap {
        out.push_str(",norm_m_a,norm_dm_a,norm_inv_dm_a");
    }
    out.push('\n');
    for k in 0..cv.norm_m_i.len() {
        write!(
            out,
            "{},{:.17e},{:.17e},{:.17e},{:.17e}",
            k + 1,
            lattice.spacing(k + 1),
            cv.norm_m_i[k],
            cv.norm_inv_im_m_i[k],
            cv.norm_im_m_i[k]
        )
        .unwrap();
        if let (Some(a), Some(b), Some(d)) = (&cv.norm_m_a, &cv.norm_dm_a, &cv.norm_inv_dm_a) {
            write!(out, ",{:.17e},{:.17e},{:.17e}", a[k], b[k], d[k]).unwrap();
        }
        out.push('\n');
    }
    out
}

fn task_classify(job: &JobSpec) -> Result<TaskOutput, JobError> {
    let fam = family(job)?;
    let lattice = require(&job.lattice, "lattice")?;
    let report = classify(&fam, &lattice, job.params.gap_point)?;
    let cv = &report.curves;
    let mut named = vec![
        ("C1 sup|M(i)|", &cv.norm_m_i),
        ("C2 sup|(Im M(i))^-1|", &cv.norm_inv_im_m_i),
        ("C_Im sup|Im M(i)|", &cv.norm_im_m_i),
    ];
    if let (Some(a), Some(b), Some(d)) = (&cv.norm_m_a, &cv.norm_dm_a, &cv.norm_inv_dm_a) {
        named.extend([("C3 sup|M(a)|", a), ("C4 sup|M'(a)|", b), ("C5 sup|M'(a)^-1|", d)]);
    }
    let series = named
        .into_iter()
        .map(|(label, curve)| Series {
            label: label.into(),
            points: ClassificationReport::running_sup(curve)
                .iter()
                .enumerate()
                .map(|(k, y)| ((k + 1) as f64, *y))
                .collect(),
        })
        .collect();
    let plot = Plot {
        title: format!("{}: {}", report.family, report.verdict_label),
        x_label: "N".into(),
        y_label: "running sup".into(),
        log_y: true,
        series,
        markers: Vec::new(),
    };
    let mut out = TaskOutput::new(to_value(&report));
    out.tables.push(("constants.csv".into(), classification_table(&report, &lattice)));
    out.plots.push(("constants.svg".into(), plot));
    Ok(out)
}

fn task_weyl_eval(job: &JobSpec) -> Result<TaskOutput, JobError> {
    let mut points = Vec::new();
    let mut table = String::from("z_re,z_im,block,norm\n");
    if let Some(t) = sandbox(job)? {
        for z in z_grid(job) {
            let m = t.weyl(z)?;
            writeln!(table, "{:.17e},{:.17e},0,{:.17e}", z.re, z.im, operator_norm(&m)).unwrap();
            points.push(json!({"z": pair(z), "norm": operator_norm(&m), "weyl": rows(&m)}));
        }
        let mut out = TaskOutput::new(json!({"model": "sandbox", "points": points}));
        out.tables.push(("weyl.csv".into(), table));
        return Ok(out);
    }
    let fam = family(job)?;
    let lattice = require(&job.lattice, "lattice")?;
    for z in z_grid(job) {
        let bd = direct_sum_weyl(&fam, &lattice, z)?;
        let norms: Vec<f64> = bd.blocks.iter().map(operator_norm).collect();
        for (k, nrm) in norms.iter().enumerate() {
            writeln!(table, "{:.17e},{:.17e},{},{:.17e}", z.re, z.im, k + 1, nrm).unwrap();
        }
        let blocks: Vec<Value> = bd.blocks.iter().map(rows).collect();
        points.push(json!({"z": pair(z), "norm": bd.norm(), "block_norms": norms, "blocks": blocks}));
    }
    let mut out = TaskOutput::new(json!({"family": fam.label(), "n": lattice.len(), "points": points}));
    out.tables.push(("weyl.csv".into(), table));
    Ok(out)
}

fn task_membership(job: &JobSpec) -> Result<TaskOutput, JobError> {
    let fam = family(job)?;
    let lattice = require(&job.lattice, "lattice")?;
    let seq = require(&job.params.sequence, "params.sequence")?;
    let target = require(&job.params.target, "params.target")?;
    let report = membership(&fam, &lattice, &seq, target)?;
    Ok(TaskOutput::new(json!({"family": fam.label(), "target": target, "report": report})))
}

fn roots_table(results: &[&SpectrumResult]) -> String {
    let mut out = String::from("method,lambda,residual,bracket_width\n");
    for r in results {
        for e in &r.roots {
            writeln!(out, "{},{:.17e},{:.17e},{:.17e}", r.method, e.lambda, e.residual, e.bracket_width).unwrap();
        }
    }
    out
}

fn task_spectrum(job: &JobSpec, opts: &RunOptions) -> Result<TaskOutput, JobError> {
    let model = require(&job.model, "model")?;
    let lattice = require(&job.lattice, "lattice")?;
    let [lo, hi] = require(&job.params.interval, "params.interval")?;
    let grid = opts.grid.or(job.params.grid).unwrap_or(2000);
    let tol = tolerance(job, opts, 1e-9)?;
    let th = theta(job, model, &lattice)?;
    let method = job.params.method.unwrap_or(if job.params.theta.is_some() {
        SpectrumMethod::DetScan
    } else {
        SpectrumMethod::Both
    });
    if job.params.theta.is_some() && method != SpectrumMethod::DetScan {
        return Err(JobError::input("the shooting oracle only handles local couplings, not a custom theta"));
    }
    let det = match method {
        SpectrumMethod::Shooting => None,
        _ => Some(det_scan(model, &lattice, &th, (lo, hi), grid, tol)?),
    };
    let shoot = match method {
        SpectrumMethod::DetScan => None,
        _ => {
            let alpha = job.params.alpha.clone().unwrap_or_else(|| vec![0.0; lattice.len() - 1]);
            let cutoff = th.cutoff.expect("built conditions carry their cutoff");
            Some(shooting_oracle(model, &lattice, &alpha, cutoff, (lo, hi), grid, tol)?)
        }
    };
    let mut result = json!({
        "model": model,
        "n": lattice.len(),
        "provenance": th.provenance,
        "cutoff": th.cutoff,
        "det_scan": det,
        "shooting": shoot,
    });
    let mut failure = None;
    if let (Some(a), Some(b)) = (&det, &shoot) {
        let (ea, eb) = (a.eigenvalues(), b.eigenvalues());
        let count_match = ea.len() == eb.len();
        let max_difference = if count_match {
            ea.iter().zip(&eb).map(|(x, y)| (x - y).abs() / x.abs().max(1.0)).fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        result["agreement"] = json!({"count_match": count_match, "max_relative_difference": max_difference});
        if !(max_difference <= 1e-8) {
            failure = Some(format!(
                "determinant scan ({} roots) and shooting oracle ({} roots) disagree (max relative difference {max_difference:e})",
                ea.len(),
                eb.len()
            ));
        }
    }
    let mut out = TaskOutput::new(result);
    out.failure = failure;
    let present: Vec<&SpectrumResult> = det.iter().chain(shoot.iter()).collect();
    for r in &present {
        out.dumps.push((format!("{}.csv", r.method), r.to_csv()));
    }
    out.tables.push(("roots.csv".into(), roots_table(&present)));
    if let Some(r) = present.first() {
        let scale = r.samples.iter().filter_map(|(_, v)| v.map(f64::abs)).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let points = r.samples.iter().filter_map(|(x, v)| v.map(|v| (*x, v / scale))).collect();
        out.plots.push((
            format!("{}.svg", r.method),
            Plot {
                title: format!("{} {} scan, N = {}", model.name(), r.method, lattice.len()),
                x_label: "lambda".into(),
                y_label: "normalized scan value".into(),
                log_y: false,
                series: vec![Series { label: r.method.into(), points }],
                markers: r.eigenvalues(),
            },
        ));
    }
    Ok(out)
}

fn resolvent_data(job: &JobSpec, model: ModelKind, n: usize) -> Result<Vec<ExpSum>, JobError> {
    let dim = model.value_dim();
    match &job.params.data {
        None => Ok(vec![ExpSum::term(c(0.0, 0.0), vec![c(1.0, 0.0); dim]); n]),
        Some(pieces) => pieces
            .iter()
            .map(|terms| {
                let mut s = ExpSum::zero(dim);
                for t in terms {
                    if t.coeff.len() != dim {
                        return Err(Error::DimensionMismatch { expected: dim, found: t.coeff.len() }.into());
                    }
                    s.add(&ExpSum::term(cpx(t.rate), t.coeff.iter().map(|p| cpx(*p)).collect()));
                }
                Ok(s)
            })
            .collect(),
    }
}

fn task_resolvent(job: &JobSpec) -> Result<TaskOutput, JobError> {
    let lambda = job.params.lambda.map_or(I, cpx);
    if let Some(t) = sandbox(job)? {
        let h = t.boundary_dim();
        let b = match &job.params.theta_matrix {
            Some(r) => json::from_rows(r).map_err(JobError::input)?,
            None => zeros(h, h),
        };
        if b.shape() != (h, h) {
            return Err(Error::DimensionMismatch { expected: h, found: b.nrows() }.into());
        }
        let residual = max_abs(&(&b - b.adjoint()));
        if residual > 1e-12 * operator_norm(&b).max(1.0) {
            return Err(Error::NotHermitian { residual }.into());
        }
        let formula = t.to_finite_triple().krein_resolvent(&Subspace::graph(&b), lambda)?;
        let direct = t.extension(&b)?.resolvent(lambda)?;
        let difference = rel_diff(&formula, &direct);
        let mut out = TaskOutput::new(json!({
            "model": "sandbox",
            "lambda": pair(lambda),
            "resolvent": rows(&formula),
            "direct": rows(&direct),
            "relative_difference": difference,
        }));
        if !(difference <= 1e-9) {
            out.failure = Some(format!("resolvent formula and direct inverse differ by {difference:e}"));
        }
        return Ok(out);
    }
    let model = require(&job.model, "model")?;
    let lattice = require(&job.lattice, "lattice")?;
    let th = theta(job, model, &lattice)?;
    let f = resolvent_data(job, model, lattice.len())?;
    let form = krein_resolvent_element(model, &lattice, &th, lambda, &f, &f)?;
    let u0 = a0_resolvent(model, &lattice, lambda, &f)?;
    let a0_form = pieces_inner(&lattice, &u0, &f);
    Ok(TaskOutput::new(json!({
        "model": model,
        "n": lattice.len(),
        "provenance": th.provenance,
        "lambda": pair(lambda),
        "form": pair(form),
        "a0_form": pair(a0_form),
        "correction": pair(form - a0_form),
    })))
}

fn task_renormalize(job: &JobSpec) -> Result<TaskOutput, JobError> {
    let model = require(&job.model, "model")?;
    let lattice = require(&job.lattice, "lattice")?;
    let scheme = require(&job.params.scheme, "params.scheme")?;
    let rl = renormalize(model, &lattice, scheme)?;
    let base = BlockFamily::base(model);
    let mut points = Vec::new();
    let mut table = String::from("z_re,z_im,block,norm_original,norm_renormalized\n");
    for z in z_grid(job) {
        let new = rl.weyl(z)?;
        let old = direct_sum_weyl(&base, &lattice, z).ok();
        let psd = new.imaginary_part_psd(Tolerance::psd())?;
        let new_norms: Vec<f64> = new.blocks.iter().map(operator_norm).collect();
        let old_norms: Option<Vec<f64>> = old.as_ref().map(|o| o.blocks.iter().map(operator_norm).collect());
        for (k, nrm) in new_norms.iter().enumerate() {
            let o = old_norms.as_ref().map_or(f64::NAN, |v| v[k]);
            writeln!(table, "{:.17e},{:.17e},{},{:.17e},{:.17e}", z.re, z.im, k + 1, o, nrm).unwrap();
        }
        points.push(json!({
            "z": pair(z),
            "norm_original": old.as_ref().map(|o| o.norm()),
            "norm_renormalized": new.norm(),
            "im_min_eigenvalue": psd.min_eigenvalue,
            "im_psd": psd.is_psd,
            "block_norms": new_norms,
        }));
    }
    let mut out = TaskOutput::new(json!({"family": rl.family.label(), "n": lattice.len(), "points": points}));
    out.tables.push(("renormalized.csv".into(), table));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct Check {
    name: &'static str,
    z: Option<[f64; 2]>,
    value: f64,
    threshold: f64,
    passed: bool,
}

fn nevanlinna_checks(
    z: Complex64,
    m: &ComplexMatrix,
    m_conj: &ComplexMatrix,
    tol: Tolerance,
    checks: &mut Vec<Check>,
) -> Result<(), JobError> {
    let im = (m - m.adjoint()) / c(0.0, 2.0);
    let psd = psd_check(&im, tol)?;
    checks.push(Check {
        name: "im_weyl_psd",
        z: Some(pair(z)),
        value: psd.min_eigenvalue,
        threshold: -psd.threshold,
        passed: psd.is_psd,
    });
    let sym = max_abs(&(m_conj - m.adjoint()));
    let thr = 1e-10 * operator_norm(m).max(1.0);
    checks.push(Check { name: "conjugate_symmetry", z: Some(pair(z)), value: sym, threshold: thr, passed: sym <= thr });
    Ok(())
}

fn task_validate(job: &JobSpec, opts: &RunOptions) -> Result<TaskOutput, JobError> {
    let tol = match opts.tol.or(job.params.tol) {
        Some(t) => Tolerance::new(t, 1e-12)?,
        None => Tolerance::psd(),
    };
    let mut checks = Vec::new();
    let subject;
    if let Some(t) = sandbox(job)? {
        subject = "sandbox".to_string();
        for z in z_grid(job) {
            nevanlinna_checks(z, &t.weyl(z)?, &t.weyl(z.conj())?, tol, &mut checks)?;
        }
        let ft = t.to_finite_triple();
        let g = ft.green_residual();
        checks.push(Check { name: "green_identity", z: None, value: g, threshold: 1e-9, passed: g <= 1e-9 });
        let unitary = ft.is_unitary();
        checks.push(Check {
            name: "krein_unitary",
            z: None,
            value: if unitary { 0.0 } else { 1.0 },
            threshold: 0.0,
            passed: unitary,
        });
    } else {
        let fam = family(job)?;
        let lattice = require(&job.lattice, "lattice")?;
        subject = fam.label();
        for z in z_grid(job) {
            let m = direct_sum_weyl(&fam, &lattice, z)?.to_matrix();
            let mc = direct_sum_weyl(&fam, &lattice, z.conj())?.to_matrix();
            nevanlinna_checks(z, &m, &mc, tol, &mut checks)?;
        }
    }
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed).collect();
    let passed = failed.is_empty();
    let failure = (!passed).then(|| {
        let first = failed[0];
        format!(
            "{} of {} checks failed; first: {} at {:?} (value {:e})",
            failed.len(),
            checks.len(),
            first.name,
            first.z,
            first.value
        )
    });
    let mut out = TaskOutput::new(json!({"subject": subject, "passed": passed, "checks": checks}));
    out.failure = failure;
    Ok(out)
}

fn task_mfunction(job: &JobSpec) -> Result<TaskOutput, JobError> {
    let pieces = require(&job.params.potential, "params.potential")?;
    let problem = SLProblem::new(pieces)?;
    let lambdas: Vec<Complex64> = job
        .params
        .lambdas
        .as_ref()
        .map_or_else(|| vec![I, c(-1.0, 0.0), c(4.0, 3.0)], |l| l.iter().map(|p| cpx(*p)).collect());
    let values = lambdas.iter().map(|&l| m_function(&problem, l)).collect::<crate::Result<Vec<_>>>()?;
    let mut table = String::from("lambda_re,lambda_im,m_re,m_im,radius\n");
    for v in &values {
        writeln!(table, "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}", v.lambda.re, v.lambda.im, v.m.re, v.m.im, v.radius)
            .unwrap();
    }
    let mut out = TaskOutput::new(json!({"length": problem.length(), "values": values}));
    out.tables.push(("mfunction.csv".into(), table));
    Ok(out)
}

fn write_file(dir: &Path, name: &str, contents: &str, files: &mut Vec<PathBuf>) -> Result<(), JobError> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| JobError::input(format!("cannot write {}: {e}", path.display())))?;
    files.push(path);
    Ok(())
}

/// Runs a job and writes `results.json` plus artifacts into `opts.output`.
///
/// Scan tasks always dump their samples as CSV; other tables are written with
/// `--format csv`, SVG plots with `--plot`.
pub fn run(job: &JobSpec, opts: &RunOptions) -> RunOutcome {
    let computed = execute(job, opts);
    finish(Some(job), computed, opts)
}

/// Parses the job file and runs it; parse failures still produce a document.
pub fn run_file(path: &Path, opts: &RunOptions) -> RunOutcome {
    let parsed = std::fs::read_to_string(path)
        .map_err(|e| JobError::input(format!("cannot read {}: {e}", path.display())))
        .and_then(|s| JobSpec::from_json(&s));
    match parsed {
        Ok(job) => run(&job, opts),
        Err(e) => finish(None, Err(e), opts),
    }
}

fn finish(job: Option<&JobSpec>, computed: Result<TaskOutput, JobError>, opts: &RunOptions) -> RunOutcome {
    let mut files = Vec::new();
    let mut doc = json!({
        "task": job.map(|j| j.task),
        "seed": job.and_then(|j| j.seed),
    });
    let mut error = None;
    let mut artifacts: Vec<String> = Vec::new();
    if let Err(e) = std::fs::create_dir_all(&opts.output) {
        error = Some(JobError::input(format!("cannot create {}: {e}", opts.output.display())));
    }
    match computed {
        Ok(out) => {
            doc["result"] = out.result;
            if error.is_none() {
                let tables = out.tables.into_iter().filter(|_| opts.format == Format::Csv);
                let plots = out.plots.into_iter().filter(|_| opts.plot).map(|(n, p)| (n, p.to_svg()));
                for (name, text) in out.dumps.into_iter().chain(tables).chain(plots) {
                    if let Err(e) = write_file(&opts.output, &name, &text, &mut files) {
                        error = Some(e);
                        break;
                    }
                    artifacts.push(name);
                }
            }
            if error.is_none() {
                error = out.failure.map(JobError::validation);
            }
        }
        Err(e) => error = Some(e),
    }
    doc["artifacts"] = to_value(&artifacts);
    let exit_code = match &error {
        None => {
            doc["status"] = json!("ok");
            0
        }
        Some(e) => {
            doc["status"] = json!(match e.kind {
                ErrorKind::Input => "error",
                ErrorKind::Validation => "validation_failed",
            });
            doc["error"] = to_value(e);
            e.exit_code()
        }
    };
    let text = to_json_pretty(&doc).expect("document serializes");
    if std::fs::create_dir_all(&opts.output).is_ok() {
        let _ = write_file(&opts.output, "results.json", &text, &mut files);
    }
    RunOutcome { exit_code, document: doc, files }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiet() -> RunOptions {
        RunOptions { output: std::env::temp_dir(), ..Default::default() }
    }

    #[test]
    fn job_json_parses_with_defaults() {
        let job = JobSpec::from_json(
            r#"{"task":"classify","model":{"kind":"schroedinger"},"lattice":{"kind":"rule","rule":"one_over_n","N":50}}"#,
        )
        .unwrap();
        assert_eq!(job.task, Task::Classify);
        assert!(job.chain.is_empty());
        assert!(JobSpec::from_json(r#"{"task":"classify","bogus":1}"#).is_err());
        assert!(JobSpec::from_json(r#"{"task":"weyl-eval","params":{"zz":1}}"#).is_err());
    }

    #[test]
    fn missing_fields_are_input_errors() {
        let job = JobSpec::from_json(r#"{"task":"spectrum","model":{"kind":"schroedinger"}}"#).unwrap();
        let e = execute(&job, &quiet()).err().unwrap();
        assert_eq!(e.exit_code(), 1);
        assert!(e.message.contains("lattice"));
    }

    #[test]
    fn non_selfadjoint_theta_is_a_validation_failure() {
        let job = JobSpec::from_json(
            r#"{"task":"spectrum","model":{"kind":"momentum"},"lattice":{"kind":"explicit","d":[1.0]},
               "params":{"interval":[0,10],"theta":{"c0":[[[1,0]]],"c1":[[[0,1]]]}}}"#,
        )
        .unwrap();
        assert_eq!(execute(&job, &quiet()).err().unwrap().exit_code(), 2);
    }

    #[test]
    fn sandbox_resolvent_routes_agree() {
        let job = JobSpec::from_json(
            r#"{"task":"resolvent","seed":7,"params":{"sandbox":{"kind":"random","state_dim":5,"boundary_dim":2},
               "theta_matrix":[[[1,0],[0.5,0.5]],[[0.5,-0.5],[-2,0]]],"lambda":[0.3,0.9]}}"#,
        )
        .unwrap();
        let out = execute(&job, &quiet()).unwrap();
        assert!(out.failure.is_none());
        assert!(out.result["relative_difference"].as_f64().unwrap() < 1e-10);
    }

    #[test]
    fn mfunction_job_defaults() {
        let job = JobSpec::from_json(r#"{"task":"mfunction","params":{"potential":[{"length":50,"q":0}]}}"#).unwrap();
        let out = execute(&job, &quiet()).unwrap();
        let v = &out.result["values"][1]["m"];
        assert!((v[0].as_f64().unwrap() + 1.0).abs() < 1e-8);
    }

    #[test]
    fn format_parses() {
        assert_eq!("csv".parse::<Format>(), Ok(Format::Csv));
        assert!("xml".parse::<Format>().is_err());
    }
}
