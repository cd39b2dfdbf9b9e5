//! Command-line front end.
//!
//! Every subcommand loads its inputs from [`MatrixFile`] JSON documents,
//! runs one analysis and prints a report with sorted keys and 17-digit
//! floats. Exit codes: `0` when every check in the report passed, `1` when
//! the analysis ran but a check failed, `2` for usage and input errors.

pub mod matrix_file;
pub mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::{DMatrix, DVector};
use serde_json::{json, Map, Value};

use crate::admissible::{
    build_complexification, hermitian_from_triple, triple_from_g_j, triple_from_g_omega, AdmissibleTriple,
};
use crate::connecting::{connecting_operator, ConnectingOperator};
use crate::error::Error;
use crate::fibers::{build_decomposition, check_prop2, check_proportionality, sample_biunitary};
use crate::forms::{ComplexStructure, HermitianForm, RealForm};
use crate::linalg::relative;
use crate::spectral::{
    bicommutant_dimension, commutant_dimension, group_signature, is_cyclic, is_generic_def1,
    is_generic_def2, spectral_resolution,
};
use crate::tolerances::Tolerances;
use crate::C64;

pub use matrix_file::{FileError, MatrixFile, MatrixKind};

/// Environment variable overriding the default `tol_eig`; `--tol-eig` wins.
pub const TOL_EIG_ENV: &str = "BIHERM_TOL_EIG";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "biherm",
    version,
    about = "Analyse pairs of Hermitian structures and their bi-unitary group"
)]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Relative eigenvalue clustering / rank threshold.
    #[arg(long, global = true, value_name = "X")]
    tol_eig: Option<f64>,
    /// Relative residual threshold for identity checks.
    #[arg(long, global = true, value_name = "X")]
    tol_resid: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Do not print the report; only the exit code and diagnostics.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build an admissible triple (g, J, ω) from g and either J or ω.
    Triple {
        #[arg(long, value_name = "FILE")]
        g: PathBuf,
        #[arg(long, value_name = "FILE", conflicts_with = "omega", required_unless_present = "omega")]
        j: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        omega: Option<PathBuf>,
        /// Where to write the triple bundle.
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Hermitian form h = g + i ω on the complexified space.
    Hermitian {
        #[arg(long, value_name = "FILE")]
        triple: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Connecting operator G with h2(x, y) = h1(Gx, y).
    Connect {
        #[command(flatten)]
        pair: FormPair,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Eigenvalue clusters of G and the bi-unitary group signature.
    Spectrum {
        #[command(flatten)]
        pair: FormPair,
    },
    /// Genericity (both definitions), commutant dimensions and cyclicity.
    Generic {
        #[command(flatten)]
        pair: FormPair,
        /// Random vectors tried by the cyclicity test.
        #[arg(long, default_value_t = 8)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fibered decomposition and fiberwise proportionality.
    Decompose {
        #[command(flatten)]
        pair: FormPair,
    },
    /// Draw a random bi-unitary transformation.
    SampleU {
        #[command(flatten)]
        pair: FormPair,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Check whether U preserves both forms and commutes with G.
    VerifyU {
        #[arg(long, value_name = "FILE")]
        u: PathBuf,
        #[command(flatten)]
        pair: FormPair,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Triple { .. } => "triple",
            Command::Hermitian { .. } => "hermitian",
            Command::Connect { .. } => "connect",
            Command::Spectrum { .. } => "spectrum",
            Command::Generic { .. } => "generic",
            Command::Decompose { .. } => "decompose",
            Command::SampleU { .. } => "sample-u",
            Command::VerifyU { .. } => "verify-u",
        }
    }
}

#[derive(Debug, Args)]
struct FormPair {
    #[arg(long, value_name = "FILE")]
    h1: PathBuf,
    #[arg(long, value_name = "FILE")]
    h2: PathBuf,
}

/// Why a subcommand stopped early.
#[derive(Debug)]
enum Failure {
    /// Bad input or usage; exit 2 with a diagnostic and no report.
    Input(String),
    /// The analysis itself detected a violated invariant; a report is still
    /// written, with `passed: false`.
    Check(String),
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        Failure::Input(e.0)
    }
}

/// Classifies a library error raised while processing `context`.
fn classify(context: &str) -> impl Fn(Error) -> Failure + '_ {
    move |e| match e {
        Error::InvariantViolation(_) | Error::InternalInconsistency(_) | Error::Numerical(_) => {
            Failure::Check(format!("{context}: {e}"))
        }
        other => Failure::Input(format!("{context}: {other}")),
    }
}

#[derive(Debug, Default)]
struct Outcome {
    results: Map<String, Value>,
    checks: BTreeMap<String, bool>,
    seed: Option<u64>,
    artifact: Option<(PathBuf, Value)>,
}

impl Outcome {
    fn result(&mut self, key: &str, value: Value) {
        self.results.insert(key.to_owned(), value);
    }

    fn check(&mut self, key: &str, ok: bool) {
        self.checks.insert(key.to_owned(), ok);
    }
}

/// Runs the CLI with the real process arguments, environment and streams.
pub fn main_entry() -> i32 {
    let env = std::env::var(TOL_EIG_ENV).ok();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(
        std::env::args_os(),
        env.as_deref(),
        &mut stdout.lock(),
        &mut stderr.lock(),
    )
}

/// Parses `args` (including the program name), executes the subcommand and
/// returns the exit code. `env_tol_eig` is the value of [`TOL_EIG_ENV`], if
/// set.
pub fn run<I, T>(args: I, env_tol_eig: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{rendered}");
                EXIT_OK
            };
        }
    };

    let tol = match tolerances(&cli.common, env_tol_eig) {
        Ok(tol) => tol,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
    };

    let outcome = execute(&cli.command, &tol);
    let (outcome, error) = match outcome {
        Ok(o) => (o, None),
        Err(Failure::Input(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
        Err(Failure::Check(msg)) => (Outcome::default(), Some(msg)),
    };

    if let Some((path, value)) = &outcome.artifact {
        if let Err(e) = std::fs::write(path, report::to_json_string(value)) {
            let _ = writeln!(stderr, "error: {}: cannot write output: {e}", path.display());
            return EXIT_USAGE;
        }
    }

    let passed = error.is_none() && outcome.checks.values().all(|&ok| ok);
    if !cli.common.quiet {
        let echo: Vec<String> = args
            .iter()
            .skip(1)
            .map(|a| a.to_string_lossy().into_owned())
            .collect();
        let mut doc = Map::new();
        doc.insert(
            "command".into(),
            json!({ "name": cli.command.name(), "args": echo }),
        );
        doc.insert(
            "tolerances".into(),
            serde_json::to_value(tol).expect("tolerances serialize"),
        );
        doc.insert("results".into(), Value::Object(outcome.results));
        doc.insert(
            "checks".into(),
            serde_json::to_value(&outcome.checks).expect("map serializes"),
        );
        doc.insert("passed".into(), Value::Bool(passed));
        if let Some(seed) = outcome.seed {
            doc.insert("seed".into(), json!(seed));
        }
        if let Some((path, _)) = &outcome.artifact {
            doc.insert("output".into(), json!(path.display().to_string()));
        }
        if let Some(msg) = &error {
            doc.insert("error".into(), json!(msg));
        }
        let doc = Value::Object(doc);
        let text = match cli.common.format {
            Format::Json => report::to_json_string(&doc),
            Format::Text => report::to_text(&doc),
        };
        let _ = stdout.write_all(text.as_bytes());
    }
    if let Some(msg) = &error {
        let _ = writeln!(stderr, "check failed: {msg}");
    }
    if passed {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn tolerances(common: &CommonArgs, env_tol_eig: Option<&str>) -> Result<Tolerances, String> {
    let mut tol = Tolerances::default();
    if let Some(raw) = env_tol_eig {
        let value: f64 = raw
            .trim()
            .parse()
            .map_err(|_| format!("{TOL_EIG_ENV}: expected a number, found `{raw}`"))?;
        tol = tol
            .with_tol_eig(value)
            .map_err(|e| format!("{TOL_EIG_ENV}: {e}"))?;
    }
    if let Some(value) = common.tol_eig {
        tol = tol.with_tol_eig(value).map_err(|e| format!("--tol-eig: {e}"))?;
    }
    if let Some(value) = common.tol_resid {
        tol = tol
            .with_tol_resid(value)
            .map_err(|e| format!("--tol-resid: {e}"))?;
    }
    Ok(tol)
}

fn execute(command: &Command, tol: &Tolerances) -> Result<Outcome, Failure> {
    match command {
        Command::Triple { g, j, omega, out } => cmd_triple(g, j.as_deref(), omega.as_deref(), out, tol),
        Command::Hermitian { triple, out } => cmd_hermitian(triple, out, tol),
        Command::Connect { pair, out } => cmd_connect(pair, out, tol),
        Command::Spectrum { pair } => cmd_spectrum(pair, tol),
        Command::Generic { pair, trials, seed } => cmd_generic(pair, *trials, *seed, tol),
        Command::Decompose { pair } => cmd_decompose(pair, tol),
        Command::SampleU { pair, seed, out } => cmd_sample_u(pair, *seed, out, tol),
        Command::VerifyU { u, pair } => cmd_verify_u(u, pair, tol),
    }
}

fn origin(path: &Path) -> String {
    path.display().to_string()
}

fn load_real(path: &Path, tol: &Tolerances) -> Result<DMatrix<f64>, Failure> {
    Ok(MatrixFile::load(path, tol)?.to_real(&origin(path))?)
}

fn load_form(path: &Path, tol: &Tolerances) -> Result<HermitianForm, Failure> {
    let file = MatrixFile::load(path, tol)?;
    HermitianForm::new(file.mat, tol).map_err(|e| Failure::Input(format!("{}: {e}", origin(path))))
}

fn load_pair(pair: &FormPair, tol: &Tolerances) -> Result<(HermitianForm, HermitianForm), Failure> {
    let h1 = load_form(&pair.h1, tol)?;
    let h2 = load_form(&pair.h2, tol)?;
    if h1.dim() != h2.dim() {
        return Err(Failure::Input(format!(
            "{}: dim: expected {} to match {}, found {}",
            origin(&pair.h2),
            h1.dim(),
            origin(&pair.h1),
            h2.dim()
        )));
    }
    Ok((h1, h2))
}

fn connect_pair(pair: &FormPair, tol: &Tolerances) -> Result<ConnectingOperator, Failure> {
    let (h1, h2) = load_pair(pair, tol)?;
    connecting_operator(&h1, &h2, tol).map_err(classify("connecting operator"))
}

fn triple_bundle(triple: &AdmissibleTriple) -> Value {
    json!({
        "g": MatrixFile::real(MatrixKind::RealSymmetric, triple.g().gram()).to_json(),
        "j": MatrixFile::real(MatrixKind::RealGeneral, triple.j().mat()).to_json(),
        "omega": MatrixFile::real(MatrixKind::RealAntisymmetric, triple.omega().gram()).to_json(),
    })
}

fn load_triple(path: &Path, tol: &Tolerances) -> Result<AdmissibleTriple, Failure> {
    let name = origin(path);
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{name}: cannot read file: {e}")))?;
    let value = matrix_file::parse_json(&text, &name)?;
    let obj = value
        .as_object()
        .ok_or_else(|| Failure::Input(format!("{name}: expected a JSON object with g, j, omega")))?;
    matrix_file::check_fields(obj, &["g", "j", "omega"], &name)
        .map_err(|e| Failure::Input(format!("{e} (a triple file has fields g, j, omega)")))?;
    let part = |key: &str| -> Result<DMatrix<f64>, Failure> {
        let field = format!("{name}: {key}");
        let v = obj
            .get(key)
            .ok_or_else(|| Failure::Input(format!("{field}: missing field")))?;
        Ok(MatrixFile::from_json(v, &field, tol)?.to_real(&field)?)
    };
    let (g, j, omega) = (part("g")?, part("j")?, part("omega")?);
    let g = RealForm::symmetric(g, tol).map_err(classify(&format!("{name}: g")))?;
    let j = ComplexStructure::new(j, tol).map_err(classify(&format!("{name}: j")))?;
    let omega = RealForm::antisymmetric(omega, tol).map_err(classify(&format!("{name}: omega")))?;
    AdmissibleTriple::new(g, j, omega, tol).map_err(classify(&name))
}

fn cmd_triple(
    g: &Path,
    j: Option<&Path>,
    omega: Option<&Path>,
    out: &Path,
    tol: &Tolerances,
) -> Result<Outcome, Failure> {
    let gram = load_real(g, tol)?;
    let g_form = RealForm::symmetric(gram, tol).map_err(classify(&origin(g)))?;
    let (triple, source) = match (j, omega) {
        (Some(j), _) => {
            let j_struct = ComplexStructure::new(load_real(j, tol)?, tol).map_err(classify(&origin(j)))?;
            (
                triple_from_g_j(&g_form, &j_struct, tol).map_err(classify("triple from g and J"))?,
                "g_j",
            )
        }
        (None, Some(omega)) => {
            let w = RealForm::antisymmetric(load_real(omega, tol)?, tol).map_err(classify(&origin(omega)))?;
            (
                triple_from_g_omega(&g_form, &w, tol).map_err(classify("triple from g and omega"))?,
                "g_omega",
            )
        }
        (None, None) => return Err(Failure::Input("one of --j or --omega is required".into())),
    };

    let r = triple.residuals();
    let metric_change = relative((triple.g().gram() - g_form.gram()).norm(), g_form.gram().norm());
    let bundle = triple_bundle(&triple);
    let mut o = Outcome::default();
    o.result("source", json!(source));
    o.result("dim", json!(triple.dim()));
    o.result("triple", bundle.clone());
    o.result(
        "residuals",
        json!({ "j_square": r.j_square, "anti_hermitian": r.anti_hermitian, "omega": r.omega }),
    );
    o.result("metric_change", json!(metric_change));
    o.check("j_square", r.j_square <= tol.tol_j);
    o.check("anti_hermitian", r.anti_hermitian <= tol.tol_resid);
    o.check("omega", r.omega <= tol.tol_resid);
    o.artifact = Some((out.to_path_buf(), bundle));
    Ok(o)
}

fn cmd_hermitian(path: &Path, out: &Path, tol: &Tolerances) -> Result<Outcome, Failure> {
    let triple = load_triple(path, tol)?;
    let cmap = build_complexification(&triple, tol).map_err(classify("complexification"))?;
    let h = hermitian_from_triple(&triple, &cmap, tol).map_err(classify("hermitian form"))?;

    let m = triple.dim();
    let g = triple.g().gram();
    let jm = triple.j().mat();
    let mut worst = 0.0_f64;
    for a in 0..m {
        let x = DVector::from_fn(m, |r, _| if r == a { 1.0 } else { 0.0 });
        let zx = cmap.to_complex(&x);
        let jx = jm * &x;
        for b in 0..m {
            let y = DVector::from_fn(m, |r, _| if r == b { 1.0 } else { 0.0 });
            let expected = C64::new(triple.g().eval(&x, &y), jx.dot(&(g * &y)));
            let got = h.eval(&zx, &cmap.to_complex(&y));
            worst = worst.max((got - expected).norm());
        }
    }
    let pointwise = relative(worst, g.norm());
    let positivity = h.validate_positive(tol).map_err(classify("hermitian form"))?;

    let artifact = MatrixFile::complex(MatrixKind::ComplexHermitian, h.gram().clone()).to_json();
    let mut o = Outcome::default();
    o.result("hermitian", artifact.clone());
    o.result("complex_dim", json!(cmap.complex_dim()));
    o.result(
        "basis",
        MatrixFile::real(MatrixKind::RealGeneral, cmap.basis()).to_json(),
    );
    o.result("min_eigenvalue", json!(positivity.min_eigenvalue));
    o.result("pointwise_residual", json!(pointwise));
    o.check("positive_definite", positivity.passed());
    o.check("pointwise_identity", pointwise <= tol.tol_resid);
    o.artifact = Some((out.to_path_buf(), artifact));
    Ok(o)
}

fn cmd_connect(pair: &FormPair, out: &Path, tol: &Tolerances) -> Result<Outcome, Failure> {
    let g = connect_pair(pair, tol)?;
    let r = g.residuals();
    let artifact = MatrixFile::complex(MatrixKind::ComplexGeneral, g.mat().clone()).to_json();
    let mut o = Outcome::default();
    o.result("operator", artifact.clone());
    o.result("spectrum", json!(g.spectrum()));
    o.result("residuals", serde_json::to_value(r).expect("residuals serialize"));
    o.result("condition_number", json!(g.condition_number()));
    o.result("ill_conditioned", json!(g.ill_conditioned()));
    o.check("defining_identity", r.defining <= tol.tol_resid);
    o.check("h1_self_adjoint", r.h1_self_adjoint <= tol.tol_resid);
    o.check("h2_self_adjoint", r.h2_self_adjoint <= tol.tol_resid);
    o.check("positive", r.min_eigenvalue > 0.0);
    o.artifact = Some((out.to_path_buf(), artifact));
    Ok(o)
}

fn cmd_spectrum(pair: &FormPair, tol: &Tolerances) -> Result<Outcome, Failure> {
    let g = connect_pair(pair, tol)?;
    let res = spectral_resolution(&g, tol).map_err(classify("spectral resolution"))?;
    let signature = group_signature(&res);
    let clusters: Vec<Value> = res
        .eigenvalues()
        .iter()
        .zip(res.multiplicities())
        .map(|(lambda, m)| json!({ "lambda": lambda, "multiplicity": m }))
        .collect();
    let reconstruction = res.reconstruction_residual(&g);
    let cross = res.cross_orthogonality();
    let mut o = Outcome::default();
    o.result("clusters", Value::Array(clusters));
    o.result("eigenvalues", json!(res.raw_eigenvalues()));
    o.result("signature", json!(signature.to_string()));
    o.result("group_dimension", json!(signature.group_dimension()));
    o.result("cluster_gap", json!(res.cluster_gap()));
    o.result("reconstruction_residual", json!(reconstruction));
    o.result("cross_orthogonality", json!(cross));
    o.check("reconstruction", reconstruction <= tol.tol_eig);
    o.check("clusters_orthogonal", cross <= tol.tol_eig);
    o.check(
        "multiplicities_sum",
        res.multiplicities().iter().sum::<usize>() == g.dim(),
    );
    Ok(o)
}

fn cmd_generic(pair: &FormPair, trials: usize, seed: u64, tol: &Tolerances) -> Result<Outcome, Failure> {
    let g = connect_pair(pair, tol)?;
    let res = spectral_resolution(&g, tol).map_err(classify("spectral resolution"))?;
    let def1 = is_generic_def1(&res);
    let def2 = is_generic_def2(&g, tol).map_err(classify("commutant"))?;
    let cyclic = is_cyclic(&g, trials, seed, tol).map_err(classify("cyclicity"))?;
    let commutant = commutant_dimension(&g, tol);
    let bicommutant = bicommutant_dimension(&res);
    let signature = group_signature(&res);
    let block_sum = signature.group_dimension();
    let mut o = Outcome {
        seed: Some(seed),
        ..Outcome::default()
    };
    o.result("generic", json!(def2));
    o.result("generic_simple_spectrum", json!(def1));
    o.result("generic_commutant", json!(def2));
    o.result("cyclic", json!(cyclic));
    o.result("trials", json!(trials));
    o.result("commutant_dimension", json!(commutant));
    o.result("bicommutant_dimension", json!(bicommutant));
    o.result("signature", json!(signature.to_string()));
    o.result("multiplicities", json!(res.multiplicities()));
    o.check("definitions_agree", def1 == def2);
    o.check("cyclicity_agrees", cyclic == def1);
    o.check("commutant_is_block_sum", commutant == block_sum);
    Ok(o)
}

fn cmd_decompose(pair: &FormPair, tol: &Tolerances) -> Result<Outcome, Failure> {
    let (h1, h2) = load_pair(pair, tol)?;
    let g = connecting_operator(&h1, &h2, tol).map_err(classify("connecting operator"))?;
    let dec = build_decomposition(&g, tol).map_err(classify("decomposition"))?;
    let prop = check_proportionality(&dec, &h1, &h2, tol).map_err(classify("proportionality"))?;
    let fibers: Vec<Value> = dec
        .fibers()
        .iter()
        .zip(&prop.per_fiber)
        .map(|(f, violation)| {
            json!({
                "lambda": f.lambda,
                "sigma": f.sigma,
                "dim": f.dim,
                "proportionality_residual": violation,
            })
        })
        .collect();
    let segments: Vec<Value> = dec
        .segments()
        .iter()
        .map(|(dim, idx)| json!({ "dim": dim, "fibers": idx }))
        .collect();

    let mut o = Outcome::default();
    o.result("fibers", Value::Array(fibers));
    o.result("segments", Value::Array(segments));
    o.result("unidimensional", json!(dec.is_unidimensional()));
    o.result("max_proportionality_residual", json!(prop.max_violation));
    o.check("fiberwise_proportional", prop.passed);
    match check_prop2(&dec, &g, tol) {
        Ok(_) => o.check("unidimensional_iff_generic", true),
        Err(Error::InternalInconsistency(msg)) => {
            o.result("unidimensional_mismatch", json!(msg));
            o.check("unidimensional_iff_generic", false);
        }
        Err(e) => return Err(classify("fiber dimension check")(e)),
    }
    Ok(o)
}

fn biunitary_results(o: &mut Outcome, g: &ConnectingOperator, u: &DMatrix<C64>, tol: &Tolerances) -> Result<(), Failure> {
    let r = g.verify(u, tol).map_err(classify("bi-unitarity"))?;
    o.result("h1_residual", json!(r.h1_residual));
    o.result("h2_residual", json!(r.h2_residual));
    o.result("commutator_residual", json!(r.commutator_residual));
    o.check("preserves_h1", r.preserves_h1);
    o.check("preserves_h2", r.preserves_h2);
    o.check("commutes_with_g", r.commutes);
    Ok(())
}

fn cmd_sample_u(pair: &FormPair, seed: u64, out: &Path, tol: &Tolerances) -> Result<Outcome, Failure> {
    let g = connect_pair(pair, tol)?;
    let dec = build_decomposition(&g, tol).map_err(classify("decomposition"))?;
    let u = sample_biunitary(&dec, seed);
    let artifact = MatrixFile::complex(MatrixKind::ComplexGeneral, u.clone()).to_json();
    let mut o = Outcome {
        seed: Some(seed),
        ..Outcome::default()
    };
    o.result("unitary", artifact.clone());
    o.result(
        "fiber_dims",
        json!(dec.fibers().iter().map(|f| f.dim).collect::<Vec<_>>()),
    );
    biunitary_results(&mut o, &g, &u, tol)?;
    o.artifact = Some((out.to_path_buf(), artifact));
    Ok(o)
}

fn cmd_verify_u(u_path: &Path, pair: &FormPair, tol: &Tolerances) -> Result<Outcome, Failure> {
    let u = MatrixFile::load(u_path, tol)?;
    let g = connect_pair(pair, tol)?;
    if u.dim() != g.dim() {
        return Err(Failure::Input(format!(
            "{}: dim: expected {}, found {}",
            origin(u_path),
            g.dim(),
            u.dim()
        )));
    }
    let mut o = Outcome::default();
    biunitary_results(&mut o, &g, &u.mat, tol)?;
    Ok(o)
}
