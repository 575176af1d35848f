//! Batch front end: one command per invocation, deterministic artifacts.
//!
//! Every command is driven by a [`JobConfig`], supplied either as a JSON
//! file (`--config job.json`) or assembled from command-line flags. Outputs
//! are JSON (fixed 17-significant-digit floats) or CSV, written to `--out`
//! or stdout. Exit status: 0 on success, 2 when `predict` concludes "not
//! Fredholm", 1 on any error.
//!
//! The environment variable `TOEPHANK_QUAD_NODES` overrides the default
//! Gauss–Legendre node count used by coefficient quadrature.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::PathBuf;

use crate::factorization::{
    build_factorization, sigma_weight, verify_factor_memberships, AsymmetricFactorization,
    MembershipConfig, MembershipDiagnostics,
};
use crate::fredholm::{predict, toeplitz_reference_predict, FredholmReport, ToeplitzReport};
use crate::jsonfmt::to_json_string;
use crate::operators::{
    hankel_truncation, m_truncation, product_identity_residual, toeplitz_truncation, OperatorKind,
    OperatorTruncation,
};
use crate::quad::QuadConfig;
use crate::rng::SplitMix64;
use crate::singular::{chebyshev_points, prop23_residual, IntervalTestFunction, Prop23Report};
use crate::symbol::{normalize_parameters, JumpPair, PCSymbol, TrigPolynomial};
use crate::verify::{perturbation_diagnostic, truncation_sweep, PerturbationDiagnostic, SweepResult, DEFAULT_NULLITY_THRESHOLD};
use crate::weights::{
    ap_supremum_estimate, integrability_check, lemma31_verdict, ApConfig, APEstimate,
    IntegrabilityReport, Lemma31Report, PowerWeight, WeightSpec,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Predict,
    Factorize,
    ApCheck,
    Truncate,
    Sweep,
    SioTest,
    IdentityTest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<OutputFormat>,
}

/// One batch job. Unknown fields are rejected; which optional fields are
/// required depends on the command (validated with a field-path message).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub command: CommandKind,
    #[serde(default)]
    pub symbol: Option<PCSymbol>,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub sizes: Option<Vec<usize>>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub kind: Option<OperatorKind>,
    #[serde(default)]
    pub depth: Option<u32>,
    #[serde(default)]
    pub weight: Option<WeightSpec>,
    #[serde(default)]
    pub threshold: Option<f64>,
    #[serde(default)]
    pub circle_samples: Option<usize>,
    #[serde(default)]
    pub points: Option<usize>,
    #[serde(default)]
    pub count: Option<usize>,
    #[serde(default)]
    pub degree: Option<i64>,
    #[serde(default)]
    pub window: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub check_memberships: Option<bool>,
    #[serde(default)]
    pub output: Option<OutputSpec>,
}

fn require<T: Clone>(field: &Option<T>, path: &str, command: &str) -> Result<T> {
    field
        .clone()
        .ok_or_else(|| Error::Config(format!("missing field `{path}` (required by command `{command}`)")))
}

/// Quadrature configuration honoring `TOEPHANK_QUAD_NODES`.
pub fn quad_config_from_env() -> Result<QuadConfig> {
    let mut cfg = QuadConfig::default();
    if let Ok(raw) = std::env::var("TOEPHANK_QUAD_NODES") {
        let nodes: usize = raw
            .parse()
            .map_err(|_| Error::Config(format!("TOEPHANK_QUAD_NODES = {raw:?} is not a positive integer")))?;
        if !(4..=512).contains(&nodes) {
            return Err(Error::Config(format!(
                "TOEPHANK_QUAD_NODES = {nodes} outside supported range 4..=512"
            )));
        }
        cfg.nodes = nodes;
    }
    Ok(cfg)
}

// ---------------------------------------------------------------------------
// Report envelopes
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
pub struct PredictEnvelope {
    pub report: FredholmReport,
    pub toeplitz_baseline: ToeplitzReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<PerturbationDiagnostic>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FactorizeEnvelope {
    /// Boundary flags and shifts from normalizing the input before
    /// factorizing its pure-jump part.
    pub normalization_shifts: crate::symbol::ShiftRecord,
    pub factorization: AsymmetricFactorization,
    pub sigma: WeightSpec,
    pub lemma31: Lemma31Report,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub memberships: Option<MembershipDiagnostics>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ApCheckEnvelope {
    pub estimate: APEstimate,
    pub integrability: IntegrabilityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemma31: Option<Lemma31Report>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct IdentityTrial {
    pub trial: usize,
    pub residual: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct IdentityEnvelope {
    pub count: usize,
    pub degree: i64,
    pub window: usize,
    pub seed: u64,
    pub max_residual: f64,
    pub trials: Vec<IdentityTrial>,
}

/// Result of a job: the artifact text plus the exit status.
#[derive(Debug)]
pub struct JobOutcome {
    pub artifact: String,
    pub exit_code: i32,
}

// ---------------------------------------------------------------------------
// Command implementations
// ---------------------------------------------------------------------------

fn format_of(config: &JobConfig) -> OutputFormat {
    config
        .output
        .as_ref()
        .and_then(|o| o.format)
        .unwrap_or_default()
}

fn run_predict(config: &JobConfig) -> Result<JobOutcome> {
    let sym = require(&config.symbol, "symbol", "predict")?;
    let p = require(&config.p, "p", "predict")?;
    let report = predict(&sym, p)?;
    let baseline = toeplitz_reference_predict(&sym, p)?;
    let perturbation = match config.epsilon {
        Some(eps) => Some(perturbation_diagnostic(&sym, p, eps)?),
        None => None,
    };
    let exit_code = if report.fredholm { 0 } else { 2 };
    let envelope = PredictEnvelope {
        report,
        toeplitz_baseline: baseline,
        perturbation,
    };
    Ok(JobOutcome {
        artifact: to_json_string(&envelope)? + "\n",
        exit_code,
    })
}

fn run_factorize(config: &JobConfig) -> Result<JobOutcome> {
    let sym = require(&config.symbol, "symbol", "factorize")?;
    let p = require(&config.p, "p", "factorize")?;
    let normalized = normalize_parameters(&sym, p)?;
    if !normalized.boundary_flags.is_empty() {
        return Err(Error::FactorizationConditions(format!(
            "normalized parameters sit on window endpoints: {:?}",
            normalized.boundary_flags
        )));
    }
    let jump_part = normalized.symbol.pure_jump_part();
    let fact = build_factorization(&jump_part, p)?;
    let sigma = sigma_weight(&fact, p)?;
    let lemma31 = lemma31_verdict(&sigma, p)?;
    let memberships = if config.check_memberships.unwrap_or(false) {
        Some(verify_factor_memberships(&fact, p, &MembershipConfig::default())?)
    } else {
        None
    };
    let envelope = FactorizeEnvelope {
        normalization_shifts: normalized.shifts,
        factorization: fact,
        sigma: serde_json::from_str(&to_json_string(&sigma)?)
            .map_err(|e| Error::Config(format!("sigma spec round trip: {e}")))?,
        lemma31,
        memberships,
    };
    Ok(JobOutcome {
        artifact: to_json_string(&envelope)? + "\n",
        exit_code: 0,
    })
}

fn run_ap_check(config: &JobConfig) -> Result<JobOutcome> {
    let p = require(&config.p, "p", "ap-check")?;
    let mut ap_cfg = ApConfig::default();
    if let Some(d) = config.depth {
        ap_cfg.depth = d;
    }
    let (weight, lemma) = match (&config.weight, &config.symbol) {
        (Some(spec), _) if spec.prefactor == "one" => {
            let w = PowerWeight::from_spec(spec)?;
            let l = lemma31_verdict(&w, p)?;
            (w, Some(l))
        }
        (Some(spec), Some(sym)) => {
            if spec.prefactor != "psi0-derived" {
                return Err(Error::Config(format!(
                    "unknown prefactor `{}` in field `weight.prefactor`",
                    spec.prefactor
                )));
            }
            let w = derive_sigma(sym, p)?;
            let l = lemma31_verdict(&w, p)?;
            (w, Some(l))
        }
        (Some(_), None) => {
            return Err(Error::Config(
                "field `weight.prefactor` = \"psi0-derived\" requires field `symbol`".into(),
            ))
        }
        (None, Some(sym)) => {
            let w = derive_sigma(sym, p)?;
            let l = lemma31_verdict(&w, p)?;
            (w, Some(l))
        }
        (None, None) => {
            return Err(Error::Config(
                "ap-check needs field `weight` or field `symbol`".into(),
            ))
        }
    };
    let estimate = ap_supremum_estimate(&weight, p, &ap_cfg)?;
    let integrability = integrability_check(&weight, p, &ap_cfg)?;
    let envelope = ApCheckEnvelope {
        estimate,
        integrability,
        lemma31: lemma,
    };
    Ok(JobOutcome {
        artifact: to_json_string(&envelope)? + "\n",
        exit_code: 0,
    })
}

fn derive_sigma(sym: &PCSymbol, p: f64) -> Result<PowerWeight> {
    let normalized = normalize_parameters(sym, p)?;
    if !normalized.boundary_flags.is_empty() {
        return Err(Error::FactorizationConditions(format!(
            "σ-weight needs strictly admissible parameters; flags: {:?}",
            normalized.boundary_flags
        )));
    }
    let fact = build_factorization(&normalized.symbol.pure_jump_part(), p)?;
    sigma_weight(&fact, p)
}

fn run_truncate(config: &JobConfig) -> Result<JobOutcome> {
    let sym = require(&config.symbol, "symbol", "truncate")?;
    let n = require(&config.n, "n", "truncate")?;
    let kind = config.kind.unwrap_or(OperatorKind::Sum);
    let quad = quad_config_from_env()?;
    // symbols without jumps have exact, finitely supported coefficients
    let source: Box<dyn crate::operators::CoefficientSource> = if sym.jump_angles().is_empty() {
        Box::new(sym.b.clone())
    } else {
        Box::new(sym.fourier_table(2 * n as i64, &quad)?)
    };
    let m: OperatorTruncation = match kind {
        OperatorKind::Toeplitz => toeplitz_truncation(source.as_ref(), n)?,
        OperatorKind::Hankel => hankel_truncation(source.as_ref(), n)?,
        OperatorKind::Sum => m_truncation(source.as_ref(), n)?,
    };
    let artifact = match format_of(config) {
        OutputFormat::Csv => m.to_csv(),
        OutputFormat::Json => to_json_string(&m)? + "\n",
    };
    Ok(JobOutcome { artifact, exit_code: 0 })
}

fn run_sweep(config: &JobConfig) -> Result<JobOutcome> {
    let sym = require(&config.symbol, "symbol", "sweep")?;
    let sizes = require(&config.sizes, "sizes", "sweep")?;
    let threshold = config.threshold.unwrap_or(DEFAULT_NULLITY_THRESHOLD);
    let quad = quad_config_from_env()?;
    let result: SweepResult = truncation_sweep(&sym, &sizes, threshold, &quad)?;
    let artifact = match format_of(config) {
        OutputFormat::Csv => result.to_csv(),
        OutputFormat::Json => to_json_string(&result)? + "\n",
    };
    Ok(JobOutcome { artifact, exit_code: 0 })
}

fn run_sio_test(config: &JobConfig) -> Result<JobOutcome> {
    let n = config.circle_samples.unwrap_or(4096);
    let points = config.points.unwrap_or(17);
    let xs = chebyshev_points(points, 0.95);
    let report: Prop23Report = prop23_residual(&IntervalTestFunction::bump(), &xs, n)?;
    let artifact = match format_of(config) {
        OutputFormat::Csv => {
            let mut out = String::from("x,lhs_re,lhs_im,rhs_re,rhs_im,abs_err\n");
            for pt in &report.points {
                out.push_str(&format!(
                    "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                    pt.x, pt.lhs_re, pt.lhs_im, pt.rhs_re, pt.rhs_im, pt.abs_err
                ));
            }
            out
        }
        OutputFormat::Json => to_json_string(&report)? + "\n",
    };
    Ok(JobOutcome { artifact, exit_code: 0 })
}

/// Random trig polynomial of two-sided degree `degree` with unit-disk
/// coefficients.
pub fn random_polynomial(rng: &mut SplitMix64, degree: i64) -> TrigPolynomial {
    let mut triples = Vec::new();
    for n in -degree..=degree {
        let c = rng.unit_disk();
        triples.push((n, c.re, c.im));
    }
    TrigPolynomial::from_triples(&triples)
}

fn run_identity_test(config: &JobConfig) -> Result<JobOutcome> {
    let count = config.count.unwrap_or(100);
    let degree = config.degree.unwrap_or(8);
    let window = config.window.unwrap_or(16);
    let seed = config.seed.unwrap_or(0x0e5eed);
    let mut rng = SplitMix64::new(seed);
    let mut trials = Vec::with_capacity(count);
    let mut max_residual = 0.0f64;
    for trial in 0..count {
        let a = random_polynomial(&mut rng, degree);
        let b = random_polynomial(&mut rng, degree);
        let residual = product_identity_residual(&a, &b, window)?;
        max_residual = max_residual.max(residual);
        trials.push(IdentityTrial { trial, residual });
    }
    let envelope = IdentityEnvelope {
        count,
        degree,
        window,
        seed,
        max_residual,
        trials,
    };
    let artifact = match format_of(config) {
        OutputFormat::Csv => {
            let mut out = String::from("trial,residual\n");
            for t in &envelope.trials {
                out.push_str(&format!("{},{:.17e}\n", t.trial, t.residual));
            }
            out
        }
        OutputFormat::Json => to_json_string(&envelope)? + "\n",
    };
    Ok(JobOutcome { artifact, exit_code: 0 })
}

/// Execute a job and return the artifact plus exit status. Writing to the
/// configured output path is left to the binary wrapper so the function
/// stays testable.
pub fn run(config: &JobConfig) -> Result<JobOutcome> {
    match config.command {
        CommandKind::Predict => run_predict(config),
        CommandKind::Factorize => run_factorize(config),
        CommandKind::ApCheck => run_ap_check(config),
        CommandKind::Truncate => run_truncate(config),
        CommandKind::Sweep => run_sweep(config),
        CommandKind::SioTest => run_sio_test(config),
        CommandKind::IdentityTest => run_identity_test(config),
    }
}

/// Execute a job and write the artifact to its destination.
pub fn run_and_write(config: &JobConfig) -> Result<i32> {
    let outcome = run(config)?;
    match config.output.as_ref().and_then(|o| o.path.as_ref()) {
        Some(path) => std::fs::write(path, outcome.artifact.as_bytes())?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(outcome.artifact.as_bytes())?;
        }
    }
    Ok(outcome.exit_code)
}

// ---------------------------------------------------------------------------
// Flag-driven interface
// ---------------------------------------------------------------------------

#[derive(Debug, Parser)]
#[command(
    name = "toephank",
    about = "Fredholm analysis of Toeplitz-plus-Hankel operators with piecewise continuous symbols",
    version
)]
pub struct Cli {
    /// Run a job described by a JSON config file instead of flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<CliCommand>,
}

#[derive(Debug, Clone, Args, Default)]
pub struct SymbolArgs {
    /// Jump exponent at t = 1, as "re,im".
    #[arg(long, value_parser = parse_complex)]
    pub beta_plus: Option<Complex64>,
    /// Jump exponent at t = -1, as "re,im".
    #[arg(long, value_parser = parse_complex)]
    pub beta_minus: Option<Complex64>,
    /// Conjugate jump pair, as "theta,re+,im+,re-,im-"; repeatable.
    #[arg(long = "pair", value_parser = parse_pair)]
    pub pairs: Vec<JumpPairArg>,
    /// CSV file of b-coefficients, rows "n,re,im" (default b = 1).
    #[arg(long)]
    pub b_coeffs: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct JumpPairArg(pub JumpPair);

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected \"re,im\", got {s:?}"));
    }
    let re: f64 = parts[0].trim().parse().map_err(|e| format!("bad re: {e}"))?;
    let im: f64 = parts[1].trim().parse().map_err(|e| format!("bad im: {e}"))?;
    Ok(Complex64::new(re, im))
}

fn parse_pair(s: &str) -> std::result::Result<JumpPairArg, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 5 {
        return Err(format!("expected \"theta,re+,im+,re-,im-\", got {s:?}"));
    }
    let vals: std::result::Result<Vec<f64>, _> = parts.iter().map(|p| p.trim().parse::<f64>()).collect();
    let vals = vals.map_err(|e| format!("bad number: {e}"))?;
    Ok(JumpPairArg(JumpPair {
        theta: vals[0],
        beta_plus: Complex64::new(vals[1], vals[2]),
        beta_minus: Complex64::new(vals[3], vals[4]),
    }))
}

#[derive(Debug, Clone, Args, Default)]
pub struct OutputArgs {
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Decide Fredholmness/invertibility of M(φ) on H^p.
    Predict {
        #[command(flatten)]
        symbol: SymbolArgs,
        #[arg(long)]
        p: f64,
        /// Also run the two-sided perturbation diagnostic with this ε.
        #[arg(long)]
        epsilon: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build the weak asymmetric factorization of the jump part.
    Factorize {
        #[command(flatten)]
        symbol: SymbolArgs,
        #[arg(long)]
        p: f64,
        /// Run the (slower) membership surrogate checks.
        #[arg(long)]
        check_memberships: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Estimate the Muckenhoupt A_p supremum of a weight.
    ApCheck {
        #[command(flatten)]
        symbol: SymbolArgs,
        #[arg(long)]
        p: f64,
        /// Weight spec JSON file ({"nodes", "exponents", "prefactor"}).
        #[arg(long)]
        weight_spec: Option<PathBuf>,
        #[arg(long)]
        depth: Option<u32>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Emit one finite truncation matrix.
    Truncate {
        #[command(flatten)]
        symbol: SymbolArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        kind: Option<CliOperatorKind>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sweep truncation sizes and record singular-value diagnostics.
    Sweep {
        #[command(flatten)]
        symbol: SymbolArgs,
        /// Comma-separated strictly increasing sizes, e.g. 64,128,256.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        threshold: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check the interval/circle transfer identity on the standard bump.
    SioTest {
        /// Circle sample count (power of two).
        #[arg(long, default_value_t = 4096)]
        circle_samples: usize,
        /// Number of Chebyshev-spaced sample points.
        #[arg(long, default_value_t = 17)]
        points: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exercise the exact operator product identities on random symbols.
    IdentityTest {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 8)]
        degree: i64,
        #[arg(long, default_value_t = 16)]
        window: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CliOperatorKind {
    Toeplitz,
    Hankel,
    Sum,
}

impl From<CliOperatorKind> for OperatorKind {
    fn from(k: CliOperatorKind) -> Self {
        match k {
            CliOperatorKind::Toeplitz => OperatorKind::Toeplitz,
            CliOperatorKind::Hankel => OperatorKind::Hankel,
            CliOperatorKind::Sum => OperatorKind::Sum,
        }
    }
}

fn read_b_coeffs(path: &PathBuf) -> Result<TrigPolynomial> {
    let text = std::fs::read_to_string(path)?;
    let mut triples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Config(format!(
                "{}:{}: expected \"n,re,im\"",
                path.display(),
                lineno + 1
            )));
        }
        let n: i64 = parts[0].trim().parse().map_err(|e| {
            Error::Config(format!("{}:{}: bad index: {e}", path.display(), lineno + 1))
        })?;
        let re: f64 = parts[1].trim().parse().map_err(|e| {
            Error::Config(format!("{}:{}: bad re: {e}", path.display(), lineno + 1))
        })?;
        let im: f64 = parts[2].trim().parse().map_err(|e| {
            Error::Config(format!("{}:{}: bad im: {e}", path.display(), lineno + 1))
        })?;
        triples.push((n, re, im));
    }
    if triples.is_empty() {
        return Err(Error::Config(format!("{}: no coefficients", path.display())));
    }
    Ok(TrigPolynomial::from_triples(&triples))
}

fn symbol_from_args(args: &SymbolArgs) -> Result<PCSymbol> {
    let b = match &args.b_coeffs {
        Some(path) => read_b_coeffs(path)?,
        None => TrigPolynomial::one(),
    };
    PCSymbol::new(
        b,
        args.beta_plus.unwrap_or(Complex64::ZERO),
        args.beta_minus.unwrap_or(Complex64::ZERO),
        args.pairs.iter().map(|p| p.0.clone()).collect(),
    )
}

fn output_spec(args: &OutputArgs) -> Option<OutputSpec> {
    if args.out.is_none() && args.format.is_none() {
        None
    } else {
        Some(OutputSpec {
            path: args.out.clone(),
            format: args.format,
        })
    }
}

/// Translate parsed flags into a [`JobConfig`].
pub fn job_from_cli(cli: &Cli) -> Result<JobConfig> {
    if let Some(path) = &cli.config {
        if cli.command.is_some() {
            return Err(Error::Config("--config is exclusive with a subcommand".into()));
        }
        let text = std::fs::read_to_string(path)?;
        let config: JobConfig = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        return Ok(config);
    }
    let Some(command) = &cli.command else {
        return Err(Error::Config("either --config or a subcommand is required".into()));
    };
    let mut config = JobConfig {
        command: CommandKind::Predict,
        symbol: None,
        p: None,
        sizes: None,
        n: None,
        kind: None,
        depth: None,
        weight: None,
        threshold: None,
        circle_samples: None,
        points: None,
        count: None,
        degree: None,
        window: None,
        seed: None,
        epsilon: None,
        check_memberships: None,
        output: None,
    };
    match command {
        CliCommand::Predict { symbol, p, epsilon, output } => {
            config.command = CommandKind::Predict;
            config.symbol = Some(symbol_from_args(symbol)?);
            config.p = Some(*p);
            config.epsilon = *epsilon;
            config.output = output_spec(output);
        }
        CliCommand::Factorize { symbol, p, check_memberships, output } => {
            config.command = CommandKind::Factorize;
            config.symbol = Some(symbol_from_args(symbol)?);
            config.p = Some(*p);
            config.check_memberships = Some(*check_memberships);
            config.output = output_spec(output);
        }
        CliCommand::ApCheck { symbol, p, weight_spec, depth, output } => {
            config.command = CommandKind::ApCheck;
            config.p = Some(*p);
            config.depth = *depth;
            if let Some(path) = weight_spec {
                let text = std::fs::read_to_string(path)?;
                config.weight = Some(
                    serde_json::from_str(&text)
                        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?,
                );
            }
            // a symbol is optional here; only build one if jumps were given
            if symbol.beta_plus.is_some()
                || symbol.beta_minus.is_some()
                || !symbol.pairs.is_empty()
                || symbol.b_coeffs.is_some()
            {
                config.symbol = Some(symbol_from_args(symbol)?);
            }
            config.output = output_spec(output);
        }
        CliCommand::Truncate { symbol, n, kind, output } => {
            config.command = CommandKind::Truncate;
            config.symbol = Some(symbol_from_args(symbol)?);
            config.n = Some(*n);
            config.kind = kind.map(Into::into);
            config.output = output_spec(output);
        }
        CliCommand::Sweep { symbol, sizes, threshold, output } => {
            config.command = CommandKind::Sweep;
            config.symbol = Some(symbol_from_args(symbol)?);
            config.sizes = Some(sizes.clone());
            config.threshold = *threshold;
            config.output = output_spec(output);
        }
        CliCommand::SioTest { circle_samples, points, output } => {
            config.command = CommandKind::SioTest;
            config.circle_samples = Some(*circle_samples);
            config.points = Some(*points);
            config.output = output_spec(output);
        }
        CliCommand::IdentityTest { count, degree, window, seed, output } => {
            config.command = CommandKind::IdentityTest;
            config.count = Some(*count);
            config.degree = Some(*degree);
            config.window = Some(*window);
            config.seed = *seed;
            config.output = output_spec(output);
        }
    }
    Ok(config)
}
