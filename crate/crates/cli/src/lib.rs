//! Driver behind the `haus` binary: evaluate operators, approximants, moduli and bounds, and run the
//! convergence studies, writing CSV.
//!
//! Exit status: 0 success, 2 configuration error, 3 numerical failure.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use haus_core::bounds::{theorem1_rhs, theorem2_rhs, BoundReport};
use haus_core::catalog::{function_by_name, operator_by_name};
use haus_core::experiments::{
    approximate_identity_study_with, convergence_study_with, modulus_for, recovery_study_with, truncated_tail_ladder,
    RateReport, StudyConfig, DEFAULT_N_LADDER,
};
use haus_core::fourier::{approximant, function_recovery_with, Representation, Target};
use haus_core::moduli::modulus_estimate;
use haus_core::{
    adjoint_apply, hausdorff_apply, lp_norm, GridRole, GridSpec, HausError, HausdorffOperatorSpec, LebesgueExponent,
    QuadratureConfig, TestFunction,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    Apply,
    Approximate,
    Study,
    Modulus,
    Bounds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TargetArg {
    Adjoint,
    Forward,
    Recover,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StudyArg {
    Convergence,
    Fejer,
    Bellman,
    Recovery,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RepArg {
    Substituted,
    Direct,
    Convolution,
}

/// Every option may also come from `--config FILE` (lines `key = value`,
/// keys are the long flag names); flags given here win.
#[derive(Debug, Parser)]
#[command(name = "haus", version, about = "Hausdorff operator approximation experiments")]
struct Cli {
    command: Command,
    #[arg(long)]
    config: Option<PathBuf>,
    /// cesaro | bellman | rl
    #[arg(long)]
    operator: Option<String>,
    #[arg(long)]
    function: Option<String>,
    /// Cusp exponent and Riemann–Liouville order.
    #[arg(long)]
    alpha: Option<f64>,
    /// Exponent: a number ≥ 1 or "inf".
    #[arg(long)]
    p: Option<String>,
    /// Truncation ladder (r for fejer, S for bellman), comma separated.
    #[arg(long = "N")]
    n: Option<String>,
    /// Evaluation points (δ values for `modulus`), comma separated.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long, value_enum)]
    target: Option<TargetArg>,
    #[arg(long, value_enum)]
    study: Option<StudyArg>,
    #[arg(long, value_enum)]
    representation: Option<RepArg>,
    /// Half-width of the default evaluation grid.
    #[arg(long = "x-window")]
    x_window: Option<f64>,
    /// Relative quadrature tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long = "abs-tol")]
    abs_tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Config(String),
    Numerical(String),
}

impl From<HausError> for Failure {
    fn from(e: HausError) -> Self {
        match e {
            HausError::UnknownClass(_)
            | HausError::InvalidAlpha(_)
            | HausError::InvalidInput(_)
            | HausError::KernelMassNotOne(_) => Failure::Config(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn config_err<T>(msg: impl Into<String>) -> Run<T> {
    Err(Failure::Config(msg.into()))
}

/// Fully resolved settings for one run.
struct RunConfig {
    command: Command,
    operator: String,
    function: String,
    alpha: f64,
    p: LebesgueExponent,
    n_ladder: Option<Vec<f64>>,
    x: Option<Vec<f64>>,
    target: TargetArg,
    study: StudyArg,
    representation: Representation,
    x_window: f64,
    quad: QuadratureConfig,
    out: Option<PathBuf>,
}

fn parse_config_file(path: &PathBuf) -> Run<HashMap<String, String>> {
    let text = std::fs::read_to_string(path).or_else(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return config_err(format!("{}:{}: expected key = value", path.display(), i + 1));
        };
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn parse_num(key: &str, s: &str) -> Run<f64> {
    s.trim().parse::<f64>().or_else(|_| config_err(format!("{key}: not a number: '{s}'")))
}

fn parse_list(key: &str, s: &str) -> Run<Vec<f64>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(|t| parse_num(key, t)).collect()
}

fn parse_enum<T: ValueEnum>(key: &str, s: &str) -> Run<T> {
    T::from_str(s.trim(), true).or_else(|_| config_err(format!("{key}: unknown value '{s}'")))
}

impl RunConfig {
    fn resolve(cli: Cli) -> Run<Self> {
        let file = match &cli.config {
            Some(path) => parse_config_file(path)?,
            None => HashMap::new(),
        };
        const KEYS: &[&str] = &[
            "operator", "function", "alpha", "p", "N", "x", "target", "study", "representation", "x-window", "tol",
            "abs-tol", "out",
        ];
        if let Some(k) = file.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return config_err(format!("unknown config key '{k}'"));
        }
        let get = |k: &str| file.get(k).map(String::as_str);
        let num = |flag: Option<f64>, k: &str| -> Run<Option<f64>> {
            match flag {
                Some(v) => Ok(Some(v)),
                None => get(k).map(|s| parse_num(k, s)).transpose(),
            }
        };
        let list = |flag: &Option<String>, k: &str| -> Run<Option<Vec<f64>>> {
            flag.as_deref().or(get(k)).map(|s| parse_list(k, s)).transpose()
        };
        let choice = |flag: Option<StudyArg>| -> Run<StudyArg> {
            match flag {
                Some(v) => Ok(v),
                None => get("study").map_or(Ok(StudyArg::Convergence), |s| parse_enum("study", s)),
            }
        };

        let mut quad = QuadratureConfig::oscillatory();
        if let Some(t) = num(cli.tol, "tol")? {
            quad.rel_tol = t;
        }
        if let Some(t) = num(cli.abs_tol, "abs-tol")? {
            quad.abs_tol = t;
        }
        quad.validate()?;

        let p = cli.p.as_deref().or(get("p")).map_or(Ok(LebesgueExponent::Infinity), LebesgueExponent::parse)?;
        let target = match cli.target {
            Some(t) => t,
            None => get("target").map_or(Ok(TargetArg::Adjoint), |s| parse_enum("target", s))?,
        };
        let rep = match cli.representation {
            Some(r) => r,
            None => get("representation").map_or(Ok(RepArg::Convolution), |s| parse_enum("representation", s))?,
        };
        let x_window = num(cli.x_window, "x-window")?.unwrap_or(2.0);
        if !(x_window > 0.0 && x_window.is_finite()) {
            return config_err("x-window must be positive");
        }
        let cfg = RunConfig {
            command: cli.command,
            operator: cli.operator.clone().or(get("operator").map(String::from)).unwrap_or_else(|| "cesaro".into()),
            function: cli.function.clone().or(get("function").map(String::from)).unwrap_or_else(|| "tent".into()),
            alpha: num(cli.alpha, "alpha")?.unwrap_or(0.5),
            p,
            n_ladder: list(&cli.n, "N")?,
            x: list(&cli.x, "x")?,
            target,
            study: choice(cli.study)?,
            representation: match rep {
                RepArg::Substituted => Representation::Substituted,
                RepArg::Direct => Representation::DirectSpectral,
                RepArg::Convolution => Representation::Convolution,
            },
            x_window,
            quad,
            out: cli.out.clone().or(get("out").map(PathBuf::from)),
        };
        // Fail on bad names before any computation.
        cfg.operator()?;
        cfg.function()?;
        Ok(cfg)
    }

    fn operator(&self) -> Run<HausdorffOperatorSpec> {
        Ok(operator_by_name(&self.operator, self.alpha)?)
    }

    fn function(&self) -> Run<TestFunction> {
        Ok(function_by_name(&self.function, self.alpha)?)
    }

    fn grid(&self, default: impl FnOnce() -> Vec<f64>, role: GridRole) -> Run<GridSpec> {
        let pts = self.x.clone().unwrap_or_else(default);
        Ok(GridSpec::new(pts, role)?)
    }

    fn x_grid(&self) -> Run<GridSpec> {
        let w = self.x_window;
        self.grid(|| (0..=8).map(|i| -w + 2.0 * w * i as f64 / 8.0).collect(), GridRole::X)
    }

    fn ladder(&self, default: &[f64]) -> Run<GridSpec> {
        Ok(GridSpec::new(self.n_ladder.clone().unwrap_or_else(|| default.to_vec()), GridRole::NLadder)?)
    }

    fn study_config(&self) -> StudyConfig {
        StudyConfig { representation: self.representation, quad: self.quad, ..StudyConfig::default() }
    }
}

/// `%.12g`: 12 significant digits, trailing zeros dropped, exponent form
/// outside [1e−5, 1e12).
pub fn fmt_g(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.11e}");
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if !(-5..12).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim(mant), sign, exp.abs())
    } else {
        let decimals = (11 - exp).max(0) as usize;
        trim(&format!("{v:.decimals$}"))
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_g).unwrap_or_default()
}

struct Table {
    out: String,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table { out: header.join(",") + "\n" }
    }

    fn row(&mut self, cells: &[String]) {
        let _ = writeln!(self.out, "{}", cells.join(","));
    }
}

fn target_of(t: TargetArg) -> Target {
    match t {
        TargetArg::Forward => Target::Forward,
        _ => Target::Adjoint,
    }
}

fn exact(op: &HausdorffOperatorSpec, f: &TestFunction, t: TargetArg, x: f64, q: &QuadratureConfig) -> Run<f64> {
    Ok(match t {
        TargetArg::Adjoint => adjoint_apply(op, f, x, q)?,
        TargetArg::Forward => hausdorff_apply(op, f, x, q)?,
        TargetArg::Recover => f.eval(x),
    })
}

fn cmd_apply(cfg: &RunConfig) -> Run<String> {
    if cfg.target == TargetArg::Recover {
        return config_err("apply supports --target adjoint or forward");
    }
    let (op, f) = (cfg.operator()?, cfg.function()?);
    let grid = cfg.x_grid()?;
    let mut t = Table::new(&["x", "value"]);
    for &x in grid.points() {
        t.row(&[fmt_g(x), fmt_g(exact(&op, &f, cfg.target, x, &cfg.quad)?)]);
    }
    Ok(t.out)
}

fn cmd_approximate(cfg: &RunConfig) -> Run<String> {
    let (op, f) = (cfg.operator()?, cfg.function()?);
    let grid = cfg.x_grid()?;
    let ladder = cfg.ladder(&[16.0])?;
    let mut t = Table::new(&["x", "N", "approximant", "target", "abs_error", "tail_error_estimate"]);
    for &n in ladder.points() {
        let res = match cfg.target {
            TargetArg::Recover => function_recovery_with(&op, &f, n, &grid, cfg.representation, &cfg.quad)?,
            other => approximant(&op, &f, n, &grid, target_of(other), cfg.representation, &cfg.quad)?,
        };
        for ((&x, &v), d) in grid.points().iter().zip(&res.values).zip(&res.diagnostics) {
            let e = exact(&op, &f, cfg.target, x, &cfg.quad)?;
            t.row(&[fmt_g(x), fmt_g(n), fmt_g(v), fmt_g(e), fmt_g((v - e).abs()), fmt_g(d.tail_error)]);
        }
    }
    Ok(t.out)
}

fn study_table(report: &RateReport, first: &str, log_ratio: bool) -> String {
    let mut header = vec![first, "error", "bound", "fitted_slope", "predicted_slope"];
    if log_ratio {
        header.push("log_ratio");
    }
    let mut t = Table::new(&header);
    for (i, (&n, &e)) in report.n_ladder.iter().zip(&report.errors).enumerate() {
        let mut row = vec![fmt_g(n), fmt_g(e), fmt_g(report.bound_values[i]), String::new(), String::new()];
        if log_ratio {
            row.push(fmt_opt(report.log_corrected_ratio.as_ref().map(|r| r[i])));
        }
        t.row(&row);
    }
    let mut footer =
        vec!["fit".to_string(), String::new(), String::new(), fmt_opt(report.fit.map(|f| f.slope)), fmt_g(report.predicted_slope)];
    if log_ratio {
        footer.push(String::new());
    }
    t.row(&footer);
    t.out
}

fn cmd_study(cfg: &RunConfig) -> Run<String> {
    let sc = cfg.study_config();
    match cfg.study {
        StudyArg::Convergence => {
            let target = match cfg.target {
                TargetArg::Recover => return config_err("use --study recovery for function recovery"),
                t => target_of(t),
            };
            let r = convergence_study_with(
                &cfg.operator()?,
                &cfg.function()?,
                target,
                cfg.p,
                &cfg.ladder(&DEFAULT_N_LADDER)?,
                &sc,
            )?;
            Ok(study_table(&r, "N", false))
        }
        StudyArg::Fejer => {
            let r = approximate_identity_study_with(&cfg.function()?, cfg.p, &cfg.ladder(&DEFAULT_N_LADDER)?, &sc)?;
            Ok(study_table(&r, "r", true))
        }
        StudyArg::Recovery => {
            let y = cfg.grid(|| (0..=40).map(|i| -2.0 + 0.1 * i as f64).collect(), GridRole::X)?;
            let r = recovery_study_with(&cfg.operator()?, &cfg.function()?, &cfg.ladder(&DEFAULT_N_LADDER)?, &y, &sc)?;
            Ok(study_table(&r, "N", false))
        }
        StudyArg::Bellman => {
            // The sup-norm modulus of the chosen function, capped at 2‖f‖_∞.
            let f = cfg.function()?;
            let inf = LebesgueExponent::Infinity;
            let m = modulus_for(&f, inf, &cfg.quad)?;
            let cap = 2.0 * lp_norm(&f, inf, &cfg.quad)?;
            let modulus = move |d: f64| m(d).min(cap);
            let ladder = cfg.ladder(&[4.0, 16.0, 64.0, 256.0, 1024.0])?;
            let rows = truncated_tail_ladder(&cfg.operator()?, &ladder, &modulus, &cfg.quad)?;
            let mut t = Table::new(&["S", "error", "bound", "fitted_slope", "predicted_slope"]);
            for (s, b) in rows {
                t.row(&[fmt_g(s), String::new(), fmt_g(b), String::new(), String::new()]);
            }
            t.row(&["fit".into(), String::new(), String::new(), String::new(), String::new()]);
            Ok(t.out)
        }
    }
}

fn cmd_modulus(cfg: &RunConfig) -> Run<String> {
    let f = cfg.function()?;
    let deltas = cfg.grid(|| (0..=6).map(|k| 10f64.powf(-3.0 + 0.5 * k as f64)).collect(), GridRole::H)?;
    let mut t = Table::new(&["delta", "estimate", "analytic", "refinement_delta"]);
    for &d in deltas.points() {
        let e = modulus_estimate(&f, d, cfg.p, &cfg.quad)?;
        t.row(&[fmt_g(d), fmt_g(e.value), fmt_opt(f.modulus_at(d, cfg.p)), fmt_g(e.refinement_delta)]);
    }
    Ok(t.out)
}

fn cmd_bounds(cfg: &RunConfig) -> Run<String> {
    let (op, f) = (cfg.operator()?, cfg.function()?);
    let m = modulus_for(&f, cfg.p, &cfg.quad)?;
    let cap = lp_norm(&f, cfg.p, &cfg.quad).ok().map(|v| 2.0 * v);
    let ladder = cfg.ladder(&DEFAULT_N_LADDER)?;
    let mut t = Table::new(&["N", "term1", "term2", "total", "normalizer", "error_bound"]);
    for &n in ladder.points() {
        let r: BoundReport = match cfg.p {
            LebesgueExponent::Infinity => theorem2_rhs(&op, &*m, n, cap, &cfg.quad)?,
            LebesgueExponent::Finite(_) => theorem1_rhs(&op, &*m, n, cfg.p, cap, &cfg.quad)?,
        };
        t.row(&[
            fmt_g(n),
            fmt_g(r.term1.as_f64()),
            fmt_g(r.term2.as_f64()),
            fmt_g(r.total.as_f64()),
            fmt_g(r.normalizer),
            fmt_g(r.error_bound().as_f64()),
        ]);
    }
    Ok(t.out)
}

/// Exit status of a failed run: 2 for configuration errors, 3 for numerical failures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = if self.code == 2 { "configuration error" } else { "numerical failure" };
        write!(f, "haus: {kind}: {}", self.message)
    }
}

impl From<Failure> for CliError {
    fn from(f: Failure) -> Self {
        match f {
            Failure::Config(message) => CliError { code: 2, message },
            Failure::Numerical(message) => CliError { code: 3, message },
        }
    }
}

fn render(cli: Cli) -> Run<(String, Option<PathBuf>)> {
    let cfg = RunConfig::resolve(cli)?;
    let text = match cfg.command {
        Command::Apply => cmd_apply(&cfg)?,
        Command::Approximate => cmd_approximate(&cfg)?,
        Command::Study => cmd_study(&cfg)?,
        Command::Modulus => cmd_modulus(&cfg)?,
        Command::Bounds => cmd_bounds(&cfg)?,
    };
    Ok((text, cfg.out))
}

#[derive(Debug, Clone)]
pub struct Output {
    pub csv: String,
    pub written_to: Option<PathBuf>,
}

/// Runs one command line (without the program name) on a private pool of
/// `threads` workers, or on the global pool when `None`. The CSV is returned
/// and also written to `--out` when given. Help and version requests come
/// back as errors with code 0.
pub fn run_args<I, S>(args: I, threads: Option<usize>) -> Result<Output, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("haus")).chain(args.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(argv)
        .map_err(|e| CliError { code: if e.use_stderr() { 2 } else { 0 }, message: e.to_string() })?;
    let work = || render(cli);
    let (text, out) = match threads {
        None => work(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| CliError { code: 3, message: format!("thread pool: {e}") })?
            .install(work),
    }?;
    if let Some(path) = &out {
        std::fs::write(path, &text)
            .map_err(|e| CliError { code: 2, message: format!("cannot write {}: {e}", path.display()) })?;
    }
    Ok(Output { csv: text, written_to: out })
}
