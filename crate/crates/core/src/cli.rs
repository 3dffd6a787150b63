//! Command-line front end.
//!
//! Every subcommand reads equation documents (a path, or the name of a
//! bundled corpus entry) and prints JSON or CSV. Tabular outputs start with
//! a `# config: {...}` line recording the full configuration and seed.
//!
//! Exit codes: 0 success, 1 point not regular, 2 invalid input, 3 seed
//! protocol errors, 4 no regular iterate found, 5 a scan found candidate
//! relations or a check was violated (output is still written).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::rat::{parse_rat, rat_to_string};
use crate::algebra::{Dyadic, Rat, Round};
use crate::elimination::{elim_suite, ElimError, Verdict, ELIM_CSV_HEADER};
use crate::evaluator::{
    eval_at, eval_via_system, growth_profile, DeclaredBound, EvalError, ValueEnclosure,
};
use crate::liouville::{
    continued_fraction_of, default_ladder, growth_check, liouville_constant, poly_min_scan,
    xi_value, Beta, BoundProfile, ExponentSeq, LiouvilleError, ScanOptions, SCAN_CSV_HEADER,
};
use crate::mahler::{
    companion_system, corpus, direct_sum, expand_series, find_regular_power, iterate_system,
    regularity, verify_equation, MahlerEquation, MahlerError, MahlerSystem,
};
use crate::siegel::{
    achieved_valuation, aux_form, check_iterate_identity, iterate_aux, multiplicity_scan,
    unknown_count, IterContext, SiegelError, CSV_HEADER,
};

#[derive(Parser, Debug, Serialize)]
#[command(name = "mahler", version, about = "Mahler functions: series, systems, values and experiments")]
pub struct Cli {
    /// Working precision in bits; value enclosures aim at width 2^-precision.
    #[arg(long, global = true, default_value_t = 128, value_parser = clap::value_parser!(u32).range(64..))]
    pub precision: u32,
    /// Seed of every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for parallel scans (the output does not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug, Serialize)]
pub enum Command {
    /// Power-series coefficients of the solution.
    Expand(SeriesArgs),
    /// Residual valuation of the equation on its own expansion.
    Verify(SeriesArgs),
    /// Companion systems, direct sums and iterates.
    #[command(subcommand)]
    System(SystemCmd),
    /// Regularity of a point for the companion system.
    Regular(RegularArgs),
    /// Auxiliary form with a prescribed vanishing order.
    Siegel(SiegelArgs),
    Multiplicity(MultiplicityArgs),
    /// Certified value at a rational point.
    Eval(EvalArgs),
    /// Lacunary series over a value, with exponent growth checks.
    Lacunary(LacunaryArgs),
    /// Smallest |P(xi)| over small integer polynomials.
    Polyscan(PolyscanArgs),
    /// Continued fraction prefix of an enclosed number.
    Cf(CfArgs),
    /// Randomized consistency suite for distances to binary forms.
    Elimsuite(ElimArgs),
    /// Run a scan and also write plot data next to the CSV.
    #[command(subcommand)]
    Experiment(Experiment),
}

#[derive(Subcommand, Debug, Serialize)]
pub enum Experiment {
    Multiplicity(MultiplicityArgs),
    Polyscan(PolyscanArgs),
    Elimsuite(ElimArgs),
    Lacunary(LacunaryArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct SeriesArgs {
    /// Equation document path or corpus name.
    #[arg(long)]
    pub eq: String,
    #[arg(short = 'N', long = "terms", default_value_t = 64)]
    pub n: usize,
}

#[derive(Subcommand, Debug, Serialize)]
pub enum SystemCmd {
    Build {
        #[arg(long)]
        eq: String,
    },
    Sum {
        #[arg(long, num_args = 1.., required = true)]
        eq: Vec<String>,
    },
    Iterate {
        #[arg(long)]
        eq: String,
        #[arg(long)]
        ell: u32,
    },
}

#[derive(Args, Debug, Serialize)]
pub struct RegularArgs {
    #[arg(long)]
    pub eq: String,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    /// Search the iterates of the companion system for a regular one.
    #[arg(long)]
    pub search: bool,
    #[arg(long, default_value_t = 8)]
    pub lmax: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct SiegelArgs {
    #[arg(long, num_args = 1.., required = true)]
    pub eq: Vec<String>,
    #[arg(short = 'N', long = "degree")]
    pub n: u32,
    /// Vanishing order; defaults to the number of unknowns minus one.
    #[arg(long)]
    pub v: Option<usize>,
    /// Also iterate the form k times and check the recursion identity.
    #[arg(long)]
    pub iterate: Option<u32>,
}

#[derive(Args, Debug, Serialize)]
pub struct MultiplicityArgs {
    #[arg(long, num_args = 1.., required = true)]
    pub eq: Vec<String>,
    #[arg(long, default_value_t = 6)]
    pub mmax: u32,
    #[arg(long, default_value_t = 6)]
    pub nmax: u32,
    #[arg(long, default_value_t = 8)]
    pub trials: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct BoundArgs {
    /// Declare |u_n| <= 1 (0/1 or -1/0/1 coefficients).
    #[arg(long)]
    pub unit_bound: bool,
    /// Declared kappa of |u_n| <= kappa rho^n.
    #[arg(long, requires = "rho")]
    pub kappa: Option<String>,
    #[arg(long, requires = "kappa")]
    pub rho: Option<String>,
    #[arg(long, default_value = "declared on the command line")]
    pub reason: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RouteArg {
    Series,
    System,
}

#[derive(Args, Debug, Serialize)]
pub struct EvalArgs {
    #[arg(long)]
    pub eq: String,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, value_enum, default_value_t = RouteArg::Series)]
    pub route: RouteArg,
    /// Pullback steps of the system route.
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Iterate the companion system before the system route.
    #[arg(long, default_value_t = 1)]
    pub ell: u32,
    #[command(flatten)]
    pub bound: BoundArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct ExponentArgs {
    /// u_n = b^(c^n).
    #[arg(long, num_args = 2, value_names = ["B", "C"], conflicts_with_all = ["factorial", "explicit"])]
    pub tower: Option<Vec<u32>>,
    /// u_n = (n+1)!.
    #[arg(long)]
    pub factorial: bool,
    /// Comma-separated increasing exponents.
    #[arg(long, value_delimiter = ',')]
    pub explicit: Option<Vec<u64>>,
}

#[derive(Args, Debug, Serialize)]
pub struct LacunaryArgs {
    /// Base beta as the value of this equation at --alpha.
    #[arg(long, conflicts_with = "beta_rat")]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Base beta as an exact rational.
    #[arg(long, allow_hyphen_values = true)]
    pub beta_rat: Option<String>,
    #[command(flatten)]
    pub exponents: ExponentArgs,
    #[arg(long, default_value_t = 2)]
    pub terms: usize,
    /// Growth exponent C of u_{n+1} > u_n^C.
    #[arg(long, default_value = "4")]
    pub growth: String,
    #[arg(long, default_value_t = 3)]
    pub upto: usize,
    #[command(flatten)]
    pub bound: BoundArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct XiArgs {
    /// `liouville_constant`, a rational, or an equation evaluated at --alpha.
    #[arg(long, allow_hyphen_values = true)]
    pub xi: String,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Summands of Liouville's constant.
    #[arg(long, default_value_t = 4)]
    pub liouville_terms: usize,
    #[command(flatten)]
    pub bound: BoundArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct PolyscanArgs {
    #[command(flatten)]
    pub xi: XiArgs,
    #[arg(long, default_value_t = 1)]
    pub d: u32,
    #[arg(long, default_value_t = 16)]
    pub hmax: u64,
    /// Explicit comma-separated height ladder (default 2, 4, 8, ..., hmax).
    #[arg(long, value_delimiter = ',')]
    pub ladder: Option<Vec<u64>>,
    /// Bound-profile constant c1 to plot alongside.
    #[arg(long, requires = "tau")]
    pub c1: Option<String>,
    #[arg(long, requires = "c1")]
    pub tau: Option<u32>,
    #[arg(long, default_value_t = 4096)]
    pub max_bits: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct CfArgs {
    #[command(flatten)]
    pub xi: XiArgs,
    #[arg(long, default_value_t = 64)]
    pub max_terms: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct ElimArgs {
    #[arg(long, default_value_t = 100)]
    pub count: u64,
    #[arg(long, default_value_t = 5)]
    pub max_deg: u32,
    #[arg(long, default_value_t = 10)]
    pub max_coeff: i64,
}

/// Error carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
}

impl From<MahlerError> for CliError {
    fn from(e: MahlerError) -> Self {
        let code = match e {
            MahlerError::InconsistentSeeds { .. }
            | MahlerError::Underdetermined { .. }
            | MahlerError::NoSeriesSolution => 3,
            MahlerError::NotFound { .. } => 4,
            _ => 2,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<SiegelError> for CliError {
    fn from(e: SiegelError) -> Self {
        match e {
            SiegelError::Mahler(m) => m.into(),
            other => CliError::invalid(other.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Mahler(m) => m.into(),
            EvalError::NotRegular { .. } => CliError { code: 1, message: e.to_string() },
            other => CliError::invalid(other.to_string()),
        }
    }
}

impl From<LiouvilleError> for CliError {
    fn from(e: LiouvilleError) -> Self {
        CliError::invalid(e.to_string())
    }
}

impl From<ElimError> for CliError {
    fn from(e: ElimError) -> Self {
        CliError::invalid(e.to_string())
    }
}

/// What a command produced: the main text, optional plot data, exit code.
struct Output {
    text: String,
    plot: Option<Value>,
    code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, plot: None, code: 0 }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(CliError::invalid(e.to_string())),
        },
        None => dispatch(&cli),
    };
    match result {
        Ok(out) => match emit(&cli, &out, stdout) {
            Ok(()) => out.code,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                2
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

fn emit(cli: &Cli, out: &Output, stdout: &mut dyn Write) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => {
            fs::write(path, &out.text)?;
            if let Some(plot) = &out.plot {
                fs::write(plot_path(path), serde_json::to_string_pretty(plot).expect("json") + "\n")?;
            }
            Ok(())
        }
        None => stdout.write_all(out.text.as_bytes()),
    }
}

/// `results/scan.csv` becomes `results/scan.plot.json`.
pub fn plot_path(out: &Path) -> PathBuf {
    out.with_extension("plot.json")
}

fn dispatch(cli: &Cli) -> Result<Output, CliError> {
    let config = config_json(cli);
    match &cli.command {
        Command::Expand(a) => cmd_expand(a),
        Command::Verify(a) => cmd_verify(a),
        Command::System(s) => cmd_system(s),
        Command::Regular(a) => cmd_regular(a),
        Command::Siegel(a) => cmd_siegel(a),
        Command::Multiplicity(a) => cmd_multiplicity(cli, &config, a, false),
        Command::Eval(a) => cmd_eval(cli, a),
        Command::Lacunary(a) => cmd_lacunary(cli, &config, a, false),
        Command::Polyscan(a) => cmd_polyscan(cli, &config, a, false),
        Command::Cf(a) => cmd_cf(cli, a),
        Command::Elimsuite(a) => cmd_elimsuite(cli, &config, a, false),
        Command::Experiment(e) => match e {
            Experiment::Multiplicity(a) => cmd_multiplicity(cli, &config, a, true),
            Experiment::Polyscan(a) => cmd_polyscan(cli, &config, a, true),
            Experiment::Elimsuite(a) => cmd_elimsuite(cli, &config, a, true),
            Experiment::Lacunary(a) => cmd_lacunary(cli, &config, a, true),
        },
    }
}

fn config_json(cli: &Cli) -> Value {
    let mut v = serde_json::to_value(cli).expect("serializable config");
    if let Some(obj) = v.as_object_mut() {
        obj.remove("out");
        obj.remove("threads");
    }
    v
}

pub fn load_equation(spec: &str) -> Result<MahlerEquation, CliError> {
    let path = Path::new(spec);
    let text = if path.is_file() {
        fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{spec}: {e}")))?
    } else if let Some(src) = corpus::source(spec) {
        src.to_string()
    } else {
        return Err(CliError::invalid(format!("{spec}: no such file or corpus entry")));
    };
    Ok(MahlerEquation::from_json(&text)?)
}

fn parse_rational(what: &str, text: &str) -> Result<Rat, CliError> {
    parse_rat(text.trim()).ok_or_else(|| CliError::invalid(format!("{what} {text:?} is not a rational number")))
}

fn parse_alpha(text: &str) -> Result<Rat, CliError> {
    let a = parse_rational("alpha", text)?;
    if a == Rat::from_integer(0.into()) || a.numer().magnitude() >= a.denom().magnitude() {
        return Err(CliError::invalid(format!("alpha {text} must satisfy 0 < |alpha| < 1")));
    }
    Ok(a)
}

fn json_text(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}

/// `# config` line followed by CSV records.
fn csv_text(config: &Value, header: &[&str], rows: &[Vec<String>], trailer: &[String]) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("flush")).expect("utf8");
    let mut s = format!("# config: {}\n{body}", serde_json::to_string(config).expect("json"));
    for t in trailer {
        s.push_str(&format!("# {t}\n"));
    }
    s
}

fn table_json(config: &Value, header: &[&str], rows: &[Vec<String>], extra: Value) -> String {
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let m: serde_json::Map<String, Value> =
                header.iter().zip(r).map(|(k, v)| (k.to_string(), Value::String(v.clone()))).collect();
            Value::Object(m)
        })
        .collect();
    json_text(&json!({"config": config, "rows": rows, "summary": extra}))
}

fn table(cli: &Cli, config: &Value, header: &[&str], rows: &[Vec<String>], summary: Value) -> String {
    match cli.format {
        Format::Csv => {
            let trailer: Vec<String> = summary
                .as_object()
                .map(|o| o.iter().map(|(k, v)| format!("{k}: {v}")).collect())
                .unwrap_or_default();
            csv_text(config, header, rows, &trailer)
        }
        Format::Json => table_json(config, header, rows, summary),
    }
}

fn cmd_expand(a: &SeriesArgs) -> Result<Output, CliError> {
    let eq = load_equation(&a.eq)?;
    let s = expand_series(&eq, a.n)?;
    let coeffs: Vec<String> = s.coeffs().iter().map(rat_to_string).collect();
    Ok(Output::ok(json_text(&json!(coeffs))))
}

fn cmd_verify(a: &SeriesArgs) -> Result<Output, CliError> {
    let eq = load_equation(&a.eq)?;
    let s = expand_series(&eq, a.n)?;
    let v = verify_equation(&eq, &s);
    Ok(Output::ok(json_text(&json!({
        "name": eq.name(),
        "order": a.n,
        "valuation": v.to_string(),
        "residual_vanishes_to_order": v.lower_bound() >= a.n,
    }))))
}

fn system_json(sys: &MahlerSystem) -> Value {
    let m = sys.matrix();
    let rows: Vec<Vec<String>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
        .collect();
    json!({
        "q": sys.q(),
        "size": sys.size(),
        "augmented": sys.is_augmented(),
        "provenance": sys.provenance(),
        "matrix": rows,
        "det": sys.det().to_string(),
    })
}

fn cmd_system(s: &SystemCmd) -> Result<Output, CliError> {
    let sys = match s {
        SystemCmd::Build { eq } => companion_system(&load_equation(eq)?),
        SystemCmd::Sum { eq } => {
            let systems = eq
                .iter()
                .map(|e| load_equation(e).map(|e| companion_system(&e)))
                .collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&MahlerSystem> = systems.iter().collect();
            direct_sum(&refs)?
        }
        SystemCmd::Iterate { eq, ell } => {
            if *ell == 0 {
                return Err(CliError::invalid("ell must be at least 1"));
            }
            iterate_system(&companion_system(&load_equation(eq)?), *ell)
        }
    };
    Ok(Output::ok(json_text(&system_json(&sys))))
}

fn cmd_regular(a: &RegularArgs) -> Result<Output, CliError> {
    let eq = load_equation(&a.eq)?;
    let alpha = parse_alpha(&a.alpha)?;
    if a.search {
        return match find_regular_power(&eq, &alpha, a.lmax) {
            Ok(rp) => Ok(Output::ok(json_text(&json!({
                "ell": rp.ell,
                "attempts": rp.attempts.iter().map(|t| json!({"ell": t.ell, "report": t.report.to_json()})).collect::<Vec<_>>(),
            })))),
            Err(MahlerError::NotFound { attempts }) => Ok(Output {
                text: json_text(&json!({
                    "ell": Value::Null,
                    "attempts": attempts.iter().map(|t| json!({"ell": t.ell, "report": t.report.to_json()})).collect::<Vec<_>>(),
                })),
                plot: None,
                code: 4,
            }),
            Err(e) => Err(e.into()),
        };
    }
    let report = regularity(&companion_system(&eq), &alpha)?;
    Ok(Output {
        text: json_text(&report.to_json()),
        plot: None,
        code: if report.regular { 0 } else { 1 },
    })
}

fn cmd_siegel(a: &SiegelArgs) -> Result<Output, CliError> {
    let eqs = a.eq.iter().map(|e| load_equation(e)).collect::<Result<Vec<_>, _>>()?;
    let unknowns = unknown_count(eqs.len(), a.n, a.n);
    let v = a.v.unwrap_or(unknowns.saturating_sub(1));
    let order = v + a.n as usize + 1;
    let series = eqs
        .iter()
        .map(|e| expand_series(e, order))
        .collect::<Result<Vec<_>, _>>()?;
    let res = aux_form(&series, a.n, v)?;
    let mut out = json!({
        "form": res.form.to_doc(),
        "valuation": res.valuation.to_string(),
        "conditions": v,
        "unknowns": res.unknowns,
        "kernel_dim": res.kernel_dim,
        "zero_composition": res.zero_composition,
    });
    if let Some(k) = a.iterate {
        if eqs.len() != 1 {
            return Err(CliError::invalid("--iterate needs exactly one equation"));
        }
        let check_order = 256.max(order);
        let ctx = IterContext::from_equation(&eqs[0], check_order)?;
        if ctx.system.size() != res.form.nvars() {
            return Err(CliError::invalid("--iterate needs an equation of order 1"));
        }
        let rk = iterate_aux(&res.form, &ctx.system, &ctx.a, a.n, k)?;
        let check = check_iterate_identity(&res.form, &rk, &ctx, a.n, k, check_order)?;
        out["iterate"] = json!({
            "k": k,
            "form": rk.to_doc(),
            "identity_holds": check.holds,
            "first_mismatch": check.first_mismatch,
            "checked_order": check.order,
            "achieved_valuation": achieved_valuation(&rk, &[ctx.y[1].clone()]).to_string(),
        });
    }
    Ok(Output::ok(json_text(&out)))
}

fn cmd_multiplicity(cli: &Cli, config: &Value, a: &MultiplicityArgs, plot: bool) -> Result<Output, CliError> {
    let eqs = a.eq.iter().map(|e| load_equation(e)).collect::<Result<Vec<_>, _>>()?;
    let res = multiplicity_scan(&eqs, a.mmax, a.nmax, a.trials, cli.seed)?;
    let rows: Vec<Vec<String>> = res.rows.iter().map(|r| r.csv_record()).collect();
    let text = table(cli, config, &CSV_HEADER, &rows, json!({"c_fit": res.c_fit_string()}));
    let t = eqs.len() as u32;
    let plot = plot.then(|| {
        let pts: Vec<(u64, usize)> = res
            .rows
            .iter()
            .filter_map(|r| r.achieved_val.map(|v| (r.m as u64 * (r.n as u64).pow(t), v)))
            .collect();
        json!({
            "config": config,
            "series": [{
                "name": "achieved_val vs M N^t",
                "x": pts.iter().map(|p| p.0).collect::<Vec<_>>(),
                "y": pts.iter().map(|p| p.1).collect::<Vec<_>>(),
            }],
            "c_fit": res.c_fit_string(),
        })
    });
    Ok(Output { text, plot, code: 0 })
}

fn declared(b: &BoundArgs) -> Result<Option<DeclaredBound>, CliError> {
    if b.unit_bound {
        return Ok(Some(DeclaredBound::unit(b.reason.clone())));
    }
    match (&b.kappa, &b.rho) {
        (Some(k), Some(r)) => Ok(Some(DeclaredBound::new(
            parse_rational("kappa", k)?,
            parse_rational("rho", r)?,
            b.reason.clone(),
        ))),
        _ => Ok(None),
    }
}

fn target(cli: &Cli) -> Dyadic {
    Dyadic::pow2(-(cli.precision as i64))
}

/// Enough coefficients to check or fit a growth bound.
const PROFILE_TERMS: usize = 256;

fn value_of(eq: &MahlerEquation, alpha: &Rat, bound: &BoundArgs, width: &Dyadic) -> Result<ValueEnclosure, CliError> {
    let s = expand_series(eq, PROFILE_TERMS)?;
    let profile = growth_profile(&s, declared(bound)?)?;
    Ok(eval_at(eq, alpha, &profile, width)?)
}

fn cmd_eval(cli: &Cli, a: &EvalArgs) -> Result<Output, CliError> {
    let eq = load_equation(&a.eq)?;
    let alpha = parse_alpha(&a.alpha)?;
    let width = target(cli);
    let digits = (cli.precision as f64 * std::f64::consts::LOG10_2) as u32 + 2;
    let v = match a.route {
        RouteArg::Series => value_of(&eq, &alpha, &a.bound, &width)?,
        RouteArg::System => {
            if a.ell == 0 {
                return Err(CliError::invalid("ell must be at least 1"));
            }
            let sys = iterate_system(&companion_system(&eq), a.ell);
            let s = expand_series(&eq, PROFILE_TERMS)?;
            let profile = growth_profile(&s, declared(&a.bound)?)?;
            eval_via_system(&sys, &eq, &alpha, a.k, &profile, &width)?
        }
    };
    Ok(Output::ok(json_text(&v.to_json(digits))))
}

fn exponent_seq(e: &ExponentArgs) -> Result<ExponentSeq, CliError> {
    if let Some(t) = &e.tower {
        return Ok(ExponentSeq::tower(t[0], t[1])?);
    }
    if e.factorial {
        return Ok(ExponentSeq::Factorial);
    }
    if let Some(v) = &e.explicit {
        return Ok(ExponentSeq::explicit(v)?);
    }
    Err(CliError::invalid("choose --tower B C, --factorial or --explicit LIST"))
}

fn cmd_lacunary(cli: &Cli, config: &Value, a: &LacunaryArgs, plot: bool) -> Result<Output, CliError> {
    let u = exponent_seq(&a.exponents)?;
    let width = target(cli);
    let beta = match (&a.beta, &a.beta_rat) {
        (Some(eq), None) => {
            let eq = load_equation(eq)?;
            let alpha = parse_alpha(a.alpha.as_deref().ok_or_else(|| CliError::invalid("--beta needs --alpha"))?)?;
            Beta::Enclosure(value_of(&eq, &alpha, &a.bound, &width)?)
        }
        (None, Some(r)) => Beta::Exact(parse_rational("beta", r)?),
        _ => return Err(CliError::invalid("give exactly one of --beta and --beta-rat")),
    };
    let xi = xi_value(&beta, &u, a.terms, &width)?;
    let c = parse_rational("growth exponent", &a.growth)?;
    let growth = growth_check(&u, &c, a.upto)?;
    let header = ["n", "ratio", "holds"];
    let rows: Vec<Vec<String>> = growth
        .rows
        .iter()
        .map(|r| vec![r.n.to_string(), rat_to_string(&r.ratio), r.holds.to_string()])
        .collect();
    let digits = 30;
    let summary = json!({
        "exponents": u.describe(),
        "xi_lo": xi.value.lo().to_decimal(digits, Round::Down),
        "xi_hi": xi.value.hi().to_decimal(digits, Round::Up),
        "xi_certified": xi.certified,
        "growth_exponent": rat_to_string(&c),
        "ratios_increasing": growth.increasing,
    });
    let text = table(cli, config, &header, &rows, summary);
    let plot = plot.then(|| {
        json!({
            "config": config,
            "series": [{
                "name": "log2 of u_{n+1}^r / u_n^p",
                "x": growth.rows.iter().map(|r| r.n).collect::<Vec<_>>(),
                "y": growth.rows.iter().map(|r| log2_rat(&r.ratio)).collect::<Vec<_>>(),
            }],
        })
    });
    Ok(Output { text, plot, code: 0 })
}

fn log2_rat(r: &Rat) -> f64 {
    let d = Dyadic::from_rat_round(r, 64, Round::Down);
    let m = d.magnitude().unwrap_or(0);
    let frac = d.ldexp(-m).to_f64();
    m as f64 + frac.log2()
}

/// The number a scan or expansion works on.
fn xi_enclosure(cli: &Cli, x: &XiArgs) -> Result<ValueEnclosure, CliError> {
    let width = target(cli);
    if x.xi == "liouville_constant" {
        return Ok(liouville_constant(x.liouville_terms, &width)?);
    }
    if let Some(r) = parse_rat(x.xi.trim()) {
        if x.alpha.is_none() {
            return Ok(ValueEnclosure::exact(&r, cli.precision));
        }
    }
    let eq = load_equation(&x.xi)?;
    let alpha = parse_alpha(x.alpha.as_deref().ok_or_else(|| CliError::invalid("an equation needs --alpha"))?)?;
    value_of(&eq, &alpha, &x.bound, &width)
}

fn cmd_polyscan(cli: &Cli, config: &Value, a: &PolyscanArgs, plot: bool) -> Result<Output, CliError> {
    let xi = xi_enclosure(cli, &a.xi)?;
    let ladder = a.ladder.clone().unwrap_or_else(|| default_ladder(a.hmax));
    let bp = match (&a.c1, a.tau) {
        (Some(c1), Some(tau)) => Some(BoundProfile::new(parse_rational("c1", c1)?, tau)?),
        _ => None,
    };
    let opts = ScanOptions { initial_bits: 64, max_bits: a.max_bits.max(64) };
    let mut scans = Vec::new();
    for d in 1..=a.d {
        scans.push(poly_min_scan(&xi, d, &ladder, bp.as_ref(), &opts)?);
    }
    let last = scans.last().expect("d >= 1");
    let rows: Vec<Vec<String>> = scans.iter().flat_map(|s| s.rows.iter().map(|r| r.csv_record())).collect();
    let relations: Vec<Value> = last
        .relations
        .iter()
        .map(|r| json!({"coeffs": r.coeffs, "exact": r.exact, "precision_bits": r.precision_bits}))
        .collect();
    let rel_text: Vec<String> = last
        .relations
        .iter()
        .map(|r| r.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    let summary = json!({
        "xi_certified": last.certified,
        "candidate_relations": rel_text.join("; "),
    });
    let text = table(cli, config, &SCAN_CSV_HEADER, &rows, summary);
    let plot = plot.then(|| {
        let series: Vec<Value> = scans
            .iter()
            .map(|s| {
                json!({
                    "name": format!("-log2 min |P(xi)|, d = {}", s.rows.first().map_or(0, |r| r.d)),
                    "x": s.rows.iter().map(|r| r.h).collect::<Vec<_>>(),
                    "y": s.rows.iter().map(|r| -(r.min_abs_lo.magnitude().unwrap_or(0) as f64)).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({"config": config, "series": series, "candidate_relations": relations})
    });
    let code = if scans.iter().any(|s| !s.relations.is_empty()) { 5 } else { 0 };
    Ok(Output { text, plot, code })
}

fn cmd_cf(cli: &Cli, a: &CfArgs) -> Result<Output, CliError> {
    let xi = xi_enclosure(cli, &a.xi)?;
    let cf = continued_fraction_of(&xi, a.max_terms);
    Ok(Output::ok(json_text(&cf.to_json())))
}

fn cmd_elimsuite(cli: &Cli, config: &Value, a: &ElimArgs, plot: bool) -> Result<Output, CliError> {
    if a.max_deg == 0 || a.max_coeff <= 0 {
        return Err(CliError::invalid("need --max-deg >= 1 and --max-coeff >= 1"));
    }
    let rows = elim_suite(a.count, cli.seed, a.max_deg, a.max_coeff, cli.precision)?;
    let count = |v: Verdict| rows.iter().filter(|r| r.report.verdict == v).count();
    let summary = json!({
        "holds": count(Verdict::Holds),
        "trivial": count(Verdict::Trivial),
        "inconclusive": count(Verdict::Inconclusive),
        "violated": count(Verdict::Violated),
    });
    let records: Vec<Vec<String>> = rows.iter().map(|r| r.csv_record()).collect();
    let text = table(cli, config, &ELIM_CSV_HEADER, &records, summary);
    let plot = plot.then(|| {
        let pts: Vec<(usize, f64)> = rows
            .iter()
            .enumerate()
            .filter_map(|(i, r)| match (&r.report.rhs.lo, &r.report.lhs.hi) {
                (Some(rl), Some(lh)) => Some((i, rl.sub(lh).to_f64())),
                _ => None,
            })
            .collect();
        json!({
            "config": config,
            "series": [{
                "name": "rhs_lo - lhs_hi",
                "x": pts.iter().map(|p| p.0).collect::<Vec<_>>(),
                "y": pts.iter().map(|p| p.1).collect::<Vec<_>>(),
            }],
        })
    });
    let code = if count(Verdict::Violated) > 0 { 5 } else { 0 };
    Ok(Output { text, plot, code })
}
