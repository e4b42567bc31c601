#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ness_core::entanglement::{self, DEFAULT_BRACKET};
use ness_core::model::validate_config;
use ness_core::rates::{golden_rule_rates, reduced_parameters, ReducedRates};
use ness_core::solver::steady_state;
use ness_core::{verify, Complex64, EnvironmentConfig, Units};

use output::{float, opt_float, write_csv, write_json};

#[derive(Parser)]
#[command(name = "ness", version, about = "Steady states and entanglement of two TLS in a multi-bath environment")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Golden-rule coefficients of the stationarity system
    Rates(SingleArgs),
    /// Steady state (populations, coherence, Bell populations)
    Steady(SingleArgs),
    /// Partial-transpose spectrum and negativity of the steady state
    Negativity(SingleArgs),
    /// Entanglement boundary T2 along a T1 grid
    ScanBoundary(ScanBoundaryArgs),
    /// Zero-temperature criterion on a (K1/J1, K2/J2) grid
    ScanKplane(ScanKplaneArgs),
    /// Negativity and populations along a T1 grid
    ScanNegativity(ScanNegativityArgs),
    /// Run the built-in cross-check suite
    Verify(OutputArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// JSON environment config
    #[arg(long)]
    config: PathBuf,
    /// Keep energies as given instead of measuring them in units of the splitting
    #[arg(long)]
    raw_units: bool,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file (standard output when omitted)
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct SingleArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ScanBoundaryArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(flatten)]
    out: OutputArgs,
    /// T1 grid as start:stop:count
    #[arg(long, allow_hyphen_values = true)]
    t1_range: Range,
    /// T2 search interval as lo:hi
    #[arg(long, allow_hyphen_values = true, value_parser = parse_bracket)]
    bracket: Option<(f64, f64)>,
}

#[derive(Args)]
struct ScanKplaneArgs {
    #[command(flatten)]
    out: OutputArgs,
    #[arg(long)]
    j2_over_j1: f64,
    #[arg(long, allow_hyphen_values = true, default_value = "-1:1:41")]
    k1_range: Range,
    #[arg(long, allow_hyphen_values = true, default_value = "0.05:1:20")]
    k2_range: Range,
}

#[derive(Args)]
struct ScanNegativityArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(flatten)]
    out: OutputArgs,
    #[arg(long, allow_hyphen_values = true)]
    t1_range: Range,
    /// Units of the T1 grid: the splitting, or the scaled θ = (T1/Δ)(J1/J2)
    #[arg(long, value_enum, default_value = "delta")]
    t1_axis: Axis,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Axis {
    Delta,
    Theta,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Range {
    start: f64,
    stop: f64,
    count: usize,
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts.as_slice() else {
            return Err(format!("expected start:stop:count, got '{s}'"));
        };
        let start: f64 = start.parse().map_err(|e| format!("start: {e}"))?;
        let stop: f64 = stop.parse().map_err(|e| format!("stop: {e}"))?;
        let count: usize = count.parse().map_err(|e| format!("count: {e}"))?;
        if !(start.is_finite() && stop.is_finite()) {
            return Err("range ends must be finite".into());
        }
        if count < 2 {
            return Err(format!("count must be >= 2, got {count}"));
        }
        if !(stop > start) {
            return Err(format!("stop must exceed start, got {start}:{stop}"));
        }
        Ok(Range { start, stop, count })
    }
}

impl Range {
    fn grid(&self) -> Vec<f64> {
        let n = self.count - 1;
        (0..=n)
            .map(|i| if i == n { self.stop } else { self.start + (self.stop - self.start) * i as f64 / n as f64 })
            .collect()
    }
}

fn parse_bracket(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got '{s}'"))?;
    let lo: f64 = lo.parse().map_err(|e| format!("lo: {e}"))?;
    let hi: f64 = hi.parse().map_err(|e| format!("hi: {e}"))?;
    if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
        return Err(format!("need 0 <= lo < hi, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn load_config(args: &ConfigArgs) -> anyhow::Result<EnvironmentConfig> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| ness_core::Error::InvalidConfig(format!("{}: {e}", args.config.display())))?;
    let raw = EnvironmentConfig::from_json_str(&text)?;
    let units = if args.raw_units { Units::Raw } else { Units::Normalized };
    Ok(validate_config(raw, units)?)
}

fn open_output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

#[derive(Serialize)]
struct ComplexOut {
    re: f64,
    im: f64,
}

impl From<Complex64> for ComplexOut {
    fn from(c: Complex64) -> Self {
        ComplexOut { re: c.re, im: c.im }
    }
}

#[derive(Serialize)]
struct RatesOut {
    delta1: f64,
    delta2: f64,
    gamma_plus_1: f64,
    gamma_minus_1: f64,
    gamma_plus_2: f64,
    gamma_minus_2: f64,
    beta_one: ComplexOut,
    beta_four: ComplexOut,
    beta_tilde: f64,
    alpha: ComplexOut,
    reduced: Option<ReducedRates>,
}

#[derive(Serialize)]
struct BellOut {
    ground: f64,
    psi_plus: f64,
    psi_minus: f64,
    top: f64,
}

#[derive(Serialize)]
struct SteadyOut {
    route: &'static str,
    p: [f64; 4],
    c: ComplexOut,
    bell: BellOut,
}

#[derive(Serialize)]
struct NegativityOut {
    route: &'static str,
    pt_eigs: [f64; 4],
    negativity: f64,
    trace_norm: f64,
    entangled: bool,
}

#[derive(Serialize)]
struct BoundaryOut {
    t1: f64,
    t2_boundary: Option<f64>,
    non_monotone: bool,
}

#[derive(Serialize)]
struct NegativityRowOut {
    t1: f64,
    negativity: Option<f64>,
    p1: Option<f64>,
    p2: Option<f64>,
    p4: Option<f64>,
    c: Option<f64>,
    #[serde(rename = "negativity_largeJ2")]
    negativity_large_j2: Option<f64>,
}

fn rates(args: &SingleArgs) -> anyhow::Result<()> {
    let cfg = load_config(&args.config)?;
    let gr = golden_rule_rates(&cfg)?;
    let reduced = reduced_parameters(&gr).ok();
    let mut out = open_output(args.out.output.as_deref())?;
    match args.out.format.unwrap_or(Format::Json) {
        Format::Json => write_json(
            &mut out,
            &RatesOut {
                delta1: gr.delta1,
                delta2: gr.delta2,
                gamma_plus_1: gr.gamma_plus_1,
                gamma_minus_1: gr.gamma_minus_1,
                gamma_plus_2: gr.gamma_plus_2,
                gamma_minus_2: gr.gamma_minus_2,
                beta_one: gr.beta_one.into(),
                beta_four: gr.beta_four.into(),
                beta_tilde: gr.beta_tilde,
                alpha: gr.alpha.into(),
                reduced,
            },
        )?,
        Format::Csv => write_csv(
            &mut out,
            &["gamma_plus_1", "gamma_minus_1", "gamma_plus_2", "gamma_minus_2", "beta_one", "beta_four", "beta_tilde", "alpha"],
            [[gr.gamma_plus_1, gr.gamma_minus_1, gr.gamma_plus_2, gr.gamma_minus_2, gr.beta_one.re, gr.beta_four.re, gr.beta_tilde, gr.alpha.re]
                .map(float)
                .to_vec()],
        )?,
    }
    out.flush()?;
    Ok(())
}

fn steady(args: &SingleArgs) -> anyhow::Result<()> {
    let cfg = load_config(&args.config)?;
    let s = steady_state(&cfg)?;
    let x = s.state;
    let mut out = open_output(args.out.output.as_deref())?;
    match args.out.format.unwrap_or(Format::Json) {
        Format::Json => {
            let b = ness_core::model::to_bell(&x);
            write_json(
                &mut out,
                &SteadyOut {
                    route: s.route.as_str(),
                    p: x.p(),
                    c: x.c().into(),
                    bell: BellOut { ground: b.pop_ground, psi_plus: b.pop_psi_plus, psi_minus: b.pop_psi_minus, top: b.pop_top },
                },
            )?
        }
        Format::Csv => {
            let [p1, p2, p3, p4] = x.p();
            let mut row = vec![s.route.as_str().to_string()];
            row.extend([p1, p2, p3, p4, x.c().re, x.c().im].map(float));
            write_csv(&mut out, &["route", "p1", "p2", "p3", "p4", "c_re", "c_im"], [row])?
        }
    }
    out.flush()?;
    Ok(())
}

fn negativity(args: &SingleArgs) -> anyhow::Result<()> {
    let cfg = load_config(&args.config)?;
    let s = steady_state(&cfg)?;
    let r = entanglement::negativity(&s.state);
    let mut out = open_output(args.out.output.as_deref())?;
    match args.out.format.unwrap_or(Format::Json) {
        Format::Json => write_json(
            &mut out,
            &NegativityOut {
                route: s.route.as_str(),
                pt_eigs: r.pt_eigs.as_array(),
                negativity: r.negativity,
                trace_norm: r.trace_norm,
                entangled: r.entangled,
            },
        )?,
        Format::Csv => {
            let e = r.pt_eigs;
            let mut row: Vec<String> = [e.p2, e.p3, e.lambda_plus, e.lambda_minus, r.negativity, r.trace_norm].map(float).to_vec();
            row.push(r.entangled.to_string());
            write_csv(&mut out, &["p2", "p3", "lambda_plus", "lambda_minus", "negativity", "trace_norm", "entangled"], [row])?
        }
    }
    out.flush()?;
    Ok(())
}

fn scan_boundary(args: &ScanBoundaryArgs) -> anyhow::Result<()> {
    let cfg = load_config(&args.config)?;
    if cfg.baths.len() < 2 {
        bail!(ness_core::Error::InvalidConfig("scan-boundary needs at least two baths".into()));
    }
    let curve = entanglement::scan_t1t2(&cfg, &args.t1_range.grid(), args.bracket.unwrap_or(DEFAULT_BRACKET));
    let mut rows = Vec::with_capacity(curve.t1.len());
    for (&t1, point) in curve.t1.iter().zip(&curve.points) {
        match point {
            Ok(p) => {
                if p.non_monotone {
                    eprintln!("warning: several sign changes of lambda_minus at t1 = {t1}; reporting the largest root");
                }
                rows.push(BoundaryOut { t1, t2_boundary: p.t2, non_monotone: p.non_monotone });
            }
            Err(e) => {
                eprintln!("warning: t1 = {t1}: {e}");
                rows.push(BoundaryOut { t1, t2_boundary: None, non_monotone: false });
            }
        }
    }
    let mut out = open_output(args.out.output.as_deref())?;
    match args.out.format.unwrap_or(Format::Csv) {
        Format::Json => write_json(&mut out, &rows)?,
        Format::Csv => write_csv(&mut out, &["t1", "t2_boundary"], rows.iter().map(|r| vec![float(r.t1), opt_float(r.t2_boundary)]))?,
    }
    out.flush()?;
    Ok(())
}

fn scan_kplane(args: &ScanKplaneArgs) -> anyhow::Result<()> {
    let plane = entanglement::scan_kplane(args.j2_over_j1, &args.k1_range.grid(), &args.k2_range.grid())?;
    let mut out = open_output(args.out.output.as_deref())?;
    match args.out.format.unwrap_or(Format::Csv) {
        Format::Json => write_json(&mut out, &plane)?,
        Format::Csv => write_csv(
            &mut out,
            &["k1_over_j1", "k2_over_j2", "entangled"],
            plane.iter().map(|p| vec![float(p.k1_over_j1), float(p.k2_over_j2), p.entangled.to_string()]),
        )?,
    }
    out.flush()?;
    Ok(())
}

fn scan_negativity(args: &ScanNegativityArgs) -> anyhow::Result<()> {
    let cfg = load_config(&args.config)?;
    if cfg.baths.len() < 2 {
        bail!(ness_core::Error::InvalidConfig("scan-negativity needs at least two baths".into()));
    }
    let axis = args.t1_range.grid();
    let to_t1 = match args.t1_axis {
        Axis::Delta => 1.0,
        Axis::Theta => cfg.splittings.delta1 * cfg.baths[1].j1 / cfg.baths[0].j1,
    };
    let t1: Vec<f64> = axis.iter().map(|a| a * to_t1).collect();
    let scan = entanglement::scan_negativity(&cfg, &t1)?;
    let rows: Vec<NegativityRowOut> = axis
        .iter()
        .zip(&scan)
        .map(|(&a, row)| match &row.point {
            Ok(p) => NegativityRowOut {
                t1: a,
                negativity: Some(p.negativity),
                p1: Some(p.p1),
                p2: Some(p.p2),
                p4: Some(p.p4),
                c: Some(p.c.re),
                negativity_large_j2: p.negativity_large_j2,
            },
            Err(e) => {
                eprintln!("warning: t1 = {a}: {e}");
                NegativityRowOut { t1: a, negativity: None, p1: None, p2: None, p4: None, c: None, negativity_large_j2: None }
            }
        })
        .collect();
    let mut out = open_output(args.out.output.as_deref())?;
    match args.out.format.unwrap_or(Format::Csv) {
        Format::Json => write_json(&mut out, &rows)?,
        Format::Csv => write_csv(
            &mut out,
            &["t1", "negativity", "p1", "p2", "p4", "c", "negativity_largeJ2"],
            rows.iter().map(|r| {
                let mut v = vec![float(r.t1)];
                v.extend([r.negativity, r.p1, r.p2, r.p4, r.c, r.negativity_large_j2].map(opt_float));
                v
            }),
        )?,
    }
    out.flush()?;
    Ok(())
}

/// Returns whether every check passed.
fn run_verify(args: &OutputArgs) -> anyhow::Result<bool> {
    let reports = verify::run_all();
    let mut out = open_output(args.output.as_deref())?;
    match args.format {
        None => {
            for r in &reports {
                writeln!(out, "{r}")?;
            }
        }
        Some(Format::Json) => write_json(&mut out, &reports)?,
        Some(Format::Csv) => write_csv(
            &mut out,
            &["id", "name", "passed", "detail"],
            reports.iter().map(|r| vec![r.id.to_string(), r.name.to_string(), r.passed.to_string(), r.detail.clone()]),
        )?,
    }
    out.flush()?;
    let failed = reports.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        eprintln!("{failed} of {} checks failed", reports.len());
    }
    Ok(failed == 0)
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<ness_core::Error>() {
        Some(ce) if ce.is_config_error() => 2,
        Some(ce) if ce.is_degeneracy() => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Rates(a) => rates(a).map(|_| true),
        Command::Steady(a) => steady(a).map(|_| true),
        Command::Negativity(a) => negativity(a).map(|_| true),
        Command::ScanBoundary(a) => scan_boundary(a).map(|_| true),
        Command::ScanKplane(a) => scan_kplane(a).map(|_| true),
        Command::ScanNegativity(a) => scan_negativity(a).map(|_| true),
        Command::Verify(a) => run_verify(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        let r: Range = "-1:1:5".parse().unwrap();
        assert_eq!(r.grid(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!("0:1:1".parse::<Range>().is_err());
        assert!("1:0:5".parse::<Range>().is_err());
        assert!("0:1".parse::<Range>().is_err());
        assert!("0:x:3".parse::<Range>().is_err());
        assert_eq!(parse_bracket("0:2"), Ok((0.0, 2.0)));
        assert!(parse_bracket("2:1").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
