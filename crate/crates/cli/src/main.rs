use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use indist_cli::figures::{self, log_grid, Output, FIGURE_REL_TOL};
use indist_cli::table::{fmt_num, Table};
use indist_core::{
    apply_gaussian_filter, default_grid, heralded_indistinguishability, hom_curve, hom_curve_filtered, hom_curve_from,
    k_analytic, k_filtered_numeric, k_filtered_numeric_at, k_numeric, tau_grid, CurveMeta, Error, Family, FilterSpec,
    Method, MixedPhotonState, QuadratureConfig, SpdcSetup,
};

#[derive(Parser)]
#[command(
    name = "indist",
    version,
    about = "Single-photon indistinguishability, HOM dips and spectral filtering"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// K(0) of a mixed single-photon state, optionally behind a filter
    Purity(PurityArgs),
    /// HOM curve K, C_AA, C_AB against delay
    HomCurve(HomArgs),
    /// Filtered K' and transmission over a log grid of filter ratios R
    FilterSweep(SweepArgs),
    /// Heralded SPDC photon in physical units
    Spdc(SpdcArgs),
    /// Figure tables: visibility against eta, filtered dips, filtered K against R
    Figure(FigureArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Lorentzian,
    Gaussian,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Analytic,
    Numeric,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Figure {
    Fig2,
    Fig3a,
    Fig3b,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: Model,
    /// Lorentzian intrinsic width Γ, rad/ps
    #[arg(long)]
    gamma: Option<f64>,
    /// Lorentzian extrinsic HWHM Γ′, rad/ps
    #[arg(long)]
    gamma_prime: Option<f64>,
    /// Gaussian intrinsic width σ_g, rad/ps
    #[arg(long)]
    sigma_g: Option<f64>,
    /// Gaussian extrinsic width σ_f, rad/ps
    #[arg(long)]
    sigma_f: Option<f64>,
}

#[derive(Args)]
struct FilterArgs {
    /// Gaussian filter width σ_F, rad/ps
    #[arg(long)]
    sigma_fcap: Option<f64>,
    /// Lorentzian filter HWHM Γ_F, rad/ps
    #[arg(long)]
    gamma_f: Option<f64>,
}

#[derive(Args)]
struct QuadArgs {
    /// Relative quadrature tolerance
    #[arg(long)]
    rel_tol: Option<f64>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct PurityArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    filter: FilterArgs,
    #[arg(long, value_enum, default_value = "analytic")]
    method: MethodArg,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct HomArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    filter: FilterArgs,
    /// Delay grid start, ps [default: -8 lifetimes]
    #[arg(long)]
    tau_min: Option<f64>,
    /// Delay grid end, ps [default: 8 lifetimes]
    #[arg(long)]
    tau_max: Option<f64>,
    #[arg(long, default_value_t = 201)]
    tau_steps: usize,
    #[arg(long, value_enum, default_value = "analytic")]
    method: MethodArg,
    #[command(flatten)]
    quad: QuadArgs,
    /// Output CSV; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 0.02)]
    r_min: f64,
    #[arg(long, default_value_t = 1000.0)]
    r_max: f64,
    #[arg(long, default_value_t = 25)]
    r_steps: usize,
    /// Defaults to analytic where a closed form exists, numeric otherwise
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[command(flatten)]
    quad: QuadArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SpdcArgs {
    /// Pump intensity FWHM, fs
    #[arg(long)]
    pump_fs: f64,
    /// Signal center wavelength, nm
    #[arg(long, default_value_t = 800.0)]
    center_nm: f64,
    /// Filter FWHM, nm
    #[arg(long)]
    filter_nm: Option<f64>,
    /// σ_f/σ_g
    #[arg(long)]
    eta: f64,
    /// CSV of K' against eta
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct FigureArgs {
    #[arg(value_enum)]
    which: Figure,
    #[arg(long, value_enum, default_value = "analytic")]
    method: MethodArg,
    #[command(flatten)]
    quad: QuadArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Bad flag values; exit code 2.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// Every requested point failed; exit code 3.
#[derive(Debug)]
struct TotalFailure;

impl fmt::Display for TotalFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("quadrature failed at every requested point")
    }
}

impl std::error::Error for TotalFailure {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn positive(flag: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(usage(format!("invalid value for --{flag}: {v} (must be positive)")))
    }
}

fn nonnegative(flag: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(usage(format!("invalid value for --{flag}: {v} (must be nonnegative)")))
    }
}

impl ModelArgs {
    fn state(&self) -> Result<MixedPhotonState> {
        let reject = |flag: &str, set: bool| -> Result<()> {
            if set {
                return Err(usage(format!(
                    "--{flag} does not apply to --model {}",
                    self.model_name()
                )));
            }
            Ok(())
        };
        let state = match self.model {
            Model::Lorentzian => {
                reject("sigma-g", self.sigma_g.is_some())?;
                reject("sigma-f", self.sigma_f.is_some())?;
                let g = positive(
                    "gamma",
                    self.gamma.ok_or_else(|| usage("--model lorentzian requires --gamma"))?,
                )?;
                let gp = nonnegative("gamma-prime", self.gamma_prime.unwrap_or(0.0))?;
                MixedPhotonState::lorentzian(g, gp, 0.0)
            }
            Model::Gaussian => {
                reject("gamma", self.gamma.is_some())?;
                reject("gamma-prime", self.gamma_prime.is_some())?;
                let sg = positive(
                    "sigma-g",
                    self.sigma_g
                        .ok_or_else(|| usage("--model gaussian requires --sigma-g"))?,
                )?;
                let sf = nonnegative("sigma-f", self.sigma_f.unwrap_or(0.0))?;
                MixedPhotonState::gaussian(sg, sf, 0.0)
            }
        };
        Ok(state?)
    }

    fn model_name(&self) -> &'static str {
        match self.model {
            Model::Lorentzian => "lorentzian",
            Model::Gaussian => "gaussian",
        }
    }
}

impl FilterArgs {
    fn filter(&self) -> Result<Option<FilterSpec>> {
        match (self.sigma_fcap, self.gamma_f) {
            (Some(_), Some(_)) => Err(usage("--sigma-fcap and --gamma-f are mutually exclusive")),
            (Some(s), None) => Ok(Some(FilterSpec::gaussian(positive("sigma-fcap", s)?)?)),
            (None, Some(g)) => Ok(Some(FilterSpec::lorentzian(positive("gamma-f", g)?)?)),
            (None, None) => Ok(None),
        }
    }
}

impl QuadArgs {
    fn config(&self, default_rel_tol: f64) -> Result<QuadratureConfig> {
        let rel = positive("rel-tol", self.rel_tol.unwrap_or(default_rel_tol))?;
        Ok(QuadratureConfig::default().with_rel_tol(rel))
    }
}

fn methods(m: MethodArg) -> Vec<Method> {
    match m {
        MethodArg::Analytic => vec![Method::Analytic],
        MethodArg::Numeric => vec![Method::Numeric],
        MethodArg::Both => vec![Method::Analytic, Method::Numeric],
    }
}

fn model_params(t: &mut Table, state: &MixedPhotonState) {
    t.param("model", state.describe())
        .param("eta", state.eta())
        .param("total_width", state.total_width());
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn finish(out: &Option<PathBuf>, result: Output) -> Result<()> {
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    emit(out, &result.table.to_csv())?;
    if result.total_failure() {
        return Err(TotalFailure.into());
    }
    Ok(())
}

fn cmd_purity(args: &PurityArgs) -> Result<()> {
    let state = args.model.state()?;
    let cfg = args.quad.config(QuadratureConfig::default().rel_tol)?;
    let filter = args.filter.filter()?;
    println!("model: {}", state.describe());
    println!("eta: {}", fmt_num(state.eta()));
    println!("total_width: {}", fmt_num(state.total_width()));
    for method in methods(args.method) {
        match method {
            Method::Analytic => println!("K_analytic: {:.9}", k_analytic(&state, 0.0).value),
            Method::Numeric => {
                let k = k_numeric(&state, 0.0, &cfg)?;
                println!("K_numeric: {:.9} (error estimate {:.1e})", k.value, k.error_estimate);
            }
        }
    }
    if let Some(f) = filter {
        println!(
            "filter: {} width {} (R = {})",
            f.kind(),
            fmt_num(f.width()),
            fmt_num(f.ratio(state.lineshape()))
        );
        for method in methods(args.method) {
            match method {
                Method::Analytic => match apply_gaussian_filter(&state, &f) {
                    Ok(r) => {
                        println!("K_filtered_analytic: {:.9}", r.k_filtered);
                        println!("transmission_analytic: {:.9}", r.transmission);
                    }
                    Err(Error::FamilyMismatch(_)) if args.method == MethodArg::Both => {}
                    Err(Error::FamilyMismatch(m)) => {
                        return Err(usage(format!("{m}; use --method numeric")));
                    }
                    Err(e) => return Err(e.into()),
                },
                Method::Numeric => {
                    let r = k_filtered_numeric(&state, &f, &cfg)?;
                    println!(
                        "K_filtered_numeric: {:.9} (error estimate {:.1e})",
                        r.k_filtered, r.error_estimate
                    );
                    println!("transmission_numeric: {:.9}", r.transmission);
                }
            }
        }
    }
    Ok(())
}

fn cmd_hom_curve(args: &HomArgs) -> Result<()> {
    let state = args.model.state()?;
    let cfg = args.quad.config(QuadratureConfig::default().rel_tol)?;
    let filter = args.filter.filter()?;
    let gaussian_pair =
        filter.is_some_and(|f| state.family() == Family::Gaussian && f.kind() == indist_core::FilterKind::Gaussian);
    let lifetime = match (&filter, gaussian_pair) {
        (Some(f), true) => 1.0 / apply_gaussian_filter(&state, f)?.filtered_intrinsic_width.unwrap(),
        _ => state.lifetime(),
    };
    let taus = match (args.tau_min, args.tau_max) {
        (None, None) if args.tau_steps == 201 && filter.is_none() => default_grid(&state),
        (lo, hi) => tau_grid(
            lo.unwrap_or(-8.0 * lifetime),
            hi.unwrap_or(8.0 * lifetime),
            args.tau_steps,
        )
        .map_err(|_| usage("--tau-min must be below --tau-max and --tau-steps at least 2"))?,
    };

    let curve_for = |method: Method| -> Result<indist_core::HomCurve> {
        Ok(match (&filter, method) {
            (None, m) => hom_curve(&state, &taus, m, &cfg)?,
            (Some(f), m) if gaussian_pair => hom_curve_filtered(&state, f, &taus, m, &cfg)?,
            (Some(_), Method::Analytic) => {
                return Err(usage(
                    "closed-form filtered curves need --model gaussian with --sigma-fcap; use --method numeric",
                ))
            }
            (Some(f), Method::Numeric) => {
                let meta = CurveMeta {
                    model: format!("{} behind {} filter (width={})", state.describe(), f.kind(), f.width()),
                    method: Method::Numeric,
                    lifetime,
                    params: Vec::new(),
                };
                hom_curve_from(&taus, meta, |tau| {
                    Ok(k_filtered_numeric_at(&state, f, tau, &cfg)?.k_filtered)
                })?
            }
        })
    };

    let ms = methods(args.method);
    let columns: &[&str] = if ms.len() == 2 {
        &["tau", "K", "C_AA", "C_AB", "K_numeric", "C_AA_numeric", "C_AB_numeric"]
    } else {
        &["tau", "K", "C_AA", "C_AB"]
    };
    let mut t = Table::new("hom-curve", columns);
    model_params(&mut t, &state);
    if let Some(f) = &filter {
        t.param("filter", format!("{} width {}", f.kind(), f.width()));
    }
    t.param(
        "method",
        if ms.len() == 2 {
            "both".to_string()
        } else {
            ms[0].to_string()
        },
    );
    t.param("rel_tol", cfg.rel_tol);
    t.note("C_AA = (1 + K)/4, C_AB = 1 - 2 C_AA");

    let curves = ms.iter().map(|&m| curve_for(m)).collect::<Result<Vec<_>>>()?;
    if let Some(c) = curves.iter().find_map(|c| c.transmission) {
        t.param("transmission", fmt_num(c));
    }
    let mut result = Output {
        table: t,
        warnings: Vec::new(),
        points: 0,
        failures: 0,
    };
    for c in &curves {
        result.absorb_curve(&c.meta.method.to_string(), c);
    }
    for (i, &tau) in taus.iter().enumerate() {
        let mut row = vec![tau];
        for c in &curves {
            row.extend([c.k[i], c.c_aa[i], c.c_ab[i]]);
        }
        result.table.push(row);
    }
    finish(&args.out, result)
}

fn cmd_filter_sweep(args: &SweepArgs) -> Result<()> {
    let state = args.model.state()?;
    positive("r-min", args.r_min)?;
    positive("r-max", args.r_max)?;
    if args.r_min >= args.r_max || args.r_steps < 2 {
        return Err(usage("--r-min must be below --r-max and --r-steps at least 2"));
    }
    let default_method = match state.family() {
        Family::Gaussian => MethodArg::Analytic,
        Family::Lorentzian => MethodArg::Numeric,
    };
    let method = args.method.unwrap_or(default_method);
    if state.family() == Family::Lorentzian && method != MethodArg::Numeric {
        return Err(usage("no closed form for a lorentzian filter; use --method numeric"));
    }
    let cfg = args.quad.config(FIGURE_REL_TOL)?;
    let ms = methods(method);
    let columns: &[&str] = if ms.len() == 2 {
        &[
            "R",
            "K_filtered",
            "transmission",
            "K_filtered_numeric",
            "transmission_numeric",
        ]
    } else {
        &["R", "K_filtered", "transmission"]
    };
    let mut t = Table::new("filter-sweep", columns);
    model_params(&mut t, &state);
    t.param("filter", state.family());
    t.param(
        "method",
        if ms.len() == 2 {
            "both".to_string()
        } else {
            ms[0].to_string()
        },
    );
    t.param("rel_tol", cfg.rel_tol);
    t.note(match state.family() {
        Family::Gaussian => "R = sigma_F/sigma_g",
        Family::Lorentzian => "R = 2 Gamma_F/Gamma, Gamma_F the HWHM of |F|^2",
    });
    let mut result = Output {
        table: t,
        warnings: Vec::new(),
        points: 0,
        failures: 0,
    };
    for r in log_grid(args.r_min, args.r_max, args.r_steps) {
        let filter = FilterSpec::from_ratio(&state, r)?;
        let mut row = vec![r];
        for &m in &ms {
            let value = match m {
                Method::Analytic => apply_gaussian_filter(&state, &filter),
                Method::Numeric => k_filtered_numeric(&state, &filter, &cfg),
            };
            let (k, c) = result
                .cell(|| format!("R={r}"), value)?
                .map_or((f64::NAN, f64::NAN), |x| (x.k_filtered, x.transmission));
            row.extend([k, c]);
        }
        result.table.push(row);
    }
    finish(&args.out, result)
}

fn cmd_spdc(args: &SpdcArgs) -> Result<()> {
    positive("pump-fs", args.pump_fs)?;
    positive("center-nm", args.center_nm)?;
    nonnegative("eta", args.eta)?;
    let mut setup = SpdcSetup::new(args.pump_fs, args.eta)?.with_signal_center(args.center_nm)?;
    if let Some(nm) = args.filter_nm {
        setup = setup.with_filter(positive("filter-nm", nm)?)?;
    }
    let sg = setup.sigma_g()?;
    println!("pump: {} fs -> sigma_g = {:.6} rad/ps", args.pump_fs, sg);
    if let Some(sf) = setup.filter_sigma()? {
        println!(
            "filter: {} nm at {} nm -> sigma_F = {:.6} rad/ps (R = {:.6})",
            args.filter_nm.unwrap(),
            args.center_nm,
            sf,
            sf / sg
        );
        println!("K_filtered(eta -> inf): {:.6}", sg / sg.hypot(sf));
    }
    let r = heralded_indistinguishability(&setup)?;
    println!("eta: {}", args.eta);
    println!("K_filtered: {:.6}", r.k_filtered);
    println!("transmission: {:.6}", r.transmission);

    if args.out.is_some() {
        let mut t = Table::new("spdc", &["eta", "K_filtered", "transmission"]);
        t.param("pump_fwhm_fs", args.pump_fs)
            .param("signal_center_nm", args.center_nm);
        t.param(
            "filter_fwhm_nm",
            args.filter_nm.map_or("none".to_string(), |f| f.to_string()),
        );
        t.param("sigma_g", fmt_num(sg));
        let etas = std::iter::once(0.0).chain(log_grid(0.1, 100.0, 31));
        for eta in etas {
            let r = heralded_indistinguishability(&SpdcSetup { eta, ..setup })?;
            t.push(vec![eta, r.k_filtered, r.transmission]);
        }
        emit(&args.out, &t.to_csv())?;
    }
    Ok(())
}

fn cmd_figure(args: &FigureArgs) -> Result<()> {
    let cfg = args.quad.config(FIGURE_REL_TOL)?;
    let method = match args.method {
        MethodArg::Analytic => Method::Analytic,
        MethodArg::Numeric => Method::Numeric,
        MethodArg::Both => return Err(usage("--method both is not available for figures")),
    };
    let result = match args.which {
        Figure::Fig2 => figures::fig2(method, &cfg)?,
        Figure::Fig3a => figures::fig3a(method, &cfg)?,
        Figure::Fig3b => {
            if args.method != MethodArg::Analytic {
                eprintln!("warning: fig3b fixes its methods (gaussian closed form, lorentzian quadrature)");
            }
            figures::fig3b(&cfg)?
        }
    };
    finish(&args.out, result)
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Purity(a) => cmd_purity(a),
        Command::HomCurve(a) => cmd_hom_curve(a),
        Command::FilterSweep(a) => cmd_filter_sweep(a),
        Command::Spdc(a) => cmd_spdc(a),
        Command::Figure(a) => cmd_figure(a),
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    if e.downcast_ref::<TotalFailure>().is_some() {
        return 3;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::NonConvergence { .. }) => 3,
        Some(
            Error::InvalidParameter { .. }
            | Error::FamilyMismatch(_)
            | Error::UnequalIntrinsicWidth { .. }
            | Error::InvalidGrid,
        ) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
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
    fn exit_codes() {
        assert_eq!(exit_code(&usage("--gamma")), 2);
        assert_eq!(exit_code(&TotalFailure.into()), 3);
        let nc = Error::NonConvergence {
            value: 0.0,
            error_estimate: 1.0,
            subdivisions: 16384,
        };
        assert_eq!(exit_code(&anyhow::Error::from(nc)), 3);
        let bad = Error::InvalidParameter {
            name: "gamma",
            value: -1.0,
            reason: "must be positive",
        };
        assert_eq!(exit_code(&anyhow::Error::from(bad)), 2);
        assert_eq!(exit_code(&anyhow::anyhow!("io")), 1);
    }
}
