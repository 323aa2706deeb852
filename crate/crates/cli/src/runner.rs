//! Command execution and report assembly.
//!
//! Every run serializes to a JSON document with top-level keys `config`,
//! `bandwidths`, `results`, `diagnostics` and `version`, carrying the
//! exact bandwidths, branch and seed needed to reproduce it. CSV output
//! is available for density curves and Monte Carlo tables.

use serde::Serialize;
use serde_json::{json, Value};

use resdens::bandwidth::{
    amse_proxy, assumption_diagnostics, optimal_b0, rate_regime, rn_remainder, AssumptionFlags,
    BandwidthPlan, BandwidthRule,
};
use resdens::density::{default_grid, feasible_density, DensityCurve};
use resdens::kernel::KernelSpec;
use resdens::regression::{loo_nadaraya_watson, trim_mask, TrimBox};
use resdens::simulation::{
    emit_density_curves, normality_diagnostic, run_monte_carlo_with, CurveSet, DiagnosticReport,
    McReport,
};
use resdens::stat::sample_sd;
use resdens::Error as CoreError;

use crate::args::{
    Cli, Command, DiagnoseArgs, EstimateArgs, OutputFormat, RatesArgs, SimulateArgs,
};
use crate::csv_io::{curves_to_csv, load_csv, table_to_csv};
use crate::error::{CliError, Result};

#[derive(Debug, Serialize)]
struct Versions {
    #[serde(rename = "resdens-cli")]
    cli: &'static str,
    resdens: &'static str,
}

const VERSIONS: Versions = Versions {
    cli: env!("CARGO_PKG_VERSION"),
    resdens: resdens::VERSION,
};

/// Structured outcome of an `estimate` run.
#[derive(Debug, Serialize)]
pub struct EstimateOutcome {
    pub plan: BandwidthPlan,
    pub curve: DensityCurve,
    pub n: usize,
    pub d: usize,
    pub trimmed_in: usize,
    pub defined_fits: usize,
    pub trimmed_fraction: f64,
    pub sigma_residuals: f64,
    pub flags: AssumptionFlags,
}

/// Denominator order commonly used for a pilot regression fit.
fn pilot_bandwidth(n: usize, d: usize) -> f64 {
    (n as f64).powf(-1.0 / (d as f64 + 4.0))
}

pub fn run_estimate(args: &EstimateArgs) -> Result<EstimateOutcome> {
    let k = KernelSpec::biweight();
    let data = load_csv(&args.input)?;
    let n = data.n();
    let d = data.dim();
    if !args.delta.is_finite() || args.delta < 0.0 || args.delta >= 0.5 {
        return Err(CliError::Usage(format!(
            "--delta must lie in [0, 0.5), got {}",
            args.delta
        )));
    }

    let plan = match (args.b0, args.b1) {
        (Some(b0), Some(b1)) => BandwidthPlan::explicit(b0, b1)?,
        _ => {
            // bootstrap: pilot fit -> residual sigma -> rule-of-thumb b1
            // -> formula b0
            let pilot = loo_nadaraya_watson(&data, pilot_bandwidth(n, d), &k)?;
            let usable: Vec<f64> = pilot
                .residuals
                .iter()
                .zip(&pilot.defined)
                .filter(|(_, def)| **def)
                .map(|(r, _)| *r)
                .collect();
            if usable.len() < 2 {
                return Err(CoreError::EmptyTrimSet.into());
            }
            BandwidthPlan::from_formula(sample_sd(&usable), n, d, args.c0)?
        }
    };

    let fit = loo_nadaraya_watson(&data, plan.b0, &k)?;
    let bx = TrimBox::from_data_margin(&data, args.delta)?;
    let mask = trim_mask(&data, &bx)?;
    let trimmed_in = mask.iter().filter(|m| **m).count();

    let usable_residuals: Vec<f64> = fit
        .residuals
        .iter()
        .zip(mask.iter().zip(&fit.defined))
        .filter(|(_, (m, def))| **m && **def)
        .map(|(r, _)| *r)
        .collect();
    if usable_residuals.is_empty() {
        return Err(CoreError::EmptyTrimSet.into());
    }
    let sigma_residuals = sample_sd(&usable_residuals);

    let e_points = match &args.points {
        Some(points) if !points.is_empty() => points.clone(),
        _ => default_grid(&usable_residuals, plan.b1, &k, args.grid.max(2))?,
    };
    let curve = feasible_density(&fit, &mask, &e_points, plan.b1, &k)?;

    Ok(EstimateOutcome {
        flags: assumption_diagnostics(n, d, plan.b0, plan.b1),
        trimmed_fraction: trimmed_in as f64 / n as f64,
        defined_fits: fit.defined_count(),
        trimmed_in,
        n,
        d,
        sigma_residuals,
        plan,
        curve,
    })
}

/// Structured outcome of a `simulate` run.
#[derive(Debug, Serialize)]
pub struct SimulateOutcome {
    pub plan: BandwidthPlan,
    pub report: McReport,
    pub curves: Option<CurveSet>,
    pub flags: AssumptionFlags,
}

pub fn run_simulate(args: &SimulateArgs) -> Result<SimulateOutcome> {
    let model = args.model.into();
    let report = run_monte_carlo_with(
        model,
        args.n,
        args.reps,
        args.c0,
        &args.points,
        args.seed,
        args.mode.into(),
        args.sigma_source.into(),
    )?;

    let curves = match args.curves {
        Some(grid_size) => {
            if grid_size < 2 {
                return Err(CliError::Usage(format!(
                    "--curves needs a grid of at least 2 points, got {grid_size}"
                )));
            }
            // the errors are standard normal; four SDs cover the support
            let grid: Vec<f64> = (0..grid_size)
                .map(|i| -4.0 + 8.0 * i as f64 / (grid_size - 1) as f64)
                .collect();
            Some(emit_density_curves(
                model, args.n, args.reps, args.c0, &grid, args.seed,
            )?)
        }
        None => None,
    };

    let d = model.dim();
    let (_, branch) = optimal_b0(args.n, d, report.b1_used, args.c0)?;
    let plan = BandwidthPlan {
        b0: report.b0_used,
        b1: report.b1_used,
        c0: args.c0,
        rule: BandwidthRule::SilvermanB1FormulaB0,
        branch: Some(branch),
        sigma: None,
    };
    Ok(SimulateOutcome {
        flags: assumption_diagnostics(args.n, d, report.b0_used, report.b1_used),
        plan,
        report,
        curves,
    })
}

/// Structured outcome of a `rates` run.
#[derive(Debug, Serialize)]
pub struct RatesOutcome {
    pub plan: BandwidthPlan,
    pub regime: resdens::RateRegime,
    pub amse_proxy: f64,
    pub rn_remainder: f64,
    pub flags: AssumptionFlags,
}

pub fn run_rates(args: &RatesArgs) -> Result<RatesOutcome> {
    if args.d == 0 {
        return Err(CliError::Usage("--d must be at least 1".into()));
    }
    let plan = match (args.b0, args.b1) {
        (Some(b0), Some(b1)) => BandwidthPlan::explicit(b0, b1)?,
        _ => BandwidthPlan::from_formula(args.sigma, args.n, args.d, args.c0)?,
    };
    Ok(RatesOutcome {
        regime: rate_regime(args.d),
        amse_proxy: amse_proxy(args.n, plan.b1),
        rn_remainder: rn_remainder(args.n, args.d, plan.b0, plan.b1),
        flags: assumption_diagnostics(args.n, args.d, plan.b0, plan.b1),
        plan,
    })
}

/// Structured outcome of a `diagnose` run.
#[derive(Debug, Serialize)]
pub struct DiagnoseOutcome {
    pub plan: BandwidthPlan,
    pub report: DiagnosticReport,
    pub flags: AssumptionFlags,
}

pub fn run_diagnose(args: &DiagnoseArgs) -> Result<DiagnoseOutcome> {
    let model: resdens::Model = args.model.into();
    let d = model.dim();
    let nf = args.n as f64;
    // normality-regime defaults: rule-of-thumb order for the density
    // step, undersmoothing order for the regression step
    let b1 = args.b1.unwrap_or(1.06 * nf.powf(-0.2));
    let b0 = args
        .b0
        .unwrap_or_else(|| nf.powf(-8.0 / (5.0 * (2.0 * d as f64 + 4.0))));
    let plan = BandwidthPlan::explicit(b0, b1)?;
    let report = normality_diagnostic(model, args.n, args.reps, args.e, b0, b1, args.seed)?;
    Ok(DiagnoseOutcome {
        flags: assumption_diagnostics(args.n, d, b0, b1),
        plan,
        report,
    })
}

fn envelope(config: Value, plan: &BandwidthPlan, results: Value, diagnostics: Value) -> Value {
    json!({
        "config": config,
        "bandwidths": plan,
        "results": results,
        "diagnostics": diagnostics,
        "version": VERSIONS,
    })
}

/// Execute a parsed invocation, returning the serialized artifact.
pub fn execute(cli: &Cli) -> Result<String> {
    match (&cli.command, cli.format) {
        (Command::Estimate(args), OutputFormat::Json) => {
            let out = run_estimate(args)?;
            let report = envelope(
                json!({"estimate": args}),
                &out.plan,
                json!({"curve": out.curve}),
                json!({
                    "assumptions": out.flags,
                    "n": out.n,
                    "d": out.d,
                    "trimmed_in": out.trimmed_in,
                    "trimmed_fraction": out.trimmed_fraction,
                    "defined_fits": out.defined_fits,
                    "sigma_residuals": out.sigma_residuals,
                }),
            );
            Ok(serde_json::to_string_pretty(&report)?)
        }
        (Command::Estimate(args), OutputFormat::Csv) => {
            let out = run_estimate(args)?;
            Ok(curves_to_csv(
                &["f_hat"],
                &out.curve.grid,
                &[&out.curve.values],
            ))
        }
        (Command::Simulate(args), OutputFormat::Json) => {
            let out = run_simulate(args)?;
            let report = envelope(
                json!({"simulate": args}),
                &out.plan,
                json!({"table": out.report, "curves": out.curves}),
                json!({"assumptions": out.flags}),
            );
            Ok(serde_json::to_string_pretty(&report)?)
        }
        (Command::Simulate(args), OutputFormat::Csv) => {
            let out = run_simulate(args)?;
            match &out.curves {
                Some(curves) => Ok(curves_to_csv(
                    &["f_hat", "f_tilde", "f_true"],
                    &curves.grid,
                    &[
                        &curves.mean_feasible,
                        &curves.mean_oracle,
                        &curves.true_density,
                    ],
                )),
                None => Ok(table_to_csv(&out.report.rows)),
            }
        }
        (Command::Rates(args), OutputFormat::Json) => {
            let out = run_rates(args)?;
            let report = envelope(
                json!({"rates": args}),
                &out.plan,
                json!({
                    "regime": out.regime,
                    "amse_proxy": out.amse_proxy,
                    "rn_remainder": out.rn_remainder,
                }),
                json!({"assumptions": out.flags}),
            );
            Ok(serde_json::to_string_pretty(&report)?)
        }
        (Command::Diagnose(args), OutputFormat::Json) => {
            let out = run_diagnose(args)?;
            let report = envelope(
                json!({"diagnose": args}),
                &out.plan,
                json!({"normality": out.report}),
                json!({"assumptions": out.flags}),
            );
            Ok(serde_json::to_string_pretty(&report)?)
        }
        (Command::Rates(_) | Command::Diagnose(_), OutputFormat::Csv) => Err(CliError::Usage(
            "CSV output is only available for curves and tables (estimate, simulate)".into(),
        )),
    }
}

/// Write the artifact to the configured destination.
pub fn deliver(cli: &Cli, artifact: &str) -> Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, artifact).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            println!("{artifact}");
            Ok(())
        }
    }
}
