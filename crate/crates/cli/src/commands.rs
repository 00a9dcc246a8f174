//! The seven subcommands. Each validates its config blocks, computes,
//! writes deterministic artifacts into the output directory, and drops a
//! run manifest next to them.

use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;

use gauge_rabi_core::analysis::{
    converge_truncation, gauge_deviation, spectrum, sweep, AnalysisOptions, SweepMetric,
    SweepParameter, SweepRequest,
};
use gauge_rabi_core::gauge_models::ModelConfig;
use gauge_rabi_core::multimode::ModeProfile;
use gauge_rabi_core::schrodinger1d::{
    anharmonicity_check, reduce_to_tls, solve_bound_states, TlsParams, ValidityVerdict,
};

use crate::config::{RunConfig, SweepBlock};
use crate::csvio::{fmt_g12, CsvData, CsvTable};
use crate::error::{io_err, CliError};
use crate::manifest::write_manifest;
use crate::svg::{line_plot, Series};

pub struct CommandOutcome {
    pub warnings: usize,
}

pub struct Context {
    pub config: RunConfig,
    pub out_dir: PathBuf,
    pub json_mirror: bool,
    pub analysis: AnalysisOptions,
    pub started: Instant,
}

impl Context {
    fn ensure_out_dir(&self) -> Result<(), CliError> {
        std::fs::create_dir_all(&self.out_dir)
            .map_err(|e| io_err(&format!("creating {}", self.out_dir.display()), e))
    }

    fn write_table(&self, name: &str, table: &CsvTable) -> Result<Vec<PathBuf>, CliError> {
        let mut artifacts = Vec::new();
        let csv_path = self.out_dir.join(format!("{name}.csv"));
        table.write(&csv_path)?;
        artifacts.push(csv_path);
        if self.json_mirror {
            let json_path = self.out_dir.join(format!("{name}.json"));
            let body = serde_json::to_string_pretty(&table.to_json())
                .map_err(|e| CliError::IoData(format!("serializing {name}.json: {e}")))?;
            std::fs::write(&json_path, body + "\n")
                .map_err(|e| io_err(&format!("writing {}", json_path.display()), e))?;
            artifacts.push(json_path);
        }
        Ok(artifacts)
    }

    /// Reduce the configured potential to TLS parameters (three states:
    /// the doublet plus the level that fixes mu).
    fn reduced_tls(&self) -> Result<TlsParams, CliError> {
        let potential = self.config.require_potential()?;
        let grid = self.config.require_grid()?;
        let states = solve_bound_states(potential, grid, 3)?;
        Ok(reduce_to_tls(&states, potential, grid)?)
    }

    fn model_config(&self) -> Result<ModelConfig, CliError> {
        let mode = self.config.require_single_mode()?;
        let gauge = self.config.require_gauge()?;
        let tls = self.reduced_tls()?;
        Ok(ModelConfig {
            tls,
            modes: vec![mode.clone()],
            gauge,
            dipole_approx: true,
        })
    }
}

/// Output of `reduce`: the TLS parameters, the validity verdict against
/// the configured mode coupling, and the `Delta = 2t` consistency residual.
#[derive(Serialize)]
struct ReduceReport {
    tls: TlsParams,
    validity: ValidityVerdict,
    /// Normalized coupling the verdict was computed against (0 when no
    /// mode is configured).
    eta: f64,
    /// `(Delta - 2t) / Delta`, a grid-quality indicator (vanishes for a
    /// symmetric well).
    delta_minus_2t_rel: f64,
}

pub fn cmd_reduce(ctx: &Context) -> Result<CommandOutcome, CliError> {
    ctx.ensure_out_dir()?;
    let tls = ctx.reduced_tls()?;
    let eta = ctx
        .config
        .modes
        .first()
        .map(|m| tls.q * 0.5 * tls.a * m.a0)
        .unwrap_or(0.0);
    let report = ReduceReport {
        tls,
        validity: anharmonicity_check(&tls, eta),
        eta,
        delta_minus_2t_rel: (tls.delta - 2.0 * tls.t) / tls.delta,
    };
    let body = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::IoData(format!("serializing reduce report: {e}")))?;
    println!("{body}");
    let path = ctx.out_dir.join("tls.json");
    std::fs::write(&path, body + "\n").map_err(|e| io_err(&format!("writing {}", path.display()), e))?;
    write_manifest(&ctx.out_dir, "reduce", &ctx.config, &[path], 0, ctx.started)?;
    Ok(CommandOutcome { warnings: 0 })
}

pub fn cmd_spectrum(ctx: &Context) -> Result<CommandOutcome, CliError> {
    ctx.ensure_out_dir()?;
    let model = ctx.model_config()?;
    let k = ctx.config.tolerances.levels;
    let result = spectrum(&model, k)?;
    let table = CsvTable {
        columns: vec!["index".into(), "energy".into()],
        rows: result
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(i, e)| vec![fmt_g12(i as f64), fmt_g12(*e)])
            .collect(),
    };
    let artifacts = ctx.write_table("spectrum", &table)?;
    write_manifest(&ctx.out_dir, "spectrum", &ctx.config, &artifacts, 0, ctx.started)?;
    println!(
        "spectrum: {} levels at fock = {} written to {}",
        k,
        result.n_used,
        artifacts[0].display()
    );
    Ok(CommandOutcome { warnings: 0 })
}

pub fn cmd_converge(ctx: &Context) -> Result<CommandOutcome, CliError> {
    ctx.ensure_out_dir()?;
    let model = ctx.model_config()?;
    let k = ctx.config.tolerances.levels;
    let tol = ctx.config.tolerances.convergence;
    let run = converge_truncation(&model, k, tol, &ctx.analysis)?;

    let mut columns = vec!["n".to_string(), "residual".to_string()];
    columns.extend((0..k).map(|i| format!("E_{i}")));
    let rows = run
        .history
        .iter()
        .map(|step| {
            let mut row = vec![fmt_g12(step.n_fock as f64), fmt_g12(step.residual)];
            row.extend(step.eigenvalues.iter().map(|e| fmt_g12(*e)));
            row
        })
        .collect();
    let table = CsvTable { columns, rows };
    let artifacts = ctx.write_table("converge", &table)?;

    let warnings = usize::from(!run.spectrum.converged);
    if warnings > 0 {
        eprintln!(
            "warning: ladder stopped at fock = {} with residual {} (dimension cap {})",
            run.spectrum.n_used,
            fmt_g12(run.spectrum.residual),
            ctx.analysis.dim_cap
        );
    }
    write_manifest(&ctx.out_dir, "converge", &ctx.config, &artifacts, warnings, ctx.started)?;
    println!(
        "converge: {} at fock = {}, residual {}",
        if run.spectrum.converged { "converged" } else { "NOT converged" },
        run.spectrum.n_used,
        fmt_g12(run.spectrum.residual)
    );
    Ok(CommandOutcome { warnings })
}

pub fn cmd_gauge_check(ctx: &Context) -> Result<CommandOutcome, CliError> {
    ctx.ensure_out_dir()?;
    let mode = ctx.config.require_single_mode()?.clone();
    let block = ctx.config.require_sweep()?;
    if block.parameter != SweepParameter::Eta {
        return Err(CliError::Config(
            "gauge-check sweeps the coupling: sweep.parameter must be `eta`".into(),
        ));
    }
    let tls = ctx.reduced_tls()?;
    let rows = gauge_deviation(
        &tls,
        &mode,
        &block.grid,
        ctx.config.tolerances.levels,
        ctx.config.tolerances.convergence,
        &ctx.analysis,
    )?;
    let table = CsvTable {
        columns: vec![
            "eta".into(),
            "dev_gauge_invariant".into(),
            "dev_linearized".into(),
        ],
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    fmt_g12(r.eta),
                    fmt_g12(r.dev_gauge_invariant),
                    fmt_g12(r.dev_linearized),
                ]
            })
            .collect(),
    };
    let artifacts = ctx.write_table("gauge_check", &table)?;
    write_manifest(&ctx.out_dir, "gauge-check", &ctx.config, &artifacts, 0, ctx.started)?;
    println!("gauge-check: {} couplings written to {}", rows.len(), artifacts[0].display());
    Ok(CommandOutcome { warnings: 0 })
}

pub fn cmd_cutoff(ctx: &Context) -> Result<CommandOutcome, CliError> {
    ctx.ensure_out_dir()?;
    let mode = ctx.config.require_single_mode()?.clone();
    let block = ctx.config.require_sweep()?;
    if block.parameter != SweepParameter::KMode {
        return Err(CliError::Config(
            "cutoff scans the mode wavevector: sweep.parameter must be `k_mode`".into(),
        ));
    }
    match mode.profile {
        Some(ModeProfile::Cosine { .. }) => {}
        _ => {
            return Err(CliError::Config(
                "cutoff needs a cosine profile on the mode".into(),
            ))
        }
    }
    let tls = ctx.reduced_tls()?;
    let request = SweepRequest {
        base: ModelConfig {
            tls,
            modes: vec![mode],
            gauge: ctx
                .config
                .gauge
                .unwrap_or(gauge_rabi_core::gauge_models::Gauge::CoulombGi),
            dipole_approx: false,
        },
        parameter: SweepParameter::KMode,
        grid: block.grid.clone(),
        metric: SweepMetric::Coupling,
        k: ctx.config.tolerances.levels,
        tol: ctx.config.tolerances.convergence,
    };
    let result = sweep(&request, &ctx.analysis)?;
    let warnings = result.error_count();
    if warnings > 0 {
        return Err(CliError::Numeric(gauge_rabi_core::Error::invalid(
            "cutoff",
            format!("{warnings} wavevector points failed"),
        )));
    }
    // Fixed two-column format: header `k,eta_k`.
    let table = CsvTable {
        columns: vec!["k".into(), "eta_k".into()],
        rows: result
            .rows
            .iter()
            .map(|r| vec![fmt_g12(r.values[0]), fmt_g12(r.values[1])])
            .collect(),
    };
    let artifacts = ctx.write_table("cutoff", &table)?;
    write_manifest(&ctx.out_dir, "cutoff", &ctx.config, &artifacts, 0, ctx.started)?;
    println!("cutoff: {} wavevectors written to {}", table.rows.len(), artifacts[0].display());
    Ok(CommandOutcome { warnings: 0 })
}

pub fn cmd_sweep(ctx: &Context) -> Result<CommandOutcome, CliError> {
    ctx.ensure_out_dir()?;
    let block: &SweepBlock = ctx.config.require_sweep()?;
    let model = ctx.model_config()?;
    let request = SweepRequest {
        base: model,
        parameter: block.parameter,
        grid: block.grid.clone(),
        metric: block.metric,
        k: ctx.config.tolerances.levels,
        tol: ctx.config.tolerances.convergence,
    };
    let result = sweep(&request, &ctx.analysis)?;

    let mut columns = result.columns.clone();
    columns.push("status".into());
    let rows = result
        .rows
        .iter()
        .map(|r| {
            let mut cells: Vec<String> = r.values.iter().map(|v| fmt_g12(*v)).collect();
            cells.push(match r.error {
                None => "ok".to_string(),
                Some(code) => format!("error:{code}"),
            });
            cells
        })
        .collect();
    let table = CsvTable { columns, rows };
    let artifacts = ctx.write_table("sweep", &table)?;

    let warnings = result.error_count();
    if warnings > 0 {
        eprintln!("warning: {warnings} of {} sweep points failed", result.rows.len());
    }
    write_manifest(&ctx.out_dir, "sweep", &ctx.config, &artifacts, warnings, ctx.started)?;
    println!("sweep: {} rows written to {}", table.rows.len(), artifacts[0].display());
    Ok(CommandOutcome { warnings })
}

pub fn cmd_plot(ctx: &Context) -> Result<CommandOutcome, CliError> {
    ctx.ensure_out_dir()?;
    let block = ctx.config.require_plot()?;
    let data = CsvData::read(&block.csv)?;
    let xi = data.column_index(&block.x)?;
    let mut series = Vec::new();
    for name in &block.y {
        let yi = data.column_index(name)?;
        series.push(Series {
            name,
            ys: data.rows.iter().map(|r| r[yi]).collect(),
        });
    }
    let xs: Vec<f64> = data.rows.iter().map(|r| r[xi]).collect();
    let svg = line_plot(&block.x, &xs, &series)
        .ok_or_else(|| CliError::IoData("no finite data points to plot".into()))?;
    let path = ctx.out_dir.join("plot.svg");
    std::fs::write(&path, svg).map_err(|e| io_err(&format!("writing {}", path.display()), e))?;
    write_manifest(&ctx.out_dir, "plot", &ctx.config, &[path.clone()], 0, ctx.started)?;
    println!("plot: {}", path.display());
    Ok(CommandOutcome { warnings: 0 })
}
