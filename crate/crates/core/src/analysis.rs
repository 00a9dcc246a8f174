//! Spectral computations, Fock-truncation convergence control,
//! gauge-deviation metrics, and parameter sweeps.
//!
//! Cross-gauge comparisons always converge each gauge's truncation
//! independently; sharing one `N` would conflate truncation error with
//! genuine gauge deviation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauge_models::{build_hamiltonian, Gauge, ModeSpec, ModelConfig};
use crate::multimode::{coupling_integral, ModeProfile};
use crate::numal::eigvalsh;
use crate::schrodinger1d::TlsParams;

/// Default cap on the composite dimension reached by truncation ladders.
pub const DEFAULT_COMPOSITE_DIM_CAP: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalysisOptions {
    /// Composite (TLS * field) dimension the truncation ladder may not
    /// exceed.
    pub dim_cap: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            dim_cap: DEFAULT_COMPOSITE_DIM_CAP,
        }
    }
}

/// Lowest eigenvalues with convergence metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumResult {
    /// Ascending lowest-`k` eigenvalues.
    pub eigenvalues: Vec<f64>,
    /// Fock truncation the eigenvalues were computed at.
    pub n_used: usize,
    pub converged: bool,
    /// Last inter-step deviation of a truncation ladder (infinite for a
    /// single-shot spectrum).
    pub residual: f64,
}

/// One rung of a truncation ladder.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceStep {
    pub n_fock: usize,
    /// Max-abs change of the tracked eigenvalues against the previous rung.
    pub residual: f64,
    pub eigenvalues: Vec<f64>,
}

/// Converged spectrum plus the full residual history of the ladder.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceRun {
    pub spectrum: SpectrumResult,
    pub history: Vec<ConvergenceStep>,
}

fn lowest_eigenvalues(cfg: &ModelConfig, k: usize) -> Result<Vec<f64>> {
    let h = build_hamiltonian(cfg)?;
    if k > h.dim() {
        return Err(Error::invalid(
            "spectrum",
            format!("requested {k} eigenvalues of a dimension-{} operator", h.dim()),
        ));
    }
    let mut evs = eigvalsh(&h)?;
    evs.truncate(k);
    Ok(evs)
}

/// Lowest `k` eigenvalues at the config's own truncation (single shot, no
/// convergence claim).
pub fn spectrum(cfg: &ModelConfig, k: usize) -> Result<SpectrumResult> {
    cfg.validate()?;
    let eigenvalues = lowest_eigenvalues(cfg, k)?;
    Ok(SpectrumResult {
        eigenvalues,
        n_used: cfg.modes[0].fock,
        converged: false,
        residual: f64::INFINITY,
    })
}

/// Double the Fock truncation until the lowest `k` eigenvalues move by at
/// most `tol` between doublings, or the composite dimension cap is hit
/// (then `converged = false` with the last residual reported).
pub fn converge_truncation(
    cfg: &ModelConfig,
    k: usize,
    tol: f64,
    opts: &AnalysisOptions,
) -> Result<ConvergenceRun> {
    if !(tol > 0.0) {
        return Err(Error::invalid("convergence", "tolerance must be positive"));
    }
    cfg.validate()?;

    let mut current = cfg.clone();
    let mut previous = lowest_eigenvalues(&current, k)?;
    let mut history: Vec<ConvergenceStep> = Vec::new();

    loop {
        let next_fock = current.modes[0].fock * 2;
        if 2 * next_fock > opts.dim_cap {
            let last = history.last();
            return Ok(ConvergenceRun {
                spectrum: SpectrumResult {
                    eigenvalues: previous,
                    n_used: current.modes[0].fock,
                    converged: false,
                    residual: last.map_or(f64::INFINITY, |s| s.residual),
                },
                history,
            });
        }
        let mut next = current.clone();
        next.modes[0] = next.modes[0].doubled();
        let eigenvalues = lowest_eigenvalues(&next, k)?;
        let residual = eigenvalues
            .iter()
            .zip(&previous)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        history.push(ConvergenceStep {
            n_fock: next_fock,
            residual,
            eigenvalues: eigenvalues.clone(),
        });
        if residual <= tol {
            return Ok(ConvergenceRun {
                spectrum: SpectrumResult {
                    eigenvalues,
                    n_used: next_fock,
                    converged: true,
                    residual,
                },
                history,
            });
        }
        current = next;
        previous = eigenvalues;
    }
}

fn converged_or_err(
    cfg: &ModelConfig,
    k: usize,
    tol: f64,
    opts: &AnalysisOptions,
) -> Result<SpectrumResult> {
    let run = converge_truncation(cfg, k, tol, opts)?;
    if !run.spectrum.converged {
        return Err(Error::TruncationCap {
            cap: opts.dim_cap,
            residual: run.spectrum.residual,
        });
    }
    Ok(run.spectrum)
}

/// Per-coupling deviation of the gauge-invariant Coulomb and linearized
/// models from the dipole-gauge reference.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GaugeDeviationRow {
    pub eta: f64,
    /// `max_i |E_i^{coulomb_gi} - E_i^{dipole}|`, each side independently
    /// converged.
    pub dev_gauge_invariant: f64,
    /// `max_i |E_i^{linearized} - E_i^{dipole}|` — unconstrained; this is
    /// the quantity that blows up at strong coupling.
    pub dev_linearized: f64,
}

fn deviation_at(cfg: &ModelConfig, k: usize, tol: f64, opts: &AnalysisOptions) -> Result<(f64, f64)> {
    let gi = converged_or_err(&cfg.with_gauge(Gauge::CoulombGi), k, tol, opts)?;
    let dip = converged_or_err(&cfg.with_gauge(Gauge::Dipole), k, tol, opts)?;
    let lin = converged_or_err(&cfg.with_gauge(Gauge::CoulombLinearized), k, tol, opts)?;
    let dev = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max)
    };
    Ok((
        dev(&gi.eigenvalues, &dip.eigenvalues),
        dev(&lin.eigenvalues, &dip.eigenvalues),
    ))
}

/// Scan the normalized coupling and report both deviations per grid point.
///
/// The gauge-invariant pair must agree within `10 * tol` at every point;
/// a violation is returned as an error since it falsifies the construction.
pub fn gauge_deviation(
    tls: &TlsParams,
    mode: &ModeSpec,
    eta_grid: &[f64],
    k: usize,
    tol: f64,
    opts: &AnalysisOptions,
) -> Result<Vec<GaugeDeviationRow>> {
    let mut rows = Vec::with_capacity(eta_grid.len());
    for &eta in eta_grid {
        let mut cfg = ModelConfig::single_mode(*tls, mode.clone(), Gauge::CoulombGi);
        cfg.set_eta(0, eta)?;
        let (dev_gi, dev_lin) = deviation_at(&cfg, k, tol, opts)?;
        if dev_gi > 10.0 * tol {
            return Err(Error::GaugeDeviationExceeded {
                eta,
                deviation: dev_gi,
                bound: 10.0 * tol,
            });
        }
        rows.push(GaugeDeviationRow {
            eta,
            dev_gauge_invariant: dev_gi,
            dev_linearized: dev_lin,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Eta,
    Eps,
    OmegaPh,
    KMode,
}

impl SweepParameter {
    pub fn column_name(&self) -> &'static str {
        match self {
            SweepParameter::Eta => "eta",
            SweepParameter::Eps => "eps",
            SweepParameter::OmegaPh => "omega_ph",
            SweepParameter::KMode => "k",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMetric {
    /// Converged lowest-`k` levels.
    Levels,
    /// Cross-gauge deviations (gauge-invariant and linearized vs dipole).
    Deviation,
    /// Coupling integral of the first mode's profile.
    Coupling,
}

#[derive(Debug, Clone)]
pub struct SweepRequest {
    pub base: ModelConfig,
    pub parameter: SweepParameter,
    pub grid: Vec<f64>,
    pub metric: SweepMetric,
    /// Number of levels tracked by spectral metrics.
    pub k: usize,
    /// Convergence tolerance for spectral metrics.
    pub tol: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    /// One value per column; NaN-padded when the point failed.
    pub values: Vec<f64>,
    /// Error code for a failed point, `None` when the row is good.
    pub error: Option<&'static str>,
}

/// Deterministic table: a header and one row per grid point, in grid
/// order. Failed points carry their error code in the status column and
/// never abort the sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn error_count(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }
}

fn apply_parameter(cfg: &mut ModelConfig, param: SweepParameter, value: f64) -> Result<()> {
    match param {
        SweepParameter::Eta => cfg.set_eta(0, value),
        SweepParameter::Eps => {
            cfg.tls.eps = value;
            Ok(())
        }
        SweepParameter::OmegaPh => {
            if !(value > 0.0) {
                return Err(Error::invalid("sweep", "omega_ph must be positive"));
            }
            cfg.modes[0].omega_ph = value;
            Ok(())
        }
        SweepParameter::KMode => match &mut cfg.modes[0].profile {
            Some(ModeProfile::Cosine { wavevector, .. }) => {
                if !(value > 0.0) {
                    return Err(Error::invalid("sweep", "wavevector must be positive"));
                }
                *wavevector = value;
                Ok(())
            }
            _ => Err(Error::invalid(
                "sweep",
                "k_mode sweeps need a cosine profile on the first mode",
            )),
        },
    }
}

/// Evaluate the metric over the grid.
pub fn sweep(request: &SweepRequest, opts: &AnalysisOptions) -> Result<SweepTable> {
    if request.grid.is_empty() {
        return Err(Error::invalid("sweep", "empty grid"));
    }
    request.base.validate()?;

    let param_col = request.parameter.column_name().to_string();
    let columns: Vec<String> = match request.metric {
        SweepMetric::Levels => {
            let mut c = vec![param_col];
            c.extend((0..request.k).map(|i| format!("E_{i}")));
            c.extend(["n_used", "converged", "residual"].map(String::from));
            c
        }
        SweepMetric::Deviation => vec![
            param_col,
            "dev_gauge_invariant".to_string(),
            "dev_linearized".to_string(),
        ],
        SweepMetric::Coupling => vec![param_col, "eta_k".to_string()],
    };
    let width = columns.len();

    let mut rows = Vec::with_capacity(request.grid.len());
    for &value in &request.grid {
        let row = sweep_point(request, value, opts);
        rows.push(match row {
            Ok(mut values) => {
                debug_assert_eq!(values.len(), width);
                values.resize(width, f64::NAN);
                SweepRow {
                    values,
                    error: None,
                }
            }
            Err(e) => {
                let mut values = vec![f64::NAN; width];
                values[0] = value;
                SweepRow {
                    values,
                    error: Some(e.code()),
                }
            }
        });
    }
    Ok(SweepTable { columns, rows })
}

fn sweep_point(request: &SweepRequest, value: f64, opts: &AnalysisOptions) -> Result<Vec<f64>> {
    let mut cfg = request.base.clone();
    apply_parameter(&mut cfg, request.parameter, value)?;
    match request.metric {
        SweepMetric::Levels => {
            let run = converge_truncation(&cfg, request.k, request.tol, opts)?;
            let s = run.spectrum;
            let mut row = vec![value];
            row.extend(&s.eigenvalues);
            row.push(s.n_used as f64);
            row.push(if s.converged { 1.0 } else { 0.0 });
            row.push(if s.residual.is_finite() { s.residual } else { f64::NAN });
            Ok(row)
        }
        SweepMetric::Deviation => {
            let (dev_gi, dev_lin) = deviation_at(&cfg, request.k, request.tol, opts)?;
            Ok(vec![value, dev_gi, dev_lin])
        }
        SweepMetric::Coupling => {
            let eta_k = coupling_integral(&cfg.modes[0].effective_profile(), &cfg.tls)?;
            Ok(vec![value, eta_k])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multimode::{cutoff_scan, CosineFamily};

    fn cfg(delta: f64, eps: f64, omega: f64, eta: f64, fock: usize, gauge: Gauge) -> ModelConfig {
        let tls = TlsParams::two_level(delta, eps, 2.0, 1.0);
        ModelConfig::single_mode(tls, ModeSpec::dipole(omega, eta, fock), gauge)
    }

    #[test]
    fn decoupled_spectrum_is_merged_ladder() {
        let c = cfg(1.0, 0.0, 0.7, 0.0, 8, Gauge::CoulombGi);
        let s = spectrum(&c, 6).unwrap();
        let mut expect = Vec::new();
        for base in [-0.5, 0.5] {
            for n in 0..8 {
                expect.push(base + 0.7 * n as f64);
            }
        }
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (x, y) in s.eigenvalues.iter().zip(&expect) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(!s.converged);
        assert_eq!(s.n_used, 8);
    }

    #[test]
    fn gauges_coincide_at_zero_coupling() {
        let base = cfg(1.0, 0.0, 1.0, 0.0, 8, Gauge::CoulombGi);
        let a = spectrum(&base, 6).unwrap();
        let b = spectrum(&base.with_gauge(Gauge::Dipole), 6).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn converge_zero_coupling_first_doubling() {
        let c = cfg(1.0, 0.0, 1.0, 0.0, 8, Gauge::CoulombGi);
        let run = converge_truncation(&c, 6, 1e-9, &AnalysisOptions::default()).unwrap();
        assert!(run.spectrum.converged);
        assert_eq!(run.history.len(), 1);
        assert_eq!(run.spectrum.n_used, 16);
        assert_eq!(run.spectrum.residual, 0.0);
    }

    #[test]
    fn converge_strong_coupling_monotone_history() {
        let c = cfg(1.0, 0.0, 1.0, 0.5, 8, Gauge::CoulombGi);
        let run = converge_truncation(&c, 6, 1e-9, &AnalysisOptions::default()).unwrap();
        assert!(run.spectrum.converged);
        for w in run.history.windows(2) {
            assert!(w[1].residual <= w[0].residual + 1e-12);
        }
    }

    #[test]
    fn converge_reports_cap_hit() {
        let c = cfg(1.0, 0.0, 1.0, 2.0, 8, Gauge::CoulombGi);
        let run = converge_truncation(&c, 6, 1e-30, &AnalysisOptions { dim_cap: 64 }).unwrap();
        assert!(!run.spectrum.converged);
        assert_eq!(run.spectrum.n_used, 32);
    }

    #[test]
    fn gauge_deviation_rows() {
        let tls = TlsParams::two_level(1.0, 0.0, 2.0, 1.0);
        let mode = ModeSpec::dipole(1.0, 0.1, 8);
        let rows = gauge_deviation(
            &tls,
            &mode,
            &[0.0, 0.5],
            6,
            1e-9,
            &AnalysisOptions::default(),
        )
        .unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].dev_gauge_invariant < 1e-12);
        assert!(rows[0].dev_linearized < 1e-12);
        assert!(rows[1].dev_gauge_invariant <= 1e-8);
    }

    #[test]
    fn sweep_eps_follows_two_level_splitting() {
        // omega = 10 puts both TLS levels below the one-photon ladder.
        let base = cfg(1.0, 0.0, 10.0, 0.0, 4, Gauge::CoulombGi);
        let req = SweepRequest {
            base,
            parameter: SweepParameter::Eps,
            grid: vec![0.0, 0.5, 2.0],
            metric: SweepMetric::Levels,
            k: 2,
            tol: 1e-9,
        };
        let table = sweep(&req, &AnalysisOptions::default()).unwrap();
        assert_eq!(table.error_count(), 0);
        for row in &table.rows {
            let eps = row.values[0];
            let wq = (1.0f64 + eps * eps).sqrt();
            assert!((row.values[1] + 0.5 * wq).abs() < 1e-9);
            assert!((row.values[2] - 0.5 * wq).abs() < 1e-9);
        }
    }

    #[test]
    fn sweep_zero_eta_single_row() {
        let base = cfg(1.0, 0.0, 1.0, 0.3, 8, Gauge::CoulombGi);
        let req = SweepRequest {
            base: base.clone(),
            parameter: SweepParameter::Eta,
            grid: vec![0.0],
            metric: SweepMetric::Levels,
            k: 4,
            tol: 1e-9,
        };
        let table = sweep(&req, &AnalysisOptions::default()).unwrap();
        assert_eq!(table.rows.len(), 1);
        let mut bare = base.clone();
        bare.set_eta(0, 0.0).unwrap();
        let s = spectrum(&bare, 4).unwrap();
        for (i, e) in s.eigenvalues.iter().enumerate() {
            assert!((table.rows[0].values[1 + i] - e).abs() < 1e-12);
        }
    }

    #[test]
    fn sweep_k_mode_matches_cutoff_scan() {
        let tls = TlsParams::two_level(1.0, 0.0, 2.0, 1.0);
        let profile = ModeProfile::cosine(0.3, 1.0, 0.0);
        let mode = ModeSpec::with_profile(1.0, profile, 4);
        let base = ModelConfig::single_mode(tls, mode, Gauge::CoulombGi);
        let ks: Vec<f64> = (1..=20).map(|i| 0.5 * i as f64).collect();
        let req = SweepRequest {
            base,
            parameter: SweepParameter::KMode,
            grid: ks.clone(),
            metric: SweepMetric::Coupling,
            k: 0,
            tol: 1e-9,
        };
        let table = sweep(&req, &AnalysisOptions::default()).unwrap();
        assert_eq!(table.columns, vec!["k", "eta_k"]);

        let family = CosineFamily {
            amplitude: 0.3,
            phase: 0.0,
        };
        let scan = cutoff_scan(&tls, &family, &ks).unwrap();
        for (row, &(k, eta)) in table.rows.iter().zip(&scan) {
            assert_eq!(row.values[0], k);
            assert!((row.values[1] - eta).abs() < 1e-14);
        }
    }

    #[test]
    fn sweep_records_per_point_failure() {
        // Constant profile cannot take a k_mode sweep: every row fails,
        // the sweep itself succeeds.
        let base = cfg(1.0, 0.0, 1.0, 0.1, 4, Gauge::CoulombGi);
        let req = SweepRequest {
            base,
            parameter: SweepParameter::KMode,
            grid: vec![1.0, 2.0],
            metric: SweepMetric::Coupling,
            k: 0,
            tol: 1e-9,
        };
        let table = sweep(&req, &AnalysisOptions::default()).unwrap();
        assert_eq!(table.error_count(), 2);
        for row in &table.rows {
            assert_eq!(row.error, Some("invalid_input"));
            assert!(row.values[1].is_nan());
        }
    }

    #[test]
    fn sweep_is_bitwise_reproducible() {
        let base = cfg(1.0, 0.0, 1.0, 0.2, 8, Gauge::CoulombGi);
        let req = SweepRequest {
            base,
            parameter: SweepParameter::Eta,
            grid: vec![0.0, 0.1, 0.4],
            metric: SweepMetric::Levels,
            k: 4,
            tol: 1e-9,
        };
        let a = sweep(&req, &AnalysisOptions::default()).unwrap();
        let b = sweep(&req, &AnalysisOptions::default()).unwrap();
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert_eq!(ra.error, rb.error);
            for (x, y) in ra.values.iter().zip(&rb.values) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }
}
