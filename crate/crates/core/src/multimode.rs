//! Beyond-dipole coupling integrals over classical mode profiles and the
//! multimode gauge-invariant Rabi Hamiltonian.
//!
//! The coupling of a mode with spatial profile `A(x)` to the two-site
//! system is `eta_k = (q/2) * integral of A(x) over [x_L, x_R]`, which
//! collapses to the dipole value `q (a/2) A0` for a constant profile and
//! decays like `1/k` for wavelengths shorter than the site separation —
//! the natural high-frequency cutoff.
//!
//! Integrals use adaptive Simpson quadrature with a 1e-12 absolute
//! tolerance; the intervals are tiny and the profiles smooth, so the
//! quadrature is certifiable against closed forms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauge_models::ModeSpec;
use crate::numal::{kron_with_cap, matrix_cos_sin, ComplexMatrix, DEFAULT_DIM_CAP};
use crate::quantum_ops::{embed, number, quadrature_x, sigma_y, sigma_z, FockSpace};
use crate::schrodinger1d::TlsParams;

/// Absolute tolerance of the coupling quadrature.
pub const QUADRATURE_TOL: f64 = 1e-12;

/// Classical spatial profile of a mode's vector potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModeProfile {
    Constant {
        amplitude: f64,
    },
    /// `A(x) = amplitude * cos(wavevector * x + phase)`.
    Cosine {
        amplitude: f64,
        wavevector: f64,
        #[serde(default)]
        phase: f64,
    },
    /// Linear interpolation of `(x, A(x))` samples; must cover the
    /// integration interval.
    Tabulated {
        samples: Vec<(f64, f64)>,
    },
}

impl ModeProfile {
    pub fn constant(amplitude: f64) -> Self {
        ModeProfile::Constant { amplitude }
    }

    pub fn cosine(amplitude: f64, wavevector: f64, phase: f64) -> Self {
        ModeProfile::Cosine {
            amplitude,
            wavevector,
            phase,
        }
    }

    /// Nominal amplitude of the profile (peak of the analytic kinds,
    /// max |A| of a tabulated one).
    pub fn amplitude(&self) -> f64 {
        match self {
            ModeProfile::Constant { amplitude } => *amplitude,
            ModeProfile::Cosine { amplitude, .. } => *amplitude,
            ModeProfile::Tabulated { samples } => samples
                .iter()
                .map(|&(_, a)| a.abs())
                .fold(0.0, f64::max),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModeProfile::Constant { amplitude } | ModeProfile::Cosine { amplitude, .. } => {
                if !amplitude.is_finite() {
                    return Err(Error::invalid("profile", "amplitude must be finite"));
                }
                Ok(())
            }
            ModeProfile::Tabulated { samples } => {
                if samples.len() < 2 {
                    return Err(Error::invalid("profile", "tabulated needs >= 2 samples"));
                }
                if !samples.windows(2).all(|w| w[0].0 < w[1].0) {
                    return Err(Error::invalid(
                        "profile",
                        "tabulated samples must have strictly increasing x",
                    ));
                }
                Ok(())
            }
        }
    }

    fn covers(&self, x_lo: f64, x_hi: f64) -> bool {
        match self {
            ModeProfile::Tabulated { samples } => {
                samples.first().map(|s| s.0).unwrap_or(f64::INFINITY) <= x_lo
                    && samples.last().map(|s| s.0).unwrap_or(f64::NEG_INFINITY) >= x_hi
            }
            _ => true,
        }
    }

    /// Evaluate `A(x)`. The caller must have checked coverage for
    /// tabulated profiles.
    fn eval(&self, x: f64) -> f64 {
        match self {
            ModeProfile::Constant { amplitude } => *amplitude,
            ModeProfile::Cosine {
                amplitude,
                wavevector,
                phase,
            } => amplitude * (wavevector * x + phase).cos(),
            ModeProfile::Tabulated { samples } => {
                let idx = samples
                    .partition_point(|&(xs, _)| xs <= x)
                    .clamp(1, samples.len() - 1);
                let (xa, va) = samples[idx - 1];
                let (xb, vb) = samples[idx];
                va + (vb - va) * (x - xa) / (xb - xa)
            }
        }
    }
}

/// `integral of A(x) dx` over `[x_lo, x_hi]`.
///
/// Analytic kinds go through adaptive Simpson; a cosine profile is first
/// pre-split to at most a quarter period per panel so that periodic
/// sampling cannot alias the subdivision test. A tabulated profile is
/// piecewise linear and integrates in closed form.
pub fn integrate_profile(p: &ModeProfile, x_lo: f64, x_hi: f64, abs_tol: f64) -> Result<f64> {
    p.validate()?;
    if !(x_lo < x_hi) {
        return Err(Error::invalid("quadrature", "empty or inverted interval"));
    }
    if !p.covers(x_lo, x_hi) {
        return Err(Error::ProfileCoverage {
            x_lo,
            x_hi,
        });
    }
    if let ModeProfile::Tabulated { samples } = p {
        return Ok(integrate_piecewise_linear(samples, x_lo, x_hi));
    }

    let panels = match p {
        ModeProfile::Cosine { wavevector, .. } => {
            let oscillations = (wavevector.abs() * (x_hi - x_lo)) / std::f64::consts::PI;
            (2.0 * oscillations).ceil().max(4.0).min(65536.0) as usize
        }
        _ => 1,
    };

    let f = |x: f64| p.eval(x);
    let width = (x_hi - x_lo) / panels as f64;
    let panel_tol = abs_tol / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let a = x_lo + width * i as f64;
        let b = if i + 1 == panels { x_hi } else { a + width };
        let fa = f(a);
        let fb = f(b);
        let m = 0.5 * (a + b);
        let fm = f(m);
        let whole = simpson(a, b, fa, fm, fb);
        total += adaptive_simpson(&f, a, b, fa, fm, fb, whole, panel_tol, 50);
    }
    Ok(total)
}

/// Exact integral of the linear interpolant over `[x_lo, x_hi]` (coverage
/// already checked).
fn integrate_piecewise_linear(samples: &[(f64, f64)], x_lo: f64, x_hi: f64) -> f64 {
    let interp = |x: f64| {
        let idx = samples
            .partition_point(|&(xs, _)| xs <= x)
            .clamp(1, samples.len() - 1);
        let (xa, va) = samples[idx - 1];
        let (xb, vb) = samples[idx];
        va + (vb - va) * (x - xa) / (xb - xa)
    };
    let mut total = 0.0;
    for w in samples.windows(2) {
        let lo = w[0].0.max(x_lo);
        let hi = w[1].0.min(x_hi);
        if lo < hi {
            total += 0.5 * (interp(lo) + interp(hi)) * (hi - lo);
        }
    }
    total
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

/// Dimensionless coupling `eta_k = (q/2) * integral of A(x) over [x_L, x_R]`.
///
/// A constant profile reproduces the dipole value `q (a/2) A0` (the sites
/// satisfy `x_R - x_L = a` by construction of the reduction).
pub fn coupling_integral(p: &ModeProfile, tls: &TlsParams) -> Result<f64> {
    tls.validate()?;
    if !(tls.x_l < tls.x_r) {
        return Err(Error::invalid("tls", "x_L must lie below x_R"));
    }
    Ok(0.5 * tls.q * integrate_profile(p, tls.x_l, tls.x_r, QUADRATURE_TOL)?)
}

/// Cosine profile family `A(x) = amplitude * cos(k x + phase)` scanned
/// over wavevectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CosineFamily {
    pub amplitude: f64,
    #[serde(default)]
    pub phase: f64,
}

/// Couplings `(k, eta_k)` over the given wavevectors, sorted by `k`.
pub fn cutoff_scan(
    tls: &TlsParams,
    family: &CosineFamily,
    wavevectors: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if wavevectors.is_empty() {
        return Err(Error::invalid("cutoff scan", "empty wavevector grid"));
    }
    let mut table = Vec::with_capacity(wavevectors.len());
    for &k in wavevectors {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::invalid(
                "cutoff scan",
                format!("wavevectors must be positive and finite, got {k}"),
            ));
        }
        let profile = ModeProfile::cosine(family.amplitude, k, family.phase);
        table.push((k, coupling_integral(&profile, tls)?));
    }
    table.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite wavevectors"));
    Ok(table)
}

/// Field operator of mode `j` embedded in the multimode tensor space
/// (factors ascend by mode index).
fn embed_mode_op(
    dims: &[usize],
    j: usize,
    op: &ComplexMatrix,
    cap: usize,
) -> Result<ComplexMatrix> {
    let mut acc = ComplexMatrix::identity(1);
    for (k, &d) in dims.iter().enumerate() {
        let factor = if k == j {
            op.clone()
        } else {
            ComplexMatrix::identity(d)
        };
        acc = kron_with_cap(&acc, &factor, cap)?;
    }
    Ok(acc)
}

/// Multimode gauge-invariant Rabi Hamiltonian
/// `H = (Delta/2) [sigma_z (x) cos Phi + sigma_y (x) sin Phi] + sum_k omega_k n_k`
/// with `Phi = sum_k 2 eta_k (a_k + a_k^dag)` and per-mode couplings from
/// [`coupling_integral`].
///
/// The model is built for symmetric systems; a detuning beyond the
/// symmetric-reduction tolerance (`|eps| > 1e-6 delta`) is rejected.
pub fn h_multimode_gi(tls: &TlsParams, modes: &[ModeSpec]) -> Result<ComplexMatrix> {
    tls.validate()?;
    if modes.is_empty() {
        return Err(Error::invalid("multimode", "need at least one mode"));
    }
    if tls.eps.abs() > 1e-6 * tls.delta {
        return Err(Error::invalid(
            "multimode",
            "the multimode model is defined for symmetric systems (|eps| <= 1e-6 delta)",
        ));
    }
    for m in modes {
        m.validate()?;
    }

    let dims: Vec<usize> = modes.iter().map(|m| m.fock).collect();
    let mut field_dim: usize = 1;
    for &d in &dims {
        field_dim = field_dim
            .checked_mul(d)
            .ok_or(Error::DimensionOverflow { dim: usize::MAX, cap: DEFAULT_DIM_CAP })?;
    }
    let total = field_dim.checked_mul(2).ok_or(Error::DimensionOverflow {
        dim: usize::MAX,
        cap: DEFAULT_DIM_CAP,
    })?;
    if total > DEFAULT_DIM_CAP {
        return Err(Error::DimensionOverflow {
            dim: total,
            cap: DEFAULT_DIM_CAP,
        });
    }

    let mut phi = ComplexMatrix::zeros(field_dim);
    let mut h_ph = ComplexMatrix::zeros(field_dim);
    for (j, mode) in modes.iter().enumerate() {
        let fock = FockSpace::new(mode.fock)?;
        let eta = coupling_integral(&mode.effective_profile(), tls)?;
        let x_j = embed_mode_op(&dims, j, &quadrature_x(fock), DEFAULT_DIM_CAP)?;
        let n_j = embed_mode_op(&dims, j, &number(fock), DEFAULT_DIM_CAP)?;
        phi = phi.add(&x_j.scale_re(2.0 * eta));
        h_ph = h_ph.add(&n_j.scale_re(mode.omega_ph));
    }

    let (cos_phi, sin_phi) = matrix_cos_sin(&phi)?;
    let half_delta = 0.5 * tls.delta;
    let h = embed(&sigma_z(), &cos_phi)?
        .scale_re(half_delta)
        .add(&embed(&sigma_y(), &sin_phi)?.scale_re(half_delta))
        .add(&embed(&ComplexMatrix::identity(2), &h_ph)?);
    Ok(h)
}

/// Minimal-coupling unitary of the multimode model,
/// `U = exp(i sigma_x Phi / 2)` with the same `Phi` as [`h_multimode_gi`].
pub fn multimode_gauge_unitary(tls: &TlsParams, modes: &[ModeSpec]) -> Result<ComplexMatrix> {
    tls.validate()?;
    if modes.is_empty() {
        return Err(Error::invalid("multimode", "need at least one mode"));
    }
    for m in modes {
        m.validate()?;
    }
    let dims: Vec<usize> = modes.iter().map(|m| m.fock).collect();
    let field_dim: usize = dims.iter().product();
    let mut phi = ComplexMatrix::zeros(field_dim);
    for (j, mode) in modes.iter().enumerate() {
        let fock = FockSpace::new(mode.fock)?;
        let eta = coupling_integral(&mode.effective_profile(), tls)?;
        let x_j = embed_mode_op(&dims, j, &quadrature_x(fock), DEFAULT_DIM_CAP)?;
        phi = phi.add(&x_j.scale_re(2.0 * eta));
    }
    let generator = embed(&crate::quantum_ops::sigma_x(), &phi)?.scale_re(0.5);
    crate::numal::matrix_unitary_exp(&generator)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge_models::{h_coulomb_gi_symmetric, Gauge, ModelConfig};
    use crate::numal::eigvalsh;
    use std::f64::consts::PI;

    fn tls(a: f64, q: f64) -> TlsParams {
        TlsParams::two_level(1.0, 0.0, a, q)
    }

    #[test]
    fn constant_profile_gives_dipole_coupling() {
        let p = ModeProfile::constant(0.25);
        let t = tls(2.0, 1.5);
        // q (a/2) A0 = 1.5 * 1.0 * 0.25
        let eta = coupling_integral(&p, &t).unwrap();
        assert!((eta - 0.375).abs() < 1e-15);
    }

    #[test]
    fn cosine_coupling_matches_closed_form() {
        let t = tls(2.0, 1.0);
        for ka in [0.3, 1.0, PI, 5.0, 12.0] {
            let k = ka / t.a;
            let p = ModeProfile::cosine(0.7, k, 0.0);
            let eta = coupling_integral(&p, &t).unwrap();
            let analytic = t.q * 0.7 / k * (k * t.a / 2.0).sin();
            assert!(
                (eta - analytic).abs() < 1e-10,
                "ka = {ka}: {eta} vs {analytic}"
            );
        }
    }

    #[test]
    fn coupling_vanishes_at_full_wavelength() {
        let t = tls(2.0, 1.0);
        let k = 2.0 * PI / t.a;
        let p = ModeProfile::cosine(1.0, k, 0.0);
        assert!(coupling_integral(&p, &t).unwrap().abs() < 1e-10);
    }

    #[test]
    fn dipole_limit_of_long_wavelengths() {
        let t = tls(2.0, 1.0);
        let dipole = coupling_integral(&ModeProfile::constant(0.4), &t).unwrap();
        let long = coupling_integral(&ModeProfile::cosine(0.4, 1e-6, 0.0), &t).unwrap();
        assert!((long - dipole).abs() < 1e-9 * dipole.abs());
    }

    #[test]
    fn tabulated_profile_integrates_and_checks_coverage() {
        let samples: Vec<(f64, f64)> = (0..=400)
            .map(|i| {
                let x = -1.0 + 0.005 * i as f64;
                (x, 0.3 * x + 0.5)
            })
            .collect();
        let p = ModeProfile::Tabulated { samples };
        let t = tls(2.0, 1.0);
        // Linear profile integrates exactly: int(0.3 x + 0.5) over [-1, 1] = 1.
        let eta = coupling_integral(&p, &t).unwrap();
        assert!((eta - 0.5).abs() < 1e-10);

        let narrow = ModeProfile::Tabulated {
            samples: vec![(-0.5, 1.0), (0.5, 1.0)],
        };
        assert!(matches!(
            coupling_integral(&narrow, &t),
            Err(Error::ProfileCoverage { .. })
        ));
    }

    #[test]
    fn cutoff_scan_is_sorted_and_enveloped() {
        let t = tls(2.0, 1.0);
        let family = CosineFamily {
            amplitude: 1.0,
            phase: 0.0,
        };
        let ks: Vec<f64> = (1..=120).map(|i| 0.25 * i as f64).collect();
        let table = cutoff_scan(&t, &family, &ks).unwrap();
        assert_eq!(table.len(), ks.len());
        for w in table.windows(2) {
            assert!(w[0].0 < w[1].0);
        }
        for &(k, eta) in &table {
            assert!(eta.abs() <= t.q * family.amplitude / k + 1e-12);
        }
        // Envelope max over [K, 2K] is nonincreasing in K past K a > pi.
        let max_over = |lo: f64, hi: f64| {
            table
                .iter()
                .filter(|&&(k, _)| k >= lo && k <= hi)
                .map(|&(_, e)| e.abs())
                .fold(0.0f64, f64::max)
        };
        let mut prev = f64::INFINITY;
        let mut cap = 2.0; // K a = 4 > pi
        while 2.0 * cap <= 30.0 / t.a {
            let m = max_over(cap, 2.0 * cap);
            assert!(m <= prev + 1e-12);
            prev = m;
            cap *= 2.0;
        }
    }

    #[test]
    fn single_constant_mode_reduces_to_dipole_builder() {
        let t = tls(2.0, 1.0);
        let mode = ModeSpec::dipole(1.0, 0.3, 12);
        let h_multi = h_multimode_gi(&t, std::slice::from_ref(&mode)).unwrap();
        let cfg = ModelConfig::single_mode(t, mode, Gauge::CoulombGi);
        let h_single = h_coulomb_gi_symmetric(&cfg).unwrap();
        assert!(h_multi.max_abs_diff(&h_single) < 1e-12);
    }

    #[test]
    fn decoupled_modes_give_bare_ladder() {
        let t = tls(2.0, 1.0);
        let modes = vec![
            ModeSpec::dipole(1.0, 0.0, 4),
            ModeSpec::dipole(1.7, 0.0, 3),
        ];
        let h = h_multimode_gi(&t, &modes).unwrap();
        let evs = eigvalsh(&h).unwrap();
        let mut expect = Vec::new();
        for s in [-0.5, 0.5] {
            for n1 in 0..4 {
                for n2 in 0..3 {
                    expect.push(s + n1 as f64 * 1.0 + n2 as f64 * 1.7);
                }
            }
        }
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (x, y) in evs.iter().zip(&expect) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn mode_ordering_invariance() {
        let t = tls(2.0, 1.0);
        let m1 = ModeSpec::dipole(1.0, 0.35, 6);
        let m2 = ModeSpec::dipole(1.7, 0.2, 5);
        let ha = h_multimode_gi(&t, &[m1.clone(), m2.clone()]).unwrap();
        let hb = h_multimode_gi(&t, &[m2, m1]).unwrap();
        let ea = eigvalsh(&ha).unwrap();
        let eb = eigvalsh(&hb).unwrap();
        for (x, y) in ea.iter().zip(&eb) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn multimode_rejects_detuned_tls() {
        let t = TlsParams::two_level(1.0, 0.3, 2.0, 1.0);
        let mode = ModeSpec::dipole(1.0, 0.1, 4);
        assert!(h_multimode_gi(&t, &[mode]).is_err());
    }

    #[test]
    fn dimension_cap_enforced() {
        let t = tls(2.0, 1.0);
        let modes = vec![
            ModeSpec::dipole(1.0, 0.1, 128),
            ModeSpec::dipole(1.0, 0.1, 128),
        ];
        assert!(matches!(
            h_multimode_gi(&t, &modes),
            Err(Error::DimensionOverflow { .. })
        ));
    }
}
