//! Light-matter Hamiltonians for the two-level system and their gauge
//! structure.
//!
//! Builders (single quantized mode, truncated to `N` Fock states):
//!
//! * [`h_coulomb_gi_symmetric`] — gauge-invariant Coulomb-gauge model
//!   `H = (Delta/2)[sigma_z cos Phi + sigma_y sin Phi] + omega a^dag a`
//!   with `Phi = 2 eta (a + a^dag)`, built in the energy basis;
//! * [`h_coulomb_gi_asymmetric`] — the detuned generalization
//!   `H = omega a^dag a + (eps/2) rho_z - (Delta/2)[rho_x cos Phi - rho_y sin Phi]`,
//!   built in the site basis;
//! * [`h_dipole`] — the dipole-gauge model
//!   `H = omega a^dag a + (eps/2) rho_z - (Delta/2) rho_x - i eta omega (a - a^dag) rho_z + eta^2 omega`;
//! * [`h_coulomb_linearized`] — the first-order expansion of the
//!   gauge-invariant Coulomb model, the naive truncated baseline that
//!   breaks gauge equivalence at strong coupling.
//!
//! `cos`/`sin` of the field operator are evaluated by spectral calculus in
//! the truncated space (truncate first, then apply the matrix function),
//! never by Taylor series — this keeps `cos^2 + sin^2 = I` exact and makes
//! the minimal-coupling similarity `H = U H0 U^dag + H_ph` an identity at
//! every truncation.
//!
//! The classical-field side of the same construction lives in
//! [`parallel_transporter_classical`] (the U(1) link phase attached to
//! hopping) and [`apply_two_site_gauge`] (the local phase transformation
//! the transporter compensates).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multimode::{integrate_profile, ModeProfile, QUADRATURE_TOL};
use crate::numal::{matrix_cos_sin, matrix_unitary_exp, ComplexMatrix};
use crate::quantum_ops::{
    embed, number, quadrature_p, quadrature_x, rho_x, rho_y, rho_z, sigma_x, sigma_y, sigma_z,
    FockSpace,
};
use crate::schrodinger1d::TlsParams;

/// One quantized mode: frequency, zero-point amplitude, classical profile
/// and Fock truncation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSpec {
    pub omega_ph: f64,
    pub a0: f64,
    /// Spatial profile; defaults to a constant of amplitude `a0`
    /// (dipole approximation).
    #[serde(default)]
    pub profile: Option<ModeProfile>,
    /// Number of retained Fock states.
    pub fock: usize,
}

impl ModeSpec {
    /// Dipole-approximation mode: constant profile of amplitude `a0`.
    pub fn dipole(omega_ph: f64, a0: f64, fock: usize) -> Self {
        Self {
            omega_ph,
            a0,
            profile: None,
            fock,
        }
    }

    /// Mode with an explicit profile; `a0` is taken from the profile
    /// amplitude.
    pub fn with_profile(omega_ph: f64, profile: ModeProfile, fock: usize) -> Self {
        Self {
            omega_ph,
            a0: profile.amplitude(),
            profile: Some(profile),
            fock,
        }
    }

    pub fn effective_profile(&self) -> ModeProfile {
        self.profile
            .clone()
            .unwrap_or(ModeProfile::Constant { amplitude: self.a0 })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_ph > 0.0) {
            return Err(Error::invalid("mode", "omega_ph must be positive"));
        }
        if !self.a0.is_finite() {
            return Err(Error::invalid("mode", "a0 must be finite"));
        }
        if self.fock < 2 {
            return Err(Error::invalid("mode", "fock truncation must be >= 2"));
        }
        if let Some(p) = &self.profile {
            p.validate()?;
            // The analytic profile kinds carry the zero-point amplitude;
            // they must agree with a0.
            match p {
                ModeProfile::Constant { amplitude } | ModeProfile::Cosine { amplitude, .. } => {
                    if (amplitude - self.a0).abs() > 1e-12 * (1.0 + self.a0.abs()) {
                        return Err(Error::invalid(
                            "mode",
                            "profile amplitude must equal a0 for constant/cosine profiles",
                        ));
                    }
                }
                ModeProfile::Tabulated { .. } => {}
            }
        }
        Ok(())
    }

    pub fn fock_space(&self) -> Result<FockSpace> {
        FockSpace::new(self.fock)
    }

    /// Same mode with doubled Fock truncation.
    pub fn doubled(&self) -> Self {
        let mut m = self.clone();
        m.fock *= 2;
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gauge {
    CoulombGi,
    Dipole,
    CoulombLinearized,
}

/// Gauge choice plus mode list and TLS parameters: fully determines a
/// Hamiltonian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub tls: TlsParams,
    pub modes: Vec<ModeSpec>,
    pub gauge: Gauge,
    /// Treat the mode profile as spatially constant over the sites.
    #[serde(default = "default_true")]
    pub dipole_approx: bool,
}

fn default_true() -> bool {
    true
}

impl ModelConfig {
    pub fn single_mode(tls: TlsParams, mode: ModeSpec, gauge: Gauge) -> Self {
        Self {
            tls,
            modes: vec![mode],
            gauge,
            dipole_approx: true,
        }
    }

    pub fn with_gauge(&self, gauge: Gauge) -> Self {
        let mut c = self.clone();
        c.gauge = gauge;
        c
    }

    pub fn validate(&self) -> Result<()> {
        // A reduction always yields delta > 0, but the model builders also
        // accept the exactly-degenerate doublet (delta = 0), which the
        // displaced-oscillator limit of the dipole gauge needs.
        if !(self.tls.delta >= 0.0) {
            return Err(Error::invalid("model", "delta must be nonnegative"));
        }
        if !(self.tls.a > 0.0) {
            return Err(Error::invalid("model", "effective spacing a must be positive"));
        }
        if self.modes.is_empty() {
            return Err(Error::invalid("model", "need at least one mode"));
        }
        for m in &self.modes {
            m.validate()?;
        }
        Ok(())
    }

    fn single_mode_spec(&self) -> Result<&ModeSpec> {
        if self.modes.len() != 1 {
            return Err(Error::invalid(
                "model",
                "this builder takes exactly one mode (use the multimode builder)",
            ));
        }
        Ok(&self.modes[0])
    }

    /// Normalized coupling `eta = q (a/2) A0` of mode `i`.
    pub fn eta(&self, i: usize) -> f64 {
        self.tls.q * 0.5 * self.tls.a * self.modes[i].a0
    }

    /// Scale mode `i`'s zero-point amplitude so the normalized coupling
    /// becomes `eta`.
    pub fn set_eta(&mut self, i: usize, eta: f64) -> Result<()> {
        let lever = self.tls.q * 0.5 * self.tls.a;
        if lever == 0.0 {
            return Err(Error::invalid(
                "model",
                "cannot set eta with q a = 0",
            ));
        }
        let a0 = eta / lever;
        self.modes[i].a0 = a0;
        if let Some(p) = &mut self.modes[i].profile {
            match p {
                ModeProfile::Constant { amplitude } => *amplitude = a0,
                ModeProfile::Cosine { amplitude, .. } => *amplitude = a0,
                ModeProfile::Tabulated { .. } => {
                    return Err(Error::invalid(
                        "model",
                        "cannot rescale a tabulated profile to a target eta",
                    ))
                }
            }
        }
        Ok(())
    }
}

fn require_gauge(cfg: &ModelConfig, expected: Gauge, what: &'static str) -> Result<()> {
    if cfg.gauge != expected {
        return Err(Error::invalid(
            "model",
            format!("{what} requires the {expected:?} gauge selector"),
        ));
    }
    Ok(())
}

/// Field-space pieces shared by the single-mode builders.
struct SingleModeOps {
    phi: ComplexMatrix,
    h_ph: ComplexMatrix,
    eta: f64,
    omega: f64,
    fock: FockSpace,
}

fn single_mode_ops(cfg: &ModelConfig) -> Result<SingleModeOps> {
    cfg.validate()?;
    let mode = cfg.single_mode_spec()?;
    let fock = mode.fock_space()?;
    let eta = cfg.eta(0);
    let phi = quadrature_x(fock).scale_re(2.0 * eta);
    let h_ph = number(fock).scale_re(mode.omega_ph);
    Ok(SingleModeOps {
        phi,
        h_ph,
        eta,
        omega: mode.omega_ph,
        fock,
    })
}

/// Gauge-invariant Coulomb-gauge model for a symmetric TLS (energy basis):
/// `H = (Delta/2)[sigma_z cos Phi + sigma_y sin Phi] + omega a^dag a`.
pub fn h_coulomb_gi_symmetric(cfg: &ModelConfig) -> Result<ComplexMatrix> {
    require_gauge(cfg, Gauge::CoulombGi, "h_coulomb_gi_symmetric")?;
    if cfg.tls.eps != 0.0 {
        return Err(Error::invalid(
            "model",
            "nonzero eps: use h_coulomb_gi_asymmetric",
        ));
    }
    let ops = single_mode_ops(cfg)?;
    let (cos_phi, sin_phi) = matrix_cos_sin(&ops.phi)?;
    let half_delta = 0.5 * cfg.tls.delta;
    Ok(embed(&sigma_z(), &cos_phi)?
        .scale_re(half_delta)
        .add(&embed(&sigma_y(), &sin_phi)?.scale_re(half_delta))
        .add(&embed(&ComplexMatrix::identity(2), &ops.h_ph)?))
}

/// Gauge-invariant Coulomb-gauge model for a detuned TLS (site basis):
/// `H = omega a^dag a + (eps/2) rho_z - (Delta/2)[rho_x cos Phi - rho_y sin Phi]`.
///
/// At `eps = 0` its spectrum coincides with [`h_coulomb_gi_symmetric`]
/// (same model expressed in the other basis).
pub fn h_coulomb_gi_asymmetric(cfg: &ModelConfig) -> Result<ComplexMatrix> {
    require_gauge(cfg, Gauge::CoulombGi, "h_coulomb_gi_asymmetric")?;
    let ops = single_mode_ops(cfg)?;
    let (cos_phi, sin_phi) = matrix_cos_sin(&ops.phi)?;
    let identity_n = ComplexMatrix::identity(ops.fock.dim());
    let half_delta = 0.5 * cfg.tls.delta;
    Ok(embed(&ComplexMatrix::identity(2), &ops.h_ph)?
        .add(&embed(&rho_z(), &identity_n)?.scale_re(0.5 * cfg.tls.eps))
        .add(&embed(&rho_x(), &cos_phi)?.scale_re(-half_delta))
        .add(&embed(&rho_y(), &sin_phi)?.scale_re(half_delta)))
}

/// Dipole-gauge model (site basis):
/// `H = omega a^dag a + (eps/2) rho_z - (Delta/2) rho_x
///      - eta omega rho_z i(a - a^dag) + eta^2 omega`.
///
/// The constant carries the mode frequency (`eta^2 omega`): it is what the
/// displacement of `omega a^dag a` produces, and it makes the converged
/// spectrum at `Delta = 0` exactly the bare ladder `{n omega}`.
pub fn h_dipole(cfg: &ModelConfig) -> Result<ComplexMatrix> {
    require_gauge(cfg, Gauge::Dipole, "h_dipole")?;
    let ops = single_mode_ops(cfg)?;
    let n = ops.fock.dim();
    let identity_n = ComplexMatrix::identity(n);
    let identity_full = ComplexMatrix::identity(2 * n);
    Ok(embed(&ComplexMatrix::identity(2), &ops.h_ph)?
        .add(&embed(&rho_z(), &identity_n)?.scale_re(0.5 * cfg.tls.eps))
        .add(&embed(&rho_x(), &identity_n)?.scale_re(-0.5 * cfg.tls.delta))
        .add(&embed(&rho_z(), &quadrature_p(ops.fock))?.scale_re(-ops.eta * ops.omega))
        .add(&identity_full.scale_re(ops.eta * ops.eta * ops.omega)))
}

/// First order in `eta` expansion of the gauge-invariant Coulomb model
/// (energy basis): `H = (Delta/2) sigma_z + Delta eta sigma_y (a + a^dag)
/// + omega a^dag a`. Comparison baseline only — it loses gauge
/// equivalence once `eta` is no longer small.
pub fn h_coulomb_linearized(cfg: &ModelConfig) -> Result<ComplexMatrix> {
    require_gauge(cfg, Gauge::CoulombLinearized, "h_coulomb_linearized")?;
    let ops = single_mode_ops(cfg)?;
    let identity_n = ComplexMatrix::identity(ops.fock.dim());
    Ok(embed(&sigma_z(), &identity_n)?
        .scale_re(0.5 * cfg.tls.delta)
        .add(&embed(&sigma_y(), &quadrature_x(ops.fock))?.scale_re(cfg.tls.delta * ops.eta))
        .add(&embed(&ComplexMatrix::identity(2), &ops.h_ph)?))
}

/// Build the Hamiltonian selected by the config's gauge. A Coulomb-gauge
/// config with nonzero `eps` routes to the asymmetric builder.
pub fn build_hamiltonian(cfg: &ModelConfig) -> Result<ComplexMatrix> {
    match cfg.gauge {
        Gauge::CoulombGi => {
            if cfg.tls.eps == 0.0 {
                h_coulomb_gi_symmetric(cfg)
            } else {
                h_coulomb_gi_asymmetric(cfg)
            }
        }
        Gauge::Dipole => h_dipole(cfg),
        Gauge::CoulombLinearized => h_coulomb_linearized(cfg),
    }
}

/// Which Pauli the minimal-coupling unitary rotates about: `sigma_x` for
/// the energy basis, `rho_z` for the site basis (the same abstract
/// operator).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaugeFamily {
    SigmaX,
    RhoZ,
}

/// Minimal-coupling unitary `U = exp(i Phi P / 2)` with
/// `Phi = 2 eta (a + a^dag)` and `P` the chosen Pauli.
pub fn gauge_unitary(cfg: &ModelConfig, family: GaugeFamily) -> Result<ComplexMatrix> {
    cfg.validate()?;
    let ops = single_mode_ops(cfg)?;
    let pauli = match family {
        GaugeFamily::SigmaX => sigma_x(),
        GaugeFamily::RhoZ => rho_z(),
    };
    let generator = embed(&pauli, &ops.phi)?.scale_re(0.5);
    matrix_unitary_exp(&generator)
}

/// Classical U(1) parallel transporter between the sites:
/// `U = exp[i q * integral of A(x) over [x_l, x_r]]`, a unit-modulus phase.
///
/// For a constant profile this is the dipole-approximation link phase
/// `exp(i q a A)`.
pub fn parallel_transporter_classical(
    profile: &ModeProfile,
    x_l: f64,
    x_r: f64,
    q: f64,
) -> Result<Complex64> {
    let integral = integrate_profile(profile, x_l, x_r, QUADRATURE_TOL)?;
    Ok(Complex64::from_polar(1.0, q * integral))
}

/// Local phase angles of the two-site gauge transformation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoSiteGauge {
    pub theta_l: f64,
    pub theta_r: f64,
}

impl TwoSiteGauge {
    /// Mean phase `phi = (theta_R + theta_L)/2`.
    pub fn mean(&self) -> f64 {
        0.5 * (self.theta_r + self.theta_l)
    }

    /// Half-difference `theta = (theta_R - theta_L)/2`.
    pub fn half_difference(&self) -> f64 {
        0.5 * (self.theta_r - self.theta_l)
    }
}

/// Apply the local two-site phase map to a state in the site basis
/// `(c_R, c_L)`: `c_R -> exp(i q theta_R) c_R`, `c_L -> exp(i q theta_L) c_L`.
pub fn apply_two_site_gauge(
    state: &[Complex64; 2],
    g: &TwoSiteGauge,
    q: f64,
) -> [Complex64; 2] {
    [
        Complex64::from_polar(1.0, q * g.theta_r) * state[0],
        Complex64::from_polar(1.0, q * g.theta_l) * state[1],
    ]
}

/// The same transformation as a 2x2 operator on energy-basis coordinates:
/// a global phase times a Bloch rotation,
/// `exp(i q phi) * exp(i q theta sigma_x)`.
pub fn two_site_gauge_energy_basis(g: &TwoSiteGauge, q: f64) -> ComplexMatrix {
    let global = Complex64::from_polar(1.0, q * g.mean());
    let theta = q * g.half_difference();
    // exp(i theta sigma_x) = cos(theta) I + i sin(theta) sigma_x.
    let rot = ComplexMatrix::identity(2)
        .scale(Complex64::new(theta.cos(), 0.0))
        .add(&sigma_x().scale(Complex64::new(0.0, theta.sin())));
    rot.scale(global)
}
