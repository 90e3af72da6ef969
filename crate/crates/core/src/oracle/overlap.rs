//! Pure-state overlaps by direct integration, in the time and frequency
//! domains, plus averaging over a center distribution.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::oscillatory::{integrate_oscillatory, FourierPanels};
use super::quadrature::{integrate, try_integrate, Domain, Quadrature, QuadratureConfig};
use crate::error::Result;
use crate::spectral::{CenterDistribution, DistributionKind, Family, Lineshape};

/// `ψ_ω(t) = (2π)^{-1/2} ∫ dν g_ω(ν) e^{-iνt}`.
///
/// Lorentzian: `-i√Γ e^{-iωt} e^{-Γt/2}` for `t ≥ 0`, zero before the
/// emission. Gaussian: `(2σ_g²/π)^{1/4} e^{-iωt} e^{-σ_g² t²}`, whose
/// intensity has standard deviation `1/(2σ_g)`.
pub fn temporal_amplitude(lineshape: &Lineshape, center: f64, t: f64) -> Complex64 {
    let w = lineshape.intrinsic_width();
    let phase = Complex64::from_polar(1.0, -center * t);
    match lineshape.family() {
        Family::Lorentzian => {
            if t < 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, -w.sqrt() * (-0.5 * w * t).exp()) * phase
            }
        }
        Family::Gaussian => phase * ((2.0 * w * w / PI).powf(0.25) * (-w * w * t * t).exp()),
    }
}

/// Domain carrying the support of `ψ*(t) ψ(t + τ)`.
pub(crate) fn time_domain(lineshape: &Lineshape, tau: f64) -> Domain {
    let w = lineshape.intrinsic_width();
    match lineshape.family() {
        // Both factors vanish before their emission edge; start at the later one.
        Family::Lorentzian => Domain::HalfLine {
            start: (-tau).max(0.0),
            scale: 1.0 / w,
        },
        Family::Gaussian => Domain::line_truncated(-0.5 * tau, 0.5 / w),
    }
}

/// `∫ dt ψ*_{ω_i}(t) ψ_{ω_j}(t + τ)` evaluated numerically.
///
/// Every component is a carrier times a common envelope,
/// `ψ_ω(t) = ψ_0(t) e^{-iωt}`, so the integrand is the smooth envelope product
/// `ψ_0*(t) ψ_0(t + τ)` against `e^{i(ω_i − ω_j)t}`; the oscillatory factor is
/// integrated exactly panel by panel.
pub fn time_overlap(
    lineshape: &Lineshape,
    omega_i: f64,
    omega_j: f64,
    tau: f64,
    cfg: &QuadratureConfig,
) -> Result<Quadrature> {
    let mut q = integrate_oscillatory(
        |t| envelope(lineshape, t, tau),
        omega_i - omega_j,
        time_domain(lineshape, tau),
        &[],
        cfg,
    )?;
    q.value *= Complex64::from_polar(1.0, -omega_j * tau);
    Ok(q)
}

fn envelope(lineshape: &Lineshape, t: f64, tau: f64) -> Complex64 {
    temporal_amplitude(lineshape, 0.0, t).conj() * temporal_amplitude(lineshape, 0.0, t + tau)
}

/// [`time_overlap`] at fixed delay for many center pairs.
///
/// The envelope expansion is built once; each pair then costs one
/// oscillatory moment evaluation per panel.
pub struct TimeOverlapTable {
    tau: f64,
    panels: FourierPanels,
}

impl TimeOverlapTable {
    pub fn new(lineshape: &Lineshape, tau: f64, cfg: &QuadratureConfig) -> Result<Self> {
        let panels = FourierPanels::build(|t| envelope(lineshape, t, tau), time_domain(lineshape, tau), &[], cfg)?;
        Ok(Self { tau, panels })
    }

    pub fn overlap(&self, omega_i: f64, omega_j: f64) -> Complex64 {
        self.panels.transform(omega_i - omega_j) * Complex64::from_polar(1.0, -omega_j * self.tau)
    }

    /// Error bound on [`overlap`](Self::overlap), uniform in the centers.
    pub fn error(&self) -> f64 {
        self.panels.error()
    }
}

/// [`time_overlap`] with plain Gauss-Kronrod on the full integrand; only
/// practical for modest detunings.
pub fn time_overlap_direct(
    lineshape: &Lineshape,
    omega_i: f64,
    omega_j: f64,
    tau: f64,
    cfg: &QuadratureConfig,
) -> Result<Quadrature> {
    integrate(
        |t| temporal_amplitude(lineshape, omega_i, t).conj() * temporal_amplitude(lineshape, omega_j, t + tau),
        time_domain(lineshape, tau),
        &[],
        cfg,
    )
}

/// `∫ dν g*_{ω_i}(ν) g_{ω_j}(ν)` evaluated numerically.
pub fn frequency_overlap(
    lineshape: &Lineshape,
    omega_i: f64,
    omega_j: f64,
    cfg: &QuadratureConfig,
) -> Result<Quadrature> {
    let mid = 0.5 * (omega_i + omega_j);
    let w = lineshape.intrinsic_width();
    let domain = match lineshape.family() {
        Family::Lorentzian => Domain::line_mapped(mid, 0.5 * w),
        Family::Gaussian => Domain::line_truncated(mid, w),
    };
    integrate(
        |nu| lineshape.amplitude_at(omega_i, nu).conj() * lineshape.amplitude_at(omega_j, nu),
        domain,
        &[omega_i, omega_j],
        cfg,
    )
}

/// `∫ dω f(ω) h(ω)`; a delta distribution evaluates `h` at its center.
pub(crate) fn average_over<H>(
    dist: &CenterDistribution,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
    mut h: H,
) -> Result<(f64, f64)>
where
    H: FnMut(f64) -> Result<f64>,
{
    let domain = match dist.kind() {
        DistributionKind::Delta => return Ok((h(dist.center())?, 0.0)),
        DistributionKind::Lorentzian => Domain::line_mapped(dist.center(), dist.extrinsic_width()),
        DistributionKind::Gaussian => Domain::line_truncated(dist.center(), dist.extrinsic_width()),
    };
    let q = try_integrate(
        |w| Ok(Complex64::new(dist.density(w) * h(w)?, 0.0)),
        domain,
        breakpoints,
        cfg,
    )?;
    Ok((q.value.re, q.error))
}
