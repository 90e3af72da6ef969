//! Two-photon indistinguishability `K(τ)`, in closed form and by quadrature.
//!
//! ```text
//! K(τ) = ∬ dω_i dω_j f_a(ω_i) f_b(ω_j) |∫ dt ψ*_{ω_i}(t) ψ_{ω_j}(t + τ)|²
//! ```
//!
//! For `f_a = f_b` and `τ = 0` this is the purity `tr ρ²`. The numeric path
//! integrates the time overlap directly rather than using its closed form, so
//! it is an independent check on the analytic expressions.

use std::fmt;

use crate::error::{Error, Result};
use crate::oracle::{average_over, QuadratureConfig, TimeOverlapTable};
use crate::spectral::{CenterDistribution, Family, Lineshape, MixedPhotonState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Analytic,
    Numeric,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Analytic => "analytic",
            Method::Numeric => "numeric",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KResult {
    pub value: f64,
    pub tau: f64,
    pub method: Method,
    pub model: String,
    /// Quadrature error estimate; zero for closed forms.
    pub error_estimate: f64,
}

/// Closed-form `K(τ)`:
/// Lorentzian `(Γ/2Γ₂) e^{-Γ|τ|}`, Gaussian `(σ_g/σ) e^{-τ²σ_g²}`.
pub fn k_analytic(state: &MixedPhotonState, tau: f64) -> KResult {
    KResult {
        value: analytic_value(state, tau),
        tau,
        method: Method::Analytic,
        model: state.describe(),
        error_estimate: 0.0,
    }
}

pub(crate) fn analytic_value(state: &MixedPhotonState, tau: f64) -> f64 {
    let g = state.intrinsic_width();
    let peak = match state.family() {
        Family::Lorentzian => 0.5 * g / state.total_width(),
        Family::Gaussian => g / state.total_width(),
    };
    peak * delay_factor(state.family(), g, tau)
}

/// `K(τ)/K(0)` for a lineshape of intrinsic width `g`.
pub(crate) fn delay_factor(family: Family, g: f64, tau: f64) -> f64 {
    match family {
        Family::Lorentzian => (-g * tau.abs()).exp(),
        Family::Gaussian => (-tau * tau * g * g).exp(),
    }
}

/// `K(τ)` by nested quadrature: time overlap inside a two-dimensional average
/// over the center distribution.
pub fn k_numeric(state: &MixedPhotonState, tau: f64, cfg: &QuadratureConfig) -> Result<KResult> {
    cfg.validate()?;
    check_tau(tau)?;
    let (value, error_estimate) =
        pair_average(state.lineshape(), state.distribution(), state.distribution(), tau, cfg)?;
    Ok(KResult {
        value,
        tau,
        method: Method::Numeric,
        model: state.describe(),
        error_estimate,
    })
}

/// `K_ab(τ) = tr(ρ_a ⊗ ρ_b)`-type overlap of photons from two sources.
///
/// Both sources must share lineshape family and intrinsic width; centers and
/// extrinsic widths may differ.
pub fn k_cross(
    state_a: &MixedPhotonState,
    state_b: &MixedPhotonState,
    tau: f64,
    cfg: &QuadratureConfig,
) -> Result<KResult> {
    cfg.validate()?;
    check_tau(tau)?;
    if state_a.family() != state_b.family() {
        return Err(Error::FamilyMismatch(format!(
            "{} source against {} source",
            state_a.family(),
            state_b.family()
        )));
    }
    let (wa, wb) = (state_a.intrinsic_width(), state_b.intrinsic_width());
    if wa != wb {
        return Err(Error::UnequalIntrinsicWidth { a: wa, b: wb });
    }
    let (value, error_estimate) = pair_average(
        state_a.lineshape(),
        state_a.distribution(),
        state_b.distribution(),
        tau,
        cfg,
    )?;
    Ok(KResult {
        value,
        tau,
        method: Method::Numeric,
        model: format!("{} x {}", state_a.describe(), state_b.describe()),
        error_estimate,
    })
}

fn check_tau(tau: f64) -> Result<()> {
    if tau.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("tau", tau, "must be finite"))
    }
}

fn pair_average(
    lineshape: &Lineshape,
    fa: &CenterDistribution,
    fb: &CenterDistribution,
    tau: f64,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    let middle = cfg.nested(0.1);
    let table = TimeOverlapTable::new(lineshape, tau, &cfg.nested(0.01))?;
    let (value, error) = average_over(fa, &[fb.center()], cfg, |wi| {
        let (v, _) = average_over(fb, &[wi], &middle, |wj| Ok(table.overlap(wi, wj).norm_sqr()))?;
        Ok(v)
    })?;
    let inner = table.error();
    Ok((value, error + 2.0 * inner + inner * inner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn analytic_spot_values() {
        let l = MixedPhotonState::lorentzian(2.0, 1.0, 0.0).unwrap();
        assert_relative_eq!(k_analytic(&l, 0.0).value, 0.5, epsilon = 1e-15);

        let pure = MixedPhotonState::gaussian(1.0, 0.0, 0.0).unwrap();
        assert_eq!(k_analytic(&pure, 0.0).value, 1.0);

        let g = MixedPhotonState::gaussian(1.0, 3.0, 0.0).unwrap();
        assert_relative_eq!(k_analytic(&g, 0.0).value, 1.0 / 10f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(k_analytic(&g, 0.0).value, 0.31623, epsilon = 1e-5);

        let l = MixedPhotonState::lorentzian(1.0, 0.0, 0.0).unwrap();
        assert_relative_eq!(k_analytic(&l, 2f64.ln()).value, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn numeric_lorentzian_purity() {
        let s = MixedPhotonState::lorentzian(2.0, 1.0, 0.0).unwrap();
        let k = k_numeric(&s, 0.0, &QuadratureConfig::default()).unwrap();
        assert!((k.value - 0.5).abs() < 1e-6, "{}", k.value);
        assert_eq!(k.method, Method::Numeric);
    }

    #[test]
    fn numeric_pure_state() {
        for s in [
            MixedPhotonState::lorentzian(1.3, 0.0, 0.2).unwrap(),
            MixedPhotonState::gaussian(0.6, 0.0, -1.0).unwrap(),
        ] {
            let k = k_numeric(&s, 0.0, &QuadratureConfig::default()).unwrap();
            assert!((k.value - 1.0).abs() < 1e-8, "{}", k.value);
        }
    }

    #[test]
    fn numeric_gaussian_with_delay() {
        let s = MixedPhotonState::gaussian(1.0, 3.0, 0.0).unwrap();
        let k = k_numeric(&s, 0.5, &QuadratureConfig::default()).unwrap();
        let expected = (-0.25f64).exp() / 10f64.sqrt();
        assert_relative_eq!(expected, 0.24628, epsilon = 1e-5);
        assert!((k.value - expected).abs() < 1e-6, "{}", k.value);
    }

    #[test]
    fn cross_source_reduces_to_purity() {
        let s = MixedPhotonState::gaussian(1.0, 0.7, 0.0).unwrap();
        let k = k_cross(&s, &s, 0.0, &QuadratureConfig::default()).unwrap();
        assert!((k.value - k_analytic(&s, 0.0).value).abs() < 1e-6);
    }

    #[test]
    fn cross_detuned_pure_gaussians() {
        let a = MixedPhotonState::gaussian(1.0, 0.0, 0.0).unwrap();
        let b = MixedPhotonState::gaussian(1.0, 0.0, 2.0).unwrap();
        let k = k_cross(&a, &b, 0.0, &QuadratureConfig::default()).unwrap();
        assert!((k.value - (-1f64).exp()).abs() < 1e-8, "{}", k.value);
    }

    #[test]
    fn cross_far_detuned_is_distinguishable() {
        let a = MixedPhotonState::lorentzian(1.0, 0.5, 0.0).unwrap();
        let b = MixedPhotonState::lorentzian(1.0, 0.5, 100.0 * a.total_width()).unwrap();
        let k = k_cross(&a, &b, 0.0, &QuadratureConfig::default()).unwrap();
        assert!(k.value < 1e-3, "{}", k.value);
    }

    #[test]
    fn cross_rejects_unequal_widths_and_families() {
        let cfg = QuadratureConfig::default();
        let a = MixedPhotonState::gaussian(1.0, 0.5, 0.0).unwrap();
        let b = MixedPhotonState::gaussian(1.1, 0.5, 0.0).unwrap();
        assert!(matches!(
            k_cross(&a, &b, 0.0, &cfg),
            Err(Error::UnequalIntrinsicWidth { .. })
        ));
        let c = MixedPhotonState::lorentzian(1.0, 0.5, 0.0).unwrap();
        assert!(matches!(k_cross(&a, &c, 0.0, &cfg), Err(Error::FamilyMismatch(_))));
    }
}
