//! Spectral filtering of a mixed photon state.
//!
//! A filter multiplies every component amplitude by a real transmission
//! amplitude `F(ν)` with peak `|F|² = 1`:
//!
//! - Gaussian: `|F(ν)|² = exp(-(ν - c)² / 2σ_F²)`
//! - Lorentzian: `|F(ν)|² = Γ_F² / ((ν - c)² + Γ_F²)`, `Γ_F` the HWHM
//!
//! The filtered indistinguishability is
//!
//! ```text
//! K' = ∬ dω_i dω_j f(ω_i) f(ω_j) |∫ dν |F(ν)|² g*_{ω_i}(ν) g_{ω_j}(ν)|² / C²
//! C  = ∫ dω f(ω) ∫ dν |F(ν)|² |g_ω(ν)|²
//! ```
//!
//! where `C` is the probability that the photon passes the filter.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::indist::Method;
use crate::oracle::{average_over, try_integrate, try_integrate_line_split, Domain, QuadratureConfig};
use crate::spectral::{Family, Lineshape, MixedPhotonState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FilterKind {
    Gaussian,
    Lorentzian,
}

impl fmt::Display for FilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FilterKind::Gaussian => "gaussian",
            FilterKind::Lorentzian => "lorentzian",
        })
    }
}

/// A passband filter. Without an explicit center it sits on the state center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSpec {
    kind: FilterKind,
    width: f64,
    center: Option<f64>,
}

impl FilterSpec {
    pub fn new(kind: FilterKind, width: f64) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::invalid("filter width", width, "must be positive and finite"));
        }
        Ok(Self {
            kind,
            width,
            center: None,
        })
    }

    /// Gaussian filter of intensity standard deviation `σ_F`.
    pub fn gaussian(sigma_f: f64) -> Result<Self> {
        Self::new(FilterKind::Gaussian, sigma_f)
    }

    /// Lorentzian filter of intensity HWHM `Γ_F`.
    pub fn lorentzian(gamma_f: f64) -> Result<Self> {
        Self::new(FilterKind::Lorentzian, gamma_f)
    }

    /// Filter of the state's family at width ratio `R`:
    /// `σ_F = R σ_g` or `Γ_F = R Γ / 2`.
    pub fn from_ratio(state: &MixedPhotonState, ratio: f64) -> Result<Self> {
        if !(ratio.is_finite() && ratio > 0.0) {
            return Err(Error::invalid("R", ratio, "must be positive and finite"));
        }
        let w = state.intrinsic_width();
        match state.family() {
            Family::Gaussian => Self::gaussian(ratio * w),
            Family::Lorentzian => Self::lorentzian(0.5 * ratio * w),
        }
    }

    pub fn with_center(mut self, center: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::invalid("filter center", center, "must be finite"));
        }
        self.center = Some(center);
        Ok(self)
    }

    pub fn kind(&self) -> FilterKind {
        self.kind
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn center(&self) -> Option<f64> {
        self.center
    }

    /// Width ratio `R` relative to `lineshape`: `σ_F/σ_g` or `2Γ_F/Γ`.
    pub fn ratio(&self, lineshape: &Lineshape) -> f64 {
        match lineshape.family() {
            Family::Gaussian => self.width / lineshape.intrinsic_width(),
            Family::Lorentzian => 2.0 * self.width / lineshape.intrinsic_width(),
        }
    }

    fn center_for(&self, state: &MixedPhotonState) -> f64 {
        self.center.unwrap_or(state.center())
    }

    /// `|F(ν)|²` for a filter centered at `center`.
    pub fn transmissivity(&self, center: f64, nu: f64) -> f64 {
        let d = nu - center;
        match self.kind {
            FilterKind::Gaussian => (-d * d / (2.0 * self.width * self.width)).exp(),
            FilterKind::Lorentzian => {
                let w2 = self.width * self.width;
                w2 / (d * d + w2)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilteredResult {
    pub k_filtered: f64,
    pub transmission: f64,
    /// `σ'`, known in closed form for Gaussian-on-Gaussian only.
    pub filtered_total_width: Option<f64>,
    /// `σ_g'`, known in closed form for Gaussian-on-Gaussian only.
    pub filtered_intrinsic_width: Option<f64>,
    pub method: Method,
    pub error_estimate: f64,
}

fn gaussian_pair(state: &MixedPhotonState, filter: &FilterSpec) -> Result<(f64, f64, f64)> {
    if state.family() != Family::Gaussian || filter.kind != FilterKind::Gaussian {
        return Err(Error::FamilyMismatch(format!(
            "closed form needs a gaussian state and filter, got {} state and {} filter",
            state.family(),
            filter.kind
        )));
    }
    if filter.center_for(state) != state.center() {
        return Err(Error::invalid(
            "filter center",
            filter.center_for(state),
            "closed form needs the filter on the state center",
        ));
    }
    Ok((state.intrinsic_width(), state.total_width(), filter.width))
}

/// Closed-form Gaussian filter on a Gaussian state, centered.
///
/// `σ_g' = σ_F σ_g / √(σ_g² + σ_F²)`, `σ' = σ_F σ / √(σ² + σ_F²)`,
/// `K' = σ_g' / σ'`, `C = σ_F / √(σ² + σ_F²)`.
pub fn apply_gaussian_filter(state: &MixedPhotonState, filter: &FilterSpec) -> Result<FilteredResult> {
    let (sg, s, sf) = gaussian_pair(state, filter)?;
    let intrinsic = sf * sg / sg.hypot(sf);
    let total = sf * s / s.hypot(sf);
    Ok(FilteredResult {
        k_filtered: (intrinsic / total).min(1.0),
        transmission: sf / s.hypot(sf),
        filtered_total_width: Some(total),
        filtered_intrinsic_width: Some(intrinsic),
        method: Method::Analytic,
        error_estimate: 0.0,
    })
}

/// The Gaussian mixed state left after a centered Gaussian filter, with
/// intrinsic width `σ_g'` and total width `σ'`.
pub fn filtered_state(state: &MixedPhotonState, filter: &FilterSpec) -> Result<MixedPhotonState> {
    let r = apply_gaussian_filter(state, filter)?;
    let (sg, s) = (r.filtered_intrinsic_width.unwrap(), r.filtered_total_width.unwrap());
    let sf = (s * s - sg * sg).max(0.0).sqrt();
    let sf = if sf <= 1e-12 * s { 0.0 } else { sf };
    MixedPhotonState::gaussian(sg, sf, state.center())
}

/// Finite window carried by the Gaussian factors of `|F|² g*_{ω_i} g_{ω_j}`,
/// from their combined precision; `None` when every factor is algebraic.
fn gaussian_window(state: &MixedPhotonState, filter: &FilterSpec, c: f64, wi: f64, wj: f64) -> Option<Domain> {
    let w = state.intrinsic_width();
    let mut precision = 0.0;
    let mut weighted = 0.0;
    if state.family() == Family::Gaussian {
        let p = 1.0 / (w * w);
        precision += p;
        weighted += p * 0.5 * (wi + wj);
    }
    if filter.kind == FilterKind::Gaussian {
        let p = 1.0 / (filter.width * filter.width);
        precision += p;
        weighted += p * c;
    }
    (precision > 0.0).then(|| Domain::line_truncated(weighted / precision, precision.sqrt().recip()))
}

fn filtered_overlap(
    state: &MixedPhotonState,
    filter: &FilterSpec,
    c: f64,
    wi: f64,
    wj: f64,
    tau: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    let ls = state.lineshape();
    let integrand = |nu: f64| {
        let pair = ls.amplitude_at(wi, nu).conj() * ls.amplitude_at(wj, nu);
        let delay = if tau == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::from_polar(1.0, -nu * tau)
        };
        Ok(pair * delay * filter.transmissivity(c, nu))
    };
    let q = match gaussian_window(state, filter, c, wi, wj) {
        Some(domain) => try_integrate(integrand, domain, &[wi, wj, c], cfg)?,
        None => {
            let (a, b) = (filter.width, 0.5 * state.intrinsic_width());
            try_integrate_line_split(integrand, &[wi, wj, c], a.min(b), a.max(b), cfg)?
        }
    };
    Ok(q.value)
}

/// Probability `C` that the photon passes the filter.
pub fn transmission(state: &MixedPhotonState, filter: &FilterSpec, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    let c = filter.center_for(state);
    let inner = cfg.nested(0.1);
    let (v, _) = average_over(state.distribution(), &[c], cfg, |w| {
        Ok(filtered_overlap(state, filter, c, w, w, 0.0, &inner)?.re)
    })?;
    Ok(v.min(1.0))
}

/// `K'` at zero delay by nested quadrature in the frequency domain.
pub fn k_filtered_numeric(
    state: &MixedPhotonState,
    filter: &FilterSpec,
    cfg: &QuadratureConfig,
) -> Result<FilteredResult> {
    k_filtered_numeric_at(state, filter, 0.0, cfg)
}

/// `K'(τ)`, with `e^{-iντ}` on one arm of the filtered overlap.
pub fn k_filtered_numeric_at(
    state: &MixedPhotonState,
    filter: &FilterSpec,
    tau: f64,
    cfg: &QuadratureConfig,
) -> Result<FilteredResult> {
    cfg.validate()?;
    if !tau.is_finite() {
        return Err(Error::invalid("tau", tau, "must be finite"));
    }
    let c = filter.center_for(state);
    let dist = state.distribution();
    let middle = cfg.nested(0.1);
    let inner = cfg.nested(0.01);
    let (num, num_err) = average_over(dist, &[c], cfg, |wi| {
        let (v, _) = average_over(dist, &[wi, c], &middle, |wj| {
            Ok(filtered_overlap(state, filter, c, wi, wj, tau, &inner)?.norm_sqr())
        })?;
        Ok(v)
    })?;
    let t = transmission(state, filter, cfg)?;
    let k = num / (t * t);
    let error_estimate = num_err / (t * t) + 2.0 * k * cfg.rel_tol;
    let (intrinsic, total) = match apply_gaussian_filter(state, filter) {
        Ok(r) => (r.filtered_intrinsic_width, r.filtered_total_width),
        Err(_) => (None, None),
    };
    Ok(FilteredResult {
        k_filtered: k,
        transmission: t,
        filtered_total_width: total,
        filtered_intrinsic_width: intrinsic,
        method: Method::Numeric,
        error_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn gaussian_spot_values() {
        let s = MixedPhotonState::gaussian(1.0, 3.0, 0.0).unwrap();
        let r = apply_gaussian_filter(&s, &FilterSpec::gaussian(0.5).unwrap()).unwrap();
        assert_relative_eq!(
            r.k_filtered,
            10.25f64.sqrt() / (1.25f64.sqrt() * 10f64.sqrt()),
            epsilon = 1e-14
        );
        assert!((r.k_filtered - 0.90554).abs() < 1e-5);
        assert!((r.transmission - 0.15617).abs() < 1e-5);
        assert_relative_eq!(
            r.filtered_intrinsic_width.unwrap(),
            0.5 / 1.25f64.sqrt(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn gaussian_limits() {
        let s = MixedPhotonState::gaussian(1.0, 3.0, 0.0).unwrap();
        let wide = apply_gaussian_filter(&s, &FilterSpec::gaussian(1e8).unwrap()).unwrap();
        assert!((wide.k_filtered - 1.0 / 10f64.sqrt()).abs() < 1e-9);
        assert!((wide.transmission - 1.0).abs() < 1e-9);
        let narrow = apply_gaussian_filter(&s, &FilterSpec::gaussian(1e-6).unwrap()).unwrap();
        assert!((narrow.k_filtered - 1.0).abs() < 1e-9);
    }

    #[test]
    fn closed_form_rejects_other_families_and_offsets() {
        let s = MixedPhotonState::gaussian(1.0, 3.0, 0.0).unwrap();
        assert!(apply_gaussian_filter(&s, &FilterSpec::lorentzian(1.0).unwrap()).is_err());
        let off = FilterSpec::gaussian(1.0).unwrap().with_center(0.5).unwrap();
        assert!(apply_gaussian_filter(&s, &off).is_err());
        let l = MixedPhotonState::lorentzian(1.0, 1.0, 0.0).unwrap();
        assert!(apply_gaussian_filter(&l, &FilterSpec::gaussian(1.0).unwrap()).is_err());
    }

    #[test]
    fn filtered_state_reproduces_closed_form() {
        let s = MixedPhotonState::gaussian(1.0, 3.0, 0.0).unwrap();
        let f = FilterSpec::gaussian(0.5).unwrap();
        let r = apply_gaussian_filter(&s, &f).unwrap();
        let fs = filtered_state(&s, &f).unwrap();
        assert_relative_eq!(
            fs.intrinsic_width(),
            r.filtered_intrinsic_width.unwrap(),
            epsilon = 1e-14
        );
        assert_relative_eq!(fs.total_width(), r.filtered_total_width.unwrap(), epsilon = 1e-14);
        assert_relative_eq!(crate::k_analytic(&fs, 0.0).value, r.k_filtered, epsilon = 1e-14);
    }

    #[test]
    fn numeric_matches_gaussian_closed_form() {
        let s = MixedPhotonState::gaussian(1.0, 3.0, 0.0).unwrap();
        let f = FilterSpec::gaussian(0.5).unwrap();
        let exact = apply_gaussian_filter(&s, &f).unwrap();
        let num = k_filtered_numeric(&s, &f, &cfg()).unwrap();
        assert!((num.k_filtered - exact.k_filtered).abs() < 1e-6, "{}", num.k_filtered);
        assert!(
            (num.transmission - exact.transmission).abs() < 1e-6,
            "{}",
            num.transmission
        );
    }

    #[test]
    fn lorentzian_transparent_limit() {
        let s = MixedPhotonState::from_eta(Family::Lorentzian, 1.0, 3.0, 0.0).unwrap();
        let f = FilterSpec::from_ratio(&s, 1e4).unwrap();
        let r = k_filtered_numeric(&s, &f, &cfg()).unwrap();
        assert!((r.k_filtered - 0.25).abs() < 1e-3, "{}", r.k_filtered);
        assert!(r.transmission > 0.999);
    }

    #[test]
    fn narrow_lorentzian_filter_restores_indistinguishability() {
        let s = MixedPhotonState::from_eta(Family::Lorentzian, 1.0, 3.0, 0.0).unwrap();
        let f = FilterSpec::from_ratio(&s, 0.05).unwrap();
        let r = k_filtered_numeric(&s, &f, &cfg()).unwrap();
        assert!(r.k_filtered > 0.95, "{}", r.k_filtered);
        assert!(r.transmission < 0.1);
    }

    #[test]
    fn delayed_filtered_gaussian_follows_filtered_state() {
        let s = MixedPhotonState::gaussian(1.0, 2.0, 0.0).unwrap();
        let f = FilterSpec::gaussian(0.8).unwrap();
        let tau = 0.9;
        let num = k_filtered_numeric_at(&s, &f, tau, &cfg()).unwrap();
        let expected = crate::k_analytic(&filtered_state(&s, &f).unwrap(), tau).value;
        assert!(
            (num.k_filtered - expected).abs() < 1e-6,
            "{} vs {expected}",
            num.k_filtered
        );
    }

    #[test]
    fn ratio_convention() {
        let l = MixedPhotonState::lorentzian(2.0, 1.0, 0.0).unwrap();
        let f = FilterSpec::from_ratio(&l, 0.5).unwrap();
        assert_eq!(f.width(), 0.5);
        assert_eq!(f.ratio(l.lineshape()), 0.5);
        assert_eq!(f.transmissivity(0.0, 0.5), 0.5);
        let g = FilterSpec::gaussian(2.0).unwrap();
        assert_relative_eq!(g.transmissivity(1.0, 3.0), (-0.5f64).exp(), epsilon = 1e-15);
    }
}
