//! Heralded photons from thin-crystal SPDC.
//!
//! The heralded signal is modelled as a Gaussian mixed state whose intrinsic
//! width equals the pump's spectral width. The extrinsic width is taken as
//! `σ_f = η σ_g` with `η` an input.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::indist::Method;
use crate::spectral::MixedPhotonState;
use crate::spectral_filter::{apply_gaussian_filter, FilterSpec, FilteredResult};

/// Speed of light in nm/ps.
pub const SPEED_OF_LIGHT_NM_PER_PS: f64 = 299_792.458;
pub const DEFAULT_SIGNAL_CENTER_NM: f64 = 800.0;

/// Intensity FWHM over standard deviation, `2√(2 ln 2)`.
fn fwhm_per_sigma() -> f64 {
    2.0 * (2.0 * LN_2).sqrt()
}

fn positive(name: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::invalid(name, v, "must be positive and finite"))
    }
}

/// `σ_g` in rad/ps for a transform-limited Gaussian pump of intensity FWHM
/// `fwhm_fs`: the angular-frequency FWHM is `4 ln 2 / Δt`.
pub fn pump_sigma_from_duration(fwhm_fs: f64) -> Result<f64> {
    let dt_ps = positive("pump duration", fwhm_fs)? * 1e-3;
    Ok(4.0 * LN_2 / dt_ps / fwhm_per_sigma())
}

/// Inverse of [`pump_sigma_from_duration`].
pub fn pump_duration_from_sigma(sigma_g: f64) -> Result<f64> {
    let fwhm = positive("sigma_g", sigma_g)? * fwhm_per_sigma();
    Ok(4.0 * LN_2 / fwhm * 1e3)
}

/// `σ_F` in rad/ps for a filter of wavelength FWHM `fwhm_nm` at `center_nm`,
/// via `Δω = 2πc Δλ / λ²`.
pub fn filter_sigma_from_wavelength(fwhm_nm: f64, center_nm: f64) -> Result<f64> {
    let dl = positive("filter bandwidth", fwhm_nm)?;
    let l = positive("center wavelength", center_nm)?;
    Ok(2.0 * PI * SPEED_OF_LIGHT_NM_PER_PS * dl / (l * l) / fwhm_per_sigma())
}

/// Inverse of [`filter_sigma_from_wavelength`], in nm.
pub fn filter_fwhm_from_sigma(sigma_f: f64, center_nm: f64) -> Result<f64> {
    let s = positive("sigma_F", sigma_f)?;
    let l = positive("center wavelength", center_nm)?;
    Ok(s * fwhm_per_sigma() * l * l / (2.0 * PI * SPEED_OF_LIGHT_NM_PER_PS))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpdcSetup {
    /// Pump intensity FWHM, fs.
    pub pump_fwhm_fs: f64,
    /// Signal center wavelength, nm.
    pub signal_center_nm: f64,
    /// Filter FWHM in wavelength, nm; `None` for no filter.
    pub filter_fwhm_nm: Option<f64>,
    /// `σ_f / σ_g`.
    pub eta: f64,
}

impl SpdcSetup {
    pub fn new(pump_fwhm_fs: f64, eta: f64) -> Result<Self> {
        let s = Self {
            pump_fwhm_fs,
            signal_center_nm: DEFAULT_SIGNAL_CENTER_NM,
            filter_fwhm_nm: None,
            eta,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_filter(mut self, fwhm_nm: f64) -> Result<Self> {
        self.filter_fwhm_nm = Some(fwhm_nm);
        self.validate()?;
        Ok(self)
    }

    pub fn with_signal_center(mut self, center_nm: f64) -> Result<Self> {
        self.signal_center_nm = center_nm;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        positive("pump duration", self.pump_fwhm_fs)?;
        positive("center wavelength", self.signal_center_nm)?;
        if let Some(f) = self.filter_fwhm_nm {
            positive("filter bandwidth", f)?;
        }
        if !(self.eta.is_finite() && self.eta >= 0.0) {
            return Err(Error::invalid("eta", self.eta, "must be nonnegative and finite"));
        }
        Ok(())
    }

    pub fn sigma_g(&self) -> Result<f64> {
        pump_sigma_from_duration(self.pump_fwhm_fs)
    }

    pub fn filter_sigma(&self) -> Result<Option<f64>> {
        self.filter_fwhm_nm
            .map(|f| filter_sigma_from_wavelength(f, self.signal_center_nm))
            .transpose()
    }

    /// Heralded signal state, centered at zero detuning.
    pub fn state(&self) -> Result<MixedPhotonState> {
        let sg = self.sigma_g()?;
        MixedPhotonState::gaussian(sg, self.eta * sg, 0.0)
    }
}

/// `K'` of the heralded signal photon, behind the filter when one is set.
pub fn heralded_indistinguishability(setup: &SpdcSetup) -> Result<FilteredResult> {
    setup.validate()?;
    let state = setup.state()?;
    match setup.filter_sigma()? {
        Some(sf) => apply_gaussian_filter(&state, &FilterSpec::gaussian(sf)?),
        None => Ok(FilteredResult {
            k_filtered: state.intrinsic_width() / state.total_width(),
            transmission: 1.0,
            filtered_total_width: Some(state.total_width()),
            filtered_intrinsic_width: Some(state.intrinsic_width()),
            method: Method::Analytic,
            error_estimate: 0.0,
        }),
    }
}
