//! Lineshapes, center-frequency distributions and mixed single-photon states.
//!
//! A transform-limited pulse centered at `ω` has spectral amplitude `g_ω(ν)`.
//! A mixed photon is the incoherent average of such pulses over a center
//! distribution `f(ω)`. Frequencies are angular, in rad/ps.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Lorentzian,
    Gaussian,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Lorentzian => "lorentzian",
            Family::Gaussian => "gaussian",
        })
    }
}

/// Amplitude lineshape of one transform-limited component.
///
/// Lorentzian: `intrinsic_width` is the decay rate `Γ`, so the intensity HWHM
/// is `Γ/2`. Gaussian: `intrinsic_width` is `σ_g`, the standard deviation of
/// the intensity spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lineshape {
    family: Family,
    intrinsic_width: f64,
}

impl Lineshape {
    pub fn new(family: Family, intrinsic_width: f64) -> Result<Self> {
        if !(intrinsic_width > 0.0 && intrinsic_width.is_finite()) {
            return Err(Error::invalid(
                "intrinsic_width",
                intrinsic_width,
                "must be positive and finite",
            ));
        }
        Ok(Self {
            family,
            intrinsic_width,
        })
    }

    pub fn lorentzian(gamma: f64) -> Result<Self> {
        Self::new(Family::Lorentzian, gamma)
    }

    pub fn gaussian(sigma_g: f64) -> Result<Self> {
        Self::new(Family::Gaussian, sigma_g)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn intrinsic_width(&self) -> f64 {
        self.intrinsic_width
    }

    /// `g_ω(ν)`; rejects non-finite arguments.
    pub fn amplitude(&self, center: f64, nu: f64) -> Result<Complex64> {
        if !center.is_finite() {
            return Err(Error::invalid("center", center, "must be finite"));
        }
        if !nu.is_finite() {
            return Err(Error::invalid("nu", nu, "must be finite"));
        }
        Ok(self.amplitude_at(center, nu))
    }

    pub(crate) fn amplitude_at(&self, center: f64, nu: f64) -> Complex64 {
        let w = self.intrinsic_width;
        let d = nu - center;
        match self.family {
            Family::Lorentzian => {
                let half = 0.5 * w;
                (half.sqrt() / PI.sqrt()) / Complex64::new(d, half)
            }
            Family::Gaussian => {
                let norm = (2.0 * PI * w * w).powf(-0.25);
                Complex64::new(norm * (-d * d / (4.0 * w * w)).exp(), 0.0)
            }
        }
    }

    /// `|g_ω(ν)|²`, a normalized density in `ν`.
    pub fn intensity(&self, center: f64, nu: f64) -> f64 {
        let w = self.intrinsic_width;
        let d = nu - center;
        match self.family {
            Family::Lorentzian => {
                let half = 0.5 * w;
                half / (PI * (d * d + half * half))
            }
            Family::Gaussian => (-d * d / (2.0 * w * w)).exp() / (2.0 * PI * w * w).sqrt(),
        }
    }

    /// `|⟨ω_i|ω_j⟩|²` for two pulses of this lineshape.
    pub fn tl_overlap_sq(&self, omega_i: f64, omega_j: f64) -> f64 {
        let w = self.intrinsic_width;
        let d = omega_i - omega_j;
        match self.family {
            Family::Lorentzian => w * w / (d * d + w * w),
            Family::Gaussian => (-d * d / (4.0 * w * w)).exp(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistributionKind {
    Delta,
    Lorentzian,
    Gaussian,
}

/// Distribution `f(ω)` of component center frequencies.
///
/// `extrinsic_width` is `Γ′` (HWHM) for Lorentzian, `σ_f` for Gaussian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterDistribution {
    kind: DistributionKind,
    extrinsic_width: f64,
    center: f64,
}

impl CenterDistribution {
    pub fn delta(center: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::invalid("center", center, "must be finite"));
        }
        Ok(Self {
            kind: DistributionKind::Delta,
            extrinsic_width: 0.0,
            center,
        })
    }

    pub fn lorentzian(gamma_prime: f64, center: f64) -> Result<Self> {
        Self::spread(DistributionKind::Lorentzian, gamma_prime, center)
    }

    pub fn gaussian(sigma_f: f64, center: f64) -> Result<Self> {
        Self::spread(DistributionKind::Gaussian, sigma_f, center)
    }

    /// A distribution of the given family; zero width collapses to `Delta`.
    pub fn of_family(family: Family, width: f64, center: f64) -> Result<Self> {
        if width == 0.0 {
            return Self::delta(center);
        }
        match family {
            Family::Lorentzian => Self::lorentzian(width, center),
            Family::Gaussian => Self::gaussian(width, center),
        }
    }

    fn spread(kind: DistributionKind, width: f64, center: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::invalid(
                "extrinsic_width",
                width,
                "must be positive and finite (use a delta distribution for zero width)",
            ));
        }
        if !center.is_finite() {
            return Err(Error::invalid("center", center, "must be finite"));
        }
        Ok(Self {
            kind,
            extrinsic_width: width,
            center,
        })
    }

    pub fn kind(&self) -> DistributionKind {
        self.kind
    }

    pub fn extrinsic_width(&self) -> f64 {
        self.extrinsic_width
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn family(&self) -> Option<Family> {
        match self.kind {
            DistributionKind::Delta => None,
            DistributionKind::Lorentzian => Some(Family::Lorentzian),
            DistributionKind::Gaussian => Some(Family::Gaussian),
        }
    }

    /// Density `f(ω)`. Not defined pointwise for `Delta`, which returns 0.
    pub fn density(&self, omega: f64) -> f64 {
        let w = self.extrinsic_width;
        let d = omega - self.center;
        match self.kind {
            DistributionKind::Delta => 0.0,
            DistributionKind::Lorentzian => w / (PI * (d * d + w * w)),
            DistributionKind::Gaussian => (-d * d / (2.0 * w * w)).exp() / (2.0 * PI * w * w).sqrt(),
        }
    }
}

/// `ρ = ∫ dω f(ω) |ω⟩⟨ω|` with a shared intrinsic lineshape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedPhotonState {
    lineshape: Lineshape,
    distribution: CenterDistribution,
}

impl MixedPhotonState {
    /// Rejects mixed families, e.g. a Gaussian `f` over a Lorentzian `g`.
    pub fn new(lineshape: Lineshape, distribution: CenterDistribution) -> Result<Self> {
        if let Some(family) = distribution.family() {
            if family != lineshape.family() {
                return Err(Error::FamilyMismatch(format!(
                    "{family} center distribution over a {} lineshape",
                    lineshape.family()
                )));
            }
        }
        Ok(Self {
            lineshape,
            distribution,
        })
    }

    pub fn lorentzian(gamma: f64, gamma_prime: f64, center: f64) -> Result<Self> {
        Self::new(
            Lineshape::lorentzian(gamma)?,
            CenterDistribution::of_family(Family::Lorentzian, gamma_prime, center)?,
        )
    }

    pub fn gaussian(sigma_g: f64, sigma_f: f64, center: f64) -> Result<Self> {
        Self::new(
            Lineshape::gaussian(sigma_g)?,
            CenterDistribution::of_family(Family::Gaussian, sigma_f, center)?,
        )
    }

    /// Builds a state from the width ratio `η` (`2Γ′/Γ` or `σ_f/σ_g`).
    pub fn from_eta(family: Family, intrinsic_width: f64, eta: f64, center: f64) -> Result<Self> {
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(Error::invalid("eta", eta, "must be non-negative and finite"));
        }
        match family {
            Family::Lorentzian => Self::lorentzian(intrinsic_width, 0.5 * eta * intrinsic_width, center),
            Family::Gaussian => Self::gaussian(intrinsic_width, eta * intrinsic_width, center),
        }
    }

    pub fn lineshape(&self) -> &Lineshape {
        &self.lineshape
    }

    pub fn distribution(&self) -> &CenterDistribution {
        &self.distribution
    }

    pub fn family(&self) -> Family {
        self.lineshape.family()
    }

    pub fn intrinsic_width(&self) -> f64 {
        self.lineshape.intrinsic_width()
    }

    pub fn extrinsic_width(&self) -> f64 {
        self.distribution.extrinsic_width()
    }

    pub fn center(&self) -> f64 {
        self.distribution.center()
    }

    pub fn is_pure(&self) -> bool {
        self.distribution.kind() == DistributionKind::Delta
    }

    /// Extrinsic-to-intrinsic width ratio.
    pub fn eta(&self) -> f64 {
        match self.family() {
            Family::Lorentzian => 2.0 * self.extrinsic_width() / self.intrinsic_width(),
            Family::Gaussian => self.extrinsic_width() / self.intrinsic_width(),
        }
    }

    /// `Γ₂ = Γ′ + Γ/2` (Lorentzian HWHM) or `σ = √(σ_g² + σ_f²)`.
    pub fn total_width(&self) -> f64 {
        let g = self.intrinsic_width();
        let f = self.extrinsic_width();
        match self.family() {
            Family::Lorentzian => f + 0.5 * g,
            Family::Gaussian => g.hypot(f),
        }
    }

    /// Characteristic pulse duration: `1/Γ` or `1/σ_g`.
    pub fn lifetime(&self) -> f64 {
        1.0 / self.intrinsic_width()
    }

    /// `S(ν) = ∫ dω f(ω) |g_ω(ν)|²`.
    pub fn total_spectrum(&self, nu: f64) -> f64 {
        if self.is_pure() {
            return self.lineshape.intensity(self.center(), nu);
        }
        let w = self.total_width();
        let d = nu - self.center();
        match self.family() {
            Family::Lorentzian => w / (PI * (d * d + w * w)),
            Family::Gaussian => (-d * d / (2.0 * w * w)).exp() / (2.0 * PI * w * w).sqrt(),
        }
    }

    pub fn describe(&self) -> String {
        match self.family() {
            Family::Lorentzian => format!(
                "lorentzian(gamma={}, gamma_prime={}, center={})",
                self.intrinsic_width(),
                self.extrinsic_width(),
                self.center()
            ),
            Family::Gaussian => format!(
                "gaussian(sigma_g={}, sigma_f={}, center={})",
                self.intrinsic_width(),
                self.extrinsic_width(),
                self.center()
            ),
        }
    }
}
