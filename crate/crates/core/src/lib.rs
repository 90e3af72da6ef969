pub mod error;
pub mod hom;
pub mod indist;
pub mod oracle;
pub mod spdc;
pub mod spectral;
pub mod spectral_filter;

pub use error::{Error, Result};
pub use hom::{
    default_grid, dip_width, hom_curve, hom_curve_filtered, hom_curve_from, tau_grid, visibility, CurveMeta, HomCurve,
};
pub use indist::{k_analytic, k_cross, k_numeric, KResult, Method};
pub use oracle::QuadratureConfig;
pub use spdc::{
    filter_fwhm_from_sigma, filter_sigma_from_wavelength, heralded_indistinguishability, pump_duration_from_sigma,
    pump_sigma_from_duration, SpdcSetup,
};
pub use spectral::{CenterDistribution, DistributionKind, Family, Lineshape, MixedPhotonState};
pub use spectral_filter::{
    apply_gaussian_filter, filtered_state, k_filtered_numeric, k_filtered_numeric_at, transmission, FilterKind,
    FilterSpec, FilteredResult,
};
