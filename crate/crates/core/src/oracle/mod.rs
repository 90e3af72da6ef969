//! Independent integration engine backing every numeric result.

mod oscillatory;
mod overlap;
mod quadrature;

pub use oscillatory::{integrate_oscillatory, FourierPanels};
pub(crate) use overlap::average_over;
pub use overlap::{frequency_overlap, temporal_amplitude, time_overlap, time_overlap_direct, TimeOverlapTable};
pub use quadrature::{
    integrate, integrate_1d, integrate_real, try_integrate, try_integrate_line_split, Domain, QuadWarning, Quadrature,
    QuadratureConfig, Tails,
};
