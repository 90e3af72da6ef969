//! Shared fixtures for the criterion benches.

use indist_core::MixedPhotonState;

/// Representative states spanning narrow to broad extrinsic widths.
pub fn fixture_states() -> Vec<(&'static str, MixedPhotonState)> {
    vec![
        ("lorentzian-eta1", MixedPhotonState::lorentzian(1.0, 0.5, 0.0).unwrap()),
        ("lorentzian-eta10", MixedPhotonState::lorentzian(1.0, 5.0, 0.0).unwrap()),
        ("gaussian-eta1", MixedPhotonState::gaussian(1.0, 1.0, 0.0).unwrap()),
        ("gaussian-eta10", MixedPhotonState::gaussian(1.0, 10.0, 0.0).unwrap()),
    ]
}
