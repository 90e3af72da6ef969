//! Hong-Ou-Mandel observables from `K(τ)`.
//!
//! With both photons entering a 50/50 beamsplitter, the probability of
//! finding both in one given port is `C_AA = (1 + K)/4` and the coincidence
//! probability is `C_AB = 1 - 2 C_AA = (1 - K)/2`.

use crate::error::{Error, Result};
use crate::indist::{analytic_value, k_numeric, Method};
use crate::oracle::QuadratureConfig;
use crate::spectral::MixedPhotonState;
use crate::spectral_filter::{filtered_state, k_filtered_numeric_at, transmission, FilterSpec};

/// Samples needed inside the expected dip width for [`dip_width`].
pub const MIN_DIP_SAMPLES: usize = 16;
/// Baseline reach required by [`visibility`], in pulse lifetimes.
pub const BASELINE_LIFETIMES: f64 = 8.0;
pub const DEFAULT_GRID_POINTS: usize = 201;

#[derive(Debug, Clone, PartialEq)]
pub struct CurveMeta {
    pub model: String,
    pub method: Method,
    /// Expected 1/e dip half-width, `1/Γ` or `1/σ_g` (of the filtered state
    /// where a filter applies).
    pub lifetime: f64,
    pub params: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomCurve {
    pub taus: Vec<f64>,
    /// `NaN` at failed points.
    pub k: Vec<f64>,
    pub c_aa: Vec<f64>,
    pub c_ab: Vec<f64>,
    /// Indices whose quadrature did not converge.
    pub failed: Vec<usize>,
    /// Filter transmission `C`, when a filter was applied.
    pub transmission: Option<f64>,
    pub meta: CurveMeta,
}

impl HomCurve {
    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }

    /// `(1 − K)`, i.e. `C_AB` rescaled so its far-delay level is 1.
    pub fn c_ab_normalized(&self) -> Vec<f64> {
        self.c_ab.iter().map(|c| 2.0 * c).collect()
    }
}

/// `c_aa` and `c_ab` for one sample; `c_ab + 2 c_aa == 1` holds exactly.
pub fn observables(k: f64) -> (f64, f64) {
    let c_aa = 0.25 * (1.0 + k.clamp(0.0, 1.0));
    (c_aa, 1.0 - 2.0 * c_aa)
}

/// `steps` equally spaced delays from `min` to `max` inclusive.
pub fn tau_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite()) || steps < 2 || min >= max {
        return Err(Error::InvalidGrid);
    }
    let n = (steps - 1) as f64;
    Ok((0..steps).map(|i| min + (max - min) * (i as f64 / n)).collect())
}

/// 201 delays spanning `±8` lifetimes, with `τ = 0` on the grid.
pub fn default_grid(state: &MixedPhotonState) -> Vec<f64> {
    let reach = BASELINE_LIFETIMES * state.lifetime();
    tau_grid(-reach, reach, DEFAULT_GRID_POINTS).expect("lifetime is positive")
}

fn check_grid(taus: &[f64]) -> Result<()> {
    if taus.is_empty() || taus.iter().any(|t| !t.is_finite()) || taus.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid);
    }
    Ok(())
}

/// Curve from an arbitrary `K(τ)` provider. Points where the provider
/// reports non-convergence are marked failed; other errors abort.
pub fn hom_curve_from<P>(taus: &[f64], meta: CurveMeta, mut provider: P) -> Result<HomCurve>
where
    P: FnMut(f64) -> Result<f64>,
{
    check_grid(taus)?;
    let mut curve = HomCurve {
        taus: taus.to_vec(),
        k: Vec::with_capacity(taus.len()),
        c_aa: Vec::with_capacity(taus.len()),
        c_ab: Vec::with_capacity(taus.len()),
        failed: Vec::new(),
        transmission: None,
        meta,
    };
    for (i, &tau) in taus.iter().enumerate() {
        match provider(tau) {
            Ok(k) => {
                let (aa, ab) = observables(k);
                curve.k.push(k);
                curve.c_aa.push(aa);
                curve.c_ab.push(ab);
            }
            Err(Error::NonConvergence { .. }) => {
                curve.failed.push(i);
                curve.k.push(f64::NAN);
                curve.c_aa.push(f64::NAN);
                curve.c_ab.push(f64::NAN);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(curve)
}

fn state_params(state: &MixedPhotonState) -> Vec<(String, f64)> {
    vec![
        ("intrinsic_width".into(), state.intrinsic_width()),
        ("extrinsic_width".into(), state.extrinsic_width()),
        ("center".into(), state.center()),
        ("eta".into(), state.eta()),
    ]
}

pub fn hom_curve(state: &MixedPhotonState, taus: &[f64], method: Method, cfg: &QuadratureConfig) -> Result<HomCurve> {
    let meta = CurveMeta {
        model: state.describe(),
        method,
        lifetime: state.lifetime(),
        params: state_params(state),
    };
    match method {
        Method::Analytic => hom_curve_from(taus, meta, |tau| Ok(analytic_value(state, tau))),
        Method::Numeric => {
            cfg.validate()?;
            hom_curve_from(taus, meta, |tau| Ok(k_numeric(state, tau, cfg)?.value))
        }
    }
}

/// Curve of a Gaussian state behind a centered Gaussian filter.
///
/// `Analytic` uses the filtered mixed state; `Numeric` integrates the
/// filtered overlap at every delay. Both are normalized per detected pair.
pub fn hom_curve_filtered(
    state: &MixedPhotonState,
    filter: &FilterSpec,
    taus: &[f64],
    method: Method,
    cfg: &QuadratureConfig,
) -> Result<HomCurve> {
    let filtered = filtered_state(state, filter)?;
    let mut params = state_params(state);
    params.push(("filter_width".into(), filter.width()));
    params.push(("filtered_intrinsic_width".into(), filtered.intrinsic_width()));
    params.push(("filtered_total_width".into(), filtered.total_width()));
    let meta = CurveMeta {
        model: format!(
            "{} behind {} filter (width={})",
            state.describe(),
            filter.kind(),
            filter.width()
        ),
        method,
        lifetime: filtered.lifetime(),
        params,
    };
    let mut curve = match method {
        Method::Analytic => hom_curve_from(taus, meta, |tau| Ok(analytic_value(&filtered, tau)))?,
        Method::Numeric => {
            cfg.validate()?;
            hom_curve_from(taus, meta, |tau| {
                Ok(k_filtered_numeric_at(state, filter, tau, cfg)?.k_filtered)
            })?
        }
    };
    curve.transmission = Some(match method {
        Method::Analytic => {
            let s = state.total_width();
            filter.width() / s.hypot(filter.width())
        }
        Method::Numeric => transmission(state, filter, cfg)?,
    });
    Ok(curve)
}

fn valid_samples(curve: &HomCurve) -> impl Iterator<Item = (f64, f64)> + '_ {
    curve
        .taus
        .iter()
        .zip(&curve.c_ab)
        .map(|(&t, &c)| (t, c))
        .filter(|(_, c)| c.is_finite())
}

/// `c_ab` at `τ = 0`, interpolated linearly if 0 falls between samples.
fn c_ab_at_zero(curve: &HomCurve) -> Result<f64> {
    let samples: Vec<(f64, f64)> = valid_samples(curve).collect();
    if let Some(&(_, c)) = samples.iter().find(|(t, _)| *t == 0.0) {
        return Ok(c);
    }
    samples
        .windows(2)
        .find(|w| w[0].0 < 0.0 && w[1].0 > 0.0)
        .map(|w| {
            let (t0, c0) = w[0];
            let (t1, c1) = w[1];
            c0 + (c1 - c0) * (-t0) / (t1 - t0)
        })
        .ok_or(Error::InvalidGrid)
}

/// Far-delay coincidence level: the mean `c_ab` over the outermost samples.
fn baseline(curve: &HomCurve) -> Result<f64> {
    let reach = valid_samples(curve).map(|(t, _)| t.abs()).fold(0.0, f64::max);
    let required = BASELINE_LIFETIMES * curve.meta.lifetime;
    if reach < required {
        return Err(Error::InsufficientBaseline {
            max_tau: reach,
            required,
        });
    }
    let outer: Vec<f64> = valid_samples(curve)
        .filter(|(t, _)| t.abs() == reach)
        .map(|(_, c)| c)
        .collect();
    Ok(outer.iter().sum::<f64>() / outer.len() as f64)
}

/// `(c_ab(∞) − c_ab(0)) / c_ab(∞)`, which equals `K(0)`.
pub fn visibility(curve: &HomCurve) -> Result<f64> {
    let base = baseline(curve)?;
    Ok((base - c_ab_at_zero(curve)?) / base)
}

/// Delay at which the dip depth `c_ab(∞) − c_ab(τ)` falls to `1/e` of its
/// value at `τ = 0`.
///
/// Found on each side of the dip by interpolating `ln(depth)` linearly
/// between the bracketing samples; sides that resolve are averaged.
pub fn dip_width(curve: &HomCurve) -> Result<f64> {
    let expected = curve.meta.lifetime;
    let inside = valid_samples(curve).filter(|(t, _)| t.abs() <= expected).count();
    if inside < MIN_DIP_SAMPLES {
        return Err(Error::InsufficientResolution { samples: inside });
    }
    let base = baseline(curve)?;
    let depth0 = base - c_ab_at_zero(curve)?;
    if depth0.is_nan() || depth0 <= 0.0 {
        return Err(Error::DipNotResolved);
    }
    let target = depth0 / std::f64::consts::E;
    let samples: Vec<(f64, f64)> = valid_samples(curve).map(|(t, c)| (t, base - c)).collect();

    let crossing = |side: &mut dyn Iterator<Item = (f64, f64)>| -> Option<f64> {
        let mut prev = (0.0, depth0);
        for (t, d) in side {
            if d <= target {
                let (t0, d0) = prev;
                if d <= 0.0 {
                    return Some(t0 + (t - t0) * (d0 - target) / (d0 - d));
                }
                let (l0, l1, lt) = (d0.ln(), d.ln(), target.ln());
                return Some(t0 + (t - t0) * (l0 - lt) / (l0 - l1));
            }
            prev = (t.abs(), d);
        }
        None
    };
    let right = crossing(&mut samples.iter().copied().filter(|(t, _)| *t > 0.0));
    let left = crossing(
        &mut samples
            .iter()
            .rev()
            .copied()
            .filter(|(t, _)| *t < 0.0)
            .map(|(t, d)| (-t, d)),
    );
    match (left, right) {
        (Some(l), Some(r)) => Ok(0.5 * (l + r)),
        (Some(w), None) | (None, Some(w)) => Ok(w),
        (None, None) => Err(Error::DipNotResolved),
    }
}
