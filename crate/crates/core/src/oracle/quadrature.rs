//! Adaptive Gauss-Kronrod quadrature on finite, semi-infinite and infinite
//! domains.
//!
//! Every numeric route in the crate goes through [`integrate`]. Integrands are
//! complex valued; real integrands use the imaginary part as zero. Infinite
//! domains are either truncated at `center ± M·scale` (fast-decaying
//! integrands) or mapped onto a finite interval by a rational change of
//! variables (algebraically decaying integrands):
//!
//! ```text
//! line:      x = c + s·u/(1 − u²),   u ∈ (−1, 1)
//! half-line: x = a + s·u/(1 − u),    u ∈ [0, 1)
//! ```
//!
//! The global adaptive strategy bisects the panel with the largest error
//! estimate until the summed estimate drops below `max(rel_tol·|I|, abs_tol)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerances and domain controls for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Half-width of truncated domains in units of the integrand scale.
    pub domain_halfwidth_multiplier: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            domain_halfwidth_multiplier: 12.0,
            max_subdivisions: 1 << 14,
        }
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::invalid("rel_tol", self.rel_tol, "must be positive"));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::invalid("abs_tol", self.abs_tol, "must be positive"));
        }
        if !(self.domain_halfwidth_multiplier >= 6.0 && self.domain_halfwidth_multiplier.is_finite()) {
            return Err(Error::invalid(
                "domain_halfwidth_multiplier",
                self.domain_halfwidth_multiplier,
                "must be at least 6",
            ));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::invalid("max_subdivisions", 0.0, "must be positive"));
        }
        Ok(())
    }

    /// Tolerances for an integral nested inside another one. The inner
    /// integral must be resolved more tightly than the outer target.
    pub(crate) fn nested(&self, factor: f64) -> Self {
        Self {
            rel_tol: self.rel_tol * factor,
            abs_tol: self.abs_tol * factor,
            ..*self
        }
    }
}

/// How an infinite domain is made finite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tails {
    /// Cut at `center ± M·scale`; suitable for Gaussian decay.
    Truncate,
    /// Rational map onto a finite interval; suitable for algebraic decay.
    Map,
}

/// Integration domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Interval {
        a: f64,
        b: f64,
    },
    /// `[start, ∞)`, always mapped.
    HalfLine {
        start: f64,
        scale: f64,
    },
    /// `(−∞, ∞)`.
    Line {
        center: f64,
        scale: f64,
        tails: Tails,
    },
}

impl Domain {
    pub fn line_truncated(center: f64, scale: f64) -> Self {
        Domain::Line {
            center,
            scale,
            tails: Tails::Truncate,
        }
    }

    pub fn line_mapped(center: f64, scale: f64) -> Self {
        Domain::Line {
            center,
            scale,
            tails: Tails::Map,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadWarning {
    /// Integrand at the truncation edges is not negligible.
    Truncation { tail_estimate: f64 },
}

/// An integral value with its error estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
    pub warnings: Vec<QuadWarning>,
}

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_460,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_958_109_831,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

// Gauss weights for the odd-indexed Kronrod nodes.
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

pub(crate) struct PanelEstimate {
    pub value: Complex64,
    pub error: f64,
    /// Error level below which refinement cannot help (cancellation).
    pub floor: f64,
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    floor: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One Gauss-Kronrod panel: `(value, error estimate, roundoff floor)`.
fn kronrod21<F>(f: &mut F, a: f64, b: f64) -> Result<PanelEstimate>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center)?;
    let mut kronrod = fc * WGK[10];
    let mut abs_sum = fc.norm() * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut values = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 10];

    for (j, (&x, &w)) in XGK[..10].iter().zip(&WGK[..10]).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        values[j] = (f1, f2);
        kronrod += (f1 + f2) * w;
        abs_sum += (f1.norm() + f2.norm()) * w;
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }

    let mean = kronrod * 0.5;
    let mut asc = WGK[10] * (fc - mean).norm();
    for (j, &(f1, f2)) in values.iter().enumerate() {
        asc += WGK[j] * ((f1 - mean).norm() + (f2 - mean).norm());
    }

    let result = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).norm();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    Ok(PanelEstimate {
        value: result,
        error: err,
        floor,
    })
}

/// Integrates `f` over `domain`, honoring the breakpoints that fall inside it.
pub fn integrate<F>(f: F, domain: Domain, breakpoints: &[f64], cfg: &QuadratureConfig) -> Result<Quadrature>
where
    F: FnMut(f64) -> Complex64,
{
    let mut f = f;
    try_integrate(|x| Ok(f(x)), domain, breakpoints, cfg)
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F>(f: F, domain: Domain, breakpoints: &[f64], cfg: &QuadratureConfig) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let mut f = f;
    let q = integrate(|x| Complex64::new(f(x), 0.0), domain, breakpoints, cfg)?;
    Ok((q.value.re, q.error))
}

/// [`integrate`] over the whole real line, scaled around `center`.
pub fn integrate_1d<F>(f: F, center: f64, scale: f64, tails: Tails, cfg: &QuadratureConfig) -> Result<Quadrature>
where
    F: FnMut(f64) -> Complex64,
{
    integrate(f, Domain::Line { center, scale, tails }, &[], cfg)
}

/// Fallible-integrand form, used when the integrand is itself an integral.
pub fn try_integrate<F>(mut f: F, domain: Domain, breakpoints: &[f64], cfg: &QuadratureConfig) -> Result<Quadrature>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let mut evaluations = 0usize;
    let mut warnings = Vec::new();

    match domain {
        Domain::Interval { a, b } => {
            check_finite(&[a, b])?;
            let (lo, hi, sign) = if a <= b { (a, b, 1.0) } else { (b, a, -1.0) };
            let cuts = interior_cuts(lo, hi, breakpoints.iter().copied());
            let mut g = |x: f64| {
                evaluations += 1;
                f(x)
            };
            let mut q = adapt(&mut g, &cuts, cfg)?;
            q.value *= sign;
            q.evaluations = evaluations;
            Ok(q)
        }
        Domain::HalfLine { start, scale } => {
            check_finite(&[start, scale])?;
            check_scale(scale)?;
            let to_u = |x: f64| {
                let v = (x - start) / scale;
                v / (1.0 + v)
            };
            let cuts = interior_cuts(0.0, 1.0, breakpoints.iter().filter(|&&x| x > start).map(|&x| to_u(x)));
            let mut g = |u: f64| {
                let om = 1.0 - u;
                let x = start + scale * u / om;
                let jac = scale / (om * om);
                evaluations += 1;
                Ok(if jac.is_finite() {
                    f(x)? * jac
                } else {
                    Complex64::new(0.0, 0.0)
                })
            };
            let mut q = adapt(&mut g, &cuts, cfg)?;
            q.evaluations = evaluations;
            Ok(q)
        }
        Domain::Line {
            center,
            scale,
            tails: Tails::Truncate,
        } => {
            check_finite(&[center, scale])?;
            check_scale(scale)?;
            let half = cfg.domain_halfwidth_multiplier * scale;
            let (lo, hi) = (center - half, center + half);
            let cuts = interior_cuts(lo, hi, breakpoints.iter().copied());
            let edge = (f(lo)?.norm() + f(hi)?.norm()) * scale;
            let mut g = |x: f64| {
                evaluations += 1;
                f(x)
            };
            let mut q = adapt(&mut g, &cuts, cfg)?;
            if edge > cfg.abs_tol.max(cfg.rel_tol * q.value.norm()) {
                warnings.push(QuadWarning::Truncation { tail_estimate: edge });
            }
            q.evaluations = evaluations + 2;
            q.warnings = warnings;
            Ok(q)
        }
        Domain::Line {
            center,
            scale,
            tails: Tails::Map,
        } => {
            check_finite(&[center, scale])?;
            check_scale(scale)?;
            let to_u = |x: f64| {
                let v = (x - center) / scale;
                2.0 * v / (1.0 + (1.0 + 4.0 * v * v).sqrt())
            };
            let cuts = interior_cuts(-1.0, 1.0, breakpoints.iter().map(|&x| to_u(x)));
            let mut g = |u: f64| {
                let om = 1.0 - u * u;
                let x = center + scale * u / om;
                let jac = scale * (1.0 + u * u) / (om * om);
                evaluations += 1;
                Ok(if jac.is_finite() && x.is_finite() {
                    f(x)? * jac
                } else {
                    Complex64::new(0.0, 0.0)
                })
            };
            let mut q = adapt(&mut g, &cuts, cfg)?;
            q.evaluations = evaluations;
            Ok(q)
        }
    }
}

/// `∫ f` over the real line for integrands built from algebraic peaks of
/// width at least `fine` sitting at `points`, with overall extent ≲ `coarse`.
///
/// The line is cut at the sorted points. Each piece is graded
/// logarithmically away from its peak ends, `x = p + fine·(e^v − 1)`, so all
/// scales between `fine` and `coarse` cost about the same. The outer tails
/// continue beyond `100·coarse` with a rational map.
pub fn try_integrate_line_split<F>(
    mut f: F,
    points: &[f64],
    fine: f64,
    coarse: f64,
    cfg: &QuadratureConfig,
) -> Result<Quadrature>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    check_finite(points)?;
    check_scale(fine)?;
    check_scale(coarse)?;
    let mut pts: Vec<f64> = points.to_vec();
    if pts.is_empty() {
        pts.push(0.0);
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let (lo, hi) = (pts[0], pts[pts.len() - 1]);
    let far = 100.0 * coarse.max(fine).max(hi - lo);
    let share = cfg.with_abs_tol(cfg.abs_tol / (2 * pts.len() + 2) as f64);

    let mut total = Quadrature {
        value: Complex64::new(0.0, 0.0),
        error: 0.0,
        evaluations: 0,
        subdivisions: 0,
        warnings: Vec::new(),
    };
    let mut add = |q: Quadrature| {
        total.value += q.value;
        total.error += q.error;
        total.evaluations += q.evaluations;
        total.subdivisions += q.subdivisions;
        total.warnings.extend(q.warnings);
    };
    // ∫_p^{p + dir·len} f, graded from p.
    let graded = |f: &mut F, p: f64, dir: f64, len: f64| -> Result<Quadrature> {
        let top = (len / fine).ln_1p();
        try_integrate(
            |v| {
                let e = v.exp();
                Ok(f(p + dir * fine * (e - 1.0))? * (fine * e))
            },
            Domain::Interval { a: 0.0, b: top },
            &[],
            &share,
        )
    };
    add(graded(&mut f, lo, -1.0, far)?);
    add(try_integrate(
        |x| f(2.0 * lo - x),
        Domain::HalfLine {
            start: lo + far,
            scale: far,
        },
        &[],
        &share,
    )?);
    for w in pts.windows(2) {
        let half = 0.5 * (w[1] - w[0]);
        add(graded(&mut f, w[0], 1.0, half)?);
        add(graded(&mut f, w[1], -1.0, half)?);
    }
    add(graded(&mut f, hi, 1.0, far)?);
    add(try_integrate(
        &mut f,
        Domain::HalfLine {
            start: hi + far,
            scale: far,
        },
        &[],
        &share,
    )?);
    Ok(total)
}

fn check_finite(xs: &[f64]) -> Result<()> {
    match xs.iter().find(|x| !x.is_finite()) {
        Some(&x) => Err(Error::invalid("domain", x, "must be finite")),
        None => Ok(()),
    }
}

fn check_scale(scale: f64) -> Result<()> {
    if scale > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("scale", scale, "must be positive"))
    }
}

/// Sorted panel endpoints `lo = p0 < p1 < … < pn = hi`.
pub(crate) fn interior_cuts(lo: f64, hi: f64, points: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut cuts = vec![lo];
    let mut inner: Vec<f64> = points.filter(|&p| p > lo && p < hi && p.is_finite()).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    cuts.extend(inner);
    cuts.push(hi);
    cuts
}

fn adapt<F>(f: &mut F, cuts: &[f64], cfg: &QuadratureConfig) -> Result<Quadrature>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    adapt_with(|a, b| kronrod21(f, a, b), cuts, cfg)
}

/// Global adaptive bisection driven by an arbitrary panel rule on `[a, b]`.
pub(crate) fn adapt_with<R>(mut rule: R, cuts: &[f64], cfg: &QuadratureConfig) -> Result<Quadrature>
where
    R: FnMut(f64, f64) -> Result<PanelEstimate>,
{
    let mut heap = BinaryHeap::with_capacity(64);
    let mut total = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut floor = 0.0;
    for w in cuts.windows(2) {
        let p = rule(w[0], w[1])?;
        total += p.value;
        error += p.error;
        floor += p.floor;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value: p.value,
            error: p.error,
            floor: p.floor,
        });
    }

    let mut subdivisions = heap.len();
    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * total.norm());
        if error <= target || error <= 2.0 * floor {
            break;
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::NonConvergence {
                value: total.norm(),
                error_estimate: error,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Panel has collapsed to adjacent floats; nothing left to refine.
            return Err(Error::NonConvergence {
                value: total.norm(),
                error_estimate: error,
                subdivisions,
            });
        }
        let left = rule(worst.a, mid)?;
        let right = rule(mid, worst.b)?;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        floor += left.floor + right.floor - worst.floor;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: left.value,
            error: left.error,
            floor: left.floor,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: right.value,
            error: right.error,
            floor: right.floor,
        });
        subdivisions += 1;
    }

    // Re-sum to shed the drift of the running totals.
    let (value, error) = heap
        .iter()
        .fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), p| (v + p.value, e + p.error));
    Ok(Quadrature {
        value,
        error,
        evaluations: 0,
        subdivisions,
        warnings: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn gaussian_density_truncated() {
        let s = 0.37;
        let (v, _) = integrate_real(
            |x| (-(x - 1.0) * (x - 1.0) / (2.0 * s * s)).exp() / (2.0 * PI * s * s).sqrt(),
            Domain::line_truncated(1.0, s),
            &[],
            &cfg(),
        )
        .unwrap();
        assert!((v - 1.0).abs() < 1e-9, "{v}");
    }

    #[test]
    fn lorentzian_density_mapped() {
        let (v, _) = integrate_real(
            |x| 1.0 / (PI * (x * x + 1.0)),
            Domain::line_mapped(0.0, 1.0),
            &[],
            &cfg(),
        )
        .unwrap();
        assert!((v - 1.0).abs() < 1e-8, "{v}");
    }

    #[test]
    fn half_line_exponential() {
        let (v, _) = integrate_real(
            |x| 3.0 * (-3.0 * (x - 2.0)).exp(),
            Domain::HalfLine {
                start: 2.0,
                scale: 1.0 / 3.0,
            },
            &[],
            &cfg(),
        )
        .unwrap();
        assert!((v - 1.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn reversed_interval_flips_sign() {
        let (v, _) = integrate_real(|x| x * x, Domain::Interval { a: 1.0, b: 0.0 }, &[], &cfg()).unwrap();
        assert!((v + 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn breakpoint_handles_jump() {
        let (v, _) = integrate_real(
            |x| if x < 0.3 { 0.0 } else { 1.0 },
            Domain::Interval { a: 0.0, b: 1.0 },
            &[0.3],
            &cfg(),
        )
        .unwrap();
        assert!((v - 0.7).abs() < 1e-14);
    }

    #[test]
    fn truncation_warning_on_heavy_tails() {
        let q = integrate(
            |x| Complex64::new(1.0 / (PI * (x * x + 1.0)), 0.0),
            Domain::line_truncated(0.0, 1.0),
            &[],
            &cfg(),
        )
        .unwrap();
        assert!(matches!(q.warnings.as_slice(), [QuadWarning::Truncation { .. }]));
    }

    #[test]
    fn split_line_separated_lorentzians() {
        // ∫ dx / (((x-a)² + 1)((x-b)² + 1)) = 2π / ((a-b)² + 4)
        for (a, b) in [(0.0, 0.0), (0.0, 3.0), (-3e4, 2.0), (1e6, 1e6 + 5.0)] {
            let q = try_integrate_line_split(
                |x: f64| {
                    Ok(Complex64::new(
                        1.0 / (((x - a) * (x - a) + 1.0) * ((x - b) * (x - b) + 1.0)),
                        0.0,
                    ))
                },
                &[a, b],
                1.0,
                1.0,
                &cfg(),
            )
            .unwrap();
            let exact = 2.0 * PI / ((a - b) * (a - b) + 4.0);
            assert!(
                (q.value.re - exact).abs() <= 1e-9 * exact,
                "{a} {b}: {} vs {exact}",
                q.value.re
            );
        }
    }

    #[test]
    fn exhausted_budget_is_nonconvergence() {
        let cfg = QuadratureConfig {
            max_subdivisions: 4,
            ..cfg()
        };
        let err = integrate_real(
            |x| (50.0 * x).sin().abs(),
            Domain::Interval { a: 0.0, b: 10.0 },
            &[],
            &cfg,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
    }

    #[test]
    fn config_validation() {
        assert!(cfg().validate().is_ok());
        assert!(QuadratureConfig { rel_tol: 0.0, ..cfg() }.validate().is_err());
        assert!(QuadratureConfig {
            domain_halfwidth_multiplier: 5.0,
            ..cfg()
        }
        .validate()
        .is_err());
        assert!(QuadratureConfig {
            max_subdivisions: 0,
            ..cfg()
        }
        .validate()
        .is_err());
    }
}
