//! Filon-type quadrature for `∫ h(t) e^{iωt} dt` with a smooth envelope `h`.
//!
//! On each panel the envelope is expanded in Legendre polynomials from its
//! values at Gauss-Legendre nodes, and each term is integrated against the
//! oscillatory factor exactly:
//!
//! ```text
//! ∫_{-1}^{1} P_k(x) e^{iωx} dx = 2 iᵏ j_k(ω)
//! ```
//!
//! with `j_k` the spherical Bessel functions. The work per panel does not
//! depend on `ω`, so detuned pulse overlaps cost the same as resonant ones.

use std::sync::OnceLock;

use num_complex::Complex64;

use std::collections::BinaryHeap;

use super::quadrature::{interior_cuts, Domain, QuadWarning, Quadrature, QuadratureConfig, Tails};
use crate::error::{Error, Result};

const ORDER: usize = 20;

struct LegendreRule {
    nodes: [f64; ORDER],
    weights: [f64; ORDER],
    /// `basis[k][i] = (2k+1)/2 · w_i · P_k(x_i)`: projection onto `P_k`.
    projection: [[f64; ORDER]; ORDER],
}

fn legendre_rule() -> &'static LegendreRule {
    static RULE: OnceLock<LegendreRule> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = ORDER;
        let mut nodes = [0.0; ORDER];
        let mut weights = [0.0; ORDER];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        let mut projection = [[0.0; ORDER]; ORDER];
        for i in 0..n {
            let mut p_prev = 1.0;
            let mut p = nodes[i];
            for (k, row) in projection.iter_mut().enumerate() {
                let pk = match k {
                    0 => 1.0,
                    1 => nodes[i],
                    _ => {
                        let next = ((2 * k - 1) as f64 * nodes[i] * p - (k - 1) as f64 * p_prev) / k as f64;
                        p_prev = p;
                        p = next;
                        next
                    }
                };
                row[i] = 0.5 * (2 * k + 1) as f64 * weights[i] * pk;
            }
        }
        LegendreRule {
            nodes,
            weights,
            projection,
        }
    })
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Spherical Bessel functions `j_0(x) … j_{N-1}(x)`.
pub(crate) fn spherical_bessel(x: f64, out: &mut [f64]) {
    let n = out.len();
    let ax = x.abs();
    if ax < 1e-3 {
        // Leading terms of the power series.
        let mut lead = 1.0;
        for (k, o) in out.iter_mut().enumerate() {
            if k > 0 {
                lead *= ax / (2 * k + 1) as f64;
            }
            let d3 = (2 * k + 3) as f64;
            let d5 = (2 * k + 5) as f64;
            let x2 = ax * ax;
            *o = lead * (1.0 - x2 / (2.0 * d3) + x2 * x2 / (8.0 * d3 * d5));
        }
    } else if ax > n as f64 {
        // Upward recurrence is stable while k < x.
        let (s, c) = ax.sin_cos();
        out[0] = s / ax;
        if n > 1 {
            out[1] = s / (ax * ax) - c / ax;
        }
        for k in 1..n.saturating_sub(1) {
            out[k + 1] = (2 * k + 1) as f64 / ax * out[k] - out[k - 1];
        }
    } else {
        // Miller's downward recurrence, normalized by Σ (2k+1) j_k² = 1.
        let start = n + 20 + ax as usize;
        let mut above = 0.0;
        let mut current = 1.0;
        let mut norm = 0.0;
        for k in (0..=start).rev() {
            if k < n {
                out[k] = current;
            }
            norm += (2 * k + 1) as f64 * current * current;
            if k == 0 {
                break;
            }
            let below = (2 * k + 1) as f64 / ax * current - above;
            above = current;
            current = below;
            if current.abs() > 1e100 {
                let scale = 1e-100;
                current *= scale;
                above *= scale;
                norm *= scale * scale;
                for o in out.iter_mut() {
                    *o *= scale;
                }
            }
        }
        // Overall sign from j_0, or from j_1 near a zero of j_0.
        let j0 = ax.sin() / ax;
        let sign = if j0.abs() > 1e-3 || n < 2 {
            (j0 / out[0]).signum()
        } else {
            let j1 = ax.sin() / (ax * ax) - ax.cos() / ax;
            (j1 / out[1]).signum()
        };
        let inv = sign / norm.sqrt();
        for o in out.iter_mut() {
            *o *= inv;
        }
    }
    if x < 0.0 {
        for (k, o) in out.iter_mut().enumerate() {
            if k % 2 == 1 {
                *o = -*o;
            }
        }
    }
}

/// Legendre expansion of the envelope on one panel.
struct Panel {
    mid: f64,
    half: f64,
    coefficients: [Complex64; ORDER],
    error: f64,
    abs_integral: f64,
}

impl Panel {
    fn build<H>(h: &mut H, a: f64, b: f64) -> Result<Self>
    where
        H: FnMut(f64) -> Result<Complex64>,
    {
        let rule = legendre_rule();
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut values = [Complex64::new(0.0, 0.0); ORDER];
        let mut abs_sum = 0.0;
        for (i, v) in values.iter_mut().enumerate() {
            *v = h(mid + half * rule.nodes[i])?;
            abs_sum += rule.weights[i] * v.norm();
        }
        let mut coefficients = [Complex64::new(0.0, 0.0); ORDER];
        for (c, row) in coefficients.iter_mut().zip(&rule.projection) {
            *c = row.iter().zip(&values).map(|(p, v)| v * p).sum();
        }
        // |∫ P_k e^{iωx}| ≤ 2, so the truncated tail bounds the error for every ω.
        let tail: f64 = coefficients[ORDER - 3..].iter().map(|c| c.norm()).sum();
        let abs_integral = abs_sum * half.abs();
        let error = (2.0 * tail * half.abs()).max(50.0 * f64::EPSILON * abs_integral);
        Ok(Self {
            mid,
            half,
            coefficients,
            error,
            abs_integral,
        })
    }

    fn transform(&self, omega: f64, bessel: &mut [f64; ORDER]) -> Complex64 {
        spherical_bessel(omega * self.half, bessel);
        // Σ c_k · 2 iᵏ j_k, grouped by iᵏ ∈ {1, i, −1, −i}.
        let mut acc = [Complex64::new(0.0, 0.0); 4];
        for (k, (c, j)) in self.coefficients.iter().zip(bessel.iter()).enumerate() {
            acc[k % 4] += c * *j;
        }
        let sum = (acc[0] - acc[2]) + Complex64::new(0.0, 1.0) * (acc[1] - acc[3]);
        sum * Complex64::from_polar(2.0 * self.half, omega * self.mid)
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptive piecewise-Legendre expansion of an envelope `h`, from which
/// `∫ h(t) e^{iωt} dt` can be read off for any `ω`.
///
/// Panels are refined until the summed coefficient-tail bound is below
/// `max(abs_tol, rel_tol·∫|h|)`. That bound holds uniformly in `ω`.
pub struct FourierPanels {
    panels: Vec<Panel>,
    error: f64,
    warnings: Vec<QuadWarning>,
    evaluations: usize,
}

impl FourierPanels {
    pub fn build<H>(h: H, domain: Domain, breakpoints: &[f64], cfg: &QuadratureConfig) -> Result<Self>
    where
        H: FnMut(f64) -> Complex64,
    {
        let mut h = h;
        let mut evaluations = 0usize;
        let mut h = |t: f64| -> Result<Complex64> {
            evaluations += 1;
            Ok(h(t))
        };
        let step = |scale: f64| cfg.domain_halfwidth_multiplier * scale;
        let edge_tol = 0.1 * cfg.abs_tol;
        let mut warnings = Vec::new();

        let mut extend =
            |h: &mut dyn FnMut(f64) -> Result<Complex64>, from: f64, dir: f64, scale: f64| -> Result<f64> {
                let mut t = from + dir * step(scale);
                for _ in 0..64 {
                    if h(t)?.norm() * scale <= edge_tol {
                        return Ok(t);
                    }
                    t += dir * step(scale);
                }
                warnings.push(QuadWarning::Truncation {
                    tail_estimate: h(t)?.norm() * scale,
                });
                Ok(t)
            };

        let (lo, hi) = match domain {
            Domain::Interval { a, b } => (a.min(b), a.max(b)),
            Domain::HalfLine { start, scale } => (start, extend(&mut h, start, 1.0, scale)?),
            Domain::Line {
                center,
                scale,
                tails: Tails::Truncate,
            } => {
                let half = step(scale);
                (center - half, center + half)
            }
            Domain::Line {
                center,
                scale,
                tails: Tails::Map,
            } => (
                extend(&mut h, center, -1.0, scale)?,
                extend(&mut h, center, 1.0, scale)?,
            ),
        };
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::invalid(
                "domain",
                if lo.is_finite() { hi } else { lo },
                "must be finite",
            ));
        }

        let cuts = interior_cuts(lo, hi, breakpoints.iter().copied());
        let mut heap = BinaryHeap::new();
        for w in cuts.windows(2) {
            heap.push(Panel::build(&mut h, w[0], w[1])?);
        }
        let mut subdivisions = heap.len();
        loop {
            let error: f64 = heap.iter().map(|p| p.error).sum();
            let mass: f64 = heap.iter().map(|p| p.abs_integral).sum();
            let floor = 50.0 * f64::EPSILON * mass;
            if error <= cfg.abs_tol.max(cfg.rel_tol * mass) || error <= 2.0 * floor {
                break;
            }
            if subdivisions >= cfg.max_subdivisions {
                return Err(Error::NonConvergence {
                    value: mass,
                    error_estimate: error,
                    subdivisions,
                });
            }
            let worst = heap.pop().expect("at least one panel");
            let (a, b) = (worst.mid - worst.half, worst.mid + worst.half);
            let mid = worst.mid;
            if !(mid > a && mid < b) {
                return Err(Error::NonConvergence {
                    value: mass,
                    error_estimate: error,
                    subdivisions,
                });
            }
            heap.push(Panel::build(&mut h, a, mid)?);
            heap.push(Panel::build(&mut h, mid, b)?);
            subdivisions += 1;
        }

        let panels = heap.into_vec();
        let error = panels.iter().map(|p| p.error).sum();
        Ok(Self {
            panels,
            error,
            warnings,
            evaluations,
        })
    }

    /// `∫ h(t) e^{iωt} dt`.
    pub fn transform(&self, omega: f64) -> Complex64 {
        let mut bessel = [0.0; ORDER];
        self.panels.iter().map(|p| p.transform(omega, &mut bessel)).sum()
    }

    /// Error bound valid for every `ω`.
    pub fn error(&self) -> f64 {
        self.error
    }

    pub fn panels(&self) -> usize {
        self.panels.len()
    }

    pub fn warnings(&self) -> &[QuadWarning] {
        &self.warnings
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }
}

/// `∫ h(t) e^{iωt} dt` over `domain`.
///
/// Infinite ends are cut where the envelope has decayed: the cut is pushed
/// outward in steps of `M·scale` until `|h|·scale` at the edge drops below
/// `abs_tol/10`.
pub fn integrate_oscillatory<H>(
    h: H,
    omega: f64,
    domain: Domain,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Quadrature>
where
    H: FnMut(f64) -> Complex64,
{
    if !omega.is_finite() {
        return Err(Error::invalid("omega", omega, "must be finite"));
    }
    let mut table = FourierPanels::build(h, domain, breakpoints, cfg)?;
    let mut value = table.transform(omega);
    if let Domain::Interval { a, b } = domain {
        if a > b {
            value = -value;
        }
    }
    Ok(Quadrature {
        value,
        error: table.error,
        evaluations: table.evaluations,
        subdivisions: table.panels.len(),
        warnings: std::mem::take(&mut table.warnings),
    })
}
