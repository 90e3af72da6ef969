//! Data behind the figure subcommands.

use indist_core::{
    apply_gaussian_filter, default_grid, hom_curve, hom_curve_filtered, k_filtered_numeric, tau_grid, visibility,
    Error, Family, FilterSpec, HomCurve, Method, MixedPhotonState, QuadratureConfig,
};

use crate::table::Table;

/// Default relative tolerance for figure sweeps.
pub const FIGURE_REL_TOL: f64 = 1e-6;

/// A table plus the per-point failures met while filling it.
#[derive(Debug, Clone)]
pub struct Output {
    pub table: Table,
    pub warnings: Vec<String>,
    /// Cells that should hold a number.
    pub points: usize,
    pub failures: usize,
}

impl Output {
    fn new(table: Table) -> Self {
        Self {
            table,
            warnings: Vec::new(),
            points: 0,
            failures: 0,
        }
    }

    /// Value of a fallible point; non-convergence becomes `None` plus a warning.
    pub fn cell<T>(&mut self, what: impl FnOnce() -> String, value: Result<T, Error>) -> Result<Option<T>, Error> {
        self.points += 1;
        match value {
            Ok(v) => Ok(Some(v)),
            Err(e @ Error::NonConvergence { .. }) => {
                self.failures += 1;
                self.warnings.push(format!("{}: {e}", what()));
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }

    pub fn absorb_curve(&mut self, label: &str, curve: &HomCurve) {
        self.points += curve.len();
        self.failures += curve.failed.len();
        for &i in &curve.failed {
            self.warnings
                .push(format!("{label} tau={}: quadrature did not converge", curve.taus[i]));
        }
    }

    pub fn total_failure(&self) -> bool {
        self.points > 0 && self.failures == self.points
    }
}

/// `n` log-spaced values from `lo` to `hi`, endpoints exact.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && hi > lo);
    let (a, b) = (lo.log10(), hi.log10());
    let mut v: Vec<f64> = (0..n)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64))
        .collect();
    v[0] = lo;
    v[n - 1] = hi;
    v
}

pub fn fig2_etas() -> Vec<f64> {
    log_grid(0.1, 100.0, 31)
}

pub fn fig3b_ratios() -> Vec<f64> {
    log_grid(0.02, 1000.0, 13)
}

pub const FIG3A_RATIOS: [f64; 3] = [f64::INFINITY, 0.5, 0.1];
pub const FIG3_ETAS: [f64; 2] = [3.0, 10.0];

fn curve_visibility(state: &MixedPhotonState, method: Method, cfg: &QuadratureConfig) -> Result<f64, Error> {
    let curve = match method {
        Method::Analytic => hom_curve(state, &default_grid(state), method, cfg)?,
        // τ = 0 and the two baseline samples are all the extraction reads.
        Method::Numeric => {
            let reach = 8.0 * state.lifetime();
            hom_curve(state, &[-reach, 0.0, reach], method, cfg)?
        }
    };
    if !curve.failed.is_empty() {
        return Err(Error::NonConvergence {
            value: f64::NAN,
            error_estimate: f64::NAN,
            subdivisions: 0,
        });
    }
    visibility(&curve)
}

/// HOM visibility against `η` for both lineshape families, unit intrinsic width.
pub fn fig2(method: Method, cfg: &QuadratureConfig) -> Result<Output, Error> {
    let mut t = Table::new(
        "figure fig2",
        &["eta", "visibility_lorentzian", "visibility_gaussian", "one_over_eta"],
    );
    t.param("intrinsic_width", 1)
        .param("method", method)
        .param("rel_tol", cfg.rel_tol);
    t.note("visibility = (C_AB(tau_max) - C_AB(0)) / C_AB(tau_max), tau_max = 8 lifetimes");
    let mut out = Output::new(t);
    for eta in fig2_etas() {
        let mut row = vec![eta];
        for family in [Family::Lorentzian, Family::Gaussian] {
            let state = MixedPhotonState::from_eta(family, 1.0, eta, 0.0)?;
            let v = curve_visibility(&state, method, cfg);
            row.push(out.cell(|| format!("{family} eta={eta}"), v)?.unwrap_or(f64::NAN));
        }
        row.push(1.0 / eta);
        out.table.push(row);
    }
    Ok(out)
}

/// Normalized coincidence dips of a Gaussian `η = 3` source behind Gaussian
/// filters of ratio `R = σ_F/σ_g`.
pub fn fig3a(method: Method, cfg: &QuadratureConfig) -> Result<Output, Error> {
    let mut t = Table::new("figure fig3a", &["tau", "R", "c_ab", "c_ab_norm", "transmission"]);
    t.param("model", "gaussian")
        .param("sigma_g", 1)
        .param("eta", 3)
        .param("method", method)
        .param("rel_tol", cfg.rel_tol);
    t.note("c_ab_norm = c_ab / (1/2) = 1 - K(tau), per detected pair; raw rates scale with transmission^2");
    t.note("R = inf is the unfiltered source; each R has its own grid of +-8 filtered lifetimes");
    let mut out = Output::new(t);
    let state = MixedPhotonState::from_eta(Family::Gaussian, 1.0, 3.0, 0.0)?;
    for r in FIG3A_RATIOS {
        let (curve, c) = if r.is_infinite() {
            (hom_curve(&state, &default_grid(&state), method, cfg)?, 1.0)
        } else {
            let filter = FilterSpec::from_ratio(&state, r)?;
            let lifetime = 1.0
                / apply_gaussian_filter(&state, &filter)?
                    .filtered_intrinsic_width
                    .unwrap();
            let grid = tau_grid(-8.0 * lifetime, 8.0 * lifetime, 201)?;
            let curve = hom_curve_filtered(&state, &filter, &grid, method, cfg)?;
            let c = curve.transmission.unwrap_or(f64::NAN);
            (curve, c)
        };
        out.absorb_curve(&format!("R={r}"), &curve);
        for (i, &tau) in curve.taus.iter().enumerate() {
            let ab = curve.c_ab[i];
            out.table.push(vec![tau, r, ab, 2.0 * ab, c]);
        }
    }
    Ok(out)
}

/// Filtered indistinguishability against `R` for `η ∈ {3, 10}`: Gaussian in
/// closed form, Lorentzian by quadrature.
pub fn fig3b(cfg: &QuadratureConfig) -> Result<Output, Error> {
    let mut t = Table::new(
        "figure fig3b",
        &[
            "R",
            "eta",
            "k_gaussian",
            "transmission_gaussian",
            "k_lorentzian",
            "transmission_lorentzian",
        ],
    );
    t.param("intrinsic_width", 1).param("rel_tol", cfg.rel_tol);
    t.note("gaussian: closed form, R = sigma_F/sigma_g; lorentzian: quadrature, R = 2 Gamma_F/Gamma");
    let mut out = Output::new(t);
    for eta in FIG3_ETAS {
        let g = MixedPhotonState::from_eta(Family::Gaussian, 1.0, eta, 0.0)?;
        let l = MixedPhotonState::from_eta(Family::Lorentzian, 1.0, eta, 0.0)?;
        for r in fig3b_ratios() {
            let gr = apply_gaussian_filter(&g, &FilterSpec::from_ratio(&g, r)?)?;
            let lr = k_filtered_numeric(&l, &FilterSpec::from_ratio(&l, r)?, cfg);
            let (lk, lc) = out
                .cell(|| format!("lorentzian eta={eta} R={r}"), lr)?
                .map_or((f64::NAN, f64::NAN), |x| (x.k_filtered, x.transmission));
            out.table.push(vec![r, eta, gr.k_filtered, gr.transmission, lk, lc]);
        }
    }
    Ok(out)
}
