//! Thermal light measured against the degenerate parametric amplifier
//!
//! ```text
//! H = w0 (a^dag a + 1/2) - k (a^dag^2 exp(-i w t) + a^2 exp(i w t))
//! ```
//!
//! frozen at a fixed time `t`. Since the thermal-light energy does not
//! depend on `T`, `dDelta/dT = S_gibbs(T) - S`, and the minimum over `T` sits
//! where the Gibbs entropy of `H` equals the thermal-light entropy:
//! `T* = Omega / ln(1 + 1/nbar)` with `Omega = sqrt(w0^2 - 4 k^2)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{gaussian_delta, CovarianceState, QuadraticHamiltonian};
use crate::grid::{DeltaGrid, GridSpec};
use crate::relative_entropy::DeltaRecord;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplifierConfig {
    pub omega0: f64,
    pub omega: f64,
    pub k: f64,
    pub t: f64,
    pub omega_t: f64,
}

impl Default for AmplifierConfig {
    fn default() -> Self {
        Self {
            omega0: 1.0,
            omega: 3.0,
            k: 0.1,
            t: 0.0,
            omega_t: 1.0,
        }
    }
}

impl AmplifierConfig {
    pub fn new(omega0: f64, omega: f64, k: f64, t: f64, omega_t: f64) -> Result<Self> {
        if !(omega0 > 0.0 && omega_t > 0.0) {
            return Err(Error::DomainError(format!(
                "omega0 = {omega0}, omega_t = {omega_t} must be positive"
            )));
        }
        if !(k >= 0.0) || ![omega, k, t].iter().all(|v| v.is_finite()) {
            return Err(Error::DomainError(format!("k = {k} must be finite and non-negative")));
        }
        Ok(Self {
            omega0,
            omega,
            k,
            t,
            omega_t,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalLight {
    pub nbar: f64,
    pub omega_t: f64,
}

impl ThermalLight {
    pub fn new(nbar: f64, omega_t: f64) -> Result<Self> {
        if !(nbar >= 0.0) || !nbar.is_finite() || !(omega_t > 0.0) {
            return Err(Error::DomainError(format!("nbar = {nbar}, omega_t = {omega_t}")));
        }
        Ok(Self { nbar, omega_t })
    }

    /// Thermal light emitted at source temperature `t_prime`.
    pub fn from_temperature(t_prime: f64, omega_t: f64) -> Result<Self> {
        Self::new(nbar_from_temperature(t_prime, omega_t)?, omega_t)
    }

    pub fn entropy(&self) -> f64 {
        if self.nbar == 0.0 {
            return 0.0;
        }
        let n = self.nbar;
        n * ((1.0 + n) / n).ln() + (1.0 + n).ln()
    }
}

pub fn amplifier_hamiltonian(cfg: &AmplifierConfig) -> QuadraticHamiltonian {
    let phase = cfg.omega * cfg.t;
    let (s, c) = phase.sin_cos();
    QuadraticHamiltonian {
        omega0: cfg.omega0,
        omega1: 0.5 + cfg.k / cfg.omega0 * c,
        omega2: num_complex::Complex64::new(cfg.k * s, 0.0),
        omega3: 0.5 * cfg.omega0 * cfg.omega0 - cfg.k * cfg.omega0 * c,
    }
}

/// `sigma = ((1 + 2 nbar)/2) diag(w0, 1/w0)`, zero means.
pub fn thermal_light_covariance(tl: &ThermalLight, omega0: f64) -> CovarianceState {
    let g = 0.5 * (1.0 + 2.0 * tl.nbar);
    CovarianceState {
        sigma_pp: g * omega0,
        sigma_qq: g / omega0,
        sigma_pq: 0.0,
        mean_p: 0.0,
        mean_q: 0.0,
    }
}

/// `nbar = 1 / (exp(w_t / T') - 1)`.
pub fn nbar_from_temperature(t_prime: f64, omega_t: f64) -> Result<f64> {
    if !(t_prime > 0.0) {
        return Err(Error::DomainError(format!(
            "source temperature {t_prime} must be positive"
        )));
    }
    Ok(1.0 / (omega_t / t_prime).exp_m1())
}

/// `Delta(T, nbar)` for thermal light of mean photon number `nbar`.
pub fn amplifier_delta(cfg: &AmplifierConfig, nbar: f64, temperature: f64) -> Result<DeltaRecord> {
    let tl = ThermalLight::new(nbar, cfg.omega_t)?;
    gaussian_delta(
        &thermal_light_covariance(&tl, cfg.omega0),
        &amplifier_hamiltonian(cfg),
        temperature,
    )
}

/// `Delta` over `nbar` (rows) by `T` (columns). Cells whose partition
/// function diverges are stored as `NaN`; other errors abort the sweep.
pub fn amplifier_delta_surface(
    cfg: &AmplifierConfig,
    temperature_range: &GridSpec,
    nbar_range: &GridSpec,
) -> Result<DeltaGrid> {
    let temps = temperature_range.values();
    let nbars = nbar_range.values();
    let cols = temps.len();
    let cells = (0..nbars.len() * cols)
        .into_par_iter()
        .map(|idx| match amplifier_delta(cfg, nbars[idx / cols], temps[idx % cols]) {
            Ok(r) => Ok(r.delta),
            Err(Error::DivergentPartition(_) | Error::HyperbolicDomain(_) | Error::OverflowGuard) => Ok(f64::NAN),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<f64>>>()?;
    DeltaGrid::new("nbar", nbars, "T", temps, cells)
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;
const SCAN_POINTS: usize = 64;

/// Minimising temperature of `T -> Delta(T, nbar)` inside `bracket`.
///
/// A log-spaced scan locates the best interior sample; golden-section search
/// then refines between its neighbours until the interval is below
/// `1e-6 T`. A minimum at either end of the bracket is a [`Error::BracketError`].
pub fn delta_argmin_temperature(cfg: &AmplifierConfig, nbar: f64, bracket: (f64, f64)) -> Result<f64> {
    let (lo, hi) = bracket;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::BracketError(lo, hi));
    }
    let f = |t: f64| amplifier_delta(cfg, nbar, t).map(|r| r.delta);
    let ratio = (hi / lo).ln() / (SCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| {
            if i + 1 == SCAN_POINTS {
                hi
            } else {
                lo * (ratio * i as f64).exp()
            }
        })
        .collect();
    let values = grid.iter().map(|&t| f(t)).collect::<Result<Vec<f64>>>()?;
    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    if best == 0 || best + 1 == SCAN_POINTS {
        return Err(Error::BracketError(lo, hi));
    }
    let (mut a, mut b) = (grid[best - 1], grid[best + 1]);
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while b - a > 1e-6 * 0.5 * (a + b) {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(0.5 * (a + b))
}
