//! Single-mode Gaussian states and quadratic Hamiltonians.
//!
//! States are given by the position kernel
//!
//! ```text
//! rho(q', q) = N exp(-a1 q^2 - conj(a1) q'^2 + a2 q q' + b1 q + conj(b1) q')
//! ```
//!
//! read as `<q'|rho|q>`; this is the reading under which the covariance
//! entry `sigma_pq = Im(a1)/D` holds (`D = 2 Re a1 - a2`). Quadratures are
//! `p = i sqrt(w0/2)(a^dag - a)` and `q = (a + a^dag)/sqrt(2 w0)`, so
//! `[q, p] = i`.
//!
//! The mean momentum is `<p> = 2 Im(a1) Re(b1)/D - Im(b1)`. This was
//! settled against derivative quadrature of the kernel (see
//! [`crate::fock::kernel_moments`] and the `mean_momentum_arbitration`
//! test); the frequently quoted form `(a2 Im b1 - 2 Im(conj(a1) b1))/(2D)`
//! is exactly half of it and is kept as [`mean_momentum_half_form`] only so
//! the arbitration stays reproducible.
//!
//! Partition functions use the SU(1,1) factorisation of `exp(-beta H)`
//! with `K+ = a^dag^2/2`, `K- = a^2/2`, `K0 = (a^dag a + 1/2)/2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::legendre::scaled_legendre;
use crate::relative_entropy::{delta_from_scalars, DeltaRecord};

const MARGIN: f64 = 1e-12;
const UNCERTAINTY_SLACK: f64 = 1e-12;

/// Kernel parameters `(a1, a2, b1)`. Constructed values satisfy
/// `2 Re(a1) - a2 > 0` and `a2 >= 0` (purity at most one).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams {
    a1: Complex64,
    a2: f64,
    b1: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovarianceState {
    pub sigma_pp: f64,
    pub sigma_qq: f64,
    pub sigma_pq: f64,
    pub mean_p: f64,
    pub mean_q: f64,
}

/// `H = w1 p^2 + w2 p q + conj(w2) q p + w3 q^2` in the quadrature
/// convention fixed by `omega0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticHamiltonian {
    pub omega0: f64,
    pub omega1: f64,
    pub omega2: Complex64,
    pub omega3: f64,
}

/// Coefficients of `exp(-beta H) = exp(-beta Im w2) exp(A+ K+) exp(ln(A0) K0) exp(A- K-)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Su11Coefficients {
    pub gamma1: Complex64,
    pub phi: f64,
    pub a_plus: Complex64,
    pub a_minus: Complex64,
    pub a_zero: f64,
    pub xi: f64,
    pub zeta: f64,
}

impl GaussianParams {
    pub fn new(a1: Complex64, a2: f64, b1: Complex64) -> Result<Self> {
        let finite = [a1.re, a1.im, a2, b1.re, b1.im].iter().all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidGaussian("non-finite parameter".into()));
        }
        if 2.0 * a1.re - a2 <= MARGIN {
            return Err(Error::InvalidGaussian(format!(
                "need 2 Re(a1) > a2, got 2 Re(a1) = {}, a2 = {a2}",
                2.0 * a1.re
            )));
        }
        if a2 < 0.0 {
            return Err(Error::InvalidGaussian(format!("a2 = {a2} < 0 gives purity above one")));
        }
        Ok(Self { a1, a2, b1 })
    }

    /// Pure squeezed vacuum `exp(-s q^2 / 2)` up to normalisation.
    pub fn squeezed_vacuum(s: f64) -> Result<Self> {
        Self::new(Complex64::new(0.5 * s, 0.0), 0.0, Complex64::new(0.0, 0.0))
    }

    /// Kernel of the thermal state with `sigma = ((1 + 2 nbar)/2) diag(w0, 1/w0)`.
    pub fn thermal(nbar: f64, omega0: f64) -> Result<Self> {
        if !(nbar >= 0.0) || !(omega0 > 0.0) {
            return Err(Error::InvalidGaussian(format!("nbar = {nbar}, omega0 = {omega0}")));
        }
        let g = 1.0 + 2.0 * nbar;
        let a1 = 0.25 * omega0 * (g + 1.0 / g);
        let a2 = 0.5 * omega0 * (g - 1.0 / g);
        Self::new(Complex64::new(a1, 0.0), a2, Complex64::new(0.0, 0.0))
    }

    pub fn a1(&self) -> Complex64 {
        self.a1
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    pub fn b1(&self) -> Complex64 {
        self.b1
    }

    /// `D = a1 + conj(a1) - a2 = 2 Re(a1) - a2`.
    pub fn width(&self) -> f64 {
        2.0 * self.a1.re - self.a2
    }

    /// `ln N`.
    pub fn log_normalization(&self) -> f64 {
        let d = self.width();
        let s = 2.0 * self.b1.re;
        0.5 * (d / std::f64::consts::PI).ln() - s * s / (4.0 * d)
    }

    /// Exponent of the kernel at `(q', q)` without the normalisation.
    pub fn kernel_exponent(&self, q_bra: f64, q_ket: f64) -> Complex64 {
        -self.a1 * q_ket * q_ket - self.a1.conj() * q_bra * q_bra
            + self.a2 * q_ket * q_bra
            + self.b1 * q_ket
            + self.b1.conj() * q_bra
    }
}

pub fn normalization(g: &GaussianParams) -> f64 {
    g.log_normalization().exp()
}

/// Mean momentum in the closed form confirmed by quadrature.
pub fn mean_momentum(g: &GaussianParams) -> f64 {
    2.0 * g.a1.im * g.b1.re / g.width() - g.b1.im
}

/// `(a2 Im b1 - 2 Im(conj(a1) b1)) / (2D)`; half of [`mean_momentum`].
pub fn mean_momentum_half_form(g: &GaussianParams) -> f64 {
    (g.a2 * g.b1.im - 2.0 * (g.a1.conj() * g.b1).im) / (2.0 * g.width())
}

pub fn covariance_from_params(g: &GaussianParams) -> CovarianceState {
    let d = g.width();
    CovarianceState {
        sigma_pp: (4.0 * g.a1.norm_sqr() - g.a2 * g.a2) / (2.0 * d),
        sigma_qq: 1.0 / (2.0 * d),
        sigma_pq: g.a1.im / d,
        mean_p: mean_momentum(g),
        mean_q: g.b1.re / d,
    }
}

impl CovarianceState {
    pub fn new(sigma_pp: f64, sigma_qq: f64, sigma_pq: f64, mean_p: f64, mean_q: f64) -> Result<Self> {
        let c = Self {
            sigma_pp,
            sigma_qq,
            sigma_pq,
            mean_p,
            mean_q,
        };
        if !(sigma_pp > 0.0 && sigma_qq > 0.0) || !c.det().is_finite() || c.det() < 0.25 - UNCERTAINTY_SLACK {
            return Err(Error::UnphysicalCovariance(c.det()));
        }
        Ok(c)
    }

    pub fn det(&self) -> f64 {
        self.sigma_pp * self.sigma_qq - self.sigma_pq * self.sigma_pq
    }
}

/// `mu = 1 / (2 sqrt(det sigma))`.
pub fn purity(c: &CovarianceState) -> Result<f64> {
    let det = c.det();
    if !(det >= 0.25 - UNCERTAINTY_SLACK) {
        return Err(Error::UnphysicalCovariance(det));
    }
    Ok((1.0 / (2.0 * det.sqrt())).min(1.0))
}

/// `S(mu) = ((1 - mu)/(2 mu)) ln((1 + mu)/(1 - mu)) - ln(2 mu/(1 + mu))`, with `S(1) = 0`.
pub fn entropy_gaussian(mu: f64) -> Result<f64> {
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::DomainError(format!("purity {mu} outside (0, 1]")));
    }
    if mu == 1.0 {
        return Ok(0.0);
    }
    // ln((1+mu)/(1-mu)) = 2 artanh(mu) keeps precision near mu = 1.
    let s = (1.0 - mu) / mu * mu.atanh() - (2.0 * mu / (1.0 + mu)).ln();
    Ok(s.max(0.0))
}

impl QuadraticHamiltonian {
    pub fn new(omega0: f64, omega1: f64, omega2: Complex64, omega3: f64) -> Result<Self> {
        if !(omega0 > 0.0) || !omega0.is_finite() {
            return Err(Error::DomainError(format!("omega0 = {omega0} must be positive")));
        }
        if ![omega1, omega2.re, omega2.im, omega3].iter().all(|v| v.is_finite()) {
            return Err(Error::DomainError("non-finite Hamiltonian coefficient".into()));
        }
        Ok(Self {
            omega0,
            omega1,
            omega2,
            omega3,
        })
    }

    /// `w0 (a^dag a + 1/2)`.
    pub fn harmonic_oscillator(omega0: f64) -> Result<Self> {
        Self::new(omega0, 0.5, Complex64::new(0.0, 0.0), 0.5 * omega0 * omega0)
    }

    /// Coefficient of `2 K0`: `w0 w1 + w3 / w0`.
    pub fn k0_coefficient(&self) -> f64 {
        self.omega0 * self.omega1 + self.omega3 / self.omega0
    }

    /// Coefficient of `2 K-`: `(w3/w0 - w0 w1 - 2 i Re w2) / 2`.
    pub fn gamma1(&self) -> Complex64 {
        Complex64::new(
            0.5 * (self.omega3 / self.omega0 - self.omega0 * self.omega1),
            -self.omega2.re,
        )
    }

    /// `(w0 w1 + w3/w0)^2 - 4 |gamma1|^2`, the squared normal-mode frequency.
    pub fn effective_frequency_squared(&self) -> f64 {
        let c = self.k0_coefficient();
        c * c - 4.0 * self.gamma1().norm_sqr()
    }
}

pub fn su11_coefficients(h: &QuadraticHamiltonian, beta: f64) -> Result<Su11Coefficients> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::NegativeBeta(beta));
    }
    let omega_sq = h.effective_frequency_squared();
    if !(omega_sq > 0.0) {
        return Err(Error::HyperbolicDomain(omega_sq));
    }
    let c = h.k0_coefficient();
    let gamma1 = h.gamma1();
    let phi = beta * omega_sq.sqrt();
    let (sh, ch) = (phi.sinh(), phi.cosh());
    let denom = ch + beta * c / phi * sh;
    if !denom.is_finite() {
        return Err(Error::OverflowGuard);
    }
    let a_zero = denom.powi(-2);
    let a_plus = -2.0 * beta * gamma1.conj() / phi * sh / denom;
    let a_minus = -2.0 * beta * gamma1 / phi * sh / denom;
    let xi = (a_plus * a_minus).re / a_zero;
    Ok(Su11Coefficients {
        gamma1,
        phi,
        a_plus,
        a_minus,
        a_zero,
        xi,
        zeta: a_zero,
    })
}

/// Rejects Hamiltonians whose Fock sum diverges at this `beta`.
fn check_convergence(h: &QuadraticHamiltonian, co: &Su11Coefficients) -> Result<f64> {
    if h.k0_coefficient() <= 0.0 {
        return Err(Error::DivergentPartition("spectrum is unbounded below".into()));
    }
    let zeta = co.zeta;
    let denom = 1.0 - 2.0 * zeta.sqrt() + zeta * (1.0 - co.xi);
    if !(denom > 1e-14) {
        return Err(Error::DivergentPartition(format!(
            "1 - 2 zeta^(1/2) + zeta (1 - xi) = {denom:e}"
        )));
    }
    if co.xi < 1.0 {
        let z = 1.0 / (1.0 - co.xi).sqrt();
        let growth = (zeta * (1.0 - co.xi)).sqrt() * (z + (z * z - 1.0).sqrt());
        if !(growth < 1.0) {
            return Err(Error::DivergentPartition(format!(
                "diagonal elements grow with ratio {growth}"
            )));
        }
    }
    Ok(denom)
}

/// `Z = zeta^(1/4) exp(-beta Im w2) / (1 - 2 zeta^(1/2) + zeta (1 - xi))^(1/2)`.
pub fn partition_function(h: &QuadraticHamiltonian, beta: f64) -> Result<f64> {
    Ok(log_partition_function(h, beta)?.exp())
}

pub fn log_partition_function(h: &QuadraticHamiltonian, beta: f64) -> Result<f64> {
    let co = su11_coefficients(h, beta)?;
    let denom = check_convergence(h, &co)?;
    Ok(0.25 * co.zeta.ln() - beta * h.omega2.im - 0.5 * denom.ln())
}

/// `<n|exp(-beta H)|n> = exp(-beta Im w2) A0^(1/4) (A0 (1 - xi))^(n/2) P_n(1/sqrt(1 - xi))`.
pub fn fock_diagonal_element(h: &QuadraticHamiltonian, beta: f64, n: usize) -> Result<f64> {
    let co = su11_coefficients(h, beta)?;
    if co.xi >= 1.0 {
        return Err(Error::DomainError(format!(
            "xi = {} >= 1 gives a complex Legendre argument",
            co.xi
        )));
    }
    let z = 1.0 / (1.0 - co.xi).sqrt();
    let w = (co.a_zero * (1.0 - co.xi)).sqrt();
    Ok((-beta * h.omega2.im).exp() * co.a_zero.powf(0.25) * scaled_legendre(n, z, w))
}

/// `E = Tr(Omega sigma) + <zeta> Omega <zeta>^T + Im(w2)`.
pub fn mean_energy(c: &CovarianceState, h: &QuadraticHamiltonian) -> f64 {
    let cross = 2.0 * h.omega2.re;
    h.omega1 * c.sigma_pp
        + h.omega3 * c.sigma_qq
        + cross * c.sigma_pq
        + h.omega1 * c.mean_p * c.mean_p
        + h.omega3 * c.mean_q * c.mean_q
        + cross * c.mean_p * c.mean_q
        + h.omega2.im
}

/// `Delta` for a Gaussian state against `exp(-H/T)`; requires `T > 0`.
pub fn gaussian_delta(c: &CovarianceState, h: &QuadraticHamiltonian, temperature: f64) -> Result<DeltaRecord> {
    if temperature == 0.0 {
        return Err(Error::ZeroTemperature);
    }
    if !(temperature > 0.0) {
        return Err(Error::NegativeBeta(1.0 / temperature));
    }
    let energy = mean_energy(c, h);
    let entropy = entropy_gaussian(purity(c)?)?;
    let log_partition = log_partition_function(h, 1.0 / temperature)?;
    delta_from_scalars(energy, entropy, log_partition, temperature)
}
