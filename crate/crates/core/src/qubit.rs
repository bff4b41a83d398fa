//! Qubit states and Hamiltonians in Bloch form.
//!
//! `rho = (1 + p.sigma)/2` and `H = (h0 + h.sigma)/2`. The closed forms use
//! the von Neumann entropy of `rho`, `-sum_(+-) (1 +- |p|)/2 ln((1 +- |p|)/2)`,
//! and the full partition function `Z = 2 exp(-h0/(2T)) cosh(|h|/(2T))`, so
//! that every observable agrees with the matrix computation.
//!
//! `theta` in [`qubit_delta_grid`] is the angle between `p` and `h`: the
//! positive-temperature zero of `Delta` lies at `theta = pi` (antiparallel)
//! and the negative-temperature zero at `theta = 0`.

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{inverse_temperature, Error, Result};
use crate::grid::{DeltaGrid, GridSpec};
use crate::hermitian::HermitianMatrix;
use crate::relative_entropy::{delta_from_scalars, DeltaRecord};

const NORM_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState {
    p: Vector3<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochHamiltonian {
    pub h0: f64,
    pub h: Vector3<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitObservables {
    pub energy: f64,
    pub entropy: f64,
    pub log_partition: f64,
}

impl BlochState {
    pub fn new(p: Vector3<f64>) -> Result<Self> {
        let n = p.norm();
        if !n.is_finite() || n > 1.0 + NORM_SLACK {
            return Err(Error::BlochNormExceeded(n));
        }
        Ok(Self { p })
    }

    pub fn from_components(px: f64, py: f64, pz: f64) -> Result<Self> {
        Self::new(Vector3::new(px, py, pz))
    }

    /// Reads the Bloch vector `p_i = Tr(rho sigma_i)` off a 2x2 density matrix.
    pub fn from_density(rho: &HermitianMatrix) -> Result<Self> {
        if rho.dim() != 2 {
            return Err(Error::DimensionMismatch(rho.dim(), 2));
        }
        let m = rho.as_matrix();
        Self::from_components(2.0 * m[(1, 0)].re, 2.0 * m[(1, 0)].im, (m[(0, 0)] - m[(1, 1)]).re)
    }

    pub fn vector(&self) -> Vector3<f64> {
        self.p
    }

    pub fn norm(&self) -> f64 {
        self.p.norm().min(1.0)
    }
}

impl BlochHamiltonian {
    pub fn new(h0: f64, h: Vector3<f64>) -> Self {
        Self { h0, h }
    }

    /// `h0` with the field `h_norm` along `z`.
    pub fn along_z(h0: f64, h_norm: f64) -> Self {
        Self::new(h0, Vector3::new(0.0, 0.0, h_norm))
    }

    pub fn field_norm(&self) -> f64 {
        self.h.norm()
    }
}

fn bloch_matrix(scalar: f64, v: &Vector3<f64>) -> HermitianMatrix {
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.5 * (scalar + v.z), 0.0),
            Complex64::new(0.5 * v.x, -0.5 * v.y),
            Complex64::new(0.5 * v.x, 0.5 * v.y),
            Complex64::new(0.5 * (scalar - v.z), 0.0),
        ],
    );
    HermitianMatrix::new(m).expect("Bloch matrices are Hermitian by construction")
}

pub fn density_from_bloch(s: &BlochState) -> HermitianMatrix {
    bloch_matrix(1.0, &s.p)
}

pub fn hamiltonian_from_bloch(bh: &BlochHamiltonian) -> HermitianMatrix {
    bloch_matrix(bh.h0, &bh.h)
}

fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// Von Neumann entropy of a qubit with Bloch norm `p_norm`.
pub fn qubit_entropy(p_norm: f64) -> f64 {
    let p = p_norm.clamp(0.0, 1.0);
    (-(xlogx(0.5 * (1.0 - p)) + xlogx(0.5 * (1.0 + p)))).max(0.0)
}

/// `ln(2 cosh x)` without overflow.
fn ln_two_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p()
}

pub fn qubit_log_partition(bh: &BlochHamiltonian, temperature: f64) -> Result<f64> {
    let beta = inverse_temperature(temperature)?;
    Ok(-0.5 * beta * bh.h0 + ln_two_cosh(0.5 * beta * bh.field_norm()))
}

pub fn qubit_observables(s: &BlochState, bh: &BlochHamiltonian, temperature: f64) -> Result<QubitObservables> {
    Ok(QubitObservables {
        energy: 0.5 * (bh.h0 + s.p.dot(&bh.h)),
        entropy: qubit_entropy(s.norm()),
        log_partition: qubit_log_partition(bh, temperature)?,
    })
}

pub fn qubit_delta(s: &BlochState, bh: &BlochHamiltonian, temperature: f64) -> Result<DeltaRecord> {
    let obs = qubit_observables(s, bh, temperature)?;
    delta_from_scalars(obs.energy, obs.entropy, obs.log_partition, temperature)
}

/// Bloch vector of the Gibbs state: `p = -(h/|h|) tanh(|h|/(2T))`.
/// A field-free Hamiltonian has the maximally mixed state as equilibrium.
pub fn equilibrium_bloch(bh: &BlochHamiltonian, temperature: f64) -> Result<BlochState> {
    let beta = inverse_temperature(temperature)?;
    let n = bh.field_norm();
    if n == 0.0 {
        return BlochState::new(Vector3::zeros());
    }
    BlochState::new(-bh.h / n * (0.5 * beta * n).tanh())
}

/// `sign * |h| / (2 artanh |p|)`.
pub fn equilibrium_temperature(p_norm: f64, h_norm: f64, sign: f64) -> Result<f64> {
    if !(p_norm > 0.0 && p_norm < 1.0) {
        return Err(Error::DomainError(format!("|p| = {p_norm} must lie in (0, 1)")));
    }
    if !(h_norm > 0.0) {
        return Err(Error::DomainError(format!("|h| = {h_norm} must be positive")));
    }
    Ok(sign.signum() * h_norm / (2.0 * p_norm.atanh()))
}

/// Unit vectors `(u, w)` with `u = h/|h|` (or `z` when `h = 0`) and `w` orthogonal to `u`.
fn frame(h: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let n = h.norm();
    let u = if n > 0.0 { h / n } else { Vector3::z() };
    let trial = if u.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let w = (trial - u * u.dot(&trial)).normalize();
    (u, w)
}

/// Bloch state of norm `p_norm` at angle `theta` from `h` (azimuth fixed).
pub fn state_at_angle(p_norm: f64, bh: &BlochHamiltonian, theta: f64) -> Result<BlochState> {
    let (u, w) = frame(&bh.h);
    BlochState::new(p_norm * (theta.cos() * u + theta.sin() * w))
}

/// `Delta` over `theta` (rows) by `T` (columns). The temperature range must
/// not contain or straddle zero.
pub fn qubit_delta_grid(
    p_norm: f64,
    bh: &BlochHamiltonian,
    theta_range: &GridSpec,
    temperature_range: &GridSpec,
) -> Result<DeltaGrid> {
    if !(0.0..=1.0 + NORM_SLACK).contains(&p_norm) {
        return Err(Error::BlochNormExceeded(p_norm));
    }
    let (tmin, tmax) = (temperature_range.min(), temperature_range.max());
    if tmin <= 0.0 && tmax >= 0.0 {
        return Err(Error::InvalidGrid(format!(
            "temperature range {temperature_range} must be sign-homogeneous and exclude 0"
        )));
    }
    let thetas = theta_range.values();
    let temps = temperature_range.values();
    let cols = temps.len();
    let cells = (0..thetas.len() * cols)
        .into_par_iter()
        .map(|idx| {
            let s = state_at_angle(p_norm, bh, thetas[idx / cols])?;
            Ok(qubit_delta(&s, bh, temps[idx % cols])?.delta)
        })
        .collect::<Result<Vec<f64>>>()?;
    DeltaGrid::new("theta", thetas, "T", temps, cells)
}
