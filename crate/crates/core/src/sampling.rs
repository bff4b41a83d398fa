//! Seeded parameter families shared by the oracle suites.
//!
//! The ranges are chosen so that every draw is valid by construction and
//! stays well inside what the default Fock truncation and quadrature window
//! can resolve; nothing here is rejection-sampled, so a seed always maps to
//! the same draw.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::gaussian::{GaussianParams, QuadraticHamiltonian};
use crate::hermitian::HermitianMatrix;
use crate::qubit::{BlochHamiltonian, BlochState};

/// Kernel parameters with `Re a1` in `[0.3, 2]`, `|Im a1| <= 1`,
/// `a2` up to 90% of `2 Re a1` and `b1` in the unit square.
pub fn random_gaussian_params(seed: u64) -> GaussianParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a1 = Complex64::new(rng.random_range(0.3..2.0), rng.random_range(-1.0..1.0));
    let a2 = rng.random_range(0.0..0.9) * 2.0 * a1.re;
    let b1 = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    GaussianParams::new(a1, a2, b1).expect("sampled kernel is valid by construction")
}

/// A quadratic Hamiltonian with positive normal-mode frequency and an inverse
/// temperature in `[1, 3]`.
///
/// `Omega^2 = 4 (w1 w3 - Re(w2)^2)`, so capping `|Re w2|` at `0.6 sqrt(w1 w3)`
/// keeps the draw away from the hyperbolic boundary.
pub fn random_convergent_hamiltonian(seed: u64) -> (QuadraticHamiltonian, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let omega0: f64 = rng.random_range(0.5..2.0);
    let omega1: f64 = rng.random_range(0.2..1.0);
    let omega3 = rng.random_range(0.2..1.0) * omega0 * omega0;
    let re = rng.random_range(-0.6..0.6) * (omega1 * omega3).sqrt();
    let im = rng.random_range(-0.5..0.5);
    let beta = rng.random_range(1.0..3.0);
    let h = QuadraticHamiltonian::new(omega0, omega1, Complex64::new(re, im), omega3)
        .expect("sampled coefficients are finite");
    (h, beta)
}

/// Equal mixture of a Ginibre state with `I/d`, so every eigenvalue is at
/// least `1/(2d)`.
pub fn random_full_support_density(dim: usize, seed: u64) -> HermitianMatrix {
    let g = HermitianMatrix::random_density(dim, seed);
    let half_identity = HermitianMatrix::identity(dim).scale(0.5 / dim as f64);
    HermitianMatrix::new(g.scale(0.5).as_matrix() + half_identity.as_matrix()).expect("sum of Hermitian matrices")
}

/// A state, a Hamiltonian and a temperature of either sign in dimension
/// `2..=8`.
///
/// `|T|` is drawn in `[0.2, 5]` times the spectral width of `H`. Much colder
/// Gibbs states have eigenvalues below the double-precision floor of the
/// largest one, and then no matrix-level relative entropy can be compared
/// with `Delta / T` to `1e-9`.
pub fn random_delta_triple(seed: u64) -> (HermitianMatrix, HermitianMatrix, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = rng.random_range(2..=8usize);
    let rho = HermitianMatrix::random_density(dim, rng.random());
    let h = HermitianMatrix::random_hermitian(dim, rng.random());
    let ev = h.eigenvalues().expect("Hermitian eigenvalues");
    let width = (ev[dim - 1] - ev[0]).max(1e-3);
    let magnitude = rng.random_range(0.2..5.0) * width;
    let t = if rng.random_bool(0.5) { magnitude } else { -magnitude };
    (rho, h, t)
}

/// A Bloch state strictly inside the ball, a field with Gaussian components
/// and `|T|` in `[0.05, 20]` of either sign.
pub fn random_qubit_case(seed: u64) -> (BlochState, BlochHamiltonian, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gauss3 = |scale: f64| {
        let v: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
        nalgebra::Vector3::from(v) * scale
    };
    let dir = gauss3(1.0);
    let field = gauss3(2.0);
    let radius: f64 = rng.random_range(0.0..0.999);
    let state = BlochState::new(dir.normalize() * radius).expect("norm below one");
    let h0 = rng.random_range(-1.0..1.0);
    let magnitude = rng.random_range(0.05..20.0);
    let t = if rng.random_bool(0.5) { magnitude } else { -magnitude };
    (state, BlochHamiltonian::new(h0, field), t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_are_reproducible_and_valid() {
        for seed in 0..200 {
            assert_eq!(random_gaussian_params(seed), random_gaussian_params(seed));
            let (h, beta) = random_convergent_hamiltonian(seed);
            assert!(h.effective_frequency_squared() > 0.0 && h.k0_coefficient() > 0.0);
            assert!((1.0..3.0).contains(&beta));
        }
    }

    #[test]
    fn full_support_floor() {
        for seed in 0..20 {
            let rho = random_full_support_density(4, seed);
            assert!((rho.trace() - 1.0).abs() < 1e-14);
            assert!(rho.eigenvalues().unwrap()[0] >= 0.125 - 1e-14);
        }
    }

    #[test]
    fn triples_cover_both_signs() {
        let temps: Vec<f64> = (0..100).map(|s| random_delta_triple(s).2).collect();
        assert!(temps.iter().any(|&t| t > 0.0) && temps.iter().any(|&t| t < 0.0));
        let (rho, h, _) = random_delta_triple(7);
        assert_eq!(rho.dim(), h.dim());
    }
}
