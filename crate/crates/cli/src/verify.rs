//! Oracle suites behind `entropyne verify`. Each family checks closed forms
//! against an independent route and reports its worst error against a
//! fixed tolerance.

use rayon::prelude::*;
use serde_json::{json, Value};

use entropyne_core::amplifier::{
    amplifier_delta, amplifier_hamiltonian, delta_argmin_temperature, thermal_light_covariance, AmplifierConfig,
    ThermalLight,
};
use entropyne_core::fock::{converged_partition, exp_diagonal, kernel_moments, FockTruncation, QuadratureSpec};
use entropyne_core::gaussian::{
    covariance_from_params, entropy_gaussian, fock_diagonal_element, mean_momentum, mean_momentum_half_form,
    partition_function, purity, QuadraticHamiltonian,
};
use entropyne_core::qubit::{
    density_from_bloch, equilibrium_temperature, hamiltonian_from_bloch, qubit_delta, qubit_observables,
    state_at_angle, BlochHamiltonian,
};
use entropyne_core::relative_entropy::{
    delta_from_operators, relative_entropy_vn, series_residual_slope, tsallis_relative_entropy, von_neumann_entropy,
};
use entropyne_core::sampling::{
    random_convergent_hamiltonian, random_delta_triple, random_full_support_density, random_gaussian_params,
    random_qubit_case,
};
use entropyne_core::{HermitianMatrix, Result};

pub struct Options {
    pub seed: u64,
    pub quick: bool,
    pub inject_fault: bool,
}

pub struct FamilyReport {
    pub family: &'static str,
    pub cases: usize,
    pub max_error: f64,
    pub tolerance: f64,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance
    }

    pub fn to_json(&self) -> Value {
        json!({
            "family": self.family,
            "cases": self.cases,
            "max_error": self.max_error,
            "tolerance": self.tolerance,
            "passed": self.passed(),
        })
    }
}

/// Distinct, reproducible case seeds per family.
fn case_seed(opts: &Options, family: u64, i: usize) -> u64 {
    opts.seed
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(family << 32)
        .wrapping_add(i as u64)
}

fn count(opts: &Options, full: usize, quick: usize) -> usize {
    if opts.quick {
        quick
    } else {
        full
    }
}

/// Worst error over cases; any evaluation error counts as infinite.
fn family<F>(name: &'static str, cases: usize, tolerance: f64, case: F) -> FamilyReport
where
    F: Fn(usize) -> Result<f64> + Sync,
{
    let errors: Vec<f64> = (0..cases)
        .into_par_iter()
        .map(|i| case(i).unwrap_or(f64::INFINITY))
        .collect();
    let max_error = errors
        .into_iter()
        .fold(0.0f64, |acc, e| if e.is_nan() { f64::INFINITY } else { acc.max(e) });
    FamilyReport {
        family: name,
        cases,
        max_error,
        tolerance,
    }
}

pub fn run(opts: &Options) -> Vec<FamilyReport> {
    vec![
        hermitian_reconstruction(opts),
        delta_sign_law(opts),
        tsallis_limit(opts),
        tsallis_series_order(opts),
        qubit_consistency(opts),
        qubit_zero_locus(),
        gaussian_moments(opts),
        mean_momentum_arbitration(opts),
        oscillator_partition(),
        partition_vs_fock(opts),
        legendre_diagonal(),
        entropy_identity(),
        free_oscillator_locus(),
        amplifier_entropy_match(),
    ]
}

fn hermitian_reconstruction(opts: &Options) -> FamilyReport {
    family("hermitian_reconstruction", count(opts, 200, 50), 1e-10, |i| {
        let seed = case_seed(opts, 1, i);
        let m = HermitianMatrix::random_hermitian(2 + i % 7, seed);
        let err = m.eigendecompose()?.reconstruct().distance(&m);
        Ok(err / m.frobenius_norm().max(1.0))
    })
}

/// Sign of `Delta` and `Delta = T S(rho || gibbs)`; a sign violation is
/// reported as its magnitude.
fn delta_sign_law(opts: &Options) -> FamilyReport {
    family("delta_sign_law", count(opts, 1000, 200), 1e-9, |i| {
        let (rho, h, t) = random_delta_triple(case_seed(opts, 2, i));
        let d = delta_from_operators(&rho, &h, t)?.delta;
        let rel = relative_entropy_vn(&rho, &h.gibbs_state(t)?)?;
        let violation = if t > 0.0 { (-d).max(0.0) } else { d.max(0.0) };
        Ok((d - t * rel).abs().max(violation))
    })
}

fn tsallis_limit(opts: &Options) -> FamilyReport {
    family("tsallis_limit", count(opts, 50, 10), 1e-4, |i| {
        let dim = 2 + i % 5;
        let rho = random_full_support_density(dim, case_seed(opts, 3, 2 * i));
        let sigma = random_full_support_density(dim, case_seed(opts, 3, 2 * i + 1));
        Ok((tsallis_relative_entropy(&rho, &sigma, 1.0 + 1e-6)? - relative_entropy_vn(&rho, &sigma)?).abs())
    })
}

pub const SERIES_DELTAS: [f64; 4] = [1e-1, 0.031_622_776_601_683_79, 1e-2, 0.003_162_277_660_168_379_5];

fn tsallis_series_order(opts: &Options) -> FamilyReport {
    family("tsallis_series_order", count(opts, 10, 3), 0.3, |i| {
        let dim = 2 + i % 5;
        let rho = random_full_support_density(dim, case_seed(opts, 4, 2 * i));
        let sigma = random_full_support_density(dim, case_seed(opts, 4, 2 * i + 1));
        let (_, slope) = series_residual_slope(&rho, &sigma, &SERIES_DELTAS)?;
        Ok((slope - 3.0).abs())
    })
}

fn qubit_consistency(opts: &Options) -> FamilyReport {
    family("qubit_consistency", count(opts, 500, 100), 1e-10, |i| {
        let (s, bh, t) = random_qubit_case(case_seed(opts, 5, i));
        let obs = qubit_observables(&s, &bh, t)?;
        let rho = density_from_bloch(&s);
        let h = hamiltonian_from_bloch(&bh);
        let errs = [
            obs.energy - rho.trace_product(&h),
            obs.entropy - von_neumann_entropy(&rho)?,
            obs.log_partition - h.log_partition(t)?,
        ];
        Ok(errs.iter().fold(0.0f64, |a, e| a.max(e.abs())))
    })
}

/// Location of the zero of `Delta` for the two published Bloch norms, as the
/// distance outside the accepted window, plus `|Delta|` at the zero.
fn qubit_zero_locus() -> FamilyReport {
    let cases: [(f64, f64, f64, f64, f64); 3] = [
        (0.01, std::f64::consts::PI, 1.0, 187.08, 0.5),
        (0.99, std::f64::consts::PI, 1.0, 0.7069, 0.005),
        (0.99, 0.0, -1.0, -0.7069, 0.005),
    ];
    family("qubit_zero_locus", cases.len(), 1e-8, |i| {
        let (p, theta, sign, target, window) = cases[i];
        let bh = BlochHamiltonian::along_z(0.0, 14f64.sqrt());
        let t = equilibrium_temperature(p, bh.field_norm(), sign)?;
        let s = state_at_angle(p, &bh, theta)?;
        let outside = ((t - target).abs() - window).max(0.0);
        Ok(qubit_delta(&s, &bh, t)?.delta.abs().max(outside))
    })
}

fn gaussian_moments(opts: &Options) -> FamilyReport {
    let spec = QuadratureSpec::default();
    family("gaussian_moments", count(opts, 100, 20), 1e-8, |i| {
        let g = random_gaussian_params(case_seed(opts, 6, i));
        let m = kernel_moments(&g, &spec)?;
        let c = covariance_from_params(&g);
        let uncertainty = (0.25 - 1e-12 - c.det()).max(0.0);
        Ok([
            m.norm - 1.0,
            m.mean_q - c.mean_q,
            m.mean_p - c.mean_p,
            m.sigma_qq - c.sigma_qq,
            m.sigma_pp - c.sigma_pp,
            m.sigma_pq - c.sigma_pq,
            uncertainty,
        ]
        .iter()
        .fold(0.0f64, |a, e| a.max(e.abs())))
    })
}

/// The adopted closed form must match the oracle and the rejected
/// alternatives must not; a mismatch in either direction is a failure.
fn mean_momentum_arbitration(opts: &Options) -> FamilyReport {
    let spec = QuadratureSpec::default();
    family("mean_momentum_arbitration", 3, 1e-8, |i| {
        let g = random_gaussian_params(case_seed(opts, 7, i));
        let oracle = kernel_moments(&g, &spec)?.mean_p;
        let adopted = (mean_momentum(&g) - oracle).abs();
        let separated = [mean_momentum_half_form(&g), -mean_momentum(&g)]
            .iter()
            .all(|alt| (alt - oracle).abs() > 1e-6);
        Ok(if separated { adopted } else { f64::INFINITY })
    })
}

fn oscillator_partition() -> FamilyReport {
    let grid = [0.5, 1.0, 2.0];
    family("oscillator_partition", 9, 1e-12, |i| {
        let (beta, w0) = (grid[i / 3], grid[i % 3]);
        let z = partition_function(&QuadraticHamiltonian::harmonic_oscillator(w0)?, beta)?;
        let expect = (-beta * w0 / 2.0).exp() / (1.0 - (-beta * w0).exp());
        Ok((z - expect).abs() / expect)
    })
}

fn partition_vs_fock(opts: &Options) -> FamilyReport {
    let fault = if opts.inject_fault { 1.0 + 1e-6 } else { 1.0 };
    family("partition_vs_fock", count(opts, 50, 10), 1e-8, |i| {
        let (h, beta) = random_convergent_hamiltonian(case_seed(opts, 8, i));
        let closed = partition_function(&h, beta)? * fault;
        let fock = converged_partition(&h, beta)?;
        Ok((closed - fock.value).abs() / closed)
    })
}

fn legendre_diagonal() -> FamilyReport {
    let h = amplifier_hamiltonian(&AmplifierConfig::default());
    let oracle = FockTruncation::new(200, h.omega0).and_then(|tr| exp_diagonal(&h, 1.0, &tr));
    family("legendre_diagonal", 31, 1e-8, |n| {
        let oracle = oracle.as_ref().map_err(Clone::clone)?;
        Ok((fock_diagonal_element(&h, 1.0, n)? - oracle[n]).abs())
    })
}

fn entropy_identity() -> FamilyReport {
    let nbars = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0];
    family("entropy_identity", nbars.len(), 1e-12, |i| {
        let tl = ThermalLight::new(nbars[i], 1.0)?;
        let mu = purity(&thermal_light_covariance(&tl, 1.0))?;
        Ok((entropy_gaussian(mu)? - tl.entropy()).abs())
    })
}

/// With `k = 0` thermal light is the Gibbs state at `T = 1/ln(1 + 1/nbar)`.
fn free_oscillator_locus() -> FamilyReport {
    let nbars = [0.5f64, 1.0, 2.0, 3.0, 5.0];
    let cfg = AmplifierConfig {
        k: 0.0,
        ..AmplifierConfig::default()
    };
    family("free_oscillator_locus", nbars.len(), 1e-9, |i| {
        let t = 1.0 / (1.0 + 1.0 / nbars[i]).ln();
        Ok(amplifier_delta(&cfg, nbars[i], t)?.delta.abs())
    })
}

/// The minimiser over `T` sits where the Gibbs entropy of the amplifier
/// equals the thermal-light entropy, `T* = Omega / ln(1 + 1/nbar)`.
fn amplifier_entropy_match() -> FamilyReport {
    let nbars = [1.0f64, 2.0, 3.0, 5.0];
    let cfg = AmplifierConfig::default();
    let omega = (cfg.omega0 * cfg.omega0 - 4.0 * cfg.k * cfg.k).sqrt();
    family("amplifier_entropy_match", nbars.len(), 1e-5, |i| {
        let expect = omega / (1.0 + 1.0 / nbars[i]).ln();
        let found = delta_argmin_temperature(&cfg, nbars[i], (0.05, 50.0))?;
        Ok((found - expect).abs() / expect)
    })
}
