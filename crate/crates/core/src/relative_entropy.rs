//! Relative entropies and the thermodynamic distance `Delta`.
//!
//! Support conventions: a relative entropy whose first argument is not
//! supported inside the second evaluates to `+inf` rather than an error.

use serde::{Deserialize, Serialize};

use crate::error::{inverse_temperature, Error, Result};
use crate::hermitian::{HermitianMatrix, SpectralDecomposition, SupportPolicy, SUPPORT_TOL};

const TRACE_TOL: f64 = 1e-9;
const NEGATIVITY_TOL: f64 = 1e-10;

/// Eigenvalue threshold below which [`tsallis_series`] refuses a state.
pub const FULL_SUPPORT_TOL: f64 = 1e-14;

/// Energy, entropy and log-partition at one temperature, with
/// `delta = energy - T * entropy + T * log_partition`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaRecord {
    pub energy: f64,
    pub entropy: f64,
    pub log_partition: f64,
    pub temperature: f64,
    pub delta: f64,
}

/// Coefficients of `S_{1+delta} = order0 + order1 delta + order2 delta^2 + O(delta^3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TsallisSeries {
    pub order0: f64,
    pub order1: f64,
    pub order2: f64,
}

impl TsallisSeries {
    pub fn evaluate(&self, delta: f64) -> f64 {
        self.order0 + delta * (self.order1 + delta * self.order2)
    }
}

/// Checks unit trace and positivity; returns the spectrum for reuse.
pub fn validate_density(rho: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let tr = rho.trace();
    if (tr - 1.0).abs() > TRACE_TOL {
        return Err(Error::InvalidState(format!("trace {tr}")));
    }
    let spec = rho.eigendecompose()?;
    if let Some(&min) = spec.eigenvalues.first() {
        if min < -NEGATIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
    }
    Ok(spec)
}

fn entropy_of_spectrum(eigenvalues: &[f64]) -> f64 {
    -eigenvalues
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum::<f64>()
}

/// `-Tr(rho ln rho)` in nats, with `0 ln 0 = 0`.
pub fn von_neumann_entropy(rho: &HermitianMatrix) -> Result<f64> {
    let spec = validate_density(rho)?;
    Ok(entropy_of_spectrum(&spec.eigenvalues).max(0.0))
}

fn check_same_dim(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(())
}

/// Weight of `rho` on the kernel of `sigma`; zero iff supp(rho) is inside supp(sigma).
fn weight_outside_support(rho: &HermitianMatrix, sigma: &SpectralDecomposition) -> f64 {
    let kernel = sigma.reassemble(
        &sigma
            .eigenvalues
            .iter()
            .map(|&l| if l <= SUPPORT_TOL { 1.0 } else { 0.0 })
            .collect::<Vec<_>>(),
    );
    rho.trace_product(&kernel)
}

fn supported_in(rho: &HermitianMatrix, sigma: &SpectralDecomposition) -> bool {
    weight_outside_support(rho, sigma) <= SUPPORT_TOL
}

/// `Tr(rho (ln rho - ln sigma))`, or `+inf` when supp(rho) is not inside supp(sigma).
pub fn relative_entropy_vn(rho: &HermitianMatrix, sigma: &HermitianMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    let rs = validate_density(rho)?;
    let ss = validate_density(sigma)?;
    if !supported_in(rho, &ss) {
        return Ok(f64::INFINITY);
    }
    let ln_sigma = ss.map(f64::ln, SupportPolicy::Project)?;
    let value = -entropy_of_spectrum(&rs.eigenvalues) - rho.trace_product(&ln_sigma);
    Ok(value)
}

/// `S_q(rho, sigma) = (1 - Tr(rho^q sigma^(1-q))) / (1 - q)` for `q > 0, q != 1`.
pub fn tsallis_relative_entropy(rho: &HermitianMatrix, sigma: &HermitianMatrix, q: f64) -> Result<f64> {
    if !(q > 0.0) || q == 1.0 || !q.is_finite() {
        return Err(Error::UnsupportedQ(q));
    }
    check_same_dim(rho, sigma)?;
    let rs = validate_density(rho)?;
    let ss = validate_density(sigma)?;
    if q > 1.0 && !supported_in(rho, &ss) {
        return Ok(f64::INFINITY);
    }
    let rho_q = rs.map(|x| x.powf(q), SupportPolicy::Project)?;
    let sigma_1mq = ss.map(|x| x.powf(1.0 - q), SupportPolicy::Project)?;
    let overlap = rho_q.trace_product(&sigma_1mq);
    Ok((1.0 - overlap) / (1.0 - q))
}

/// Series coefficients of `S_{1+delta}` about `delta = 0`, with `A = ln rho`
/// and `B = ln sigma`:
///
/// ```text
/// order0 = Tr(rho (A - B))
/// order1 = Tr(rho (A - B)^2) / 2
/// order2 = [Tr(rho (A - B)^3) + Tr(rho (A B - B A) B)] / 6
/// ```
pub fn tsallis_series(rho: &HermitianMatrix, sigma: &HermitianMatrix) -> Result<TsallisSeries> {
    check_same_dim(rho, sigma)?;
    let rs = validate_density(rho)?;
    let ss = validate_density(sigma)?;
    for spec in [&rs, &ss] {
        let min = spec.eigenvalues.first().copied().unwrap_or(1.0);
        if min <= FULL_SUPPORT_TOL {
            return Err(Error::SupportDeficient(min));
        }
    }
    let a = rs.map(f64::ln, SupportPolicy::Strict)?.into_matrix();
    let b = ss.map(f64::ln, SupportPolicy::Strict)?.into_matrix();
    let r = rho.as_matrix();
    let diff = &a - &b;
    let diff2 = &diff * &diff;
    let diff3 = &diff2 * &diff;
    let commutator_b = (&a * &b - &b * &a) * &b;
    let tr = |m: &nalgebra::DMatrix<num_complex::Complex64>| (r * m).trace().re;
    Ok(TsallisSeries {
        order0: tr(&diff),
        order1: tr(&diff2) / 2.0,
        order2: (tr(&diff3) + tr(&commutator_b)) / 6.0,
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len().min(ys.len()) as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

/// Residuals `|S_{1+delta} - series(delta)|` at each `delta`, and their log-log slope.
pub fn series_residual_slope(
    rho: &HermitianMatrix,
    sigma: &HermitianMatrix,
    deltas: &[f64],
) -> Result<(Vec<f64>, f64)> {
    let series = tsallis_series(rho, sigma)?;
    let residuals = deltas
        .iter()
        .map(|&d| Ok((tsallis_relative_entropy(rho, sigma, 1.0 + d)? - series.evaluate(d)).abs()))
        .collect::<Result<Vec<f64>>>()?;
    let slope = loglog_slope(deltas, &residuals);
    Ok((residuals, slope))
}

pub fn delta_from_scalars(energy: f64, entropy: f64, log_partition: f64, temperature: f64) -> Result<DeltaRecord> {
    inverse_temperature(temperature)?;
    if ![energy, entropy, log_partition].iter().all(|v| v.is_finite()) {
        return Err(Error::DomainError("non-finite Delta input".into()));
    }
    Ok(DeltaRecord {
        energy,
        entropy,
        log_partition,
        temperature,
        delta: energy - temperature * entropy + temperature * log_partition,
    })
}

/// `Delta` for a finite-dimensional state and Hamiltonian.
pub fn delta_from_operators(rho: &HermitianMatrix, h: &HermitianMatrix, temperature: f64) -> Result<DeltaRecord> {
    check_same_dim(rho, h)?;
    inverse_temperature(temperature)?;
    let spec = validate_density(rho)?;
    let energy = rho.trace_product(h);
    let entropy = entropy_of_spectrum(&spec.eigenvalues).max(0.0);
    let log_partition = h.log_partition(temperature)?;
    delta_from_scalars(energy, entropy, log_partition, temperature)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(v: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_real_diagonal(v)
    }

    /// Mix toward the maximally mixed state to keep the spectrum away from zero.
    fn full_support(dim: usize, seed: u64) -> HermitianMatrix {
        let r = HermitianMatrix::random_density(dim, seed);
        let mixed = HermitianMatrix::identity(dim).scale(1.0 / dim as f64);
        HermitianMatrix::new(r.scale(0.5).as_matrix() + mixed.scale(0.5).as_matrix()).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(von_neumann_entropy(&diag(&[1.0, 0.0])).unwrap(), 0.0);
        let s = von_neumann_entropy(&diag(&[0.5, 0.5])).unwrap();
        assert!((s - 2f64.ln()).abs() < 1e-15);
        let s = von_neumann_entropy(&diag(&[0.7, 0.3])).unwrap();
        assert!((s - (-0.7 * 0.7f64.ln() - 0.3 * 0.3f64.ln())).abs() < 1e-15);
        assert!(matches!(
            von_neumann_entropy(&diag(&[0.7, 0.7])),
            Err(Error::InvalidState(_))
        ));
        assert!(matches!(
            von_neumann_entropy(&diag(&[1.2, -0.2])),
            Err(Error::InvalidState(_))
        ));
    }

    #[test]
    fn relative_entropy_examples() {
        let r = diag(&[0.7, 0.3]);
        let s = diag(&[0.5, 0.5]);
        assert!(relative_entropy_vn(&r, &r).unwrap().abs() < 1e-14);
        let expect = 0.7 * (0.7f64 / 0.5).ln() + 0.3 * (0.3f64 / 0.5).ln();
        assert!((relative_entropy_vn(&r, &s).unwrap() - expect).abs() < 1e-14);
        assert_eq!(
            relative_entropy_vn(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0])).unwrap(),
            f64::INFINITY
        );
        // Pure rho inside a full-support sigma stays finite.
        assert!(relative_entropy_vn(&diag(&[1.0, 0.0]), &s).unwrap().is_finite());
        assert!(matches!(
            relative_entropy_vn(&r, &diag(&[0.2, 0.3, 0.5])),
            Err(Error::DimensionMismatch(2, 3))
        ));
    }

    #[test]
    fn tsallis_examples() {
        let r = diag(&[0.7, 0.3]);
        let s = diag(&[0.5, 0.5]);
        assert!(tsallis_relative_entropy(&r, &r, 2.0).unwrap().abs() < 1e-14);
        let expect = -(1.0 - (0.49 / 0.5 + 0.09 / 0.5));
        assert!((tsallis_relative_entropy(&r, &s, 2.0).unwrap() - expect).abs() < 1e-14);
        assert!((expect - 0.16).abs() < 1e-14);
        for q in [0.0, -1.0, 1.0] {
            assert_eq!(tsallis_relative_entropy(&r, &s, q), Err(Error::UnsupportedQ(q)));
        }
        let pure = diag(&[1.0, 0.0]);
        let other = diag(&[0.0, 1.0]);
        assert_eq!(tsallis_relative_entropy(&pure, &other, 2.0).unwrap(), f64::INFINITY);
        // q < 1 tolerates disjoint supports: Tr(rho^q sigma^(1-q)) = 0.
        assert!((tsallis_relative_entropy(&pure, &other, 0.5).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn tsallis_approaches_von_neumann() {
        for seed in 0..10 {
            let r = HermitianMatrix::random_density(2, seed);
            let s = HermitianMatrix::random_density(2, 1000 + seed);
            let vn = relative_entropy_vn(&r, &s).unwrap();
            // The symmetric mean cancels the first-order term in q - 1.
            let up = tsallis_relative_entropy(&r, &s, 1.0 + 1e-5).unwrap();
            let down = tsallis_relative_entropy(&r, &s, 1.0 - 1e-5).unwrap();
            let st = 0.5 * (up + down);
            assert!((st - vn).abs() < 1e-7 * vn.max(1.0), "seed {seed}: {st} vs {vn}");
        }
    }

    #[test]
    fn series_on_commuting_pair() {
        let r = diag(&[0.7, 0.3]);
        let s = diag(&[0.5, 0.5]);
        let ser = tsallis_series(&r, &s).unwrap();
        let l14 = 1.4f64.ln();
        let l06 = 0.6f64.ln();
        assert!((ser.order0 - (0.7 * l14 + 0.3 * l06)).abs() < 1e-14);
        assert!((ser.order1 - 0.5 * (0.7 * l14 * l14 + 0.3 * l06 * l06)).abs() < 1e-14);
        assert!((ser.order2 - (0.7 * l14.powi(3) + 0.3 * l06.powi(3)) / 6.0).abs() < 1e-14);

        let zero = tsallis_series(&r, &r).unwrap();
        assert!(zero.order0.abs() < 1e-14 && zero.order1.abs() < 1e-14 && zero.order2.abs() < 1e-14);
        assert!(matches!(
            tsallis_series(&diag(&[1.0, 0.0]), &s),
            Err(Error::SupportDeficient(_))
        ));
    }

    /// The printed second-order coefficient against the expanded form
    /// `Tr(rho A^3)/6 - Tr(rho A^2 B)/2 + Tr(rho A B^2)/2 - Tr(rho B^3)/6`.
    #[test]
    fn second_order_coefficient_matches_expansion() {
        for seed in 0..10 {
            let r = full_support(3, seed);
            let s = full_support(3, 50 + seed);
            let a = r.map_spectrum(f64::ln, SupportPolicy::Strict).unwrap().into_matrix();
            let b = s.map_spectrum(f64::ln, SupportPolicy::Strict).unwrap().into_matrix();
            let rm = r.as_matrix();
            let t = |m: nalgebra::DMatrix<num_complex::Complex64>| (rm * m).trace().re;
            let expanded =
                t(&a * &a * &a) / 6.0 - t(&a * &a * &b) / 2.0 + t(&a * &b * &b) / 2.0 - t(&b * &b * &b) / 6.0;
            let ser = tsallis_series(&r, &s).unwrap();
            assert!((ser.order2 - expanded).abs() < 1e-12);
        }
    }

    #[test]
    fn series_residual_is_third_order() {
        let deltas: Vec<f64> = [-1.0, -1.5, -2.0, -2.5].iter().map(|e| 10f64.powf(*e)).collect();
        for seed in 0..5 {
            let r = full_support(3, 7 + seed);
            let s = full_support(3, 70 + seed);
            let (_, slope) = series_residual_slope(&r, &s, &deltas).unwrap();
            assert!((slope - 3.0).abs() <= 0.3, "seed {seed}: slope {slope}");
        }
    }

    #[test]
    fn delta_scalars() {
        assert_eq!(delta_from_scalars(1.0, 0.0, 0.0, 5.0).unwrap().delta, 1.0);
        assert_eq!(delta_from_scalars(1.0, 0.0, 0.0, 0.0), Err(Error::ZeroTemperature));
    }

    #[test]
    fn delta_vanishes_on_gibbs_states() {
        for seed in 0..20 {
            let dim = 2 + seed as usize % 7;
            let h = HermitianMatrix::random_hermitian(dim, seed);
            for t in [0.1, 1.0, 10.0] {
                let g = h.gibbs_state(t).unwrap();
                let d = delta_from_operators(&g, &h, t).unwrap();
                assert!(d.delta.abs() < 1e-9, "seed {seed} T {t}: {}", d.delta);
            }
        }
    }

    #[test]
    fn delta_is_temperature_times_relative_entropy() {
        for seed in 0..40 {
            let dim = 2 + seed as usize % 5;
            let rho = HermitianMatrix::random_density(dim, seed);
            let h = HermitianMatrix::random_hermitian(dim, 500 + seed);
            // Temperatures scale with the spectral width so the Gibbs state
            // stays well conditioned; at tiny |T| re-diagonalising it loses
            // the digits of its smallest eigenvalues.
            let ev = h.eigenvalues().unwrap();
            let width = ev[dim - 1] - ev[0];
            for t in [0.5 * width, 3.0 * width, -0.5 * width, -4.0 * width] {
                let d = delta_from_operators(&rho, &h, t).unwrap();
                let rel = relative_entropy_vn(&rho, &h.gibbs_state(t).unwrap()).unwrap();
                assert!(
                    (d.delta - t * rel).abs() < 1e-9 * d.delta.abs().max(1.0),
                    "seed {seed} T {t}: {} vs {}",
                    d.delta,
                    t * rel
                );
                if t > 0.0 {
                    assert!(d.delta >= -1e-9);
                } else {
                    assert!(d.delta <= 1e-9);
                }
            }
        }
    }
}
