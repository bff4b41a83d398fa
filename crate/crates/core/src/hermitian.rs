//! Dense complex Hermitian matrices and their spectral calculus.
//!
//! Every matrix function (`ln rho`, `rho^q`, `exp(-beta H)`) is evaluated as
//! `V diag(f(lambda)) V^dagger` from a sorted eigendecomposition.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{inverse_temperature, Error, Result};

/// Absolute tolerance on `|m[i][j] - conj(m[j][i])|`.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Eigenvalues at or below this are treated as outside the support.
pub const SUPPORT_TOL: f64 = 1e-12;

/// How [`HermitianMatrix::map_spectrum`] treats eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SupportPolicy {
    /// `f` must be finite on every eigenvalue.
    #[default]
    Strict,
    /// `f` is applied on the strictly positive eigenvalues only; the kernel
    /// is mapped to zero.
    Project,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    entries: DMatrix<Complex64>,
}

/// Eigenvalues in ascending order with matching unitary eigenvector columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<Complex64>,
}

fn max_asymmetry(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

impl HermitianMatrix {
    /// Wraps `entries` after checking it is square and Hermitian within
    /// [`HERMITICITY_TOL`]. The stored matrix is the exact Hermitian part.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::NotSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::DomainError("non-finite matrix entry".into()));
        }
        let asym = max_asymmetry(&entries);
        if asym > HERMITICITY_TOL {
            return Err(Error::NotHermitian(asym));
        }
        Ok(Self::hermitian_part(entries))
    }

    fn hermitian_part(m: DMatrix<Complex64>) -> Self {
        let adj = m.adjoint();
        Self {
            entries: (m + adj).map(|z| z * 0.5),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        Self { entries: m }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.diagonal().iter().map(|z| z.re).sum()
    }

    /// `Re Tr(self * other)`; real whenever both factors are Hermitian.
    pub fn trace_product(&self, other: &HermitianMatrix) -> f64 {
        let (a, b) = (&self.entries, &other.entries);
        let n = a.nrows();
        let mut acc = 0.0;
        for i in 0..n {
            for k in 0..n {
                acc += (a[(i, k)] * b[(k, i)]).re;
            }
        }
        acc
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            entries: self.entries.map(|z| z * factor),
        }
    }

    /// Frobenius norm of `self - other`.
    pub fn distance(&self, other: &HermitianMatrix) -> f64 {
        (&self.entries - &other.entries).norm()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.norm()
    }

    pub fn eigendecompose(&self) -> Result<SpectralDecomposition> {
        let n = self.dim();
        if n == 0 {
            return Ok(SpectralDecomposition {
                eigenvalues: Vec::new(),
                eigenvectors: DMatrix::zeros(0, 0),
            });
        }
        let eig = SymmetricEigen::try_new(self.entries.clone(), f64::EPSILON, 200 * n.max(10))
            .ok_or(Error::NumericalFailure)?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        if eigenvalues.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalFailure);
        }
        let eigenvectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        Ok(SpectralDecomposition {
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.eigendecompose()?.eigenvalues)
    }

    /// `V diag(f(lambda)) V^dagger`.
    ///
    /// With [`SupportPolicy::Strict`] a non-finite `f(lambda)` is a
    /// [`Error::DomainError`]. With [`SupportPolicy::Project`] eigenvalues
    /// `<= SUPPORT_TOL` are mapped to zero without calling `f`.
    pub fn map_spectrum<F>(&self, f: F, policy: SupportPolicy) -> Result<HermitianMatrix>
    where
        F: Fn(f64) -> f64,
    {
        self.eigendecompose()?.map(f, policy)
    }

    /// Ginibre-distributed density matrix `G G^dagger / Tr(G G^dagger)`.
    /// Identical seeds give bitwise-identical matrices.
    pub fn random_density(dim: usize, seed: u64) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        let g = ginibre(dim, seed);
        let gg = &g * g.adjoint();
        let tr: f64 = gg.diagonal().iter().map(|z| z.re).sum();
        Self::hermitian_part(gg.map(|z| z / tr))
    }

    /// Seeded Hermitian matrix `(G + G^dagger)/2` with Gaussian entries.
    pub fn random_hermitian(dim: usize, seed: u64) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Self::hermitian_part(ginibre(dim, seed))
    }

    pub fn gibbs_state(&self, temperature: f64) -> Result<HermitianMatrix> {
        let spec = self.eigendecompose()?;
        let weights = boltzmann_weights(&spec.eigenvalues, temperature)?;
        let total: f64 = weights.iter().sum();
        let probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
        Ok(spec.reassemble(&probs))
    }

    /// `ln Tr exp(-H/T)`, stabilised by shifting the spectrum.
    pub fn log_partition(&self, temperature: f64) -> Result<f64> {
        let spec = self.eigendecompose()?;
        log_partition_from_spectrum(&spec.eigenvalues, temperature)
    }
}

impl SpectralDecomposition {
    /// `V diag(values) V^dagger`.
    pub fn reassemble(&self, values: &[f64]) -> HermitianMatrix {
        let v = &self.eigenvectors;
        let n = v.nrows();
        let mut scaled = v.clone();
        for (c, &val) in values.iter().enumerate() {
            for r in 0..n {
                scaled[(r, c)] *= val;
            }
        }
        HermitianMatrix::hermitian_part(scaled * v.adjoint())
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.reassemble(&self.eigenvalues)
    }

    pub fn map<F>(&self, f: F, policy: SupportPolicy) -> Result<HermitianMatrix>
    where
        F: Fn(f64) -> f64,
    {
        let mut values = Vec::with_capacity(self.eigenvalues.len());
        for &lambda in &self.eigenvalues {
            let v = match policy {
                SupportPolicy::Project if lambda <= SUPPORT_TOL => 0.0,
                _ => f(lambda),
            };
            if !v.is_finite() {
                return Err(Error::DomainError(format!(
                    "function is not finite at eigenvalue {lambda:e}"
                )));
            }
            values.push(v);
        }
        Ok(self.reassemble(&values))
    }
}

fn ginibre(dim: usize, seed: u64) -> DMatrix<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im)
    })
}

/// Unnormalised Gibbs weights `exp(-beta (lambda - lambda*))` where
/// `lambda*` is the spectrum minimum for `beta > 0` and maximum for `beta < 0`.
fn boltzmann_weights(spectrum: &[f64], temperature: f64) -> Result<Vec<f64>> {
    let beta = inverse_temperature(temperature)?;
    let reference = pivot(spectrum, beta);
    let weights: Vec<f64> = spectrum.iter().map(|&l| (-beta * (l - reference)).exp()).collect();
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::OverflowGuard);
    }
    Ok(weights)
}

fn pivot(spectrum: &[f64], beta: f64) -> f64 {
    if beta > 0.0 {
        spectrum.iter().copied().fold(f64::INFINITY, f64::min)
    } else {
        spectrum.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn log_partition_from_spectrum(spectrum: &[f64], temperature: f64) -> Result<f64> {
    let beta = inverse_temperature(temperature)?;
    let weights = boltzmann_weights(spectrum, temperature)?;
    let reference = pivot(spectrum, beta);
    let out = -beta * reference + weights.iter().sum::<f64>().ln();
    if out.is_finite() {
        Ok(out)
    } else {
        Err(Error::OverflowGuard)
    }
}

/// Free-function form of [`HermitianMatrix::eigendecompose`].
pub fn eigendecompose(m: &HermitianMatrix) -> Result<SpectralDecomposition> {
    m.eigendecompose()
}

pub fn matrix_function<F>(m: &HermitianMatrix, f: F, policy: SupportPolicy) -> Result<HermitianMatrix>
where
    F: Fn(f64) -> f64,
{
    m.map_spectrum(f, policy)
}

pub fn gibbs_state(h: &HermitianMatrix, temperature: f64) -> Result<HermitianMatrix> {
    h.gibbs_state(temperature)
}

pub fn random_density_matrix(dim: usize, seed: u64) -> HermitianMatrix {
    HermitianMatrix::random_density(dim, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_x() -> HermitianMatrix {
        HermitianMatrix::new(DMatrix::from_row_slice(
            2,
            2,
            &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)],
        ))
        .unwrap()
    }

    #[test]
    fn spectra_of_simple_matrices() {
        assert_eq!(HermitianMatrix::identity(2).eigenvalues().unwrap(), vec![1.0, 1.0]);
        let d = HermitianMatrix::from_real_diagonal(&[0.7, 0.3]).eigenvalues().unwrap();
        assert!((d[0] - 0.3).abs() < 1e-15 && (d[1] - 0.7).abs() < 1e-15);
        let x = pauli_x().eigenvalues().unwrap();
        assert!((x[0] + 1.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(0.5, 0.), c(0., 0.)]);
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian(_))));
        let m = DMatrix::from_element(2, 3, c(0., 0.));
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn decomposition_reconstructs_and_is_unitary() {
        for seed in 0..20 {
            let m = HermitianMatrix::random_hermitian(2 + (seed as usize % 7), seed);
            let spec = m.eigendecompose().unwrap();
            let err = spec.reconstruct().distance(&m);
            assert!(err <= 1e-10 * m.frobenius_norm().max(1.0), "seed {seed}: {err}");
            let v = &spec.eigenvectors;
            let gram = v.adjoint() * v;
            let id = DMatrix::<Complex64>::identity(v.nrows(), v.nrows());
            assert!((gram - id).norm() < 1e-10);
            assert!(spec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn spectral_functions() {
        let d = HermitianMatrix::from_real_diagonal(&[0.3, 0.7]);
        let l = d.map_spectrum(f64::ln, SupportPolicy::Strict).unwrap();
        assert!((l.as_matrix()[(0, 0)].re - 0.3_f64.ln()).abs() < 1e-14);
        assert!((l.as_matrix()[(1, 1)].re - 0.7_f64.ln()).abs() < 1e-14);

        let m = HermitianMatrix::random_hermitian(5, 3);
        let same = m.map_spectrum(|x| x, SupportPolicy::Strict).unwrap();
        assert!(same.distance(&m) < 1e-10);

        let p = HermitianMatrix::from_real_diagonal(&[0.5, 0.5, 0.0]);
        let lp = p.map_spectrum(f64::ln, SupportPolicy::Project).unwrap();
        let half = 0.5_f64.ln();
        let expect = HermitianMatrix::from_real_diagonal(&[half, half, 0.0]);
        assert!(lp.distance(&expect) < 1e-14);
        assert!(matches!(
            p.map_spectrum(f64::ln, SupportPolicy::Strict),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn exp_then_log_roundtrips() {
        for seed in 0..10 {
            let rho = HermitianMatrix::random_density(4, seed);
            let back = rho
                .map_spectrum(f64::ln, SupportPolicy::Strict)
                .unwrap()
                .map_spectrum(f64::exp, SupportPolicy::Strict)
                .unwrap();
            assert!(back.distance(&rho) < 1e-9);
        }
    }

    #[test]
    fn gibbs_examples() {
        let h = HermitianMatrix::from_real_diagonal(&[0.0, 3.0]);
        let g = h.gibbs_state(1e9).unwrap();
        assert!((g.as_matrix()[(0, 0)].re - 0.5).abs() < 1e-8);

        // h0 = 0, |h| = sqrt(14) along z, T at the |p| = 0.01 equilibrium.
        let half = 14f64.sqrt() / 2.0;
        let h = HermitianMatrix::from_real_diagonal(&[half, -half]);
        let t = 14f64.sqrt() / (2.0 * 0.01_f64.atanh());
        let g = h.gibbs_state(t).unwrap();
        let pz = (g.as_matrix()[(0, 0)] - g.as_matrix()[(1, 1)]).re;
        assert!((pz + 0.01).abs() < 1e-12);

        // Tr exp(-H) for eigenvalues +-1 is 2 cosh 1.
        let h = HermitianMatrix::from_real_diagonal(&[1.0, -1.0]);
        let z = h.log_partition(1.0).unwrap().exp();
        assert!((z - 2.0 * 1f64.cosh()).abs() < 1e-14);

        assert_eq!(h.gibbs_state(0.0), Err(Error::ZeroTemperature));
    }

    #[test]
    fn gibbs_state_properties() {
        for seed in 0..30 {
            let h = HermitianMatrix::random_hermitian(2 + seed as usize % 7, 100 + seed);
            for t in [0.1, 1.0, 10.0, -0.5] {
                let g = h.gibbs_state(t).unwrap();
                assert!((g.trace() - 1.0).abs() < 1e-12);
                assert!(g.eigenvalues().unwrap()[0] >= -1e-12);
                let comm = g.as_matrix() * h.as_matrix() - h.as_matrix() * g.as_matrix();
                assert!(comm.norm() < 1e-10);
            }
        }
    }

    #[test]
    fn large_beta_does_not_overflow() {
        let h = HermitianMatrix::from_real_diagonal(&[-500.0, 0.0, 500.0]);
        let g = h.gibbs_state(0.01).unwrap();
        assert!((g.as_matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
        let g = h.gibbs_state(-0.01).unwrap();
        assert!((g.as_matrix()[(2, 2)].re - 1.0).abs() < 1e-12);
        assert!((h.log_partition(0.01).unwrap() - 50_000.0).abs() < 1e-9);
    }

    #[test]
    fn random_density_is_a_state_and_reproducible() {
        let one = HermitianMatrix::random_density(1, 9);
        assert!((one.as_matrix()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        for seed in 0..10 {
            let r = HermitianMatrix::random_density(4, seed);
            assert!((r.trace() - 1.0).abs() < 1e-12);
            assert!(r.eigenvalues().unwrap()[0] >= -1e-12);
            assert_eq!(r, HermitianMatrix::random_density(4, seed));
        }
        assert_ne!(
            HermitianMatrix::random_density(3, 1),
            HermitianMatrix::random_density(3, 2)
        );
    }
}
