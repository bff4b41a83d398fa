//! Brute-force references for the closed forms in [`crate::gaussian`].
//!
//! Two independent routes live here:
//!
//! - truncated Fock-space matrices of `a`, `q`, `p` and quadratic
//!   Hamiltonians, with traces and diagonals of `exp(-beta H)` taken from an
//!   explicit eigendecomposition;
//! - trapezoidal quadrature of the position kernel and of its analytic
//!   `q'`-derivatives, giving norm, means and covariances without any of the
//!   closed-form moment formulas.
//!
//! Quadratic Hamiltonians are assembled from ladder matrices one level larger
//! than the requested truncation and then cropped, so every retained matrix
//! element of `p^2`, `q^2`, `pq`, `qp` is exact. The result is a compression
//! of the true operator, and truncated traces increase monotonically with
//! `n_max`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{inverse_temperature, Error, Result};
use crate::gaussian::{normalization, GaussianParams, QuadraticHamiltonian};
use crate::hermitian::HermitianMatrix;
use crate::relative_entropy::{delta_from_scalars, DeltaRecord};

/// Levels added when checking truncation stability.
pub const STABILITY_STEP: usize = 50;
/// Relative change tolerated between `n_max` and `n_max + STABILITY_STEP`.
pub const STABILITY_TOL: f64 = 1e-10;
pub const DEFAULT_N_MAX: usize = 200;
pub const ESCALATED_N_MAX: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FockTruncation {
    pub n_max: usize,
    pub omega0: f64,
}

impl FockTruncation {
    pub fn new(n_max: usize, omega0: f64) -> Result<Self> {
        if n_max < 2 {
            return Err(Error::DomainError(format!("n_max = {n_max} must be at least 2")));
        }
        if !(omega0 > 0.0) {
            return Err(Error::DomainError(format!("omega0 = {omega0} must be positive")));
        }
        Ok(Self { n_max, omega0 })
    }

    fn resized(&self, n_max: usize) -> Self {
        Self { n_max, ..*self }
    }
}

/// Truncated `a`, `a^dag`, `q = (a + a^dag)/sqrt(2 w0)`, `p = i sqrt(w0/2)(a^dag - a)`.
#[derive(Debug, Clone)]
pub struct LadderMatrices {
    pub annihilation: DMatrix<Complex64>,
    pub creation: DMatrix<Complex64>,
    pub position: DMatrix<Complex64>,
    pub momentum: DMatrix<Complex64>,
}

pub fn ladder_matrices(tr: &FockTruncation) -> LadderMatrices {
    let n = tr.n_max;
    let annihilation = DMatrix::from_fn(n, n, |r, c| {
        if c == r + 1 {
            Complex64::new((c as f64).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let creation = annihilation.adjoint();
    let position = (&annihilation + &creation).map(|z| z / (2.0 * tr.omega0).sqrt());
    let momentum = (&creation - &annihilation).map(|z| z * Complex64::new(0.0, (tr.omega0 / 2.0).sqrt()));
    LadderMatrices {
        annihilation,
        creation,
        position,
        momentum,
    }
}

/// `w1 p^2 + w2 p q + conj(w2) q p + w3 q^2` on the first `n_max` levels.
pub fn quadratic_hamiltonian_matrix(h: &QuadraticHamiltonian, tr: &FockTruncation) -> Result<HermitianMatrix> {
    if (tr.omega0 - h.omega0).abs() > 1e-15 * h.omega0.max(1.0) {
        return Err(Error::DomainError(format!(
            "truncation omega0 {} differs from Hamiltonian omega0 {}",
            tr.omega0, h.omega0
        )));
    }
    let l = ladder_matrices(&tr.resized(tr.n_max + 1));
    let (p, q) = (&l.momentum, &l.position);
    let full = p * p * Complex64::new(h.omega1, 0.0)
        + p * q * h.omega2
        + q * p * h.omega2.conj()
        + q * q * Complex64::new(h.omega3, 0.0);
    let n = tr.n_max;
    HermitianMatrix::new(full.view((0, 0), (n, n)).into_owned())
}

/// `Tr exp(-beta H)` over an explicit spectrum.
pub fn trace_exp(hm: &HermitianMatrix, beta: f64) -> Result<f64> {
    Ok(hm.log_partition(1.0 / beta)?.exp())
}

/// Truncated trace with its stability diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedTrace {
    pub value: f64,
    pub n_max: usize,
    /// `|Z(n_max + 50) - Z(n_max)| / Z(n_max + 50)`.
    pub relative_change: f64,
    /// Largest term of the spectral sum coming from the top Fock level.
    pub last_level: f64,
}

fn truncated_trace_at(h: &QuadraticHamiltonian, beta: f64, tr: &FockTruncation) -> Result<(f64, f64)> {
    let hm = quadratic_hamiltonian_matrix(h, tr)?;
    let spec = hm.eigendecompose()?;
    let shift = spec.eigenvalues[0];
    let weights: Vec<f64> = spec.eigenvalues.iter().map(|&l| (-beta * (l - shift)).exp()).collect();
    let scale = (-beta * shift).exp();
    let total: f64 = weights.iter().sum::<f64>() * scale;
    let top = tr.n_max - 1;
    let last = spec
        .eigenvectors
        .column_iter()
        .zip(&weights)
        .map(|(v, w)| v[top].norm_sqr() * w * scale)
        .sum::<f64>();
    if !total.is_finite() {
        return Err(Error::OverflowGuard);
    }
    Ok((total, last))
}

/// `Tr exp(-beta H)` over `n_max` levels, certified against `n_max + 50`.
pub fn truncated_partition(h: &QuadraticHamiltonian, beta: f64, tr: &FockTruncation) -> Result<TruncatedTrace> {
    if !(beta > 0.0) {
        return Err(Error::NegativeBeta(beta));
    }
    let (z, last) = truncated_trace_at(h, beta, tr)?;
    let (z_more, _) = truncated_trace_at(h, beta, &tr.resized(tr.n_max + STABILITY_STEP))?;
    let change = (z_more - z).abs() / z_more;
    if !(change <= STABILITY_TOL) {
        return Err(Error::TruncationUnstable {
            n_max: tr.n_max,
            change,
        });
    }
    Ok(TruncatedTrace {
        value: z,
        n_max: tr.n_max,
        relative_change: change,
        last_level: last,
    })
}

/// [`truncated_partition`] at the default size, escalating once on instability.
pub fn converged_partition(h: &QuadraticHamiltonian, beta: f64) -> Result<TruncatedTrace> {
    let tr = FockTruncation::new(DEFAULT_N_MAX, h.omega0)?;
    match truncated_partition(h, beta, &tr) {
        Err(Error::TruncationUnstable { .. }) => truncated_partition(h, beta, &tr.resized(ESCALATED_N_MAX)),
        other => other,
    }
}

/// Diagonal `<n|exp(-beta H)|n>` of the truncated matrix exponential.
pub fn exp_diagonal(h: &QuadraticHamiltonian, beta: f64, tr: &FockTruncation) -> Result<Vec<f64>> {
    let hm = quadratic_hamiltonian_matrix(h, tr)?;
    let spec = hm.eigendecompose()?;
    let weights: Vec<f64> = spec.eigenvalues.iter().map(|&l| (-beta * l).exp()).collect();
    Ok(spec
        .reassemble(&weights)
        .as_matrix()
        .diagonal()
        .iter()
        .map(|z| z.re)
        .collect())
}

/// Photon-number distribution `nbar^n / (1 + nbar)^(n+1)` on levels `0..n_max`.
pub fn thermal_light_weights(nbar: f64, n_max: usize) -> Vec<f64> {
    if nbar == 0.0 {
        let mut w = vec![0.0; n_max];
        w[0] = 1.0;
        return w;
    }
    let log_ratio = (nbar / (1.0 + nbar)).ln();
    let log_base = -(1.0 + nbar).ln();
    (0..n_max).map(|n| (log_base + n as f64 * log_ratio).exp()).collect()
}

/// Probability mass lost by truncating thermal light to `n_max` levels.
pub fn thermal_light_trace_deficit(nbar: f64, n_max: usize) -> f64 {
    (nbar / (1.0 + nbar)).powi(n_max as i32)
}

/// Smallest level count (at least [`DEFAULT_N_MAX`]) leaving a thermal tail below `1e-16`.
pub fn thermal_light_levels(nbar: f64) -> usize {
    if nbar <= 0.0 {
        return DEFAULT_N_MAX;
    }
    let needed = (1e-16f64.ln() / (nbar / (1.0 + nbar)).ln()).ceil() as usize;
    needed.max(DEFAULT_N_MAX)
}

/// `Delta` of Fock-diagonal thermal light under `h` from explicit traces.
pub fn oracle_thermal_delta(nbar: f64, h: &QuadraticHamiltonian, temperature: f64) -> Result<DeltaRecord> {
    let beta = inverse_temperature(temperature)?;
    let n_max = thermal_light_levels(nbar);
    let tr = FockTruncation::new(n_max, h.omega0)?;
    let hm = quadratic_hamiltonian_matrix(h, &tr)?;
    let weights = thermal_light_weights(nbar, n_max);
    let energy: f64 = weights
        .iter()
        .enumerate()
        .map(|(n, w)| w * hm.as_matrix()[(n, n)].re)
        .sum();
    let entropy: f64 = -weights.iter().filter(|&&w| w > 0.0).map(|&w| w * w.ln()).sum::<f64>();
    let z = truncated_partition(h, beta, &tr)?;
    delta_from_scalars(energy, entropy, z.value.ln(), temperature)
}

/// Trapezoidal quadrature window and refinement policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Half-width of the window in standard deviations of `rho(q, q)`.
    pub half_width: f64,
    pub base_nodes: usize,
    pub max_doublings: u32,
    pub tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            half_width: 12.0,
            base_nodes: 400,
            max_doublings: 6,
            tol: 1e-10,
        }
    }
}

/// Moments of a Gaussian kernel by quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelMoments {
    pub norm: f64,
    pub mean_q: f64,
    pub mean_p: f64,
    pub sigma_qq: f64,
    pub sigma_pp: f64,
    pub sigma_pq: f64,
    /// Largest imaginary part among the momentum moments; zero in exact arithmetic.
    pub imag_residue: f64,
    pub nodes: usize,
}

impl KernelMoments {
    fn as_array(&self) -> [f64; 6] {
        [
            self.norm,
            self.mean_q,
            self.mean_p,
            self.sigma_qq,
            self.sigma_pp,
            self.sigma_pq,
        ]
    }
}

fn moments_with_nodes(g: &GaussianParams, spec: &QuadratureSpec, nodes: usize) -> KernelMoments {
    // Window from the diagonal exponent -D q^2 + 2 Re(b1) q.
    let d = g.width();
    let center = g.b1().re / d;
    let sd = (0.5 / d).sqrt();
    let lo = center - spec.half_width * sd;
    let hi = center + spec.half_width * sd;
    let h = (hi - lo) / (nodes - 1) as f64;
    let log_n = normalization(g).ln();

    let a1c = g.a1().conj();
    let (mut i0, mut iq, mut iqq) = (0.0, 0.0, 0.0);
    let mut ip = Complex64::new(0.0, 0.0);
    let mut ipp = Complex64::new(0.0, 0.0);
    let mut iqp = Complex64::new(0.0, 0.0);
    let minus_i = Complex64::new(0.0, -1.0);
    for k in 0..nodes {
        let x = lo + h * k as f64;
        let w = if k == 0 || k + 1 == nodes { 0.5 * h } else { h };
        let rho = (log_n + g.kernel_exponent(x, x).re).exp() * w;
        // d/dq' of the exponent at q' = q = x.
        let slope = -2.0 * a1c * x + g.a2() * x + g.b1().conj();
        i0 += rho;
        iq += x * rho;
        iqq += x * x * rho;
        ip += minus_i * slope * rho;
        ipp += (2.0 * a1c - slope * slope) * rho;
        iqp += minus_i * slope * x * rho;
    }
    let mean_q = iq / i0;
    let p = ip / i0;
    let pp = ipp / i0;
    // <(qp + pq)/2> = <qp> - i/2.
    let sym = iqp / i0 - Complex64::new(0.0, 0.5);
    KernelMoments {
        norm: i0,
        mean_q,
        mean_p: p.re,
        sigma_qq: iqq / i0 - mean_q * mean_q,
        sigma_pp: pp.re - p.re * p.re,
        sigma_pq: sym.re - p.re * mean_q,
        imag_residue: p.im.abs().max(pp.im.abs()).max(sym.im.abs()),
        nodes,
    }
}

/// Quadrature moments of `rho(q', q) = <q'|rho|q>`, doubling the node count
/// until all six moments agree with the previous pass within `spec.tol`.
pub fn kernel_moments(g: &GaussianParams, spec: &QuadratureSpec) -> Result<KernelMoments> {
    let mut nodes = spec.base_nodes.max(3);
    let mut prev = moments_with_nodes(g, spec, nodes);
    for _ in 0..spec.max_doublings {
        nodes = 2 * nodes - 1;
        let next = moments_with_nodes(g, spec, nodes);
        let stable = prev
            .as_array()
            .iter()
            .zip(next.as_array())
            .all(|(a, b)| (a - b).abs() <= spec.tol * b.abs().max(1.0));
        if stable {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureUnstable { nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{covariance_from_params, fock_diagonal_element, partition_function};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ladder_examples() {
        let l = ladder_matrices(&FockTruncation::new(2, 1.0).unwrap());
        assert_eq!(
            l.annihilation,
            DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)])
        );
        let l = ladder_matrices(&FockTruncation::new(6, 1.0).unwrap());
        assert!((l.position[(0, 1)].re - 0.5f64.sqrt()).abs() < 1e-15);
        let comm = &l.position * &l.momentum - &l.momentum * &l.position;
        for i in 0..5 {
            for j in 0..5 {
                let expect = if i == j { c(0.0, 1.0) } else { c(0.0, 0.0) };
                assert!((comm[(i, j)] - expect).norm() < 1e-10);
            }
        }
        assert!(FockTruncation::new(1, 1.0).is_err());
    }

    #[test]
    fn oscillator_matrix_is_number_operator() {
        for w0 in [0.7, 1.0, 2.0] {
            let h = QuadraticHamiltonian::harmonic_oscillator(w0).unwrap();
            let m = quadratic_hamiltonian_matrix(&h, &FockTruncation::new(30, w0).unwrap()).unwrap();
            let expect: Vec<f64> = (0..30).map(|n| w0 * (n as f64 + 0.5)).collect();
            assert!(m.distance(&HermitianMatrix::from_real_diagonal(&expect)) < 1e-10);
        }
    }

    #[test]
    fn amplifier_matrix_matches_su11_form() {
        let k = 0.1;
        let h = QuadraticHamiltonian::new(1.0, 0.5 + k, c(0.0, 0.0), 0.5 - k).unwrap();
        let tr = FockTruncation::new(40, 1.0).unwrap();
        let m = quadratic_hamiltonian_matrix(&h, &tr).unwrap();
        // Built on one extra level and cropped, like the Hamiltonian.
        let l = ladder_matrices(&FockTruncation::new(41, 1.0).unwrap());
        let (a, ad) = (&l.annihilation, &l.creation);
        let kp = ad * ad * c(0.5, 0.0);
        let km = a * a * c(0.5, 0.0);
        let k0 = (ad * a + DMatrix::identity(41, 41) * c(0.5, 0.0)) * c(0.5, 0.0);
        let g = h.gamma1();
        let form = (km * g + kp * g.conj() + k0 * c(h.k0_coefficient(), 0.0)) * c(2.0, 0.0)
            + DMatrix::identity(41, 41) * c(h.omega2.im, 0.0);
        let form = form.view((0, 0), (40, 40)).into_owned();
        assert!((m.as_matrix() - form).norm() < 1e-10);
    }

    #[test]
    fn imaginary_cross_term_is_a_constant_shift() {
        let tr = FockTruncation::new(25, 1.3).unwrap();
        let base = QuadraticHamiltonian::new(1.3, 0.6, c(0.0, 0.0), 0.4).unwrap();
        let shifted = QuadraticHamiltonian::new(1.3, 0.6, c(0.0, 0.35), 0.4).unwrap();
        let diff = quadratic_hamiltonian_matrix(&shifted, &tr).unwrap().into_matrix()
            - quadratic_hamiltonian_matrix(&base, &tr).unwrap().into_matrix();
        assert!((diff - DMatrix::identity(25, 25) * c(0.35, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn oscillator_trace() {
        let h = QuadraticHamiltonian::harmonic_oscillator(1.0).unwrap();
        let z = truncated_partition(&h, 1.0, &FockTruncation::new(200, 1.0).unwrap()).unwrap();
        let expect = (-0.5f64).exp() / (1.0 - (-1.0f64).exp());
        assert!((z.value - expect).abs() < 1e-12);
        assert!(z.last_level < 1e-80);
        // Low temperature converges with fewer levels.
        assert!(truncated_partition(&h, 5.0, &FockTruncation::new(50, 1.0).unwrap()).is_ok());
    }

    #[test]
    fn unstable_truncation_is_reported() {
        let h = QuadraticHamiltonian::harmonic_oscillator(1.0).unwrap();
        let err = truncated_partition(&h, 0.05, &FockTruncation::new(20, 1.0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::TruncationUnstable { n_max: 20, .. }));
    }

    #[test]
    fn truncated_trace_is_monotone() {
        let h = QuadraticHamiltonian::new(1.2, 0.55, c(0.1, 0.05), 0.6).unwrap();
        let mut prev = 0.0;
        for n in [2, 5, 10, 20, 40, 80] {
            let (z, _) = truncated_trace_at(&h, 0.4, &FockTruncation::new(n, 1.2).unwrap()).unwrap();
            assert!(z >= prev - 1e-14, "n {n}: {z} < {prev}");
            prev = z;
        }
    }

    #[test]
    fn closed_form_agrees_with_truncation() {
        let h = QuadraticHamiltonian::new(1.0, 0.6, c(0.0, 0.0), 0.4).unwrap();
        let z = converged_partition(&h, 1.0).unwrap();
        let closed = partition_function(&h, 1.0).unwrap();
        assert!((z.value - closed).abs() <= 1e-8 * closed);
        let diag = exp_diagonal(&h, 1.0, &FockTruncation::new(200, 1.0).unwrap()).unwrap();
        for (n, d) in diag.iter().enumerate().take(31) {
            assert!((fock_diagonal_element(&h, 1.0, n).unwrap() - d).abs() < 1e-8);
        }
    }

    #[test]
    fn thermal_light_in_fock_space() {
        for nbar in [0.5, 2.0, 5.0] {
            for n_max in [10, 50, 300] {
                let w = thermal_light_weights(nbar, n_max);
                let deficit = 1.0 - w.iter().sum::<f64>();
                assert!((deficit - thermal_light_trace_deficit(nbar, n_max)).abs() < 1e-13);
            }
            let n_max = thermal_light_levels(nbar);
            let w = thermal_light_weights(nbar, n_max);
            let s: f64 = -w.iter().map(|&p| p * p.ln()).sum::<f64>();
            let expect = nbar * ((1.0 + nbar) / nbar).ln() + (1.0 + nbar).ln();
            assert!((s - expect).abs() < 1e-12);
            let e: f64 = w.iter().enumerate().map(|(n, p)| p * (n as f64 + 0.5)).sum();
            assert!((e - (nbar + 0.5)).abs() < 1e-12);
        }
        assert_eq!(thermal_light_weights(0.0, 3), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn squeezed_and_displaced_moments() {
        let s = 1.7;
        let m = kernel_moments(&GaussianParams::squeezed_vacuum(s).unwrap(), &QuadratureSpec::default()).unwrap();
        assert!((m.norm - 1.0).abs() < 1e-12);
        assert!((m.sigma_qq - 1.0 / (2.0 * s)).abs() < 1e-12);
        assert!((m.sigma_pp - s / 2.0).abs() < 1e-12);
        assert!(m.sigma_pq.abs() < 1e-12 && m.mean_p.abs() < 1e-12);

        let cq = 0.8;
        let g = GaussianParams::new(c(0.5, 0.0), 0.0, c(cq, 0.0)).unwrap();
        let m = kernel_moments(&g, &QuadratureSpec::default()).unwrap();
        assert!((m.mean_q - cq).abs() < 1e-12);
    }

    #[test]
    fn general_kernel_matches_closed_forms() {
        let g = GaussianParams::new(c(0.9, -0.35), 0.4, c(0.3, 0.6)).unwrap();
        let m = kernel_moments(&g, &QuadratureSpec::default()).unwrap();
        let cv = covariance_from_params(&g);
        assert!(m.imag_residue < 1e-9);
        assert!((m.norm - 1.0).abs() < 1e-9);
        assert!((m.sigma_qq - cv.sigma_qq).abs() < 1e-8);
        assert!((m.mean_q - cv.mean_q).abs() < 1e-8);
        assert!((m.sigma_pp - cv.sigma_pp).abs() < 1e-7);
        assert!((m.sigma_pq - cv.sigma_pq).abs() < 1e-7);
        assert!((m.mean_p - cv.mean_p).abs() < 1e-7);
    }

    #[test]
    fn quadrature_that_cannot_stabilise_errors() {
        let spec = QuadratureSpec {
            base_nodes: 3,
            max_doublings: 1,
            ..QuadratureSpec::default()
        };
        let g = GaussianParams::squeezed_vacuum(1.0).unwrap();
        assert!(matches!(
            kernel_moments(&g, &spec),
            Err(Error::QuadratureUnstable { .. })
        ));
    }
}
