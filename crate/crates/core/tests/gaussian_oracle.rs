use entropyne_core::fock::{converged_partition, exp_diagonal, kernel_moments, FockTruncation, QuadratureSpec};
use entropyne_core::gaussian::{
    covariance_from_params, fock_diagonal_element, mean_momentum, mean_momentum_half_form, partition_function,
    GaussianParams, QuadraticHamiltonian,
};
use entropyne_core::sampling::{random_convergent_hamiltonian, random_gaussian_params};
use entropyne_core::Complex64;

/// Three candidate closed forms for `<p>` against derivative quadrature.
/// Exactly one may survive; it must be the one the library uses.
#[test]
fn mean_momentum_arbitration() {
    let spec = QuadratureSpec::default();
    for seed in [11u64, 12, 13] {
        let g = random_gaussian_params(seed);
        let oracle = kernel_moments(&g, &spec).unwrap().mean_p;
        let adopted = mean_momentum(&g);
        let half = mean_momentum_half_form(&g);
        let negated = -adopted;
        let hits = [adopted, half, negated]
            .iter()
            .map(|v| (v - oracle).abs() < 1e-8)
            .collect::<Vec<_>>();
        println!("seed {seed}: oracle {oracle:.12} adopted {adopted:.12} half {half:.12} negated {negated:.12}");
        assert_eq!(hits, vec![true, false, false], "seed {seed}");
    }
}

#[test]
fn closed_form_moments_match_quadrature() {
    let spec = QuadratureSpec::default();
    let mut worst = 0.0f64;
    for seed in 0..100 {
        let g = random_gaussian_params(seed);
        let m = kernel_moments(&g, &spec).unwrap();
        let c = covariance_from_params(&g);
        let errs = [
            m.norm - 1.0,
            m.mean_q - c.mean_q,
            m.mean_p - c.mean_p,
            m.sigma_qq - c.sigma_qq,
            m.sigma_pp - c.sigma_pp,
            m.sigma_pq - c.sigma_pq,
        ];
        for e in errs {
            worst = worst.max(e.abs());
        }
        assert!(errs.iter().all(|e| e.abs() < 1e-8), "seed {seed}: {errs:?}");
        assert!(m.imag_residue < 1e-9);
        assert!(c.det() >= 0.25 - 1e-12);
    }
    println!("worst moment error {worst:.3e}");
}

#[test]
fn partition_function_matches_fock_trace() {
    for seed in 0..50 {
        let (h, beta) = random_convergent_hamiltonian(seed);
        let closed = partition_function(&h, beta).unwrap();
        let fock = converged_partition(&h, beta).unwrap();
        let rel = (closed - fock.value).abs() / closed;
        assert!(
            rel <= 1e-8,
            "seed {seed}: closed {closed} fock {} rel {rel:.3e}",
            fock.value
        );
    }
}

#[test]
fn legendre_diagonal_matches_matrix_exponential() {
    let h = QuadraticHamiltonian::new(1.0, 0.6, Complex64::new(0.0, 0.0), 0.4).unwrap();
    let diag = exp_diagonal(&h, 1.0, &FockTruncation::new(200, 1.0).unwrap()).unwrap();
    for (n, oracle) in diag.iter().enumerate().take(31) {
        let closed = fock_diagonal_element(&h, 1.0, n).unwrap();
        assert!((closed - oracle).abs() < 1e-8, "n {n}: {closed} vs {oracle}");
    }
}

#[test]
fn thermal_kernel_is_diagonal_in_phase_space() {
    for nbar in [0.0, 0.3, 2.0] {
        let g = GaussianParams::thermal(nbar, 1.4).unwrap();
        let m = kernel_moments(&g, &QuadratureSpec::default()).unwrap();
        let s = 0.5 * (1.0 + 2.0 * nbar);
        assert!((m.sigma_pp - s * 1.4).abs() < 1e-10);
        assert!((m.sigma_qq - s / 1.4).abs() < 1e-10);
        assert!(m.sigma_pq.abs() < 1e-12);
    }
}
