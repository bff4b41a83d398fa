//! Legendre polynomials by the three-term recurrence
//! `(n + 1) P_(n+1)(z) = (2n + 1) z P_n(z) - n P_(n-1)(z)`.

/// `P_n(z)`.
pub fn legendre(n: usize, z: f64) -> f64 {
    scaled_legendre(n, z, 1.0)
}

/// `w^n P_n(z)`, computed by recurring on the scaled sequence so that large
/// `n` does not overflow when `w (z + sqrt(z^2 - 1)) < 1`.
pub fn scaled_legendre(n: usize, z: f64, w: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = w * z;
    let wz = w * z;
    let w2 = w * w;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * wz * cur - kf * w2 * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}
