use crate::{Error, Result};

/// Largest degree accepted by [`jacobi`]; twice the supported `ell_max = 32`.
pub const JACOBI_DEGREE_CAP: u32 = 64;

/// Jacobi polynomial `P^{alpha,beta}_degree(xi)` normalised so that `P_0 = 1`.
///
/// Negative integer parameters (as produced by `alpha = -n - m`, `beta = n - m`)
/// are handled by the explicit Leibniz expansion of the Rodrigues formula; the
/// three-term recurrence is not used because it degenerates there.
pub fn jacobi(alpha: f64, beta: f64, degree: u32, xi: f64) -> Result<f64> {
    jacobi_with_cap(alpha, beta, degree, xi, JACOBI_DEGREE_CAP)
}

pub fn jacobi_with_cap(alpha: f64, beta: f64, degree: u32, xi: f64, cap: u32) -> Result<f64> {
    if degree > cap {
        return Err(Error::Capacity(format!("Jacobi degree {degree} exceeds cap {cap}")));
    }
    if !(-1.0..=1.0).contains(&xi) {
        return Err(Error::Domain(format!("xi = {xi} outside [-1, 1]")));
    }
    Ok(rodrigues_sum(alpha, beta, degree, xi))
}

/// Coefficients `b_s = C(N+alpha, N-s) C(N+beta, s)` of the expansion
/// `P_N(xi) = sum_s b_s ((xi-1)/2)^s ((xi+1)/2)^(N-s)`.
pub(crate) fn rodrigues_coefficients(alpha: f64, beta: f64, degree: u32) -> Vec<f64> {
    let n = degree as usize;
    (0..=n)
        .map(|s| binomial(n as f64 + alpha, n - s) * binomial(n as f64 + beta, s))
        .collect()
}

fn rodrigues_sum(alpha: f64, beta: f64, degree: u32, xi: f64) -> f64 {
    let n = degree as i32;
    let lower = 0.5 * (xi - 1.0);
    let upper = 0.5 * (xi + 1.0);
    rodrigues_coefficients(alpha, beta, degree)
        .iter()
        .enumerate()
        .map(|(s, b)| b * lower.powi(s as i32) * upper.powi(n - s as i32))
        .sum()
}

/// Generalised binomial coefficient `a (a-1) ... (a-j+1) / j!`.
pub(crate) fn binomial(a: f64, j: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..j {
        acc *= (a - i as f64) / (i as f64 + 1.0);
    }
    acc
}
