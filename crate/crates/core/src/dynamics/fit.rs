use serde::{Deserialize, Serialize};

/// Least-squares line through `(ln t, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub log_prefactor: f64,
    /// Root-mean-square residual in `ln y`.
    pub residual: f64,
    pub points: usize,
}

/// Fit `y ~ C t^p` over samples with `t_min <= t <= t_max` and `y > 0`.
/// Returns `None` with fewer than two usable samples.
pub fn fit_power_law(times: &[f64], values: &[f64], t_min: f64, t_max: f64) -> Option<PowerLawFit> {
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(t, y)| **t >= t_min && **t <= t_max && **y > 0.0 && y.is_finite())
        .map(|(t, y)| (t.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rss: f64 = pts.iter().map(|p| (p.1 - icpt - slope * p.0).powi(2)).sum();
    Some(PowerLawFit { exponent: slope, log_prefactor: icpt, residual: (rss / n).sqrt(), points: pts.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_power_law() {
        let t: Vec<f64> = (1..20).map(|i| i as f64).collect();
        let y: Vec<f64> = t.iter().map(|t| 3.0 * t.powf(-1.5)).collect();
        let fit = fit_power_law(&t, &y, 4.0, 100.0).unwrap();
        assert!((fit.exponent + 1.5).abs() < 1e-12);
        assert!((fit.log_prefactor - 3f64.ln()).abs() < 1e-12);
        assert_eq!(fit.points, 16);
        assert!(fit_power_law(&t, &vec![0.0; t.len()], 4.0, 100.0).is_none());
    }
}
