use std::io::Write;

use serde::{Deserialize, Serialize};

use super::fit::fit_power_law;
use super::packet::{horizon_grids, widen_support};
use crate::radial::{inverse_at, Grid, GridSpec, KernelKind, RadialGrid, SpectralState};
use crate::{Error, Result};

/// Time series of suprema with a fitted power-law exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub times: Vec<f64>,
    pub sup_values: Vec<f64>,
    /// Slope of `ln sup` against `ln t` over `[t_fit_min, t_fit_max]`; `None` when
    /// the series vanishes identically.
    pub fitted_exponent: Option<f64>,
    pub residual: f64,
    pub target_exponent: f64,
    pub t_fit_min: f64,
    pub t_fit_max: f64,
}

impl DecayReport {
    pub fn from_series(times: Vec<f64>, sup_values: Vec<f64>, target: f64, t_fit_min: f64, t_fit_max: f64) -> Self {
        let fit = fit_power_law(&times, &sup_values, t_fit_min, t_fit_max);
        Self {
            fitted_exponent: fit.map(|f| f.exponent),
            residual: fit.map_or(0.0, |f| f.residual),
            times,
            sup_values,
            target_exponent: target,
            t_fit_min,
            t_fit_max,
        }
    }

    /// Envelope `C t^target` with the smallest `C` that dominates every fitted sample.
    pub fn bound(&self) -> Vec<f64> {
        let c = self
            .times
            .iter()
            .zip(&self.sup_values)
            .filter(|(t, _)| **t >= self.t_fit_min && **t <= self.t_fit_max)
            .map(|(t, s)| s * t.powf(-self.target_exponent))
            .fold(0.0, f64::max);
        self.times.iter().map(|t| c * t.powf(self.target_exponent)).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "sup", "bound"])?;
        for ((t, s), b) in self.times.iter().zip(&self.sup_values).zip(self.bound()) {
            w.write_record([fmt(*t), fmt(*s), fmt(b)])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "fitted_exponent": self.fitted_exponent,
            "residual": self.residual,
            "target": self.target_exponent,
            "t_fit_min": self.t_fit_min,
            "t_fit_max": self.t_fit_max,
        })
    }
}

pub(crate) fn fmt(x: f64) -> String {
    format!("{x:.12e}")
}

/// Sampling choices shared by the decay diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayOptions {
    /// Radial grid whose nodes with `r <= 1` carry the small-`r` supremum.
    pub inner_grid: GridSpec,
    pub t_fit_min: f64,
    pub t_fit_max: f64,
}

impl Default for DecayOptions {
    fn default() -> Self {
        Self {
            inner_grid: GridSpec::new(1e-3, 1.0, 4, 16).graded(true),
            t_fit_min: 4.0,
            t_fit_max: 100.0,
        }
    }
}

/// `4 .. 100`, roughly geometric.
pub fn default_times() -> Vec<f64> {
    vec![4.0, 5.0, 6.0, 8.0, 10.0, 12.0, 16.0, 20.0, 25.0, 32.0, 40.0, 50.0, 64.0, 80.0, 100.0]
}

fn check_hypothesis(psi: &SpectralState) -> Result<Option<(f64, f64)>> {
    let Some(support) = psi.support() else { return Ok(None) };
    let first = psi.values()[0].norm();
    let peak = psi.max_abs();
    if first > 1e-12 * peak {
        return Err(Error::Hypothesis(
            "spectral data does not vanish at the lower edge of its grid; support must stay away from k = 0"
                .into(),
        ));
    }
    Ok(Some(support))
}

/// Spectral data on a grid fine enough for time `t_max`, restricted to the
/// support of `psi`.
fn refined(psi: &SpectralState, support: (f64, f64), t_max: f64) -> Result<SpectralState> {
    let g = horizon_grids(t_max, widen_support(psi, support))?;
    Ok(psi.resample(g.kgrid))
}

/// `sup_{r <= 1} |e^{-i h_{0,l} t} psi|(r) / r^l` for each time.
pub fn small_r_decay(ell: u32, psi_sharp: &SpectralState, times: &[f64], n: u32) -> Result<DecayReport> {
    small_r_decay_with(ell, psi_sharp, times, n, &DecayOptions::default())
}

pub fn small_r_decay_with(
    ell: u32,
    psi_sharp: &SpectralState,
    times: &[f64],
    n: u32,
    opts: &DecayOptions,
) -> Result<DecayReport> {
    let target = -(n as f64);
    check_times(times)?;
    let Some(support) = check_hypothesis(psi_sharp)? else {
        return Ok(DecayReport::from_series(times.to_vec(), vec![0.0; times.len()], target, opts.t_fit_min, opts.t_fit_max));
    };
    let t_max = times.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let fine = refined(psi_sharp, support, t_max)?;
    let inner: RadialGrid = Grid::new(opts.inner_grid)?;
    let radii: Vec<f64> = inner.nodes().iter().copied().filter(|r| *r <= 1.0).collect();
    let kind = KernelKind::Spherical(ell);
    let mut sups = Vec::with_capacity(times.len());
    for &t in times {
        let vals = inverse_at(kind, &super::spectral_phase(t, &fine), &radii)?;
        let s = vals
            .iter()
            .zip(&radii)
            .map(|(v, r)| v.norm() / r.powi(ell as i32))
            .fold(0.0, f64::max);
        sups.push(s);
    }
    Ok(DecayReport::from_series(times.to_vec(), sups, target, opts.t_fit_min, opts.t_fit_max))
}

/// Slope of `ln |psi_t(r)|` against `ln r` on ten log-spaced radii in `[1e-3, 1e-2]`.
pub fn vanishing_order(ell: u32, psi_sharp: &SpectralState, t: f64) -> Result<f64> {
    let radii: Vec<f64> = (0..10).map(|i| 1e-3 * 10f64.powf(i as f64 / 9.0)).collect();
    let Some(support) = check_hypothesis(psi_sharp)? else {
        return Err(Error::Hypothesis("zero state has no vanishing order".into()));
    };
    let fine = refined(psi_sharp, support, t)?;
    let vals = inverse_at(KernelKind::Spherical(ell), &super::spectral_phase(t, &fine), &radii)?;
    let mags: Vec<f64> = vals.iter().map(|v| v.norm()).collect();
    fit_power_law(&radii, &mags, 0.0, f64::INFINITY)
        .map(|f| f.exponent)
        .ok_or_else(|| Error::Accuracy("radial profile vanishes on the sampling window".into()))
}

/// `sup_r |e^{-i h_{0,l} t} psi|(r)` over a radial grid that holds the evolved
/// packet at each time; target exponent `-3/2`.
pub fn supnorm_decay(ell: u32, psi_sharp: &SpectralState, times: &[f64]) -> Result<DecayReport> {
    let opts = DecayOptions::default();
    check_times(times)?;
    let Some(support) = check_hypothesis(psi_sharp)? else {
        return Ok(DecayReport::from_series(times.to_vec(), vec![0.0; times.len()], -1.5, opts.t_fit_min, opts.t_fit_max));
    };
    let kind = KernelKind::Spherical(ell);
    let mut sups = Vec::with_capacity(times.len());
    for &t in times {
        let g = horizon_grids(t, widen_support(psi_sharp, support))?;
        let fine = psi_sharp.resample(g.kgrid.clone());
        let vals = inverse_at(kind, &super::spectral_phase(t, &fine), g.rgrid.nodes())?;
        sups.push(vals.iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    Ok(DecayReport::from_series(times.to_vec(), sups, -1.5, opts.t_fit_min, opts.t_fit_max))
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::Config("empty time schedule".into()));
    }
    if times.windows(2).any(|w| w[0] >= w[1]) || times.iter().any(|t| !t.is_finite()) {
        return Err(Error::Config("time schedule must be finite and strictly ascending".into()));
    }
    Ok(())
}

