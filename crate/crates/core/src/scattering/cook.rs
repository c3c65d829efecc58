use std::io::Write;

use serde::{Deserialize, Serialize};

use super::operator::{CookPoint, WaveOperator};
use crate::dynamics::fit_power_law;
use crate::radial::SpectralState;
use crate::{Channel, Error, Result};

/// Cook integrand sampled over a time schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CookSeries {
    pub channel: Channel,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub v1_values: Vec<f64>,
    pub v2_values: Vec<f64>,
    /// `int_{t_last}^inf` of the total from a power-law fit of its tail; `None`
    /// when the fitted exponent is not below `-1`.
    pub tail_integral_estimate: Option<f64>,
    pub total_exponent: Option<f64>,
    pub v1_exponent: Option<f64>,
    pub v2_exponent: Option<f64>,
}

impl CookSeries {
    pub fn from_points(channel: Channel, points: &[CookPoint], t_fit_min: f64, t_fit_max: f64) -> Self {
        let times: Vec<f64> = points.iter().map(|p| p.t).collect();
        let values: Vec<f64> = points.iter().map(|p| p.total).collect();
        let v1_values: Vec<f64> = points.iter().map(|p| p.v1).collect();
        let v2_values: Vec<f64> = points.iter().map(|p| p.v2).collect();
        let exp = |v: &[f64]| fit_power_law(&times, v, t_fit_min, t_fit_max);
        let total_fit = exp(&values);
        let tail = total_fit.and_then(|f| {
            let last = *times.last()?;
            if f.exponent < -1.0 {
                Some(f.log_prefactor.exp() * last.powf(f.exponent + 1.0) / -(f.exponent + 1.0))
            } else {
                None
            }
        });
        Self {
            channel,
            total_exponent: total_fit.map(|f| f.exponent),
            v1_exponent: exp(&v1_values).map(|f| f.exponent),
            v2_exponent: exp(&v2_values).map(|f| f.exponent),
            tail_integral_estimate: tail,
            times,
            values,
            v1_values,
            v2_values,
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "total", "v1", "v2"])?;
        for i in 0..self.times.len() {
            w.write_record([
                fmt(self.times[i]),
                fmt(self.values[i]),
                fmt(self.v1_values[i]),
                fmt(self.v2_values[i]),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub(crate) fn fmt(x: f64) -> String {
    format!("{x:.12e}")
}

/// `(total, v1 part, v2 part)` of the Cook integrand at time `t`.
pub fn cook_integrand(channel: Channel, psi_sharp: &SpectralState, t: f64) -> Result<CookPoint> {
    require_monopole(channel)?;
    WaveOperator::new(channel, psi_sharp, t.abs())?.cook_point(t)
}

/// Cook integrand over `times`, fitted on `[t_fit_min, t_fit_max]`.
pub fn cook_series(
    channel: Channel,
    psi_sharp: &SpectralState,
    times: &[f64],
    t_fit_min: f64,
    t_fit_max: f64,
) -> Result<CookSeries> {
    require_monopole(channel)?;
    if times.is_empty() {
        return Err(Error::Config("empty time schedule".into()));
    }
    let t_max = times.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let op = WaveOperator::new(channel, psi_sharp, t_max)?;
    let points = times.iter().map(|&t| op.cook_point(t)).collect::<Result<Vec<_>>>()?;
    Ok(CookSeries::from_points(channel, &points, t_fit_min, t_fit_max))
}

fn require_monopole(channel: Channel) -> Result<()> {
    if channel.is_free() {
        return Err(Error::Channel("the Cook integrand needs a monopole channel (n != 0)".into()));
    }
    Ok(())
}
