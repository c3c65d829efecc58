use std::io::Write;

use serde::{Deserialize, Serialize};

use super::cook::fmt;
use super::operator::WaveOperator;
use super::phase::reduce_phase;
use crate::radial::{RadialState, SpectralState};
use crate::{Channel, Error, Result};

/// Default evolution times for wave-operator runs.
pub const DEFAULT_SCHEDULE: [f64; 5] = [5.0, 10.0, 20.0, 40.0, 80.0];
/// Relative `defect(40, 80)` accepted as convergence.
pub const CONVERGENCE_THRESHOLD: f64 = 1e-3;

/// `Omega_T psi` with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveOpResult {
    pub channel: Channel,
    pub t: f64,
    pub omega_t: RadialState,
    /// `||Omega_{2T} psi - Omega_T psi||`.
    pub defect: f64,
    /// `|(||Omega_T psi|| - ||psi||)| / ||psi||`.
    pub norm_defect: f64,
    pub psi_norm: f64,
    /// `arg <Omega_T psi, Omega_{-T} psi> / 2`, reduced to `(-pi/2, pi/2]`.
    pub phase_shift_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveOpSummary {
    pub channel: Channel,
    pub t: f64,
    pub defect: f64,
    pub relative_defect: f64,
    pub norm_defect: f64,
    pub phase_shift_estimate: f64,
}

impl WaveOpResult {
    pub fn relative_defect(&self) -> f64 {
        self.defect / self.psi_norm
    }

    /// Convergence error carrying the relative defect when it exceeds `threshold`.
    pub fn check_converged(&self, threshold: f64) -> Result<()> {
        let defect = self.relative_defect();
        if defect > threshold {
            return Err(Error::Convergence { defect, threshold });
        }
        Ok(())
    }

    pub fn summary(&self) -> WaveOpSummary {
        WaveOpSummary {
            channel: self.channel,
            t: self.t,
            defect: self.defect,
            relative_defect: self.relative_defect(),
            norm_defect: self.norm_defect,
            phase_shift_estimate: self.phase_shift_estimate,
        }
    }
}

impl WaveOperator {
    /// Diagnostics at `T` (requires grids sized for `2T`).
    pub fn result(&self, t: f64) -> Result<WaveOpResult> {
        if !(t > 0.0) {
            return Err(Error::Config(format!("evolution time T = {t} must be positive")));
        }
        let omega = self.apply(t)?;
        let omega2 = self.apply(2.0 * t)?;
        let psi_norm = self.psi().norm();
        let out = self.spectral(t)?;
        let inc = self.spectral(-t)?;
        let overlap = out.inner(&inc)?;
        Ok(WaveOpResult {
            channel: self.channel(),
            t,
            defect: omega2.distance(&omega)?,
            norm_defect: (omega.norm() - psi_norm).abs() / psi_norm,
            psi_norm,
            phase_shift_estimate: reduce_phase(0.5 * overlap.arg()),
            omega_t: omega,
        })
    }
}

/// `Omega_T psi = e^{i h_l T} e^{-i h_{0,l} T} psi` with `defect(T, 2T)`.
pub fn wave_operator_approx(channel: Channel, psi_sharp: &SpectralState, t: f64) -> Result<WaveOpResult> {
    WaveOperator::new(channel, psi_sharp, 2.0 * t)?.result(t)
}

/// `(T, ||Omega_{2T} psi - Omega_T psi||)` for each `T` whose double is also on the schedule.
pub fn defect_table(op: &WaveOperator, schedule: &[f64]) -> Result<Vec<(f64, f64)>> {
    let states = schedule.iter().map(|&t| op.apply(t)).collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for (i, &t) in schedule.iter().enumerate() {
        if let Some(j) = schedule.iter().position(|s| *s == 2.0 * t) {
            rows.push((t, states[j].distance(&states[i])?));
        }
    }
    Ok(rows)
}

pub fn write_defect_csv<W: Write>(rows: &[(f64, f64)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["T", "defect"])?;
    for (t, d) in rows {
        w.write_record([fmt(*t), fmt(*d)])?;
    }
    w.flush()?;
    Ok(())
}
