use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cook::fmt;
use super::operator::WaveOperator;
use super::waveop::CONVERGENCE_THRESHOLD;
use crate::dynamics::Wavepacket;
use crate::radial::{make_spectral_grid, SpectralState};
use crate::specfun::bessel_real_order;
use crate::{Channel, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseMethod {
    /// From `<Omega_+ psi, Omega_- psi>` at finite times, extrapolated in `1/T`.
    LongTime,
    /// From the large-argument phases of `J_mu` and `J_{l+1/2}`.
    AsymptoticMatch,
}

/// Reduce an angle modulo `pi` into `(-pi/2, pi/2]`. Values within `1e-6` of
/// `-pi/2` map to `pi/2`.
pub fn reduce_phase(delta: f64) -> f64 {
    let d = (delta + FRAC_PI_2).rem_euclid(PI) - FRAC_PI_2;
    if d <= -FRAC_PI_2 + 1e-6 || d >= FRAC_PI_2 {
        FRAC_PI_2
    } else {
        d
    }
}

/// Distance between two phases modulo `pi`.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

/// Per-channel phase shift with the diagnostics of its extraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseShift {
    pub channel: Channel,
    pub method: PhaseMethod,
    /// Reduced to `(-pi/2, pi/2]`.
    pub delta: f64,
    /// Whole multiples of `pi` removed by the reduction.
    pub winding: i64,
    /// Relative `defect(T/2, T)` of the long-time run; zero for the asymptotic method.
    pub defect: f64,
    /// `(k, delta(k))` on the probe support; empty for the asymptotic method.
    pub k_resolved: Vec<(f64, f64)>,
}

impl PhaseShift {
    /// Largest deviation of the k-resolved phases from `delta`, modulo `pi`.
    pub fn k_spread(&self) -> f64 {
        self.k_resolved.iter().map(|(_, d)| phase_distance(*d, self.delta)).fold(0.0, f64::max)
    }
}

/// Long-time probe: the bump `k0 = 2 max(1, |n|)`, `w = 1`, run to `T = 80`
/// with Richardson extrapolation between `T = 40` and `T = 80`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LongTimeOptions {
    pub t_max: f64,
    pub packet: Option<Wavepacket>,
    pub threshold: f64,
}

impl Default for LongTimeOptions {
    fn default() -> Self {
        Self { t_max: 80.0, packet: None, threshold: CONVERGENCE_THRESHOLD }
    }
}

pub fn phase_shift(channel: Channel, method: PhaseMethod) -> Result<PhaseShift> {
    match method {
        PhaseMethod::LongTime => phase_shift_long_time(channel, &LongTimeOptions::default()),
        PhaseMethod::AsymptoticMatch => phase_shift_asymptotic(channel),
    }
}

pub fn phase_shift_long_time(channel: Channel, opts: &LongTimeOptions) -> Result<PhaseShift> {
    if channel.is_free() {
        return Ok(PhaseShift {
            channel,
            method: PhaseMethod::LongTime,
            delta: 0.0,
            winding: 0,
            defect: 0.0,
            k_resolved: Vec::new(),
        });
    }
    let packet = match opts.packet {
        Some(p) => p,
        None => Wavepacket::new(2.0 * (channel.n().unsigned_abs().max(1)) as f64, 1.0)?,
    };
    let (a, b) = packet.support();
    let seed = make_spectral_grid(a, b, 8, 16)?;
    let sharp = packet.sample(std::sync::Arc::new(seed));
    let op = WaveOperator::new(channel, &sharp, opts.t_max)?;
    let t1 = opts.t_max;
    let t0 = 0.5 * t1;
    let (o0, i0) = (op.spectral(t0)?, op.spectral(-t0)?);
    let (o1, i1) = (op.spectral(t1)?, op.spectral(-t1)?);
    let psi_norm = op.psi().norm();
    let defect = o1.distance(&o0)? / psi_norm;
    if defect > opts.threshold {
        return Err(Error::Convergence { defect, threshold: opts.threshold });
    }
    let d0 = 0.5 * o0.inner(&i0)?.arg();
    let d1 = 0.5 * o1.inner(&i1)?.arg();
    // delta(T) - delta = O(1/T); phases compared on a common branch.
    let d0 = d1 + wrap_half_pi(d0 - d1);
    let delta_raw = 2.0 * d1 - d0;
    let k_resolved = resolved(&o0, &i0, &o1, &i1);
    let delta = reduce_phase(delta_raw);
    Ok(PhaseShift {
        channel,
        method: PhaseMethod::LongTime,
        delta,
        winding: ((delta_raw - delta) / PI).round() as i64,
        defect,
        k_resolved,
    })
}

fn wrap_half_pi(x: f64) -> f64 {
    (x + FRAC_PI_2).rem_euclid(PI) - FRAC_PI_2
}

fn resolved(o0: &SpectralState, i0: &SpectralState, o1: &SpectralState, i1: &SpectralState) -> Vec<(f64, f64)> {
    let peak = o1.max_abs();
    let nodes = o1.grid().nodes();
    let mut out = Vec::new();
    for j in 0..nodes.len() {
        let a = o1.values()[j];
        if a.norm() < 1e-3 * peak {
            continue;
        }
        let p1 = 0.5 * (a.conj() * i1.values()[j]).arg();
        let p0 = 0.5 * (o0.values()[j].conj() * i0.values()[j]).arg();
        let p0 = p1 + wrap_half_pi(p0 - p1);
        out.push((nodes[j], reduce_phase(2.0 * p1 - p0)));
    }
    out
}

/// Phase of `sqrt(pi x / 2) J_nu(x) ~ cos(x - c)` fitted on `[x0, x0 + 2 pi]`.
fn asymptotic_offset(nu: f64, x0: f64) -> Result<f64> {
    let samples = 64;
    let (mut scc, mut sss, mut scs, mut syc, mut sys) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..samples {
        let x = x0 + 2.0 * PI * (i as f64 + 0.5) / samples as f64;
        let y = (PI * x / 2.0).sqrt() * bessel_real_order(nu, x)?;
        let (s, c) = x.sin_cos();
        scc += c * c;
        sss += s * s;
        scs += c * s;
        syc += y * c;
        sys += y * s;
    }
    let det = scc * sss - scs * scs;
    let a = (syc * sss - sys * scs) / det;
    let b = (sys * scc - syc * scs) / det;
    Ok(b.atan2(a))
}

/// Offset `c(nu)` extrapolated in `1/x`, unwrapped continuously from `from` to `to`
/// through order steps of at most `1/2`.
fn unwrapped_offset_difference(from: f64, to: f64) -> Result<f64> {
    let steps = ((to - from).abs() / 0.5).ceil().max(1.0) as usize;
    let offset = |nu: f64| -> Result<f64> {
        let c1 = asymptotic_offset(nu, 1000.0)?;
        let c2 = asymptotic_offset(nu, 2000.0)?;
        let c2 = c1 + wrap_half_pi(c2 - c1);
        Ok(2.0 * c2 - c1)
    };
    let mut prev = offset(from)?;
    let mut total = 0.0;
    for i in 1..=steps {
        let nu = from + (to - from) * i as f64 / steps as f64;
        let c = offset(nu)?;
        let mut d = (c - prev).rem_euclid(2.0 * PI);
        if d > PI {
            d -= 2.0 * PI;
        }
        total += d;
        prev = c;
    }
    Ok(total)
}

pub fn phase_shift_asymptotic(channel: Channel) -> Result<PhaseShift> {
    let nu = channel.free_order();
    let delta_raw = if channel.is_free() {
        0.0
    } else {
        // delta = c(nu) - c(mu) where J_nu(x) ~ cos(x - c(nu)).
        -unwrapped_offset_difference(nu, channel.mu())?
    };
    let delta = reduce_phase(delta_raw);
    Ok(PhaseShift {
        channel,
        method: PhaseMethod::AsymptoticMatch,
        delta,
        winding: ((delta_raw - delta) / PI).round() as i64,
        defect: 0.0,
        k_resolved: Vec::new(),
    })
}

/// Channel-diagonal scattering operator `psi# -> e^{2 i delta} psi#`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SMatrix {
    pub channel: Channel,
    pub delta: f64,
}

impl SMatrix {
    /// Only channels with `l >= |n|` carry an S-matrix.
    pub fn new(n: i32, ell: u32, m: i32, method: PhaseMethod) -> Result<Self> {
        let channel = Channel::new(n, ell, m)?;
        Ok(Self { channel, delta: phase_shift(channel, method)?.delta })
    }

    pub fn from_phase(shift: &PhaseShift) -> Self {
        Self { channel: shift.channel, delta: shift.delta }
    }

    pub fn eigenvalue(&self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * self.delta)
    }

    pub fn apply(&self, spectral: &SpectralState) -> SpectralState {
        spectral.scale(self.eigenvalue())
    }
}

/// `S psi#` with the asymptotic-match phase of channel `(n, l, m)`.
pub fn s_matrix_apply(n: i32, ell: u32, m: i32, spectral_in: &SpectralState) -> Result<SpectralState> {
    Ok(SMatrix::new(n, ell, m, PhaseMethod::AsymptoticMatch)?.apply(spectral_in))
}

/// One row of the phase table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseRow {
    pub n: i32,
    pub ell: u32,
    pub delta_long_time: f64,
    pub delta_asymptotic: f64,
    pub defect: f64,
}

pub fn phase_row(channel: Channel, opts: &LongTimeOptions) -> Result<PhaseRow> {
    let lt = phase_shift_long_time(channel, opts)?;
    let am = phase_shift_asymptotic(channel)?;
    Ok(PhaseRow {
        n: channel.n(),
        ell: channel.ell(),
        delta_long_time: lt.delta,
        delta_asymptotic: am.delta,
        defect: lt.defect,
    })
}

/// Phase rows for a channel sweep; rows keep the input order whether or not
/// the sweep runs in parallel.
pub fn phase_table(channels: &[Channel], opts: &LongTimeOptions, parallel: bool) -> Result<Vec<PhaseRow>> {
    use rayon::prelude::*;
    let rows: Vec<Result<PhaseRow>> = if parallel {
        channels.par_iter().map(|c| phase_row(*c, opts)).collect()
    } else {
        channels.iter().map(|c| phase_row(*c, opts)).collect()
    };
    rows.into_iter().collect()
}

pub fn write_phase_csv<W: Write>(rows: &[PhaseRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "ell", "delta_long_time", "delta_asymptotic", "defect"])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.ell.to_string(),
            fmt(r.delta_long_time),
            fmt(r.delta_asymptotic),
            fmt(r.defect),
        ])?;
    }
    w.flush()?;
    Ok(())
}
