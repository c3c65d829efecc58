use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{horizon_grids, spectral_phase, spectral_window, HorizonGrids, Propagator};
use crate::quadrature::gauss_legendre;
use crate::radial::{RadialState, SpectralState};
use crate::{Channel, Error, Result};

/// Largest inner radius for which the short-range part `v_1` on `(0, 1]` is
/// considered resolved.
pub const MAX_R_MIN_FOR_V1: f64 = 0.05;

/// `||v e^{-i h_{0,l} t} psi||` with `v = -n^2/r^2` split at `r = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CookPoint {
    pub t: f64,
    pub total: f64,
    pub v1: f64,
    pub v2: f64,
}

/// Wave-operator machinery for one channel and one incoming state.
///
/// The incoming state is given by its order-`(l + 1/2)` spectral data. Both
/// propagators share grids sized for times up to `t_max`.
#[derive(Debug, Clone)]
pub struct WaveOperator {
    channel: Channel,
    grids: HorizonGrids,
    free: Propagator,
    monopole: Propagator,
    sharp: SpectralState,
    psi: RadialState,
}

impl WaveOperator {
    pub fn new(channel: Channel, psi_sharp: &SpectralState, t_max: f64) -> Result<Self> {
        let window = spectral_window(psi_sharp)
            .ok_or_else(|| Error::Hypothesis("incoming state is zero".into()))?;
        let grids = horizon_grids(t_max, window)?;
        Self::with_grids(channel, psi_sharp, grids)
    }

    pub fn with_grids(channel: Channel, psi_sharp: &SpectralState, grids: HorizonGrids) -> Result<Self> {
        if grids.rgrid.lo() > MAX_R_MIN_FOR_V1 {
            return Err(Error::Config(format!(
                "r_min = {} does not resolve the inner potential (need <= {MAX_R_MIN_FOR_V1})",
                grids.rgrid.lo()
            )));
        }
        let free = Propagator::free(channel.ell(), grids.rgrid.clone(), grids.kgrid.clone())?;
        let monopole = if channel.is_free() {
            free.clone()
        } else {
            Propagator::monopole(channel, grids.rgrid.clone(), grids.kgrid_wide.clone())?
        };
        let sharp = if Arc::ptr_eq(psi_sharp.grid(), &grids.kgrid) || **psi_sharp.grid() == *grids.kgrid {
            psi_sharp.clone()
        } else {
            psi_sharp.resample(grids.kgrid.clone())
        };
        let psi = free.to_radial(&sharp)?;
        Ok(Self { channel, grids, free, monopole, sharp, psi })
    }

    pub fn channel(&self) -> Channel {
        self.channel
    }

    pub fn grids(&self) -> &HorizonGrids {
        &self.grids
    }

    /// `e^{-i h_{0,l} t}` on the solver's grids.
    pub fn free_propagator(&self) -> &Propagator {
        &self.free
    }

    /// `e^{-i h_l t}`, with spectral data on the wide k-grid.
    pub fn monopole_propagator(&self) -> &Propagator {
        &self.monopole
    }

    /// Incoming spectral data on the solver's own grid.
    pub fn psi_sharp(&self) -> &SpectralState {
        &self.sharp
    }

    /// The incoming state `psi` in position space.
    pub fn psi(&self) -> &RadialState {
        &self.psi
    }

    /// `e^{-i h_{0,l} t} psi`.
    pub fn free_state(&self, t: f64) -> Result<RadialState> {
        self.free.evolve(t, &self.sharp)
    }

    /// Order-`mu` spectral data of `Omega_T psi = e^{i h_l T} e^{-i h_{0,l} T} psi`.
    ///
    /// Negative `T` is obtained from positive `T` by complex conjugation, which
    /// commutes with the real kernels and reverses both phases.
    pub fn spectral(&self, t: f64) -> Result<SpectralState> {
        if self.channel.is_free() {
            return Ok(self.sharp.clone());
        }
        if t < 0.0 {
            let conj = WaveOperator { sharp: self.sharp.conj(), ..self.clone() };
            return Ok(conj.spectral(-t)?.conj());
        }
        let phi = self.free.evolve(t, &self.sharp)?;
        let mu_data = self.monopole.to_spectral(&phi)?;
        Ok(spectral_phase(-t, &mu_data))
    }

    /// `Omega_T psi` in position space. A free channel returns `psi` itself,
    /// since then `h_l = h_{0,l}`.
    pub fn apply(&self, t: f64) -> Result<RadialState> {
        if self.channel.is_free() {
            return Ok(self.psi.clone());
        }
        self.monopole.to_radial(&self.spectral(t)?)
    }

    pub fn cook_point(&self, t: f64) -> Result<CookPoint> {
        let phi = self.free_state(t)?;
        Ok(cook_norms(self.channel, &phi, t))
    }

    /// `int_{t0}^{t1} ||v e^{-i h_{0,l} s} psi|| ds` by composite Gauss–Legendre
    /// in `ln s` (`nodes` per octave, at least one panel).
    pub fn cook_integral(&self, t0: f64, t1: f64, nodes: usize) -> Result<f64> {
        if !(t0 > 0.0 && t1 > t0) {
            return Err(Error::Config(format!("Cook integral needs 0 < t0 < t1, got [{t0}, {t1}]")));
        }
        let panels = (t1 / t0).log2().ceil().max(1.0) as usize;
        let (x, w) = gauss_legendre(nodes);
        let (l0, l1) = (t0.ln(), t1.ln());
        let h = (l1 - l0) / panels as f64;
        let samples: Vec<(f64, f64)> = (0..panels)
            .flat_map(|p| {
                let mid = l0 + h * (p as f64 + 0.5);
                x.iter().zip(&w).map(move |(xi, wi)| {
                    let s = (mid + 0.5 * h * xi).exp();
                    (s, 0.5 * h * wi * s)
                })
            })
            .collect();
        let values: Vec<Result<f64>> = samples
            .par_iter()
            .map(|(s, _)| self.cook_point(*s).map(|c| c.total))
            .collect();
        let mut acc = 0.0;
        for ((_, wt), v) in samples.iter().zip(values) {
            acc += wt * v?;
        }
        Ok(acc)
    }
}

/// Norms of `v phi` on the grid, with `r <= 1` assigned to `v_1`.
fn cook_norms(channel: Channel, phi: &RadialState, t: f64) -> CookPoint {
    let n2 = (channel.n() * channel.n()) as f64;
    let g = phi.grid();
    let (mut a, mut b) = (0.0, 0.0);
    for ((r, w), v) in g.nodes().iter().zip(g.weights()).zip(phi.values()) {
        let q = w * (n2 / (r * r)).powi(2) * v.norm_sqr();
        if *r <= 1.0 {
            a += q;
        } else {
            b += q;
        }
    }
    CookPoint { t, total: (a + b).sqrt(), v1: a.sqrt(), v2: b.sqrt() }
}
