use std::sync::Arc;

use num_complex::Complex64;

use crate::radial::{
    BesselKernel, KernelKind, RadialGrid, RadialState, SpectralGrid, SpectralState,
};
use crate::{Channel, Result};

/// `psi#(k) -> e^{-i k^2 t} psi#(k)`.
pub fn spectral_phase(t: f64, spectral: &SpectralState) -> SpectralState {
    spectral.map(|k, v| v * Complex64::from_polar(1.0, -k * k * t))
}

/// `e^{-i h(mu) t}` in the order-`mu` spectral representation.
#[derive(Debug, Clone)]
pub struct Propagator {
    kernel: Arc<BesselKernel>,
}

impl Propagator {
    pub fn from_kernel(kernel: Arc<BesselKernel>) -> Self {
        Self { kernel }
    }

    /// Free radial dynamics `h_{0,l}`, evaluated with spherical Bessel functions.
    pub fn free(ell: u32, rgrid: Arc<RadialGrid>, kgrid: Arc<SpectralGrid>) -> Result<Self> {
        Ok(Self::from_kernel(Arc::new(BesselKernel::spherical(ell, rgrid, kgrid)?)))
    }

    /// Monopole radial dynamics `h_l = h(mu)`.
    pub fn monopole(channel: Channel, rgrid: Arc<RadialGrid>, kgrid: Arc<SpectralGrid>) -> Result<Self> {
        Ok(Self::from_kernel(Arc::new(BesselKernel::real_order(channel.mu(), rgrid, kgrid)?)))
    }

    pub fn kernel(&self) -> &Arc<BesselKernel> {
        &self.kernel
    }

    pub fn mu(&self) -> f64 {
        self.kernel.mu()
    }

    pub fn kind(&self) -> KernelKind {
        self.kernel.kind()
    }

    pub fn to_spectral(&self, state: &RadialState) -> Result<SpectralState> {
        self.kernel.forward(state)
    }

    pub fn to_radial(&self, spectral: &SpectralState) -> Result<RadialState> {
        self.kernel.inverse(spectral)
    }

    /// `e^{-i h t}` applied to the state with spectral data `spectral`.
    pub fn evolve(&self, t: f64, spectral: &SpectralState) -> Result<RadialState> {
        self.kernel.inverse(&spectral_phase(t, spectral))
    }

    /// `e^{-i h t}` on a position-space state (forward, phase, inverse).
    pub fn evolve_state(&self, t: f64, state: &RadialState) -> Result<RadialState> {
        self.evolve(t, &self.kernel.forward(state)?)
    }
}

/// `e^{-i h_{0,l} t}` applied to the state with order-`(l + 1/2)` spectral data.
pub fn evolve_free(ell: u32, t: f64, spectral: &SpectralState, rgrid: &Arc<RadialGrid>) -> Result<RadialState> {
    Propagator::free(ell, rgrid.clone(), spectral.grid().clone())?.evolve(t, spectral)
}

/// `e^{-i h_l t}` applied to the state with order-`mu` spectral data.
/// A free channel (`n = 0`) runs with `mu = l + 1/2` through the real-order path.
pub fn evolve_monopole(
    channel: Channel,
    t: f64,
    spectral_mu: &SpectralState,
    rgrid: &Arc<RadialGrid>,
) -> Result<RadialState> {
    Propagator::monopole(channel, rgrid.clone(), spectral_mu.grid().clone())?.evolve(t, spectral_mu)
}
