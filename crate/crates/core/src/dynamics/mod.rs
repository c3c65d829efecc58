//! Spectral propagators, wavepackets and long-time diagnostics.

mod decay;
mod fit;
mod fourier3d;
mod packet;
mod propagator;

pub use decay::{
    default_times, small_r_decay, small_r_decay_with, supnorm_decay, vanishing_order,
    DecayOptions, DecayReport,
};
pub use fit::{fit_power_law, PowerLawFit};
pub use fourier3d::{fourier3d_check, fourier3d_check_with, Fourier3dOptions};
pub use packet::{horizon_grids, spectral_grid_like, spectral_window, HorizonGrids, Wavepacket};
pub use propagator::{evolve_free, evolve_monopole, spectral_phase, Propagator};
