//! Radial quadrature grids, states and the Fourier–Bessel transform pair.

mod grid;
mod operator;
mod state;
mod transform;

pub use grid::{
    make_radial_grid, make_spectral_grid, Grid, GridSpec, Radial, RadialGrid, Spectral,
    SpectralGrid, MAX_ORDER,
};
pub use operator::{apply_h, apply_h_free, interior_node_count, HApplied};
pub use state::{RadialState, SpectralState, State};
pub use transform::{
    fourier_bessel, inverse_at, inverse_fourier_bessel, BesselKernel, KernelCache, KernelKind,
};

/// Default radial window. The outer edge sits far enough out that the slow
/// `exp(-c sqrt(r))` tail of the standard bump is below `1e-9`.
pub const DEFAULT_R_MIN: f64 = 1e-3;
pub const DEFAULT_R_MAX: f64 = 200.0;
pub const DEFAULT_K_MIN: f64 = 0.2;
pub const DEFAULT_K_MAX: f64 = 6.0;
