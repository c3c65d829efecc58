use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::radial::{Grid, GridSpec, RadialGrid, SpectralGrid, SpectralState, DEFAULT_R_MIN};
use crate::{Error, Result};

/// Smooth compactly supported spectral profile
/// `exp(-1 / (1 - ((k - k0)/w)^2))` on `|k - k0| < w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wavepacket {
    pub k0: f64,
    pub width: f64,
}

impl Default for Wavepacket {
    fn default() -> Self {
        Self::standard()
    }
}

impl Wavepacket {
    pub fn standard() -> Self {
        Self { k0: 2.0, width: 1.0 }
    }

    /// Support must stay away from `k = 0`.
    pub fn new(k0: f64, width: f64) -> Result<Self> {
        if !(width > 0.0 && k0 - width > 0.0) {
            return Err(Error::Hypothesis(format!(
                "wavepacket support [{}, {}] must lie in k > 0",
                k0 - width,
                k0 + width
            )));
        }
        Ok(Self { k0, width })
    }

    pub fn profile(&self, k: f64) -> f64 {
        let x = (k - self.k0) / self.width;
        if x.abs() < 1.0 {
            (-1.0 / (1.0 - x * x)).exp()
        } else {
            0.0
        }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.k0 - self.width, self.k0 + self.width)
    }

    /// Samples on `kgrid`, scaled to unit norm there.
    pub fn sample(&self, kgrid: Arc<SpectralGrid>) -> SpectralState {
        let raw = SpectralState::from_fn(kgrid, |k| Complex64::new(self.profile(k), 0.0));
        let norm = raw.norm();
        if norm > 0.0 {
            raw.scale(Complex64::new(norm.recip(), 0.0))
        } else {
            raw
        }
    }
}

/// Grids sized for evolution up to time `t_max` of a state whose spectral
/// support is `[a, b]`.
#[derive(Debug, Clone)]
pub struct HorizonGrids {
    pub rgrid: Arc<RadialGrid>,
    pub kgrid: Arc<SpectralGrid>,
    /// `kgrid` extended by [`K_MARGIN`] on both sides (kept above `a / 4`), for
    /// spectral data in a different order, which is not compactly supported.
    pub kgrid_wide: Arc<SpectralGrid>,
}

pub const K_MARGIN: f64 = 1.0;

pub const R_PANEL_WIDTH: f64 = 2.0;
pub const PANEL_ORDER: usize = 16;
/// Margin added beyond the classical reach `2 b t` of the fastest component.
pub const R_MARGIN: f64 = 200.0;
/// Phase budget per spectral panel, in radians.
const K_PHASE_PER_PANEL: f64 = 20.0;

/// `r` in `[1e-3, 2 b t_max + 200]` with panels of width 2 (graded at the inner
/// edge); `k` in `[a, b]` with panel width `20 / max(2 b t_max, r_max)` so that
/// both `e^{-i k^2 t}` and the kernel oscillation are resolved.
pub fn horizon_grids(t_max: f64, support: (f64, f64)) -> Result<HorizonGrids> {
    let (a, b) = support;
    if !(a > 0.0 && b > a) {
        return Err(Error::Hypothesis(format!("spectral support [{a}, {b}] must lie in k > 0")));
    }
    let r_max = 2.0 * b * t_max.abs() + R_MARGIN;
    let r_panels = ((r_max - DEFAULT_R_MIN) / R_PANEL_WIDTH).ceil() as usize;
    let rgrid = Grid::new(GridSpec::new(DEFAULT_R_MIN, r_max, r_panels, PANEL_ORDER).graded(true))?;
    let omega = (2.0 * b * t_max.abs()).max(r_max);
    let k_panels = ((b - a) * omega / K_PHASE_PER_PANEL).ceil().max(4.0) as usize;
    let kgrid = Grid::new(GridSpec::new(a, b, k_panels, PANEL_ORDER))?;
    let (wa, wb) = ((a - K_MARGIN).max(0.25 * a), b + K_MARGIN);
    let wide_panels = ((wb - wa) * omega / K_PHASE_PER_PANEL).ceil().max(4.0) as usize;
    let kgrid_wide = Grid::new(GridSpec::new(wa, wb, wide_panels, PANEL_ORDER))?;
    Ok(HorizonGrids { rgrid: Arc::new(rgrid), kgrid: Arc::new(kgrid), kgrid_wide: Arc::new(kgrid_wide) })
}

/// Spectral grid on `[lo, hi]` with the node density of `template`.
pub fn spectral_grid_like(template: &SpectralGrid, lo: f64, hi: f64) -> Result<SpectralGrid> {
    let density = template.panel_count() as f64 / (template.hi() - template.lo());
    let panels = ((hi - lo) * density).ceil().max(4.0) as usize;
    Grid::new(GridSpec::new(lo, hi, panels, template.order()))
}

/// Support of `psi` widened to the neighbouring grid nodes, so that data
/// resampled onto a grid over the window keeps its tails.
pub fn spectral_window(psi: &SpectralState) -> Option<(f64, f64)> {
    psi.support().map(|s| widen_support(psi, s))
}

pub(crate) fn widen_support(psi: &SpectralState, support: (f64, f64)) -> (f64, f64) {
    let nodes = psi.grid().nodes();
    let i0 = nodes.partition_point(|k| *k < support.0);
    let i1 = nodes.partition_point(|k| *k <= support.1);
    let a = if i0 > 0 { nodes[i0 - 1] } else { support.0 };
    let b = if i1 < nodes.len() { nodes[i1] } else { support.1 };
    (a.max(psi.grid().lo()), b.min(psi.grid().hi()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_properties() {
        let p = Wavepacket::standard();
        assert_eq!(p.profile(0.5), 0.0);
        assert_eq!(p.profile(3.2), 0.0);
        assert!((p.profile(2.0) - (-1f64).exp()).abs() < 1e-15);
        assert!(Wavepacket::new(1.0, 1.0).is_err());
        let g = horizon_grids(10.0, p.support()).unwrap();
        let s = p.sample(g.kgrid.clone());
        assert!((s.norm() - 1.0).abs() < 1e-14);
    }
}
