use num_complex::Complex64;

use super::grid::{barycentric_weights, interpolate, RadialGrid};
use super::state::RadialState;
use crate::{Error, Result};

/// Result of a finite-difference operator application. Nodes whose stencil
/// leaves `[r_min, r_max]` carry zero and are marked invalid.
#[derive(Debug, Clone, PartialEq)]
pub struct HApplied {
    pub state: RadialState,
    pub valid: Vec<bool>,
}

impl HApplied {
    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }
}

/// Stencil step as a fraction of the panel half-width.
const STEP_FRACTION: f64 = 0.01;
const MIN_INTERIOR: usize = 8;

/// `h(mu) psi = -psi'' - (2/r) psi' + (mu^2 - 1/4)/r^2 psi` at the grid nodes.
///
/// Derivatives use fourth-order centered stencils whose off-node samples come
/// from the Lagrange interpolant through the node's own panel.
pub fn apply_h(mu: f64, state: &RadialState) -> Result<HApplied> {
    if !(mu > 0.0) {
        return Err(Error::Domain(format!("order mu = {mu} must be positive")));
    }
    apply_radial(mu * mu - 0.25, state)
}

/// `h_{0,l} psi = -psi'' - (2/r) psi' + l(l+1)/r^2 psi`.
pub fn apply_h_free(ell: u32, state: &RadialState) -> Result<HApplied> {
    let l = ell as f64;
    apply_radial(l * (l + 1.0), state)
}

fn apply_radial(coefficient: f64, state: &RadialState) -> Result<HApplied> {
    let grid = state.grid();
    let values = state.values();
    let (lo, hi) = (grid.lo(), grid.hi());
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut valid = vec![false; grid.len()];
    for p in 0..grid.panel_count() {
        let range = grid.panel_range(p);
        let xs = &grid.nodes()[range.clone()];
        let fs = &values[range.clone()];
        let bary = barycentric_weights(xs);
        let half = 0.5 * (grid.breaks()[p + 1] - grid.breaks()[p]);
        let d = STEP_FRACTION * half;
        for (local, idx) in range.enumerate() {
            let r = xs[local];
            if r - 2.0 * d < lo || r + 2.0 * d > hi {
                continue;
            }
            let at = |y: f64| interpolate(xs, fs, &bary, y);
            let (m2, m1, p1, p2) = (at(r - 2.0 * d), at(r - d), at(r + d), at(r + 2.0 * d));
            let f0 = fs[local];
            let d1 = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * d);
            let d2 = (-p2 + 16.0 * p1 - 30.0 * f0 + 16.0 * m1 - m2) / (12.0 * d * d);
            out[idx] = -d2 - 2.0 / r * d1 + coefficient / (r * r) * f0;
            valid[idx] = true;
        }
    }
    let interior = valid.iter().filter(|v| **v).count();
    if interior < MIN_INTERIOR {
        return Err(Error::Config(format!(
            "grid has {interior} interior nodes; at least {MIN_INTERIOR} are needed"
        )));
    }
    Ok(HApplied { state: state.with_values(out)?, valid })
}

/// Check that `grid` can host [`apply_h`] at all.
pub fn interior_node_count(grid: &RadialGrid) -> usize {
    let mut count = 0;
    for p in 0..grid.panel_count() {
        let half = 0.5 * (grid.breaks()[p + 1] - grid.breaks()[p]);
        let d = 2.0 * STEP_FRACTION * half;
        count += grid.nodes()[grid.panel_range(p)]
            .iter()
            .filter(|&&r| r - d >= grid.lo() && r + d <= grid.hi())
            .count();
    }
    count
}
