use std::marker::PhantomData;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::quadrature::gauss_legendre;
use crate::{Error, Result};

/// Marker for position-space grids (measure `r^2 dr`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Radial {}

/// Marker for spectral grids (measure `k^2 dk`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spectral {}

pub const MAX_ORDER: usize = 64;

/// Layout of a composite Gauss–Legendre grid.
///
/// With `graded = true` the first uniform panel is replaced by panels whose
/// endpoints double from `lo`, which resolves non-analytic `r^s` behaviour at
/// the inner edge. If that panel straddles `r = 1`, `1` becomes a break.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub panels: usize,
    pub order: usize,
    #[serde(default)]
    pub graded: bool,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, panels: usize, order: usize) -> Self {
        Self { lo, hi, panels, order, graded: false }
    }

    pub fn graded(mut self, on: bool) -> Self {
        self.graded = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo > 0.0 && self.lo < self.hi && self.hi.is_finite()) {
            return Err(Error::Config(format!(
                "grid bounds must satisfy 0 < lo < hi, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        if self.panels == 0 {
            return Err(Error::Config("grid needs at least one panel".into()));
        }
        if !(2..=MAX_ORDER).contains(&self.order) {
            return Err(Error::Config(format!("panel order {} not in [2, {MAX_ORDER}]", self.order)));
        }
        Ok(())
    }

    fn breaks(&self) -> Vec<f64> {
        let width = (self.hi - self.lo) / self.panels as f64;
        let mut out = Vec::with_capacity(self.panels + 16);
        out.push(self.lo);
        let first = self.lo + width;
        if self.graded {
            // Doubling breaks up to the first uniform panel, with r = 1 kept
            // as a break when it falls inside that panel.
            let unit = self.lo < 0.75 && first > 1.5;
            let stop = if unit { 0.75 } else { 0.75 * first };
            let mut b = 2.0 * self.lo;
            while b < stop {
                out.push(b);
                b *= 2.0;
            }
            if unit {
                out.push(1.0);
            }
        }
        for i in 1..=self.panels {
            out.push(if i == self.panels { self.hi } else { self.lo + width * i as f64 });
        }
        out
    }
}

/// Composite Gauss–Legendre quadrature with weights that include the squared
/// variable, so `sum_i w_i f(x_i) ~ int f(x) x^2 dx`.
#[derive(Debug)]
pub struct Grid<D> {
    spec: GridSpec,
    breaks: Vec<f64>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    _kind: PhantomData<D>,
}

impl<D> Clone for Grid<D> {
    fn clone(&self) -> Self {
        Self {
            spec: self.spec,
            breaks: self.breaks.clone(),
            nodes: self.nodes.clone(),
            weights: self.weights.clone(),
            _kind: PhantomData,
        }
    }
}

impl<D> PartialEq for Grid<D> {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

pub type RadialGrid = Grid<Radial>;
pub type SpectralGrid = Grid<Spectral>;

impl<D> Grid<D> {
    pub fn new(spec: GridSpec) -> Result<Self> {
        spec.validate()?;
        let breaks = spec.breaks();
        let (x, w) = gauss_legendre(spec.order);
        let mut nodes = Vec::with_capacity((breaks.len() - 1) * spec.order);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for pair in breaks.windows(2) {
            let half = 0.5 * (pair[1] - pair[0]);
            let mid = 0.5 * (pair[1] + pair[0]);
            for (xi, wi) in x.iter().zip(&w) {
                let node = mid + half * xi;
                nodes.push(node);
                weights.push(half * wi * node * node);
            }
        }
        Ok(Self { spec, breaks, nodes, weights, _kind: PhantomData })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn lo(&self) -> f64 {
        self.spec.lo
    }

    pub fn hi(&self) -> f64 {
        self.spec.hi
    }

    pub fn order(&self) -> usize {
        self.spec.order
    }

    /// Panel endpoints, ascending.
    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn panel_count(&self) -> usize {
        self.breaks.len() - 1
    }

    /// Node index range of panel `p`.
    pub fn panel_range(&self, p: usize) -> std::ops::Range<usize> {
        p * self.spec.order..(p + 1) * self.spec.order
    }

    /// Panel containing `x`, or `None` outside `[lo, hi]`.
    pub fn panel_of(&self, x: f64) -> Option<usize> {
        if !(x >= self.spec.lo && x <= self.spec.hi) {
            return None;
        }
        let p = self.breaks.partition_point(|b| *b <= x);
        Some(p.saturating_sub(1).min(self.panel_count() - 1))
    }

    /// `sum_i w_i f(x_i)`, i.e. `int f x^2 dx`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }
}

pub(crate) fn barycentric_weights(xs: &[f64]) -> Vec<f64> {
    (0..xs.len())
        .map(|j| {
            let prod: f64 = (0..xs.len()).filter(|&k| k != j).map(|k| xs[j] - xs[k]).product();
            1.0 / prod
        })
        .collect()
}

pub(crate) fn interpolate(xs: &[f64], fs: &[Complex64], bary: &[f64], y: f64) -> Complex64 {
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for ((x, f), b) in xs.iter().zip(fs).zip(bary) {
        let diff = y - x;
        if diff == 0.0 {
            return *f;
        }
        let t = b / diff;
        num += f * t;
        den += t;
    }
    num / den
}

pub fn make_radial_grid(r_min: f64, r_max: f64, panels: usize, order: usize) -> Result<RadialGrid> {
    Grid::new(GridSpec::new(r_min, r_max, panels, order))
}

pub fn make_spectral_grid(k_min: f64, k_max: f64, panels: usize, order: usize) -> Result<SpectralGrid> {
    Grid::new(GridSpec::new(k_min, k_max, panels, order))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_moment_is_exact() {
        let g = make_radial_grid(1.0, 2.0, 3, 4).unwrap();
        assert!((g.integrate(|_| 1.0) - 7.0 / 3.0).abs() < 1e-12);
        assert!((g.integrate(|r| r.powi(3)) - (64.0 - 1.0) / 6.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_moment() {
        // int_{0.01}^{20} e^{-r} r^2 dr, 30-digit independent quadrature.
        let g = make_radial_grid(0.01, 20.0, 20, 16).unwrap();
        let exact = 1.9999987581267932672;
        assert!((g.integrate(|r| (-r).exp()) - exact).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_layouts() {
        assert!(matches!(make_radial_grid(1.0, 2.0, 0, 8), Err(Error::Config(_))));
        assert!(matches!(make_radial_grid(0.0, 2.0, 4, 8), Err(Error::Config(_))));
        assert!(matches!(make_radial_grid(3.0, 2.0, 4, 8), Err(Error::Config(_))));
        assert!(matches!(make_spectral_grid(0.1, 2.0, 4, 1), Err(Error::Config(_))));
        assert!(matches!(make_spectral_grid(0.1, 2.0, 4, 65), Err(Error::Config(_))));
    }

    #[test]
    fn graded_grid_refines_inner_edge() {
        let g: RadialGrid = Grid::new(GridSpec::new(1e-3, 40.0, 20, 12).graded(true)).unwrap();
        assert!(g.nodes()[0] < 1.1e-3);
        assert!(g.breaks().contains(&1.0));
        assert!(g.nodes().windows(2).all(|p| p[0] < p[1]));
        assert!(g.weights().iter().all(|w| *w > 0.0));
        let exact = (40f64.powi(3) - 1e-9) / 3.0;
        assert!((g.integrate(|_| 1.0) - exact).abs() < 1e-9 * exact);
    }
}
