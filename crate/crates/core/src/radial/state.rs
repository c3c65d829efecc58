use std::sync::Arc;

use num_complex::Complex64;

use super::grid::{barycentric_weights, interpolate, Grid, Radial, Spectral};
use crate::{Error, Result};

/// Complex samples on a shared grid. Operations return new states.
#[derive(Debug)]
pub struct State<D> {
    grid: Arc<Grid<D>>,
    values: Vec<Complex64>,
}

impl<D> Clone for State<D> {
    fn clone(&self) -> Self {
        Self { grid: self.grid.clone(), values: self.values.clone() }
    }
}

impl<D> PartialEq for State<D> {
    fn eq(&self, other: &Self) -> bool {
        *self.grid == *other.grid && self.values == other.values
    }
}

pub type RadialState = State<Radial>;
pub type SpectralState = State<Spectral>;

impl<D> State<D> {
    pub fn new(grid: Arc<Grid<D>>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Config(format!(
                "state has {} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Arc<Grid<D>>) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); grid.len()];
        Self { grid, values }
    }

    pub fn from_fn(grid: Arc<Grid<D>>, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.nodes().iter().map(|&x| f(x)).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<Grid<D>> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().zip(self.grid.weights()).map(|(v, w)| w * v.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<self, other> = sum_i w_i conj(self_i) other_i`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(self.grid.weights())
            .map(|((a, b), w)| a.conj() * b * *w)
            .sum())
    }

    /// `||self - other||`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(self.grid.weights())
            .map(|((a, b), w)| w * (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        let values = self.grid.nodes().iter().zip(&self.values).map(|(&x, &v)| f(x, v)).collect();
        Self { grid: self.grid.clone(), values }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|_, v| c * v)
    }

    pub fn conj(&self) -> Self {
        self.map(|_, v| v.conj())
    }

    pub fn with_values(&self, values: Vec<Complex64>) -> Result<Self> {
        Self::new(self.grid.clone(), values)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Evaluate the per-panel interpolant at `x`; zero outside the grid window.
    pub fn interpolate_at(&self, x: f64) -> Complex64 {
        match self.grid.panel_of(x) {
            None => Complex64::new(0.0, 0.0),
            Some(p) => {
                let range = self.grid.panel_range(p);
                let xs = &self.grid.nodes()[range.clone()];
                interpolate(xs, &self.values[range], &barycentric_weights(xs), x)
            }
        }
    }

    /// Transfer onto another grid through the per-panel interpolants.
    pub fn resample(&self, target: Arc<Grid<D>>) -> Self {
        let mut values = Vec::with_capacity(target.len());
        let mut cache: Option<(usize, Vec<f64>)> = None;
        for &x in target.nodes() {
            let v = match self.grid.panel_of(x) {
                None => Complex64::new(0.0, 0.0),
                Some(p) => {
                    let range = self.grid.panel_range(p);
                    let xs = &self.grid.nodes()[range.clone()];
                    if cache.as_ref().map(|c| c.0) != Some(p) {
                        cache = Some((p, barycentric_weights(xs)));
                    }
                    let bary = &cache.as_ref().expect("set above").1;
                    if self.values[range.clone()].iter().all(|v| v.re == 0.0 && v.im == 0.0) {
                        Complex64::new(0.0, 0.0)
                    } else {
                        interpolate(xs, &self.values[range], bary, x)
                    }
                }
            };
            values.push(v);
        }
        Self { grid: target, values }
    }

    /// Smallest and largest node carrying a nonzero value.
    pub fn support(&self) -> Option<(f64, f64)> {
        let nz = |v: &&Complex64| v.re != 0.0 || v.im != 0.0;
        let first = self.values.iter().position(|v| nz(&v))?;
        let last = self.values.iter().rposition(|v| nz(&v))?;
        Some((self.grid.nodes()[first], self.grid.nodes()[last]))
    }

    fn check_same_grid(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid {
            Ok(())
        } else {
            Err(Error::Config("states live on different grids".into()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::grid::{make_radial_grid, RadialGrid};

    #[test]
    fn norm_uses_grid_measure() {
        let g: Arc<RadialGrid> = Arc::new(make_radial_grid(0.5, 3.0, 4, 8).unwrap());
        let s = RadialState::from_fn(g.clone(), |_| Complex64::new(0.0, 2.0));
        let exact = 4.0 * (27.0 - 0.125) / 3.0;
        assert!((s.norm_sqr() - exact).abs() < 1e-11);
        let z = RadialState::zeros(g.clone());
        assert!((s.distance(&z).unwrap() - s.norm()).abs() < 1e-12);
        assert!((s.inner(&s).unwrap().re - s.norm_sqr()).abs() < 1e-11);
        assert!(RadialState::new(g, vec![]).is_err());
    }
}
