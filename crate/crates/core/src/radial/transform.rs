use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::{Grid, GridSpec, RadialGrid, SpectralGrid};
use super::state::{RadialState, SpectralState};
use crate::specfun::{bessel_j_unchecked, sph_bessel, BESSEL_X_MAX};
use crate::{Error, Result};

/// How the kernel `(kr)^{-1/2} J_mu(kr)` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelKind {
    /// General real order through [`crate::specfun::bessel_real_order`].
    RealOrder(f64),
    /// Half-integer order `l + 1/2` through `sqrt(2/pi) j_l(kr)`.
    Spherical(u32),
}

impl KernelKind {
    pub fn order(&self) -> f64 {
        match *self {
            KernelKind::RealOrder(mu) => mu,
            KernelKind::Spherical(ell) => ell as f64 + 0.5,
        }
    }

    /// Kernel value at the product `x = k r`.
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            KernelKind::RealOrder(mu) => bessel_j_unchecked(mu, x) / x.sqrt(),
            KernelKind::Spherical(ell) => (2.0 / PI).sqrt() * sph_bessel(ell, x),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            KernelKind::RealOrder(mu) if !(mu > 0.0 && mu.is_finite()) => {
                Err(Error::Domain(format!("transform order mu = {mu} must be positive")))
            }
            _ => Ok(()),
        }
    }
}

/// Dense Fourier–Bessel kernel `K[i][j] = (k_j r_i)^{-1/2} J_mu(k_j r_i)`,
/// row-major with rows indexed by `r`.
///
/// Both directions use a fixed summation order, so results do not depend on
/// the thread count.
#[derive(Debug)]
pub struct BesselKernel {
    kind: KernelKind,
    rgrid: Arc<RadialGrid>,
    kgrid: Arc<SpectralGrid>,
    data: Vec<f64>,
}

const COLUMN_CHUNK: usize = 256;

impl BesselKernel {
    pub fn new(kind: KernelKind, rgrid: Arc<RadialGrid>, kgrid: Arc<SpectralGrid>) -> Result<Self> {
        kind.validate()?;
        let reach = rgrid.hi() * kgrid.hi();
        if reach > BESSEL_X_MAX {
            return Err(Error::Capacity(format!(
                "k_max * r_max = {reach:.3e} exceeds the Bessel range {BESSEL_X_MAX:.1e}"
            )));
        }
        let nk = kgrid.len();
        let ks = kgrid.nodes();
        let mut data = vec![0.0; rgrid.len() * nk];
        data.par_chunks_mut(nk).zip(rgrid.nodes().par_iter()).for_each(|(row, &r)| {
            for (out, &k) in row.iter_mut().zip(ks) {
                *out = kind.eval(k * r);
            }
        });
        Ok(Self { kind, rgrid, kgrid, data })
    }

    pub fn real_order(mu: f64, rgrid: Arc<RadialGrid>, kgrid: Arc<SpectralGrid>) -> Result<Self> {
        Self::new(KernelKind::RealOrder(mu), rgrid, kgrid)
    }

    pub fn spherical(ell: u32, rgrid: Arc<RadialGrid>, kgrid: Arc<SpectralGrid>) -> Result<Self> {
        Self::new(KernelKind::Spherical(ell), rgrid, kgrid)
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn mu(&self) -> f64 {
        self.kind.order()
    }

    pub fn rgrid(&self) -> &Arc<RadialGrid> {
        &self.rgrid
    }

    pub fn kgrid(&self) -> &Arc<SpectralGrid> {
        &self.kgrid
    }

    /// `psi#(k_j) = sum_i w_i K[i][j] psi(r_i)`.
    pub fn forward(&self, state: &RadialState) -> Result<SpectralState> {
        if !same(state.grid(), &self.rgrid) {
            return Err(Error::Config("state is not on the kernel's radial grid".into()));
        }
        let weighted: Vec<Complex64> =
            state.values().iter().zip(self.rgrid.weights()).map(|(v, w)| v * w).collect();
        let values = self.forward_raw(&weighted, 0..self.rgrid.len());
        SpectralState::new(self.kgrid.clone(), values)
    }

    /// Forward sum restricted to the rows in `rows`; `weighted` holds
    /// `w_i psi_i` for every row of the grid.
    pub(crate) fn forward_raw(&self, weighted: &[Complex64], rows: std::ops::Range<usize>) -> Vec<Complex64> {
        let nk = self.kgrid.len();
        let mut out = vec![Complex64::new(0.0, 0.0); nk];
        out.par_chunks_mut(COLUMN_CHUNK).enumerate().for_each(|(c, chunk)| {
            let j0 = c * COLUMN_CHUNK;
            let mut re = vec![0.0; chunk.len()];
            let mut im = vec![0.0; chunk.len()];
            for i in rows.clone() {
                let a = weighted[i];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &self.data[i * nk + j0..i * nk + j0 + chunk.len()];
                for ((kr, ki), kv) in re.iter_mut().zip(im.iter_mut()).zip(row) {
                    *kr += a.re * kv;
                    *ki += a.im * kv;
                }
            }
            for ((o, r), i) in chunk.iter_mut().zip(re).zip(im) {
                *o = Complex64::new(r, i);
            }
        });
        out
    }

    /// `psi(r_i) = sum_j v_j K[i][j] psi#(k_j)`.
    pub fn inverse(&self, spectral: &SpectralState) -> Result<RadialState> {
        if !same(spectral.grid(), &self.kgrid) {
            return Err(Error::Config("state is not on the kernel's spectral grid".into()));
        }
        let weighted: Vec<Complex64> =
            spectral.values().iter().zip(self.kgrid.weights()).map(|(v, w)| v * w).collect();
        RadialState::new(self.rgrid.clone(), self.inverse_raw(&weighted))
    }

    /// Inverse sum evaluated only on the rows in `rows`.
    pub(crate) fn inverse_rows(&self, weighted: &[Complex64], rows: std::ops::Range<usize>) -> Vec<Complex64> {
        let nk = self.kgrid.len();
        self.data[rows.start * nk..rows.end * nk]
            .par_chunks(nk)
            .map(|row| row_dot(weighted, row))
            .collect()
    }

    pub(crate) fn inverse_raw(&self, weighted: &[Complex64]) -> Vec<Complex64> {
        let nk = self.kgrid.len();
        self.data
            .par_chunks(nk)
            .map(|row| row_dot(weighted, row))
            .collect()
    }
}

fn row_dot(weighted: &[Complex64], row: &[f64]) -> Complex64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (a, kv) in weighted.iter().zip(row) {
        re += a.re * kv;
        im += a.im * kv;
    }
    Complex64::new(re, im)
}

fn same<D>(a: &Arc<Grid<D>>, b: &Arc<Grid<D>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Inverse transform evaluated at arbitrary radii, without building a kernel.
pub fn inverse_at(kind: KernelKind, spectral: &SpectralState, radii: &[f64]) -> Result<Vec<Complex64>> {
    kind.validate()?;
    let g = spectral.grid();
    let weighted: Vec<Complex64> =
        spectral.values().iter().zip(g.weights()).map(|(v, w)| v * w).collect();
    Ok(radii
        .par_iter()
        .map(|&r| {
            g.nodes()
                .iter()
                .zip(&weighted)
                .filter(|(_, a)| a.re != 0.0 || a.im != 0.0)
                .map(|(&k, a)| a * kind.eval(k * r))
                .sum()
        })
        .collect())
}

/// Forward order-`mu` transform onto `kgrid`.
pub fn fourier_bessel(mu: f64, state: &RadialState, kgrid: &Arc<SpectralGrid>) -> Result<SpectralState> {
    BesselKernel::real_order(mu, state.grid().clone(), kgrid.clone())?.forward(state)
}

/// Inverse order-`mu` transform onto `rgrid` (the same kernel as the forward map).
pub fn inverse_fourier_bessel(
    mu: f64,
    spectral: &SpectralState,
    rgrid: &Arc<RadialGrid>,
) -> Result<RadialState> {
    BesselKernel::real_order(mu, rgrid.clone(), spectral.grid().clone())?.inverse(spectral)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct KernelKey {
    spherical: bool,
    order_bits: u64,
    r: [u64; 5],
    k: [u64; 5],
}

fn spec_key(s: &GridSpec) -> [u64; 5] {
    [s.lo.to_bits(), s.hi.to_bits(), s.panels as u64, s.order as u64, s.graded as u64]
}

/// Build-once store of kernels keyed by order and grid layout. Entries are
/// immutable after insertion.
#[derive(Debug, Default)]
pub struct KernelCache {
    entries: Mutex<HashMap<KernelKey, Arc<BesselKernel>>>,
}

impl KernelCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(
        &self,
        kind: KernelKind,
        rgrid: &Arc<RadialGrid>,
        kgrid: &Arc<SpectralGrid>,
    ) -> Result<Arc<BesselKernel>> {
        let key = KernelKey {
            spherical: matches!(kind, KernelKind::Spherical(_)),
            order_bits: kind.order().to_bits(),
            r: spec_key(rgrid.spec()),
            k: spec_key(kgrid.spec()),
        };
        if let Some(k) = self.entries.lock().expect("kernel cache poisoned").get(&key) {
            return Ok(k.clone());
        }
        let kernel = Arc::new(BesselKernel::new(kind, rgrid.clone(), kgrid.clone())?);
        let mut map = self.entries.lock().expect("kernel cache poisoned");
        Ok(map.entry(key).or_insert(kernel).clone())
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("kernel cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
