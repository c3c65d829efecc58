use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::quadrature::gauss_legendre;
use crate::radial::{KernelKind, RadialState};
use crate::specfun::sph_harmonic;
use crate::{Error, Result};

/// Angular node counts per radius: `ceil(|k| r) + extra`, with the `phi` count
/// doubled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fourier3dOptions {
    pub extra_theta_nodes: usize,
    pub extra_phi_nodes: usize,
    pub max_points: usize,
}

impl Default for Fourier3dOptions {
    fn default() -> Self {
        Self { extra_theta_nodes: 24, extra_phi_nodes: 24, max_points: 20 }
    }
}

/// Maximum over `kpoints` of
/// `| int e^{i k.x} psi(|x|) Y_{l,m}(x/|x|) dx - (2 pi)^{3/2} i^l psi#(|k|) Y_{l,m}(k/|k|) |`,
/// where the radial integral uses the state's own quadrature on both sides.
pub fn fourier3d_check(ell: u32, m: i32, psi: &RadialState, kpoints: &[[f64; 3]]) -> Result<f64> {
    fourier3d_check_with(ell, m, psi, kpoints, &Fourier3dOptions::default())
}

pub fn fourier3d_check_with(
    ell: u32,
    m: i32,
    psi: &RadialState,
    kpoints: &[[f64; 3]],
    opts: &Fourier3dOptions,
) -> Result<f64> {
    if kpoints.len() > opts.max_points {
        return Err(Error::Config(format!(
            "{} k-points requested; the brute-force check accepts at most {}",
            kpoints.len(),
            opts.max_points
        )));
    }
    sph_harmonic(ell, m, 0.0, 0.0)?;
    let grid = psi.grid();
    let mut worst: f64 = 0.0;
    for kv in kpoints {
        let kmag = (kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2]).sqrt();
        if !(kmag > 0.0) {
            return Err(Error::Domain("k-point must be nonzero".into()));
        }
        let kind = KernelKind::Spherical(ell);
        let sharp: Complex64 = grid
            .nodes()
            .iter()
            .zip(grid.weights())
            .zip(psi.values())
            .map(|((r, w), v)| v * (w * kind.eval(kmag * r)))
            .sum();
        let (kt, kp) = angles(kv);
        let il = Complex64::i().powu(ell);
        let predicted = (2.0 * PI).powf(1.5) * il * sharp * sph_harmonic(ell, m, kt, kp)?;
        let brute = brute_force(ell, m, psi, kv, kmag, opts)?;
        worst = worst.max((brute - predicted).norm());
    }
    Ok(worst)
}

fn angles(v: &[f64; 3]) -> (f64, f64) {
    let rho = (v[0] * v[0] + v[1] * v[1]).sqrt();
    (rho.atan2(v[2]), v[1].atan2(v[0]).rem_euclid(2.0 * PI))
}

fn brute_force(ell: u32, m: i32, psi: &RadialState, kv: &[f64; 3], kmag: f64, opts: &Fourier3dOptions) -> Result<Complex64> {
    let grid = psi.grid();
    let rules: HashMap<usize, (Vec<f64>, Vec<f64>)> = grid
        .nodes()
        .iter()
        .map(|r| theta_count(kmag, *r, ell, opts))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .map(|n| (n, gauss_legendre(n)))
        .collect();
    let terms: Vec<Result<Complex64>> = grid
        .nodes()
        .par_iter()
        .zip(grid.weights())
        .zip(psi.values())
        .map(|((&r, &w), &v)| {
            if v.re == 0.0 && v.im == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let (xs, ws) = &rules[&theta_count(kmag, r, ell, opts)];
            let n_phi = 2 * ((kmag * r).ceil() as usize + m.unsigned_abs() as usize) + opts.extra_phi_nodes;
            let dphi = 2.0 * PI / n_phi as f64;
            let mut ang = Complex64::new(0.0, 0.0);
            for (xi, wx) in xs.iter().zip(ws) {
                let theta = xi.acos();
                let st = theta.sin();
                for j in 0..n_phi {
                    let phi = j as f64 * dphi;
                    let dot = r * (kv[0] * st * phi.cos() + kv[1] * st * phi.sin() + kv[2] * xi);
                    ang += Complex64::from_polar(wx * dphi, dot) * sph_harmonic(ell, m, theta, phi)?;
                }
            }
            Ok(ang * v * w)
        })
        .collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for t in terms {
        acc += t?;
    }
    Ok(acc)
}

fn theta_count(kmag: f64, r: f64, ell: u32, opts: &Fourier3dOptions) -> usize {
    (kmag * r).ceil() as usize + ell as usize + opts.extra_theta_nodes
}
