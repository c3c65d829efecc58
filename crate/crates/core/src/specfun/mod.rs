//! Special functions for the monopole partial-wave problem.

mod angular;
mod bessel;
mod gamma;
mod harmonics;
mod jacobi;
mod spherical;

pub use angular::{apply_angular_momentum, AngularMomentum, AngularOperatorSpec, Component};
pub use bessel::{bessel_cross_validation, bessel_real_order, BESSEL_X_MAX};
pub use gamma::{gamma, ln_gamma};
pub use harmonics::{
    monopole_harmonic, sph_harmonic, sphere_inner_product, Chart, ChartedAngularValue, MonopoleHarmonic,
    CHART_HALF_WIDTH,
};
pub use jacobi::{jacobi, jacobi_with_cap, JACOBI_DEGREE_CAP};
pub use spherical::sph_bessel;

pub(crate) use bessel::bessel_j_unchecked;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A partial-wave sector: monopole charge `n`, angular momentum `ell`, magnetic
/// number `m`, and the effective Bessel order `mu = sqrt((ell + 1/2)^2 - n^2)`.
///
/// `n = 0` describes a free channel. For `n != 0` only `ell >= |n|` exists.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    n: i32,
    ell: u32,
    m: i32,
    mu: f64,
}

impl Channel {
    pub fn new(n: i32, ell: u32, m: i32) -> Result<Self> {
        if m.unsigned_abs() > ell {
            return Err(Error::Channel(format!("|m| = {} exceeds ell = {ell}", m.abs())));
        }
        if n.unsigned_abs() > ell {
            return Err(Error::Channel(format!(
                "ell = {ell} < |n| = {}: no monopole harmonics exist in this sector",
                n.abs()
            )));
        }
        Ok(Self { n, ell, m, mu: effective_order(n, ell) })
    }

    /// Free channel (`n = 0`); every `ell >= 0` is allowed.
    pub fn free(ell: u32, m: i32) -> Result<Self> {
        Self::new(0, ell, m)
    }

    pub fn n(&self) -> i32 {
        self.n
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    /// Effective radial order of the monopole operator `h_l = h(mu)`.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Order of the matching free operator `h_{0,l} = h(l + 1/2)`.
    pub fn free_order(&self) -> f64 {
        self.ell as f64 + 0.5
    }

    /// Coefficient `l(l+1) - n^2` of `1/r^2` in `h_l`.
    pub fn centrifugal_coefficient(&self) -> f64 {
        let l = self.ell as f64;
        let n = self.n as f64;
        l * (l + 1.0) - n * n
    }

    pub fn is_free(&self) -> bool {
        self.n == 0
    }

    /// The free channel with the same `(ell, m)`.
    pub fn free_partner(&self) -> Channel {
        Channel { n: 0, ell: self.ell, m: self.m, mu: self.free_order() }
    }
}

/// `((ell + 1/2)^2 - n^2)^(1/2)`, computed as `sqrt(l(l+1) - n^2 + 1/4)`.
pub fn effective_order(n: i32, ell: u32) -> f64 {
    let l = ell as f64;
    let n = n as f64;
    (l * (l + 1.0) - n * n + 0.25).sqrt()
}

/// Tolerances the special-function layer is verified against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative accuracy of `J_mu(x)` for `x <= 50`.
    pub bessel_near: f64,
    /// Relative accuracy of `J_mu(x)` beyond `x = 50`.
    pub bessel_far: f64,
    /// Default finite-difference step in radians.
    pub fd_step: f64,
    /// Chart-transition identity.
    pub transition: f64,
    /// Gram-matrix deviation from the identity.
    pub orthonormality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            bessel_near: 1e-10,
            bessel_far: 1e-8,
            fd_step: 1e-4,
            transition: 1e-10,
            orthonormality: 1e-8,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn effective_order_matches_definition() {
        for n in 0..4 {
            for ell in (n as u32)..8 {
                let direct = ((ell as f64 + 0.5).powi(2) - (n * n) as f64).sqrt();
                assert!((effective_order(n, ell) - direct).abs() < 1e-14);
            }
        }
        assert_eq!(effective_order(0, 3), 3.5);
    }

    #[test]
    fn rejects_ell_below_charge() {
        assert!(matches!(Channel::new(1, 0, 0), Err(Error::Channel(_))));
        assert!(matches!(Channel::new(-2, 1, 0), Err(Error::Channel(_))));
        assert!(matches!(Channel::new(1, 1, 2), Err(Error::Channel(_))));
        assert!(Channel::new(2, 2, -2).is_ok());
        assert!(Channel::free(0, 0).is_ok());
    }

    #[test]
    fn mu_is_positive_for_monopole_channels() {
        for n in 1..6i32 {
            for ell in (n as u32)..12 {
                let ch = Channel::new(n, ell, 0).unwrap();
                assert!(ch.mu() > 0.0);
                assert!(ch.mu() * ch.mu() >= ell as f64 + 0.25 - 1e-12);
            }
        }
    }
}
