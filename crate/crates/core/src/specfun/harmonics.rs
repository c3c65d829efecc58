use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gamma::ln_gamma;
use super::jacobi::{rodrigues_coefficients, JACOBI_DEGREE_CAP};
use super::Channel;
use crate::quadrature::gauss_legendre;
use crate::{Error, Result};

/// Half-width of the chart overlap around the equator: `U+` is `theta < pi/2 + a`,
/// `U-` is `theta > pi/2 - a`.
pub const CHART_HALF_WIDTH: f64 = PI / 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    Plus,
    Minus,
}

impl Chart {
    pub fn contains(self, theta: f64) -> bool {
        match self {
            Chart::Plus => (0.0..FRAC_PI_2 + CHART_HALF_WIDTH).contains(&theta),
            Chart::Minus => theta > FRAC_PI_2 - CHART_HALF_WIDTH && theta <= PI,
        }
    }

    /// Distance from `theta` to this chart's open boundary.
    pub fn boundary_distance(self, theta: f64) -> f64 {
        match self {
            Chart::Plus => FRAC_PI_2 + CHART_HALF_WIDTH - theta,
            Chart::Minus => theta - (FRAC_PI_2 - CHART_HALF_WIDTH),
        }
    }

    /// The chart covering `theta` with the larger margin.
    pub fn preferred(theta: f64) -> Chart {
        if theta <= FRAC_PI_2 {
            Chart::Plus
        } else {
            Chart::Minus
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Chart::Plus => 1.0,
            Chart::Minus => -1.0,
        }
    }

    pub fn other(self) -> Chart {
        match self {
            Chart::Plus => Chart::Minus,
            Chart::Minus => Chart::Plus,
        }
    }
}

/// A section value of the charge-`n` bundle in one chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartedAngularValue {
    pub chart: Chart,
    pub theta: f64,
    pub phi: f64,
    pub value: Complex64,
}

impl ChartedAngularValue {
    pub fn new(chart: Chart, theta: f64, phi: f64, value: Complex64) -> Result<Self> {
        check_point(chart, theta, phi)?;
        Ok(Self { chart, theta, phi: phi.rem_euclid(2.0 * PI), value })
    }

    /// Re-express in the other chart using `value_plus = e^{2 i n phi} value_minus`.
    pub fn transition(&self, n: i32) -> Result<Self> {
        let target = self.chart.other();
        if !target.contains(self.theta) {
            return Err(Error::Domain(format!(
                "theta = {} is outside the chart overlap",
                self.theta
            )));
        }
        let phase = Complex64::from_polar(1.0, 2.0 * n as f64 * self.phi * target.sign());
        Ok(Self { chart: target, value: self.value * phase, ..*self })
    }
}

fn check_point(chart: Chart, theta: f64, phi: f64) -> Result<()> {
    if !phi.is_finite() || !(0.0..=PI).contains(&theta) {
        return Err(Error::Domain(format!("({theta}, {phi}) is not a point of the sphere")));
    }
    if !chart.contains(theta) {
        return Err(Error::Domain(format!("theta = {theta} lies outside chart {chart:?}")));
    }
    Ok(())
}

/// Orthonormal spherical harmonic with the Condon–Shortley phase,
/// `Y_{l,-m} = (-1)^m conj(Y_{l,m})`.
pub fn sph_harmonic(ell: u32, m: i32, theta: f64, phi: f64) -> Result<Complex64> {
    if m.unsigned_abs() > ell {
        return Err(Error::Domain(format!("|m| = {} exceeds ell = {ell}", m.abs())));
    }
    let ma = m.unsigned_abs();
    let x = theta.cos();
    let plm = assoc_legendre(ell, ma, x);
    let norm = ((2 * ell + 1) as f64 / (4.0 * PI)
        * (ln_gamma((ell - ma + 1) as f64) - ln_gamma((ell + ma + 1) as f64)).exp())
    .sqrt();
    let y = Complex64::from_polar(norm * plm, ma as f64 * phi);
    Ok(if m >= 0 {
        y
    } else if ma % 2 == 0 {
        y.conj()
    } else {
        -y.conj()
    })
}

fn assoc_legendre(ell: u32, m: u32, x: f64) -> f64 {
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0;
    for j in 1..=m {
        pmm *= -((2 * j - 1) as f64) * s;
    }
    if ell == m {
        return pmm;
    }
    let mut prev = pmm;
    let mut curr = x * (2 * m + 1) as f64 * pmm;
    for l in (m + 2)..=ell {
        let next = (x * (2 * l - 1) as f64 * curr - (l + m - 1) as f64 * prev) / (l - m) as f64;
        prev = curr;
        curr = next;
    }
    curr
}

/// Precomputed monopole harmonic `Y_{n,l,m}` in both charts.
///
/// The polar factor is expanded as
/// `sum_s c_s sin(theta/2)^{p_s} cos(theta/2)^{q_s}` with integer `p_s, q_s >= 0`,
/// so it stays finite at both poles. `n = 0` is accepted and reproduces `Y_{l,m}`
/// up to a sign.
#[derive(Debug, Clone, PartialEq)]
pub struct MonopoleHarmonic {
    channel: Channel,
    terms: Vec<(f64, i32, i32)>,
    norm: f64,
}

impl MonopoleHarmonic {
    pub fn new(channel: Channel) -> Result<Self> {
        let (n, ell, m) = (channel.n(), channel.ell(), channel.m());
        let degree = (ell as i32 + m) as u32;
        if degree > JACOBI_DEGREE_CAP {
            return Err(Error::Capacity(format!("ell = {ell} too large for Jacobi cap")));
        }
        let alpha = -n - m;
        let beta = n - m;
        let big_n = degree as i32;
        let scale = 2f64.powi(-m);
        let terms: Vec<(f64, i32, i32)> = rodrigues_coefficients(alpha as f64, beta as f64, degree)
            .into_iter()
            .enumerate()
            .filter(|(_, b)| *b != 0.0)
            .map(|(s, b)| {
                let s = s as i32;
                let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
                (scale * sign * b, 2 * s + alpha, 2 * big_n - 2 * s + beta)
            })
            .collect();
        debug_assert!(terms.iter().all(|t| t.1 >= 0 && t.2 >= 0));
        let mut h = Self { channel, terms, norm: 1.0 };
        // The squared polar factor is a polynomial of degree 2l in cos(theta).
        let (xs, ws) = gauss_legendre(ell as usize + 4);
        let integral: f64 = xs
            .iter()
            .zip(&ws)
            .map(|(xi, w)| w * h.polar_factor(xi.acos()).powi(2))
            .sum::<f64>()
            * 2.0
            * PI;
        if !(integral > 0.0) {
            return Err(Error::Channel(format!("degenerate harmonic for {channel:?}")));
        }
        h.norm = integral.sqrt().recip();
        Ok(h)
    }

    pub fn channel(&self) -> Channel {
        self.channel
    }

    /// Normalisation constant `C > 0`.
    pub fn norm_constant(&self) -> f64 {
        self.norm
    }

    /// Real polar factor `(1-xi)^{a/2}(1+xi)^{b/2} P^{a,b}_{l+m}(xi)` without `C`.
    pub fn polar_factor(&self, theta: f64) -> f64 {
        let (s, c) = (0.5 * theta).sin_cos();
        self.terms.iter().map(|&(a, p, q)| a * s.powi(p) * c.powi(q)).sum()
    }

    pub fn value(&self, chart: Chart, theta: f64, phi: f64) -> Result<Complex64> {
        check_point(chart, theta, phi)?;
        Ok(self.value_unchecked(chart, theta, phi))
    }

    /// Evaluation without the chart-domain check; the formula is smooth on all of
    /// `0 <= theta <= pi` so finite-difference stencils may cross `theta = 0`.
    pub fn value_unchecked(&self, chart: Chart, theta: f64, phi: f64) -> Complex64 {
        let k = self.channel.m() as f64 + chart.sign() * self.channel.n() as f64;
        Complex64::from_polar(self.norm * self.polar_factor(theta), k * phi)
    }

    pub fn charted(&self, chart: Chart, theta: f64, phi: f64) -> Result<ChartedAngularValue> {
        let value = self.value(chart, theta, phi)?;
        ChartedAngularValue::new(chart, theta, phi, value)
    }

    /// Value in whichever chart covers `theta` best.
    pub fn value_preferred(&self, theta: f64, phi: f64) -> ChartedAngularValue {
        let chart = Chart::preferred(theta);
        ChartedAngularValue {
            chart,
            theta,
            phi: phi.rem_euclid(2.0 * PI),
            value: self.value_unchecked(chart, theta, phi),
        }
    }
}

/// One-shot evaluation of `Y^{+/-}_{n,l,m}(theta, phi)`.
pub fn monopole_harmonic(channel: Channel, chart: Chart, theta: f64, phi: f64) -> Result<Complex64> {
    MonopoleHarmonic::new(channel)?.value(chart, theta, phi)
}

/// Inner product of two sections of the same bundle by two-chart quadrature:
/// Gauss–Legendre in `cos(theta)` on each chart's half of the sphere and the
/// trapezoid rule in `phi`.
pub fn sphere_inner_product(a: &MonopoleHarmonic, b: &MonopoleHarmonic, order: usize) -> Complex64 {
    let (xs, ws) = gauss_legendre(order);
    let nphi = 2 * order + 4 * (a.channel.ell() + b.channel.ell()) as usize + 8;
    let dphi = 2.0 * PI / nphi as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for chart in [Chart::Plus, Chart::Minus] {
        // xi in [0, 1] for the north half (U+), [-1, 0] for the south half (U-).
        let (lo, hi) = match chart {
            Chart::Plus => (0.0, 1.0),
            Chart::Minus => (-1.0, 0.0),
        };
        for (x, w) in xs.iter().zip(&ws) {
            let xi = lo + 0.5 * (hi - lo) * (x + 1.0);
            let theta = xi.acos();
            let wx = 0.5 * (hi - lo) * w;
            for j in 0..nphi {
                let phi = j as f64 * dphi;
                let va = a.value_unchecked(chart, theta, phi);
                let vb = b.value_unchecked(chart, theta, phi);
                acc += va.conj() * vb * wx * dphi;
            }
        }
    }
    acc
}
