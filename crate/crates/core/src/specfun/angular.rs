use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::harmonics::Chart;
use crate::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Component {
    L1,
    L2,
    L3,
}

impl Component {
    pub fn index(self) -> usize {
        match self {
            Component::L1 => 1,
            Component::L2 => 2,
            Component::L3 => 3,
        }
    }

    pub fn from_index(k: usize) -> Result<Self> {
        match k {
            1 => Ok(Component::L1),
            2 => Ok(Component::L2),
            3 => Ok(Component::L3),
            _ => Err(Error::Domain(format!("angular momentum component {k} not in 1..=3"))),
        }
    }
}

/// Which gauge-covariant angular momentum component to apply, in which chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AngularOperatorSpec {
    pub n: i32,
    pub component: Component,
    pub chart: Chart,
}

/// Centered finite-difference application of `L^{+/-}_k` at `(theta, phi)`.
///
/// With `s = +1` in `U+` and `-1` in `U-`:
///
/// ```text
/// L1 = i( sin(phi) d_theta + cot(theta) cos(phi) d_phi) - n cos(phi)(1 - s cos(theta))/sin(theta)
/// L2 = i(-cos(phi) d_theta + cot(theta) sin(phi) d_phi) - n sin(phi)(1 - s cos(theta))/sin(theta)
/// L3 = -i d_phi - s n
/// ```
///
/// For `n = 0` these are the ordinary `L_k`.
pub fn apply_angular_momentum<F>(
    spec: AngularOperatorSpec,
    field: F,
    theta: f64,
    phi: f64,
    h: f64,
) -> Result<Complex64>
where
    F: Fn(f64, f64) -> Complex64,
{
    if !(h > 0.0) {
        return Err(Error::Domain(format!("finite-difference step {h} must be positive")));
    }
    if theta < 2.0 * h || theta > std::f64::consts::PI - 2.0 * h {
        return Err(Error::Domain(format!(
            "theta = {theta} within 2h of the coordinate singularity"
        )));
    }
    if spec.chart.boundary_distance(theta) < 2.0 * h {
        return Err(Error::Domain(format!(
            "theta = {theta} within 2h of the {:?} chart boundary",
            spec.chart
        )));
    }
    Ok(apply_raw(spec, &field, theta, phi, h))
}

fn apply_raw<F>(spec: AngularOperatorSpec, field: &F, theta: f64, phi: f64, h: f64) -> Complex64
where
    F: Fn(f64, f64) -> Complex64 + ?Sized,
{
    let s = spec.chart.sign();
    let n = spec.n as f64;
    let d_phi = (field(theta, phi + h) - field(theta, phi - h)) / (2.0 * h);
    if spec.component == Component::L3 {
        return -I * d_phi - s * n * field(theta, phi);
    }
    let d_theta = (field(theta + h, phi) - field(theta - h, phi)) / (2.0 * h);
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let gauge = n * (1.0 - s * ct) / st;
    let f0 = field(theta, phi);
    match spec.component {
        Component::L1 => I * (sp * d_theta + ct / st * cp * d_phi) - gauge * cp * f0,
        Component::L2 => I * (-cp * d_theta + ct / st * sp * d_phi) - gauge * sp * f0,
        Component::L3 => unreachable!(),
    }
}

/// Composite operators built from nested finite differences, optionally
/// Richardson-extrapolated (`(4 A(h/2) - A(h)) / 3`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularMomentum {
    pub n: i32,
    pub chart: Chart,
    pub h: f64,
    pub richardson: bool,
}

impl AngularMomentum {
    pub fn new(n: i32, chart: Chart) -> Self {
        Self { n, chart, h: 1e-4, richardson: false }
    }

    pub fn with_step(mut self, h: f64) -> Self {
        self.h = h;
        self
    }

    pub fn with_richardson(mut self, on: bool) -> Self {
        self.richardson = on;
        self
    }

    fn spec(&self, component: Component) -> AngularOperatorSpec {
        AngularOperatorSpec { n: self.n, component, chart: self.chart }
    }

    fn check(&self, theta: f64, reach: f64) -> Result<()> {
        let margin = reach * self.h;
        if theta < margin || theta > std::f64::consts::PI - margin {
            return Err(Error::Domain(format!("theta = {theta} too close to a pole")));
        }
        if self.chart.boundary_distance(theta) < margin {
            return Err(Error::Domain(format!("theta = {theta} too close to the chart boundary")));
        }
        Ok(())
    }

    fn extrapolate(&self, eval: impl Fn(f64) -> Complex64) -> Complex64 {
        if self.richardson {
            (4.0 * eval(0.5 * self.h) - eval(self.h)) / 3.0
        } else {
            eval(self.h)
        }
    }

    pub fn apply<F>(&self, component: Component, field: F, theta: f64, phi: f64) -> Result<Complex64>
    where
        F: Fn(f64, f64) -> Complex64,
    {
        self.check(theta, 2.0)?;
        let spec = self.spec(component);
        Ok(self.extrapolate(|h| apply_raw(spec, &field, theta, phi, h)))
    }

    /// `L_a (L_b f)` by nested differences with the same step.
    fn product(&self, a: Component, b: Component, field: &dyn Fn(f64, f64) -> Complex64, theta: f64, phi: f64, h: f64) -> Complex64 {
        let (sa, sb) = (self.spec(a), self.spec(b));
        let inner = |t: f64, p: f64| apply_raw(sb, field, t, p, h);
        apply_raw(sa, &inner, theta, phi, h)
    }

    /// `(L1^2 + L2^2 + L3^2) f`.
    pub fn casimir<F>(&self, field: F, theta: f64, phi: f64) -> Result<Complex64>
    where
        F: Fn(f64, f64) -> Complex64,
    {
        self.check(theta, 4.0)?;
        Ok(self.extrapolate(|h| {
            [Component::L1, Component::L2, Component::L3]
                .iter()
                .map(|&c| self.product(c, c, &field, theta, phi, h))
                .sum()
        }))
    }

    /// `([L1, L2] - i L3) f`; vanishes for the covariant operators.
    pub fn commutator_defect<F>(&self, field: F, theta: f64, phi: f64) -> Result<Complex64>
    where
        F: Fn(f64, f64) -> Complex64,
    {
        self.check(theta, 4.0)?;
        Ok(self.extrapolate(|h| {
            let l12 = self.product(Component::L1, Component::L2, &field, theta, phi, h);
            let l21 = self.product(Component::L2, Component::L1, &field, theta, phi, h);
            let l3 = apply_raw(self.spec(Component::L3), &field, theta, phi, h);
            l12 - l21 - I * l3
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{sph_harmonic, Channel, MonopoleHarmonic};

    fn harmonic(n: i32, ell: u32, m: i32) -> MonopoleHarmonic {
        MonopoleHarmonic::new(Channel::new(n, ell, m).unwrap()).unwrap()
    }

    #[test]
    fn l3_eigenvalue_in_both_charts() {
        for (n, ell) in [(1, 1), (1, 2), (2, 3)] {
            for m in -(ell as i32)..=ell as i32 {
                let y = harmonic(n, ell, m);
                for (chart, theta) in [(Chart::Plus, 0.9), (Chart::Minus, 2.1)] {
                    let spec = AngularOperatorSpec { n, component: Component::L3, chart };
                    let f = |t: f64, p: f64| y.value_unchecked(chart, t, p);
                    let got = apply_angular_momentum(spec, f, theta, 0.7, 1e-4).unwrap();
                    let want = m as f64 * f(theta, 0.7);
                    assert!((got - want).norm() < 1e-6, "n={n} l={ell} m={m}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn casimir_eigenvalue() {
        for (n, ell) in [(1, 1), (1, 2), (2, 2), (0, 2)] {
            for m in -(ell as i32)..=ell as i32 {
                let y = harmonic(n, ell, m);
                for (chart, theta) in [(Chart::Plus, 0.8), (Chart::Minus, 2.2)] {
                    let op = AngularMomentum::new(n, chart).with_step(1e-3).with_richardson(true);
                    let f = |t: f64, p: f64| y.value_unchecked(chart, t, p);
                    let got = op.casimir(f, theta, 1.1).unwrap();
                    let want = (ell * (ell + 1)) as f64 * f(theta, 1.1);
                    assert!((got - want).norm() < 1e-6, "n={n} l={ell} m={m}: {}", (got - want).norm());
                }
            }
        }
    }

    #[test]
    fn commutator_closes_on_harmonics() {
        for (n, ell, m) in [(1, 1, 0), (1, 2, 1), (2, 3, -2)] {
            let y = harmonic(n, ell, m);
            let op = AngularMomentum::new(n, Chart::Plus).with_step(1e-3).with_richardson(true);
            let f = |t: f64, p: f64| y.value_unchecked(Chart::Plus, t, p);
            assert!(op.commutator_defect(f, 1.0, 0.4).unwrap().norm() < 1e-6);
        }
    }

    #[test]
    fn free_reduction() {
        for m in -2..=2 {
            let f = |t: f64, p: f64| sph_harmonic(2, m, t, p).unwrap();
            let spec = AngularOperatorSpec { n: 0, component: Component::L3, chart: Chart::Plus };
            let got = apply_angular_momentum(spec, f, 1.2, 0.3, 1e-4).unwrap();
            assert!((got - m as f64 * f(1.2, 0.3)).norm() < 1e-7);
        }
    }

    #[test]
    fn rejects_points_near_singularities() {
        let spec = AngularOperatorSpec { n: 1, component: Component::L1, chart: Chart::Plus };
        let f = |_: f64, _: f64| Complex64::new(1.0, 0.0);
        assert!(matches!(apply_angular_momentum(spec, f, 1e-5, 0.0, 1e-4), Err(Error::Domain(_))));
        assert!(matches!(apply_angular_momentum(spec, f, 2.0943, 0.0, 1e-4), Err(Error::Domain(_))));
        assert!(Component::from_index(4).is_err());
    }
}
