use std::sync::Arc;

use monopole::dynamics::Wavepacket;
use monopole::radial::*;
use monopole::specfun::{bessel_real_order, effective_order};
use monopole::Error;
use num_complex::Complex64;

fn default_grids() -> (Arc<RadialGrid>, Arc<SpectralGrid>) {
    let r = Grid::new(GridSpec::new(DEFAULT_R_MIN, DEFAULT_R_MAX, 100, 16).graded(true)).unwrap();
    let k = make_spectral_grid(DEFAULT_K_MIN, DEFAULT_K_MAX, 80, 16).unwrap();
    (Arc::new(r), Arc::new(k))
}

const ORDERS: [f64; 4] = [1.5, 2.5, 1.118033988749895, 2.29128784747792];

#[test]
fn unitarity_and_round_trip_on_bumps() {
    let (rg, kg) = default_grids();
    for mu in ORDERS {
        let kernel = BesselKernel::real_order(mu, rg.clone(), kg.clone()).unwrap();
        for packet in [Wavepacket::standard(), Wavepacket::new(3.0, 1.5).unwrap()] {
            let sharp = packet.sample(kg.clone());
            let psi = kernel.inverse(&sharp).unwrap();
            let defect = (psi.norm() - sharp.norm()).abs() / sharp.norm();
            assert!(defect < 1e-6, "mu={mu}: norm defect {defect:e}");
            let back = kernel.forward(&psi).unwrap();
            let err = back.distance(&sharp).unwrap() / sharp.norm();
            assert!(err < 1e-6, "mu={mu}: k->r->k error {err:e}");
            let again = kernel.inverse(&back).unwrap();
            let err = again.distance(&psi).unwrap() / psi.norm();
            assert!(err < 1e-6, "mu={mu}: r->k->r error {err:e}");
            let tail = psi.values().last().unwrap().norm();
            assert!(tail < 1e-8 * psi.norm());
        }
    }
}

#[test]
fn zero_maps_to_zero() {
    let (rg, kg) = default_grids();
    let z = RadialState::zeros(rg.clone());
    let s = fourier_bessel(1.5, &z, &kg).unwrap();
    assert!(s.values().iter().all(|v| *v == Complex64::new(0.0, 0.0)));
    let back = inverse_fourier_bessel(1.5, &SpectralState::zeros(kg.clone()), &rg).unwrap();
    assert_eq!(back.max_abs(), 0.0);
}

#[test]
fn order_mismatch_does_not_round_trip() {
    let (rg, kg) = default_grids();
    let sharp = Wavepacket::standard().sample(kg.clone());
    let psi = inverse_fourier_bessel(1.5, &sharp, &rg).unwrap();
    let wrong = fourier_bessel(1.118033988749895, &psi, &kg).unwrap();
    let back = inverse_fourier_bessel(1.5, &wrong, &rg).unwrap();
    assert!(back.distance(&psi).unwrap() / psi.norm() > 0.1);
}

#[test]
fn gaussian_round_trip_matches_direct_double_quadrature() {
    // A position-space Gaussian bump: forward then inverse.
    let rg = Arc::new(Grid::new(GridSpec::new(1e-3, 30.0, 40, 16).graded(true)).unwrap());
    let kg = Arc::new(make_spectral_grid(1e-3, 12.0, 60, 16).unwrap());
    let psi = RadialState::from_fn(rg.clone(), |r| Complex64::new(r * r * (-(r - 4.0f64).powi(2)).exp(), 0.0));
    let sharp = fourier_bessel(2.5, &psi, &kg).unwrap();
    let back = inverse_fourier_bessel(2.5, &sharp, &rg).unwrap();
    assert!(back.distance(&psi).unwrap() / psi.norm() < 1e-6);
}

#[test]
fn capacity_and_order_errors() {
    let r = Arc::new(make_radial_grid(0.1, 2000.0, 4, 4).unwrap());
    let k = Arc::new(make_spectral_grid(0.1, 100.0, 4, 4).unwrap());
    assert!(matches!(BesselKernel::real_order(1.5, r.clone(), k.clone()), Err(Error::Capacity(_))));
    let r = Arc::new(make_radial_grid(0.1, 2.0, 4, 4).unwrap());
    assert!(matches!(BesselKernel::real_order(-1.0, r, k), Err(Error::Domain(_))));
}

fn eigen_residual(mu: f64, k: f64) -> f64 {
    let rg = Arc::new(Grid::new(GridSpec::new(1e-3, 20.0, 20, 16).graded(true)).unwrap());
    let f = |r: f64| (k * r).powf(-0.5) * bessel_real_order(mu, k * r).unwrap();
    let psi = RadialState::from_fn(rg.clone(), |r| Complex64::new(f(r), 0.0));
    let h = apply_h(mu, &psi).unwrap();
    let mut err: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for ((hv, v), ok) in h.state.values().iter().zip(psi.values()).zip(&h.valid) {
        if *ok {
            err = err.max((hv - k * k * v).norm());
            scale = scale.max((k * k * v).norm());
        }
    }
    err / scale
}

#[test]
fn bessel_eigenfunctions_of_h() {
    assert!(eigen_residual(1.5, 2.0) < 1e-4);
    assert!(eigen_residual(1.118033988749895, 2.0) < 1e-4);
}

#[test]
fn h_on_constants_and_identifications() {
    let rg = Arc::new(make_radial_grid(0.5, 5.0, 4, 12).unwrap());
    let one = RadialState::from_fn(rg.clone(), |_| Complex64::new(1.0, 0.0));
    let mu = 2.29128784747792;
    let h = apply_h(mu, &one).unwrap();
    for ((v, r), ok) in h.state.values().iter().zip(rg.nodes()).zip(&h.valid) {
        if *ok {
            assert!((v.re - (mu * mu - 0.25) / (r * r)).abs() < 1e-6 / (r * r));
        }
    }
    let psi = RadialState::from_fn(rg.clone(), |r| Complex64::new((-r).exp() * r.sin(), r.cos()));
    for ell in 0..4 {
        let a = apply_h(ell as f64 + 0.5, &psi).unwrap();
        let b = apply_h_free(ell, &psi).unwrap();
        for (x, y) in a.state.values().iter().zip(b.state.values()) {
            assert!((x - y).norm() < 1e-10);
        }
    }
    for n in 1..4 {
        for ell in n as u32..8 {
            let mu = effective_order(n, ell);
            let l = ell as f64;
            assert!((mu * mu - 0.25 - (l * (l + 1.0) - (n * n) as f64)).abs() < 1e-12);
        }
    }
}

#[test]
fn too_coarse_grid_is_rejected() {
    let rg = Arc::new(make_radial_grid(0.5, 5.0, 1, 4).unwrap());
    let psi = RadialState::from_fn(rg, |_| Complex64::new(1.0, 0.0));
    assert!(matches!(apply_h(1.5, &psi), Err(Error::Config(_))));
}
