use std::sync::Arc;

use monopole::dynamics::*;
use monopole::perturbation::*;
use monopole::radial::*;
use monopole::scattering::*;
use monopole::{Channel, Error};
use num_complex::Complex64;

fn bump() -> SpectralState {
    Wavepacket::standard().sample(Arc::new(make_spectral_grid(1.0, 3.0, 8, 16).unwrap()))
}

fn channel() -> Channel {
    Channel::new(1, 1, 0).unwrap()
}

fn exp_potential() -> PotentialSpec {
    PotentialSpec::exponential(1.0, 1.0).unwrap()
}

/// A packet near the origin, band-limited in the order-`mu` representation.
fn setup_with(spec: &PotentialSpec) -> (PerturbedPropagator, SpectralState, RadialState) {
    let grids = horizon_grids(5.0, (1.0, 3.0)).unwrap();
    let kgrid = perturbed_kgrid(&grids).unwrap();
    let prop = PerturbedPropagator::new(channel(), spec, grids.rgrid.clone(), kgrid.clone()).unwrap();
    let spectral = bump().resample(kgrid);
    let psi = prop.kernel().inverse(&spectral).unwrap();
    (prop, spectral, psi)
}

fn setup() -> (PerturbedPropagator, SpectralState, RadialState) {
    setup_with(&exp_potential())
}

#[test]
fn zero_potential_matches_monopole_evolution() {
    let (prop, spectral, psi) = setup_with(&PotentialSpec::zero());
    let grids = horizon_grids(5.0, (1.0, 3.0)).unwrap();
    let out = prop.evolve(5.0, &psi, 10).unwrap();
    let reference = evolve_monopole(channel(), 5.0, &spectral, &grids.rgrid).unwrap();
    let err = out.state.distance(&reference).unwrap();
    println!("V=0 deviation {err:.3e}");
    assert!(err <= 1e-6);
    let via_default = evolve_perturbed(channel(), &PotentialSpec::zero(), 5.0, &psi, 10).unwrap();
    assert!(via_default.distance(&reference).unwrap() <= 1e-6);
}

#[test]
fn constant_potential_is_a_global_phase() {
    let c = 0.3;
    let (prop, spectral, _) = setup_with(&PotentialSpec::constant(c));
    let out = prop.evolve_spectral(2.0, &spectral, 20).unwrap().0;
    let expected = spectral_phase(2.0, &spectral).scale(Complex64::from_polar(1.0, -c * 2.0));
    let err = prop.kernel().inverse(&out).unwrap().distance(&prop.kernel().inverse(&expected).unwrap()).unwrap();
    println!("constant deviation {err:.3e}");
    assert!(err <= 1e-8);
}

#[test]
fn exponential_potential_norm_and_step_halving() {
    let (prop, _, psi) = setup();
    let steps = default_steps(2.0);
    let a = prop.evolve(2.0, &psi, steps).unwrap();
    let b = prop.evolve(2.0, &psi, 2 * steps).unwrap();
    println!("drift {:.3e} {:.3e} halving {:.3e}", a.norm_drift, b.norm_drift, a.state.distance(&b.state).unwrap());
    assert!(a.norm_drift <= 1e-6 && b.norm_drift <= 1e-6);
    assert!(a.state.distance(&b.state).unwrap() <= 1e-5);
    // The potential actually acts.
    let free_like = prop.evolve(2.0, &psi, 1).unwrap();
    assert!(free_like.state.distance(&b.state).unwrap() > 1e-4);
}

#[test]
fn strang_splitting_is_second_order() {
    let (prop, spectral, _) = setup();
    let run = |steps| prop.evolve_spectral(2.0, &spectral, steps).unwrap().0;
    let (s1, s2, s4) = (run(40), run(80), run(160));
    let e1 = s1.distance(&s2).unwrap();
    let e2 = s2.distance(&s4).unwrap();
    println!("strang {e1:.3e} {e2:.3e} ratio {}", e1 / e2);
    assert!((3.5..=4.5).contains(&(e1 / e2)));
}

#[test]
fn inadmissible_potentials_are_refused() {
    let (_, _, psi) = setup();
    let coulomb = PotentialSpec::power(1.0, -1.0, 0.0, None).unwrap();
    match wave_operator_perturbed(channel(), &coulomb, &bump(), 5.0) {
        Err(Error::Refused(msg)) => assert!(msg.contains("square integrable"), "{msg}"),
        other => panic!("expected refusal, got {other:?}"),
    }
    let times = [4.0, 8.0];
    assert!(matches!(perturbed_cook_series(channel(), &coulomb, &bump(), &times, 4.0, 8.0), Err(Error::Refused(_))));
    // Evolution itself only needs self-adjointness, which 1/r does not spoil.
    let coulomb_run = evolve_perturbed(channel(), &coulomb, 0.5, &psi, 10);
    assert!(coulomb_run.is_ok(), "{coulomb_run:?}");
    let core = PotentialSpec::power(-0.5, -2.0, 0.0, Some(1.0)).unwrap();
    assert!(matches!(evolve_perturbed(channel(), &core, 1.0, &psi, 10), Err(Error::Refused(_))));
}

#[test]
fn zero_potential_wave_operator_matches_unperturbed() {
    let a = wave_operator_perturbed(channel(), &PotentialSpec::zero(), &bump(), 10.0).unwrap();
    let b = wave_operator_approx(channel(), &bump(), 10.0).unwrap();
    let err = a.omega_t.distance(&b.omega_t).unwrap();
    println!("V=0 waveop deviation {err:.3e}");
    assert!(err <= 1e-5);
    assert!((a.defect - b.defect).abs() <= 1e-5);
}

#[test]
fn exponential_wave_operator_converges() {
    let res = wave_operator_perturbed(channel(), &exp_potential(), &bump(), 40.0).unwrap();
    println!(
        "defect(40,80) {:.4e} norm defect {:.3e} phase {:.5}",
        res.relative_defect(),
        res.norm_defect,
        res.phase_shift_estimate
    );
    assert!(res.relative_defect() <= 5e-3);
    assert!(res.norm_defect <= 1e-4);
    res.check_converged(5e-3).unwrap();
}

#[test]
fn combined_cook_integrand_is_integrable() {
    let s = perturbed_cook_series(channel(), &exp_potential(), &bump(), &default_times(), 4.0, 100.0).unwrap();
    println!("combined exponent {:?} v1 {:?} v2 {:?}", s.total_exponent, s.v1_exponent, s.v2_exponent);
    assert!(s.total_exponent.unwrap() <= -1.4);
}
