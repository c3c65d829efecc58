use std::sync::Arc;

use monopole::dynamics::*;
use monopole::radial::*;
use monopole::scattering::*;
use monopole::{Channel, Error};
use num_complex::Complex64;

fn bump() -> SpectralState {
    Wavepacket::standard().sample(Arc::new(make_spectral_grid(1.0, 3.0, 8, 16).unwrap()))
}

#[test]
fn identification_operator() {
    let rg = Arc::new(make_radial_grid(0.01, 10.0, 4, 8).unwrap());
    let psi = RadialState::from_fn(rg.clone(), |r| Complex64::new((-r).exp(), 0.0));
    match identify_j(1, 0, &psi, 1).unwrap() {
        JImage::Monopole { channel, state } => {
            assert_eq!((channel.n(), channel.ell(), channel.m()), (1, 1, 0));
            assert_eq!(state, psi);
        }
        JImage::Null => panic!("l = |n| must map to a monopole channel"),
    }
    assert!(identify_j(0, 0, &psi, 1).unwrap().is_null());
    let zero = RadialState::zeros(rg);
    assert_eq!(identify_j(2, 1, &zero, 1).unwrap().state().unwrap().max_abs(), 0.0);
    assert!(matches!(identify_j(1, 2, &zero, 1), Err(Error::Channel(_))));
}

#[test]
fn cook_integrand_split_and_decay() {
    let ch = Channel::new(1, 1, 0).unwrap();
    let sharp = bump();
    let at0 = cook_integrand(ch, &sharp, 0.0).unwrap();
    let op = WaveOperator::new(ch, &sharp, 0.0).unwrap();
    let direct: f64 = op
        .psi()
        .grid()
        .nodes()
        .iter()
        .zip(op.psi().grid().weights())
        .zip(op.psi().values())
        .map(|((r, w), v)| w * v.norm_sqr() / r.powi(4))
        .sum::<f64>()
        .sqrt();
    assert!((at0.total - direct).abs() < 1e-12 * direct);
    let series = cook_series(ch, &sharp, &default_times(), 4.0, 100.0).unwrap();
    for i in 0..series.times.len() {
        let lhs = series.values[i].powi(2);
        let rhs = series.v1_values[i].powi(2) + series.v2_values[i].powi(2);
        assert!((lhs - rhs).abs() <= 1e-12 * lhs);
    }
    assert!(series.v1_exponent.unwrap() <= -3.0, "{:?}", series.v1_exponent);
    assert!(series.v2_exponent.unwrap() <= -1.4, "{:?}", series.v2_exponent);
    assert!(series.tail_integral_estimate.unwrap() > 0.0);
    let mut buf = Vec::new();
    series.write_csv(&mut buf).unwrap();
    assert!(String::from_utf8(buf).unwrap().starts_with("t,total,v1,v2\n"));
}

#[test]
fn cook_rejects_coarse_inner_radius() {
    let ch = Channel::new(1, 1, 0).unwrap();
    let g = horizon_grids(10.0, (1.0, 3.0)).unwrap();
    let rgrid = Arc::new(make_radial_grid(0.1, g.rgrid.hi(), 200, 16).unwrap());
    let grids = HorizonGrids { rgrid, ..g };
    assert!(matches!(WaveOperator::with_grids(ch, &bump(), grids), Err(Error::Config(_))));
}

#[test]
fn wave_operator_isometry_cauchy_and_cook_bound() {
    let sharp = bump();
    for (n, ell) in [(1, 1), (1, 2)] {
        let ch = Channel::new(n, ell, 0).unwrap();
        let op = WaveOperator::new(ch, &sharp, 80.0).unwrap();
        let states: Vec<RadialState> = DEFAULT_SCHEDULE.iter().map(|&t| op.apply(t).unwrap()).collect();
        let norm = op.psi().norm();
        for (t, s) in DEFAULT_SCHEDULE.iter().zip(&states) {
            if [5.0, 20.0, 80.0].contains(t) {
                assert!((s.norm() - norm).abs() < 1e-5 * norm);
            }
        }
        let mut last = f64::INFINITY;
        for i in 0..states.len() - 1 {
            let d = states[i + 1].distance(&states[i]).unwrap();
            assert!(d < last, "defect not decreasing at T={}", DEFAULT_SCHEDULE[i]);
            last = d;
        }
        for i in 0..states.len() {
            for j in i + 1..states.len() {
                let d = states[j].distance(&states[i]).unwrap();
                let bound = op.cook_integral(DEFAULT_SCHEDULE[i], DEFAULT_SCHEDULE[j], 8).unwrap();
                assert!(d <= bound + 1e-4, "({n},{ell}) T={} T'={}: {d} > {bound}", DEFAULT_SCHEDULE[i], DEFAULT_SCHEDULE[j]);
            }
        }
        assert!(last <= 1e-3 * norm);
    }
}

#[test]
fn free_channel_wave_operator_is_identity() {
    let ch = Channel::free(1, 0).unwrap();
    let res = wave_operator_approx(ch, &bump(), 20.0).unwrap();
    let op = WaveOperator::new(ch, &bump(), 40.0).unwrap();
    assert!(res.omega_t.distance(op.psi()).unwrap() <= 1e-10);
    assert!(res.defect <= 1e-10);
    assert_eq!(phase_shift(ch, PhaseMethod::LongTime).unwrap().delta, 0.0);
    assert!(phase_shift(ch, PhaseMethod::AsymptoticMatch).unwrap().delta.abs() < 1e-6);
}

#[test]
fn phase_shifts_agree_and_match_reference_values() {
    // Reference values: (pi/2)(l + 1/2 - mu), evaluated independently.
    let cases = [(1, 1, 0.599990807432163), (1, 2, 0.32784428253914), (2, 2, std::f64::consts::FRAC_PI_2), (2, 3, 0.986018191669585)];
    for (n, ell, reference) in cases {
        let ch = Channel::new(n, ell, 0).unwrap();
        let lt = phase_shift(ch, PhaseMethod::LongTime).unwrap();
        let am = phase_shift(ch, PhaseMethod::AsymptoticMatch).unwrap();
        assert!(phase_distance(lt.delta, am.delta) < 1e-2, "({n},{ell}): {} vs {}", lt.delta, am.delta);
        assert!(phase_distance(am.delta, reference) < 1e-2);
        assert!(lt.k_spread() < 5e-2, "({n},{ell}) spread {}", lt.k_spread());
        assert!(lt.delta > -std::f64::consts::FRAC_PI_2 && lt.delta <= std::f64::consts::FRAC_PI_2);
    }
}

#[test]
fn s_matrix_properties() {
    let sharp = bump();
    let out = s_matrix_apply(1, 1, 0, &sharp).unwrap();
    assert!((out.norm() - sharp.norm()).abs() < 1e-14);
    let s = SMatrix::new(1, 1, 0, PhaseMethod::AsymptoticMatch).unwrap();
    let twice = s.apply(&s.apply(&sharp));
    let expected = sharp.scale(Complex64::from_polar(1.0, 4.0 * s.delta));
    assert!(twice.distance(&expected).unwrap() < 1e-14);
    assert!(matches!(s_matrix_apply(2, 1, 0, &sharp), Err(Error::Channel(_))));
}

#[test]
fn reduce_phase_branch() {
    use std::f64::consts::{FRAC_PI_2, PI};
    assert!((reduce_phase(-FRAC_PI_2) - FRAC_PI_2).abs() < 1e-15);
    assert!((reduce_phase(0.6 + 3.0 * PI) - 0.6).abs() < 1e-12);
    assert!((reduce_phase(-0.6 - PI) + 0.6).abs() < 1e-12);
    assert!(phase_distance(FRAC_PI_2 - 1e-4, -FRAC_PI_2 + 1e-4) < 3e-4);
}

#[test]
fn phase_table_is_schedule_independent() {
    let chans = [Channel::new(1, 1, 0).unwrap(), Channel::new(1, 2, 0).unwrap()];
    let opts = LongTimeOptions { t_max: 20.0, threshold: 1.0, ..Default::default() };
    let a = phase_table(&chans, &opts, false).unwrap();
    let b = phase_table(&chans, &opts, true).unwrap();
    assert_eq!(a, b);
    let mut buf = Vec::new();
    write_phase_csv(&a, &mut buf).unwrap();
    assert!(String::from_utf8(buf).unwrap().starts_with("n,ell,delta_long_time,delta_asymptotic,defect\n"));
}

#[test]
fn insufficient_time_reports_convergence_error() {
    let ch = Channel::new(1, 1, 0).unwrap();
    let opts = LongTimeOptions { t_max: 4.0, ..Default::default() };
    match phase_shift_long_time(ch, &opts) {
        Err(Error::Convergence { defect, threshold }) => assert!(defect > threshold),
        other => panic!("expected a convergence error, got {other:?}"),
    }
}
