use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::admissibility::{check_potential, AdmissibilityReport};
use super::potential::PotentialSpec;
use crate::dynamics::{spectral_grid_like, spectral_phase, HorizonGrids, Propagator};
use crate::radial::{
    make_spectral_grid, BesselKernel, RadialGrid, RadialState, SpectralGrid, SpectralState, DEFAULT_K_MAX,
    DEFAULT_K_MIN,
};
use crate::scattering::{reduce_phase, CookPoint, CookSeries, WaveOpResult, WaveOperator};
use crate::{Channel, Error, Result};

/// Default Strang step.
pub const DEFAULT_DT: f64 = 0.01;
/// Relative norm drift above which a perturbed evolution is rejected.
pub const MAX_NORM_DRIFT: f64 = 1e-4;
/// Extra spectral reach above the incoming support. The potential step feeds
/// high momenta (algebraically, for potentials with a cusp at the origin),
/// and whatever leaves the grid shows up as norm drift.
pub const PERTURBED_K_MARGIN: f64 = 5.0;
/// Rows where `|V| |t|` stays below this are left out of the potential step.
const NEGLIGIBLE_PHASE: f64 = 1e-12;

/// Steps of length at most [`DEFAULT_DT`] covering `|t|`.
pub fn default_steps(t: f64) -> usize {
    ((t.abs() / DEFAULT_DT).ceil() as usize).max(1)
}

/// Output of a perturbed evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedEvolution {
    pub state: RadialState,
    pub spectral: SpectralState,
    /// `| ||psi(t)|| - ||psi(0)|| | / ||psi(0)||`.
    pub norm_drift: f64,
    pub steps: usize,
    pub dt: f64,
}

/// `e^{-i (h_l + V) t}` by Strang splitting in the order-`mu` spectral
/// representation: the kinetic factor is diagonal there, and the potential
/// factor is applied through the rows of the kernel where `V` is not negligible.
#[derive(Debug, Clone)]
pub struct PerturbedPropagator {
    channel: Channel,
    kernel: Arc<BesselKernel>,
    report: AdmissibilityReport,
    v: Vec<f64>,
}

impl PerturbedPropagator {
    pub fn new(
        channel: Channel,
        spec: &PotentialSpec,
        rgrid: Arc<RadialGrid>,
        kgrid: Arc<SpectralGrid>,
    ) -> Result<Self> {
        let report = check_potential(spec, channel, &rgrid);
        refuse_unless(&report, report.evolvable())?;
        let kernel = Arc::new(BesselKernel::real_order(channel.mu(), rgrid, kgrid)?);
        Ok(Self::assemble(channel, spec, kernel, report))
    }

    /// Reuses an existing order-`mu` kernel.
    pub fn from_kernel(channel: Channel, spec: &PotentialSpec, kernel: Arc<BesselKernel>) -> Result<Self> {
        if (kernel.mu() - channel.mu()).abs() > 1e-14 {
            return Err(Error::Config(format!(
                "kernel order {} does not match channel order {}",
                kernel.mu(),
                channel.mu()
            )));
        }
        let report = check_potential(spec, channel, kernel.rgrid());
        refuse_unless(&report, report.evolvable())?;
        Ok(Self::assemble(channel, spec, kernel, report))
    }

    fn assemble(channel: Channel, spec: &PotentialSpec, kernel: Arc<BesselKernel>, report: AdmissibilityReport) -> Self {
        let v = kernel.rgrid().nodes().iter().map(|&r| spec.eval(r)).collect();
        Self { channel, kernel, report, v }
    }

    pub fn channel(&self) -> Channel {
        self.channel
    }

    pub fn report(&self) -> &AdmissibilityReport {
        &self.report
    }

    pub fn kernel(&self) -> &Arc<BesselKernel> {
        &self.kernel
    }

    /// Strang splitting with `steps` equal steps over `t`; returns the evolved
    /// spectral data and its relative norm drift.
    pub fn evolve_spectral(&self, t: f64, spectral: &SpectralState, steps: usize) -> Result<(SpectralState, f64)> {
        if steps == 0 {
            return Err(Error::Config("perturbed evolution needs at least one step".into()));
        }
        if !Arc::ptr_eq(spectral.grid(), self.kernel.kgrid()) && **spectral.grid() != **self.kernel.kgrid() {
            return Err(Error::Config("state is not on the propagator's spectral grid".into()));
        }
        // The value at the outer edge is split off as a global phase, so only
        // the decaying remainder needs the row-restricted transform.
        let offset = *self.v.last().unwrap_or(&0.0);
        let global = Complex64::from_polar(1.0, -offset * t);
        let rows = self
            .v
            .iter()
            .rposition(|v| (v - offset).abs() * t.abs() > NEGLIGIBLE_PHASE)
            .map_or(0, |i| i + 1);
        if rows == 0 {
            return Ok((spectral_phase(t, spectral).scale(global), 0.0));
        }
        let dt = t / steps as f64;
        let rw = self.kernel.rgrid().weights();
        let factors = |tau: f64| -> Vec<Complex64> {
            (0..rows)
                .map(|i| {
                    let x = (self.v[i] - offset) * tau;
                    Complex64::new(-2.0 * (0.5 * x).sin().powi(2), -x.sin()) * rw[i]
                })
                .collect()
        };
        let half = factors(0.5 * dt);
        let full = factors(dt);
        let kg = self.kernel.kgrid();
        let kinetic: Vec<Complex64> = kg.nodes().iter().map(|k| Complex64::from_polar(1.0, -k * k * dt)).collect();
        let kw = kg.weights();

        let mut psi = spectral.values().to_vec();
        let potential_step = |psi: &mut Vec<Complex64>, f: &[Complex64]| {
            let weighted: Vec<Complex64> = psi.iter().zip(kw).map(|(a, w)| a * w).collect();
            let local = self.kernel.inverse_rows(&weighted, 0..rows);
            let delta: Vec<Complex64> = local.iter().zip(f).map(|(a, b)| a * b).collect();
            let update = self.kernel.forward_raw(&delta, 0..rows);
            psi.par_iter_mut().zip(update).for_each(|(a, d)| *a += d);
        };
        potential_step(&mut psi, &half);
        for s in 0..steps {
            psi.iter_mut().zip(&kinetic).for_each(|(a, p)| *a *= p);
            potential_step(&mut psi, if s + 1 == steps { &half } else { &full });
        }
        psi.iter_mut().for_each(|a| *a *= global);
        let out = SpectralState::new(kg.clone(), psi)?;
        let n0 = spectral.norm();
        let drift = if n0 > 0.0 { (out.norm() - n0).abs() / n0 } else { 0.0 };
        if drift > MAX_NORM_DRIFT {
            return Err(Error::Accuracy(format!(
                "perturbed evolution norm drift {drift:.3e} exceeds {MAX_NORM_DRIFT:.0e}"
            )));
        }
        Ok((out, drift))
    }

    /// `e^{-i (h_l + V) t}` on a position-space state.
    pub fn evolve(&self, t: f64, state: &RadialState, steps: usize) -> Result<PerturbedEvolution> {
        let spectral = self.kernel.forward(state)?;
        let (spectral, _) = self.evolve_spectral(t, &spectral, steps)?;
        let out = self.kernel.inverse(&spectral)?;
        let n0 = state.norm();
        let norm_drift = if n0 > 0.0 { (out.norm() - n0).abs() / n0 } else { 0.0 };
        if norm_drift > MAX_NORM_DRIFT {
            return Err(Error::Accuracy(format!(
                "perturbed evolution norm drift {norm_drift:.3e} exceeds {MAX_NORM_DRIFT:.0e}"
            )));
        }
        Ok(PerturbedEvolution { state: out, spectral, norm_drift, steps, dt: t / steps as f64 })
    }
}

fn refuse_unless(report: &AdmissibilityReport, ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Refused(report.failures().join("; ")))
    }
}

/// Spectral grid on `[DEFAULT_K_MIN, DEFAULT_K_MAX + PERTURBED_K_MARGIN]`
/// resolving oscillations up to `r_max`.
pub fn default_perturbed_kgrid(rgrid: &RadialGrid) -> Result<SpectralGrid> {
    let hi = DEFAULT_K_MAX + PERTURBED_K_MARGIN;
    let panels = ((hi - DEFAULT_K_MIN) * rgrid.hi() / 20.0).ceil().max(1.0) as usize;
    make_spectral_grid(DEFAULT_K_MIN, hi, panels, 16)
}

/// The wide k-grid of `grids` extended by [`PERTURBED_K_MARGIN`] above.
pub fn perturbed_kgrid(grids: &HorizonGrids) -> Result<Arc<SpectralGrid>> {
    let w = &grids.kgrid_wide;
    Ok(Arc::new(spectral_grid_like(&grids.kgrid, w.lo(), grids.kgrid.hi() + PERTURBED_K_MARGIN)?))
}

/// `e^{-i (h_l + V) t}` applied to `state`, using `steps` Strang steps.
pub fn evolve_perturbed(
    channel: Channel,
    spec: &PotentialSpec,
    t: f64,
    state: &RadialState,
    steps: usize,
) -> Result<RadialState> {
    let kgrid = Arc::new(default_perturbed_kgrid(state.grid())?);
    let prop = PerturbedPropagator::new(channel, spec, state.grid().clone(), kgrid)?;
    Ok(prop.evolve(t, state, steps)?.state)
}

/// `Omega_T(V) psi = e^{i (h_l + V) T} e^{-i h_{0,l} T} psi` with `defect(T, 2T)`.
pub fn wave_operator_perturbed(
    channel: Channel,
    spec: &PotentialSpec,
    psi_sharp: &SpectralState,
    t: f64,
) -> Result<WaveOpResult> {
    PerturbedWaveOperator::new(channel, spec, psi_sharp, 2.0 * t)?.result(t)
}

/// Perturbed wave-operator machinery sharing the grids of a [`WaveOperator`].
#[derive(Debug, Clone)]
pub struct PerturbedWaveOperator {
    op: WaveOperator,
    prop: PerturbedPropagator,
}

impl PerturbedWaveOperator {
    pub fn new(channel: Channel, spec: &PotentialSpec, psi_sharp: &SpectralState, t_max: f64) -> Result<Self> {
        let op = WaveOperator::new(channel, psi_sharp, t_max)?;
        let grids = op.grids();
        let kernel = if spec.is_zero() {
            op.monopole_propagator().kernel().clone()
        } else {
            let kgrid = perturbed_kgrid(grids)?;
            Propagator::monopole(channel, grids.rgrid.clone(), kgrid)?.kernel().clone()
        };
        let prop = PerturbedPropagator::from_kernel(channel, spec, kernel)?;
        refuse_unless(prop.report(), prop.report().usable())?;
        Ok(Self { op, prop })
    }

    pub fn unperturbed(&self) -> &WaveOperator {
        &self.op
    }

    pub fn report(&self) -> &AdmissibilityReport {
        self.prop.report()
    }

    /// Order-`mu` spectral data of `Omega_T(V) psi`; negative `T` gives the
    /// incoming branch.
    pub fn spectral(&self, t: f64) -> Result<SpectralState> {
        let phi = self.op.free_state(t)?;
        let data = self.prop.kernel().forward(&phi)?;
        Ok(self.prop.evolve_spectral(-t, &data, default_steps(t))?.0)
    }

    pub fn apply(&self, t: f64) -> Result<RadialState> {
        self.prop.kernel().inverse(&self.spectral(t)?)
    }

    pub fn result(&self, t: f64) -> Result<WaveOpResult> {
        if !(t > 0.0) {
            return Err(Error::Config(format!("evolution time T = {t} must be positive")));
        }
        let out = self.spectral(t)?;
        let inc = self.spectral(-t)?;
        let omega = self.prop.kernel().inverse(&out)?;
        let omega2 = self.apply(2.0 * t)?;
        let psi_norm = self.op.psi().norm();
        Ok(WaveOpResult {
            channel: self.op.channel(),
            t,
            defect: omega2.distance(&omega)?,
            norm_defect: (omega.norm() - psi_norm).abs() / psi_norm,
            psi_norm,
            phase_shift_estimate: reduce_phase(0.5 * out.inner(&inc)?.arg()),
            omega_t: omega,
        })
    }

    /// `||(v + V) e^{-i h_{0,l} t} psi||` with `v = -n^2/r^2`, split at `r = 1`.
    pub fn cook_point(&self, t: f64) -> Result<CookPoint> {
        let phi = self.op.free_state(t)?;
        let n2 = (self.op.channel().n() as f64).powi(2);
        let g = phi.grid();
        let (mut a, mut b) = (0.0, 0.0);
        for (((r, w), v), pot) in g.nodes().iter().zip(g.weights()).zip(phi.values()).zip(&self.prop.v) {
            let q = w * (pot - n2 / (r * r)).powi(2) * v.norm_sqr();
            if *r <= 1.0 {
                a += q;
            } else {
                b += q;
            }
        }
        Ok(CookPoint { t, total: (a + b).sqrt(), v1: a.sqrt(), v2: b.sqrt() })
    }
}

/// Combined Cook integrand `||(v + V) e^{-i h_{0,l} t} psi||` over `times`.
pub fn perturbed_cook_series(
    channel: Channel,
    spec: &PotentialSpec,
    psi_sharp: &SpectralState,
    times: &[f64],
    t_fit_min: f64,
    t_fit_max: f64,
) -> Result<CookSeries> {
    if times.is_empty() {
        return Err(Error::Config("empty time schedule".into()));
    }
    let t_max = times.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let op = PerturbedWaveOperator::new(channel, spec, psi_sharp, t_max)?;
    let points = times.par_iter().map(|&t| op.cook_point(t)).collect::<Result<Vec<_>>>()?;
    Ok(CookSeries::from_points(channel, &points, t_fit_min, t_fit_max))
}
