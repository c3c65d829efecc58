use std::sync::Arc;

use num_complex::Complex64;
use serde_json::json;

use monopole::dynamics::{
    default_times, small_r_decay_with, supnorm_decay, vanishing_order, DecayOptions, DecayReport, Wavepacket,
};
use monopole::io::{format_f64, write_state_csv, write_state_header};
use monopole::perturbation::{check_potential, PerturbedWaveOperator};
use monopole::radial::{make_spectral_grid, BesselKernel, Grid, SpectralState};
use monopole::scattering::{
    defect_table, phase_distance, phase_shift_asymptotic, phase_shift_long_time, write_defect_csv, write_phase_csv,
    CookSeries, LongTimeOptions, PhaseRow, WaveOperator, DEFAULT_SCHEDULE,
};
use monopole::specfun::{sphere_inner_product, AngularMomentum, Chart, Component, MonopoleHarmonic, CHART_HALF_WIDTH};
use monopole::{Channel, Error, Result};

use crate::config::{Command, RunConfig};
use crate::output::Output;
use crate::svg::{Axis, LinePlot, Series};

/// Runs the configured command, writing into `out`; returns the summary line.
pub fn execute(cfg: &RunConfig, out: &mut Output) -> Result<String> {
    match cfg.command.ok_or_else(|| Error::Config("no command given".into()))? {
        Command::Harmonics => harmonics(cfg, out),
        Command::Transform => transform(cfg, out),
        Command::Evolve => evolve(cfg, out),
        Command::Cook => cook(cfg, out),
        Command::Waveop => waveop(cfg, out),
        Command::Phaseshift => phaseshift(cfg, out),
        Command::Perturb => perturb(cfg, out),
    }
}

/// Packet sampled on an 8-panel grid over its support.
pub fn probe(packet: &Wavepacket) -> Result<SpectralState> {
    let (a, b) = packet.support();
    Ok(packet.sample(Arc::new(make_spectral_grid(a, b, 8, 16)?)))
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn write_plot(cfg: &RunConfig, out: &mut Output, name: &str, mut plot: LinePlot) -> Result<()> {
    if !cfg.plot.svg {
        return Ok(());
    }
    if cfg.plot.timestamp {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        plot.timestamp = Some(format!("generated at unix time {secs}"));
    }
    out.write_text(name, &plot.render())?;
    Ok(())
}

/// Eigenvalue residuals of one harmonic, maximised over the sample points.
#[derive(Debug, Clone)]
pub struct HarmonicResiduals {
    pub ell: u32,
    pub m: i32,
    pub l3: f64,
    pub casimir: f64,
    pub commutator: f64,
    pub transition: f64,
}

#[derive(Debug, Clone)]
pub struct HarmonicsReport {
    pub n: i32,
    pub ell_max: u32,
    /// `(ell_a, m_a, ell_b, m_b, <Y_a, Y_b>)`.
    pub gram: Vec<(u32, i32, u32, i32, Complex64)>,
    pub gram_max_deviation: f64,
    pub residuals: Vec<HarmonicResiduals>,
}

impl HarmonicsReport {
    fn max_of(&self, f: impl Fn(&HarmonicResiduals) -> f64) -> f64 {
        self.residuals.iter().map(f).fold(0.0, f64::max)
    }

    pub fn l3_max(&self) -> f64 {
        self.max_of(|r| r.l3)
    }

    pub fn casimir_max(&self) -> f64 {
        self.max_of(|r| r.casimir)
    }

    pub fn commutator_max(&self) -> f64 {
        self.max_of(|r| r.commutator)
    }

    pub fn transition_max(&self) -> f64 {
        self.max_of(|r| r.transition)
    }
}

const SAMPLE_POINTS: [(Chart, f64, f64); 4] =
    [(Chart::Plus, 0.8, 1.1), (Chart::Plus, 1.4, 4.0), (Chart::Minus, 2.2, 1.1), (Chart::Minus, 1.9, 2.5)];

/// Gram matrix and eigenvalue residuals for all harmonics of charge `n` with
/// `|n| <= l <= ell_max`.
pub fn harmonics_report(n: i32, ell_max: u32) -> Result<HarmonicsReport> {
    Channel::new(n, ell_max, 0)?;
    let mut basis = Vec::new();
    for ell in n.unsigned_abs()..=ell_max {
        for m in -(ell as i32)..=ell as i32 {
            basis.push(MonopoleHarmonic::new(Channel::new(n, ell, m)?)?);
        }
    }
    let order = 24 + 2 * ell_max as usize;
    let mut gram = Vec::with_capacity(basis.len() * basis.len());
    let mut dev: f64 = 0.0;
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let g = sphere_inner_product(a, b, order);
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((g - target).norm());
            let (ca, cb) = (a.channel(), b.channel());
            gram.push((ca.ell(), ca.m(), cb.ell(), cb.m(), g));
        }
    }
    let residuals = basis.iter().map(|y| residuals(n, y)).collect::<Result<Vec<_>>>()?;
    Ok(HarmonicsReport { n, ell_max, gram, gram_max_deviation: dev, residuals })
}

fn residuals(n: i32, y: &MonopoleHarmonic) -> Result<HarmonicResiduals> {
    let c = y.channel();
    let (ell, m) = (c.ell(), c.m());
    let casimir_value = (ell * (ell + 1)) as f64;
    let (mut l3, mut cas, mut comm) = (0.0f64, 0.0f64, 0.0f64);
    for (chart, theta, phi) in SAMPLE_POINTS {
        let op = AngularMomentum::new(n, chart).with_step(1e-3).with_richardson(true);
        let f = |t: f64, p: f64| y.value_unchecked(chart, t, p);
        let v = f(theta, phi);
        l3 = l3.max((op.apply(Component::L3, f, theta, phi)? - m as f64 * v).norm());
        cas = cas.max((op.casimir(f, theta, phi)? - casimir_value * v).norm());
        comm = comm.max(op.commutator_defect(f, theta, phi)?.norm());
    }
    let mut transition: f64 = 0.0;
    let lo = std::f64::consts::FRAC_PI_2 - CHART_HALF_WIDTH;
    for i in 1..10 {
        let theta = lo + 2.0 * CHART_HALF_WIDTH * i as f64 / 10.0;
        for j in 0..10 {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / 10.0 + 0.1;
            let plus = y.value(Chart::Plus, theta, phi)?;
            let moved = y.charted(Chart::Minus, theta, phi)?.transition(n)?;
            transition = transition.max((moved.value - plus).norm());
        }
    }
    Ok(HarmonicResiduals { ell, m, l3, casimir: cas, commutator: comm, transition })
}

fn harmonics(cfg: &RunConfig, out: &mut Output) -> Result<String> {
    let c = cfg.channel()?;
    let rep = harmonics_report(c.n(), c.ell())?;
    let gram = csv_table(
        &["ell_a", "m_a", "ell_b", "m_b", "re", "im"],
        rep.gram.iter().map(|(la, ma, lb, mb, g)| {
            vec![la.to_string(), ma.to_string(), lb.to_string(), mb.to_string(), format_f64(g.re), format_f64(g.im)]
        }),
    )?;
    out.write_text("harmonics_gram.csv", &gram)?;
    let res = csv_table(
        &["ell", "m", "l3", "casimir", "commutator", "transition"],
        rep.residuals.iter().map(|r| {
            vec![
                r.ell.to_string(),
                r.m.to_string(),
                format_f64(r.l3),
                format_f64(r.casimir),
                format_f64(r.commutator),
                format_f64(r.transition),
            ]
        }),
    )?;
    out.write_text("harmonics_residuals.csv", &res)?;
    out.write_json(
        "harmonics.json",
        &json!({
            "n": rep.n,
            "ell_max": rep.ell_max,
            "basis_size": rep.residuals.len(),
            "gram_max_deviation": rep.gram_max_deviation,
            "l3_max_residual": rep.l3_max(),
            "casimir_max_residual": rep.casimir_max(),
            "commutator_max_defect": rep.commutator_max(),
            "transition_max_error": rep.transition_max(),
        }),
    )?;
    Ok(format!(
        "harmonics n={} l<={}: {} harmonics, gram deviation {:.2e}, L3 {:.2e}, Casimir {:.2e}, transition {:.2e}",
        rep.n,
        rep.ell_max,
        rep.residuals.len(),
        rep.gram_max_deviation,
        rep.l3_max(),
        rep.casimir_max(),
        rep.transition_max()
    ))
}

fn transform(cfg: &RunConfig, out: &mut Output) -> Result<String> {
    let c = cfg.channel()?;
    let mu = c.mu();
    let rgrid = Arc::new(Grid::new(cfg.radial_grid())?);
    let kgrid: Arc<monopole::radial::SpectralGrid> = Arc::new(Grid::new(cfg.spectral_grid())?);
    let packet = cfg.packet()?;
    let (a, b) = packet.support();
    if a < kgrid.lo() || b > kgrid.hi() {
        return Err(Error::Hypothesis(format!(
            "packet support [{a}, {b}] is not inside the k-grid [{}, {}]",
            kgrid.lo(),
            kgrid.hi()
        )));
    }
    let kernel = BesselKernel::real_order(mu, rgrid, kgrid.clone())?;
    let sharp = packet.sample(kgrid);
    let psi = kernel.inverse(&sharp)?;
    let back = kernel.forward(&psi)?;
    let norm_defect = (psi.norm() - sharp.norm()).abs() / sharp.norm();
    let round_trip = back.distance(&sharp)? / sharp.norm();

    out.write_with("transform_radial.csv", |buf| write_state_csv(&psi, buf))?;
    out.write_with("transform_radial.json", |buf| write_state_header(&psi, Some(mu), buf))?;
    out.write_with("transform_spectral.csv", |buf| write_state_csv(&back, buf))?;
    out.write_with("transform_spectral.json", |buf| write_state_header(&back, Some(mu), buf))?;
    out.write_json(
        "transform.json",
        &json!({
            "n": c.n(),
            "ell": c.ell(),
            "mu": mu,
            "norm_defect": norm_defect,
            "round_trip_error": round_trip,
            "tolerance": cfg.tolerance.transform_defect,
        }),
    )?;
    let re: Vec<f64> = psi.values().iter().map(|v| v.re).collect();
    write_plot(
        cfg,
        out,
        "transform_radial.svg",
        LinePlot::new(format!("order-{mu:.4} transform of the bump"), "r", "psi(r)")
            .with(Series::new("Re psi", psi.grid().nodes(), &re)),
    )?;
    let worst = norm_defect.max(round_trip);
    if worst > cfg.tolerance.transform_defect {
        return Err(Error::Accuracy(format!(
            "transform defect {worst:.3e} exceeds {:.3e}",
            cfg.tolerance.transform_defect
        )));
    }
    Ok(format!("transform mu={mu:.6}: norm defect {norm_defect:.2e}, round trip {round_trip:.2e}"))
}

fn decay_plot(title: &str, y: &str, rep: &DecayReport) -> LinePlot {
    LinePlot::new(title, "t", y)
        .axes(Axis::Log, Axis::Log)
        .with(Series::new("sup", &rep.times, &rep.sup_values))
        .with(Series::new(format!("C t^{}", rep.target_exponent), &rep.times, &rep.bound()).dashed())
}

fn evolve(cfg: &RunConfig, out: &mut Output) -> Result<String> {
    let c = cfg.channel()?;
    let ell = c.ell();
    let times = cfg.schedule(&default_times())?;
    let sharp = probe(&cfg.packet()?)?;
    let (fit_lo, fit_hi) = (cfg.time.t_fit_min, cfg.time.t_fit_max);
    let sup = supnorm_decay(ell, &sharp, &times)?;
    let sup = DecayReport::from_series(sup.times, sup.sup_values, sup.target_exponent, fit_lo, fit_hi);
    let opts = DecayOptions { t_fit_min: fit_lo, t_fit_max: fit_hi, ..Default::default() };
    let small = small_r_decay_with(ell, &sharp, &times, 3, &opts)?;
    let order = vanishing_order(ell, &sharp, 0.0)?;

    out.write_with("evolve_supnorm.csv", |buf| sup.write_csv(buf))?;
    out.write_with("evolve_small_r.csv", |buf| small.write_csv(buf))?;
    out.write_json(
        "evolve.json",
        &json!({
            "ell": ell,
            "supnorm": sup.summary_json(),
            "small_r": small.summary_json(),
            "vanishing_order": order,
        }),
    )?;
    write_plot(cfg, out, "evolve_supnorm.svg", decay_plot("sup-norm decay", "sup |psi_t|", &sup))?;
    write_plot(cfg, out, "evolve_small_r.svg", decay_plot("small-r decay", "sup_{r<=1} |psi_t| / r^l", &small))?;
    let fmt = |p: Option<f64>| p.map_or("n/a".to_string(), |p| format!("{p:.3}"));
    Ok(format!(
        "evolve l={ell}: sup-norm exponent {}, small-r exponent {}, vanishing order {order:.3}",
        fmt(sup.fitted_exponent),
        fmt(small.fitted_exponent)
    ))
}

fn cook_plot(title: &str, s: &CookSeries) -> LinePlot {
    LinePlot::new(title, "t", "integrand")
        .axes(Axis::Log, Axis::Log)
        .with(Series::new("total", &s.times, &s.values))
        .with(Series::new("r <= 1", &s.times, &s.v1_values))
        .with(Series::new("r > 1", &s.times, &s.v2_values))
}

fn cook_summary(s: &CookSeries) -> String {
    let fmt = |p: Option<f64>| p.map_or("n/a".to_string(), |p| format!("{p:.3}"));
    format!(
        "exponents total {}, v1 {}, v2 {}",
        fmt(s.total_exponent),
        fmt(s.v1_exponent),
        fmt(s.v2_exponent)
    )
}

fn cook(cfg: &RunConfig, out: &mut Output) -> Result<String> {
    let times = cfg.schedule(&default_times())?;
    let c = cfg.channel()?;
    let sharp = probe(&cfg.packet()?)?;
    let series = monopole::scattering::cook_series(c, &sharp, &times, cfg.time.t_fit_min, cfg.time.t_fit_max)?;
    out.write_with("cook.csv", |buf| series.write_csv(buf))?;
    out.write_json("cook.json", &series)?;
    write_plot(cfg, out, "cook.svg", cook_plot("Cook integrand", &series))?;
    Ok(format!("cook n={} l={}: {}", c.n(), c.ell(), cook_summary(&series)))
}

fn waveop(cfg: &RunConfig, out: &mut Output) -> Result<String> {
    let c = cfg.channel()?;
    let schedule = cfg.schedule(&DEFAULT_SCHEDULE)?;
    let sharp = probe(&cfg.packet()?)?;
    let t_top = *schedule.last().expect("schedule is non-empty");
    let op = WaveOperator::new(c, &sharp, t_top)?;
    let rows = defect_table(&op, &schedule)?;
    let Some(&(t_last, _)) = rows.last() else {
        return Err(Error::Config("time schedule has no pair (T, 2T)".into()));
    };
    let res = op.result(t_last)?;
    let summary = res.summary();
    out.write_with("waveop_defects.csv", |buf| write_defect_csv(&rows, buf))?;
    out.write_json(
        "waveop.json",
        &json!({
            "summary": summary,
            "psi_norm": res.psi_norm,
            "threshold": cfg.tolerance.convergence,
            "converged": summary.relative_defect <= cfg.tolerance.convergence,
            "defects": rows.iter().map(|(t, d)| json!({"t": t, "defect": d, "relative": d / res.psi_norm})).collect::<Vec<_>>(),
        }),
    )?;
    let (ts, ds): (Vec<f64>, Vec<f64>) = rows.iter().map(|(t, d)| (*t, d / res.psi_norm)).unzip();
    write_plot(
        cfg,
        out,
        "waveop.svg",
        LinePlot::new("Cauchy defect", "T", "defect(T, 2T) / |psi|")
            .axes(Axis::Log, Axis::Log)
            .with(Series::new("defect", &ts, &ds)),
    )?;
    res.check_converged(cfg.tolerance.convergence)?;
    Ok(format!(
        "waveop n={} l={}: defect({t_last}, {}) = {:.3e} |psi|, phase estimate {:.6}",
        c.n(),
        c.ell(),
        2.0 * t_last,
        summary.relative_defect,
        summary.phase_shift_estimate
    ))
}

fn phaseshift(cfg: &RunConfig, out: &mut Output) -> Result<String> {
    let c = cfg.channel()?;
    let opts = LongTimeOptions {
        t_max: cfg.time.t_max,
        packet: cfg.explicit_packet()?,
        threshold: cfg.tolerance.convergence,
    };
    let am = phase_shift_asymptotic(c)?;
    let lt = phase_shift_long_time(c, &opts)?;
    let row = PhaseRow {
        n: c.n(),
        ell: c.ell(),
        delta_long_time: lt.delta,
        delta_asymptotic: am.delta,
        defect: lt.defect,
    };
    let gap = phase_distance(lt.delta, am.delta);
    out.write_with("phaseshift.csv", |buf| write_phase_csv(std::slice::from_ref(&row), buf))?;
    let kcsv = csv_table(
        &["k", "delta"],
        lt.k_resolved.iter().map(|(k, d)| vec![format_f64(*k), format_f64(*d)]),
    )?;
    out.write_text("phaseshift_k.csv", &kcsv)?;
    out.write_json(
        "phaseshift.json",
        &json!({
            "row": row,
            "winding": lt.winding,
            "k_spread": lt.k_spread(),
            "method_gap": gap,
            "agreement_tolerance": cfg.tolerance.phase_agreement,
        }),
    )?;
    let (ks, ds): (Vec<f64>, Vec<f64>) = lt.k_resolved.iter().copied().unzip();
    let flat = vec![am.delta; ks.len()];
    write_plot(
        cfg,
        out,
        "phaseshift.svg",
        LinePlot::new(format!("phase shift n={} l={}", c.n(), c.ell()), "k", "delta")
            .with(Series::new("long time", &ks, &ds))
            .with(Series::new("asymptotic", &ks, &flat).dashed()),
    )?;
    if gap > cfg.tolerance.phase_agreement {
        return Err(Error::Accuracy(format!(
            "phase extractions disagree: long time {:.6}, asymptotic {:.6}",
            lt.delta, am.delta
        )));
    }
    Ok(format!(
        "phaseshift n={} l={}: delta long time {:.6}, asymptotic {:.6}, defect {:.2e}",
        c.n(),
        c.ell(),
        lt.delta,
        am.delta,
        lt.defect
    ))
}

fn perturb(cfg: &RunConfig, out: &mut Output) -> Result<String> {
    let c = cfg.channel()?;
    let spec = cfg.potential()?;
    let t_max = cfg.time.t_max;
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::Config(format!("t_max = {t_max} must be positive")));
    }
    let times = cfg.schedule(&default_times())?;
    let packet = cfg.packet()?;
    let sharp = probe(&packet)?;
    let grids = monopole::dynamics::horizon_grids(t_max, packet.support())?;
    let report = check_potential(&spec, c, &grids.rgrid);
    out.write_json("perturb_report.json", &report)?;
    if !report.usable() {
        return Err(Error::Refused(report.failures().join("; ")));
    }
    let op = PerturbedWaveOperator::new(c, &spec, &sharp, t_max)?;
    let t = 0.5 * t_max;
    let res = op.result(t)?;
    let points = times.iter().map(|&s| op.cook_point(s)).collect::<Result<Vec<_>>>()?;
    let series = CookSeries::from_points(c, &points, cfg.time.t_fit_min, cfg.time.t_fit_max);
    out.write_with("perturb_cook.csv", |buf| series.write_csv(buf))?;
    out.write_json(
        "perturb.json",
        &json!({
            "waveop": res.summary(),
            "psi_norm": res.psi_norm,
            "threshold": cfg.tolerance.perturbed_convergence,
            "cook": series,
        }),
    )?;
    write_plot(cfg, out, "perturb_cook.svg", cook_plot("combined Cook integrand", &series))?;
    res.check_converged(cfg.tolerance.perturbed_convergence)?;
    Ok(format!(
        "perturb {} n={} l={}: defect({t}, {t_max}) = {:.3e} |psi|, {}",
        cfg.potential.family,
        c.n(),
        c.ell(),
        res.relative_defect(),
        cook_summary(&series)
    ))
}
