use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use monopole::dynamics::Wavepacket;
use monopole::perturbation::{Interpolation, PotentialSpec};
use monopole::radial::{GridSpec, DEFAULT_K_MAX, DEFAULT_K_MIN, DEFAULT_R_MAX, DEFAULT_R_MIN};
use monopole::{Channel, Error, Result};

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "MONOPOLE_SCATTER_OUT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Harmonics,
    Transform,
    Evolve,
    Cook,
    Waveop,
    Phaseshift,
    Perturb,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Harmonics => "harmonics",
            Command::Transform => "transform",
            Command::Evolve => "evolve",
            Command::Cook => "cook",
            Command::Waveop => "waveop",
            Command::Phaseshift => "phaseshift",
            Command::Perturb => "perturb",
        }
    }
}

/// Full run configuration. Every field has a default; a config file only
/// needs the keys it changes.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    /// Output directory; falls back to `$MONOPOLE_SCATTER_OUT`, then `out`.
    pub output_dir: Option<PathBuf>,
    pub channel: ChannelConfig,
    pub radial: RadialConfig,
    pub spectral: SpectralConfig,
    pub packet: PacketConfig,
    pub time: TimeConfig,
    pub potential: PotentialConfig,
    pub tolerance: ToleranceConfig,
    pub plot: PlotConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelConfig {
    /// Monopole charge (default 1).
    pub n: i32,
    /// Angular momentum (default 1).
    pub ell: u32,
    /// Magnetic quantum number (default 0).
    pub m: i32,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        Self { n: 1, ell: 1, m: 0 }
    }
}

/// Radial grid for `transform` (default `[1e-3, 200]`, 100 graded panels of order 16).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RadialConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub r_panels: usize,
    pub r_order: usize,
    pub graded: bool,
}

impl Default for RadialConfig {
    fn default() -> Self {
        Self { r_min: DEFAULT_R_MIN, r_max: DEFAULT_R_MAX, r_panels: 100, r_order: 16, graded: true }
    }
}

/// Spectral grid for `transform` (default `[0.2, 6]`, 80 panels of order 16).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectralConfig {
    pub k_min: f64,
    pub k_max: f64,
    pub k_panels: usize,
    pub k_order: usize,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self { k_min: DEFAULT_K_MIN, k_max: DEFAULT_K_MAX, k_panels: 80, k_order: 16 }
    }
}

/// Standard bump; unset values default to `k0 = 2`, `width = 1`, except that
/// `phaseshift` then uses its own probe packet.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PacketConfig {
    pub k0: Option<f64>,
    pub width: Option<f64>,
}

/// Time parameters. An empty schedule selects the command's default schedule,
/// and every schedule is clipped to `(0, t_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeConfig {
    pub t_max: f64,
    pub schedule: Vec<f64>,
    pub t_fit_min: f64,
    pub t_fit_max: f64,
}

impl Default for TimeConfig {
    fn default() -> Self {
        Self { t_max: 80.0, schedule: Vec::new(), t_fit_min: 4.0, t_fit_max: 100.0 }
    }
}

/// Potential for `perturb`. `family` is one of `zero`, `constant`,
/// `exponential`, `gaussian`, `power`, `table` (default `exponential` with
/// amplitude 1 and rate 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PotentialConfig {
    pub family: String,
    pub amplitude: f64,
    pub rate: f64,
    pub v_width: f64,
    pub exponent: f64,
    pub r_lo: f64,
    pub r_hi: Option<f64>,
    pub value: f64,
    /// CSV file with header `r,V`; relative paths resolve against the config file.
    pub table: Option<PathBuf>,
    pub interpolation: Interpolation,
}

impl Default for PotentialConfig {
    fn default() -> Self {
        Self {
            family: "exponential".into(),
            amplitude: 1.0,
            rate: 1.0,
            v_width: 1.0,
            exponent: -1.0,
            r_lo: 0.0,
            r_hi: None,
            value: 0.0,
            table: None,
            interpolation: Interpolation::Linear,
        }
    }
}

/// Acceptance thresholds (defaults `1e-3`, `5e-3`, `1e-2`, `1e-6`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceConfig {
    /// Relative `defect(T, 2T)` accepted by `waveop` and `phaseshift`.
    pub convergence: f64,
    /// Relative `defect(T, 2T)` accepted by `perturb`.
    pub perturbed_convergence: f64,
    /// Agreement expected between the two phase extractions.
    pub phase_agreement: f64,
    /// Norm defect and round-trip error accepted by `transform`.
    pub transform_defect: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { convergence: 1e-3, perturbed_convergence: 5e-3, phase_agreement: 1e-2, transform_defect: 1e-6 }
    }
}

/// SVG output (default on, without timestamp metadata).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlotConfig {
    pub svg: bool,
    pub timestamp: bool,
}

impl Default for PlotConfig {
    fn default() -> Self {
        Self { svg: true, timestamp: false }
    }
}

/// Command-line flags; each mirrors the config key of the same name.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Run configuration file (TOML).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, visible_alias = "out")]
    pub output_dir: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<i32>,
    #[arg(long)]
    pub ell: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<i32>,
    #[arg(long)]
    pub r_min: Option<f64>,
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub r_panels: Option<usize>,
    #[arg(long)]
    pub r_order: Option<usize>,
    #[arg(long)]
    pub graded: Option<bool>,
    #[arg(long)]
    pub k_min: Option<f64>,
    #[arg(long)]
    pub k_max: Option<f64>,
    #[arg(long)]
    pub k_panels: Option<usize>,
    #[arg(long)]
    pub k_order: Option<usize>,
    #[arg(long)]
    pub k0: Option<f64>,
    #[arg(long)]
    pub width: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_max: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub schedule: Option<Vec<f64>>,
    #[arg(long)]
    pub t_fit_min: Option<f64>,
    #[arg(long)]
    pub t_fit_max: Option<f64>,
    #[arg(long, visible_alias = "potential")]
    pub family: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub amplitude: Option<f64>,
    #[arg(long)]
    pub rate: Option<f64>,
    #[arg(long)]
    pub v_width: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub exponent: Option<f64>,
    #[arg(long)]
    pub r_lo: Option<f64>,
    #[arg(long)]
    pub r_hi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub value: Option<f64>,
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long, value_parser = parse_interpolation)]
    pub interpolation: Option<Interpolation>,
    #[arg(long)]
    pub convergence: Option<f64>,
    #[arg(long)]
    pub perturbed_convergence: Option<f64>,
    #[arg(long)]
    pub phase_agreement: Option<f64>,
    #[arg(long)]
    pub transform_defect: Option<f64>,
    #[arg(long)]
    pub svg: Option<bool>,
    #[arg(long)]
    pub timestamp: Option<bool>,
}

fn parse_interpolation(s: &str) -> std::result::Result<Interpolation, String> {
    match s {
        "linear" => Ok(Interpolation::Linear),
        "cubic" => Ok(Interpolation::Cubic),
        _ => Err(format!("unknown interpolation {s:?} (linear, cubic)")),
    }
}

macro_rules! apply {
    ($src:expr, $dst:expr, $($field:ident),*) => {
        $(if let Some(v) = $src.$field.clone() { $dst.$field = v; })*
    };
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(format!("config: {e}")))
    }

    /// Reads `path`; relative table paths are resolved against its directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        if let (Some(t), Some(dir)) = (&cfg.potential.table, path.parent()) {
            if t.is_relative() {
                cfg.potential.table = Some(dir.join(t));
            }
        }
        Ok(cfg)
    }

    /// Effective configuration: defaults, then the config file, then flags.
    pub fn resolve(command: Command, flags: &Overrides) -> Result<Self> {
        let mut cfg = match &flags.config {
            Some(path) => Self::from_file(path)?,
            None => Self::default(),
        };
        if let Some(file_cmd) = cfg.command {
            if file_cmd != command {
                return Err(Error::Config(format!(
                    "config file is for {:?} but {:?} was requested",
                    file_cmd.name(),
                    command.name()
                )));
            }
        }
        cfg.command = Some(command);
        if let Some(dir) = &flags.output_dir {
            cfg.output_dir = Some(dir.clone());
        }
        apply!(flags, cfg.channel, n, ell, m);
        apply!(flags, cfg.radial, r_min, r_max, r_panels, r_order, graded);
        apply!(flags, cfg.spectral, k_min, k_max, k_panels, k_order);
        if flags.k0.is_some() {
            cfg.packet.k0 = flags.k0;
        }
        if flags.width.is_some() {
            cfg.packet.width = flags.width;
        }
        apply!(flags, cfg.time, t_max, schedule, t_fit_min, t_fit_max);
        apply!(flags, cfg.potential, family, amplitude, rate, v_width, exponent, r_lo, value, interpolation);
        if flags.r_hi.is_some() {
            cfg.potential.r_hi = flags.r_hi;
        }
        if flags.table.is_some() {
            cfg.potential.table = flags.table.clone();
        }
        apply!(flags, cfg.tolerance, convergence, perturbed_convergence, phase_agreement, transform_defect);
        apply!(flags, cfg.plot, svg, timestamp);
        Ok(cfg)
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn channel(&self) -> Result<Channel> {
        Channel::new(self.channel.n, self.channel.ell, self.channel.m)
    }

    pub fn packet(&self) -> Result<Wavepacket> {
        Wavepacket::new(self.packet.k0.unwrap_or(2.0), self.packet.width.unwrap_or(1.0))
    }

    /// The packet only when one was configured explicitly.
    pub fn explicit_packet(&self) -> Result<Option<Wavepacket>> {
        if self.packet.k0.is_none() && self.packet.width.is_none() {
            Ok(None)
        } else {
            self.packet().map(Some)
        }
    }

    pub fn radial_grid(&self) -> GridSpec {
        let r = &self.radial;
        GridSpec::new(r.r_min, r.r_max, r.r_panels, r.r_order).graded(r.graded)
    }

    pub fn spectral_grid(&self) -> GridSpec {
        let k = &self.spectral;
        GridSpec::new(k.k_min, k.k_max, k.k_panels, k.k_order)
    }

    /// `time.schedule` (or `default`) clipped to `(0, t_max]`; empty is an error.
    pub fn schedule(&self, default: &[f64]) -> Result<Vec<f64>> {
        if !(self.time.t_max.is_finite()) {
            return Err(Error::Config(format!("t_max = {} is not finite", self.time.t_max)));
        }
        let base: &[f64] = if self.time.schedule.is_empty() { default } else { &self.time.schedule };
        let mut out: Vec<f64> = base.iter().copied().filter(|t| *t > 0.0 && *t <= self.time.t_max).collect();
        out.sort_by(f64::total_cmp);
        out.dedup();
        if out.is_empty() {
            return Err(Error::Config(format!("empty time schedule for t_max = {}", self.time.t_max)));
        }
        Ok(out)
    }

    pub fn potential(&self) -> Result<PotentialSpec> {
        let p = &self.potential;
        match p.family.as_str() {
            "zero" => Ok(PotentialSpec::zero()),
            "constant" => Ok(PotentialSpec::constant(p.value)),
            "exponential" => PotentialSpec::exponential(p.amplitude, p.rate),
            "gaussian" => PotentialSpec::gaussian(p.amplitude, p.v_width),
            "power" => PotentialSpec::power(p.amplitude, p.exponent, p.r_lo, p.r_hi),
            "table" => {
                let path = p.table.as_ref().ok_or_else(|| Error::Config("potential table path missing".into()))?;
                let file = std::fs::File::open(path)
                    .map_err(|e| Error::Config(format!("cannot open potential table {}: {e}", path.display())))?;
                PotentialSpec::from_table_csv(file, p.interpolation)
            }
            other => Err(Error::Config(format!("unknown potential family {other:?}"))),
        }
    }
}
