use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Interpolation used between the rows of a tabulated potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    Linear,
    /// Natural cubic spline.
    Cubic,
}

/// Spherically symmetric potentials `V(r)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PotentialFamily {
    Zero,
    Constant { value: f64 },
    /// `amplitude * exp(-rate * r)`.
    Exponential { amplitude: f64, rate: f64 },
    /// `amplitude * exp(-(r / width)^2)`.
    Gaussian { amplitude: f64, width: f64 },
    /// `amplitude * r^exponent` on `[r_lo, r_hi]`, zero elsewhere; `r_hi = None`
    /// leaves the power untruncated.
    Power { amplitude: f64, exponent: f64, r_lo: f64, r_hi: Option<f64> },
    /// Samples `(r, v)`. Below the first radius the first value is held; beyond
    /// the last radius the potential is zero.
    Table { r: Vec<f64>, v: Vec<f64>, interpolation: Interpolation },
}

/// Properties the caller claims for a potential. Each flag that is set must be
/// confirmed by [`check_potential`](super::check_potential).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeclaredClass {
    #[serde(default)]
    pub bounded: bool,
    #[serde(default)]
    pub v1_lower_bound_ok: bool,
    #[serde(default)]
    pub v1_growth_ok: bool,
    #[serde(default)]
    pub v2_square_integrable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub family: PotentialFamily,
    #[serde(default)]
    pub declared: DeclaredClass,
    /// Second derivatives at the table nodes when `family` is a cubic table.
    #[serde(skip)]
    spline: Option<Vec<f64>>,
}

impl PotentialSpec {
    pub fn new(family: PotentialFamily) -> Result<Self> {
        let spline = match &family {
            PotentialFamily::Table { r, v, interpolation } => {
                validate_table(r, v)?;
                (*interpolation == Interpolation::Cubic).then(|| natural_spline(r, v))
            }
            PotentialFamily::Exponential { rate, .. } if !(*rate > 0.0) => {
                return Err(Error::Config(format!("exponential rate {rate} must be positive")));
            }
            PotentialFamily::Gaussian { width, .. } if !(*width > 0.0) => {
                return Err(Error::Config(format!("gaussian width {width} must be positive")));
            }
            PotentialFamily::Power { r_lo, r_hi, .. } if *r_lo < 0.0 || r_hi.is_some_and(|h| h <= *r_lo) => {
                return Err(Error::Config(format!("power window [{r_lo}, {r_hi:?}] is empty")));
            }
            _ => None,
        };
        Ok(Self { family, declared: DeclaredClass::default(), spline })
    }

    pub fn with_declared(mut self, declared: DeclaredClass) -> Self {
        self.declared = declared;
        self
    }

    pub fn zero() -> Self {
        Self::new(PotentialFamily::Zero).expect("zero potential")
    }

    pub fn constant(value: f64) -> Self {
        Self::new(PotentialFamily::Constant { value }).expect("constant potential")
    }

    pub fn exponential(amplitude: f64, rate: f64) -> Result<Self> {
        Self::new(PotentialFamily::Exponential { amplitude, rate })
    }

    pub fn gaussian(amplitude: f64, width: f64) -> Result<Self> {
        Self::new(PotentialFamily::Gaussian { amplitude, width })
    }

    pub fn power(amplitude: f64, exponent: f64, r_lo: f64, r_hi: Option<f64>) -> Result<Self> {
        Self::new(PotentialFamily::Power { amplitude, exponent, r_lo, r_hi })
    }

    pub fn table(r: Vec<f64>, v: Vec<f64>, interpolation: Interpolation) -> Result<Self> {
        Self::new(PotentialFamily::Table { r, v, interpolation })
    }

    /// Reads a two-column CSV table with a header row (`r,V`).
    pub fn from_table_csv<R: Read>(reader: R, interpolation: Interpolation) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let (mut r, mut v) = (Vec::new(), Vec::new());
        for rec in rdr.records() {
            let rec = rec?;
            if rec.len() < 2 {
                return Err(Error::Config("potential table rows need two columns".into()));
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| Error::Config(format!("bad number {s:?} in potential table: {e}")))
            };
            r.push(parse(&rec[0])?);
            v.push(parse(&rec[1])?);
        }
        Self::table(r, v, interpolation)
    }

    /// Tabulated potentials are only piecewise smooth in general.
    pub fn is_tabulated(&self) -> bool {
        matches!(self.family, PotentialFamily::Table { .. })
    }

    /// Re-derives cached data after deserialization.
    pub fn rebuild(self) -> Result<Self> {
        Ok(Self::new(self.family)?.with_declared(self.declared))
    }

    pub fn eval(&self, r: f64) -> f64 {
        match &self.family {
            PotentialFamily::Zero => 0.0,
            PotentialFamily::Constant { value } => *value,
            PotentialFamily::Exponential { amplitude, rate } => amplitude * (-rate * r).exp(),
            PotentialFamily::Gaussian { amplitude, width } => amplitude * (-(r / width).powi(2)).exp(),
            PotentialFamily::Power { amplitude, exponent, r_lo, r_hi } => {
                if r >= *r_lo && r_hi.map_or(true, |h| r <= h) {
                    amplitude * r.powf(*exponent)
                } else {
                    0.0
                }
            }
            PotentialFamily::Table { r: rs, v, interpolation } => {
                let last = rs.len() - 1;
                if r <= rs[0] {
                    return v[0];
                }
                if r > rs[last] {
                    return 0.0;
                }
                let i = rs.partition_point(|x| *x < r).clamp(1, last) - 1;
                let h = rs[i + 1] - rs[i];
                let a = (rs[i + 1] - r) / h;
                let b = 1.0 - a;
                let lin = a * v[i] + b * v[i + 1];
                match (interpolation, &self.spline) {
                    (Interpolation::Cubic, Some(m)) => {
                        lin + ((a * a * a - a) * m[i] + (b * b * b - b) * m[i + 1]) * h * h / 6.0
                    }
                    _ => lin,
                }
            }
        }
    }

    /// Is `V` identically zero?
    pub fn is_zero(&self) -> bool {
        match &self.family {
            PotentialFamily::Zero => true,
            PotentialFamily::Constant { value } => *value == 0.0,
            PotentialFamily::Exponential { amplitude, .. }
            | PotentialFamily::Gaussian { amplitude, .. }
            | PotentialFamily::Power { amplitude, .. } => *amplitude == 0.0,
            PotentialFamily::Table { v, .. } => v.iter().all(|x| *x == 0.0),
        }
    }
}

fn validate_table(r: &[f64], v: &[f64]) -> Result<()> {
    if r.len() < 2 || r.len() != v.len() {
        return Err(Error::Config("potential table needs at least two (r, V) rows".into()));
    }
    if r.iter().chain(v).any(|x| !x.is_finite()) || r[0] <= 0.0 {
        return Err(Error::Config("potential table must hold finite values at r > 0".into()));
    }
    if r.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("potential table radii must increase strictly".into()));
    }
    Ok(())
}

/// Second derivatives of the natural cubic spline through `(x, y)`.
fn natural_spline(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    // Thomas algorithm on the interior equations.
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = x[i] - x[i - 1];
        let h1 = x[i + 1] - x[i];
        let rhs = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
        let diag = 2.0 * (h0 + h1) - h0 * c[i - 1];
        c[i] = h1 / diag;
        d[i] = (rhs - h0 * d[i - 1]) / diag;
    }
    for i in (1..n - 1).rev() {
        m[i] = d[i] - c[i] * m[i + 1];
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_evaluate() {
        assert_eq!(PotentialSpec::zero().eval(0.3), 0.0);
        assert_eq!(PotentialSpec::constant(0.7).eval(10.0), 0.7);
        let e = PotentialSpec::exponential(2.0, 0.5).unwrap();
        assert!((e.eval(2.0) - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
        let p = PotentialSpec::power(-0.5, -2.0, 0.0, Some(1.0)).unwrap();
        assert_eq!(p.eval(0.5), -2.0);
        assert_eq!(p.eval(1.5), 0.0);
        assert!(PotentialSpec::exponential(1.0, 0.0).is_err());
        assert!(PotentialSpec::power(1.0, -1.0, 2.0, Some(1.0)).is_err());
    }

    #[test]
    fn cubic_table_reproduces_cubic_interior() {
        let r: Vec<f64> = (1..=40).map(|i| 0.25 * i as f64).collect();
        let v: Vec<f64> = r.iter().map(|x| (-x).exp()).collect();
        let t = PotentialSpec::table(r, v, Interpolation::Cubic).unwrap();
        for x in [1.1, 3.3, 6.05] {
            assert!((t.eval(x) - (-x as f64).exp()).abs() < 2e-4, "{x}");
        }
        assert_eq!(t.eval(11.0), 0.0);
        assert_eq!(t.eval(0.1), t.eval(0.25));
    }

    #[test]
    fn table_csv_and_serde_round_trip() {
        let csv = "r,V\n0.5, 1.0\n1.0,0.5\n2.0,0.25\n";
        let t = PotentialSpec::from_table_csv(csv.as_bytes(), Interpolation::Linear).unwrap();
        assert!((t.eval(0.75) - 0.75).abs() < 1e-15);
        let json = serde_json::to_string(&t).unwrap();
        let back: PotentialSpec = serde_json::from_str::<PotentialSpec>(&json).unwrap().rebuild().unwrap();
        assert_eq!(back, t);
        assert!(PotentialSpec::from_table_csv("r,V\n1,2\n0.5,1\n".as_bytes(), Interpolation::Linear).is_err());
    }
}
