//! CSV and JSON serialization of grids and states.
//!
//! A state is stored as a CSV table `node,weight,re,im` and a JSON header
//! holding the grid layout, so the grid can be rebuilt exactly on reading.

use std::io::{Read, Write};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::radial::{Grid, GridSpec, Radial, Spectral, State};
use crate::{Error, Result};

/// Names the variable of a grid domain in serialized headers.
pub trait Domain {
    const NAME: &'static str;
}

impl Domain for Radial {
    const NAME: &'static str = "r";
}

impl Domain for Spectral {
    const NAME: &'static str = "k";
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateHeader {
    /// `"r"` or `"k"`.
    pub domain: String,
    /// Transform order the data refers to, when meaningful.
    pub mu: Option<f64>,
    pub lo: f64,
    pub hi: f64,
    pub grid: GridSpec,
    pub len: usize,
}

impl StateHeader {
    pub fn for_state<D: Domain>(state: &State<D>, mu: Option<f64>) -> Self {
        let g = state.grid();
        Self { domain: D::NAME.into(), mu, lo: g.lo(), hi: g.hi(), grid: *g.spec(), len: g.len() }
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_f64(x: f64) -> String {
    format!("{x:e}")
}

pub fn write_grid_csv<D, W: Write>(grid: &Grid<D>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["node", "weight"])?;
    for (x, wt) in grid.nodes().iter().zip(grid.weights()) {
        w.write_record([format_f64(*x), format_f64(*wt)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_state_csv<D, W: Write>(state: &State<D>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["node", "weight", "re", "im"])?;
    let g = state.grid();
    for ((x, wt), v) in g.nodes().iter().zip(g.weights()).zip(state.values()) {
        w.write_record([format_f64(*x), format_f64(*wt), format_f64(v.re), format_f64(v.im)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_state_header<D: Domain, W: Write>(state: &State<D>, mu: Option<f64>, out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, &StateHeader::for_state(state, mu))?;
    Ok(())
}

/// Reads a state from its header and CSV table. The nodes in the table must
/// match the grid described by the header.
pub fn read_state<D: Domain, H: Read, C: Read>(header: H, table: C) -> Result<(State<D>, StateHeader)> {
    let head: StateHeader = serde_json::from_reader(header)?;
    if head.domain != D::NAME {
        return Err(Error::Config(format!("expected a {}-grid state, found {:?}", D::NAME, head.domain)));
    }
    let grid = Arc::new(Grid::<D>::new(head.grid)?);
    let mut rdr = csv::Reader::from_reader(table);
    let mut values = Vec::with_capacity(grid.len());
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let field = |j: usize| -> Result<f64> {
            rec.get(j)
                .ok_or_else(|| Error::Config(format!("row {i}: missing column {j}")))?
                .trim()
                .parse()
                .map_err(|e| Error::Config(format!("row {i}: {e}")))
        };
        let node = field(0)?;
        let expected = *grid.nodes().get(i).ok_or_else(|| Error::Config("more rows than grid nodes".into()))?;
        if (node - expected).abs() > 1e-12 * expected.abs().max(1.0) {
            return Err(Error::Config(format!("row {i}: node {node} does not match grid node {expected}")));
        }
        values.push(Complex64::new(field(2)?, field(3)?));
    }
    let state = State::new(grid, values)?;
    Ok((state, head))
}
