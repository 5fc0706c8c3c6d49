//! Regular grids of strike probabilities (or probability differences),
//! sampled at cell centers.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::zone::ZoneParams;

/// Corner label of the grid CSV header row.
pub const CSV_CORNER: &str = "y\\x";

const ALIGN_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("invalid extent: {0}")]
    InvalidExtent(String),
    #[error("grids differ in extent or step")]
    GridMismatch,
    #[error("malformed grid csv: {0}")]
    Malformed(String),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extent {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Default for Extent {
    /// Covers the rule-book zone with a margin of at least half a foot.
    fn default() -> Self {
        Extent {
            x_min: -1.5,
            x_max: 1.5,
            y_min: 1.0,
            y_max: 4.0,
        }
    }
}

pub const DEFAULT_STEP: f64 = 0.05;

fn cells(lo: f64, hi: f64, step: f64, axis: &str) -> Result<usize, GridError> {
    let span = hi - lo;
    if !(span > 0.0) || !span.is_finite() {
        return Err(GridError::InvalidExtent(format!(
            "{axis} range [{lo}, {hi}] is degenerate"
        )));
    }
    let n = (span / step).round();
    if n < 1.0 || (n * step - span).abs() > ALIGN_TOL * span.max(1.0) {
        return Err(GridError::InvalidExtent(format!(
            "{axis} span {span} is not a whole number of steps of {step}"
        )));
    }
    Ok(n as usize)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityGrid {
    pub extent: Extent,
    pub step: f64,
    pub nx: usize,
    pub ny: usize,
    /// Row-major, `ny` rows of `nx` values; row 0 is the lowest `y`.
    pub values: Vec<f64>,
}

impl ProbabilityGrid {
    pub fn x_center(&self, j: usize) -> f64 {
        self.extent.x_min + (j as f64 + 0.5) * self.step
    }

    pub fn y_center(&self, i: usize) -> f64 {
        self.extent.y_min + (i as f64 + 0.5) * self.step
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.nx + j]
    }

    pub fn rows(&self) -> std::slice::Chunks<'_, f64> {
        self.values.chunks(self.nx)
    }

    pub fn same_layout(&self, other: &ProbabilityGrid) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= ALIGN_TOL * a.abs().max(b.abs()).max(1.0);
        self.nx == other.nx
            && self.ny == other.ny
            && close(self.step, other.step)
            && close(self.extent.x_min, other.extent.x_min)
            && close(self.extent.x_max, other.extent.x_max)
            && close(self.extent.y_min, other.extent.y_min)
            && close(self.extent.y_max, other.extent.y_max)
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    /// Header row holds x centers, first column holds y centers.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), GridError> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec![CSV_CORNER.to_string()];
        header.extend((0..self.nx).map(|j| self.x_center(j).to_string()));
        w.write_record(&header)?;
        for (i, row) in self.rows().enumerate() {
            let mut rec = vec![self.y_center(i).to_string()];
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self, GridError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(reader);
        let header = rdr.headers()?.clone();
        if header.get(0) != Some(CSV_CORNER) {
            return Err(GridError::Malformed(format!(
                "header must start with `{CSV_CORNER}`"
            )));
        }
        let parse = |s: &str| -> Result<f64, GridError> {
            s.trim()
                .parse()
                .map_err(|_| GridError::Malformed(format!("`{s}` is not a number")))
        };
        let xs = header
            .iter()
            .skip(1)
            .map(parse)
            .collect::<Result<Vec<_>, _>>()?;
        let mut ys = Vec::new();
        let mut values = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            if rec.len() != xs.len() + 1 {
                return Err(GridError::Malformed("ragged row".into()));
            }
            ys.push(parse(&rec[0])?);
            for v in rec.iter().skip(1) {
                values.push(parse(v)?);
            }
        }
        if xs.is_empty() || ys.is_empty() {
            return Err(GridError::Malformed("grid has no cells".into()));
        }
        let step = if xs.len() > 1 {
            xs[1] - xs[0]
        } else if ys.len() > 1 {
            ys[1] - ys[0]
        } else {
            return Err(GridError::Malformed(
                "cannot infer step from a 1x1 grid".into(),
            ));
        };
        let extent = Extent {
            x_min: xs[0] - step / 2.0,
            x_max: xs[xs.len() - 1] + step / 2.0,
            y_min: ys[0] - step / 2.0,
            y_max: ys[ys.len() - 1] + step / 2.0,
        };
        Ok(ProbabilityGrid {
            extent,
            step,
            nx: xs.len(),
            ny: ys.len(),
            values,
        })
    }
}

/// Strike probability at every cell center of `extent`.
pub fn probability_grid(
    p: &ZoneParams,
    extent: Extent,
    step: f64,
) -> Result<ProbabilityGrid, GridError> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(GridError::InvalidExtent(format!(
            "step {step} must be positive"
        )));
    }
    let nx = cells(extent.x_min, extent.x_max, step, "x")?;
    let ny = cells(extent.y_min, extent.y_max, step, "y")?;
    let mut grid = ProbabilityGrid {
        extent,
        step,
        nx,
        ny,
        values: vec![0.0; nx * ny],
    };
    let xs: Vec<f64> = (0..nx).map(|j| grid.x_center(j)).collect();
    let ys: Vec<f64> = (0..ny).map(|i| grid.y_center(i)).collect();
    grid.values
        .par_chunks_mut(nx)
        .zip(ys.par_iter())
        .for_each(|(row, &y)| {
            for (v, &x) in row.iter_mut().zip(&xs) {
                *v = p.strike_probability(x, y);
            }
        });
    Ok(grid)
}

/// Elementwise `a - b`.
pub fn grid_difference(
    a: &ProbabilityGrid,
    b: &ProbabilityGrid,
) -> Result<ProbabilityGrid, GridError> {
    if !a.same_layout(b) {
        return Err(GridError::GridMismatch);
    }
    Ok(ProbabilityGrid {
        values: a.values.iter().zip(&b.values).map(|(x, y)| x - y).collect(),
        ..a.clone()
    })
}
