//! Grid scans of the two-parameter space of real pairs `(beta1, beta2)`.

use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::depth::best_bound_at;
use crate::error::{Error, Result};
use crate::geometry::{Generator, TailDepth};
use crate::harness::{format_sig9, worker_pool};

/// `lo:hi:count`, sampled at the centres of `count` equal cells.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridRange {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl GridRange {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidGrid("count must be at least 1".into()));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidGrid(format!("range {lo}:{hi} is empty")));
        }
        Ok(GridRange { lo, hi, count })
    }

    pub fn center(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * (self.hi - self.lo) / self.count as f64
    }
}

impl FromStr for GridRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let bad = || Error::InvalidGrid(format!("expected lo:hi:count, got {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        GridRange::new(
            parts[0].parse().map_err(|_| bad())?,
            parts[1].parse().map_err(|_| bad())?,
            parts[2].parse().map_err(|_| bad())?,
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub beta1: GridRange,
    /// Magnitudes of `beta2`; negated when `negative` is set.
    pub beta2: GridRange,
    pub negative: bool,
    pub n_min: usize,
    pub n_max: usize,
    pub tail: TailDepth,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepCell {
    pub beta1: f64,
    pub beta2: f64,
    /// Column and row in the grid; row 0 is the smallest `beta2`.
    pub column: usize,
    pub row: usize,
    /// First `n` with ratio above 1, or 0.
    pub first_proving_n: usize,
    pub best_ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepGrid {
    pub spec: SweepSpec,
    /// Cells in row-major order (`beta1` fastest); diagonal cells omitted.
    pub cells: Vec<SweepCell>,
}

fn within_unit_to_two(r: &GridRange, name: &str) -> Result<()> {
    if !(r.lo >= 1.0 && r.hi <= 2.0) {
        return Err(Error::InvalidGrid(format!(
            "{name} range {}:{} must lie within [1, 2]",
            r.lo, r.hi
        )));
    }
    Ok(())
}

impl SweepSpec {
    fn validate(&self) -> Result<()> {
        within_unit_to_two(&self.beta1, "beta1")?;
        within_unit_to_two(&self.beta2, "beta2 magnitude")?;
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(Error::InvalidGrid(format!(
                "n range {}..={} is empty",
                self.n_min, self.n_max
            )));
        }
        Ok(())
    }

    pub fn beta2_at(&self, row: usize) -> f64 {
        let m = self.beta2.center(row);
        if self.negative {
            -m
        } else {
            m
        }
    }

    /// Grid positions off the diagonal, row-major.
    fn positions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.beta1.count * self.beta2.count);
        for row in 0..self.beta2.count {
            for column in 0..self.beta1.count {
                if self.beta1.center(column) != self.beta2_at(row) {
                    out.push((column, row));
                }
            }
        }
        out
    }
}

pub fn evaluate_cell(spec: &SweepSpec, column: usize, row: usize) -> Result<SweepCell> {
    let beta1 = spec.beta1.center(column);
    let beta2 = spec.beta2_at(row);
    let scan = best_bound_at(
        &[Generator::real(beta1), Generator::real(beta2)],
        spec.n_min,
        spec.n_max,
        spec.tail,
    )?;
    Ok(SweepCell {
        beta1,
        beta2,
        column,
        row,
        first_proving_n: scan.first_proving_n.unwrap_or(0),
        best_ratio: scan.best.ratio,
    })
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepGrid> {
    spec.validate()?;
    let positions = spec.positions();
    if positions.is_empty() {
        return Err(Error::InvalidGrid("every cell lies on the diagonal".into()));
    }
    let pool = worker_pool()?;
    let cells = pool.install(|| {
        positions
            .par_iter()
            .map(|&(c, r)| evaluate_cell(spec, c, r))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(SweepGrid {
        spec: spec.clone(),
        cells,
    })
}

pub const CSV_HEADER: [&str; 4] = ["beta1", "beta2", "first_proving_n", "best_ratio"];

pub fn write_csv<W: Write>(grid: &SweepGrid, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for c in &grid.cells {
        w.write_record([
            format_sig9(c.beta1),
            format_sig9(c.beta2),
            c.first_proving_n.to_string(),
            format_sig9(c.best_ratio),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Plain PGM: one pixel per cell holding `first_proving_n` (0 for unproven
/// or diagonal cells), `beta1` increasing rightward and `beta2` upward.
pub fn write_pgm<W: Write>(grid: &SweepGrid, mut out: W) -> Result<()> {
    let width = grid.spec.beta1.count;
    let height = grid.spec.beta2.count;
    let mut pixels = vec![0usize; width * height];
    for c in &grid.cells {
        pixels[c.row * width + c.column] = c.first_proving_n;
    }
    // beta2 increases with the row index; with -beta2 magnitudes it
    // decreases, so the top row is whichever end holds the largest value
    let rows: Vec<usize> = if grid.spec.negative {
        (0..height).collect()
    } else {
        (0..height).rev().collect()
    };
    writeln!(out, "P2")?;
    writeln!(out, "{width} {height}")?;
    writeln!(out, "{}", grid.spec.n_max)?;
    for r in rows {
        let line: Vec<String> = pixels[r * width..(r + 1) * width]
            .iter()
            .map(usize::to_string)
            .collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}
