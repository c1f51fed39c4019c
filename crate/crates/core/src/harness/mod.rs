//! Batch drivers behind the command-line tool: table verification against
//! the shipped fixtures, parameter-grid sweeps and single-run reports.

pub mod drivers;
pub mod fixtures;
pub mod sweep;
pub mod tables;

use crate::error::{Error, Result};

/// Process exit codes shared by every command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Certified = 0,
    Error = 1,
    Inconclusive = 2,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// Environment variable capping the worker pool size.
pub const THREADS_VAR: &str = "GARSIA_THREADS";

/// Worker pool sized by `GARSIA_THREADS` when set, else by rayon.
pub fn worker_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidGrid(format!("{THREADS_VAR}={v:?} is not a count")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| Error::Io(format!("cannot start worker pool: {e}")))
}

/// `x` with nine significant digits in plain decimal notation.
pub fn format_sig9(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.00000000".into();
    }
    // the exponent after rounding to nine digits, so 9.9999999999 -> 10.0000000
    let sci = format!("{x:.8e}");
    let exp: i32 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .expect("scientific format has an exponent");
    let decimals = (8 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}
