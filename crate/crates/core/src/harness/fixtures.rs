//! Reading the table fixture CSV.
//!
//! Schema: `table,coeffs,beta,expected_value,expected_n`, with `;` between
//! coefficients and `#` starting comment lines.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

/// The fixture file shipped with the crate.
pub const DEFAULT_FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/tables.csv");

#[derive(Clone, Debug, PartialEq)]
pub struct FixtureRow {
    /// 1-based data row, for messages.
    pub row: usize,
    pub table: u8,
    pub polynomial: IntPolynomial,
    pub beta: f64,
    pub expected_value: Option<f64>,
    pub expected_n: Option<usize>,
}

#[derive(Deserialize)]
struct RawRow {
    table: u8,
    coeffs: String,
    beta: f64,
    expected_value: Option<f64>,
    expected_n: Option<usize>,
}

pub fn parse_fixtures<R: std::io::Read>(reader: R) -> Result<Vec<FixtureRow>> {
    let mut csv = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows = Vec::new();
    for record in csv.deserialize::<RawRow>() {
        let raw = record.map_err(|e| Error::Fixture(e.to_string()))?;
        let row = rows.len() + 1;
        if !(1..=4).contains(&raw.table) {
            return Err(Error::Fixture(format!("row {row}: unknown table {}", raw.table)));
        }
        let polynomial = IntPolynomial::parse_with(&raw.coeffs, ';')
            .map_err(|e| Error::Fixture(format!("row {row}: {e}")))?;
        let needs_value = matches!(raw.table, 1 | 3);
        if needs_value && (raw.expected_value.is_none() || raw.expected_n.is_none()) {
            return Err(Error::Fixture(format!(
                "row {row}: table {} needs expected_value and expected_n",
                raw.table
            )));
        }
        if raw.table == 4 && raw.expected_n.is_none() {
            return Err(Error::Fixture(format!("row {row}: table 4 needs expected_n")));
        }
        rows.push(FixtureRow {
            row,
            table: raw.table,
            polynomial,
            beta: raw.beta,
            expected_value: raw.expected_value,
            expected_n: raw.expected_n,
        });
    }
    Ok(rows)
}

pub fn load_fixtures(path: &Path) -> Result<Vec<FixtureRow>> {
    let file = std::fs::File::open(path)
        .map_err(|e| Error::Fixture(format!("{}: {e}", path.display())))?;
    parse_fixtures(file)
}
