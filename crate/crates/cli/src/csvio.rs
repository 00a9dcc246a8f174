//! CSV emission and parsing. Floats are printed in C `%.12g` style so
//! artifacts are compact and byte-deterministic.

use std::path::Path;

use crate::error::{io_err, CliError};

/// `%.{sig}g`-style formatting: `sig` significant digits, trailing zeros
/// stripped, scientific notation outside the `[1e-4, 1e{sig})` magnitude
/// window, exponent zero-padded to two digits.
pub fn fmt_g(x: f64, sig: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("e-format always has an exponent");
    let exp: i32 = exp.parse().expect("valid exponent");
    if exp < -4 || exp >= sig as i32 {
        format!(
            "{}e{}{:02}",
            trim_trailing_zeros(mantissa),
            if exp < 0 { "-" } else { "+" },
            exp.abs()
        )
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_trailing_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_trailing_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn fmt_g12(x: f64) -> String {
    fmt_g(x, 12)
}

/// An in-memory table about to be written: column names plus rows of
/// already-formatted cells.
pub struct CsvTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_csv())
            .map_err(|e| io_err(&format!("writing {}", path.display()), e))
    }

    /// JSON mirror of the same table: numbers where the cell parses as a
    /// finite float, strings otherwise.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                serde_json::Value::Array(
                    row.iter()
                        .map(|cell| match cell.parse::<f64>() {
                            Ok(v) if v.is_finite() => serde_json::json!(v),
                            _ => serde_json::Value::String(cell.clone()),
                        })
                        .collect(),
                )
            })
            .collect();
        serde_json::json!({ "columns": self.columns, "rows": rows })
    }
}

/// Minimal CSV reader for the plot command: header plus float-ish cells
/// (non-parseable cells become NaN and are skipped by the plotter).
pub struct CsvData {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvData {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| io_err(&format!("reading {}", path.display()), e))?;
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| CliError::IoData(format!("{}: empty CSV", path.display())))?;
        let columns: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
        let mut rows = Vec::new();
        for line in lines {
            let row: Vec<f64> = line
                .split(',')
                .map(|cell| cell.trim().parse::<f64>().unwrap_or(f64::NAN))
                .collect();
            if row.len() != columns.len() {
                return Err(CliError::IoData(format!(
                    "{}: row with {} cells under a {}-column header",
                    path.display(),
                    row.len(),
                    columns.len()
                )));
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(CliError::IoData(format!(
                "{}: CSV has a header but no data rows",
                path.display()
            )));
        }
        Ok(Self { columns, rows })
    }

    pub fn column_index(&self, name: &str) -> Result<usize, CliError> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| CliError::IoData(format!("missing column `{name}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g12_matches_reference_printf() {
        // Reference strings from C/Python "%.12g".
        let cases: &[(f64, &str)] = &[
            (0.0, "0"),
            (-0.0, "-0"),
            (1.0, "1"),
            (0.5, "0.5"),
            (1e-5, "1e-05"),
            (-1e-5, "-1e-05"),
            (0.0001, "0.0001"),
            (1e12, "1e+12"),
            (123456.789, "123456.789"),
            (1.925224936525e-2, "0.0192522493652"),
            (2.0 / 3.0, "0.666666666667"),
            (6.02214076e23, "6.02214076e+23"),
            (-3.14159265358979, "-3.14159265359"),
            (1e-300, "1e-300"),
            (0.1, "0.1"),
            (528.4680194275, "528.468019428"),
            (1.0000000000004, "1"),
            (64.0, "64"),
            (f64::NAN, "nan"),
            (f64::INFINITY, "inf"),
        ];
        for &(x, expect) in cases {
            assert_eq!(fmt_g12(x), expect, "formatting {x:?}");
        }
    }

    #[test]
    fn csv_round_trip() {
        let table = CsvTable {
            columns: vec!["k".into(), "eta_k".into()],
            rows: vec![
                vec![fmt_g12(0.5), fmt_g12(0.987654321)],
                vec![fmt_g12(1.0), fmt_g12(-0.25)],
            ],
        };
        let dir = std::env::temp_dir().join("gauge_rabi_csv_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.csv");
        table.write(&path).unwrap();
        let data = CsvData::read(&path).unwrap();
        assert_eq!(data.columns, vec!["k", "eta_k"]);
        assert_eq!(data.rows.len(), 2);
        assert_eq!(data.column_index("eta_k").unwrap(), 1);
        assert!(data.column_index("nope").is_err());
        assert!((data.rows[0][1] - 0.987654321).abs() < 1e-12);
    }
}
