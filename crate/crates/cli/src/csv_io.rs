//! CSV ingestion and emission.
//!
//! Input: UTF-8, comma-separated, decimal point, header `x1,...,xd,y`.
//! Output curves use 17 significant digits so a re-parse reproduces the
//! floating-point values bit for bit.

use std::fmt::Write as _;

use resdens::SampleSet;

use crate::error::{CliError, Result};

/// Load a dataset from CSV text. Lines are numbered from 1 including the
/// header; fully empty lines are skipped.
pub fn parse_csv(text: &str) -> Result<SampleSet> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (_, header) = lines.next().ok_or(CliError::Csv {
        line: 1,
        message: "empty file".into(),
    })?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.len() < 2 || cols[cols.len() - 1] != "y" {
        return Err(CliError::Csv {
            line: 1,
            message: format!("header must be x1,...,xd,y; got {header:?}"),
        });
    }
    let d = cols.len() - 1;
    for (j, col) in cols[..d].iter().enumerate() {
        let expected = format!("x{}", j + 1);
        if *col != expected {
            return Err(CliError::Csv {
                line: 1,
                message: format!("expected column {expected:?}, got {col:?}"),
            });
        }
    }

    let mut x = Vec::new();
    let mut y = Vec::new();
    for (line, row) in lines {
        let cells: Vec<&str> = row.split(',').map(str::trim).collect();
        if cells.len() != d + 1 {
            return Err(CliError::Csv {
                line,
                message: format!("expected {} columns, found {}", d + 1, cells.len()),
            });
        }
        for (j, cell) in cells.iter().enumerate() {
            let value: f64 = cell.parse().map_err(|_| CliError::Csv {
                line,
                message: format!("non-numeric cell {cell:?} in column {}", cols[j]),
            })?;
            if !value.is_finite() {
                return Err(CliError::Csv {
                    line,
                    message: format!("non-finite value {cell:?} in column {}", cols[j]),
                });
            }
            if j < d {
                x.push(value);
            } else {
                y.push(value);
            }
        }
    }
    SampleSet::new(x, d, y).map_err(CliError::from)
}

/// Read a dataset from a file.
pub fn load_csv(path: &str) -> Result<SampleSet> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })?;
    parse_csv(&text)
}

fn push_value(out: &mut String, v: f64) {
    // 17 significant digits: enough for an exact f64 round trip
    write!(out, "{v:.16e}").expect("write to string");
}

/// Serialize aligned curve columns; `header` names one column per series.
pub fn curves_to_csv(header: &[&str], grid: &[f64], series: &[&[f64]]) -> String {
    let mut out = String::new();
    out.push('e');
    for name in header {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (i, &e) in grid.iter().enumerate() {
        push_value(&mut out, e);
        for column in series {
            out.push(',');
            push_value(&mut out, column[i]);
        }
        out.push('\n');
    }
    out
}

/// Parse curve CSV back into the grid and value columns.
pub fn curves_from_csv(text: &str) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(CliError::Csv {
        line: 1,
        message: "empty curve file".into(),
    })?;
    let ncols = header.split(',').count();
    if ncols < 2 {
        return Err(CliError::Csv {
            line: 1,
            message: "curve file needs at least two columns".into(),
        });
    }
    let mut grid = Vec::new();
    let mut series = vec![Vec::new(); ncols - 1];
    for (i, line) in lines {
        let line_no = i + 1;
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != ncols {
            return Err(CliError::Csv {
                line: line_no,
                message: format!("expected {ncols} columns, found {}", cells.len()),
            });
        }
        for (j, cell) in cells.iter().enumerate() {
            let value: f64 = cell.trim().parse().map_err(|_| CliError::Csv {
                line: line_no,
                message: format!("non-numeric cell {cell:?}"),
            })?;
            if j == 0 {
                grid.push(value);
            } else {
                series[j - 1].push(value);
            }
        }
    }
    Ok((grid, series))
}

/// Bias/variance/MSE table as CSV.
pub fn table_to_csv(rows: &[resdens::McRow]) -> String {
    let mut out = String::from("e,estimator,bias,variance,mse\n");
    for row in rows {
        push_value(&mut out, row.e);
        out.push(',');
        out.push_str(match row.estimator {
            resdens::EstimatorKind::Feasible => "feasible",
            resdens::EstimatorKind::Oracle => "oracle",
        });
        for v in [row.bias, row.variance, row.mse] {
            out.push(',');
            push_value(&mut out, v);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_parses() {
        let data = parse_csv("x1,y\n0.5,2.0\n0.1,1.3\n").unwrap();
        assert_eq!(data.n(), 2);
        assert_eq!(data.dim(), 1);
        assert_eq!(data.row(0), &[0.5]);
        assert_eq!(data.y(), &[2.0, 1.3]);
    }

    #[test]
    fn three_covariates_infer_dimension() {
        let data = parse_csv("x1,x2,x3,y\n0.1,0.2,0.3,1.0\n0.4,0.5,0.6,2.0\n").unwrap();
        assert_eq!(data.dim(), 3);
        assert_eq!(data.row(1), &[0.4, 0.5, 0.6]);
    }

    #[test]
    fn non_numeric_cell_names_its_line() {
        let mut text = String::from("x1,y\n");
        for i in 0..5 {
            text.push_str(&format!("0.{i},1.0\n"));
        }
        text.push_str("oops,1.0\n"); // line 7
        let err = parse_csv(&text).unwrap_err();
        assert!(matches!(err, CliError::Csv { line: 7, .. }), "{err}");
        assert!(err.to_string().contains("line 7"));
    }

    #[test]
    fn malformed_rows_and_headers_rejected() {
        assert!(matches!(
            parse_csv("x1,y\n0.5\n"),
            Err(CliError::Csv { line: 2, .. })
        ));
        assert!(matches!(
            parse_csv("y\n1.0\n"),
            Err(CliError::Csv { line: 1, .. })
        ));
        assert!(matches!(
            parse_csv("x1,x3,y\n1.0,2.0,3.0\n"),
            Err(CliError::Csv { line: 1, .. })
        ));
        assert!(matches!(
            parse_csv("x1,y\n0.1,inf\n"),
            Err(CliError::Csv { line: 2, .. })
        ));
    }

    #[test]
    fn curve_round_trip_is_bit_identical() {
        let grid = vec![-1.5, 0.0, 1.0 / 3.0, std::f64::consts::E];
        let values = vec![0.1, 0.9375, 1.0 / 3.0, 5.0 / 7.0];
        let csv = curves_to_csv(&["f_hat"], &grid, &[&values]);
        let (grid2, series) = curves_from_csv(&csv).unwrap();
        assert_eq!(grid.len(), grid2.len());
        for (a, b) in grid.iter().zip(&grid2) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        for (a, b) in values.iter().zip(&series[0]) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
