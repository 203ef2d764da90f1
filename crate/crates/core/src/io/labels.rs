//! Plain-text label grid: a `rows cols` line, then `rows` lines of `cols`
//! space-separated non-negative integers (0 = unlabeled).

use std::fmt::Write as _;
use std::path::Path;

use super::{read_bytes, write_bytes};
use crate::classify::LabelMap;
use crate::error::{Error, Result};

pub fn parse_labels(text: &str) -> Result<LabelMap> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (line_no, dims) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or(Error::Parse {
            line: 1,
            message: "missing 'rows cols' header".into(),
        })?;
    let dims = parse_row(dims, line_no)?;
    let [rows, cols] = dims[..] else {
        return Err(Error::Parse {
            line: line_no,
            message: format!("header needs exactly 2 values, found {}", dims.len()),
        });
    };
    let (rows, cols) = (rows as usize, cols as usize);

    let mut labels = Vec::with_capacity(rows * cols);
    let mut last_line = line_no;
    for r in 0..rows {
        let Some((line_no, line)) = lines.next() else {
            return Err(Error::Parse {
                line: last_line + 1,
                message: format!("expected {rows} grid rows, found {r}"),
            });
        };
        last_line = line_no;
        let row = parse_row(line, line_no)?;
        if row.len() != cols {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected {cols} values, found {}", row.len()),
            });
        }
        labels.extend(row);
    }
    if let Some((line_no, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(Error::Parse {
            line: line_no,
            message: "unexpected content after the grid".into(),
        });
    }
    LabelMap::new(rows, cols, labels)
}

fn parse_row(line: &str, line_no: usize) -> Result<Vec<u32>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<u32>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("'{tok}' is not a non-negative integer"),
            })
        })
        .collect()
}

pub fn format_labels(map: &LabelMap) -> String {
    let mut out = format!("{} {}\n", map.rows(), map.cols());
    for row in map.labels().chunks(map.cols().max(1)) {
        let mut first = true;
        for v in row {
            if !first {
                out.push(' ');
            }
            first = false;
            write!(out, "{v}").expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

pub fn read_labels(path: impl AsRef<Path>) -> Result<LabelMap> {
    let path = path.as_ref();
    let bytes = read_bytes(path)?;
    let text = String::from_utf8(bytes).map_err(|e| Error::Parse {
        line: 1,
        message: format!("{}: not UTF-8: {e}", path.display()),
    })?;
    parse_labels(&text)
}

pub fn write_labels(map: &LabelMap, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), format_labels(map).as_bytes())
}
