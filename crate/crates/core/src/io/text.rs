//! alist and MatrixMarket text formats for parity-check matrices.

use std::fmt::Write as _;

use thiserror::Error;

use crate::gf2::Gf2Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError {
        line,
        message: message.into(),
    })
}

/// Writes the alist format: `cols rows`, the two maximum weights, column
/// weights, row weights, then each column's rows and each row's columns,
/// all 1-based. Lists are not padded with zeros.
pub fn write_alist(m: &Gf2Matrix) -> String {
    let t = m.transpose();
    let col_wts = m.col_weights();
    let row_wts = m.row_weights();
    let join = |xs: &mut dyn Iterator<Item = usize>| {
        xs.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    let mut out = String::new();
    writeln!(out, "{} {}", m.cols(), m.rows()).unwrap();
    writeln!(
        out,
        "{} {}",
        col_wts.iter().max().unwrap_or(&0),
        row_wts.iter().max().unwrap_or(&0)
    )
    .unwrap();
    writeln!(out, "{}", join(&mut col_wts.iter().copied())).unwrap();
    writeln!(out, "{}", join(&mut row_wts.iter().copied())).unwrap();
    for c in 0..m.cols() {
        writeln!(out, "{}", join(&mut t.row_ones(c).map(|r| r + 1))).unwrap();
    }
    for r in 0..m.rows() {
        writeln!(out, "{}", join(&mut m.row_ones(r).map(|c| c + 1))).unwrap();
    }
    out
}

fn parse_numbers(line: &str, lineno: usize) -> Result<Vec<usize>, FormatError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().or_else(|_| err(lineno, format!("not a count: {tok:?}")))
        })
        .collect()
}

/// Reads the alist format. Zero entries in neighbor lists are padding and
/// are skipped. Column and row lists must describe the same matrix.
pub fn read_alist(text: &str) -> Result<Gf2Matrix, FormatError> {
    let lines: Vec<&str> = text.lines().collect();
    let line = |i: usize| -> Result<Vec<usize>, FormatError> {
        match lines.get(i) {
            Some(l) => parse_numbers(l, i + 1),
            None => err(i + 1, "unexpected end of file"),
        }
    };
    let header = line(0)?;
    let [cols, rows] = header[..] else {
        return err(1, "expected `cols rows`");
    };
    let maxima = line(1)?;
    let [max_col, max_row] = maxima[..] else {
        return err(2, "expected `max_col_weight max_row_weight`");
    };
    let col_wts = line(2)?;
    if col_wts.len() != cols {
        return err(3, format!("expected {cols} column weights, got {}", col_wts.len()));
    }
    let row_wts = line(3)?;
    if row_wts.len() != rows {
        return err(4, format!("expected {rows} row weights, got {}", row_wts.len()));
    }
    if col_wts.iter().max().copied().unwrap_or(0) != max_col
        || row_wts.iter().max().copied().unwrap_or(0) != max_row
    {
        return err(2, "maximum weights disagree with the weight lists");
    }
    let mut m = Gf2Matrix::zeros(rows, cols);
    for c in 0..cols {
        let lineno = 4 + c;
        let entries: Vec<usize> = line(lineno)?.into_iter().filter(|&x| x != 0).collect();
        if entries.len() != col_wts[c] {
            return err(lineno + 1, format!("column {} lists {} rows, weight says {}", c + 1, entries.len(), col_wts[c]));
        }
        for r in entries {
            if r > rows {
                return err(lineno + 1, format!("row index {r} exceeds {rows}"));
            }
            if m.get(r - 1, c) {
                return err(lineno + 1, format!("row {r} listed twice"));
            }
            m.set(r - 1, c, true);
        }
    }
    for r in 0..rows {
        let lineno = 4 + cols + r;
        let mut entries: Vec<usize> = line(lineno)?.into_iter().filter(|&x| x != 0).collect();
        entries.sort_unstable();
        let expected: Vec<usize> = m.row_ones(r).map(|c| c + 1).collect();
        if entries.len() != row_wts[r] || entries != expected {
            return err(lineno + 1, format!("row {} disagrees with the column lists", r + 1));
        }
    }
    Ok(m)
}

/// MatrixMarket coordinate pattern format with entries sorted row-major.
pub fn write_mtx(m: &Gf2Matrix) -> String {
    let mut out = String::from("%%MatrixMarket matrix coordinate pattern general\n");
    writeln!(out, "{} {} {}", m.rows(), m.cols(), m.nnz()).unwrap();
    for (r, c) in m.entries() {
        writeln!(out, "{} {}", r + 1, c + 1).unwrap();
    }
    out
}

/// Reads MatrixMarket coordinate matrices with `pattern` or `integer`
/// entries; integer values are taken mod 2, and repeated coordinates add.
pub fn read_mtx(text: &str) -> Result<Gf2Matrix, FormatError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let Some((_, banner)) = lines.next() else {
        return err(1, "empty file");
    };
    let words: Vec<String> = banner.split_whitespace().map(str::to_lowercase).collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" || words[2] != "coordinate" {
        return err(1, "expected `%%MatrixMarket matrix coordinate <field> general`");
    }
    let integer = match words[3].as_str() {
        "pattern" => false,
        "integer" => true,
        other => return err(1, format!("unsupported field {other:?}")),
    };
    if words[4] != "general" {
        return err(1, format!("unsupported symmetry {:?}", words[4]));
    }
    let mut body = lines.filter(|(_, l)| !l.trim_start().starts_with('%') && !l.trim().is_empty());
    let Some((hl, size)) = body.next() else {
        return err(2, "missing size line");
    };
    let size = parse_numbers(size, hl)?;
    let [rows, cols, nnz] = size[..] else {
        return err(hl, "expected `rows cols entries`");
    };
    let mut m = Gf2Matrix::zeros(rows, cols);
    let mut seen = 0;
    for (lineno, l) in body {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let want = if integer { 3 } else { 2 };
        if toks.len() != want {
            return err(lineno, format!("expected {want} fields"));
        }
        let idx = parse_numbers(&toks[..2].join(" "), lineno)?;
        let (r, c) = (idx[0], idx[1]);
        if r == 0 || c == 0 || r > rows || c > cols {
            return err(lineno, format!("entry ({r}, {c}) outside {rows}x{cols}"));
        }
        let odd = if integer {
            let v: i64 = toks[2]
                .parse()
                .or_else(|_| err(lineno, format!("not an integer: {:?}", toks[2])))?;
            v.rem_euclid(2) == 1
        } else {
            true
        };
        if odd {
            m.flip(r - 1, c - 1);
        }
        seen += 1;
    }
    if seen != nnz {
        return err(hl, format!("header announces {nnz} entries, found {seen}"));
    }
    Ok(m)
}
