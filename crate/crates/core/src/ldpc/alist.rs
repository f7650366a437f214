//! MacKay's alist text format for sparse binary matrices.
//!
//! ```text
//! n m
//! max_col_weight max_row_weight
//! n column weights
//! m row weights
//! n lines: 1-based row indices of each column, 0-padded to max_col_weight
//! m lines: 1-based column indices of each row, 0-padded to max_row_weight
//! ```

use std::fmt::Write;

use crate::gf2::BitMatrix;

use super::LdpcError;

fn join(values: impl IntoIterator<Item = usize>) -> String {
    values.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn padded(support: &[usize], width: usize) -> String {
    join(support.iter().map(|&i| i + 1).chain(std::iter::repeat(0)).take(width))
}

pub fn write_alist(h: &BitMatrix) -> String {
    let t = h.transpose();
    let cols: Vec<Vec<usize>> = (0..t.n_rows()).map(|c| t.row_support(c)).collect();
    let rows: Vec<Vec<usize>> = (0..h.n_rows()).map(|r| h.row_support(r)).collect();
    let max_col = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", h.n_cols(), h.n_rows());
    let _ = writeln!(out, "{max_col} {max_row}");
    let _ = writeln!(out, "{}", join(cols.iter().map(Vec::len)));
    let _ = writeln!(out, "{}", join(rows.iter().map(Vec::len)));
    for c in &cols {
        let _ = writeln!(out, "{}", padded(c, max_col));
    }
    for r in &rows {
        let _ = writeln!(out, "{}", padded(r, max_row));
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl Lines<'_> {
    fn next_numbers(&mut self, what: &str) -> Result<(usize, Vec<usize>), LdpcError> {
        let (i, line) = self.inner.next().ok_or(LdpcError::Alist { line: 0, reason: format!("missing {what}") })?;
        let line_no = i + 1;
        let numbers = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|e| LdpcError::Alist { line: line_no, reason: format!("'{tok}' in {what}: {e}") })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok((line_no, numbers))
    }

    fn expect_len(&mut self, what: &str, len: usize) -> Result<(usize, Vec<usize>), LdpcError> {
        let (line, v) = self.next_numbers(what)?;
        if v.len() != len {
            return Err(LdpcError::Alist { line, reason: format!("{what}: expected {len} values, found {}", v.len()) });
        }
        Ok((line, v))
    }
}

/// Parses an alist matrix and checks the column and row lists agree.
pub fn read_alist(text: &str) -> Result<BitMatrix, LdpcError> {
    let mut lines = Lines { inner: text.lines().enumerate() };
    let (_, dims) = lines.expect_len("dimensions", 2)?;
    let (n, m) = (dims[0], dims[1]);
    let (_, maxes) = lines.expect_len("maximum weights", 2)?;
    let (_, col_weights) = lines.expect_len("column weights", n)?;
    let (_, row_weights) = lines.expect_len("row weights", m)?;
    let mut h = BitMatrix::zeros(m, n);
    for (c, &w) in col_weights.iter().enumerate() {
        let (line, entries) = lines.expect_len("column entries", maxes[0])?;
        let support = entries_to_support(line, &entries, w, m)?;
        for r in support {
            h.set(r, c, true);
        }
    }
    for (r, &w) in row_weights.iter().enumerate() {
        let (line, entries) = lines.expect_len("row entries", maxes[1])?;
        let support = entries_to_support(line, &entries, w, n)?;
        if support != h.row_support(r) {
            return Err(LdpcError::Alist { line, reason: format!("row {} disagrees with the column lists", r + 1) });
        }
    }
    Ok(h)
}

fn entries_to_support(line: usize, entries: &[usize], weight: usize, bound: usize) -> Result<Vec<usize>, LdpcError> {
    let err = |reason: String| LdpcError::Alist { line, reason };
    let (used, pad) = entries.split_at(weight.min(entries.len()));
    if used.len() != weight || pad.iter().any(|&x| x != 0) {
        return Err(err(format!("expected {weight} entries followed by zero padding")));
    }
    let mut support = Vec::with_capacity(weight);
    for &x in used {
        if x == 0 || x > bound {
            return Err(err(format!("index {x} outside 1..={bound}")));
        }
        support.push(x - 1);
    }
    support.sort_unstable();
    Ok(support)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::incidence::build_kim_matrix;

    #[test]
    fn kim_q2_layout_and_round_trip() {
        let h = build_kim_matrix(&FieldSpec::with_order(2).unwrap()).bits;
        let text = write_alist(&h);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "8 8");
        assert_eq!(lines[1], "2 2");
        assert_eq!(lines.len(), 4 + 8 + 8);
        let back = read_alist(&text).unwrap();
        assert_eq!(back, h);
        assert_eq!(write_alist(&back), text);
    }

    #[test]
    fn padding_and_errors() {
        let h = BitMatrix::from_row_indices(3, &[vec![0, 2], vec![1]]);
        let text = write_alist(&h);
        assert_eq!(text, "3 2\n1 2\n1 1 1\n2 1\n1\n2\n1\n1 3\n2 0\n");
        assert_eq!(read_alist(&text).unwrap(), h);
        let broken = text.replace("1 3\n2 0", "1 3\n3 0");
        assert!(matches!(read_alist(&broken), Err(LdpcError::Alist { line: 9, .. })));
        assert!(matches!(read_alist("3"), Err(LdpcError::Alist { line: 1, .. })));
    }
}
