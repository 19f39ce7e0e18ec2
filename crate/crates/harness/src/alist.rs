//! MacKay's alist format. The first line is `cols rows`, then the maximum
//! column and row weights, the column weights, the row weights, one line of
//! 1-based row indices per column and one line of 1-based column indices
//! per row. Zero entries are padding and are skipped on input.

use crate::error::{HarnessError, Result};
use ldpc_cs::codes::ParityCheckMatrix;
use std::fmt::Write as _;
use std::path::Path;

fn bad(msg: impl Into<String>) -> HarnessError {
    HarnessError::Alist(msg.into())
}

pub fn to_alist(h: &ParityCheckMatrix) -> String {
    let cw = h.col_weights();
    let rw = h.row_weights();
    let max_c = cw.iter().copied().max().unwrap_or(0);
    let max_r = rw.iter().copied().max().unwrap_or(0);
    let mut s = String::new();
    let join = |v: &mut dyn Iterator<Item = usize>| v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    writeln!(s, "{} {}", h.cols(), h.rows()).unwrap();
    writeln!(s, "{max_c} {max_r}").unwrap();
    writeln!(s, "{}", join(&mut cw.iter().copied())).unwrap();
    writeln!(s, "{}", join(&mut rw.iter().copied())).unwrap();
    for b in 0..h.cols() {
        let col = h.col(b);
        let mut it = col
            .iter()
            .map(|a| a + 1)
            .chain(std::iter::repeat_n(0, max_c - col.len()));
        writeln!(s, "{}", join(&mut it)).unwrap();
    }
    for a in 0..h.rows() {
        let row = h.row(a);
        let mut it = row
            .iter()
            .map(|b| b + 1)
            .chain(std::iter::repeat_n(0, max_r - row.len()));
        writeln!(s, "{}", join(&mut it)).unwrap();
    }
    s
}

pub fn parse_alist(text: &str) -> Result<ParityCheckMatrix> {
    let mut tokens = text.split_whitespace().map(|t| {
        t.parse::<usize>()
            .map_err(|_| bad(format!("expected a non-negative integer, found {t:?}")))
    });
    let mut next = |what: &str| -> Result<usize> {
        tokens
            .next()
            .unwrap_or_else(|| Err(bad(format!("unexpected end of input reading {what}"))))
    };
    let cols = next("column count")?;
    let rows = next("row count")?;
    let _max_c = next("max column weight")?;
    let _max_r = next("max row weight")?;
    let cw = (0..cols).map(|_| next("column weights")).collect::<Result<Vec<_>>>()?;
    let rw = (0..rows).map(|_| next("row weights")).collect::<Result<Vec<_>>>()?;

    // Entry lists; padding zeros may appear between lists.
    let mut pending: Option<usize> = None;
    let mut read_list = |len: usize, bound: usize, what: &str| -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(len);
        while out.len() < len {
            let x = match pending.take() {
                Some(x) => x,
                None => next(what)?,
            };
            if x == 0 {
                continue;
            }
            if x > bound {
                return Err(bad(format!("{what}: index {x} exceeds {bound}")));
            }
            out.push(x - 1);
        }
        Ok(out)
    };
    let col_lists = cw
        .iter()
        .map(|&w| read_list(w, rows, "column entries"))
        .collect::<Result<Vec<_>>>()?;
    let row_lists = rw
        .iter()
        .map(|&w| read_list(w, cols, "row entries"))
        .collect::<Result<Vec<_>>>()?;

    let h = ParityCheckMatrix::from_rows(cols, row_lists)?;
    for (b, list) in col_lists.iter().enumerate() {
        let mut sorted = list.clone();
        sorted.sort_unstable();
        if sorted != h.col(b) {
            return Err(bad(format!("column {} list disagrees with the row lists", b + 1)));
        }
    }
    Ok(h)
}

pub fn read_alist(path: &Path) -> Result<ParityCheckMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_alist(&text)
}

pub fn write_alist(path: &Path, h: &ParityCheckMatrix) -> Result<()> {
    std::fs::write(path, to_alist(h)).map_err(|e| HarnessError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ldpc_cs::codes::peg;

    #[test]
    fn roundtrip() {
        let h = peg(30, 20, &[3; 30], 4).unwrap();
        assert_eq!(parse_alist(&to_alist(&h)).unwrap(), h);
    }

    #[test]
    fn header_is_cols_then_rows() {
        let h = ParityCheckMatrix::from_rows(4, vec![vec![0, 1], vec![1, 2, 3]]).unwrap();
        let text = to_alist(&h);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("4 2"));
        assert_eq!(lines.next(), Some("2 3"));
        assert_eq!(lines.next(), Some("1 2 1 1"));
        assert_eq!(lines.next(), Some("2 3"));
        assert_eq!(lines.next(), Some("1 0"));
    }

    #[test]
    fn unpadded_input() {
        let text = "3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n2 3\n";
        let h = parse_alist(text).unwrap();
        assert_eq!(h.row(0), &[0, 1]);
        assert_eq!(h.row(1), &[1, 2]);
    }

    #[test]
    fn rejects_inconsistent_lists() {
        let text = "3 2\n2 2\n1 2 1\n2 2\n2\n1 2\n2\n1 2\n2 3\n";
        assert!(parse_alist(text).is_err());
        assert!(parse_alist("3 2\n2").is_err());
        assert!(parse_alist("3 x").is_err());
    }
}
