//! The `.dm` text format: one header line, then one line per row with one
//! character per cell.
//!
//! ```text
//! #dm kind=signed rows=2 cols=3
//! +-0
//! 0++
//! ```
//!
//! `signed` uses `0 + -`, `binary` uses `0 +`, and `group` (with `n=<n>`,
//! `n <= 36`) uses `.` for zero and base-36 digits for exponents.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactmat::SignedMatrix;
use crate::groupmat::{Cell, CyclicGroupMatrix};
use crate::oa::OrthogonalArray;

const DIGITS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixFile {
    Signed(SignedMatrix),
    Binary(SignedMatrix),
    Group(CyclicGroupMatrix),
}

impl MatrixFile {
    /// Tags a signed matrix as `binary` when it has no negative entries.
    pub fn from_signed(m: SignedMatrix) -> Self {
        if m.is_binary() {
            MatrixFile::Binary(m)
        } else {
            MatrixFile::Signed(m)
        }
    }

    /// Symbols `1..=q` become exponents `0..q`.
    pub fn from_oa(a: &OrthogonalArray) -> Result<Self> {
        let w = CyclicGroupMatrix::from_fn(a.runs(), a.factors(), a.q(), |r, c| {
            Cell::Exp(a.get(r, c) - 1)
        })?;
        Ok(MatrixFile::Group(w))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            MatrixFile::Signed(_) => "signed",
            MatrixFile::Binary(_) => "binary",
            MatrixFile::Group(_) => "group",
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            MatrixFile::Signed(m) | MatrixFile::Binary(m) => m.shape(),
            MatrixFile::Group(w) => (w.rows(), w.cols()),
        }
    }

    /// Signed view; group files must have `n = 2`.
    pub fn to_signed(&self) -> Result<SignedMatrix> {
        match self {
            MatrixFile::Signed(m) | MatrixFile::Binary(m) => Ok(m.clone()),
            MatrixFile::Group(w) => crate::groupmat::signed_from_z2(w),
        }
    }

    /// Group view; signed files become `C_2` matrices.
    pub fn to_group(&self) -> Result<CyclicGroupMatrix> {
        match self {
            MatrixFile::Signed(m) | MatrixFile::Binary(m) => crate::groupmat::group_from_signed(m),
            MatrixFile::Group(w) => Ok(w.clone()),
        }
    }

    /// Reads a group file as a strength-2 array over `1..=n`.
    pub fn to_oa(&self) -> Result<OrthogonalArray> {
        let MatrixFile::Group(w) = self else {
            return Err(Error::InvalidParameter(
                "orthogonal arrays are stored as group files".into(),
            ));
        };
        let q = w.n();
        let mut entries = Vec::with_capacity(w.rows() * w.cols());
        for r in 0..w.rows() {
            for c in 0..w.cols() {
                match w.get(r, c) {
                    Cell::Exp(t) => entries.push(t + 1),
                    Cell::Zero => {
                        return Err(Error::InvalidParameter(format!("empty cell at ({r}, {c})")))
                    }
                }
            }
        }
        let q2 = (q as usize) * (q as usize);
        if w.rows() % q2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "{} runs is not a multiple of q^2 = {q2}",
                w.rows()
            )));
        }
        OrthogonalArray::new(w.rows(), w.cols(), q, 2, (w.rows() / q2) as u64, entries)
    }

    /// Canonical text serialization.
    pub fn to_text(&self) -> String {
        let (rows, cols) = self.shape();
        let mut out = format!("#dm kind={} rows={rows} cols={cols}", self.kind());
        if let MatrixFile::Group(w) = self {
            let _ = write!(out, " n={}", w.n());
        }
        out.push('\n');
        out.reserve(rows * (cols + 1));
        for r in 0..rows {
            for c in 0..cols {
                let ch = match self {
                    MatrixFile::Signed(m) | MatrixFile::Binary(m) => match m.get(r, c) {
                        0 => '0',
                        1 => '+',
                        _ => '-',
                    },
                    MatrixFile::Group(w) => match w.get(r, c) {
                        Cell::Zero => '.',
                        Cell::Exp(t) => DIGITS[t as usize] as char,
                    },
                };
                out.push(ch);
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.split('\n').collect::<Vec<_>>();
        if lines.last() == Some(&"") {
            lines.pop();
        }
        let header = lines.first().ok_or(Error::Format {
            line: 1,
            msg: "empty file".into(),
        })?;
        let (kind, rows, cols, n) = parse_header(header)?;
        let body = &lines[1..];
        if body.len() != rows {
            return Err(Error::Format {
                line: body.len() + 2,
                msg: format!("expected {rows} rows, found {}", body.len()),
            });
        }
        for (i, l) in body.iter().enumerate() {
            if l.chars().count() != cols {
                return Err(Error::Format {
                    line: i + 2,
                    msg: format!("expected {cols} cells, found {}", l.chars().count()),
                });
            }
        }
        let bad = |line: usize, ch: char| Error::Format {
            line,
            msg: format!("invalid cell {ch:?} for kind={kind}"),
        };
        match kind {
            "signed" | "binary" => {
                let mut data = Vec::with_capacity(rows * cols);
                for (i, l) in body.iter().enumerate() {
                    for ch in l.chars() {
                        data.push(match ch {
                            '0' => 0,
                            '+' => 1,
                            '-' if kind == "signed" => -1,
                            _ => return Err(bad(i + 2, ch)),
                        });
                    }
                }
                let m = SignedMatrix::new(rows, cols, data)?;
                Ok(if kind == "signed" {
                    MatrixFile::Signed(m)
                } else {
                    MatrixFile::Binary(m)
                })
            }
            _ => {
                let n = n.expect("group header carries n");
                let mut cells = Vec::with_capacity(rows * cols);
                for (i, l) in body.iter().enumerate() {
                    for ch in l.chars() {
                        let cell = if ch == '.' {
                            Cell::Zero
                        } else {
                            match ch.to_digit(36) {
                                Some(t) if t < n && !ch.is_ascii_uppercase() => Cell::Exp(t),
                                _ => return Err(bad(i + 2, ch)),
                            }
                        };
                        cells.push(cell);
                    }
                }
                Ok(MatrixFile::Group(CyclicGroupMatrix::new(
                    rows, cols, n, cells,
                )?))
            }
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    /// `{"kind","rows","cols","n","data"}`; zero group cells become `-1`.
    pub fn to_json(&self) -> Value {
        let (rows, cols) = self.shape();
        let data: Vec<Vec<i64>> = (0..rows)
            .map(|r| {
                (0..cols)
                    .map(|c| match self {
                        MatrixFile::Signed(m) | MatrixFile::Binary(m) => i64::from(m.get(r, c)),
                        MatrixFile::Group(w) => match w.get(r, c) {
                            Cell::Zero => -1,
                            Cell::Exp(t) => i64::from(t),
                        },
                    })
                    .collect()
            })
            .collect();
        let n = match self {
            MatrixFile::Group(w) => json!(w.n()),
            _ => Value::Null,
        };
        json!({ "kind": self.kind(), "rows": rows, "cols": cols, "n": n, "data": data })
    }
}

fn parse_header(line: &str) -> Result<(&'static str, usize, usize, Option<u32>)> {
    let err = |msg: String| Error::Format { line: 1, msg };
    let mut parts = line.split(' ');
    if parts.next() != Some("#dm") {
        return Err(err(format!(
            "header must start with \"#dm \", got {line:?}"
        )));
    }
    let mut field = |key: &str| -> Result<&str> {
        let part = parts.next().ok_or_else(|| err(format!("missing {key}=")))?;
        part.strip_prefix(key)
            .and_then(|s| s.strip_prefix('='))
            .ok_or_else(|| err(format!("expected {key}=..., got {part:?}")))
    };
    let kind = match field("kind")? {
        "signed" => "signed",
        "binary" => "binary",
        "group" => "group",
        other => return Err(err(format!("unknown kind {other:?}"))),
    };
    let num = |s: &str, key: &str| -> Result<usize> {
        if s.is_empty()
            || !s.bytes().all(|b| b.is_ascii_digit())
            || (s.len() > 1 && s.starts_with('0'))
        {
            return Err(err(format!("{key}={s:?} is not a canonical count")));
        }
        s.parse()
            .map_err(|_| err(format!("{key}={s:?} out of range")))
    };
    let rows = num(field("rows")?, "rows")?;
    let cols = num(field("cols")?, "cols")?;
    let n = if kind == "group" {
        let n = num(field("n")?, "n")?;
        if !(1..=36).contains(&n) {
            return Err(err(format!("n={n} must be in 1..=36")));
        }
        Some(n as u32)
    } else {
        None
    };
    if let Some(extra) = parts.next() {
        return Err(err(format!("unexpected header field {extra:?}")));
    }
    Ok((kind, rows, cols, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn signed_roundtrip() {
        let text = "#dm kind=signed rows=2 cols=3\n+-0\n0++\n";
        let f = MatrixFile::parse(text).unwrap();
        assert_eq!(f.to_signed().unwrap().as_slice(), &[1, -1, 0, 0, 1, 1]);
        assert_eq!(f.to_text(), text);
    }

    #[test]
    fn group_roundtrip_and_json() {
        let text = "#dm kind=group rows=2 cols=2 n=12\n.b\n30\n";
        let f = MatrixFile::parse(text).unwrap();
        assert_eq!(f.to_text(), text);
        let j = f.to_json();
        assert_eq!(j["kind"], "group");
        assert_eq!(j["n"], 12);
        assert_eq!(j["data"], json!([[-1, 11], [3, 0]]));
        let s = MatrixFile::parse("#dm kind=binary rows=1 cols=2\n0+\n").unwrap();
        assert_eq!(s.to_json()["n"], Value::Null);
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "",
            "#dm kind=signed rows=1 cols=2\n+\n",
            "#dm kind=signed rows=2 cols=1\n+\n",
            "#dm kind=binary rows=1 cols=1\n-\n",
            "#dm kind=group rows=1 cols=1 n=2\n2\n",
            "#dm kind=group rows=1 cols=1\n0\n",
            "#dm kind=group rows=1 cols=1 n=37\n0\n",
            "#dm kind=signed rows=1 cols=1 n=2\n0\n",
            "#dm kind=signed cols=1 rows=1\n0\n",
            "#dm kind=signed rows=01 cols=1\n0\n",
            "#dm kind=signed rows=1 cols=1\nx\n",
            "#dm kind=group rows=1 cols=1 n=12\nB\n",
        ] {
            assert!(
                matches!(MatrixFile::parse(bad), Err(Error::Format { .. })),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn oa_through_group_files() {
        let a = crate::oa::build_oa(3, 2).unwrap();
        let f = MatrixFile::from_oa(&a).unwrap();
        let back = MatrixFile::parse(&f.to_text()).unwrap().to_oa().unwrap();
        assert_eq!(back, a);
    }

    proptest! {
        #[test]
        fn write_then_read_is_identity(rows in 0usize..6, cols in 0usize..6, seed in proptest::collection::vec(0u32..37, 36)) {
            let n = seed[0] % 36 + 1;
            let cells: Vec<Cell> = (0..rows * cols)
                .map(|i| match seed[i % 36] % (n + 1) {
                    t if t == n => Cell::Zero,
                    t => Cell::Exp(t),
                })
                .collect();
            let f = MatrixFile::Group(CyclicGroupMatrix::new(rows, cols, n, cells).unwrap());
            let text = f.to_text();
            let back = MatrixFile::parse(&text).unwrap();
            prop_assert_eq!(&back, &f);
            prop_assert_eq!(back.to_text(), text);

            let signed = SignedMatrix::from_fn(rows, cols, |r, c| (seed[(r * cols + c) % 36] % 3) as i8 - 1);
            let f = MatrixFile::Signed(signed);
            prop_assert_eq!(MatrixFile::parse(&f.to_text()).unwrap(), f);
        }
    }
}
