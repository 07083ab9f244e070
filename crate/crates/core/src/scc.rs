//! Reading and writing presentations in the scc2020 text format.
//!
//! ```text
//! scc2020
//! # comments may appear on any line
//! 2
//! 1 2 0
//! 2 2 ; 0 1
//! 0 1 ;
//! 1 0 ;
//! ```
//!
//! After the header come the parameter count `d`, the block sizes
//! `relations generators [0]`, one line per relation (its degree, `;`, the
//! generator indices it involves) and one line per generator (its degree, `;`).
//! Over F_2 entries are bare indices; otherwise they are `index:value` pairs.
//! Bare indices mean coefficient 1 in any field.

use std::fmt::Write as _;

use thiserror::Error;

use crate::field::Field;
use crate::graded::{GradedError, GradedMatrix};
use crate::sparse;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SccError {
    #[error("line {line}: expected header `scc2020`")]
    BadMagic { line: usize },
    #[error("unexpected end of input: {expected}")]
    UnexpectedEof { expected: &'static str },
    #[error("line {line}: {msg}")]
    BadTokens { line: usize, msg: String },
    #[error("line {line}: non-integer grade `{token}`; quantize real grades to an integer grid first")]
    RealGrade { line: usize, token: String },
    #[error("line {line}: generator index {index} out of range (only {count} generators)")]
    IndexOutOfRange { line: usize, index: usize, count: usize },
    #[error("line {line}: relation degree does not dominate the degree of generator {index}")]
    NotGraded { line: usize, index: usize },
    #[error("line {line}: trailing content after the last generator")]
    TrailingContent { line: usize },
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next line with content, comments removed, with its 1-based number.
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.inner.by_ref() {
            let text = raw.split('#').next().unwrap_or("").trim();
            if !text.is_empty() {
                return Some((i + 1, text));
            }
        }
        None
    }
}

fn parse_usize(line: usize, tok: &str, what: &str) -> Result<usize, SccError> {
    tok.parse().map_err(|_| SccError::BadTokens { line, msg: format!("expected {what}, found `{tok}`") })
}

fn parse_grade(line: usize, tok: &str) -> Result<i64, SccError> {
    tok.parse().map_err(|_| {
        if tok.parse::<f64>().is_ok() {
            SccError::RealGrade { line, token: tok.to_string() }
        } else {
            SccError::BadTokens { line, msg: format!("expected integer grade, found `{tok}`") }
        }
    })
}

/// Splits `g1 .. gd ; entries` into the grade and the entry tokens.
fn split_line(line: usize, text: &str, d: usize) -> Result<(Vec<i64>, Vec<&str>), SccError> {
    let (head, tail) = match text.split_once(';') {
        Some((h, t)) => (h, t),
        None => {
            return Err(SccError::BadTokens { line, msg: "missing `;` separator".into() });
        }
    };
    let grade_toks: Vec<&str> = head.split_whitespace().collect();
    if grade_toks.len() != d {
        return Err(SccError::BadTokens {
            line,
            msg: format!("expected {d} grade values, found {}", grade_toks.len()),
        });
    }
    let grade = grade_toks.iter().map(|t| parse_grade(line, t)).collect::<Result<_, _>>()?;
    Ok((grade, tail.split_whitespace().collect()))
}

pub fn parse_scc2020(text: &str, field: Field) -> Result<GradedMatrix, SccError> {
    let mut lines = Lines { inner: text.lines().enumerate() };
    match lines.next_content() {
        Some((_, "scc2020")) => {}
        Some((line, _)) => return Err(SccError::BadMagic { line }),
        None => return Err(SccError::UnexpectedEof { expected: "header" }),
    }
    let (line, t) = lines.next_content().ok_or(SccError::UnexpectedEof { expected: "parameter count" })?;
    let d = parse_usize(line, t, "parameter count")?;
    if d == 0 {
        return Err(SccError::BadTokens { line, msg: "parameter count must be positive".into() });
    }
    let (line, t) = lines.next_content().ok_or(SccError::UnexpectedEof { expected: "block sizes" })?;
    let sizes: Vec<&str> = t.split_whitespace().collect();
    if !(sizes.len() == 2 || (sizes.len() == 3 && sizes[2] == "0")) {
        return Err(SccError::BadTokens { line, msg: "block sizes must be `relations generators [0]`".into() });
    }
    let n_rel = parse_usize(line, sizes[0], "relation count")?;
    let n_gen = parse_usize(line, sizes[1], "generator count")?;

    let mut relations = Vec::with_capacity(n_rel);
    for _ in 0..n_rel {
        let (line, t) = lines.next_content().ok_or(SccError::UnexpectedEof { expected: "relation line" })?;
        let (grade, toks) = split_line(line, t, d)?;
        let mut entries = Vec::with_capacity(toks.len());
        for tok in toks {
            let (idx, val) = match tok.split_once(':') {
                Some((i, v)) => {
                    let v: i64 = v
                        .parse()
                        .map_err(|_| SccError::BadTokens { line, msg: format!("bad coefficient in `{tok}`") })?;
                    (parse_usize(line, i, "generator index")?, field.from_i64(v))
                }
                None => (parse_usize(line, tok, "generator index")?, 1),
            };
            if idx >= n_gen {
                return Err(SccError::IndexOutOfRange { line, index: idx, count: n_gen });
            }
            entries.push((idx as u32, val));
        }
        relations.push((line, grade, sparse::collect(field, entries)));
    }
    let mut gens = Vec::with_capacity(n_gen);
    for _ in 0..n_gen {
        let (line, t) = lines.next_content().ok_or(SccError::UnexpectedEof { expected: "generator line" })?;
        let (grade, toks) = split_line(line, t, d)?;
        if !toks.is_empty() {
            return Err(SccError::BadTokens { line, msg: "generator lines take no entries".into() });
        }
        gens.push(grade);
    }
    if let Some((line, _)) = lines.next_content() {
        return Err(SccError::TrailingContent { line });
    }
    let lines_of: Vec<usize> = relations.iter().map(|r| r.0).collect();
    let columns = relations.into_iter().map(|(_, g, c)| (g, c)).collect();
    GradedMatrix::new(field, d, gens, columns).map_err(|e| match e {
        GradedError::NotGraded { row, col } => SccError::NotGraded { line: lines_of[col], index: row },
        other => SccError::BadTokens { line: 0, msg: other.to_string() },
    })
}

pub fn write_scc2020(m: &GradedMatrix) -> String {
    let mut out = String::new();
    let binary = m.field().is_binary();
    out.push_str("scc2020\n");
    let _ = writeln!(out, "{}", m.dim().max(1));
    let _ = writeln!(out, "{} {} 0", m.num_cols(), m.num_rows());
    let fmt_deg = |deg: &[i64], out: &mut String| {
        for (k, x) in deg.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{x}");
        }
    };
    for j in 0..m.num_cols() {
        fmt_deg(m.col_degree(j), &mut out);
        out.push_str(" ;");
        for &(i, v) in m.column(j) {
            if binary {
                let _ = write!(out, " {i}");
            } else {
                let _ = write!(out, " {i}:{v}");
            }
        }
        out.push('\n');
    }
    for i in 0..m.num_rows() {
        fmt_deg(m.row_degree(i), &mut out);
        out.push_str(" ;\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG2: &str = "scc2020\n# two generators, one relation\n2\n1 2 0\n2 2 ; 0 1:-1\n0 1 ;\n1 0 ;\n";

    #[test]
    fn parses_small_presentation() {
        let f3 = Field::new(3).unwrap();
        let m = parse_scc2020(FIG2, f3).unwrap();
        assert_eq!((m.num_rows(), m.num_cols()), (2, 1));
        assert_eq!(m.column(0), &vec![(0, 1), (1, 2)]);
        assert_eq!(parse_scc2020(&write_scc2020(&m), f3).unwrap(), m);
    }

    #[test]
    fn empty_presentation() {
        let m = parse_scc2020("scc2020\n2\n0 0\n", Field::F2).unwrap();
        assert_eq!((m.num_rows(), m.num_cols()), (0, 0));
    }

    #[test]
    fn diagnostics_carry_lines() {
        let bad = "scc2020\n2\n1 1\n3 3 ; 4\n0 0 ;\n";
        assert_eq!(parse_scc2020(bad, Field::F2), Err(SccError::IndexOutOfRange { line: 4, index: 4, count: 1 }));
        let ungraded = "scc2020\n2\n1 1\n0 0 ; 0\n1 1 ;\n";
        assert_eq!(parse_scc2020(ungraded, Field::F2), Err(SccError::NotGraded { line: 4, index: 0 }));
        assert!(matches!(parse_scc2020("firep\n", Field::F2), Err(SccError::BadMagic { line: 1 })));
        let real = "scc2020\n2\n0 1\n0.5 1 ;\n";
        assert!(matches!(parse_scc2020(real, Field::F2), Err(SccError::RealGrade { line: 4, .. })));
    }
}
