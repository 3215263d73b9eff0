//! The `.hgt` table file format.
//!
//! ```text
//! # comment
//! elements: a b c
//! a: {a} {a} {a}
//! b: {a} {a,b} {c}
//! c: {a} {b} {a,b,c}
//! ```
//!
//! The first non-blank line lists the carrier in header order. Each further
//! line is one row: cell `j` of row `r` is `r ∘ (element j)`. A `#` starts a
//! comment that runs to the end of the line.

use std::fmt;

use thiserror::Error;

use crate::table::{validate_table, HyperTable, RawRow, RawTable, ViolationKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// 1-based line number.
    pub line: usize,
    /// 1-based character column.
    pub column: usize,
    pub kind: FileErrorKind,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FileErrorKind {
    #[error("missing `elements:` header line")]
    MissingHeader,
    #[error("row line must look like `<name>: {{..}} {{..}} ..`")]
    ExpectedRowLabel,
    #[error("expected `{{` to open a cell, found {0:?}")]
    ExpectedCell(char),
    #[error("unterminated cell; missing `}}`")]
    UnterminatedCell,
    #[error("element names may not contain `:` or `#`: {0:?}")]
    ReservedCharacter(String),
    #[error("expected {expected} rows, found {found}")]
    RowCountMismatch { expected: usize, found: usize },
    #[error("duplicate element name {0:?}")]
    DuplicateName(String),
    #[error("{0}")]
    Table(ViolationKind),
}

/// All diagnostics found while reading a table file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct TableFileError {
    pub diagnostics: Vec<Diagnostic>,
}

impl fmt::Display for TableFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.diagnostics.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

#[derive(Default)]
struct Positions {
    header_line: usize,
    /// Per raw row: its line and the column of every cell.
    rows: Vec<(usize, Vec<usize>)>,
    last_line: usize,
}

pub fn parse_table_file(text: &str) -> Result<HyperTable, TableFileError> {
    let (raw, pos) = parse_raw(text).map_err(|diagnostics| TableFileError { diagnostics })?;
    validate_table(&raw).map_err(|violations| {
        let diagnostics = violations
            .into_iter()
            .map(|v| {
                let (line, column) = match (v.row, v.col) {
                    (Some(r), Some(c)) => (pos.rows[r].0, pos.rows[r].1[c]),
                    (Some(r), None) => (pos.rows[r].0, 1),
                    _ => (pos.header_line, 1),
                };
                let kind = match v.kind {
                    ViolationKind::RowCountMismatch { expected, found } => {
                        let line = if found > expected { pos.rows[expected].0 } else { pos.last_line };
                        return Diagnostic { line, column: 1, kind: FileErrorKind::RowCountMismatch { expected, found } };
                    }
                    ViolationKind::DuplicateName(name) => FileErrorKind::DuplicateName(name),
                    other => FileErrorKind::Table(other),
                };
                Diagnostic { line, column, kind }
            })
            .collect();
        TableFileError { diagnostics }
    })
}

fn parse_raw(text: &str) -> Result<(RawTable, Positions), Vec<Diagnostic>> {
    let mut raw = RawTable::default();
    let mut pos = Positions::default();
    let mut errs = Vec::new();
    let mut have_header = false;

    for (idx, full_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match full_line.find('#') {
            Some(i) => &full_line[..i],
            None => full_line,
        };
        if line.trim().is_empty() {
            continue;
        }
        pos.last_line = line_no;
        let diag = |column: usize, kind| Diagnostic { line: line_no, column, kind };

        if !have_header {
            have_header = true;
            pos.header_line = line_no;
            let Some(rest) = line.trim_start().strip_prefix("elements:") else {
                errs.push(diag(1, FileErrorKind::MissingHeader));
                return Err(errs);
            };
            for name in rest.split_whitespace() {
                if name.contains(':') {
                    errs.push(diag(column_of(line, name), FileErrorKind::ReservedCharacter(name.to_string())));
                }
                raw.names.push(name.to_string());
            }
            continue;
        }

        let Some(colon) = line.find(':') else {
            errs.push(diag(1, FileErrorKind::ExpectedRowLabel));
            continue;
        };
        let name = line[..colon].trim();
        if name.is_empty() || name.contains(char::is_whitespace) {
            errs.push(diag(1, FileErrorKind::ExpectedRowLabel));
            continue;
        }
        let mut cells = Vec::new();
        let mut columns = Vec::new();
        let body_start = colon + 1;
        let mut chars = line[body_start..].char_indices().peekable();
        let col_at = |byte: usize| line[..body_start + byte].chars().count() + 1;
        let mut ok = true;
        while let Some((i, ch)) = chars.next() {
            if ch.is_whitespace() {
                continue;
            }
            if ch != '{' {
                errs.push(diag(col_at(i), FileErrorKind::ExpectedCell(ch)));
                ok = false;
                break;
            }
            let mut content = String::new();
            let mut closed = false;
            for (_, c) in chars.by_ref() {
                if c == '}' {
                    closed = true;
                    break;
                }
                content.push(c);
            }
            if !closed {
                errs.push(diag(col_at(i), FileErrorKind::UnterminatedCell));
                ok = false;
                break;
            }
            let names: Vec<String> =
                content.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::to_string).collect();
            cells.push(names);
            columns.push(col_at(i));
        }
        if ok {
            raw.rows.push(RawRow { name: name.to_string(), cells });
            pos.rows.push((line_no, columns));
        }
    }
    if !have_header {
        errs.push(Diagnostic { line: 1, column: 1, kind: FileErrorKind::MissingHeader });
    }
    if errs.is_empty() {
        Ok((raw, pos))
    } else {
        Err(errs)
    }
}

fn column_of(line: &str, needle: &str) -> usize {
    let byte = needle.as_ptr() as usize - line.as_ptr() as usize;
    line[..byte].chars().count() + 1
}

/// Canonical text form; `parse_table_file(&format_table_file(t)) == t`.
pub fn format_table_file(t: &HyperTable) -> String {
    let mut out = String::from("elements:");
    for name in t.names() {
        out.push(' ');
        out.push_str(name);
    }
    out.push('\n');
    for a in 0..t.n() {
        out.push_str(t.name(a));
        out.push(':');
        for b in 0..t.n() {
            out.push(' ');
            out.push_str(&t.fmt_set(t.entry(a, b)));
        }
        out.push('\n');
    }
    out
}
