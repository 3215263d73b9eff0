//! A small typed language for hyper-expressions.
//!
//! ```text
//! expr    := operand [ op operand ]
//! operand := name | '{' name (',' name)* '}' | '(' expr ')'
//! op      := 'o' | '∘' | '*'
//! ```
//!
//! `∘` takes two elements and yields a set; `*` takes two sets and yields a
//! set. There is no precedence and no associativity: a chain such as
//! `a o b o c` must be parenthesized, and an element is never silently
//! promoted to a singleton, so `(a o b) * c` must be written `(a o b) * {c}`.

mod parse;
mod typeck;

use std::fmt;

use thiserror::Error;

pub use parse::{parse, ParseError, ParseErrorKind};
pub use typeck::{eval_expr, typecheck, Ty, TypeError, TypeErrorKind, TypedExpr, TypedNode};

use crate::elemset::ElemSet;
use crate::table::HyperTable;

/// Byte range into the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span { start: self.start.min(other.start), end: self.end.max(other.end) }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    /// The hyperoperation `∘`.
    Hyper,
    /// The induced set product `*`.
    Star,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Hyper => "∘",
            BinOp::Star => "*",
        }
    }
}

/// Untyped syntax tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Name(String),
    SetLiteral(Vec<(String, Span)>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    /// Structural equality ignoring spans.
    pub fn same_shape(&self, other: &Expr) -> bool {
        match (&self.kind, &other.kind) {
            (ExprKind::Name(a), ExprKind::Name(b)) => a == b,
            (ExprKind::SetLiteral(a), ExprKind::SetLiteral(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.0 == y.0)
            }
            (ExprKind::Binary(o1, l1, r1), ExprKind::Binary(o2, l2, r2)) => {
                o1 == o2 && l1.same_shape(l2) && r1.same_shape(r2)
            }
            _ => false,
        }
    }
}

/// Canonical ASCII form: binary operands are parenthesized when they are
/// themselves binary, `∘` is written `o`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Name(n) => f.write_str(n),
            ExprKind::SetLiteral(names) => {
                f.write_str("{")?;
                for (i, (n, _)) in names.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    f.write_str(n)?;
                }
                f.write_str("}")
            }
            ExprKind::Binary(op, l, r) => {
                let op = match op {
                    BinOp::Hyper => "o",
                    BinOp::Star => "*",
                };
                for (i, side) in [l, r].into_iter().enumerate() {
                    if i == 1 {
                        write!(f, " {op} ")?;
                    }
                    if matches!(side.kind, ExprKind::Binary(..)) {
                        write!(f, "({side})")?;
                    } else {
                        write!(f, "{side}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("{0}")]
    Parse(ParseError),
    #[error("{}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
    Type(Vec<TypeError>),
}

impl ExprError {
    /// Every (span, message) pair carried by the error.
    pub fn spans(&self) -> Vec<(Span, String)> {
        match self {
            ExprError::Parse(e) => vec![(e.span, e.kind.to_string())],
            ExprError::Type(es) => es.iter().map(|e| (e.span, e.kind.to_string())).collect(),
        }
    }

    /// Each message followed by the source line with carets under the
    /// offending span.
    pub fn render(&self, source: &str) -> String {
        self.spans()
            .into_iter()
            .map(|(span, msg)| render_span(source, span, &msg))
            .collect::<Vec<_>>()
            .join("\nerror: ")
    }
}

pub fn render_span(source: &str, span: Span, message: &str) -> String {
    let start = source[..span.start.min(source.len())].chars().count();
    let width = source[span.start.min(source.len())..span.end.min(source.len())].chars().count().max(1);
    format!("{message}\n  {source}\n  {}{}", " ".repeat(start), "^".repeat(width))
}

/// Parses, typechecks and evaluates `source` against `t`.
pub fn evaluate(source: &str, t: &HyperTable) -> Result<ElemSet, ExprError> {
    let ast = parse(source).map_err(ExprError::Parse)?;
    let typed = typecheck(&ast, t).map_err(ExprError::Type)?;
    Ok(eval_expr(&typed, t))
}
