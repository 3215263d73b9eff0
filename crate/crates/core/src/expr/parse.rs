use std::fmt;

use thiserror::Error;

use super::{BinOp, Expr, ExprKind, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Op(BinOp),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Name(n) => write!(f, "`{n}`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Op(op) => write!(f, "`{}`", op.symbol()),
            Tok::End => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at {span}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: &'static str, found: String },
    #[error("empty set literal; subsets used in products must be nonempty")]
    EmptySetLiteral,
    #[error("unclosed `{{`")]
    UnclosedBrace,
    #[error("unclosed `(`")]
    UnclosedParen,
    #[error("unmatched `)`")]
    UnmatchedParen,
    #[error("operators do not associate; add parentheses around one of the products")]
    OperatorChain,
}

fn is_name_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '{' | '}' | '(' | ')' | ',' | '*' | '∘')
}

fn lex(input: &str) -> Vec<(Tok, Span)> {
    let mut out = Vec::new();
    let mut chars = input.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        let single = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '*' => Some(Tok::Op(BinOp::Star)),
            '∘' => Some(Tok::Op(BinOp::Hyper)),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            out.push((tok, Span::new(i, i + c.len_utf8())));
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let mut end = i;
        while let Some(&(j, d)) = chars.peek() {
            if !is_name_char(d) {
                break;
            }
            end = j + d.len_utf8();
            chars.next();
        }
        let word = &input[i..end];
        let tok = if word == "o" { Tok::Op(BinOp::Hyper) } else { Tok::Name(word.to_string()) };
        out.push((tok, Span::new(i, end)));
    }
    out.push((Tok::End, Span::new(input.len(), input.len())));
    out
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &(Tok, Span) {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(kind: ParseErrorKind, span: Span) -> Result<T, ParseError> {
        Err(ParseError { kind, span })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.operand()?;
        let Tok::Op(op) = self.peek().0 else {
            return Ok(lhs);
        };
        self.bump();
        let rhs = self.operand()?;
        if let (Tok::Op(_), span) = self.peek() {
            return Self::err(ParseErrorKind::OperatorChain, *span);
        }
        let span = lhs.span.join(rhs.span);
        Ok(Expr { kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span })
    }

    fn operand(&mut self) -> Result<Expr, ParseError> {
        let (tok, span) = self.bump();
        match tok {
            Tok::Name(name) => Ok(Expr { kind: ExprKind::Name(name), span }),
            Tok::LParen => {
                let mut inner = self.expr()?;
                match self.bump() {
                    (Tok::RParen, close) => {
                        inner.span = span.join(close);
                        Ok(inner)
                    }
                    (Tok::End, _) => Self::err(ParseErrorKind::UnclosedParen, span),
                    (other, at) => {
                        Self::err(ParseErrorKind::Unexpected { expected: "`)`", found: other.to_string() }, at)
                    }
                }
            }
            Tok::LBrace => self.set_literal(span),
            Tok::RParen => Self::err(ParseErrorKind::UnmatchedParen, span),
            other => Self::err(
                ParseErrorKind::Unexpected { expected: "an element name, `{` or `(`", found: other.to_string() },
                span,
            ),
        }
    }

    fn set_literal(&mut self, open: Span) -> Result<Expr, ParseError> {
        let mut names = Vec::new();
        if let (Tok::RBrace, close) = self.peek().clone() {
            self.bump();
            return Self::err(ParseErrorKind::EmptySetLiteral, open.join(close));
        }
        loop {
            match self.bump() {
                (Tok::Name(n), s) => names.push((n, s)),
                (Tok::End, _) => return Self::err(ParseErrorKind::UnclosedBrace, open),
                (other, at) => {
                    return Self::err(
                        ParseErrorKind::Unexpected { expected: "an element name", found: other.to_string() },
                        at,
                    )
                }
            }
            match self.bump() {
                (Tok::Comma, _) => continue,
                (Tok::RBrace, close) => {
                    return Ok(Expr { kind: ExprKind::SetLiteral(names), span: open.join(close) });
                }
                (Tok::End, _) => return Self::err(ParseErrorKind::UnclosedBrace, open),
                (other, at) => {
                    return Self::err(
                        ParseErrorKind::Unexpected { expected: "`,` or `}`", found: other.to_string() },
                        at,
                    )
                }
            }
        }
    }
}

/// Parses one expression; the whole input must be consumed.
pub fn parse(input: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(input), pos: 0 };
    let e = p.expr()?;
    match p.bump() {
        (Tok::End, _) => Ok(e),
        (Tok::RParen, span) => Parser::err(ParseErrorKind::UnmatchedParen, span),
        (other, span) => {
            Parser::err(ParseErrorKind::Unexpected { expected: "end of input", found: other.to_string() }, span)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(input: &str) -> ParseErrorKind {
        parse(input).unwrap_err().kind
    }

    #[test]
    fn parses_the_corrected_notation() {
        let e = parse("(d o d) * {b}").unwrap();
        let ExprKind::Binary(BinOp::Star, l, r) = &e.kind else { panic!("{e:?}") };
        assert!(matches!(l.kind, ExprKind::Binary(BinOp::Hyper, ..)));
        assert_eq!(l.span, Span::new(0, 7));
        assert_eq!(r.kind, ExprKind::SetLiteral(vec![("b".into(), Span::new(11, 12))]));
        assert_eq!(e.span, Span::new(0, 13));
    }

    #[test]
    fn unicode_and_ascii_hyperoperation_agree() {
        let a = parse("(b∘d)*{d}").unwrap();
        let b = parse("(b o d) * {d}").unwrap();
        assert!(a.same_shape(&b));
        // `o` inside a longer word is part of a name.
        assert_eq!(parse("foo").unwrap().kind, ExprKind::Name("foo".into()));
    }

    #[test]
    fn chains_need_parentheses() {
        let err = parse("a o b o c").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::OperatorChain);
        assert_eq!(err.span, Span::new(6, 7));
        assert_eq!(kind("{a} * {b} * {c}"), ParseErrorKind::OperatorChain);
        assert_eq!(kind("a o b * {c}"), ParseErrorKind::OperatorChain);
        assert!(parse("(a o b) * {c}").is_ok());
    }

    #[test]
    fn empty_set_literal_is_rejected() {
        let err = parse("{}").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::EmptySetLiteral);
        assert_eq!(err.span, Span::new(0, 2));
    }

    #[test]
    fn unbalanced_delimiters() {
        assert_eq!(kind("(a o b"), ParseErrorKind::UnclosedParen);
        assert_eq!(kind("a o b)"), ParseErrorKind::UnmatchedParen);
        assert_eq!(kind("{a, b"), ParseErrorKind::UnclosedBrace);
        assert_eq!(kind(")"), ParseErrorKind::UnmatchedParen);
        assert!(matches!(kind("{a,}"), ParseErrorKind::Unexpected { .. }));
        assert!(matches!(kind(""), ParseErrorKind::Unexpected { .. }));
        assert!(matches!(kind("a b"), ParseErrorKind::Unexpected { .. }));
        assert!(matches!(kind("{(a)}"), ParseErrorKind::Unexpected { .. }));
    }
}
