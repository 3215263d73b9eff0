use std::fmt;

use thiserror::Error;

use super::{BinOp, Expr, ExprKind, Span};
use crate::elemset::ElemSet;
use crate::table::HyperTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ty {
    Element,
    Set,
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ty::Element => "an element",
            Ty::Set => "a set",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedExpr {
    pub node: TypedNode,
    pub span: Span,
    pub ty: Ty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypedNode {
    Elem(usize),
    Set(ElemSet),
    Hyper(Box<TypedExpr>, Box<TypedExpr>),
    Star(Box<TypedExpr>, Box<TypedExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at {span}")]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeErrorKind {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("{} operand of {} must be {expected}, found {found}{}",
        if *.left { "left" } else { "right" }, .op.symbol(), hint(*.op, *.found))]
    Operand { op: BinOp, left: bool, expected: Ty, found: Ty },
    #[error("expression denotes an element, not a set; write `{{{0}}}` for the singleton")]
    BareElement(String),
}

fn hint(op: BinOp, found: Ty) -> &'static str {
    match (op, found) {
        (BinOp::Star, Ty::Element) => " (elements are not promoted; write `{x}`)",
        (BinOp::Hyper, Ty::Set) => " (use `*` for products of sets)",
        _ => "",
    }
}

/// Resolves names against `t` and checks operand types. Every error found is
/// reported, in source order.
pub fn typecheck(ast: &Expr, t: &HyperTable) -> Result<TypedExpr, Vec<TypeError>> {
    let mut errors = Vec::new();
    let typed = check(ast, t, &mut errors);
    if let (Some(e), true) = (&typed, errors.is_empty()) {
        if e.ty == Ty::Element {
            let TypedNode::Elem(x) = e.node else { unreachable!("only names are element-typed") };
            errors.push(TypeError { kind: TypeErrorKind::BareElement(t.name(x).to_string()), span: e.span });
        }
    }
    match typed {
        Some(e) if errors.is_empty() => Ok(e),
        _ => Err(errors),
    }
}

fn check(ast: &Expr, t: &HyperTable, errors: &mut Vec<TypeError>) -> Option<TypedExpr> {
    let span = ast.span;
    match &ast.kind {
        ExprKind::Name(name) => match t.index_of(name) {
            Some(x) => Some(TypedExpr { node: TypedNode::Elem(x), span, ty: Ty::Element }),
            None => {
                errors.push(TypeError { kind: TypeErrorKind::UnknownElement(name.clone()), span });
                None
            }
        },
        ExprKind::SetLiteral(names) => {
            let mut set = ElemSet::EMPTY;
            let mut ok = true;
            for (name, s) in names {
                match t.index_of(name) {
                    Some(x) => set.insert(x),
                    None => {
                        errors.push(TypeError { kind: TypeErrorKind::UnknownElement(name.clone()), span: *s });
                        ok = false;
                    }
                }
            }
            ok.then_some(TypedExpr { node: TypedNode::Set(set), span, ty: Ty::Set })
        }
        ExprKind::Binary(op, l, r) => {
            let expected = match op {
                BinOp::Hyper => Ty::Element,
                BinOp::Star => Ty::Set,
            };
            let l = check(l, t, errors);
            let r = check(r, t, errors);
            let mut ok = true;
            for (side, left) in [(&l, true), (&r, false)] {
                if let Some(e) = side {
                    if e.ty != expected {
                        errors.push(TypeError {
                            kind: TypeErrorKind::Operand { op: *op, left, expected, found: e.ty },
                            span: e.span,
                        });
                        ok = false;
                    }
                }
            }
            let (l, r) = (Box::new(l?), Box::new(r?));
            if !ok {
                return None;
            }
            let node = match op {
                BinOp::Hyper => TypedNode::Hyper(l, r),
                BinOp::Star => TypedNode::Star(l, r),
            };
            Some(TypedExpr { node, span, ty: Ty::Set })
        }
    }
}

/// Evaluates a checked expression: `x∘y` reads the table, a literal is its
/// set, `A*B` is the induced product.
pub fn eval_expr(e: &TypedExpr, t: &HyperTable) -> ElemSet {
    match &e.node {
        TypedNode::Elem(x) => ElemSet::singleton(*x),
        TypedNode::Set(s) => *s,
        TypedNode::Hyper(a, b) => {
            let (TypedNode::Elem(a), TypedNode::Elem(b)) = (&a.node, &b.node) else {
                unreachable!("typechecked ∘ operands are names")
            };
            t.entry(*a, *b)
        }
        TypedNode::Star(a, b) => t.product(eval_expr(a, t), eval_expr(b, t)),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{evaluate, parse, ExprError};
    use super::*;
    use crate::fixtures;

    fn type_errors(src: &str, t: &HyperTable) -> Vec<TypeError> {
        typecheck(&parse(src).unwrap(), t).unwrap_err()
    }

    #[test]
    fn hyperoperation_of_a_set_is_rejected() {
        let t = fixtures::table1();
        let errs = type_errors("(a o b) o d", &t);
        assert_eq!(errs.len(), 1);
        assert_eq!(
            errs[0].kind,
            TypeErrorKind::Operand { op: BinOp::Hyper, left: true, expected: Ty::Element, found: Ty::Set }
        );
        assert_eq!(errs[0].span, Span::new(0, 7));
        assert!(errs[0].kind.to_string().starts_with("left operand of ∘ must be an element, found a set"));

        let errs = type_errors("{a} o d", &t);
        assert_eq!(errs[0].span, Span::new(0, 3));
    }

    #[test]
    fn elements_are_not_promoted_under_star() {
        let t = fixtures::table1();
        let errs = type_errors("(a o b) * d", &t);
        assert_eq!(
            errs[0].kind,
            TypeErrorKind::Operand { op: BinOp::Star, left: false, expected: Ty::Set, found: Ty::Element }
        );
        assert!(typecheck(&parse("(a o b) * {d}").unwrap(), &t).is_ok());
    }

    #[test]
    fn unknown_names_and_bare_elements() {
        let t = fixtures::table1();
        let errs = type_errors("(a o z) * {q, b}", &t);
        let kinds: Vec<_> = errs.iter().map(|e| e.kind.clone()).collect();
        assert_eq!(kinds, vec![TypeErrorKind::UnknownElement("z".into()), TypeErrorKind::UnknownElement("q".into())]);
        assert_eq!(errs[0].span, Span::new(5, 6));
        assert_eq!(errs[1].span, Span::new(11, 12));
        assert_eq!(type_errors("a", &t)[0].kind, TypeErrorKind::BareElement("a".into()));
    }

    #[test]
    fn evaluates_worked_computations() {
        let t1 = fixtures::table1();
        let show = |src: &str, t: &HyperTable| t.fmt_set(evaluate(src, t).unwrap());
        assert_eq!(show("(d o d) * {b}", &t1), "{b}");
        assert_eq!(show("(b o d) * {d}", &t1), "{a,b}");
        assert_eq!(show("{a,c} * {d}", &t1), "{a,b}");
        assert_eq!(show("d o b", &t1), "{b}");
        let t2 = fixtures::table2();
        assert_eq!(show("(c o d) * {b}", &t2), "{a,b,c,d}");
        assert_eq!(show("(b ∘ d) * {c}", &t2), "{a,b,c}");
    }

    #[test]
    fn rendered_errors_point_at_the_span() {
        let t = fixtures::table1();
        let err = evaluate("{a} o d", &t).unwrap_err();
        assert!(matches!(err, ExprError::Type(_)));
        let text = err.render("{a} o d");
        assert!(text.contains("\n  {a} o d\n  ^^^"), "{text}");
    }
}
