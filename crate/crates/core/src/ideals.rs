//! One-sided hyperideals and the bracketing analysis of `(m,n)`-hyperideals.
//!
//! An `(m,n)` check builds the factor sequence `A` (m times), `H`, `A`
//! (n times) and asks whether the product is contained in `A`. The product is
//! evaluated under the left-nested convention and under every other
//! bracketing, so the answer's dependence on the chosen parenthesization is
//! reported rather than hidden.

use std::fmt;

use thiserror::Error;

use crate::brackets::{self, BracketError, BracketTree};
use crate::elemset::ElemSet;
use crate::table::{CoreError, HyperTable};

/// Largest factor sequence `m + n + 1` accepted by the `(m,n)` check.
pub const MAX_MN_FACTORS: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    TwoSided,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
            Side::TwoSided => "two-sided",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdealKind {
    OneSided(Side),
    Mn { m: usize, n: usize },
}

/// A product `h∘a` (left) or `a∘h` (right) that leaves the subject.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Escape {
    pub side: Side,
    pub h: usize,
    pub a: usize,
    pub product: ElemSet,
    /// Members of `product` outside the subject.
    pub escaped: ElemSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealVerdict {
    pub subject: ElemSet,
    pub kind: IdealKind,
    /// One-sided: the containment itself. `(m,n)`: containment under the
    /// left-nested bracketing.
    pub holds_under_convention: bool,
    /// `(m,n)` only: two bracketings disagree on containment.
    pub bracketing_dependent: bool,
    /// `(m,n)` only: the first bracketing (enumeration order) whose product
    /// leaves the subject, when the verdicts disagree.
    pub failing_bracketing: Option<(BracketTree, ElemSet)>,
    /// One-sided only: the first offending pair.
    pub escape: Option<Escape>,
    /// `(m,n)` only: number of bracketings examined.
    pub bracketings: usize,
    /// `(m,n)` only: number of bracketings whose product is contained.
    pub bracketings_contained: usize,
}

impl IdealVerdict {
    /// One-sided: the containment holds. `(m,n)`: it holds under every
    /// bracketing.
    pub fn holds(&self) -> bool {
        match self.kind {
            IdealKind::OneSided(_) => self.holds_under_convention,
            IdealKind::Mn { .. } => self.holds_under_convention && !self.bracketing_dependent,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("(m,n) = (0,0) leaves no product to test")]
    NoProduct,
    #[error("m + n + 1 must be at most {MAX_MN_FACTORS}, got {0}")]
    TooManyFactors(usize),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Bracket(#[from] BracketError),
}

/// Left means `H*A ⊆ A`, right means `A*H ⊆ A`.
pub fn is_hyperideal(t: &HyperTable, subject: ElemSet, side: Side) -> Result<IdealVerdict, IdealError> {
    t.check_operand(subject)?;
    let escape = match side {
        Side::Left => first_escape(t, subject, Side::Left),
        Side::Right => first_escape(t, subject, Side::Right),
        Side::TwoSided => first_escape(t, subject, Side::Left).or_else(|| first_escape(t, subject, Side::Right)),
    };
    Ok(IdealVerdict {
        subject,
        kind: IdealKind::OneSided(side),
        holds_under_convention: escape.is_none(),
        bracketing_dependent: false,
        failing_bracketing: None,
        escape,
        bracketings: 0,
        bracketings_contained: 0,
    })
}

fn first_escape(t: &HyperTable, subject: ElemSet, side: Side) -> Option<Escape> {
    for h in 0..t.n() {
        for a in subject {
            let product = match side {
                Side::Left => t.entry(h, a),
                _ => t.entry(a, h),
            };
            if !product.is_subset(subject) {
                return Some(Escape { side, h, a, product, escaped: product.difference(subject) });
            }
        }
    }
    None
}

/// The factor sequence `[A; m] ++ [H] ++ [A; n]`.
pub fn mn_factors(t: &HyperTable, subject: ElemSet, m: usize, n: usize) -> Vec<ElemSet> {
    let mut factors = vec![subject; m];
    factors.push(t.carrier());
    factors.extend(std::iter::repeat_n(subject, n));
    factors
}

pub fn is_mn_hyperideal(t: &HyperTable, subject: ElemSet, m: usize, n: usize) -> Result<IdealVerdict, IdealError> {
    t.check_operand(subject)?;
    if m + n == 0 {
        return Err(IdealError::NoProduct);
    }
    let k = m + n + 1;
    if k > MAX_MN_FACTORS {
        return Err(IdealError::TooManyFactors(k));
    }
    let factors = mn_factors(t, subject, m, n);
    let convention = brackets::eval_bracketing(t, &factors, &BracketTree::left_nested(k))?;
    let holds_under_convention = convention.is_subset(subject);

    let trees = brackets::enumerate_bracketings(k)?;
    let bracketings = trees.len();
    let mut contained = 0;
    let mut first_failing = None;
    for tree in trees {
        let value = brackets::fold(t, &factors, &tree);
        if value.is_subset(subject) {
            contained += 1;
        } else if first_failing.is_none() {
            first_failing = Some((tree, value));
        }
    }
    let bracketing_dependent = contained != 0 && contained != bracketings;
    Ok(IdealVerdict {
        subject,
        kind: IdealKind::Mn { m, n },
        holds_under_convention,
        bracketing_dependent,
        failing_bracketing: if bracketing_dependent { first_failing } else { None },
        escape: None,
        bracketings,
        bracketings_contained: contained,
    })
}
