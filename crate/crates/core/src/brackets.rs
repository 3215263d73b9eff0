//! Parenthesizations of non-associative products and the families of values
//! a power `A^m` can take.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::elemset::ElemSet;
use crate::table::{CoreError, HyperTable};

/// Upper bound on the number of factors (Catalan growth guard).
pub const MAX_FACTORS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BracketError {
    #[error("number of factors must be between 1 and {MAX_FACTORS}, got {0}")]
    OutOfRange(usize),
    #[error("bracketing has {leaves} leaves but {factors} factors were given")]
    LeafCountMismatch { leaves: usize, factors: usize },
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// One full parenthesization of a product of `k` factors. Leaves hold the
/// factor positions `0..k` in left-to-right order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BracketTree {
    Leaf(usize),
    Node(Box<BracketTree>, Box<BracketTree>),
}

impl BracketTree {
    pub fn node(left: BracketTree, right: BracketTree) -> Self {
        BracketTree::Node(Box::new(left), Box::new(right))
    }

    pub fn leaves(&self) -> usize {
        match self {
            BracketTree::Leaf(_) => 1,
            BracketTree::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    pub fn internal_nodes(&self) -> usize {
        match self {
            BracketTree::Leaf(_) => 0,
            BracketTree::Node(l, r) => 1 + l.internal_nodes() + r.internal_nodes(),
        }
    }

    /// Leaf positions in left-to-right order.
    pub fn positions(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_positions(&mut out);
        out
    }

    fn collect_positions(&self, out: &mut Vec<usize>) {
        match self {
            BracketTree::Leaf(p) => out.push(*p),
            BracketTree::Node(l, r) => {
                l.collect_positions(out);
                r.collect_positions(out);
            }
        }
    }

    /// `((0 1) 2) ...`, the left-nested bracketing over `k ≥ 1` factors.
    pub fn left_nested(k: usize) -> Self {
        assert!(k >= 1);
        (1..k).fold(BracketTree::Leaf(0), |acc, i| BracketTree::node(acc, BracketTree::Leaf(i)))
    }

    /// Renders the bracketing with a custom leaf label and operator, e.g.
    /// `(A*A)*H`.
    pub fn render<L: Fn(usize) -> String>(&self, leaf: &L, op: &str) -> String {
        match self {
            BracketTree::Leaf(p) => leaf(*p),
            BracketTree::Node(l, r) => {
                let side = |t: &BracketTree| match t {
                    BracketTree::Leaf(_) => t.render(leaf, op),
                    _ => format!("({})", t.render(leaf, op)),
                };
                format!("{}{op}{}", side(l), side(r))
            }
        }
    }
}

/// Compact form: `(01)2`, `0(12)`. Positions above 9 are written `[10]`.
impl fmt::Display for BracketTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let leaf = |p: usize| if p < 10 { p.to_string() } else { format!("[{p}]") };
        f.write_str(&self.render(&leaf, ""))
    }
}

/// `Catalan(k)`, the number of bracketings of `k + 1` factors.
pub fn catalan(k: usize) -> u64 {
    // C(k+1) = C(k) * 2(2k+1) / (k+2)
    (0..k as u64).fold(1u64, |c, i| c * 2 * (2 * i + 1) / (i + 2))
}

/// All bracketings of `k` factors: split point ascending, then the left
/// subtree's order, then the right subtree's.
pub fn enumerate_bracketings(k: usize) -> Result<Vec<BracketTree>, BracketError> {
    if !(1..=MAX_FACTORS).contains(&k) {
        return Err(BracketError::OutOfRange(k));
    }
    Ok(trees_over(0, k))
}

fn trees_over(lo: usize, hi: usize) -> Vec<BracketTree> {
    if hi - lo == 1 {
        return vec![BracketTree::Leaf(lo)];
    }
    let mut out = Vec::new();
    for split in lo + 1..hi {
        let lefts = trees_over(lo, split);
        let rights = trees_over(split, hi);
        for l in &lefts {
            for r in &rights {
                out.push(BracketTree::node(l.clone(), r.clone()));
            }
        }
    }
    out
}

/// Folds the set product over `tree`; leaf `i` stands for `factors[i]`.
pub fn eval_bracketing(t: &HyperTable, factors: &[ElemSet], tree: &BracketTree) -> Result<ElemSet, BracketError> {
    let leaves = tree.leaves();
    if leaves != factors.len() || tree.positions() != (0..leaves).collect::<Vec<_>>() {
        return Err(BracketError::LeafCountMismatch { leaves, factors: factors.len() });
    }
    for &f in factors {
        t.check_operand(f)?;
    }
    Ok(fold(t, factors, tree))
}

pub(crate) fn fold(t: &HyperTable, factors: &[ElemSet], tree: &BracketTree) -> ElemSet {
    match tree {
        BracketTree::Leaf(p) => factors[*p],
        BracketTree::Node(l, r) => t.product(fold(t, factors, l), fold(t, factors, r)),
    }
}

/// The set of values reachable by some bracketing of `factors`, computed by
/// interval dynamic programming instead of per-tree evaluation. Sorted by
/// bitmask.
pub fn product_spread(t: &HyperTable, factors: &[ElemSet]) -> Result<Vec<ElemSet>, BracketError> {
    let k = factors.len();
    if !(1..=MAX_FACTORS).contains(&k) {
        return Err(BracketError::OutOfRange(k));
    }
    for &f in factors {
        t.check_operand(f)?;
    }
    // spread[i][j]: values of the sub-product over factors i..=j.
    let mut spread: Vec<Vec<BTreeSet<ElemSet>>> = vec![vec![BTreeSet::new(); k]; k];
    for (i, &f) in factors.iter().enumerate() {
        spread[i][i].insert(f);
    }
    for len in 2..=k {
        for i in 0..=k - len {
            let j = i + len - 1;
            let mut acc = BTreeSet::new();
            for s in i..j {
                for &l in &spread[i][s] {
                    for &r in &spread[s + 1][j] {
                        acc.insert(t.product(l, r));
                    }
                }
            }
            spread[i][j] = acc;
        }
    }
    Ok(spread[0][k - 1].iter().copied().collect())
}

/// Every bracketing of `base^exponent` with its value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerFamily {
    pub base: ElemSet,
    pub exponent: usize,
    pub outcomes: Vec<(BracketTree, ElemSet)>,
    /// Distinct values, ascending by bitmask.
    pub distinct_values: Vec<ElemSet>,
    pub well_defined: bool,
}

pub fn power_family(t: &HyperTable, base: ElemSet, exponent: usize) -> Result<PowerFamily, BracketError> {
    let trees = enumerate_bracketings(exponent)?;
    t.check_operand(base)?;
    let factors = vec![base; exponent];
    let outcomes: Vec<_> = trees
        .into_iter()
        .map(|tree| {
            let v = fold(t, &factors, &tree);
            (tree, v)
        })
        .collect();
    let distinct: BTreeSet<ElemSet> = outcomes.iter().map(|(_, v)| *v).collect();
    let distinct_values: Vec<_> = distinct.into_iter().collect();
    Ok(PowerFamily { base, exponent, well_defined: distinct_values.len() == 1, outcomes, distinct_values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn catalan_numbers() {
        let c: Vec<u64> = (0..8).map(catalan).collect();
        assert_eq!(c, vec![1, 1, 2, 5, 14, 42, 132, 429]);
        assert_eq!(catalan(11), 58786);
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_bracketings(1).unwrap(), vec![BracketTree::Leaf(0)]);
        let three: Vec<String> = enumerate_bracketings(3).unwrap().iter().map(|t| t.to_string()).collect();
        assert_eq!(three, vec!["0(12)", "(01)2"]);
        assert_eq!(enumerate_bracketings(5).unwrap().len(), 14);
        assert_eq!(enumerate_bracketings(0), Err(BracketError::OutOfRange(0)));
        assert_eq!(enumerate_bracketings(13), Err(BracketError::OutOfRange(13)));
    }

    #[test]
    fn trees_have_ordered_leaves_and_k_minus_one_nodes() {
        for k in 1..=7 {
            for tree in enumerate_bracketings(k).unwrap() {
                assert_eq!(tree.positions(), (0..k).collect::<Vec<_>>());
                assert_eq!(tree.internal_nodes(), k - 1);
            }
        }
    }

    #[test]
    fn display_of_wide_trees() {
        assert_eq!(BracketTree::left_nested(4).to_string(), "((01)2)3");
        assert!(BracketTree::left_nested(11).to_string().ends_with("9)[10]"));
    }

    #[test]
    fn cube_of_b_in_table1() {
        let t = fixtures::table1();
        let b = t.parse_set("{b}").unwrap();
        let trees = enumerate_bracketings(3).unwrap();
        for tree in &trees {
            assert_eq!(t.fmt_set(eval_bracketing(&t, &[b, b, b], tree).unwrap()), "{a,e}");
        }
        let fam = power_family(&t, b, 3).unwrap();
        assert!(fam.well_defined);
        assert_eq!(fam.distinct_values, vec![t.parse_set("{a,e}").unwrap()]);

        let d = t.parse_set("{d}").unwrap();
        let fam = power_family(&t, d, 3).unwrap();
        assert!(fam.well_defined);
        assert_eq!(fam.distinct_values, vec![d]);
    }

    #[test]
    fn first_power_is_the_base() {
        let t = fixtures::table2();
        let a = t.parse_set("{b,d}").unwrap();
        let fam = power_family(&t, a, 1).unwrap();
        assert!(fam.well_defined);
        assert_eq!(fam.distinct_values, vec![a]);
        assert_eq!(eval_bracketing(&t, &[a], &BracketTree::Leaf(0)).unwrap(), a);
    }

    #[test]
    fn structural_errors() {
        let t = fixtures::table2();
        let h = t.carrier();
        let tree = BracketTree::left_nested(3);
        assert_eq!(
            eval_bracketing(&t, &[h, h], &tree),
            Err(BracketError::LeafCountMismatch { leaves: 3, factors: 2 })
        );
        assert_eq!(
            eval_bracketing(&t, &[h, ElemSet::EMPTY, h], &tree),
            Err(BracketError::Core(CoreError::EmptyOperand))
        );
        assert_eq!(power_family(&t, ElemSet::EMPTY, 2), Err(BracketError::Core(CoreError::EmptyOperand)));
        assert_eq!(power_family(&t, h, 13), Err(BracketError::OutOfRange(13)));
    }

    #[test]
    fn spread_matches_per_tree_values_on_fixtures() {
        let t = fixtures::table1();
        for bits in 1..32u64 {
            let a = ElemSet::from_bits(bits);
            for m in 1..=5 {
                let fam = power_family(&t, a, m).unwrap();
                assert_eq!(product_spread(&t, &vec![a; m]).unwrap(), fam.distinct_values);
            }
        }
    }
}
