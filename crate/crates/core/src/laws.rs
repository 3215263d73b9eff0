//! A fixed catalog of identities and exhaustive/sampled checkers that report
//! the lexicographically first counterexample.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::elemset::ElemSet;
use crate::table::HyperTable;

/// Largest carrier for exhaustive quantification over nonempty subsets.
pub const MAX_EXHAUSTIVE_SET_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LawId {
    /// `(a∘b)*{c} = (c∘b)*{a}`
    LeftInvertive,
    /// `(a∘b)*{c} = {a}*(b∘c)`
    Associative,
    /// `(a∘a)*{a} = {a}*(a∘a)`
    LocallyAssociative,
    /// `a∘b = b∘a`
    Commutative,
    /// `(a∘b)*(c∘d) = (a∘c)*(b∘d)`
    Medial,
    /// `(A*B)*C = (C*B)*A`
    SetLeftInvertive,
    /// `(A*B)*(C*D) = (A*C)*(B*D)`
    SetMedial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LawScope {
    Element,
    Set,
}

impl LawId {
    pub const ALL: [LawId; 7] = [
        LawId::LeftInvertive,
        LawId::Associative,
        LawId::LocallyAssociative,
        LawId::Commutative,
        LawId::Medial,
        LawId::SetLeftInvertive,
        LawId::SetMedial,
    ];

    pub const ELEMENT: [LawId; 5] =
        [LawId::LeftInvertive, LawId::Associative, LawId::LocallyAssociative, LawId::Commutative, LawId::Medial];

    pub fn scope(self) -> LawScope {
        match self {
            LawId::SetLeftInvertive | LawId::SetMedial => LawScope::Set,
            _ => LawScope::Element,
        }
    }

    /// Number of quantified variables.
    pub fn arity(self) -> usize {
        match self {
            LawId::LocallyAssociative => 1,
            LawId::Commutative => 2,
            LawId::LeftInvertive | LawId::Associative | LawId::SetLeftInvertive => 3,
            LawId::Medial | LawId::SetMedial => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LawId::LeftInvertive => "LeftInvertive",
            LawId::Associative => "Associative",
            LawId::LocallyAssociative => "LocallyAssociative",
            LawId::Commutative => "Commutative",
            LawId::Medial => "Medial",
            LawId::SetLeftInvertive => "SetLeftInvertive",
            LawId::SetMedial => "SetMedial",
        }
    }

    /// The identity in the corrected notation, with the given variable names.
    pub fn statement(self) -> &'static str {
        match self {
            LawId::LeftInvertive => "(a∘b)*{c} = (c∘b)*{a}",
            LawId::Associative => "(a∘b)*{c} = {a}*(b∘c)",
            LawId::LocallyAssociative => "(a∘a)*{a} = {a}*(a∘a)",
            LawId::Commutative => "a∘b = b∘a",
            LawId::Medial => "(a∘b)*(c∘d) = (a∘c)*(b∘d)",
            LawId::SetLeftInvertive => "(A*B)*C = (C*B)*A",
            LawId::SetMedial => "(A*B)*(C*D) = (A*C)*(B*D)",
        }
    }
}

impl fmt::Display for LawId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown law {0:?}")]
pub struct UnknownLaw(pub String);

impl FromStr for LawId {
    type Err = UnknownLaw;

    /// Accepts the catalog names case-insensitively, with or without `-`/`_`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s.chars().filter(|c| *c != '-' && *c != '_').collect::<String>().to_ascii_lowercase();
        LawId::ALL
            .into_iter()
            .find(|l| l.name().to_ascii_lowercase() == key)
            .ok_or_else(|| UnknownLaw(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LawError {
    #[error("{0} quantifies over subsets; use the set-law checker")]
    NotElementLaw(LawId),
    #[error("{0} quantifies over elements; use the element-law checker")]
    NotSetLaw(LawId),
    #[error("exhaustive subset quantification needs n ≤ {MAX_EXHAUSTIVE_SET_ORDER}, table has n = {0}")]
    ExhaustiveTooLarge(usize),
    #[error("sampled checking needs at least one sample")]
    NoSamples,
}

/// The quantified values of one law instance, in quantifier order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Instance {
    Elements(Vec<usize>),
    Sets(Vec<ElemSet>),
}

/// A violated instance with both sides fully evaluated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub tuple: Instance,
    pub lhs: ElemSet,
    pub rhs: ElemSet,
}

impl Witness {
    /// Evaluates both sides of `law` at this witness's tuple again.
    pub fn reevaluate(&self, t: &HyperTable, law: LawId) -> (ElemSet, ElemSet) {
        match &self.tuple {
            Instance::Elements(xs) => eval_element_law(t, law, xs),
            Instance::Sets(xs) => eval_set_law(t, law, xs),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Every instance was checked and none is violated.
    Holds,
    /// A violated instance exists; see the witness.
    Fails,
    /// Sampled scope only: no sampled instance is violated.
    NoViolationFound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetScope {
    Exhaustive,
    Sampled { seed: u64, count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport {
    pub law: LawId,
    pub verdict: Verdict,
    pub first_witness: Option<Witness>,
    pub violation_count: Option<u64>,
    /// Size of the domain each variable ranges over (`n`, or `2^n - 1`).
    pub domain: u64,
    /// Number of instances examined.
    pub instances: u64,
    /// Present when the report comes from sampling.
    pub sampled: Option<(u64, usize)>,
}

impl LawReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn fails(&self) -> bool {
        self.verdict == Verdict::Fails
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    /// Run a second pass that counts every violated instance.
    pub count_violations: bool,
    /// Worker threads for exhaustive scans; 0 and 1 both mean sequential.
    pub workers: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { count_violations: false, workers: 1 }
    }
}

/// Evaluates an element-scope law at `tuple`, reading entries through
/// `entry`. Returns `None` as soon as `entry` does; the search module uses
/// that to detect instances that depend on entries not yet assigned.
#[inline]
pub fn eval_element_law_with<F>(law: LawId, tuple: &[usize], entry: &mut F) -> Option<(ElemSet, ElemSet)>
where
    F: FnMut(usize, usize) -> Option<ElemSet>,
{
    let s = ElemSet::singleton;
    Some(match law {
        LawId::LeftInvertive => {
            let (a, b, c) = (tuple[0], tuple[1], tuple[2]);
            let ab = entry(a, b)?;
            let cb = entry(c, b)?;
            (product_with(ab, s(c), entry)?, product_with(cb, s(a), entry)?)
        }
        LawId::Associative => {
            let (a, b, c) = (tuple[0], tuple[1], tuple[2]);
            let ab = entry(a, b)?;
            let bc = entry(b, c)?;
            (product_with(ab, s(c), entry)?, product_with(s(a), bc, entry)?)
        }
        LawId::LocallyAssociative => {
            let a = tuple[0];
            let aa = entry(a, a)?;
            (product_with(aa, s(a), entry)?, product_with(s(a), aa, entry)?)
        }
        LawId::Commutative => (entry(tuple[0], tuple[1])?, entry(tuple[1], tuple[0])?),
        LawId::Medial => {
            let (a, b, c, d) = (tuple[0], tuple[1], tuple[2], tuple[3]);
            let ab = entry(a, b)?;
            let cd = entry(c, d)?;
            let ac = entry(a, c)?;
            let bd = entry(b, d)?;
            (product_with(ab, cd, entry)?, product_with(ac, bd, entry)?)
        }
        LawId::SetLeftInvertive | LawId::SetMedial => panic!("{law} is not an element-scope law"),
    })
}

#[inline]
fn product_with<F>(lhs: ElemSet, rhs: ElemSet, entry: &mut F) -> Option<ElemSet>
where
    F: FnMut(usize, usize) -> Option<ElemSet>,
{
    let mut acc = ElemSet::EMPTY;
    for a in lhs {
        for b in rhs {
            acc = acc.union(entry(a, b)?);
        }
    }
    Some(acc)
}

/// Both sides of an element-scope law at `tuple`.
pub fn eval_element_law(t: &HyperTable, law: LawId, tuple: &[usize]) -> (ElemSet, ElemSet) {
    eval_element_law_with(law, tuple, &mut |a, b| Some(t.entry(a, b))).expect("total table")
}

/// Both sides of a set-scope law at `tuple`.
pub fn eval_set_law(t: &HyperTable, law: LawId, tuple: &[ElemSet]) -> (ElemSet, ElemSet) {
    let p = |x, y| t.product(x, y);
    match law {
        LawId::SetLeftInvertive => {
            let (a, b, c) = (tuple[0], tuple[1], tuple[2]);
            (p(p(a, b), c), p(p(c, b), a))
        }
        LawId::SetMedial => {
            let (a, b, c, d) = (tuple[0], tuple[1], tuple[2], tuple[3]);
            (p(p(a, b), p(c, d)), p(p(a, c), p(b, d)))
        }
        _ => panic!("{law} is not a set-scope law"),
    }
}

pub fn check_law(t: &HyperTable, law: LawId) -> Result<LawReport, LawError> {
    check_law_with(t, law, &CheckOptions::default())
}

/// True when an element-scope law holds on `t`.
pub fn law_holds(t: &HyperTable, law: LawId) -> bool {
    let n = t.n();
    first_violation(n, law.arity(), 0..n, &|xs| {
        let (l, r) = eval_element_law(t, law, xs);
        (l != r).then_some((l, r))
    })
    .is_none()
}

/// Exhaustive check of an element-scope law over all `n^arity` tuples.
pub fn check_law_with(t: &HyperTable, law: LawId, opts: &CheckOptions) -> Result<LawReport, LawError> {
    if law.scope() != LawScope::Element {
        return Err(LawError::NotElementLaw(law));
    }
    let n = t.n();
    let test = |xs: &[usize]| {
        let (l, r) = eval_element_law(t, law, xs);
        (l != r).then_some((l, r))
    };
    let (first, count) = scan(n, law.arity(), opts, &test);
    let first_witness = first.map(|(xs, lhs, rhs)| Witness { tuple: Instance::Elements(xs), lhs, rhs });
    Ok(LawReport {
        law,
        verdict: if first_witness.is_some() { Verdict::Fails } else { Verdict::Holds },
        first_witness,
        violation_count: count,
        domain: n as u64,
        instances: (n as u64).pow(law.arity() as u32),
        sampled: None,
    })
}

/// Check of a set-scope law over nonempty subsets. Subset tuples are ordered
/// lexicographically by bitmask value.
pub fn check_set_law(t: &HyperTable, law: LawId, scope: SetScope) -> Result<LawReport, LawError> {
    check_set_law_with(t, law, scope, &CheckOptions::default())
}

pub fn check_set_law_with(
    t: &HyperTable,
    law: LawId,
    scope: SetScope,
    opts: &CheckOptions,
) -> Result<LawReport, LawError> {
    if law.scope() != LawScope::Set {
        return Err(LawError::NotSetLaw(law));
    }
    let n = t.n();
    let domain = ElemSet::full(n).bits();
    let arity = law.arity();
    let as_sets = |xs: &[usize]| xs.iter().map(|&x| ElemSet::from_bits(x as u64 + 1)).collect::<Vec<_>>();
    match scope {
        SetScope::Exhaustive => {
            if n > MAX_EXHAUSTIVE_SET_ORDER {
                return Err(LawError::ExhaustiveTooLarge(n));
            }
            let test = |xs: &[usize]| {
                let (l, r) = eval_set_law(t, law, &as_sets(xs));
                (l != r).then_some((l, r))
            };
            let (first, count) = scan(domain as usize, arity, opts, &test);
            let first_witness = first.map(|(xs, lhs, rhs)| Witness { tuple: Instance::Sets(as_sets(&xs)), lhs, rhs });
            Ok(LawReport {
                law,
                verdict: if first_witness.is_some() { Verdict::Fails } else { Verdict::Holds },
                first_witness,
                violation_count: count,
                domain,
                instances: domain.pow(arity as u32),
                sampled: None,
            })
        }
        SetScope::Sampled { seed, count } => {
            if count == 0 {
                return Err(LawError::NoSamples);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut first: Option<Witness> = None;
            let mut violations = 0u64;
            let mut tuple = vec![ElemSet::EMPTY; arity];
            for _ in 0..count {
                for slot in tuple.iter_mut() {
                    *slot = ElemSet::from_bits(rng.gen_range(1..=domain));
                }
                let (lhs, rhs) = eval_set_law(t, law, &tuple);
                if lhs != rhs {
                    violations += 1;
                    let w = Witness { tuple: Instance::Sets(tuple.clone()), lhs, rhs };
                    if first.as_ref().is_none_or(|f| w.tuple < f.tuple) {
                        first = Some(w);
                    }
                }
            }
            Ok(LawReport {
                law,
                verdict: if first.is_some() { Verdict::Fails } else { Verdict::NoViolationFound },
                first_witness: first,
                violation_count: opts.count_violations.then_some(violations),
                domain,
                instances: count as u64,
                sampled: Some((seed, count)),
            })
        }
    }
}

/// Every violated instance in lexicographic order (element laws, or set laws
/// with `n ≤ 4`).
pub fn all_witnesses(t: &HyperTable, law: LawId) -> Result<Vec<Witness>, LawError> {
    let n = t.n();
    let mut out = Vec::new();
    match law.scope() {
        LawScope::Element => {
            for_each_tuple(n, law.arity(), 0..n, |xs| {
                let (lhs, rhs) = eval_element_law(t, law, xs);
                if lhs != rhs {
                    out.push(Witness { tuple: Instance::Elements(xs.to_vec()), lhs, rhs });
                }
                true
            });
        }
        LawScope::Set => {
            if n > MAX_EXHAUSTIVE_SET_ORDER {
                return Err(LawError::ExhaustiveTooLarge(n));
            }
            let domain = ElemSet::full(n).bits() as usize;
            for_each_tuple(domain, law.arity(), 0..domain, |xs| {
                let sets: Vec<_> = xs.iter().map(|&x| ElemSet::from_bits(x as u64 + 1)).collect();
                let (lhs, rhs) = eval_set_law(t, law, &sets);
                if lhs != rhs {
                    out.push(Witness { tuple: Instance::Sets(sets), lhs, rhs });
                }
                true
            });
        }
    }
    Ok(out)
}

type Found = Option<(Vec<usize>, ElemSet, ElemSet)>;

/// First violation in lexicographic order, then (when asked) a second pass
/// counting all of them. With several workers the first coordinate is split
/// into contiguous blocks; the lowest block holding a violation supplies the
/// witness, so the result does not depend on the worker count.
fn scan<F>(domain: usize, arity: usize, opts: &CheckOptions, test: &F) -> (Found, Option<u64>)
where
    F: Fn(&[usize]) -> Option<(ElemSet, ElemSet)> + Sync,
{
    let workers = opts.workers.max(1).min(domain.max(1));
    let blocks = split(domain, workers);
    let first = if workers == 1 {
        first_violation(domain, arity, 0..domain, test)
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = blocks
                .iter()
                .cloned()
                .map(|block| s.spawn(move || first_violation(domain, arity, block, test)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("scan worker panicked")).find(Option::is_some).flatten()
        })
    };
    let count = match (&first, opts.count_violations) {
        (_, false) => None,
        (None, true) => Some(0),
        (Some(_), true) if workers == 1 => Some(count_violations(domain, arity, 0..domain, test)),
        (Some(_), true) => Some(std::thread::scope(|s| {
            let handles: Vec<_> = blocks
                .iter()
                .cloned()
                .map(|block| s.spawn(move || count_violations(domain, arity, block, test)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("scan worker panicked")).sum()
        })),
    };
    (first, count)
}

fn split(domain: usize, workers: usize) -> Vec<std::ops::Range<usize>> {
    let base = domain / workers;
    let extra = domain % workers;
    let mut start = 0;
    (0..workers)
        .map(|w| {
            let len = base + usize::from(w < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

fn first_violation<F>(domain: usize, arity: usize, first: std::ops::Range<usize>, test: &F) -> Found
where
    F: Fn(&[usize]) -> Option<(ElemSet, ElemSet)>,
{
    let mut found = None;
    for_each_tuple(domain, arity, first, |xs| match test(xs) {
        Some((l, r)) => {
            found = Some((xs.to_vec(), l, r));
            false
        }
        None => true,
    });
    found
}

fn count_violations<F>(domain: usize, arity: usize, first: std::ops::Range<usize>, test: &F) -> u64
where
    F: Fn(&[usize]) -> Option<(ElemSet, ElemSet)>,
{
    let mut count = 0;
    for_each_tuple(domain, arity, first, |xs| {
        count += u64::from(test(xs).is_some());
        true
    });
    count
}

/// Visits tuples in lexicographic order with the first coordinate restricted
/// to `first`. Stops when `visit` returns false.
fn for_each_tuple<V>(domain: usize, arity: usize, first: std::ops::Range<usize>, mut visit: V)
where
    V: FnMut(&[usize]) -> bool,
{
    if arity == 0 || first.is_empty() || domain == 0 {
        return;
    }
    let mut xs = vec![0; arity];
    xs[0] = first.start;
    loop {
        if !visit(&xs) {
            return;
        }
        let mut i = arity - 1;
        loop {
            xs[i] += 1;
            let limit = if i == 0 { first.end } else { domain };
            if xs[i] < limit {
                break;
            }
            if i == 0 {
                return;
            }
            xs[i] = 0;
            i -= 1;
        }
    }
}
