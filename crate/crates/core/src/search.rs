//! Exhaustive enumeration of small hyperoperation tables satisfying chosen
//! laws, with isomorphism rejection by canonical forms.
//!
//! Entries are assigned in row-major order, each ranging over the nonempty
//! subsets in ascending bitmask order, so tables come out in lexicographic
//! order of their row-major encoding. After each assignment every law
//! instance whose entries have all been assigned is checked; instances are
//! evaluated through [`laws::eval_element_law_with`], which reads exactly
//! the entries an instance depends on (for the left invertive instance
//! `(x,y,z)`: `x∘y`, `z∘y`, then `u∘z` for `u ∈ x∘y` and `v∘x` for
//! `v ∈ z∘y`).

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use itertools::Itertools;
use thiserror::Error;

use crate::elemset::ElemSet;
use crate::laws::{self, LawId, LawScope};
use crate::table::{default_names, HyperTable};

/// Largest order for a full enumeration.
pub const MAX_ENUM_ORDER: usize = 4;
/// Largest order for canonical forms and isomorphism tests (n! relabelings).
pub const MAX_CANON_ORDER: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("enumeration needs 1 ≤ n ≤ {MAX_ENUM_ORDER}, got {0}")]
    EnumOrderOutOfRange(usize),
    #[error("canonical forms need n ≤ {MAX_CANON_ORDER}, got {0}")]
    CanonOrderOutOfRange(usize),
    #[error("{0} quantifies over subsets; only element-scope laws can drive the search")]
    NotElementLaw(LawId),
    #[error("tables have different orders ({0} and {1})")]
    SizeMismatch(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Count,
    Emit,
    CountIso,
    EmitIso,
}

impl SearchMode {
    pub fn up_to_iso(self) -> bool {
        matches!(self, SearchMode::CountIso | SearchMode::EmitIso)
    }

    pub fn emits(self) -> bool {
        matches!(self, SearchMode::Emit | SearchMode::EmitIso)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpec {
    pub n: usize,
    pub laws: Vec<LawId>,
    pub mode: SearchMode,
    /// Worker threads; the first entry's values are shared out among them.
    pub workers: usize,
    /// Check law instances as soon as their entries are assigned. When off,
    /// every complete table is generated and checked in full.
    pub prune: bool,
}

impl SearchSpec {
    pub fn new(n: usize, laws: &[LawId], mode: SearchMode) -> Self {
        SearchSpec { n, laws: laws.to_vec(), mode, workers: 1, prune: true }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn prune(mut self, prune: bool) -> Self {
        self.prune = prune;
        self
    }
}

/// Row-major entry bitmasks of the least relabeling of a table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(pub Vec<u8>);

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

fn encode(n: usize, entries: impl Iterator<Item = ElemSet>) -> Vec<u8> {
    debug_assert!(n <= MAX_CANON_ORDER);
    entries.map(|e| e.bits() as u8).collect()
}

pub fn canonical_form(t: &HyperTable) -> Result<CanonicalKey, SearchError> {
    let n = t.n();
    if n > MAX_CANON_ORDER {
        return Err(SearchError::CanonOrderOutOfRange(n));
    }
    Ok(CanonicalKey(canonical_bytes(n, t.entries())))
}

fn canonical_bytes(n: usize, entries: &[ElemSet]) -> Vec<u8> {
    let mut best: Option<Vec<u8>> = None;
    let mut image = vec![0u8; n * n];
    for perm in (0..n).permutations(n) {
        for a in 0..n {
            for b in 0..n {
                image[perm[a] * n + perm[b]] = entries[a * n + b].map(&perm).bits() as u8;
            }
        }
        if best.as_ref().is_none_or(|b| image < *b) {
            best = Some(image.clone());
        }
    }
    best.unwrap_or_default()
}

/// A bijection `φ` with `φ(t1(a,b)) = t2(φ(a),φ(b))`, the first in
/// lexicographic order of permutations.
pub fn are_isomorphic(t1: &HyperTable, t2: &HyperTable) -> Result<Option<Vec<usize>>, SearchError> {
    let n = t1.n();
    if n != t2.n() {
        return Err(SearchError::SizeMismatch(n, t2.n()));
    }
    if n > MAX_CANON_ORDER {
        return Err(SearchError::CanonOrderOutOfRange(n));
    }
    Ok((0..n).permutations(n).find(|phi| is_isomorphism(t1, t2, phi)))
}

/// Checks `φ(t1(a,b)) = t2(φ(a),φ(b))` for all `a, b`.
pub fn is_isomorphism(t1: &HyperTable, t2: &HyperTable, phi: &[usize]) -> bool {
    let n = t1.n();
    n == t2.n()
        && crate::table::is_permutation(phi, n)
        && (0..n).all(|a| (0..n).all(|b| t1.entry(a, b).map(phi) == t2.entry(phi[a], phi[b])))
}

struct Dfs<'a> {
    n: usize,
    max_value: u64,
    instances: &'a [(LawId, [usize; 4])],
    laws: &'a [LawId],
    prune: bool,
    iso: bool,
    entries: Vec<ElemSet>,
}

impl Dfs<'_> {
    fn run(&mut self, pos: usize, visit: &mut dyn FnMut(&[ElemSet])) {
        let cells = self.n * self.n;
        if pos == cells {
            if !self.prune {
                let t = HyperTable::from_valid_parts(default_names(self.n), self.entries.clone());
                if !self.laws.iter().all(|&l| laws::law_holds(&t, l)) {
                    return;
                }
            }
            if self.iso && canonical_bytes(self.n, &self.entries) != encode(self.n, self.entries.iter().copied()) {
                return;
            }
            visit(&self.entries);
            return;
        }
        for v in 1..=self.max_value {
            self.entries[pos] = ElemSet::from_bits(v);
            if self.prune && !self.consistent_at(pos) {
                continue;
            }
            self.run(pos + 1, visit);
        }
    }

    /// Checks every instance whose last-assigned dependency is `pos`.
    fn consistent_at(&self, pos: usize) -> bool {
        let n = self.n;
        for (law, tuple) in self.instances {
            let mut last = 0;
            let sides = laws::eval_element_law_with(*law, &tuple[..law.arity()], &mut |a, b| {
                let q = a * n + b;
                if q > pos {
                    return None;
                }
                last = last.max(q);
                Some(self.entries[q])
            });
            if let Some((l, r)) = sides {
                if last == pos && l != r {
                    return false;
                }
            }
        }
        true
    }
}

/// Visits every table of order `spec.n` satisfying `spec.laws` (one per
/// isomorphism class in the `*Iso` modes, namely the class member whose
/// encoding is its canonical key). `sink` sees tables in lexicographic order
/// in the emitting modes. Returns the number of tables (or classes).
pub fn enumerate_tables<S>(spec: &SearchSpec, mut sink: S) -> Result<u64, SearchError>
where
    S: FnMut(&HyperTable),
{
    let n = spec.n;
    if !(1..=MAX_ENUM_ORDER).contains(&n) {
        return Err(SearchError::EnumOrderOutOfRange(n));
    }
    if let Some(&l) = spec.laws.iter().find(|l| l.scope() != LawScope::Element) {
        return Err(SearchError::NotElementLaw(l));
    }
    let mut laws_sorted = spec.laws.clone();
    laws_sorted.sort();
    laws_sorted.dedup();
    let instances: Vec<(LawId, [usize; 4])> = laws_sorted
        .iter()
        .flat_map(|&law| {
            (0..law.arity()).map(|_| 0..n).multi_cartesian_product().map(move |xs| {
                let mut t = [0; 4];
                t[..xs.len()].copy_from_slice(&xs);
                (law, t)
            })
        })
        .collect();
    let max_value = ElemSet::full(n).bits();
    let emit = spec.mode.emits();
    let make_dfs = || Dfs {
        n,
        max_value,
        instances: &instances,
        laws: &laws_sorted,
        prune: spec.prune,
        iso: spec.mode.up_to_iso(),
        entries: vec![ElemSet::EMPTY; n * n],
    };
    let to_table = |entries: &[ElemSet]| HyperTable::from_valid_parts(default_names(n), entries.to_vec());

    let workers = spec.workers.max(1).min(max_value as usize);
    if workers == 1 {
        let mut count = 0u64;
        make_dfs().run(0, &mut |entries| {
            count += 1;
            if emit {
                sink(&to_table(entries));
            }
        });
        return Ok(count);
    }

    // One slot per value of the first entry; workers claim slots in order and
    // the slots are drained in order afterwards.
    let slots: Vec<Mutex<(u64, Vec<HyperTable>)>> =
        (0..max_value).map(|_| Mutex::new((0, Vec::new()))).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| {
                let mut dfs = make_dfs();
                loop {
                    let slot = next.fetch_add(1, Ordering::Relaxed);
                    if slot >= slots.len() {
                        break;
                    }
                    let mut count = 0u64;
                    let mut found = Vec::new();
                    dfs.entries[0] = ElemSet::from_bits(slot as u64 + 1);
                    if !dfs.prune || dfs.consistent_at(0) {
                        dfs.run(1, &mut |entries| {
                            count += 1;
                            if emit {
                                found.push(to_table(entries));
                            }
                        });
                    }
                    *slots[slot].lock().expect("slot lock") = (count, found);
                }
            });
        }
    });
    let mut total = 0;
    for slot in slots {
        let (count, tables) = slot.into_inner().expect("slot lock");
        total += count;
        for t in &tables {
            sink(t);
        }
    }
    Ok(total)
}

/// Collects every table the search emits, in emission order.
pub fn collect_tables(spec: &SearchSpec) -> Result<Vec<HyperTable>, SearchError> {
    let mut out = Vec::new();
    let mode = if spec.mode.up_to_iso() { SearchMode::EmitIso } else { SearchMode::Emit };
    let spec = SearchSpec { mode, ..spec.clone() };
    enumerate_tables(&spec, |t| out.push(t.clone()))?;
    Ok(out)
}
