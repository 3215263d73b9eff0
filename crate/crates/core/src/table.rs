//! Finite hypergroupoids: the Cayley table, the hyperoperation and the
//! product it induces on nonempty subsets.

use std::fmt;

use thiserror::Error;

use crate::elemset::{ElemSet, MAX_ORDER};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("element index {index} out of range for a carrier of size {n}")]
    ElementOutOfRange { index: usize, n: usize },
    #[error("operand must be a nonempty subset of the carrier")]
    EmptyOperand,
    #[error("set {bits:#b} has members outside a carrier of size {n}")]
    SetOutOfRange { bits: u64, n: usize },
}

/// A finite hypergroupoid `(H, ∘)` with `|H| = n ≤ 64`.
///
/// Entries are stored row-major: `entry(a, b)` is `a ∘ b`. Every entry is a
/// nonempty subset of the carrier; construction goes through
/// [`validate_table`] or [`HyperTable::from_entries`], both of which enforce
/// that, and the table is never mutated afterwards.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HyperTable {
    names: Vec<String>,
    entries: Vec<ElemSet>,
}

impl HyperTable {
    /// Builds a table from names and row-major entries.
    pub fn from_entries(names: Vec<String>, entries: Vec<ElemSet>) -> Result<Self, Vec<TableViolation>> {
        let n = names.len();
        if entries.len() != n * n {
            return Err(vec![TableViolation::table(ViolationKind::WrongEntryCount {
                expected: n * n,
                found: entries.len(),
            })]);
        }
        let name_of = |x: usize| names.get(x).cloned().unwrap_or_else(|| format!("#{x}"));
        let rows = entries
            .chunks(n.max(1))
            .zip(&names)
            .map(|(row, name)| RawRow {
                name: name.clone(),
                cells: row.iter().map(|s| s.iter().map(name_of).collect()).collect(),
            })
            .collect();
        validate_table(&RawTable { names: names.clone(), rows })
    }

    /// Builds a table over the default names `a, b, c, ...`.
    pub fn from_bits(n: usize, entries: &[u64]) -> Result<Self, Vec<TableViolation>> {
        Self::from_entries(default_names(n), entries.iter().map(|&b| ElemSet::from_bits(b)).collect())
    }

    /// Every entry equal to `H`.
    pub fn total(n: usize) -> Self {
        assert!((1..=MAX_ORDER).contains(&n));
        HyperTable { names: default_names(n), entries: vec![ElemSet::full(n); n * n] }
    }

    /// Every entry equal to `{x}` for the first element `x`.
    pub fn constant(n: usize) -> Self {
        assert!((1..=MAX_ORDER).contains(&n));
        HyperTable { names: default_names(n), entries: vec![ElemSet::singleton(0); n * n] }
    }

    /// Crate-internal constructor for entries already known to be valid.
    pub(crate) fn from_valid_parts(names: Vec<String>, entries: Vec<ElemSet>) -> Self {
        debug_assert_eq!(entries.len(), names.len() * names.len());
        debug_assert!(entries.iter().all(|e| !e.is_empty() && e.within(names.len())));
        HyperTable { names, entries }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, elem: usize) -> &str {
        &self.names[elem]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|x| x == name)
    }

    /// The carrier `H` as a set.
    #[inline]
    pub fn carrier(&self) -> ElemSet {
        ElemSet::full(self.n())
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[ElemSet] {
        &self.entries
    }

    /// `a ∘ b` without bounds checking beyond the slice index.
    #[inline]
    pub fn entry(&self, a: usize, b: usize) -> ElemSet {
        self.entries[a * self.n() + b]
    }

    /// The hyperoperation `a ∘ b`.
    pub fn hyper(&self, a: usize, b: usize) -> Result<ElemSet, CoreError> {
        let n = self.n();
        for index in [a, b] {
            if index >= n {
                return Err(CoreError::ElementOutOfRange { index, n });
            }
        }
        Ok(self.entry(a, b))
    }

    /// The induced product `A * B`, the union of `a ∘ b` over `a ∈ A`, `b ∈ B`.
    ///
    /// Both operands must be nonempty subsets of the carrier.
    pub fn set_product(&self, lhs: ElemSet, rhs: ElemSet) -> Result<ElemSet, CoreError> {
        self.check_operand(lhs)?;
        self.check_operand(rhs)?;
        Ok(self.product(lhs, rhs))
    }

    /// Unchecked `A * B`; callers guarantee both operands are valid.
    #[inline]
    pub fn product(&self, lhs: ElemSet, rhs: ElemSet) -> ElemSet {
        let n = self.n();
        let mut acc = 0u64;
        for a in lhs {
            let row = &self.entries[a * n..a * n + n];
            for b in rhs {
                acc |= row[b].bits();
            }
        }
        ElemSet::from_bits(acc)
    }

    pub fn check_operand(&self, set: ElemSet) -> Result<(), CoreError> {
        if set.is_empty() {
            return Err(CoreError::EmptyOperand);
        }
        if !set.within(self.n()) {
            return Err(CoreError::SetOutOfRange { bits: set.bits(), n: self.n() });
        }
        Ok(())
    }

    /// The image `π(t)` of the table under the bijection `perm`, where
    /// `π(t).entry(π(a), π(b)) = π(entry(a, b))`. The element named `x` at
    /// index `a` moves to index `perm[a]`, keeping its name.
    pub fn permute(&self, perm: &[usize]) -> HyperTable {
        let n = self.n();
        assert!(is_permutation(perm, n), "not a permutation of 0..{n}");
        let mut names = vec![String::new(); n];
        let mut entries = vec![ElemSet::EMPTY; n * n];
        for a in 0..n {
            names[perm[a]] = self.names[a].clone();
            for b in 0..n {
                entries[perm[a] * n + perm[b]] = self.entry(a, b).map(perm);
            }
        }
        HyperTable { names, entries }
    }

    /// Same table with different element names.
    pub fn with_names(&self, names: Vec<String>) -> Result<HyperTable, Vec<TableViolation>> {
        HyperTable::from_entries(names, self.entries.clone())
    }

    /// Parses a set written as `{a,b}` against this table's names.
    pub fn parse_set(&self, text: &str) -> Option<ElemSet> {
        let inner = text.trim().strip_prefix('{')?.strip_suffix('}')?;
        let mut set = ElemSet::EMPTY;
        for name in inner.split(',') {
            let name = name.trim();
            if name.is_empty() {
                continue;
            }
            set.insert(self.index_of(name)?);
        }
        Some(set)
    }

    pub fn fmt_set(&self, set: ElemSet) -> String {
        set.display(&self.names).to_string()
    }
}

impl fmt::Debug for HyperTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "HyperTable {{ n: {} }}", self.n())?;
        for a in 0..self.n() {
            write!(f, "  {}:", self.names[a])?;
            for b in 0..self.n() {
                write!(f, " {}", self.fmt_set(self.entry(a, b)))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn default_names(n: usize) -> Vec<String> {
    const ALPHABET: &[u8] = b"abcdefghijklmnopqrstuvwxyz";
    (0..n)
        .map(|i| {
            if i < ALPHABET.len() {
                (ALPHABET[i] as char).to_string()
            } else {
                format!("e{i}")
            }
        })
        .collect()
}

pub(crate) fn is_permutation(perm: &[usize], n: usize) -> bool {
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    perm.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

/// Unchecked table data, as produced by a parser.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawTable {
    pub names: Vec<String>,
    pub rows: Vec<RawRow>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawRow {
    pub name: String,
    /// One list of element names per column.
    pub cells: Vec<Vec<String>>,
}

/// One problem found by [`validate_table`]. `row` indexes
/// [`RawTable::rows`], `col` indexes the cells of that row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableViolation {
    pub row: Option<usize>,
    pub col: Option<usize>,
    pub kind: ViolationKind,
}

impl TableViolation {
    fn table(kind: ViolationKind) -> Self {
        TableViolation { row: None, col: None, kind }
    }
}

impl fmt::Display for TableViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.row, self.col) {
            (Some(r), Some(c)) => write!(f, "row {}, column {}: {}", r + 1, c + 1, self.kind),
            (Some(r), None) => write!(f, "row {}: {}", r + 1, self.kind),
            _ => write!(f, "{}", self.kind),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ViolationKind {
    #[error("the carrier must be nonempty")]
    EmptyCarrier,
    #[error("at most {MAX_ORDER} elements are supported, found {0}")]
    TooManyElements(usize),
    #[error("invalid element name {0:?}")]
    InvalidName(String),
    #[error("duplicate element name {0:?}")]
    DuplicateName(String),
    #[error("expected {expected} rows, found {found}")]
    RowCountMismatch { expected: usize, found: usize },
    #[error("expected {expected} cells, found {found}")]
    ColumnCountMismatch { expected: usize, found: usize },
    #[error("expected {expected} entries, found {found}")]
    WrongEntryCount { expected: usize, found: usize },
    #[error("row name {0:?} is not an element")]
    UnknownRow(String),
    #[error("row {0:?} appears more than once")]
    DuplicateRow(String),
    #[error("no row for element {0:?}")]
    MissingRow(String),
    #[error("empty entry; every product must be a nonempty subset")]
    EmptyEntry,
    #[error("unknown element {0:?}")]
    UnknownElement(String),
}

pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || matches!(c, '{' | '}' | ','))
}

/// Checks raw table data and builds a [`HyperTable`], or reports every
/// violation found.
///
/// Rows may appear in any order; row `r` of the result is the row whose name
/// is the `r`-th header element. Column `j` always refers to the `j`-th
/// header element.
pub fn validate_table(raw: &RawTable) -> Result<HyperTable, Vec<TableViolation>> {
    let n = raw.names.len();
    let mut errs = Vec::new();
    if n == 0 {
        errs.push(TableViolation::table(ViolationKind::EmptyCarrier));
        return Err(errs);
    }
    if n > MAX_ORDER {
        errs.push(TableViolation::table(ViolationKind::TooManyElements(n)));
        return Err(errs);
    }
    for (i, name) in raw.names.iter().enumerate() {
        if !is_valid_name(name) {
            errs.push(TableViolation::table(ViolationKind::InvalidName(name.clone())));
        } else if raw.names[..i].contains(name) {
            errs.push(TableViolation::table(ViolationKind::DuplicateName(name.clone())));
        }
    }
    if !errs.is_empty() {
        return Err(errs);
    }
    let lookup = |name: &str| raw.names.iter().position(|x| x == name);

    if raw.rows.len() != n {
        errs.push(TableViolation::table(ViolationKind::RowCountMismatch { expected: n, found: raw.rows.len() }));
    }

    let mut entries = vec![ElemSet::EMPTY; n * n];
    let mut row_seen = vec![false; n];
    for (r, row) in raw.rows.iter().enumerate() {
        let at = |col: Option<usize>, kind| TableViolation { row: Some(r), col, kind };
        let target = match lookup(&row.name) {
            Some(t) if row_seen[t] => {
                errs.push(at(None, ViolationKind::DuplicateRow(row.name.clone())));
                None
            }
            Some(t) => {
                row_seen[t] = true;
                Some(t)
            }
            None => {
                errs.push(at(None, ViolationKind::UnknownRow(row.name.clone())));
                None
            }
        };
        if row.cells.len() != n {
            errs.push(at(None, ViolationKind::ColumnCountMismatch { expected: n, found: row.cells.len() }));
        }
        for (c, cell) in row.cells.iter().enumerate() {
            if cell.is_empty() {
                errs.push(at(Some(c), ViolationKind::EmptyEntry));
                continue;
            }
            let mut set = ElemSet::EMPTY;
            for name in cell {
                match lookup(name) {
                    Some(x) => set.insert(x),
                    None => errs.push(at(Some(c), ViolationKind::UnknownElement(name.clone()))),
                }
            }
            if let Some(t) = target {
                if c < n {
                    entries[t * n + c] = set;
                }
            }
        }
    }
    if raw.rows.len() == n {
        for (t, seen) in row_seen.iter().enumerate() {
            if !seen {
                errs.push(TableViolation::table(ViolationKind::MissingRow(raw.names[t].clone())));
            }
        }
    }
    if errs.is_empty() {
        Ok(HyperTable { names: raw.names.clone(), entries })
    } else {
        Err(errs)
    }
}
