use std::fmt;

/// Largest supported carrier size; an [`ElemSet`] is a single `u64`.
pub const MAX_ORDER: usize = 64;

/// A subset of a carrier `{0, .., n-1}` stored as a bitmask.
///
/// Bit `i` is set when element `i` (header order of the table) is a member.
/// The empty set is representable so that nonemptiness can be checked at the
/// boundaries that require it instead of being baked into the type.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElemSet(u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        ElemSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub const fn singleton(elem: usize) -> Self {
        ElemSet(1 << elem)
    }

    /// The whole carrier of size `n`.
    #[inline]
    pub const fn full(n: usize) -> Self {
        if n >= 64 {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << n) - 1)
        }
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub const fn contains(self, elem: usize) -> bool {
        elem < 64 && (self.0 >> elem) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, elem: usize) {
        self.0 |= 1 << elem;
    }

    #[inline]
    pub const fn union(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 | other.0)
    }

    #[inline]
    pub const fn intersection(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & other.0)
    }

    #[inline]
    pub const fn difference(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & !other.0)
    }

    #[inline]
    pub const fn is_subset(self, other: ElemSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// True when no bit at or above `n` is set.
    #[inline]
    pub const fn within(self, n: usize) -> bool {
        self.is_subset(ElemSet::full(n))
    }

    /// Smallest member, if any.
    #[inline]
    pub const fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Members in ascending index order.
    #[inline]
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// Image of the set under an element map, `{ perm[x] : x in self }`.
    pub fn map(self, perm: &[usize]) -> ElemSet {
        self.iter().fold(ElemSet::EMPTY, |acc, x| {
            acc.union(ElemSet::singleton(perm[x]))
        })
    }

    /// Renders the set as `{a,b}` using the given element names.
    pub fn display<'a, S: AsRef<str>>(self, names: &'a [S]) -> Named<'a, S> {
        Named { set: self, names }
    }
}

impl FromIterator<usize> for ElemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ElemSet::EMPTY;
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl IntoIterator for ElemSet {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

pub struct Named<'a, S> {
    set: ElemSet,
    names: &'a [S],
}

impl<S: AsRef<str>> fmt::Display for Named<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.set.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match self.names.get(x) {
                Some(name) => f.write_str(name.as_ref())?,
                None => write!(f, "#{x}")?,
            }
        }
        f.write_str("}")
    }
}
