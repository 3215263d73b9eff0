//! Shared helpers for the integration tests, including brute-force oracles
//! that work on plain `BTreeSet`s and never call the library's products.
#![allow(dead_code)]

use std::collections::BTreeSet;

use lahyper::{ElemSet, HyperTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_table(n: usize, rng: &mut impl Rng) -> HyperTable {
    let max = (1u64 << n) - 1;
    let bits: Vec<u64> = (0..n * n).map(|_| rng.gen_range(1..=max)).collect();
    HyperTable::from_bits(n, &bits).unwrap()
}

pub fn random_subset(n: usize, rng: &mut impl Rng) -> ElemSet {
    ElemSet::from_bits(rng.gen_range(1..=(1u64 << n) - 1))
}

pub fn random_perm(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.gen_range(0..=i));
    }
    p
}

pub fn nonempty_subsets(n: usize) -> impl Iterator<Item = ElemSet> {
    (1..(1u64 << n)).map(ElemSet::from_bits)
}

/// Every table of order `n` (row-major odometer, lexicographic order).
pub fn all_tables(n: usize) -> Vec<HyperTable> {
    let max = (1u64 << n) - 1;
    let cells = n * n;
    let mut digits = vec![1u64; cells];
    let mut out = Vec::new();
    loop {
        out.push(HyperTable::from_bits(n, &digits).unwrap());
        let mut i = cells;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if digits[i] < max {
                digits[i] += 1;
                break;
            }
            digits[i] = 1;
        }
    }
}

/// A table as nested `BTreeSet`s.
pub struct Oracle {
    pub n: usize,
    pub cells: Vec<Vec<BTreeSet<usize>>>,
}

impl Oracle {
    pub fn new(t: &HyperTable) -> Self {
        let n = t.n();
        let cells = (0..n).map(|a| (0..n).map(|b| t.entry(a, b).iter().collect()).collect()).collect();
        Oracle { n, cells }
    }

    pub fn star(&self, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for &x in a {
            for &y in b {
                out.extend(self.cells[x][y].iter().copied());
            }
        }
        out
    }

    pub fn one(x: usize) -> BTreeSet<usize> {
        BTreeSet::from([x])
    }

    /// First violated left invertive triple, scanning a, b, c in order.
    pub fn first_left_invertive_violation(&self) -> Option<(Vec<usize>, BTreeSet<usize>, BTreeSet<usize>)> {
        for a in 0..self.n {
            for b in 0..self.n {
                for c in 0..self.n {
                    let l = self.star(&self.cells[a][b], &Self::one(c));
                    let r = self.star(&self.cells[c][b], &Self::one(a));
                    if l != r {
                        return Some((vec![a, b, c], l, r));
                    }
                }
            }
        }
        None
    }

    pub fn left_invertive(&self) -> bool {
        self.first_left_invertive_violation().is_none()
    }

    pub fn associative(&self) -> bool {
        (0..self.n).all(|a| {
            (0..self.n).all(|b| {
                (0..self.n).all(|c| {
                    self.star(&self.cells[a][b], &Self::one(c)) == self.star(&Self::one(a), &self.cells[b][c])
                })
            })
        })
    }

    pub fn to_set(s: &BTreeSet<usize>) -> ElemSet {
        s.iter().copied().collect()
    }
}

/// Plain `u64` product, written independently of the library.
pub fn raw_product(entries: &[u64], n: usize, a: u64, b: u64) -> u64 {
    let mut acc = 0;
    for x in 0..n {
        if a >> x & 1 == 0 {
            continue;
        }
        for y in 0..n {
            if b >> y & 1 == 1 {
                acc |= entries[x * n + y];
            }
        }
    }
    acc
}

pub fn bits_of(t: &HyperTable) -> Vec<u64> {
    t.entries().iter().map(|e| e.bits()).collect()
}
