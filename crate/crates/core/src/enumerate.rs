//! Input spaces for the exhaustive sweeps.
//!
//! Every space is lexicographically ordered and index-addressable, so a
//! sweep can be sharded into contiguous `k..m` ranges.

use std::collections::BTreeMap;
use std::ops::Range;

use crate::endofunction::Endofunction;
use crate::error::{Error, Result};

/// A finite, lexicographically ordered family of endofunctions of `Z_n`.
pub trait IndexedSpace: Sync {
    fn n(&self) -> usize;
    fn len(&self) -> u64;
    /// The `k`-th item; `k < len()`.
    fn get(&self, k: u64) -> Endofunction;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn range(&self, range: Range<u64>) -> Box<dyn Iterator<Item = Endofunction> + '_> {
        let end = range.end.min(self.len());
        Box::new((range.start.min(end)..end).map(move |k| self.get(k)))
    }
}

fn checked_pow(base: u64, exp: u32) -> u64 {
    base.checked_pow(exp).expect("space size overflows u64")
}

fn factorial(n: u64) -> u64 {
    (1..=n).try_fold(1u64, |acc, k| acc.checked_mul(k)).expect("space size overflows u64")
}

/// All of `Z_n^{Z_n}`, `images[0]` most significant.
#[derive(Clone, Debug)]
pub struct Endofunctions {
    n: usize,
    next: u64,
}

impl Endofunctions {
    pub fn new(n: usize) -> Self {
        Self { n, next: 0 }
    }
}

impl IndexedSpace for Endofunctions {
    fn n(&self) -> usize {
        self.n
    }

    fn len(&self) -> u64 {
        checked_pow(self.n as u64, self.n as u32)
    }

    fn get(&self, mut k: u64) -> Endofunction {
        let n = self.n as u64;
        let mut images = vec![0; self.n];
        for slot in images.iter_mut().rev() {
            *slot = (k % n) as usize;
            k /= n;
        }
        Endofunction::from_images_unchecked(images)
    }
}

impl Iterator for Endofunctions {
    type Item = Endofunction;

    fn next(&mut self) -> Option<Endofunction> {
        if self.n == 0 || self.next >= self.len() {
            return None;
        }
        self.next += 1;
        Some(self.get(self.next - 1))
    }
}

/// All of `S_n` in lexicographic order.
#[derive(Clone, Debug)]
pub struct Permutations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Permutations {
    pub fn new(n: usize) -> Self {
        Self { n, current: (n > 0).then(|| (0..n).collect()) }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

impl IndexedSpace for Permutations {
    fn n(&self) -> usize {
        self.n
    }

    fn len(&self) -> u64 {
        factorial(self.n as u64)
    }

    fn get(&self, mut k: u64) -> Endofunction {
        let mut pool: Vec<usize> = (0..self.n).collect();
        let mut images = Vec::with_capacity(self.n);
        for remaining in (1..=self.n as u64).rev() {
            let block = factorial(remaining - 1);
            let idx = (k / block) as usize;
            k %= block;
            images.push(pool.remove(idx));
        }
        Endofunction::from_images_unchecked(images)
    }
}

impl Iterator for Permutations {
    type Item = Endofunction;

    fn next(&mut self) -> Option<Endofunction> {
        let current = self.current.as_mut()?;
        let out = Endofunction::from_images_unchecked(current.clone());
        if !next_permutation(current) {
            self.current = None;
        }
        Some(out)
    }
}

/// Parent arrays `p(0) = 0`, `p(i) ∈ {0..i-1}`: the semigroup of functional
/// trees rooted at 0 with `h(i) ≤ i`. There are `(n-1)!` of them, ordered
/// lexicographically in `(p(1), …, p(n-1))`.
#[derive(Clone, Debug)]
pub struct RootedTrees {
    n: usize,
    next: u64,
}

impl RootedTrees {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDomain);
        }
        Ok(Self { n, next: 0 })
    }
}

impl IndexedSpace for RootedTrees {
    fn n(&self) -> usize {
        self.n
    }

    fn len(&self) -> u64 {
        factorial(self.n as u64 - 1)
    }

    fn get(&self, mut k: u64) -> Endofunction {
        let mut images = vec![0; self.n];
        for i in (1..self.n).rev() {
            images[i] = (k % i as u64) as usize;
            k /= i as u64;
        }
        Endofunction::from_images_unchecked(images)
    }
}

impl Iterator for RootedTrees {
    type Item = Endofunction;

    fn next(&mut self) -> Option<Endofunction> {
        if self.next >= self.len() {
            return None;
        }
        self.next += 1;
        Some(self.get(self.next - 1))
    }
}

pub fn all_rooted_trees(n: usize) -> Result<RootedTrees> {
    RootedTrees::new(n)
}

pub fn all_endofunctions(n: usize) -> Endofunctions {
    Endofunctions::new(n)
}

pub fn all_permutations(n: usize) -> Permutations {
    Permutations::new(n)
}

/// One semigroup representative per conjugacy class of functional trees
/// (the first in stream order), deduplicated by rooted canonical code.
pub fn rooted_tree_classes(n: usize) -> Result<Vec<Endofunction>> {
    let mut seen: BTreeMap<String, Endofunction> = BTreeMap::new();
    for f in RootedTrees::new(n)? {
        let code = f.rooted_code()?;
        seen.entry(code).or_insert(f);
    }
    let mut out: Vec<Endofunction> = seen.into_values().collect();
    out.sort();
    Ok(out)
}

/// The labeled tree on `Z_{len+2}` with the given Prüfer sequence, oriented
/// towards `root` (which carries the loop).
pub fn prufer_decode(seq: &[usize], root: usize) -> Result<Endofunction> {
    let n = seq.len() + 2;
    if let Some((index, &value)) = seq.iter().enumerate().find(|(_, &v)| v >= n) {
        return Err(Error::OutOfRange { index, value, n });
    }
    if root >= n {
        return Err(Error::OutOfRange { index: seq.len(), value: root, n });
    }
    let mut degree = vec![1usize; n];
    for &v in seq {
        degree[v] += 1;
    }
    let mut adj = vec![Vec::new(); n];
    let link = |a: usize, b: usize, adj: &mut Vec<Vec<usize>>| {
        adj[a].push(b);
        adj[b].push(a);
    };
    for &v in seq {
        let leaf = (0..n).find(|&u| degree[u] == 1).unwrap();
        link(leaf, v, &mut adj);
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&u| degree[u] == 1).collect();
    link(rest[0], rest[1], &mut adj);

    let mut images = vec![usize::MAX; n];
    images[root] = root;
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if images[w] == usize::MAX {
                images[w] = u;
                stack.push(w);
            }
        }
    }
    Ok(Endofunction::from_images_unchecked(images))
}

/// Disjoint directed cycles with the given lengths (sorted ascending) laid
/// out on consecutive blocks of `Z_n`.
pub fn cycle_union(n: usize, lengths: &[usize]) -> Result<Endofunction> {
    if lengths.contains(&0) {
        return Err(Error::Precondition("cycle lengths must be positive".into()));
    }
    let total: usize = lengths.iter().sum();
    if total != n || n == 0 {
        return Err(Error::Precondition(format!("cycle lengths sum to {total}, expected {n}")));
    }
    let mut sorted = lengths.to_vec();
    sorted.sort_unstable();
    let mut images = Vec::with_capacity(n);
    let mut start = 0;
    for len in sorted {
        for offset in 0..len {
            images.push(start + (offset + 1) % len);
        }
        start += len;
    }
    Endofunction::new(images)
}

/// Parses the shard syntax `k..m` (items `k` through `m-1`).
pub fn parse_range(text: &str) -> Result<Range<u64>> {
    let (a, b) = text.split_once("..").ok_or_else(|| Error::Parse(text.to_string()))?;
    let start = a.trim().parse().map_err(|_| Error::Parse(text.to_string()))?;
    let end = b.trim().parse().map_err(|_| Error::Parse(text.to_string()))?;
    if start > end {
        return Err(Error::Parse(text.to_string()));
    }
    Ok(start..end)
}
