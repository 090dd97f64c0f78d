//! Endofunctions of `Z_n` and their functional directed graphs.
//!
//! An [`Endofunction`] is a dense image array; vertex `i` of its graph has the
//! single out-edge `i -> f(i)`. Composition follows the usual convention
//! `(f ∘ g)(i) = f(g(i))`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::enumerate::Permutations;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Endofunction {
    images: Vec<usize>,
}

impl Endofunction {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::EmptyDomain);
        }
        if let Some((index, &value)) = images.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(Error::OutOfRange { index, value, n });
        }
        Ok(Self { images })
    }

    /// Caller guarantees every image lies in `0..images.len()`.
    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(images.iter().all(|&v| v < images.len()));
        Self { images }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_images_unchecked((0..n).collect())
    }

    pub fn constant(n: usize, value: usize) -> Result<Self> {
        Self::new(vec![value; n])
    }

    /// The involution `i -> (n-1) - i`.
    pub fn complement(n: usize) -> Self {
        Self::from_images_unchecked((0..n).map(|i| n - 1 - i).collect())
    }

    /// `0 -> 0` and `i -> i-1` otherwise: the directed path rooted at 0.
    pub fn shift_down(n: usize) -> Self {
        Self::from_images_unchecked((0..n).map(|i| i.saturating_sub(1)).collect())
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn into_images(self) -> Vec<usize> {
        self.images
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self ∘ inner`, i.e. `i -> self(inner(i))`.
    pub fn compose(&self, inner: &Endofunction) -> Result<Endofunction> {
        if self.n() != inner.n() {
            return Err(Error::SizeMismatch(self.n(), inner.n()));
        }
        Ok(self.compose_unchecked(inner))
    }

    pub(crate) fn compose_unchecked(&self, inner: &Endofunction) -> Endofunction {
        Self::from_images_unchecked(inner.images.iter().map(|&j| self.images[j]).collect())
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.n()];
        for &v in &self.images {
            if std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
        true
    }

    pub fn inverse(&self) -> Result<Endofunction> {
        if !self.is_bijection() {
            return Err(Error::NotBijection(self.to_string()));
        }
        Ok(self.inverse_unchecked())
    }

    pub(crate) fn inverse_unchecked(&self) -> Endofunction {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Self::from_images_unchecked(inv)
    }

    /// `f^(k)`, with `f^(0) = id`, by repeated squaring.
    pub fn iterate(&self, k: u64) -> Endofunction {
        let mut result = Self::identity(self.n());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = base.compose_unchecked(&result);
            }
            base = base.compose_unchecked(&base);
            k >>= 1;
        }
        result
    }

    /// The image set `f(Z_n)`.
    pub fn image_set(&self) -> BTreeSet<usize> {
        self.images.iter().copied().collect()
    }

    pub fn image_size(&self) -> usize {
        self.image_set().len()
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.images[i] == i).collect()
    }

    pub fn has_fixed_point(&self) -> bool {
        self.images.iter().enumerate().any(|(i, &v)| i == v)
    }

    pub fn is_constant(&self) -> bool {
        self.images.iter().all(|&v| v == self.images[0])
    }

    /// True iff `|f^(n-1)(Z_n)| = 1`: a single attractive fixed point.
    pub fn is_functional_tree(&self) -> bool {
        self.iterate(self.n() as u64 - 1).is_constant()
    }

    /// The root of a functional tree.
    pub fn root(&self) -> Option<usize> {
        if self.is_functional_tree() {
            Some(self.iterate(self.n() as u64 - 1).apply(0))
        } else {
            None
        }
    }

    pub fn graph(&self) -> FunctionalGraph {
        FunctionalGraph::new(self)
    }

    /// LCM of the cycle lengths of `G_f`.
    pub fn order(&self) -> u64 {
        self.graph()
            .cycle_lengths
            .iter()
            .fold(1u64, |acc, &l| acc.lcm(&(l as u64)))
    }

    /// `σ ∘ f ∘ σ^(-1)`.
    pub fn conjugate(&self, sigma: &Endofunction) -> Result<Endofunction> {
        if sigma.n() != self.n() {
            return Err(Error::SizeMismatch(self.n(), sigma.n()));
        }
        if !sigma.is_bijection() {
            return Err(Error::NotBijection(sigma.to_string()));
        }
        Ok(self.conjugate_unchecked(sigma))
    }

    /// Conjugation by a known bijection: edge `i -> f(i)` becomes
    /// `σ(i) -> σ(f(i))`.
    pub(crate) fn conjugate_unchecked(&self, sigma: &Endofunction) -> Endofunction {
        let mut out = vec![0; self.n()];
        for i in 0..self.n() {
            out[sigma.images[i]] = sigma.images[self.images[i]];
        }
        Self::from_images_unchecked(out)
    }

    /// Whether bijection `sigma` commutes with `self`.
    pub fn is_automorphism(&self, sigma: &Endofunction) -> bool {
        (0..self.n()).all(|i| sigma.images[self.images[i]] == self.images[sigma.images[i]])
    }

    /// All of `Aut(G_f)` in lexicographic order of image arrays.
    pub fn automorphism_group(&self) -> Vec<Endofunction> {
        let mut out = Vec::new();
        AutSearch::new(self).run(&mut |sigma| out.push(Self::from_images_unchecked(sigma.to_vec())));
        out.sort();
        out
    }

    /// `|Aut(G_f)|` without materializing the group.
    pub fn automorphism_count(&self) -> u64 {
        let mut count = 0u64;
        AutSearch::new(self).run(&mut |_| count += 1);
        count
    }

    /// Reference implementation: filter all of `S_n`.
    pub fn automorphism_group_brute(&self) -> Vec<Endofunction> {
        Permutations::new(self.n())
            .filter(|sigma| self.is_automorphism(sigma))
            .collect()
    }

    /// Undirected non-loop edges as `(min, max)` pairs.
    pub fn undirected_edges(&self) -> BTreeSet<(usize, usize)> {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &v)| *i != v)
            .map(|(i, &v)| (i.min(v), i.max(v)))
            .collect()
    }

    /// Undirected neighbour lists over non-loop edges, sorted and deduplicated.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n()];
        for (a, b) in self.undirected_edges() {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Undirected non-loop edge distances from `source`; `None` if unreachable.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let adj = self.neighbors();
        let mut dist = vec![None; self.n()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &w in &adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Every `g` whose symmetrized non-loop edge set equals that of `f` and
    /// which carries the same number of loops, sorted by image array.
    pub fn fixed_point_swaps(&self) -> Vec<Endofunction> {
        let edges = self.undirected_edges();
        let loops = self.fixed_points().len();
        let adj = self.neighbors();
        let choices: Vec<Vec<usize>> = (0..self.n())
            .map(|i| {
                let mut c = adj[i].clone();
                c.push(i);
                c.sort_unstable();
                c
            })
            .collect();
        let mut out = Vec::new();
        let mut cursor = vec![0usize; self.n()];
        loop {
            let g = Self::from_images_unchecked(
                cursor.iter().enumerate().map(|(i, &c)| choices[i][c]).collect(),
            );
            if g.fixed_points().len() == loops && g.undirected_edges() == edges {
                out.push(g);
            }
            // odometer, last position fastest
            let mut pos = self.n();
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                cursor[pos] += 1;
                if cursor[pos] < choices[pos].len() {
                    break;
                }
                cursor[pos] = 0;
            }
        }
    }

    /// Moves the root of a functional tree to `new_root`, reversing the path
    /// between them. The undirected non-loop edges are unchanged.
    pub fn reroot(&self, new_root: usize) -> Result<Endofunction> {
        let root = self.root().ok_or_else(|| Error::NotTree(self.to_string()))?;
        if new_root >= self.n() {
            return Err(Error::OutOfRange { index: 0, value: new_root, n: self.n() });
        }
        let mut images = self.images.clone();
        let mut prev = new_root;
        let mut cur = new_root;
        images[new_root] = new_root;
        while cur != root {
            let next = self.images[cur];
            if cur != new_root {
                images[cur] = prev;
            }
            prev = cur;
            cur = next;
        }
        if root != new_root {
            images[root] = prev;
        }
        Ok(Self::from_images_unchecked(images))
    }

    /// Children-sorted parenthesis code of a functional tree; two trees are
    /// conjugate iff their codes agree.
    pub fn rooted_code(&self) -> Result<String> {
        let root = self.root().ok_or_else(|| Error::NotTree(self.to_string()))?;
        let mut children = vec![Vec::new(); self.n()];
        for (i, &p) in self.images.iter().enumerate() {
            if i != p {
                children[p].push(i);
            }
        }
        fn code(v: usize, children: &[Vec<usize>]) -> String {
            let mut parts: Vec<String> = children[v].iter().map(|&c| code(c, children)).collect();
            parts.sort_unstable();
            format!("({})", parts.concat())
        }
        Ok(code(root, &children))
    }
}

impl fmt::Display for Endofunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.images {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Endofunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for Endofunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('[').trim_end_matches(']');
        let images = s
            .split(',')
            .map(|part| part.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse(s.to_string()))?;
        Self::new(images)
    }
}

impl Serialize for Endofunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Endofunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Structural summary of `G_f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalGraph {
    pub owner: Endofunction,
    pub in_degrees: Vec<usize>,
    /// Each cycle starts at its smallest vertex and follows `f`.
    pub cycles: Vec<Vec<usize>>,
    /// Sorted ascending.
    pub cycle_lengths: Vec<usize>,
    /// Component index per vertex, numbered by smallest contained vertex.
    pub component_of: Vec<usize>,
    pub component_count: usize,
    /// Number of vertices with in-degree at least one.
    pub d_f: usize,
    /// Distance from each vertex to its component's cycle.
    pub depth: Vec<usize>,
}

impl FunctionalGraph {
    fn new(f: &Endofunction) -> Self {
        let n = f.n();
        let mut in_degrees = vec![0; n];
        for &v in f.images() {
            in_degrees[v] += 1;
        }
        // 0 = unvisited, 1 = on current walk, 2 = done
        let mut state = vec![0u8; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if state[start] != 0 {
                continue;
            }
            let mut walk = Vec::new();
            let mut v = start;
            while state[v] == 0 {
                state[v] = 1;
                walk.push(v);
                v = f.apply(v);
            }
            if state[v] == 1 {
                let pos = walk.iter().position(|&w| w == v).unwrap();
                let mut cycle = walk[pos..].to_vec();
                let min_pos = cycle.iter().enumerate().min_by_key(|(_, &w)| w).unwrap().0;
                cycle.rotate_left(min_pos);
                cycles.push(cycle);
            }
            for w in walk {
                state[w] = 2;
            }
        }
        cycles.sort();

        let mut cycle_id = vec![usize::MAX; n];
        let mut depth = vec![usize::MAX; n];
        for (c, cycle) in cycles.iter().enumerate() {
            for &v in cycle {
                cycle_id[v] = c;
                depth[v] = 0;
            }
        }
        for start in 0..n {
            let mut path = Vec::new();
            let mut v = start;
            while cycle_id[v] == usize::MAX {
                path.push(v);
                v = f.apply(v);
            }
            let (c, mut d) = (cycle_id[v], depth[v]);
            for &w in path.iter().rev() {
                d += 1;
                cycle_id[w] = c;
                depth[w] = d;
            }
        }
        let mut renumber = vec![usize::MAX; cycles.len()];
        let mut next = 0;
        let mut component_of = vec![0; n];
        for v in 0..n {
            let c = cycle_id[v];
            if renumber[c] == usize::MAX {
                renumber[c] = next;
                next += 1;
            }
            component_of[v] = renumber[c];
        }
        let mut cycle_lengths: Vec<usize> = cycles.iter().map(Vec::len).collect();
        cycle_lengths.sort_unstable();
        Self {
            owner: f.clone(),
            d_f: in_degrees.iter().filter(|&&d| d > 0).count(),
            in_degrees,
            component_count: cycles.len(),
            cycles,
            cycle_lengths,
            component_of,
            depth,
        }
    }

    pub fn on_cycle(&self, v: usize) -> bool {
        self.depth[v] == 0
    }
}

/// Backtracking enumeration of automorphisms. Candidates for each vertex are
/// restricted to vertices with the same refinement signature (cycle length
/// plus the canonical code of the hanging in-tree), and assignments are
/// propagated along `f` since `σ(f(v)) = f(σ(v))`.
struct AutSearch<'a> {
    f: &'a Endofunction,
    signature: Vec<usize>,
    order: Vec<usize>,
    sigma: Vec<usize>,
    used: Vec<bool>,
    trail: Vec<usize>,
}

impl<'a> AutSearch<'a> {
    fn new(f: &'a Endofunction) -> Self {
        let n = f.n();
        let graph = f.graph();
        let mut children = vec![Vec::new(); n];
        for v in 0..n {
            if !graph.on_cycle(v) {
                children[f.apply(v)].push(v);
            }
        }
        let mut interner: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut tree_code = vec![usize::MAX; n];
        let mut by_depth: Vec<usize> = (0..n).collect();
        by_depth.sort_by_key(|&v| std::cmp::Reverse(graph.depth[v]));
        for &v in &by_depth {
            let mut key: Vec<usize> = children[v].iter().map(|&c| tree_code[c]).collect();
            key.sort_unstable();
            let next = interner.len();
            tree_code[v] = *interner.entry(key).or_insert(next);
        }
        let mut cycle_len = vec![0; n];
        for cycle in &graph.cycles {
            for &v in cycle {
                cycle_len[v] = cycle.len();
            }
        }
        let mut sig_interner: HashMap<(usize, usize, usize), usize> = HashMap::new();
        let signature = (0..n)
            .map(|v| {
                let key = (graph.depth[v], cycle_len[v], tree_code[v]);
                let next = sig_interner.len();
                *sig_interner.entry(key).or_insert(next)
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (graph.depth[v], v));
        Self {
            f,
            signature,
            order,
            sigma: vec![usize::MAX; n],
            used: vec![false; n],
            trail: Vec::new(),
        }
    }

    fn run(&mut self, visit: &mut dyn FnMut(&[usize])) {
        self.search(0, visit);
    }

    /// Assigns `v -> w` and everything it forces; returns false on conflict.
    fn assign(&mut self, mut v: usize, mut w: usize) -> bool {
        loop {
            if self.sigma[v] != usize::MAX {
                return self.sigma[v] == w;
            }
            if self.used[w] || self.signature[v] != self.signature[w] {
                return false;
            }
            self.sigma[v] = w;
            self.used[w] = true;
            self.trail.push(v);
            v = self.f.apply(v);
            w = self.f.apply(w);
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            self.used[self.sigma[v]] = false;
            self.sigma[v] = usize::MAX;
        }
    }

    fn search(&mut self, pos: usize, visit: &mut dyn FnMut(&[usize])) {
        let n = self.f.n();
        let mut pos = pos;
        while pos < n && self.sigma[self.order[pos]] != usize::MAX {
            pos += 1;
        }
        if pos == n {
            if (0..n).all(|i| self.sigma[self.f.apply(i)] == self.f.apply(self.sigma[i])) {
                visit(&self.sigma);
            }
            return;
        }
        let v = self.order[pos];
        for w in 0..n {
            if self.used[w] || self.signature[w] != self.signature[v] {
                continue;
            }
            let mark = self.trail.len();
            if self.assign(v, w) {
                self.search(pos + 1, visit);
            }
            self.undo(mark);
        }
    }
}
