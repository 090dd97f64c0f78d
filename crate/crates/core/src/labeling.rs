//! Subtractive edge labels, graceful-labeling search and label-count bounds.
//!
//! A vertex labeling is a bijection `σ`; under it edge `i -> f(i)` carries the
//! label `|σ(f(i)) - σ(i)|`, which is exactly the edge label of the conjugate
//! `σ f σ^(-1)`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::endofunction::Endofunction;
use crate::enumerate::Permutations;
use crate::error::{Error, Result};

/// Largest `n` for which the label-count extrema are computed exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 7;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelProfile {
    pub labels: Vec<usize>,
    pub distinct_count: usize,
}

impl LabelProfile {
    pub fn is_graceful(&self) -> bool {
        self.distinct_count == self.labels.len()
    }
}

pub fn label_profile(f: &Endofunction) -> LabelProfile {
    let labels: Vec<usize> = (0..f.n()).map(|i| f.apply(i).abs_diff(i)).collect();
    let distinct_count = labels.iter().collect::<BTreeSet<_>>().len();
    LabelProfile { labels, distinct_count }
}

/// Profile of `σ f σ^(-1)`, indexed by the original vertex `i`.
pub fn profile_under(f: &Endofunction, sigma: &Endofunction) -> LabelProfile {
    let labels: Vec<usize> =
        (0..f.n()).map(|i| sigma.apply(f.apply(i)).abs_diff(sigma.apply(i))).collect();
    let distinct_count = labels.iter().collect::<BTreeSet<_>>().len();
    LabelProfile { labels, distinct_count }
}

pub fn is_gracefully_labeled(f: &Endofunction) -> bool {
    label_profile(f).is_graceful()
}

/// Whether `σ` makes `f` graceful.
pub fn is_graceful_under(f: &Endofunction, sigma: &Endofunction) -> bool {
    distinct_under(f, sigma.images()) == f.n()
}

#[inline]
fn distinct_under(f: &Endofunction, sigma: &[usize]) -> usize {
    let mut mask = 0u128;
    for i in 0..f.n() {
        mask |= 1u128 << sigma[f.apply(i)].abs_diff(sigma[i]);
    }
    mask.count_ones() as usize
}

/// Vertex-order depth-first search: `σ(0), σ(1), …` are chosen in increasing
/// order, and each edge is checked as soon as both endpoints are labeled.
struct VertexOrderSearch<'a> {
    f: &'a Endofunction,
    /// Non-loop edges `i` completed when vertex `v` is labeled.
    completes: Vec<Vec<usize>>,
    sigma: Vec<usize>,
    value_used: Vec<bool>,
    label_used: Vec<bool>,
}

impl<'a> VertexOrderSearch<'a> {
    fn new(f: &'a Endofunction) -> Self {
        let n = f.n();
        let mut completes = vec![Vec::new(); n];
        for i in 0..n {
            if f.apply(i) != i {
                completes[i.max(f.apply(i))].push(i);
            }
        }
        let mut label_used = vec![false; n];
        if n > 0 {
            label_used[0] = true;
        }
        Self { f, completes, sigma: vec![usize::MAX; n], value_used: vec![false; n], label_used }
    }

    /// Calls `visit` on each graceful σ in lexicographic order until it
    /// returns false.
    fn run(&mut self, visit: &mut dyn FnMut(&[usize]) -> bool) {
        if self.f.fixed_points().len() != 1 {
            return;
        }
        self.dfs(0, visit);
    }

    fn dfs(&mut self, v: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let n = self.f.n();
        if v == n {
            return visit(&self.sigma);
        }
        for value in 0..n {
            if self.value_used[value] {
                continue;
            }
            self.sigma[v] = value;
            let mut placed = Vec::with_capacity(self.completes[v].len());
            let mut ok = true;
            for &i in &self.completes[v] {
                let label = self.sigma[i].abs_diff(self.sigma[self.f.apply(i)]);
                if self.label_used[label] {
                    ok = false;
                    break;
                }
                self.label_used[label] = true;
                placed.push(label);
            }
            if ok {
                self.value_used[value] = true;
                let keep_going = self.dfs(v + 1, visit);
                self.value_used[value] = false;
                if !keep_going {
                    for label in placed {
                        self.label_used[label] = false;
                    }
                    self.sigma[v] = usize::MAX;
                    return false;
                }
            }
            for label in placed {
                self.label_used[label] = false;
            }
        }
        self.sigma[v] = usize::MAX;
        true
    }
}

/// The lexicographically least `σ` making `σ f σ^(-1)` graceful.
pub fn find_graceful_labeling(f: &Endofunction) -> Option<Endofunction> {
    let mut found = None;
    VertexOrderSearch::new(f).run(&mut |sigma| {
        found = Some(Endofunction::from_images_unchecked(sigma.to_vec()));
        false
    });
    found
}

/// Every graceful `σ` in lexicographic order.
pub fn graceful_labelings(f: &Endofunction) -> Vec<Endofunction> {
    let mut out = Vec::new();
    VertexOrderSearch::new(f).run(&mut |sigma| {
        out.push(Endofunction::from_images_unchecked(sigma.to_vec()));
        true
    });
    out
}

/// Label-driven search: edge labels are placed from `n-1` downwards, the
/// label-`d` edge taking endpoint values `{a, a+d}`. Returns some graceful
/// `σ` (not necessarily the least one).
pub fn search_graceful(f: &Endofunction) -> Option<Endofunction> {
    let n = f.n();
    if f.fixed_points().len() != 1 {
        return None;
    }
    if n == 1 {
        return Some(Endofunction::identity(1));
    }
    let mut state = LabelSearch::new(f);
    if state.place(n - 1) {
        let mut sigma = state.sigma.clone();
        let mut free = (0..n).filter(|&v| !state.value_used[v]);
        for slot in sigma.iter_mut().filter(|s| **s == usize::MAX) {
            *slot = free.next().unwrap();
        }
        Some(Endofunction::from_images_unchecked(sigma))
    } else {
        None
    }
}

struct LabelSearch<'a> {
    f: &'a Endofunction,
    edges: Vec<(usize, usize)>,
    incident: Vec<Vec<usize>>,
    sigma: Vec<usize>,
    value_used: Vec<bool>,
    label_used: Vec<bool>,
}

impl<'a> LabelSearch<'a> {
    fn new(f: &'a Endofunction) -> Self {
        let n = f.n();
        let edges: Vec<(usize, usize)> =
            (0..n).filter(|&i| f.apply(i) != i).map(|i| (i, f.apply(i))).collect();
        let mut incident = vec![Vec::new(); n];
        for (e, &(a, b)) in edges.iter().enumerate() {
            incident[a].push(e);
            incident[b].push(e);
        }
        let mut label_used = vec![false; n];
        label_used[0] = true;
        Self { f, edges, incident, sigma: vec![usize::MAX; n], value_used: vec![false; n], label_used }
    }

    /// Labels `v` with `value`, registering every edge it completes. On
    /// conflict nothing is changed and `None` is returned.
    fn set(&mut self, v: usize, value: usize) -> Option<Vec<usize>> {
        if self.value_used[value] {
            return None;
        }
        let mut placed = Vec::new();
        for &e in &self.incident[v] {
            let (a, b) = self.edges[e];
            let other = if a == v { b } else { a };
            if self.sigma[other] == usize::MAX {
                continue;
            }
            let label = value.abs_diff(self.sigma[other]);
            if self.label_used[label] || placed.contains(&label) {
                return None;
            }
            placed.push(label);
        }
        self.sigma[v] = value;
        self.value_used[value] = true;
        for &label in &placed {
            self.label_used[label] = true;
        }
        Some(placed)
    }

    fn unset(&mut self, v: usize, placed: Vec<usize>) {
        self.value_used[self.sigma[v]] = false;
        self.sigma[v] = usize::MAX;
        for label in placed {
            self.label_used[label] = false;
        }
    }

    fn place(&mut self, d: usize) -> bool {
        if d == 0 {
            return true;
        }
        if self.label_used[d] {
            return self.place(d - 1);
        }
        let n = self.f.n();
        // edges with exactly one labeled endpoint first, then fresh edges
        for pass in 0..2 {
            for e in 0..self.edges.len() {
                let (a, b) = self.edges[e];
                let (sa, sb) = (self.sigma[a], self.sigma[b]);
                match (sa != usize::MAX, sb != usize::MAX, pass) {
                    (true, false, 0) | (false, true, 0) => {
                        let (fixed, free) = if sa != usize::MAX { (sa, b) } else { (sb, a) };
                        let targets = [fixed.checked_add(d).filter(|&x| x < n), fixed.checked_sub(d)];
                        for value in targets.into_iter().flatten() {
                            if let Some(placed) = self.set(free, value) {
                                if self.place(d - 1) {
                                    return true;
                                }
                                self.unset(free, placed);
                            }
                        }
                    }
                    (false, false, 1) => {
                        for low in 0..n - d {
                            for (x, y) in [(a, b), (b, a)] {
                                let Some(p1) = self.set(x, low) else { continue };
                                if let Some(p2) = self.set(y, low + d) {
                                    if self.place(d - 1) {
                                        return true;
                                    }
                                    self.unset(y, p2);
                                }
                                self.unset(x, p1);
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
        false
    }
}

/// `GrL(G_f)`: the distinct gracefully labeled conjugates of `f`, sorted.
pub fn grl(f: &Endofunction) -> Vec<Endofunction> {
    let mut set = BTreeSet::new();
    VertexOrderSearch::new(f).run(&mut |sigma| {
        set.insert(f.conjugate_unchecked(&Endofunction::from_images_unchecked(sigma.to_vec())));
        true
    });
    set.into_iter().collect()
}

/// Reference implementation: filter all of `S_n`.
pub fn grl_brute(f: &Endofunction) -> Vec<Endofunction> {
    let set: BTreeSet<Endofunction> = Permutations::new(f.n())
        .map(|s| f.conjugate_unchecked(&s))
        .filter(is_gracefully_labeled)
        .collect();
    set.into_iter().collect()
}

/// `ρ_f` and `δ_f`: minimum deletions reaching a spanning union of disjoint
/// paths, with loops tolerated (`rho`) or required to vanish too (`delta`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathDeletionStats {
    pub rho: usize,
    pub delta: usize,
}

/// Remaining non-loop edges form vertex-disjoint simple paths.
fn is_path_forest(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut degree = vec![0u8; n];
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(a, b) in edges {
        degree[a] += 1;
        degree[b] += 1;
        if degree[a] > 2 || degree[b] > 2 {
            return false;
        }
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

/// Visits subsets of `0..m` of size `k` in lexicographic order; stops when
/// `visit` returns true and reports whether it did.
fn any_subset(m: usize, k: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if visit(&idx) {
            return true;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] < m - k + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Smallest set of non-loop edges (as tail vertices) whose removal leaves
/// disjoint paths, first in lexicographic order.
fn min_path_deletion(f: &Endofunction) -> Vec<usize> {
    let tails: Vec<usize> = (0..f.n()).filter(|&i| f.apply(i) != i).collect();
    for k in 0..=tails.len() {
        let mut found = None;
        any_subset(tails.len(), k, &mut |subset| {
            let remaining: Vec<(usize, usize)> = tails
                .iter()
                .enumerate()
                .filter(|(j, _)| !subset.contains(j))
                .map(|(_, &i)| (i, f.apply(i)))
                .collect();
            if is_path_forest(f.n(), &remaining) {
                found = Some(subset.iter().map(|&j| tails[j]).collect::<Vec<_>>());
                true
            } else {
                false
            }
        });
        if let Some(deleted) = found {
            return deleted;
        }
    }
    unreachable!("deleting every non-loop edge leaves isolated vertices")
}

pub fn path_deletion_stats(f: &Endofunction) -> PathDeletionStats {
    let n = f.n();
    let rho = min_path_deletion(f).len();
    // every edge, loops included, is a deletion candidate; the survivors
    // must be loop-free disjoint paths
    let mut delta = n;
    for k in 0..=n {
        let hit = any_subset(n, k, &mut |subset| {
            let remaining: Vec<(usize, usize)> =
                (0..n).filter(|i| !subset.contains(i)).map(|i| (i, f.apply(i))).collect();
            remaining.iter().all(|&(a, b)| a != b) && is_path_forest(n, &remaining)
        });
        if hit {
            delta = k;
            break;
        }
    }
    PathDeletionStats { rho, delta }
}

/// Paths of `G_f` after a minimum deletion, each listed from its smaller
/// endpoint, ordered by smallest vertex.
fn path_cover(f: &Endofunction) -> Vec<Vec<usize>> {
    let n = f.n();
    let deleted = min_path_deletion(f);
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        if f.apply(i) != i && !deleted.contains(&i) {
            adj[i].push(f.apply(i));
            adj[f.apply(i)].push(i);
        }
    }
    let mut seen = vec![false; n];
    let mut paths = Vec::new();
    for v in 0..n {
        if seen[v] {
            continue;
        }
        // collect the component, then walk it from its smaller endpoint
        let mut comp = vec![v];
        seen[v] = true;
        let mut k = 0;
        while k < comp.len() {
            for &w in &adj[comp[k]] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            k += 1;
        }
        let start = *comp.iter().filter(|&&u| adj[u].len() <= 1).min().unwrap();
        let mut path = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = adj[cur].iter().find(|&&w| w != prev) {
            path.push(next);
            prev = cur;
            cur = next;
        }
        paths.push(path);
    }
    paths
}

/// Consecutive labels along each path of a minimum path cover.
pub fn greedy_min_labeling(f: &Endofunction) -> Endofunction {
    let mut sigma = vec![0; f.n()];
    for (label, v) in path_cover(f).into_iter().flatten().enumerate() {
        sigma[v] = label;
    }
    Endofunction::from_images_unchecked(sigma)
}

/// Alternating smallest/largest unassigned labels along each path of a
/// minimum path cover.
pub fn greedy_max_labeling(f: &Endofunction) -> Endofunction {
    let n = f.n();
    let mut sigma = vec![0; n];
    let (mut low, mut high) = (0, n);
    for (k, v) in path_cover(f).into_iter().flatten().enumerate() {
        sigma[v] = if k % 2 == 0 {
            low += 1;
            low - 1
        } else {
            high -= 1;
            high
        };
    }
    Endofunction::from_images_unchecked(sigma)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelCountMode {
    /// All of `S_n`; refused above [`EXHAUSTIVE_LIMIT`].
    Exhaustive,
    /// Depth-first branch and bound seeded with the greedy labelings.
    BranchAndBound,
}

fn check_mode(f: &Endofunction, mode: LabelCountMode) -> Result<bool> {
    let small = f.n() <= EXHAUSTIVE_LIMIT;
    match mode {
        LabelCountMode::Exhaustive if !small => {
            Err(Error::TooLarge { n: f.n(), limit: EXHAUSTIVE_LIMIT })
        }
        LabelCountMode::Exhaustive => Ok(true),
        LabelCountMode::BranchAndBound => Ok(false),
    }
}

/// `min_σ |{|σfσ^(-1)(i) - i|}|`.
pub fn min_distinct_labels(f: &Endofunction, mode: LabelCountMode) -> Result<usize> {
    if check_mode(f, mode)? {
        return Ok(Permutations::new(f.n())
            .map(|s| distinct_under(f, s.images()))
            .min()
            .unwrap());
    }
    let seed = profile_under(f, &greedy_min_labeling(f)).distinct_count;
    Ok(BranchAndBound::new(f, false, seed).solve())
}

/// `max_σ |{|σfσ^(-1)(i) - i|}|`.
pub fn max_distinct_labels(f: &Endofunction, mode: LabelCountMode) -> Result<usize> {
    if check_mode(f, mode)? {
        return Ok(Permutations::new(f.n())
            .map(|s| distinct_under(f, s.images()))
            .max()
            .unwrap());
    }
    let seed = profile_under(f, &greedy_max_labeling(f)).distinct_count;
    Ok(BranchAndBound::new(f, true, seed).solve())
}

/// Exhaustive for small `n`, branch and bound above.
pub fn max_distinct_labels_auto(f: &Endofunction) -> usize {
    let mode = if f.n() <= EXHAUSTIVE_LIMIT {
        LabelCountMode::Exhaustive
    } else {
        LabelCountMode::BranchAndBound
    };
    max_distinct_labels(f, mode).expect("mode chosen within limits")
}

struct BranchAndBound<'a> {
    f: &'a Endofunction,
    maximize: bool,
    best: usize,
    /// No labeling can do better than this.
    target: usize,
    completes: Vec<Vec<usize>>,
    sigma: Vec<usize>,
    value_used: Vec<bool>,
    counts: Vec<usize>,
    distinct: usize,
    done_edges: usize,
}

impl<'a> BranchAndBound<'a> {
    fn new(f: &'a Endofunction, maximize: bool, seed: usize) -> Self {
        let n = f.n();
        let loops = f.fixed_points().len();
        let non_loops = n - loops;
        let target = if maximize {
            non_loops + usize::from(loops > 0)
        } else {
            usize::from(loops > 0) + usize::from(non_loops > 0)
        };
        let mut completes = vec![Vec::new(); n];
        for i in 0..n {
            completes[i.max(f.apply(i))].push(i);
        }
        Self {
            f,
            maximize,
            best: seed,
            target,
            completes,
            sigma: vec![usize::MAX; n],
            value_used: vec![false; n],
            counts: vec![0; n],
            distinct: 0,
            done_edges: 0,
        }
    }

    fn solve(mut self) -> usize {
        if self.best != self.target {
            self.dfs(0);
        }
        self.best
    }

    fn promising(&self) -> bool {
        if self.maximize {
            self.best < self.target && self.distinct + (self.f.n() - self.done_edges) > self.best
        } else {
            self.best > self.target && self.distinct < self.best
        }
    }

    fn dfs(&mut self, v: usize) {
        let n = self.f.n();
        if v == n {
            let better = if self.maximize { self.distinct > self.best } else { self.distinct < self.best };
            if better {
                self.best = self.distinct;
            }
            return;
        }
        for value in 0..n {
            if self.value_used[value] {
                continue;
            }
            self.sigma[v] = value;
            self.value_used[value] = true;
            let edges = self.completes[v].clone();
            for &i in &edges {
                let label = self.sigma[i].abs_diff(self.sigma[self.f.apply(i)]);
                if self.counts[label] == 0 {
                    self.distinct += 1;
                }
                self.counts[label] += 1;
                self.done_edges += 1;
            }
            if self.promising() {
                self.dfs(v + 1);
            }
            for &i in &edges {
                let label = self.sigma[i].abs_diff(self.sigma[self.f.apply(i)]);
                self.counts[label] -= 1;
                if self.counts[label] == 0 {
                    self.distinct -= 1;
                }
                self.done_edges -= 1;
            }
            self.value_used[value] = false;
            self.sigma[v] = usize::MAX;
            if self.best == self.target {
                return;
            }
        }
    }
}

/// Per-function summary emitted by the `check` and `search` commands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelReport {
    pub f: Endofunction,
    pub graceful: bool,
    pub sigma: Option<Endofunction>,
    pub grl_size: usize,
    pub min_labels: Option<usize>,
    pub max_labels: Option<usize>,
}

impl LabelReport {
    pub fn compute(f: &Endofunction, mode: LabelCountMode) -> Result<Self> {
        let sigma = find_graceful_labeling(f);
        let small = f.n() <= EXHAUSTIVE_LIMIT || mode == LabelCountMode::BranchAndBound;
        Ok(Self {
            f: f.clone(),
            graceful: sigma.is_some(),
            sigma,
            grl_size: grl(f).len(),
            min_labels: if small { Some(min_distinct_labels(f, mode)?) } else { None },
            max_labels: if small { Some(max_distinct_labels(f, mode)?) } else { None },
        })
    }
}
