//! The matrix picture of `Z_n^{Z_n}` and pseudoinverse sets.
//!
//! `A_f[i][j] = 1` iff `j = f(i)`, so `A_{f∘g} = A_g A_f`. The matrix of a
//! function is kept as its image array; products are compositions.

use std::collections::BTreeSet;

use crate::endofunction::Endofunction;
use crate::enumerate::{Endofunctions, Permutations};
use crate::error::{Error, Result};

/// Largest `n` for which pseudoinverse sets are filtered from all `n^n`
/// candidates.
pub const EXHAUSTIVE_LIMIT: usize = 6;
/// Largest `n` handled by the row-constraint solver.
pub const SOLVER_LIMIT: usize = 9;
/// Refuse to materialize pseudoinverse sets larger than this.
pub const MAX_SET_SIZE: u128 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    f: Endofunction,
}

impl AdjacencyMatrix {
    pub fn n(&self) -> usize {
        self.f.n()
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        u8::from(self.f.apply(i) == j)
    }

    pub fn dense(&self) -> Vec<Vec<u64>> {
        (0..self.n()).map(|i| (0..self.n()).map(|j| u64::from(self.get(i, j))).collect()).collect()
    }

    pub fn function(&self) -> &Endofunction {
        &self.f
    }
}

pub fn to_matrix(f: &Endofunction) -> AdjacencyMatrix {
    AdjacencyMatrix { f: f.clone() }
}

fn dense_product(a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut out = vec![vec![0; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] != 0 {
                for j in 0..n {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    out
}

/// `A_{f∘g} = A_g A_f`, checked with a full integer matrix product.
pub fn antihom_check(f: &Endofunction, g: &Endofunction) -> Result<bool> {
    let fg = f.compose(g)?;
    Ok(to_matrix(&fg).dense() == dense_product(&to_matrix(g).dense(), &to_matrix(f).dense()))
}

/// `‖A_{g∘f} - I‖_0 = 2·#{i : g(f(i)) ≠ i}`
pub fn l0_distance(g: &Endofunction, f: &Endofunction) -> usize {
    2 * (0..f.n()).filter(|&i| g.apply(f.apply(i)) != i).count()
}

/// `f^(+_k)` by filtering every candidate in `Z_n^{Z_n}`.
pub fn k_pseudoinverse_exhaustive(f: &Endofunction, k: usize) -> Result<Vec<Endofunction>> {
    if f.n() > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge { n: f.n(), limit: EXHAUSTIVE_LIMIT });
    }
    Ok(Endofunctions::new(f.n()).filter(|g| l0_distance(g, f) <= 2 * k).collect())
}

/// Preimage classes of `f`: for each value, the inputs mapped to it.
fn preimages(f: &Endofunction) -> Vec<Vec<usize>> {
    let mut pre = vec![Vec::new(); f.n()];
    for i in 0..f.n() {
        pre[f.apply(i)].push(i);
    }
    pre
}

/// Each image value `v` contributes `|f^(-1)(v)| - [g(v) ∈ f^(-1)(v)]`
/// mismatches; values outside the image are unconstrained.
struct RowSolver {
    n: usize,
    pre: Vec<Vec<usize>>,
    image: Vec<usize>,
}

impl RowSolver {
    fn new(f: &Endofunction) -> Self {
        let pre = preimages(f);
        let image = (0..f.n()).filter(|&v| !pre[v].is_empty()).collect();
        Self { n: f.n(), pre, image }
    }

    fn base_cost(&self) -> usize {
        self.image.iter().map(|&v| self.pre[v].len() - 1).sum()
    }

    /// Number of members of `f^(+_k)`.
    fn count(&self, k: usize) -> u128 {
        // ways[b] = number of assignments on image values using b extra misses
        let extra = k.saturating_sub(self.base_cost());
        if k < self.base_cost() {
            return 0;
        }
        let mut ways = vec![0u128; extra + 1];
        ways[0] = 1;
        for &v in &self.image {
            let hit = self.pre[v].len() as u128;
            let miss = (self.n - self.pre[v].len()) as u128;
            let mut next = vec![0u128; extra + 1];
            for b in 0..=extra {
                next[b] += ways[b] * hit;
                if b < extra {
                    next[b + 1] += ways[b] * miss;
                }
            }
            ways = next;
        }
        let free = (self.n - self.image.len()) as u32;
        ways.iter().sum::<u128>() * (self.n as u128).pow(free)
    }

    fn enumerate(&self, k: usize) -> Vec<Endofunction> {
        let mut out = Vec::new();
        if k < self.base_cost() {
            return out;
        }
        let mut g = vec![0usize; self.n];
        self.assign(0, k - self.base_cost(), &mut g, &mut out);
        out.sort();
        out
    }

    fn assign(&self, idx: usize, budget: usize, g: &mut Vec<usize>, out: &mut Vec<Endofunction>) {
        if idx == self.image.len() {
            let free: Vec<usize> = (0..self.n).filter(|&v| self.pre[v].is_empty()).collect();
            self.fill_free(&free, 0, g, out);
            return;
        }
        let v = self.image[idx];
        for w in 0..self.n {
            let hit = self.pre[v].contains(&w);
            if !hit && budget == 0 {
                continue;
            }
            g[v] = w;
            self.assign(idx + 1, if hit { budget } else { budget - 1 }, g, out);
        }
    }

    fn fill_free(&self, free: &[usize], idx: usize, g: &mut Vec<usize>, out: &mut Vec<Endofunction>) {
        if idx == free.len() {
            out.push(Endofunction::from_images_unchecked(g.clone()));
            return;
        }
        for w in 0..self.n {
            g[free[idx]] = w;
            self.fill_free(free, idx + 1, g, out);
        }
    }
}

/// `f^(+_k)` via the row-constraint solver, sorted.
pub fn k_pseudoinverse_solver(f: &Endofunction, k: usize) -> Result<Vec<Endofunction>> {
    if f.n() > SOLVER_LIMIT {
        return Err(Error::TooLarge { n: f.n(), limit: SOLVER_LIMIT });
    }
    let solver = RowSolver::new(f);
    let size = solver.count(k);
    if size > MAX_SET_SIZE {
        return Err(Error::Precondition(format!("|f^(+_{k})| = {size} is too large to list")));
    }
    Ok(solver.enumerate(k))
}

/// `|f^(+_k)|` without listing the set.
pub fn k_pseudoinverse_count(f: &Endofunction, k: usize) -> u128 {
    RowSolver::new(f).count(k)
}

/// `f^(+_k)`, exhaustive for small `n` and solved above.
pub fn k_pseudoinverse(f: &Endofunction, k: usize) -> Result<Vec<Endofunction>> {
    if f.n() <= EXHAUSTIVE_LIMIT {
        k_pseudoinverse_exhaustive(f, k)
    } else {
        k_pseudoinverse_solver(f, k)
    }
}

/// `d_f`: vertices of in-degree at least one.
pub fn d_f(f: &Endofunction) -> usize {
    f.graph().d_f
}

/// `f^+ = f^(+_{n - d_f}) ∩ S_n`
pub fn canonical_pseudoinverse(f: &Endofunction) -> Result<Vec<Endofunction>> {
    if f.n() > SOLVER_LIMIT {
        return Err(Error::TooLarge { n: f.n(), limit: SOLVER_LIMIT });
    }
    let k = f.n() - d_f(f);
    Ok(Permutations::new(f.n()).filter(|g| l0_distance(g, f) <= 2 * k).collect())
}

/// `f^(+_a) ⊆ f^(+_b)` checked on the listed sets.
pub fn pseudoinverse_monotonicity_check(f: &Endofunction, a: usize, b: usize) -> Result<bool> {
    if a > b {
        return Err(Error::Precondition(format!("need a <= b, got {a} > {b}")));
    }
    let small: BTreeSet<_> = k_pseudoinverse(f, a)?.into_iter().collect();
    let large: BTreeSet<_> = k_pseudoinverse(f, b)?.into_iter().collect();
    Ok(small.is_subset(&large))
}

/// The `2n` members of the 1-pseudoinverse set of the shift-down map:
/// `index = κ < n` fixes 0, shifts up and sends `n-1` to `κ`;
/// `index = n + κ` shifts up cyclically and sends `n-1` to `κ`.
pub fn shift_pseudoinverse(n: usize, index: usize) -> Result<Endofunction> {
    if n < 2 || index >= 2 * n {
        return Err(Error::Precondition(format!("index {index} out of range for n = {n}")));
    }
    let (cyclic, kappa) = (index >= n, index % n);
    let images = (0..n)
        .map(|i| match i {
            _ if i == n - 1 => kappa,
            0 if !cyclic => 0,
            _ => (i + 1) % n,
        })
        .collect();
    Ok(Endofunction::from_images_unchecked(images))
}

/// `p(0) = 0` and `p(i) < i` otherwise: the trees rooted at 0 with
/// parent labels below child labels.
pub fn in_tree_semigroup(p: &Endofunction) -> bool {
    p.apply(0) == 0 && (1..p.n()).all(|i| p.apply(i) < i)
}

/// `q∘g∘h` for the shift-down `g` and every `h ∈ g^+` equals `q` with
/// `n-1` re-attached to 0.
pub fn reattach_identity_check(q: &Endofunction) -> Result<bool> {
    if !in_tree_semigroup(q) {
        return Err(Error::Precondition(format!("{q} is not in the tree semigroup")));
    }
    let n = q.n();
    let g = Endofunction::shift_down(n);
    let mut expected = q.images().to_vec();
    expected[n - 1] = 0;
    let expected = Endofunction::from_images_unchecked(expected);
    for h in canonical_pseudoinverse(&g)? {
        if q.compose_unchecked(&g).compose_unchecked(&h) != expected {
            return Ok(false);
        }
    }
    Ok(true)
}
