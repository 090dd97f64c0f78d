//! Leaf-reattachment descent on the tree semigroup `{p : p(0) = 0, p(i) < i}`.
//!
//! One step drops the leaf `n-1`, labels the rest gracefully, moves the fixed
//! point onto whichever of labels `0` and `n-2` is not a leaf (complementing
//! the labels if that was `n-2`), and then compares the tree with `n-1` put
//! back at its old parent (`f̃`) against the one with `n-1` hung off the root
//! (`f̃∘g∘h` for the shift-down `g` and `h ∈ g^+`).

use serde::{Deserialize, Serialize};

use crate::endofunction::Endofunction;
use crate::error::{Error, Result};
use crate::labeling::{find_graceful_labeling, is_gracefully_labeled, search_graceful};
use crate::monoid::{canonical_pseudoinverse, in_tree_semigroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentStep {
    pub f: Endofunction,
    /// Graceful labeling of `f` restricted to `Z_{n-1}`.
    pub restricted_sigma: Endofunction,
    /// Label (`0` or `n-2`) that received the fixed point.
    pub fixed_point_label: usize,
    pub f_tilde: Endofunction,
    pub f_tilde_gh: Endofunction,
    /// `|f(Z_n)|`, `|f̃(Z_n)|`, `|f̃gh(Z_n)|`.
    pub image_sizes: [usize; 3],
    /// `|f̃gh(Z_n)| < |f̃(Z_n)|`
    pub strict: bool,
    /// `|f̃(Z_n)| <= |f(Z_n)|`
    pub weak: bool,
    pub graceful: bool,
    /// `f̃∘g∘h` equals the relabeled leaf-at-root tree for every `h ∈ g^+`.
    pub identity_holds: bool,
    /// Undirected degree of the old parent of `n-1`.
    pub parent_degree: usize,
}

impl DescentStep {
    pub fn holds(&self) -> bool {
        self.strict && self.weak && self.graceful && self.identity_holds
    }
}

/// Relabeling `ψ` (old vertex → new label) by breadth-first order from
/// `root`, smaller neighbors first, with `last` held back to the end.
fn bfs_relabel(t: &Endofunction, root: usize, last: Option<usize>) -> Endofunction {
    let n = t.n();
    let adj = t.neighbors();
    let mut order = vec![root];
    let mut seen = vec![false; n];
    seen[root] = true;
    if let Some(l) = last {
        seen[l] = true;
    }
    let mut k = 0;
    while k < order.len() {
        for &w in &adj[order[k]] {
            if !seen[w] {
                seen[w] = true;
                order.push(w);
            }
        }
        k += 1;
    }
    if let Some(l) = last {
        order.push(l);
    }
    let mut psi = vec![0; n];
    for (label, &v) in order.iter().enumerate() {
        psi[v] = label;
    }
    Endofunction::from_images_unchecked(psi)
}

/// Relabels a semigroup tree so that `leaf` becomes vertex `n-1`.
pub fn with_leaf_last(f: &Endofunction, leaf: usize) -> Result<Endofunction> {
    if !in_tree_semigroup(f) {
        return Err(Error::Precondition(format!("{f} is not in the tree semigroup")));
    }
    if leaf == 0 || f.images().contains(&leaf) {
        return Err(Error::Precondition(format!("{leaf} is not a non-root leaf of {f}")));
    }
    let psi = bfs_relabel(f, 0, Some(leaf));
    Ok(f.conjugate_unchecked(&psi))
}

pub fn descent_reduce(f: &Endofunction) -> Result<DescentStep> {
    let n = f.n();
    if n <= 3 {
        return Err(Error::Precondition(format!("needs n > 3, got {n}")));
    }
    if !in_tree_semigroup(f) {
        return Err(Error::Precondition(format!("{f} is not in the tree semigroup")));
    }
    if f.is_constant() {
        return Err(Error::Precondition(format!("{f} is constant")));
    }
    if search_graceful(f).is_none() {
        return Err(Error::NotGraceful(f.to_string()));
    }
    let m = n - 1;
    let q = Endofunction::new(f.images()[..m].to_vec())?;
    let parent = f.apply(m);
    let sigma = find_graceful_labeling(&q).ok_or_else(|| Error::NotGraceful(q.to_string()))?;
    let h = q.conjugate_unchecked(&sigma);

    // labels 0 and m-1 span the largest edge; at most one is a leaf
    let degree = |t: &Endofunction, v: usize| t.neighbors()[v].len();
    let fixed_point_label = if degree(&h, 0) >= 2 { 0 } else { m - 1 };
    let mut rooted = h.reroot(fixed_point_label)?;
    let mut tau = sigma.clone();
    if fixed_point_label != 0 {
        let comp = Endofunction::complement(m);
        rooted = rooted.conjugate_unchecked(&comp);
        tau = comp.compose_unchecked(&tau);
    }
    debug_assert!(is_gracefully_labeled(&rooted) && rooted.apply(0) == 0);

    let extend = |attach: usize| {
        let mut images = rooted.images().to_vec();
        images.push(attach);
        Endofunction::from_images_unchecked(images)
    };
    let r_tilde = extend(tau.apply(parent));
    let r_leaf = extend(0);
    let psi = bfs_relabel(&r_tilde, 0, Some(m));
    let f_tilde = r_tilde.conjugate_unchecked(&psi);
    let expected = r_leaf.conjugate_unchecked(&psi);

    let g = Endofunction::shift_down(n);
    let pseudo = canonical_pseudoinverse(&g)?;
    let identity_holds = pseudo.iter().all(|hh| f_tilde.compose_unchecked(&g).compose_unchecked(hh) == expected);
    let f_tilde_gh = f_tilde.compose_unchecked(&g).compose_unchecked(&pseudo[0]);
    let graceful = is_gracefully_labeled(&r_leaf) && search_graceful(&f_tilde_gh).is_some();
    let image_sizes = [f.image_size(), f_tilde.image_size(), f_tilde_gh.image_size()];
    Ok(DescentStep {
        f: f.clone(),
        restricted_sigma: sigma,
        fixed_point_label,
        strict: image_sizes[2] < image_sizes[1],
        weak: image_sizes[1] <= image_sizes[0],
        f_tilde,
        f_tilde_gh,
        image_sizes,
        graceful,
        identity_holds,
        parent_degree: degree(f, parent),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentTrace {
    pub start: Endofunction,
    /// Steps taken; each one's input is the previous output `f̃gh`.
    pub steps: Vec<DescentStep>,
    pub reached_constant: bool,
    /// Steps needed, when the constant was reached, is at most `n-2`.
    pub within_bound: bool,
    /// Tree where no choice of removed leaf lowers the image size.
    pub stuck_at: Option<Endofunction>,
}

/// Iterates the step until a constant function is reached. Each round tries
/// every non-root leaf as `n-1` (smallest first) and keeps the first whose
/// `f̃gh` has a smaller image than the current tree.
pub fn descent_iterate(f: &Endofunction) -> Result<DescentTrace> {
    let n = f.n();
    let mut cur = f.clone();
    let mut steps = Vec::new();
    let mut stuck_at = None;
    while !cur.is_constant() {
        let leaves: Vec<usize> = (1..n).filter(|v| !cur.images().contains(v)).collect();
        let mut next = None;
        for leaf in leaves {
            let step = descent_reduce(&with_leaf_last(&cur, leaf)?)?;
            if step.image_sizes[2] < cur.image_size() && step.graceful {
                next = Some(step);
                break;
            }
        }
        match next {
            Some(step) => {
                cur = step.f_tilde_gh.clone();
                steps.push(step);
            }
            None => {
                stuck_at = Some(cur.clone());
                break;
            }
        }
    }
    let reached_constant = stuck_at.is_none();
    Ok(DescentTrace {
        start: f.clone(),
        within_bound: reached_constant && steps.len() <= n.saturating_sub(2),
        reached_constant,
        stuck_at,
        steps,
    })
}
