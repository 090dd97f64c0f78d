//! Graceful expansions: a gracefully labeled conjugate `h = σ f σ^(-1)` is
//! written as `h(j) = φ^t(φ^t(j) + (-1)^t s(j) γ(j))` with `φ = (n-1) - id`,
//! `γ = |h - id|` and `s = sgn(h - id)`, for either parity `t`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::endofunction::Endofunction;
use crate::enumerate::Permutations;
use crate::error::{Error, Result};
use crate::labeling::{graceful_labelings, is_gracefully_labeled};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExpansionBasis {
    pub gamma: Endofunction,
    /// Indexed by label `j`, not by vertex.
    pub sign: Vec<i8>,
    pub sigma: Endofunction,
    pub t: u8,
}

#[inline]
fn phi_pow(n: usize, t: u8, j: i64) -> i64 {
    if t % 2 == 1 {
        n as i64 - 1 - j
    } else {
        j
    }
}

/// `γ(0) = 0` required; true iff `i - γ(i)` or `i + γ(i)` stays in `Z_n`
/// for every `i`.
pub fn is_permutation_basis(gamma: &Endofunction) -> Result<bool> {
    if !gamma.is_bijection() {
        return Err(Error::NotBijection(gamma.to_string()));
    }
    if gamma.apply(0) != 0 {
        return Err(Error::Precondition(format!("basis {gamma} does not fix 0")));
    }
    let n = gamma.n();
    Ok((1..n).all(|i| gamma.apply(i) <= i || gamma.apply(i) <= n - 1 - i))
}

/// `⌊(n-1)/2⌋! · ⌈(n-1)/2⌉!`
pub fn basis_count_formula(n: usize) -> u128 {
    let m = n.saturating_sub(1);
    let fact = |k: usize| (1..=k as u128).product::<u128>();
    fact(m / 2) * fact(m - m / 2)
}

/// All bases fixing 0, by filtering the permutations of `{1, …, n-1}`.
pub fn enumerate_bases(n: usize) -> Vec<Endofunction> {
    enumerate_bases_with_first(n, None)
}

/// As [`enumerate_bases`], restricted to `γ(1) = first` when given.
pub fn enumerate_bases_with_first(n: usize, first: Option<usize>) -> Vec<Endofunction> {
    if n == 0 {
        return Vec::new();
    }
    Permutations::new(n - 1)
        .map(|p| {
            let mut images = Vec::with_capacity(n);
            images.push(0);
            images.extend(p.images().iter().map(|&x| x + 1));
            Endofunction::from_images_unchecked(images)
        })
        .filter(|g| first.is_none_or(|v| n < 2 || g.apply(1) == v))
        .filter(|g| is_permutation_basis(g).unwrap())
        .collect()
}

/// Generates bases by placing magnitudes `n-1, n-2, …, 1` one at a time
/// on any free position that can carry them. Output is sorted.
pub fn cascade_bases(n: usize) -> Vec<Endofunction> {
    fn go(n: usize, m: usize, gamma: &mut Vec<usize>, out: &mut Vec<Endofunction>) {
        if m == 0 {
            out.push(Endofunction::from_images_unchecked(gamma.clone()));
            return;
        }
        for i in 1..n {
            if gamma[i] == usize::MAX && (m <= i || m <= n - 1 - i) {
                gamma[i] = m;
                go(n, m - 1, gamma, out);
                gamma[i] = usize::MAX;
            }
        }
    }
    if n == 0 {
        return Vec::new();
    }
    let mut gamma = vec![usize::MAX; n];
    gamma[0] = 0;
    let mut out = Vec::new();
    go(n, n - 1, &mut gamma, &mut out);
    out.sort();
    out
}

/// Recovers `(γ, s)` from a graceful `σ`.
pub fn expansion_from_labeling(f: &Endofunction, sigma: &Endofunction, t: u8) -> Result<ExpansionBasis> {
    if f.n() != sigma.n() {
        return Err(Error::SizeMismatch(f.n(), sigma.n()));
    }
    if t > 1 {
        return Err(Error::Precondition(format!("parity must be 0 or 1, got {t}")));
    }
    let h = f.conjugate(sigma)?;
    if !is_gracefully_labeled(&h) {
        return Err(Error::NotGraceful(format!("{h} (f = {f}, sigma = {sigma})")));
    }
    let n = f.n();
    let mut gamma = Vec::with_capacity(n);
    let mut sign = Vec::with_capacity(n);
    for j in 0..n {
        let diff = phi_pow(n, t, h.apply(j) as i64) - phi_pow(n, t, j as i64);
        gamma.push(diff.unsigned_abs() as usize);
        let signed = if t == 1 { -diff } else { diff };
        sign.push(signed.signum() as i8);
    }
    Ok(ExpansionBasis {
        gamma: Endofunction::from_images_unchecked(gamma),
        sign,
        sigma: sigma.clone(),
        t,
    })
}

impl ExpansionBasis {
    pub fn n(&self) -> usize {
        self.gamma.n()
    }

    /// The labeled function `h = σ f σ^(-1)` the expansion encodes.
    pub fn labeled(&self) -> Result<Endofunction> {
        let n = self.n();
        if self.sign.len() != n {
            return Err(Error::SizeMismatch(n, self.sign.len()));
        }
        if self.sigma.n() != n {
            return Err(Error::SizeMismatch(n, self.sigma.n()));
        }
        let mut h = Vec::with_capacity(n);
        for j in 0..n {
            let step = i64::from(self.sign[j]) * self.gamma.apply(j) as i64;
            let inner = phi_pow(n, self.t, j as i64) + if self.t == 1 { -step } else { step };
            if inner < 0 || inner >= n as i64 {
                return Err(Error::ExpansionOverflow { index: j, value: inner, n });
            }
            h.push(phi_pow(n, self.t, inner) as usize);
        }
        Ok(Endofunction::from_images_unchecked(h))
    }

    /// The same expansion read with the other parity.
    pub fn complement(&self) -> Self {
        Self { t: 1 - self.t, ..self.clone() }
    }

    /// Basis of the swapped-fixed-point counterpart whose loop sits at label
    /// 0, when the labeled graph is a tree.
    pub fn normalized_gamma(&self) -> Result<Option<Endofunction>> {
        let h = self.labeled()?;
        if !h.is_functional_tree() {
            return Ok(None);
        }
        let rooted = h.reroot(0)?;
        let gamma = (0..h.n()).map(|i| rooted.apply(i).abs_diff(i)).collect();
        Ok(Some(Endofunction::from_images_unchecked(gamma)))
    }
}

/// `f = σ^(-1) h σ`, erroring if some step leaves `Z_n`.
pub fn reconstruct(basis: &ExpansionBasis) -> Result<Endofunction> {
    let h = basis.labeled()?;
    let inv = basis.sigma.inverse()?;
    Ok(h.conjugate_unchecked(&inv))
}

/// One expansion per element of `GrL`, each using the lexicographically
/// least `σ` in its coset of `Aut(G_f)`.
pub fn expansions(f: &Endofunction, t: u8) -> Result<Vec<ExpansionBasis>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for sigma in graceful_labelings(f) {
        if seen.insert(f.conjugate_unchecked(&sigma)) {
            out.push(expansion_from_labeling(f, &sigma, t)?);
        }
    }
    Ok(out)
}

/// Lexicographically least element of the coset `σ · Aut(G_f)`.
pub fn coset_representative(f: &Endofunction, sigma: &Endofunction) -> Result<Endofunction> {
    if !sigma.is_bijection() {
        return Err(Error::NotBijection(sigma.to_string()));
    }
    Ok(f.automorphism_group()
        .iter()
        .map(|a| sigma.compose_unchecked(a))
        .min()
        .expect("identity is always an automorphism"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharingReport {
    pub n: usize,
    pub bound: u64,
    /// `(γ, number of gracefully labeled functions with |h - id| = γ)`.
    pub per_basis: Vec<(Endofunction, u64)>,
    pub max_count: u64,
    pub identity_count: u64,
    pub bound_holds: bool,
    pub identity_attains_bound: bool,
}

/// For each basis fixing 0, the number of distinct gracefully labeled
/// functions it reconstructs over every sign row in `{-1, 0, 1}^n`.
pub fn bases_sharing_bound_check(n: usize) -> Result<SharingReport> {
    if !(1..=7).contains(&n) {
        return Err(Error::TooLarge { n, limit: 7 });
    }
    let bound = 1u64 << (n - 1).div_ceil(2);
    let rows: Vec<Vec<i8>> = (0..3usize.pow(n as u32))
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let s = (code % 3) as i8 - 1;
                    code /= 3;
                    s
                })
                .collect()
        })
        .collect();
    let mut per_basis = Vec::new();
    for gamma in enumerate_bases(n) {
        let mut found = BTreeSet::new();
        for sign in &rows {
            let basis = ExpansionBasis {
                gamma: gamma.clone(),
                sign: sign.clone(),
                sigma: Endofunction::identity(n),
                t: 0,
            };
            if let Ok(h) = basis.labeled() {
                let labels: Vec<usize> = (0..n).map(|i| h.apply(i).abs_diff(i)).collect();
                if labels == gamma.images() {
                    found.insert(h);
                }
            }
        }
        per_basis.push((gamma, found.len() as u64));
    }
    let max_count = per_basis.iter().map(|p| p.1).max().unwrap_or(0);
    let identity_count = per_basis
        .iter()
        .find(|(g, _)| *g == Endofunction::identity(n))
        .map_or(0, |p| p.1);
    Ok(SharingReport {
        n,
        bound,
        max_count,
        identity_count,
        bound_holds: max_count <= bound,
        identity_attains_bound: identity_count == bound,
        per_basis,
    })
}

/// From an expansion of a permutation `f`, the expansion of
/// `f^(o_f - 1) = f^(-1)`: `γ' = γ h^(-1)` and `s' = -s h^(-1)`, same `σ`.
pub fn inverse_iterate_expansion(f: &Endofunction, basis: &ExpansionBasis) -> Result<ExpansionBasis> {
    if !f.is_bijection() {
        return Err(Error::NotBijection(f.to_string()));
    }
    if reconstruct(basis)? != *f {
        return Err(Error::Precondition(format!("expansion does not reconstruct {f}")));
    }
    let h = basis.labeled()?;
    let back = h.inverse_unchecked();
    let gamma = basis.gamma.compose_unchecked(&back);
    let sign = (0..f.n()).map(|j| -basis.sign[back.apply(j)]).collect();
    Ok(ExpansionBasis { gamma, sign, sigma: basis.sigma.clone(), t: basis.t })
}
