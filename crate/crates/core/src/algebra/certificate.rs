use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::poly::{
    edge_pair_forms, edge_vandermonde, edge_vandermonde_from, full_product, lcm_factored, rat,
    vertex_vandermonde, FactoredPolynomial, LinearForm,
};
use crate::endofunction::Endofunction;
use crate::enumerate::Permutations;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub graceful: bool,
    /// Lattice point `x` (`x_k` is the label of vertex `k`) where no factor
    /// of the certificate vanishes.
    pub witness: Option<Vec<usize>>,
    pub points_examined: u64,
    /// The edge factor vanished symbolically, so the certificate is `≡ 0`.
    pub identically_zero: bool,
    /// At the witness the full product equals `±Π_{i<j} (j-i)²(j+i)`.
    pub witness_value_ok: Option<bool>,
}

/// `LCM(Π_{i<j} (x_j - x_i), Π_{i<j} (a_j² - a_i²))` with `a_k = x_{f(k)} - x_k`.
pub fn certificate_polynomial(f: &Endofunction) -> FactoredPolynomial {
    lcm_factored(&vertex_vandermonde(f.n()), &edge_vandermonde(f)).expect("canonical factors")
}

/// `Π_{i<j} (j-i)²(j+i)`
pub fn graceful_value(n: usize) -> BigInt {
    let mut v = BigInt::one();
    for j in 0..n {
        for i in 0..j {
            v *= BigInt::from((j - i) * (j - i) * (j + i));
        }
    }
    v
}

/// Decides whether the certificate is nonzero modulo the falling factorials
/// by searching lattice points; only permutation points can survive the
/// vertex factor, so labels are assigned injectively in vertex order and a
/// branch dies as soon as a fully assigned factor vanishes.
pub fn certify_graceful(f: &Endofunction) -> CertificateReport {
    let n = f.n();
    let cert = certificate_polynomial(f);
    if cert.is_zero() {
        return CertificateReport {
            graceful: false,
            witness: None,
            points_examined: 0,
            identically_zero: true,
            witness_value_ok: None,
        };
    }
    let mut by_last: Vec<Vec<(Vec<i64>, i64)>> = vec![Vec::new(); n];
    for form in cert.factors().keys() {
        let v = form.last_variable().expect("nonconstant factor");
        by_last[v].push(form.integer_multiple());
    }
    let mut search = PointSearch {
        n,
        by_last,
        x: vec![0; n],
        used: vec![false; n],
        examined: 0,
    };
    let found = search.dfs(0);
    let witness: Option<Vec<usize>> =
        found.then(|| search.x.iter().map(|&v| v as usize).collect());
    let witness_value_ok = witness.as_ref().map(|w| {
        let point: Vec<BigRational> = w.iter().map(|&v| rat(v as i64)).collect();
        let value = full_product(f).eval(&point);
        let target = BigRational::from_integer(graceful_value(n));
        value.abs() == target
    });
    CertificateReport {
        graceful: witness.is_some(),
        witness,
        points_examined: search.examined,
        identically_zero: false,
        witness_value_ok,
    }
}

struct PointSearch {
    n: usize,
    by_last: Vec<Vec<(Vec<i64>, i64)>>,
    x: Vec<i64>,
    used: Vec<bool>,
    examined: u64,
}

impl PointSearch {
    fn dfs(&mut self, v: usize) -> bool {
        if v == self.n {
            return true;
        }
        for value in 0..self.n {
            if self.used[value] {
                continue;
            }
            self.examined += 1;
            self.x[v] = value as i64;
            let alive = self.by_last[v].iter().all(|(coeffs, c)| {
                coeffs[..=v].iter().zip(&self.x).map(|(a, x)| a * x).sum::<i64>() + c != 0
            });
            if alive {
                self.used[value] = true;
                if self.dfs(v + 1) {
                    return true;
                }
                self.used[value] = false;
            }
        }
        false
    }
}

fn require_rooted_tree(f: &Endofunction) -> Result<()> {
    if f.is_functional_tree() && f.apply(0) == 0 {
        Ok(())
    } else {
        Err(Error::NotTree(format!("{f} (root must be 0)")))
    }
}

/// `LCM(vertex Vandermonde, edge factor over 0 < i < j)` for a tree rooted
/// at 0.
pub fn restricted_lcm(f: &Endofunction) -> Result<FactoredPolynomial> {
    require_rooted_tree(f)?;
    lcm_factored(&vertex_vandermonde(f.n()), &edge_vandermonde_from(f, 1))
}

/// The same LCM assembled block by block from tree distances: vertex
/// differences, `2x_{f(i)} - x_i - x_{f²(i)}` at distance 2, sibling forms
/// `2x_{f(j)} - x_j - x_i`, and split differences of squares for edge pairs
/// that share no vertex.
pub fn minimal_lcm(f: &Endofunction) -> Result<FactoredPolynomial> {
    require_rooted_tree(f)?;
    let n = f.n();
    let dist: Vec<Vec<Option<usize>>> = (0..n).map(|v| f.distances_from(v)).collect();
    let d = |u: usize, v: usize| dist[u][v].expect("tree is connected");
    let f2 = |i: usize| f.apply(f.apply(i));
    let mut p = vertex_vandermonde(n);
    for i in 0..n {
        if d(i, f2(i)) == 2 {
            p.mul_form(LinearForm::from_terms(n, &[(f.apply(i), 2), (i, -1), (f2(i), -1)]));
        }
    }
    for j in 0..n {
        for i in 1..j {
            if f.apply(i) == f.apply(j) {
                p.mul_form(LinearForm::from_terms(n, &[(f.apply(j), 2), (j, -1), (i, -1)]));
            }
        }
    }
    for i in 0..n {
        if d(i, f.apply(f2(i))) == 3 {
            for form in edge_pair_forms(f, i, f2(i)) {
                p.mul_form(form);
            }
        }
    }
    for j in 0..n {
        for i in 1..j {
            if d(i, j) >= 3 {
                for form in edge_pair_forms(f, i, j) {
                    p.mul_form(form);
                }
            }
        }
    }
    Ok(FactoredPolynomial::one().mul(&strip_scalar(p)))
}

fn strip_scalar(p: FactoredPolynomial) -> FactoredPolynomial {
    let mut out = FactoredPolynomial::one();
    for (form, &e) in p.factors() {
        out.mul_canonical(rat(1), form.clone(), e);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerReport {
    /// `P_f ≡ 0`, so every permutation fixes it and the comparison is
    /// meaningless.
    pub degenerate: bool,
    pub stabilizer: Vec<Endofunction>,
    pub automorphisms: Vec<Endofunction>,
    pub equal: bool,
}

/// `P_f = Π_{i≠j} (x_j - x_i)((x_{f(j)} - x_j)² - (x_{f(i)} - x_i)²)`
pub fn stabilizer_polynomial(f: &Endofunction) -> FactoredPolynomial {
    let n = f.n();
    let mut p = FactoredPolynomial::one();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                p.mul_form(super::poly::difference(n, j, i));
                for form in edge_pair_forms(f, i, j) {
                    p.mul_form(form);
                }
            }
        }
    }
    p
}

/// Brute-force stabilizer of `P_f` under variable permutation, set beside
/// `Aut(G_f)`.
pub fn stabilizer_equal(f: &Endofunction) -> Result<StabilizerReport> {
    if f.n() > 7 {
        return Err(Error::TooLarge { n: f.n(), limit: 7 });
    }
    let p = stabilizer_polynomial(f);
    let automorphisms = f.automorphism_group();
    if p.is_zero() {
        return Ok(StabilizerReport {
            degenerate: true,
            stabilizer: Permutations::new(f.n()).collect(),
            automorphisms,
            equal: false,
        });
    }
    let stabilizer: Vec<Endofunction> =
        Permutations::new(f.n()).filter(|s| p.substitute(s) == p).collect();
    let equal = stabilizer == automorphisms;
    Ok(StabilizerReport { degenerate: false, stabilizer, automorphisms, equal })
}
