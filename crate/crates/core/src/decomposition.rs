//! Cyclic decomposition of `K_{2n-1}` by a gracefully labeled tree.
//!
//! Vertex `k` of `K_{2n-1}` stands for the root of unity `exp(2πik/(2n-1))`;
//! shifting labels by `s` is rotation, done here in integer arithmetic mod
//! `2n-1`.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::endofunction::Endofunction;
use crate::error::{Error, Result};
use crate::labeling::is_graceful_under;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub n: usize,
    pub modulus: usize,
    /// Shift `s` holds the labeled edges moved by `s`, as `(min, max)` pairs.
    pub shifts: Vec<Vec<(usize, usize)>>,
    pub missing: Vec<(usize, usize)>,
    pub duplicated: Vec<(usize, usize)>,
    pub is_partition: bool,
    /// Rotating shift `s` by one gives shift `s + 1`.
    pub rotationally_coherent: bool,
}

fn canonical(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn sorted(mut edges: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    edges.sort_unstable();
    edges
}

/// Shifts the tree labeled by `σ` through every residue mod `2n-1` and
/// checks that the shifted edge sets partition `E(K_{2n-1})`.
pub fn ringel_decompose(f: &Endofunction, sigma: &Endofunction) -> Result<DecompositionReport> {
    if f.n() != sigma.n() {
        return Err(Error::SizeMismatch(f.n(), sigma.n()));
    }
    if !sigma.is_bijection() {
        return Err(Error::NotBijection(sigma.to_string()));
    }
    if !is_graceful_under(f, sigma) {
        return Err(Error::NotGraceful(format!("{f} under {sigma}")));
    }
    let n = f.n();
    let m = 2 * n - 1;
    let base: Vec<(usize, usize)> = (0..n)
        .filter(|&i| f.apply(i) != i)
        .map(|i| (sigma.apply(i), sigma.apply(f.apply(i))))
        .collect();
    let shifts: Vec<Vec<(usize, usize)>> = (0..m)
        .map(|s| base.iter().map(|&(a, b)| canonical((a + s) % m, (b + s) % m)).collect())
        .collect();

    let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for edge in shifts.iter().flatten() {
        *seen.entry(*edge).or_insert(0) += 1;
    }
    let mut missing = Vec::new();
    for v in 0..m {
        for u in 0..v {
            if !seen.contains_key(&(u, v)) {
                missing.push((u, v));
            }
        }
    }
    let duplicated: Vec<(usize, usize)> =
        seen.iter().filter(|(_, &c)| c > 1).map(|(&e, _)| e).collect();
    let rotationally_coherent = (0..m).all(|s| {
        let rotated = shifts[s].iter().map(|&(a, b)| canonical((a + 1) % m, (b + 1) % m)).collect();
        sorted(rotated) == sorted(shifts[(s + 1) % m].clone())
    });
    Ok(DecompositionReport {
        n,
        modulus: m,
        is_partition: missing.is_empty() && duplicated.is_empty(),
        shifts,
        missing,
        duplicated,
        rotationally_coherent,
    })
}

/// One line per shift, space-separated `u-v` pairs.
pub fn write_edge_list(report: &DecompositionReport, mut out: impl Write) -> Result<()> {
    for shift in &report.shifts {
        let line: Vec<String> = shift.iter().map(|(u, v)| format!("{u}-{v}")).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}
