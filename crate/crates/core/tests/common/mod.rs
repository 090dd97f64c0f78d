//! Brute-force oracles on plain image vectors, sharing no code with the library.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeSet;

pub type Map = Vec<usize>;

/// All permutations of `0..n` in lexicographic order.
pub fn perms(n: usize) -> Vec<Map> {
    fn go(n: usize, cur: &mut Map, used: &mut Vec<bool>, out: &mut Vec<Map>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// All maps `Z_n -> Z_n`, lexicographic.
pub fn maps(n: usize) -> Vec<Map> {
    let total = n.pow(n as u32);
    (0..total)
        .map(|mut k| {
            let mut f = vec![0; n];
            for slot in f.iter_mut().rev() {
                *slot = k % n;
                k /= n;
            }
            f
        })
        .collect()
}

/// `σ f σ^(-1)`
pub fn conj(f: &[usize], s: &[usize]) -> Map {
    let mut out = vec![0; f.len()];
    for i in 0..f.len() {
        out[s[i]] = s[f[i]];
    }
    out
}

pub fn label_set(f: &[usize]) -> BTreeSet<usize> {
    f.iter().enumerate().map(|(i, &v)| i.abs_diff(v)).collect()
}

pub fn distinct_under(f: &[usize], s: &[usize]) -> usize {
    (0..f.len()).map(|i| s[f[i]].abs_diff(s[i])).collect::<BTreeSet<_>>().len()
}

pub fn is_labeled_gracefully(f: &[usize]) -> bool {
    label_set(f).len() == f.len()
}

pub fn max_labels(f: &[usize], ps: &[Map]) -> usize {
    ps.iter().map(|s| distinct_under(f, s)).max().unwrap_or(0)
}

pub fn min_labels(f: &[usize], ps: &[Map]) -> usize {
    ps.iter().map(|s| distinct_under(f, s)).min().unwrap_or(0)
}

pub fn graceful(f: &[usize], ps: &[Map]) -> bool {
    ps.iter().any(|s| distinct_under(f, s) == f.len())
}

pub fn graceful_conjugates(f: &[usize], ps: &[Map]) -> BTreeSet<Map> {
    ps.iter().map(|s| conj(f, s)).filter(|h| is_labeled_gracefully(h)).collect()
}

pub fn aut_count(f: &[usize], ps: &[Map]) -> usize {
    ps.iter().filter(|s| conj(f, s) == f).count()
}

pub fn compose(f: &[usize], g: &[usize]) -> Map {
    g.iter().map(|&v| f[v]).collect()
}

pub fn iterate(f: &[usize], k: usize) -> Map {
    let mut out: Map = (0..f.len()).collect();
    for _ in 0..k {
        out = compose(f, &out);
    }
    out
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Lengths of the cycles of `G_f`, one entry per cycle.
pub fn cycle_lengths(f: &[usize]) -> Vec<usize> {
    let n = f.len();
    let on_cycle: BTreeSet<usize> = (0..n).map(|i| iterate(f, n)[i]).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &v in &on_cycle {
        if seen.contains(&v) {
            continue;
        }
        let mut len = 0;
        let mut w = v;
        loop {
            seen.insert(w);
            len += 1;
            w = f[w];
            if w == v {
                break;
            }
        }
        out.push(len);
    }
    out
}

/// Connected components of the undirected graph of `f`.
pub fn components(f: &[usize]) -> usize {
    let n = f.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for i in 0..n {
        let (a, b) = (find(&mut parent, i), find(&mut parent, f[i]));
        parent[a] = b;
    }
    (0..n).filter(|&i| find(&mut parent, i) == i).count()
}

/// Fewest non-loop edges to delete so the remaining non-loop edges form
/// vertex-disjoint paths (a 2-cycle counts as two parallel edges).
pub fn rho(f: &[usize]) -> usize {
    let n = f.len();
    let edges: Vec<(usize, usize)> = (0..n).filter(|&i| f[i] != i).map(|i| (i, f[i])).collect();
    let m = edges.len();
    let mut best = m;
    for mask in 0u32..(1 << m) {
        let deleted = mask.count_ones() as usize;
        if deleted >= best {
            continue;
        }
        let mut deg = vec![0; n];
        let mut parent: Vec<usize> = (0..n).collect();
        let mut ok = true;
        for (k, &(a, b)) in edges.iter().enumerate() {
            if mask >> k & 1 == 1 {
                continue;
            }
            deg[a] += 1;
            deg[b] += 1;
            let (mut ra, mut rb) = (a, b);
            while parent[ra] != ra {
                ra = parent[ra];
            }
            while parent[rb] != rb {
                rb = parent[rb];
            }
            if ra == rb || deg[a] > 2 || deg[b] > 2 {
                ok = false;
                break;
            }
            parent[ra] = rb;
        }
        if ok {
            best = deleted;
        }
    }
    best
}
