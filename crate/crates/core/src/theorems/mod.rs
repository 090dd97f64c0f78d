//! Exhaustive checks of the structural claims about graceful functional
//! graphs, run as sweeps over finite universes.

mod descent;
mod sweep;

use serde::{Deserialize, Serialize};

pub use descent::{descent_iterate, descent_reduce, with_leaf_last, DescentStep, DescentTrace};
pub use sweep::{
    run_sweep, CycleTypes, Row, SweepOptions, SweepReport, Universe, Verdict, Violation, CACHE_ENV,
    CHUNK,
};

use crate::endofunction::Endofunction;
use crate::enumerate::{cycle_union, Permutations};
use crate::error::{Error, Result};
use crate::labeling::{grl, is_gracefully_labeled, max_distinct_labels_auto, search_graceful};

fn describe(sigma: Option<Endofunction>) -> String {
    sigma.map_or_else(|| "none".to_string(), |s| format!("sigma={s}"))
}

/// `Aut(G_f) ⊊ Aut(G_{f²})`. The inclusion always holds, so comparing
/// orders suffices.
pub fn aut_strict(f: &Endofunction) -> bool {
    f.iterate(2).automorphism_count() > f.automorphism_count()
}

/// If `Aut(G_f) ⊊ Aut(G_{f²})` and `f²` has a graceful conjugate, so does `f`.
pub fn composition_lemma_check(f: &Endofunction) -> Verdict {
    if !aut_strict(f) {
        return Verdict::Vacuous;
    }
    let f2 = f.iterate(2);
    match search_graceful(&f2) {
        None => Verdict::Pass("f^2 not graceful".to_string()),
        Some(s2) => match search_graceful(f) {
            Some(s) => Verdict::Pass(describe(Some(s))),
            None => Verdict::Fail(format!("f^2 graceful with sigma={s2}; f has no graceful labeling")),
        },
    }
}

pub fn verify_composition_lemma(n: usize, universe: Universe, opts: &SweepOptions) -> Result<SweepReport> {
    let limit = match universe {
        Universe::Trees => 9,
        _ => 6,
    };
    if n > limit {
        return Err(Error::TooLarge { n, limit });
    }
    run_sweep(universe, "composition-lemma", universe.space(n)?.as_ref(), opts, &composition_lemma_check)
}

/// `n + 1 - #components(G_{f^(o_f)}) = max_σ |labels(σ f^(o_f) σ^(-1))|`.
/// When the left side is `n` the right side is decided by a graceful search.
pub fn main_theorem_check(f: &Endofunction) -> Verdict {
    let n = f.n();
    let g = f.iterate(f.order());
    let lhs = n + 1 - g.graph().component_count;
    let rhs = if lhs == n {
        match search_graceful(&g) {
            Some(_) => n,
            None => max_distinct_labels_auto(&g),
        }
    } else {
        max_distinct_labels_auto(&g)
    };
    if lhs == rhs {
        Verdict::Pass(format!("f^(o_f)={g}; value={lhs}"))
    } else {
        Verdict::Fail(format!("f^(o_f)={g}; components give {lhs}, max labels {rhs}"))
    }
}

pub fn verify_main_theorem(n: usize, universe: Universe, opts: &SweepOptions) -> Result<SweepReport> {
    let limit = match universe {
        Universe::Trees | Universe::CycleUnions => 9,
        Universe::Permutations => 7,
        Universe::Endofunctions => 6,
    };
    if n > limit {
        return Err(Error::TooLarge { n, limit });
    }
    run_sweep(universe, "main-theorem", universe.space(n)?.as_ref(), opts, &main_theorem_check)
}

/// One literal reduction step on a semigroup tree.
pub fn descent_step_check(f: &Endofunction) -> Verdict {
    if f.n() <= 3 || f.is_constant() {
        return Verdict::Vacuous;
    }
    match descent_reduce(f) {
        Ok(step) if step.holds() => Verdict::Pass(format!("f~={} f~gh={}", step.f_tilde, step.f_tilde_gh)),
        Ok(step) => Verdict::Fail(format!(
            "f~={} f~gh={} images={:?} strict={} weak={} graceful={} identity={}",
            step.f_tilde,
            step.f_tilde_gh,
            step.image_sizes,
            step.strict,
            step.weak,
            step.graceful,
            step.identity_holds
        )),
        Err(e) => Verdict::Fail(e.to_string()),
    }
}

/// Iterated descent reaches a constant function within `n-2` steps.
pub fn descent_iteration_check(f: &Endofunction) -> Verdict {
    if f.n() <= 3 {
        return Verdict::Vacuous;
    }
    match descent_iterate(f) {
        Ok(t) if t.within_bound => {
            let path: Vec<String> = t.steps.iter().map(|s| s.f_tilde_gh.to_string()).collect();
            Verdict::Pass(format!("steps={} via {}", t.steps.len(), path.join(" -> ")))
        }
        Ok(t) => Verdict::Fail(match t.stuck_at {
            Some(s) => format!("no leaf lowers the image size of {s} after {} steps", t.steps.len()),
            None => format!("needed {} steps", t.steps.len()),
        }),
        Err(e) => Verdict::Fail(e.to_string()),
    }
}

pub fn verify_descent(n: usize, opts: &SweepOptions) -> Result<SweepReport> {
    if n > 9 {
        return Err(Error::TooLarge { n, limit: 9 });
    }
    run_sweep(Universe::Trees, "descent", Universe::Trees.space(n)?.as_ref(), opts, &descent_iteration_check)
}

pub fn verify_descent_steps(n: usize, opts: &SweepOptions) -> Result<SweepReport> {
    if n > 9 {
        return Err(Error::TooLarge { n, limit: 9 });
    }
    run_sweep(Universe::Trees, "descent-step", Universe::Trees.space(n)?.as_ref(), opts, &descent_step_check)
}

/// Gracefully labeled permutations of `Z_n`, counted directly.
pub fn graceful_permutation_count(n: usize) -> u64 {
    Permutations::new(n).filter(is_gracefully_labeled).count() as u64
}

/// `C_1 ∪ 2^s C_{2^t}` has a graceful labeling, for every `s >= 1`,
/// `t >= 2` with `1 + 2^(s+t) <= n_max`; and for every `2 <= n <= count_max`
/// the number of gracefully labeled permutations is divisible by 4.
pub fn verify_cycle_corollaries(n_max: usize, s_max: u32, t_max: u32, count_max: usize) -> Result<SweepReport> {
    if n_max > 9 {
        return Err(Error::TooLarge { n: n_max, limit: 9 });
    }
    if count_max > 7 {
        return Err(Error::TooLarge { n: count_max, limit: 7 });
    }
    let started = std::time::Instant::now();
    let mut report = SweepReport {
        n: n_max,
        universe: Universe::CycleUnions,
        predicate: "cycle-corollaries".to_string(),
        range: (0, 0),
        instances_checked: 0,
        vacuous: 0,
        violations: Vec::new(),
        wall_time: Default::default(),
        rows: Vec::new(),
    };
    let mut record = |f: Endofunction, predicate: &str, pass: bool, witness: String| {
        report.instances_checked += 1;
        report.rows.push(Row {
            n: f.n(),
            universe: Universe::CycleUnions,
            f: f.clone(),
            predicate: predicate.to_string(),
            pass,
            witness: witness.clone(),
        });
        if !pass {
            report.violations.push(Violation {
                index: report.instances_checked - 1,
                f,
                predicate: predicate.to_string(),
                witness,
            });
        }
    };
    for s in 1..=s_max {
        for t in 2..=t_max {
            let n = 1 + (1usize << (s + t));
            if n > n_max {
                continue;
            }
            let mut lengths = vec![1];
            lengths.extend(std::iter::repeat_n(1usize << t, 1 << s));
            let f = cycle_union(n, &lengths)?;
            let sigma = search_graceful(&f);
            record(f, &format!("graceful C1+{}C{}", 1 << s, 1 << t), sigma.is_some(), describe(sigma));
        }
    }
    // on Z_1 the single labeling is its own complement and the count is 1
    for n in 2..=count_max {
        let count = graceful_permutation_count(n);
        record(
            Endofunction::identity(n),
            "graceful permutation count divisible by 4",
            count.is_multiple_of(4),
            format!("count={count}"),
        );
    }
    report.wall_time = started.elapsed();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutFix {
    pub input: Endofunction,
    pub output: Endofunction,
    /// Vertex that received the fixed point, when a reroot was needed.
    pub rerooted_at: Option<usize>,
    pub aut_output: u64,
    pub aut_output_squared: u64,
    pub grl_input: usize,
    pub grl_output: usize,
}

/// Returns a rerooting of the tree `f` with `Aut(G_g) ⊊ Aut(G_{g²})`: `f`
/// itself if it already qualifies, else the first vertex (ascending) at
/// distance exactly 2 from some leaf whose rooting does.
pub fn aut_strictness_fix(f: &Endofunction) -> Result<AutFix> {
    if !f.is_functional_tree() {
        return Err(Error::NotTree(f.to_string()));
    }
    let n = f.n();
    let finish = |g: Endofunction, at: Option<usize>| AutFix {
        input: f.clone(),
        aut_output: g.automorphism_count(),
        aut_output_squared: g.iterate(2).automorphism_count(),
        grl_input: grl(f).len(),
        grl_output: grl(&g).len(),
        output: g,
        rerooted_at: at,
    };
    if n > 2 && aut_strict(f) {
        return Ok(finish(f.clone(), None));
    }
    let adj = f.neighbors();
    let leaves: Vec<usize> = (0..n).filter(|&v| adj[v].len() == 1).collect();
    for v in 0..n {
        let near_leaf = leaves.iter().any(|&l| f.distances_from(l)[v] == Some(2));
        if near_leaf {
            let g = f.reroot(v)?;
            if aut_strict(&g) {
                return Ok(finish(g, Some(v)));
            }
        }
    }
    Err(Error::NoQualifyingVertex(f.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::all_rooted_trees;

    fn ef(s: &str) -> Endofunction {
        s.parse().unwrap()
    }

    #[test]
    fn lemma_small_sweeps() {
        let opts = SweepOptions::default();
        assert!(verify_composition_lemma(4, Universe::Trees, &opts).unwrap().passed());
        let r = verify_composition_lemma(4, Universe::Endofunctions, &opts).unwrap();
        assert!(r.passed());
        assert_eq!(composition_lemma_check(&Endofunction::identity(4)), Verdict::Vacuous);
    }

    #[test]
    fn main_theorem_examples() {
        assert!(matches!(main_theorem_check(&ef("1,0,3,2")), Verdict::Pass(ref w) if w.ends_with("value=1")));
        let r = verify_main_theorem(4, Universe::Endofunctions, &SweepOptions::default()).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
    }

    #[test]
    fn corollaries() {
        let r = verify_cycle_corollaries(9, 1, 2, 6).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!(r.instances_checked, 6);
        assert_eq!(graceful_permutation_count(4), 4);
        assert_eq!(graceful_permutation_count(5), 4);
    }

    #[test]
    fn aut_fix_examples() {
        let path = aut_strictness_fix(&ef("0,0,1,2")).unwrap();
        assert_eq!(path.rerooted_at, Some(1));
        assert!(path.aut_output < path.aut_output_squared);
        // the center rooting of a star is not strict; a leaf rooting is
        let star = aut_strictness_fix(&Endofunction::constant(5, 0).unwrap()).unwrap();
        assert_eq!(star.rerooted_at, Some(1));
        assert_eq!((star.aut_output, star.aut_output_squared), (6, 24));
        assert_eq!((star.grl_input, star.grl_output), (2, 8));
        assert!(aut_strictness_fix(&ef("0,0")).is_err());
    }

    #[test]
    fn grl_times_aut_is_swap_invariant() {
        for f in all_rooted_trees(6).unwrap() {
            let base = grl(&f).len() as u64 * f.automorphism_count();
            for g in f.fixed_point_swaps() {
                assert_eq!(grl(&g).len() as u64 * g.automorphism_count(), base, "{f} vs {g}");
            }
        }
    }
}
