//! Sharded, checkpointed, deterministic sweeps over an [`IndexedSpace`].

use std::fmt;
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::ops::Range;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::endofunction::Endofunction;
use crate::enumerate::{cycle_union, Endofunctions, IndexedSpace, Permutations, RootedTrees};
use crate::error::{Error, Result};

/// Environment variable naming the checkpoint directory.
pub const CACHE_ENV: &str = "GRACEFUL_KIT_CACHE";

/// Instances per checkpoint record; chunk boundaries are multiples of this.
pub const CHUNK: u64 = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Universe {
    Trees,
    Endofunctions,
    Permutations,
    CycleUnions,
}

impl Universe {
    pub fn name(self) -> &'static str {
        match self {
            Universe::Trees => "trees",
            Universe::Endofunctions => "endofunctions",
            Universe::Permutations => "permutations",
            Universe::CycleUnions => "cycle-unions",
        }
    }

    pub fn space(self, n: usize) -> Result<Box<dyn IndexedSpace>> {
        Ok(match self {
            Universe::Trees => Box::new(RootedTrees::new(n)?),
            Universe::Endofunctions => Box::new(Endofunctions::new(n)),
            Universe::Permutations => Box::new(Permutations::new(n)),
            Universe::CycleUnions => Box::new(CycleTypes::new(n)?),
        })
    }
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Universe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trees" => Ok(Universe::Trees),
            "endofunctions" | "functions" => Ok(Universe::Endofunctions),
            "permutations" | "perms" => Ok(Universe::Permutations),
            "cycle-unions" => Ok(Universe::CycleUnions),
            _ => Err(Error::Parse(s.to_string())),
        }
    }
}

/// One permutation per cycle type, cycles laid out by [`cycle_union`],
/// partitions listed in lexicographic order of their sorted parts.
pub struct CycleTypes {
    n: usize,
    items: Vec<Endofunction>,
}

impl CycleTypes {
    pub fn new(n: usize) -> Result<Self> {
        fn parts(rest: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if rest == 0 {
                out.push(cur.clone());
                return;
            }
            for p in min..=rest {
                cur.push(p);
                parts(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut all = Vec::new();
        parts(n, 1, &mut Vec::new(), &mut all);
        let items = all.iter().map(|p| cycle_union(n, p)).collect::<Result<_>>()?;
        Ok(Self { n, items })
    }
}

impl IndexedSpace for CycleTypes {
    fn n(&self) -> usize {
        self.n
    }

    fn len(&self) -> u64 {
        self.items.len() as u64
    }

    fn get(&self, k: u64) -> Endofunction {
        self.items[k as usize].clone()
    }
}

/// Outcome of checking one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The claim holds; the string records the evidence (e.g. a labeling).
    Pass(String),
    /// The claim's premise does not apply.
    Vacuous,
    Fail(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub index: u64,
    pub f: Endofunction,
    pub predicate: String,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub n: usize,
    pub universe: Universe,
    pub f: Endofunction,
    pub predicate: String,
    pub pass: bool,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepReport {
    pub n: usize,
    pub universe: Universe,
    pub predicate: String,
    pub range: (u64, u64),
    pub instances_checked: u64,
    pub vacuous: u64,
    pub violations: Vec<Violation>,
    /// Kept out of the JSON summary so output is byte-identical across runs.
    #[serde(skip)]
    pub wall_time: Duration,
    #[serde(skip)]
    pub rows: Vec<Row>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// `n,universe,f,predicate,pass,witness`; every instance when rows were
    /// kept, otherwise only the violations.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["n", "universe", "f", "predicate", "pass", "witness"]).map_err(io)?;
        let fallback: Vec<Row>;
        let rows = if self.rows.is_empty() {
            fallback = self
                .violations
                .iter()
                .map(|v| Row {
                    n: self.n,
                    universe: self.universe,
                    f: v.f.clone(),
                    predicate: v.predicate.clone(),
                    pass: false,
                    witness: v.witness.clone(),
                })
                .collect();
            &fallback
        } else {
            &self.rows
        };
        for r in rows {
            w.write_record([
                r.n.to_string(),
                r.universe.to_string(),
                r.f.to_string(),
                r.predicate.clone(),
                r.pass.to_string(),
                r.witness.clone(),
            ])
            .map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct SweepOptions {
    /// Restrict to stream indices `k..m`.
    pub range: Option<Range<u64>>,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Append-only checkpoint directory.
    pub cache_dir: Option<PathBuf>,
    /// Keep one row per instance for CSV output (bypasses cached chunks).
    pub keep_rows: bool,
}

impl SweepOptions {
    /// Defaults with the checkpoint directory taken from the environment.
    pub fn from_env() -> Self {
        Self { cache_dir: std::env::var_os(CACHE_ENV).map(PathBuf::from), ..Self::default() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ChunkRecord {
    start: u64,
    end: u64,
    checked: u64,
    vacuous: u64,
    violations: Vec<Violation>,
}

fn load_checkpoint(path: &PathBuf) -> Vec<ChunkRecord> {
    let Ok(file) = fs::File::open(path) else {
        return Vec::new();
    };
    // a torn final line from an interrupted run is skipped
    BufReader::new(file)
        .lines()
        .map_while(std::result::Result::ok)
        .filter_map(|line| serde_json::from_str(&line).ok())
        .collect()
}

/// Runs `check` over `space` (restricted to `opts.range`), in stream order.
pub fn run_sweep(
    universe: Universe,
    predicate: &str,
    space: &dyn IndexedSpace,
    opts: &SweepOptions,
    check: &(dyn Fn(&Endofunction) -> Verdict + Sync),
) -> Result<SweepReport> {
    let started = Instant::now();
    let n = space.n();
    let full = 0..space.len();
    let range = match &opts.range {
        Some(r) => r.start.min(full.end)..r.end.min(full.end),
        None => full,
    };
    let checkpoint = match &opts.cache_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            Some(dir.join(format!("{predicate}-{universe}-n{n}.jsonl")))
        }
        None => None,
    };
    let cached = match (&checkpoint, opts.keep_rows) {
        (Some(path), false) => load_checkpoint(path),
        _ => Vec::new(),
    };

    let pool = match opts.jobs {
        Some(j) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| Error::Precondition(e.to_string()))?,
        ),
        None => None,
    };
    let run_chunk = |chunk: Range<u64>| -> Vec<(u64, Endofunction, Verdict)> {
        let work = || {
            chunk
                .clone()
                .into_par_iter()
                .map(|k| {
                    let f = space.get(k);
                    let v = check(&f);
                    (k, f, v)
                })
                .collect()
        };
        match &pool {
            Some(p) => p.install(work),
            None => work(),
        }
    };

    let mut report = SweepReport {
        n,
        universe,
        predicate: predicate.to_string(),
        range: (range.start, range.end),
        instances_checked: 0,
        vacuous: 0,
        violations: Vec::new(),
        wall_time: Duration::ZERO,
        rows: Vec::new(),
    };
    let mut start = range.start;
    while start < range.end {
        let end = ((start / CHUNK + 1) * CHUNK).min(range.end);
        if let Some(rec) = cached.iter().find(|r| r.start == start && r.end == end) {
            report.instances_checked += rec.checked;
            report.vacuous += rec.vacuous;
            report.violations.extend(rec.violations.iter().cloned());
            start = end;
            continue;
        }
        let mut rec = ChunkRecord { start, end, checked: 0, vacuous: 0, violations: Vec::new() };
        for (k, f, verdict) in run_chunk(start..end) {
            rec.checked += 1;
            let (pass, witness) = match verdict {
                Verdict::Pass(w) => (true, w),
                Verdict::Vacuous => {
                    rec.vacuous += 1;
                    (true, "vacuous".to_string())
                }
                Verdict::Fail(w) => {
                    rec.violations.push(Violation {
                        index: k,
                        f: f.clone(),
                        predicate: predicate.to_string(),
                        witness: w.clone(),
                    });
                    (false, w)
                }
            };
            if opts.keep_rows {
                report.rows.push(Row { n, universe, f, predicate: predicate.to_string(), pass, witness });
            }
        }
        if let Some(path) = &checkpoint {
            let mut file = OpenOptions::new().create(true).append(true).open(path)?;
            let line = serde_json::to_string(&rec).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(file, "{line}")?;
        }
        report.instances_checked += rec.checked;
        report.vacuous += rec.vacuous;
        report.violations.extend(rec.violations);
        start = end;
    }
    report.wall_time = started.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn odd_first(f: &Endofunction) -> Verdict {
        match f.apply(0) {
            0 => Verdict::Vacuous,
            v if v % 2 == 1 => Verdict::Pass(String::new()),
            _ => Verdict::Fail(format!("f(0) = {}", f.apply(0))),
        }
    }

    #[test]
    fn counts_and_order() {
        let space = Endofunctions::new(3);
        let r = run_sweep(Universe::Endofunctions, "odd", &space, &SweepOptions::default(), &odd_first)
            .unwrap();
        assert_eq!(r.instances_checked, 27);
        assert_eq!(r.vacuous, 9);
        assert_eq!(r.violations.len(), 9);
        assert!(r.violations.windows(2).all(|w| w[0].index < w[1].index));
    }

    #[test]
    fn shards_and_jobs_agree() {
        let space = Endofunctions::new(4);
        let whole = run_sweep(Universe::Endofunctions, "odd", &space, &SweepOptions::default(), &odd_first)
            .unwrap();
        let mut parts = Vec::new();
        for r in [0..100, 100..256] {
            let opts = SweepOptions { range: Some(r), jobs: Some(2), ..Default::default() };
            parts.extend(run_sweep(Universe::Endofunctions, "odd", &space, &opts, &odd_first).unwrap().violations);
        }
        assert_eq!(parts, whole.violations);
    }

    #[test]
    fn checkpoint_resume() {
        let dir = tempfile::tempdir().unwrap();
        let opts = SweepOptions { cache_dir: Some(dir.path().to_path_buf()), ..Default::default() };
        let space = Endofunctions::new(5);
        let first = run_sweep(Universe::Endofunctions, "odd", &space, &opts, &odd_first).unwrap();
        // a checker that would fail everywhere is never consulted on resume
        let again = run_sweep(Universe::Endofunctions, "odd", &space, &opts, &|_| Verdict::Fail("x".into()))
            .unwrap();
        assert_eq!(first.violations, again.violations);
        assert_eq!(again.instances_checked, 3125);
    }

    #[test]
    fn cycle_types() {
        let space = CycleTypes::new(5).unwrap();
        assert_eq!(space.len(), 7);
        assert_eq!(space.get(0), Endofunction::identity(5));
    }

    #[test]
    fn csv_rows() {
        let space = Endofunctions::new(2);
        let opts = SweepOptions { keep_rows: true, ..Default::default() };
        let r = run_sweep(Universe::Endofunctions, "odd", &space, &opts, &odd_first).unwrap();
        let mut out = Vec::new();
        r.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(text.contains("2,endofunctions,\"1,0\",odd,true,"));
    }
}
