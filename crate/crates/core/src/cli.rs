//! Command-line front end. Functions are passed as `a,b,c,…` image lists.
//!
//! Exit codes: 0 pass/found, 1 not graceful/absent, 2 usage error,
//! 3 sweep violation.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algebra::certify_graceful;
use crate::decomposition::{ringel_decompose, write_edge_list};
use crate::endofunction::Endofunction;
use crate::enumerate::{
    parse_range, rooted_tree_classes, Endofunctions, IndexedSpace, Permutations, RootedTrees,
};
use crate::error::{Error, Result};
use crate::expansion::{cascade_bases, enumerate_bases, enumerate_bases_with_first, expansion_from_labeling};
use crate::labeling::{
    find_graceful_labeling, grl, label_profile, search_graceful, LabelCountMode, LabelReport,
    EXHAUSTIVE_LIMIT,
};
use crate::monoid::{canonical_pseudoinverse, k_pseudoinverse};
use crate::theorems::{
    verify_composition_lemma, verify_cycle_corollaries, verify_main_theorem, verify_descent,
    verify_descent_steps, SweepOptions, SweepReport, Universe,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ABSENT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "graceful-kit", version, about = "Graceful labelings of functional digraphs on Z_n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Claim {
    Lemma,
    Main,
    Descent,
    #[value(name = "descent-step")]
    DescentStep,
    Corollaries,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Trees,
    #[value(name = "tree-classes")]
    TreeClasses,
    Perms,
    Functions,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Edge labels of f as given, plus search results.
    Check {
        #[arg(short)]
        f: Endofunction,
        /// Allow label-count extrema above n = 7 via branch and bound.
        #[arg(long)]
        bnb: bool,
    },
    /// Find the lexicographically least graceful relabeling.
    Search {
        #[arg(short)]
        f: Endofunction,
        /// Use the label-driven search (any labeling, usually faster).
        #[arg(long)]
        fast: bool,
    },
    /// List the distinct gracefully labeled conjugates.
    Grl {
        #[arg(short)]
        f: Endofunction,
    },
    /// List the permutation bases fixing 0.
    Bases {
        #[arg(short)]
        n: usize,
        /// Only bases with this value at 1.
        #[arg(long)]
        first: Option<usize>,
        /// Generate by the magnitude cascade instead of filtering.
        #[arg(long)]
        cascade: bool,
    },
    /// Graceful expansion of f relative to the labeling sigma.
    Expand {
        #[arg(short)]
        f: Endofunction,
        #[arg(long)]
        sigma: Endofunction,
        #[arg(short, default_value_t = 0)]
        t: u8,
    },
    /// Decide gracefulness through the determinantal certificate.
    Certify {
        #[arg(short)]
        f: Endofunction,
    },
    /// The k-pseudoinverse set, or the canonical one without -k.
    Pinv {
        #[arg(short)]
        f: Endofunction,
        #[arg(short)]
        k: Option<usize>,
    },
    /// Run an exhaustive sweep.
    Verify {
        claim: Claim,
        #[arg(short)]
        n: usize,
        #[arg(long)]
        universe: Option<Universe>,
        /// Stream indices `k..m`.
        #[arg(long)]
        shard: Option<String>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Emit one CSV row per instance rather than per violation.
        #[arg(long)]
        rows: bool,
    },
    /// Cyclic decomposition of K_{2n-1} by the labeled tree.
    Decompose {
        #[arg(short)]
        f: Endofunction,
        #[arg(long)]
        sigma: Endofunction,
    },
    /// Print an input family, one function per line.
    Gen {
        family: Family,
        #[arg(short)]
        n: usize,
        #[arg(long)]
        shard: Option<String>,
    },
}

struct Out {
    sink: Box<dyn Write>,
    format: Format,
}

impl Out {
    fn json<T: Serialize>(&mut self, value: &T) -> Result<()> {
        let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(self.sink, "{text}")?;
        Ok(())
    }

    fn line(&mut self, text: impl std::fmt::Display) -> Result<()> {
        writeln!(self.sink, "{text}")?;
        Ok(())
    }

    /// A list of functions: JSON array, single-column CSV or one per line.
    fn functions(&mut self, header: &str, items: &[Endofunction]) -> Result<()> {
        match self.format {
            Format::Json => self.json(&items),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut self.sink);
                let io = |e: csv::Error| Error::Io(e.to_string());
                w.write_record([header]).map_err(io)?;
                for f in items {
                    w.write_record([f.to_string()]).map_err(io)?;
                }
                w.flush()?;
                Ok(())
            }
            Format::Text => {
                for f in items {
                    self.line(f)?;
                }
                Ok(())
            }
        }
    }
}

fn status(found: bool) -> i32 {
    if found {
        EXIT_OK
    } else {
        EXIT_ABSENT
    }
}

fn shard(text: &Option<String>) -> Result<Option<std::ops::Range<u64>>> {
    text.as_deref().map(parse_range).transpose()
}

fn execute(cli: Cli, out: &mut Out) -> Result<i32> {
    match cli.command {
        Command::Check { f, bnb } => {
            let profile = label_profile(&f);
            let mode = if bnb { LabelCountMode::BranchAndBound } else { LabelCountMode::Exhaustive };
            let report = LabelReport::compute(&f, mode)?;
            #[derive(Serialize)]
            struct Check<'a> {
                f: &'a Endofunction,
                labels: &'a [usize],
                distinct: usize,
                gracefully_labeled: bool,
                report: &'a LabelReport,
            }
            let graceful = profile.is_graceful();
            match out.format {
                Format::Json | Format::Csv => out.json(&Check {
                    f: &f,
                    labels: &profile.labels,
                    distinct: profile.distinct_count,
                    gracefully_labeled: graceful,
                    report: &report,
                })?,
                Format::Text => {
                    let labels: Vec<String> = profile.labels.iter().map(ToString::to_string).collect();
                    out.line(format_args!("labels {}", labels.join(",")))?;
                    out.line(format_args!("distinct {} of {}", profile.distinct_count, f.n()))?;
                    out.line(format_args!("gracefully labeled {graceful}"))?;
                    match &report.sigma {
                        Some(s) => out.line(format_args!("graceful relabeling {s}"))?,
                        None => out.line("graceful relabeling none")?,
                    }
                    out.line(format_args!("grl size {}", report.grl_size))?;
                    if f.n() <= EXHAUSTIVE_LIMIT || bnb {
                        out.line(format_args!(
                            "label count range {}..={}",
                            report.min_labels.unwrap_or(0),
                            report.max_labels.unwrap_or(0)
                        ))?;
                    }
                }
            }
            Ok(status(graceful))
        }
        Command::Search { f, fast } => {
            let sigma = if fast { search_graceful(&f) } else { find_graceful_labeling(&f) };
            #[derive(Serialize)]
            struct Found {
                f: Endofunction,
                sigma: Option<Endofunction>,
                labeled: Option<Endofunction>,
            }
            let labeled = sigma.as_ref().map(|s| f.conjugate_unchecked(s));
            match out.format {
                Format::Text => match (&sigma, &labeled) {
                    (Some(s), Some(h)) => {
                        out.line(format_args!("sigma {s}"))?;
                        out.line(format_args!("labeled {h}"))?;
                    }
                    _ => out.line("none")?,
                },
                _ => out.json(&Found { f: f.clone(), sigma: sigma.clone(), labeled })?,
            }
            Ok(status(sigma.is_some()))
        }
        Command::Grl { f } => {
            let set = grl(&f);
            out.functions("labeled", &set)?;
            Ok(status(!set.is_empty()))
        }
        Command::Bases { n, first, cascade } => {
            if n < 3 {
                return Err(Error::Precondition(format!("bases need n > 2, got {n}")));
            }
            let bases = match (cascade, first) {
                (true, None) => cascade_bases(n),
                (true, Some(v)) => cascade_bases(n).into_iter().filter(|g| g.apply(1) == v).collect(),
                (false, _) => match first {
                    Some(_) => enumerate_bases_with_first(n, first),
                    None => enumerate_bases(n),
                },
            };
            out.functions("gamma", &bases)?;
            Ok(EXIT_OK)
        }
        Command::Expand { f, sigma, t } => match expansion_from_labeling(&f, &sigma, t) {
            Ok(basis) => {
                out.json(&basis)?;
                Ok(EXIT_OK)
            }
            Err(Error::NotGraceful(what)) => {
                out.line(format_args!("not graceful: {what}"))?;
                Ok(EXIT_ABSENT)
            }
            Err(e) => Err(e),
        },
        Command::Certify { f } => {
            let report = certify_graceful(&f);
            match out.format {
                Format::Text => {
                    out.line(format_args!("graceful {}", report.graceful))?;
                    if let Some(w) = &report.witness {
                        let w: Vec<String> = w.iter().map(ToString::to_string).collect();
                        out.line(format_args!("witness {}", w.join(",")))?;
                    }
                    out.line(format_args!("points examined {}", report.points_examined))?;
                    if report.identically_zero {
                        out.line("certificate vanishes identically")?;
                    }
                }
                _ => out.json(&report)?,
            }
            Ok(status(report.graceful))
        }
        Command::Pinv { f, k } => {
            let set = match k {
                Some(k) => k_pseudoinverse(&f, k)?,
                None => canonical_pseudoinverse(&f)?,
            };
            out.functions("g", &set)?;
            Ok(status(!set.is_empty()))
        }
        Command::Verify { claim, n, universe, shard: text, jobs, rows } => {
            let mut opts = SweepOptions::from_env();
            opts.range = shard(&text)?;
            opts.jobs = jobs;
            opts.keep_rows = rows;
            let report: SweepReport = match claim {
                Claim::Lemma => verify_composition_lemma(n, universe.unwrap_or(Universe::Trees), &opts)?,
                Claim::Main => verify_main_theorem(n, universe.unwrap_or(Universe::Trees), &opts)?,
                Claim::Descent => verify_descent(n, &opts)?,
                Claim::DescentStep => verify_descent_steps(n, &opts)?,
                Claim::Corollaries => verify_cycle_corollaries(n, 3, 3, n.min(7))?,
            };
            eprintln!("{} instances in {:.2?}", report.instances_checked, report.wall_time);
            match out.format {
                Format::Csv => report.write_csv(&mut out.sink)?,
                Format::Json => out.json(&report)?,
                Format::Text => {
                    out.line(format_args!(
                        "{} n={} {}: {} checked, {} vacuous, {} violations",
                        report.predicate,
                        report.n,
                        report.universe,
                        report.instances_checked,
                        report.vacuous,
                        report.violations.len()
                    ))?;
                    for v in &report.violations {
                        out.line(format_args!("violation #{} f={} {}", v.index, v.f, v.witness))?;
                    }
                }
            }
            Ok(if report.passed() { EXIT_OK } else { EXIT_VIOLATION })
        }
        Command::Decompose { f, sigma } => match ringel_decompose(&f, &sigma) {
            Ok(report) => {
                match out.format {
                    Format::Text => write_edge_list(&report, &mut out.sink)?,
                    _ => out.json(&report)?,
                }
                Ok(if report.is_partition { EXIT_OK } else { EXIT_VIOLATION })
            }
            Err(Error::NotGraceful(what)) => {
                eprintln!("not graceful: {what}");
                Ok(EXIT_ABSENT)
            }
            Err(e) => Err(e),
        },
        Command::Gen { family, n, shard: text } => {
            let range = shard(&text)?;
            let items: Vec<Endofunction> = match family {
                Family::TreeClasses => rooted_tree_classes(n)?,
                _ => {
                    let space: Box<dyn IndexedSpace> = match family {
                        Family::Trees => Box::new(RootedTrees::new(n)?),
                        Family::Perms => Box::new(Permutations::new(n)),
                        _ => Box::new(Endofunctions::new(n)),
                    };
                    let r = range.clone().unwrap_or(0..space.len());
                    space.range(r).collect()
                }
            };
            let items = match (family, range) {
                (Family::TreeClasses, Some(r)) => {
                    items.into_iter().skip(r.start as usize).take((r.end - r.start) as usize).collect()
                }
                _ => items,
            };
            out.functions("f", &items)?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let sink: Box<dyn Write> = match &cli.output {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(io::BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot create {}: {e}", path.display());
                return EXIT_USAGE;
            }
        },
        None => Box::new(io::BufWriter::new(io::stdout())),
    };
    let mut out = Out { sink, format: cli.format };
    let code = match execute(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    };
    if let Err(e) = out.sink.flush() {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    code
}
