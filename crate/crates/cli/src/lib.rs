//! Command-line front end: loads diagram files, runs checks and prints one
//! report per check.
//!
//! Exit status: `0` when nothing failed, `1` when a check failed, `2` on bad
//! input (or, with `--strict`, when a check was skipped for budget reasons).

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use codense::codensity::{
    codensity_monad_check, codensity_value_check, compare_double_dual, compare_ultrafilter,
    CodensityBudget, ProbeSet,
};
use codense::corpus::{power_of_two_corpus, DEFAULT_MAX_EDGES, DEFAULT_MAX_NODES};
use codense::finset::{galvin_horn_check, partition_limit_check, ultrafilter_monad_check, SetObj};
use codense::finvec::{
    coordinate_limit_check, dd_monad_check, dual_choice_check, scalar_uniqueness_check, Field,
    LinearFunctor, VecObj,
};
use codense::io::{load_diagram, AnyDiagram};
use codense::report::{Anchor, Report};
use codense::set_density::{equalizer_witness, verify_three_point_density, DEFAULT_THREE_POINT_BOUND};
use codense::{compute_limit, Budget, Error, Result};

#[derive(Debug, Parser)]
#[command(name = "codense", version, about = "Finite limits, codensity monads and density checks")]
pub struct Cli {
    /// Emit one JSON object per report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Treat checks skipped for budget reasons as errors.
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the limit of a diagram file.
    Limit { file: PathBuf },
    /// Run one of the built-in checks.
    Check {
        #[command(subcommand)]
        check: Check,
    },
    /// Compute codensity monads of small full subcategories.
    Codensity {
        #[command(subcommand)]
        target: CodensityTarget,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FunctorArg {
    Id,
    Dd,
}

#[derive(Debug, Subcommand)]
pub enum Check {
    /// A set of size N as a limit of three-element sets.
    ThreePoint {
        #[arg(long, default_value_t = 4)]
        size: usize,
    },
    /// Sets of size 0, 1, 2 as equalizers of endomaps of a three-element set.
    EqualizerWitness,
    /// Limit sizes of random diagrams of sets with at most two elements.
    PowerOfTwo {
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
        max_nodes: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_EDGES)]
        max_edges: usize,
    },
    /// Coherent choices over all partitions of an N-element set.
    GalvinHorn {
        #[arg(long, default_value_t = 5)]
        size: usize,
    },
    /// The partition-quotient diagram of an N-element set.
    PartitionLimit {
        #[arg(long, default_value_t = 4)]
        size: usize,
    },
    /// Functor and monad laws of the ultrafilter monad on small sets.
    UltrafilterMonad {
        #[arg(long, default_value_t = 4)]
        max_ground: usize,
    },
    /// Laws of the double-dualization monad and its rescalings.
    DdMonad {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Double-dual vectors as coherent choices over linear partitions.
    DualChoice {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Natural maps into the double dual are scalar multiples.
    ScalarUniqueness {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        #[arg(long, value_enum, default_value_t = FunctorArg::Id)]
        functor: FunctorArg,
    },
    /// The coordinate-subspace diagram of F_q^n.
    CoordinateLimit {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Every check with its standard parameters.
    All,
}

#[derive(Debug, Subcommand)]
pub enum CodensityTarget {
    /// Probes are the sets of size 1..=M.
    Set {
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 3)]
        probe_max: usize,
    },
    /// Probes are the spaces F_q^0 ..= F_q^M.
    Vec {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        probe_max: usize,
    },
}

/// A check id paired with the computation producing its report.
pub struct Job {
    pub id: &'static str,
    run: Box<dyn FnOnce() -> Result<Report>>,
}

fn job(id: &'static str, f: impl FnOnce() -> Result<Report> + 'static) -> Job {
    Job { id, run: Box::new(f) }
}

fn field(q: u32) -> Result<Field> {
    Field::new(q)
}

fn limit_report(file: PathBuf) -> Result<Report> {
    let d = load_diagram(&file)?;
    let budget = Budget::from_env();
    let anchor = Anchor::new("limit", "limit of a diagram read from a file");
    let report = Report::new("limit", anchor).metric("file", file.display().to_string());
    Ok(match d {
        AnyDiagram::Set(d) => {
            let lim = compute_limit(&d, budget)?;
            report
                .metric("category", "finset")
                .metric("nodes", d.node_count())
                .metric("edges", d.edge_count())
                .metric("carrier_size", lim.apex.size())
        }
        AnyDiagram::Vec(d) => {
            let lim = compute_limit(&d, budget)?;
            report
                .metric("category", "finvec")
                .metric("q", d.tag().q())
                .metric("nodes", d.node_count())
                .metric("edges", d.edge_count())
                .metric("carrier_size", lim.apex.dim())
        }
    })
}

fn check_jobs(check: Check) -> Vec<Job> {
    let budget = Budget::from_env();
    match check {
        Check::ThreePoint { size } => {
            vec![job("three-point", move || verify_three_point_density(size, DEFAULT_THREE_POINT_BOUND, budget))]
        }
        Check::EqualizerWitness => (0..=2)
            .map(|m| job("equalizer-witness", move || equalizer_witness(m).map(|(_, r)| r)))
            .collect(),
        Check::PowerOfTwo {
            count,
            seed,
            max_nodes,
            max_edges,
        } => vec![job("power-of-two", move || power_of_two_corpus(count, seed, max_nodes, max_edges, budget))],
        Check::GalvinHorn { size } => vec![job("galvin-horn", move || galvin_horn_check(size))],
        Check::PartitionLimit { size } => vec![job("partition-limit", move || partition_limit_check(size))],
        Check::UltrafilterMonad { max_ground } => vec![job("ultrafilter-monad", move || ultrafilter_monad_check(max_ground))],
        Check::DdMonad { q, max_dim, seed } => {
            vec![job("dd-monad", move || dd_monad_check(field(q)?, max_dim, seed))]
        }
        Check::DualChoice { q, dim } => vec![job("dual-choice", move || dual_choice_check(field(q)?, dim, budget))],
        Check::ScalarUniqueness { q, max_dim, functor } => {
            let functor = match functor {
                FunctorArg::Id => LinearFunctor::Identity,
                FunctorArg::Dd => LinearFunctor::DoubleDual,
            };
            vec![job("scalar-uniqueness", move || scalar_uniqueness_check(field(q)?, max_dim, functor, budget))]
        }
        Check::CoordinateLimit { q, n } => vec![job("coordinate-limit", move || coordinate_limit_check(field(q)?, n))],
        Check::All => all_jobs(),
    }
}

fn codensity_jobs(target: CodensityTarget) -> Vec<Job> {
    let budget = CodensityBudget::default();
    match target {
        CodensityTarget::Set { size, probe_max } => {
            let mut jobs = vec![job("codensity-value", move || {
                codensity_value_check(&SetObj::new(size), &ProbeSet::sets(probe_max), budget)
            })];
            if probe_max >= 3 {
                jobs.push(job("codensity-set", move || compare_ultrafilter(size, probe_max, budget)));
            }
            if size <= 2 {
                jobs.push(job("codensity-monad", move || {
                    codensity_monad_check(&SetObj::new(size), &ProbeSet::sets(probe_max), budget)
                }));
            }
            jobs
        }
        CodensityTarget::Vec { q, dim, probe_max } => vec![job("codensity-vec", move || {
            compare_double_dual(VecObj::new(field(q)?, dim), probe_max, budget)
        })],
    }
}

/// The standard suite, in a fixed order.
pub fn all_jobs() -> Vec<Job> {
    let mut jobs = Vec::new();
    for size in 3..=6 {
        jobs.extend(check_jobs(Check::ThreePoint { size }));
    }
    jobs.extend(check_jobs(Check::EqualizerWitness));
    jobs.extend(check_jobs(Check::PowerOfTwo {
        count: 500,
        seed: 0,
        max_nodes: DEFAULT_MAX_NODES,
        max_edges: DEFAULT_MAX_EDGES,
    }));
    for size in 1..=5 {
        jobs.extend(check_jobs(Check::GalvinHorn { size }));
    }
    for size in 1..=4 {
        jobs.extend(check_jobs(Check::PartitionLimit { size }));
    }
    jobs.extend(check_jobs(Check::UltrafilterMonad { max_ground: 4 }));
    for size in 0..=4 {
        jobs.extend(codensity_jobs(CodensityTarget::Set { size, probe_max: 3 }));
    }
    for size in 0..=2 {
        jobs.extend(codensity_jobs(CodensityTarget::Set { size, probe_max: 2 }));
    }
    for q in [2, 3] {
        jobs.extend(check_jobs(Check::DdMonad { q, max_dim: 3, seed: 0 }));
    }
    for (q, dim) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
        jobs.extend(check_jobs(Check::DualChoice { q, dim }));
    }
    for q in [2, 3] {
        for functor in [FunctorArg::Id, FunctorArg::Dd] {
            jobs.extend(check_jobs(Check::ScalarUniqueness { q, max_dim: 2, functor }));
        }
    }
    for q in [2, 3] {
        for dim in 1..=2 {
            jobs.extend(codensity_jobs(CodensityTarget::Vec { q, dim, probe_max: dim }));
        }
    }
    for q in [2, 3] {
        for n in 2..=4 {
            jobs.extend(check_jobs(Check::CoordinateLimit { q, n }));
        }
    }
    jobs
}

fn jobs_for(command: Command) -> Vec<Job> {
    match command {
        Command::Limit { file } => vec![job("limit", move || limit_report(file))],
        Command::Check { check } => check_jobs(check),
        Command::Codensity { target } => codensity_jobs(target),
    }
}

/// Exit status for a finished report stream.
pub fn exit_code(reports: &[Report], strict: bool) -> i32 {
    if reports.iter().any(Report::is_fail) {
        1
    } else if strict && reports.iter().any(Report::is_skipped) {
        2
    } else {
        0
    }
}

fn budget_skip(id: &str, err: &Error) -> Report {
    Report::from_error(
        id,
        Anchor::new("budget", "the check did not fit the configured budget"),
        err,
    )
}

/// Runs `cli`, writing reports to `out` and diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut reports = Vec::new();
    for job in jobs_for(cli.command) {
        let report = match (job.run)() {
            Ok(r) => r,
            Err(e) if e.is_budget() => budget_skip(job.id, &e),
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return 2;
            }
        };
        let line = if cli.json {
            serde_json::to_string(&report).expect("reports serialize")
        } else {
            report.to_string()
        };
        let _ = writeln!(out, "{line}");
        reports.push(report);
    }
    exit_code(&reports, cli.strict)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pass() -> Report {
        Report::new("x", Anchor::new("x", "x"))
    }

    #[test]
    fn exit_codes() {
        let skipped = pass().skip("too big");
        let failed = pass().failed_with(serde_json::json!({}));
        assert_eq!(exit_code(&[pass(), pass()], false), 0);
        assert_eq!(exit_code(&[pass(), skipped.clone()], false), 0);
        assert_eq!(exit_code(&[pass(), skipped.clone()], true), 2);
        assert_eq!(exit_code(&[skipped, failed], true), 1);
        assert_eq!(exit_code(&[], true), 0);
    }

    #[test]
    fn cli_parses() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
