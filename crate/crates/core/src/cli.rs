//! Command-line front end. `run` takes the argument list and output streams so
//! the binary stays a thin wrapper and tests can drive every command in-process.
//!
//! Exit codes: 0 success or reversible, 1 a negative verdict, 2 usage or input errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dynamics::{build_transition_graph, global_step, trajectory};
use crate::error::{Error, Result};
use crate::export::{self, DotOptions};
use crate::reversibility::{
    check_algebraic, classify_empirical, cross_validate, default_options, EmpiricalLabel,
};
use crate::rule::{parse_rule, Configuration, FdcaRule, StateCount};
use crate::synthesis::{count_reversible, enumerate_reversible, table_row};
use crate::DEFAULT_NODE_CAP;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fdca", version, about = "Reversibility of first-degree cellular automata under null boundary")]
pub struct Cli {
    /// Worker threads for graph building and verification
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide reversibility for every lattice size from the coefficients
    Check(RuleArg),
    /// Apply the global map once
    Step(StepArgs),
    /// Print a trajectory, one configuration per line
    Run(RunArgs),
    /// Emit the transition graph for one lattice size
    Graph(GraphArgs),
    /// Stream every reversible rule for a state count
    Synthesize(SynthesizeArgs),
    /// Brute-force bijectivity over a range of lattice sizes
    Classify(ClassifyArgs),
    /// Cross-check the coefficient test against the brute-force oracle
    Verify(VerifyArgs),
    /// Print the coefficient table for a state count
    Table(TableArgs),
}

#[derive(Debug, Args)]
struct RuleArg {
    /// Rule text "d:c0,c1,c2,c3,c4,c5,c6,c7"
    #[arg(long)]
    rule: String,
}

#[derive(Debug, Args)]
struct StepArgs {
    #[arg(long)]
    rule: String,
    /// Comma-separated cell states, cell 0 first
    #[arg(long)]
    config: String,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    rule: String,
    #[arg(long)]
    config: String,
    #[arg(long, default_value_t = 1)]
    steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Dot,
    Csv,
    Jsonl,
    Json,
    Text,
}

#[derive(Debug, Args)]
struct GraphArgs {
    #[arg(long)]
    rule: String,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Format::Dot)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
    cap: u64,
    /// Mark unreachable nodes and nodes with several predecessors
    #[arg(long)]
    highlight: bool,
    /// Add base-d digit strings to node labels
    #[arg(long)]
    digits: bool,
}

#[derive(Debug, Args)]
struct SynthesizeArgs {
    #[arg(long)]
    d: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print only the number of reversible rules
    #[arg(long)]
    count_only: bool,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[arg(long)]
    rule: String,
    #[arg(long)]
    n_min: usize,
    #[arg(long)]
    n_max: usize,
    #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
    cap: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    d: u64,
    /// Largest lattice size tested (default depends on d and the cap)
    #[arg(long)]
    n_max: Option<usize>,
    /// Test a seeded sample of this many tuples instead of all d^8
    #[arg(long, conflicts_with = "exhaustive")]
    sample: Option<usize>,
    /// Test all d^8 tuples even where a sample is the default
    #[arg(long)]
    exhaustive: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
    cap: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long)]
    d: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };

    match dispatch(cli.command, cli.jobs, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, jobs: Option<usize>, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Check(a) => cmd_check(&a, out),
        Command::Step(a) => cmd_step(&a, out),
        Command::Run(a) => cmd_run(&a, out),
        Command::Graph(a) => cmd_graph(&a, jobs, out),
        Command::Synthesize(a) => cmd_synthesize(&a, out),
        Command::Classify(a) => cmd_classify(&a, out),
        Command::Verify(a) => cmd_verify(&a, jobs, out, err),
        Command::Table(a) => cmd_table(&a, out),
    }
}

fn with_output(path: &Option<PathBuf>, out: &mut dyn Write, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            f(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => f(out),
    }
}

fn unsupported(format: Format, command: &str) -> Error {
    Error::Io(std::io::Error::new(
        std::io::ErrorKind::InvalidInput,
        format!("format {format:?} is not supported by {command}"),
    ))
}

fn cmd_check(a: &RuleArg, out: &mut dyn Write) -> Result<i32> {
    let verdict = check_algebraic(&parse_rule(&a.rule)?);
    writeln!(out, "{verdict}")?;
    Ok(if verdict.is_reversible() { EXIT_OK } else { EXIT_NEGATIVE })
}

fn rule_and_config(rule: &str, config: &str) -> Result<(FdcaRule, Configuration)> {
    let rule = parse_rule(rule)?;
    let config = Configuration::parse(rule.d(), config)?;
    Ok((rule, config))
}

fn cmd_step(a: &StepArgs, out: &mut dyn Write) -> Result<i32> {
    let (rule, config) = rule_and_config(&a.rule, &a.config)?;
    writeln!(out, "{}", global_step(&rule, &config)?)?;
    Ok(EXIT_OK)
}

fn cmd_run(a: &RunArgs, out: &mut dyn Write) -> Result<i32> {
    let (rule, config) = rule_and_config(&a.rule, &a.config)?;
    for c in trajectory(&rule, &config, a.steps)? {
        writeln!(out, "{c}")?;
    }
    Ok(EXIT_OK)
}

fn cmd_graph(a: &GraphArgs, jobs: Option<usize>, out: &mut dyn Write) -> Result<i32> {
    if a.format != Format::Dot {
        return Err(unsupported(a.format, "graph"));
    }
    let rule = parse_rule(&a.rule)?;
    let graph = match jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Io(std::io::Error::other(e)))?
            .install(|| build_transition_graph(&rule, a.n, a.cap))?,
        None => build_transition_graph(&rule, a.n, a.cap)?,
    };
    let dot = export::graph_to_dot_with(
        &graph,
        DotOptions {
            highlight_collisions: a.highlight,
            digit_labels: a.digits,
        },
    );
    with_output(&a.out, out, |w| Ok(w.write_all(dot.as_bytes())?))?;
    Ok(EXIT_OK)
}

fn cmd_synthesize(a: &SynthesizeArgs, out: &mut dyn Write) -> Result<i32> {
    let d = StateCount::new(a.d)?;
    if a.count_only {
        writeln!(out, "{}", count_reversible(d)?)?;
        return Ok(EXIT_OK);
    }
    let rules = enumerate_reversible(d);
    with_output(&a.out, out, |w| {
        match a.format {
            Format::Csv => export::write_rules_csv(rules, w)?,
            Format::Jsonl => export::write_rules_jsonl(rules, w)?,
            Format::Text => export::write_rules_text(rules, w)?,
            other => return Err(unsupported(other, "synthesize")),
        };
        Ok(())
    })?;
    Ok(EXIT_OK)
}

fn cmd_classify(a: &ClassifyArgs, out: &mut dyn Write) -> Result<i32> {
    let rule = parse_rule(&a.rule)?;
    let class = classify_empirical(&rule, a.n_min, a.n_max, a.cap)?;
    match a.format {
        Format::Json => out.write_all(export::to_json(&class).as_bytes())?,
        Format::Text => {
            for (n, ok) in &class.per_n {
                writeln!(out, "n={n}: {}", if *ok { "bijective" } else { "not bijective" })?;
            }
            let label = match class.label {
                EmpiricalLabel::AllReversibleTested => "reversible at every tested n",
                EmpiricalLabel::AllIrreversibleTested => "irreversible at every tested n",
                EmpiricalLabel::MixedTested => "mixed",
            };
            writeln!(out, "class: {label} (n = {}..{})", class.n_min, class.n_max)?;
        }
        other => return Err(unsupported(other, "classify")),
    }
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs, jobs: Option<usize>, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let d = StateCount::new(a.d)?;
    let mut options = default_options(d, a.cap);
    options.jobs = jobs;
    if let Some(n_max) = a.n_max {
        options.n_max = n_max;
    }
    if a.exhaustive {
        options.sample = None;
    }
    if a.sample.is_some() {
        options.sample = a.sample;
    }
    if let Some(seed) = a.seed {
        options.seed = seed;
    }
    match options.sample {
        Some(k) => writeln!(err, "verifying d={d}: {k} sampled tuples, n = 1..{}", options.n_max)?,
        None => writeln!(err, "verifying d={d}: all {d}^8 tuples, n = 1..{}", options.n_max)?,
    }
    let report = cross_validate(d, &options)?;
    writeln!(
        err,
        "done: {} tuples, {} violations, {} ms",
        report.tuples_tested,
        report.violations.len(),
        report.elapsed_ms
    )?;
    let json = export::report_to_json(&report);
    with_output(&a.out, out, |w| Ok(w.write_all(json.as_bytes())?))?;
    Ok(if report.violations.is_empty() { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_table(a: &TableArgs, out: &mut dyn Write) -> Result<i32> {
    let table = table_row(StateCount::new(a.d)?);
    match a.format {
        Format::Text => write!(out, "{table}")?,
        Format::Json => out.write_all(export::to_json(&table).as_bytes())?,
        other => return Err(unsupported(other, "table")),
    }
    Ok(EXIT_OK)
}
