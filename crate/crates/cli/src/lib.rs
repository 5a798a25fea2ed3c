//! The `equifac` command line: evaluate mechanisms on a profile, search
//! for worst-case ratios, test strategy-proofness and regenerate the
//! summary table.

pub mod config;
pub mod error;
pub mod parse;
pub mod report;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use equifac::analysis::{
    reproduce_table1, strategy_proofness_test, table1_markdown, worst_case_search, SearchConfig, SpTestConfig,
};
use equifac::oracle::{self, OracleResult};
use equifac::{MechanismSpec, NumericPolicy, Objective, ObjectiveReport, Outcome, Profile};

use config::ExperimentConfig;
use error::{CliError, EXIT_MANIPULABLE, EXIT_OK};
use parse::{parse_list, parse_number};

#[derive(Debug, Parser)]
#[command(name = "equifac", version, about = "Equitable strategy-proof facility location on [0, 1]")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a mechanism on one profile and report every objective.
    Eval(Flags),
    /// Search for the worst approximation ratio; writes CSV.
    RatioSearch(Flags),
    /// Look for a profitable misreport. Exit status 3 when one is found.
    SpTest(Flags),
    /// Regenerate the summary table of approximation ratios.
    Table1(Flags),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Key = value config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Comma-separated locations; fractions such as 1/3 are exact.
    #[arg(long, allow_hyphen_values = true)]
    pub profile: Option<String>,
    #[arg(long)]
    pub mechanism: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    /// Comma-separated phantom locations for phantom-median.
    #[arg(long)]
    pub phantoms: Option<String>,
    #[arg(long)]
    pub objective: Option<String>,
    /// Facility count for the optimum when no mechanism is given.
    #[arg(long)]
    pub facilities: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub n_min: Option<usize>,
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Grid points per axis for the grid-based two-facility cross-check.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Also compute the optimum and the approximation ratio.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Flags {
    /// File values overlaid with flag values.
    pub fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let base = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        let flags = ExperimentConfig {
            mechanism: self.mechanism.clone(),
            gamma: self.gamma.as_deref().map(parse_number).transpose()?,
            phantoms: self.phantoms.as_deref().map(|s| parse_list(s, ',')).transpose()?,
            objective: self.objective.clone(),
            facilities: self.facilities,
            profile: self.profile.as_deref().map(|s| parse_list(s, ',')).transpose()?,
            n_min: self.n_min,
            n_max: self.n_max,
            trials: self.trials,
            seed: self.seed,
            grid_resolution: self.grid,
            out: self.out.clone(),
            ..Default::default()
        };
        Ok(base.overlay(flags))
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit status. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return e.exit_code();
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Eval(f) => cmd_eval(&f.resolve()?, f.oracle, out),
        Command::RatioSearch(f) => cmd_ratio_search(&f.resolve()?, out),
        Command::SpTest(f) => cmd_sp_test(&f.resolve()?, out),
        Command::Table1(f) => cmd_reproduce_table1(&f.resolve()?, out),
    }
}

fn fmt_value(x: f64) -> String {
    if x.is_infinite() {
        "unbounded".into()
    } else {
        format!("{x:.12}")
    }
}

fn fmt_list(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(", ")
}

fn write_report(out: &mut dyn Write, indent: &str, r: &ObjectiveReport) -> Result<(), CliError> {
    writeln!(out, "{indent}utilities: {}", fmt_list(&r.utilities))?;
    writeln!(out, "{indent}distances: {}", fmt_list(&r.distances))?;
    writeln!(out, "{indent}complemented-gini: {}", fmt_value(r.complemented_gini))?;
    writeln!(out, "{indent}gini-utilities: {}", fmt_value(r.gini_utilities))?;
    writeln!(out, "{indent}gini-distances: {}", fmt_value(r.gini_distances))?;
    writeln!(out, "{indent}nash: {}", fmt_value(r.nash_welfare))?;
    writeln!(out, "{indent}max-distance: {}", fmt_value(r.max_distance))?;
    writeln!(out, "{indent}min-utility: {}", fmt_value(r.min_utility))?;
    Ok(())
}

fn write_optimum(out: &mut dyn Write, objective: Objective, opt: &OracleResult) -> Result<(), CliError> {
    writeln!(
        out,
        "optimum {}: {} at {} ({}, certified gap {:e})",
        objective.name(),
        fmt_value(opt.best_value),
        opt.best_placement,
        opt.method.name(),
        opt.certified_gap
    )?;
    Ok(())
}

/// Prints the outcome, every objective, and with `with_oracle` (or an
/// explicit objective) the optimum and ratio.
pub fn cmd_eval(cfg: &ExperimentConfig, with_oracle: bool, out: &mut dyn Write) -> Result<i32, CliError> {
    let profile = Profile::new(
        cfg.profile
            .clone()
            .ok_or_else(|| CliError::Usage("a profile is required (--profile 0,1/2,1)".into()))?,
    )?;
    let policy = cfg.policy()?;
    let objective = cfg.objective()?;
    writeln!(out, "profile: {profile}")?;

    let Some(mechanism) = cfg.mechanism_spec()? else {
        let facilities = cfg.facilities.unwrap_or(1);
        for o in objective.map_or_else(|| Objective::ALL.to_vec(), |o| vec![o]) {
            write_optimum(out, o, &oracle::optimum(&profile, o, facilities, &policy)?)?;
        }
        return Ok(EXIT_OK);
    };

    let outcome = mechanism.apply_with(&profile, &policy)?;
    writeln!(out, "mechanism: {mechanism}")?;
    match &outcome {
        Outcome::Deterministic(p) => {
            writeln!(out, "facilities: {p}")?;
            write_report(out, "", &ObjectiveReport::new(&profile, p))?;
        }
        Outcome::Randomized(l) => {
            writeln!(out, "lottery: {l}")?;
            for (prob, p) in l.outcomes() {
                writeln!(out, "outcome {p} with probability {prob}:")?;
                write_report(out, "  ", &ObjectiveReport::new(&profile, p))?;
            }
            for o in Objective::ALL {
                writeln!(out, "expected {}: {}", o.name(), fmt_value(outcome.value(&profile, o)))?;
            }
        }
    }

    if with_oracle || objective.is_some() {
        let objectives = objective.map_or_else(|| Objective::ALL.to_vec(), |o| vec![o]);
        for o in objectives {
            let opt = oracle::optimum(&profile, o, outcome.facility_count(), &policy)?;
            write_optimum(out, o, &opt)?;
            if outcome.facility_count() == 2 && with_oracle {
                let grid = oracle::opt_2fac_grid(&profile, o, &policy);
                writeln!(
                    out,
                    "grid cross-check {}: {} at {} (certified gap {:e})",
                    o.name(),
                    fmt_value(grid.best_value),
                    grid.best_placement,
                    grid.certified_gap
                )?;
            }
            let ratio = equifac::analysis::ratio_of(o, outcome.value(&profile, o), opt.best_value);
            if ratio.is_infinite() {
                writeln!(out, "ratio {}: unbounded ratio", o.name())?;
            } else {
                writeln!(out, "ratio {}: {}", o.name(), fmt_value(ratio))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn open_out(path: &Option<PathBuf>) -> Result<Option<BufWriter<File>>, CliError> {
    Ok(match path {
        Some(p) => Some(BufWriter::new(File::create(p)?)),
        None => None,
    })
}

/// Runs the worst-case search and emits the best finding for each `n`.
pub fn cmd_ratio_search(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let mechanism = cfg.require_mechanism()?;
    let objective = cfg.objective()?.unwrap_or(Objective::ComplementedGini);
    let seed = cfg.seed()?;
    let search = SearchConfig {
        random_samples: cfg.trials(),
        restarts: cfg.restarts.unwrap_or(8),
        seed,
        prune: cfg.prune.unwrap_or(true),
        ..SearchConfig::new(mechanism, objective, cfg.n_min.unwrap_or(2), cfg.n_max.unwrap_or(8))
    };
    let result = worst_case_search(&search, &cfg.policy()?)?;
    match open_out(&cfg.out)? {
        Some(mut f) => {
            report::write_findings(&mut f, &result.best_per_n, seed)?;
            f.flush()?;
            writeln!(
                out,
                "best ratio {} at {} ({} evaluations, {} pruned)",
                fmt_value(result.best.ratio),
                result.best.profile,
                result.evaluations(),
                result.pruned()
            )?;
        }
        None => report::write_findings(&mut *out, &result.best_per_n, seed)?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_sp_test(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let mechanism: MechanismSpec = cfg.require_mechanism()?;
    let test = SpTestConfig {
        mechanism: mechanism.clone(),
        n_min: cfg.n_min.unwrap_or(1),
        n_max: cfg.n_max.unwrap_or(6),
        trials: cfg.trials(),
        seed: cfg.seed()?,
    };
    match strategy_proofness_test(&test, &cfg.policy()?)? {
        None => {
            writeln!(out, "PASS {mechanism}: no profitable misreport in {} trials", test.trials)?;
            Ok(EXIT_OK)
        }
        Some(w) => {
            writeln!(out, "FAIL {mechanism}: manipulation found")?;
            writeln!(out, "profile: {}", w.profile)?;
            writeln!(out, "agent: {} (location {})", w.agent_index + 1, w.profile.locations()[w.agent_index])?;
            writeln!(out, "misreport: {}", w.misreport)?;
            writeln!(out, "honest distance: {}", fmt_value(w.honest_distance))?;
            writeln!(out, "manipulated distance: {}", fmt_value(w.manipulated_distance))?;
            Ok(EXIT_MANIPULABLE)
        }
    }
}

/// Prints the markdown table; with an output path also writes CSV there.
pub fn cmd_reproduce_table1(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let policy: NumericPolicy = cfg.policy()?;
    let rows = reproduce_table1(&policy, cfg.seed()?)?;
    write!(out, "{}", table1_markdown(&rows))?;
    if let Some(mut f) = open_out(&cfg.out)? {
        report::write_table1(&mut f, &rows)?;
        f.flush()?;
    }
    Ok(EXIT_OK)
}
