//! Seeded bandit runs, beta sweeps and advantage-landscape tables.
//!
//! A run is fully determined by `(config, beta, seed)`: the generator is
//! `ChaCha8Rng::seed_from_u64(seed)` and nothing else is random. Sweep
//! cells run in parallel but write only their own files; the summary is
//! written once every cell has finished.
//!
//! CSV dialect: comma separated, one header row, reals through
//! [`fmt_real`](crate::format::fmt_real). Trace files start with `#` comment
//! lines carrying the run header.

mod config;
mod landscape;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::advantage::RiskParam;
use crate::bandit::{
    exact_pg_step, init_peaked_policy, lab_rng, make_two_peak_landscape, stochastic_pg_step,
    RewardTable, SoftmaxPolicy, UpdateParams,
};
use crate::error::{LabError, Result};
use crate::format::fmt_real;
use crate::metrics::{expected_reward, optimal_mass, policy_entropy, rs_objective};

pub use config::{
    ExperimentConfig, UpdateMode, UpdateSpec, DEFAULT_EXACT_STEPS, DEFAULT_SOLVED_MASS,
    DEFAULT_STOCHASTIC_STEPS,
};
pub use landscape::{
    advantage_landscape, BinaryRow, ContinuousRow, LandscapeTable, CONTINUOUS_GRID_POINTS,
    DEFAULT_GROUP_SIZE, DEFAULT_LANDSCAPE_BETAS, DEFAULT_LANDSCAPE_KS,
};

pub const SUMMARY_FILE: &str = "summary.csv";
pub const TRACE_HEADER: &str = "step,expected_reward,rs_objective,optimal_mass,entropy";
pub const SUMMARY_HEADER: &str =
    "beta,seed,final_expected_reward,final_optimal_mass,steps_to_solved";
/// `steps_to_solved` value for runs that never reach the solved mass.
pub const UNSOLVED: i64 = -1;

#[derive(Debug, Clone, PartialEq)]
pub struct TraceHeader {
    pub config_digest: String,
    pub seed: u64,
    pub beta: f64,
    pub mode: UpdateMode,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub step: u64,
    pub expected_reward: f64,
    pub rs_objective: f64,
    pub optimal_mass: f64,
    pub entropy: f64,
}

impl TraceRow {
    pub fn measure(
        table: &RewardTable,
        policy: &SoftmaxPolicy,
        beta: RiskParam,
        step: u64,
    ) -> Result<Self> {
        Ok(TraceRow {
            step,
            expected_reward: expected_reward(table, policy)?,
            rs_objective: rs_objective(table, policy, beta)?,
            optimal_mass: optimal_mass(table, policy)?,
            entropy: policy_entropy(policy),
        })
    }
}

#[derive(Debug, Clone)]
pub struct RunTrace {
    pub header: TraceHeader,
    pub rows: Vec<TraceRow>,
    pub final_policy: SoftmaxPolicy,
    /// First step at which the optimal mass reached the solved threshold.
    pub steps_to_solved: Option<u64>,
}

impl RunTrace {
    pub fn final_row(&self) -> &TraceRow {
        self.rows
            .last()
            .expect("a trace always has the initial row")
    }

    pub fn to_csv(&self) -> String {
        let h = &self.header;
        let mut out = format!(
            "# config_digest={}\n# seed={}\n# beta={}\n# mode={}\n{TRACE_HEADER}\n",
            h.config_digest,
            h.seed,
            fmt_real(h.beta),
            h.mode.name()
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.step,
                fmt_real(r.expected_reward),
                fmt_real(r.rs_objective),
                fmt_real(r.optimal_mass),
                fmt_real(r.entropy)
            );
        }
        out
    }

    /// Number of consecutive rows whose `rs_objective` drops by more than
    /// `slack`.
    pub fn objective_decreases(&self, slack: f64) -> usize {
        self.rows
            .windows(2)
            .filter(|w| w[1].rs_objective < w[0].rs_objective - slack)
            .count()
    }
}

/// The reward table and initial policy a config describes.
pub fn build_problem(config: &ExperimentConfig) -> Result<(RewardTable, SoftmaxPolicy)> {
    let table = make_two_peak_landscape(&config.landscape)?;
    let policy = init_peaked_policy(table.len(), &config.init)?;
    Ok((table, policy))
}

/// One run at `beta` from the config's initial policy.
///
/// Records step 0, every `record_every` steps, and the last step.
pub fn run_single(config: &ExperimentConfig, beta: f64, seed: u64) -> Result<RunTrace> {
    config.validate()?;
    let (table, mut policy) = build_problem(config)?;
    let risk = RiskParam::new(beta)?;
    let params = UpdateParams::new(config.update.alpha, risk, config.update.n_samples)?;
    let mut rng = lab_rng(seed);
    let steps = config.steps();

    let first = TraceRow::measure(&table, &policy, risk, 0)?;
    let mut steps_to_solved = (first.optimal_mass >= config.solved_mass).then_some(0);
    let mut rows = vec![first];
    for step in 1..=steps {
        policy = match config.update.mode {
            UpdateMode::Exact => exact_pg_step(&policy, &table, &params)?,
            UpdateMode::Stochastic => stochastic_pg_step(&policy, &table, &params, &mut rng)?,
        };
        let record = step % config.record_every == 0 || step == steps;
        if record {
            let row = TraceRow::measure(&table, &policy, risk, step)?;
            if steps_to_solved.is_none() && row.optimal_mass >= config.solved_mass {
                steps_to_solved = Some(step);
            }
            rows.push(row);
        } else if steps_to_solved.is_none() && optimal_mass(&table, &policy)? >= config.solved_mass
        {
            steps_to_solved = Some(step);
        }
    }
    Ok(RunTrace {
        header: TraceHeader {
            config_digest: config.digest(),
            seed,
            beta,
            mode: config.update.mode,
        },
        rows,
        final_policy: policy,
        steps_to_solved,
    })
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    /// Cells in `beta_grid x seeds` order, beta-major.
    pub traces: Vec<RunTrace>,
    pub files: Vec<PathBuf>,
}

impl SweepResult {
    pub fn summary_csv(&self) -> String {
        let mut out = format!("{SUMMARY_HEADER}\n");
        for t in &self.traces {
            let last = t.final_row();
            let solved = t.steps_to_solved.map_or(UNSOLVED, |s| s as i64);
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                fmt_real(t.header.beta),
                t.header.seed,
                fmt_real(last.expected_reward),
                fmt_real(last.optimal_mass),
                solved
            );
        }
        out
    }
}

pub fn trace_file_name(beta: f64, seed: u64) -> String {
    format!("trace_beta{}_seed{seed}.csv", fmt_real(beta))
}

pub fn policy_file_name(beta: f64, seed: u64) -> String {
    format!("policy_beta{}_seed{seed}.csv", fmt_real(beta))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| LabError::io(path, e))
}

/// Runs every `(beta, seed)` cell without touching the filesystem.
pub fn run_cells(config: &ExperimentConfig) -> Result<Vec<RunTrace>> {
    config.validate()?;
    let cells: Vec<(f64, u64)> = config
        .beta_grid
        .iter()
        .flat_map(|&b| config.seeds.iter().map(move |&s| (b, s)))
        .collect();
    cells
        .par_iter()
        .map(|&(b, s)| run_single(config, b, s))
        .collect()
}

/// Runs the sweep and writes one trace per cell, optional policy snapshots,
/// `summary.csv` and the resolved `config.toml` under `output_dir`.
/// The copied config records `output_dir = "."`.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepResult> {
    config.validate()?;
    let dir = &config.output_dir;
    fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    let cells: Vec<(f64, u64)> = config
        .beta_grid
        .iter()
        .flat_map(|&b| config.seeds.iter().map(move |&s| (b, s)))
        .collect();
    let outcomes: Vec<(RunTrace, Vec<PathBuf>)> = cells
        .par_iter()
        .map(|&(b, s)| {
            let trace = run_single(config, b, s)?;
            let mut files = vec![dir.join(trace_file_name(b, s))];
            write_file(&files[0], &trace.to_csv())?;
            if config.snapshot_policies {
                let p = dir.join(policy_file_name(b, s));
                write_file(&p, &trace.final_policy.to_text())?;
                files.push(p);
            }
            Ok((trace, files))
        })
        .collect::<Result<_>>()?;

    let mut result = SweepResult {
        traces: Vec::with_capacity(outcomes.len()),
        files: Vec::new(),
    };
    for (t, f) in outcomes {
        result.traces.push(t);
        result.files.extend(f);
    }
    let summary = dir.join(SUMMARY_FILE);
    write_file(&summary, &result.summary_csv())?;
    let cfg = dir.join("config.toml");
    // Relative output dir keeps the artifacts independent of where they live.
    let mut resolved = config.clone();
    resolved.steps = Some(config.steps());
    resolved.output_dir = PathBuf::from(".");
    write_file(&cfg, &resolved.to_toml())?;
    result.files.push(summary);
    result.files.push(cfg);
    Ok(result)
}
