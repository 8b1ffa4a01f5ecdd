//! `risklab` command line.
//!
//! Exit status: 0 on success, 2 for bad flags or invalid inputs, 1 for I/O
//! failures. Errors print a single `risklab: ...` line on stderr.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::advantage::RiskParam;
use crate::bandit::{RewardTable, SoftmaxPolicy};
use crate::error::{LabError, Result};
use crate::experiments::{
    advantage_landscape, run_single, run_sweep, ExperimentConfig, UpdateMode, DEFAULT_GROUP_SIZE,
    DEFAULT_LANDSCAPE_BETAS, DEFAULT_LANDSCAPE_KS,
};
use crate::format::fmt_real;
use crate::lemma::{
    beta_threshold, construct_l1_instance, verify_l1, verify_l2, verify_l3, LemmaInstance,
    DEFAULT_ALPHA_GRID, DEFAULT_L1_REWARDS, DEFAULT_L2_THRESHOLD_FACTOR, DEFAULT_L3_ALPHA,
    DEFAULT_L3_BETA_GRID, DEFAULT_SECOND_MASS,
};
use crate::metrics::{pass_at_k, PassAtKQuery};

pub const OUT_DIR_ENV: &str = "RISKLAB_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "risklab",
    version,
    about = "Risk-sensitive policy gradients on softmax bandits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one (beta, seed) cell and print or write its trace CSV.
    BanditRun(BanditRunArgs),
    /// Run beta_grid x seeds and write traces plus summary.csv.
    BanditSweep(BanditSweepArgs),
    /// Print or write the binary and continuous advantage tables.
    AdvantageTable(AdvantageTableArgs),
    /// Check the lemma witnesses; one record per line.
    LemmaCheck(LemmaCheckArgs),
    /// Unbiased pass@k from (n, c, k).
    Passk(PasskArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Stochastic,
}

impl From<ModeArg> for UpdateMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => UpdateMode::Exact,
            ModeArg::Stochastic => UpdateMode::Stochastic,
        }
    }
}

/// Config file plus per-field overrides.
#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// TOML config; flags below override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub n_samples: Option<usize>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Updates per run (default 5000 exact, 20000 stochastic).
    #[arg(long)]
    pub steps: Option<u64>,
    #[arg(long)]
    pub record_every: Option<u64>,
    /// Optimal mass counted as solved.
    #[arg(long)]
    pub solved_mass: Option<f64>,
    #[arg(long)]
    pub arms: Option<usize>,
    #[arg(long)]
    pub global_arm: Option<usize>,
    #[arg(long)]
    pub local_arm: Option<usize>,
    #[arg(long)]
    pub global_width: Option<f64>,
    #[arg(long)]
    pub local_width: Option<f64>,
    #[arg(long)]
    pub floor: Option<f64>,
    #[arg(long)]
    pub global_reward: Option<f64>,
    #[arg(long)]
    pub local_reward: Option<f64>,
    #[arg(long)]
    pub init_peak_arm: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub init_sharpness: Option<f64>,
    #[arg(long)]
    pub init_width: Option<f64>,
}

impl ConfigArgs {
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        macro_rules! set {
            ($($flag:ident => $($field:ident).+),* $(,)?) => {
                $(if let Some(v) = self.$flag { c.$($field).+ = v.into(); })*
            };
        }
        set!(
            alpha => update.alpha,
            n_samples => update.n_samples,
            mode => update.mode,
            record_every => record_every,
            solved_mass => solved_mass,
            arms => landscape.arms,
            global_arm => landscape.global_arm,
            local_arm => landscape.local_arm,
            global_width => landscape.global_width,
            local_width => landscape.local_width,
            floor => landscape.floor,
            global_reward => landscape.global_reward,
            local_reward => landscape.local_reward,
            init_peak_arm => init.peak_arm,
            init_sharpness => init.sharpness,
            init_width => init.width,
        );
        if self.steps.is_some() {
            c.steps = self.steps;
        }
        Ok(c)
    }
}

#[derive(Debug, Args)]
pub struct BanditRunArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the trace here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the final policy snapshot to this file.
    #[arg(long)]
    pub policy_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BanditSweepArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Comma-separated beta grid.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub betas: Option<Vec<f64>>,
    /// Comma-separated seeds.
    #[arg(long, value_delimiter = ',', conflicts_with = "n_seeds")]
    pub seeds: Option<Vec<u64>>,
    /// Seeds 0..n.
    #[arg(long)]
    pub n_seeds: Option<u64>,
    #[arg(long, env = OUT_DIR_ENV)]
    pub out_dir: Option<PathBuf>,
    /// Write each run's final policy next to its trace.
    #[arg(long)]
    pub snapshot_policies: bool,
}

#[derive(Debug, Args)]
pub struct AdvantageTableArgs {
    #[arg(long, default_value_t = DEFAULT_GROUP_SIZE)]
    pub n_group: usize,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub betas: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub ks: Option<Vec<usize>>,
    /// Write advantage_binary.csv and advantage_continuous.csv here instead
    /// of printing both.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LemmaArg {
    L1,
    L2,
    L3,
    All,
}

#[derive(Debug, Args)]
pub struct LemmaCheckArgs {
    #[arg(long, value_enum, default_value_t = LemmaArg::All)]
    pub lemma: LemmaArg,
    /// Comma-separated rewards in [0, 1].
    #[arg(long, value_delimiter = ',')]
    pub rewards: Option<Vec<f64>>,
    /// Explicit policy probabilities; otherwise the L1 construction is used.
    #[arg(long, value_delimiter = ',')]
    pub policy: Option<Vec<f64>>,
    /// Mass on the second-best arm in the L1 construction.
    #[arg(long, default_value_t = DEFAULT_SECOND_MASS)]
    pub second_mass: f64,
    /// Step sizes for L1 and L2.
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    /// L2 beta; defaults to the threshold times --threshold-factor.
    #[arg(
        long,
        allow_negative_numbers = true,
        conflicts_with = "threshold_factor"
    )]
    pub beta: Option<f64>,
    #[arg(long)]
    pub threshold_factor: Option<f64>,
    /// Ascending L3 beta grid.
    #[arg(long, value_delimiter = ',')]
    pub betas: Option<Vec<f64>>,
    /// L3 step size.
    #[arg(long, default_value_t = DEFAULT_L3_ALPHA)]
    pub l3_alpha: f64,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["n", "file"]))]
pub struct PasskArgs {
    #[arg(long, requires_all = ["c", "k"])]
    pub n: Option<u64>,
    #[arg(long, requires = "n")]
    pub c: Option<u64>,
    #[arg(long, requires = "n")]
    pub k: Option<u64>,
    /// One `n,c,k` triple per line; `#` lines and blanks are skipped.
    #[arg(long, conflicts_with_all = ["n", "c", "k"])]
    pub file: Option<PathBuf>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> LabError + '_ {
    move |e| LabError::io(path, e)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(io_err(Path::new("<stdout>")))
}

pub fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::BanditRun(a) => bandit_run(a, out),
        Command::BanditSweep(a) => bandit_sweep(a, out),
        Command::AdvantageTable(a) => advantage_table(a, out),
        Command::LemmaCheck(a) => lemma_check(a, out),
        Command::Passk(a) => passk(a, out),
    }
}

/// Exit status for an error: 1 for I/O, 2 otherwise.
pub fn exit_code(err: &LabError) -> i32 {
    match err {
        LabError::Io { .. } => 1,
        _ => 2,
    }
}

fn bandit_run(a: BanditRunArgs, out: &mut dyn Write) -> Result<()> {
    let config = a.config.resolve()?;
    let trace = run_single(&config, a.beta, a.seed)?;
    match &a.out {
        Some(p) => std::fs::write(p, trace.to_csv()).map_err(io_err(p))?,
        None => emit(out, &trace.to_csv())?,
    }
    if let Some(p) = &a.policy_out {
        std::fs::write(p, trace.final_policy.to_text()).map_err(io_err(p))?;
    }
    Ok(())
}

fn bandit_sweep(a: BanditSweepArgs, out: &mut dyn Write) -> Result<()> {
    let mut config = a.config.resolve()?;
    if let Some(b) = a.betas {
        config.beta_grid = b;
    }
    if let Some(s) = a.seeds {
        config.seeds = s;
    }
    if let Some(n) = a.n_seeds {
        config.seeds = (0..n).collect();
    }
    if let Some(d) = a.out_dir {
        config.output_dir = d;
    }
    config.snapshot_policies |= a.snapshot_policies;
    let result = run_sweep(&config)?;
    emit(out, &result.summary_csv())
}

fn advantage_table(a: AdvantageTableArgs, out: &mut dyn Write) -> Result<()> {
    let betas = a.betas.unwrap_or_else(|| DEFAULT_LANDSCAPE_BETAS.to_vec());
    let ks = a.ks.unwrap_or_else(|| DEFAULT_LANDSCAPE_KS.to_vec());
    let table = advantage_landscape(a.n_group, &betas, &ks)?;
    match &a.out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(io_err(dir))?;
            for (name, text) in [
                ("advantage_binary.csv", table.binary_csv()),
                ("advantage_continuous.csv", table.continuous_csv()),
            ] {
                let p = dir.join(name);
                std::fs::write(&p, text).map_err(io_err(&p))?;
            }
            Ok(())
        }
        None => emit(
            out,
            &format!("{}\n{}", table.binary_csv(), table.continuous_csv()),
        ),
    }
}

fn lemma_instance(a: &LemmaCheckArgs) -> Result<LemmaInstance> {
    let rewards = a
        .rewards
        .clone()
        .unwrap_or_else(|| DEFAULT_L1_REWARDS.to_vec());
    let table = RewardTable::new(rewards)?;
    match &a.policy {
        Some(p) => LemmaInstance::new(table, SoftmaxPolicy::from_probs(p)?),
        None => construct_l1_instance(&table, a.second_mass),
    }
}

fn lemma_check(a: LemmaCheckArgs, out: &mut dyn Write) -> Result<()> {
    let instance = lemma_instance(&a)?;
    let alphas = a
        .alphas
        .clone()
        .unwrap_or_else(|| DEFAULT_ALPHA_GRID.to_vec());
    let mut reports = Vec::new();
    if matches!(a.lemma, LemmaArg::L1 | LemmaArg::All) {
        reports.push(verify_l1(&instance, &alphas)?);
    }
    if matches!(a.lemma, LemmaArg::L2 | LemmaArg::All) {
        let beta = match a.beta {
            Some(b) => b,
            None => {
                beta_threshold(&instance)?
                    * a.threshold_factor.unwrap_or(DEFAULT_L2_THRESHOLD_FACTOR)
            }
        };
        reports.push(verify_l2(&instance, RiskParam::new(beta)?, &alphas)?);
    }
    if matches!(a.lemma, LemmaArg::L3 | LemmaArg::All) {
        let betas = a
            .betas
            .clone()
            .unwrap_or_else(|| DEFAULT_L3_BETA_GRID.to_vec());
        reports.push(verify_l3(&instance, &betas, a.l3_alpha)?);
    }
    let text: String = reports.iter().map(|r| r.record() + "\n").collect();
    emit(out, &text)
}

fn parse_triple(line: &str) -> Result<PassAtKQuery> {
    let parts: Vec<&str> = line.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(LabError::Parse(format!("expected `n,c,k`, found `{line}`")));
    }
    let mut v = [0u64; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p
            .parse()
            .map_err(|_| LabError::Parse(format!("bad integer `{p}` in `{line}`")))?;
    }
    PassAtKQuery::new(v[0], v[1], v[2])
}

fn passk(a: PasskArgs, out: &mut dyn Write) -> Result<()> {
    if let Some(path) = &a.file {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        let mut body = String::from("n,c,k,pass_at_k\n");
        for line in text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
        {
            let q = parse_triple(line)?;
            body.push_str(&format!(
                "{},{},{},{}\n",
                q.n,
                q.c,
                q.k,
                fmt_real(pass_at_k(q))
            ));
        }
        return emit(out, &body);
    }
    // clap enforces that n, c and k arrive together
    let q = PassAtKQuery::new(a.n.unwrap_or(0), a.c.unwrap_or(0), a.k.unwrap_or(0))?;
    emit(out, &format!("{}\n", fmt_real(pass_at_k(q))))
}
