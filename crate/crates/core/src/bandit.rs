//! Softmax K-armed bandit with deterministic per-arm rewards.
//!
//! Policies and tables are immutable values; every update returns a new
//! policy. Two update modes share the same advantage machinery:
//!
//! - [`exact_pg_step`]: `theta_i += alpha * pi_i * A_i` with the per-arm
//!   advantage under the policy itself. The resulting distribution has the
//!   closed form `pi_i exp(alpha pi_i A_i) / Z`.
//! - [`stochastic_pg_step`]: draw `N` arms, compute group-empirical
//!   advantages, and ascend `(1/N) sum_n A_n (onehot(arm_n) - pi)`.

use std::fmt::Write as _;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::advantage::{check_dims, rs_empirical_advantage, rs_exact_advantage, RiskParam};
use crate::error::{LabError, Result};
use crate::format::fmt_real;

/// Rewards within this distance of the maximum count as optimal.
pub const OPTIMAL_TIE_TOL: f64 = 1e-9;

/// Seedable generator used for every stochastic run: ChaCha with 8 rounds,
/// seeded through `SeedableRng::seed_from_u64`.
pub type LabRng = ChaCha8Rng;

pub fn lab_rng(seed: u64) -> LabRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministic reward per arm, each in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RewardTable {
    rewards: Vec<f64>,
}

impl RewardTable {
    pub fn new(rewards: Vec<f64>) -> Result<Self> {
        if rewards.len() < 2 {
            return Err(LabError::out_of_range(
                "arms",
                "a bandit needs at least 2 arms",
            ));
        }
        for &r in &rewards {
            if !r.is_finite() {
                return Err(LabError::NonFinite {
                    what: "reward",
                    value: r,
                });
            }
            if !(0.0..=1.0).contains(&r) {
                return Err(LabError::out_of_range(
                    "reward",
                    format!("{r} not in [0, 1]"),
                ));
            }
        }
        Ok(RewardTable { rewards })
    }

    pub fn rewards(&self) -> &[f64] {
        &self.rewards
    }

    pub fn len(&self) -> usize {
        self.rewards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rewards.is_empty()
    }

    pub fn max_reward(&self) -> f64 {
        self.rewards
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_reward(&self) -> f64 {
        self.rewards.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Indices whose reward is within [`OPTIMAL_TIE_TOL`] of the maximum.
    pub fn optimal_set(&self) -> Vec<usize> {
        let top = self.max_reward();
        (0..self.len())
            .filter(|&i| self.rewards[i] >= top - OPTIMAL_TIE_TOL)
            .collect()
    }

    pub fn is_optimal(&self, arm: usize) -> bool {
        self.rewards[arm] >= self.max_reward() - OPTIMAL_TIE_TOL
    }

    /// Best reward among non-optimal arms, `None` when every arm is optimal.
    pub fn second_best_reward(&self) -> Option<f64> {
        let top = self.max_reward();
        self.rewards
            .iter()
            .copied()
            .filter(|&r| r < top - OPTIMAL_TIE_TOL)
            .reduce(f64::max)
    }

    /// Gap between the best and second-best distinct reward.
    pub fn gap(&self) -> Option<f64> {
        self.second_best_reward().map(|s| self.max_reward() - s)
    }

    /// Plain-text table: a header line then one `arm,reward` row per arm.
    /// Rewards are written in shortest round-trip form.
    pub fn to_text(&self) -> String {
        let mut out = String::from("arm,reward\n");
        for (i, r) in self.rewards.iter().enumerate() {
            let _ = writeln!(out, "{i},{r:?}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let rows = parse_rows(text, "arm,reward", 2)?;
        RewardTable::new(rows.into_iter().map(|r| r[0]).collect())
    }
}

/// Softmax policy over `K` arms.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftmaxPolicy {
    logits: Vec<f64>,
    probs: Vec<f64>,
}

impl SoftmaxPolicy {
    pub fn from_logits(logits: Vec<f64>) -> Result<Self> {
        let probs = softmax_probs(&logits)?;
        Ok(SoftmaxPolicy { logits, probs })
    }

    /// Policy with the given probabilities, realised with logits `ln p`.
    pub fn from_probs(probs: &[f64]) -> Result<Self> {
        if let Some(&bad) = probs.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
            return Err(LabError::out_of_range(
                "probability",
                format!("{bad} must be positive and finite"),
            ));
        }
        SoftmaxPolicy::from_logits(probs.iter().map(|p| p.ln()).collect())
    }

    pub fn uniform(k: usize) -> Self {
        SoftmaxPolicy::from_logits(vec![0.0; k]).expect("uniform policy")
    }

    pub fn logits(&self) -> &[f64] {
        &self.logits
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.logits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.logits.is_empty()
    }

    /// Text snapshot with `arm,logit,prob` rows. Logits are written in
    /// shortest round-trip form so [`SoftmaxPolicy::from_text`] restores the
    /// exact policy; the probability column is informational.
    pub fn to_text(&self) -> String {
        let mut out = String::from("arm,logit,prob\n");
        for (i, (l, p)) in self.logits.iter().zip(&self.probs).enumerate() {
            let _ = writeln!(out, "{i},{l:?},{}", fmt_real(*p));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let rows = parse_rows(text, "arm,logit,prob", 3)?;
        SoftmaxPolicy::from_logits(rows.into_iter().map(|r| r[0]).collect())
    }
}

fn parse_rows(text: &str, header: &str, width: usize) -> Result<Vec<Vec<f64>>> {
    let mut lines = text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some(h) if h.trim() == header => {}
        other => {
            return Err(LabError::Parse(format!(
                "expected header `{header}`, found {:?}",
                other.unwrap_or("")
            )))
        }
    }
    let mut rows = Vec::new();
    for (expected, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != width {
            return Err(LabError::Parse(format!(
                "row `{line}` has {} fields",
                fields.len()
            )));
        }
        let arm: usize = fields[0]
            .parse()
            .map_err(|_| LabError::Parse(format!("bad arm index `{}`", fields[0])))?;
        if arm != expected {
            return Err(LabError::Parse(format!(
                "arm {arm} out of order, expected {expected}"
            )));
        }
        let vals = fields[1..]
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| LabError::Parse(format!("bad number `{f}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(vals);
    }
    Ok(rows)
}

/// Max-shifted softmax.
pub fn softmax_probs(logits: &[f64]) -> Result<Vec<f64>> {
    if logits.len() < 2 {
        return Err(LabError::out_of_range("logits", "need at least 2 arms"));
    }
    if let Some(&bad) = logits.iter().find(|l| !l.is_finite()) {
        return Err(LabError::NonFinite {
            what: "logit",
            value: bad,
        });
    }
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|l| (l - m).exp()).collect();
    let z: f64 = exps.iter().sum();
    Ok(exps.into_iter().map(|e| e / z).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpdateParams {
    pub alpha: f64,
    pub beta: RiskParam,
    /// Batch size for sampled updates.
    pub n_samples: usize,
}

impl UpdateParams {
    pub fn new(alpha: f64, beta: RiskParam, n_samples: usize) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(LabError::out_of_range(
                "alpha",
                format!("{alpha} must be positive"),
            ));
        }
        Ok(UpdateParams {
            alpha,
            beta,
            n_samples,
        })
    }

    /// Parameters for exact updates, where the batch size is unused.
    pub fn exact(alpha: f64, beta: RiskParam) -> Result<Self> {
        UpdateParams::new(alpha, beta, 0)
    }
}

/// Gradient of the (risk-sensitive) objective w.r.t. the logits:
/// `pi_i * A_i` with the per-arm advantage under the policy.
pub fn exact_gradient(
    policy: &SoftmaxPolicy,
    table: &RewardTable,
    beta: RiskParam,
) -> Result<Vec<f64>> {
    let adv = rs_exact_advantage(table, policy, beta)?;
    Ok(policy
        .probs()
        .iter()
        .zip(&adv.values)
        .map(|(p, a)| p * a)
        .collect())
}

pub fn exact_pg_step(
    policy: &SoftmaxPolicy,
    table: &RewardTable,
    params: &UpdateParams,
) -> Result<SoftmaxPolicy> {
    let grad = exact_gradient(policy, table, params.beta)?;
    let logits = policy
        .logits()
        .iter()
        .zip(&grad)
        .map(|(l, g)| l + params.alpha * g)
        .collect();
    SoftmaxPolicy::from_logits(logits)
}

/// Arms drawn for one sampled update, with their looked-up rewards.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub arm_indices: Vec<usize>,
    pub rewards: Vec<f64>,
}

pub fn sample_batch<R: Rng + ?Sized>(
    policy: &SoftmaxPolicy,
    table: &RewardTable,
    n: usize,
    rng: &mut R,
) -> Result<SampleBatch> {
    check_dims(table, policy)?;
    if n == 0 {
        return Err(LabError::out_of_range("n_samples", "must be at least 1"));
    }
    let dist = WeightedIndex::new(policy.probs())
        .map_err(|e| LabError::out_of_range("probability", e.to_string()))?;
    let arm_indices: Vec<usize> = (0..n).map(|_| dist.sample(rng)).collect();
    let rewards = arm_indices.iter().map(|&a| table.rewards()[a]).collect();
    Ok(SampleBatch {
        arm_indices,
        rewards,
    })
}

/// `(1/N) sum_n A_n (onehot(arm_n) - pi)` for a drawn batch.
pub fn batch_gradient(
    policy: &SoftmaxPolicy,
    batch: &SampleBatch,
    beta: RiskParam,
) -> Result<Vec<f64>> {
    let adv = rs_empirical_advantage(&batch.rewards, beta)?;
    let n = batch.arm_indices.len() as f64;
    let adv_sum: f64 = adv.values.iter().sum();
    let mut grad: Vec<f64> = policy.probs().iter().map(|p| -p * adv_sum).collect();
    for (&arm, a) in batch.arm_indices.iter().zip(&adv.values) {
        grad[arm] += a;
    }
    grad.iter_mut().for_each(|g| *g /= n);
    Ok(grad)
}

pub fn stochastic_pg_step<R: Rng + ?Sized>(
    policy: &SoftmaxPolicy,
    table: &RewardTable,
    params: &UpdateParams,
    rng: &mut R,
) -> Result<SoftmaxPolicy> {
    if params.n_samples < 2 {
        return Err(LabError::out_of_range(
            "n_samples",
            "sampled updates need N >= 2",
        ));
    }
    let batch = sample_batch(policy, table, params.n_samples, rng)?;
    let grad = batch_gradient(policy, &batch, params.beta)?;
    let logits = policy
        .logits()
        .iter()
        .zip(&grad)
        .map(|(l, g)| l + params.alpha * g)
        .collect();
    SoftmaxPolicy::from_logits(logits)
}

/// Two-peak reward landscape.
///
/// Each peak is a Gaussian bump `floor + (height - floor) exp(-d^2 / (2 w^2))`
/// around its centre arm (a single spike when `w = 0`), and an arm's reward
/// is the larger of the two bumps. The defaults put a narrow global optimum
/// (1.0) at arm 75 whose neighbours stay below the local peak, and a wide
/// local basin (0.6) around arm 25, so the derived gap is exactly 0.4.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LandscapeSpec {
    pub arms: usize,
    pub global_arm: usize,
    pub local_arm: usize,
    pub global_width: f64,
    pub local_width: f64,
    pub floor: f64,
    pub global_reward: f64,
    pub local_reward: f64,
}

impl Default for LandscapeSpec {
    fn default() -> Self {
        LandscapeSpec {
            arms: 100,
            global_arm: 75,
            local_arm: 25,
            global_width: 0.8,
            local_width: 10.0,
            floor: 0.2,
            global_reward: 1.0,
            local_reward: 0.6,
        }
    }
}

fn bump(center: usize, width: f64, floor: f64, height: f64, arm: usize) -> f64 {
    if arm == center {
        return height;
    }
    if width <= 0.0 {
        return floor;
    }
    let d = arm as f64 - center as f64;
    floor + (height - floor) * (-d * d / (2.0 * width * width)).exp()
}

pub fn make_two_peak_landscape(spec: &LandscapeSpec) -> Result<RewardTable> {
    if spec.arms < 10 {
        return Err(LabError::out_of_range(
            "arms",
            "landscape needs at least 10 arms",
        ));
    }
    if spec.global_arm >= spec.arms || spec.local_arm >= spec.arms {
        return Err(LabError::out_of_range(
            "peak arm",
            "peak index beyond arm count",
        ));
    }
    if spec.global_arm == spec.local_arm {
        return Err(LabError::out_of_range(
            "peak arm",
            "peaks must sit on distinct arms",
        ));
    }
    for (what, w) in [
        ("global_width", spec.global_width),
        ("local_width", spec.local_width),
    ] {
        if !(w.is_finite() && w >= 0.0) {
            return Err(LabError::out_of_range(what, format!("{w} must be >= 0")));
        }
    }
    if !(0.0 <= spec.floor
        && spec.floor <= spec.local_reward
        && spec.local_reward < spec.global_reward
        && spec.global_reward <= 1.0)
    {
        return Err(LabError::out_of_range(
            "landscape heights",
            "need 0 <= floor <= local_reward < global_reward <= 1",
        ));
    }
    let rewards: Vec<f64> = (0..spec.arms)
        .map(|i| {
            let g = bump(
                spec.global_arm,
                spec.global_width,
                spec.floor,
                spec.global_reward,
                i,
            );
            let l = bump(
                spec.local_arm,
                spec.local_width,
                spec.floor,
                spec.local_reward,
                i,
            );
            g.max(l)
        })
        .collect();
    // Only the global arm may exceed the local peak; otherwise the runner-up
    // reward (and the gap) would no longer be set by the local peak.
    if let Some((i, r)) = rewards
        .iter()
        .enumerate()
        .find(|&(i, &r)| i != spec.global_arm && r > spec.local_reward + 1e-9)
    {
        return Err(LabError::out_of_range(
            "landscape",
            format!(
                "arm {i} has reward {r}, above the local peak {}",
                spec.local_reward
            ),
        ));
    }
    RewardTable::new(rewards)
}

/// Peaked initial policy: logit `sharpness` at the peak arm, decaying as a
/// Gaussian of the given width over neighbours (none when `width = 0`),
/// zero elsewhere.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitSpec {
    pub peak_arm: usize,
    pub sharpness: f64,
    pub width: f64,
}

impl Default for InitSpec {
    fn default() -> Self {
        InitSpec {
            peak_arm: 25,
            sharpness: 2.0,
            width: 0.0,
        }
    }
}

pub fn init_peaked_policy(k_arms: usize, spec: &InitSpec) -> Result<SoftmaxPolicy> {
    if spec.peak_arm >= k_arms {
        return Err(LabError::out_of_range(
            "peak_arm",
            format!("{} >= {k_arms}", spec.peak_arm),
        ));
    }
    if !(spec.sharpness.is_finite() && spec.width.is_finite() && spec.width >= 0.0) {
        return Err(LabError::out_of_range(
            "init",
            "sharpness and width must be finite, width >= 0",
        ));
    }
    let logits = (0..k_arms)
        .map(|i| bump(spec.peak_arm, spec.width, 0.0, spec.sharpness, i))
        .collect();
    SoftmaxPolicy::from_logits(logits)
}
