//! Advantage estimators.
//!
//! All estimators produce one advantage per whole response (or per arm);
//! there is no token-level credit assignment, importance ratio, or clipping.
//!
//! The risk-sensitive estimators weight a reward `r` by the exponential
//! utility `exp(beta * r)` relative to its group (or policy) average:
//!
//! ```text
//! A_beta(r_i) = (1/beta) * (exp(beta * r_i) / mean_j exp(beta * r_j) - 1)
//! ```
//!
//! which tends to `r_i - mean(r)` as `beta -> 0`. Ratios are always formed
//! in log space, as `expm1(beta * r_i - log_mean_exp(beta * r)) / beta`, so
//! `beta = 64` with `r = 1` does not overflow and tiny `beta` does not lose
//! the signal to cancellation.

use crate::bandit::{RewardTable, SoftmaxPolicy};
use crate::error::{LabError, Result};
use crate::numeric::{binomial, binomial_ratio, log_mean_exp, weighted_log_mean_exp};

/// Below this magnitude `beta` is treated as exactly zero and the
/// risk-neutral limit is returned.
pub const BETA_NEUTRAL_CUTOFF: f64 = 1e-8;

/// Largest `|beta|` the laboratory is tuned for. Larger values are still
/// evaluated (all kernels work in log space) but fall outside the ranges
/// the tests sweep.
pub const MAX_SUPPORTED_BETA: f64 = 64.0;

/// Risk-sensitivity level. Positive values are risk-seeking, negative
/// values risk-averse, zero is the ordinary expected-reward objective.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RiskParam(f64);

impl RiskParam {
    pub const NEUTRAL: RiskParam = RiskParam(0.0);

    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(LabError::NonFinite {
                what: "beta",
                value: beta,
            });
        }
        Ok(RiskParam(beta))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// True when `|beta|` is below [`BETA_NEUTRAL_CUTOFF`].
    pub fn is_neutral(self) -> bool {
        self.0.abs() < BETA_NEUTRAL_CUTOFF
    }

    pub fn in_supported_range(self) -> bool {
        self.0.abs() <= MAX_SUPPORTED_BETA
    }
}

impl Default for RiskParam {
    fn default() -> Self {
        RiskParam::NEUTRAL
    }
}

/// Which estimator produced an [`AdvantageVector`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimator {
    Grpo,
    RsEmpirical,
    RsExact,
    Mahdavi,
    PasskTraining,
    TangLoo,
    WalderSmoothed,
}

impl Estimator {
    pub fn name(self) -> &'static str {
        match self {
            Estimator::Grpo => "grpo",
            Estimator::RsEmpirical => "rs_empirical",
            Estimator::RsExact => "rs_exact",
            Estimator::Mahdavi => "mahdavi",
            Estimator::PasskTraining => "passk_training",
            Estimator::TangLoo => "tang_loo",
            Estimator::WalderSmoothed => "walder_smoothed",
        }
    }
}

impl std::fmt::Display for Estimator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-sample (or per-arm) advantages together with the estimator that
/// produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct AdvantageVector {
    pub values: Vec<f64>,
    pub estimator: Estimator,
    /// Subset size for the pass@k-style estimators.
    pub k: Option<usize>,
}

impl AdvantageVector {
    fn new(values: Vec<f64>, estimator: Estimator) -> Self {
        AdvantageVector {
            values,
            estimator,
            k: None,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Sum of absolute advantages: the total optimisation weight a group
    /// receives.
    pub fn cumulative(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }
}

/// Summary of a binary-reward group of responses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryGroupStats {
    pub n_total: usize,
    pub n_correct: usize,
    pub p_bar: f64,
    pub sigma: f64,
}

impl BinaryGroupStats {
    pub fn new(n_total: usize, n_correct: usize) -> Result<Self> {
        if n_total == 0 {
            return Err(LabError::Empty);
        }
        if n_correct > n_total {
            return Err(LabError::out_of_range(
                "n_correct",
                format!("{n_correct} > n_total = {n_total}"),
            ));
        }
        let p_bar = n_correct as f64 / n_total as f64;
        // exact zero at the degenerate ends
        let sigma = if n_correct == 0 || n_correct == n_total {
            0.0
        } else {
            (p_bar * (1.0 - p_bar)).sqrt()
        };
        Ok(BinaryGroupStats {
            n_total,
            n_correct,
            p_bar,
            sigma,
        })
    }

    pub fn n_incorrect(&self) -> usize {
        self.n_total - self.n_correct
    }
}

fn check_rewards(rewards: &[f64]) -> Result<()> {
    if rewards.is_empty() {
        return Err(LabError::Empty);
    }
    if let Some(&bad) = rewards.iter().find(|r| !r.is_finite()) {
        return Err(LabError::NonFinite {
            what: "reward",
            value: bad,
        });
    }
    Ok(())
}

/// Mean-baseline advantage `r_i - mean(r)`, without standard-deviation
/// normalisation.
pub fn grpo_advantage(rewards: &[f64]) -> Result<AdvantageVector> {
    check_rewards(rewards)?;
    // Centre on the maximum first: identical rewards give exact zeros.
    let top = rewards.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let offset = rewards.iter().map(|r| r - top).sum::<f64>() / rewards.len() as f64;
    Ok(AdvantageVector::new(
        rewards.iter().map(|r| (r - top) - offset).collect(),
        Estimator::Grpo,
    ))
}

/// Group-empirical risk-sensitive advantage.
///
/// Rewards are expected in `[0, 1]`, but any finite rewards are accepted;
/// the estimator is invariant to shifting all rewards by a constant.
pub fn rs_empirical_advantage(rewards: &[f64], beta: RiskParam) -> Result<AdvantageVector> {
    check_rewards(rewards)?;
    if beta.is_neutral() {
        let mut adv = grpo_advantage(rewards)?;
        adv.estimator = Estimator::RsEmpirical;
        return Ok(adv);
    }
    let b = beta.value();
    // Rewards are centred on their maximum first so the exponent arguments
    // are independent of any common shift.
    let top = rewards.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scaled: Vec<f64> = rewards.iter().map(|r| b * (r - top)).collect();
    let lme = log_mean_exp(&scaled).ok_or(LabError::Empty)?;
    Ok(AdvantageVector::new(
        scaled.iter().map(|x| (x - lme).exp_m1() / b).collect(),
        Estimator::RsEmpirical,
    ))
}

/// Per-arm risk-sensitive advantage under the policy's own distribution.
///
/// `values[i] = (1/beta) * (exp(beta r_i) / E_pi[exp(beta r)] - 1)`; the
/// neutral limit is `r_i - E_pi[r]`.
pub fn rs_exact_advantage(
    table: &RewardTable,
    policy: &SoftmaxPolicy,
    beta: RiskParam,
) -> Result<AdvantageVector> {
    check_dims(table, policy)?;
    let probs = policy.probs();
    let rewards = table.rewards();
    let values = if beta.is_neutral() {
        let top = table.max_reward();
        let offset: f64 = probs.iter().zip(rewards).map(|(p, r)| p * (r - top)).sum();
        rewards.iter().map(|r| (r - top) - offset).collect()
    } else {
        let b = beta.value();
        let top = table.max_reward();
        let scaled: Vec<f64> = rewards.iter().map(|r| b * (r - top)).collect();
        let lme = weighted_log_mean_exp(probs, &scaled).ok_or(LabError::Empty)?;
        scaled.iter().map(|x| (x - lme).exp_m1() / b).collect()
    };
    Ok(AdvantageVector::new(values, Estimator::RsExact))
}

pub(crate) fn check_dims(table: &RewardTable, policy: &SoftmaxPolicy) -> Result<()> {
    if table.len() != policy.len() {
        return Err(LabError::DimensionMismatch {
            expected: table.len(),
            found: policy.len(),
        });
    }
    Ok(())
}

/// Risk-sensitive advantages of a correct and an incorrect response in a
/// binary-reward group with accuracy `p_bar`.
///
/// With `D = p_bar e^beta + (1 - p_bar)`:
/// `A_pos = (e^beta / D - 1) / beta`, `A_neg = (1 / D - 1) / beta`.
pub fn binary_rs_advantages(stats: &BinaryGroupStats, beta: RiskParam) -> (f64, f64) {
    let p = stats.p_bar;
    if beta.is_neutral() {
        return (1.0 - p, -p);
    }
    let b = beta.value();
    // ln D, arranged so neither branch overflows or cancels.
    // The first form is exact at p = 1, the second at p = 0.
    let ln_d = if b > 0.0 && (p > 0.5 || b > 700.0) {
        b + ((1.0 - p) * (-b).exp_m1()).ln_1p()
    } else {
        (p * b.exp_m1()).ln_1p()
    };
    ((b - ln_d).exp_m1() / b, (-ln_d).exp_m1() / b)
}

/// Reweighted pass@k advantages for binary rewards:
/// `A_pos = k (1 - p)^k`, `A_neg = -k (1 - p)^(k-1) p`.
pub fn mahdavi_advantages(p_bar: f64, k: usize) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&p_bar) {
        return Err(LabError::out_of_range(
            "p_bar",
            format!("{p_bar} not in [0, 1]"),
        ));
    }
    if k == 0 {
        return Err(LabError::out_of_range("k", "k must be at least 1"));
    }
    let kf = k as f64;
    let q = 1.0 - p_bar;
    let pos = kf * q.powi(k as i32);
    let neg = -kf * q.powi(k as i32 - 1) * p_bar;
    // -0.0 at p_bar = 0 reads oddly in tables
    Ok((pos, if neg == 0.0 { 0.0 } else { neg }))
}

/// Pass@k-training advantages for binary rewards.
///
/// ```text
/// A_pos = (1 - p) / sigma
/// A_neg = (1 - p - C(N_neg - 1, k - 1) / C(N - 1, k - 1)) / sigma
/// ```
///
/// Groups with `sigma = 0` (all correct or all incorrect) return `(0, 0)`.
///
/// The negative advantage is implemented as written. For many `(N, c, k)`
/// it evaluates to a *positive* number (e.g. `N = 16, c = 8, k = 4` gives
/// about `0.846`), which disagrees in sign with plots of this estimator
/// that show incorrect responses being penalised; callers comparing signs
/// should keep that in mind.
pub fn passk_training_advantages(n_total: usize, n_correct: usize, k: usize) -> Result<(f64, f64)> {
    let stats = BinaryGroupStats::new(n_total, n_correct)?;
    if k == 0 || k > n_total {
        return Err(LabError::out_of_range(
            "k",
            format!("k = {k} must satisfy 1 <= k <= n_total = {n_total}"),
        ));
    }
    if stats.sigma == 0.0 {
        return Ok((0.0, 0.0));
    }
    let n_neg = stats.n_incorrect() as u64;
    // n_neg >= 1 here because sigma > 0
    let ratio = binomial_ratio(n_neg - 1, n_total as u64 - 1, k as u64 - 1);
    let q = 1.0 - stats.p_bar;
    Ok((q / stats.sigma, (q - ratio) / stats.sigma))
}

/// Leave-one-out best-of-N advantage: `max(r) - max(r without i)`.
pub fn tang_loo_advantage(rewards: &[f64]) -> Result<AdvantageVector> {
    check_rewards(rewards)?;
    if rewards.len() < 2 {
        return Err(LabError::out_of_range("rewards", "need at least 2 samples"));
    }
    let (mut best, mut best_idx, mut second) = (f64::NEG_INFINITY, 0, f64::NEG_INFINITY);
    for (i, &r) in rewards.iter().enumerate() {
        if r > best {
            second = best;
            best = r;
            best_idx = i;
        } else if r > second {
            second = r;
        }
    }
    let values = (0..rewards.len())
        .map(|i| if i == best_idx { best - second } else { 0.0 })
        .collect();
    Ok(AdvantageVector::new(values, Estimator::TangLoo))
}

/// Smoothed-maximum leave-one-out advantage over size-`k` subsets:
///
/// ```text
/// A_i = 1 / C(N-1, k-1) * sum_{|S| = k, i in S} (max_S r - max_{S \ i} r)
/// ```
///
/// Evaluated in `O(N log N + N^2)` through order statistics instead of
/// enumerating subsets. Samples are ranked by reward, ties broken so that
/// the lower index ranks higher. A subset contributes to `A_i` only when
/// `i` is its top-ranked member, and then the gap is `r_i` minus the reward
/// of the next-ranked member, which is zero when that member ties with `i`.
pub fn walder_smoothed_advantage(rewards: &[f64], k: usize) -> Result<AdvantageVector> {
    check_rewards(rewards)?;
    let n = rewards.len();
    if k < 2 || k > n {
        return Err(LabError::out_of_range(
            "k",
            format!("k = {k} must satisfy 2 <= k <= N = {n}"),
        ));
    }
    if n > 64 {
        return Err(LabError::out_of_range(
            "rewards",
            "at most 64 samples supported",
        ));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| rewards[b].total_cmp(&rewards[a]).then(a.cmp(&b)));

    let norm = binomial(n as u64 - 1, k as u64 - 1) as f64;
    let mut values = vec![0.0; n];
    for (pos, &i) in order.iter().enumerate() {
        // The runner-up in the subset sits at rank q > pos; the remaining
        // k - 2 members come from ranks strictly below q.
        let total: f64 = ((pos + 1)..n)
            .map(|q| {
                let below = (n - 1 - q) as u64;
                let count = binomial(below, k as u64 - 2) as f64;
                count * (rewards[i] - rewards[order[q]])
            })
            .sum();
        values[i] = total / norm;
    }
    Ok(AdvantageVector {
        values,
        estimator: Estimator::WalderSmoothed,
        k: Some(k),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beta(b: f64) -> RiskParam {
        RiskParam::new(b).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn grpo_examples() {
        let a = grpo_advantage(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(a.values, vec![0.75, -0.25, -0.25, -0.25]);
        let a = grpo_advantage(&[0.3, 0.3, 0.3]).unwrap();
        assert!(a.values.iter().all(|v| *v == 0.0));
        assert_eq!(grpo_advantage(&[1.0, 0.0]).unwrap().values, vec![0.5, -0.5]);
        assert!(matches!(grpo_advantage(&[]), Err(LabError::Empty)));
    }

    #[test]
    fn rs_empirical_binary_half() {
        // mean(e^{2r}) = 0.5 e^2 + 0.5; naive evaluation is fine at beta = 2
        let rewards = [1.0, 1.0, 0.0, 0.0];
        let a = rs_empirical_advantage(&rewards, beta(2.0)).unwrap();
        let m = 0.5 * 2f64.exp() + 0.5;
        let pos = (2f64.exp() / m - 1.0) / 2.0;
        let neg = (1.0 / m - 1.0) / 2.0;
        assert!(close(a.values[0], pos, 1e-14));
        assert!(close(a.values[3], neg, 1e-14));
        assert!(close(pos, 0.380797, 5e-7));
        assert!(close(neg, -0.380797, 5e-7));
    }

    #[test]
    fn rs_empirical_neutral_and_constant() {
        let r = [0.1, 0.9, 0.4, 0.4, 0.0];
        let a = rs_empirical_advantage(&r, beta(1e-12)).unwrap();
        let g = grpo_advantage(&r).unwrap();
        for (x, y) in a.values.iter().zip(&g.values) {
            assert!(close(*x, *y, 1e-9));
        }
        for b in [-5.0, 0.0, 0.5, 64.0] {
            let a = rs_empirical_advantage(&[0.7; 6], beta(b)).unwrap();
            assert!(a.values.iter().all(|v| *v == 0.0), "beta {b}");
        }
    }

    #[test]
    fn rs_empirical_rejects_bad_input() {
        assert!(matches!(
            rs_empirical_advantage(&[], beta(1.0)),
            Err(LabError::Empty)
        ));
        assert!(matches!(
            rs_empirical_advantage(&[0.2, f64::NAN], beta(1.0)),
            Err(LabError::NonFinite { .. })
        ));
        assert!(RiskParam::new(f64::INFINITY).is_err());
    }

    #[test]
    fn rs_empirical_large_beta_is_finite() {
        let a = rs_empirical_advantage(&[1.0, 0.0, 0.0, 0.0], beta(64.0)).unwrap();
        assert!(a.values.iter().all(|v| v.is_finite()));
        assert!(a.mean().abs() < 1e-12);
        // exp(64)/mean ~ 4 for the single winner
        assert!(close(a.values[0], 3.0 / 64.0, 1e-12));
        assert!(close(a.values[1], -1.0 / 64.0, 1e-12));
    }

    #[test]
    fn rs_exact_examples() {
        let table = RewardTable::new(vec![1.0, 0.0]).unwrap();
        let pi = SoftmaxPolicy::uniform(2);
        let a = rs_exact_advantage(&table, &pi, beta(2.0)).unwrap();
        assert!(close(a.values[0], 0.380797, 5e-7));
        assert!(close(a.values[1], -0.380797, 5e-7));
        let a = rs_exact_advantage(&table, &pi, RiskParam::NEUTRAL).unwrap();
        assert_eq!(a.values, vec![0.5, -0.5]);

        let flat = RewardTable::new(vec![0.4; 5]).unwrap();
        let pi = SoftmaxPolicy::from_logits(vec![0.3, -1.0, 2.0, 0.0, 0.1]).unwrap();
        for b in [-3.0, 0.0, 2.0, 40.0] {
            let a = rs_exact_advantage(&flat, &pi, beta(b)).unwrap();
            assert!(a.values.iter().all(|v| *v == 0.0));
        }
        let short = SoftmaxPolicy::uniform(3);
        assert!(matches!(
            rs_exact_advantage(&table, &short, beta(1.0)),
            Err(LabError::DimensionMismatch {
                expected: 2,
                found: 3
            })
        ));
    }

    #[test]
    fn binary_rs_examples() {
        let s = BinaryGroupStats::new(16, 8).unwrap();
        let (pos, neg) = binary_rs_advantages(&s, beta(2.0));
        assert!(close(pos, 0.380797, 5e-7) && close(neg, -0.380797, 5e-7));

        let all = BinaryGroupStats::new(16, 16).unwrap();
        assert!(binary_rs_advantages(&all, beta(3.0)).0.abs() < 1e-15);
        let none = BinaryGroupStats::new(16, 0).unwrap();
        for b in [-2.0, 0.5, 8.0, 64.0] {
            assert_eq!(binary_rs_advantages(&none, beta(b)).1, 0.0);
        }
        let s = BinaryGroupStats::new(16, 5).unwrap();
        let (pos, neg) = binary_rs_advantages(&s, RiskParam::NEUTRAL);
        assert!(close(pos, 11.0 / 16.0, 1e-15) && close(neg, -5.0 / 16.0, 1e-15));
    }

    #[test]
    fn binary_rs_balances_and_matches_empirical() {
        for c in 0..=16 {
            let s = BinaryGroupStats::new(16, c).unwrap();
            let rewards: Vec<f64> = (0..16).map(|i| if i < c { 1.0 } else { 0.0 }).collect();
            for b in [-4.0, 1e-9, 0.5, 2.0, 8.0, 64.0] {
                let (pos, neg) = binary_rs_advantages(&s, beta(b));
                assert!((s.p_bar * pos + (1.0 - s.p_bar) * neg).abs() < 1e-12);
                let emp = rs_empirical_advantage(&rewards, beta(b)).unwrap();
                if c > 0 {
                    assert!(close(emp.values[0], pos, 1e-12), "c={c} b={b}");
                }
                if c < 16 {
                    assert!(close(emp.values[15], neg, 1e-12), "c={c} b={b}");
                }
            }
        }
    }

    #[test]
    fn group_stats_validation() {
        let s = BinaryGroupStats::new(16, 4).unwrap();
        assert_eq!(s.p_bar, 0.25);
        assert!(close(s.sigma, (0.25f64 * 0.75).sqrt(), 1e-15));
        assert_eq!(BinaryGroupStats::new(4, 4).unwrap().sigma, 0.0);
        assert!(BinaryGroupStats::new(4, 5).is_err());
        assert!(BinaryGroupStats::new(0, 0).is_err());
    }

    #[test]
    fn mahdavi_examples() {
        assert_eq!(mahdavi_advantages(0.5, 4).unwrap(), (0.25, -0.25));
        assert_eq!(mahdavi_advantages(1.0, 3).unwrap(), (0.0, 0.0));
        assert_eq!(mahdavi_advantages(0.0, 4).unwrap(), (4.0, 0.0));
        assert!(mahdavi_advantages(0.5, 0).is_err());
        assert!(mahdavi_advantages(1.5, 2).is_err());
    }

    #[test]
    fn passk_training_examples() {
        let (pos, neg) = passk_training_advantages(16, 8, 4).unwrap();
        assert!(close(pos, 1.0, 1e-15));
        assert!(close(neg, (0.5 - 35.0 / 455.0) / 0.5, 1e-15));
        assert_eq!(passk_training_advantages(16, 16, 3).unwrap(), (0.0, 0.0));
        assert_eq!(passk_training_advantages(16, 0, 3).unwrap(), (0.0, 0.0));

        // c = 12 -> N_neg = 4, binomial term C(3,3)/C(15,3) = 1/455
        let s = BinaryGroupStats::new(16, 12).unwrap();
        let (_, neg) = passk_training_advantages(16, 12, 4).unwrap();
        assert!(close(neg, (0.25 - 1.0 / 455.0) / s.sigma, 1e-14));

        // fewer negatives than k - 1: the binomial term vanishes
        let (_, neg) = passk_training_advantages(16, 14, 4).unwrap();
        let s = BinaryGroupStats::new(16, 14).unwrap();
        assert!(close(neg, (2.0 / 16.0) / s.sigma, 1e-14));

        assert!(passk_training_advantages(16, 8, 17).is_err());
        assert!(passk_training_advantages(16, 8, 0).is_err());
        assert!(passk_training_advantages(16, 17, 2).is_err());
    }

    #[test]
    fn tang_examples() {
        assert_eq!(
            tang_loo_advantage(&[1.0, 0.0, 0.0, 0.0]).unwrap().values,
            vec![1.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(
            tang_loo_advantage(&[1.0, 1.0, 0.0, 0.0]).unwrap().values,
            vec![0.0; 4]
        );
        let a = tang_loo_advantage(&[0.9, 0.5, 0.2]).unwrap();
        assert!(close(a.values[0], 0.4, 1e-15));
        assert_eq!(&a.values[1..], &[0.0, 0.0]);
        assert!(tang_loo_advantage(&[0.3]).is_err());
    }

    #[test]
    fn walder_examples() {
        let a = walder_smoothed_advantage(&[1.0, 0.0, 0.0, 0.0], 2).unwrap();
        assert_eq!(a.values, vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(a.k, Some(2));

        let a = walder_smoothed_advantage(&[0.4; 5], 3).unwrap();
        assert!(a.values.iter().all(|v| *v == 0.0));

        // subsets containing 0: {0,1} gap 0, {0,2} gap 1, {0,3} gap 1 -> 2/3
        let a = walder_smoothed_advantage(&[1.0, 1.0, 0.0, 0.0], 2).unwrap();
        assert!(close(a.values[0], 2.0 / 3.0, 1e-15));
        assert!(close(a.values[1], 2.0 / 3.0, 1e-15));
        assert!(a.values[0] < 1.0);
        assert_eq!(&a.values[2..], &[0.0, 0.0]);

        // k = N reduces to the leave-one-out estimator
        let r = [0.9, 0.5, 0.2, 0.7];
        let w = walder_smoothed_advantage(&r, 4).unwrap();
        let t = tang_loo_advantage(&r).unwrap();
        for (x, y) in w.values.iter().zip(&t.values) {
            assert!(close(*x, *y, 1e-15));
        }

        assert!(walder_smoothed_advantage(&[1.0, 0.0], 1).is_err());
        assert!(walder_smoothed_advantage(&[1.0, 0.0], 3).is_err());
    }
}
