//! One-step numerical witnesses for the three bandit lemmas.
//!
//! - L1: a standard (`beta = 0`) exact step can *decrease* the mass on the
//!   optimal set when the policy sits on a good-but-suboptimal arm.
//! - L2: once `beta >= (1/gap) ln(1 / pi(I*))`, every risk-sensitive exact
//!   step increases the optimal mass, for any step size.
//! - L3: past some onset, increasing `beta` further shrinks the one-step
//!   improvement.
//!
//! Each verifier returns a [`LemmaReport`] whose verdict tests the lemma's
//! conclusion directly on the measured masses.

use std::fmt;

use sha2::{Digest, Sha256};

use crate::advantage::{rs_exact_advantage, RiskParam};
use crate::bandit::{exact_pg_step, RewardTable, SoftmaxPolicy, UpdateParams, OPTIMAL_TIE_TOL};
use crate::error::{LabError, Result};
use crate::format::fmt_real;
use crate::metrics::optimal_mass;

pub const DEFAULT_L1_REWARDS: [f64; 3] = [1.0, 0.6, 0.0];
pub const DEFAULT_SECOND_MASS: f64 = 0.98;
pub const DEFAULT_ALPHA_GRID: [f64; 4] = [0.01, 0.1, 1.0, 10.0];
pub const DEFAULT_L3_BETA_GRID: [f64; 4] = [24.0, 32.0, 48.0, 64.0];
pub const DEFAULT_L3_ALPHA: f64 = 1.0;
/// Default L2 check point, as a multiple of the threshold.
pub const DEFAULT_L2_THRESHOLD_FACTOR: f64 = 1.01;

const L3_SCAN_RATIO: f64 = 1.25;
const L3_SCAN_MIN_TOP: f64 = 64.0;
const MAX_HALVINGS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaId {
    L1,
    L2,
    L3,
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LemmaId::L1 => "L1",
            LemmaId::L2 => "L2",
            LemmaId::L3 => "L3",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    /// The lemma's hypothesis is not met (L2 below the threshold).
    NotApplicable,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "true",
            Verdict::Fails => "false",
            Verdict::NotApplicable => "not-applicable",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaInstance {
    pub table: RewardTable,
    pub policy: SoftmaxPolicy,
}

impl LemmaInstance {
    pub fn new(table: RewardTable, policy: SoftmaxPolicy) -> Result<Self> {
        if table.len() != policy.len() {
            return Err(LabError::DimensionMismatch {
                expected: table.len(),
                found: policy.len(),
            });
        }
        Ok(LemmaInstance { table, policy })
    }

    pub fn optimal_mass(&self) -> f64 {
        optimal_mass(&self.table, &self.policy).expect("dimensions checked at construction")
    }

    /// First 16 hex digits of the SHA-256 of the table and policy text.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.table.to_text());
        h.update(self.policy.to_text());
        h.finalize()
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct LemmaReport {
    pub lemma: LemmaId,
    pub instance: LemmaInstance,
    pub measured: Vec<(String, f64)>,
    pub verdict: Verdict,
}

impl LemmaReport {
    pub fn get(&self, key: &str) -> Option<f64> {
        self.measured
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| *v)
    }

    /// Single-line `key=value` record, space separated.
    pub fn record(&self) -> String {
        let mut out = format!(
            "lemma={} digest={} arms={}",
            self.lemma,
            self.instance.digest(),
            self.instance.table.len()
        );
        for (k, v) in &self.measured {
            out.push_str(&format!(" {k}={}", fmt_real(*v)));
        }
        out.push_str(&format!(" verdict={}", self.verdict));
        out
    }
}

fn tagged(key: &str, param: f64) -> String {
    format!("{key}@{}", fmt_real(param))
}

struct L1Roles {
    i_prime: usize,
    i_minus: usize,
}

fn l1_roles(table: &RewardTable) -> Result<L1Roles> {
    let second = table
        .second_best_reward()
        .ok_or_else(|| LabError::Hypothesis("every arm is optimal".into()))?;
    let r = table.rewards();
    let r_min = table.min_reward();
    if second - r_min <= OPTIMAL_TIE_TOL {
        return Err(LabError::Hypothesis(
            "need a reward strictly between the minimum and the maximum".into(),
        ));
    }
    let i_prime = r
        .iter()
        .position(|&x| (x - second).abs() <= OPTIMAL_TIE_TOL)
        .expect("second best exists");
    let i_minus = r.iter().position(|&x| x == r_min).expect("minimum exists");
    Ok(L1Roles { i_prime, i_minus })
}

/// The constraint `0 < pi(I*) < ((r' - r_min) / (r_max - r')) pi(i-)`,
/// returned as `(pi(I*), right-hand side)`.
pub fn l1_constraint(instance: &LemmaInstance) -> Result<(f64, f64)> {
    let roles = l1_roles(&instance.table)?;
    let t = &instance.table;
    let r_prime = t.rewards()[roles.i_prime];
    let ratio = (r_prime - t.min_reward()) / (t.max_reward() - r_prime);
    Ok((
        instance.optimal_mass(),
        ratio * instance.policy.probs()[roles.i_minus],
    ))
}

/// Left-hand side of the sufficient condition
/// `pi_{i'}^2 A_{i'} - max_{i*} pi_{i*} - sum_{j != i'} pi_j^2 > 0`.
pub fn l1_power_margin(instance: &LemmaInstance) -> Result<f64> {
    let roles = l1_roles(&instance.table)?;
    let pi = instance.policy.probs();
    let adv = rs_exact_advantage(&instance.table, &instance.policy, RiskParam::NEUTRAL)?;
    let max_opt = instance
        .table
        .optimal_set()
        .into_iter()
        .map(|i| pi[i])
        .fold(0.0, f64::max);
    let others: f64 = pi
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != roles.i_prime)
        .map(|(_, p)| p * p)
        .sum();
    let p = pi[roles.i_prime];
    Ok(p * p * adv.values[roles.i_prime] - max_opt - others)
}

/// Builds a policy concentrated on the second-best arm on which a standard
/// exact step loses optimal mass.
///
/// The second-best arm gets `second_mass`. Any arms that are neither optimal,
/// second-best nor the chosen worst arm share a tenth of the remainder. The
/// optimal set starts with another tenth, split evenly, and is halved until
/// both the constraint and the sufficient condition hold; the worst arm
/// takes what is left.
pub fn construct_l1_instance(table: &RewardTable, second_mass: f64) -> Result<LemmaInstance> {
    if !(second_mass > 0.0 && second_mass < 1.0) {
        return Err(LabError::out_of_range(
            "second_mass",
            format!("{second_mass} must lie in (0, 1)"),
        ));
    }
    let roles = l1_roles(table)?;
    let optimal = table.optimal_set();
    let fillers: Vec<usize> = (0..table.len())
        .filter(|&i| !table.is_optimal(i) && i != roles.i_prime && i != roles.i_minus)
        .collect();
    let rest = 1.0 - second_mass;
    let filler_total = if fillers.is_empty() { 0.0 } else { 0.1 * rest };
    let mut rho = 0.1 * rest;
    for _ in 0..MAX_HALVINGS {
        let mut probs = vec![0.0; table.len()];
        probs[roles.i_prime] = second_mass;
        for &i in &fillers {
            probs[i] = filler_total / fillers.len() as f64;
        }
        for &i in &optimal {
            probs[i] = rho / optimal.len() as f64;
        }
        probs[roles.i_minus] = rest - filler_total - rho;
        let instance = LemmaInstance::new(table.clone(), SoftmaxPolicy::from_probs(&probs)?)?;
        let (mass, bound) = l1_constraint(&instance)?;
        if mass > 0.0 && mass < bound && l1_power_margin(&instance)? > 0.0 {
            return Ok(instance);
        }
        rho *= 0.5;
    }
    Err(LabError::Hypothesis(format!(
        "no policy found with second-best mass {second_mass}; try a value closer to 1"
    )))
}

/// The L1 instance on the default three-arm table.
pub fn default_l1_instance() -> LemmaInstance {
    let table = RewardTable::new(DEFAULT_L1_REWARDS.to_vec()).expect("valid default rewards");
    construct_l1_instance(&table, DEFAULT_SECOND_MASS).expect("default construction succeeds")
}

fn check_alphas(alphas: &[f64]) -> Result<()> {
    if alphas.is_empty() {
        return Err(LabError::out_of_range("alpha grid", "empty"));
    }
    if let Some(a) = alphas.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
        return Err(LabError::out_of_range(
            "alpha",
            format!("{a} must be positive"),
        ));
    }
    Ok(())
}

fn step_mass(instance: &LemmaInstance, alpha: f64, beta: RiskParam) -> Result<f64> {
    let next = exact_pg_step(
        &instance.policy,
        &instance.table,
        &UpdateParams::exact(alpha, beta)?,
    )?;
    optimal_mass(&instance.table, &next)
}

/// Standard exact steps at every `alpha`; holds iff each one strictly lowers
/// the optimal mass.
pub fn verify_l1(instance: &LemmaInstance, alphas: &[f64]) -> Result<LemmaReport> {
    check_alphas(alphas)?;
    if instance.table.gap().is_none() {
        return Err(LabError::Hypothesis(
            "uniform rewards leave nothing to verify".into(),
        ));
    }
    let (mass, bound) = l1_constraint(instance)?;
    let mut measured = vec![
        ("pre_mass".to_owned(), mass),
        ("constraint_bound".to_owned(), bound),
        ("power_margin".to_owned(), l1_power_margin(instance)?),
    ];
    let mut ok = true;
    for &a in alphas {
        let post = step_mass(instance, a, RiskParam::NEUTRAL)?;
        ok &= post < mass;
        measured.push((tagged("post_mass", a), post));
        measured.push((tagged("mass_decrease", a), mass - post));
    }
    Ok(LemmaReport {
        lemma: LemmaId::L1,
        instance: instance.clone(),
        measured,
        verdict: Verdict::from_bool(ok),
    })
}

/// `(1/gap) ln(1 / pi(I*))`.
pub fn beta_threshold(instance: &LemmaInstance) -> Result<f64> {
    let gap = instance
        .table
        .gap()
        .ok_or_else(|| LabError::Hypothesis("every arm is optimal; the gap is undefined".into()))?;
    let mass = instance.optimal_mass();
    if mass <= 0.0 {
        return Err(LabError::Hypothesis("optimal set carries no mass".into()));
    }
    Ok(-mass.min(1.0).ln() / gap)
}

/// Sign pattern of the risk-sensitive advantage and the resulting mass
/// increase at every `alpha`. Below the threshold the report is
/// [`Verdict::NotApplicable`].
pub fn verify_l2(instance: &LemmaInstance, beta: RiskParam, alphas: &[f64]) -> Result<LemmaReport> {
    check_alphas(alphas)?;
    let threshold = beta_threshold(instance)?;
    let mut measured = vec![
        ("beta".to_owned(), beta.value()),
        ("threshold".to_owned(), threshold),
    ];
    if beta.value() < threshold {
        return Ok(LemmaReport {
            lemma: LemmaId::L2,
            instance: instance.clone(),
            measured,
            verdict: Verdict::NotApplicable,
        });
    }
    let adv = rs_exact_advantage(&instance.table, &instance.policy, beta)?;
    let mut min_opt = f64::INFINITY;
    let mut max_other = f64::NEG_INFINITY;
    for (i, &a) in adv.values.iter().enumerate() {
        if instance.table.is_optimal(i) {
            min_opt = min_opt.min(a);
        } else {
            max_other = max_other.max(a);
        }
    }
    let mut ok = min_opt > 0.0 && max_other < 0.0;
    let pre = instance.optimal_mass();
    measured.push(("min_optimal_advantage".to_owned(), min_opt));
    measured.push(("max_other_advantage".to_owned(), max_other));
    measured.push(("pre_mass".to_owned(), pre));
    for &a in alphas {
        let post = step_mass(instance, a, beta)?;
        ok &= post > pre;
        measured.push((tagged("post_mass", a), post));
    }
    Ok(LemmaReport {
        lemma: LemmaId::L2,
        instance: instance.clone(),
        measured,
        verdict: Verdict::from_bool(ok),
    })
}

fn improvement(instance: &LemmaInstance, beta: f64, alpha: f64) -> Result<f64> {
    Ok(step_mass(instance, alpha, RiskParam::new(beta)?)? - instance.optimal_mass())
}

fn positive_and_decreasing(xs: &[f64]) -> bool {
    xs.iter().all(|&x| x > 0.0) && xs.windows(2).all(|w| w[1] < w[0])
}

/// Smallest index from which the sequence is positive and strictly
/// decreasing to its end.
fn monotone_onset(xs: &[f64]) -> Option<usize> {
    (0..xs.len()).find(|&j| positive_and_decreasing(&xs[j..]))
}

/// One-step improvements along an ascending `beta` grid at a fixed `alpha`.
///
/// Holds iff every improvement is positive and they strictly decrease.
/// Also reports where monotonicity sets in on a geometric scan that starts
/// at the L2 threshold, and the finite-difference behaviour of the
/// advantages across the grid (optimal arms positive and decreasing, the
/// rest negative and increasing), as 1/0 flags.
pub fn verify_l3(instance: &LemmaInstance, betas: &[f64], alpha: f64) -> Result<LemmaReport> {
    check_alphas(&[alpha])?;
    if betas.is_empty() {
        return Err(LabError::out_of_range("beta grid", "empty"));
    }
    if !betas.windows(2).all(|w| w[0] < w[1]) {
        return Err(LabError::out_of_range(
            "beta grid",
            "must be strictly ascending",
        ));
    }
    let threshold = beta_threshold(instance)?;
    if betas[0] < threshold {
        return Err(LabError::Hypothesis(format!(
            "beta grid starts at {} below the threshold {}",
            fmt_real(betas[0]),
            fmt_real(threshold)
        )));
    }
    let mut measured = vec![
        ("alpha".to_owned(), alpha),
        ("threshold".to_owned(), threshold),
    ];
    let imps = betas
        .iter()
        .map(|&b| improvement(instance, b, alpha))
        .collect::<Result<Vec<_>>>()?;
    for (&b, &d) in betas.iter().zip(&imps) {
        measured.push((tagged("improvement", b), d));
    }

    let top = betas[betas.len() - 1].max(L3_SCAN_MIN_TOP);
    let mut scan = Vec::new();
    let mut b = threshold.max(f64::MIN_POSITIVE);
    while b <= top {
        scan.push(b);
        b *= L3_SCAN_RATIO;
    }
    let scan_imps = scan
        .iter()
        .map(|&b| improvement(instance, b, alpha))
        .collect::<Result<Vec<_>>>()?;
    if let Some(j) = monotone_onset(&scan_imps) {
        measured.push(("scan_onset_beta".to_owned(), scan[j]));
    }

    let advs = betas
        .iter()
        .map(|&b| rs_exact_advantage(&instance.table, &instance.policy, RiskParam::new(b)?))
        .collect::<Result<Vec<_>>>()?;
    let mut opt_ok = true;
    let mut other_ok = true;
    for i in 0..instance.table.len() {
        let series: Vec<f64> = advs.iter().map(|a| a.values[i]).collect();
        if instance.table.is_optimal(i) {
            opt_ok &= positive_and_decreasing(&series);
        } else {
            other_ok &= series.iter().all(|&a| a < 0.0) && series.windows(2).all(|w| w[1] > w[0]);
        }
    }
    measured.push((
        "optimal_advantage_decreasing".to_owned(),
        f64::from(u8::from(opt_ok)),
    ));
    measured.push((
        "other_advantage_increasing".to_owned(),
        f64::from(u8::from(other_ok)),
    ));

    Ok(LemmaReport {
        lemma: LemmaId::L3,
        instance: instance.clone(),
        measured,
        verdict: Verdict::from_bool(positive_and_decreasing(&imps)),
    })
}
