use std::fmt::Write as _;

use crate::advantage::{
    binary_rs_advantages, mahdavi_advantages, passk_training_advantages, rs_empirical_advantage,
    tang_loo_advantage, walder_smoothed_advantage, BinaryGroupStats, RiskParam,
};
use crate::error::{LabError, Result};
use crate::format::{fmt_opt, fmt_real};
use crate::numeric::EXACT_BINOMIAL_LIMIT;

pub const DEFAULT_GROUP_SIZE: usize = 16;
pub const DEFAULT_LANDSCAPE_BETAS: [f64; 4] = [0.0, 2.0, 4.0, 8.0];
pub const DEFAULT_LANDSCAPE_KS: [usize; 3] = [2, 4, 8];
/// Reward grid `0, 0.01, ..., 1` for the continuous setting.
pub const CONTINUOUS_GRID_POINTS: usize = 101;

/// One estimator at one group accuracy in the binary-reward setting.
///
/// `a_pos` / `a_neg` are the advantages of a correct / incorrect response.
/// For the closed-form estimators they are reported at every accuracy; the
/// sample-based ones leave them empty when the group has no such response.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryRow {
    pub estimator: &'static str,
    /// `beta=..`, `k=..`, or empty.
    pub param: String,
    pub n_correct: usize,
    pub accuracy: f64,
    pub a_pos: Option<f64>,
    pub a_neg: Option<f64>,
    /// `c |A_pos| + (n - c) |A_neg|`.
    pub cumulative: f64,
}

/// Risk-sensitive advantage of one reward on the continuous grid, with the
/// whole grid as the group.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousRow {
    pub beta: f64,
    pub reward: f64,
    pub advantage: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LandscapeTable {
    pub n_group: usize,
    pub binary: Vec<BinaryRow>,
    pub continuous: Vec<ContinuousRow>,
}

impl LandscapeTable {
    pub fn binary_rows<'a>(
        &'a self,
        estimator: &'a str,
        param: &'a str,
    ) -> impl Iterator<Item = &'a BinaryRow> + 'a {
        self.binary
            .iter()
            .filter(move |r| r.estimator == estimator && r.param == param)
    }

    pub fn binary_csv(&self) -> String {
        let mut out = String::from("estimator,param,n_correct,accuracy,a_pos,a_neg,cumulative\n");
        for r in &self.binary {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.estimator,
                r.param,
                r.n_correct,
                fmt_real(r.accuracy),
                fmt_opt(r.a_pos),
                fmt_opt(r.a_neg),
                fmt_real(r.cumulative)
            );
        }
        out
    }

    pub fn continuous_csv(&self) -> String {
        let mut out = String::from("beta,reward,advantage\n");
        for r in &self.continuous {
            let _ = writeln!(
                out,
                "{},{},{}",
                fmt_real(r.beta),
                fmt_real(r.reward),
                fmt_real(r.advantage)
            );
        }
        out
    }
}

fn weighted(c: usize, n: usize, pos: f64, neg: f64) -> f64 {
    c as f64 * pos.abs() + (n - c) as f64 * neg.abs()
}

fn binary_group(n: usize, c: usize) -> Vec<f64> {
    (0..n).map(|i| if i < c { 1.0 } else { 0.0 }).collect()
}

fn sampled_row(
    estimator: &'static str,
    param: String,
    n: usize,
    c: usize,
    values: &[f64],
) -> BinaryRow {
    BinaryRow {
        estimator,
        param,
        n_correct: c,
        accuracy: c as f64 / n as f64,
        a_pos: (c > 0).then(|| values[0]),
        a_neg: (c < n).then(|| values[c]),
        cumulative: values.iter().map(|v| v.abs()).sum(),
    }
}

/// Advantage landscape for groups of `n_group` binary rewards at every
/// accuracy `c / n_group`, plus the continuous-reward rs curve.
///
/// Binary estimators: `rs` per beta; `mahdavi`, `passk_training` and
/// `walder` per k (walder only for `2 <= k <= n_group <= 64`); `tang_loo`
/// once.
pub fn advantage_landscape(n_group: usize, betas: &[f64], ks: &[usize]) -> Result<LandscapeTable> {
    if n_group < 2 {
        return Err(LabError::out_of_range(
            "n_group",
            "need at least 2 responses per group",
        ));
    }
    let risks = betas
        .iter()
        .map(|&b| RiskParam::new(b))
        .collect::<Result<Vec<_>>>()?;
    if let Some(&k) = ks.iter().find(|&&k| k == 0 || k > n_group) {
        return Err(LabError::out_of_range(
            "k",
            format!("{k} not in [1, {n_group}]"),
        ));
    }
    let n = n_group;
    let mut binary = Vec::new();
    for (&b, &risk) in betas.iter().zip(&risks) {
        for c in 0..=n {
            let stats = BinaryGroupStats::new(n, c)?;
            let (pos, neg) = binary_rs_advantages(&stats, risk);
            binary.push(BinaryRow {
                estimator: "rs",
                param: format!("beta={}", fmt_real(b)),
                n_correct: c,
                accuracy: stats.p_bar,
                a_pos: Some(pos),
                a_neg: Some(neg),
                cumulative: weighted(c, n, pos, neg),
            });
        }
    }
    for &k in ks {
        for c in 0..=n {
            let stats = BinaryGroupStats::new(n, c)?;
            let (pos, neg) = mahdavi_advantages(stats.p_bar, k)?;
            binary.push(BinaryRow {
                estimator: "mahdavi",
                param: format!("k={k}"),
                n_correct: c,
                accuracy: stats.p_bar,
                a_pos: Some(pos),
                a_neg: Some(neg),
                cumulative: weighted(c, n, pos, neg),
            });
        }
    }
    for &k in ks {
        for c in 0..=n {
            let (pos, neg) = passk_training_advantages(n, c, k)?;
            binary.push(BinaryRow {
                estimator: "passk_training",
                param: format!("k={k}"),
                n_correct: c,
                accuracy: c as f64 / n as f64,
                a_pos: Some(pos),
                a_neg: Some(neg),
                cumulative: weighted(c, n, pos, neg),
            });
        }
    }
    if n as u64 <= EXACT_BINOMIAL_LIMIT {
        for &k in ks.iter().filter(|&&k| k >= 2) {
            for c in 0..=n {
                let adv = walder_smoothed_advantage(&binary_group(n, c), k)?;
                binary.push(sampled_row("walder", format!("k={k}"), n, c, &adv.values));
            }
        }
    }
    for c in 0..=n {
        let adv = tang_loo_advantage(&binary_group(n, c))?;
        binary.push(sampled_row("tang_loo", String::new(), n, c, &adv.values));
    }

    let grid: Vec<f64> = (0..CONTINUOUS_GRID_POINTS)
        .map(|i| i as f64 / (CONTINUOUS_GRID_POINTS - 1) as f64)
        .collect();
    let mut continuous = Vec::new();
    for (&b, &risk) in betas.iter().zip(&risks) {
        let adv = rs_empirical_advantage(&grid, risk)?;
        continuous.extend(grid.iter().zip(&adv.values).map(|(&r, &a)| ContinuousRow {
            beta: b,
            reward: r,
            advantage: a,
        }));
    }
    Ok(LandscapeTable {
        n_group,
        binary,
        continuous,
    })
}
