//! Independent reference implementations used by the integration tests.
//!
//! Everything here is written the slow, obvious way (direct sums, subset
//! enumeration, factorials) and shares no code with the library kernels.

#![allow(dead_code)]

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn naive_softmax(logits: &[f64]) -> Vec<f64> {
    let e: Vec<f64> = logits.iter().map(|l| l.exp()).collect();
    let z: f64 = e.iter().sum();
    e.iter().map(|x| x / z).collect()
}

/// `(1/beta) ln sum_i softmax(theta)_i exp(beta r_i)`, or the plain mean at
/// `beta = 0`.
pub fn naive_rs_objective(logits: &[f64], rewards: &[f64], beta: f64) -> f64 {
    let p = naive_softmax(logits);
    if beta == 0.0 {
        return p.iter().zip(rewards).map(|(p, r)| p * r).sum();
    }
    let m: f64 = p
        .iter()
        .zip(rewards)
        .map(|(p, r)| p * (beta * r).exp())
        .sum();
    m.ln() / beta
}

/// Central finite differences of [`naive_rs_objective`] in each logit.
pub fn fd_gradient(logits: &[f64], rewards: &[f64], beta: f64, h: f64) -> Vec<f64> {
    (0..logits.len())
        .map(|i| {
            let mut up = logits.to_vec();
            let mut down = logits.to_vec();
            up[i] += h;
            down[i] -= h;
            (naive_rs_objective(&up, rewards, beta) - naive_rs_objective(&down, rewards, beta))
                / (2.0 * h)
        })
        .collect()
}

/// Per-arm advantage straight from the definition.
pub fn naive_arm_advantage(probs: &[f64], rewards: &[f64], beta: f64) -> Vec<f64> {
    if beta == 0.0 {
        let mean: f64 = probs.iter().zip(rewards).map(|(p, r)| p * r).sum();
        return rewards.iter().map(|r| r - mean).collect();
    }
    let m: f64 = probs
        .iter()
        .zip(rewards)
        .map(|(p, r)| p * (beta * r).exp())
        .sum();
    rewards
        .iter()
        .map(|r| ((beta * r).exp() / m - 1.0) / beta)
        .collect()
}

/// Next policy in closed form: `pi_i exp(alpha pi_i A_i) / Z`.
pub fn closed_form_step(probs: &[f64], rewards: &[f64], beta: f64, alpha: f64) -> Vec<f64> {
    let adv = naive_arm_advantage(probs, rewards, beta);
    let w: Vec<f64> = probs
        .iter()
        .zip(&adv)
        .map(|(p, a)| p * (alpha * p * a).exp())
        .collect();
    let z: f64 = w.iter().sum();
    w.iter().map(|x| x / z).collect()
}

pub fn naive_mean_baseline(rewards: &[f64]) -> Vec<f64> {
    let mean = rewards.iter().sum::<f64>() / rewards.len() as f64;
    rewards.iter().map(|r| r - mean).collect()
}

/// Walder-style advantage by enumerating every size-`k` subset that
/// contains each sample: mean of `max_S r - max_{S \ i} r`.
pub fn walder_enumerated(rewards: &[f64], k: usize) -> Vec<f64> {
    let n = rewards.len();
    assert!(n <= 20 && (2..=n).contains(&k));
    let mut sums = vec![0.0; n];
    let mut counts = vec![0u64; n];
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&j| mask & (1 << j) != 0).collect();
        let full = members
            .iter()
            .map(|&j| rewards[j])
            .fold(f64::NEG_INFINITY, f64::max);
        for &i in &members {
            let without = members
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| rewards[j])
                .fold(f64::NEG_INFINITY, f64::max);
            sums[i] += full - without;
            counts[i] += 1;
        }
    }
    sums.iter()
        .zip(&counts)
        .map(|(s, &c)| s / c as f64)
        .collect()
}

fn factorial(n: u64) -> u128 {
    (1..=u128::from(n)).product()
}

fn binom_fact(n: u64, k: u64) -> u128 {
    if k > n {
        0
    } else {
        factorial(n) / (factorial(k) * factorial(n - k))
    }
}

/// `1 - C(n - c, k) / C(n, k)` from factorials; valid for `n <= 30`.
pub fn hypergeometric_pass_at_k(n: u64, c: u64, k: u64) -> Ratio<u128> {
    assert!(n <= 30);
    Ratio::from_integer(1) - Ratio::new(binom_fact(n - c, k), binom_fact(n, k))
}

pub fn random_rewards(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen::<f64>()).collect()
}

pub fn random_logits(rng: &mut impl Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-scale..scale)).collect()
}

pub fn sup_norm(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn l2_norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}
