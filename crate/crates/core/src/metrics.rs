//! Scalar evaluation quantities for a policy on a reward table.

use num_rational::Ratio;

use crate::advantage::{check_dims, RiskParam};
use crate::bandit::{RewardTable, SoftmaxPolicy};
use crate::error::{LabError, Result};
use crate::numeric::{binomial, ratio_to_f64, weighted_log_mean_exp, EXACT_BINOMIAL_LIMIT};

/// `sum_i pi_i r_i`.
pub fn expected_reward(table: &RewardTable, policy: &SoftmaxPolicy) -> Result<f64> {
    check_dims(table, policy)?;
    Ok(policy
        .probs()
        .iter()
        .zip(table.rewards())
        .map(|(p, r)| p * r)
        .sum())
}

/// Risk-sensitive objective `(1/beta) ln E_pi[exp(beta r)]`.
///
/// Interpolates between the expected reward (`beta -> 0`) and the maximum
/// (minimum) reward in the support as `beta -> +inf` (`-inf`).
pub fn rs_objective(table: &RewardTable, policy: &SoftmaxPolicy, beta: RiskParam) -> Result<f64> {
    check_dims(table, policy)?;
    if beta.is_neutral() {
        return expected_reward(table, policy);
    }
    let b = beta.value();
    let top = table.max_reward();
    let scaled: Vec<f64> = table.rewards().iter().map(|r| b * (r - top)).collect();
    let lme = weighted_log_mean_exp(policy.probs(), &scaled).ok_or(LabError::Empty)?;
    Ok(top + lme / b)
}

/// Shannon entropy in nats, with `0 ln 0 = 0`.
pub fn policy_entropy(policy: &SoftmaxPolicy) -> f64 {
    -policy
        .probs()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|p| p * p.ln())
        .sum::<f64>()
}

/// Probability mass on the optimal set of the table.
pub fn optimal_mass(table: &RewardTable, policy: &SoftmaxPolicy) -> Result<f64> {
    check_dims(table, policy)?;
    Ok(table
        .optimal_set()
        .into_iter()
        .map(|i| policy.probs()[i])
        .sum())
}

/// `n` samples, `c` of them correct, evaluated at subset size `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PassAtKQuery {
    pub n: u64,
    pub c: u64,
    pub k: u64,
}

impl PassAtKQuery {
    pub fn new(n: u64, c: u64, k: u64) -> Result<Self> {
        if n == 0 {
            return Err(LabError::out_of_range("n", "need at least one sample"));
        }
        if c > n {
            return Err(LabError::out_of_range("c", format!("c = {c} > n = {n}")));
        }
        if k == 0 || k > n {
            return Err(LabError::out_of_range(
                "k",
                format!("k = {k} must satisfy 1 <= k <= n = {n}"),
            ));
        }
        Ok(PassAtKQuery { n, c, k })
    }
}

/// Unbiased pass@k estimate.
///
/// Exact rational arithmetic (`1 - C(n-c, k) / C(n, k)`) up to
/// `n = 64`; [`pass_at_k_product`] above that.
pub fn pass_at_k(q: PassAtKQuery) -> f64 {
    if q.n <= EXACT_BINOMIAL_LIMIT {
        ratio_to_f64(&pass_at_k_exact(q))
    } else {
        pass_at_k_product(q)
    }
}

/// `1 - C(n-c, k) / C(n, k)` as an exact reduced fraction (`n <= 64`).
pub fn pass_at_k_exact(q: PassAtKQuery) -> Ratio<u128> {
    let total = binomial(q.n, q.k);
    let misses = binomial(q.n - q.c, q.k);
    Ratio::new(total - misses, total)
}

/// The numerically stable product form:
///
/// ```text
/// if n - c < k: 1
/// else: 1 - prod_{i = n-c+1}^{n} (1 - k / i)
/// ```
pub fn pass_at_k_product(q: PassAtKQuery) -> f64 {
    if q.n - q.c < q.k {
        return 1.0;
    }
    let kf = q.k as f64;
    1.0 - ((q.n - q.c + 1)..=q.n)
        .map(|i| 1.0 - kf / i as f64)
        .product::<f64>()
}

/// The product form evaluated in exact rationals, term by term.
pub fn pass_at_k_product_exact(q: PassAtKQuery) -> Ratio<u128> {
    let one = Ratio::from_integer(1u128);
    if q.n - q.c < q.k {
        return one;
    }
    let prod = ((q.n - q.c + 1)..=q.n).fold(one, |acc, i| {
        acc * Ratio::new(u128::from(i - q.k), u128::from(i))
    });
    one - prod
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u64, c: u64, k: u64) -> PassAtKQuery {
        PassAtKQuery::new(n, c, k).unwrap()
    }

    #[test]
    fn expected_reward_examples() {
        let t = RewardTable::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(
            expected_reward(&t, &SoftmaxPolicy::uniform(2)).unwrap(),
            0.5
        );
        let t = RewardTable::new(vec![0.6, 0.1, 1.0]).unwrap();
        let point = SoftmaxPolicy::from_logits(vec![0.0, -900.0, -900.0]).unwrap();
        assert_eq!(expected_reward(&t, &point).unwrap(), 0.6);
        assert!(expected_reward(&t, &SoftmaxPolicy::uniform(2)).is_err());
    }

    #[test]
    fn rs_objective_examples() {
        let flat = RewardTable::new(vec![0.35; 3]).unwrap();
        let pi = SoftmaxPolicy::from_logits(vec![0.2, 1.0, -0.4]).unwrap();
        for b in [-8.0, 0.0, 1.0, 64.0] {
            let v = rs_objective(&flat, &pi, RiskParam::new(b).unwrap()).unwrap();
            assert!((v - 0.35).abs() < 1e-15);
        }

        let t = RewardTable::new(vec![1.0, 0.0]).unwrap();
        let u = SoftmaxPolicy::uniform(2);
        let v = rs_objective(&t, &u, RiskParam::new(64.0).unwrap()).unwrap();
        let closed = (0.5 * 64f64.exp() + 0.5).ln() / 64.0;
        assert!((v - closed).abs() < 1e-14);
        assert!((v - (1.0 - 2f64.ln() / 64.0)).abs() < 1e-12);
        assert!((v - 1.0).abs() < 0.02);

        let v = rs_objective(&t, &u, RiskParam::new(1e-12).unwrap()).unwrap();
        assert!((v - 0.5).abs() < 1e-9);
    }

    #[test]
    fn pass_at_k_examples() {
        assert_eq!(pass_at_k(q(2, 1, 1)), 0.5);
        assert_eq!(pass_at_k_exact(q(4, 2, 2)), Ratio::new(5, 6));
        assert_eq!(pass_at_k(q(4, 2, 2)), 5.0 / 6.0);
        for k in 1..=16 {
            assert_eq!(pass_at_k(q(16, 0, k)), 0.0);
            assert_eq!(pass_at_k(q(16, 16, k)), 1.0);
            assert_eq!(pass_at_k_product(q(16, 16, k)), 1.0);
        }
        // n - c < k short-circuits to exactly one
        assert_eq!(pass_at_k_product(q(10, 8, 3)), 1.0);
    }

    #[test]
    fn pass_at_k_large_n_uses_product() {
        let v = pass_at_k(q(1024, 3, 32));
        assert!((v - pass_at_k_product(q(1024, 3, 32))).abs() < 1e-15);
        assert!(v > 0.0 && v < 1.0);
    }

    #[test]
    fn pass_at_k_query_validation() {
        assert!(PassAtKQuery::new(4, 2, 5).is_err());
        assert!(PassAtKQuery::new(4, 5, 1).is_err());
        assert!(PassAtKQuery::new(4, 2, 0).is_err());
        assert!(PassAtKQuery::new(0, 0, 0).is_err());
    }

    #[test]
    fn entropy_examples() {
        for k in [2, 7, 100] {
            let h = policy_entropy(&SoftmaxPolicy::uniform(k));
            assert!((h - (k as f64).ln()).abs() < 1e-12);
        }
        let near_point = SoftmaxPolicy::from_logits(vec![60.0, 0.0, 0.0]).unwrap();
        assert!(policy_entropy(&near_point) < 1e-20);
        let exact_point = SoftmaxPolicy::from_logits(vec![0.0, -1e6]).unwrap();
        assert_eq!(policy_entropy(&exact_point), 0.0);

        // 0.8029 on one arm, the rest spread evenly over 99 arms
        let e6 = 6f64.exp();
        let mut logits = vec![0.0; 100];
        logits[25] = 6.0;
        let pi = SoftmaxPolicy::from_logits(logits).unwrap();
        let z = e6 + 99.0;
        let direct = -(e6 / z) * (e6 / z).ln() - 99.0 * (1.0 / z) * (1.0 / z).ln();
        assert!((policy_entropy(&pi) - direct).abs() < 1e-12);
    }

    #[test]
    fn optimal_mass_examples() {
        let mut r = vec![0.0; 100];
        r[3] = 1.0;
        let t = RewardTable::new(r).unwrap();
        assert!((optimal_mass(&t, &SoftmaxPolicy::uniform(100)).unwrap() - 0.01).abs() < 1e-15);

        let flat = RewardTable::new(vec![0.5; 4]).unwrap();
        let pi = SoftmaxPolicy::from_logits(vec![0.3, 0.1, -1.0, 2.0]).unwrap();
        assert!((optimal_mass(&flat, &pi).unwrap() - 1.0).abs() < 1e-15);

        let t = RewardTable::new(vec![1.0, 0.2, 1.0, 0.0]).unwrap();
        let pi = SoftmaxPolicy::from_probs(&[0.3, 0.2, 0.3, 0.2]).unwrap();
        assert!((optimal_mass(&t, &pi).unwrap() - 0.6).abs() < 1e-15);
    }
}
