//! Number-sum and number-difference statistics behind a lossless 50/50 beam
//! splitter fed with vacuum in its second port, and the clustering criterion
//! built from them.
//!
//! The sum `n₊ = n₁ + n₂` reproduces the input statistics. The difference
//! `n₋ = n₁ − n₂` follows `p₋(m) = Σ_{n ≥ |m|} p_n C(n, (n+m)/2) / 2^n`, with
//! only terms of matching parity contributing. Its variance always equals
//! the input mean, so `p₋` acts as a Poissonian reference built from the
//! state itself.

use rayon::prelude::*;

use crate::dist::{moments, rounding_slack, Moments, PhotonDistribution, ProbabilityVector};
use crate::error::{domain, Result};
use crate::majorize::{compare, order_profile, CrossingPoint, MajorizationVerdict, Relation};
use crate::numeric::{ln_binomial_half_pmf, sum_compensated, CompensatedSum};

/// Distribution over the signed count `m = −m_max ..= m_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedCountDistribution {
    /// Index of `m = 0` (equal to `m_max`).
    offset: usize,
    probs: Vec<f64>,
    tail_bound: f64,
    label: String,
}

impl SignedCountDistribution {
    pub fn new(m_max: usize, probs: Vec<f64>, tail_bound: f64, label: impl Into<String>) -> Result<Self> {
        if probs.len() != 2 * m_max + 1 {
            return domain(format!(
                "expected {} entries for m_max = {m_max}, got {}",
                2 * m_max + 1,
                probs.len()
            ));
        }
        if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return domain("signed-count probabilities must be finite and non-negative");
        }
        let mass = sum_compensated(probs.iter().copied());
        let slack = rounding_slack(probs.len());
        if mass > 1.0 + slack || mass < 1.0 - tail_bound - slack {
            return domain(format!("total mass {mass} is outside [1 - {tail_bound:e}, 1]"));
        }
        Ok(Self {
            offset: m_max,
            probs,
            tail_bound,
            label: label.into(),
        })
    }

    pub fn m_max(&self) -> usize {
        self.offset
    }

    /// Probability of the difference `m`; zero outside the stored range.
    pub fn get(&self, m: i64) -> f64 {
        let idx = self.offset as i64 + m;
        if idx < 0 {
            return 0.0;
        }
        self.probs.get(idx as usize).copied().unwrap_or(0.0)
    }

    /// `(m, p₋(m))` in increasing `m`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let offset = self.offset as i64;
        self.probs.iter().enumerate().map(move |(i, &p)| (i as i64 - offset, p))
    }

    pub fn moments(&self) -> Moments {
        let mean = sum_compensated(self.iter().map(|(m, p)| m as f64 * p));
        let second = sum_compensated(self.iter().map(|(m, p)| (m * m) as f64 * p));
        let m_max = self.offset as f64;
        Moments {
            mean,
            variance: second - mean * mean,
            truncation_error: m_max * m_max * self.tail_bound,
        }
    }
}

impl ProbabilityVector for SignedCountDistribution {
    fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    fn label(&self) -> &str {
        &self.label
    }
}

/// Distribution of `n₁ + n₂`: the input statistics, since no photon is lost.
pub fn number_sum_distribution(d: &PhotonDistribution) -> PhotonDistribution {
    d.clone().with_label(format!("p+[{}]", d.label()))
}

/// Distribution of `m = n₁ − n₂`, with `m_max = n_max`.
///
/// Each `p₋(m)` is summed with compensation over `n = |m|, |m|+2, …`; the
/// binomial weights are evaluated in log space. Negative `m` mirror positive
/// ones.
pub fn number_difference_distribution(d: &PhotonDistribution) -> SignedCountDistribution {
    let probs = d.probs();
    let m_max = d.n_max();
    let half: Vec<f64> = (0..=m_max)
        .into_par_iter()
        .map(|m| {
            let mut acc = CompensatedSum::new();
            for n in (m..=m_max).step_by(2) {
                let p = probs[n];
                if p > 0.0 {
                    let k = ((n + m) / 2) as u64;
                    acc.add(p * ln_binomial_half_pmf(k, n as u64).exp());
                }
            }
            acc.value()
        })
        .collect();
    let full = half.iter().rev().chain(half.iter().skip(1)).copied().collect();
    SignedCountDistribution {
        offset: m_max,
        probs: full,
        tail_bound: d.tail_bound(),
        label: format!("p-[{}]", d.label()),
    }
}

/// Covariance of the two detector counts, `¼(Δ²n − n̄)`.
pub fn detector_covariance<P: ProbabilityVector + ?Sized>(d: &P) -> f64 {
    let m = moments(d);
    0.25 * (m.variance - m.mean)
}

/// Probability that at most one detector registers light, `P(n₁ n₂ = 0)`:
/// `Σ_n p_n (2^{1−n} − [n = 0])`.
pub fn prob_single_detector_silent<P: ProbabilityVector + ?Sized>(d: &P) -> f64 {
    sum_compensated(d.probabilities().iter().enumerate().map(|(n, &p)| {
        if n == 0 {
            p
        } else {
            p * 2f64.powi(1 - n as i32)
        }
    }))
}

/// Majorization counterpart of bunching and anti-bunching.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterClass {
    /// `p₊ ≺ p₋`.
    Clustering,
    /// `p₋ ≺ p₊`.
    AntiClustering,
    Equal,
    Incomparable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterVerdict {
    pub class: ClusterClass,
    /// Comparison of `p₊` (first) against `p₋` (second).
    pub comparison: MajorizationVerdict,
    /// `¼(Δ²n − n̄)`, positive for bunching and negative for anti-bunching.
    pub covariance: f64,
}

impl ClusterVerdict {
    pub fn crossings(&self) -> &[CrossingPoint] {
        &self.comparison.crossings
    }
}

/// Compares the ordered profiles of `p₊` and `p₋`.
pub fn classify_clustering(d: &PhotonDistribution, tol: f64) -> Result<ClusterVerdict> {
    let plus = number_sum_distribution(d);
    let minus = number_difference_distribution(d);
    let comparison = compare(&order_profile(&plus), &order_profile(&minus), tol)?;
    let class = match comparison.relation {
        Relation::Majorizes => ClusterClass::AntiClustering,
        Relation::MajorizedBy => ClusterClass::Clustering,
        Relation::Equal => ClusterClass::Equal,
        Relation::Incomparable => ClusterClass::Incomparable,
    };
    Ok(ClusterVerdict {
        class,
        comparison,
        covariance: detector_covariance(d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{coherent_distribution, number_state_distribution, thermal_distribution};
    use crate::majorize::DEFAULT_TOL;

    #[test]
    fn sum_distribution_is_the_input() {
        let c = coherent_distribution(1.0, 1e-12).unwrap();
        assert_eq!(number_sum_distribution(&c).probs(), c.probs());
        let n = number_state_distribution(2);
        assert_eq!(number_sum_distribution(&n).probs(), n.probs());
    }

    #[test]
    fn difference_of_single_photon() {
        let p = number_difference_distribution(&number_state_distribution(1));
        assert_eq!(p.get(-1), 0.5);
        assert_eq!(p.get(0), 0.0);
        assert_eq!(p.get(1), 0.5);
    }

    #[test]
    fn difference_of_two_photons() {
        let p = number_difference_distribution(&number_state_distribution(2));
        assert_eq!(p.get(-2), 0.25);
        assert_eq!(p.get(0), 0.5);
        assert_eq!(p.get(2), 0.25);
        assert_eq!(p.get(1), 0.0);
        assert_eq!(p.get(7), 0.0);
    }

    #[test]
    fn difference_variance_equals_mean() {
        let t = thermal_distribution(3.0, 1e-14).unwrap();
        let m = number_difference_distribution(&t).moments();
        assert!(m.mean.abs() < 1e-14);
        assert!((m.variance - t.moments().mean).abs() < 1e-9);
    }

    #[test]
    fn covariance_signs() {
        assert!(detector_covariance(&coherent_distribution(3.0, 1e-14).unwrap()).abs() < 1e-10);
        assert!((detector_covariance(&thermal_distribution(1.0, 1e-14).unwrap()) - 0.25).abs() < 1e-10);
        assert_eq!(detector_covariance(&number_state_distribution(1)), -0.25);
    }

    #[test]
    fn silent_detector_probability() {
        assert_eq!(prob_single_detector_silent(&number_state_distribution(0)), 1.0);
        assert_eq!(prob_single_detector_silent(&number_state_distribution(1)), 1.0);
        assert_eq!(prob_single_detector_silent(&number_state_distribution(2)), 0.5);
    }

    #[test]
    fn clustering_verdicts() {
        let v = classify_clustering(&number_state_distribution(1), DEFAULT_TOL).unwrap();
        assert_eq!(v.class, ClusterClass::AntiClustering);
        assert_eq!(v.covariance, -0.25);
        let v = classify_clustering(&coherent_distribution(1.0, 1e-12).unwrap(), DEFAULT_TOL).unwrap();
        assert_eq!(v.class, ClusterClass::Incomparable);
    }

    #[test]
    fn vacuum_is_equal_under_clustering() {
        let v = classify_clustering(&number_state_distribution(0), DEFAULT_TOL).unwrap();
        assert_eq!(v.class, ClusterClass::Equal);
    }

    #[test]
    fn signed_constructor_checks_shape() {
        assert!(SignedCountDistribution::new(1, vec![0.5, 0.5], 0.0, "bad").is_err());
        assert!(SignedCountDistribution::new(1, vec![0.25, 0.5, 0.25], 0.0, "ok").is_ok());
    }
}
