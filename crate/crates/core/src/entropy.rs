//! Rényi, Tsallis and Shannon entropies (natural log).

use crate::dist::ProbabilityVector;
use crate::error::{domain, Error, Result};
use crate::majorize::{compare, order_profile, Relation, DEFAULT_TOL};
use crate::numeric::sum_compensated;

/// Half-width of the window around `q = 1` that is evaluated as Shannon.
pub const SHANNON_WINDOW: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntropyFamily {
    Renyi,
    Tsallis,
    Shannon,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyQuery {
    pub family: EntropyFamily,
    /// Entropic index, ignored for Shannon.
    pub q: f64,
}

impl EntropyQuery {
    pub fn renyi(q: f64) -> Self {
        Self {
            family: EntropyFamily::Renyi,
            q,
        }
    }

    pub fn tsallis(q: f64) -> Self {
        Self {
            family: EntropyFamily::Tsallis,
            q,
        }
    }

    pub fn shannon() -> Self {
        Self {
            family: EntropyFamily::Shannon,
            q: 1.0,
        }
    }
}

/// Entropy of `d`; zero probabilities contribute nothing (`0 ln 0 = 0`,
/// `0^q = 0`).
pub fn entropy<P: ProbabilityVector + ?Sized>(d: &P, query: EntropyQuery) -> Result<f64> {
    entropy_of(d.probabilities(), query)
}

pub fn entropy_of(probs: &[f64], query: EntropyQuery) -> Result<f64> {
    let q = query.q;
    if query.family != EntropyFamily::Shannon && !(q >= 0.0 && q.is_finite()) {
        return domain(format!("entropic index must be finite and non-negative, got {q}"));
    }
    if query.family == EntropyFamily::Shannon || (q - 1.0).abs() < SHANNON_WINDOW {
        return Ok(shannon(probs));
    }
    let value = match query.family {
        EntropyFamily::Renyi => ln_power_sum(probs, q) / (1.0 - q),
        EntropyFamily::Tsallis => (power_sum(probs, q) - 1.0) / (1.0 - q),
        EntropyFamily::Shannon => unreachable!(),
    };
    Ok(value)
}

fn shannon(probs: &[f64]) -> f64 {
    -sum_compensated(probs.iter().filter(|&&p| p > 0.0).map(|&p| p * p.ln()))
}

fn power_sum(probs: &[f64], q: f64) -> f64 {
    sum_compensated(probs.iter().filter(|&&p| p > 0.0).map(|&p| p.powf(q)))
}

/// `ln Σ p^q`, factoring out the largest probability so the sum stays in range.
fn ln_power_sum(probs: &[f64], q: f64) -> f64 {
    let max = probs.iter().copied().fold(0.0f64, f64::max);
    if max == 0.0 {
        return f64::NEG_INFINITY;
    }
    let scaled = sum_compensated(probs.iter().filter(|&&p| p > 0.0).map(|&p| (p / max).powf(q)));
    q * max.ln() + scaled.ln()
}

/// An entropy comparison that contradicts a majorization verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchurViolation {
    pub family: EntropyFamily,
    pub q: f64,
    pub first: f64,
    pub second: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchurReport {
    pub relation: Relation,
    pub checked: usize,
    pub violations: Vec<SchurViolation>,
    /// Checks where the entropies came out equal within rounding.
    pub ties: usize,
}

impl SchurReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that Rényi and Tsallis entropies reverse a strict majorization
/// verdict: if `b ≺ a` then `H_q(b) ≥ H_q(a)` for every `q` in the grid.
pub fn schur_consistency<A, B>(a: &A, b: &B, q_grid: &[f64]) -> Result<SchurReport>
where
    A: ProbabilityVector + ?Sized,
    B: ProbabilityVector + ?Sized,
{
    let verdict = compare(&order_profile(a), &order_profile(b), DEFAULT_TOL)?;
    if !verdict.is_strict() {
        return Err(Error::Precondition(format!(
            "entropy ordering needs a strict majorization verdict, got {:?}",
            verdict.relation
        )));
    }
    let mut report = SchurReport {
        relation: verdict.relation,
        checked: 0,
        violations: Vec::new(),
        ties: 0,
    };
    for &q in q_grid {
        for family in [EntropyFamily::Renyi, EntropyFamily::Tsallis] {
            let query = EntropyQuery { family, q };
            let (ha, hb) = (entropy(a, query)?, entropy(b, query)?);
            // The majorized (more mixed) side must carry the larger entropy.
            let (ordered, mixed) = match verdict.relation {
                Relation::Majorizes => (ha, hb),
                _ => (hb, ha),
            };
            let slack = 1e-12 * (1.0 + ordered.abs().max(mixed.abs()));
            report.checked += 1;
            if mixed < ordered - slack {
                report.violations.push(SchurViolation {
                    family,
                    q,
                    first: ha,
                    second: hb,
                });
            } else if (mixed - ordered).abs() <= slack {
                report.ties += 1;
            }
        }
    }
    Ok(report)
}
