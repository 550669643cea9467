//! Descending rearrangements, ordered partial sums and majorization verdicts.
//!
//! `a` majorizes `b` (`b ≺ a`) when every ordered partial sum
//! `S_N(a) = Σ_{j≤N} a↓_j` dominates `S_N(b)`. Equivalently, every confidence
//! interval `N(α) = min{N : S_N ≥ α}` of `b` is at least as large as that of
//! `a`. Pairs where neither holds are incomparable; their partial-sum curves
//! cross, and each crossing marks the confidence level at which the two
//! distributions trade places.

use crate::dist::{coherent_distribution, moments, rounding_slack, ProbabilityVector, DEFAULT_EPS};
use crate::error::{domain, Error, Result};
use crate::numeric::CompensatedSum;

/// Default tolerance below which partial-sum differences count as equal.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Descending rearrangement `p↓` with its cumulative sums `S_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedProfile {
    sorted_probs: Vec<f64>,
    partial_sums: Vec<f64>,
    tail_bound: f64,
    label: String,
}

/// Sorts the probabilities in non-increasing order (stable) and accumulates
/// them with compensated summation.
pub fn order_profile<P: ProbabilityVector + ?Sized>(d: &P) -> OrderedProfile {
    OrderedProfile::from_probabilities(d.probabilities(), d.tail_bound(), d.label())
}

impl OrderedProfile {
    pub fn from_probabilities(probs: &[f64], tail_bound: f64, label: impl Into<String>) -> Self {
        let mut sorted_probs = probs.to_vec();
        sorted_probs.sort_by(|a, b| b.total_cmp(a));
        let mut acc = CompensatedSum::new();
        let partial_sums = sorted_probs
            .iter()
            .map(|&p| {
                acc.add(p);
                acc.value()
            })
            .collect();
        Self {
            sorted_probs,
            partial_sums,
            tail_bound,
            label: label.into(),
        }
    }

    pub fn sorted_probs(&self) -> &[f64] {
        &self.sorted_probs
    }

    pub fn partial_sums(&self) -> &[f64] {
        &self.partial_sums
    }

    /// `S_N`, continued flat past the stored length (zero padding of `p↓`).
    pub fn partial_sum(&self, n: usize) -> f64 {
        match self.partial_sums.get(n) {
            Some(&s) => s,
            None => self.total_mass(),
        }
    }

    /// Piecewise-linear interpolation of `S` at a continuous index.
    pub fn partial_sum_at(&self, x: f64) -> f64 {
        let lo = x.floor().max(0.0) as usize;
        let frac = x - lo as f64;
        let s0 = self.partial_sum(lo);
        if frac == 0.0 {
            return s0;
        }
        s0 + frac * (self.partial_sum(lo + 1) - s0)
    }

    pub fn len(&self) -> usize {
        self.sorted_probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted_probs.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Which of the two compared profiles has the larger partial sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Leader {
    First,
    Second,
}

/// A sign change of `S_N(a) − S_N(b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingPoint {
    /// Crossing position Ñ in continuous N (0-based, like `S_N`), from
    /// piecewise-linear interpolation of both curves.
    pub n_interp: f64,
    /// Critical confidence level α̃: the common value of both interpolated
    /// curves at `n_interp`.
    pub alpha: f64,
    /// Profile whose partial sums are larger just before the crossing.
    pub before: Leader,
    /// Last index before the crossing where the difference exceeded `tol`.
    pub lower: usize,
    /// First index after the crossing where the difference exceeds `tol`.
    pub upper: usize,
    /// `(min, max)` of the two partial sums at `upper`: confidence levels for
    /// which the confidence intervals already disagree in the new direction.
    pub band: (f64, f64),
}

impl CrossingPoint {
    /// Crossing position counted in outcomes (`Ñ + 1`), the axis on which
    /// plots of `S` against the number of included outcomes are drawn.
    pub fn outcomes(&self) -> f64 {
        self.n_interp + 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// The first profile majorizes the second (`b ≺ a`).
    Majorizes,
    /// The first profile is majorized by the second (`a ≺ b`).
    MajorizedBy,
    Equal,
    Incomparable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MajorizationVerdict {
    pub relation: Relation,
    /// Non-empty iff the relation is `Incomparable`.
    pub crossings: Vec<CrossingPoint>,
    pub tol: f64,
    /// Largest `S_N(a) − S_N(b)` over N.
    pub max_excess: f64,
    /// Largest `S_N(b) − S_N(a)` over N.
    pub max_deficit: f64,
}

impl MajorizationVerdict {
    /// Confidence level of the first crossing, up to which the relation that
    /// holds for small N is in effect.
    pub fn effective_until(&self) -> Option<f64> {
        self.crossings.first().map(|c| c.alpha)
    }

    /// Profile that leads for small N, if the curves differ at all.
    pub fn initial_leader(&self) -> Option<Leader> {
        match self.relation {
            Relation::Majorizes => Some(Leader::First),
            Relation::MajorizedBy => Some(Leader::Second),
            Relation::Equal => None,
            Relation::Incomparable => self.crossings.first().map(|c| c.before),
        }
    }

    pub fn is_strict(&self) -> bool {
        matches!(self.relation, Relation::Majorizes | Relation::MajorizedBy)
    }
}

/// Compares two profiles after zero-padding them to a common length.
///
/// A difference `|S_N(a) − S_N(b)| ≤ tol` counts as equality at N. Signs are
/// tracked over the remaining indices; every change of sign is reported as a
/// [`CrossingPoint`].
pub fn compare(a: &OrderedProfile, b: &OrderedProfile, tol: f64) -> Result<MajorizationVerdict> {
    if !(tol >= 0.0 && tol.is_finite()) {
        return domain(format!("tolerance must be finite and non-negative, got {tol}"));
    }
    let len = a.len().max(b.len());
    let budget = a.tail_bound + b.tail_bound + rounding_slack(len);
    let mass_gap = (a.total_mass() - b.total_mass()).abs();
    if mass_gap > budget {
        return domain(format!(
            "normalizations of '{}' and '{}' differ by {mass_gap:e}, beyond the tail budget {budget:e}",
            a.label, b.label
        ));
    }

    let diff = |n: usize| a.partial_sum(n) - b.partial_sum(n);
    let mut crossings = Vec::new();
    let mut last: Option<(usize, f64)> = None;
    let (mut max_excess, mut max_deficit) = (0.0f64, 0.0f64);
    let (mut any_pos, mut any_neg) = (false, false);

    for n in 0..len {
        let d = diff(n);
        max_excess = max_excess.max(d);
        max_deficit = max_deficit.max(-d);
        if d.abs() <= tol {
            continue;
        }
        any_pos |= d > 0.0;
        any_neg |= d < 0.0;
        if let Some((i, di)) = last {
            if (di > 0.0) != (d > 0.0) {
                crossings.push(crossing(a, b, i, di, n, d));
            }
        }
        last = Some((n, d));
    }

    let relation = match (any_pos, any_neg) {
        (false, false) => Relation::Equal,
        (true, false) => Relation::Majorizes,
        (false, true) => Relation::MajorizedBy,
        (true, true) => Relation::Incomparable,
    };
    Ok(MajorizationVerdict {
        relation,
        crossings,
        tol,
        max_excess,
        max_deficit,
    })
}

fn crossing(a: &OrderedProfile, b: &OrderedProfile, i: usize, di: f64, j: usize, dj: f64) -> CrossingPoint {
    let t = di / (di - dj);
    let n_interp = i as f64 + t * (j - i) as f64;
    let alpha = 0.5 * (a.partial_sum_at(n_interp) + b.partial_sum_at(n_interp));
    let (sa, sb) = (a.partial_sum(j), b.partial_sum(j));
    CrossingPoint {
        n_interp,
        alpha,
        before: if di > 0.0 { Leader::First } else { Leader::Second },
        lower: i,
        upper: j,
        band: (sa.min(sb), sa.max(sb)),
    }
}

/// Smallest N with `S_N ≥ alpha`; the interval then holds `N + 1` outcomes.
pub fn confidence_interval(p: &OrderedProfile, alpha: f64) -> Result<usize> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("confidence level must lie in (0, 1), got {alpha}"));
    }
    let sums = p.partial_sums();
    let n = sums.partition_point(|&s| s < alpha);
    if n == sums.len() {
        let mass = p.total_mass();
        return Err(Error::Unsatisfiable {
            alpha,
            mass,
            deficit: alpha - mass,
        });
    }
    Ok(n)
}

/// Agreement between a majorization verdict and the confidence intervals of
/// both profiles on a grid of confidence levels.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub verdict: MajorizationVerdict,
    /// Grid levels that could be evaluated on both profiles.
    pub checked: usize,
    /// Levels where the intervals contradict the relation implied by the
    /// verdict (for incomparable pairs: the relation in effect for small N).
    pub violations: Vec<f64>,
    /// Levels where the first profile needs the larger interval.
    pub first_larger: Vec<f64>,
    /// Levels where the second profile needs the larger interval.
    pub second_larger: Vec<f64>,
}

impl EquivalenceReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that the confidence intervals order the same way as the partial
/// sums: `b ≺ a ⟺ N_b(α) ≥ N_a(α) ∀α`.
pub fn equivalence_check(
    a: &OrderedProfile,
    b: &OrderedProfile,
    alphas: &[f64],
    tol: f64,
) -> Result<EquivalenceReport> {
    let verdict = compare(a, b, tol)?;
    let reachable = a.total_mass().min(b.total_mass());
    let mut report = EquivalenceReport {
        checked: 0,
        violations: Vec::new(),
        first_larger: Vec::new(),
        second_larger: Vec::new(),
        verdict,
    };
    let leader = report.verdict.initial_leader();
    for &alpha in alphas {
        if !(alpha > 0.0 && alpha < 1.0) || alpha > reachable {
            continue;
        }
        let na = confidence_interval(a, alpha)?;
        let nb = confidence_interval(b, alpha)?;
        report.checked += 1;
        if na > nb {
            report.first_larger.push(alpha);
        } else if nb > na {
            report.second_larger.push(alpha);
        }
        let consistent = match leader {
            Some(Leader::First) => nb >= na,
            Some(Leader::Second) => na >= nb,
            None => na == nb,
        };
        if !consistent {
            report.violations.push(alpha);
        }
    }
    Ok(report)
}

/// Majorization counterpart of the sub-/super-Poissonian distinction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoissonClass {
    /// The distribution majorizes the same-mean Poisson law (`p_c ≺ p`).
    OverPoissonian,
    /// The distribution is majorized by the same-mean Poisson law (`p ≺ p_c`).
    UnderPoissonian,
    /// Equal ordered partial sums, including the zero-mean vacuum.
    Poissonian,
    Incomparable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoissonVerdict {
    pub class: PoissonClass,
    /// Comparison of the distribution (first) against the Poisson reference
    /// (second); `None` for the vacuum, whose reference is itself.
    pub comparison: Option<MajorizationVerdict>,
    pub mean: f64,
    pub variance: f64,
}

impl PoissonVerdict {
    pub fn crossings(&self) -> &[CrossingPoint] {
        self.comparison.as_ref().map_or(&[], |c| &c.crossings)
    }

    /// `Δ²n / n̄`, the variance-based Fano factor.
    pub fn fano_factor(&self) -> f64 {
        self.variance / self.mean
    }
}

/// Compares `d` with the Poisson distribution of the same mean.
pub fn classify_poissonian<P: ProbabilityVector + ?Sized>(d: &P, tol: f64) -> Result<PoissonVerdict> {
    let m = moments(d);
    if !m.mean.is_finite() {
        return domain("distribution has no finite mean");
    }
    if m.mean <= 0.0 {
        return Ok(PoissonVerdict {
            class: PoissonClass::Poissonian,
            comparison: None,
            mean: m.mean,
            variance: m.variance,
        });
    }
    let reference = coherent_distribution(m.mean, DEFAULT_EPS)?;
    let verdict = compare(&order_profile(d), &order_profile(&reference), tol)?;
    let class = match verdict.relation {
        Relation::Majorizes => PoissonClass::OverPoissonian,
        Relation::MajorizedBy => PoissonClass::UnderPoissonian,
        Relation::Equal => PoissonClass::Poissonian,
        Relation::Incomparable => PoissonClass::Incomparable,
    };
    Ok(PoissonVerdict {
        class,
        comparison: Some(verdict),
        mean: m.mean,
        variance: m.variance,
    })
}
