//! Photon-number distributions of coherent, thermal, number, squeezed and
//! mixed states.
//!
//! Every distribution is stored densely from n = 0 up to a truncation point
//! `n_max`, together with an upper bound on the omitted mass. For the Poisson
//! and geometric families that bound is analytic; squeezed states come from a
//! truncated Fock-space construction (see [`crate::fock`]) and carry the tail
//! mass measured on the converged state vector.

use std::fmt;

use crate::error::{domain, Error, Result};
use crate::fock;
use crate::numeric::{ln_poisson_pmf, sum_compensated};

/// Default tail budget for generated distributions.
pub const DEFAULT_EPS: f64 = 1e-12;

/// Upper cap on the Fock dimension used by [`squeezed_distribution`].
pub const DEFAULT_MAX_DIM: usize = 1 << 14;

/// Anything that can be viewed as a finite, non-negative probability vector.
pub trait ProbabilityVector {
    fn probabilities(&self) -> &[f64];

    /// Upper bound on the probability mass not represented in `probabilities`.
    fn tail_bound(&self) -> f64;

    fn label(&self) -> &str;

    fn total_mass(&self) -> f64 {
        sum_compensated(self.probabilities().iter().copied())
    }
}

/// Rounding allowance for normalization checks on a vector of `len` entries.
pub(crate) fn rounding_slack(len: usize) -> f64 {
    1e-14 + 10.0 * f64::EPSILON * len as f64
}

/// Truncated photon-number distribution `p_n`, n = 0..=n_max.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonDistribution {
    probs: Vec<f64>,
    tail_bound: f64,
    label: String,
}

impl PhotonDistribution {
    /// Wraps a probability vector after checking non-negativity and that the
    /// mass lies in `[1 - tail_bound, 1]` up to rounding.
    pub fn new(probs: Vec<f64>, tail_bound: f64, label: impl Into<String>) -> Result<Self> {
        if probs.is_empty() {
            return domain("a photon distribution needs at least one entry");
        }
        if !(tail_bound.is_finite() && tail_bound >= 0.0) {
            return domain(format!("tail bound must be finite and non-negative, got {tail_bound}"));
        }
        if let Some((n, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !(p.is_finite() && **p >= 0.0))
        {
            return domain(format!("probability at n = {n} is {p}"));
        }
        let mass = sum_compensated(probs.iter().copied());
        let slack = rounding_slack(probs.len());
        if mass > 1.0 + slack || mass < 1.0 - tail_bound - slack {
            return domain(format!(
                "total mass {mass} is outside [1 - {tail_bound:e}, 1]"
            ));
        }
        Ok(Self {
            probs,
            tail_bound,
            label: label.into(),
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Probability of `n` photons; zero beyond the truncation point.
    pub fn get(&self, n: usize) -> f64 {
        self.probs.get(n).copied().unwrap_or(0.0)
    }

    pub fn n_max(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn moments(&self) -> Moments {
        moments(self)
    }
}

impl ProbabilityVector for PhotonDistribution {
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

/// Mean and variance of a photon-number distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    /// Size of the omitted tail's influence, estimated as `n_max^2 * tail_bound`.
    pub truncation_error: f64,
}

/// First two moments, `mean = Σ n p_n` and `variance = Σ n² p_n − mean²`.
pub fn moments<P: ProbabilityVector + ?Sized>(d: &P) -> Moments {
    let probs = d.probabilities();
    let mean = sum_compensated(probs.iter().enumerate().map(|(n, p)| n as f64 * p));
    // Centered form avoids cancellation for large means; the last term restores
    // the raw definition when the stored mass falls short of one.
    let centered = sum_compensated(probs.iter().enumerate().map(|(n, p)| {
        let dn = n as f64 - mean;
        dn * dn * p
    }));
    let mass = sum_compensated(probs.iter().copied());
    let variance = (centered + mean * mean * (1.0 - mass)).max(0.0);
    let n_max = probs.len().saturating_sub(1) as f64;
    Moments {
        mean,
        variance,
        truncation_error: n_max * n_max * d.tail_bound(),
    }
}

fn check_mean(mean: f64) -> Result<()> {
    if !(mean.is_finite() && mean > 0.0) {
        return domain(format!("mean photon number must be finite and positive, got {mean}"));
    }
    Ok(())
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return domain(format!("tail budget must lie in (0, 1), got {eps}"));
    }
    Ok(())
}

/// Poisson statistics `e^{-n̄} n̄^n / n!` of a coherent state.
///
/// The truncation point is the smallest `N ≥ ⌊n̄⌋` whose geometric tail bound
/// `p_{N+1} / (1 − n̄/(N+2))` is at most `eps`.
pub fn coherent_distribution(mean: f64, eps: f64) -> Result<PhotonDistribution> {
    check_mean(mean)?;
    check_eps(eps)?;
    let mut n_max = mean.floor() as u64;
    let tail = loop {
        let next = ln_poisson_pmf(n_max + 1, mean).exp();
        let bound = next / (1.0 - mean / (n_max as f64 + 2.0));
        if bound <= eps {
            break bound;
        }
        n_max += 1;
    };
    let probs = (0..=n_max).map(|n| ln_poisson_pmf(n, mean).exp()).collect();
    PhotonDistribution::new(probs, tail, format!("coherent({mean})"))
}

/// Geometric (Bose–Einstein) statistics of a thermal state,
/// `p_n = (1/(n̄+1)) (n̄/(n̄+1))^n`.
pub fn thermal_distribution(mean: f64, eps: f64) -> Result<PhotonDistribution> {
    check_mean(mean)?;
    check_eps(eps)?;
    let ln_ratio = -(1.0 / mean).ln_1p();
    let tail_after = |n: u64| ((n as f64 + 1.0) * ln_ratio).exp();
    let mut n_max = ((eps.ln() / ln_ratio).ceil() as u64).saturating_sub(1);
    while tail_after(n_max) > eps {
        n_max += 1;
    }
    while n_max > 0 && tail_after(n_max - 1) <= eps {
        n_max -= 1;
    }
    let p0 = 1.0 / (mean + 1.0);
    let probs = (0..=n_max).map(|n| p0 * (n as f64 * ln_ratio).exp()).collect();
    PhotonDistribution::new(probs, tail_after(n_max), format!("thermal({mean})"))
}

/// Fock state `|n⟩`: all mass at `n`.
pub fn number_state_distribution(n: usize) -> PhotonDistribution {
    let mut probs = vec![0.0; n + 1];
    probs[n] = 1.0;
    PhotonDistribution {
        probs,
        tail_bound: 0.0,
        label: format!("number({n})"),
    }
}

/// Closed-form ordered partial sums of a thermal state, `1 − (n̄/(n̄+1))^{N+1}`.
pub fn thermal_partial_sum_closed_form(mean: f64, n: u64) -> Result<f64> {
    check_mean(mean)?;
    Ok(-((n as f64 + 1.0) * -(1.0 / mean).ln_1p()).exp_m1())
}

/// Ordered partial sums of the Gaussian approximation with standard deviation
/// `delta_n`: `erf(N / (√2 Δn))`.
pub fn gaussian_partial_sum(delta_n: f64, n: f64) -> Result<f64> {
    if !(delta_n.is_finite() && delta_n > 0.0) {
        return domain(format!("standard deviation must be positive, got {delta_n}"));
    }
    if n.is_nan() || n < 0.0 {
        return domain(format!("partial-sum index must be non-negative, got {n}"));
    }
    if n.is_infinite() {
        return Ok(1.0);
    }
    Ok(libm::erf(n / (std::f64::consts::SQRT_2 * delta_n)))
}

/// Parameters of the displaced squeezed vacuum `D(R) S(r) |0⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedParams {
    displacement: f64,
    squeezing: f64,
}

impl SqueezedParams {
    /// `displacement` is the coherent amplitude R ≥ 0 and `squeezing` the
    /// signed squeezing parameter r (r > 0 stretches the displaced quadrature).
    pub fn new(displacement: f64, squeezing: f64) -> Result<Self> {
        if !(displacement.is_finite() && displacement >= 0.0) {
            return domain(format!("displacement must be finite and non-negative, got {displacement}"));
        }
        if !squeezing.is_finite() {
            return domain(format!("squeezing must be finite, got {squeezing}"));
        }
        Ok(Self {
            displacement,
            squeezing,
        })
    }

    pub fn displacement(&self) -> f64 {
        self.displacement
    }

    pub fn squeezing(&self) -> f64 {
        self.squeezing
    }

    /// `n̄ = R² + sinh² r`.
    pub fn mean(&self) -> f64 {
        let s = self.squeezing.sinh();
        self.displacement * self.displacement + s * s
    }

    /// `Δ²n = R² e^{2r} + ½ sinh²(2r)`.
    pub fn variance(&self) -> f64 {
        squeezed_variance(self.displacement * self.displacement, self.squeezing)
    }
}

impl fmt::Display for SqueezedParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "squeezed(R={},r={})", self.displacement, self.squeezing)
    }
}

fn squeezed_variance(displacement_sq: f64, r: f64) -> f64 {
    let s2 = (2.0 * r).sinh();
    displacement_sq * (2.0 * r).exp() + 0.5 * s2 * s2
}

/// Photon statistics of `D(R) S(r) |0⟩`, built in a truncated Fock basis.
pub fn squeezed_distribution(params: SqueezedParams, eps: f64) -> Result<PhotonDistribution> {
    squeezed_distribution_with_cap(params, eps, DEFAULT_MAX_DIM)
}

/// As [`squeezed_distribution`] with an explicit cap on the Fock dimension.
pub fn squeezed_distribution_with_cap(
    params: SqueezedParams,
    eps: f64,
    max_dim: usize,
) -> Result<PhotonDistribution> {
    check_eps(eps)?;
    let state = fock::converged_squeezed_state(params, eps, max_dim)?;
    let probs = state.probabilities();

    // Keep the shortest prefix whose discarded suffix stays within half the
    // budget; the other half absorbs rounding and the truncation estimate.
    let mut suffix = 0.0;
    let mut n_max = probs.len() - 1;
    while n_max > 0 && suffix + probs[n_max] <= 0.5 * eps {
        suffix += probs[n_max];
        n_max -= 1;
    }
    let tail = suffix + state.edge_mass();
    PhotonDistribution::new(probs[..=n_max].to_vec(), tail, params.to_string())
}

/// Literal evaluation of the Hermite-polynomial closed form for `p_n` of a
/// displaced squeezed state. Only defined for `r > 0`.
///
/// With `t = tanh r` and `y = R (1/√t − √t)/√2`, the term
/// `t^n |H_n(i y)|² / (2^n n!)` is carried as `u_n²`, where `u_n` obeys the
/// positive three-term recurrence
/// `u_{n+1} = y √(2t/(n+1)) u_n + t √(n/(n+1)) u_{n-1}`.
/// A running log-scale keeps `u_n` in range for large arguments.
pub fn squeezed_closed_form(params: SqueezedParams, n: usize) -> Result<f64> {
    let r = params.squeezing;
    if r <= 0.0 {
        return Err(Error::Domain(format!(
            "closed form requires r > 0 (got {r}); use squeezed_distribution instead"
        )));
    }
    let big_r = params.displacement;
    let t = r.tanh();
    let sqrt_t = t.sqrt();
    let y = big_r * (1.0 / sqrt_t - sqrt_t) / std::f64::consts::SQRT_2;

    let mut prev = 0.0; // u_{k-1}
    let mut cur = 1.0; // u_k
    let mut log_scale = 0.0;
    for k in 0..n {
        let kf = k as f64;
        let next = y * (2.0 * t / (kf + 1.0)).sqrt() * cur + t * (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > 1e150 {
            prev /= cur.abs();
            log_scale += cur.abs().ln();
            cur = cur.signum();
        }
    }
    if cur == 0.0 {
        return Ok(0.0);
    }
    let ln_p = 2.0 * (cur.abs().ln() + log_scale) - big_r * big_r * (1.0 - t) - r.cosh().ln();
    Ok(ln_p.exp())
}

/// Branch of solutions of the moment equations for fixed mean.
///
/// At fixed n̄ the variance is a function of r on `[-asinh √n̄, asinh √n̄]`
/// with a single minimum at some `r* < 0`. Every attainable variance is hit
/// once on each side of `r*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SqueezeBranch {
    /// `r ≤ r*`: the branch through the squeezed vacuum, with the larger
    /// squeezing magnitude and a weaker coherent component.
    #[default]
    Strong,
    /// `r ≥ r*`: the branch through the coherent state `r = 0`.
    Weak,
}

/// Squeezing parameter at which the variance is minimal for the given mean.
pub fn squeeze_turning_point(mean: f64) -> Result<f64> {
    check_mean(mean)?;
    let r_max = mean.sqrt().asinh();
    let slope = |r: f64| {
        let s = r.sinh();
        (2.0 * r).exp() * (2.0 * (mean - s * s) - (2.0 * r).sinh()) + (4.0 * r).sinh()
    };
    Ok(bisect(slope, -r_max, 0.0))
}

/// Attainable variance range `[min, max]` of displaced squeezed states with
/// the given mean.
pub fn attainable_variance(mean: f64) -> Result<(f64, f64)> {
    let r_star = squeeze_turning_point(mean)?;
    let s = r_star.sinh();
    let min = squeezed_variance((mean - s * s).max(0.0), r_star);
    Ok((min, 2.0 * mean * (mean + 1.0)))
}

/// Inverts the moment equations on the default [`SqueezeBranch::Strong`] branch.
pub fn solve_squeezed_params(target_mean: f64, target_variance: f64) -> Result<SqueezedParams> {
    solve_squeezed_params_on(target_mean, target_variance, SqueezeBranch::default())
}

/// Finds `(R, r)` with `R² + sinh² r = n̄` and `R² e^{2r} + ½ sinh²(2r) = Δ²n`
/// on the requested branch. `R²` is eliminated and the remaining equation in
/// `r` is solved by bisection on a bracket where it is monotone.
///
/// When the solution has no coherent component (`R = 0`) the sign of `r` is
/// irrelevant for photon statistics and `r ≥ 0` is returned.
pub fn solve_squeezed_params_on(
    target_mean: f64,
    target_variance: f64,
    branch: SqueezeBranch,
) -> Result<SqueezedParams> {
    check_mean(target_mean)?;
    if !(target_variance.is_finite() && target_variance > 0.0) {
        return domain(format!("target variance must be finite and positive, got {target_variance}"));
    }
    let mean = target_mean;
    let r_max = mean.sqrt().asinh();
    let r_star = squeeze_turning_point(mean)?;
    let (min, max) = attainable_variance(mean)?;
    let slack = 1e-12 * max;
    if target_variance < min - slack || target_variance > max + slack {
        return Err(Error::Infeasible {
            mean,
            variance: target_variance,
            min,
            max,
        });
    }
    let residual = |r: f64| {
        let s = r.sinh();
        squeezed_variance((mean - s * s).max(0.0), r) - target_variance
    };
    let r = if target_variance >= max {
        r_max
    } else if target_variance <= min {
        r_star
    } else {
        match branch {
            SqueezeBranch::Strong => bisect(residual, -r_max, r_star),
            SqueezeBranch::Weak => bisect(residual, r_star, r_max),
        }
    };
    let s = r.sinh();
    let displacement_sq = mean - s * s;
    if displacement_sq <= 1e-12 * mean {
        return SqueezedParams::new(0.0, r.abs());
    }
    SqueezedParams::new(displacement_sq.sqrt(), r)
}

/// Bisection for a sign change of `f` on `[lo, hi]`, run to machine precision.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Convex combination `ξ a + (1 − ξ) b` of two photon distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureSpec {
    pub weight: f64,
    pub first: PhotonDistribution,
    pub second: PhotonDistribution,
}

pub fn mixture(spec: &MixtureSpec) -> Result<PhotonDistribution> {
    let xi = spec.weight;
    if !(0.0..=1.0).contains(&xi) {
        return domain(format!("mixing weight must lie in [0, 1], got {xi}"));
    }
    let len = spec.first.probs.len().max(spec.second.probs.len());
    let probs = (0..len)
        .map(|n| xi * spec.first.get(n) + (1.0 - xi) * spec.second.get(n))
        .collect();
    let tail = xi * spec.first.tail_bound + (1.0 - xi) * spec.second.tail_bound;
    PhotonDistribution::new(
        probs,
        tail,
        format!("mix({xi};{};{})", spec.first.label, spec.second.label),
    )
}
