//! Independent ground truth: truncated Fock-space construction of displaced
//! squeezed states, a seeded Monte-Carlo model of the 50/50 beam-splitter
//! experiment, and exact enumeration of the two-detector joint statistics.

use std::collections::BTreeMap;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dist::{PhotonDistribution, ProbabilityVector, SqueezedParams};
use crate::error::{domain, Error, Result};
use crate::numeric::{sum_compensated, CompensatedSum};

/// Smallest accepted truncation dimension.
pub const MIN_DIM: usize = 16;

/// Cap for the automatic dimension doubling of [`build_squeezed_state`].
pub const GUARD_MAX_DIM: usize = 1 << 14;

/// Samples drawn from each random substream.
pub const SAMPLE_CHUNK: u64 = 1 << 16;

/// State vector in the truncated number basis `|0⟩ .. |dim−1⟩`.
///
/// Displacement and squeezing along the real axis have real generators, so the
/// amplitudes are real. The truncated generators are antisymmetric and the
/// evolution is orthogonal: the norm is one up to rounding, and truncation
/// shows up as mass piling up at the top of the basis instead. That mass is
/// what `truncation_deficit` (mass in the upper half of the basis) and
/// `edge_mass` (last two levels) measure.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amplitudes: Vec<f64>,
}

impl FockVector {
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    /// `|c_n|²` for every basis level.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c * c).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        sum_compensated(self.amplitudes.iter().map(|c| c * c))
    }

    /// Probability carried by levels `n ≥ dim/2`.
    pub fn truncation_deficit(&self) -> f64 {
        sum_compensated(self.amplitudes[self.dim() / 2..].iter().map(|c| c * c))
    }

    /// Probability on the two highest levels. Squeezing couples `n ↔ n ± 2`,
    /// so both parities have to be inspected.
    pub fn edge_mass(&self) -> f64 {
        self.amplitudes[self.dim() - 2..].iter().map(|c| c * c).sum()
    }

    /// The edge must hold at most a thousandth of the guard-band mass.
    pub fn edge_guard_ok(&self) -> bool {
        let deficit = self.truncation_deficit();
        self.edge_mass() <= 1e-3 * deficit || deficit < f64::MIN_POSITIVE
    }
}

/// Default dimension for a state of the given mean photon number.
pub fn default_dim(mean: f64) -> usize {
    MIN_DIM.max(64).max((8.0 * (mean + 1.0)).ceil() as usize)
}

/// `D(R) S(r) |0⟩` with `S(r) = exp[(r/2)(a†² − a²)]` and
/// `D(R) = exp[R(a† − a)]`, squeezing applied first.
///
/// The dimension is doubled (up to [`GUARD_MAX_DIM`]) until the edge-mass
/// guard holds.
pub fn build_squeezed_state(params: SqueezedParams, dim: usize) -> Result<FockVector> {
    if dim < MIN_DIM {
        return domain(format!("truncation dimension must be at least {MIN_DIM}, got {dim}"));
    }
    let mut dim = dim;
    loop {
        let state = evolve(params, dim);
        if state.edge_guard_ok() {
            return Ok(state);
        }
        if dim * 2 > GUARD_MAX_DIM.max(dim) {
            return Err(Error::Convergence {
                dim,
                achieved: state.edge_mass(),
                requested: 1e-3 * state.truncation_deficit(),
            });
        }
        dim *= 2;
    }
}

/// Grows the basis until the edge mass is below `1e-3 · eps`.
pub(crate) fn converged_squeezed_state(
    params: SqueezedParams,
    eps: f64,
    max_dim: usize,
) -> Result<FockVector> {
    let mean = params.mean();
    let spread = mean + 10.0 * params.variance().sqrt() + 20.0;
    let mut dim = default_dim(mean).max(spread.ceil() as usize);
    loop {
        if dim > max_dim {
            let state = evolve(params, max_dim.max(MIN_DIM));
            return Err(Error::Convergence {
                dim: max_dim,
                achieved: state.truncation_deficit(),
                requested: eps,
            });
        }
        let state = build_squeezed_state(params, dim)?;
        if state.edge_mass() <= 1e-3 * eps {
            return Ok(state);
        }
        dim = state.dim() * 2;
    }
}

fn evolve(params: SqueezedParams, dim: usize) -> FockVector {
    let sqrt_n: Vec<f64> = (0..=dim + 1).map(|n| (n as f64).sqrt()).collect();
    let mut v = vec![0.0; dim];
    v[0] = 1.0;

    let r = params.squeezing();
    if r != 0.0 {
        let half_r = 0.5 * r;
        // (a†² v)_n = √(n(n−1)) v_{n−2},  (a² v)_n = √((n+1)(n+2)) v_{n+2}
        let squeeze = |x: &[f64], out: &mut [f64]| {
            for n in 0..dim {
                let up = if n >= 2 { sqrt_n[n] * sqrt_n[n - 1] * x[n - 2] } else { 0.0 };
                let down = if n + 2 < dim { sqrt_n[n + 1] * sqrt_n[n + 2] * x[n + 2] } else { 0.0 };
                out[n] = half_r * (up - down);
            }
        };
        expm_action(squeeze, r.abs() * dim as f64, &mut v);
    }

    let big_r = params.displacement();
    if big_r != 0.0 {
        let displace = |x: &[f64], out: &mut [f64]| {
            for n in 0..dim {
                let up = if n >= 1 { sqrt_n[n] * x[n - 1] } else { 0.0 };
                let down = if n + 1 < dim { sqrt_n[n + 1] * x[n + 1] } else { 0.0 };
                out[n] = big_r * (up - down);
            }
        };
        expm_action(displace, 2.0 * big_r * (dim as f64).sqrt(), &mut v);
    }
    // The exact truncated evolution is orthogonal; only rounding moves the norm.
    let norm = sum_compensated(v.iter().map(|c| c * c)).sqrt();
    v.iter_mut().for_each(|c| *c /= norm);
    FockVector { amplitudes: v }
}

/// Applies `exp(G)` to `v`, where `apply` computes `G x` and `norm_bound`
/// bounds `‖G‖₁`. The exponent is split into `s` steps with `‖G/s‖ ≤ 1`, and
/// each step is a Taylor series truncated once terms drop below round-off.
fn expm_action(apply: impl Fn(&[f64], &mut [f64]), norm_bound: f64, v: &mut [f64]) {
    let steps = norm_bound.ceil().max(1.0) as usize;
    let h = 1.0 / steps as f64;
    let dim = v.len();
    let mut term = vec![0.0; dim];
    let mut scratch = vec![0.0; dim];
    for _ in 0..steps {
        term.copy_from_slice(v);
        let v_norm = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for k in 1..64 {
            apply(&term, &mut scratch);
            let scale = h / k as f64;
            let mut term_norm = 0.0f64;
            for (t, s) in term.iter_mut().zip(&scratch) {
                *t = s * scale;
                term_norm = term_norm.max(t.abs());
            }
            for (x, t) in v.iter_mut().zip(&term) {
                *x += t;
            }
            if term_norm <= 1e-18 * v_norm {
                break;
            }
        }
    }
}

/// Joint detector counts from a simulated 50/50 beam-splitter run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleReport {
    /// Number of occurrences of each detector pair `(n₁, n₂)`.
    pub joint_counts: BTreeMap<(u64, u64), u64>,
    pub n_samples: u64,
    pub seed: u64,
}

impl SampleReport {
    /// Empirical distribution of `m = n₁ − n₂`.
    pub fn difference_histogram(&self) -> BTreeMap<i64, u64> {
        let mut hist = BTreeMap::new();
        for (&(n1, n2), &count) in &self.joint_counts {
            *hist.entry(n1 as i64 - n2 as i64).or_insert(0) += count;
        }
        hist
    }

    /// Empirical distribution of `n₁ + n₂`.
    pub fn sum_histogram(&self) -> BTreeMap<u64, u64> {
        let mut hist = BTreeMap::new();
        for (&(n1, n2), &count) in &self.joint_counts {
            *hist.entry(n1 + n2).or_insert(0) += count;
        }
        hist
    }
}

/// Simulates photon counting behind a lossless 50/50 beam splitter with vacuum
/// in the second port: draw `n` from `d` (conditioned on `n ≤ n_max`), then
/// route each photon independently to either detector.
///
/// Samples are generated in chunks of [`SAMPLE_CHUNK`]. Chunk `c` uses
/// ChaCha8 seeded with `seed` on stream `c`, so the merged counts depend only
/// on `(d, n_samples, seed)` and not on how chunks are scheduled across threads.
pub fn sample_beam_splitter(d: &PhotonDistribution, n_samples: u64, seed: u64) -> Result<SampleReport> {
    if n_samples == 0 {
        return domain("at least one sample is required");
    }
    let mut cdf = Vec::with_capacity(d.probs().len());
    let mut acc = CompensatedSum::new();
    for &p in d.probs() {
        acc.add(p);
        cdf.push(acc.value());
    }
    let total = *cdf.last().expect("distribution is non-empty");
    let n_max = d.n_max();
    let chunks = n_samples.div_ceil(SAMPLE_CHUNK);

    let joint_counts = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let count = SAMPLE_CHUNK.min(n_samples - chunk * SAMPLE_CHUNK);
            let mut local = BTreeMap::new();
            for _ in 0..count {
                let u = rng.random::<f64>() * total;
                let n = cdf.partition_point(|&c| c <= u).min(n_max) as u64;
                let n1 = fair_binomial(&mut rng, n);
                *local.entry((n1, n - n1)).or_insert(0u64) += 1;
            }
            local
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });

    Ok(SampleReport {
        joint_counts,
        n_samples,
        seed,
    })
}

/// Number of heads in `n` fair coin flips, one random bit per photon.
fn fair_binomial(rng: &mut impl RngCore, n: u64) -> u64 {
    let mut ones = 0u64;
    let mut left = n;
    while left >= 64 {
        ones += u64::from(rng.next_u64().count_ones());
        left -= 64;
    }
    if left > 0 {
        ones += u64::from((rng.next_u64() & ((1u64 << left) - 1)).count_ones());
    }
    ones
}

/// Exact joint distribution `P(n₁, n₂) = p_{n₁+n₂} C(n₁+n₂, n₁) / 2^{n₁+n₂}`.
///
/// Binomial rows are generated by the additive recurrence
/// `w(n, k) = ½ [w(n−1, k−1) + w(n−1, k)]`, which shares nothing with the
/// log-space weights used by [`crate::splitter`].
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    /// `rows[n][n₁] = P(n₁, n − n₁)`.
    rows: Vec<Vec<f64>>,
}

pub fn joint_distribution_brute_force<P: ProbabilityVector + ?Sized>(d: &P) -> JointDistribution {
    let probs = d.probabilities();
    let mut rows = Vec::with_capacity(probs.len());
    let mut weights = vec![1.0];
    for (n, &p) in probs.iter().enumerate() {
        if n > 0 {
            let mut next = vec![0.0; n + 1];
            for k in 0..=n {
                let left = if k > 0 { weights[k - 1] } else { 0.0 };
                let right = if k < n { weights[k] } else { 0.0 };
                next[k] = 0.5 * (left + right);
            }
            weights = next;
        }
        rows.push(weights.iter().map(|w| p * w).collect());
    }
    JointDistribution { rows }
}

impl JointDistribution {
    pub fn get(&self, n1: usize, n2: usize) -> f64 {
        self.rows
            .get(n1 + n2)
            .map_or(0.0, |row| row[n1])
    }

    /// Iterates over `(n₁, n₂, P)` for every stored pair.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(n, row)| row.iter().enumerate().map(move |(n1, &p)| (n1, n - n1, p)))
    }

    /// Distribution of `n₁ + n₂`.
    pub fn sum_marginal(&self) -> Vec<f64> {
        self.rows.iter().map(|row| sum_compensated(row.iter().copied())).collect()
    }

    /// Distribution of `m = n₁ − n₂` over `m = −m_max ..= m_max`.
    pub fn difference_marginal(&self) -> Vec<f64> {
        let m_max = self.rows.len() - 1;
        let mut acc = vec![CompensatedSum::new(); 2 * m_max + 1];
        for (n1, n2, p) in self.iter() {
            acc[(m_max + n1) - n2].add(p);
        }
        acc.iter().map(CompensatedSum::value).collect()
    }

    /// `P(n₁ n₂ = 0)`: at most one detector fires.
    pub fn prob_product_zero(&self) -> f64 {
        sum_compensated(self.iter().filter(|(n1, n2, _)| *n1 == 0 || *n2 == 0).map(|(_, _, p)| p))
    }

    /// `⟨n₁ n₂⟩ − ⟨n₁⟩⟨n₂⟩`.
    pub fn covariance(&self) -> f64 {
        let e12 = sum_compensated(self.iter().map(|(a, b, p)| (a * b) as f64 * p));
        let e1 = sum_compensated(self.iter().map(|(a, _, p)| a as f64 * p));
        let e2 = sum_compensated(self.iter().map(|(_, b, p)| b as f64 * p));
        e12 - e1 * e2
    }
}
