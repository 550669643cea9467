//! Log-space special functions and compensated summation.
//!
//! Poisson and binomial weights are evaluated with the saddle-point
//! decomposition `ln f = -stirlerr - bd0 - ln sqrt(2 pi k)` so that no large
//! log-factorials are ever subtracted from each other. Relative accuracy of the
//! resulting probabilities stays near machine precision for arguments in the
//! thousands.

use std::f64::consts::PI;

/// `ln(n!) - [(n + 1/2) ln n - n + ln sqrt(2 pi)]` for n = 0..=15.
#[allow(clippy::excessive_precision)]
const STIRLERR_TABLE: [f64; 16] = [
    0.0,
    8.106_146_679_532_725_822e-2,
    4.134_069_595_540_929_409_4e-2,
    2.767_792_568_499_833_914_9e-2,
    2.079_067_210_376_509_311_2e-2,
    1.664_469_118_982_119_216_3e-2,
    1.387_612_882_307_074_799_9e-2,
    1.189_670_994_589_177_009_5e-2,
    1.041_126_526_197_209_649_7e-2,
    9.255_462_182_712_732_917_7e-3,
    8.330_563_433_362_871_256_5e-3,
    7.573_675_487_951_840_795e-3,
    6.942_840_107_209_529_865_7e-3,
    6.408_994_188_004_207_068_4e-3,
    5.951_370_112_758_847_735_6e-3,
    5.554_733_551_962_801_371e-3,
];

/// Error of Stirling's approximation to `ln(n!)`.
pub fn stirlerr(n: u64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if let Some(&v) = STIRLERR_TABLE.get(n as usize) {
        return v;
    }
    let n = n as f64;
    let nn = n * n;
    if n > 500.0 {
        (S0 - S1 / nn) / n
    } else if n > 80.0 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if n > 35.0 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

/// Deviance term `x ln(x / np) + np - x`, computed without cancellation when
/// `x` is close to `np`.
pub fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let mut v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let s1 = s + ej / f64::from(2 * j + 1);
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / np).ln() + np - x
    }
}

/// `ln(e^{-mean} mean^k / k!)`.
pub fn ln_poisson_pmf(k: u64, mean: f64) -> f64 {
    if k == 0 {
        return -mean;
    }
    let kf = k as f64;
    -stirlerr(k) - bd0(kf, mean) - 0.5 * (2.0 * PI * kf).ln()
}

/// `ln(C(n, k) / 2^n)`, the log-probability of `k` successes in `n` fair trials.
pub fn ln_binomial_half_pmf(k: u64, n: u64) -> f64 {
    assert!(k <= n, "k = {k} exceeds n = {n}");
    // Evaluating on the lower half keeps the result exactly symmetric.
    let k = k.min(n - k);
    if k == 0 {
        return -(n as f64) * std::f64::consts::LN_2;
    }
    let (nf, kf) = (n as f64, k as f64);
    let half = 0.5 * nf;
    let lc = stirlerr(n) - stirlerr(k) - stirlerr(n - k) - bd0(kf, half) - bd0(nf - kf, half);
    lc - 0.5 * (2.0 * PI * kf * (nf - kf) / nf).ln()
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of an iterator of terms.
pub fn sum_compensated<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    terms.into_iter().collect::<CompensatedSum>().value()
}
