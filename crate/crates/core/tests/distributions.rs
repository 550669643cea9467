use photostat::numeric::sum_compensated;
use photostat::{
    coherent_distribution, gaussian_partial_sum, mixture, moments, number_state_distribution,
    order_profile, squeezed_distribution, thermal_distribution, thermal_partial_sum_closed_form,
    MixtureSpec, PhotonDistribution, SqueezedParams,
};
use proptest::prelude::*;

/// Error-free sum in double-double arithmetic.
fn sum_double_double(terms: &[f64]) -> (f64, f64) {
    let (mut hi, mut lo) = (0.0f64, 0.0f64);
    for &x in terms {
        let s = hi + x;
        let bp = s - hi;
        let err = (hi - (s - bp)) + (x - bp);
        hi = s;
        lo += err;
    }
    let s = hi + lo;
    (s, lo - (s - hi))
}

/// Poisson weights from `ln(k!) = Σ ln j` at the mode, then the ratio
/// recurrence `p_{n±1} / p_n` outwards.
fn poisson_by_recurrence(mean: f64, n_max: usize) -> Vec<f64> {
    let mode = mean.floor() as usize;
    let ln_fact = sum_compensated((1..=mode).map(|j| (j as f64).ln()));
    let mut p = vec![0.0; n_max + 1];
    p[mode] = (-mean + mode as f64 * mean.ln() - ln_fact).exp();
    for n in (0..mode).rev() {
        p[n] = p[n + 1] * (n + 1) as f64 / mean;
    }
    for n in mode + 1..=n_max {
        p[n] = p[n - 1] * mean / n as f64;
    }
    p
}

/// Maclaurin series of erf.
fn erf_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    for n in 1..200 {
        term *= -x * x / n as f64;
        let next = term / (2 * n + 1) as f64;
        sum += next;
        if next.abs() < 1e-18 {
            break;
        }
    }
    sum * 2.0 / std::f64::consts::PI.sqrt()
}

fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    let len = a.len().max(b.len());
    0.5 * (0..len)
        .map(|i| (a.get(i).unwrap_or(&0.0) - b.get(i).unwrap_or(&0.0)).abs())
        .sum::<f64>()
}

#[test]
fn coherent_unit_mean_values() {
    let d = coherent_distribution(1.0, 1e-12).unwrap();
    let e = (-1f64).exp();
    assert!((d.get(0) - e).abs() < 1e-16);
    assert!((d.get(1) - e).abs() < 1e-16);
    let m = d.moments();
    assert!((m.mean - 1.0).abs() < 1e-11 && (m.variance - 1.0).abs() < 1e-10);
}

#[test]
fn coherent_hundred_matches_extended_precision_oracle() {
    let d = coherent_distribution(100.0, 1e-12).unwrap();
    assert!(d.probs().iter().all(|p| p.is_finite()));
    let oracle = poisson_by_recurrence(100.0, d.n_max());
    for (n, (&p, &q)) in d.probs().iter().zip(&oracle).enumerate() {
        if q > 1e-290 {
            assert!((p - q).abs() <= 1e-11 * q, "n = {n}: {p} vs {q}");
        }
    }
    let (hi, lo) = sum_double_double(d.probs());
    let mass = hi + lo;
    assert!((1.0 - 1e-12..=1.0 + 1e-14).contains(&mass), "mass {mass}");
    assert!(d.tail_bound() <= 1e-12);
}

#[test]
fn thermal_tail_and_truncation() {
    let d = thermal_distribution(10.0, 1e-12).unwrap();
    assert!(d.n_max() >= 289);
    let ratio: f64 = 10.0 / 11.0;
    assert!(ratio.powi(d.n_max() as i32 + 1) <= 1e-12);
    assert!(ratio.powi(d.n_max() as i32) > 1e-12);
}

#[test]
fn thermal_partial_sums_match_closed_form() {
    for mean in [0.1, 1.0, 1.5, 10.0, 100.0] {
        let d = thermal_distribution(mean, 1e-12).unwrap();
        let profile = order_profile(&d);
        for n in 0..=d.n_max() {
            let exact = thermal_partial_sum_closed_form(mean, n as u64).unwrap();
            let got = profile.partial_sum(n);
            assert!((got - exact).abs() <= 1e-12, "mean {mean}, N {n}: {got} vs {exact}");
        }
    }
    assert_eq!(thermal_partial_sum_closed_form(1.0, 0).unwrap(), 0.5);
    assert_eq!(thermal_partial_sum_closed_form(1.0, 1).unwrap(), 0.75);
    let s57 = 1.0 - (10.0f64 / 11.0).powi(58);
    assert!((thermal_partial_sum_closed_form(10.0, 57).unwrap() - s57).abs() < 1e-15);
}

#[test]
fn gaussian_partial_sum_against_series() {
    let got = gaussian_partial_sum(10.0, 10.0).unwrap();
    let oracle = erf_series(1.0 / 2f64.sqrt());
    assert!((got - oracle).abs() < 1e-14, "{got} vs {oracle}");
    assert!((got - 0.682689).abs() < 1e-6);
    for x in [0.1, 0.5, 1.3, 2.7] {
        let got = gaussian_partial_sum(1.0, x * 2f64.sqrt()).unwrap();
        assert!((got - erf_series(x)).abs() < 1e-14, "x = {x}: {got} vs {}", erf_series(x));
    }
}

#[test]
fn gaussian_partial_sum_is_monotone() {
    let mut prev = 0.0;
    for i in 0..200 {
        let s = gaussian_partial_sum(7.0, i as f64 * 0.5).unwrap();
        assert!(s >= prev);
        prev = s;
    }
    assert!(prev > 1.0 - 1e-15);
}

/// With the upper limit `N/(√2 Δn)` the Gaussian form covers about `2N`
/// outcomes, while `S_N` counts `N + 1`. Evaluating it at half width,
/// `(N + 1)/2`, lines up with the Poisson profile; the literal index does not.
#[test]
fn gaussian_profile_tracks_large_mean_poisson() {
    for mean in [100.0, 400.0, 1000.0] {
        let profile = order_profile(&coherent_distribution(mean, 1e-12).unwrap());
        let dn = f64::sqrt(mean);
        let mut half_width_gap = 0.0f64;
        let mut literal_gap = 0.0f64;
        for n in 0..profile.len() {
            let s = profile.partial_sum(n);
            half_width_gap = half_width_gap.max((s - gaussian_partial_sum(dn, 0.5 * (n as f64 + 1.0)).unwrap()).abs());
            literal_gap = literal_gap.max((s - gaussian_partial_sum(dn, n as f64).unwrap()).abs());
        }
        // Measured: 4.2e-4, 1.0e-4, 4.2e-5 (half width); 0.29 to 0.31 (literal).
        assert!(half_width_gap < 1e-3, "mean {mean}: {half_width_gap}");
        assert!(literal_gap > 0.25, "mean {mean}: {literal_gap}");
    }
}

#[test]
fn mixture_state_of_single_photon_and_thermal() {
    let spec = MixtureSpec {
        weight: 0.9,
        first: number_state_distribution(1),
        second: thermal_distribution(11.0, 1e-12).unwrap(),
    };
    let d = mixture(&spec).unwrap();
    assert!((0.905..=0.910).contains(&d.get(1)));
    let m = d.moments();
    assert!((m.mean - 2.0).abs() < 1e-9);
    let ratio = m.variance / m.mean;
    assert!((ratio - 11.1).abs() < 1e-7);

    let degenerate = mixture(&MixtureSpec { weight: 1.0, ..spec.clone() }).unwrap();
    assert_eq!(degenerate.get(1), 1.0);
    assert!(degenerate.probs().iter().enumerate().all(|(n, &p)| n == 1 || p == 0.0));
    assert!(mixture(&MixtureSpec { weight: 1.5, ..spec }).is_err());
}

#[test]
fn squeezed_vacuum_has_even_support() {
    let r = f64::sqrt(6.0).asinh();
    let d = squeezed_distribution(SqueezedParams::new(0.0, r).unwrap(), 1e-12).unwrap();
    let m = d.moments();
    assert!((m.mean - 6.0).abs() < 1e-8 && (m.variance - 84.0).abs() < 1e-6 * 84.0);
    assert!(d.probs().iter().skip(1).step_by(2).all(|&p| p <= 1e-12));
}

#[test]
fn displaced_vacuum_is_coherent() {
    let d = squeezed_distribution(SqueezedParams::new(6f64.sqrt(), 0.0).unwrap(), 1e-12).unwrap();
    let c = coherent_distribution(6.0, 1e-12).unwrap();
    assert!(total_variation(d.probs(), c.probs()) < 1e-10);
}

#[test]
fn vacuum_parameters_give_vacuum() {
    let d = squeezed_distribution(SqueezedParams::new(0.0, 0.0).unwrap(), 1e-12).unwrap();
    assert!((d.get(0) - 1.0).abs() < 1e-15);
    assert!(d.probs()[1..].iter().all(|&p| p < 1e-15));
}

#[test]
fn invalid_inputs_are_domain_errors() {
    assert!(coherent_distribution(f64::NAN, 1e-12).is_err());
    assert!(coherent_distribution(-1.0, 1e-12).is_err());
    assert!(thermal_distribution(0.0, 1e-12).is_err());
    assert!(thermal_distribution(1.0, 2.0).is_err());
    assert!(gaussian_partial_sum(0.0, 1.0).is_err());
    assert!(thermal_partial_sum_closed_form(-2.0, 3).is_err());
    assert!(PhotonDistribution::new(vec![0.5, -0.1, 0.6], 0.0, "bad").is_err());
    assert!(PhotonDistribution::new(vec![0.5, 0.4], 0.0, "short").is_err());
}

fn zoo() -> Vec<PhotonDistribution> {
    vec![
        coherent_distribution(0.5, 1e-12).unwrap(),
        coherent_distribution(100.0, 1e-12).unwrap(),
        thermal_distribution(0.1, 1e-12).unwrap(),
        thermal_distribution(100.0, 1e-12).unwrap(),
        number_state_distribution(9),
        squeezed_distribution(SqueezedParams::new(2.0, -0.7).unwrap(), 1e-12).unwrap(),
        squeezed_distribution(SqueezedParams::new(1.0, 1.2).unwrap(), 1e-12).unwrap(),
    ]
}

#[test]
fn normalization_within_budget() {
    for d in zoo() {
        let mass = sum_compensated(d.probs().iter().copied());
        assert!(mass >= 1.0 - d.tail_bound() - 1e-15 && mass <= 1.0 + 1e-12, "{}: {mass}", d.label());
        assert!(d.tail_bound() <= 1e-12, "{}", d.label());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn squeezed_moments_follow_parameters(r_disp in 0.0f64..4.0, r_sq in -1.5f64..1.5) {
        let params = SqueezedParams::new(r_disp, r_sq).unwrap();
        let d = squeezed_distribution(params, 1e-12).unwrap();
        let m = moments(&d);
        let (mean, var) = (params.mean(), params.variance());
        prop_assert!((m.mean - mean).abs() <= 1e-6 * mean.max(1e-3), "{params}: mean {} vs {mean}", m.mean);
        prop_assert!((m.variance - var).abs() <= 1e-6 * var.max(1e-3), "{params}: var {} vs {var}", m.variance);
    }

    #[test]
    fn squeezed_vacuum_parity(r_sq in -1.5f64..1.5) {
        let d = squeezed_distribution(SqueezedParams::new(0.0, r_sq).unwrap(), 1e-12).unwrap();
        prop_assert!(d.probs().iter().skip(1).step_by(2).all(|&p| p <= 1e-12));
    }

    #[test]
    fn thermal_moments(mean in 0.05f64..50.0) {
        let m = thermal_distribution(mean, 1e-13).unwrap().moments();
        let var = mean * (mean + 1.0);
        prop_assert!((m.mean - mean).abs() <= 1e-9 * (1.0 + mean));
        prop_assert!((m.variance - var).abs() <= 1e-9 * (1.0 + var) + 2.0 * m.truncation_error);
    }
}
