use qsba_core::rng::run_trials;
use qsba_core::stats::*;
use rand::Rng;

fn p_s() -> f64 {
    closed_forms().p_success
}

#[test]
fn cdf_agrees_with_sampling() {
    let n = 10_000_000u64;
    for (seed, (l, k)) in [(10u32, 5u32), (5, 3), (21, 17)].into_iter().enumerate() {
        let model = BinomialModel::new(l, p_s()).unwrap();
        let exact = model.cdf(k).unwrap();
        let hits = run_trials(
            seed as u64,
            n,
            0u64,
            |_, rng| {
                let x = (0..l).filter(|_| rng.random_bool(p_s())).count() as u32;
                u64::from(x <= k)
            },
            |a, b| a + b,
        );
        let sigma = (exact * (1.0 - exact) / n as f64).sqrt();
        assert!((hits as f64 / n as f64 - exact).abs() < 4.0 * sigma, "l={l} k={k}");
    }
}

#[test]
fn sandwich_for_every_l_up_to_64() {
    for l in 2..=64 {
        let r = success_bounds(&BinomialModel::new(l, p_s()).unwrap());
        assert!(r.valid, "l={l}");
        assert!(r.sandwich_holds(), "l={l}: {r:?}");
    }
}

#[test]
fn bounds_at_ten_copies() {
    let r = success_bounds(&BinomialModel::new(10, p_s()).unwrap());
    // Independent evaluation of both bounds.
    let x = 0.5;
    let d = x * (x / p_s()).ln() + (1.0 - x) * ((1.0 - x) / (1.0 - p_s())).ln();
    let lower = 1.0 - (-10.0 * d).exp();
    let upper = 1.0 - (-10.0 * d).exp() / (8.0 * 10.0 * x * (1.0 - x)).sqrt();
    assert!((r.lower_bound - lower).abs() < 1e-12);
    assert!((r.upper_bound - upper).abs() < 1e-12);
    for (got, want) in [(r.lower_bound, 0.9687), (r.exact_success, 0.9911), (r.upper_bound, 0.9930)] {
        assert!((got - want).abs() < 1e-3);
    }
}

#[test]
fn large_l_is_nearly_certain() {
    let m = BinomialModel::new(50, p_s()).unwrap();
    assert!(m.survival(26).unwrap() > 1.0 - 1e-7);
}

#[test]
fn whole_bid_power_of_majority_success() {
    let cf = closed_forms();
    let per_bit = cf.majority_success(10).unwrap();
    assert!((ClosedForms::whole_bid(per_bit, 8) - per_bit.powi(8)).abs() < 1e-15);
    assert!((cf.p_success + cf.p_error - 1.0).abs() < 1e-15);
}
