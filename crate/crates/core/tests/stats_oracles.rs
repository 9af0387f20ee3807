//! Test statistics checked against independent computations.

use ordlab_core::lab::stats::{chi2_sf, chi_square_gof, chi_square_two_sample, kolmogorov_sf, ks_uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `Γ(a)` for `a` a positive multiple of 1/2, by exact recursion.
fn gamma_half_integer(a: f64) -> f64 {
    let mut x = if a.fract() == 0.0 { 1.0 } else { 0.5 };
    let mut g = if x == 1.0 { 1.0 } else { std::f64::consts::PI.sqrt() };
    while x < a - 1e-9 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Upper tail of chi-square with `k` degrees of freedom, `1 - P(k/2, x/2)`,
/// with the regularized lower incomplete gamma from its power series.
fn chi2_sf_series(x: f64, k: usize) -> f64 {
    let a = k as f64 / 2.0;
    let z = x / 2.0;
    let mut term = 1.0 / a;
    let mut sum = term;
    for n in 1..2000 {
        term *= z / (a + n as f64);
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    let lower = sum * (-z + a * z.ln()).exp() / gamma_half_integer(a);
    1.0 - lower
}

#[test]
fn chi2_sf_matches_series() {
    for k in 1..=30 {
        for &x in &[0.05, 0.5, 1.0, 2.5, 5.0, 10.0, 20.0, 35.0] {
            let expected = chi2_sf_series(x, k);
            let got = chi2_sf(x, k);
            assert!((got - expected).abs() < 1e-9, "k={k} x={x}: {got} vs {expected}");
        }
    }
}

fn pearson_2xk(a: &[u64], b: &[u64]) -> f64 {
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    let n = (na + nb) as f64;
    let mut stat = 0.0;
    for i in 0..a.len() {
        let col = (a[i] + b[i]) as f64;
        for (o, r) in [(a[i], na), (b[i], nb)] {
            let e = r as f64 * col / n;
            stat += (o as f64 - e).powi(2) / e;
        }
    }
    stat
}

#[test]
fn canned_contingency_tables() {
    // statistics worked by hand: (a, b, chi2, dof)
    let tables: [(&[u64], &[u64], f64, usize); 3] = [
        (&[10, 20], &[20, 10], 20.0 / 3.0, 1),
        (&[30, 30, 40], &[30, 30, 40], 0.0, 2),
        (&[50, 30, 20], &[30, 30, 40], 35.0 / 3.0, 2),
    ];
    for (a, b, stat, dof) in tables {
        assert!((pearson_2xk(a, b) - stat).abs() < 1e-12);
        let o = chi_square_two_sample(a, b);
        assert_eq!(o.dof, Some(dof));
        assert!((o.statistic - stat).abs() < 1e-12, "{} vs {stat}", o.statistic);
        assert!((o.p_value - chi2_sf_series(stat, dof)).abs() < 1e-9);
    }
    // chi2(2) tail is exp(-x/2)
    let o = chi_square_two_sample(&[50, 30, 20], &[30, 30, 40]);
    assert!((o.p_value - (-35.0f64 / 6.0).exp()).abs() < 1e-12);
}

#[test]
fn two_sample_p_value_matches_simulation() {
    let a = [40u64, 35, 25];
    let b = [30u64, 35, 35];
    let observed = chi_square_two_sample(&a, &b);
    let total: u64 = a.iter().chain(&b).sum();
    let pooled: Vec<f64> = (0..3).map(|i| (a[i] + b[i]) as f64 / total as f64).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut draw = |m: u64| {
        let mut c = [0u64; 3];
        for _ in 0..m {
            let u: f64 = rng.random();
            let i = if u < pooled[0] { 0 } else if u < pooled[0] + pooled[1] { 1 } else { 2 };
            c[i] += 1;
        }
        c
    };
    let sims = 20_000;
    let exceed = (0..sims)
        .filter(|_| {
            let (x, y) = (draw(100), draw(100));
            chi_square_two_sample(&x, &y).statistic >= observed.statistic - 1e-12
        })
        .count();
    let p = exceed as f64 / sims as f64;
    let se = (p * (1.0 - p) / sims as f64).sqrt();
    assert!((p - observed.p_value).abs() < 4.0 * se + 0.01, "simulated {p}, asymptotic {}", observed.p_value);
}

#[test]
fn gof_statistic_by_hand() {
    let o = chi_square_gof(&[30, 20, 25, 25], &[0.25; 4]);
    // (25 + 25 + 0 + 0) / 25
    assert!((o.statistic - 2.0).abs() < 1e-12);
    assert!((o.p_value - chi2_sf_series(2.0, 3)).abs() < 1e-9);
}

#[test]
fn kolmogorov_tail_known_values() {
    // classical critical values of the limiting distribution
    assert!((kolmogorov_sf(1.3581) - 0.05).abs() < 1e-4);
    assert!((kolmogorov_sf(1.6276) - 0.01).abs() < 1e-4);
    let grid: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
    let o = ks_uniform(&grid);
    assert!((o.statistic - 0.0005).abs() < 1e-12);
    assert!(o.p_value > 0.99);
}
