//! Goodness-of-fit, homogeneity and Kolmogorov–Smirnov tests.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Minimum expected count for the chi-square approximation.
pub const EXPECTED_FLOOR: f64 = 5.0;

/// Largest outcome space enumerated by the exact multinomial test.
const EXACT_LIMIT: u128 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub name: String,
    pub method: String,
    pub statistic: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dof: Option<usize>,
    /// `None` for deterministic checks that have no sampling distribution.
    pub p_value: Option<f64>,
    pub significance: f64,
    pub pass: bool,
    pub sample_sizes: Vec<u64>,
    pub seeds: Vec<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl TestReport {
    /// A check with no sampling distribution: `pass` is decided by the caller.
    pub fn deterministic(name: &str, method: &str, statistic: f64, pass: bool) -> Self {
        TestReport {
            name: name.to_string(),
            method: method.to_string(),
            statistic,
            dof: None,
            p_value: None,
            significance: 0.0,
            pass,
            sample_sizes: Vec::new(),
            seeds: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn from_outcome(name: &str, o: TestOutcome, significance: f64) -> Self {
        TestReport {
            name: name.to_string(),
            method: o.method.to_string(),
            statistic: o.statistic,
            dof: o.dof,
            p_value: Some(o.p_value),
            significance,
            pass: o.p_value >= significance,
            sample_sizes: Vec::new(),
            seeds: Vec::new(),
            notes: o.notes,
        }
    }
}

/// Bonferroni-corrected verdict over a family of tests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub name: String,
    pub tests: usize,
    pub significance: f64,
    pub corrected_significance: f64,
    pub min_p_value: Option<f64>,
    pub pass: bool,
    pub reports: Vec<TestReport>,
}

impl FamilyReport {
    pub fn bonferroni(name: &str, significance: f64, mut reports: Vec<TestReport>) -> Self {
        let m = reports.len().max(1);
        let corrected = significance / m as f64;
        for r in reports.iter_mut() {
            r.significance = corrected;
            if let Some(p) = r.p_value {
                r.pass = p >= corrected;
            }
        }
        let min_p = reports
            .iter()
            .filter_map(|r| r.p_value)
            .min_by(f64::total_cmp);
        FamilyReport {
            name: name.to_string(),
            tests: reports.len(),
            significance,
            corrected_significance: corrected,
            min_p_value: min_p,
            pass: reports.iter().all(|r| r.pass),
            reports,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestOutcome {
    pub method: &'static str,
    pub statistic: f64,
    pub dof: Option<usize>,
    pub p_value: f64,
    pub notes: Vec<String>,
}

impl TestOutcome {
    pub fn into_report(self, name: &str, significance: f64) -> TestReport {
        TestReport::from_outcome(name, self, significance)
    }
}

pub fn chi2_sf(x: f64, dof: usize) -> f64 {
    if dof == 0 {
        return 1.0;
    }
    if x <= 0.0 {
        return 1.0;
    }
    ChiSquared::new(dof as f64)
        .map(|d| d.sf(x))
        .unwrap_or(f64::NAN)
        .clamp(0.0, 1.0)
}

fn ln_factorial(n: u64) -> f64 {
    (1..=n).map(|i| (i as f64).ln()).sum()
}

fn compositions(n: u64, k: usize) -> u128 {
    // C(n + k - 1, k - 1), saturating
    let mut c: u128 = 1;
    for i in 0..(k as u128).saturating_sub(1) {
        c = c.saturating_mul(n as u128 + 1 + i) / (i + 1);
        if c > EXACT_LIMIT * 1000 {
            return u128::MAX;
        }
    }
    c
}

/// Exact multinomial test: total probability of outcomes no more likely
/// than the observed one.
pub fn exact_multinomial(observed: &[u64], probs: &[f64]) -> f64 {
    let n: u64 = observed.iter().sum();
    let lnf: Vec<f64> = (0..=n).map(ln_factorial).collect();
    let ln_p: Vec<f64> = probs.iter().map(|p| p.ln()).collect();
    let ln_prob = |x: &[u64]| -> f64 {
        let mut s = lnf[n as usize];
        for (i, &c) in x.iter().enumerate() {
            if c > 0 {
                if probs[i] == 0.0 {
                    return f64::NEG_INFINITY;
                }
                s += c as f64 * ln_p[i] - lnf[c as usize];
            }
        }
        s
    };
    let obs = ln_prob(observed);
    let mut total = 0.0;
    let mut cur = vec![0u64; observed.len()];
    fn go(
        i: usize,
        left: u64,
        cur: &mut Vec<u64>,
        f: &dyn Fn(&[u64]) -> f64,
        obs: f64,
        total: &mut f64,
    ) {
        if i + 1 == cur.len() {
            cur[i] = left;
            let lp = f(cur);
            if lp <= obs + 1e-9 {
                *total += lp.exp();
            }
            return;
        }
        for c in 0..=left {
            cur[i] = c;
            go(i + 1, left - c, cur, f, obs, total);
        }
    }
    if observed.is_empty() {
        return 1.0;
    }
    go(0, n, &mut cur, &ln_prob, obs, &mut total);
    total.clamp(0.0, 1.0)
}

/// Group consecutive cells until every group's expected count reaches the
/// floor; a short tail joins the last group.
fn pool_cells(expected: &[f64]) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut cur = Vec::new();
    let mut acc = 0.0;
    for (i, &e) in expected.iter().enumerate() {
        cur.push(i);
        acc += e;
        if acc >= EXPECTED_FLOOR {
            groups.push(std::mem::take(&mut cur));
            acc = 0.0;
        }
    }
    if !cur.is_empty() {
        match groups.last_mut() {
            Some(last) => last.extend(cur),
            None => groups.push(cur),
        }
    }
    groups
}

/// Pearson goodness-of-fit of counts against cell probabilities.
pub fn chi_square_gof(observed: &[u64], probs: &[f64]) -> TestOutcome {
    let n: u64 = observed.iter().sum();
    let expected: Vec<f64> = probs.iter().map(|p| p * n as f64).collect();
    let mut notes = Vec::new();
    let zero_violation = observed
        .iter()
        .zip(probs)
        .any(|(&o, &p)| p == 0.0 && o > 0);
    if zero_violation {
        return TestOutcome {
            method: "chi-square",
            statistic: f64::INFINITY,
            dof: None,
            p_value: 0.0,
            notes: vec!["count observed in a zero-probability cell".into()],
        };
    }
    let support: Vec<usize> = (0..probs.len()).filter(|&i| probs[i] > 0.0).collect();
    if support.iter().all(|&i| expected[i] >= EXPECTED_FLOOR) {
        let stat = chi_stat(support.iter().map(|&i| (observed[i] as f64, expected[i])));
        let dof = support.len().saturating_sub(1);
        return TestOutcome {
            method: "chi-square",
            statistic: stat,
            dof: Some(dof),
            p_value: chi2_sf(stat, dof),
            notes,
        };
    }
    if compositions(n, support.len()) <= EXACT_LIMIT {
        let obs: Vec<u64> = support.iter().map(|&i| observed[i]).collect();
        let pr: Vec<f64> = support.iter().map(|&i| probs[i]).collect();
        return TestOutcome {
            method: "exact-multinomial",
            statistic: f64::NAN,
            dof: None,
            p_value: exact_multinomial(&obs, &pr),
            notes,
        };
    }
    let groups = pool_cells(&support.iter().map(|&i| expected[i]).collect::<Vec<_>>());
    notes.push(format!(
        "pooled {} cells into {} groups to reach expected count {EXPECTED_FLOOR}",
        support.len(),
        groups.len()
    ));
    let stat = chi_stat(groups.iter().map(|g| {
        (
            g.iter().map(|&j| observed[support[j]] as f64).sum(),
            g.iter().map(|&j| expected[support[j]]).sum(),
        )
    }));
    let dof = groups.len().saturating_sub(1);
    TestOutcome {
        method: "chi-square",
        statistic: stat,
        dof: Some(dof),
        p_value: chi2_sf(stat, dof),
        notes,
    }
}

fn chi_stat(cells: impl Iterator<Item = (f64, f64)>) -> f64 {
    cells
        .filter(|(_, e)| *e > 0.0)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum()
}

/// Chi-square test that two count vectors come from the same distribution.
/// Empty columns are dropped; columns with small expected counts are pooled.
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> TestOutcome {
    assert_eq!(a.len(), b.len());
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    let n = (na + nb) as f64;
    let mut notes = Vec::new();
    if na == 0 || nb == 0 {
        return TestOutcome {
            method: "chi-square-homogeneity",
            statistic: 0.0,
            dof: Some(0),
            p_value: 1.0,
            notes: vec!["an empty sample".into()],
        };
    }
    let cols: Vec<usize> = (0..a.len()).filter(|&i| a[i] + b[i] > 0).collect();
    let min_row = na.min(nb) as f64;
    let (big, small): (Vec<usize>, Vec<usize>) = cols
        .iter()
        .partition(|&&i| (a[i] + b[i]) as f64 * min_row / n >= EXPECTED_FLOOR);
    let mut groups: Vec<Vec<usize>> = big.into_iter().map(|i| vec![i]).collect();
    if !small.is_empty() {
        notes.push(format!("pooled {} low-count columns", small.len()));
        let pooled_total: u64 = small.iter().map(|&i| a[i] + b[i]).sum();
        if pooled_total as f64 * min_row / n >= EXPECTED_FLOOR || groups.is_empty() {
            groups.push(small);
        } else {
            // join the smallest remaining column
            let j = (0..groups.len())
                .min_by_key(|&j| groups[j].iter().map(|&i| a[i] + b[i]).sum::<u64>())
                .expect("nonempty");
            groups[j].extend(small);
        }
    }
    let mut stat = 0.0;
    for g in &groups {
        let ca: u64 = g.iter().map(|&i| a[i]).sum();
        let cb: u64 = g.iter().map(|&i| b[i]).sum();
        let col = (ca + cb) as f64;
        for (obs, row) in [(ca, na), (cb, nb)] {
            let e = row as f64 * col / n;
            stat += (obs as f64 - e).powi(2) / e;
        }
    }
    let dof = groups.len().saturating_sub(1);
    TestOutcome {
        method: "chi-square-homogeneity",
        statistic: stat,
        dof: Some(dof),
        p_value: chi2_sf(stat, dof),
        notes,
    }
}

/// Kolmogorov distribution tail `P(K > lambda)`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let mut s = 0.0;
    for j in 1..=100 {
        let term = (-2.0 * (j * j) as f64 * lambda * lambda).exp();
        s += if j % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// One-sample KS test against `U(0, 1)`.
pub fn ks_uniform(samples: &[f64]) -> TestOutcome {
    let mut x = samples.to_vec();
    x.sort_by(f64::total_cmp);
    let n = x.len() as f64;
    let d = x
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let v = v.clamp(0.0, 1.0);
            ((i + 1) as f64 / n - v).max(v - i as f64 / n)
        })
        .fold(0.0, f64::max);
    let sn = n.sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    TestOutcome {
        method: "kolmogorov-smirnov",
        statistic: d,
        dof: None,
        p_value: if x.is_empty() { 1.0 } else { kolmogorov_sf(lambda) },
        notes: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi2_known_values() {
        // median of chi2(2) is 2 ln 2
        assert!((chi2_sf(2.0 * 2f64.ln(), 2) - 0.5).abs() < 1e-12);
        assert!((chi2_sf(3.841458820694124, 1) - 0.05).abs() < 1e-9);
        assert_eq!(chi2_sf(1.0, 0), 1.0);
    }

    #[test]
    fn gof_paths() {
        let flat = [0.25; 4];
        let o = chi_square_gof(&[250, 250, 250, 250], &flat);
        assert_eq!(o.method, "chi-square");
        assert!((o.p_value - 1.0).abs() < 1e-12);
        let o = chi_square_gof(&[3, 0, 0, 0], &flat);
        assert_eq!(o.method, "exact-multinomial");
        // P(all three in one given cell) summed over outcomes at most as likely
        assert!((o.p_value - 4.0 / 64.0).abs() < 1e-12);
        let o = chi_square_gof(&[1, 0], &[0.0, 1.0]);
        assert_eq!(o.p_value, 0.0);
    }

    #[test]
    fn pooling_for_many_cells() {
        let probs = vec![1.0 / 720.0; 720];
        let mut obs = vec![0u64; 720];
        for (i, o) in obs.iter_mut().enumerate().take(700) {
            *o = (i % 3) as u64;
        }
        let o = chi_square_gof(&obs, &probs);
        assert!(!o.notes.is_empty());
        assert!(o.dof.unwrap() < 719);
    }

    #[test]
    fn two_sample_basics() {
        let o = chi_square_two_sample(&[500, 500, 0], &[490, 510, 0]);
        assert_eq!(o.dof, Some(1));
        assert!(o.p_value > 0.5);
        let o = chi_square_two_sample(&[900, 100], &[100, 900]);
        assert!(o.p_value < 1e-100);
        let o = chi_square_two_sample(&[1000, 1, 0, 2], &[1000, 0, 1, 1]);
        assert!(o.notes.iter().any(|n| n.contains("pooled")));
    }

    #[test]
    fn ks_behaviour() {
        let grid: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        assert!(ks_uniform(&grid).p_value > 0.99);
        let skewed: Vec<f64> = grid.iter().map(|x| x * x).collect();
        assert!(ks_uniform(&skewed).p_value < 1e-10);
        assert!((kolmogorov_sf(1.3581) - 0.05).abs() < 1e-3);
    }

    #[test]
    fn bonferroni_family() {
        let mk = |p: f64| TestOutcome {
            method: "x",
            statistic: 0.0,
            dof: None,
            p_value: p,
            notes: vec![],
        }
        .into_report("t", 0.05);
        let f = FamilyReport::bonferroni("fam", 0.05, vec![mk(0.02), mk(0.5)]);
        assert_eq!(f.corrected_significance, 0.025);
        assert!(!f.pass);
        let f = FamilyReport::bonferroni("fam", 0.05, vec![mk(0.03), mk(0.5)]);
        assert!(f.pass);
        assert_eq!(f.min_p_value, Some(0.03));
    }
}
