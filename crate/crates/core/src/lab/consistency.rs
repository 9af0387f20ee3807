//! Consistency and uniformity checks over induced subgraphs.

use std::collections::BTreeMap;

use rand::Rng;
use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use super::distribution::{OrderingDistribution, estimate_distributions};
use super::perm::{MAX_TUPLE, factorial};
use super::stats::{FamilyReport, TestReport, chi_square_gof, chi_square_two_sample};
use crate::error::{Error, Result};
use crate::graph::{Graph, canonical_form, isomorphisms};
use crate::rng::stream;
use crate::sampler::PreparedSampler;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabOptions {
    pub k_max: usize,
    pub samples: u64,
    pub significance: f64,
    pub seed: u64,
    /// Upper bound on (pair, isomorphism) tests; a seeded subset is kept
    /// beyond it.
    pub max_tests: usize,
    /// Upper bound on k-subsets per k; a seeded sample is drawn beyond it.
    pub max_subsets: usize,
}

impl Default for LabOptions {
    fn default() -> Self {
        LabOptions {
            k_max: 3,
            samples: 100_000,
            significance: 1e-3,
            seed: 0,
            max_tests: 2000,
            max_subsets: 20_000,
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k as u128).fold(1u128, |c, i| c * (n as u128 - i) / (i + 1))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            go(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All sorted `k`-subsets of `0..n`, or a seeded sample of `max` distinct
/// ones when there are more. The flag reports sampling.
pub fn k_subsets(n: usize, k: usize, max: usize, seed: u64) -> (Vec<Vec<usize>>, bool) {
    if binomial(n, k) <= max as u128 {
        return (combinations(n, k), false);
    }
    let mut rng = stream(seed, "subsets", k as u64);
    let mut seen = std::collections::BTreeSet::new();
    while seen.len() < max {
        let mut s = sample(&mut rng, n, k).into_vec();
        s.sort_unstable();
        seen.insert(s);
    }
    (seen.into_iter().collect(), true)
}

struct PairTest {
    rep: Vec<usize>,
    other: Vec<usize>,
    sigma: Vec<usize>,
}

fn check_options(opts: &LabOptions) -> Result<()> {
    if opts.k_max < 2 || opts.k_max > MAX_TUPLE {
        return Err(Error::InvalidArgument(format!(
            "k_max must lie in 2..={MAX_TUPLE}, got {}",
            opts.k_max
        )));
    }
    if !(opts.significance > 0.0 && opts.significance < 1.0) {
        return Err(Error::InvalidArgument("significance must lie in (0, 1)".into()));
    }
    Ok(())
}

/// For every pair of `k`-subsets (`2 ≤ k ≤ k_max`) with isomorphic induced
/// subgraphs and every isomorphism between them, compare the ordering
/// distribution of one with the pushforward of the other. Each isomorphism
/// class is compared against its first member, which covers all pairs by
/// transitivity; the two sides come from independent runs.
pub fn check_consistency(sampler: &PreparedSampler, g: &Graph, opts: &LabOptions) -> Result<FamilyReport> {
    check_options(opts)?;
    if sampler.n() != g.n() {
        return Err(Error::DomainMismatch("sampler was prepared for another graph".into()));
    }
    let mut tests = Vec::new();
    let mut notes = Vec::new();
    for k in 2..=opts.k_max.min(g.n()) {
        let (subsets, sampled) = k_subsets(g.n(), k, opts.max_subsets, opts.seed);
        if sampled {
            notes.push(format!("k={k}: sampled {} subsets", subsets.len()));
        }
        let mut classes: BTreeMap<u64, Vec<(Vec<usize>, Graph)>> = BTreeMap::new();
        for s in subsets {
            let h = g.induced_unchecked(&s);
            classes.entry(canonical_form(&h)?).or_default().push((s, h));
        }
        for members in classes.values() {
            let (rep, rep_g) = &members[0];
            for (s, h) in members {
                for phi in isomorphisms(rep_g, h) {
                    if s == rep && phi.map.iter().enumerate().all(|(i, &m)| i == m) {
                        continue;
                    }
                    tests.push(PairTest {
                        rep: rep.clone(),
                        other: s.clone(),
                        sigma: phi.map,
                    });
                }
            }
        }
    }
    if tests.len() > opts.max_tests {
        notes.push(format!("kept {} of {} pair tests", opts.max_tests, tests.len()));
        let mut rng = stream(opts.seed, "pair-tests", 0);
        let mut keep = sample(&mut rng, tests.len(), opts.max_tests).into_vec();
        keep.sort_unstable();
        let mut it = tests.into_iter().enumerate();
        tests = keep
            .iter()
            .map(|&i| loop {
                let (j, t) = it.next().expect("index in range");
                if j == i {
                    break t;
                }
            })
            .collect();
    }
    let mut needed: Vec<Vec<usize>> = tests
        .iter()
        .flat_map(|t| [t.rep.clone(), t.other.clone()])
        .collect();
    needed.sort();
    needed.dedup();
    let index: BTreeMap<&Vec<usize>, usize> = needed.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let run_a = estimate_distributions(sampler, &needed, opts.samples, opts.seed, "consistency-a")?;
    let run_b = estimate_distributions(sampler, &needed, opts.samples, opts.seed, "consistency-b")?;
    let reports = tests
        .iter()
        .map(|t| {
            let a = &run_a[index[&t.rep]];
            let b = run_b[index[&t.other]].reorder(&t.sigma);
            let mut r = chi_square_two_sample(&a.counts, &b.counts).into_report(
                &format!("{:?} vs {:?}", t.rep, b.tuple),
                opts.significance,
            );
            r.sample_sizes = vec![opts.samples, opts.samples];
            r.seeds = vec![opts.seed];
            add_tie_note(&mut r, &[a, &b]);
            r
        })
        .collect();
    let mut fam = FamilyReport::bonferroni("consistency", opts.significance, reports);
    if let Some(first) = fam.reports.first_mut() {
        first.notes.extend(notes);
    }
    Ok(fam)
}

fn add_tie_note(r: &mut TestReport, dists: &[&OrderingDistribution]) {
    let ties: u64 = dists.iter().map(|d| d.ties).sum();
    if ties > 0 {
        r.notes.push(format!("{ties} draws with tied keys, broken by vertex index"));
    }
}

/// Goodness-of-fit of every `k`-subset's ordering distribution against the
/// uniform one.
pub fn check_uniformity(sampler: &PreparedSampler, g: &Graph, opts: &LabOptions) -> Result<FamilyReport> {
    check_options(opts)?;
    if sampler.n() != g.n() {
        return Err(Error::DomainMismatch("sampler was prepared for another graph".into()));
    }
    let mut tuples = Vec::new();
    for k in 2..=opts.k_max.min(g.n()) {
        tuples.extend(k_subsets(g.n(), k, opts.max_subsets, opts.seed).0);
    }
    let dists = estimate_distributions(sampler, &tuples, opts.samples, opts.seed, "uniformity")?;
    let reports = dists.iter().map(|d| uniformity_report(d, opts)).collect();
    Ok(FamilyReport::bonferroni("uniformity", opts.significance, reports))
}

pub fn uniformity_report(d: &OrderingDistribution, opts: &LabOptions) -> TestReport {
    let kf = factorial(d.k());
    let mut r = chi_square_gof(&d.counts, &vec![1.0 / kf as f64; kf])
        .into_report(&format!("{:?}", d.tuple), opts.significance);
    r.sample_sizes = vec![d.sample_count];
    r.seeds = vec![opts.seed];
    add_tie_note(&mut r, &[d]);
    r
}

/// Two-sample comparison of the ordering distributions induced on
/// isomorphic subgraphs of two different host graphs, one test per
/// isomorphism.
pub fn compare_across_graphs(
    first: (&PreparedSampler, &Graph, &[usize]),
    second: (&PreparedSampler, &Graph, &[usize]),
    opts: &LabOptions,
) -> Result<FamilyReport> {
    let (s1, g1, t1) = first;
    let (s2, g2, t2) = second;
    let h1 = g1.induced_unchecked(t1);
    let h2 = g2.induced_unchecked(t2);
    let isos = isomorphisms(&h1, &h2);
    if isos.is_empty() {
        return Err(Error::DomainMismatch("the induced subgraphs are not isomorphic".into()));
    }
    let a = estimate_distributions(s1, &[t1.to_vec()], opts.samples, opts.seed, "cross-a")?.remove(0);
    let b = estimate_distributions(s2, &[t2.to_vec()], opts.samples, opts.seed, "cross-b")?.remove(0);
    let reports = isos
        .iter()
        .map(|phi| {
            let bb = b.reorder(&phi.map);
            let mut r = chi_square_two_sample(&a.counts, &bb.counts)
                .into_report(&format!("{:?} vs {:?}", a.tuple, bb.tuple), opts.significance);
            r.sample_sizes = vec![opts.samples, opts.samples];
            r.seeds = vec![opts.seed];
            r
        })
        .collect();
    Ok(FamilyReport::bonferroni("cross-graph", opts.significance, reports))
}

/// A seeded random subset of `k` vertices.
pub fn random_subset<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut s = sample(rng, n, k).into_vec();
    s.sort_unstable();
    s
}
