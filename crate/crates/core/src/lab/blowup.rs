//! Rank statistics on finite truncations of a template blow-up.
//!
//! For blocks `W_u`, `W_v` and a draw of the order, `V_{u,v_i}` is the
//! fraction of `W_u` below `v_i`, `U_{v_i} = V_{v,v_i}` (ranked among the
//! other members of its own block) and `F_{u,v}` is the empirical
//! distribution function of `{V_{u,v_i}}_i`. In the limit `F_{u,v}` is the
//! right-continuous inverse of `F_{v,u}`, and
//! `E X² + E Y² = ∫ 2x(1-F) + F² dx ≥ 2/3` for `X ~ F`, `Y ~ F⁻¹`.

use serde::{Deserialize, Serialize};

use super::distribution::par_chunks;
use super::stats::{FamilyReport, TestReport, ks_uniform};
use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::sampler::{PreparedSampler, SamplerSpec};
use crate::template::{BlowUp, BlowUpSpec, Template, blow_up};

pub const MIN_MULTIPLICITY: usize = 20;
pub const DEFAULT_MULTIPLICITY: usize = 200;
pub const TRUNCATION_LADDER: [usize; 3] = [50, 100, 200];
/// Statistical tolerance on `E X² + E Y²`.
pub const FUNCTIONAL_TOLERANCE: f64 = 0.02;

/// Nondecreasing right-continuous step function on `[0, 1]`: `base` left of
/// the first break, `levels[i]` on `[breaks[i], breaks[i + 1])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepCdf {
    base: f64,
    breaks: Vec<f64>,
    levels: Vec<f64>,
}

impl StepCdf {
    pub fn new(base: f64, breaks: Vec<f64>, levels: Vec<f64>) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidArgument(format!("step function: {m}")));
        if breaks.len() != levels.len() {
            return bad("breaks and levels differ in length");
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) || breaks.iter().any(|b| !(0.0..=1.0).contains(b)) {
            return bad("breaks must be strictly increasing in [0, 1]");
        }
        let mut prev = base;
        for &l in &levels {
            if !(0.0..=1.0).contains(&l) || l < prev {
                return bad("levels must be nondecreasing in [0, 1]");
            }
            prev = l;
        }
        if !(0.0..=1.0).contains(&base) {
            return bad("base outside [0, 1]");
        }
        Ok(StepCdf { base, breaks, levels })
    }

    /// Empirical distribution function of a sample in `[0, 1]`.
    pub fn ecdf(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidArgument("empty sample".into()));
        }
        let mut s = samples.to_vec();
        s.sort_by(f64::total_cmp);
        let n = s.len() as f64;
        let (mut breaks, mut levels) = (Vec::new(), Vec::new());
        for (i, &x) in s.iter().enumerate() {
            if breaks.last() == Some(&x) {
                *levels.last_mut().expect("paired") = (i + 1) as f64 / n;
            } else {
                breaks.push(x);
                levels.push((i + 1) as f64 / n);
            }
        }
        StepCdf::new(0.0, breaks, levels)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.breaks.partition_point(|&b| b <= x) {
            0 => self.base,
            i => self.levels[i - 1],
        }
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    /// `G(y) = sup{s ∈ [0,1] : F(s) ≤ y}` (0 when the set is empty).
    fn inverse_at(&self, y: f64) -> f64 {
        if self.eval(0.0) > y {
            return 0.0;
        }
        match self.levels.iter().position(|&l| l > y) {
            Some(i) => self.breaks[i],
            None => 1.0,
        }
    }

    /// The right-continuous inverse, itself a step function.
    pub fn inverse(&self) -> StepCdf {
        let mut points: Vec<f64> = std::iter::once(self.eval(0.0))
            .chain(self.levels.iter().copied())
            .collect();
        points.sort_by(f64::total_cmp);
        points.dedup();
        let base = self.inverse_at(0.0);
        let (mut breaks, mut levels) = (Vec::new(), Vec::new());
        let mut prev = base;
        for y in points {
            let g = self.inverse_at(y);
            if g != prev {
                breaks.push(y);
                levels.push(g);
                prev = g;
            }
        }
        StepCdf { base, breaks, levels }
    }

    /// Constant pieces `(a, b, value)` covering `[0, 1]`.
    fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let xs: Vec<f64> = std::iter::once(0.0)
            .chain(self.breaks.iter().copied().filter(|&b| b > 0.0 && b < 1.0))
            .chain(std::iter::once(1.0))
            .collect();
        (0..xs.len() - 1).map(move |i| (xs[i], xs[i + 1], self.eval(xs[i])))
    }

    /// `E X²` for `X` with this distribution function: `∫ 2x(1 - F(x)) dx`.
    pub fn second_moment(&self) -> f64 {
        self.pieces().map(|(a, b, c)| (1.0 - c) * (b * b - a * a)).sum()
    }

    /// `∫ F(x)² dx`.
    pub fn square_integral(&self) -> f64 {
        self.pieces().map(|(a, b, c)| c * c * (b - a)).sum()
    }

    /// `∫ 2x(1 - F) + F² dx`, the value of `E X² + E Y²` with `Y ~ F⁻¹`.
    pub fn functional(&self) -> f64 {
        self.second_moment() + self.square_integral()
    }

    /// `∫ (F(x) - x)² dx`.
    pub fn distance_from_identity(&self) -> f64 {
        self.pieces()
            .map(|(a, b, c)| ((b - c).powi(3) - (a - c).powi(3)) / 3.0)
            .sum()
    }

    pub fn sup_distance(&self, other: &StepCdf) -> f64 {
        [0.0, 1.0]
            .into_iter()
            .chain(self.breaks.iter().copied())
            .chain(other.breaks.iter().copied())
            .map(|x| (self.eval(x) - other.eval(x)).abs())
            .fold(0.0, f64::max)
    }
}

/// Estimate of `F_{u,v}` from one draw: the sorted values `V_{u,v_i}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalF {
    pub u: usize,
    pub v: usize,
    /// Identifies the draw the estimate came from.
    pub run: u64,
    pub grid: Vec<f64>,
}

impl EmpiricalF {
    pub fn cdf(&self) -> StepCdf {
        StepCdf::ecdf(&self.grid).expect("grid is nonempty")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InverseCheck {
    /// Sup distance between `F_rev` and the right-continuous inverse of `F`.
    pub inverse_gap: f64,
    /// `E X² + E Y²` with `X ~ F`, `Y ~ F_rev`.
    pub moment_sum: f64,
    /// The same quantity with `Y ~ F⁻¹` computed exactly from `F`.
    pub functional: f64,
}

impl InverseCheck {
    pub fn uniform_consistent(&self) -> bool {
        (self.moment_sum - 2.0 / 3.0).abs() <= FUNCTIONAL_TOLERANCE
    }
}

/// Gap below which two finite-truncation estimates are accepted as mutual
/// right-continuous inverses.
pub fn inverse_tolerance(n_u: usize, n_v: usize) -> f64 {
    2.0 / n_u.min(n_v) as f64
}

/// Compare `F = F_{u,v}` with `F_rev = F_{v,u}` from the same draw.
pub fn inverse_check(f: &EmpiricalF, f_rev: &EmpiricalF) -> Result<InverseCheck> {
    if f.run != f_rev.run || (f.u, f.v) != (f_rev.v, f_rev.u) {
        return Err(Error::InvalidArgument(
            "F and F_rev must come from the same draw with swapped roles".into(),
        ));
    }
    let (a, b) = (f.cdf(), f_rev.cdf());
    Ok(pair_check(&a, &b))
}

fn pair_check(a: &StepCdf, b: &StepCdf) -> InverseCheck {
    InverseCheck {
        inverse_gap: b.sup_distance(&a.inverse()),
        moment_sum: a.second_moment() + b.second_moment(),
        functional: a.functional(),
    }
}

pub fn check_inverse_and_ffi(f: &EmpiricalF, f_rev: &EmpiricalF) -> Result<TestReport> {
    let c = inverse_check(f, f_rev)?;
    let tol = inverse_tolerance(f_rev.grid.len(), f.grid.len());
    let pass = c.inverse_gap <= tol && c.moment_sum >= 2.0 / 3.0 - FUNCTIONAL_TOLERANCE;
    let mut r = TestReport::deterministic("inverse and moment inequality", "step-function", c.inverse_gap, pass);
    r.notes.push(format!("inverse gap tolerance {tol}"));
    r.notes.push(format!("E X^2 + E Y^2 = {}", c.moment_sum));
    if c.uniform_consistent() {
        r.notes.push("uniform-consistent".into());
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct DrawStats {
    u: f64,
    v: f64,
    check: InverseCheck,
}

/// Per-draw statistics for one ordered pair of template vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupStatistics {
    pub sampler: String,
    pub u: usize,
    pub v: usize,
    pub multiplicity: Vec<usize>,
    pub draws: u64,
    pub seed: u64,
    /// `U_{v_1}` per draw.
    pub u_samples: Vec<f64>,
    /// `V_{u,v_1}` per draw.
    pub v_samples: Vec<f64>,
    /// Distribution of `V_{u,v_1}` across draws, i.e. the estimate of `E F_{u,v}`.
    pub f: EmpiricalF,
    /// `F_{u,v}` and `F_{v,u}` from the first draw.
    pub first_pair: (EmpiricalF, EmpiricalF),
    pub moment_sums: Vec<f64>,
    pub functionals: Vec<f64>,
    pub inverse_gaps: Vec<f64>,
    pub inverse_tolerance: f64,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len().max(1) as f64
}

impl BlowupStatistics {
    pub fn mean_v(&self) -> f64 {
        mean(&self.v_samples)
    }

    pub fn mean_moment_sum(&self) -> f64 {
        mean(&self.moment_sums)
    }

    pub fn mean_functional(&self) -> f64 {
        mean(&self.functionals)
    }

    pub fn max_inverse_gap(&self) -> f64 {
        self.inverse_gaps.iter().copied().fold(0.0, f64::max)
    }

    pub fn uniform_consistent(&self) -> bool {
        (self.mean_moment_sum() - 2.0 / 3.0).abs() <= FUNCTIONAL_TOLERANCE
    }

    /// KS test of the `V` samples against `U(0, 1)`; passes for uniform orders.
    pub fn v_uniformity(&self, significance: f64) -> TestReport {
        let mut r = ks_uniform(&self.v_samples).into_report("V uniform", significance);
        r.sample_sizes = vec![self.draws];
        r.seeds = vec![self.seed];
        r
    }

    /// Properties every consistent order satisfies: `U ~ U(0,1)`, the inverse
    /// relation between `F_{u,v}` and `F_{v,u}`, and the moment inequality.
    pub fn report(&self, significance: f64) -> FamilyReport {
        let mut u = ks_uniform(&self.u_samples).into_report("U uniform", significance);
        u.sample_sizes = vec![self.draws];
        u.seeds = vec![self.seed];
        let gap = self.max_inverse_gap();
        let mut inv =
            TestReport::deterministic("F inverse", "sup-distance", gap, gap <= self.inverse_tolerance);
        inv.notes.push(format!("tolerance {}", self.inverse_tolerance));
        let m = self.mean_moment_sum();
        let mut ffi = TestReport::deterministic(
            "moment inequality",
            "E X^2 + E Y^2",
            m,
            m >= 2.0 / 3.0 - FUNCTIONAL_TOLERANCE,
        );
        if self.uniform_consistent() {
            ffi.notes.push("uniform-consistent".into());
        }
        FamilyReport::bonferroni("blowup", significance, vec![u, inv, ffi])
    }
}

fn sorted_keys(keys: &[f64], members: std::ops::Range<usize>) -> Vec<f64> {
    let mut k = keys[members].to_vec();
    k.sort_by(f64::total_cmp);
    k
}

/// Fractions of `reference` strictly below each of `values`.
fn ranks(values: &[f64], reference: &[f64]) -> Vec<f64> {
    let n = reference.len() as f64;
    values
        .iter()
        .map(|&x| reference.partition_point(|&r| r < x) as f64 / n)
        .collect()
}

fn draw_stats(keys: &[f64], blow: &BlowUp, u: usize, v: usize) -> (DrawStats, Vec<f64>, Vec<f64>) {
    let ku = sorted_keys(keys, blow.members(u));
    let kv = sorted_keys(keys, blow.members(v));
    let v1 = keys[blow.members(v).start];
    let below = kv.partition_point(|&r| r < v1);
    let u_rank = below as f64 / (kv.len() - 1) as f64;
    let v_rank = ku.partition_point(|&r| r < v1) as f64 / ku.len() as f64;
    let f_uv = ranks(&kv, &ku);
    let f_vu = ranks(&ku, &kv);
    let check = pair_check(
        &StepCdf::ecdf(&f_uv).expect("nonempty"),
        &StepCdf::ecdf(&f_vu).expect("nonempty"),
    );
    (DrawStats { u: u_rank, v: v_rank, check }, f_uv, f_vu)
}

/// Sample the order on the blow-up `n_draws` times and record `U`, `V` and
/// the `F` estimates for template vertices `u` and `v`.
pub fn estimate_blowup_statistics(
    sampler: &SamplerSpec,
    spec: &BlowUpSpec,
    u: usize,
    v: usize,
    n_draws: u64,
    seed: u64,
) -> Result<BlowupStatistics> {
    let t = spec.template.n();
    if u >= t || v >= t {
        return Err(Error::VertexOutOfRange { vertex: u.max(v), n: t });
    }
    if let Some(&m) = spec.multiplicity.iter().find(|&&m| m < MIN_MULTIPLICITY) {
        return Err(Error::InvalidArgument(format!(
            "multiplicity {m} is below the minimum {MIN_MULTIPLICITY}"
        )));
    }
    if n_draws == 0 {
        return Err(Error::InvalidArgument("at least one draw is required".into()));
    }
    let blow = blow_up(spec)?;
    let prepared = PreparedSampler::prepare(sampler, &blow.graph)?;
    let parts = par_chunks(seed, "blowup", n_draws, |rng, count| {
        let mut keys = vec![0.0; prepared.n()];
        (0..count)
            .map(|_| {
                prepared.sample_keys(rng, &mut keys);
                draw_stats(&keys, &blow, u, v).0
            })
            .collect::<Vec<_>>()
    });
    let draws: Vec<DrawStats> = parts.into_iter().flatten().collect();
    // the first draw again, keeping its full F estimates
    let first = par_chunks(seed, "blowup", 1, |rng, _| {
        let mut keys = vec![0.0; prepared.n()];
        prepared.sample_keys(rng, &mut keys);
        draw_stats(&keys, &blow, u, v)
    })
    .remove(0);
    let run = derive_seed(seed, "blowup", 0);
    let v_samples: Vec<f64> = draws.iter().map(|d| d.v).collect();
    Ok(BlowupStatistics {
        sampler: sampler.kind.name().to_string(),
        u,
        v,
        multiplicity: spec.multiplicity.clone(),
        draws: n_draws,
        seed,
        u_samples: draws.iter().map(|d| d.u).collect(),
        f: EmpiricalF {
            u,
            v,
            run: seed,
            grid: {
                let mut g = v_samples.clone();
                g.sort_by(f64::total_cmp);
                g
            },
        },
        v_samples,
        first_pair: (
            EmpiricalF { u, v, run, grid: first.1 },
            EmpiricalF { u: v, v: u, run, grid: first.2 },
        ),
        moment_sums: draws.iter().map(|d| d.check.moment_sum).collect(),
        functionals: draws.iter().map(|d| d.check.functional).collect(),
        inverse_gaps: draws.iter().map(|d| d.check.inverse_gap).collect(),
        inverse_tolerance: inverse_tolerance(spec.multiplicity[u], spec.multiplicity[v]),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderRung {
    pub multiplicity: usize,
    pub mean_v: f64,
    pub v_ks_p_value: f64,
    pub mean_moment_sum: f64,
    pub max_inverse_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderReport {
    pub rungs: Vec<LadderRung>,
    /// Change from the smallest to the largest multiplicity.
    pub drift_mean_v: f64,
    pub drift_moment_sum: f64,
}

/// Repeat the blow-up statistics at several uniform multiplicities to expose
/// truncation bias.
pub fn truncation_ladder(
    sampler: &SamplerSpec,
    template: &Template,
    u: usize,
    v: usize,
    n_draws: u64,
    seed: u64,
    ladder: &[usize],
) -> Result<LadderReport> {
    let rungs = ladder
        .iter()
        .map(|&m| {
            let st = estimate_blowup_statistics(
                sampler,
                &BlowUpSpec::uniform(template.clone(), m)?,
                u,
                v,
                n_draws,
                seed,
            )?;
            Ok(LadderRung {
                multiplicity: m,
                mean_v: st.mean_v(),
                v_ks_p_value: st.v_uniformity(0.5).p_value.unwrap_or(0.0),
                mean_moment_sum: st.mean_moment_sum(),
                max_inverse_gap: st.max_inverse_gap(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let drift = |f: fn(&LadderRung) -> f64| match (rungs.first(), rungs.last()) {
        (Some(a), Some(b)) => f(b) - f(a),
        _ => 0.0,
    };
    Ok(LadderReport {
        drift_mean_v: drift(|r| r.mean_v),
        drift_moment_sum: drift(|r| r.mean_moment_sum),
        rungs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn k_plus_k() -> Template {
        Template::new(Graph::empty(2), vec![true, true]).unwrap()
    }

    #[test]
    fn step_inverse_of_bernoulli_half() {
        // mass 1/2 at 0 and at 1; the inverse is the point mass at 1/2
        let f = StepCdf::new(0.0, vec![0.0, 1.0], vec![0.5, 1.0]).unwrap();
        let g = f.inverse();
        assert_eq!(g.eval(0.49), 0.0);
        assert_eq!(g.eval(0.5), 1.0);
        assert!((f.second_moment() - 0.5).abs() < 1e-15);
        assert!((g.second_moment() - 0.25).abs() < 1e-15);
        assert!((f.functional() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn degenerate_draws_give_one() {
        let all_below = StepCdf::ecdf(&[0.0; 5]).unwrap();
        let all_above = StepCdf::ecdf(&[1.0; 5]).unwrap();
        assert!((all_below.functional() - 1.0).abs() < 1e-15);
        assert!((all_above.functional() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn functional_identity() {
        let f = StepCdf::ecdf(&[0.1, 0.35, 0.35, 0.8]).unwrap();
        assert!((f.functional() - 2.0 / 3.0 - f.distance_from_identity()).abs() < 1e-14);
    }

    #[test]
    fn double_inverse_returns() {
        let grid: Vec<f64> = (1..=40).map(|i| ((i * 37) % 41) as f64 / 41.0).collect();
        let f = StepCdf::ecdf(&grid).unwrap();
        assert!(f.inverse().inverse().sup_distance(&f) <= 2.0 / grid.len() as f64);
    }

    #[test]
    fn uniform_sampler_statistics() {
        let t = Template::new(crate::graph::named::path(3), vec![true, false, true]).unwrap();
        let st = estimate_blowup_statistics(
            &SamplerSpec::uniform(5),
            &BlowUpSpec::uniform(t, 100).unwrap(),
            0,
            1,
            300,
            5,
        )
        .unwrap();
        assert!(st.report(1e-3).pass, "{:?}", st.report(1e-3));
        assert!(st.v_uniformity(1e-3).pass);
        assert!(st.uniform_consistent());
        let r = check_inverse_and_ffi(&st.first_pair.0, &st.first_pair.1).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn block_sampler_on_k_plus_k() {
        let st = estimate_blowup_statistics(
            &SamplerSpec::block(2),
            &BlowUpSpec::uniform(k_plus_k(), 50).unwrap(),
            0,
            1,
            4000,
            2,
        )
        .unwrap();
        assert!(st.v_samples.iter().all(|&x| x == 0.0 || x == 1.0));
        assert!((st.mean_v() - 0.5).abs() < 0.05);
        assert!((st.mean_moment_sum() - 1.0).abs() < 1e-12);
        assert!(st.report(1e-3).pass);
        assert!(!st.v_uniformity(1e-3).pass);
    }

    #[test]
    fn errors() {
        let spec = BlowUpSpec::uniform(k_plus_k(), 10).unwrap();
        assert!(estimate_blowup_statistics(&SamplerSpec::uniform(0), &spec, 0, 1, 10, 0).is_err());
        let spec = BlowUpSpec::uniform(k_plus_k(), 30).unwrap();
        assert!(estimate_blowup_statistics(&SamplerSpec::uniform(0), &spec, 0, 2, 10, 0).is_err());
        let st = estimate_blowup_statistics(&SamplerSpec::uniform(0), &spec, 0, 1, 2, 0).unwrap();
        assert!(check_inverse_and_ffi(&st.first_pair.0, &st.first_pair.0).is_err());
    }

    #[test]
    fn ladder_runs() {
        let rep = truncation_ladder(&SamplerSpec::uniform(1), &k_plus_k(), 0, 1, 100, 1, &[20, 40]).unwrap();
        assert_eq!(rep.rungs.len(), 2);
    }
}
