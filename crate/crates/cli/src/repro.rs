//! Named reproduction experiments. Each run reports every estimate it made
//! and checks it against the pinned tolerance.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use ordlab_core::bernoulli::{DeltaOrder, ExtraVariables, addx_probability, edgedist_delta};
use ordlab_core::graph::{Graph, named};
use ordlab_core::lab::consistency::uniformity_report;
use ordlab_core::lab::perm::{perm_from_index, perm_index};
use ordlab_core::lab::{
    FamilyReport, LabOptions, check_consistency, check_uniformity, compare_across_graphs, estimate_blowup_statistics,
    estimate_distribution, estimate_distributions, estimate_event, estimate_mean,
};
use ordlab_core::rng::derive_seed;
use ordlab_core::sampler::{Param, PreparedSampler, SamplerSpec};
use ordlab_core::template::{BlowUpSpec, Template, classify_template};
use ordlab_core::verdict::Label;
use serde::{Deserialize, Serialize};

use crate::CliError;
use crate::args::{Common, ReproName};

/// Draws per side for the chi-square batteries.
pub const BATTERY_SAMPLES: u64 = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ReproConfig {
    pub seed: u64,
    /// Overrides the experiment's headline sample size.
    pub samples: Option<u64>,
    pub significance: f64,
    pub alpha: Option<Param>,
    pub epsilon: Option<Param>,
    pub k_max: Option<usize>,
}

impl ReproConfig {
    pub fn new(seed: u64) -> Self {
        ReproConfig {
            seed,
            samples: None,
            significance: 1e-3,
            alpha: None,
            epsilon: None,
            k_max: None,
        }
    }

    pub fn from_common(c: &Common) -> Self {
        ReproConfig {
            seed: c.seed,
            samples: c.samples,
            significance: c.significance,
            alpha: c.alpha,
            epsilon: c.epsilon,
            k_max: c.kmax.map(usize::from),
        }
    }

    fn sub(&self, label: &str) -> u64 {
        derive_seed(self.seed, label, 0)
    }

    fn opts(&self, label: &str, k_max: usize, samples: u64) -> LabOptions {
        LabOptions {
            k_max,
            samples,
            significance: self.significance,
            seed: self.sub(label),
            ..LabOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproReport {
    pub experiment: String,
    pub seed: u64,
    /// Headline sample size.
    pub samples: u64,
    pub pass: bool,
    pub metrics: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub families: Vec<FamilyReport>,
}

impl ReproReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Builder(ReproReport);

impl Builder {
    fn new(name: ReproName, cfg: &ReproConfig, samples: u64) -> Self {
        Builder(ReproReport {
            experiment: name.as_str().to_string(),
            seed: cfg.seed,
            samples,
            pass: true,
            metrics: BTreeMap::new(),
            checks: Vec::new(),
            families: Vec::new(),
        })
    }

    fn metric(&mut self, key: impl Into<String>, value: f64) {
        self.0.metrics.insert(key.into(), value);
    }

    fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.0.checks.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    fn within(&mut self, name: impl Into<String>, estimate: f64, target: f64, tol: f64) {
        let pass = (estimate - target).abs() <= tol;
        self.check(name, pass, format!("{estimate} vs {target} within {tol}"));
    }

    /// Record a test family; `expect_pass = false` means a rejection is wanted.
    fn family(&mut self, name: impl Into<String>, mut fam: FamilyReport, expect_pass: bool) {
        let name = name.into();
        let verdict = if fam.pass { "not rejected" } else { "rejected" };
        let min_p = fam.min_p_value.map_or("none".to_string(), |p| format!("{p:e}"));
        let detail = format!(
            "{verdict}: {} tests, min p {min_p}, corrected level {:e}",
            fam.tests, fam.corrected_significance
        );
        self.check(name.clone(), fam.pass == expect_pass, detail);
        fam.name = name;
        self.0.families.push(fam);
    }

    fn finish(mut self) -> ReproReport {
        self.0.pass = self.0.checks.iter().all(|c| c.pass);
        self.0
    }
}

fn prepare(spec: &SamplerSpec, g: &Graph) -> Result<PreparedSampler, CliError> {
    Ok(PreparedSampler::prepare(spec, g)?)
}

fn ind(b: bool) -> f64 {
    b as u8 as f64
}

pub fn run_repro(name: ReproName, cfg: &ReproConfig) -> Result<ReproReport, CliError> {
    if !(cfg.significance > 0.0 && cfg.significance < 1.0) {
        return Err(CliError::Config("significance must lie in (0, 1)".into()));
    }
    match name {
        ReproName::UniformBaseline => uniform_baseline(cfg),
        ReproName::BlockK2K1 => block_k2k1(cfg),
        ReproName::SpectralP3 => spectral_p3(cfg),
        ReproName::Mod1P3 => mod1_p3(cfg),
        ReproName::DoubleBroomP5 => double_broom_p5(cfg),
        ReproName::FlowerInconsistency => flower_inconsistency(cfg),
        ReproName::TemplateKplusK => template_kplusk(cfg),
        ReproName::AddxGrid => addx_grid(cfg),
        ReproName::EdgedistGrid => edgedist_grid(cfg),
    }
}

/// The uniform sampler passes both batteries on a few small graphs.
fn uniform_baseline(cfg: &ReproConfig) -> Result<ReproReport, CliError> {
    let n = cfg.samples.unwrap_or(BATTERY_SAMPLES);
    let k = cfg.k_max.unwrap_or(3);
    let mut b = Builder::new(ReproName::UniformBaseline, cfg, n);
    for name in ["P3", "C4", "bull"] {
        let g = named::from_name(name)?;
        let s = prepare(&SamplerSpec::uniform(cfg.seed), &g)?;
        let fam = check_uniformity(&s, &g, &cfg.opts(&format!("uniformity-{name}"), k, n))?;
        b.family(format!("uniformity on {name}"), fam, true);
        let fam = check_consistency(&s, &g, &cfg.opts(&format!("consistency-{name}"), k, n))?;
        b.family(format!("consistency on {name}"), fam, true);
    }
    Ok(b.finish())
}

/// Block order on K2+K1: the clique is never split, and it comes first
/// with its vertices in a given order with probability 1/4.
fn block_k2k1(cfg: &ReproConfig) -> Result<ReproReport, CliError> {
    let n = cfg.samples.unwrap_or(1_000_000);
    let mut b = Builder::new(ReproName::BlockK2K1, cfg, n);
    let g = named::from_name("K2+K1")?;
    let s = prepare(&SamplerSpec::block(cfg.seed), &g)?;
    let d = estimate_distribution(&s, &[0, 1, 2], n, cfg.sub("events"))?;
    let p = d.counts[perm_index(&[0, 1, 2])] as f64 / n as f64;
    let split = d.counts[perm_index(&[0, 2, 1])] + d.counts[perm_index(&[1, 2, 0])];
    let se = (0.25f64 * 0.75 / n as f64).sqrt();
    b.metric("p_a1_a2_b", p);
    b.metric("p_a1_a2_b_se", se);
    b.metric("split_count", split as f64);
    b.within("P(a1<a2<b) = 1/4", p, 0.25, 4.0 * se);
    b.check("b never between a1 and a2", split == 0, format!("{split} draws"));
    let k = cfg.k_max.unwrap_or(3);
    let fam = check_uniformity(&s, &g, &cfg.opts("uniformity", k, BATTERY_SAMPLES))?;
    b.family("uniformity rejected", fam, false);
    let fam = check_consistency(&s, &g, &cfg.opts("consistency", k, BATTERY_SAMPLES))?;
    b.family("consistency", fam, true);
    Ok(b.finish())
}

/// Random projection of the spectral point set of P3: the middle vertex is
/// between the ends with probability equal to its angle over pi.
fn spectral_p3(cfg: &ReproConfig) -> Result<ReproReport, CliError> {
    let n = cfg.samples.unwrap_or(1_000_000);
    let mut b = Builder::new(ReproName::SpectralP3, cfg, n);
    let eps = cfg.epsilon.unwrap_or(Param::Auto);
    let p3 = named::path(3);
    let s = prepare(&SamplerSpec::spectral(eps, cfg.seed), &p3)?;
    let e = s.resolved_epsilon().expect("spectral sampler has epsilon");
    let exact = ((1.0 - 2.0 * e) / (2.0 - 2.0 * e)).acos() / PI;
    let est = estimate_event(&s, n, cfg.sub("middle"), |k| (k[0] < k[1]) == (k[1] < k[2]));
    b.metric("epsilon", e);
    b.metric("middle_prob", est.p);
    b.metric("middle_prob_exact", exact);
    b.metric("middle_prob_se", est.se);
    b.within("middle probability", est.p, exact, 0.003);
    let k = cfg.k_max.unwrap_or(3);
    let fam = check_uniformity(&s, &p3, &cfg.opts("uniformity-P3", 3, BATTERY_SAMPLES))?;
    b.family("uniformity rejected on P3", fam, false);
    for name in ["C5", "bull"] {
        let g = named::from_name(name)?;
        let s = prepare(&SamplerSpec::spectral(eps, cfg.seed), &g)?;
        let fam = check_consistency(&s, &g, &cfg.opts(&format!("consistency-{name}"), k, BATTERY_SAMPLES))?;
        b.family(format!("consistency on {name}"), fam, true);
    }
    Ok(b.finish())
}

/// Edge-conditioned mod-1 sums: uniform on every n-1 vertices, but on P3
/// the leaf precedes the centre as the two smallest more often by delta.
fn mod1_p3(cfg: &ReproConfig) -> Result<ReproReport, CliError> {
    let n = cfg.samples.unwrap_or(1_000_000);
    let mut b = Builder::new(ReproName::Mod1P3, cfg, n);
    let alpha = cfg.alpha.unwrap_or(Param::Value(0.0));
    let p3 = named::path(3);
    let s = prepare(&SamplerSpec::mod1_edge(alpha, cfg.seed), &p3)?;
    let a = s.resolved_alpha().expect("mod1 sampler has alpha");
    let (delta, se) = estimate_mean(&s, n, cfg.sub("delta"), |k| {
        ind(k[0] < k[1] && k[1] < k[2]) - ind(k[1] < k[0] && k[0] < k[2])
    });
    // leaf 0 has degree 1, the centre degree 2, and there are two edges
    let exact = (1.0 - 2.0) / 2.0 * edgedist_delta(3, a, DeltaOrder::Pair)?.value;
    b.metric("alpha", a);
    b.metric("delta", delta);
    b.metric("delta_exact", exact);
    b.metric("delta_se", se);
    b.within("offset delta", delta, exact, 0.003);
    for (name, k) in [("P3", 2), ("P4", 3), ("C4", 3)] {
        let g = named::from_name(name)?;
        let s = prepare(&SamplerSpec::mod1_edge(alpha, cfg.seed), &g)?;
        let fam = check_uniformity(&s, &g, &cfg.opts(&format!("marginals-{name}"), k, BATTERY_SAMPLES))?;
        b.family(format!("{}-subset marginals uniform on {name}", k), fam, true);
    }
    let fam = check_uniformity(&s, &p3, &cfg.opts("full-P3", 3, BATTERY_SAMPLES))?;
    b.family("full P3 ordering rejected", fam, false);
    Ok(b.finish())
}

/// Double broom with a 3-vertex path and ten leaves a side, conditioned on
/// a zero of B_3: every induced P4 is uniform, an induced P5 is not.
fn double_broom_p5(cfg: &ReproConfig) -> Result<ReproReport, CliError> {
    const LEAVES: usize = 10;
    let n = cfg.samples.unwrap_or(1_000_000);
    let mut b = Builder::new(ReproName::DoubleBroomP5, cfg, n);
    let g = named::double_broom(3, LEAVES, LEAVES);
    let s = prepare(&SamplerSpec::double_broom(cfg.alpha.unwrap_or(Param::Auto), cfg.seed), &g)?;
    let left = 3..3 + LEAVES;
    let right = 3 + LEAVES..3 + 2 * LEAVES;
    let mut tuples: Vec<Vec<usize>> = vec![vec![0, 1, 2]];
    tuples.extend(left.clone().map(|l| vec![l, 0, 1, 2]));
    tuples.extend(right.clone().map(|r| vec![0, 1, 2, r]));
    let p5 = vec![left.start, 0, 1, 2, right.start];
    tuples.push(p5);
    let opts = cfg.opts("broom", 5, n);
    let dists = estimate_distributions(&s, &tuples, n, opts.seed, "broom")?;
    let (p5_dist, small) = dists.split_last().expect("nonempty");
    let reports = small.iter().map(|d| uniformity_report(d, &opts)).collect();
    b.family(
        "induced P3 and P4 uniform",
        FamilyReport::bonferroni("", cfg.significance, reports),
        true,
    );
    let r = uniformity_report(p5_dist, &opts);
    b.metric("alpha", s.resolved_alpha().expect("broom sampler has alpha"));
    b.metric("p5_p_value", r.p_value.unwrap_or(f64::NAN));
    b.family(
        "induced P5 rejected",
        FamilyReport::bonferroni("", cfg.significance, vec![r]),
        false,
    );
    Ok(b.finish())
}

/// The flower model is consistent on each [C4]^k_u, but P3+P3 inside the
/// two-petal flower is ordered differently from a stand-alone P3+P3.
fn flower_inconsistency(cfg: &ReproConfig) -> Result<ReproReport, CliError> {
    let n = cfg.samples.unwrap_or(BATTERY_SAMPLES);
    let mut b = Builder::new(ReproName::FlowerInconsistency, cfg, n);
    let alpha = cfg.alpha.unwrap_or(Param::Auto);
    let k = cfg.k_max.unwrap_or(4);
    for petals in 1..=2 {
        let g = named::flower(petals);
        let s = prepare(&SamplerSpec::flower(alpha, cfg.seed), &g)?;
        let fam = check_consistency(&s, &g, &cfg.opts(&format!("flower-{petals}"), k, n))?;
        b.family(format!("consistency on flower{petals}"), fam, true);
        if petals == 2 {
            b.metric("alpha", s.resolved_alpha().expect("flower sampler has alpha"));
        }
    }
    let f2 = named::flower(2);
    let union = named::path(3).disjoint_union(&named::path(3));
    let s1 = prepare(&SamplerSpec::flower(alpha, cfg.seed), &f2)?;
    let s2 = prepare(&SamplerSpec::flower(alpha, cfg.seed), &union)?;
    let t1: Vec<usize> = (1..7).collect();
    let t2: Vec<usize> = (0..6).collect();
    let fam = compare_across_graphs((&s1, &f2, &t1), (&s2, &union, &t2), &cfg.opts("cross", 6, n))?;
    b.metric("cross_min_p", fam.min_p_value.unwrap_or(f64::NAN));
    b.family("P3+P3 across host graphs rejected", fam, false);
    Ok(b.finish())
}

/// Two full vertices, no edge: blow-ups are two cliques, the block order is
/// consistent and non-uniform, and V is 0 or 1 with mean 1/2.
fn template_kplusk(cfg: &ReproConfig) -> Result<ReproReport, CliError> {
    const MULTIPLICITY: usize = 50;
    let draws = cfg.samples.unwrap_or(100_000);
    let mut b = Builder::new(ReproName::TemplateKplusK, cfg, draws);
    let t = Template::new(Graph::empty(2), vec![true, true])?;
    let v = classify_template(&t);
    let witness = v.witness.clone();
    b.check(
        "template verdict",
        v.label == Label::NonUniform && witness.as_ref().is_some_and(|w| w.sampler == "block"),
        format!("{:?} {}", v.label, v.certificate),
    );
    if let Some(w) = witness {
        let s = prepare(&SamplerSpec::block(cfg.seed), &w.graph)?;
        let fam = check_uniformity(&s, &w.graph, &cfg.opts("witness", cfg.k_max.unwrap_or(3), BATTERY_SAMPLES))?;
        b.family("block witness rejects uniformity", fam, false);
    }
    let spec = BlowUpSpec::uniform(t, MULTIPLICITY)?;
    let st = estimate_blowup_statistics(&SamplerSpec::block(cfg.seed), &spec, 0, 1, draws, cfg.sub("blowup"))?;
    let two_point = st.v_samples.iter().all(|&x| x == 0.0 || x == 1.0);
    b.metric("mean_v", st.mean_v());
    b.metric("mean_moment_sum", st.mean_moment_sum());
    b.check("V two-point on {0, 1}", two_point, format!("{} draws", st.draws));
    b.within("mean of V", st.mean_v(), 0.5, 0.01);
    b.check(
        "moment sum above 0.9",
        st.mean_moment_sum() > 0.9,
        format!("{}", st.mean_moment_sum()),
    );
    Ok(b.finish())
}

/// Whether a cell (tuple positions listed from smallest key up) has the
/// first `n` positions in increasing order and every later position below
/// position `k - 1`.
fn addx_event(order: &[usize], n: usize, k: usize) -> bool {
    let clique: Vec<usize> = order.iter().copied().filter(|&p| p < n).collect();
    if clique.iter().enumerate().any(|(i, &p)| i != p) {
        return false;
    }
    let pivot = order.iter().position(|&p| p == k - 1).expect("position present");
    order.iter().skip(pivot).all(|&p| p < n)
}

/// Monte Carlo of the one- and two-extra-variable formulas on every (n, k)
/// with n up to 4, at three offsets.
fn addx_grid(cfg: &ReproConfig) -> Result<ReproReport, CliError> {
    let n_draws = cfg.samples.unwrap_or(1_000_000);
    let mut b = Builder::new(ReproName::AddxGrid, cfg, n_draws);
    let anchors = [((1, 1), 1.0 / 8.0), ((2, 1), 3.0 / 8.0), ((1, 2), 1.0 / 24.0)];
    for n in 2..=4usize {
        for alpha in [0.0, 0.3, 0.5] {
            for j in 1..=2u8 {
                let clique = named::complete(n);
                let g = clique.disjoint_union(&Graph::empty(j as usize));
                let s = prepare(&SamplerSpec::disjoint_copies(clique, Param::Value(alpha), cfg.seed), &g)?;
                let tuple: Vec<usize> = (0..g.n()).collect();
                let label = format!("addx n={n} alpha={alpha} j={j}");
                let d = estimate_distributions(&s, &[tuple], n_draws, cfg.sub(&label), "addx")?.remove(0);
                let cells: Vec<Vec<usize>> = (0..d.counts.len()).map(|c| perm_from_index(c, g.n())).collect();
                for k in 1..=n {
                    let hits: u64 = cells
                        .iter()
                        .zip(&d.counts)
                        .filter(|(c, _)| addx_event(c, n, k))
                        .map(|(_, &h)| h)
                        .sum();
                    let p = hits as f64 / n_draws as f64;
                    let exact = addx_probability(n, k, alpha, ExtraVariables::try_from(j)?)?.value;
                    let se = (exact * (1.0 - exact) / n_draws as f64).sqrt();
                    let name = format!("n={n} k={k} alpha={alpha} j={j}");
                    b.metric(format!("{name} estimate"), p);
                    b.metric(format!("{name} exact"), exact);
                    b.within(format!("{name} within 4 SE"), p, exact, 4.0 * se);
                    if n == 2 && alpha == 0.0 {
                        if let Some(&(_, anchor)) = anchors.iter().find(|(kj, _)| *kj == (k, j)) {
                            b.within(format!("{name} formula anchor"), exact, anchor, 1e-12);
                            b.within(format!("{name} Monte Carlo anchor"), p, anchor, 0.002);
                        }
                    }
                }
            }
        }
    }
    Ok(b.finish())
}

/// Monte Carlo of the order-reversal differences for two negatively signed
/// variables in the mod-1 constraint.
fn edgedist_grid(cfg: &ReproConfig) -> Result<ReproReport, CliError> {
    let n = cfg.samples.unwrap_or(10_000_000);
    let mut b = Builder::new(ReproName::EdgedistGrid, cfg, n);
    // vertices 0 and 2 carry sign -1 through the single edge
    let g3 = Graph::from_edges(3, &[(0, 2)])?;
    for alpha in [0.0, 0.2, 0.4, 0.6, 0.8] {
        let s = prepare(&SamplerSpec::mod1_edge(Param::Value(alpha), cfg.seed), &g3)?;
        let (m, se) = estimate_mean(&s, n, cfg.sub(&format!("pair-{alpha}")), |k| {
            ind(k[0] < k[1] && k[1] < k[2]) - ind(k[1] < k[0] && k[0] < k[2])
        });
        let exact = edgedist_delta(3, alpha, DeltaOrder::Pair)?.value;
        let name = format!("pair n=3 alpha={alpha}");
        b.metric(format!("{name} estimate"), m);
        b.metric(format!("{name} exact"), exact);
        b.metric(format!("{name} se"), se);
        b.within(format!("{name} within 4 SE"), m, exact, 4.0 * se);
        if alpha == 0.0 {
            b.within("pair anchor -1/4", exact, -0.25, 1e-12);
        }
    }
    let g4 = Graph::from_edges(4, &[(0, 3)])?;
    let s = prepare(&SamplerSpec::mod1_edge(Param::Value(0.0), cfg.seed), &g4)?;
    let (m, se) = estimate_mean(&s, n, cfg.sub("triple"), |k| {
        ind(k[0] < k[1] && k[1] < k[2] && k[2] < k[3]) - ind(k[1] < k[0] && k[0] < k[2] && k[2] < k[3])
    });
    let exact = edgedist_delta(4, 0.0, DeltaOrder::Triple)?.value;
    b.metric("triple n=4 alpha=0 estimate", m);
    b.metric("triple n=4 alpha=0 exact", exact);
    b.metric("triple n=4 alpha=0 se", se);
    b.within("triple formula anchor 1/12", exact, 1.0 / 12.0, 1e-12);
    b.within("triple Monte Carlo 1/12", m, 1.0 / 12.0, 0.002);
    Ok(b.finish())
}
