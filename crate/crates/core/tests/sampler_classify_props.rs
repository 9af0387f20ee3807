//! Sampler invariants, classifier symmetries and witness executions.

use ordlab_core::classify::{classify_forbidden_family, graphs_of_order};
use ordlab_core::graph::{Graph, are_isomorphic, named};
use ordlab_core::lab::{LabOptions, check_uniformity};
use ordlab_core::sampler::{Param, PreparedSampler, SamplerSpec};
use ordlab_core::verdict::Label;
use petgraph::algo::connected_components;
use petgraph::graph::UnGraph;
use proptest::prelude::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
            let edges: Vec<_> = pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e).collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

fn small_graphs() -> Vec<Graph> {
    (2..=5).flat_map(graphs_of_order).collect()
}

fn arb_family() -> impl Strategy<Value = Vec<Graph>> {
    let pool = small_graphs();
    proptest::sample::subsequence(pool, 1..=3)
}

fn connected_without(g: &Graph, removed: Option<usize>) -> bool {
    let mut p = UnGraph::<(), ()>::new_undirected();
    let keep: Vec<usize> = g.vertices().filter(|&v| Some(v) != removed).collect();
    let idx: Vec<_> = keep.iter().map(|_| p.add_node(())).collect();
    for (i, &u) in keep.iter().enumerate() {
        for (j, &v) in keep.iter().enumerate().skip(i + 1) {
            if g.has_edge(u, v) {
                p.add_edge(idx[i], idx[j], ());
            }
        }
    }
    connected_components(&p) == 1
}

fn two_connected_brute(g: &Graph) -> bool {
    g.n() >= 3 && connected_without(g, None) && g.vertices().all(|v| connected_without(g, Some(v)))
}

fn twins_brute(g: &Graph, adjacent: bool) -> bool {
    g.vertices().any(|u| {
        (u + 1..g.n()).any(|v| {
            g.has_edge(u, v) == adjacent
                && g.vertices().filter(|&w| w != u && w != v).all(|w| g.has_edge(u, w) == g.has_edge(v, w))
        })
    })
}

fn samplers_for(g: &Graph, seed: u64) -> Vec<SamplerSpec> {
    let mut out = vec![SamplerSpec::uniform(seed), SamplerSpec::spectral(Param::Auto, seed)];
    if g.edge_count() > 0 {
        out.push(SamplerSpec::mod1_edge(Param::Auto, seed));
    }
    if g.is_clique_union() || g.is_complete_multipartite() {
        out.push(SamplerSpec::block(seed));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orderings_are_deterministic_permutations(g in arb_graph(8), seed in any::<u64>()) {
        for spec in samplers_for(&g, seed) {
            let s = PreparedSampler::prepare(&spec, &g).unwrap();
            let a = s.orderings(50);
            let b = PreparedSampler::prepare(&spec, &g).unwrap().orderings(50);
            prop_assert_eq!(&a, &b);
            for o in &a {
                let mut order = o.order();
                order.sort_unstable();
                prop_assert_eq!(order, (0..g.n()).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn forbidden_family_verdicts_commute_with_complements(family in arb_family()) {
        let v = classify_forbidden_family(&family);
        let co: Vec<Graph> = family.iter().map(Graph::complement).collect();
        let w = classify_forbidden_family(&co);
        prop_assert_eq!(v.label, w.label);
        prop_assert_eq!(&v.certificate, &w.certificate);
        if let (Some(a), Some(b)) = (&v.witness, &w.witness) {
            prop_assert!(are_isomorphic(&a.graph, &b.graph.complement()));
        }
    }

    #[test]
    fn uniform_verdicts_cite_true_predicates(family in arb_family()) {
        let v = classify_forbidden_family(&family);
        if v.label != Label::Uniform {
            return Ok(());
        }
        let detail = v.detail.clone().unwrap_or_default();
        match v.certificate.as_str() {
            "t:free" if detail == "no-adjacent-twins" => {
                prop_assert!(family.iter().all(|h| !twins_brute(h, true)));
            }
            "t:free" => {
                prop_assert_eq!(detail.as_str(), "no-nonadjacent-twins");
                prop_assert!(family.iter().all(|h| !twins_brute(h, false)));
            }
            "t:joins" if detail.starts_with("complement") => {
                prop_assert!(family.iter().all(|h| two_connected_brute(&h.complement())));
            }
            "t:joins" => prop_assert!(family.iter().all(two_connected_brute)),
            "homogeneous" => {
                let p3 = named::path(3);
                let survives = |g: &Graph| !family.iter().any(|h| ordlab_core::graph::has_induced_copy(h, g));
                prop_assert!(!survives(&p3) && !survives(&p3.complement()));
            }
            other => prop_assert!(false, "unexpected certificate {}", other),
        }
    }
}

fn rejects(spec: SamplerSpec, g: &Graph) -> bool {
    let opts = LabOptions {
        samples: 100_000,
        seed: 7,
        ..LabOptions::default()
    };
    let s = PreparedSampler::prepare(&spec, g).unwrap();
    !check_uniformity(&s, g, &opts).unwrap().pass
}

#[test]
fn non_uniform_witnesses_are_rejected() {
    let k2k1 = named::from_name("K2+K1").unwrap();
    let v = classify_forbidden_family(&[named::path(3)]);
    assert!(are_isomorphic(&v.witness.as_ref().unwrap().graph, &k2k1));
    assert!(rejects(SamplerSpec::block(1), &k2k1));
    assert!(rejects(SamplerSpec::block(2), &named::path(3)));
    assert!(rejects(SamplerSpec::spectral(Param::Auto, 3), &named::path(3)));
    assert!(!rejects(SamplerSpec::uniform(4), &named::path(3)));
}
