//! Verdicts for properties given by a finite forbidden family.

use crate::graph::{Graph, TwinStatus, are_isomorphic, has_induced_copy, named, twin_status};
use crate::verdict::Verdict;

pub const NO_ADJACENT_TWINS: &str = "no-adjacent-twins";
pub const NO_NONADJACENT_TWINS: &str = "no-nonadjacent-twins";

fn has_twins(g: &Graph, kind: TwinStatus) -> bool {
    g.vertices().any(|u| {
        (u + 1..g.n()).any(|v| twin_status(g, u, v).expect("vertices in range") == kind)
    })
}

pub fn has_adjacent_twins(g: &Graph) -> bool {
    has_twins(g, TwinStatus::AdjacentTwins)
}

pub fn has_nonadjacent_twins(g: &Graph) -> bool {
    has_twins(g, TwinStatus::NonadjacentTwins)
}

/// Whether some member of the family is isomorphic to `g`.
fn forbids(family: &[Graph], g: &Graph) -> bool {
    family.iter().any(|h| are_isomorphic(h, g))
}

/// Whether `g` avoids every member of the family as an induced subgraph.
pub fn survives(family: &[Graph], g: &Graph) -> bool {
    !family.iter().any(|h| has_induced_copy(h, g))
}

/// Classify the property of graphs with no induced subgraph in `family`.
///
/// In order: the twin-free criterion (reporting which twin type is absent),
/// 2-connectivity of every forbidden graph or of every complement, the
/// homogeneous case when no member contains `P3` or its complement, the
/// block-order witnesses when exactly one of them is forbidden, and
/// otherwise unknown.
pub fn classify_forbidden_family(family: &[Graph]) -> Verdict {
    let p3 = named::path(3);
    let co_p3 = p3.complement();
    let has_p3 = forbids(family, &p3);
    let has_co_p3 = forbids(family, &co_p3);
    if !has_p3 && !has_co_p3 {
        if !family.iter().any(has_adjacent_twins) {
            return Verdict::uniform("t:free").with_detail(NO_ADJACENT_TWINS);
        }
        if !family.iter().any(has_nonadjacent_twins) {
            return Verdict::uniform("t:free").with_detail(NO_NONADJACENT_TWINS);
        }
    }
    if !family.is_empty() && family.iter().all(Graph::is_two_connected) {
        return Verdict::uniform("t:joins").with_detail("every forbidden graph is 2-connected");
    }
    if !family.is_empty() && family.iter().all(|h| h.complement().is_two_connected()) {
        return Verdict::uniform("t:joins").with_detail("complement: every forbidden complement is 2-connected");
    }
    if !survives(family, &p3) && !survives(family, &co_p3) {
        return Verdict::uniform("homogeneous").with_detail("every member is complete or edgeless");
    }
    if has_p3 && survives(family, &co_p3) {
        return Verdict::non_uniform("x:unionKn", "block", co_p3)
            .with_detail("members are disjoint unions of cliques");
    }
    if has_co_p3 && survives(family, &p3) {
        return Verdict::non_uniform("x:unionKn", "block", p3)
            .with_detail("complement: members are complete multipartite");
    }
    Verdict::unknown()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::verdict::Label;

    #[test]
    fn twins() {
        assert!(has_adjacent_twins(&complete(3)) && !has_nonadjacent_twins(&complete(3)));
        assert!(!has_adjacent_twins(&star(3)) && has_nonadjacent_twins(&star(3)));
        assert!(!has_adjacent_twins(&cycle(5)) && !has_nonadjacent_twins(&cycle(5)));
    }

    #[test]
    fn regressions() {
        let v = classify_forbidden_family(&[complete(3)]);
        assert_eq!((v.label, v.certificate.as_str()), (Label::Uniform, "t:free"));
        assert_eq!(v.detail.as_deref(), Some(NO_NONADJACENT_TWINS));
        let v = classify_forbidden_family(&[star(3)]);
        assert_eq!(v.detail.as_deref(), Some(NO_ADJACENT_TWINS));
        let v = classify_forbidden_family(&[cycle(3), cycle(4)]);
        assert_eq!((v.label, v.certificate.as_str()), (Label::Uniform, "t:joins"));
        let v = classify_forbidden_family(&[path(3)]);
        assert_eq!((v.label, v.certificate.as_str()), (Label::NonUniform, "x:unionKn"));
        assert!(are_isomorphic(&v.witness.unwrap().graph, &path(3).complement()));
        let v = classify_forbidden_family(&[path(3).complement()]);
        assert_eq!(v.label, Label::NonUniform);
        assert!(are_isomorphic(&v.witness.unwrap().graph, &path(3)));
    }

    #[test]
    fn edge_cases() {
        assert_eq!(classify_forbidden_family(&[]).certificate, "t:free");
        let v = classify_forbidden_family(&[path(3), path(3).complement()]);
        assert_eq!((v.label, v.certificate.as_str()), (Label::Uniform, "homogeneous"));
        // P3 forbidden together with K2: only edgeless graphs survive
        let v = classify_forbidden_family(&[path(3), complete(2)]);
        assert_eq!(v.certificate, "homogeneous");
        let v = classify_forbidden_family(&[path(3), star(3).complement()]);
        assert_eq!(v.label, Label::NonUniform);
        // Ramsey: a finite property that none of the rules decides
        let v = classify_forbidden_family(&[complete(3), Graph::empty(3)]);
        assert_eq!(v.label, Label::Unknown);
        // complements of {C3, C4}
        let v = classify_forbidden_family(&[cycle(3).complement(), cycle(4).complement()]);
        assert_eq!((v.label, v.certificate.as_str()), (Label::Uniform, "t:joins"));
    }
}
