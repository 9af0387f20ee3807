//! i.i.d. uniforms conditioned on signed sums mod 1.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `Σ sign_v X_v ≡ alpha (mod 1)`, enforced by resetting `X_pivot`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mod1Constraint {
    /// `(vertex, sign)` with sign `±1`; includes the pivot.
    pub terms: Vec<(usize, i8)>,
    pub pivot: usize,
    pub alpha: f64,
}

impl Mod1Constraint {
    pub fn new(terms: Vec<(usize, i8)>, pivot: usize, alpha: f64) -> Result<Self> {
        if terms.iter().any(|&(_, s)| s != 1 && s != -1) {
            return Err(Error::InvalidArgument("constraint signs must be +1 or -1".into()));
        }
        if terms.iter().filter(|&&(v, _)| v == pivot).count() != 1 {
            return Err(Error::InvalidArgument("pivot must occur exactly once".into()));
        }
        let mut vs: Vec<usize> = terms.iter().map(|t| t.0).collect();
        vs.sort_unstable();
        vs.dedup();
        if vs.len() != terms.len() {
            return Err(Error::InvalidArgument("constraint repeats a vertex".into()));
        }
        Ok(Mod1Constraint { terms, pivot, alpha })
    }

    pub fn apply(&self, x: &mut [f64]) {
        let mut rest = 0.0;
        let mut pivot_sign = 1.0;
        for &(v, s) in &self.terms {
            if v == self.pivot {
                pivot_sign = s as f64;
            } else {
                rest += s as f64 * x[v];
            }
        }
        x[self.pivot] = frac(pivot_sign * (self.alpha - rest));
    }

    /// Distance of `Σ sign_v x_v − alpha` from the nearest integer.
    pub fn residual(&self, x: &[f64]) -> f64 {
        let s: f64 = self.terms.iter().map(|&(v, sg)| sg as f64 * x[v]).sum::<f64>() - self.alpha;
        (s - s.round()).abs()
    }
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Groups of alternative constraints; each draw picks one member of every
/// group uniformly. Pivots may not occur in any other group.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSet {
    n: usize,
    groups: Vec<Vec<Mod1Constraint>>,
}

impl ConstraintSet {
    pub fn new(n: usize, groups: Vec<Vec<Mod1Constraint>>) -> Result<Self> {
        for (gi, group) in groups.iter().enumerate() {
            if group.is_empty() {
                return Err(Error::InvalidArgument("empty constraint group".into()));
            }
            for c in group {
                if let Some(&(v, _)) = c.terms.iter().find(|t| t.0 >= n) {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                let clash = groups.iter().enumerate().any(|(gj, other)| {
                    gj != gi && other.iter().any(|d| d.terms.iter().any(|t| t.0 == c.pivot))
                });
                if clash {
                    return Err(Error::InvalidArgument(format!(
                        "pivot {} appears in another constraint",
                        c.pivot
                    )));
                }
            }
        }
        Ok(ConstraintSet { n, groups })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn groups(&self) -> &[Vec<Mod1Constraint>] {
        &self.groups
    }

    /// Fill `x` and return the index chosen in each group.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, x: &mut [f64]) -> Vec<usize> {
        let mut chosen = Vec::with_capacity(self.groups.len());
        self.sample_into(rng, x, Some(&mut chosen));
        chosen
    }

    pub(crate) fn sample_into<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        x: &mut [f64],
        mut chosen: Option<&mut Vec<usize>>,
    ) {
        for xi in x.iter_mut() {
            *xi = rng.random::<f64>();
        }
        for group in &self.groups {
            let i = if group.len() == 1 { 0 } else { rng.random_range(0..group.len()) };
            group[i].apply(x);
            if let Some(c) = chosen.as_deref_mut() {
                c.push(i);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn frac_is_canonical() {
        assert_eq!(frac(1.0), 0.0);
        assert_eq!(frac(-0.25), 0.75);
        assert_eq!(frac(-1e-18), 0.0);
        assert!(frac(-1e-18) < 1.0);
    }

    #[test]
    fn congruence_holds() {
        let c = Mod1Constraint::new(vec![(0, -1), (1, -1), (2, 1)], 2, 0.3).unwrap();
        let d = Mod1Constraint::new(vec![(3, 1), (4, -1)], 4, 0.7).unwrap();
        let set = ConstraintSet::new(5, vec![vec![c.clone()], vec![d.clone()]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut x = vec![0.0; 5];
        for _ in 0..10_000 {
            set.sample(&mut rng, &mut x);
            assert!(c.residual(&x) < 1e-12 && d.residual(&x) < 1e-12);
            assert!(x.iter().all(|v| (0.0..1.0).contains(v)));
        }
    }

    #[test]
    fn invalid_constraints() {
        assert!(Mod1Constraint::new(vec![(0, 2)], 0, 0.0).is_err());
        assert!(Mod1Constraint::new(vec![(0, 1)], 1, 0.0).is_err());
        let a = Mod1Constraint::new(vec![(0, 1), (1, 1)], 1, 0.0).unwrap();
        let b = Mod1Constraint::new(vec![(1, 1), (2, 1)], 2, 0.0).unwrap();
        assert!(ConstraintSet::new(3, vec![vec![a.clone()], vec![b]]).is_err());
        assert!(ConstraintSet::new(1, vec![vec![a]]).is_err());
    }
}
