//! Points with `‖p_x − p_y‖² = 2 − 2ε a_xy`, from `B = (I + εA)^{1/2}`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// `1 / (2Δ)`, or `1/2` for edgeless graphs.
pub fn default_epsilon(g: &Graph) -> f64 {
    match g.max_degree() {
        0 => 0.5,
        d => 1.0 / (2.0 * d as f64),
    }
}

pub fn check_epsilon(g: &Graph, eps: f64) -> Result<()> {
    let d = g.max_degree();
    if !eps.is_finite() || (d > 0 && !(eps > 0.0 && eps * (d as f64) < 1.0)) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must satisfy 0 < epsilon < 1/{d}, got {eps}"
        )));
    }
    Ok(())
}

/// Symmetric `B` with `B² = I + εA`; row `x` is the point `p_x`.
pub fn embed_spectral(g: &Graph, eps: f64) -> Result<DMatrix<f64>> {
    check_epsilon(g, eps)?;
    let n = g.n();
    let a = DMatrix::from_fn(n, n, |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 });
    let eig = SymmetricEigen::try_new(a, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("eigendecomposition did not converge".into()))?;
    let mut roots = eig.eigenvalues.clone();
    for r in roots.iter_mut() {
        let v: f64 = 1.0 + eps * *r;
        if v <= 0.0 {
            return Err(Error::Numerical(format!("I + eps*A is not positive definite ({v})")));
        }
        *r = v.sqrt();
    }
    let q = &eig.eigenvectors;
    Ok(q * DMatrix::from_diagonal(&roots) * q.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    fn dist2(b: &DMatrix<f64>, x: usize, y: usize) -> f64 {
        (b.row(x) - b.row(y)).norm_squared()
    }

    #[test]
    fn distance_examples() {
        let b = embed_spectral(&complete(2), 0.25).unwrap();
        assert!((dist2(&b, 0, 1) - 1.5).abs() < 1e-12);
        let b = embed_spectral(&Graph::empty(2), 3.0).unwrap();
        assert!((dist2(&b, 0, 1) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn gram_identity_on_p3() {
        let g = path(3);
        let b = embed_spectral(&g, 0.25).unwrap();
        let gram = b.transpose() * &b;
        for i in 0..3 {
            for j in 0..3 {
                let want = (i == j) as u8 as f64 + if g.has_edge(i, j) { 0.25 } else { 0.0 };
                assert!((gram[(i, j)] - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn epsilon_range() {
        assert!(embed_spectral(&path(3), 0.5).is_err());
        assert!(embed_spectral(&path(3), 0.0).is_err());
        assert!(embed_spectral(&path(3), 0.49).is_ok());
        assert_eq!(default_epsilon(&star(4)), 0.125);
        assert_eq!(default_epsilon(&Graph::empty(3)), 0.5);
    }
}
