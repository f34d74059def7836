//! Dense adjacency matrices and a general symmetric eigensolver, used as an
//! independent check on the character-sum spectra.

use fqeuclid::{ColoredCayleyGraph, FieldElement};
use nalgebra::DMatrix;

/// Default cap on `q^d` for [`dense_spectrum_oracle`].
pub const DENSE_CAP: usize = 1000;

/// 0/1 adjacency matrix of color class `a`, built pair by pair from `Q(x - y)`.
pub fn adjacency_matrix(g: &ColoredCayleyGraph, a: FieldElement) -> DMatrix<f64> {
    let n = g.size();
    DMatrix::from_fn(n, n, |u, v| if u != v && g.color(u, v) == Some(a) { 1.0 } else { 0.0 })
}

/// Sorted (descending) eigenvalues of color class `a` from a dense
/// symmetric eigendecomposition.
pub fn dense_spectrum_oracle(g: &ColoredCayleyGraph, a: FieldElement, cap: usize) -> fqeuclid::Result<Vec<f64>> {
    if g.size() > cap {
        return Err(fqeuclid::Error::TooLarge {
            size: g.size() as u128,
            cap: cap as u128,
        });
    }
    let mut values: Vec<f64> = adjacency_matrix(g, a).symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fqeuclid::spectrum::full_spectrum;
    use fqeuclid::{Field, QuadraticSpace};

    fn graph(p: u32, d: usize) -> ColoredCayleyGraph {
        ColoredCayleyGraph::new(QuadraticSpace::euclidean(Field::new(p, 1, None).unwrap(), d).unwrap())
    }

    #[test]
    fn matrix_shape() {
        let g = graph(5, 2);
        for a in g.colors() {
            let m = adjacency_matrix(&g, a);
            assert_eq!(m, m.transpose());
            assert!(m.diagonal().iter().all(|&x| x == 0.0));
            for row in m.row_iter() {
                assert_eq!(row.sum(), g.valency(a) as f64);
            }
        }
    }

    #[test]
    fn f3_plane_matches_character_sums() {
        let g = graph(3, 2);
        let a = g.field().one();
        let dense = dense_spectrum_oracle(&g, a, DENSE_CAP).unwrap();
        let sums = full_spectrum(&g, a).unwrap();
        for (x, y) in dense.iter().zip(&sums.eigenvalues) {
            assert!((x - y).abs() < 1e-6);
        }
    }

    #[test]
    fn cap_enforced() {
        let g = graph(5, 2);
        assert!(matches!(
            dense_spectrum_oracle(&g, g.field().one(), 24),
            Err(fqeuclid::Error::TooLarge { size: 25, cap: 24 })
        ));
    }
}
