//! Coboundary operators, weighted adjoints and Hodge Laplacians as matrices.
//!
//! Rows and columns follow the lexicographic clique order of the complex, with
//! every clique oriented by ascending vertex order. `δ_k` maps `k`-cochains
//! (values on `(k+1)`-cliques) to `(k+1)`-cochains.

use nalgebra::DMatrix;

use crate::cochain::{Cochain, WeightScheme};
use crate::complex::CliqueComplex;
use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

/// A linear map between cochain spaces, realized as a matrix.
pub trait CochainMap {
    fn source_degree(&self) -> usize;
    fn target_degree(&self) -> usize;
    fn matrix(&self) -> &SparseMatrix;

    fn apply(&self, c: &Cochain) -> Result<Cochain> {
        if c.degree() != self.source_degree() {
            return Err(Error::DegreeMismatch {
                expected: self.source_degree(),
                found: c.degree(),
            });
        }
        if c.len() != self.matrix().ncols() {
            return Err(Error::LengthMismatch {
                degree: c.degree(),
                expected: self.matrix().ncols(),
                found: c.len(),
            });
        }
        Ok(Cochain::from_values(
            self.target_degree(),
            self.matrix().mul_vec(c.values()),
        ))
    }
}

/// Matrix of `δ_k`. Entries are in `{-1, 0, +1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoboundaryOperator {
    degree: usize,
    matrix: SparseMatrix,
}

impl CoboundaryOperator {
    pub fn degree(&self) -> usize {
        self.degree
    }
}

impl CochainMap for CoboundaryOperator {
    fn source_degree(&self) -> usize {
        self.degree
    }
    fn target_degree(&self) -> usize {
        self.degree + 1
    }
    fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }
}

/// Weighted adjoint `δ_k*`, mapping `(k+1)`-cochains back to `k`-cochains.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointOperator {
    degree: usize,
    matrix: SparseMatrix,
}

impl CochainMap for AdjointOperator {
    fn source_degree(&self) -> usize {
        self.degree + 1
    }
    fn target_degree(&self) -> usize {
        self.degree
    }
    fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }
}

/// Assembles `δ_k`: the entry at row `σ`, column `τ` is `(-1)^j` when `τ` is
/// `σ` with its `j`-th vertex removed.
pub fn coboundary(cx: &CliqueComplex, k: usize) -> Result<CoboundaryOperator> {
    let cols = cx.cliques(k + 1);
    let rows = cx.cliques(k + 2);
    let (Some(cols), Some(rows)) = (cols, rows) else {
        let max = cx.n_levels().saturating_sub(2);
        return Err(Error::LevelOutOfRange { k, max });
    };
    let mut t = Vec::with_capacity(rows.len() * (k + 2));
    for (r, sigma) in rows.iter().enumerate() {
        for j in 0..sigma.len() {
            let face: Vec<usize> = sigma
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != j)
                .map(|(_, &v)| v)
                .collect();
            let c = cx
                .index_of(&face)
                .expect("clique complexes are closed under taking faces");
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            t.push((r, c, sign));
        }
    }
    Ok(CoboundaryOperator {
        degree: k,
        matrix: SparseMatrix::from_triplets(rows.len(), cols.len(), t),
    })
}

/// Gradient `δ₀`: `(grad f)(i,j) = f(j) - f(i)`.
pub fn gradient(cx: &CliqueComplex) -> Result<CoboundaryOperator> {
    coboundary(cx, 0)
}

/// Curl `δ₁`: `(curl X)(i,j,k) = X(i,j) + X(j,k) + X(k,i)`.
pub fn curl(cx: &CliqueComplex) -> Result<CoboundaryOperator> {
    coboundary(cx, 1)
}

/// Weighted adjoint `W_lower⁻¹ δᵀ W_upper`; equal to the transpose for unit
/// weights.
pub fn adjoint(op: &CoboundaryOperator, w: &WeightScheme) -> Result<AdjointOperator> {
    let k = op.degree;
    let lower = w.level(k, op.matrix.ncols())?;
    let upper = w.level(k + 1, op.matrix.nrows())?;
    let inv_lower: Vec<f64> = lower.iter().map(|x| 1.0 / x).collect();
    Ok(AdjointOperator {
        degree: k,
        matrix: op.matrix.transpose().scale(&inv_lower, &upper),
    })
}

/// Divergence `-grad*`: `(div X)(i) = Σ_j (w_ij / w_i) X(i,j)`.
pub fn divergence(cx: &CliqueComplex, w: &WeightScheme) -> Result<AdjointOperator> {
    let g = gradient(cx)?;
    let adj = adjoint(&g, w)?;
    let n = adj.matrix.nrows();
    let m = adj.matrix.ncols();
    Ok(AdjointOperator {
        degree: 0,
        matrix: adj.matrix.scale(&vec![-1.0; n], &vec![1.0; m]),
    })
}

/// Hodge `k`-Laplacian `δ_{k-1} δ_{k-1}* + δ_k* δ_k`.
///
/// The matrix is self-adjoint in the weighted inner product, i.e. `W L` is
/// symmetric; for unit weights `L` itself is symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct HodgeLaplacian {
    degree: usize,
    matrix: SparseMatrix,
    weights: Vec<f64>,
}

impl HodgeLaplacian {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Weights of the level the Laplacian acts on.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The symmetric matrix `W^{1/2} L W^{-1/2}`, which has the spectrum of `L`
    /// and equals `L` for unit weights.
    pub fn symmetric_dense(&self) -> DMatrix<f64> {
        let s: Vec<f64> = self.weights.iter().map(|w| w.sqrt()).collect();
        let mut m = self.matrix.to_dense();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                m[(i, j)] *= s[i] / s[j];
            }
        }
        // scrub roundoff from the scaling
        (&m + m.transpose()) * 0.5
    }
}

impl CochainMap for HodgeLaplacian {
    fn source_degree(&self) -> usize {
        self.degree
    }
    fn target_degree(&self) -> usize {
        self.degree
    }
    fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }
}

/// Assembles `Δ_k`. The down term is absent for `k = 0`. The up term needs the
/// `(k+2)`-clique level: it may be empty (term vanishes) but must be known,
/// otherwise the Laplacian would silently lose its curl part.
pub fn hodge_laplacian(cx: &CliqueComplex, k: usize, w: &WeightScheme) -> Result<HodgeLaplacian> {
    let dim = cx.count(k + 1).ok_or(Error::LevelOutOfRange {
        k,
        max: cx.n_levels().saturating_sub(1),
    })?;
    if cx.cliques(k + 2).is_none() {
        return Err(Error::LevelNotEnumerated { order: k + 2 });
    }
    let weights = w.level(k, dim)?.into_owned();
    let mut l = SparseMatrix::zeros(dim, dim);
    if k > 0 {
        let down = coboundary(cx, k - 1)?;
        l = l.add(&down.matrix.matmul(&adjoint(&down, w)?.matrix));
    }
    let up = coboundary(cx, k)?;
    l = l.add(&adjoint(&up, w)?.matrix.matmul(&up.matrix));

    // symmetrize W L, then map back
    let wl = l.scale(&weights, &vec![1.0; dim]);
    let sym = SparseMatrix::from_triplets(
        dim,
        dim,
        wl.triplets()
            .flat_map(|(i, j, v)| [(i, j, 0.5 * v), (j, i, 0.5 * v)])
            .collect(),
    );
    let inv: Vec<f64> = weights.iter().map(|x| 1.0 / x).collect();
    Ok(HodgeLaplacian {
        degree: k,
        matrix: sym.scale(&inv, &vec![1.0; dim]),
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{enumerate_cliques, full_complex, Graph};

    #[test]
    fn curl_of_constant_flow_on_c3() {
        let cx = enumerate_cliques(&Graph::cycle(3), 3).unwrap();
        // X(1,2) = X(2,3) = X(3,1) = 2; ascending edges (1,2),(1,3),(2,3)
        let x = Cochain::new(&cx, 1, vec![2.0, -2.0, 2.0]).unwrap();
        let c = curl(&cx).unwrap().apply(&x).unwrap();
        assert_eq!(c.values(), &[6.0]);
    }

    #[test]
    fn curl_on_c4_is_zero_object() {
        let cx = enumerate_cliques(&Graph::cycle(4), 3).unwrap();
        let x = Cochain::new(&cx, 1, vec![2.0; 4]).unwrap();
        let op = curl(&cx).unwrap();
        assert_eq!((op.matrix().nrows(), op.matrix().ncols()), (0, 4));
        assert!(op.apply(&x).unwrap().is_empty());
    }

    #[test]
    fn gradient_is_head_minus_tail() {
        let cx = enumerate_cliques(&Graph::path(3), 2).unwrap();
        let f = Cochain::new(&cx, 0, vec![1.0, 4.0, 9.0]).unwrap();
        let g = gradient(&cx).unwrap().apply(&f).unwrap();
        assert_eq!(g.values(), &[3.0, 5.0]);
    }

    #[test]
    fn out_of_range_levels() {
        let cx = enumerate_cliques(&Graph::complete(4), 3).unwrap();
        assert!(matches!(
            coboundary(&cx, 2),
            Err(Error::LevelOutOfRange { .. })
        ));
        assert!(matches!(
            hodge_laplacian(&cx, 2, &WeightScheme::Unit),
            Err(Error::LevelNotEnumerated { order: 4 })
        ));
        assert!(hodge_laplacian(&cx, 1, &WeightScheme::Unit).is_ok());
    }

    #[test]
    fn laplacian_of_constant_is_zero() {
        let cx = enumerate_cliques(&Graph::wheel(6), 3).unwrap();
        let l0 = hodge_laplacian(&cx, 0, &WeightScheme::Unit).unwrap();
        let f = Cochain::new(&cx, 0, vec![3.5; 6]).unwrap();
        assert!(l0.apply(&f).unwrap().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn weighted_adjoint_halves_entries() {
        let cx = enumerate_cliques(&Graph::cycle(3), 2).unwrap();
        let w = WeightScheme::table(vec![Some(vec![2.0; 3]), Some(vec![1.0; 3])]).unwrap();
        let g = gradient(&cx).unwrap();
        let a = adjoint(&g, &w).unwrap().matrix().to_dense();
        assert_eq!(a, g.matrix().transpose().to_dense() * 0.5);
        let unit = adjoint(&g, &WeightScheme::Unit).unwrap();
        assert_eq!(unit.matrix(), &g.matrix().transpose());
    }

    #[test]
    fn divergence_free_cycle_flow() {
        let cx = enumerate_cliques(&Graph::cycle(3), 2).unwrap();
        let x = Cochain::new(&cx, 1, vec![2.0, -2.0, 2.0]).unwrap();
        let d = divergence(&cx, &WeightScheme::Unit)
            .unwrap()
            .apply(&x)
            .unwrap();
        assert_eq!(d.values(), &[0.0; 3]);
    }

    #[test]
    fn edge_laplacian_differs_from_helmholtzian_on_c3() {
        let cx = enumerate_cliques(&Graph::cycle(3), 3).unwrap();
        let g = gradient(&cx).unwrap();
        let down = g
            .matrix()
            .matmul(adjoint(&g, &WeightScheme::Unit).unwrap().matrix());
        let c = curl(&cx).unwrap();
        let up = adjoint(&c, &WeightScheme::Unit)
            .unwrap()
            .matrix()
            .matmul(c.matrix());
        let h = hodge_laplacian(&cx, 1, &WeightScheme::Unit).unwrap();
        assert_ne!(down.to_dense(), h.matrix().to_dense());
        assert_ne!(up.to_dense(), h.matrix().to_dense());
        assert_eq!(down.add(&up).to_dense(), h.matrix().to_dense());
    }

    #[test]
    fn top_level_laplacian_on_exhausted_complex() {
        let cx = full_complex(&Graph::complete(4));
        let l3 = hodge_laplacian(&cx, 3, &WeightScheme::Unit).unwrap();
        // single tetrahedron: Δ₃ = δ₂ δ₂* = [4]
        assert_eq!(l3.matrix().to_dense()[(0, 0)], 4.0);
    }
}
