//! Numerical subspaces as orthonormal column bases.
//!
//! Singular values and left singular vectors come from the symmetric
//! eigendecomposition of `[[0, M], [Mᵀ, 0]]`, whose eigenpairs are
//! `±σᵢ` with `(uᵢ, ±vᵢ) / √2`. This keeps the resolution of an SVD without
//! squaring the condition number. (nalgebra's SVD loses accuracy on matrices
//! with clustered singular values, such as projectors.)

use nalgebra::DMatrix;

/// Relative rank threshold: singular values at most `RANK_TOLERANCE · σ_max`
/// count as zero.
pub const RANK_TOLERANCE: f64 = 1e-9;

/// Subspace of `ℝⁿ` with orthonormal basis columns.
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: DMatrix<f64>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace {
            basis: DMatrix::zeros(n, 0),
        }
    }

    pub fn full(n: usize) -> Self {
        Subspace {
            basis: DMatrix::identity(n, n),
        }
    }

    /// Column space of `m`.
    pub fn image(m: &DMatrix<f64>) -> Self {
        Subspace::image_above(m, |smax| RANK_TOLERANCE * smax)
    }

    /// Left singular vectors whose singular value exceeds `cutoff(σ_max)`.
    fn image_above(m: &DMatrix<f64>, cutoff: impl Fn(f64) -> f64) -> Self {
        let (n, p) = m.shape();
        if p == 0 || n == 0 {
            return Subspace::zero(n);
        }
        let mut aug = DMatrix::zeros(n + p, n + p);
        aug.view_mut((0, n), (n, p)).copy_from(m);
        aug.view_mut((n, 0), (p, n)).copy_from(&m.transpose());
        let eig = aug.symmetric_eigen();
        let smax = eig.eigenvalues.max();
        let cut = cutoff(smax);
        let keep: Vec<usize> = (0..n + p)
            .filter(|&i| smax > 0.0 && eig.eigenvalues[i] > cut)
            .collect();
        if keep.is_empty() {
            return Subspace::zero(n);
        }
        let u = DMatrix::from_fn(n, keep.len(), |r, c| {
            std::f64::consts::SQRT_2 * eig.eigenvectors[(r, keep[c])]
        });
        Subspace { basis: u.qr().q() }
    }

    /// Null space of `m`, as the complement of the row space.
    pub fn kernel(m: &DMatrix<f64>) -> Self {
        Subspace::image(&m.transpose()).complement()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Orthogonal complement in `ℝⁿ`.
    pub fn complement(&self) -> Self {
        let n = self.ambient_dim();
        let proj = DMatrix::identity(n, n) - &self.basis * self.basis.transpose();
        // singular values of a projector are 0 or 1; a relative cutoff would
        // promote roundoff to rank when the complement is trivial
        Subspace::image_above(&proj, |_| 0.5)
    }

    /// `U + V`.
    pub fn sum(&self, other: &Subspace) -> Self {
        Subspace::image(&stack_columns(&self.basis, &other.basis))
    }

    /// `U ∩ V = (U⊥ + V⊥)⊥`.
    pub fn intersection(&self, other: &Subspace) -> Self {
        self.complement().sum(&other.complement()).complement()
    }

    /// Equal as sets: `dim U = dim V = dim(U + V)`.
    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.sum(other).dim() == self.dim()
    }

    /// Largest entry of `UᵀV` in magnitude is within `RANK_TOLERANCE`.
    pub fn orthogonal_to(&self, other: &Subspace) -> bool {
        let g = self.basis.transpose() * &other.basis;
        g.iter().all(|x| x.abs() <= RANK_TOLERANCE)
    }
}

fn stack_columns(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    DMatrix::from_fn(n, a.ncols() + b.ncols(), |r, c| {
        if c < a.ncols() {
            a[(r, c)]
        } else {
            b[(r, c - a.ncols())]
        }
    })
}

/// Numerical rank with the relative [`RANK_TOLERANCE`].
pub fn rank(m: &DMatrix<f64>) -> usize {
    Subspace::image(m).dim()
}

/// Checks `target = parts[0] ⊕ parts[1] ⊕ …` as an orthogonal direct sum:
/// pairwise orthogonal, dimensions add up, and the sum equals `target`.
pub fn is_orthogonal_direct_sum(target: &Subspace, parts: &[&Subspace]) -> bool {
    let n = target.ambient_dim();
    let total: usize = parts.iter().map(|p| p.dim()).sum();
    let pairwise = parts
        .iter()
        .enumerate()
        .all(|(i, p)| parts[i + 1..].iter().all(|q| p.orthogonal_to(q)));
    let span = parts.iter().fold(Subspace::zero(n), |acc, p| acc.sum(p));
    pairwise && total == target.dim() && span.same_as(target)
}
