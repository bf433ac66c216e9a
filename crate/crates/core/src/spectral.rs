//! Spectra of Hodge Laplacians, Betti numbers and harmonic bases.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::cochain::{Cochain, WeightScheme};
use crate::complex::{enumerate_cliques, CliqueComplex, Graph};
use crate::error::Result;
use crate::operators::{hodge_laplacian, HodgeLaplacian};

/// Floor for the kernel tolerance.
pub const MIN_KERNEL_TOLERANCE: f64 = 1e-12;

/// Absolute tolerance when comparing two spectra.
pub const FINGERPRINT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    #[serde(rename = "k")]
    pub degree: usize,
    /// Ascending, with multiplicity.
    pub eigenvalues: Vec<f64>,
    #[serde(rename = "betti")]
    pub kernel_dim: usize,
    pub tolerance: f64,
}

/// Default kernel threshold `max(dim · ε · λ_max, 1e-12)`.
pub fn kernel_tolerance(dim: usize, lambda_max: f64) -> f64 {
    (dim as f64 * f64::EPSILON * lambda_max.abs()).max(MIN_KERNEL_TOLERANCE)
}

struct Eigen {
    values: Vec<f64>,
    /// Columns are eigenvectors, ordered like `values`.
    vectors: DMatrix<f64>,
}

fn sorted_eigen(m: DMatrix<f64>) -> Eigen {
    let n = m.nrows();
    if n == 0 {
        return Eigen {
            values: Vec::new(),
            vectors: DMatrix::zeros(0, 0),
        };
    }
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Eigen { values, vectors }
}

/// Eigenvalues of a symmetric matrix in ascending order.
pub fn symmetric_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    sorted_eigen(m).values
}

/// Full spectrum of `Δ_k` with the default kernel tolerance.
pub fn spectrum(l: &HodgeLaplacian) -> Spectrum {
    spectrum_with_tolerance(l, None)
}

/// Full spectrum of `Δ_k`; `tolerance` overrides the kernel threshold.
pub fn spectrum_with_tolerance(l: &HodgeLaplacian, tolerance: Option<f64>) -> Spectrum {
    let eigenvalues = symmetric_eigenvalues(l.symmetric_dense());
    let lambda_max = eigenvalues.last().copied().unwrap_or(0.0);
    let tol = tolerance.unwrap_or_else(|| kernel_tolerance(l.dim(), lambda_max));
    let kernel_dim = eigenvalues.iter().filter(|&&x| x <= tol).count();
    Spectrum {
        degree: l.degree(),
        eigenvalues,
        kernel_dim,
        tolerance: tol,
    }
}

/// `β_k = dim ker Δ_k`.
pub fn betti(cx: &CliqueComplex, k: usize, w: &WeightScheme) -> Result<usize> {
    Ok(spectrum(&hodge_laplacian(cx, k, w)?).kernel_dim)
}

/// Orthonormal basis (in the weighted inner product) of `ker Δ_k`.
///
/// Each vector is sign-normalized so its largest-magnitude entry (first one
/// on ties) is positive.
pub fn harmonic_basis(cx: &CliqueComplex, k: usize, w: &WeightScheme) -> Result<Vec<Cochain>> {
    let l = hodge_laplacian(cx, k, w)?;
    let eig = sorted_eigen(l.symmetric_dense());
    let lambda_max = eig.values.last().copied().unwrap_or(0.0);
    let tol = kernel_tolerance(l.dim(), lambda_max);
    let inv_sqrt: Vec<f64> = l.weights().iter().map(|x| 1.0 / x.sqrt()).collect();
    let mut basis = Vec::new();
    for (c, &lambda) in eig.values.iter().enumerate() {
        if lambda > tol {
            break;
        }
        let mut v: Vec<f64> = eig
            .vectors
            .column(c)
            .iter()
            .zip(&inv_sqrt)
            .map(|(x, s)| x * s)
            .collect();
        let pivot = v.iter().copied().fold(0.0f64, |best, x| {
            if x.abs() > best.abs() + 1e-12 {
                x
            } else {
                best
            }
        });
        if pivot < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        basis.push(Cochain::from_values(k, v));
    }
    Ok(basis)
}

/// Unit-weight spectra of `Δ_0, ..., Δ_max_k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fingerprint {
    pub spectra: Vec<Spectrum>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FingerprintComparison {
    pub distinguished: bool,
    /// Lowest `k` whose spectra differ.
    pub distinguished_at: Option<usize>,
    pub max_k: usize,
}

pub fn isospectral_fingerprint(g: &Graph, max_k: usize) -> Result<Fingerprint> {
    let cx = enumerate_cliques(g, max_k + 2)?;
    let spectra = (0..=max_k)
        .map(|k| hodge_laplacian(&cx, k, &WeightScheme::Unit).map(|l| spectrum(&l)))
        .collect::<Result<_>>()?;
    Ok(Fingerprint { spectra })
}

impl Fingerprint {
    pub fn compare(&self, other: &Fingerprint) -> FingerprintComparison {
        self.compare_with(other, FINGERPRINT_TOLERANCE)
    }

    /// Like [`compare`](Self::compare) with an explicit absolute tolerance.
    pub fn compare_with(&self, other: &Fingerprint, tolerance: f64) -> FingerprintComparison {
        let max_k = self
            .spectra
            .len()
            .min(other.spectra.len())
            .saturating_sub(1);
        let distinguished_at =
            self.spectra.iter().zip(&other.spectra).position(|(a, b)| {
                !spectra_match_within(&a.eigenvalues, &b.eigenvalues, tolerance)
            });
        FingerprintComparison {
            distinguished: distinguished_at.is_some(),
            distinguished_at,
            max_k,
        }
    }
}

/// Equal length and every sorted eigenvalue within [`FINGERPRINT_TOLERANCE`].
pub fn spectra_match(a: &[f64], b: &[f64]) -> bool {
    spectra_match_within(a, b, FINGERPRINT_TOLERANCE)
}

pub fn spectra_match_within(a: &[f64], b: &[f64], tolerance: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tolerance)
}
