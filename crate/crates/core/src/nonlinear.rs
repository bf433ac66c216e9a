//! Graph p-Laplacians, exhaustive Cheeger constants and Cheeger-inequality
//! checks.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::cochain::WeightScheme;
use crate::complex::{enumerate_cliques, Graph};
use crate::error::{Error, Result};
use crate::operators::hodge_laplacian;
use crate::spectral::symmetric_eigenvalues;

fn check_len(g: &Graph, f: &[f64]) -> Result<()> {
    if f.len() != g.n_vertices() {
        return Err(Error::LengthMismatch {
            degree: 0,
            expected: g.n_vertices(),
            found: f.len(),
        });
    }
    Ok(())
}

/// `(L_p f)(i) = Σ_j a_ij |f(j) − f(i)|^{p−2} (f(i) − f(j))`, with the
/// magnitude taken per edge. Edges with `f(i) = f(j)` contribute 0, which at
/// `p = 1` is the selection `sgn(0) = 0`.
pub fn p_laplacian(g: &Graph, f: &[f64], p: f64) -> Result<Vec<f64>> {
    if p.is_nan() || p < 1.0 || p.is_infinite() {
        return Err(Error::Invalid(format!(
            "p must be finite and at least 1, got {p}"
        )));
    }
    check_len(g, f)?;
    Ok((0..g.n_vertices())
        .map(|i| {
            g.neighbors(i)
                .iter()
                .map(|&j| {
                    let d = f[i] - f[j];
                    if d == 0.0 {
                        0.0
                    } else if p == 2.0 {
                        d
                    } else {
                        d.abs().powf(p - 2.0) * d
                    }
                })
                .sum()
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// `L_1 f = −div(sgn(grad f))` with the set-valued `sgn(0) = [−1, 1]`: the
/// per-vertex range over all selections.
pub fn one_laplacian_intervals(g: &Graph, f: &[f64]) -> Result<Vec<Interval>> {
    check_len(g, f)?;
    Ok((0..g.n_vertices())
        .map(|i| {
            let (mut s, mut zeros) = (0.0, 0.0);
            for &j in g.neighbors(i) {
                let d = f[i] - f[j];
                if d == 0.0 {
                    zeros += 1.0;
                } else {
                    s += d.signum();
                }
            }
            Interval {
                lo: s - zeros,
                hi: s + zeros,
            }
        })
        .collect())
}

/// Largest graph accepted by the exhaustive Cheeger search.
pub const MAX_CHEEGER_VERTICES: usize = 24;

/// A bipartition `(S, V∖S)` with its cut size and volumes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    /// Sorted vertex ids; always contains vertex 0.
    pub subset: Vec<usize>,
    pub boundary_edges: u64,
    pub volume: u64,
    pub complement_volume: u64,
    /// `boundary / min(volumes)`, in lowest terms.
    pub ratio: Ratio<u64>,
}

#[derive(Clone, Copy)]
struct Candidate {
    mask: u32,
    cut: u64,
    denom: u64,
}

fn mask_vertices(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |v| mask >> v & 1 == 1)
}

impl Candidate {
    fn order(&self, other: &Candidate) -> Ordering {
        (self.cut as u128 * other.denom as u128)
            .cmp(&(other.cut as u128 * self.denom as u128))
            .then_with(|| mask_vertices(self.mask).cmp(mask_vertices(other.mask)))
    }

    fn better(a: Candidate, b: Candidate) -> Candidate {
        if b.order(&a) == Ordering::Less {
            b
        } else {
            a
        }
    }
}

/// `h(G) = min_S |E(S, V∖S)| / min(Vol S, Vol V∖S)` over all proper nonempty
/// `S`, by exhaustive search over the subsets containing vertex 0. Ties go to
/// the lexicographically smallest sorted vertex list.
pub fn cheeger_constant(g: &Graph) -> Result<Cut> {
    let n = g.n_vertices();
    if n < 2 {
        return Err(Error::Invalid(
            "the Cheeger constant needs at least two vertices".into(),
        ));
    }
    if n > MAX_CHEEGER_VERTICES {
        return Err(Error::TooLarge {
            n,
            max: MAX_CHEEGER_VERTICES,
        });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    let deg: Vec<u64> = (0..n).map(|v| g.degree(v) as u64).collect();
    let total: u64 = deg.iter().sum();
    let full: u32 = (1u32 << n) - 1;
    let rest = 1u32 << (n - 1);
    let best = (0..rest - 1)
        .into_par_iter()
        .map(|m| {
            let mask = 1 | (m << 1);
            let (mut cut, mut vol) = (0u64, 0u64);
            for v in mask_vertices(mask) {
                cut += (adj[v] & !mask & full).count_ones() as u64;
                vol += deg[v];
            }
            Candidate {
                mask,
                cut,
                denom: vol.min(total - vol),
            }
        })
        .reduce_with(Candidate::better)
        .expect("n >= 2 leaves at least one proper subset");
    let volume: u64 = mask_vertices(best.mask).map(|v| deg[v]).sum();
    Ok(Cut {
        subset: mask_vertices(best.mask).collect(),
        boundary_edges: best.cut,
        volume,
        complement_volume: total - volume,
        ratio: Ratio::new(best.cut, best.denom),
    })
}

/// Second-smallest eigenvalue of `I − D^{-1/2} A D^{-1/2}`.
pub fn normalized_lambda2(g: &Graph) -> Result<f64> {
    let n = g.n_vertices();
    if (0..n).any(|v| g.degree(v) == 0) {
        return Err(Error::Invalid(
            "normalized Laplacian needs every degree positive".into(),
        ));
    }
    let d: Vec<f64> = (0..n).map(|v| 1.0 / (g.degree(v) as f64).sqrt()).collect();
    let mut m = DMatrix::identity(n, n);
    for &(a, b) in g.edges() {
        m[(a, b)] -= d[a] * d[b];
        m[(b, a)] -= d[a] * d[b];
    }
    lambda2(symmetric_eigenvalues(m))
}

/// Second-smallest eigenvalue of the unit-weight `Δ₀`.
pub fn laplacian_lambda2(g: &Graph) -> Result<f64> {
    let cx = enumerate_cliques(g, 2)?;
    let l = hodge_laplacian(&cx, 0, &WeightScheme::Unit)?;
    lambda2(symmetric_eigenvalues(l.symmetric_dense()))
}

fn lambda2(eigs: Vec<f64>) -> Result<f64> {
    eigs.get(1)
        .copied()
        .ok_or_else(|| Error::Invalid("λ₂ needs at least two vertices".into()))
}

/// Slack allowed on both sides of the inequality.
pub const CHEEGER_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheegerBounds {
    pub lambda2: f64,
    /// `λ₂ / 2`.
    pub lower: f64,
    /// `√(2 λ₂)`.
    pub upper: f64,
    pub holds: bool,
}

impl CheegerBounds {
    fn new(lambda2: f64, h: f64) -> Self {
        let lower = lambda2 / 2.0;
        let upper = (2.0 * lambda2.max(0.0)).sqrt();
        CheegerBounds {
            lambda2,
            lower,
            upper,
            holds: lower <= h + CHEEGER_EPS && h <= upper + CHEEGER_EPS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheegerReport {
    pub h: f64,
    pub h_numerator: u64,
    pub h_denominator: u64,
    /// 1-indexed witness subset.
    pub subset: Vec<usize>,
    pub boundary_edges: u64,
    pub volume: u64,
    pub complement_volume: u64,
    pub inequality: String,
    /// Asserted form: `λ₂` of the degree-normalized Laplacian.
    pub normalized: CheegerBounds,
    /// Reported only: `λ₂` of the unnormalized `Δ₀`.
    pub unnormalized: CheegerBounds,
}

pub fn cheeger_check(g: &Graph) -> Result<CheegerReport> {
    let cut = cheeger_constant(g)?;
    let h = *cut.ratio.numer() as f64 / *cut.ratio.denom() as f64;
    Ok(CheegerReport {
        h,
        h_numerator: *cut.ratio.numer(),
        h_denominator: *cut.ratio.denom(),
        subset: cut.subset.iter().map(|v| v + 1).collect(),
        boundary_edges: cut.boundary_edges,
        volume: cut.volume,
        complement_volume: cut.complement_volume,
        inequality: "lambda2 / 2 <= h(G) <= sqrt(2 * lambda2)".into(),
        normalized: CheegerBounds::new(normalized_lambda2(g)?, h),
        unnormalized: CheegerBounds::new(laplacian_lambda2(g)?, h),
    })
}
