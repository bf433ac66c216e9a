//! Iterative least squares by conjugate gradients on the normal equations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

/// Default relative tolerance on `‖Aᵀr‖ / ‖Aᵀb‖`.
pub const DEFAULT_RELATIVE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsqOptions {
    pub relative_tolerance: f64,
    /// Iteration cap; `None` means `10 · ncols`.
    pub max_iterations: Option<usize>,
}

impl Default for LsqOptions {
    fn default() -> Self {
        LsqOptions {
            relative_tolerance: DEFAULT_RELATIVE_TOLERANCE,
            max_iterations: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveStats {
    pub iterations: usize,
    /// `‖b − Ax‖`.
    pub residual: f64,
    /// `‖Aᵀ(b − Ax)‖`.
    pub normal_residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimum-norm solution of `min ‖Ax − b‖` by CGLS started from zero.
///
/// Fails with [`Error::NonConvergence`] if the normal residual does not drop
/// below the relative tolerance within the iteration cap. The target never
/// goes below the roundoff level `n · ε · ‖A‖_F · ‖b‖`, so right-hand sides
/// that are numerically orthogonal to the range still converge.
pub fn cgls(a: &SparseMatrix, b: &[f64], opts: &LsqOptions) -> Result<(Vec<f64>, SolveStats)> {
    assert_eq!(b.len(), a.nrows(), "right-hand side length");
    let n = a.ncols();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut s = a.tr_mul_vec(&r);
    let mut gamma = dot(&s, &s);
    let a_norm = a.triplets().map(|(_, _, v)| v * v).sum::<f64>().sqrt();
    let floor = (n.max(1) as f64) * f64::EPSILON * a_norm * dot(b, b).sqrt();
    let target = (opts.relative_tolerance * gamma.sqrt()).max(floor);
    let stats = |r: &[f64], gamma: f64, it| SolveStats {
        iterations: it,
        residual: dot(r, r).sqrt(),
        normal_residual: gamma.sqrt(),
    };
    if gamma.sqrt() <= floor {
        return Ok((x, stats(&r, gamma, 0)));
    }
    let initial = gamma.sqrt();
    let cap = opts.max_iterations.unwrap_or(10 * n).max(1);
    let mut p = s.clone();
    let mut best = (x.clone(), gamma);
    for it in 1..=cap {
        let q = a.mul_vec(&p);
        let qq = dot(&q, &q);
        if qq == 0.0 {
            break;
        }
        let alpha = gamma / qq;
        x.iter_mut().zip(&p).for_each(|(xi, pi)| *xi += alpha * pi);
        r.iter_mut().zip(&q).for_each(|(ri, qi)| *ri -= alpha * qi);
        s = a.tr_mul_vec(&r);
        let next = dot(&s, &s);
        if next < best.1 {
            best = (x.clone(), next);
        }
        if next.sqrt() <= target {
            return Ok((x, stats(&r, next, it)));
        }
        let beta = next / gamma;
        gamma = next;
        p.iter_mut()
            .zip(&s)
            .for_each(|(pi, si)| *pi = si + beta * *pi);
    }
    Err(Error::NonConvergence {
        iterations: cap,
        residual: best.1.sqrt() / initial,
    })
}
