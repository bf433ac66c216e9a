//! Hodge decomposition of cochains by least squares, and a checker for the
//! subspace identities behind it on abstract matrix pairs with `AB = 0`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::cochain::{norm, Cochain, WeightScheme};
use crate::complex::CliqueComplex;
use crate::error::{Error, Result};
use crate::lsq::{cgls, LsqOptions, SolveStats};
use crate::operators::{adjoint, coboundary, hodge_laplacian, CochainMap};
use crate::sparse::SparseMatrix;
use crate::subspace::{is_orthogonal_direct_sum, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Separate least-squares solves for the exact and coexact parts.
    #[default]
    TwoSolve,
    /// One solve against `Δ_k`; the residual is the harmonic part.
    LaplacianResidual,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-solve" => Ok(Method::TwoSolve),
            "laplacian-residual" => Ok(Method::LaplacianResidual),
            _ => Err(Error::Invalid(format!(
                "unknown decomposition method `{s}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitNorms {
    pub input: f64,
    pub exact: f64,
    pub coexact: f64,
    pub harmonic: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct SplitResiduals {
    pub exact: Option<SolveStats>,
    pub coexact: Option<SolveStats>,
    pub laplacian: Option<SolveStats>,
}

/// `input = exact + harmonic + coexact`, orthogonal in the weighted inner
/// product.
#[derive(Debug, Clone, PartialEq)]
pub struct HodgeSplit {
    pub method: Method,
    pub input: Cochain,
    /// In `im δ_{k-1}`; zero for `k = 0`.
    pub exact: Cochain,
    /// `g` with `δ_{k-1} g = exact`. Absent for `k = 0`. For `k = 1` it has
    /// mean zero on every connected component.
    pub potential: Option<Cochain>,
    /// In `im δ_k*`.
    pub coexact: Cochain,
    /// `h` with `δ_k* h = coexact`.
    pub prepotential: Cochain,
    pub harmonic: Cochain,
    pub norms: SplitNorms,
    pub residuals: SplitResiduals,
}

impl HodgeSplit {
    pub fn degree(&self) -> usize {
        self.input.degree()
    }
}

fn sqrt_all(w: &[f64]) -> Vec<f64> {
    w.iter().map(|x| x.sqrt()).collect()
}

fn inv_sqrt_all(w: &[f64]) -> Vec<f64> {
    w.iter().map(|x| 1.0 / x.sqrt()).collect()
}

fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

/// Subtracts the plain mean of `g` on every connected component.
fn center_per_component(cx: &CliqueComplex, g: &mut [f64]) {
    let labels = cx.graph().component_labels();
    let n_comp = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut sum = vec![0.0; n_comp];
    let mut count = vec![0usize; n_comp];
    for (v, &l) in labels.iter().enumerate() {
        sum[l] += g[v];
        count[l] += 1;
    }
    for (v, &l) in labels.iter().enumerate() {
        g[v] -= sum[l] / count[l] as f64;
    }
}

/// Potential, its image and the solver statistics.
type Solved = (Vec<f64>, Vec<f64>, SolveStats);

struct Level<'a> {
    cx: &'a CliqueComplex,
    k: usize,
    w: &'a WeightScheme,
    opts: LsqOptions,
}

impl Level<'_> {
    /// `min ‖W_k^{1/2}(δ_{k-1} g − c)‖`; `None` for `k = 0`.
    fn exact(&self, c: &[f64]) -> Result<Option<Solved>> {
        if self.k == 0 {
            return Ok(None);
        }
        let d = coboundary(self.cx, self.k - 1)?;
        let wk = self.w.level(self.k, c.len())?;
        let s = sqrt_all(&wk);
        let a = d.matrix().scale(&s, &vec![1.0; d.matrix().ncols()]);
        let (mut g, stats) = cgls(&a, &mul(&s, c), &self.opts)?;
        if self.k == 1 {
            center_per_component(self.cx, &mut g);
        }
        let exact = d.matrix().mul_vec(&g);
        Ok(Some((g, exact, stats)))
    }

    /// `min ‖W_k^{1/2}(δ_k* h − c)‖`, solved for `u = W_{k+1}^{1/2} h`.
    fn coexact(&self, c: &[f64]) -> Result<Solved> {
        let d = coboundary(self.cx, self.k)?;
        let up = d.matrix().nrows();
        let wk = self.w.level(self.k, c.len())?;
        let wk1 = self.w.level(self.k + 1, up)?;
        let a = d
            .matrix()
            .transpose()
            .scale(&inv_sqrt_all(&wk), &sqrt_all(&wk1));
        let (u, stats) = cgls(&a, &mul(&sqrt_all(&wk), c), &self.opts)?;
        let h = mul(&inv_sqrt_all(&wk1), &u);
        let coexact = adjoint(&d, self.w)?.matrix().mul_vec(&h);
        Ok((h, coexact, stats))
    }
}

/// Hodge decomposition of a `k`-cochain. The complex must know the
/// `(k+2)`-clique level (possibly empty).
pub fn hodge_decompose(
    cx: &CliqueComplex,
    c: &Cochain,
    w: &WeightScheme,
    method: Method,
) -> Result<HodgeSplit> {
    hodge_decompose_with(cx, c, w, method, &LsqOptions::default())
}

pub fn hodge_decompose_with(
    cx: &CliqueComplex,
    c: &Cochain,
    w: &WeightScheme,
    method: Method,
    opts: &LsqOptions,
) -> Result<HodgeSplit> {
    let k = c.degree();
    let dim = cx.cochain_dim(k)?;
    if c.len() != dim {
        return Err(Error::LengthMismatch {
            degree: k,
            expected: dim,
            found: c.len(),
        });
    }
    if cx.cliques(k + 2).is_none() {
        return Err(Error::LevelNotEnumerated { order: k + 2 });
    }
    let lvl = Level {
        cx,
        k,
        w,
        opts: *opts,
    };
    let x = c.values();
    let mut residuals = SplitResiduals::default();

    let (potential, exact, prepotential, coexact) = match method {
        Method::TwoSolve => {
            let (ex, co) = rayon::join(|| lvl.exact(x), || lvl.coexact(x));
            let ex = ex?;
            let (h, coexact, co_stats) = co?;
            residuals.coexact = Some(co_stats);
            let (g, exact) = match ex {
                Some((g, exact, stats)) => {
                    residuals.exact = Some(stats);
                    (Some(g), exact)
                }
                None => (None, vec![0.0; dim]),
            };
            (g, exact, h, coexact)
        }
        Method::LaplacianResidual => {
            let l = hodge_laplacian(cx, k, w)?;
            let s = sqrt_all(l.weights());
            let inv = inv_sqrt_all(l.weights());
            let sym: SparseMatrix = l.matrix().scale(&s, &inv);
            let (y, stats) = cgls(&sym, &mul(&s, x), opts)?;
            residuals.laplacian = Some(stats);
            let y = mul(&inv, &y);
            // Δ_k Y = δ_{k-1}(δ_{k-1}* Y) + δ_k*(δ_k Y)
            let (g, exact) = if k == 0 {
                (None, vec![0.0; dim])
            } else {
                let d = coboundary(cx, k - 1)?;
                let mut g = adjoint(&d, w)?.matrix().mul_vec(&y);
                if k == 1 {
                    center_per_component(cx, &mut g);
                }
                let exact = d.matrix().mul_vec(&g);
                (Some(g), exact)
            };
            let d = coboundary(cx, k)?;
            let h = d.matrix().mul_vec(&y);
            let coexact = adjoint(&d, w)?.matrix().mul_vec(&h);
            (g, exact, h, coexact)
        }
    };

    let harmonic: Vec<f64> = x
        .iter()
        .zip(&exact)
        .zip(&coexact)
        .map(|((a, b), c)| a - b - c)
        .collect();
    let exact = Cochain::from_values(k, exact);
    let coexact = Cochain::from_values(k, coexact);
    let harmonic = Cochain::from_values(k, harmonic);
    let norms = SplitNorms {
        input: norm(c, w)?,
        exact: norm(&exact, w)?,
        coexact: norm(&coexact, w)?,
        harmonic: norm(&harmonic, w)?,
    };
    Ok(HodgeSplit {
        method,
        input: c.clone(),
        exact,
        potential: potential.map(|g| Cochain::from_values(k - 1, g)),
        coexact,
        prepotential: Cochain::from_values(k + 1, prepotential),
        harmonic,
        norms,
        residuals,
    })
}

/// The harmonic part of `c`: its canonical cohomology representative when
/// `δ_k c = 0`.
pub fn harmonic_project(cx: &CliqueComplex, c: &Cochain, w: &WeightScheme) -> Result<Cochain> {
    hodge_decompose(cx, c, w, Method::TwoSolve).map(|s| s.harmonic)
}

/// Bound on `max |(AB)_ij|` required by [`verify_operator_pair`].
pub const PAIR_PRECONDITION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClauseCheck {
    pub clause: String,
    pub holds: bool,
    /// Dimensions of the subspaces involved, in the order they appear.
    pub dims: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairReport {
    /// Ambient dimension `n` (`A` is `m × n`, `B` is `n × p`).
    pub n: usize,
    pub rank_a: usize,
    pub rank_b: usize,
    /// `dim ker(A*A + BB*)`.
    pub harmonic_dim: usize,
    /// Four-subspace identities for `A` and for `B*`.
    pub fredholm_a: Vec<ClauseCheck>,
    pub fredholm_b_adjoint: Vec<ClauseCheck>,
    /// Decomposition identities for the pair.
    pub hodge: Vec<ClauseCheck>,
    /// `dim ker A − dim im B = dim ker(A*A + BB*) = dim ker B* − dim im A*`.
    pub cohomology: ClauseCheck,
}

impl PairReport {
    pub fn all_hold(&self) -> bool {
        self.fredholm_a
            .iter()
            .chain(&self.fredholm_b_adjoint)
            .chain(&self.hodge)
            .chain(std::iter::once(&self.cohomology))
            .all(|c| c.holds)
    }
}

fn clause(text: &str, holds: bool, spaces: &[&Subspace]) -> ClauseCheck {
    ClauseCheck {
        clause: text.to_string(),
        holds,
        dims: spaces.iter().map(|s| s.dim()).collect(),
    }
}

fn fredholm(m: &DMatrix<f64>, name: &str, adj: &str) -> Vec<ClauseCheck> {
    let n = m.ncols();
    let mt = m.transpose();
    let ker = Subspace::kernel(m);
    let im = Subspace::image(m);
    let ker_t = Subspace::kernel(&mt);
    let im_t = Subspace::image(&mt);
    let gram = &mt * m;
    let ker_g = Subspace::kernel(&gram);
    let im_g = Subspace::image(&gram);
    let ker_perp = ker.complement();
    let im_perp = im.complement();
    vec![
        clause(
            &format!("ker({adj}{name}) = ker({name})"),
            ker_g.same_as(&ker),
            &[&ker_g, &ker],
        ),
        clause(
            &format!("im({adj}{name}) = im({adj})"),
            im_g.same_as(&im_t),
            &[&im_g, &im_t],
        ),
        clause(
            &format!("ker({adj}) = im({name})^perp"),
            ker_t.same_as(&im_perp),
            &[&ker_t, &im_perp],
        ),
        clause(
            &format!("im({adj}) = ker({name})^perp"),
            im_t.same_as(&ker_perp),
            &[&im_t, &ker_perp],
        ),
        clause(
            &format!("R^n = ker({name}) + im({adj}) (orthogonal direct sum)"),
            is_orthogonal_direct_sum(&Subspace::full(n), &[&ker, &im_t]),
            &[&ker, &im_t],
        ),
    ]
}

/// Checks the subspace identities of a pair `A: ℝⁿ → ℝᵐ`, `B: ℝᵖ → ℝⁿ` with
/// `AB = 0` under the standard inner product, as dimension identities
/// computed from SVD-based bases.
pub fn verify_operator_pair(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<PairReport> {
    let n = a.ncols();
    if b.nrows() != n {
        return Err(Error::Invalid(format!(
            "A has {n} columns but B has {} rows",
            b.nrows()
        )));
    }
    let ab = a * b;
    let worst = ab.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if worst > PAIR_PRECONDITION_TOLERANCE {
        return Err(Error::Precondition(format!(
            "AB is not zero (max entry {worst:e})"
        )));
    }
    let at = a.transpose();
    let bt = b.transpose();
    let lap = &at * a + b * &bt;

    let ker_a = Subspace::kernel(a);
    let im_b = Subspace::image(b);
    let ker_bt = Subspace::kernel(&bt);
    let im_at = Subspace::image(&at);
    let ker_l = Subspace::kernel(&lap);
    let im_l = Subspace::image(&lap);
    let meet = ker_a.intersection(&ker_bt);
    let full = Subspace::full(n);

    let hodge = vec![
        clause(
            "ker(A*A + BB*) = ker(A) ∩ ker(B*)",
            ker_l.same_as(&meet),
            &[&ker_l, &meet],
        ),
        clause(
            "ker(A) = im(B) + ker(A*A + BB*)",
            is_orthogonal_direct_sum(&ker_a, &[&im_b, &ker_l]),
            &[&ker_a, &im_b, &ker_l],
        ),
        clause(
            "ker(B*) = im(A*) + ker(A*A + BB*)",
            is_orthogonal_direct_sum(&ker_bt, &[&im_at, &ker_l]),
            &[&ker_bt, &im_at, &ker_l],
        ),
        clause(
            "R^n = im(A*) + ker(A*A + BB*) + im(B)",
            is_orthogonal_direct_sum(&full, &[&im_at, &ker_l, &im_b]),
            &[&full, &im_at, &ker_l, &im_b],
        ),
        clause(
            "im(A*A + BB*) = im(A*) + im(B)",
            is_orthogonal_direct_sum(&im_l, &[&im_at, &im_b]),
            &[&im_l, &im_at, &im_b],
        ),
    ];
    let h = ker_l.dim() as isize;
    let cohomology = clause(
        "dim ker(A) - dim im(B) = dim ker(A*A + BB*) = dim ker(B*) - dim im(A*)",
        ker_a.dim() as isize - im_b.dim() as isize == h
            && ker_bt.dim() as isize - im_at.dim() as isize == h,
        &[&ker_a, &im_b, &ker_l, &ker_bt, &im_at],
    );
    Ok(PairReport {
        n,
        rank_a: im_at.dim(),
        rank_b: im_b.dim(),
        harmonic_dim: ker_l.dim(),
        fredholm_a: fredholm(a, "A", "A*"),
        fredholm_b_adjoint: fredholm(&bt, "B*", "B"),
        hodge,
        cohomology,
    })
}
