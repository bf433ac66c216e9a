//! Shared fixtures and dense oracles for the integration tests.
#![allow(dead_code)]

use hodge_core::{CliqueComplex, Graph};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// G(n, p): every pair independently.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

/// A random spanning tree plus G(n, p) extras, so always connected.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Components by plain union-find, independent of the library's labelling.
pub fn union_find_components(g: &Graph) -> usize {
    let n = g.n_vertices();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut count = n;
    for &(a, b) in g.edges() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            count -= 1;
        }
    }
    count
}

/// Position in our edge order and orientation sign of a directed edge
/// `(tail, head)` given with 1-indexed labels.
pub fn edge_slot(cx: &CliqueComplex, tail: usize, head: usize) -> (usize, f64) {
    let (a, b) = (tail - 1, head - 1);
    let idx = cx
        .index_of(&[a.min(b), a.max(b)])
        .unwrap_or_else(|| panic!("edge {tail}-{head} missing"));
    (idx, if a < b { 1.0 } else { -1.0 })
}

/// Orthogonal projector onto the column space of `m`, from the eigenvectors
/// of `m mᵀ` with non-negligible eigenvalue. Meant for small, well-scaled
/// integer matrices such as coboundaries.
pub fn range_projector(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    if m.ncols() == 0 || n == 0 {
        return DMatrix::zeros(n, n);
    }
    let eig = (m * m.transpose()).symmetric_eigen();
    let top = eig.eigenvalues.max();
    let mut p = DMatrix::zeros(n, n);
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda > 1e-9 * top {
            let v = eig.eigenvectors.column(i);
            p += v * v.transpose();
        }
    }
    p
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

pub fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Kendall tau distance: number of discordant pairs between two score
/// vectors, counting strict disagreements only.
pub fn kendall_discordant(a: &[f64], b: &[f64], tol: f64) -> usize {
    let mut d = 0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let x = a[i] - a[j];
            let y = b[i] - b[j];
            if (x > tol && y < -tol)
                || (x < -tol && y > tol)
                || ((x.abs() <= tol) != (y.abs() <= tol))
            {
                d += 1;
            }
        }
    }
    d
}
