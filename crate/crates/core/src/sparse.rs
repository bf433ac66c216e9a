//! Compressed sparse row matrices with deterministic ordering.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// CSR matrix of `f64`. Column indices are strictly increasing within each
/// row and explicit zeros are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    data: Vec<f64>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            indptr: vec![0; nrows + 1],
            indices: Vec::new(),
            data: Vec::new(),
        }
    }

    /// Assembles from `(row, col, value)` triplets. Duplicates are summed and
    /// entries that sum to exactly zero are dropped.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        mut triplets: Vec<(usize, usize, f64)>,
    ) -> Self {
        triplets.sort_by_key(|t| (t.0, t.1));
        let mut indptr = vec![0; nrows + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut data: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut rows = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            assert!(
                r < nrows && c < ncols,
                "triplet ({r}, {c}) outside {nrows}x{ncols}"
            );
            if rows.last() == Some(&r) && indices.last() == Some(&c) {
                *data.last_mut().expect("nonempty") += v;
            } else {
                rows.push(r);
                indices.push(c);
                data.push(v);
            }
        }
        let mut keep_rows = Vec::with_capacity(rows.len());
        let mut keep_idx = Vec::with_capacity(rows.len());
        let mut keep_data = Vec::with_capacity(rows.len());
        for ((r, c), v) in rows.into_iter().zip(indices).zip(data) {
            if v != 0.0 {
                keep_rows.push(r);
                keep_idx.push(c);
                keep_data.push(v);
            }
        }
        for &r in &keep_rows {
            indptr[r + 1] += 1;
        }
        for i in 0..nrows {
            indptr[i + 1] += indptr[i];
        }
        SparseMatrix {
            nrows,
            ncols,
            indptr,
            indices: keep_idx,
            data: keep_data,
        }
    }

    pub fn from_dense(m: &DMatrix<f64>) -> Self {
        let mut t = Vec::new();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if m[(i, j)] != 0.0 {
                    t.push((i, j, m[(i, j)]));
                }
            }
        }
        SparseMatrix::from_triplets(m.nrows(), m.ncols(), t)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    /// True when no nonzero entry is stored.
    pub fn is_zero(&self) -> bool {
        self.data.is_empty()
    }

    /// `(col, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.indptr[i]..self.indptr[i + 1];
        self.indices[span.clone()]
            .iter()
            .copied()
            .zip(self.data[span].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let span = self.indptr[i]..self.indptr[i + 1];
        match self.indices[span.clone()].binary_search(&j) {
            Ok(p) => self.data[span.start + p],
            Err(_) => 0.0,
        }
    }

    /// Row-major `(row, col, value)` triplets.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn transpose(&self) -> Self {
        SparseMatrix::from_triplets(
            self.ncols,
            self.nrows,
            self.triplets().map(|(i, j, v)| (j, i, v)).collect(),
        )
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols, "dimension mismatch in mul_vec");
        (0..self.nrows)
            .map(|i| self.row(i).map(|(j, v)| v * x[j]).sum())
            .collect()
    }

    /// `selfᵀ x` without forming the transpose.
    pub fn tr_mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.nrows, "dimension mismatch in tr_mul_vec");
        let mut y = vec![0.0; self.ncols];
        for (i, xi) in x.iter().enumerate() {
            for (j, v) in self.row(i) {
                y[j] += v * xi;
            }
        }
        y
    }

    pub fn matmul(&self, other: &SparseMatrix) -> Self {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch in matmul");
        let mut t = Vec::new();
        for i in 0..self.nrows {
            for (k, a) in self.row(i) {
                for (j, b) in other.row(k) {
                    t.push((i, j, a * b));
                }
            }
        }
        SparseMatrix::from_triplets(self.nrows, other.ncols, t)
    }

    pub fn add(&self, other: &SparseMatrix) -> Self {
        assert_eq!(
            (self.nrows, self.ncols),
            (other.nrows, other.ncols),
            "dimension mismatch in add"
        );
        SparseMatrix::from_triplets(
            self.nrows,
            self.ncols,
            self.triplets().chain(other.triplets()).collect(),
        )
    }

    /// `diag(left) · self · diag(right)`.
    pub fn scale(&self, left: &[f64], right: &[f64]) -> Self {
        assert_eq!(left.len(), self.nrows);
        assert_eq!(right.len(), self.ncols);
        SparseMatrix::from_triplets(
            self.nrows,
            self.ncols,
            self.triplets()
                .map(|(i, j, v)| (i, j, left[i] * v * right[j]))
                .collect(),
        )
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v;
        }
        m
    }

    /// Coordinate text in the MatrixMarket layout, 1-indexed. Values use the
    /// shortest round-trip decimal form, so re-reading is bit-exact.
    pub fn to_matrix_market(&self) -> String {
        let mut out = String::from("%%MatrixMarket matrix coordinate real general\n");
        out.push_str(&format!("{} {} {}\n", self.nrows, self.ncols, self.nnz()));
        for (i, j, v) in self.triplets() {
            out.push_str(&format!("{} {} {}\n", i + 1, j + 1, v));
        }
        out
    }

    pub fn from_matrix_market(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        match lines.next() {
            Some((_, h)) if h.starts_with("%%MatrixMarket") => {
                let lower = h.to_ascii_lowercase();
                if !(lower.contains("coordinate") && lower.contains("general")) {
                    return Err(Error::Parse {
                        line: 1,
                        msg: "only `coordinate real general` matrices are supported".into(),
                    });
                }
            }
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    msg: "missing %%MatrixMarket header".into(),
                })
            }
        }
        let mut lines = lines.filter(|(_, l)| !l.starts_with('%'));
        let (size_line, size) = lines.next().ok_or(Error::Parse {
            line: 2,
            msg: "missing size line".into(),
        })?;
        let dims = parse_fields::<usize>(size, size_line, 3)?;
        let (nrows, ncols, nnz) = (dims[0], dims[1], dims[2]);
        let mut t = Vec::with_capacity(nnz);
        for (line, body) in lines {
            let f: Vec<&str> = body.split_whitespace().collect();
            if f.len() != 3 {
                return Err(Error::Parse {
                    line,
                    msg: "expected `row col value`".into(),
                });
            }
            let idx = parse_fields::<usize>(&f[..2].join(" "), line, 2)?;
            let v: f64 = f[2].parse().map_err(|_| Error::Parse {
                line,
                msg: format!("`{}` is not a number", f[2]),
            })?;
            let (i, j) = (idx[0], idx[1]);
            if i == 0 || j == 0 || i > nrows || j > ncols {
                return Err(Error::Parse {
                    line,
                    msg: format!("entry ({i}, {j}) outside {nrows}x{ncols}"),
                });
            }
            t.push((i - 1, j - 1, v));
        }
        if t.len() != nnz {
            return Err(Error::Parse {
                line: 2,
                msg: format!("declared {nnz} entries, found {}", t.len()),
            });
        }
        Ok(SparseMatrix::from_triplets(nrows, ncols, t))
    }
}

fn parse_fields<T: std::str::FromStr>(s: &str, line: usize, n: usize) -> Result<Vec<T>> {
    let out: Vec<T> = s
        .split_whitespace()
        .map(|t| t.parse::<T>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parse {
            line,
            msg: format!("malformed fields `{s}`"),
        })?;
    if out.len() != n {
        return Err(Error::Parse {
            line,
            msg: format!("expected {n} fields, found {}", out.len()),
        });
    }
    Ok(out)
}
