//! Alternating cochains and weighted inner products.
//!
//! A `k`-cochain stores one value per `(k+1)`-clique, in the complex's
//! lexicographic clique order. The stored value is the cochain evaluated at
//! the ascending vertex tuple; any other ordering picks up the sign of the
//! sorting permutation.

use std::borrow::Cow;
use std::collections::HashSet;

use crate::complex::CliqueComplex;
use crate::error::{Error, Result};
use crate::format::fmt_num;

#[derive(Debug, Clone, PartialEq)]
pub struct Cochain {
    degree: usize,
    values: Vec<f64>,
}

impl Cochain {
    /// Wraps coordinates, checking their count against the complex.
    pub fn new(cx: &CliqueComplex, degree: usize, values: Vec<f64>) -> Result<Self> {
        let expected = cx.cochain_dim(degree)?;
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                degree,
                expected,
                found: values.len(),
            });
        }
        Ok(Cochain { degree, values })
    }

    /// Wraps coordinates without consulting a complex.
    pub fn from_values(degree: usize, values: Vec<f64>) -> Self {
        Cochain { degree, values }
    }

    pub fn zeros(cx: &CliqueComplex, degree: usize) -> Result<Self> {
        Ok(Cochain {
            degree,
            values: vec![0.0; cx.cochain_dim(degree)?],
        })
    }

    /// Builds a cochain by evaluating `f` on every ascending clique.
    pub fn from_fn<F>(cx: &CliqueComplex, degree: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> f64,
    {
        let values = cx.level(degree + 1)?.iter().map(|c| f(c)).collect();
        Ok(Cochain { degree, values })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True on an empty clique level (the zero space).
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Evaluates the alternating function at an arbitrary vertex tuple
    /// (0-indexed). Repeated vertices and non-cliques evaluate to 0.
    pub fn eval(&self, cx: &CliqueComplex, tuple: &[usize]) -> Result<f64> {
        if tuple.len() != self.degree + 1 {
            return Err(Error::DegreeMismatch {
                expected: self.degree + 1,
                found: tuple.len(),
            });
        }
        let n = cx.graph().n_vertices();
        if let Some(&v) = tuple.iter().find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange { vertex: v + 1, n });
        }
        let Some((sorted, sign)) = sort_with_sign(tuple) else {
            return Ok(0.0);
        };
        Ok(cx.index_of(&sorted).map_or(0.0, |i| sign * self.values[i]))
    }

    pub fn scale(&self, a: f64) -> Cochain {
        Cochain {
            degree: self.degree,
            values: self.values.iter().map(|x| a * x).collect(),
        }
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.check_same_space(other)?;
        Ok(Cochain {
            degree: self.degree,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.add(&other.scale(-1.0))
    }

    fn check_same_space(&self, other: &Cochain) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        if self.values.len() != other.values.len() {
            return Err(Error::LengthMismatch {
                degree: other.degree,
                expected: self.values.len(),
                found: other.values.len(),
            });
        }
        Ok(())
    }
}

/// Sorts a tuple ascending and returns the sign of the sorting permutation,
/// or `None` when a vertex repeats.
pub fn sort_with_sign(tuple: &[usize]) -> Option<(Vec<usize>, f64)> {
    let mut v = tuple.to_vec();
    let mut sign = 1.0;
    // insertion sort: each adjacent swap is a transposition
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, sign))
    }
}

/// Positive weights per clique, per degree.
///
/// Weights are stored per ascending clique, so they are invariant under
/// permutation of a clique's vertices automatically.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum WeightScheme {
    /// All weights equal to 1 (the standard l² inner product).
    #[default]
    Unit,
    /// `levels[k]` holds the weights of the `(k+1)`-cliques, if given.
    Table(Vec<Option<Vec<f64>>>),
}

impl WeightScheme {
    /// Validated table; every supplied weight must be finite and positive.
    pub fn table(levels: Vec<Option<Vec<f64>>>) -> Result<Self> {
        for w in levels.iter().flatten().flatten() {
            if !(w.is_finite() && *w > 0.0) {
                return Err(Error::InvalidWeight { value: *w });
            }
        }
        Ok(WeightScheme::Table(levels))
    }

    pub fn is_unit(&self) -> bool {
        match self {
            WeightScheme::Unit => true,
            WeightScheme::Table(levels) => {
                levels.iter().flatten().all(|l| l.iter().all(|&w| w == 1.0))
            }
        }
    }

    /// Weights for the `degree`-cochains of a level with `len` cliques.
    pub fn level(&self, degree: usize, len: usize) -> Result<Cow<'_, [f64]>> {
        match self {
            WeightScheme::Unit => Ok(Cow::Owned(vec![1.0; len])),
            WeightScheme::Table(levels) => match levels.get(degree) {
                Some(Some(w)) if w.len() == len => Ok(Cow::Borrowed(w)),
                Some(Some(w)) => Err(Error::LengthMismatch {
                    degree,
                    expected: len,
                    found: w.len(),
                }),
                // an empty level needs no weights
                _ if len == 0 => Ok(Cow::Owned(Vec::new())),
                _ => Err(Error::MissingWeights { order: degree + 1 }),
            },
        }
    }
}

/// Weighted inner product: each clique counted once, in ascending orientation.
pub fn inner_product(f: &Cochain, g: &Cochain, w: &WeightScheme) -> Result<f64> {
    f.check_same_space(g)?;
    let weights = w.level(f.degree, f.len())?;
    Ok(f.values
        .iter()
        .zip(&g.values)
        .zip(weights.iter())
        .map(|((a, b), w)| w * a * b)
        .sum())
}

pub fn norm(f: &Cochain, w: &WeightScheme) -> Result<f64> {
    inner_product(f, f, w).map(f64::sqrt)
}

/// Parses a cochain TSV: each line holds `k + 1` 1-indexed vertex ids followed
/// by a value. Non-ascending tuples are sorted with the matching sign flip;
/// omitted cliques are 0. The degree is taken from the column count unless
/// `degree` is given.
pub fn parse_cochain(text: &str, cx: &CliqueComplex, degree: Option<usize>) -> Result<Cochain> {
    let mut entries: Vec<(usize, Vec<usize>, f64)> = Vec::new();
    let mut found_degree = degree;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.len() < 2 {
            return Err(Error::Parse {
                line,
                msg: "expected vertex ids followed by a value".into(),
            });
        }
        let k = tokens.len() - 2;
        match found_degree {
            None => found_degree = Some(k),
            Some(d) if d != k => {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {} vertex ids, found {}", d + 1, k + 1),
                })
            }
            _ => {}
        }
        let mut ids = Vec::with_capacity(k + 1);
        for tok in &tokens[..=k] {
            let v: usize = tok.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("`{tok}` is not a vertex id"),
            })?;
            if v == 0 || v > cx.graph().n_vertices() {
                return Err(Error::Parse {
                    line,
                    msg: format!("vertex {v} out of range"),
                });
            }
            ids.push(v - 1);
        }
        let value: f64 = tokens[k + 1].parse().map_err(|_| Error::Parse {
            line,
            msg: format!("`{}` is not a number", tokens[k + 1]),
        })?;
        entries.push((line, ids, value));
    }
    let degree = found_degree.unwrap_or(0);
    let mut c = Cochain::zeros(cx, degree)?;
    let mut seen = HashSet::new();
    for (line, ids, value) in entries {
        let (sorted, sign) = sort_with_sign(&ids).ok_or_else(|| Error::Parse {
            line,
            msg: "repeated vertex".into(),
        })?;
        let i = cx.index_of(&sorted).ok_or_else(|| Error::Parse {
            line,
            msg: format!(
                "{:?} is not a clique of the graph",
                sorted.iter().map(|v| v + 1).collect::<Vec<_>>()
            ),
        })?;
        if !seen.insert(i) {
            return Err(Error::Parse {
                line,
                msg: "clique listed twice".into(),
            });
        }
        c.values[i] = sign * value;
    }
    Ok(c)
}

/// Parses a weight TSV with the same layout as a cochain: vertex ids followed
/// by a positive weight, any number of ids per line. Every clique of every
/// enumerated level defaults to weight 1; lines for cliques above the
/// enumerated levels are ignored.
pub fn parse_weights(text: &str, cx: &CliqueComplex) -> Result<WeightScheme> {
    let mut levels: Vec<Option<Vec<f64>>> = (1..=cx.n_levels())
        .map(|order| cx.count(order).map(|n| vec![1.0; n]))
        .collect();
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.len() < 2 {
            return Err(Error::Parse {
                line,
                msg: "expected vertex ids followed by a weight".into(),
            });
        }
        let (ids, value) = tokens.split_at(tokens.len() - 1);
        let mut clique = Vec::with_capacity(ids.len());
        for tok in ids {
            match tok.parse::<usize>() {
                Ok(v) if v >= 1 && v <= cx.graph().n_vertices() => clique.push(v - 1),
                _ => {
                    return Err(Error::Parse {
                        line,
                        msg: format!("`{tok}` is not a vertex id of the graph"),
                    })
                }
            }
        }
        let w: f64 = value[0].parse().map_err(|_| Error::Parse {
            line,
            msg: format!("`{}` is not a number", value[0]),
        })?;
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::Parse {
                line,
                msg: format!("weight {w} must be finite and positive"),
            });
        }
        let (sorted, _) = sort_with_sign(&clique).ok_or_else(|| Error::Parse {
            line,
            msg: "repeated vertex".into(),
        })?;
        if sorted.len() > cx.n_levels() && cx.clique_number().is_none() {
            // level never enumerated, so these weights cannot matter
            continue;
        }
        let i = cx.index_of(&sorted).ok_or_else(|| Error::Parse {
            line,
            msg: format!(
                "{:?} is not an enumerated clique",
                sorted.iter().map(|v| v + 1).collect::<Vec<_>>()
            ),
        })?;
        if !seen.insert(sorted.clone()) {
            return Err(Error::Parse {
                line,
                msg: "clique listed twice".into(),
            });
        }
        if let Some(Some(level)) = levels.get_mut(sorted.len() - 1) {
            level[i] = w;
        }
    }
    WeightScheme::table(levels)
}

/// Writes a cochain as TSV, one ascending clique per line (1-indexed).
pub fn write_cochain(c: &Cochain, cx: &CliqueComplex) -> Result<String> {
    let level = cx.level(c.degree + 1)?;
    let mut out = String::new();
    for (clique, v) in level.iter().zip(&c.values) {
        for u in clique {
            out.push_str(&format!("{}\t", u + 1));
        }
        out.push_str(&fmt_num(*v));
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{enumerate_cliques, Graph};

    fn c3() -> CliqueComplex {
        enumerate_cliques(&Graph::cycle(3), 3).unwrap()
    }

    #[test]
    fn eval_flips_sign_on_reversal() {
        let cx = c3();
        // edges (1,2),(1,3),(2,3) in 1-indexed terms
        let x = Cochain::new(&cx, 1, vec![2.0, 0.0, 0.0]).unwrap();
        assert_eq!(x.eval(&cx, &[1, 0]).unwrap(), -2.0);
        assert_eq!(x.eval(&cx, &[0, 1]).unwrap(), 2.0);
    }

    #[test]
    fn eval_repeated_vertex_is_zero() {
        let cx = c3();
        let phi = Cochain::new(&cx, 2, vec![5.0]).unwrap();
        assert_eq!(phi.eval(&cx, &[0, 0, 2]).unwrap(), 0.0);
    }

    #[test]
    fn eval_triangle_permutations() {
        let cx = c3();
        let phi = Cochain::new(&cx, 2, vec![5.0]).unwrap();
        assert_eq!(phi.eval(&cx, &[2, 0, 1]).unwrap(), 5.0);
        assert_eq!(phi.eval(&cx, &[1, 0, 2]).unwrap(), -5.0);
    }

    #[test]
    fn eval_errors_and_non_cliques() {
        let cx = enumerate_cliques(&Graph::path(3), 3).unwrap();
        let x = Cochain::new(&cx, 1, vec![1.0, 1.0]).unwrap();
        assert_eq!(x.eval(&cx, &[0, 2]).unwrap(), 0.0);
        assert!(matches!(
            x.eval(&cx, &[0, 7]),
            Err(Error::VertexOutOfRange { .. })
        ));
        assert!(x.eval(&cx, &[0]).is_err());
    }

    #[test]
    fn inner_product_examples() {
        let cx = c3();
        let x = Cochain::new(&cx, 1, vec![2.0; 3]).unwrap();
        assert_eq!(inner_product(&x, &x, &WeightScheme::Unit).unwrap(), 12.0);
        let z = Cochain::zeros(&cx, 1).unwrap();
        assert_eq!(inner_product(&x, &z, &WeightScheme::Unit).unwrap(), 0.0);
        assert_eq!(norm(&x, &WeightScheme::Unit).unwrap(), 12f64.sqrt());
        assert_eq!(norm(&z, &WeightScheme::Unit).unwrap(), 0.0);
    }

    #[test]
    fn weighted_inner_product_on_path() {
        let cx = enumerate_cliques(&Graph::path(3), 3).unwrap();
        let x = Cochain::new(&cx, 1, vec![1.0, 1.0]).unwrap();
        let w = WeightScheme::table(vec![None, Some(vec![3.0, 1.0])]).unwrap();
        assert_eq!(inner_product(&x, &x, &w).unwrap(), 4.0);
        let f = Cochain::new(&cx, 0, vec![1.0; 3]).unwrap();
        assert!(matches!(
            inner_product(&f, &f, &w),
            Err(Error::MissingWeights { order: 1 })
        ));
    }

    #[test]
    fn constant_vertex_function_norm() {
        let cx = enumerate_cliques(&Graph::empty(7), 2).unwrap();
        let f = Cochain::new(&cx, 0, vec![1.0; 7]).unwrap();
        assert_eq!(norm(&f, &WeightScheme::Unit).unwrap(), 7f64.sqrt());
    }

    #[test]
    fn degree_mismatch_rejected() {
        let cx = c3();
        let f = Cochain::zeros(&cx, 0).unwrap();
        let x = Cochain::zeros(&cx, 1).unwrap();
        assert!(matches!(
            inner_product(&f, &x, &WeightScheme::Unit),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn nonpositive_weights_rejected() {
        assert!(WeightScheme::table(vec![Some(vec![1.0, 0.0])]).is_err());
        assert!(WeightScheme::table(vec![Some(vec![-1.0])]).is_err());
    }

    #[test]
    fn empty_level_is_zero_space() {
        let cx = enumerate_cliques(&Graph::cycle(4), 3).unwrap();
        let phi = Cochain::zeros(&cx, 2).unwrap();
        assert!(phi.is_empty());
        assert_eq!(norm(&phi, &WeightScheme::Unit).unwrap(), 0.0);
    }

    #[test]
    fn tsv_normalizes_orientation() {
        let cx = c3();
        let x = parse_cochain("1 2 2\n2 3 2\n3 1 2\n", &cx, None).unwrap();
        assert_eq!(x.degree(), 1);
        assert_eq!(x.values(), &[2.0, -2.0, 2.0]);
        let text = write_cochain(&x, &cx).unwrap();
        assert_eq!(parse_cochain(&text, &cx, None).unwrap(), x);
        assert!(parse_cochain("1 2 1\n2 1 1\n", &cx, None).is_err());
        assert!(parse_cochain("1 1 1\n", &cx, None).is_err());
        let p4 = enumerate_cliques(&Graph::path(4), 2).unwrap();
        assert!(parse_cochain("1 3 1\n", &p4, None).is_err());
    }

    #[test]
    fn weight_file_defaults_to_one() {
        let cx = c3();
        let w = parse_weights("# edge weights\n2 1 4\n1 2 3 0.5\n", &cx).unwrap();
        assert_eq!(&*w.level(0, 3).unwrap(), &[1.0; 3]);
        assert_eq!(&*w.level(1, 3).unwrap(), &[4.0, 1.0, 1.0]);
        assert_eq!(&*w.level(2, 1).unwrap(), &[0.5]);
        assert!(parse_weights("1 2 0\n", &cx).is_err());
        assert!(parse_weights("1 2 1\n2 1 1\n", &cx).is_err());
        assert!(matches!(
            parse_weights("1 4 1\n", &cx),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
