//! Ranking from pairwise comparisons by least-squares potentials, with the
//! non-gradient parts of the comparison flow as inconsistency certificates.
//!
//! Convention: `X(i, j) > 0` means `i` is preferred to `j`. Since the
//! consistent part is `X_P = −grad f`, higher scores mean preferred.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::cochain::{Cochain, WeightScheme};
use crate::complex::{enumerate_cliques, CliqueComplex, Graph};
use crate::decompose::{hodge_decompose, HodgeSplit, Method};
use crate::error::{Error, Result};
use crate::operators::{divergence, CochainMap};

#[derive(Debug, Clone, PartialEq)]
pub struct Rating {
    pub voter: String,
    pub item: String,
    pub score: f64,
}

/// `value > 0` favors `item_i`; the reverse entry should carry `-value`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseEntry {
    pub voter: String,
    pub item_i: String,
    pub item_j: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Records {
    Ratings(Vec<Rating>),
    Pairwise(Vec<PairwiseEntry>),
}

/// Validated voter/item records. Items are sorted lexicographically and a
/// voter's opinion on each pair is recorded at most once, oriented from the
/// lexicographically smaller item.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonData {
    items: Vec<String>,
    /// Per voter, the normalized pairwise opinions `(a, b, value)` with
    /// `a < b` (item indices). Ratings become score differences.
    opinions: BTreeMap<String, Vec<(usize, usize, f64)>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Mean over voters of the preference values (score differences).
    #[default]
    Mean,
    /// `ln((#i preferred + ½) / (#j preferred + ½))` over strict preferences.
    LogOdds,
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" => Ok(Model::Mean),
            "logodds" => Ok(Model::LogOdds),
            _ => Err(Error::Invalid(format!(
                "unknown model `{s}` (expected mean or logodds)"
            ))),
        }
    }
}

fn locate(lines: Option<&[usize]>, idx: usize, msg: String) -> Error {
    match lines {
        Some(l) => Error::Parse { line: l[idx], msg },
        None => Error::Invalid(format!("record {}: {msg}", idx + 1)),
    }
}

impl ComparisonData {
    pub fn new(records: Records) -> Result<Self> {
        Self::build(records, None)
    }

    fn build(records: Records, lines: Option<&[usize]>) -> Result<Self> {
        let names: BTreeSet<String> = match &records {
            Records::Ratings(r) => r.iter().map(|x| x.item.clone()).collect(),
            Records::Pairwise(r) => r
                .iter()
                .flat_map(|x| [x.item_i.clone(), x.item_j.clone()])
                .collect(),
        };
        if names.is_empty() {
            return Err(Error::Invalid("no comparison records".into()));
        }
        let items: Vec<String> = names.into_iter().collect();
        let id = |s: &str| {
            items
                .binary_search_by(|x| x.as_str().cmp(s))
                .expect("collected above")
        };
        let mut opinions: BTreeMap<String, Vec<(usize, usize, f64)>> = BTreeMap::new();
        match records {
            Records::Ratings(rs) => {
                let mut by_voter: BTreeMap<String, BTreeMap<usize, f64>> = BTreeMap::new();
                for (n, r) in rs.into_iter().enumerate() {
                    if !r.score.is_finite() {
                        return Err(locate(lines, n, format!("score {} is not finite", r.score)));
                    }
                    let scores = by_voter.entry(r.voter.clone()).or_default();
                    if scores.insert(id(&r.item), r.score).is_some() {
                        return Err(locate(
                            lines,
                            n,
                            format!("voter `{}` rated `{}` twice", r.voter, r.item),
                        ));
                    }
                }
                for (voter, scores) in by_voter {
                    let s: Vec<(usize, f64)> = scores.into_iter().collect();
                    let mut ops = Vec::new();
                    for (p, &(a, sa)) in s.iter().enumerate() {
                        for &(b, sb) in &s[p + 1..] {
                            ops.push((a, b, sa - sb));
                        }
                    }
                    opinions.insert(voter, ops);
                }
            }
            Records::Pairwise(rs) => {
                // (voter, a, b) -> (value oriented a→b, as given a→b?)
                let mut seen: BTreeMap<(String, usize, usize), (f64, bool)> = BTreeMap::new();
                for (n, r) in rs.into_iter().enumerate() {
                    if !r.value.is_finite() {
                        return Err(locate(lines, n, format!("value {} is not finite", r.value)));
                    }
                    let (i, j) = (id(&r.item_i), id(&r.item_j));
                    if i == j {
                        return Err(locate(
                            lines,
                            n,
                            format!("item `{}` compared with itself", r.item_i),
                        ));
                    }
                    let (a, b, v, forward) = if i < j {
                        (i, j, r.value, true)
                    } else {
                        (j, i, -r.value, false)
                    };
                    match seen.get(&(r.voter.clone(), a, b)) {
                        None => {
                            seen.insert((r.voter.clone(), a, b), (v, forward));
                        }
                        Some(&(prev, dir)) if dir != forward && prev == v => {}
                        Some(&(_, dir)) if dir != forward => {
                            return Err(locate(
                                lines,
                                n,
                                format!(
                                    "voter `{}`: entries for `{}`/`{}` are not antisymmetric",
                                    r.voter, r.item_i, r.item_j
                                ),
                            ))
                        }
                        Some(_) => {
                            return Err(locate(
                                lines,
                                n,
                                format!(
                                    "voter `{}` compared `{}` and `{}` twice",
                                    r.voter, r.item_i, r.item_j
                                ),
                            ))
                        }
                    }
                }
                for ((voter, a, b), (v, _)) in seen {
                    opinions.entry(voter).or_default().push((a, b, v));
                }
            }
        }
        Ok(ComparisonData { items, opinions })
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn n_voters(&self) -> usize {
        self.opinions.len()
    }
}

/// Parses comparison CSV. Three columns `voter,item,score` select ratings
/// mode, four columns `voter,item_i,item_j,value` pairwise mode. A header
/// row is skipped when its last field is not a number; `#` starts a comment.
pub fn parse_comparisons(text: &str) -> Result<ComparisonData> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            msg: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.iter().all(str::is_empty) {
            continue;
        }
        rows.push((line, rec));
    }
    if let Some((_, first)) = rows.first() {
        let last = first.get(first.len() - 1).unwrap_or("");
        if last.parse::<f64>().is_err() {
            rows.remove(0);
        }
    }
    let Some((_, first)) = rows.first() else {
        return Err(Error::Invalid("no comparison records".into()));
    };
    let width = first.len();
    if width != 3 && width != 4 {
        return Err(Error::Parse {
            line: rows[0].0,
            msg: format!("expected 3 (ratings) or 4 (pairwise) fields, found {width}"),
        });
    }
    let mut lines = Vec::with_capacity(rows.len());
    let mut ratings = Vec::new();
    let mut pairs = Vec::new();
    for (line, rec) in &rows {
        if rec.len() != width {
            return Err(Error::Parse {
                line: *line,
                msg: format!("expected {width} fields, found {}", rec.len()),
            });
        }
        let value: f64 = rec[width - 1].parse().map_err(|_| Error::Parse {
            line: *line,
            msg: format!("`{}` is not a number", &rec[width - 1]),
        })?;
        for (f, field) in rec.iter().take(width - 1).enumerate() {
            if field.is_empty() {
                return Err(Error::Parse {
                    line: *line,
                    msg: format!("field {} is empty", f + 1),
                });
            }
        }
        lines.push(*line);
        if width == 3 {
            ratings.push(Rating {
                voter: rec[0].to_string(),
                item: rec[1].to_string(),
                score: value,
            });
        } else {
            pairs.push(PairwiseEntry {
                voter: rec[0].to_string(),
                item_i: rec[1].to_string(),
                item_j: rec[2].to_string(),
                value,
            });
        }
    }
    let records = if width == 3 {
        Records::Ratings(ratings)
    } else {
        Records::Pairwise(pairs)
    };
    ComparisonData::build(records, Some(&lines))
}

/// Comparison flow on the comparison graph of the compared items.
#[derive(Debug, Clone)]
pub struct Aggregate {
    /// Labels of the graph's vertices, sorted.
    pub items: Vec<String>,
    /// Items that appear in the data but were never compared with anything.
    pub excluded: Vec<String>,
    pub complex: CliqueComplex,
    pub flow: Cochain,
    /// Vertices 1, edges the number of voters comparing the pair, triangles 1.
    pub weights: WeightScheme,
    pub warnings: Vec<String>,
}

impl Aggregate {
    pub fn graph(&self) -> &Graph {
        self.complex.graph()
    }

    /// Per-edge vote counts in the complex's edge order.
    pub fn edge_weights(&self) -> Vec<f64> {
        self.weights
            .level(1, self.flow.len())
            .expect("edge weights are always present")
            .into_owned()
    }
}

pub fn aggregate(data: &ComparisonData, model: Model) -> Result<Aggregate> {
    // pair -> (sum of values, voters, #a preferred, #b preferred)
    let mut acc: BTreeMap<(usize, usize), (f64, usize, usize, usize)> = BTreeMap::new();
    for ops in data.opinions.values() {
        for &(a, b, v) in ops {
            let e = acc.entry((a, b)).or_default();
            e.0 += v;
            e.1 += 1;
            if v > 0.0 {
                e.2 += 1;
            } else if v < 0.0 {
                e.3 += 1;
            }
        }
    }
    if acc.is_empty() {
        return Err(Error::Invalid(
            "no item pair was compared by any voter".into(),
        ));
    }
    let compared: BTreeSet<usize> = acc.keys().flat_map(|&(a, b)| [a, b]).collect();
    let keep: Vec<usize> = compared.iter().copied().collect();
    let excluded: Vec<String> = (0..data.items.len())
        .filter(|i| !compared.contains(i))
        .map(|i| data.items[i].clone())
        .collect();
    let warnings = excluded
        .iter()
        .map(|it| format!("item `{it}` was never compared and is excluded"))
        .collect();
    let new_id = |old: usize| keep.binary_search(&old).expect("compared item");
    let edges: Vec<(usize, usize)> = acc.keys().map(|&(a, b)| (new_id(a), new_id(b))).collect();
    let g = Graph::new(keep.len(), edges)?;
    let cx = enumerate_cliques(&g, 3)?;
    // relabeling preserves order, so acc's key order is the edge order
    let mut x = Vec::with_capacity(acc.len());
    let mut w = Vec::with_capacity(acc.len());
    for &(sum, n, pa, pb) in acc.values() {
        x.push(match model {
            Model::Mean => sum / n as f64,
            Model::LogOdds => ((pa as f64 + 0.5) / (pb as f64 + 0.5)).ln(),
        });
        w.push(n as f64);
    }
    let n_tri = cx.cochain_dim(2)?;
    let weights = WeightScheme::table(vec![
        Some(vec![1.0; keep.len()]),
        Some(w),
        Some(vec![1.0; n_tri]),
    ])?;
    Ok(Aggregate {
        items: keep.iter().map(|&i| data.items[i].clone()).collect(),
        excluded,
        flow: Cochain::new(&cx, 1, x)?,
        complex: cx,
        weights,
        warnings,
    })
}

/// Norms of the three parts of the comparison flow, in the weighted inner
/// product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certificate {
    pub total: f64,
    pub consistent: f64,
    /// Harmonic part.
    pub globally_inconsistent: f64,
    /// Curl-adjoint part.
    pub locally_inconsistent: f64,
    /// `(‖harmonic‖² + ‖curl part‖²) / ‖X‖²`, 0 for a zero flow.
    pub inconsistency_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingResult {
    /// `f = −g` for the least-squares potential `g`, mean zero per component.
    pub scores: Vec<f64>,
    /// Vertices by descending score; ties by ascending index.
    pub order: Vec<usize>,
    pub certificate: Certificate,
    /// Connected components of the comparison graph, each ordered like `order`.
    pub components: Vec<Vec<usize>>,
    /// Set when the graph is disconnected: scores in different components
    /// are not comparable.
    pub incomparable: bool,
    pub split: HodgeSplit,
}

/// Relative size below which score differences count as ties.
pub const TIE_TOLERANCE: f64 = 1e-10;

/// Global ranking from a comparison flow. The complex must carry triangles.
pub fn rank(cx: &CliqueComplex, x: &Cochain, w: &WeightScheme) -> Result<RankingResult> {
    if x.degree() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: x.degree(),
        });
    }
    let split = hodge_decompose(cx, x, w, Method::TwoSolve)?;
    let n = cx.graph().n_vertices();
    let scale = x.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tie = TIE_TOLERANCE * scale;
    let scores: Vec<f64> = match &split.potential {
        Some(g) => g
            .values()
            .iter()
            .map(|&v| if v.abs() <= tie { 0.0 } else { -v })
            .collect(),
        None => vec![0.0; n],
    };
    let key = |i: usize| {
        if tie > 0.0 {
            (scores[i] / tie).round()
        } else {
            0.0
        }
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| key(b).total_cmp(&key(a)).then(a.cmp(&b)));

    let labels = cx.graph().component_labels();
    let n_comp = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut components = vec![Vec::new(); n_comp];
    for &v in &order {
        components[labels[v]].push(v);
    }
    components.sort_by_key(|c| c.iter().copied().min());

    let sq = |v: f64| v * v;
    let norms = split.norms;
    let certificate = Certificate {
        total: norms.input,
        consistent: norms.exact,
        globally_inconsistent: norms.harmonic,
        locally_inconsistent: norms.coexact,
        inconsistency_ratio: if norms.input > 0.0 {
            (sq(norms.harmonic) + sq(norms.coexact)) / sq(norms.input)
        } else {
            0.0
        },
    };
    Ok(RankingResult {
        scores,
        order,
        certificate,
        incomparable: n_comp > 1,
        components,
        split,
    })
}

/// Unit-weight divergence `(div X)(i) = Σ_j X(i, j)`: positive means
/// preferred overall.
pub fn borda_divergence(cx: &CliqueComplex, x: &Cochain) -> Result<Cochain> {
    divergence(cx, &WeightScheme::Unit)?.apply(x)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeReport {
    pub i: String,
    pub j: String,
    pub x: f64,
    pub weight: f64,
}

/// Labeled ranking for export.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingReport {
    pub model: Model,
    pub scores: BTreeMap<String, f64>,
    pub order: Vec<String>,
    pub components: Vec<Vec<String>>,
    pub incomparable: bool,
    pub certificate: Certificate,
    pub borda: BTreeMap<String, f64>,
    pub edges: Vec<EdgeReport>,
    pub excluded: Vec<String>,
    pub warnings: Vec<String>,
}

/// Aggregates, ranks and labels in one step.
pub fn rank_comparisons(
    data: &ComparisonData,
    model: Model,
) -> Result<(RankingReport, RankingResult)> {
    let agg = aggregate(data, model)?;
    let res = rank(&agg.complex, &agg.flow, &agg.weights)?;
    let borda = borda_divergence(&agg.complex, &agg.flow)?;
    let label = |i: usize| agg.items[i].clone();
    let edges = agg
        .graph()
        .edges()
        .iter()
        .zip(agg.flow.values())
        .zip(agg.edge_weights())
        .map(|((&(a, b), &x), weight)| EdgeReport {
            i: label(a),
            j: label(b),
            x,
            weight,
        })
        .collect();
    let report = RankingReport {
        model,
        scores: res
            .scores
            .iter()
            .enumerate()
            .map(|(i, &s)| (label(i), s))
            .collect(),
        order: res.order.iter().map(|&i| label(i)).collect(),
        components: res
            .components
            .iter()
            .map(|c| c.iter().map(|&i| label(i)).collect())
            .collect(),
        incomparable: res.incomparable,
        certificate: res.certificate,
        borda: borda
            .values()
            .iter()
            .enumerate()
            .map(|(i, &s)| (label(i), s))
            .collect(),
        edges,
        excluded: agg.excluded.clone(),
        warnings: agg.warnings.clone(),
    };
    Ok((report, res))
}
