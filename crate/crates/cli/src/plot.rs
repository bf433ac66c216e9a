//! Flat TSV tables for external plotting tools. Each table starts with a
//! header row.

use hodge_core::decompose::HodgeSplit;
use hodge_core::format::fmt_num;
use hodge_core::games::FlowEdge;
use hodge_core::hodgerank::RankingReport;
use hodge_core::spectral::Spectrum;
use hodge_core::CliqueComplex;

/// `index eigenvalue`, 1-based index in ascending order.
pub fn spectrum_tsv(s: &Spectrum) -> String {
    let mut out = String::from("index\teigenvalue\n");
    for (i, x) in s.eigenvalues.iter().enumerate() {
        out.push_str(&format!("{}\t{}\n", i + 1, fmt_num(*x)));
    }
    out
}

/// One row per clique: its vertices, then `x exact harmonic coexact`. For
/// edge flows the vertex columns are `i j`.
pub fn split_tsv(cx: &CliqueComplex, split: &HodgeSplit) -> String {
    let k = split.degree();
    let names: Vec<String> = if k == 1 {
        vec!["i".into(), "j".into()]
    } else {
        (1..=k + 1).map(|v| format!("v{v}")).collect()
    };
    let mut out = names.join("\t");
    out.push_str("\tx\texact\tharmonic\tcoexact\n");
    let cliques = cx.cliques(k + 1).unwrap_or(&[]);
    for (r, c) in cliques.iter().enumerate() {
        let ids: Vec<String> = c.iter().map(|v| (v + 1).to_string()).collect();
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            ids.join("\t"),
            fmt_num(split.input.values()[r]),
            fmt_num(split.exact.values()[r]),
            fmt_num(split.harmonic.values()[r]),
            fmt_num(split.coexact.values()[r]),
        ));
    }
    out
}

/// `rank item score`, best first.
pub fn ranking_tsv(r: &RankingReport) -> String {
    let mut out = String::from("rank\titem\tscore\n");
    for (i, item) in r.order.iter().enumerate() {
        out.push_str(&format!(
            "{}\t{}\t{}\n",
            i + 1,
            item,
            fmt_num(r.scores[item])
        ));
    }
    out
}

/// `from to value` with every value nonnegative.
pub fn flow_tsv(edges: &[FlowEdge]) -> String {
    let mut out = String::from("from\tto\tvalue\n");
    for e in edges {
        out.push_str(&format!("{}\t{}\t{}\n", e.from, e.to, fmt_num(e.value)));
    }
    out
}
