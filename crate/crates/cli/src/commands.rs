use std::fs;
use std::path::Path;

use hodge_core::cochain::{norm, parse_cochain, parse_weights};
use hodge_core::complex::{enumerate_cliques, full_complex, parse_graph};
use hodge_core::decompose::{hodge_decompose_with, Method};
use hodge_core::format::to_json;
use hodge_core::games::{analyze_game, GameForm};
use hodge_core::hodgerank::{parse_comparisons, rank_comparisons, Model};
use hodge_core::lsq::LsqOptions;
use hodge_core::nonlinear::{cheeger_check, one_laplacian_intervals, p_laplacian};
use hodge_core::operators::{adjoint, coboundary, hodge_laplacian, CochainMap};
use hodge_core::spectral::{
    isospectral_fingerprint, spectrum_with_tolerance, FINGERPRINT_TOLERANCE,
};
use hodge_core::{CliqueComplex, Cochain, Error, Graph, SparseMatrix, WeightScheme};
use serde_json::{json, Value};

use crate::plot;
use crate::{Cli, Command, MethodArg, ModelArg, OperatorKind};

pub enum Failure {
    Usage(String),
    /// Non-convergence; `report` is still emitted.
    Numerical {
        message: String,
        report: String,
    },
}

type Run<T> = std::result::Result<T, Failure>;

fn core(context: &Path, e: Error) -> Failure {
    let message = format!("{}: {e}", context.display());
    match e {
        Error::NonConvergence {
            iterations,
            residual,
        } => Failure::Numerical {
            report: to_json(&json!({
                "error": "non-convergence",
                "message": message,
                "iterations": iterations,
                "residual": residual,
            })),
            message,
        },
        _ => Failure::Usage(message),
    }
}

fn read(path: &Path) -> Run<String> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Run<Graph> {
    parse_graph(&read(path)?).map_err(|e| core(path, e))
}

fn load_weights(cli: &Cli, cx: &CliqueComplex) -> Run<WeightScheme> {
    match &cli.weights {
        None => Ok(WeightScheme::Unit),
        Some(p) => parse_weights(&read(p)?, cx).map_err(|e| core(p, e)),
    }
}

fn one_indexed(cx: &CliqueComplex, order: usize) -> Vec<Vec<usize>> {
    cx.cliques(order)
        .unwrap_or(&[])
        .iter()
        .map(|c| c.iter().map(|v| v + 1).collect())
        .collect()
}

fn matrix_json(m: &SparseMatrix) -> Value {
    let entries: Vec<Value> = m
        .triplets()
        .map(|(i, j, v)| json!([i + 1, j + 1, v]))
        .collect();
    json!({
        "shape": [m.nrows(), m.ncols()],
        "nnz": m.nnz(),
        "entries": entries,
    })
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(x), Value::Object(y)) = (&mut a, b) {
        x.extend(y);
    }
    a
}

/// Degree implied by the first data line of a cochain file.
fn sniff_degree(text: &str) -> usize {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .map_or(0, |l| l.split_whitespace().count().saturating_sub(2))
}

pub fn run(cli: &Cli) -> Run<String> {
    match &cli.command {
        Command::Cliques { graph, max_order } => {
            let g = load_graph(&graph.input)?;
            let cx = match max_order {
                Some(m) => enumerate_cliques(&g, *m).map_err(|e| core(&graph.input, e))?,
                None => full_complex(&g),
            };
            Ok(to_json(&cx.summary()))
        }
        Command::Operator {
            graph,
            k,
            kind,
            export,
        } => {
            let path = &graph.input;
            let cx = enumerate_cliques(&load_graph(path)?, k + 2).map_err(|e| core(path, e))?;
            let w = load_weights(cli, &cx)?;
            let d = coboundary(&cx, *k).map_err(|e| core(path, e))?;
            let (name, m, rows, cols) = match kind {
                OperatorKind::Coboundary => ("coboundary", d.matrix().clone(), k + 2, k + 1),
                OperatorKind::Adjoint => {
                    let a = adjoint(&d, &w).map_err(|e| core(path, e))?;
                    ("adjoint", a.matrix().clone(), k + 1, k + 2)
                }
            };
            if *export {
                return Ok(m.to_matrix_market());
            }
            Ok(to_json(&merge(
                matrix_json(&m),
                json!({
                    "k": k,
                    "kind": name,
                    "rows": one_indexed(&cx, rows),
                    "cols": one_indexed(&cx, cols),
                }),
            )))
        }
        Command::Laplacian { graph, k, export } => {
            let path = &graph.input;
            let cx = enumerate_cliques(&load_graph(path)?, k + 2).map_err(|e| core(path, e))?;
            let w = load_weights(cli, &cx)?;
            let l = hodge_laplacian(&cx, *k, &w).map_err(|e| core(path, e))?;
            if *export {
                return Ok(l.matrix().to_matrix_market());
            }
            Ok(to_json(&merge(
                matrix_json(l.matrix()),
                json!({ "k": k, "cliques": one_indexed(&cx, k + 1) }),
            )))
        }
        Command::Spectrum { graph, k, plot } => {
            let path = &graph.input;
            let cx = enumerate_cliques(&load_graph(path)?, k + 2).map_err(|e| core(path, e))?;
            let w = load_weights(cli, &cx)?;
            let l = hodge_laplacian(&cx, *k, &w).map_err(|e| core(path, e))?;
            let s = spectrum_with_tolerance(&l, cli.tolerance);
            Ok(if *plot {
                plot::spectrum_tsv(&s)
            } else {
                to_json(&s)
            })
        }
        Command::Betti { graph, k } => {
            let path = &graph.input;
            let g = load_graph(path)?;
            let betti_at = |cx: &CliqueComplex, k: usize| -> Run<usize> {
                let w = load_weights(cli, cx)?;
                let l = hodge_laplacian(cx, k, &w).map_err(|e| core(path, e))?;
                Ok(spectrum_with_tolerance(&l, cli.tolerance).kernel_dim)
            };
            match k {
                Some(k) => {
                    let cx = enumerate_cliques(&g, k + 2).map_err(|e| core(path, e))?;
                    Ok(to_json(&json!({ "betti": betti_at(&cx, *k)? })))
                }
                None => {
                    let cx = full_complex(&g);
                    let top = cx.clique_number().unwrap_or(0);
                    let b = (0..top)
                        .map(|k| betti_at(&cx, k))
                        .collect::<Run<Vec<_>>>()?;
                    Ok(to_json(&json!({ "betti": b })))
                }
            }
        }
        Command::Decompose {
            graph,
            cochain,
            k,
            method,
            plot,
        } => {
            let path = &graph.input;
            let g = load_graph(path)?;
            let text = read(cochain)?;
            let k = k.unwrap_or_else(|| sniff_degree(&text));
            let cx = enumerate_cliques(&g, k + 2).map_err(|e| core(path, e))?;
            let c = parse_cochain(&text, &cx, Some(k)).map_err(|e| core(cochain, e))?;
            let w = load_weights(cli, &cx)?;
            let method = match method {
                MethodArg::TwoSolve => Method::TwoSolve,
                MethodArg::LaplacianResidual => Method::LaplacianResidual,
            };
            let opts = LsqOptions {
                relative_tolerance: cli
                    .tolerance
                    .unwrap_or(LsqOptions::default().relative_tolerance),
                max_iterations: cli.max_iterations,
            };
            let split =
                hodge_decompose_with(&cx, &c, &w, method, &opts).map_err(|e| core(path, e))?;
            if *plot {
                return Ok(plot::split_tsv(&cx, &split));
            }
            let l = hodge_laplacian(&cx, k, &w).map_err(|e| core(path, e))?;
            let lh = Cochain::from_values(k, l.matrix().mul_vec(split.harmonic.values()));
            let recon = split
                .input
                .sub(&split.exact)
                .and_then(|r| r.sub(&split.harmonic))
                .and_then(|r| r.sub(&split.coexact))
                .and_then(|r| norm(&r, &w))
                .map_err(|e| core(path, e))?;
            let lh_norm = norm(&lh, &w).map_err(|e| core(path, e))?;
            Ok(to_json(&json!({
                "k": k,
                "method": split.method,
                "cliques": one_indexed(&cx, k + 1),
                "input": split.input.values(),
                "exact": split.exact.values(),
                "coexact": split.coexact.values(),
                "harmonic": split.harmonic.values(),
                "potential": split.potential.as_ref().map(|p| p.values().to_vec()),
                "prepotential": split.prepotential.values(),
                "norms": split.norms,
                "residuals": split.residuals,
                "tolerance": opts.relative_tolerance,
                "checks": {
                    "reconstruction_error": recon,
                    "laplacian_of_harmonic": lh_norm,
                },
            })))
        }
        Command::Rank { input, model, plot } => {
            let data = parse_comparisons(&read(input)?).map_err(|e| core(input, e))?;
            let model = match model {
                ModelArg::Mean => Model::Mean,
                ModelArg::Logodds => Model::LogOdds,
            };
            let (report, _) = rank_comparisons(&data, model).map_err(|e| core(input, e))?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            Ok(if *plot {
                plot::ranking_tsv(&report)
            } else {
                to_json(&report)
            })
        }
        Command::Game { input, plot } => {
            let form = GameForm::parse_json(&read(input)?).map_err(|e| core(input, e))?;
            let report = analyze_game(&form).map_err(|e| core(input, e))?;
            Ok(if *plot {
                plot::flow_tsv(&report.flow)
            } else {
                to_json(&report)
            })
        }
        Command::Cheeger { graph } => {
            let g = load_graph(&graph.input)?;
            let r = cheeger_check(&g).map_err(|e| core(&graph.input, e))?;
            Ok(to_json(&r))
        }
        Command::Plap { graph, p, f } => {
            let g = load_graph(&graph.input)?;
            let cx = enumerate_cliques(&g, 1).map_err(|e| core(&graph.input, e))?;
            let fv = parse_cochain(&read(f)?, &cx, Some(0)).map_err(|e| core(f, e))?;
            let values = p_laplacian(&g, fv.values(), *p).map_err(|e| core(&graph.input, e))?;
            let mut out = json!({ "p": p, "values": values });
            if *p == 1.0 {
                let iv =
                    one_laplacian_intervals(&g, fv.values()).map_err(|e| core(&graph.input, e))?;
                out = merge(out, json!({ "intervals": iv }));
            }
            Ok(to_json(&out))
        }
        Command::Isospectral { max_k, a, b } => {
            let fa = isospectral_fingerprint(&load_graph(a)?, *max_k).map_err(|e| core(a, e))?;
            let fb = isospectral_fingerprint(&load_graph(b)?, *max_k).map_err(|e| core(b, e))?;
            let tol = cli.tolerance.unwrap_or(FINGERPRINT_TOLERANCE);
            let cmp = fa.compare_with(&fb, tol);
            let eig = |f: &hodge_core::spectral::Fingerprint| -> Vec<Vec<f64>> {
                f.spectra.iter().map(|s| s.eigenvalues.clone()).collect()
            };
            Ok(to_json(&json!({
                "distinguished": cmp.distinguished,
                "distinguished_at": cmp.distinguished_at,
                "max_k": cmp.max_k,
                "tolerance": tol,
                "spectra": { "a": eig(&fa), "b": eig(&fb) },
            })))
        }
    }
}

pub fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.output {
        Some(p) => fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
