mod common;

use common::{dot, l2, sub};
use hodge_core::cochain::inner_product;
use hodge_core::games::{game_flow, profile_complex, strategy_graph, GameForm};
use hodge_core::hodgerank::{rank, rank_comparisons, ComparisonData, Model, Rating, Records};
use hodge_core::nonlinear::{cheeger_constant, p_laplacian};
use hodge_core::{
    betti, coboundary, curl, enumerate_cliques, full_complex, harmonic_basis, hodge_decompose,
    hodge_laplacian, verify_operator_pair, CliqueComplex, Cochain, CochainMap, Graph, Method,
    WeightScheme,
};
use nalgebra::DMatrix;
use proptest::prelude::*;
use proptest::sample::subsequence;

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

fn arb_graph(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n).prop_flat_map(|n| {
        let all = pairs(n);
        let len = all.len();
        subsequence(all, 0..=len).prop_map(move |e| Graph::new(n, e).unwrap())
    })
}

/// A path through all vertices plus arbitrary extra edges.
fn arb_connected(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n).prop_flat_map(|n| {
        let all = pairs(n);
        let len = all.len();
        subsequence(all, 0..=len).prop_map(move |mut e| {
            e.extend((1..n).map(|v| (v - 1, v)));
            Graph::new(n, e).unwrap()
        })
    })
}

fn values(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0..10.0f64, len)
}

fn weights(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.2..5.0f64, len)
}

/// Graph, order-3 complex, a random 1-cochain and random positive weights on
/// vertices, edges and triangles.
fn arb_weighted_flow() -> impl Strategy<Value = (CliqueComplex, Cochain, WeightScheme)> {
    arb_connected(2, 8).prop_flat_map(|g| {
        let cx = enumerate_cliques(&g, 3).unwrap();
        let dims: Vec<usize> = (0..3).map(|k| cx.cochain_dim(k).unwrap()).collect();
        (
            values(dims[1]),
            weights(dims[0]),
            weights(dims[1]),
            weights(dims[2]),
        )
            .prop_map(move |(x, w0, w1, w2)| {
                let c = Cochain::new(&cx, 1, x).unwrap();
                let w = WeightScheme::table(vec![Some(w0), Some(w1), Some(w2)]).unwrap();
                (cx.clone(), c, w)
            })
    })
}

fn dense_laplacian(cx: &CliqueComplex, k: usize, w: &WeightScheme) -> DMatrix<f64> {
    hodge_laplacian(cx, k, w).unwrap().matrix().to_dense()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coboundary_squares_to_zero(g in arb_graph(1, 9)) {
        let cx = full_complex(&g);
        for k in 1..cx.n_levels().saturating_sub(1) {
            let p = coboundary(&cx, k).unwrap().matrix().matmul(coboundary(&cx, k - 1).unwrap().matrix());
            prop_assert!(p.triplets().all(|(_, _, v)| v == 0.0));
        }
    }

    #[test]
    fn unit_laplacians_are_symmetric_psd(g in arb_graph(1, 8)) {
        let cx = full_complex(&g);
        for k in 0..cx.n_levels().saturating_sub(1) {
            let l = dense_laplacian(&cx, k, &WeightScheme::Unit);
            prop_assert_eq!(&l, &l.transpose());
            if l.nrows() > 0 {
                let min = l.symmetric_eigen().eigenvalues.min();
                prop_assert!(min >= -1e-9, "k={} min eigenvalue {}", k, min);
            }
        }
    }

    #[test]
    fn graph_laplacian_is_degree_minus_adjacency(g in arb_graph(1, 10)) {
        let cx = enumerate_cliques(&g, 2).unwrap();
        let l = dense_laplacian(&cx, 0, &WeightScheme::Unit);
        let n = g.n_vertices();
        let expected = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                g.degree(i) as f64
            } else if g.has_edge(i, j) {
                -1.0
            } else {
                0.0
            }
        });
        prop_assert_eq!(l, expected);
    }

    #[test]
    fn weighted_laplacian_is_self_adjoint((cx, _x, w) in arb_weighted_flow()) {
        for k in 0..2 {
            let l = dense_laplacian(&cx, k, &w);
            let wk = w.level(k, l.nrows()).unwrap();
            let wl = DMatrix::from_fn(l.nrows(), l.ncols(), |i, j| wk[i] * l[(i, j)]);
            let asym = (&wl - wl.transpose()).abs().max();
            prop_assert!(asym <= 1e-12 * wl.abs().max().max(1.0));
        }
    }

    #[test]
    fn euler_characteristic_matches_betti_numbers(g in arb_graph(1, 8)) {
        let cx = full_complex(&g);
        let top = cx.clique_number().unwrap_or(0);
        let mut chi_cells = 0i64;
        let mut chi_betti = 0i64;
        for k in 0..top {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            chi_cells += sign * cx.count(k + 1).unwrap() as i64;
            chi_betti += sign * betti(&cx, k, &WeightScheme::Unit).unwrap() as i64;
        }
        prop_assert_eq!(chi_cells, chi_betti);
    }

    #[test]
    fn decomposition_reconstructs_orthogonally((cx, x, w) in arb_weighted_flow()) {
        let s = hodge_decompose(&cx, &x, &w, Method::TwoSolve).unwrap();
        let nx = inner_product(&x, &x, &w).unwrap().sqrt();
        let sum = s.exact.add(&s.coexact).unwrap().add(&s.harmonic).unwrap();
        prop_assert!(l2(&sub(sum.values(), x.values())) <= 1e-8 * nx.max(1.0));
        let parts = [&s.exact, &s.coexact, &s.harmonic];
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let ip = inner_product(parts[i], parts[j], &w).unwrap().abs();
            prop_assert!(ip <= 1e-8 * nx * nx + 1e-12, "<{},{}> = {}", i, j, ip);
        }
    }

    #[test]
    fn decomposition_is_idempotent((cx, x, w) in arb_weighted_flow()) {
        let s = hodge_decompose(&cx, &x, &w, Method::TwoSolve).unwrap();
        let scale = l2(x.values()).max(1.0);
        for (part, pick) in [(&s.exact, 0usize), (&s.coexact, 1), (&s.harmonic, 2)] {
            let again = hodge_decompose(&cx, part, &w, Method::TwoSolve).unwrap();
            let kept = [&again.exact, &again.coexact, &again.harmonic][pick];
            prop_assert!(l2(&sub(kept.values(), part.values())) <= 1e-7 * scale);
        }
    }

    #[test]
    fn methods_agree_under_weights((cx, x, w) in arb_weighted_flow()) {
        let a = hodge_decompose(&cx, &x, &w, Method::TwoSolve).unwrap();
        let b = hodge_decompose(&cx, &x, &w, Method::LaplacianResidual).unwrap();
        let scale = l2(x.values()).max(1.0);
        prop_assert!(l2(&sub(a.exact.values(), b.exact.values())) <= 1e-7 * scale);
        prop_assert!(l2(&sub(a.coexact.values(), b.coexact.values())) <= 1e-7 * scale);
        prop_assert!(l2(&sub(a.harmonic.values(), b.harmonic.values())) <= 1e-7 * scale);
    }

    #[test]
    fn harmonic_dimension_is_betti(g in arb_graph(1, 8)) {
        let cx = enumerate_cliques(&g, 4).unwrap();
        for k in 0..2 {
            let basis = harmonic_basis(&cx, k, &WeightScheme::Unit).unwrap();
            prop_assert_eq!(basis.len(), betti(&cx, k, &WeightScheme::Unit).unwrap());
            let l = hodge_laplacian(&cx, k, &WeightScheme::Unit).unwrap();
            for h in &basis {
                prop_assert!(l2(l.apply(h).unwrap().values()) <= 1e-9);
            }
        }
    }

    #[test]
    fn coboundary_pairs_satisfy_subspace_identities(g in arb_graph(2, 7)) {
        let cx = enumerate_cliques(&g, 3).unwrap();
        let a = coboundary(&cx, 1).unwrap().matrix().to_dense();
        let b = coboundary(&cx, 0).unwrap().matrix().to_dense();
        let rep = verify_operator_pair(&a, &b).unwrap();
        prop_assert!(rep.all_hold());
        prop_assert_eq!(rep.harmonic_dim, betti(&cx, 1, &WeightScheme::Unit).unwrap());
    }

    #[test]
    fn ranking_scales_with_the_flow(
        (cx, x) in arb_connected(2, 8).prop_flat_map(|g| {
            let cx = enumerate_cliques(&g, 3).unwrap();
            let m = g.n_edges();
            values(m).prop_map(move |v| (cx.clone(), Cochain::new(&cx, 1, v).unwrap()))
        }),
        c in 0.1..10.0f64,
    ) {
        let a = rank(&cx, &x, &WeightScheme::Unit).unwrap();
        let b = rank(&cx, &x.scale(c), &WeightScheme::Unit).unwrap();
        for (sa, sb) in a.scores.iter().zip(&b.scores) {
            prop_assert!((c * sa - sb).abs() <= 1e-7 * (1.0 + c * sa.abs()));
        }
        prop_assert!((a.certificate.inconsistency_ratio - b.certificate.inconsistency_ratio).abs() <= 1e-9);
        // scores are centered per component
        prop_assert!(a.scores.iter().sum::<f64>().abs() <= 1e-7 * l2(x.values()).max(1.0));
    }

    #[test]
    fn voter_offsets_do_not_change_rankings(
        truth in prop::collection::vec(-5.0..5.0f64, 2..7),
        offsets in prop::collection::vec(-100.0..100.0f64, 3),
    ) {
        let mut rated = Vec::new();
        let mut shifted = Vec::new();
        for (v, off) in offsets.iter().enumerate() {
            for (i, s) in truth.iter().enumerate() {
                let voter = format!("v{v}");
                let item = format!("i{i}");
                rated.push(Rating { voter: voter.clone(), item: item.clone(), score: *s });
                shifted.push(Rating { voter, item, score: s + off });
            }
        }
        let a = rank_comparisons(&ComparisonData::new(Records::Ratings(rated)).unwrap(), Model::Mean).unwrap().0;
        let b = rank_comparisons(&ComparisonData::new(Records::Ratings(shifted)).unwrap(), Model::Mean).unwrap().0;
        for (k, sa) in &a.scores {
            prop_assert!((sa - b.scores[k]).abs() <= 1e-7);
        }
        // complete noiseless data: scores are the centered truth
        let mean = truth.iter().sum::<f64>() / truth.len() as f64;
        for (i, t) in truth.iter().enumerate() {
            let got = a.scores[&format!("i{i}")];
            prop_assert!((got - (t - mean)).abs() <= 1e-7);
        }
        prop_assert!(a.certificate.inconsistency_ratio <= 1e-12);
    }

    #[test]
    fn game_flows_are_curl_free_with_expected_degrees(
        (sizes, utilities) in prop::collection::vec(1usize..=4, 1..=3).prop_flat_map(|sizes| {
            let profiles: usize = sizes.iter().product();
            let players = sizes.len();
            (Just(sizes), prop::collection::vec(prop::collection::vec(-20i32..=20, profiles), players))
        }),
        shift in -50i32..50,
    ) {
        let strategies: Vec<Vec<String>> = sizes.iter().map(|&s| (0..s).map(|i| i.to_string()).collect()).collect();
        let utils: Vec<Vec<f64>> = utilities.iter().map(|u| u.iter().map(|&v| v as f64).collect()).collect();
        let form = GameForm::new(strategies.clone(), utils.clone()).unwrap();
        let g = strategy_graph(&form);
        let expected: usize = sizes.iter().map(|s| s - 1).sum();
        prop_assert!((0..g.n_vertices()).all(|v| g.degree(v) == expected));

        let cx = profile_complex(&form);
        let x = game_flow(&form, &cx).unwrap();
        prop_assert!(curl(&cx).unwrap().apply(&x).unwrap().values().iter().all(|&v| v == 0.0));

        // a payoff shift that ignores the player's own move leaves the flow alone
        let mut moved = utils;
        for (p, u) in moved[0].iter_mut().enumerate() {
            let others: usize = form.profile(p)[1..].iter().sum();
            *u += (shift + others as i32) as f64;
        }
        let form2 = GameForm::new(strategies, moved).unwrap();
        prop_assert_eq!(game_flow(&form2, &cx).unwrap(), x);
    }

    #[test]
    fn p_laplacian_is_odd_and_shift_invariant(
        (g, f) in arb_graph(1, 9).prop_flat_map(|g| {
            let n = g.n_vertices();
            (Just(g), values(n))
        }),
        p in 1.0..4.0f64,
        c in -3.0..3.0f64,
    ) {
        let a = p_laplacian(&g, &f, p).unwrap();
        let neg: Vec<f64> = f.iter().map(|x| -x).collect();
        let b = p_laplacian(&g, &neg, p).unwrap();
        prop_assert!(a.iter().zip(&b).all(|(x, y)| (x + y).abs() <= 1e-9 * (1.0 + x.abs())));
        let shifted: Vec<f64> = f.iter().map(|x| x + c).collect();
        let s = p_laplacian(&g, &shifted, p).unwrap();
        prop_assert!(a.iter().zip(&s).all(|(x, y)| (x - y).abs() <= 1e-6 * (1.0 + x.abs())));
        // Σ_i (L_p f)(i) = 0: every edge contributes with both signs
        prop_assert!(a.iter().sum::<f64>().abs() <= 1e-6 * (1.0 + a.iter().map(|x| x.abs()).sum::<f64>()));
        if p == 2.0 {
            prop_assert!(dot(&a, &f) >= -1e-9);
        }
    }

    #[test]
    fn cheeger_constant_ignores_vertex_labels(
        (g, perm) in arb_connected(2, 9).prop_flat_map(|g| {
            let n = g.n_vertices();
            (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        }),
    ) {
        let h = cheeger_constant(&g).unwrap();
        let h2 = cheeger_constant(&g.relabel(&perm).unwrap()).unwrap();
        prop_assert_eq!(h.ratio, h2.ratio);
        let cut = g
            .edges()
            .iter()
            .filter(|&&(a, b)| h.subset.contains(&a) != h.subset.contains(&b))
            .count() as u64;
        prop_assert_eq!(cut, h.boundary_edges);
    }
}
