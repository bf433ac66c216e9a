//! Finite games in normal form: strategy-profile graphs, game flows, and
//! their potential/harmonic decomposition.
//!
//! Profiles are indexed lexicographically with the first player most
//! significant and each player's labels in input order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cochain::{Cochain, WeightScheme};
use crate::complex::{enumerate_cliques, CliqueComplex, Graph};
use crate::decompose::{hodge_decompose, Method};
use crate::error::{Error, Result};
use crate::operators::{curl, hodge_laplacian, CochainMap};

#[derive(Debug, Clone, PartialEq)]
pub struct GameForm {
    strategies: Vec<Vec<String>>,
    /// `utilities[i][p]` is player `i`'s payoff at profile `p`.
    utilities: Vec<Vec<f64>>,
}

/// JSON layout: strategy labels per player, and per player a table keyed by
/// comma-joined profile labels such as `"a,b,a"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameSpec {
    pub strategies: Vec<Vec<String>>,
    pub utilities: Vec<BTreeMap<String, f64>>,
}

impl GameForm {
    pub fn new(strategies: Vec<Vec<String>>, utilities: Vec<Vec<f64>>) -> Result<Self> {
        if strategies.is_empty() {
            return Err(Error::Invalid("a game needs at least one player".into()));
        }
        for (i, s) in strategies.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::Invalid(format!(
                    "player {} has no strategies",
                    i + 1
                )));
            }
            let mut sorted = s.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != s.len() {
                return Err(Error::Invalid(format!(
                    "player {} has duplicate strategy labels",
                    i + 1
                )));
            }
        }
        let n_profiles: usize = strategies.iter().map(Vec::len).product();
        if utilities.len() != strategies.len() {
            return Err(Error::Invalid(format!(
                "{} players but {} utility tables",
                strategies.len(),
                utilities.len()
            )));
        }
        for (i, u) in utilities.iter().enumerate() {
            if u.len() != n_profiles {
                return Err(Error::Invalid(format!(
                    "player {} has {} utilities for {n_profiles} profiles",
                    i + 1,
                    u.len()
                )));
            }
            if let Some(x) = u.iter().find(|x| !x.is_finite()) {
                return Err(Error::Invalid(format!(
                    "player {} has non-finite utility {x}",
                    i + 1
                )));
            }
        }
        Ok(GameForm {
            strategies,
            utilities,
        })
    }

    pub fn from_spec(spec: GameSpec) -> Result<Self> {
        for s in spec.strategies.iter().flatten() {
            if s.contains(',') || s.trim() != s || s.is_empty() {
                return Err(Error::Invalid(format!(
                    "strategy label `{s}` must be nonempty, unpadded and comma-free"
                )));
            }
        }
        let shape = GameForm {
            strategies: spec.strategies.clone(),
            utilities: Vec::new(),
        };
        let n = shape.n_profiles();
        let labels: Vec<String> = (0..n).map(|p| shape.profile_label(p)).collect();
        let mut utilities = Vec::with_capacity(spec.utilities.len());
        for (i, table) in spec.utilities.iter().enumerate() {
            let mut u = Vec::with_capacity(n);
            for l in &labels {
                let key = table
                    .keys()
                    .find(|k| normalize_key(k) == *l)
                    .ok_or_else(|| {
                        Error::Invalid(format!("player {} has no utility for profile `{l}`", i + 1))
                    })?;
                u.push(table[key]);
            }
            if table.len() != n {
                return Err(Error::Invalid(format!(
                    "player {} lists {} utilities for {n} profiles",
                    i + 1,
                    table.len()
                )));
            }
            utilities.push(u);
        }
        GameForm::new(spec.strategies, utilities)
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let spec: GameSpec = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        GameForm::from_spec(spec)
    }

    pub fn n_players(&self) -> usize {
        self.strategies.len()
    }

    pub fn strategies(&self) -> &[Vec<String>] {
        &self.strategies
    }

    pub fn utility(&self, player: usize) -> &[f64] {
        &self.utilities[player]
    }

    pub fn n_profiles(&self) -> usize {
        self.strategies.iter().map(Vec::len).product()
    }

    /// Strategy indices of profile `p`.
    pub fn profile(&self, mut p: usize) -> Vec<usize> {
        let mut s = vec![0; self.n_players()];
        for i in (0..self.n_players()).rev() {
            let m = self.strategies[i].len();
            s[i] = p % m;
            p /= m;
        }
        s
    }

    pub fn profile_index(&self, s: &[usize]) -> usize {
        s.iter()
            .zip(&self.strategies)
            .fold(0, |acc, (&si, set)| acc * set.len() + si)
    }

    /// Comma-joined labels, e.g. `a,b,a`.
    pub fn profile_label(&self, p: usize) -> String {
        self.profile(p)
            .iter()
            .zip(&self.strategies)
            .map(|(&si, set)| set[si].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// The single player whose strategy differs between two profiles.
    pub fn deviator(&self, p: usize, q: usize) -> Option<usize> {
        let (a, b) = (self.profile(p), self.profile(q));
        let diff: Vec<usize> = (0..a.len()).filter(|&i| a[i] != b[i]).collect();
        (diff.len() == 1).then(|| diff[0])
    }

    /// Tolerance `1e-10 · max(1, max |u|)` for the game predicates.
    pub fn tolerance(&self) -> f64 {
        let m = self
            .utilities
            .iter()
            .flatten()
            .fold(0.0f64, |m, x| m.max(x.abs()));
        1e-10 * m.max(1.0)
    }
}

fn normalize_key(k: &str) -> String {
    k.split(',').map(str::trim).collect::<Vec<_>>().join(",")
}

/// Profile graph: edges join profiles that differ in exactly one player's
/// strategy.
pub fn strategy_graph(form: &GameForm) -> Graph {
    let n = form.n_profiles();
    let mut edges = Vec::new();
    for p in 0..n {
        let s = form.profile(p);
        for i in 0..form.n_players() {
            for alt in s[i] + 1..form.strategies[i].len() {
                let mut t = s.clone();
                t[i] = alt;
                edges.push((p, form.profile_index(&t)));
            }
        }
    }
    Graph::new(n, edges).expect("profile edges are valid")
}

/// Profile graph with its triangles, ready for decomposition.
pub fn profile_complex(form: &GameForm) -> CliqueComplex {
    enumerate_cliques(&strategy_graph(form), 3).expect("max order is positive")
}

/// `X(s, t) = f_i(t) − f_i(s)` where `i` is the player who moves.
pub fn game_flow(form: &GameForm, cx: &CliqueComplex) -> Result<Cochain> {
    Cochain::from_fn(cx, 1, |e| {
        let i = form
            .deviator(e[0], e[1])
            .expect("profile graph edges differ in one player");
        form.utilities[i][e[1]] - form.utilities[i][e[0]]
    })
}

/// `grad f_1 = … = grad f_n` on every edge, within [`GameForm::tolerance`].
pub fn is_potential_game(form: &GameForm) -> bool {
    let tol = form.tolerance();
    let g = strategy_graph(form);
    g.edges().iter().all(|&(s, t)| {
        let d0 = form.utilities[0][t] - form.utilities[0][s];
        form.utilities[1..]
            .iter()
            .all(|u| ((u[t] - u[s]) - d0).abs() <= tol)
    })
}

/// `Δ₀(f_1 + … + f_n) = 0` within [`GameForm::tolerance`].
pub fn is_harmonic_game(form: &GameForm) -> bool {
    let cx = enumerate_cliques(&strategy_graph(form), 2).expect("max order is positive");
    let l0 = hodge_laplacian(&cx, 0, &WeightScheme::Unit).expect("levels enumerated");
    let total: Vec<f64> = (0..form.n_profiles())
        .map(|p| form.utilities.iter().map(|u| u[p]).sum())
        .collect();
    let tol = form.tolerance() * form.n_players() as f64;
    l0.matrix().mul_vec(&total).iter().all(|v| v.abs() <= tol)
}

/// Profiles where no player gains by deviating alone.
pub fn pure_nash(form: &GameForm) -> Vec<usize> {
    (0..form.n_profiles())
        .filter(|&p| {
            let s = form.profile(p);
            (0..form.n_players()).all(|i| {
                (0..form.strategies[i].len()).all(|alt| {
                    let mut t = s.clone();
                    t[i] = alt;
                    form.utilities[i][form.profile_index(&t)] <= form.utilities[i][p]
                })
            })
        })
        .collect()
}

/// `X = −grad f + X_H` for a curl-free flow on a profile graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GameFlowSplit {
    /// `f`, mean zero on each component.
    pub potential: Cochain,
    /// `−grad f`.
    pub potential_flow: Cochain,
    pub harmonic: Cochain,
    /// Norm of the discarded coexact remainder.
    pub coexact_norm: f64,
}

pub fn decompose_game_flow(cx: &CliqueComplex, x: &Cochain) -> Result<GameFlowSplit> {
    let scale = x.values().iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-10 * scale;
    let c = curl(cx)?.apply(x)?;
    if let Some(worst) = c.values().iter().map(|v| v.abs()).reduce(f64::max) {
        if worst > tol {
            return Err(Error::Precondition(format!(
                "flow has curl {worst:e}; game flows are curl-free"
            )));
        }
    }
    let split = hodge_decompose(cx, x, &WeightScheme::Unit, Method::TwoSolve)?;
    if split.norms.coexact > 1e-8 * scale {
        return Err(Error::Precondition(format!(
            "coexact part {:e} of a curl-free flow exceeds tolerance",
            split.norms.coexact
        )));
    }
    let g = split.potential.expect("degree-1 splits carry a potential");
    Ok(GameFlowSplit {
        potential: g.scale(-1.0),
        potential_flow: split.exact,
        harmonic: split.harmonic,
        coexact_norm: split.norms.coexact,
    })
}

fn labels(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Commuter, robber and policeman each pick road `a` or `b`. The commuter
/// loses 2 for every other player on the same road, the robber loses 1 if the
/// policeman is on the robber's road, and the policeman gets the negative of
/// the robber's payoff.
pub fn road_sharing() -> GameForm {
    let shape = GameForm {
        strategies: vec![labels(&["a", "b"]); 3],
        utilities: Vec::new(),
    };
    let mut u = vec![Vec::new(); 3];
    for p in 0..8 {
        let s = shape.profile(p);
        let (c, r, pol) = (s[0], s[1], s[2]);
        let commuter = -2.0 * (usize::from(r == c) + usize::from(pol == c)) as f64;
        let robber = if pol == r { -1.0 } else { 0.0 };
        u[0].push(commuter);
        u[1].push(robber);
        u[2].push(-robber);
    }
    GameForm::new(shape.strategies, u).expect("well-formed")
}

/// Two-player rock-paper-scissors with payoffs +1 win, −1 loss, 0 tie.
pub fn rock_paper_scissors() -> GameForm {
    let mut u1 = Vec::with_capacity(9);
    for a in 0..3i32 {
        for b in 0..3i32 {
            u1.push(match (a - b).rem_euclid(3) {
                0 => 0.0,
                1 => 1.0,
                _ => -1.0,
            });
        }
    }
    let u2 = u1.iter().map(|x| -x).collect();
    GameForm::new(vec![labels(&["r", "p", "s"]); 2], vec![u1, u2]).expect("well-formed")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowEdge {
    pub from: String,
    pub to: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameReport {
    pub n_players: usize,
    pub profiles: Vec<String>,
    pub n_edges: usize,
    pub flow: Vec<FlowEdge>,
    pub potential_game: bool,
    pub harmonic_game: bool,
    /// Potential `f` per profile label.
    pub potential: BTreeMap<String, f64>,
    pub potential_flow: Vec<FlowEdge>,
    pub harmonic_flow: Vec<FlowEdge>,
    pub pure_nash: Vec<String>,
}

fn oriented(form: &GameForm, cx: &CliqueComplex, c: &Cochain) -> Vec<FlowEdge> {
    cx.graph()
        .edges()
        .iter()
        .zip(c.values())
        .map(|(&(s, t), &v)| {
            // point every arrow in the improving direction; zeros stay ascending
            let (from, to, value) = if v < 0.0 { (t, s, -v) } else { (s, t, v) };
            FlowEdge {
                from: form.profile_label(from),
                to: form.profile_label(to),
                value,
            }
        })
        .collect()
}

/// Everything the game subcommand reports.
pub fn analyze_game(form: &GameForm) -> Result<GameReport> {
    let cx = profile_complex(form);
    let x = game_flow(form, &cx)?;
    let split = decompose_game_flow(&cx, &x)?;
    Ok(GameReport {
        n_players: form.n_players(),
        profiles: (0..form.n_profiles())
            .map(|p| form.profile_label(p))
            .collect(),
        n_edges: cx.graph().n_edges(),
        flow: oriented(form, &cx, &x),
        potential_game: is_potential_game(form),
        harmonic_game: is_harmonic_game(form),
        potential: split
            .potential
            .values()
            .iter()
            .enumerate()
            .map(|(p, &f)| (form.profile_label(p), f))
            .collect(),
        potential_flow: oriented(form, &cx, &split.potential_flow),
        harmonic_flow: oriented(form, &cx, &split.harmonic),
        pure_nash: pure_nash(form)
            .into_iter()
            .map(|p| form.profile_label(p))
            .collect(),
    })
}
