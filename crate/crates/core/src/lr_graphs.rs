//! Principal and dual principal graphs of the Longo-Rehren inclusion
//! `N (x) N^opp ⊂ M`, alpha-induction intertwiner counts, and the depth-2
//! test.
//!
//! Even vertices are pairs `(i, j)`, standing for `[rho_i (x) rho_{dual j}^opp]`
//! in the principal graph and for `[beta_{i, dual j}]` in the dual one. Odd
//! vertices `k` stand for `[rho_k (x) id][gamma]`. The pair `(i, j)` is
//! joined to `k` by `N[i][j][k]` edges, and the graph is the connected
//! component of `(0, 0)`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Result;
use crate::fusion_ring::{FusionRing, DEFAULT_TOLERANCE};
use crate::report::Check;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BipartiteGraph {
    pub even_vertices: Vec<(usize, usize)>,
    pub odd_vertices: Vec<usize>,
    /// Edge multiplicities `((i, j), k) -> m`, only nonzero entries.
    pub edges: BTreeMap<((usize, usize), usize), u32>,
    /// Set on a dual principal graph built without a non-degeneracy
    /// assertion.
    pub unverified_chirality: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Chirality {
    Plus,
    Minus,
}

impl BipartiteGraph {
    /// Same vertices and edges, ignoring the chirality tag.
    pub fn same_graph(&self, other: &BipartiteGraph) -> bool {
        self.even_vertices == other.even_vertices
            && self.odd_vertices == other.odd_vertices
            && self.edges == other.edges
    }

    pub fn edge_count(&self) -> u32 {
        self.edges.values().sum()
    }

    /// Applies a label map `i -> perm[i]` to every vertex and re-sorts.
    pub fn relabeled(&self, perm: &[usize]) -> BipartiteGraph {
        let mut even: Vec<_> = self
            .even_vertices
            .iter()
            .map(|&(i, j)| (perm[i], perm[j]))
            .collect();
        even.sort_unstable();
        let mut odd: Vec<_> = self.odd_vertices.iter().map(|&k| perm[k]).collect();
        odd.sort_unstable();
        let edges = self
            .edges
            .iter()
            .map(|(&((i, j), k), &m)| (((perm[i], perm[j]), perm[k]), m))
            .collect();
        BipartiteGraph {
            even_vertices: even,
            odd_vertices: odd,
            edges,
            unverified_chirality: self.unverified_chirality,
        }
    }

    /// Degree, connectivity and root checks.
    pub fn checks(&self) -> Vec<Check> {
        let mut degree: BTreeMap<String, u32> = BTreeMap::new();
        for (&((i, j), k), &m) in &self.edges {
            *degree.entry(format!("e_{i}_{j}")).or_default() += m;
            *degree.entry(format!("o_{k}")).or_default() += m;
        }
        let isolated = self
            .even_vertices
            .iter()
            .map(|&(i, j)| format!("e_{i}_{j}"))
            .chain(self.odd_vertices.iter().map(|k| format!("o_{k}")))
            .find(|v| degree.get(v).copied().unwrap_or(0) == 0);
        let root = self.even_vertices.contains(&(0, 0));
        vec![
            Check::new(
                "no_isolated_vertices",
                isolated.is_none(),
                isolated.map_or("every vertex has degree >= 1".into(), |v| {
                    format!("{v} is isolated")
                }),
            ),
            Check::new("contains_root", root, "even vertex (0,0) is present"),
            Check::new("connected", self.is_connected(), "graph is connected"),
        ]
    }

    fn is_connected(&self) -> bool {
        let Some(&start) = self.even_vertices.first() else {
            return false;
        };
        let mut seen_even = BTreeSet::from([start]);
        let mut seen_odd = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &(_, k) in self.edges.keys().filter(|(e, _)| *e == v) {
                if !seen_odd.insert(k) {
                    continue;
                }
                for &(e, _) in self.edges.keys().filter(|(_, k2)| *k2 == k) {
                    if seen_even.insert(e) {
                        queue.push_back(e);
                    }
                }
            }
        }
        seen_even.len() == self.even_vertices.len() && seen_odd.len() == self.odd_vertices.len()
    }

    /// Graphviz rendering: even vertices are boxes `e_i_j`, odd vertices
    /// circles `o_k`, an edge of multiplicity `m` is written `m` times.
    /// Output depends only on the graph and the labels.
    pub fn to_dot(&self, ring: &FusionRing, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph {} {{", dot_id(name));
        for &(i, j) in &self.even_vertices {
            let _ = writeln!(
                out,
                "  e_{i}_{j} [shape=box, label=\"({},{})\"];",
                escape(ring.label(i)),
                escape(ring.label(j))
            );
        }
        for &k in &self.odd_vertices {
            let _ = writeln!(
                out,
                "  o_{k} [shape=circle, label=\"{}\"];",
                escape(ring.label(k))
            );
        }
        for (&((i, j), k), &m) in &self.edges {
            for _ in 0..m {
                let _ = writeln!(out, "  e_{i}_{j} -- o_{k};");
            }
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn dot_id(name: &str) -> String {
    let cleaned: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    if cleaned.is_empty() {
        "lr".into()
    } else {
        cleaned
    }
}

/// Breadth-first closure of `(0, 0)` in the full bipartite graph.
fn lr_component(ring: &FusionRing) -> BipartiteGraph {
    let n = ring.rank();
    // odd vertex k -> even vertices (i, j) with N[i][j][k] > 0, ascending
    let mut into: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for ((i, j, k), _) in ring.entries() {
        into[k].push((i, j));
    }
    let mut even = BTreeSet::from([(0, 0)]);
    let mut odd = BTreeSet::new();
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    while let Some((i, j)) = queue.pop_front() {
        for &(k, _) in ring.product(i, j) {
            if odd.insert(k) {
                for &pair in &into[k] {
                    if even.insert(pair) {
                        queue.push_back(pair);
                    }
                }
            }
        }
    }
    let edges = even
        .iter()
        .flat_map(|&(i, j)| {
            ring.product(i, j)
                .iter()
                .map(move |&(k, m)| (((i, j), k), m))
        })
        .collect();
    BipartiteGraph {
        even_vertices: even.into_iter().collect(),
        odd_vertices: odd.into_iter().collect(),
        edges,
        unverified_chirality: false,
    }
}

pub fn principal_graph(ring: &FusionRing) -> BipartiteGraph {
    lr_component(ring)
}

/// Same construction with even vertices read as `beta_{i, dual j}`. It agrees
/// with the principal graph when the braiding is non-degenerate; without that
/// assertion the result is tagged as unverified.
pub fn dual_principal_graph(ring: &FusionRing, modular: bool) -> BipartiteGraph {
    let mut graph = lr_component(ring);
    graph.unverified_chirality = !modular;
    graph
}

/// Index of the LR inclusion, `sum_i d_i^2`.
pub fn lr_index(ring: &FusionRing) -> Result<f64> {
    ring.global_index()
}

/// `<alpha_{rho_i (x) rho_j^opp}, alpha_{rho_k (x) rho_l^opp}>` for one
/// chirality, via `<theta sigma, tau>` with `theta = (+)_m rho_m (x) rho_m^opp`:
/// `sum_m N[m][i][k] N[m][j][l]`. The count does not depend on which
/// braiding is used, as long as both sides use the same one.
pub fn alpha_hom_count(
    ring: &FusionRing,
    first: (usize, usize),
    second: (usize, usize),
    _chirality: Chirality,
) -> u64 {
    let (i, j) = first;
    let (k, l) = second;
    (0..ring.rank())
        .map(|m| u64::from(ring.n(m, i, k)) * u64::from(ring.n(m, j, l)))
        .sum()
}

/// Checks irreducibility and distinctness of `alpha_{rho_i (x) id}` and the
/// identification `alpha_{rho_i (x) id} = alpha_{id (x) rho_{dual i}^opp}`
/// for every label.
pub fn alpha_induction_checks(ring: &FusionRing, chirality: Chirality) -> Vec<Check> {
    let n = ring.rank();
    let distinct = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| alpha_hom_count(ring, (i, 0), (j, 0), chirality) != u64::from(i == j));
    let identified = (0..n).find(|&i| {
        alpha_hom_count(ring, (i, 0), (0, ring.dual(i)), chirality) != 1
    });
    let mut first = Check::new(
        "alpha_irreducible_distinct",
        distinct.is_none(),
        "<alpha_(i,0), alpha_(j,0)> = delta(i,j)",
    );
    if let Some((i, j)) = distinct {
        first = first.with_witness(vec![i, j]);
    }
    let mut second = Check::new(
        "alpha_left_equals_right",
        identified.is_none(),
        "<alpha_(i,0), alpha_(0,dual i)> = 1",
    );
    if let Some(i) = identified {
        second = second.with_witness(vec![i]);
    }
    vec![first, second]
}

/// True iff every quantum dimension is 1 within `tolerance`.
pub fn is_depth_two(ring: &FusionRing, tolerance: f64) -> Result<bool> {
    Ok(ring.dims()?.d.iter().all(|d| (d - 1.0).abs() < tolerance))
}

pub fn is_depth_two_default(ring: &FusionRing) -> Result<bool> {
    is_depth_two(ring, DEFAULT_TOLERANCE)
}
