//! Finite fusion rings: labels with a duality involution and an integer
//! fusion tensor `N[i][j][k]`, the multiplicity of `k` in `i * j`.
//!
//! Label `0` is always the identity sector. The tensor is stored sparsely;
//! absent entries are zero.

use std::collections::{BTreeMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::report::Check;

/// Default tolerance for real-valued identities.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

const POWER_ITERATION_TOLERANCE: f64 = 1e-12;
const POWER_ITERATION_MAX: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionRing {
    labels: Vec<String>,
    dual: Vec<usize>,
    tensor: BTreeMap<(usize, usize, usize), u32>,
    /// `products[i * n + j]` lists the nonzero `(k, N[i][j][k])`.
    products: Vec<Vec<(usize, u32)>>,
}

impl FusionRing {
    /// Builds a ring from an explicit tensor. Only structural problems are
    /// rejected here; ring axioms are checked by [`FusionRing::validate`].
    pub fn new(
        labels: Vec<String>,
        dual: Vec<usize>,
        entries: impl IntoIterator<Item = ((usize, usize, usize), u32)>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::input("a fusion ring needs at least one label"));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::input(format!("duplicate label '{l}'")));
            }
        }
        if dual.len() != n {
            return Err(Error::input(format!(
                "dual has {} entries for {n} labels",
                dual.len()
            )));
        }
        if let Some((i, &d)) = dual.iter().enumerate().find(|(_, &d)| d >= n) {
            return Err(Error::input(format!("dual of label {i} is {d}, out of range")));
        }
        let mut tensor = BTreeMap::new();
        for ((i, j, k), m) in entries {
            if i >= n || j >= n || k >= n {
                return Err(Error::input(format!(
                    "tensor entry ({i}, {j}, {k}) is out of range for {n} labels"
                )));
            }
            if let Some(&old) = tensor.get(&(i, j, k)) {
                if old != m {
                    return Err(Error::input(format!(
                        "tensor entry ({i}, {j}, {k}) given twice with {old} and {m}"
                    )));
                }
            }
            tensor.insert((i, j, k), m);
        }
        tensor.retain(|_, m| *m != 0);
        let mut products = vec![Vec::new(); n * n];
        for (&(i, j, k), &m) in &tensor {
            products[i * n + j].push((k, m));
        }
        Ok(FusionRing {
            labels,
            dual,
            tensor,
            products,
        })
    }

    /// Like [`FusionRing::new`] but inserts the unit entries `N[0][j][j]` and
    /// `N[i][0][i]`. Explicit entries contradicting them are rejected.
    pub fn with_implied_units(
        labels: Vec<String>,
        dual: Vec<usize>,
        entries: impl IntoIterator<Item = ((usize, usize, usize), u32)>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut all: Vec<((usize, usize, usize), u32)> = Vec::new();
        for ((i, j, k), m) in entries {
            let implied = if i == 0 {
                Some(u32::from(j == k))
            } else if j == 0 {
                Some(u32::from(i == k))
            } else {
                None
            };
            if let Some(expected) = implied {
                if m != expected {
                    return Err(Error::input(format!(
                        "explicit entry N[{i}][{j}][{k}] = {m} contradicts the unit axiom (expected {expected})"
                    )));
                }
            }
            all.push(((i, j, k), m));
        }
        for a in 0..n {
            all.push(((0, a, a), 1));
            all.push(((a, 0, a), 1));
        }
        Self::new(labels, dual, all)
    }

    /// The ring with one label.
    pub fn trivial() -> Self {
        Self::new(vec!["1".into()], vec![0], [((0, 0, 0), 1)]).expect("trivial ring")
    }

    /// The group ring of `group`: `N[g][h][k] = 1` iff `k = g h`.
    pub fn pointed(group: &GroupTable) -> Self {
        let n = group.order();
        let labels = (0..n).map(|g| group.name(g).to_string()).collect();
        let dual = (0..n).map(|g| group.inv(g)).collect();
        let entries = (0..n).flat_map(|g| (0..n).map(move |h| ((g, h, group.mul(g, h)), 1)));
        Self::new(labels, dual, entries).expect("group ring is well formed")
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::input(format!("unknown label '{label}'")))
    }

    pub fn dual(&self, i: usize) -> usize {
        self.dual[i]
    }

    pub fn duals(&self) -> &[usize] {
        &self.dual
    }

    pub fn n(&self, i: usize, j: usize, k: usize) -> u32 {
        self.tensor.get(&(i, j, k)).copied().unwrap_or(0)
    }

    /// Nonzero `(k, N[i][j][k])` in increasing `k`.
    pub fn product(&self, i: usize, j: usize) -> &[(usize, u32)] {
        &self.products[i * self.rank() + j]
    }

    /// Nonzero tensor entries in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize, usize), u32)> + '_ {
        self.tensor.iter().map(|(&key, &m)| (key, m))
    }

    pub fn is_commutative(&self) -> bool {
        self.tensor
            .iter()
            .all(|(&(i, j, k), &m)| self.n(j, i, k) == m)
    }

    /// Relabels so that old label `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.rank();
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        if perm.len() != n || sorted != (0..n).collect::<Vec<_>>() {
            return Err(Error::input("relabeling is not a permutation of the labels"));
        }
        let mut labels = vec![String::new(); n];
        let mut dual = vec![0; n];
        for i in 0..n {
            labels[perm[i]] = self.labels[i].clone();
            dual[perm[i]] = perm[self.dual[i]];
        }
        let entries = self
            .entries()
            .map(|((i, j, k), m)| ((perm[i], perm[j], perm[k]), m));
        Self::new(labels, dual, entries)
    }

    /// Checks every ring axiom. Each entry of the report is one axiom; a
    /// failing entry carries the first counterexample in lexicographic order.
    pub fn validate(&self) -> ValidationReport {
        let n = self.rank();
        let mut checks = Vec::new();

        let involution = (0..n).find(|&i| self.dual[self.dual[i]] != i);
        checks.push(match (self.dual[0], involution) {
            (0, None) => Check::new("dual_involution", true, "dual is an involution fixing 0"),
            (d, None) => Check::new("dual_involution", false, format!("dual of 0 is {d}"))
                .with_witness(vec![0]),
            (_, Some(i)) => Check::new(
                "dual_involution",
                false,
                format!("dual(dual({i})) = {}", self.dual[self.dual[i]]),
            )
            .with_witness(vec![i]),
        });

        let unit = triples(n).find(|&(j, k, _)| {
            let expected = u32::from(j == k);
            self.n(0, j, k) != expected || self.n(j, 0, k) != expected
        });
        checks.push(match unit {
            None => Check::new("unit", true, "N[0][j][k] = N[j][0][k] = delta(j,k)"),
            Some((j, k, _)) => Check::new(
                "unit",
                false,
                format!("N[0][{j}][{k}] = {}, N[{j}][0][{k}] = {}", self.n(0, j, k), self.n(j, 0, k)),
            )
            .with_witness(vec![j, k]),
        });

        let conj = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| self.n(i, j, 0) != u32::from(j == self.dual[i]));
        checks.push(match conj {
            None => Check::new("identity_detection", true, "N[i][j][0] = delta(j, dual(i))"),
            Some((i, j)) => Check::new(
                "identity_detection",
                false,
                format!("N[{i}][{j}][0] = {}", self.n(i, j, 0)),
            )
            .with_witness(vec![i, j]),
        });

        let assoc = (0..n).find_map(|i| {
            triples(n).find_map(|(j, k, l)| {
                let left: u64 = (0..n)
                    .map(|m| u64::from(self.n(i, j, m)) * u64::from(self.n(m, k, l)))
                    .sum();
                let right: u64 = (0..n)
                    .map(|m| u64::from(self.n(j, k, m)) * u64::from(self.n(i, m, l)))
                    .sum();
                (left != right).then_some(([i, j, k, l], left, right))
            })
        });
        checks.push(match assoc {
            None => Check::new("associativity", true, "(i j) k = i (j k) for all labels"),
            Some((w, left, right)) => Check::new(
                "associativity",
                false,
                format!(
                    "coefficient of {} in ({} {}) {} is {left}, in {} ({} {}) is {right}",
                    w[3], w[0], w[1], w[2], w[0], w[1], w[2]
                ),
            )
            .with_residual(left.abs_diff(right) as f64)
            .with_witness(w.to_vec()),
        });

        let frob = (0..n).find_map(|i| {
            triples(n).find_map(|(j, k, _)| {
                let a = self.n(i, j, k);
                let b = self.n(self.dual[i], k, j);
                let c = self.n(k, self.dual[j], i);
                (a != b || a != c).then_some(([i, j, k], a, b, c))
            })
        });
        checks.push(match frob {
            None => Check::new(
                "frobenius_reciprocity",
                true,
                "N[i][j][k] = N[dual i][k][j] = N[k][dual j][i]",
            ),
            Some((w, a, b, c)) => Check::new(
                "frobenius_reciprocity",
                false,
                format!("N[i][j][k] = {a}, N[dual i][k][j] = {b}, N[k][dual j][i] = {c}"),
            )
            .with_witness(w.to_vec()),
        });

        ValidationReport { checks }
    }

    /// Returns the ring if it passes validation, else an error naming the
    /// failed axioms.
    pub fn validated(self) -> Result<Self> {
        let report = self.validate();
        if report.is_valid() {
            Ok(self)
        } else {
            let failed: Vec<&str> = report
                .checks
                .iter()
                .filter(|c| !c.pass)
                .map(|c| c.name.as_str())
                .collect();
            Err(Error::Inconsistent(format!(
                "fusion ring fails axioms: {}",
                failed.join(", ")
            )))
        }
    }

    /// A formal combination from `(label, coefficient)` pairs.
    pub fn combination(&self, terms: &[(&str, u64)]) -> Result<Combination> {
        let mut coeffs = vec![0; self.rank()];
        for &(label, c) in terms {
            coeffs[self.index_of(label)?] += c;
        }
        Ok(Combination(coeffs))
    }

    pub fn basis(&self, i: usize) -> Combination {
        let mut coeffs = vec![0; self.rank()];
        coeffs[i] = 1;
        Combination(coeffs)
    }

    /// Bilinear extension of the fusion tensor.
    pub fn fuse(&self, a: &Combination, b: &Combination) -> Result<Combination> {
        let n = self.rank();
        if a.0.len() != n || b.0.len() != n {
            return Err(Error::input(format!(
                "combinations of length {} and {} do not match ring rank {n}",
                a.0.len(),
                b.0.len()
            )));
        }
        let mut out = vec![0u64; n];
        for (i, &x) in a.0.iter().enumerate().filter(|(_, &x)| x != 0) {
            for (j, &y) in b.0.iter().enumerate().filter(|(_, &y)| y != 0) {
                for &(k, m) in self.product(i, j) {
                    out[k] += x * y * u64::from(m);
                }
            }
        }
        Ok(Combination(out))
    }

    /// `(N_i)[j][k] = N[i][j][k]` as a dense matrix.
    pub fn fusion_matrix(&self, i: usize) -> Vec<Vec<u32>> {
        let n = self.rank();
        let mut m = vec![vec![0; n]; n];
        for j in 0..n {
            for &(k, mult) in self.product(i, j) {
                m[j][k] = mult;
            }
        }
        m
    }

    pub fn dims(&self) -> Result<DimensionVector> {
        self.dims_with_tolerance(DEFAULT_TOLERANCE)
    }

    /// Quantum dimensions: `d_i` is the Perron-Frobenius eigenvalue of
    /// `N_i`, found by power iteration on `N_i + 1` (the shift keeps the
    /// iteration convergent when `N_i` is periodic, e.g. a permutation).
    pub fn dims_with_tolerance(&self, tolerance: f64) -> Result<DimensionVector> {
        let n = self.rank();
        let mut d = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = vec![1.0 / n as f64; n];
            let mut lambda = f64::NAN;
            let mut converged = false;
            for _ in 0..POWER_ITERATION_MAX {
                let mut w = v.clone();
                for (j, wj) in w.iter_mut().enumerate() {
                    for &(k, m) in self.product(i, j) {
                        *wj += f64::from(m) * v[k];
                    }
                }
                let norm: f64 = w.iter().sum();
                let next = norm / v.iter().sum::<f64>();
                w.iter_mut().for_each(|x| *x /= norm);
                v = w;
                if (next - lambda).abs() < POWER_ITERATION_TOLERANCE {
                    lambda = next;
                    converged = true;
                    break;
                }
                lambda = next;
            }
            if !converged {
                return Err(Error::NoConvergence {
                    label: i,
                    iterations: POWER_ITERATION_MAX,
                });
            }
            d.push(lambda - 1.0);
        }
        Ok(DimensionVector { d, tolerance })
    }

    /// Sum of squared quantum dimensions.
    pub fn global_index(&self) -> Result<f64> {
        Ok(self.dims()?.global_index())
    }

    /// Universal grading. The identity component is the adjoint subring
    /// (closure of all constituents of `i * dual(i)`); two labels share a
    /// component iff `i * dual(j)` lands in it. Products of components
    /// define the grading group.
    pub fn grading(&self) -> Grading {
        let n = self.rank();
        let mut adjoint = vec![false; n];
        let mut queue = VecDeque::new();
        adjoint[0] = true;
        queue.push_back(0);
        for i in 0..n {
            for &(k, _) in self.product(i, self.dual[i]) {
                if !adjoint[k] {
                    adjoint[k] = true;
                    queue.push_back(k);
                }
            }
        }
        while let Some(a) = queue.pop_front() {
            for b in 0..n {
                if !adjoint[b] {
                    continue;
                }
                for &(k, _) in self.product(a, b) {
                    if !adjoint[k] {
                        adjoint[k] = true;
                        queue.push_back(k);
                    }
                }
            }
        }

        let mut component_of = vec![usize::MAX; n];
        let mut components: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            if component_of[i] != usize::MAX {
                continue;
            }
            let c = components.len();
            let members: Vec<usize> = (0..n)
                .filter(|&j| self.product(i, self.dual[j]).iter().any(|&(k, _)| adjoint[k]))
                .collect();
            for &j in &members {
                component_of[j] = c;
            }
            components.push(members);
        }

        let g = components.len();
        let mul: Vec<Vec<usize>> = (0..g)
            .map(|a| {
                (0..g)
                    .map(|b| {
                        let (x, y) = (components[a][0], components[b][0]);
                        let (k, _) = self.product(x, y)[0];
                        component_of[k]
                    })
                    .collect()
            })
            .collect();
        let group = GroupTable::from_mul(mul).expect("grading of a valid fusion ring is a group");
        Grading {
            group,
            component_of,
            components,
        }
    }

    /// A label bijection `perm` with `other.n(perm[i], perm[j], perm[k]) ==
    /// self.n(i, j, k)`, found by backtracking.
    pub fn isomorphism(&self, other: &FusionRing) -> Option<Vec<usize>> {
        let n = self.rank();
        if other.rank() != n || self.tensor.len() != other.tensor.len() {
            return None;
        }
        let da = self.dims().ok()?;
        let db = other.dims().ok()?;
        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        perm[0] = 0;
        used[0] = true;
        let mut assigned = vec![0usize];
        fn consistent(a: &FusionRing, b: &FusionRing, perm: &[usize], assigned: &[usize]) -> bool {
            for &x in assigned {
                let dx = a.dual(x);
                if perm[dx] != usize::MAX && perm[dx] != b.dual(perm[x]) {
                    return false;
                }
                for &y in assigned {
                    let (px, py) = (perm[x], perm[y]);
                    let total_a: u32 = a.product(x, y).iter().map(|&(_, m)| m).sum();
                    let total_b: u32 = b.product(px, py).iter().map(|&(_, m)| m).sum();
                    if total_a != total_b {
                        return false;
                    }
                    for &z in assigned {
                        if a.n(x, y, z) != b.n(px, py, perm[z]) {
                            return false;
                        }
                    }
                }
            }
            true
        }
        fn search(
            a: &FusionRing,
            b: &FusionRing,
            da: &[f64],
            db: &[f64],
            next: usize,
            perm: &mut Vec<usize>,
            used: &mut Vec<bool>,
            assigned: &mut Vec<usize>,
        ) -> bool {
            let n = a.rank();
            if next == n {
                return true;
            }
            for cand in 1..n {
                if used[cand] || (da[next] - db[cand]).abs() > 1e-8 {
                    continue;
                }
                if (a.dual(next) == next) != (b.dual(cand) == cand) {
                    continue;
                }
                perm[next] = cand;
                used[cand] = true;
                assigned.push(next);
                if consistent(a, b, perm, assigned)
                    && search(a, b, da, db, next + 1, perm, used, assigned)
                {
                    return true;
                }
                assigned.pop();
                used[cand] = false;
                perm[next] = usize::MAX;
            }
            false
        }
        search(self, other, &da.d, &db.d, 1, &mut perm, &mut used, &mut assigned).then_some(perm)
    }
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
}

/// Nonnegative integer combination of labels, indexed by label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Combination(pub Vec<u64>);

impl Combination {
    pub fn coefficient(&self, i: usize) -> u64 {
        self.0[i]
    }
}

/// One entry per ring axiom.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionVector {
    pub d: Vec<f64>,
    pub tolerance: f64,
}

impl DimensionVector {
    pub fn global_index(&self) -> f64 {
        self.d.iter().map(|x| x * x).sum()
    }

    /// Largest `|sum_k N[i][j][k] d_k - d_i d_j|` over all pairs.
    pub fn product_residual(&self, ring: &FusionRing) -> f64 {
        let n = ring.rank();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let lhs: f64 = ring
                    .product(i, j)
                    .iter()
                    .map(|&(k, m)| f64::from(m) * self.d[k])
                    .sum();
                worst = worst.max((lhs - self.d[i] * self.d[j]).abs());
            }
        }
        worst
    }

    /// Checks `d_0 = 1`, `d_i = d_dual(i) >= 1` and the product rule.
    pub fn checks(&self, ring: &FusionRing) -> Vec<Check> {
        let tol = self.tolerance;
        let dual_residual = (0..ring.rank())
            .map(|i| (self.d[i] - self.d[ring.dual(i)]).abs())
            .fold(0.0, f64::max);
        let min = self.d.iter().copied().fold(f64::INFINITY, f64::min);
        vec![
            Check::compare("unit_dimension", self.d[0], 1.0, tol),
            Check::new(
                "dual_dimension",
                dual_residual < tol,
                format!("max |d_i - d_dual(i)| = {dual_residual:e}"),
            )
            .with_residual(dual_residual),
            Check::new("dimension_lower_bound", min > 1.0 - tol, format!("min d_i = {min}")),
            {
                let r = self.product_residual(ring);
                Check::new(
                    "dimension_product_rule",
                    r < tol,
                    format!("max |sum_k N d_k - d_i d_j| = {r:e}"),
                )
                .with_residual(r)
            },
        ]
    }
}

/// Universal grading of a fusion ring.
#[derive(Clone, Debug)]
pub struct Grading {
    /// Group of components; element `c` is component `c`, identity first.
    pub group: GroupTable,
    pub component_of: Vec<usize>,
    pub components: Vec<Vec<usize>>,
}

impl Grading {
    pub fn order(&self) -> usize {
        self.components.len()
    }

    pub fn identity_component(&self) -> &[usize] {
        &self.components[0]
    }
}
