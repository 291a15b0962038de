//! Quantum doubles at the level of fusion rings: the doubled system
//! `{rho_i (x) rho_j^opp}` and the Drinfeld double `D(G)` of a finite group.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion_ring::FusionRing;
use crate::group::{GroupTable, C64};
use crate::lr_graphs;
use crate::report::{Check, Report};

/// Largest group accepted by [`drinfeld_double`].
pub const MAX_DOUBLE_GROUP_ORDER: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Deligne,
    Drinfeld,
}

#[derive(Clone, Debug)]
pub struct DoubledRing {
    pub ring: FusionRing,
    pub provenance: Provenance,
    /// Component pair behind every label: `(i, j)` for the Deligne double,
    /// `(class, character)` for `D(G)`.
    pub pairs: Vec<(usize, usize)>,
}

/// The ring with labels `(i, j)` and `N[(i,j)][(k,l)][(m,n)] = N[i][k][m] N[j][l][n]`.
/// Label `(i, j)` sits at index `i * rank + j`.
pub fn deligne_double(ring: &FusionRing) -> DoubledRing {
    let n = ring.rank();
    let idx = |i: usize, j: usize| i * n + j;
    let mut labels = Vec::with_capacity(n * n);
    let mut dual = Vec::with_capacity(n * n);
    let mut pairs = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            labels.push(format!("({},{})", ring.label(i), ring.label(j)));
            dual.push(idx(ring.dual(i), ring.dual(j)));
            pairs.push((i, j));
        }
    }
    let mut entries = Vec::new();
    for ((i, k, m), a) in ring.entries() {
        for ((j, l, p), b) in ring.entries() {
            entries.push(((idx(i, j), idx(k, l), idx(m, p)), a * b));
        }
    }
    let ring = FusionRing::new(labels, dual, entries).expect("double of a ring is well formed");
    DoubledRing {
        ring,
        provenance: Provenance::Deligne,
        pairs,
    }
}

/// One simple `D(G)`-module `(class, character of the centralizer)`.
struct Simple {
    class: usize,
    character: usize,
    /// Character on commuting pairs `(x, g)`, indexed `x * |G| + g`.
    values: Vec<C64>,
    dim: usize,
}

/// Fusion ring of the untwisted Drinfeld double `D(G)`.
///
/// Simples are pairs (conjugacy class `c`, irreducible character `chi` of
/// the centralizer of a fixed representative `r_c`). A module graded by
/// `G` has character `Phi(x, g) = tr(g | V_x)` on commuting pairs; for the
/// simple `(c, chi)`, `Phi(x, g) = chi(k^-1 g k)` when `x = k r_c k^-1`.
/// Tensor products multiply gradings, so
/// `Phi_{V(x)W}(x, g) = sum_{yz = x, g in C(y) n C(z)} Phi_V(y, g) Phi_W(z, g)`,
/// and multiplicities are inner products `1/|G| sum Phi conj(Phi')`.
pub fn drinfeld_double(group: &GroupTable) -> Result<DoubledRing> {
    let n = group.order();
    if n > MAX_DOUBLE_GROUP_ORDER {
        return Err(Error::input(format!(
            "group order {n} exceeds the limit {MAX_DOUBLE_GROUP_ORDER}"
        )));
    }
    let classes = group.conjugacy_classes();
    let commutes = |x: usize, g: usize| group.mul(x, g) == group.mul(g, x);

    let mut simples = Vec::new();
    for (ci, class) in classes.iter().enumerate() {
        let rep = class[0];
        let centralizer = group.centralizer(rep);
        let sub = group.subgroup(&centralizer)?;
        let table = sub.character_table()?;
        // conjugator k_x with x = k r k^-1 for every x in the class
        let mut conjugator = vec![usize::MAX; n];
        for g in 0..n {
            let x = group.conjugate(g, rep);
            if conjugator[x] == usize::MAX {
                conjugator[x] = g;
            }
        }
        for chi in 0..table.chars.len() {
            let mut values = vec![C64::new(0.0, 0.0); n * n];
            for &x in class {
                let k = conjugator[x];
                for g in (0..n).filter(|&g| commutes(x, g)) {
                    let h = group.mul(group.mul(group.inv(k), g), k);
                    let pos = centralizer
                        .iter()
                        .position(|&z| z == h)
                        .expect("conjugated element lies in the centralizer");
                    values[x * n + g] = table.value(chi, pos);
                }
            }
            simples.push(Simple {
                class: ci,
                character: chi,
                values,
                dim: class.len() * table.degree(chi),
            });
        }
    }

    let rank = simples.len();
    let commuting: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).map(move |g| (x, g)))
        .filter(|&(x, g)| commutes(x, g))
        .collect();

    let mut entries = Vec::new();
    let mut product = vec![C64::new(0.0, 0.0); n * n];
    for (a, va) in simples.iter().enumerate() {
        for (b, vb) in simples.iter().enumerate() {
            product.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
            for &(x, g) in &commuting {
                let mut acc = C64::new(0.0, 0.0);
                for y in 0..n {
                    let z = group.mul(group.inv(y), x);
                    if commutes(y, g) && commutes(z, g) {
                        acc += va.values[y * n + g] * vb.values[z * n + g];
                    }
                }
                product[x * n + g] = acc;
            }
            for (c, vc) in simples.iter().enumerate() {
                let ip: C64 = commuting
                    .iter()
                    .map(|&(x, g)| product[x * n + g] * vc.values[x * n + g].conj())
                    .sum::<C64>()
                    / n as f64;
                let m = ip.re.round();
                if (ip - C64::new(m, 0.0)).norm() > 1e-6 || m < 0.0 {
                    return Err(Error::Construction(format!(
                        "D(G) multiplicity ({a}, {b}, {c}) = {ip} is not a nonnegative integer"
                    )));
                }
                if m > 0.0 {
                    entries.push(((a, b, c), m as u32));
                }
            }
        }
    }

    let mut dual = vec![usize::MAX; rank];
    for &((a, b, c), _) in &entries {
        if c == 0 {
            dual[a] = b;
        }
    }
    if dual.contains(&usize::MAX) {
        return Err(Error::Construction("a D(G) simple has no dual".into()));
    }
    let labels = simples
        .iter()
        .map(|s| format!("(C{},chi{})", s.class, s.character))
        .collect();
    let pairs = simples.iter().map(|s| (s.class, s.character)).collect();
    let ring = FusionRing::new(labels, dual, entries)?;

    let report = ring.validate();
    if !report.is_valid() {
        return Err(Error::Construction(format!(
            "D(G) ring fails validation: {:?}",
            report.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>()
        )));
    }
    let dim_sq: usize = simples.iter().map(|s| s.dim * s.dim).sum();
    if dim_sq != n * n {
        return Err(Error::Construction(format!(
            "sum of squared dimensions {dim_sq} differs from |G|^2 = {}",
            n * n
        )));
    }
    Ok(DoubledRing {
        ring,
        provenance: Provenance::Drinfeld,
        pairs,
    })
}

/// Integer dimensions `|class| * chi(1)` of the `D(G)` simples, in label order.
pub fn drinfeld_dimensions(group: &GroupTable) -> Result<Vec<usize>> {
    let mut dims = Vec::new();
    for class in group.conjugacy_classes() {
        let sub = group.subgroup(&group.centralizer(class[0]))?;
        let table = sub.character_table()?;
        for chi in 0..table.chars.len() {
            dims.push(class.len() * table.degree(chi));
        }
    }
    Ok(dims)
}

/// Dimension budget of an orbifold by a group of the given order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrbifoldBudget {
    pub total: u64,
    pub dhr_part: u64,
    pub extra_part: u64,
}

/// `(|G|^2, |G|, |G|^2 - |G|)`: the global index of the fixed-point net,
/// the part carried by the representations of `G`, and the remainder
/// carried by the extra (twisted) sectors.
pub fn orbifold_budget(group_order: u64) -> Result<OrbifoldBudget> {
    if group_order == 0 {
        return Err(Error::input("group order must be at least 1"));
    }
    let total = group_order * group_order;
    Ok(OrbifoldBudget {
        total,
        dhr_part: group_order,
        extra_part: total - group_order,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DoubleComparison {
    pub even_vertices: usize,
    pub all_pairs: usize,
    pub full: bool,
    pub grading_order: usize,
    /// `I_global^2 / sum_{(i,j) in component} d_i^2 d_j^2`.
    pub deficiency_factor: f64,
}

/// Compares the even vertices of the principal graph with the full doubled
/// system `{(i, j)}`.
pub fn compare_double(ring: &FusionRing) -> Result<DoubleComparison> {
    let graph = lr_graphs::principal_graph(ring);
    let d = ring.dims()?;
    let n = ring.rank();
    let component: f64 = graph
        .even_vertices
        .iter()
        .map(|&(i, j)| (d.d[i] * d.d[j]).powi(2))
        .sum();
    let index = d.global_index();
    Ok(DoubleComparison {
        even_vertices: graph.even_vertices.len(),
        all_pairs: n * n,
        full: graph.even_vertices.len() == n * n,
        grading_order: ring.grading().order(),
        deficiency_factor: index * index / component,
    })
}

impl DoubleComparison {
    pub fn report(&self, subject: &str) -> Report {
        let mut report = Report::new("double", subject);
        report.push(Check::new(
            "doubling",
            true,
            format!(
                "{} of {} pairs reachable from (0,0): {}",
                self.even_vertices,
                self.all_pairs,
                if self.full { "full doubling" } else { "proper subsystem" }
            ),
        ));
        report.push(Check::compare(
            "deficiency_equals_grading_order",
            self.deficiency_factor,
            self.grading_order as f64,
            1e-6,
        ));
        report.set("comparison", self);
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn deligne_double_examples() {
        let t = deligne_double(&FusionRing::trivial());
        assert_eq!(t.ring.rank(), 1);
        assert!(t.ring.validate().is_valid());

        let ising = catalog::ising().ring;
        let dd = deligne_double(&ising);
        assert_eq!(dd.ring.rank(), 9);
        assert!(dd.ring.validate().is_valid());
        assert!((dd.ring.global_index().unwrap() - 16.0).abs() < 1e-9);
        let d = dd.ring.dims().unwrap();
        let base = ising.dims().unwrap();
        for (idx, &(i, j)) in dd.pairs.iter().enumerate() {
            assert!((d.d[idx] - base.d[i] * base.d[j]).abs() < 1e-9);
        }

        let z2 = FusionRing::pointed(&GroupTable::cyclic(2));
        let klein = FusionRing::pointed(&GroupTable::builtin("z2xz2").unwrap());
        assert!(deligne_double(&z2).ring.isomorphism(&klein).is_some());
    }

    #[test]
    fn drinfeld_double_small_groups() {
        let z2 = drinfeld_double(&GroupTable::cyclic(2)).unwrap();
        assert_eq!(z2.ring.rank(), 4);
        assert!(z2.ring.dims().unwrap().d.iter().all(|x| (x - 1.0).abs() < 1e-10));

        let z3 = drinfeld_double(&GroupTable::cyclic(3)).unwrap();
        assert_eq!(z3.ring.rank(), 9);

        let trivial = drinfeld_double(&GroupTable::cyclic(1)).unwrap();
        assert_eq!(trivial.ring.rank(), 1);
    }

    #[test]
    fn drinfeld_double_s3() {
        let g = GroupTable::symmetric3();
        let dg = drinfeld_double(&g).unwrap();
        assert_eq!(dg.ring.rank(), 8);
        let mut dims = drinfeld_dimensions(&g).unwrap();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 1, 2, 2, 2, 2, 3, 3]);
        let pf = dg.ring.dims().unwrap();
        let mut pf_sorted: Vec<i64> = pf.d.iter().map(|x| x.round() as i64).collect();
        pf_sorted.sort_unstable();
        assert_eq!(pf_sorted, vec![1, 1, 2, 2, 2, 2, 3, 3]);
        assert!((pf.global_index() - 36.0).abs() < 1e-9);
        // D(S3) is commutative although S3 is not
        assert!(dg.ring.is_commutative());
    }

    #[test]
    fn abelian_double_matches_deligne_double() {
        for g in [GroupTable::cyclic(2), GroupTable::cyclic(3), GroupTable::builtin("z2xz2").unwrap()] {
            let dg = drinfeld_double(&g).unwrap();
            let dd = deligne_double(&FusionRing::pointed(&g));
            assert_eq!(dg.ring.rank(), g.order() * g.order());
            assert!(dg.ring.isomorphism(&dd.ring).is_some());
        }
    }

    #[test]
    fn orbifold_budgets() {
        let b = orbifold_budget(2).unwrap();
        assert_eq!((b.total, b.dhr_part, b.extra_part), (4, 2, 2));
        let b = orbifold_budget(1).unwrap();
        assert_eq!((b.total, b.dhr_part, b.extra_part), (1, 1, 0));
        let b = orbifold_budget(3).unwrap();
        assert_eq!((b.total, b.dhr_part, b.extra_part), (9, 3, 6));
        assert!(orbifold_budget(0).is_err());
        // Ising as a Z2 orbifold: 1 + 1 from the two characters, 2 from sigma
        let d = catalog::ising().ring.dims().unwrap();
        let extra = d.d[2] * d.d[2];
        assert!((extra - orbifold_budget(2).unwrap().extra_part as f64).abs() < 1e-9);
    }

    #[test]
    fn compare_double_examples() {
        let t = compare_double(&FusionRing::trivial()).unwrap();
        assert!(t.full);
        assert_eq!(t.even_vertices, 1);

        let klein = compare_double(&FusionRing::pointed(&GroupTable::builtin("z2xz2").unwrap())).unwrap();
        assert!(!klein.full);
        assert_eq!(klein.even_vertices, 4);
        assert_eq!(klein.grading_order, 4);
        assert!((klein.deficiency_factor - 4.0).abs() < 1e-9);

        // Ising is Z2 graded, so only pairs of equal grade are reached:
        // (1,1) (1,eps) (eps,1) (eps,eps) (sigma,sigma).
        let ising = compare_double(&catalog::ising().ring).unwrap();
        assert_eq!(ising.even_vertices, 5);
        assert!(!ising.full);
        assert!((ising.deficiency_factor - 2.0).abs() < 1e-9);
        assert_eq!(ising.grading_order, 2);
    }
}
