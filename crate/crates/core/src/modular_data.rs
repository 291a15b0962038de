//! Verlinde matrices `S`, `T` attached to a fusion ring, the Verlinde
//! formula, and the `SL(2, Z)` / non-degeneracy checks.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion_ring::{DimensionVector, FusionRing, DEFAULT_TOLERANCE};
use crate::group::{GroupTable, C64};
use crate::report::Check;

/// Integrality tolerance for Verlinde entries.
pub const VERLINDE_TOLERANCE: f64 = 1e-6;

/// Agreement required between `S_0i / S_00` and Perron-Frobenius dimensions.
pub const DIMENSION_AGREEMENT: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct ModularData {
    ring: FusionRing,
    s: DMatrix<C64>,
    /// Diagonal of `T`.
    t: Vec<C64>,
}

/// Dense integer fusion tensor produced by the Verlinde formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionTensor {
    rank: usize,
    data: Vec<u32>,
}

impl FusionTensor {
    pub fn get(&self, i: usize, j: usize, k: usize) -> u32 {
        self.data[(i * self.rank + j) * self.rank + k]
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// True when every entry equals the ring's tensor.
    pub fn matches(&self, ring: &FusionRing) -> bool {
        self.mismatch(ring).is_none()
    }

    /// First `(i, j, k)` where the tensors differ.
    pub fn mismatch(&self, ring: &FusionRing) -> Option<(usize, usize, usize)> {
        let n = self.rank;
        if ring.rank() != n {
            return Some((0, 0, 0));
        }
        (0..n)
            .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
            .find(|&(i, j, k)| self.get(i, j, k) != ring.n(i, j, k))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModularityReport {
    pub unitarity_residual: f64,
    pub symmetry_residual: f64,
    /// Smallest `Re S_0i` and largest `|Im S_0i|`.
    pub first_row_min: f64,
    pub first_row_imag: f64,
    pub t_modulus_residual: f64,
    /// `None` when the Verlinde formula could not be evaluated.
    pub verlinde_integrality_residual: Option<f64>,
    pub verlinde_matches_ring: bool,
    pub charge_conjugation_residual: f64,
    pub charge_conjugation_matches_dual: bool,
    pub modular_relation_residual: f64,
    pub lambda: (f64, f64),
    pub tolerance: f64,
    pub pass: bool,
}

impl ModularityReport {
    pub fn checks(&self) -> Vec<Check> {
        let tol = self.tolerance;
        let mut checks = vec![
            Check::new(
                "s_unitary",
                self.unitarity_residual < tol,
                format!("max |S S* - 1| = {:e}", self.unitarity_residual),
            )
            .with_residual(self.unitarity_residual),
            Check::new(
                "s_symmetric",
                self.symmetry_residual < tol,
                format!("max |S - S^T| = {:e}", self.symmetry_residual),
            )
            .with_residual(self.symmetry_residual),
            Check::new(
                "s_first_row_positive",
                self.first_row_min > 0.0 && self.first_row_imag < tol,
                format!(
                    "min Re S_0i = {}, max |Im S_0i| = {:e}",
                    self.first_row_min, self.first_row_imag
                ),
            ),
            Check::new(
                "t_unit_modulus",
                self.t_modulus_residual < tol,
                format!("max ||T_ii| - 1| = {:e}", self.t_modulus_residual),
            )
            .with_residual(self.t_modulus_residual),
        ];
        checks.push(match self.verlinde_integrality_residual {
            Some(r) => Check::new(
                "verlinde_integrality",
                r < VERLINDE_TOLERANCE,
                format!("max distance to an integer = {r:e}"),
            )
            .with_residual(r),
            None => Check::new(
                "verlinde_integrality",
                false,
                "Verlinde formula not evaluable (a first-row entry of S vanishes)",
            ),
        });
        checks.push(Check::new(
            "verlinde_matches_ring",
            self.verlinde_matches_ring,
            "rounded Verlinde tensor equals the ring tensor",
        ));
        checks.push(
            Check::new(
                "s_squared_is_charge_conjugation",
                self.charge_conjugation_residual < tol && self.charge_conjugation_matches_dual,
                format!(
                    "max |S^2 - C| = {:e}, permutation from S^2 matches dual: {}",
                    self.charge_conjugation_residual, self.charge_conjugation_matches_dual
                ),
            )
            .with_residual(self.charge_conjugation_residual),
        );
        checks.push(
            Check::new(
                "modular_relation",
                self.modular_relation_residual < tol,
                format!(
                    "max |(ST)^3 - lambda S^2| = {:e}, lambda = {:.12} {:+.12}i",
                    self.modular_relation_residual, self.lambda.0, self.lambda.1
                ),
            )
            .with_residual(self.modular_relation_residual),
        );
        checks
    }
}

impl ModularData {
    pub fn new(ring: FusionRing, s: DMatrix<C64>, t: Vec<C64>) -> Result<Self> {
        let n = ring.rank();
        if s.nrows() != n || s.ncols() != n {
            return Err(Error::input(format!(
                "S is {}x{} but the ring has {n} labels",
                s.nrows(),
                s.ncols()
            )));
        }
        if t.len() != n {
            return Err(Error::input(format!(
                "T has {} diagonal entries but the ring has {n} labels",
                t.len()
            )));
        }
        Ok(ModularData { ring, s, t })
    }

    /// Pointed data from a quadratic form `q` on an abelian group:
    /// `T = q` and `S_gh = conj(b(g, h)) / sqrt|G|` with monodromy
    /// `b(g, h) = q(gh) / (q(g) q(h))`.
    pub fn from_quadratic_form(group: &GroupTable, q: Vec<C64>) -> Result<Self> {
        if !group.is_abelian() {
            return Err(Error::input("quadratic forms need an abelian group"));
        }
        let n = group.order();
        if q.len() != n {
            return Err(Error::input("quadratic form has the wrong length"));
        }
        let scale = 1.0 / (n as f64).sqrt();
        let s = DMatrix::from_fn(n, n, |g, h| {
            (q[group.mul(g, h)] / (q[g] * q[h])).conj() * scale
        });
        Self::new(FusionRing::pointed(group), s, q)
    }

    pub fn ring(&self) -> &FusionRing {
        &self.ring
    }

    pub fn s(&self) -> &DMatrix<C64> {
        &self.s
    }

    pub fn t(&self) -> &[C64] {
        &self.t
    }

    /// The opposite-chirality data `(conj S, conj T)`.
    pub fn conjugate(&self) -> Self {
        ModularData {
            ring: self.ring.clone(),
            s: self.s.map(|z| z.conj()),
            t: self.t.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Relabels ring, `S` and `T` simultaneously (`i` becomes `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let ring = self.ring.permuted(perm)?;
        let n = ring.rank();
        let mut inverse = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inverse[p] = i;
        }
        let s = DMatrix::from_fn(n, n, |a, b| self.s[(inverse[a], inverse[b])]);
        let t = (0..n).map(|a| self.t[inverse[a]]).collect();
        Self::new(ring, s, t)
    }

    fn unitarity_residual(&self) -> f64 {
        let n = self.s.nrows();
        let prod = &self.s * self.s.adjoint();
        max_abs(&(prod - DMatrix::<C64>::identity(n, n)))
    }

    /// Raw Verlinde values `sum_m S_im S_jm conj(S_km) / S_0m`, flattened.
    fn verlinde_values(&self) -> Result<Vec<C64>> {
        let n = self.s.nrows();
        if let Some(m) = (0..n).find(|&m| self.s[(0, m)].norm() < 1e-12) {
            return Err(Error::Inconsistent(format!(
                "S[0][{m}] vanishes, the Verlinde formula is undefined"
            )));
        }
        let mut out = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v: C64 = (0..n)
                        .map(|m| {
                            self.s[(i, m)] * self.s[(j, m)] * self.s[(k, m)].conj() / self.s[(0, m)]
                        })
                        .sum();
                    out.push(v);
                }
            }
        }
        Ok(out)
    }

    /// Fusion rules recovered from `S` by the Verlinde formula.
    pub fn verlinde(&self) -> Result<FusionTensor> {
        let residual = self.unitarity_residual();
        if residual > DEFAULT_TOLERANCE {
            return Err(Error::Inconsistent(format!(
                "S is not unitary (residual {residual:e})"
            )));
        }
        let n = self.s.nrows();
        let values = self.verlinde_values()?;
        let mut worst: Option<(usize, f64, C64)> = None;
        let mut data = Vec::with_capacity(values.len());
        for (idx, v) in values.iter().enumerate() {
            let rounded = v.re.round().max(0.0);
            let dist = (v - C64::new(rounded, 0.0)).norm();
            if worst.is_none_or(|(_, w, _)| dist > w) {
                worst = Some((idx, dist, *v));
            }
            data.push(rounded as u32);
        }
        if let Some((idx, dist, v)) = worst {
            if dist > VERLINDE_TOLERANCE {
                return Err(Error::NonIntegral {
                    i: idx / (n * n),
                    j: (idx / n) % n,
                    k: idx % n,
                    value: v.re,
                    tolerance: VERLINDE_TOLERANCE,
                });
            }
        }
        Ok(FusionTensor { rank: n, data })
    }

    pub fn check_modularity(&self) -> ModularityReport {
        self.check_modularity_with_tolerance(DEFAULT_TOLERANCE)
    }

    pub fn check_modularity_with_tolerance(&self, tolerance: f64) -> ModularityReport {
        let n = self.s.nrows();
        let s = &self.s;
        let unitarity_residual = self.unitarity_residual();
        let symmetry_residual = max_abs(&(s - s.transpose()));
        let first_row_min = (0..n).map(|i| s[(0, i)].re).fold(f64::INFINITY, f64::min);
        let first_row_imag = (0..n).map(|i| s[(0, i)].im.abs()).fold(0.0, f64::max);
        let t_modulus_residual = self
            .t
            .iter()
            .map(|z| (z.norm() - 1.0).abs())
            .fold(0.0, f64::max);

        let (verlinde_integrality_residual, verlinde_matches_ring) = match self.verlinde_values() {
            Ok(values) => {
                let mut worst: f64 = 0.0;
                let mut data = Vec::with_capacity(values.len());
                for v in &values {
                    let r = v.re.round().max(0.0);
                    worst = worst.max((v - C64::new(r, 0.0)).norm());
                    data.push(r as u32);
                }
                let tensor = FusionTensor { rank: n, data };
                (Some(worst), tensor.matches(&self.ring))
            }
            Err(_) => (None, false),
        };

        let s2 = s * s;
        let c = DMatrix::from_fn(n, n, |i, j| {
            C64::new(if j == self.ring.dual(i) { 1.0 } else { 0.0 }, 0.0)
        });
        let charge_conjugation_residual = max_abs(&(&s2 - &c));
        let charge_conjugation_matches_dual = (0..n).all(|i| {
            let argmax = (0..n)
                .max_by(|&a, &b| s2[(i, a)].norm().total_cmp(&s2[(i, b)].norm()))
                .unwrap_or(0);
            argmax == self.ring.dual(i)
        });

        let t = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.t.clone()));
        let st = s * t;
        let st3 = &st * &st * &st;
        let denom: f64 = s2.iter().map(|z| z.norm_sqr()).sum();
        let lambda = if denom > 0.0 {
            s2.iter().zip(st3.iter()).map(|(b, a)| b.conj() * a).sum::<C64>() / denom
        } else {
            C64::new(0.0, 0.0)
        };
        let modular_relation_residual =
            max_abs(&(&st3 - &s2 * lambda)).max((lambda.norm() - 1.0).abs());

        let pass = unitarity_residual < tolerance
            && symmetry_residual < tolerance
            && first_row_min > 0.0
            && first_row_imag < tolerance
            && t_modulus_residual < tolerance
            && verlinde_integrality_residual.is_some_and(|r| r < VERLINDE_TOLERANCE)
            && verlinde_matches_ring
            && charge_conjugation_residual < tolerance
            && charge_conjugation_matches_dual
            && modular_relation_residual < tolerance;

        ModularityReport {
            unitarity_residual,
            symmetry_residual,
            first_row_min,
            first_row_imag,
            t_modulus_residual,
            verlinde_integrality_residual,
            verlinde_matches_ring,
            charge_conjugation_residual,
            charge_conjugation_matches_dual,
            modular_relation_residual,
            lambda: (lambda.re, lambda.im),
            tolerance,
            pass,
        }
    }

    /// `d_i = S_0i / S_00`, cross-checked against the Perron-Frobenius
    /// dimensions of the ring.
    pub fn dims_from_s(&self) -> Result<DimensionVector> {
        let s00 = self.s[(0, 0)];
        if s00.norm() < 1e-12 {
            return Err(Error::Inconsistent("S[0][0] vanishes".into()));
        }
        let n = self.s.nrows();
        let d: Vec<f64> = (0..n).map(|i| (self.s[(0, i)] / s00).re).collect();
        let pf = self.ring.dims()?;
        for i in 0..n {
            if (d[i] - pf.d[i]).abs() > DIMENSION_AGREEMENT {
                return Err(Error::Inconsistent(format!(
                    "dimension of label {i}: S gives {}, Perron-Frobenius gives {}",
                    d[i], pf.d[i]
                )));
            }
        }
        Ok(DimensionVector {
            d,
            tolerance: pf.tolerance,
        })
    }
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn real(rows: &[&[f64]]) -> DMatrix<C64> {
        let n = rows.len();
        DMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j], 0.0))
    }

    #[test]
    fn su2_level1_verlinde_gives_z2() {
        let h = 1.0 / 2f64.sqrt();
        let ring = FusionRing::pointed(&GroupTable::cyclic(2));
        let md = ModularData::new(
            ring.clone(),
            real(&[&[h, h], &[h, -h]]),
            vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0)],
        )
        .unwrap();
        let tensor = md.verlinde().unwrap();
        // 2x2 direct evaluation: N[1][1][0] = (h h h / h) + (h h h / h)... = 1
        assert_eq!(tensor.get(1, 1, 0), 1);
        assert_eq!(tensor.get(1, 1, 1), 0);
        assert!(tensor.matches(&ring));
        assert!(md.check_modularity().pass);
    }

    #[test]
    fn ising_verlinde() {
        let r2 = 2f64.sqrt();
        let entry = catalog::ising();
        let md = entry.modular.unwrap();
        let explicit = real(&[&[0.5, 0.5, r2 / 2.0], &[0.5, 0.5, -r2 / 2.0], &[r2 / 2.0, -r2 / 2.0, 0.0]]);
        assert!((md.s() - &explicit).iter().all(|z| z.norm() < 1e-15));
        let tensor = md.verlinde().unwrap();
        assert_eq!(tensor.get(2, 2, 0), 1);
        assert_eq!(tensor.get(2, 2, 1), 1);
        assert_eq!(tensor.get(2, 2, 2), 0);
        assert!(tensor.matches(md.ring()));
    }

    #[test]
    fn identity_s_is_rejected() {
        let ring = FusionRing::pointed(&GroupTable::cyclic(2));
        let one = C64::new(1.0, 0.0);
        let md = ModularData::new(ring, DMatrix::identity(2, 2), vec![one, one]).unwrap();
        assert!(matches!(md.verlinde(), Err(Error::Inconsistent(_))));
        assert!(!md.check_modularity().pass);
    }

    #[test]
    fn trivial_modular_data() {
        let one = C64::new(1.0, 0.0);
        let md = ModularData::new(FusionRing::trivial(), DMatrix::from_element(1, 1, one), vec![one])
            .unwrap();
        let report = md.check_modularity();
        assert!(report.pass);
        assert!((report.lambda.0 - 1.0).abs() < 1e-15 && report.lambda.1.abs() < 1e-15);
        assert_eq!(md.dims_from_s().unwrap().d, vec![1.0]);
    }

    #[test]
    fn ising_with_trivial_t_fails_modular_relation() {
        let md = catalog::ising().modular.unwrap();
        let one = C64::new(1.0, 0.0);
        let broken = ModularData::new(md.ring().clone(), md.s().clone(), vec![one; 3]).unwrap();
        let report = broken.check_modularity();
        assert!(!report.pass);
        // (S)^3 = S^3 = S for Ising (S^2 = 1), which is not a multiple of 1
        assert!(report.modular_relation_residual > 0.1);
        assert!(report.unitarity_residual < 1e-12);
    }

    #[test]
    fn symmetric_bicharacter_is_degenerate() {
        let z2 = GroupTable::cyclic(2);
        let one = C64::new(1.0, 0.0);
        let degenerate = ModularData::from_quadratic_form(&z2, vec![one, one]).unwrap();
        let report = degenerate.check_modularity();
        assert!(!report.pass);
        assert!(report.unitarity_residual > 0.5);
        let semion =
            ModularData::from_quadratic_form(&z2, vec![one, C64::new(0.0, 1.0)]).unwrap();
        assert!(semion.check_modularity().pass);
    }

    #[test]
    fn dims_from_s_examples() {
        let md = catalog::ising().modular.unwrap();
        let d = md.dims_from_s().unwrap();
        assert!((d.d[2] - 2f64.sqrt()).abs() < 1e-12);
        let md = catalog::su2k(3).unwrap().modular.unwrap();
        let d = md.dims_from_s().unwrap();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let expected = [1.0, golden, golden, 1.0];
        for (a, b) in d.d.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn conjugate_chirality_is_also_modular() {
        let md = catalog::su2k(3).unwrap().modular.unwrap();
        let report = md.conjugate().check_modularity();
        assert!(report.pass);
        assert!(report.lambda.0.is_finite());
    }
}
