//! Finite-dimensional crossed product `B ⋊ G` for a pointed system, with
//! `B = M_m ⊗ M_m^opp` and the action `α_g = Ad(u_g ⊗ conj(u_g))`.
//!
//! The algebra is realized on `ℓ²(G) ⊗ C^{m²}` (group coordinate outer):
//! `π(x)` is block diagonal with block `h` equal to `α_{h⁻¹}(x)` and `R_g`
//! shifts block `h` to block `gh`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{GroupTable, C64};
use crate::report::{Check, Report};

pub type Matrix = DMatrix<C64>;

pub const RELATION_TOLERANCE: f64 = 1e-10;
pub const ROUNDTRIP_TOLERANCE: f64 = 1e-12;
pub const PSD_FLOOR: f64 = -1e-9;

/// Base elements used when checking the covariance relation.
const COVARIANCE_SAMPLES: u64 = 4;

#[derive(Clone, Debug)]
pub struct CrossedProductAlgebra {
    group: GroupTable,
    m: usize,
    seed: u64,
    u: Vec<Matrix>,
    /// `u_g ⊗ conj(u_g)`
    w: Vec<Matrix>,
    r: Vec<Matrix>,
}

/// Coefficients `x_g` of `X = Σ_g π(x_g) R_g`, indexed by group element.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionCoefficients {
    pub coeffs: Vec<Matrix>,
    /// Hilbert-Schmidt distance between `X` and the reassembled element.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Relation {
    pub name: String,
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PimsnerPopa {
    pub lambda: f64,
    pub samples: u64,
    pub seed: u64,
    pub worst_margin: f64,
    /// Seed of the sample attaining the worst margin.
    pub worst_seed: u64,
}

impl PimsnerPopa {
    pub fn pass(&self) -> bool {
        self.worst_margin >= PSD_FLOOR
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SharpnessWitness {
    pub lambda: f64,
    pub seed: u64,
    pub margin: f64,
}

fn frobenius(a: &Matrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value.
pub fn operator_norm(a: &Matrix) -> f64 {
    if a.iter().all(|z| *z == C64::new(0.0, 0.0)) {
        return 0.0;
    }
    a.singular_values().max()
}

/// Smallest eigenvalue of the Hermitian part of `a`.
pub fn min_eigenvalue(a: &Matrix) -> f64 {
    let h = (a + a.adjoint()) * C64::new(0.5, 0.0);
    h.symmetric_eigenvalues().min()
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    Matrix::from_fn(n, n, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

fn unitary_family(group: &GroupTable, m: usize) -> Result<Vec<Matrix>> {
    let n = group.order();
    if m == 0 {
        return Err(Error::input("base dimension must be positive"));
    }
    if n == 1 {
        return Ok(vec![Matrix::identity(m, m)]);
    }
    if let Some(gen) = group.cyclic_generator().filter(|_| m >= 2) {
        // element gen^p acts by diag(ω^{p j})
        let mut power = vec![0usize; n];
        let mut x = 0;
        for p in 0..n {
            power[x] = p;
            x = group.mul(x, gen);
        }
        return Ok((0..n)
            .map(|g| {
                Matrix::from_diagonal(&nalgebra::DVector::from_fn(m, |j, _| {
                    C64::from_polar(
                        1.0,
                        2.0 * std::f64::consts::PI * (power[g] * j) as f64 / n as f64,
                    )
                }))
            })
            .collect());
    }
    if m == n {
        return Ok((0..n)
            .map(|g| Matrix::from_fn(n, n, |a, b| {
                if a == group.mul(g, b) { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
            }))
            .collect());
    }
    Err(Error::Construction(format!(
        "no faithful action of a group of order {n} on M_{m}; use m = {n}"
    )))
}

impl CrossedProductAlgebra {
    pub fn build(group: &GroupTable, m: usize, seed: u64) -> Result<Self> {
        let u = unitary_family(group, m)?;
        let w: Vec<Matrix> = u.iter().map(|ug| ug.kronecker(&ug.map(|z| z.conj()))).collect();
        let n = group.order();
        let b = m * m;
        let r = (0..n)
            .map(|g| {
                let mut rg = Matrix::zeros(n * b, n * b);
                for h in 0..n {
                    let gh = group.mul(g, h);
                    rg.view_mut((gh * b, h * b), (b, b)).fill_with_identity();
                }
                rg
            })
            .collect();
        Ok(CrossedProductAlgebra {
            group: group.clone(),
            m,
            seed,
            u,
            w,
            r,
        })
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn base_dim(&self) -> usize {
        self.m
    }

    /// Side of the base algebra `B`, `m²`.
    pub fn block(&self) -> usize {
        self.m * self.m
    }

    /// Side of the ambient matrices, `m² |G|`.
    pub fn ambient(&self) -> usize {
        self.block() * self.group.order()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn unitary(&self, g: usize) -> &Matrix {
        &self.u[g]
    }

    pub fn generator(&self, g: usize) -> &Matrix {
        &self.r[g]
    }

    /// `α_g(x) = w_g x w_g*`.
    pub fn alpha(&self, g: usize, x: &Matrix) -> Matrix {
        &self.w[g] * x * self.w[g].adjoint()
    }

    /// The realization of a base element.
    pub fn pi(&self, x: &Matrix) -> Matrix {
        let b = self.block();
        let mut out = Matrix::zeros(self.ambient(), self.ambient());
        for h in 0..self.group.order() {
            let block = self.alpha(self.group.inv(h), x);
            out.view_mut((h * b, h * b), (b, b)).copy_from(&block);
        }
        out
    }

    /// `Σ_g π(x_g) R_g`, assembled block by block.
    pub fn assemble(&self, coeffs: &[Matrix]) -> Matrix {
        let g = &self.group;
        let (n, b) = (g.order(), self.block());
        let mut out = Matrix::zeros(n * b, n * b);
        for h in 0..n {
            let hinv = g.inv(h);
            for k in 0..n {
                let block = self.alpha(hinv, &coeffs[g.mul(h, g.inv(k))]);
                out.view_mut((h * b, k * b), (b, b)).copy_from(&block);
            }
        }
        out
    }

    fn check_shape(&self, x: &Matrix) -> Result<()> {
        let d = self.ambient();
        if x.nrows() != d || x.ncols() != d {
            return Err(Error::input(format!(
                "element is {}x{}, expected {d}x{d}",
                x.nrows(),
                x.ncols()
            )));
        }
        Ok(())
    }

    /// `x_g = ℰ(X R_g*)`; fails if `X` is not in the algebra.
    pub fn expand(&self, x: &Matrix) -> Result<ExpansionCoefficients> {
        self.check_shape(x)?;
        let g = &self.group;
        let (n, b) = (g.order(), self.block());
        let scale = C64::new(1.0 / n as f64, 0.0);
        let coeffs: Vec<Matrix> = (0..n)
            .map(|el| {
                let back = g.inv(el);
                let mut acc = Matrix::zeros(b, b);
                for h in 0..n {
                    // (X R_g*) block (h, h) is X block (h, g⁻¹h)
                    let k = g.mul(back, h);
                    acc += self.alpha(h, &x.view((h * b, k * b), (b, b)).into_owned());
                }
                acc * scale
            })
            .collect();
        let residual = frobenius(&(x - self.assemble(&coeffs)));
        if residual > RELATION_TOLERANCE * frobenius(x).max(1.0) {
            return Err(Error::OutsideAlgebra { distance: residual });
        }
        Ok(ExpansionCoefficients { coeffs, residual })
    }

    /// The conditional expectation onto `π(B)`, returned as a base element.
    pub fn expectation(&self, x: &Matrix) -> Result<Matrix> {
        Ok(self.expand(x)?.coeffs.swap_remove(0))
    }

    /// Operator-norm residuals of the defining relations.
    pub fn relation_residuals(&self) -> Vec<Relation> {
        let g = &self.group;
        let n = g.order();
        let d = self.ambient();
        let id = Matrix::identity(d, d);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let samples: Vec<Matrix> = (0..COVARIANCE_SAMPLES)
            .map(|_| random_matrix(&mut rng, self.block()))
            .collect();

        let max = |it: &mut dyn Iterator<Item = f64>| it.fold(0.0f64, f64::max);
        let unit = operator_norm(&(&self.r[0] - &id));
        let covariance = max(&mut (0..n).flat_map(|el| {
            samples.iter().map(move |x| {
                let lhs = &self.r[el] * self.pi(x);
                let rhs = self.pi(&self.alpha(el, x)) * &self.r[el];
                operator_norm(&(lhs - rhs))
            })
        }));
        let isometry = max(&mut (0..n).map(|el| {
            operator_norm(&(self.r[el].adjoint() * &self.r[el] - &id))
        }));
        let product = max(&mut (0..n).flat_map(|a| {
            (0..n).map(move |b| operator_norm(&(&self.r[a] * &self.r[b] - &self.r[g.mul(a, b)])))
        }));
        let adjoint = max(&mut (0..n).map(|el| {
            operator_norm(&(self.r[el].adjoint() - &self.r[g.inv(el)]))
        }));
        [
            ("unit", unit),
            ("covariance", covariance),
            ("isometry", isometry),
            ("product", product),
            ("adjoint", adjoint),
        ]
        .into_iter()
        .map(|(name, residual)| Relation { name: name.into(), residual })
        .collect()
    }

    /// Random coefficients and the element they assemble to.
    pub fn random_element(&self, rng: &mut ChaCha8Rng) -> (Vec<Matrix>, Matrix) {
        let coeffs: Vec<Matrix> = (0..self.group.order())
            .map(|_| random_matrix(rng, self.block()))
            .collect();
        let x = self.assemble(&coeffs);
        (coeffs, x)
    }

    /// Largest coefficient error over `samples` assemble/expand round trips.
    pub fn roundtrip_error(&self, samples: u64, seed: u64) -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let (coeffs, x) = self.random_element(&mut rng);
            let back = self.expand(&x)?;
            for (a, b) in coeffs.iter().zip(&back.coeffs) {
                worst = worst.max(frobenius(&(a - b)));
            }
        }
        Ok(worst)
    }

    /// Largest `|ℰ(π(a) X π(b)) - a ℰ(X) b|` over random triples.
    pub fn bimodule_residual(&self, samples: u64, seed: u64) -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let (_, x) = self.random_element(&mut rng);
            let a = random_matrix(&mut rng, self.block());
            let b = random_matrix(&mut rng, self.block());
            let lhs = self.expectation(&(self.pi(&a) * &x * self.pi(&b)))?;
            let rhs = &a * self.expectation(&x)? * &b;
            worst = worst.max(frobenius(&(lhs - rhs)));
        }
        Ok(worst)
    }

    /// The positive element `Y*Y` for a random `Y` of unit Hilbert-Schmidt
    /// norm drawn from `seed`.
    pub fn positive_sample(&self, seed: u64) -> Matrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, y) = self.random_element(&mut rng);
        let y = &y / C64::new(frobenius(&y), 0.0);
        y.adjoint() * y
    }

    /// Smallest eigenvalue of `π(ℰ(x)) - λ x`.
    pub fn pimsner_popa_margin(&self, x: &Matrix, lambda: f64) -> Result<f64> {
        let e = self.pi(&self.expectation(x)?);
        Ok(min_eigenvalue(&(e - x * C64::new(lambda, 0.0))))
    }

    /// Worst margin at `λ = 1/|G|` over samples seeded `seed, seed+1, ...`.
    pub fn pimsner_popa_check(&self, samples: u64, seed: u64) -> Result<PimsnerPopa> {
        if samples == 0 {
            return Err(Error::input("need at least one sample"));
        }
        let lambda = 1.0 / self.group.order() as f64;
        let mut worst = (f64::INFINITY, seed);
        for i in 0..samples {
            let s = seed.wrapping_add(i);
            let margin = self.pimsner_popa_margin(&self.positive_sample(s), lambda)?;
            if margin < worst.0 {
                worst = (margin, s);
            }
        }
        Ok(PimsnerPopa {
            lambda,
            samples,
            seed,
            worst_margin: worst.0,
            worst_seed: worst.1,
        })
    }

    /// First sample seed from `seed` on whose element violates the
    /// inequality at `lambda`.
    pub fn find_violation(&self, lambda: f64, seed: u64, tries: u64) -> Result<Option<SharpnessWitness>> {
        for i in 0..tries {
            let s = seed.wrapping_add(i);
            let margin = self.pimsner_popa_margin(&self.positive_sample(s), lambda)?;
            if margin < PSD_FLOOR {
                return Ok(Some(SharpnessWitness { lambda, seed: s, margin }));
            }
        }
        Ok(None)
    }

    /// Full JSON report: relations, round trips, the inequality at `1/|G|`
    /// and a witness against `2/|G|`.
    pub fn report(&self, name: &str, samples: u64, seed: u64) -> Result<Report> {
        let n = self.group.order();
        let mut report = Report::new("oracle", name);
        report.seed = Some(seed);
        let relations = self.relation_residuals();
        for r in &relations {
            report.push(Check::compare(
                format!("relation_{}", r.name),
                r.residual,
                0.0,
                RELATION_TOLERANCE,
            ));
        }
        let roundtrip = self.roundtrip_error(samples, seed)?;
        report.push(Check::compare("expand_roundtrip", roundtrip, 0.0, ROUNDTRIP_TOLERANCE));
        let bimodule = self.bimodule_residual(samples.min(16), seed)?;
        report.push(Check::compare("expectation_bimodule", bimodule, 0.0, 1e-9));
        let pp = self.pimsner_popa_check(samples, seed)?;
        report.push(Check::new(
            "pimsner_popa",
            pp.pass(),
            format!("worst margin {:e} at lambda = 1/{n} (sample seed {})", pp.worst_margin, pp.worst_seed),
        ));
        let witness = self.find_violation(2.0 / n as f64, seed, samples.max(1))?;
        report.push(Check::new(
            "pimsner_popa_sharp",
            witness.is_some(),
            match witness {
                Some(w) => format!("seed {} violates lambda = 2/{n} by {:e}", w.seed, w.margin),
                None => format!("no violation of lambda = 2/{n} within {samples} samples"),
            },
        ));
        for k in 1..=4u32 {
            let count = alternating_identity_words(&self.group, k);
            report.push(Check::compare(
                format!("alternating_words_n{k}"),
                count as f64,
                (n as f64).powi(k as i32 - 1),
                0.5,
            ));
        }
        report.set("group_order", n);
        report.set("base_dim", self.m);
        report.set("samples", samples);
        report.set("relations", &relations);
        report.set("roundtrip_error", roundtrip);
        report.set("pimsner_popa", pp);
        report.set("sharpness_witness", witness);
        Ok(report)
    }
}

/// Number of words `(g_1, ..., g_n)` with `g_1 g_2⁻¹ g_3 g_4⁻¹ ... = e`.
pub fn alternating_identity_words(group: &GroupTable, n: u32) -> u64 {
    let order = group.order();
    let mut count = vec![0u64; order];
    count[0] = 1;
    for pos in 0..n {
        let mut next = vec![0u64; order];
        for (v, &c) in count.iter().enumerate().filter(|(_, &c)| c > 0) {
            for g in 0..order {
                let letter = if pos % 2 == 1 { group.inv(g) } else { g };
                next[group.mul(v, letter)] += c;
            }
        }
        count = next;
    }
    count[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> GroupTable {
        GroupTable::cyclic(n)
    }

    #[test]
    fn z2_relations_hold() {
        let a = CrossedProductAlgebra::build(&z(2), 2, 1).unwrap();
        let d = a.unitary(1).diagonal();
        assert_eq!(d[0], C64::new(1.0, 0.0));
        assert!((d[1] - C64::new(-1.0, 0.0)).norm() < 1e-15);
        for r in a.relation_residuals() {
            assert!(r.residual < 1e-12, "{r:?}");
        }
    }

    #[test]
    fn z3_relations_hold() {
        let a = CrossedProductAlgebra::build(&z(3), 3, 5).unwrap();
        assert_eq!(a.ambient(), 27);
        for r in a.relation_residuals() {
            assert!(r.residual < 1e-12, "{r:?}");
        }
    }

    #[test]
    fn trivial_group_is_the_base() {
        let a = CrossedProductAlgebra::build(&z(1), 2, 0).unwrap();
        assert_eq!(a.ambient(), 4);
        assert_eq!(a.generator(0), &Matrix::identity(4, 4));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_matrix(&mut rng, 4);
        assert!(frobenius(&(a.expectation(&x).unwrap() - &x)) < 1e-14);
        let p = a.pimsner_popa_margin(&a.positive_sample(9), 1.0).unwrap();
        assert!(p.abs() < 1e-12);
    }

    #[test]
    fn unsupported_actions_are_refused() {
        let s3 = GroupTable::builtin("s3").unwrap();
        assert!(matches!(
            CrossedProductAlgebra::build(&s3, 2, 0),
            Err(Error::Construction(_))
        ));
        assert!(CrossedProductAlgebra::build(&z(2), 1, 0).is_err());
        assert!(CrossedProductAlgebra::build(&z(2), 0, 0).unwrap_err().is_input());
    }

    #[test]
    fn regular_representation_for_s3() {
        let s3 = GroupTable::builtin("s3").unwrap();
        let a = CrossedProductAlgebra::build(&s3, 6, 2).unwrap();
        for g in 0..6 {
            for h in 0..6 {
                let lhs = a.unitary(g) * a.unitary(h);
                assert!(frobenius(&(lhs - a.unitary(s3.mul(g, h)))) < 1e-15);
            }
        }
    }

    #[test]
    fn generators_expand_to_deltas() {
        let a = CrossedProductAlgebra::build(&z(3), 3, 0).unwrap();
        for g in 0..3 {
            let e = a.expand(a.generator(g)).unwrap();
            for (h, c) in e.coeffs.iter().enumerate() {
                let want = if h == g { Matrix::identity(9, 9) } else { Matrix::zeros(9, 9) };
                assert!(frobenius(&(c - want)) < 1e-14);
            }
        }
        assert!(frobenius(&a.expectation(a.generator(1)).unwrap()) < 1e-14);
    }

    #[test]
    fn projection_is_outside() {
        let a = CrossedProductAlgebra::build(&z(2), 2, 0).unwrap();
        let mut p = Matrix::zeros(8, 8);
        p[(0, 0)] = C64::new(1.0, 0.0);
        match a.expand(&p) {
            Err(Error::OutsideAlgebra { distance }) => assert!(distance > 0.1),
            other => panic!("expected refusal, got {other:?}"),
        }
        assert!(a.expand(&Matrix::zeros(3, 3)).unwrap_err().is_input());
    }

    #[test]
    fn expectation_of_conjugated_unit() {
        // x = e_11 ⊗ 1 for Z2, m = 2
        let a = CrossedProductAlgebra::build(&z(2), 2, 0).unwrap();
        let mut e11 = Matrix::zeros(2, 2);
        e11[(0, 0)] = C64::new(1.0, 0.0);
        let x = e11.kronecker(&Matrix::identity(2, 2));
        let r = a.generator(1);
        let got = a.expectation(&(r * a.pi(&x) * r.adjoint())).unwrap();
        assert!(frobenius(&(got - &x)) < 1e-14);
        let rr = a.expectation(&(r * r.adjoint())).unwrap();
        assert!(frobenius(&(rr - Matrix::identity(4, 4))) < 1e-14);
    }

    #[test]
    fn roundtrip_and_bimodule() {
        for (n, m) in [(2, 2), (3, 3)] {
            let a = CrossedProductAlgebra::build(&z(n), m, 0).unwrap();
            assert!(a.roundtrip_error(100, 42).unwrap() < ROUNDTRIP_TOLERANCE);
            assert!(a.bimodule_residual(10, 42).unwrap() < 1e-10);
        }
    }

    #[test]
    fn expectation_is_positive() {
        let a = CrossedProductAlgebra::build(&z(3), 3, 0).unwrap();
        for s in 0..10 {
            let e = a.expectation(&a.positive_sample(s)).unwrap();
            assert!(min_eigenvalue(&e) > -1e-10);
        }
    }

    #[test]
    fn pimsner_popa_bound_and_sharpness() {
        let a = CrossedProductAlgebra::build(&z(2), 2, 0).unwrap();
        let pp = a.pimsner_popa_check(100, 7).unwrap();
        assert!(pp.pass(), "{pp:?}");
        assert_eq!(pp.lambda, 0.5);
        // recorded witness: the first sample from seed 7 already violates λ = 1
        let margin = a.pimsner_popa_margin(&a.positive_sample(7), 1.0).unwrap();
        assert!(margin < PSD_FLOOR, "{margin}");
        let found = a.find_violation(1.0, 7, 10).unwrap().unwrap();
        assert_eq!(found.seed, 7);
    }

    #[test]
    fn alternating_word_counts() {
        for g in ["z1", "z2", "z3", "z4", "z2xz2", "s3"] {
            let group = GroupTable::builtin(g).unwrap();
            let n = group.order() as u64;
            for k in 1..=4 {
                assert_eq!(alternating_identity_words(&group, k), n.pow(k - 1), "{g} {k}");
            }
        }
    }

    #[test]
    fn report_passes() {
        let a = CrossedProductAlgebra::build(&z(2), 2, 0).unwrap();
        let r = a.report("z2", 20, 1).unwrap();
        assert!(r.pass, "{}", r.to_json());
    }
}
