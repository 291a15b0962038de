//! Index identities for multi-interval inclusions and the even-part ratios.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion_ring::{Combination, FusionRing};
use crate::report::Check;

/// Largest number of words `dimension_identity_check` will enumerate.
pub const WORD_LIMIT: u128 = 10_000_000;

/// Relative tolerance of the dimension identity.
pub const IDENTITY_RELATIVE_TOLERANCE: f64 = 1e-6;

fn check_domain(mu2: f64, n: u32) -> Result<()> {
    if !(mu2 >= 1.0) || !mu2.is_finite() {
        return Err(Error::input(format!("mu_2 must be a finite real >= 1, got {mu2}")));
    }
    if n == 0 {
        return Err(Error::input("interval count must be at least 1"));
    }
    Ok(())
}

/// Index of the `n`-interval inclusion: `mu_2^(n-1)`.
pub fn mu_n(mu2: f64, n: u32) -> Result<f64> {
    check_domain(mu2, n)?;
    Ok(mu2.powi(n as i32 - 1))
}

/// Index in the sector `rho`: `d(rho)^2 mu_2^(n-1)`.
pub fn mu_n_rho(mu2: f64, d_rho: f64, n: u32) -> Result<f64> {
    check_domain(mu2, n)?;
    if !(d_rho >= 1.0) || !d_rho.is_finite() {
        return Err(Error::input(format!("d(rho) must be a finite real >= 1, got {d_rho}")));
    }
    Ok(d_rho * d_rho * mu_n(mu2, n)?)
}

/// Multiplicity of the identity in `rho_{i1} rho_{i2} ... rho_{in}`, or in
/// `rho_{i1} conj(rho_{i2}) rho_{i3} ...` when `alternating` is set
/// (every even position conjugated). Evaluated as a left fold.
pub fn canonical_multiplicities(ring: &FusionRing, word: &[usize], alternating: bool) -> Result<u64> {
    let n = ring.rank();
    if let Some(&bad) = word.iter().find(|&&i| i >= n) {
        return Err(Error::input(format!("label index {bad} out of range")));
    }
    let mut acc = ring.basis(0);
    for (pos, &i) in word.iter().enumerate() {
        let letter = if alternating && pos % 2 == 1 { ring.dual(i) } else { i };
        acc = ring.fuse(&acc, &ring.basis(letter))?;
    }
    Ok(acc.coefficient(0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdentityResidual {
    pub n: u32,
    /// `sum_words N^0(word) prod_k d_{i_k}`
    pub lhs: f64,
    /// `I_global^(n-1)`
    pub rhs: f64,
    pub residual: f64,
    pub pass: bool,
}

/// Evaluates `sum over words (i_1..i_n) of N^0 d_{i_1}...d_{i_n}` by
/// enumerating every word (prefix products shared along a depth-first walk)
/// and compares with `I_global^(n-1)`.
pub fn dimension_identity_check(ring: &FusionRing, n: u32) -> Result<IdentityResidual> {
    if n == 0 {
        return Err(Error::input("word length must be at least 1"));
    }
    let rank = ring.rank();
    let words = (rank as u128).checked_pow(n).unwrap_or(u128::MAX);
    if words > WORD_LIMIT {
        return Err(Error::Infeasible {
            what: format!("{n}-fold multiplicity sum over {rank} labels"),
            required: words,
            limit: WORD_LIMIT,
        });
    }
    let d = ring.dims()?;

    fn walk(ring: &FusionRing, d: &[f64], prefix: &Combination, weight: f64, left: u32) -> f64 {
        let rank = ring.rank();
        if left == 1 {
            // coefficient of the identity in prefix * i
            return (0..rank)
                .map(|i| {
                    let mult: u64 = prefix
                        .0
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(k, &c)| c * u64::from(ring.n(k, i, 0)))
                        .sum();
                    mult as f64 * weight * d[i]
                })
                .sum();
        }
        (0..rank)
            .map(|i| {
                let next = ring
                    .fuse(prefix, &ring.basis(i))
                    .expect("combination has ring rank");
                walk(ring, d, &next, weight * d[i], left - 1)
            })
            .sum()
    }

    let lhs = walk(ring, &d.d, &ring.basis(0), 1.0, n);
    let rhs = d.global_index().powi(n as i32 - 1);
    let residual = (lhs - rhs).abs();
    Ok(IdentityResidual {
        n,
        lhs,
        rhs,
        residual,
        pass: residual < IDENTITY_RELATIVE_TOLERANCE * rhs,
    })
}

/// Index of `A ⊂ B` squared times `mu_B`.
pub fn extension_index(subnet_index: f64, mu_b: f64) -> Result<f64> {
    if !(subnet_index >= 1.0) || !(mu_b >= 1.0) {
        return Err(Error::input(format!(
            "need subnet index >= 1 and mu_B >= 1, got {subnet_index} and {mu_b}"
        )));
    }
    Ok(subnet_index * subnet_index * mu_b)
}

/// `mu_B = mu_A^2 / I_global^2` for the LR net `B`.
pub fn lr_net_mu(ring: &FusionRing, mu_a: f64) -> Result<f64> {
    if !(mu_a >= 1.0) {
        return Err(Error::input(format!("mu_A must be >= 1, got {mu_a}")));
    }
    let index = ring.global_index()?;
    Ok(mu_a * mu_a / (index * index))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvenPartRatio {
    pub ratio: f64,
    pub grading_order: usize,
    /// Set when the grading is trivial and the ratio is 1 by definition.
    pub notice: Option<String>,
}

/// Global index over the global index of the identity component of the
/// universal grading.
pub fn even_part_ratio(ring: &FusionRing) -> Result<EvenPartRatio> {
    let d = ring.dims()?;
    let grading = ring.grading();
    let even: f64 = grading.identity_component().iter().map(|&i| d.d[i].powi(2)).sum();
    let notice = (grading.order() == 1)
        .then(|| "grading is trivial; the even part is the whole system".to_string());
    Ok(EvenPartRatio {
        ratio: d.global_index() / even,
        grading_order: grading.order(),
        notice,
    })
}

/// Per-identity record of the index bookkeeping for one ring.
#[derive(Clone, Debug, Serialize)]
pub struct IndexLedger {
    pub mu2: f64,
    pub n: u32,
    pub mu_n: f64,
    pub i_global: f64,
    pub entries: Vec<Check>,
}

/// Evaluates every identity for `ring` with `n` intervals, taking
/// `mu_2 = I_global`.
pub fn ledger(ring: &FusionRing, n: u32, tolerance: f64) -> Result<IndexLedger> {
    let d = ring.dims()?;
    let i_global = d.global_index();
    let mu2 = i_global;
    let mun = mu_n(mu2, n)?;
    let mut entries = Vec::new();

    entries.push(Check::new(
        "global_index_bound",
        i_global <= mu2 + tolerance,
        format!("sum d^2 = {i_global} <= mu_A = {mu2}"),
    ));
    let id = dimension_identity_check(ring, n)?;
    entries.push(Check {
        lhs: Some(id.lhs),
        rhs: Some(id.rhs),
        residual: Some(id.residual),
        ..Check::new(
            "dimension_identity",
            id.pass,
            format!("sum N^0 prod d over words of length {n} vs I_global^(n-1)"),
        )
    });
    let additive = mu_n(mu2, 2)? * mu_n(mu2, n)?;
    entries.push(Check::compare(
        "mu_n_exponent_additivity",
        mu_n(mu2, n + 1)?,
        additive,
        tolerance * additive.max(1.0),
    ));
    let (largest, d_max) = d
        .d
        .iter()
        .copied()
        .enumerate()
        .fold((0, 1.0), |acc, (i, x)| if x > acc.1 { (i, x) } else { acc });
    entries.push(Check::compare(
        format!("mu_n_rho[{}]", ring.label(largest)),
        mu_n_rho(mu2, d_max.max(1.0), n)?,
        d_max * d_max * mun,
        tolerance * mun.max(1.0) * d_max * d_max,
    ));
    entries.push(Check::compare(
        "lr_net_mu",
        lr_net_mu(ring, mu2)?,
        1.0,
        tolerance,
    ));
    let ratio = even_part_ratio(ring)?;
    entries.push(Check::compare(
        "even_part_ratio",
        ratio.ratio,
        ratio.grading_order as f64,
        1e-6,
    ));
    Ok(IndexLedger {
        mu2,
        n,
        mu_n: mun,
        i_global,
        entries,
    })
}
