//! Built-in models: SU(2)_k, Ising, pointed group rings and Drinfeld doubles.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::double_construction::drinfeld_double;
use crate::error::{Error, Result};
use crate::fusion_ring::FusionRing;
use crate::group::{GroupTable, C64};
use crate::modular_data::ModularData;

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub ring: FusionRing,
    pub modular: Option<ModularData>,
    /// Where the closed-form data comes from.
    pub notes: String,
}

fn phase(x: f64) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * x)
}

/// SU(2) at level `k`, labels `0..=k` (twice the spin).
pub fn su2k(k: usize) -> Result<CatalogEntry> {
    if !(1..=8).contains(&k) {
        return Err(Error::input(format!("SU(2)_k is built in for 1 <= k <= 8, got {k}")));
    }
    let n = k + 1;
    let mut entries = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let hi = (a + b).min(2 * k - a - b);
            for c in a.abs_diff(b)..=hi {
                if (a + b + c) % 2 == 0 {
                    entries.push(((a, b, c), 1));
                }
            }
        }
    }
    let labels = (0..n).map(|a| a.to_string()).collect();
    let ring = FusionRing::new(labels, (0..n).collect(), entries)?;

    let kk = (k + 2) as f64;
    let norm = (2.0 / kk).sqrt();
    let s = DMatrix::from_fn(n, n, |a, b| {
        C64::new(norm * (((a + 1) * (b + 1)) as f64 * PI / kk).sin(), 0.0)
    });
    let central = 3.0 * k as f64 / kk;
    let t = (0..n)
        .map(|a| phase((a * (a + 2)) as f64 / (4.0 * kk) - central / 24.0))
        .collect();
    let modular = ModularData::new(ring.clone(), s, t)?;
    Ok(CatalogEntry {
        name: format!("su2_k{k}"),
        ring,
        modular: Some(modular),
        notes: format!(
            "SU(2)_{k} truncated Clebsch-Gordan rules; S from the sine formula, T with c = 3k/(k+2)"
        ),
    })
}

/// The Ising model: `1`, `eps`, `sigma` with `sigma sigma = 1 + eps`.
pub fn ising() -> CatalogEntry {
    let labels = vec!["1".to_string(), "eps".to_string(), "sigma".to_string()];
    let entries = [
        ((0, 0, 0), 1),
        ((0, 1, 1), 1),
        ((0, 2, 2), 1),
        ((1, 0, 1), 1),
        ((1, 1, 0), 1),
        ((1, 2, 2), 1),
        ((2, 0, 2), 1),
        ((2, 1, 2), 1),
        ((2, 2, 0), 1),
        ((2, 2, 1), 1),
    ];
    let ring = FusionRing::new(labels, vec![0, 1, 2], entries).expect("Ising rules are well formed");
    let r = 2f64.sqrt();
    let s = DMatrix::from_row_slice(
        3,
        3,
        &[1.0, 1.0, r, 1.0, 1.0, -r, r, -r, 0.0],
    )
    .map(|x| C64::new(x / 2.0, 0.0));
    let c = 0.5;
    let t = [0.0, 0.5, 1.0 / 16.0]
        .iter()
        .map(|h| phase(h - c / 24.0))
        .collect();
    let modular = ModularData::new(ring.clone(), s, t).expect("Ising S and T have rank 3");
    CatalogEntry {
        name: "ising".into(),
        ring,
        modular: Some(modular),
        notes: "Ising minimal model, conformal weights 0, 1/2, 1/16 and c = 1/2".into(),
    }
}

/// The group ring of `group`; no modular data.
pub fn pointed(group: &GroupTable, name: &str) -> CatalogEntry {
    CatalogEntry {
        name: format!("pointed_{name}"),
        ring: FusionRing::pointed(group),
        modular: None,
        notes: format!("group ring of {name}, every sector invertible"),
    }
}

/// Representation ring of the untwisted Drinfeld double `D(group)`.
pub fn dg(group: &GroupTable, name: &str) -> Result<CatalogEntry> {
    let doubled = drinfeld_double(group)?;
    Ok(CatalogEntry {
        name: format!("dg_{name}"),
        ring: doubled.ring,
        modular: None,
        notes: format!("irreducible D({name}) modules from conjugacy classes and centralizer characters"),
    })
}

pub fn trivial() -> CatalogEntry {
    CatalogEntry {
        name: "trivial".into(),
        ring: FusionRing::trivial(),
        modular: None,
        notes: "one sector".into(),
    }
}

const POINTED: [&str; 5] = ["z2", "z3", "z4", "z2xz2", "s3"];
const DOUBLES: [&str; 5] = ["z2", "z3", "z4", "z2xz2", "s3"];

/// Names of the listed entries, in listing order.
pub fn names() -> Vec<String> {
    let mut out = vec!["trivial".to_string(), "ising".to_string()];
    out.extend((1..=8).map(|k| format!("su2_k{k}")));
    out.extend(POINTED.iter().map(|g| format!("pointed_{g}")));
    out.extend(DOUBLES.iter().map(|g| format!("dg_{g}")));
    out
}

/// Every listed entry.
pub fn entries() -> Vec<CatalogEntry> {
    names()
        .iter()
        .map(|n| by_name(n).expect("listed entries build"))
        .collect()
}

/// Looks up an entry. Besides the listed names, `pointed_<g>` and `dg_<g>`
/// accept any built-in group name.
pub fn by_name(name: &str) -> Result<CatalogEntry> {
    if name == "trivial" {
        return Ok(trivial());
    }
    if name == "ising" {
        return Ok(ising());
    }
    if let Some(k) = name.strip_prefix("su2_k") {
        let k = k
            .parse()
            .map_err(|_| Error::input(format!("bad level in catalog name '{name}'")))?;
        return su2k(k);
    }
    if let Some(g) = name.strip_prefix("pointed_") {
        return Ok(pointed(&GroupTable::builtin(g)?, g));
    }
    if let Some(g) = name.strip_prefix("dg_") {
        return dg(&GroupTable::builtin(g)?, g);
    }
    Err(Error::input(format!(
        "unknown catalog entry '{name}'; known: {}",
        names().join(", ")
    )))
}
