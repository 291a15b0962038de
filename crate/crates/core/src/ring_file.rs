//! JSON ring files:
//!
//! ```json
//! { "labels": ["1", "eps", "sigma"], "dual": [0, 1, 2],
//!   "tensor": [[i, j, k, mult], ...],
//!   "modular": { "S": [[[re, im], ...], ...], "T": [[re, im], ...] } }
//! ```
//!
//! Unit entries may be omitted. The `modular` block is optional.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion_ring::FusionRing;
use crate::group::C64;
use crate::modular_data::ModularData;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingFile {
    pub labels: Vec<String>,
    pub dual: Vec<usize>,
    pub tensor: Vec<[i64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modular: Option<ModularBlock>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModularBlock {
    #[serde(rename = "S")]
    pub s: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "T")]
    pub t: Vec<[f64; 2]>,
}

/// A loaded ring together with its optional modular data.
#[derive(Clone, Debug)]
pub struct LoadedRing {
    pub ring: FusionRing,
    pub modular: Option<ModularData>,
}

impl RingFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(self) -> Result<LoadedRing> {
        let n = self.labels.len();
        let mut entries = Vec::with_capacity(self.tensor.len());
        for &[i, j, k, m] in &self.tensor {
            if m < 0 {
                return Err(Error::input(format!(
                    "negative multiplicity {m} at ({i}, {j}, {k})"
                )));
            }
            let index = |x: i64| -> Result<usize> {
                usize::try_from(x)
                    .ok()
                    .filter(|&v| v < n)
                    .ok_or_else(|| Error::input(format!("label index {x} out of range 0..{n}")))
            };
            let m = u32::try_from(m)
                .map_err(|_| Error::input(format!("multiplicity {m} is too large")))?;
            entries.push(((index(i)?, index(j)?, index(k)?), m));
        }
        let ring = FusionRing::with_implied_units(self.labels, self.dual, entries)?;
        let modular = match self.modular {
            None => None,
            Some(block) => {
                if block.s.len() != n || block.s.iter().any(|row| row.len() != n) {
                    return Err(Error::input(format!("S must be {n}x{n}")));
                }
                let s = DMatrix::from_fn(n, n, |a, b| {
                    let [re, im] = block.s[a][b];
                    C64::new(re, im)
                });
                let t = block.t.iter().map(|&[re, im]| C64::new(re, im)).collect();
                Some(ModularData::new(ring.clone(), s, t)?)
            }
        };
        Ok(LoadedRing { ring, modular })
    }

    pub fn from_ring(ring: &FusionRing, modular: Option<&ModularData>) -> Self {
        let tensor = ring
            .entries()
            .map(|((i, j, k), m)| [i as i64, j as i64, k as i64, i64::from(m)])
            .collect();
        let modular = modular.map(|md| {
            let n = md.s().nrows();
            ModularBlock {
                s: (0..n)
                    .map(|a| (0..n).map(|b| [md.s()[(a, b)].re, md.s()[(a, b)].im]).collect())
                    .collect(),
                t: md.t().iter().map(|z| [z.re, z.im]).collect(),
            }
        });
        RingFile {
            labels: ring.labels().to_vec(),
            dual: ring.duals().to_vec(),
            tensor,
            modular,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ring files serialize")
    }
}

pub fn load_str(text: &str) -> Result<LoadedRing> {
    RingFile::parse(text)?.load()
}

pub fn load_path(path: &Path) -> Result<LoadedRing> {
    load_str(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn implied_units_are_inserted() {
        let text = r#"{"labels":["1","eps","sigma"],"dual":[0,1,2],
            "tensor":[[1,1,0,1],[1,2,2,1],[2,1,2,1],[2,2,0,1],[2,2,1,1]]}"#;
        let loaded = load_str(text).unwrap();
        assert_eq!(loaded.ring, catalog::ising().ring);
        assert!(loaded.modular.is_none());
    }

    #[test]
    fn rejects_bad_files() {
        let negative = r#"{"labels":["1","a"],"dual":[0,1],"tensor":[[1,1,0,-1]]}"#;
        assert!(load_str(negative).unwrap_err().is_input());
        let range = r#"{"labels":["1","a"],"dual":[0,1],"tensor":[[1,1,7,1]]}"#;
        assert!(load_str(range).unwrap_err().is_input());
        let unit = r#"{"labels":["1","a"],"dual":[0,1],"tensor":[[0,1,1,2]]}"#;
        assert!(load_str(unit).unwrap_err().is_input());
        assert!(load_str("{not json").unwrap_err().is_input());
        let extra = r#"{"labels":["1"],"dual":[0],"tensor":[],"oops":1}"#;
        assert!(load_str(extra).is_err());
    }

    #[test]
    fn export_round_trips_and_is_stable() {
        for entry in catalog::entries() {
            let file = RingFile::from_ring(&entry.ring, entry.modular.as_ref());
            let text = file.to_json();
            assert_eq!(text, RingFile::from_ring(&entry.ring, entry.modular.as_ref()).to_json());
            let back = load_str(&text).unwrap();
            assert_eq!(back.ring, entry.ring, "{}", entry.name);
            assert_eq!(back.modular, entry.modular, "{}", entry.name);
        }
    }
}
