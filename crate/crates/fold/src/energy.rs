//! Arc-additive energy model.

use serde::{Deserialize, Serialize};

use rrfold_core::{ArcKind, SequencePair};

use crate::{Error, Result};

/// Energies (kcal/mol) of the three canonical pair families.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PairEnergies {
    pub gc: f64,
    pub au: f64,
    pub gu: f64,
}

impl Default for PairEnergies {
    fn default() -> Self {
        PairEnergies { gc: -3.0, au: -2.0, gu: -1.0 }
    }
}

impl PairEnergies {
    pub fn uniform(e: f64) -> Self {
        PairEnergies { gc: e, au: e, gu: e }
    }

    /// Energy of the pair `a`-`b`, or `None` when the bases cannot pair.
    pub fn get(&self, a: u8, b: u8) -> Option<f64> {
        match (a, b) {
            (b'G', b'C') | (b'C', b'G') => Some(self.gc),
            (b'A', b'U') | (b'U', b'A') => Some(self.au),
            (b'G', b'U') | (b'U', b'G') => Some(self.gu),
            _ => None,
        }
    }
}

/// Energy parameters, temperature and structural constraints.
///
/// The config file is TOML:
///
/// ```toml
/// rt = 0.6
/// theta = 3
/// stack_bonus = 0.0
/// max_len = 80
///
/// [interior]
/// gc = -3.0
/// au = -2.0
/// gu = -1.0
///
/// [exterior]
/// gc = -3.0
/// au = -2.0
/// gu = -1.0
/// ```
///
/// Every key is optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnergyModel {
    pub interior: PairEnergies,
    pub exterior: PairEnergies,
    /// Added once for every arc `(i, j)` whose neighbour `(i+1, j-1)` is an arc of the same kind.
    pub stack_bonus: f64,
    pub rt: f64,
    /// An interior arc with no paired vertex beneath it must enclose at least `theta` vertices.
    pub theta: usize,
    /// Cap on `n_R + n_S`.
    pub max_len: usize,
}

impl Default for EnergyModel {
    fn default() -> Self {
        EnergyModel {
            interior: PairEnergies::default(),
            exterior: PairEnergies::default(),
            stack_bonus: 0.0,
            rt: 0.6,
            theta: 3,
            max_len: 80,
        }
    }
}

impl EnergyModel {
    /// All arcs weigh zero, so every structure has Boltzmann weight one.
    pub fn zero() -> Self {
        EnergyModel {
            interior: PairEnergies::uniform(0.0),
            exterior: PairEnergies::uniform(0.0),
            ..Default::default()
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let model: EnergyModel = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        model.validate()?;
        Ok(model)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).unwrap_or_default()
    }

    pub fn validate(&self) -> Result<()> {
        let energies = [
            self.interior.gc,
            self.interior.au,
            self.interior.gu,
            self.exterior.gc,
            self.exterior.au,
            self.exterior.gu,
            self.stack_bonus,
        ];
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::Config("energies must be finite".into()));
        }
        if !(self.rt.is_finite() && self.rt > 0.0) {
            return Err(Error::Config("rt must be positive".into()));
        }
        Ok(())
    }

    pub fn check_length(&self, pair: &SequencePair) -> Result<()> {
        if pair.len() > self.max_len {
            return Err(Error::LengthCap { len: pair.len(), cap: self.max_len });
        }
        Ok(())
    }

    /// Energy of the bare arc `(i, j)` (linear coordinates), or `None` if not a valid pair.
    pub fn arc_energy(&self, pair: &SequencePair, i: usize, j: usize) -> Option<f64> {
        let table = match arc_kind(pair.r().len(), i, j) {
            ArcKind::Exterior => &self.exterior,
            _ => &self.interior,
        };
        table.get(pair.base(i), pair.base(j))
    }

    /// Total energy of a structure, including stacking bonuses. `None` if an arc cannot pair.
    pub fn structure_energy(&self, pair: &SequencePair, arcs: &[(usize, usize)]) -> Option<f64> {
        let n_r = pair.r().len();
        let mut total = 0.0;
        for &(i, j) in arcs {
            total += self.arc_energy(pair, i, j)?;
            if j > i + 2
                && arcs.contains(&(i + 1, j - 1))
                && arc_kind(n_r, i, j) == arc_kind(n_r, i + 1, j - 1)
            {
                total += self.stack_bonus;
            }
        }
        Some(total)
    }
}

/// Kind of the linear arc `(i, j)` over an R strand of length `n_r`.
pub fn arc_kind(n_r: usize, i: usize, j: usize) -> ArcKind {
    if j <= n_r {
        ArcKind::InteriorR
    } else if i > n_r {
        ArcKind::InteriorS
    } else {
        ArcKind::Exterior
    }
}
