use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::Error;

/// Structural knowledge about the channel before any measurement.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PriorKind {
    /// Nothing assumed; row 0 is measured like any other row (it reads the trace).
    #[default]
    None,
    /// Row 0 is `e₀`.
    Cptp,
    /// CPTP and column 0 is `e₀`.
    Unital,
    /// Unital with a diagonal PTM.
    Pauli,
}

impl fmt::Display for PriorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PriorKind::None => "none",
            PriorKind::Cptp => "cptp",
            PriorKind::Unital => "unital",
            PriorKind::Pauli => "pauli",
        })
    }
}

impl FromStr for PriorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Self::None),
            "cptp" => Ok(Self::Cptp),
            "unital" => Ok(Self::Unital),
            "pauli" => Ok(Self::Pauli),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnownEntry {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

/// A prior: a structural kind plus individual entries fixed by a model.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Prior {
    pub kind: PriorKind,
    /// Entries known from an (incomplete) model of the channel.
    #[serde(default, with = "known_entries")]
    pub known: BTreeMap<(usize, usize), f64>,
    /// With a unital prior, still measure `(i, 0)` for validation.
    #[serde(default)]
    pub check_unitality: bool,
}

impl Prior {
    pub fn new(kind: PriorKind) -> Self {
        Self {
            kind,
            ..Self::default()
        }
    }

    pub fn none() -> Self {
        Self::default()
    }

    pub fn with_known(mut self, i: usize, j: usize, value: f64) -> Self {
        self.known.insert((i, j), value);
        self
    }

    pub fn is_unital(&self) -> bool {
        matches!(self.kind, PriorKind::Unital | PriorKind::Pauli)
    }

    /// Value of `Γ_ij` implied by the prior, if any.
    pub fn known_value(&self, i: usize, j: usize) -> Option<f64> {
        let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        if i == 0 && self.kind != PriorKind::None {
            return Some(delta(0, j));
        }
        if j == 0 && self.is_unital() {
            return Some(delta(i, 0));
        }
        if self.kind == PriorKind::Pauli && i != j {
            return Some(0.0);
        }
        self.known.get(&(i, j)).copied()
    }
}

mod known_entries {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<(usize, usize), f64>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let list: Vec<KnownEntry> = map
            .iter()
            .map(|(&(i, j), &value)| KnownEntry { i, j, value })
            .collect();
        list.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<(usize, usize), f64>, D::Error> {
        let list = Vec::<KnownEntry>::deserialize(d)?;
        Ok(list.into_iter().map(|e| ((e.i, e.j), e.value)).collect())
    }
}
