//! Three-valued search results.

use serde::Serialize;

use crate::lattice::DigitalImage;

/// Limits a search ran under, and how much it explored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Bounds {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    /// Number of maps (or candidates) visited.
    pub explored: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Refutation {
    /// The whole reachable component was enumerated without meeting the target.
    ComponentExhausted { explored: usize },
    /// A finite candidate space was exhausted.
    SearchExhausted { explored: usize },
    CardinalityMismatch { left: usize, right: usize },
    ComponentCountMismatch { left: usize, right: usize },
    Obstruction(Obstruction),
}

/// A named certificate that rules something out without search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub name: String,
    pub detail: String,
    /// Winding numbers that disagree, when the obstruction is a winding one.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub windings: Vec<i64>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum Outcome<W> {
    Yes { witness: W },
    No { refutation: Refutation },
    Unknown { note: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict<W> {
    #[serde(flatten)]
    pub outcome: Outcome<W>,
    pub bounds: Bounds,
}

impl<W> Verdict<W> {
    pub fn yes(witness: W, bounds: Bounds) -> Self {
        Verdict { outcome: Outcome::Yes { witness }, bounds }
    }

    pub fn no(refutation: Refutation, bounds: Bounds) -> Self {
        Verdict { outcome: Outcome::No { refutation }, bounds }
    }

    pub fn unknown(note: impl Into<String>, bounds: Bounds) -> Self {
        Verdict { outcome: Outcome::Unknown { note: note.into() }, bounds }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self.outcome, Outcome::Yes { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self.outcome, Outcome::No { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self.outcome, Outcome::Unknown { .. })
    }

    pub fn witness(&self) -> Option<&W> {
        match &self.outcome {
            Outcome::Yes { witness } => Some(witness),
            _ => None,
        }
    }

    pub fn into_witness(self) -> Option<W> {
        match self.outcome {
            Outcome::Yes { witness } => Some(witness),
            _ => None,
        }
    }

    pub fn refutation(&self) -> Option<&Refutation> {
        match &self.outcome {
            Outcome::No { refutation } => Some(refutation),
            _ => None,
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        let outcome = match self.outcome {
            Outcome::Yes { witness } => Outcome::Yes { witness: f(witness) },
            Outcome::No { refutation } => Outcome::No { refutation },
            Outcome::Unknown { note } => Outcome::Unknown { note },
        };
        Verdict { outcome, bounds: self.bounds }
    }

    /// CLI exit code: 0 for Yes, 1 for No, 2 for Unknown.
    pub fn exit_code(&self) -> i32 {
        match self.outcome {
            Outcome::Yes { .. } => 0,
            Outcome::No { .. } => 1,
            Outcome::Unknown { .. } => 2,
        }
    }
}

/// A pluggable lower-bound argument: proves that `subset` cannot be deformed
/// to a point inside `space`, under any subdivision.
pub trait ContractibilityObstruction: Sync {
    fn name(&self) -> &'static str;

    fn refute(&self, subset: &DigitalImage, space: &DigitalImage) -> Option<Obstruction>;
}
