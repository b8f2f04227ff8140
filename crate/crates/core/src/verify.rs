use serde::{Deserialize, Serialize};

/// A named residual together with the tolerance that governs it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub label: String,
    pub value: f64,
    pub tolerance: f64,
}

impl Residual {
    pub fn new(label: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            label: label.into(),
            value,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ResidualSet {
    pub entries: Vec<Residual>,
}

impl ResidualSet {
    pub fn push(&mut self, label: impl Into<String>, value: f64, tolerance: f64) {
        self.entries.push(Residual::new(label, value, tolerance));
    }

    pub fn extend(&mut self, other: ResidualSet) {
        self.entries.extend(other.entries);
    }

    pub fn get(&self, label: &str) -> Option<&Residual> {
        self.entries.iter().find(|r| r.label == label)
    }

    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(Residual::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Residual> {
        self.entries.iter().filter(|r| !r.passed())
    }

    /// Largest value relative to its tolerance.
    pub fn worst_ratio(&self) -> f64 {
        self.entries.iter().map(|r| r.value / r.tolerance).fold(0.0, f64::max)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Residual> {
        self.entries.iter()
    }
}
