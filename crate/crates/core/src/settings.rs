use crate::digitsys::DEFAULT_ENUM_CAP;

/// Numerical thresholds shared by the evaluation engines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    /// Maximum number of integers visited by one direct enumeration.
    pub enum_cap: u64,
    /// Smallest admissible `|b^(s+m) - N|` before a recurrence division is
    /// treated as a pole.
    pub delta_pole: f64,
    /// Smallest distance from `s` to the candidate-pole lattice at which the
    /// continuation engines evaluate directly.
    pub delta_eval: f64,
    /// Direct summation requires `Re s >= s₀ + direct_margin`.
    pub direct_margin: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            enum_cap: DEFAULT_ENUM_CAP,
            delta_pole: 1e-8,
            delta_eval: 1e-6,
            direct_margin: 0.05,
        }
    }
}

impl Settings {
    pub fn with_enum_cap(mut self, cap: u64) -> Self {
        self.enum_cap = cap;
        self
    }
}
