//! Shared output formatting: reals at 12 significant digits, counts as
//! decimal strings.

use vinlab::Count;

/// A real at 12 significant digits.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.11e}")
}

/// A count as a decimal string (never a float).
pub fn fmt_count(c: &Count) -> String {
    c.0.to_string()
}

/// Outcome of a command: distinguishes assertion failures (exit 1) from
/// clean runs (exit 0). Hard errors travel as `vinlab::Error` (exit 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    AssertionFailed,
}

