//! Residual classification and the JSON report surface.
//!
//! Float results are never compared with `==`. A residual norm is put in
//! one of three bands relative to its input scale: below `1e-9` it counts
//! as zero, above `1e-6` as nonzero, and anything in between is reported
//! as indeterminate rather than silently resolved either way. Exact-mode
//! results bypass the bands.

use serde::Serialize;

/// Relative zero band for float residual norms.
pub const ZERO_BAND: f64 = 1e-9;
/// Relative nonzero band.
pub const NONZERO_BAND: f64 = 1e-6;
/// Absolute floor below which any residual is zero regardless of scale.
pub const ABS_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Zero,
    Nonzero,
    Indeterminate,
}

/// Two-band classification of a float residual norm against the largest
/// input coefficient magnitude.
pub fn classify(norm: f64, scale: f64) -> Status {
    let zero = (ZERO_BAND * (1.0 + scale)).max(ABS_FLOOR);
    let nonzero = NONZERO_BAND * (1.0 + scale);
    if norm <= zero {
        Status::Zero
    } else if norm >= nonzero {
        Status::Nonzero
    } else {
        Status::Indeterminate
    }
}

/// Exact-mode status: zero or nonzero, never indeterminate.
pub fn classify_exact(is_zero: bool) -> Status {
    if is_zero {
        Status::Zero
    } else {
        Status::Nonzero
    }
}

/// Tolerance for float equality checks: relative `1e-9` against the
/// input scale with the absolute floor.
pub fn close_tol(scale: f64) -> f64 {
    (ZERO_BAND * scale).max(ABS_FLOOR)
}

pub fn approx_zero(value: f64, scale: f64) -> bool {
    value.abs() <= close_tol(scale.max(1.0))
}

/// One named residual or check in a report.
#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub id: String,
    pub statement: String,
    /// Residual value or defect as text; exact zeros print as "0".
    pub value: String,
    pub status: Status,
    /// Pass verdict for gating entries; informational entries omit it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

impl Entry {
    pub fn gating(id: &str, statement: &str, value: String, status: Status, pass: bool) -> Self {
        Entry { id: id.into(), statement: statement.into(), value, status, pass: Some(pass) }
    }

    pub fn info(id: &str, statement: &str, value: String, status: Status) -> Self {
        Entry { id: id.into(), statement: statement.into(), value, status, pass: None }
    }
}

/// Formats a residual value: exact zeros as "0", floats in scientific
/// notation with a fixed width so reports are byte-stable.
pub fn fmt_value(exact_zero: bool, norm: f64) -> String {
    if exact_zero {
        "0".into()
    } else {
        format!("{norm:.6e}")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    pub entries: Vec<Entry>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str, mode: &str) -> Self {
        Report {
            schema: 1,
            command: command.into(),
            mode: mode.into(),
            seed: None,
            samples: None,
            entries: Vec::new(),
            pass: true,
        }
    }

    pub fn push(&mut self, entry: Entry) {
        if let Some(false) = entry.pass {
            self.pass = false;
        }
        self.entries.push(entry);
    }

    /// Deterministic serialization: field order is fixed by the struct
    /// layout and no timestamps or environment data are recorded.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bands_are_ordered_and_scaled() {
        assert_eq!(classify(0.0, 1.0), Status::Zero);
        assert_eq!(classify(1e-11, 0.0), Status::Zero);
        assert_eq!(classify(1e-3, 1.0), Status::Nonzero);
        assert_eq!(classify(1e-8, 1.0), Status::Indeterminate);
        // Large inputs widen both bands.
        assert_eq!(classify(1e-4, 1e5), Status::Zero);
    }

    #[test]
    fn report_pass_tracks_gating_entries_only() {
        let mut r = Report::new("t", "exact");
        r.push(Entry::info("a", "s", "1".into(), Status::Nonzero));
        assert!(r.pass);
        r.push(Entry::gating("b", "s", "0".into(), Status::Zero, true));
        assert!(r.pass);
        r.push(Entry::gating("c", "s", "1".into(), Status::Nonzero, false));
        assert!(!r.pass);
        let json = r.to_json();
        assert_eq!(json, r.to_json());
        assert!(json.contains("\"schema\": 1"));
    }
}
