use serde::Serialize;

use crate::tol::EQ_TOL;

/// Outcome of checking one inequality (or two-sided chain, or identity)
/// on a concrete input.
///
/// Slack is normalised by `1 + |bound|` so the same tolerance applies across
/// scales. `violation` is the largest normalised amount by which any leg of
/// the check fails; it is zero when every leg holds exactly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Middle term of a two-sided chain `lhs <= middle <= rhs`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub middle: Option<f64>,
    /// Smallest raw slack over all legs; negative when a leg is violated.
    pub gap: f64,
    pub violation: f64,
    pub pass: bool,
    pub equality: bool,
    pub tolerance: f64,
}

fn normalized(slack: f64, bound: f64) -> f64 {
    slack / (1.0 + bound.abs())
}

impl BoundReport {
    /// `lhs <= rhs`.
    pub fn le(label: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let gap = rhs - lhs;
        let rel = normalized(gap, rhs);
        let violation = (-rel).max(0.0);
        Self {
            label: label.into(),
            lhs,
            rhs,
            middle: None,
            gap,
            violation,
            pass: violation <= tolerance,
            equality: rel.abs() <= EQ_TOL,
            tolerance,
        }
    }

    /// `lhs >= rhs`, stored as the report of `rhs <= lhs` with sides kept
    /// in the caller's order.
    pub fn ge(label: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let gap = lhs - rhs;
        let rel = normalized(gap, rhs);
        let violation = (-rel).max(0.0);
        Self {
            label: label.into(),
            lhs,
            rhs,
            middle: None,
            gap,
            violation,
            pass: violation <= tolerance,
            equality: rel.abs() <= EQ_TOL,
            tolerance,
        }
    }

    /// `lower <= middle <= upper`. Equality is flagged when either leg is tight.
    pub fn chain(label: impl Into<String>, lower: f64, middle: f64, upper: f64, tolerance: f64) -> Self {
        let low_gap = middle - lower;
        let high_gap = upper - middle;
        let low_rel = normalized(low_gap, lower);
        let high_rel = normalized(high_gap, upper);
        let violation = (-low_rel).max(-high_rel).max(0.0);
        Self {
            label: label.into(),
            lhs: lower,
            rhs: upper,
            middle: Some(middle),
            gap: low_gap.min(high_gap),
            violation,
            pass: violation <= tolerance,
            equality: low_rel.abs() <= EQ_TOL || high_rel.abs() <= EQ_TOL,
            tolerance,
        }
    }

    /// `lhs == rhs` up to tolerance, for identities checked numerically.
    pub fn identity(label: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let gap = -(lhs - rhs).abs();
        let violation = normalized(-gap, rhs);
        Self {
            label: label.into(),
            lhs,
            rhs,
            middle: None,
            gap,
            violation,
            pass: violation <= tolerance,
            equality: violation <= EQ_TOL,
            tolerance,
        }
    }

    /// Replaces the slack-based equality flag with a structural one.
    pub fn with_equality(mut self, equality: bool) -> Self {
        self.equality = equality;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn le_reports_normalised_violation() {
        let r = BoundReport::le("x", 3.0, 1.0, 1e-8);
        assert!(!r.pass);
        assert_eq!(r.gap, -2.0);
        assert_eq!(r.violation, 1.0);
        let ok = BoundReport::le("x", 1.0, 3.0, 1e-8);
        assert!(ok.pass && !ok.equality && ok.violation == 0.0);
    }

    #[test]
    fn chain_flags_tight_leg() {
        let r = BoundReport::chain("c", 0.0, 0.0, 4.0, 1e-8);
        assert!(r.pass && r.equality);
        assert_eq!(r.middle, Some(0.0));
        let bad = BoundReport::chain("c", 0.0, 5.0, 4.0, 1e-8);
        assert!(!bad.pass);
        assert!((bad.violation - 0.2).abs() < 1e-15);
    }

    #[test]
    fn identity_is_two_sided() {
        assert!(BoundReport::identity("i", 1.0 + 1e-12, 1.0, 1e-10).pass);
        assert!(!BoundReport::identity("i", 1.0 - 1e-6, 1.0, 1e-10).pass);
    }
}
