use std::fmt;

use super::ValidationError;
use crate::model::Degree;

/// Which sources are trusted for a query, and how the degrees of the facts
/// behind an answer combine into one degree.
pub trait TrustPolicy: fmt::Debug + Send + Sync {
    /// `cond(tau_in, tau)`: is a source of degree `tau` trusted?
    fn admits(&self, tau_in: Degree, tau: Degree) -> bool;

    /// `f` over a non-empty multiset of degrees; `None` on an empty one.
    fn aggregate(&self, degrees: &[Degree]) -> Option<Degree>;
}

/// Sources with `tau >= tau_in` are trusted; degrees combine by minimum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MinPolicy;

impl TrustPolicy for MinPolicy {
    fn admits(&self, tau_in: Degree, tau: Degree) -> bool {
        tau >= tau_in
    }

    fn aggregate(&self, degrees: &[Degree]) -> Option<Degree> {
        degrees.iter().copied().min()
    }
}

/// The default aggregation (minimum).
pub fn aggregate_confidence(degrees: &[Degree]) -> Result<Degree, ValidationError> {
    MinPolicy
        .aggregate(degrees)
        .ok_or(ValidationError::EmptyDegreeSet)
}
