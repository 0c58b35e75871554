use crate::error::{Error, Result};

/// Numerical thresholds shared by construction and verification.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceConfig {
    /// Relative gap under which eigenvalues count as equal.
    pub eps_eq: f64,
    /// Allowed spectrum error of constructed matrices, relative to `max(1, |λ|_max)`.
    pub eps_spec: f64,
    /// Relative singular-value cutoff for ranks and null spaces.
    pub eps_rank: f64,
    /// Bound on the normalized symplectic pairing of fiber tangent vectors.
    pub eps_iso: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            eps_eq: 1e-8,
            eps_spec: 1e-10,
            eps_rank: 1e-7,
            eps_iso: 1e-8,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let all = [self.eps_eq, self.eps_spec, self.eps_rank, self.eps_iso];
        if all.iter().all(|x| x.is_finite() && *x > 0.0) && self.eps_rank > self.eps_spec {
            Ok(())
        } else {
            Err(Error::InvalidTolerance)
        }
    }

    /// Copy with `eps_rank` multiplied by `factor`.
    pub fn with_rank_scaled(&self, factor: f64) -> Self {
        Self {
            eps_rank: self.eps_rank * factor,
            ..*self
        }
    }
}
