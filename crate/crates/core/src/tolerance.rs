use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds for positivity, equality and projection snapping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub eps_rel: f64,
    pub eps_abs: f64,
    /// Eigenvalue/singular value threshold used for ranks, ceilings and clustering.
    pub snap_eps: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            eps_rel: 1e-9,
            eps_abs: 1e-12,
            snap_eps: 1e-7,
        }
    }
}

impl ToleranceConfig {
    pub fn new(eps_rel: f64, eps_abs: f64, snap_eps: f64) -> Result<Self> {
        let cfg = ToleranceConfig {
            eps_rel,
            eps_abs,
            snap_eps,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let finite_pos = |x: f64| x.is_finite() && x > 0.0;
        if !(finite_pos(self.eps_rel) && finite_pos(self.eps_abs) && finite_pos(self.snap_eps)) {
            return Err(Error::InvalidTolerance(
                "all thresholds must be finite and strictly positive".into(),
            ));
        }
        if self.snap_eps < self.eps_rel {
            return Err(Error::InvalidTolerance("snap_eps must be at least eps_rel".into()));
        }
        Ok(())
    }

    /// Same configuration with a different relative tolerance; `snap_eps` is raised if needed.
    pub fn with_eps_rel(mut self, eps_rel: f64) -> Self {
        self.eps_rel = eps_rel;
        if self.snap_eps < eps_rel {
            self.snap_eps = eps_rel;
        }
        self
    }

    /// `eps_abs + eps_rel * scale`, the equality threshold at a given magnitude.
    #[inline]
    pub fn at_scale(&self, scale: f64) -> f64 {
        self.eps_abs + self.eps_rel * scale
    }
}
