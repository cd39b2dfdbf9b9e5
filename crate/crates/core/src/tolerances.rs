use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds shared by every check in the crate.
///
/// All values are relative: `tol_sym` to the ∞-norm of the matrix being
/// tested, `tol_eig` to the spectral radius (or largest singular value),
/// `tol_resid` to the norm of the quantity an identity is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tol_sym: f64,
    pub tol_j: f64,
    pub tol_eig: f64,
    pub tol_resid: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_sym: 1e-10,
            tol_j: 1e-9,
            tol_eig: 1e-8,
            tol_resid: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn new(tol_sym: f64, tol_j: f64, tol_eig: f64, tol_resid: f64) -> Result<Self> {
        let tol = Self {
            tol_sym,
            tol_j,
            tol_eig,
            tol_resid,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn with_tol_eig(mut self, tol_eig: f64) -> Result<Self> {
        self.tol_eig = tol_eig;
        self.validate()?;
        Ok(self)
    }

    pub fn with_tol_resid(mut self, tol_resid: f64) -> Result<Self> {
        self.tol_resid = tol_resid;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("tol_sym", self.tol_sym),
            ("tol_j", self.tol_j),
            ("tol_eig", self.tol_eig),
            ("tol_resid", self.tol_resid),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidTolerance { name, value });
            }
        }
        Ok(())
    }
}
