//! Classical symplectic multipliers `T_m` and Fourier-Wigner multipliers
//! `T_m` acting on operators.

use num_complex::Complex64;

use crate::error::{QhaError, Result};
use crate::fourier_wigner::{fw_inverse, fw_transform};
use crate::grid::{check_phase, PhaseFunction, PhaseGrid};
use crate::operator::OperatorMatrix;
use crate::tf::symplectic_ft;

pub mod estimate;
pub mod experiments;
pub mod modulation;
pub mod symbols;

pub use estimate::{estimate_multiplier_norm, Budget, Method, NormEstimate, Side};
pub use modulation::{modulation_probe, modulation_point_oracle};
pub use symbols::{
    bochner_riesz, bump_family, constant, gaussian_symbol, gaussian_window_symbol, sine_symbol,
    smooth_bump, tau_spreading,
};

/// A bounded symbol sampled on the phase-space lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierSymbol {
    pub name: String,
    pub table: PhaseFunction,
    pub sup_norm: f64,
    /// Radius `R` (phase-space units) outside of which the table vanishes.
    pub compact_support: Option<f64>,
}

impl MultiplierSymbol {
    pub fn new(name: impl Into<String>, table: PhaseFunction, compact_support: Option<f64>) -> Result<Self> {
        if let Some(r) = compact_support {
            if !(r > 0.0) {
                return Err(QhaError::InvalidParameter(format!("support radius {r} must be positive")));
            }
            let g = &table.grid;
            let n = g.n();
            for jx in 0..n {
                for jxi in 0..n {
                    let (x, xi) = g.point(jx, jxi);
                    if (x * x + xi * xi).sqrt() > r && table.at(jx, jxi).norm() != 0.0 {
                        return Err(QhaError::InvalidParameter(format!(
                            "symbol is nonzero at |z| = {} beyond its support radius {r}",
                            (x * x + xi * xi).sqrt()
                        )));
                    }
                }
            }
        }
        let sup_norm = table.max_abs();
        Ok(Self {
            name: name.into(),
            table,
            sup_norm,
            compact_support,
        })
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.table.grid
    }

    /// Value at the origin of the lattice.
    pub fn at_origin(&self) -> Complex64 {
        let c = self.grid().n() / 2;
        self.table.at(c, c)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            name: format!("{c}*{}", self.name),
            table: self.table.scale(Complex64::new(c, 0.0)),
            sup_norm: self.sup_norm * c.abs(),
            compact_support: self.compact_support,
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            name: format!("conj({})", self.name),
            table: self.table.conj(),
            sup_norm: self.sup_norm,
            compact_support: self.compact_support,
        }
    }

    /// `z -> m(-z)`.
    pub fn reflect(&self) -> Self {
        Self {
            name: format!("{}(-z)", self.name),
            table: self.table.reflect(),
            sup_norm: self.sup_norm,
            compact_support: self.compact_support,
        }
    }

    pub fn product(&self, other: &MultiplierSymbol) -> Result<Self> {
        let table = self.table.mul(&other.table)?;
        let support = match (self.compact_support, other.compact_support) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let sup_norm = table.max_abs();
        Ok(Self {
            name: format!("{}*{}", self.name, other.name),
            table,
            sup_norm,
            compact_support: support,
        })
    }
}

/// `T_m Psi = F_sigma(m F_sigma Psi)`.
pub fn classical_multiplier(m: &MultiplierSymbol, psi: &PhaseFunction) -> Result<PhaseFunction> {
    check_phase(m.grid(), &psi.grid)?;
    Ok(symplectic_ft(&m.table.mul(&symplectic_ft(psi))?))
}

/// `T_m T = F_W^{-1}(m F_W T)`.
pub fn fw_multiplier(m: &MultiplierSymbol, t: &OperatorMatrix) -> Result<OperatorMatrix> {
    check_phase(m.grid(), &PhaseGrid::new(t.grid.clone()))?;
    Ok(fw_inverse(&m.table.mul(&fw_transform(t))?))
}
