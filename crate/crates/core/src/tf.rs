//! Time-frequency shifts, ambiguity and Wigner tables, symplectic Fourier
//! transform.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dft::{transpose_square, CenteredDft, Roots};
use crate::error::Result;
use crate::grid::{check_line, GridFunction, PhaseFunction, PhaseGrid};

/// A lattice point `z = (x_{jx}, xi_{jxi})`.
///
/// Indices outside `0..n` are allowed and denote the unwrapped lattice point
/// with the same offset from the center; shifts by such points stay exact
/// members of the finite Heisenberg group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticePoint {
    pub jx: i64,
    pub jxi: i64,
}

impl LatticePoint {
    pub fn new(jx: i64, jxi: i64) -> Self {
        Self { jx, jxi }
    }

    /// The origin of an `n`-point grid.
    pub fn origin(n: usize) -> Self {
        let c = (n / 2) as i64;
        Self { jx: c, jxi: c }
    }

    /// Point with the given integer offsets from the origin.
    pub fn from_steps(n: usize, sx: i64, sxi: i64) -> Self {
        let c = (n / 2) as i64;
        Self {
            jx: sx + c,
            jxi: sxi + c,
        }
    }

    pub fn steps(&self, n: usize) -> (i64, i64) {
        let c = (n / 2) as i64;
        (self.jx - c, self.jxi - c)
    }

    pub fn neg(&self, n: usize) -> Self {
        let (sx, sxi) = self.steps(n);
        Self::from_steps(n, -sx, -sxi)
    }

    pub fn add(&self, other: &Self, n: usize) -> Self {
        let (a, b) = self.steps(n);
        let (c, d) = other.steps(n);
        Self::from_steps(n, a + c, b + d)
    }

    /// Same point with indices reduced into `0..n`.
    pub fn wrapped(&self, n: usize) -> Self {
        let m = n as i64;
        Self {
            jx: self.jx.rem_euclid(m),
            jxi: self.jxi.rem_euclid(m),
        }
    }

    pub fn coords(&self, grid: &PhaseGrid) -> (f64, f64) {
        let (sx, sxi) = self.steps(grid.n());
        (sx as f64 * grid.x.h(), sxi as f64 * grid.xi.h())
    }
}

/// `sigma((x, xi), (x', xi')) = x' xi - x xi'`.
pub fn symplectic_form(z: (f64, f64), zp: (f64, f64)) -> f64 {
    zp.0 * z.1 - z.0 * zp.1
}

/// `exp(i pi sigma(z, w))` evaluated exactly from integer lattice offsets.
pub fn symplectic_phase(n: usize, z: &LatticePoint, w: &LatticePoint) -> Complex64 {
    let roots = Roots::new(n);
    let (a, b) = z.steps(n);
    let (c, d) = w.steps(n);
    roots.half(c * b - a * d)
}

/// `(rho(z) f)(t) = exp(-pi i x xi) exp(2 pi i xi t) f(t - x)` with a circular
/// shift.
pub fn tf_shift(f: &GridFunction, z: LatticePoint) -> GridFunction {
    let roots = Roots::new(f.grid.n());
    tf_shift_with(&roots, f, z)
}

pub(crate) fn tf_shift_with(roots: &Roots, f: &GridFunction, z: LatticePoint) -> GridFunction {
    let n = f.grid.n();
    let c = (n / 2) as i64;
    let (sx, sxi) = z.steps(n);
    let global = roots.half(-sx * sxi);
    let values = (0..n)
        .map(|j| {
            let src = (j as i64 - sx).rem_euclid(n as i64) as usize;
            global * roots.half(2 * sxi * (j as i64 - c)) * f.values[src]
        })
        .collect();
    GridFunction {
        grid: f.grid.clone(),
        values,
    }
}

/// Cross-ambiguity `A(f, g)(z) = <f, rho(z) g>` on the full lattice.
pub fn ambiguity(f: &GridFunction, g: &GridFunction) -> Result<PhaseFunction> {
    check_line(&f.grid, &g.grid)?;
    let grid = PhaseGrid::new(f.grid.clone());
    let n = grid.n();
    let c = (n / 2) as i64;
    let h = f.grid.h();
    let dft = CenteredDft::new(n);
    let roots = Roots::new(n);
    let mut values = vec![Complex64::new(0.0, 0.0); n * n];
    values.par_chunks_mut(n).enumerate().for_each(|(a, row)| {
        let s = a as i64 - c;
        for (j, v) in row.iter_mut().enumerate() {
            let src = (j as i64 - s).rem_euclid(n as i64) as usize;
            *v = f.values[j] * g.values[src].conj();
        }
        dft.forward_rows(row);
        for (b, v) in row.iter_mut().enumerate() {
            *v *= roots.half(s * (b as i64 - c)) * h;
        }
    });
    PhaseFunction::new(grid, values)
}

/// Cross-Wigner distribution `W(f, g) = F_sigma A(f, g)`.
pub fn wigner(f: &GridFunction, g: &GridFunction) -> Result<PhaseFunction> {
    Ok(symplectic_ft(&ambiguity(f, g)?))
}

/// Symplectic Fourier transform
/// `F_sigma Psi(zeta) = sum_z Psi(z) exp(-2 pi i sigma(zeta, z)) * cell_area`.
pub fn symplectic_ft(psi: &PhaseFunction) -> PhaseFunction {
    let n = psi.n();
    let dft = CenteredDft::new(n);
    let mut values = psi.values.clone();
    dft.inverse_rows(&mut values);
    transpose_square(&mut values, n);
    dft.forward_rows(&mut values);
    let cell = psi.grid.cell_area();
    for v in values.iter_mut() {
        *v *= cell;
    }
    PhaseFunction {
        grid: psi.grid.clone(),
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{inner_product, LineGrid};

    #[test]
    fn symplectic_form_values() {
        assert_eq!(symplectic_form((1.0, 0.0), (0.0, 1.0)), -1.0);
        assert_eq!(symplectic_form((0.3, -1.2), (0.3, -1.2)), 0.0);
    }

    #[test]
    fn ambiguity_matches_inner_products() {
        let g = LineGrid::with_length(16, 4.0).unwrap();
        let f = GridFunction::from_fn(&g, |t| Complex64::new((-t * t).exp(), 0.3 * t));
        let k = GridFunction::from_fn(&g, |t| Complex64::new((-(t - 0.5).powi(2)).exp(), -0.1));
        let a = ambiguity(&f, &k).unwrap();
        for jx in 0..16 {
            for jxi in 0..16 {
                let z = LatticePoint::new(jx as i64, jxi as i64);
                let direct = inner_product(&f, &tf_shift(&k, z)).unwrap();
                assert!((direct - a.at(jx, jxi)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn lattice_point_arithmetic() {
        let z = LatticePoint::from_steps(8, 3, -2);
        assert_eq!(z.steps(8), (3, -2));
        assert_eq!(z.neg(8).steps(8), (-3, 2));
        assert_eq!(z.add(&z.neg(8), 8), LatticePoint::origin(8));
        assert_eq!(LatticePoint::new(-1, 9).wrapped(8), LatticePoint::new(7, 1));
    }
}
