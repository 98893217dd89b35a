//! Named symbol families.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::MultiplierSymbol;
use crate::error::{QhaError, Result};
use crate::grid::{PhaseFunction, PhaseGrid};

/// `max(1 - |z|^2, 0)^delta`, supported in the unit ball.
pub fn bochner_riesz(grid: &PhaseGrid, delta: f64) -> Result<MultiplierSymbol> {
    if !(delta > 0.0) {
        return Err(QhaError::InvalidParameter(format!("Bochner-Riesz order {delta} must be positive")));
    }
    let table = PhaseFunction::from_real_fn(grid, |x, xi| {
        let r2 = x * x + xi * xi;
        if r2 < 1.0 {
            (1.0 - r2).powf(delta)
        } else {
            0.0
        }
    });
    MultiplierSymbol::new(format!("bochner_riesz({delta})"), table, Some(1.0))
}

/// Dilated Gaussian `eps^{-2} exp(-pi |z|^2 / eps^2)`, unit integral.
pub fn gaussian_symbol(grid: &PhaseGrid, eps: f64) -> Result<MultiplierSymbol> {
    if !(eps > 0.0) {
        return Err(QhaError::InvalidParameter(format!("eps = {eps} must be positive")));
    }
    let e2 = eps * eps;
    let table = PhaseFunction::from_real_fn(grid, |x, xi| (-PI * (x * x + xi * xi) / e2).exp() / e2);
    MultiplierSymbol::new(format!("gamma({eps})"), table, None)
}

/// `exp(-pi a |z|^2)`, peak value one.
pub fn gaussian_window_symbol(grid: &PhaseGrid, a: f64) -> Result<MultiplierSymbol> {
    if !(a > 0.0) {
        return Err(QhaError::InvalidParameter(format!("Gaussian rate {a} must be positive")));
    }
    let table = PhaseFunction::from_real_fn(grid, |x, xi| (-PI * a * (x * x + xi * xi)).exp());
    MultiplierSymbol::new(format!("gauss({a})"), table, None)
}

/// `sin(pi |z|^2)`.
pub fn sine_symbol(grid: &PhaseGrid) -> MultiplierSymbol {
    let table = PhaseFunction::from_real_fn(grid, |x, xi| (PI * (x * x + xi * xi)).sin());
    MultiplierSymbol::new("sine", table, None).expect("unannotated")
}

/// `(1/2i)(e^{i pi/2} e^{-i pi |z|^2} - e^{-i pi/2} e^{i pi |z|^2})`, which is
/// `cos(pi |z|^2)` in one dimension.
pub fn tau_spreading(grid: &PhaseGrid) -> PhaseFunction {
    let half = Complex64::from_polar(1.0, PI / 2.0);
    let denom = Complex64::new(0.0, 2.0);
    PhaseFunction::from_fn(grid, |x, xi| {
        let r2 = x * x + xi * xi;
        (half * Complex64::from_polar(1.0, -PI * r2) - half.conj() * Complex64::from_polar(1.0, PI * r2)) / denom
    })
}

pub fn constant(grid: &PhaseGrid, value: f64) -> MultiplierSymbol {
    MultiplierSymbol::new(
        format!("const({value})"),
        PhaseFunction::constant(grid, Complex64::new(value, 0.0)),
        None,
    )
    .expect("unannotated")
}

/// `exp(1 - 1 / (1 - |z - c|^2 / r^2))` inside the ball `|z - c| < r`.
///
/// The support annotation is `|c| + r`.
pub fn smooth_bump(grid: &PhaseGrid, center: (f64, f64), radius: f64) -> Result<MultiplierSymbol> {
    if !(radius > 0.0) {
        return Err(QhaError::InvalidParameter(format!("bump radius {radius} must be positive")));
    }
    let table = PhaseFunction::from_real_fn(grid, |x, xi| {
        let dx = x - center.0;
        let dy = xi - center.1;
        let u = (dx * dx + dy * dy) / (radius * radius);
        if u < 1.0 {
            (1.0 - 1.0 / (1.0 - u)).exp()
        } else {
            0.0
        }
    });
    let support = (center.0 * center.0 + center.1 * center.1).sqrt() + radius;
    MultiplierSymbol::new(format!("bump({:.2},{:.2};{radius})", center.0, center.1), table, Some(support))
}

/// Five smooth bumps, all supported in the ball of radius `support`.
pub fn bump_family(grid: &PhaseGrid, support: f64) -> Result<Vec<MultiplierSymbol>> {
    let r = support;
    let specs = [
        ((0.0, 0.0), r),
        ((0.0, 0.0), 0.5 * r),
        ((0.25 * r, 0.0), 0.75 * r),
        ((0.0, -0.4 * r), 0.6 * r),
        ((0.3 * r, 0.3 * r), 0.5 * r),
    ];
    let mut out = Vec::with_capacity(specs.len());
    for (c, rad) in specs {
        let mut b = smooth_bump(grid, c, rad)?;
        b.compact_support = Some(r);
        out.push(b);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> PhaseGrid {
        PhaseGrid::with_length(64, 8.0).unwrap()
    }

    #[test]
    fn bochner_riesz_values() {
        let g = grid();
        let m = bochner_riesz(&g, 1.0).unwrap();
        assert_eq!(m.at_origin().re, 1.0);
        assert!(bochner_riesz(&g, 0.0).is_err());
        for jx in 0..64 {
            for jxi in 0..64 {
                let (x, xi) = g.point(jx, jxi);
                let r2 = x * x + xi * xi;
                let v = m.table.at(jx, jxi).re;
                if r2 >= 1.0 {
                    assert_eq!(v, 0.0);
                } else {
                    assert!((v - (1.0 - r2)).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn tau_is_cosine() {
        let g = grid();
        let t = tau_spreading(&g);
        let c = PhaseFunction::from_real_fn(&g, |x, xi| (PI * (x * x + xi * xi)).cos());
        assert!(t.max_abs_diff(&c) < 1e-14);
        assert!(t.max_abs() <= 1.0 + 1e-15);
    }

    #[test]
    fn gaussian_symbol_peak() {
        let g = grid();
        assert!((gaussian_symbol(&g, 1.0).unwrap().at_origin().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bump_family_shares_support() {
        let g = grid();
        for b in bump_family(&g, 2.0).unwrap() {
            assert_eq!(b.compact_support, Some(2.0));
            assert!(b.sup_norm > 0.2 && b.sup_norm <= 1.0);
        }
    }
}
