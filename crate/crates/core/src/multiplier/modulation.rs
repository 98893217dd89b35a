//! Modulation-space probe for phase-space functions: the ambiguity function
//! of `F` against a Gaussian window on the doubled phase space.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dft::{transpose_square, CenteredDft, Roots};
use crate::error::{QhaError, Result};
use crate::grid::PhaseFunction;

/// Largest grid on which the probe is allowed.
pub const MAX_PROBE_N: usize = 48;

/// `sqrt(2) exp(-pi |z|^2)` on the grid of `f`.
fn window(f: &PhaseFunction) -> PhaseFunction {
    PhaseFunction::from_real_fn(&f.grid, |x, xi| 2f64.sqrt() * (-PI * (x * x + xi * xi)).exp())
}

/// Ambiguity slice `A(F, Phi0)(X, .)` for a fixed shift `X = (s1, s2)` in
/// lattice steps, over all `Xi` on the reciprocal lattice.
fn slice(
    f: &PhaseFunction,
    phi: &PhaseFunction,
    dft: &CenteredDft,
    roots: &Roots,
    s1: i64,
    s2: i64,
) -> Vec<Complex64> {
    let n = f.n();
    let c = (n / 2) as i64;
    let m = n as i64;
    let mut buf = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        let sj = (j as i64 - s1).rem_euclid(m) as usize;
        for k in 0..n {
            let sk = (k as i64 - s2).rem_euclid(m) as usize;
            buf[j * n + k] = f.values[j * n + k] * phi.values[sj * n + sk].conj();
        }
    }
    dft.forward_rows(&mut buf);
    transpose_square(&mut buf, n);
    dft.forward_rows(&mut buf);
    transpose_square(&mut buf, n);
    let cell = f.grid.cell_area();
    for b1 in 0..n {
        for b2 in 0..n {
            let t1 = b1 as i64 - c;
            let t2 = b2 as i64 - c;
            buf[b1 * n + b2] *= roots.half(s1 * t1 + s2 * t2) * cell;
        }
    }
    buf
}

/// `sup_Xi || A(F, Phi0)(., Xi) ||_{L^q_X}`, a discrete `M^{q, inf}` probe.
pub fn modulation_probe(f: &PhaseFunction, q: f64) -> Result<f64> {
    let n = f.n();
    if n > MAX_PROBE_N {
        return Err(QhaError::Resolution(format!(
            "modulation probe needs n <= {MAX_PROBE_N}, got {n}"
        )));
    }
    if q.is_nan() || q < 1.0 {
        return Err(QhaError::InvalidExponent(format!("q = {q} must lie in [1, inf]")));
    }
    let c = (n / 2) as i64;
    let phi = window(f);
    let dft = CenteredDft::new(n);
    let roots = Roots::new(n);
    let cell = f.grid.cell_area();
    let partial: Vec<Vec<f64>> = (0..n * n)
        .into_par_iter()
        .map(|a| {
            let s1 = (a / n) as i64 - c;
            let s2 = (a % n) as i64 - c;
            let sl = slice(f, &phi, &dft, &roots, s1, s2);
            if q.is_infinite() {
                sl.iter().map(|v| v.norm()).collect()
            } else {
                sl.iter().map(|v| v.norm().powf(q)).collect()
            }
        })
        .collect();
    let mut acc = vec![0.0f64; n * n];
    for row in &partial {
        for (a, v) in acc.iter_mut().zip(row) {
            if q.is_infinite() {
                *a = a.max(*v);
            } else {
                *a += v;
            }
        }
    }
    let best = acc.into_iter().fold(0.0, f64::max);
    Ok(if q.is_infinite() { best } else { (best * cell).powf(1.0 / q) })
}

/// Direct sum `sum_z F(z) conj(rho(X, Xi) Phi0 (z)) * cell_area` at one point,
/// with `X` and `Xi` given in lattice steps.
pub fn modulation_point_oracle(f: &PhaseFunction, x: (i64, i64), xi: (i64, i64)) -> Complex64 {
    let n = f.n();
    let c = (n / 2) as i64;
    let m = n as i64;
    let phi = window(f);
    let nf = n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        for k in 0..n {
            let u = j as i64 - c;
            let v = k as i64 - c;
            let sj = (j as i64 - x.0).rem_euclid(m) as usize;
            let sk = (k as i64 - x.1).rem_euclid(m) as usize;
            let arg = -PI * ((x.0 * xi.0 + x.1 * xi.1) as f64) / nf
                + 2.0 * PI * ((xi.0 * u + xi.1 * v) as f64) / nf;
            let shifted = Complex64::from_polar(1.0, arg) * phi.values[sj * n + sk];
            acc += f.values[j * n + k] * shifted.conj();
        }
    }
    acc * f.grid.cell_area()
}
