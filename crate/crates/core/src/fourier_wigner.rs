//! Fourier-Wigner transform of operators and its inverse.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dft::{CenteredDft, Roots};
use crate::error::{QhaError, Result};
use crate::grid::{function_norm, lorentz_norm, PhaseFunction, PhaseGrid};
use crate::operator::{compose, schatten_norm, shift_operator, trace, OperatorMatrix};
use crate::report::ExperimentReport;
use crate::tf::LatticePoint;

/// `F_W(T)(z) = tr(T rho(-z))` on the whole lattice.
///
/// Row `x = s h` is one FFT of the `s`-th circular diagonal of the kernel:
/// `F_W(T)(x, xi) = exp(-pi i x xi) h sum_m K(t_m + x, t_m) exp(-2 pi i xi t_m)`.
pub fn fw_transform(t: &OperatorMatrix) -> PhaseFunction {
    let n = t.n();
    let c = (n / 2) as i64;
    let h = t.grid.h();
    let dft = CenteredDft::new(n);
    let roots = Roots::new(n);
    let mut values = vec![Complex64::new(0.0, 0.0); n * n];
    values.par_chunks_mut(n).enumerate().for_each(|(a, row)| {
        let s = a as i64 - c;
        for (m, v) in row.iter_mut().enumerate() {
            let r = (m as i64 + s).rem_euclid(n as i64) as usize;
            *v = t.kernel[r * n + m];
        }
        dft.forward_rows(row);
        for (b, v) in row.iter_mut().enumerate() {
            *v *= roots.half(-s * (b as i64 - c)) * h;
        }
    });
    PhaseFunction {
        grid: PhaseGrid::new(t.grid.clone()),
        values,
    }
}

/// `tr(T rho(-z))` with `rho(-z)` built as an explicit matrix.
pub fn fw_point_oracle(t: &OperatorMatrix, z: LatticePoint) -> Complex64 {
    let r = shift_operator(&t.grid, z.neg(t.n()));
    trace(&compose(t, &r).expect("same grid"))
}

/// Integrated Schrodinger representation `sum_z F(z) rho(z) * cell_area`.
pub fn fw_inverse(f: &PhaseFunction) -> OperatorMatrix {
    let n = f.n();
    let c = (n / 2) as i64;
    let dxi = f.grid.xi.h();
    let dft = CenteredDft::new(n);
    let roots = Roots::new(n);
    let diagonals: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|a| {
            let s = a as i64 - c;
            let mut row: Vec<Complex64> = (0..n)
                .map(|b| f.values[a * n + b] * roots.half(s * (b as i64 - c)))
                .collect();
            dft.inverse_rows(&mut row);
            row
        })
        .collect();
    let mut kernel = vec![Complex64::new(0.0, 0.0); n * n];
    for (a, row) in diagonals.iter().enumerate() {
        let s = a as i64 - c;
        for (m, v) in row.iter().enumerate() {
            let r = (m as i64 + s).rem_euclid(n as i64) as usize;
            kernel[r * n + m] = v * dxi;
        }
    }
    OperatorMatrix {
        grid: f.grid.x.clone(),
        kernel,
    }
}

fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// Forward and reverse Hausdorff-Young ratios over an ensemble.
///
/// Forward: `||F_W T||_{L^{p', p}} / ||T||_{S^p}` (sup norm when `p = 1`).
/// Reverse: `||F_W^{-1} F||_{S^{p'}} / ||F||_{L^{p, p'}}` with `F = F_W T`
/// (`L^1` norm in the denominator when `p = 1`).
pub fn hausdorff_young_report(ensemble: &[OperatorMatrix], p: f64) -> Result<ExperimentReport> {
    if ensemble.is_empty() {
        return Err(QhaError::EmptyEnsemble);
    }
    if !(1.0..=2.0).contains(&p) {
        return Err(QhaError::InvalidExponent(format!("Hausdorff-Young needs p in [1, 2], got {p}")));
    }
    let pp = conjugate_exponent(p);
    let mut rep = ExperimentReport::new("hausdorff_young")
        .param("p", p)
        .param("ensemble_size", ensemble.len());
    let rows: Vec<Result<(f64, f64)>> = ensemble
        .par_iter()
        .map(|t| {
            let f = fw_transform(t);
            let st = schatten_norm(t, p)?;
            let forward_num = if p == 1.0 { function_norm(&f, f64::INFINITY)? } else { lorentz_norm(&f, pp, p)? };
            let back = fw_inverse(&f);
            let rev_num = schatten_norm(&back, pp)?;
            let rev_den = if p == 1.0 { function_norm(&f, 1.0)? } else { lorentz_norm(&f, p, pp)? };
            Ok((forward_num / st, rev_num / rev_den))
        })
        .collect();
    let mut reverse = Vec::with_capacity(rows.len());
    for (i, r) in rows.into_iter().enumerate() {
        let (fwd, rev) = r?;
        if !fwd.is_finite() || !rev.is_finite() {
            rep.note(format!("member {i}: degenerate ratio skipped"));
            continue;
        }
        rep.push_ratio(fwd);
        reverse.push(rev);
        rep.push_series("reverse", rev);
    }
    let max_fwd = rep.max_ratio.unwrap_or(0.0);
    let max_rev = reverse.iter().copied().fold(0.0, f64::max);
    let min_fwd = rep.ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let min_rev = reverse.iter().copied().fold(f64::INFINITY, f64::min);
    if p == 2.0 {
        rep.tolerance = Some(1e-8);
        rep.check_close("forward ratio max", max_fwd, 1.0, 1e-8);
        rep.check_close("forward ratio min", min_fwd, 1.0, 1e-8);
        rep.check_close("reverse ratio max", max_rev, 1.0, 1e-8);
        rep.check_close("reverse ratio min", min_rev, 1.0, 1e-8);
    } else if p == 1.0 {
        rep.tolerance = Some(1e-8);
        rep.check_le("sup-norm ratio", max_fwd, 1.0 + 1e-8);
        rep.check_le("reverse ratio", max_rev, 1.0 + 1e-8);
    } else {
        rep.check_le("forward ratio finite", max_fwd, f64::MAX);
        rep.check_le("reverse ratio finite", max_rev, f64::MAX);
    }
    Ok(rep)
}
