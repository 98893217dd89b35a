//! Quantum harmonic analysis convolutions and localisation operators.

use num_complex::Complex64;

use crate::error::{QhaError, Result};
use crate::fourier_wigner::{fw_inverse, fw_transform};
use crate::grid::{check_line, check_phase, function_norm, GridFunction, PhaseFunction, PhaseGrid};
use crate::operator::{
    compose, parity_conjugate, rank_one, schatten_norm, shift_operator, trace, OperatorMatrix,
};
use crate::report::ExperimentReport;
use crate::tf::{ambiguity, symplectic_ft, LatticePoint};

/// `T * S (z) = tr(T alpha_z(P S P))`, computed as `F_sigma(F_W T . F_W S)`.
pub fn op_op_convolve(t: &OperatorMatrix, s: &OperatorMatrix) -> Result<PhaseFunction> {
    check_line(&t.grid, &s.grid)?;
    Ok(symplectic_ft(&fw_transform(t).mul(&fw_transform(s))?))
}

/// `alpha_z(A) = rho(z) A rho(z)^*`.
pub fn alpha(z: LatticePoint, a: &OperatorMatrix) -> OperatorMatrix {
    let n = a.n();
    let r = shift_operator(&a.grid, z);
    let r_inv = shift_operator(&a.grid, z.neg(n));
    compose(&compose(&r, a).expect("same grid"), &r_inv).expect("same grid")
}

/// The literal trace definition of `T * S` at one lattice point.
pub fn op_op_point_oracle(t: &OperatorMatrix, s: &OperatorMatrix, z: LatticePoint) -> Result<Complex64> {
    check_line(&t.grid, &s.grid)?;
    let moved = alpha(z, &parity_conjugate(s));
    Ok(trace(&compose(t, &moved)?))
}

fn check_geometry(f: &PhaseFunction, s: &OperatorMatrix) -> Result<()> {
    check_phase(&f.grid, &PhaseGrid::new(s.grid.clone()))
}

/// `F * S = sum_z F(z) alpha_z(S) * cell_area`, computed as
/// `F_W^{-1}(F_sigma F . F_W S)`.
pub fn fun_op_convolve(f: &PhaseFunction, s: &OperatorMatrix) -> Result<OperatorMatrix> {
    check_geometry(f, s)?;
    Ok(fw_inverse(&symplectic_ft(f).mul(&fw_transform(s))?))
}

/// Direct quadrature of `F * S` over every lattice point. `O(n^5)`.
pub fn fun_op_direct(f: &PhaseFunction, s: &OperatorMatrix) -> Result<OperatorMatrix> {
    check_geometry(f, s)?;
    let n = s.n();
    let cell = f.grid.cell_area();
    let mut acc = OperatorMatrix::zeros(&s.grid);
    for jx in 0..n {
        for jxi in 0..n {
            let w = f.at(jx, jxi);
            if w == Complex64::new(0.0, 0.0) {
                continue;
            }
            let moved = alpha(LatticePoint::new(jx as i64, jxi as i64), s);
            for (a, b) in acc.kernel.iter_mut().zip(&moved.kernel) {
                *a += w * cell * b;
            }
        }
    }
    Ok(acc)
}

/// Mixed-state localisation operator `F * (phi (x) psi)`.
pub fn localisation(f: &PhaseFunction, psi: &GridFunction, phi: &GridFunction) -> Result<OperatorMatrix> {
    fun_op_convolve(f, &rank_one(phi, psi)?)
}

/// `sum_z F(z) A(u, psi)(z) conj(A(v, phi)(z)) * cell_area`, the quadratic-form
/// side of `<A u, v>` for the localisation operator.
pub fn localisation_form(
    f: &PhaseFunction,
    psi: &GridFunction,
    phi: &GridFunction,
    u: &GridFunction,
    v: &GridFunction,
) -> Result<Complex64> {
    let a = ambiguity(u, psi)?;
    let b = ambiguity(v, phi)?;
    check_phase(&f.grid, &a.grid)?;
    let s: Complex64 = f
        .values
        .iter()
        .zip(a.values.iter().zip(&b.values))
        .map(|(w, (x, y))| w * x * y.conj())
        .sum();
    Ok(s * f.grid.cell_area())
}

/// `r` with `1 + 1/r = 1/p + 1/q`, or an error if no such `r >= 1` exists.
pub fn young_exponent(p: f64, q: f64) -> Result<f64> {
    if p < 1.0 || q < 1.0 || p.is_nan() || q.is_nan() {
        return Err(QhaError::InvalidExponent(format!("({p}, {q})")));
    }
    let inv = 1.0 / p + 1.0 / q - 1.0;
    if !(0.0..=1.0).contains(&inv) {
        return Err(QhaError::InvalidExponent(format!(
            "1/p + 1/q = {} leaves no admissible r",
            inv + 1.0
        )));
    }
    Ok(if inv == 0.0 { f64::INFINITY } else { 1.0 / inv })
}

/// Werner-Young ratios `||F * S||_{S^r} / (||F||_p ||S||_{S^q})` over pairs
/// `(functions[i], operators[i])` and `||T * S||_{L^r} / (||T||_{S^p} ||S||_{S^q})`
/// over pairs `(left[i], operators[i])`.
pub fn werner_young_report(
    functions: &[PhaseFunction],
    left: &[OperatorMatrix],
    operators: &[OperatorMatrix],
    p: f64,
    q: f64,
) -> Result<ExperimentReport> {
    let r = young_exponent(p, q)?;
    let mut rep = ExperimentReport::new("werner_young")
        .param("p", p)
        .param("q", q)
        .param("r", if r.is_infinite() { serde_json::Value::from("inf") } else { r.into() });
    rep.tolerance = Some(1e-6);
    let mut fun_max: f64 = 0.0;
    let mut op_max: f64 = 0.0;
    for (i, (f, s)) in functions.iter().zip(operators).enumerate() {
        let den = function_norm(f, p)? * schatten_norm(s, q)?;
        if den == 0.0 {
            rep.note(format!("function pair {i}: zero denominator, skipped"));
            continue;
        }
        let ratio = schatten_norm(&fun_op_convolve(f, s)?, r)? / den;
        fun_max = fun_max.max(ratio);
        rep.push_ratio(ratio);
        rep.push_series("function_operator", ratio);
    }
    for (i, (t, s)) in left.iter().zip(operators).enumerate() {
        let den = schatten_norm(t, p)? * schatten_norm(s, q)?;
        if den == 0.0 {
            rep.note(format!("operator pair {i}: zero denominator, skipped"));
            continue;
        }
        let ratio = function_norm(&op_op_convolve(t, s)?, r)? / den;
        op_max = op_max.max(ratio);
        rep.push_ratio(ratio);
        rep.push_series("operator_operator", ratio);
    }
    rep.check_le("function-operator ratio", fun_max, 1.0 + 1e-6);
    rep.check_le("operator-operator ratio", op_max, 1.0 + 1e-6);
    Ok(rep)
}
