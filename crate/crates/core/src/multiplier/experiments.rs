//! Experiments built on the multiplier calculus. Each returns an
//! [`ExperimentReport`] whose `pass` flag aggregates its checks.

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use super::estimate::{conjugate, dual_certificate, estimate_seeded};
use super::symbols::{gaussian_symbol, sine_symbol, tau_spreading};
use super::{classical_multiplier, estimate_multiplier_norm, fw_multiplier, Budget, MultiplierSymbol, Side};
use crate::convolution::{localisation, op_op_convolve};
use crate::error::{QhaError, Result};
use crate::fourier_wigner::fw_transform;
use crate::grid::{hermite, inner_product, lorentz_norm, GridFunction, LineGrid, PhaseFunction, PhaseGrid};
use crate::operator::{
    adjoint, apply, hermitian_eigenvalues, parity_conjugate, random_trace_class, rank_one, schatten_norm,
    singular_values, weyl_quantize, weyl_symbol, OperatorMatrix,
};
use crate::report::ExperimentReport;
use crate::tf::symplectic_ft;

fn exp_label(p: f64) -> serde_json::Value {
    if p.is_infinite() {
        json!("inf")
    } else {
        json!(p)
    }
}

/// `max |T_m(T) * S - T_m(T * S)|` against the common value
/// `F_sigma(m F_W T F_W S)`.
pub fn commutation_check(m: &MultiplierSymbol, t: &OperatorMatrix, s: &OperatorMatrix) -> Result<ExperimentReport> {
    let lhs = op_op_convolve(&fw_multiplier(m, t)?, s)?;
    let rhs = classical_multiplier(m, &op_op_convolve(t, s)?)?;
    let oracle = symplectic_ft(&m.table.mul(&fw_transform(t))?.mul(&fw_transform(s))?);
    let mut rep = ExperimentReport::new("commutation").param("symbol", m.name.as_str());
    rep.tolerance = Some(1e-9);
    rep.check_lt("max |lhs - rhs|", lhs.max_abs_diff(&rhs), 1e-9);
    rep.check_lt("max |lhs - oracle|", lhs.max_abs_diff(&oracle), 1e-9);
    Ok(rep)
}

/// Weyl symbol of `T_m(T)` against `T_m` applied to the Weyl symbol of `T`.
pub fn weyl_commutation_check(m: &MultiplierSymbol, t: &OperatorMatrix) -> Result<ExperimentReport> {
    let lhs = weyl_symbol(&fw_multiplier(m, t)?);
    let rhs = classical_multiplier(m, &weyl_symbol(t))?;
    let oracle = symplectic_ft(&m.table.mul(&fw_transform(t))?);
    let mut rep = ExperimentReport::new("weyl_commutation").param("symbol", m.name.as_str());
    rep.tolerance = Some(1e-9);
    rep.check_lt("max |lhs - rhs|", lhs.max_abs_diff(&rhs), 1e-9);
    rep.check_lt("max |lhs - oracle|", lhs.max_abs_diff(&oracle), 1e-9);
    Ok(rep)
}

/// Adjoint identity `(T_m T)^* = T_{conj m(-.)} T^*` and parity conjugation
/// `T_{m(-.)}(P T P) = P T_m(T) P`.
pub fn adjoint_parity_check(m: &MultiplierSymbol, t: &OperatorMatrix) -> Result<ExperimentReport> {
    let mt = fw_multiplier(m, t)?;
    let lhs = adjoint(&mt);
    let rhs = fw_multiplier(&m.conj().reflect(), &adjoint(t))?;
    let par_lhs = fw_multiplier(&m.reflect(), &parity_conjugate(t))?;
    let par_rhs = parity_conjugate(&mt);
    let scale = mt.max_abs().max(1.0);
    let mut rep = ExperimentReport::new("adjoint_parity").param("symbol", m.name.as_str());
    rep.tolerance = Some(1e-9);
    rep.check_lt("adjoint kernel error", lhs.max_abs_diff(&rhs) / scale, 1e-9);
    rep.check_lt("parity kernel error", par_lhs.max_abs_diff(&par_rhs) / scale, 1e-9);
    Ok(rep)
}

/// Composition law `T_{m1 m2} = T_{m1} T_{m2}` and Schatten nesting of
/// `T_m T` along an exponent ladder.
pub fn algebra_nesting_check(m1: &MultiplierSymbol, m2: &MultiplierSymbol, t: &OperatorMatrix) -> Result<ExperimentReport> {
    let joint = fw_multiplier(&m1.product(m2)?, t)?;
    let chained = fw_multiplier(m1, &fw_multiplier(m2, t)?)?;
    let mut rep = ExperimentReport::new("algebra_nesting")
        .param("m1", m1.name.as_str())
        .param("m2", m2.name.as_str());
    rep.tolerance = Some(1e-10);
    let scale = joint.max_abs().max(1.0);
    rep.check_lt("composition kernel error", joint.max_abs_diff(&chained) / scale, 1e-10);
    let spec = singular_values(&joint)?;
    let ladder = [1.0, 4.0 / 3.0, 2.0, 4.0, f64::INFINITY];
    let norms: Vec<f64> = ladder.iter().map(|&p| spec.schatten(p)).collect::<Result<_>>()?;
    for (i, w) in norms.windows(2).enumerate() {
        rep.push_series("schatten_ladder", w[0]);
        rep.check_le(format!("S^{} <= S^{}", ladder[i + 1], ladder[i]), w[1], w[0]);
    }
    rep.push_series("schatten_ladder", *norms.last().expect("nonempty"));
    Ok(rep)
}

/// Independent quantum estimates at `(p, q)` and `(q', p')`; if they disagree
/// by more than 10%, each side is additionally started from the norming
/// functional of the other side's best input.
pub fn duality_check(m: &MultiplierSymbol, p: f64, q: f64, budget: &Budget) -> Result<ExperimentReport> {
    let (pd, qd) = (conjugate(q), conjugate(p));
    let a = estimate_multiplier_norm(m, p, q, Side::Quantum, budget)?;
    let b = estimate_multiplier_norm(m, pd, qd, Side::Quantum, budget)?;
    let gap = |x: f64, y: f64| (x - y).abs() / x.max(y);
    let mut rep = ExperimentReport::new("duality")
        .param("symbol", m.name.as_str())
        .param("p", exp_label(p))
        .param("q", exp_label(q))
        .param("p_dual", exp_label(pd))
        .param("q_dual", exp_label(qd))
        .param("seed", budget.seed);
    rep.tolerance = Some(0.1);
    rep.push_series("independent", a.value);
    rep.push_series("independent", b.value);
    let mut va = a.value;
    let mut vb = b.value;
    if gap(va, vb) >= 0.1 {
        let mbar = m.conj();
        if let Some(y) = &b.best_input {
            let seed = dual_certificate(&mbar, y, qd)?;
            va = va.max(estimate_seeded(m, p, q, Side::Quantum, budget, &[seed])?.value);
        }
        if let Some(x) = &a.best_input {
            let seed = dual_certificate(&mbar, x, q)?;
            vb = vb.max(estimate_seeded(m, pd, qd, Side::Quantum, budget, &[seed])?.value);
        }
        rep.note(format!(
            "independent estimates {:.6} / {:.6} differ by {:.3}; cross-seeded",
            a.value,
            b.value,
            gap(a.value, b.value)
        ));
    }
    rep.push_ratio(va);
    rep.push_ratio(vb);
    rep.check_lt("relative gap", gap(va, vb), 0.1);
    Ok(rep)
}

/// Quantum against classical norm estimates over a family of compactly
/// supported symbols.
pub fn equivalence_experiment(family: &[MultiplierSymbol], ps: &[f64], budget: &Budget) -> Result<ExperimentReport> {
    if family.is_empty() {
        return Err(QhaError::EmptyEnsemble);
    }
    for m in family {
        let Some(r) = m.compact_support else {
            return Err(QhaError::InvalidParameter(format!("symbol {} has no support annotation", m.name)));
        };
        let l = m.grid().x.length().min(m.grid().xi.length());
        if r >= l / 4.0 {
            return Err(QhaError::InvalidParameter(format!(
                "support radius {r} of {} violates the wrap guard R < L/4 = {}",
                m.name,
                l / 4.0
            )));
        }
    }
    let mut rep = ExperimentReport::new("equivalence")
        .param("family", family.iter().map(|m| m.name.clone()).collect::<Vec<_>>())
        .param("p", ps.iter().map(|&p| exp_label(p)).collect::<Vec<_>>())
        .param("seed", budget.seed);
    rep.tolerance = Some(10.0);
    for &p in ps {
        let mut ratios = Vec::with_capacity(family.len());
        for m in family {
            let quantum = estimate_multiplier_norm(m, p, p, Side::Quantum, budget)?;
            let classical = estimate_multiplier_norm(m, p, p, Side::Classical, budget)?;
            let r = quantum.value / classical.value;
            rep.push_series(&format!("quantum_p{p}"), quantum.value);
            rep.push_series(&format!("classical_p{p}"), classical.value);
            rep.push_series(&format!("ratio_p{p}"), r);
            rep.push_ratio(r);
            ratios.push(r);
            if p == 2.0 {
                rep.check_close(format!("{} ratio at p=2", m.name), r, 1.0, 0.05);
            }
        }
        let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        rep.check_lt(format!("ratio spread at p={p}"), hi / lo, 10.0);
    }
    Ok(rep)
}

/// Spectral data of the Weyl quantizations of `Gamma_eps` for the given
/// values of `eps^2`.
pub fn gaussian_weyl_experiment(grid: &LineGrid, eps2: &[f64]) -> Result<ExperimentReport> {
    let pg = PhaseGrid::new(grid.clone());
    let mut rep = ExperimentReport::new("gaussian_weyl").param("eps2", eps2.to_vec());
    rep.tolerance = Some(1e-6);
    for &e2 in eps2 {
        if !(e2 > 0.0 && e2 <= 2.25) {
            return Err(QhaError::InvalidParameter(format!("eps^2 = {e2} outside (0, 2.25]")));
        }
        let l = weyl_quantize(&gaussian_symbol(&pg, e2.sqrt())?.table);
        let eig = hermitian_eigenvalues(&l)?;
        let min_eig = eig.first().copied().unwrap_or(0.0);
        let spec = singular_values(&l)?;
        let s1 = spec.schatten(1.0)?;
        let s2 = spec.schatten(2.0)?;
        let bound = (2.0 * e2).powf(-0.5);
        rep.push_series("eps2", e2);
        rep.push_series("min_eigenvalue", min_eig);
        rep.push_series("trace_norm", s1);
        rep.push_series("hs_norm", s2);
        if e2 >= 0.5 {
            rep.check_ge(format!("eps2={e2}: min eigenvalue"), min_eig, -1e-8);
            rep.check_close(format!("eps2={e2}: trace norm"), s1, 1.0, 1e-6);
        } else {
            rep.check_lt(format!("eps2={e2}: min eigenvalue"), min_eig, -1e-8);
            rep.check_ge(format!("eps2={e2}: trace norm lower bound"), s1, bound * (1.0 - 1e-6));
            rep.check_close(format!("eps2={e2}: Hilbert-Schmidt norm"), s2, bound, 1e-6);
        }
        if e2 == 0.5 {
            rep.check_close("eps2=0.5: s1", spec.values[0], 1.0, 1e-6);
            rep.check_le("eps2=0.5: s2", spec.values[1], 1e-6);
        }
    }
    Ok(rep)
}

/// `<L_{Gamma_eps} Phi, Psi>` against the weak limit `2 <P Phi, Psi>`.
pub fn parity_limit_experiment(eps2: &[f64], phi: &GridFunction, psi: &GridFunction) -> Result<ExperimentReport> {
    let pg = PhaseGrid::new(phi.grid.clone());
    let limit = inner_product(&phi.parity(), psi)? * 2.0;
    let mut rep = ExperimentReport::new("parity_limit").param("eps2", eps2.to_vec());
    rep.tolerance = Some(1e-3);
    rep.push_series("limit_re", limit.re);
    rep.push_series("limit_im", limit.im);
    let mut gaps = Vec::with_capacity(eps2.len());
    for &e2 in eps2 {
        let l = weyl_quantize(&gaussian_symbol(&pg, e2.sqrt())?.table);
        let v = inner_product(&apply(&l, phi)?, psi)?;
        let gap = (v - limit).norm();
        rep.push_series("value_re", v.re);
        rep.push_series("value_im", v.im);
        rep.push_series("gap", gap);
        gaps.push(gap);
    }
    for (i, w) in gaps.windows(2).enumerate() {
        rep.check_le(format!("gap non-increasing at eps2={}", eps2[i + 1]), w[1], w[0] + 1e-12);
    }
    if let Some(&last) = gaps.last() {
        rep.push_ratio(last);
        rep.check_lt(format!("final gap at eps2={}", eps2[eps2.len() - 1]), last, 1e-3);
    }
    Ok(rep)
}

/// `int (T_m L_{Gamma_eps}) * L_{Gamma_eps} dz` for each `eps^2`.
pub fn m_at_zero_recovery(m: &MultiplierSymbol, eps2: &[f64]) -> Result<ExperimentReport> {
    let pg = m.grid().clone();
    let target = m.at_origin();
    let mut rep = ExperimentReport::new("m_at_zero")
        .param("symbol", m.name.as_str())
        .param("eps2", eps2.to_vec());
    rep.tolerance = Some(1e-4);
    let values: Vec<Complex64> = eps2
        .par_iter()
        .map(|&e2| {
            let l = weyl_quantize(&gaussian_symbol(&pg, e2.sqrt())?.table);
            Ok(op_op_convolve(&fw_multiplier(m, &l)?, &l)?.integral())
        })
        .collect::<Result<_>>()?;
    for v in &values {
        rep.push_series("value_re", v.re);
        rep.push_series("value_im", v.im);
        rep.push_ratio((v - target).norm());
    }
    let err = values.iter().map(|v| (v - target).norm()).fold(0.0, f64::max);
    let spread = values
        .iter()
        .flat_map(|a| values.iter().map(move |b| (a - b).norm()))
        .fold(0.0, f64::max);
    rep.check_lt("max |value - m(0)|", err, 1e-4);
    rep.check_lt("eps spread", spread, 1e-6);
    Ok(rep)
}

/// Trace norms of localisation operators with symbol `tau`, over a sweep of
/// windows. Exploratory; no assertion.
pub fn trace_probe_question(grid: &LineGrid, seed: u64) -> Result<ExperimentReport> {
    let pg = PhaseGrid::new(grid.clone());
    let tau = tau_spreading(&pg);
    let sine = sine_symbol(&pg);
    let mut rep = ExperimentReport::new("trace_probe").param("seed", seed);
    let mut windows: Vec<(String, GridFunction, GridFunction, Option<f64>)> = Vec::new();
    let g0 = GridFunction::gaussian(grid);
    windows.push(("phi0,phi0".into(), g0.clone(), g0.clone(), None));
    for (j, k) in [(0, 1), (1, 1), (2, 3)] {
        windows.push((format!("h{j},h{k}"), hermite(grid, j)?, hermite(grid, k)?, None));
    }
    for i in 0..3u64 {
        let f = super::estimate::random_window(seed.wrapping_add(2 * i), grid, 8);
        let g = super::estimate::random_window(seed.wrapping_add(2 * i + 1), grid, 8);
        windows.push((format!("random #{i}"), f, g, None));
    }
    for a in [1.0f64, 2.0, 4.0, 8.0] {
        let f = GridFunction::from_real_fn(grid, |t| {
            a.powf(0.25) * 2f64.powf(0.25) * (-std::f64::consts::PI * a * t * t).exp()
        });
        windows.push((format!("dilated a={a}"), f.clone(), f, Some(a)));
    }
    windows.push(("zero".into(), GridFunction::zeros(grid), g0.clone(), None));
    for (label, f, g, dil) in windows {
        let den = f.norm() * g.norm();
        if den == 0.0 {
            rep.note(format!("{label}: zero window, skipped"));
            continue;
        }
        let op = localisation(&tau, &f, &g)?;
        let ratio = schatten_norm(&op, 1.0)? / den;
        let exact = schatten_norm(&fw_multiplier(&sine, &rank_one(&g, &f)?)?, 1.0)? / den;
        rep.push_ratio(ratio);
        rep.push_series("multiplier_route", exact);
        if let Some(a) = dil {
            rep.push_series("dilation", a);
            rep.push_series("dilation_ratio", ratio);
        }
        rep.note(format!("{label}: {ratio:.6}"));
    }
    Ok(rep)
}

/// Weak-sense check of `F_sigma(sin(pi|z|^2)) = tau`: pairings against
/// Gaussians `exp(-pi |z|^2 / s)`.
pub fn tau_weak_check(grid: &PhaseGrid) -> Result<ExperimentReport> {
    let sine = sine_symbol(grid).table;
    let tau = tau_spreading(grid);
    let mut rep = ExperimentReport::new("tau_weak");
    rep.tolerance = Some(2e-2);
    for s in [0.5, 1.0, 2.0] {
        let test = PhaseFunction::from_real_fn(grid, |x, xi| (-std::f64::consts::PI * (x * x + xi * xi) / s).exp());
        let lhs = symplectic_ft(&sine).inner(&test)?;
        let rhs = tau.inner(&test)?;
        rep.push_ratio((lhs - rhs).norm());
        rep.check_lt(format!("width {s}"), (lhs - rhs).norm(), 2e-2);
    }
    Ok(rep)
}

/// Empirical constant in `||T_m T||_{S^q} <= C ||m||_{L^{r,inf}} ||T||_{S^p}`
/// for truncations of `min(1, |z|^{-2/r})`, `1/r = 1/p - 1/q`.
pub fn lorentz_symbol_bound(grid: &PhaseGrid, p: f64, q: f64, radii: &[f64], seed: u64, members: usize) -> Result<ExperimentReport> {
    if !(p > 1.0 && p <= 2.0 && q >= 2.0 && q.is_finite()) {
        return Err(QhaError::InvalidExponent(format!("need 1 < p <= 2 <= q < inf, got ({p}, {q})")));
    }
    let r = 1.0 / (1.0 / p - 1.0 / q);
    let mut rep = ExperimentReport::new("lorentz_symbol_bound")
        .param("p", p)
        .param("q", q)
        .param("r", r)
        .param("seed", seed);
    let ensemble: Vec<OperatorMatrix> = (0..members as u64).map(|i| random_trace_class(seed + i, 0.3, &grid.x)).collect();
    let mut prev_norm = 0.0;
    for &rad in radii {
        let table = PhaseFunction::from_real_fn(grid, |x, xi| {
            let d = (x * x + xi * xi).sqrt();
            if d > rad {
                0.0
            } else if d <= 1.0 {
                1.0
            } else {
                d.powf(-2.0 / r)
            }
        });
        let m = MultiplierSymbol::new(format!("truncated power R={rad}"), table, Some(rad))?;
        let weak = lorentz_norm(&m.table, r, f64::INFINITY)?;
        let c = ensemble
            .par_iter()
            .map(|t| Ok(schatten_norm(&fw_multiplier(&m, t)?, q)? / (weak * schatten_norm(t, p)?)))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        rep.push_series("radius", rad);
        rep.push_series("weak_norm", weak);
        rep.push_series("constant", c);
        rep.push_ratio(c);
        rep.check_le(format!("R={rad}: constant finite"), c, f64::MAX);
        rep.check_ge(format!("R={rad}: weak norm monotone"), weak, prev_norm);
        prev_norm = weak;
    }
    Ok(rep)
}

/// `S^2 -> S^1` estimates under a growing rank budget.
pub fn blow_up_experiment(m: &MultiplierSymbol, ranks: &[usize], budget: &Budget) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new("blow_up")
        .param("symbol", m.name.as_str())
        .param("ranks", ranks.to_vec())
        .param("seed", budget.seed);
    rep.tolerance = Some(2.0);
    let mut values = Vec::with_capacity(ranks.len());
    for &r in ranks {
        let b = Budget {
            max_rank: Some(r),
            hermite_modes: budget.hermite_modes.max(2 * r),
            ..budget.clone()
        };
        let est = estimate_multiplier_norm(m, 2.0, 1.0, Side::Quantum, &b)?;
        rep.push_series("rank", r as f64);
        rep.push_series("estimate", est.value);
        values.push(est.value);
    }
    for (i, w) in values.windows(2).enumerate() {
        let growth = w[1] / w[0];
        rep.push_ratio(growth);
        rep.check_ge(format!("growth {} -> {}", ranks[i], ranks[i + 1]), growth, 2.0);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplier::symbols::constant;

    #[test]
    fn identity_multiplier_commutes_trivially() {
        let g = LineGrid::with_length(32, 5.0).unwrap();
        let pg = PhaseGrid::new(g.clone());
        let one = constant(&pg, 1.0);
        let t = random_trace_class(1, 0.4, &g);
        let s = random_trace_class(2, 0.4, &g);
        assert!(commutation_check(&one, &t, &s).unwrap().pass);
        assert!(weyl_commutation_check(&one, &t).unwrap().pass);
    }

    #[test]
    fn equivalence_needs_support() {
        let g = PhaseGrid::with_length(32, 5.0).unwrap();
        let one = constant(&g, 1.0);
        assert!(equivalence_experiment(&[one], &[2.0], &Budget::default()).is_err());
    }
}
