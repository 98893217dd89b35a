//! Lower-bound estimates of multiplier norms `L^p -> L^q` (classical) and
//! `S^p -> S^q` (quantum).
//!
//! Candidates from a random ensemble and from structured sweeps are scored,
//! and the best few are refined by a nonlinear power iteration
//! `X <- J_{p'}(A^* J_q(A X))`, where `J_r(Y)` is the norming functional of `Y`
//! in the dual of `L^r` (resp. `S^r`). With `p = 1` the quantum iterates are
//! rank-one, with `p = 2` they are plain power steps.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{classical_multiplier, fw_multiplier, MultiplierSymbol};
use crate::error::{QhaError, Result};
use crate::grid::{function_norm, hermite_family, GridFunction, PhaseFunction, PhaseGrid};
use crate::linalg::Svd;
use crate::operator::{random_trace_class_with, rank_one, EnsembleSpec, OperatorMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Classical,
    Quantum,
}

/// Which stage produced the best ratio.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Random,
    RankOneSweep,
    Structured,
    Alternating,
    Seeded,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub n_random: usize,
    pub n_alternating_steps: usize,
    pub seed: u64,
    /// Rank cap for quantum inputs (random members and refinement iterates).
    pub max_rank: Option<usize>,
    /// Hermite modes spanning random inputs.
    pub hermite_modes: usize,
    /// `h_j (x) h_k` for `j, k < sweep_modes` enter the rank-one sweep.
    pub sweep_modes: usize,
    /// Number of best candidates that are refined.
    pub n_starts: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            n_random: 16,
            n_alternating_steps: 50,
            seed: 0x5eed,
            max_rank: None,
            hermite_modes: 16,
            sweep_modes: 4,
            n_starts: 3,
        }
    }
}

/// A probe input, kept so that estimates can be continued or cross-seeded.
#[derive(Clone, Debug, PartialEq)]
pub enum Probe {
    Operator(OperatorMatrix),
    Function(PhaseFunction),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub witness: String,
    pub n_trials: usize,
    pub method: Method,
    #[serde(skip)]
    pub best_input: Option<Probe>,
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(QhaError::InvalidExponent(format!("exponent {p} must lie in [1, inf]")));
    }
    Ok(())
}

pub(crate) fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

fn lp(s: &[f64], p: f64) -> f64 {
    crate::grid::weighted_lp(s.iter().copied(), p, 1.0)
}

/// Weights `w` with `sum s_k w_k = ||s||_r` and `||w||_{r'} = 1`.
fn norming_weights(s: &[f64], r: f64) -> Vec<f64> {
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return vec![0.0; s.len()];
    }
    if r.is_infinite() {
        let mut w = vec![0.0; s.len()];
        w[0] = 1.0;
        return w;
    }
    if r == 1.0 {
        return vec![1.0; s.len()];
    }
    let nrm = lp(s, r);
    s.iter().map(|&v| (v / nrm).powf(r - 1.0)).collect()
}

trait Space: Sync {
    type X: Clone + Send + Sync;
    fn apply(&self, x: &Self::X) -> Self::X;
    fn apply_adjoint(&self, x: &Self::X) -> Self::X;
    fn norm(&self, x: &Self::X, p: f64) -> Result<f64>;
    /// Returns `(||y||_r, J_r(y))`.
    fn norming(&self, y: &Self::X, r: f64) -> Result<(f64, Self::X)>;
    /// Rescales `x` to unit `p`-norm, capping its rank where applicable.
    fn normalize(&self, x: Self::X, p: f64) -> Result<Option<Self::X>>;
    /// Applies the rank cap to a unit input, if one is set.
    fn cap(&self, x: Self::X, _p: f64) -> Result<Option<Self::X>> {
        Ok(Some(x))
    }
    fn wrap(&self, x: Self::X) -> Probe;
}

struct Quantum<'a> {
    m: &'a MultiplierSymbol,
    mbar: MultiplierSymbol,
    max_rank: Option<usize>,
}

impl Space for Quantum<'_> {
    type X = OperatorMatrix;

    fn apply(&self, x: &OperatorMatrix) -> OperatorMatrix {
        fw_multiplier(self.m, x).expect("grid checked")
    }

    fn apply_adjoint(&self, x: &OperatorMatrix) -> OperatorMatrix {
        fw_multiplier(&self.mbar, x).expect("grid checked")
    }

    fn norm(&self, x: &OperatorMatrix, p: f64) -> Result<f64> {
        crate::operator::schatten_norm(x, p)
    }

    fn norming(&self, y: &OperatorMatrix, r: f64) -> Result<(f64, OperatorMatrix)> {
        if r == 2.0 {
            let value = crate::operator::schatten_norm(y, 2.0)?;
            let scale = if value > 0.0 { 1.0 / value } else { 0.0 };
            return Ok((value, y.scale(Complex64::new(scale, 0.0))));
        }
        let n = y.n();
        let svd = Svd::new(&y.weighted(), n)?;
        let value = lp(&svd.s, r);
        let w = norming_weights(&svd.s, r);
        Ok((value, OperatorMatrix::from_weighted(&y.grid, svd.recombine(&w))?))
    }

    fn normalize(&self, x: OperatorMatrix, p: f64) -> Result<Option<OperatorMatrix>> {
        let n = x.n();
        let svd = Svd::new(&x.weighted(), n)?;
        let mut s = svd.s.clone();
        if let Some(k) = self.max_rank {
            for v in s.iter_mut().skip(k) {
                *v = 0.0;
            }
        }
        let nrm = lp(&s, p);
        if !(nrm > 0.0) || !nrm.is_finite() {
            return Ok(None);
        }
        let w: Vec<f64> = s.iter().map(|v| v / nrm).collect();
        Ok(Some(OperatorMatrix::from_weighted(&x.grid, svd.recombine(&w))?))
    }

    fn cap(&self, x: OperatorMatrix, p: f64) -> Result<Option<OperatorMatrix>> {
        match self.max_rank {
            Some(_) => self.normalize(x, p),
            None => Ok(Some(x)),
        }
    }

    fn wrap(&self, x: OperatorMatrix) -> Probe {
        Probe::Operator(x)
    }
}

struct Classical<'a> {
    m: &'a MultiplierSymbol,
    mbar: MultiplierSymbol,
}

impl Space for Classical<'_> {
    type X = PhaseFunction;

    fn apply(&self, x: &PhaseFunction) -> PhaseFunction {
        classical_multiplier(self.m, x).expect("grid checked")
    }

    fn apply_adjoint(&self, x: &PhaseFunction) -> PhaseFunction {
        classical_multiplier(&self.mbar, x).expect("grid checked")
    }

    fn norm(&self, x: &PhaseFunction, p: f64) -> Result<f64> {
        function_norm(x, p)
    }

    fn norming(&self, y: &PhaseFunction, r: f64) -> Result<(f64, PhaseFunction)> {
        let value = function_norm(y, r)?;
        let cell = y.grid.cell_area();
        let mut out = PhaseFunction::zeros(&y.grid);
        if value == 0.0 {
            return Ok((0.0, out));
        }
        let sgn = |v: Complex64| if v.norm() > 0.0 { v / v.norm() } else { ZERO };
        if r.is_infinite() {
            let (k, v) = y
                .values
                .iter()
                .enumerate()
                .fold((0, ZERO), |best, (k, &v)| if v.norm() > best.1.norm() { (k, v) } else { best });
            out.values[k] = sgn(v) / cell;
        } else if r == 1.0 {
            for (o, &v) in out.values.iter_mut().zip(&y.values) {
                *o = sgn(v);
            }
        } else {
            for (o, &v) in out.values.iter_mut().zip(&y.values) {
                *o = sgn(v) * (v.norm() / value).powf(r - 1.0);
            }
        }
        Ok((value, out))
    }

    fn normalize(&self, x: PhaseFunction, p: f64) -> Result<Option<PhaseFunction>> {
        let nrm = function_norm(&x, p)?;
        if !(nrm > 0.0) || !nrm.is_finite() {
            return Ok(None);
        }
        Ok(Some(x.scale(Complex64::new(1.0 / nrm, 0.0))))
    }

    fn wrap(&self, x: PhaseFunction) -> Probe {
        Probe::Function(x)
    }
}

struct Candidate<X> {
    x: X,
    ratio: f64,
    label: String,
    method: Method,
}

/// Power iteration from a unit input `x`; returns the best ratio and its input.
fn refine<S: Space>(space: &S, x: S::X, p: f64, q: f64, steps: usize) -> Result<(f64, S::X)> {
    let pp = conjugate(p);
    let mut best = (f64::NEG_INFINITY, x.clone());
    let mut x = x;
    let mut prev = f64::NEG_INFINITY;
    for _ in 0..=steps {
        let (value, w) = space.norming(&space.apply(&x), q)?;
        if value > best.0 {
            best = (value, x.clone());
        }
        if (value - prev).abs() <= 1e-13 * value.abs() {
            break;
        }
        prev = value;
        let (_, next) = space.norming(&space.apply_adjoint(&w), pp)?;
        x = match space.cap(next, p)? {
            Some(next) => next,
            None => break,
        };
    }
    Ok(best)
}

fn quantum_candidates(
    grid: &PhaseGrid,
    budget: &Budget,
    p: f64,
) -> Vec<(OperatorMatrix, String, Method)> {
    let g = &grid.x;
    let mut out = Vec::new();
    let rank = budget.max_rank.unwrap_or(8);
    let spec = EnsembleSpec {
        rank,
        hermite_modes: budget.hermite_modes.max(1),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for i in 0..budget.n_random {
        let seed: u64 = rng.random();
        let decay = if budget.max_rank.is_some() { 0.0 } else { rng.random::<f64>() };
        out.push((random_trace_class_with(seed, decay, g, &spec), format!("random #{i}"), Method::Random));
    }
    let modes = budget.sweep_modes.min(g.n() / 4 + 1);
    let family = hermite_family(g, modes);
    for (j, hj) in family.iter().enumerate() {
        for (k, hk) in family.iter().enumerate() {
            out.push((rank_one(hj, hk).expect("same grid"), format!("h{j} (x) h{k}"), Method::RankOneSweep));
        }
    }
    if p.is_infinite() && budget.max_rank.is_none() {
        out.push((OperatorMatrix::identity(g), "identity".into(), Method::Structured));
    }
    out
}

fn classical_candidates(grid: &PhaseGrid, budget: &Budget) -> Vec<(PhaseFunction, String, Method)> {
    use std::f64::consts::PI;
    let mut out = Vec::new();
    let n = grid.n();
    let c = n / 2;
    out.push((PhaseFunction::delta(grid, c, c, 1.0), "point mass".into(), Method::Structured));
    for a in [0.25, 1.0, 4.0] {
        out.push((
            PhaseFunction::from_real_fn(grid, |x, xi| (-PI * a * (x * x + xi * xi)).exp()),
            format!("gaussian a={a}"),
            Method::Structured,
        ));
    }
    let modes = budget.hermite_modes.min(n / 4).max(1);
    let hx = hermite_family(&grid.x, modes);
    let hxi = hermite_family(&grid.xi, modes);
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for i in 0..budget.n_random {
        let mut f = PhaseFunction::zeros(grid);
        for a in &hx {
            for b in &hxi {
                let coef = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
                for jx in 0..n {
                    let ca = coef * a.values[jx];
                    let row = &mut f.values[jx * n..(jx + 1) * n];
                    for (slot, bv) in row.iter_mut().zip(&b.values) {
                        *slot += ca * bv;
                    }
                }
            }
        }
        out.push((f, format!("random #{i}"), Method::Random));
    }
    out
}

fn run<S: Space>(
    space: &S,
    candidates: Vec<(S::X, String, Method)>,
    seeds: Vec<(S::X, String)>,
    p: f64,
    q: f64,
    budget: &Budget,
) -> Result<NormEstimate>
where
    S::X: Send,
{
    let n_trials = candidates.len() + seeds.len();
    let scored: Vec<Result<Option<Candidate<S::X>>>> = candidates
        .into_par_iter()
        .map(|(x, label, method)| {
            let Some(x) = space.normalize(x, p)? else { return Ok(None) };
            Ok(Some(Candidate {
                ratio: space.norm(&space.apply(&x), q)?,
                x,
                label,
                method,
            }))
        })
        .collect();
    let mut pool: Vec<Candidate<S::X>> = Vec::with_capacity(scored.len());
    for c in scored {
        if let Some(c) = c? {
            pool.push(c);
        }
    }
    for (x, label) in seeds {
        if let Some(x) = space.normalize(x, p)? {
            pool.push(Candidate {
                ratio: space.norm(&space.apply(&x), q)?,
                x,
                label,
                method: Method::Seeded,
            });
        }
    }
    if pool.is_empty() {
        return Err(QhaError::EmptyEnsemble);
    }
    let mut order: Vec<usize> = (0..pool.len()).collect();
    order.sort_by(|&a, &b| pool[b].ratio.total_cmp(&pool[a].ratio).then(a.cmp(&b)));
    let top = &pool[order[0]];
    let mut best = (top.ratio, top.x.clone(), top.method, top.label.clone());
    let starts: Vec<usize> = order.iter().copied().take(budget.n_starts).collect();
    let refined: Vec<Result<(f64, S::X)>> = starts
        .par_iter()
        .map(|&i| refine(space, pool[i].x.clone(), p, q, budget.n_alternating_steps))
        .collect();
    for (&i, r) in starts.iter().zip(refined) {
        let (ratio, x) = r?;
        if ratio > best.0 {
            let method = if pool[i].method == Method::Seeded { Method::Seeded } else { Method::Alternating };
            best = (ratio, x, method, format!("refined from {}", pool[i].label));
        }
    }
    Ok(NormEstimate {
        value: best.0,
        witness: best.3,
        n_trials,
        method: best.2,
        best_input: Some(space.wrap(best.1)),
    })
}

/// Lower bound for the norm of `T_m: L^p -> L^q` (classical) or
/// `T_m: S^p -> S^q` (quantum).
pub fn estimate_multiplier_norm(
    m: &MultiplierSymbol,
    p: f64,
    q: f64,
    side: Side,
    budget: &Budget,
) -> Result<NormEstimate> {
    estimate_seeded(m, p, q, side, budget, &[])
}

/// As [`estimate_multiplier_norm`], with extra starting inputs.
pub fn estimate_seeded(
    m: &MultiplierSymbol,
    p: f64,
    q: f64,
    side: Side,
    budget: &Budget,
    seeds: &[Probe],
) -> Result<NormEstimate> {
    check_exponent(p)?;
    check_exponent(q)?;
    let grid = m.grid().clone();
    match side {
        Side::Quantum => {
            let space = Quantum {
                m,
                mbar: m.conj(),
                max_rank: budget.max_rank,
            };
            let seeds = seeds
                .iter()
                .filter_map(|s| match s {
                    Probe::Operator(t) => Some((t.clone(), "seed".to_string())),
                    Probe::Function(_) => None,
                })
                .collect();
            run(&space, quantum_candidates(&grid, budget, p), seeds, p, q, budget)
        }
        Side::Classical => {
            let space = Classical { m, mbar: m.conj() };
            let seeds = seeds
                .iter()
                .filter_map(|s| match s {
                    Probe::Function(f) => Some((f.clone(), "seed".to_string())),
                    Probe::Operator(_) => None,
                })
                .collect();
            run(&space, classical_candidates(&grid, budget), seeds, p, q, budget)
        }
    }
}

/// The norming functional of `T_m X` in the dual of `S^q`: a unit element of
/// `S^{q'}` that certifies the value of `X` for the dual problem.
pub fn dual_certificate(m: &MultiplierSymbol, x: &Probe, q: f64) -> Result<Probe> {
    match x {
        Probe::Operator(t) => {
            let space = Quantum {
                m,
                mbar: m.conj(),
                max_rank: None,
            };
            Ok(Probe::Operator(space.norming(&space.apply(t), q)?.1))
        }
        Probe::Function(f) => {
            let space = Classical { m, mbar: m.conj() };
            Ok(Probe::Function(space.norming(&space.apply(f), q)?.1))
        }
    }
}

/// Random unit-norm window in a Hermite span, for sweeps outside the
/// estimator.
pub fn random_window(seed: u64, grid: &crate::grid::LineGrid, modes: usize) -> GridFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let family = hermite_family(grid, modes.max(1));
    crate::operator::random_hermite_vector(&mut rng, &family)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norming_weights_pair_to_norm() {
        let s = [3.0, 2.0, 0.5];
        for r in [1.0, 1.5, 2.0, 4.0, f64::INFINITY] {
            let w = norming_weights(&s, r);
            let pair: f64 = s.iter().zip(&w).map(|(a, b)| a * b).sum();
            assert!((pair - lp(&s, r)).abs() < 1e-12, "r={r}");
            assert!((lp(&w, conjugate(r)) - 1.0).abs() < 1e-12, "r={r}");
        }
    }

    #[test]
    fn conjugate_exponents() {
        assert!(conjugate(1.0).is_infinite());
        assert_eq!(conjugate(2.0), 2.0);
        assert_eq!(conjugate(f64::INFINITY), 1.0);
        assert!((conjugate(4.0 / 3.0) - 4.0).abs() < 1e-12);
    }
}
