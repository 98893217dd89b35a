//! Experiment suites behind each subcommand.

use std::f64::consts::PI;

use num_complex::Complex64;
use qha::convolution::werner_young_report;
use qha::fourier_wigner::hausdorff_young_report;
use qha::grid::{function_norm, hermite};
use qha::multiplier::estimate::random_window;
use qha::multiplier::experiments::{
    adjoint_parity_check, algebra_nesting_check, blow_up_experiment, commutation_check, duality_check,
    equivalence_experiment, gaussian_weyl_experiment, lorentz_symbol_bound, m_at_zero_recovery,
    parity_limit_experiment, tau_weak_check, trace_probe_question, weyl_commutation_check,
};
use qha::multiplier::{
    bochner_riesz, bump_family, constant, estimate_multiplier_norm, gaussian_window_symbol, modulation_probe,
    sine_symbol, smooth_bump, Budget, Side,
};
use qha::operator::{random_trace_class, singular_values, weyl_symbol};
use qha::tf::symplectic_form;
use qha::{
    ambiguity, fw_inverse, fw_multiplier, fw_transform, symplectic_ft, tf_shift, ExperimentReport, GridFunction,
    LatticePoint, LineGrid, MultiplierSymbol, PhaseFunction, PhaseGrid,
};
use rayon::prelude::*;

use crate::config::Settings;

type Job<'a> = Box<dyn Fn() -> Result<Vec<ExperimentReport>, String> + Send + Sync + 'a>;

fn run_jobs(jobs: Vec<Job<'_>>) -> Result<Vec<ExperimentReport>, String> {
    let parts: Vec<_> = jobs.par_iter().map(|j| j()).collect();
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

fn e<T>(r: qha::Result<T>) -> Result<T, String> {
    r.map_err(|err| err.to_string())
}

fn budget(seed: u64) -> Budget {
    Budget {
        seed,
        ..Budget::default()
    }
}

fn default_eps2() -> Vec<f64> {
    vec![0.3, 0.45, 0.5, 0.55, 1.0]
}

fn symbol_or(s: &Settings, pg: &PhaseGrid, fallback: impl FnOnce() -> qha::Result<MultiplierSymbol>) -> Result<MultiplierSymbol, String> {
    match &s.symbol {
        Some(cfg) => cfg.build(pg, &s.base),
        None => e(fallback()),
    }
}

pub fn chirped_gaussian(pg: &PhaseGrid) -> MultiplierSymbol {
    let table = PhaseFunction::from_fn(pg, |x, xi| {
        Complex64::from_polar((-PI * (x * x + 0.5 * xi * xi)).exp(), 2.0 * PI * (0.7 * x + 0.3 * xi * xi))
    });
    MultiplierSymbol::new("chirped gaussian", table, None).expect("unannotated")
}

fn gaussian_ambiguity(g: &LineGrid) -> ExperimentReport {
    let pg = PhaseGrid::new(g.clone());
    let phi = GridFunction::gaussian(g);
    let a = ambiguity(&phi, &phi).expect("same grid");
    let exact = PhaseFunction::from_real_fn(&pg, |x, xi| (-PI * (x * x + xi * xi) / 2.0).exp());
    let mut rep = ExperimentReport::new("gaussian_ambiguity").param("n", g.n()).param("length", g.length());
    rep.tolerance = Some(1e-6);
    let err = a.max_abs_diff(&exact);
    rep.push_ratio(err);
    rep.check_lt("max error", err, 1e-6);
    rep
}

fn pool_unitarity(g: &LineGrid, seed: u64, members: u64) -> Result<ExperimentReport, String> {
    let mut rep = ExperimentReport::new("pool_unitarity").param("seed", seed);
    rep.tolerance = Some(1e-10);
    let mut worst: f64 = 0.0;
    for i in 0..members {
        let t = random_trace_class(seed + i, 0.2, g);
        let hs = e(singular_values(&t))?.values.iter().map(|s| s * s).sum::<f64>().sqrt();
        let l2 = e(function_norm(&fw_transform(&t), 2.0))?;
        rep.push_ratio(l2 / hs);
        worst = worst.max((l2 - hs).abs() / hs);
    }
    rep.check_lt("relative error", worst, 1e-10);
    Ok(rep)
}

fn covariance(g: &LineGrid, seed: u64, shifts: u64) -> Result<ExperimentReport, String> {
    let pg = PhaseGrid::new(g.clone());
    let n = g.n() as i64;
    let mut rep = ExperimentReport::new("covariance").param("seed", seed);
    rep.tolerance = Some(1e-10);
    let mut worst: f64 = 0.0;
    for k in 0..shifts {
        let sx = ((k as i64 * 7 + seed as i64) % 11) - 5;
        let sxi = ((k as i64 * 5 + 3) % 9) - 4;
        let zeta = LatticePoint::from_steps(g.n(), sx, sxi);
        let zc = zeta.coords(&pg);
        let f = random_window(seed + 2 * k, g, 8.min(g.n() / 4));
        let h = random_window(seed + 2 * k + 1, g, 8.min(g.n() / 4));
        let lhs = e(ambiguity(&tf_shift(&f, zeta), &h))?;
        let rhs = e(ambiguity(&f, &h))?;
        for jx in 0..n {
            for jxi in 0..n {
                let (ux, uxi) = (jx - sx, jxi - sxi);
                if !(0..n).contains(&ux) || !(0..n).contains(&uxi) {
                    continue;
                }
                let z = pg.point(jx as usize, jxi as usize);
                let expect = Complex64::from_polar(1.0, PI * symplectic_form(zc, z)) * rhs.at(ux as usize, uxi as usize);
                worst = worst.max((lhs.at(jx as usize, jxi as usize) - expect).norm());
            }
        }
    }
    rep.push_ratio(worst);
    rep.check_lt("max error", worst, 1e-10);
    Ok(rep)
}

fn transforms(g: &LineGrid, seed: u64) -> Result<ExperimentReport, String> {
    let pg = PhaseGrid::new(g.clone());
    let t = random_trace_class(seed, 0.3, g);
    let f = weyl_symbol(&random_trace_class(seed + 1, 0.3, g));
    let ff = symplectic_ft(&f);
    let n0 = e(function_norm(&f, 2.0))?;
    let mut rep = ExperimentReport::new("transforms").param("seed", seed);
    rep.tolerance = Some(1e-10);
    rep.check_lt("symplectic involution", symplectic_ft(&ff).max_abs_diff(&f) / f.max_abs(), 1e-10);
    rep.check_lt("Parseval", (e(function_norm(&ff, 2.0))? - n0).abs() / n0, 1e-10);
    let scale = t.max_abs();
    rep.check_lt("Fourier-Wigner round trip", fw_inverse(&fw_transform(&t)).max_abs_diff(&t) / scale, 1e-10);
    let one = constant(&pg, 1.0);
    rep.check_lt("identity multiplier", e(fw_multiplier(&one, &t))?.max_abs_diff(&t) / scale, 1e-10);
    let m = bochner_riesz(&pg, 1.0).map_err(|x| x.to_string())?;
    let lhs = e(qha::operator::schatten_norm(&e(fw_multiplier(&m, &t))?, 2.0))?;
    let rhs = e(function_norm(&e(m.table.mul(&fw_transform(&t)))?, 2.0))?;
    rep.check_lt("S^2 isometry of multiplier", (lhs - rhs).abs() / rhs.max(1e-300), 1e-10);
    Ok(rep)
}

fn gaussian_lp(g: &LineGrid) -> Result<ExperimentReport, String> {
    let pg = PhaseGrid::new(g.clone());
    let mut rep = ExperimentReport::new("gaussian_lp");
    rep.tolerance = Some(1e-6);
    for k in [1.0, 2.0, 4.0] {
        let f = PhaseFunction::from_real_fn(&pg, |x, xi| (-PI * k * (x * x + xi * xi)).exp());
        for p in [1.0, 2.0, 4.0] {
            let v = e(function_norm(&f, p))?.powf(p);
            rep.check_close(format!("n={k}, p={p}"), v, 1.0 / (k * p), 1e-6);
        }
    }
    Ok(rep)
}

fn estimator_identity(pg: &PhaseGrid, seed: u64) -> Result<ExperimentReport, String> {
    let one = constant(pg, 1.0);
    let b = budget(seed);
    let mut rep = ExperimentReport::new("estimator_identity").param("seed", seed);
    rep.tolerance = Some(1e-6);
    for (p, q) in [(1.0, 1.0), (2.0, 2.0), (f64::INFINITY, f64::INFINITY), (1.0, 2.0)] {
        let v = e(estimate_multiplier_norm(&one, p, q, Side::Quantum, &b))?.value;
        rep.push_ratio(v);
        rep.check_close(format!("identity ({p}, {q})"), v, 1.0, 1e-6);
    }
    Ok(rep)
}

fn two_multipliers(pg: &PhaseGrid, seed: u64) -> Result<ExperimentReport, String> {
    let symbols = [
        e(gaussian_window_symbol(pg, 1.0))?,
        e(smooth_bump(pg, (0.5, 0.0), 1.5))?,
        chirped_gaussian(pg).scale(0.5),
    ];
    let b = budget(seed);
    let mut rep = ExperimentReport::new("m2_isometry").param("seed", seed);
    rep.tolerance = Some(0.05);
    for m in &symbols {
        let q = e(estimate_multiplier_norm(m, 2.0, 2.0, Side::Quantum, &b))?.value / m.sup_norm;
        let c = e(estimate_multiplier_norm(m, 2.0, 2.0, Side::Classical, &b))?.value / m.sup_norm;
        rep.push_series("quantum", q);
        rep.push_series("classical", c);
        rep.push_ratio(q);
        rep.check_close(format!("{}: quantum / sup", m.name), q, 1.0, 0.05);
        rep.check_close(format!("{}: classical / sup", m.name), c, 1.0, 0.02);
    }
    Ok(rep)
}

fn default_equivalence_family(pg: &PhaseGrid) -> Result<Vec<MultiplierSymbol>, String> {
    let l = pg.x.length().min(pg.xi.length());
    e(bump_family(pg, 2f64.min(0.9 * l / 4.0)))
}

pub fn verify(s: &Settings) -> Result<Vec<ExperimentReport>, String> {
    let g = s.line()?;
    let pg = PhaseGrid::new(g.clone());
    let seed = s.seed;
    let pg_ref = &pg;
    let g_ref = &g;
    let jobs: Vec<Job> = vec![
        Box::new(move || Ok(vec![gaussian_ambiguity(g_ref)])),
        Box::new(move || Ok(vec![pool_unitarity(g_ref, seed, 10)?])),
        Box::new(move || Ok(vec![covariance(g_ref, seed, 8)?])),
        Box::new(move || Ok(vec![transforms(g_ref, seed)?])),
        Box::new(move || Ok(vec![gaussian_lp(g_ref)?])),
        Box::new(move || werner_young(g_ref, seed, 10, &[(1.0, 1.0), (2.0, 2.0), (1.0, 2.0)])),
        Box::new(move || hausdorff_young(g_ref, seed, 10, &[2.0, 1.0, 4.0 / 3.0])),
        Box::new(move || {
            let symbols = [e(gaussian_window_symbol(pg_ref, 1.0))?, e(bochner_riesz(pg_ref, 1.0))?, sine_symbol(pg_ref)];
            let mut out = Vec::new();
            for (i, m) in symbols.iter().enumerate() {
                let t = random_trace_class(seed + 10 * i as u64, 0.3, g_ref);
                let u = random_trace_class(seed + 10 * i as u64 + 1, 0.3, g_ref);
                out.push(e(commutation_check(m, &t, &u))?);
                out.push(e(weyl_commutation_check(m, &t))?);
                out.push(e(adjoint_parity_check(m, &t))?);
            }
            out.push(e(adjoint_parity_check(&chirped_gaussian(pg_ref), &random_trace_class(seed + 99, 0.3, g_ref)))?);
            let t = random_trace_class(seed + 7, 0.3, g_ref);
            out.push(e(algebra_nesting_check(&symbols[0], &symbols[1], &t))?);
            out.push(e(algebra_nesting_check(&chirped_gaussian(pg_ref), &symbols[2], &t))?);
            Ok(out)
        }),
        Box::new(move || Ok(vec![e(gaussian_weyl_experiment(g_ref, &default_eps2()))?])),
        Box::new(move || parity_limit(g_ref, &[0.5, 0.2, 0.1, 0.05, 0.02])),
        Box::new(move || {
            let eps2 = [0.3, 0.5, 1.0];
            [constant(pg_ref, 1.0), e(bochner_riesz(pg_ref, 1.0))?, sine_symbol(pg_ref)]
                .iter()
                .map(|m| e(m_at_zero_recovery(m, &eps2)))
                .collect()
        }),
        Box::new(move || Ok(vec![e(tau_weak_check(pg_ref))?])),
        Box::new(move || Ok(vec![e(lorentz_symbol_bound(pg_ref, 4.0 / 3.0, 4.0, &[1.0, 2.0, 3.0], seed, 4))?])),
        Box::new(move || Ok(vec![estimator_identity(pg_ref, seed)?, two_multipliers(pg_ref, seed)?])),
        Box::new(move || {
            let m = e(gaussian_window_symbol(pg_ref, 1.0))?;
            [(1.0, 1.0), (1.0, 2.0), (4.0 / 3.0, 2.0)]
                .iter()
                .map(|&(p, q)| e(duality_check(&m, p, q, &budget(seed))))
                .collect()
        }),
        Box::new(move || {
            let family = default_equivalence_family(pg_ref)?;
            Ok(vec![e(equivalence_experiment(&family, &[1.0, 2.0], &budget(seed)))?])
        }),
        Box::new(move || {
            let m = e(gaussian_window_symbol(pg_ref, 1.0))?;
            let b = Budget {
                hermite_modes: 32,
                ..budget(seed)
            };
            Ok(vec![e(blow_up_experiment(&m, &[2, 4, 8, 16], &b))?])
        }),
    ];
    run_jobs(jobs)
}

fn hausdorff_young(g: &LineGrid, seed: u64, members: u64, ps: &[f64]) -> Result<Vec<ExperimentReport>, String> {
    let ens: Vec<_> = (0..members).map(|i| random_trace_class(seed + i, 0.3, g)).collect();
    ps.iter().map(|&p| e(hausdorff_young_report(&ens, p))).collect()
}

pub fn hausdorff_young_suite(s: &Settings) -> Result<Vec<ExperimentReport>, String> {
    let ps = s.p.clone().unwrap_or_else(|| vec![1.0, 4.0 / 3.0, 2.0]);
    hausdorff_young(&s.line()?, s.seed, 20, &ps)
}

fn werner_young(g: &LineGrid, seed: u64, members: u64, pairs: &[(f64, f64)]) -> Result<Vec<ExperimentReport>, String> {
    let functions: Vec<_> = (0..members).map(|i| weyl_symbol(&random_trace_class(seed + 3 * i, 0.4, g))).collect();
    let left: Vec<_> = (0..members).map(|i| random_trace_class(seed + 3 * i + 1, 0.25, g)).collect();
    let ops: Vec<_> = (0..members).map(|i| random_trace_class(seed + 3 * i + 2, 0.5, g)).collect();
    pairs.iter().map(|&(p, q)| e(werner_young_report(&functions, &left, &ops, p, q))).collect()
}

pub fn werner_young_suite(s: &Settings) -> Result<Vec<ExperimentReport>, String> {
    let pairs = match (&s.p, &s.q) {
        (Some(p), Some(q)) if p.len() == q.len() => p.iter().copied().zip(q.iter().copied()).collect(),
        (None, None) => vec![(1.0, 1.0), (2.0, 2.0), (1.0, 2.0)],
        _ => return Err("--p and --q must be given together with equal lengths".into()),
    };
    werner_young(&s.line()?, s.seed, 50, &pairs)
}

pub fn bochner_riesz_suite(s: &Settings) -> Result<Vec<ExperimentReport>, String> {
    let pg = s.phase()?;
    let delta = s.symbol.as_ref().and_then(|c| c.delta).unwrap_or(1.0);
    let m = e(bochner_riesz(&pg, delta))?;
    let ps = s.p.clone().unwrap_or_else(|| vec![1.0, 4.0 / 3.0, 2.0]);
    let b = budget(s.seed);
    let mut rep = ExperimentReport::new("bochner_riesz")
        .param("delta", delta)
        .param("n", s.n)
        .param("length", s.length)
        .param("seed", s.seed);
    let critical = (2.0 * delta + 1.0) / 4.0;
    rep.set_param("critical_gap", critical);
    for &p in &ps {
        let qv = e(estimate_multiplier_norm(&m, p, p, Side::Quantum, &b))?;
        let cv = e(estimate_multiplier_norm(&m, p, p, Side::Classical, &b))?;
        rep.push_series("p", p);
        rep.push_series("quantum", qv.value);
        rep.push_series("classical", cv.value);
        rep.push_series("gap", (1.0 / p - 0.5).abs());
    }
    let probe_grid = e(PhaseGrid::balanced(24))?;
    let probe_symbol = e(bochner_riesz(&probe_grid, delta))?;
    let spread = symplectic_ft(&probe_symbol.table);
    for q in [1.0, 2.0, f64::INFINITY] {
        rep.push_series("modulation_q", if q.is_infinite() { -1.0 } else { q });
        rep.push_series("modulation_probe", e(modulation_probe(&spread, q))?);
    }
    rep.note("report only: no pass/fail assertion; modulation_q = -1 stands for q = inf");
    Ok(vec![rep])
}

pub fn gaussian_weyl_suite(s: &Settings) -> Result<Vec<ExperimentReport>, String> {
    let eps2 = s.eps2.clone().unwrap_or_else(default_eps2);
    Ok(vec![e(gaussian_weyl_experiment(&s.line()?, &eps2))?])
}

pub fn equivalence_suite(s: &Settings) -> Result<Vec<ExperimentReport>, String> {
    let pg = s.phase()?;
    let family = match &s.symbol {
        None => default_equivalence_family(&pg)?,
        Some(cfg) if cfg.family == "bochner_riesz" => {
            let delta = cfg.delta.ok_or("bochner_riesz needs \"delta\"")?;
            let radii = [0.5, 0.75, 1.0, 1.25, 1.5];
            let support = radii[radii.len() - 1];
            radii
                .iter()
                .map(|&r| {
                    let table = PhaseFunction::from_real_fn(&pg, |x, xi| {
                        let u = (x * x + xi * xi) / (r * r);
                        if u < 1.0 {
                            (1.0 - u).powf(delta)
                        } else {
                            0.0
                        }
                    });
                    e(MultiplierSymbol::new(format!("bochner_riesz({delta}; radius {r})"), table, Some(support)))
                })
                .collect::<Result<_, _>>()?
        }
        Some(cfg) => {
            let m = cfg.build(&pg, &s.base)?;
            let n = pg.n();
            let mut r: f64 = 0.0;
            for jx in 0..n {
                for jxi in 0..n {
                    if m.table.at(jx, jxi).norm() != 0.0 {
                        let (x, xi) = pg.point(jx, jxi);
                        r = r.max(x.hypot(xi));
                    }
                }
            }
            let name = m.name.clone();
            vec![e(MultiplierSymbol::new(name, m.table, Some(r.max(pg.x.h()))))?]
        }
    };
    let ps = s.p.clone().unwrap_or_else(|| vec![1.0, 4.0 / 3.0, 2.0]);
    Ok(vec![e(equivalence_experiment(&family, &ps, &budget(s.seed)))?])
}

fn parity_limit(g: &LineGrid, eps2: &[f64]) -> Result<Vec<ExperimentReport>, String> {
    let h0 = e(hermite(g, 0))?;
    let h1 = e(hermite(g, 1))?;
    let even = h0.add(&e(hermite(g, 2))?).map_err(|x| x.to_string())?;
    let pairs = [(&h0, &h0, "phi0,phi0"), (&h1, &h1, "h1,h1"), (&even, &h1, "h0+h2,h1")];
    pairs
        .iter()
        .map(|(phi, psi, label)| {
            let mut rep = e(parity_limit_experiment(eps2, phi, psi))?;
            rep.set_param("pair", *label);
            Ok(rep)
        })
        .collect()
}

pub fn parity_limit_suite(s: &Settings) -> Result<Vec<ExperimentReport>, String> {
    let eps2 = s.eps2.clone().unwrap_or_else(|| vec![0.5, 0.2, 0.1, 0.05, 0.02]);
    parity_limit(&s.line()?, &eps2)
}

pub fn m_at_zero_suite(s: &Settings) -> Result<Vec<ExperimentReport>, String> {
    let pg = s.phase()?;
    let m = symbol_or(s, &pg, || bochner_riesz(&pg, 1.0))?;
    let eps2 = s.eps2.clone().unwrap_or_else(|| vec![0.3, 0.5, 1.0]);
    Ok(vec![e(m_at_zero_recovery(&m, &eps2))?])
}

pub fn trace_probe_suite(s: &Settings) -> Result<Vec<ExperimentReport>, String> {
    Ok(vec![e(trace_probe_question(&s.line()?, s.seed))?])
}

pub fn modulation_probe_suite(s: &Settings) -> Result<Vec<ExperimentReport>, String> {
    let pg = s.phase()?;
    let m = symbol_or(s, &pg, || bochner_riesz(&pg, 1.0))?;
    let spread = symplectic_ft(&m.table);
    let qs = s.q.clone().unwrap_or_else(|| vec![1.0, 2.0, f64::INFINITY]);
    let mut rep = ExperimentReport::new("modulation_probe")
        .param("symbol", m.name.as_str())
        .param("n", s.n)
        .param("length", s.length);
    for q in qs {
        let v = e(modulation_probe(&spread, q))?;
        rep.push_series("q", if q.is_infinite() { -1.0 } else { q });
        rep.push_series("value", v);
        rep.check_le(format!("q={q}: finite"), v, f64::MAX);
    }
    rep.note("q = -1 stands for q = inf");
    Ok(vec![rep])
}

pub fn refine(s: &Settings) -> Result<Vec<ExperimentReport>, String> {
    let mut rep = ExperimentReport::new("refine").param("ladder", s.ladder.clone()).param("seed", s.seed);
    let mut errors = Vec::new();
    for &n in &s.ladder {
        let pg = e(PhaseGrid::balanced(n))?;
        let g = pg.x.clone();
        let amb = gaussian_ambiguity(&g).ratios[0];
        let t = random_trace_class(s.seed, 0.3, &g);
        let exact = fw_inverse(&fw_transform(&t)).max_abs_diff(&t) / t.max_abs();
        let guard = pg.x.length().min(pg.xi.length()) / 4.0;
        rep.push_series("n", n as f64);
        rep.push_series("length", g.length());
        rep.push_series("gaussian_ambiguity_error", amb);
        rep.push_series("round_trip_error", exact);
        rep.push_series("wrap_guard_radius", guard);
        rep.check_lt(format!("n={n}: round trip at roundoff"), exact, 1e-10);
        if guard <= 1.0 {
            rep.note(format!("n={n}: L/4 = {guard:.3} does not clear a unit-support symbol; wrap-sensitive checks need a longer box"));
        }
        errors.push(amb);
    }
    for (i, w) in errors.windows(2).enumerate() {
        rep.check_le(
            format!("ambiguity error non-increasing {} -> {}", s.ladder[i], s.ladder[i + 1]),
            w[1],
            w[0].max(1e-14),
        );
    }
    if errors.len() >= 3 {
        let tail = &errors[errors.len() - 3..];
        if tail[2] > 1e-12 && tail[2] >= 0.5 * tail[0] {
            rep.note("ambiguity error stalls along the ladder: the box length is too small");
        }
    }
    Ok(vec![rep])
}
