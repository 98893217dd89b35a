use std::f64::consts::PI;
use std::io::Write;
use std::process::Command;

use num_complex::Complex64;
use qha::convolution::{op_op_point_oracle, werner_young_report};
use qha::fourier_wigner::{fw_point_oracle, hausdorff_young_report};
use qha::grid::{function_norm, hermite, inner_product};
use qha::multiplier::estimate::random_window;
use qha::multiplier::experiments::{
    adjoint_parity_check, algebra_nesting_check, blow_up_experiment, commutation_check, duality_check,
    equivalence_experiment, gaussian_weyl_experiment, lorentz_symbol_bound, m_at_zero_recovery,
    parity_limit_experiment, weyl_commutation_check,
};
use qha::multiplier::{
    bochner_riesz, bump_family, constant, estimate_multiplier_norm, gaussian_window_symbol, sine_symbol, smooth_bump,
    Budget, Side,
};
use qha::operator::{random_trace_class, rank_one, weyl_quantize, weyl_symbol};
use qha::tf::symplectic_form;
use qha::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(id: u32, name: &str, pass: bool, detail: String) {
    let line = format!(
        "criterion {id:>2} {name}: {} ({detail})\n",
        if pass { "PASS" } else { "FAIL" }
    );
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
    assert!(pass, "{}", line.trim_end());
}

fn report_verdict(id: u32, name: &str, reps: &[ExperimentReport]) {
    let failing: Vec<String> = reps
        .iter()
        .flat_map(|r| r.failing_checks().into_iter().map(move |c| format!("{}: {} = {:.3e} vs {:.3e}", r.name, c.name, c.value, c.bound)))
        .collect();
    let worst = reps.iter().filter_map(|r| r.max_ratio).reduce(f64::max);
    let detail = if !failing.is_empty() {
        failing.join("; ")
    } else if let Some(w) = worst {
        format!("{} reports, max ratio {w:.3e}", reps.len())
    } else {
        format!("{} reports", reps.len())
    };
    verdict(id, name, reps.iter().all(|r| r.pass), detail);
}

fn line256() -> LineGrid {
    LineGrid::with_length(256, 12.0).unwrap()
}

fn line128() -> LineGrid {
    LineGrid::with_length(128, 12.0).unwrap()
}

fn random_phase(seed: u64, grid: &PhaseGrid) -> PhaseFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.n();
    let values = (0..n * n).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    PhaseFunction::new(grid.clone(), values).unwrap()
}

fn budget() -> Budget {
    Budget::default()
}

#[test]
fn c01_gaussian_ambiguity() {
    let g = line256();
    let pg = PhaseGrid::new(g.clone());
    let phi = GridFunction::gaussian(&g);
    let a = ambiguity(&phi, &phi).unwrap();
    let mut err: f64 = 0.0;
    for jx in 0..g.n() {
        for jxi in 0..g.n() {
            let (x, xi) = pg.point(jx, jxi);
            err = err.max((a.at(jx, jxi) - (-PI * (x * x + xi * xi) / 2.0).exp()).norm());
        }
    }
    verdict(1, "Gaussian ambiguity", err < 1e-6, format!("max error {err:.3e}"));
}

#[test]
fn c02_pool_unitarity() {
    let g = line256();
    let mut worst: f64 = 0.0;
    for seed in 0..20 {
        let t = random_trace_class(100 + seed, 0.2, &g);
        let hs = singular_values(&t).unwrap().values.iter().map(|s| s * s).sum::<f64>().sqrt();
        let l2 = function_norm(&fw_transform(&t), 2.0).unwrap();
        worst = worst.max((l2 - hs).abs() / hs);
    }
    verdict(2, "Pool unitarity", worst < 1e-10, format!("max relative error {worst:.3e}"));
}

#[test]
fn c03_covariance() {
    let g = line256();
    let pg = PhaseGrid::new(g.clone());
    let n = g.n() as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut worst: f64 = 0.0;
    let mut shifts = 0;
    while shifts < 32 {
        let sx = rng.random_range(-(3.0 / g.h()) as i64..=(3.0 / g.h()) as i64);
        let sxi = rng.random_range(-(3.0 / pg.xi.h()) as i64..=(3.0 / pg.xi.h()) as i64);
        let zeta = LatticePoint::from_steps(g.n(), sx, sxi);
        let (zx, zxi) = zeta.coords(&pg);
        if zx.hypot(zxi) > 3.0 {
            continue;
        }
        shifts += 1;
        let f = random_window(2 * shifts as u64, &g, 12);
        let h = random_window(2 * shifts as u64 + 1, &g, 12);
        let lhs = ambiguity(&tf_shift(&f, zeta), &h).unwrap();
        let rhs = ambiguity(&f, &h).unwrap();
        for jx in 0..n {
            for jxi in 0..n {
                let (ux, uxi) = (jx - sx, jxi - sxi);
                if !(0..n).contains(&ux) || !(0..n).contains(&uxi) {
                    continue;
                }
                let z = pg.point(jx as usize, jxi as usize);
                let phase = Complex64::from_polar(1.0, PI * symplectic_form((zx, zxi), z));
                let expect = phase * rhs.at(ux as usize, uxi as usize);
                worst = worst.max((lhs.at(jx as usize, jxi as usize) - expect).norm());
            }
        }
    }
    verdict(3, "covariance", worst < 1e-10, format!("max error {worst:.3e} over 32 shifts"));
}

#[test]
fn c04_symplectic_ft() {
    let pg = PhaseGrid::new(line256());
    let f = random_phase(4, &pg);
    let ff = symplectic_ft(&f);
    let inv = symplectic_ft(&ff).max_abs_diff(&f) / f.max_abs();
    let n0 = function_norm(&f, 2.0).unwrap();
    let parseval = (function_norm(&ff, 2.0).unwrap() - n0).abs() / n0;
    verdict(
        4,
        "symplectic Fourier involution and Parseval",
        inv < 1e-10 && parseval < 1e-10,
        format!("involution {inv:.3e}, Parseval {parseval:.3e}"),
    );
}

#[test]
fn c05_round_trip_and_identity_multiplier() {
    let g = line256();
    let pg = PhaseGrid::new(g.clone());
    let one = constant(&pg, 1.0);
    let mut worst: f64 = 0.0;
    let mut oracle: f64 = 0.0;
    for seed in 0..5 {
        let t = random_trace_class(500 + seed, 0.3, &g);
        let scale = t.max_abs();
        let f = fw_transform(&t);
        worst = worst.max(fw_inverse(&f).max_abs_diff(&t) / scale);
        worst = worst.max(fw_multiplier(&one, &t).unwrap().max_abs_diff(&t) / scale);
        for (jx, jxi) in [(128, 128), (120, 140), (3, 250)] {
            let o = fw_point_oracle(&t, LatticePoint::new(jx, jxi));
            oracle = oracle.max((o - f.at(jx as usize, jxi as usize)).norm());
        }
    }
    verdict(
        5,
        "Fourier-Wigner round trip and identity multiplier",
        worst < 1e-10 && oracle < 1e-10,
        format!("kernel error {worst:.3e}, point oracle {oracle:.3e}"),
    );
}

#[test]
fn c06_werner_young() {
    let g = line256();
    let functions: Vec<PhaseFunction> = (0..50).map(|i| weyl_symbol(&random_trace_class(6000 + i, 0.4, &g))).collect();
    let left: Vec<_> = (0..50).map(|i| random_trace_class(7000 + i, 0.25, &g)).collect();
    let ops: Vec<_> = (0..50).map(|i| random_trace_class(8000 + i, 0.5, &g)).collect();
    let reps: Vec<_> = [(1.0, 1.0), (2.0, 2.0), (1.0, 2.0)]
        .iter()
        .map(|&(p, q)| werner_young_report(&functions, &left, &ops, p, q).unwrap())
        .collect();
    report_verdict(6, "Werner-Young", &reps);
}

#[test]
fn c07_hausdorff_young() {
    let g = line256();
    let ens: Vec<_> = (0..20).map(|i| random_trace_class(700 + i, 0.3, &g)).collect();
    let mut reps: Vec<_> = [2.0, 1.0, 4.0 / 3.0].iter().map(|&p| hausdorff_young_report(&ens, p).unwrap()).collect();
    let reported = reps[2].ratios.len() as f64;
    reps[2].check_ge("p=4/3 ratios reported", reported, ens.len() as f64);
    report_verdict(7, "quantum Hausdorff-Young endpoints", &reps);
}

#[test]
fn c08_commutation() {
    let g = line256();
    let pg = PhaseGrid::new(g.clone());
    let symbols = [
        gaussian_window_symbol(&pg, 1.0).unwrap(),
        bochner_riesz(&pg, 1.0).unwrap(),
        sine_symbol(&pg),
    ];
    let mut reps = Vec::new();
    for m in &symbols {
        for k in 0..5 {
            let t = random_trace_class(800 + 2 * k, 0.3, &g);
            let s = random_trace_class(801 + 2 * k, 0.3, &g);
            reps.push(commutation_check(m, &t, &s).unwrap());
        }
    }
    let t = random_trace_class(900, 0.3, &g);
    let s = random_trace_class(901, 0.3, &g);
    let lhs_t = fw_multiplier(&symbols[0], &t).unwrap();
    let rhs = classical_multiplier(&symbols[0], &op_op_convolve(&t, &s).unwrap()).unwrap();
    let mut direct: f64 = 0.0;
    for (jx, jxi) in [(128, 128), (131, 122), (100, 160)] {
        let o = op_op_point_oracle(&lhs_t, &s, LatticePoint::new(jx, jxi)).unwrap();
        direct = direct.max((o - rhs.at(jx as usize, jxi as usize)).norm());
    }
    let mut oracle = ExperimentReport::new("direct trace oracle");
    oracle.check_lt("pointwise", direct, 1e-9);
    reps.push(oracle);
    report_verdict(8, "commutation", &reps);
}

#[test]
fn c09_weyl_commutation() {
    let g = line256();
    let pg = PhaseGrid::new(g.clone());
    let phi = GridFunction::gaussian(&g);
    let reps = vec![
        weyl_commutation_check(&gaussian_window_symbol(&pg, 1.0).unwrap(), &rank_one(&phi, &phi).unwrap()).unwrap(),
        weyl_commutation_check(&sine_symbol(&pg), &random_trace_class(9, 0.3, &g)).unwrap(),
        weyl_commutation_check(&bochner_riesz(&pg, 2.0).unwrap(), &random_trace_class(10, 0.3, &g)).unwrap(),
    ];
    report_verdict(9, "Weyl-symbol commutation", &reps);
}

fn chirped_gaussian(pg: &PhaseGrid) -> MultiplierSymbol {
    let table = PhaseFunction::from_fn(pg, |x, xi| {
        Complex64::from_polar((-PI * (x * x + 0.5 * xi * xi)).exp(), 2.0 * PI * (0.7 * x + 0.3 * xi * xi))
    });
    MultiplierSymbol::new("chirped gaussian", table, None).unwrap()
}

#[test]
fn c10_adjoint_and_parity() {
    let g = line256();
    let pg = PhaseGrid::new(g.clone());
    let symbols = [
        chirped_gaussian(&pg),
        smooth_bump(&pg, (0.5, -0.3), 1.0).unwrap(),
        bochner_riesz(&pg, 1.0).unwrap(),
    ];
    let reps: Vec<_> = symbols
        .iter()
        .enumerate()
        .map(|(i, m)| adjoint_parity_check(m, &random_trace_class(1000 + i as u64, 0.3, &g)).unwrap())
        .collect();
    report_verdict(10, "adjoint identity and parity conjugation", &reps);
}

#[test]
fn c11_m2_isometry() {
    let pg = PhaseGrid::new(line128());
    let symbols = [
        gaussian_window_symbol(&pg, 1.0).unwrap(),
        smooth_bump(&pg, (0.5, 0.0), 1.5).unwrap(),
        chirped_gaussian(&pg).scale(0.5),
    ];
    let mut rep = ExperimentReport::new("m2_isometry");
    for m in &symbols {
        let est = estimate_multiplier_norm(m, 2.0, 2.0, Side::Quantum, &budget()).unwrap();
        rep.push_ratio(est.value / m.sup_norm);
        rep.check_close(format!("{} estimate / sup", m.name), est.value / m.sup_norm, 1.0, 0.05);
    }
    report_verdict(11, "M2 isometry", &[rep]);
}

#[test]
fn c12_duality() {
    let pg = PhaseGrid::new(line128());
    let symbols = [
        gaussian_window_symbol(&pg, 1.0).unwrap(),
        smooth_bump(&pg, (0.0, 0.0), 1.5).unwrap(),
        bochner_riesz(&pg, 2.0).unwrap(),
    ];
    let pairs = [(1.0, 1.0), (1.0, 2.0), (4.0 / 3.0, 2.0)];
    let mut reps = Vec::new();
    for m in &symbols {
        for &(p, q) in &pairs {
            reps.push(duality_check(m, p, q, &budget()).unwrap());
        }
    }
    report_verdict(12, "duality", &reps);
}

#[test]
fn c13_gaussian_weyl() {
    let g = line256();
    let rep = gaussian_weyl_experiment(&g, &[0.3, 0.45, 0.5, 0.55, 1.0]).unwrap();
    let pg = PhaseGrid::new(g.clone());
    let phi = GridFunction::gaussian(&g);
    let l = weyl_quantize(&qha::multiplier::gaussian_symbol(&pg, 0.5f64.sqrt()).unwrap().table);
    let proj = rank_one(&phi, &phi).unwrap();
    let mut oracle = ExperimentReport::new("projector oracle");
    oracle.check_lt("eps2=0.5 kernel vs phi0 (x) phi0", l.max_abs_diff(&proj) / proj.max_abs(), 1e-6);
    report_verdict(13, "Gaussian Weyl family", &[rep, oracle]);
}

#[test]
fn c14_gaussian_lp() {
    let pg = PhaseGrid::new(line256());
    let mut worst: f64 = 0.0;
    for k in [1.0, 2.0, 4.0] {
        let f = PhaseFunction::from_real_fn(&pg, |x, xi| (-PI * k * (x * x + xi * xi)).exp());
        for p in [1.0, 2.0, 4.0] {
            worst = worst.max((function_norm(&f, p).unwrap().powf(p) - 1.0 / (k * p)).abs());
        }
    }
    verdict(14, "Gaussian L^p norms", worst < 1e-6, format!("max error {worst:.3e}"));
}

#[test]
fn c15_parity_limit() {
    let g = line256();
    let h0 = hermite(&g, 0).unwrap();
    let h1 = hermite(&g, 1).unwrap();
    let h2 = hermite(&g, 2).unwrap();
    let even = h0.add(&h2).unwrap();
    let eps2 = [0.5, 0.2, 0.1, 0.05, 0.02];
    let mut reps = Vec::new();
    for (phi, psi, limit) in [(&h0, &h0, 2.0), (&h1, &h1, -2.0), (&even, &h1, 0.0)] {
        let expect = 2.0 * inner_product(&phi.parity(), psi).unwrap();
        assert!((expect - Complex64::new(limit, 0.0)).norm() < 1e-10);
        reps.push(parity_limit_experiment(&eps2, phi, psi).unwrap());
    }
    report_verdict(15, "parity limit", &reps);
}

#[test]
fn c16_m_at_zero() {
    let pg = PhaseGrid::new(line256());
    let eps2 = [0.3, 0.5, 1.0];
    let reps: Vec<_> = [constant(&pg, 1.0), bochner_riesz(&pg, 1.0).unwrap(), sine_symbol(&pg)]
        .iter()
        .map(|m| m_at_zero_recovery(m, &eps2).unwrap())
        .collect();
    report_verdict(16, "m(0) recovery", &reps);
}

#[test]
fn c17_equivalence() {
    let pg = PhaseGrid::new(line128());
    let family = bump_family(&pg, 2.0).unwrap();
    let rep = equivalence_experiment(&family, &[1.0, 2.0], &budget()).unwrap();
    report_verdict(17, "quantum/classical equivalence", &[rep]);
}

#[test]
fn c18_algebra_and_nesting() {
    let g = line256();
    let pg = PhaseGrid::new(g.clone());
    let t = random_trace_class(18, 0.3, &g);
    let reps = vec![
        algebra_nesting_check(&gaussian_window_symbol(&pg, 1.0).unwrap(), &bochner_riesz(&pg, 1.0).unwrap(), &t).unwrap(),
        algebra_nesting_check(&chirped_gaussian(&pg), &sine_symbol(&pg), &t).unwrap(),
        lorentz_symbol_bound(&PhaseGrid::new(line128()), 4.0 / 3.0, 4.0, &[1.0, 2.0, 3.0, 4.0], 18, 8).unwrap(),
    ];
    report_verdict(18, "Banach-algebra composition and nesting", &reps);
}

#[test]
fn c19_blow_up() {
    let pg = PhaseGrid::new(line128());
    let m = gaussian_window_symbol(&pg, 1.0).unwrap();
    let b = Budget {
        hermite_modes: 32,
        ..budget()
    };
    let rep = blow_up_experiment(&m, &[2, 4, 8, 16], &b).unwrap();
    report_verdict(19, "blow-up for q < p", &[rep]);
}

#[test]
fn c20_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("run{run}"));
        let status = Command::new(env!("CARGO_BIN_EXE_qha"))
            .args(["equivalence", "--n", "64", "--length", "8", "--seed", "7", "--p", "1,2", "--frozen-clock"])
            .arg("--out")
            .arg(&out)
            .env("QHA_THREADS", if run == 0 { "1" } else { "4" })
            .status()
            .unwrap();
        assert!(status.code().is_some());
        outputs.push(std::fs::read(out.join("equivalence.json")).unwrap());
    }
    let same = outputs[0] == outputs[1] && !outputs[0].is_empty();
    verdict(20, "determinism", same, format!("{} bytes per report", outputs[0].len()));
}
