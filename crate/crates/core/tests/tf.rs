mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use qha::grid::{function_norm, inner_product};
use qha::multiplier::estimate::random_window;
use qha::tf::{symplectic_form, symplectic_phase};
use qha::{ambiguity, symplectic_ft, tf_shift, wigner, GridFunction, LatticePoint, PhaseFunction, PhaseGrid};
use std::f64::consts::PI;

#[test]
fn symplectic_form_examples() {
    assert_eq!(symplectic_form((1.0, 0.0), (0.0, 1.0)), -1.0);
    assert_eq!(symplectic_form((0.3, -2.0), (0.3, -2.0)), 0.0);
    let (z, w) = ((0.7, 1.3), (-2.1, 0.4));
    assert_eq!(symplectic_form(z, w), -symplectic_form(w, z));
}

#[test]
fn shift_matches_literal_formula_and_is_unitary() {
    let g = mid_line();
    let f = random_window(1, &g, 10);
    for (sx, sxi) in [(0, 0), (3, -5), (-7, 2), (40, 33), (-100, 71)] {
        let z = LatticePoint::from_steps(g.n(), sx, sxi);
        let a = tf_shift(&f, z);
        assert!(a.max_abs_diff(&shift_direct(&f, sx, sxi)) < 1e-12, "({sx},{sxi})");
        assert!((a.norm() - f.norm()).abs() < 1e-12);
    }
    assert_eq!(tf_shift(&f, LatticePoint::origin(g.n())).values, f.values);
}

#[test]
fn group_law_sign() {
    // rho(z) rho(w) = exp(+i pi sigma(z, w)) rho(z + w) with sigma((x,xi),(x',xi')) = x' xi - x xi'.
    let g = mid_line();
    let pg = PhaseGrid::new(g.clone());
    let n = g.n();
    let f = random_window(2, &g, 10);
    for ((a, b), (cx, d)) in [((2, 3), (-4, 1)), ((5, -1), (3, 7)), ((-6, -2), (1, -9))] {
        let z = LatticePoint::from_steps(n, a, b);
        let w = LatticePoint::from_steps(n, cx, d);
        let two_step = shift_direct(&shift_direct(&f, cx, d), a, b);
        let sigma = symplectic_form(z.coords(&pg), w.coords(&pg));
        let plus = tf_shift(&f, z.add(&w, n)).scale(Complex64::from_polar(1.0, PI * sigma));
        let minus = tf_shift(&f, z.add(&w, n)).scale(Complex64::from_polar(1.0, -PI * sigma));
        assert!(two_step.max_abs_diff(&plus) < 1e-10);
        assert!(sigma == 0.0 || two_step.max_abs_diff(&minus) > 1e-3);
        assert!((symplectic_phase(n, &z, &w) - Complex64::from_polar(1.0, PI * sigma)).norm() < 1e-12);
    }
}

#[test]
fn ambiguity_matches_inner_products_everywhere() {
    let g = small_line();
    let f = random_function(3, &g);
    let h = random_function(4, &g);
    let a = ambiguity(&f, &h).unwrap();
    let n = g.n();
    for jx in 0..n {
        for jxi in 0..n {
            let z = LatticePoint::new(jx as i64, jxi as i64);
            let direct = inner_product(&f, &tf_shift(&h, z)).unwrap();
            assert!((direct - a.at(jx, jxi)).norm() < 1e-10);
        }
    }
    let c0 = g.center();
    assert!((a.at(c0, c0) - inner_product(&f, &h).unwrap()).norm() < 1e-14);
}

#[test]
fn gaussian_ambiguity_and_wigner() {
    let g = default_line();
    let pg = PhaseGrid::new(g.clone());
    let phi = GridFunction::gaussian(&g);
    let a = ambiguity(&phi, &phi).unwrap();
    let ea = PhaseFunction::from_real_fn(&pg, |x, xi| (-PI * (x * x + xi * xi) / 2.0).exp());
    assert!(a.max_abs_diff(&ea) < 1e-6);
    let w = wigner(&phi, &phi).unwrap();
    let ew = PhaseFunction::from_real_fn(&pg, |x, xi| 2.0 * (-2.0 * PI * (x * x + xi * xi)).exp());
    assert!(w.max_abs_diff(&ew) < 1e-6);
}

#[test]
fn wigner_is_real_with_unit_mass() {
    let g = default_line();
    let f = random_window(5, &g, 16);
    let w = wigner(&f, &f).unwrap();
    assert!(w.values.iter().all(|v| v.im.abs() < 1e-10));
    assert!((w.integral() - c(f.norm().powi(2), 0.0)).norm() < 1e-8);
}

#[test]
fn moyal_identity() {
    let g = default_line();
    let fs: Vec<_> = (0..4).map(|i| random_window(10 + i, &g, 16)).collect();
    let lhs = ambiguity(&fs[0], &fs[1]).unwrap().inner(&ambiguity(&fs[2], &fs[3]).unwrap()).unwrap();
    let rhs = inner_product(&fs[0], &fs[2]).unwrap() * inner_product(&fs[1], &fs[3]).unwrap().conj();
    assert!((lhs - rhs).norm() < 1e-8);
}

#[test]
fn ambiguity_conjugate_symmetry() {
    let g = mid_line();
    let f = random_function(6, &g);
    let h = random_function(7, &g);
    let a = ambiguity(&f, &h).unwrap();
    let b = ambiguity(&h, &f).unwrap().reflect().conj();
    let n = g.n();
    // Index 0 negates onto itself only modulo n, where the shift picks up a sign.
    for jx in 1..n {
        for jxi in 1..n {
            assert!((a.at(jx, jxi) - b.at(jx, jxi)).norm() < 1e-12);
        }
    }
}

#[test]
fn symplectic_ft_of_gaussian_against_direct_sum() {
    let pg = PhaseGrid::with_length(32, 32f64.sqrt()).unwrap();
    let f = PhaseFunction::from_real_fn(&pg, |x, xi| (-PI * (x * x + xi * xi)).exp());
    let fast = symplectic_ft(&f);
    let n = pg.n();
    let cell = pg.cell_area();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let zeta = pg.point(a, b);
            let mut acc = c(0.0, 0.0);
            for j in 0..n {
                for k in 0..n {
                    let z = pg.point(j, k);
                    acc += f.at(j, k) * Complex64::from_polar(1.0, -2.0 * PI * symplectic_form(zeta, z));
                }
            }
            worst = worst.max((acc * cell - fast.at(a, b)).norm());
        }
    }
    assert!(worst < 1e-12);
    assert!(fast.max_abs_diff(&f) < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn symplectic_ft_involution_and_parseval(seed in any::<u64>()) {
        let pg = PhaseGrid::with_length(32, 5.0).unwrap();
        let f = random_table(seed, &pg);
        let ff = symplectic_ft(&f);
        prop_assert!(symplectic_ft(&ff).max_abs_diff(&f) < 1e-12);
        let (a, b) = (function_norm(&f, 2.0).unwrap(), function_norm(&ff, 2.0).unwrap());
        prop_assert!((a - b).abs() < 1e-12 * a);
    }

    #[test]
    fn covariance(seed in any::<u64>(), sx in -6i64..6, sxi in -6i64..6) {
        let g = small_line();
        let pg = PhaseGrid::new(g.clone());
        let n = g.n() as i64;
        let f = random_function(seed, &g);
        let h = random_function(seed.wrapping_add(1), &g);
        let zeta = LatticePoint::from_steps(g.n(), sx, sxi);
        let lhs = ambiguity(&tf_shift(&f, zeta), &h).unwrap();
        let rhs = ambiguity(&f, &h).unwrap();
        for jx in 0..n {
            for jxi in 0..n {
                let (ux, uxi) = (jx - sx, jxi - sxi);
                if !(0..n).contains(&ux) || !(0..n).contains(&uxi) {
                    continue;
                }
                let z = pg.point(jx as usize, jxi as usize);
                let want = Complex64::from_polar(1.0, PI * symplectic_form(zeta.coords(&pg), z)) * rhs.at(ux as usize, uxi as usize);
                prop_assert!((lhs.at(jx as usize, jxi as usize) - want).norm() < 1e-10);
            }
        }
    }
}
