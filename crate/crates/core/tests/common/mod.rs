#![allow(dead_code)]

use num_complex::Complex64;
use qha::{GridFunction, LineGrid, PhaseFunction, PhaseGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn default_line() -> LineGrid {
    LineGrid::with_length(256, 12.0).unwrap()
}

pub fn small_line() -> LineGrid {
    LineGrid::with_length(32, 32f64.sqrt()).unwrap()
}

pub fn mid_line() -> LineGrid {
    LineGrid::with_length(64, 8.0).unwrap()
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_function(seed: u64, grid: &LineGrid) -> GridFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..grid.n()).map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    GridFunction::new(grid.clone(), values).unwrap()
}

pub fn random_table(seed: u64, grid: &PhaseGrid) -> PhaseFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.n();
    let values = (0..n * n).map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    PhaseFunction::new(grid.clone(), values).unwrap()
}

/// Literal `exp(-pi i x xi) exp(2 pi i xi t) f(t - x)` with integer lattice
/// steps and a circular shift.
pub fn shift_direct(f: &GridFunction, sx: i64, sxi: i64) -> GridFunction {
    let g = &f.grid;
    let n = g.n() as i64;
    let x = sx as f64 * g.h();
    let xi = sxi as f64 * g.dual_spacing();
    let vals = (0..n)
        .map(|j| {
            let t = g.point(j as usize);
            let src = (j - sx).rem_euclid(n) as usize;
            Complex64::from_polar(1.0, -std::f64::consts::PI * x * xi + std::f64::consts::TAU * xi * t)
                * f.values[src]
        })
        .collect();
    GridFunction::new(g.clone(), vals).unwrap()
}
