//! Centered discrete Fourier transforms on a lattice with `n` points indexed
//! around `c = n / 2`.
//!
//! `forward` computes `out[b] = sum_j x[j] exp(-2 pi i (j - c)(b - c) / n)` and
//! `inverse` the same with the opposite sign (no normalisation). Both reduce
//! to an ordinary FFT conjugated by the alternating sign `(-1)^j`.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub(crate) struct CenteredDft {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    tail_sign: f64,
}

impl CenteredDft {
    pub(crate) fn new(n: usize) -> Self {
        debug_assert!(n % 2 == 0);
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        // exp(-i pi n / 2) = (-1)^(n/2)
        let tail_sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
        Self {
            n,
            forward,
            inverse,
            tail_sign,
        }
    }

    /// Forward transform of every length-`n` row of `data`.
    pub(crate) fn forward_rows(&self, data: &mut [Complex64]) {
        self.run(data, &self.forward);
    }

    /// Inverse (positive exponent, unnormalised) transform of every row.
    pub(crate) fn inverse_rows(&self, data: &mut [Complex64]) {
        self.run(data, &self.inverse);
    }

    fn run(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        assert_eq!(data.len() % self.n, 0);
        if data.is_empty() {
            return;
        }
        self.alternate(data, 1.0);
        fft.process(data);
        self.alternate(data, self.tail_sign);
    }

    fn alternate(&self, data: &mut [Complex64], scale: f64) {
        for row in data.chunks_exact_mut(self.n) {
            for (j, v) in row.iter_mut().enumerate() {
                if j % 2 == 1 {
                    *v *= -scale;
                } else if scale != 1.0 {
                    *v *= scale;
                }
            }
        }
    }
}

/// Table of `exp(i pi k / n)` for `k` in `0..2n`, used for the exact lattice
/// phases `exp(+-i pi x xi)` and modulations `exp(2 pi i xi t)`.
pub(crate) struct Roots {
    n: i64,
    table: Vec<Complex64>,
}

impl Roots {
    pub(crate) fn new(n: usize) -> Self {
        let table = (0..2 * n)
            .map(|k| Complex64::from_polar(1.0, std::f64::consts::PI * k as f64 / n as f64))
            .collect();
        Self {
            n: n as i64,
            table,
        }
    }

    /// `exp(i pi k / n)`.
    #[inline]
    pub(crate) fn half(&self, k: i64) -> Complex64 {
        self.table[k.rem_euclid(2 * self.n) as usize]
    }
}

pub(crate) fn transpose_square(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}
