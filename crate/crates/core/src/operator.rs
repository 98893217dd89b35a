//! Operators on the line grid stored as dense integral kernels.
//!
//! An operator acts by `(Tf)(t_j) = h sum_k K(t_j, s_k) f(s_k)`; all spectral
//! quantities are read off the weighted matrix `M = h K`, whose singular
//! values are the singular values of the operator.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dft::Roots;
use crate::error::{QhaError, Result};
use crate::fourier_wigner::{fw_inverse, fw_transform};
use crate::grid::{check_line, hermite_family, GridFunction, LineGrid, PhaseFunction};
use crate::linalg;
use crate::tf::{symplectic_ft, LatticePoint};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub grid: LineGrid,
    /// Row-major `K(t_j, s_k)`.
    pub kernel: Vec<Complex64>,
}

/// Singular values, nonincreasing.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularSpectrum {
    pub values: Vec<f64>,
}

impl SingularSpectrum {
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self { values }
    }

    pub fn schatten(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(QhaError::InvalidExponent(format!("Schatten exponent {p} < 1")));
        }
        Ok(crate::grid::weighted_lp(self.values.iter().copied(), p, 1.0))
    }

    /// `(sum_n n^{q/p - 1} s_n^q)^{1/q}`, or `sup_n n^{1/p} s_n` for `q = inf`.
    pub fn lorentz(&self, p: f64, q: f64) -> Result<f64> {
        if p.is_nan() || q.is_nan() || p < 1.0 || q < 1.0 || p.is_infinite() {
            return Err(QhaError::InvalidExponent(format!(
                "Lorentz-Schatten exponents ({p}, {q}) need 1 <= p < inf, q >= 1"
            )));
        }
        let s = &self.values;
        if q.is_infinite() {
            return Ok(s
                .iter()
                .enumerate()
                .fold(0.0, |m, (k, &v)| m.max(((k + 1) as f64).powf(1.0 / p) * v)));
        }
        let acc: f64 = s
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0.0)
            .map(|(k, &v)| ((k + 1) as f64).powf(q / p - 1.0) * v.powf(q))
            .sum();
        Ok(acc.powf(1.0 / q))
    }
}

impl OperatorMatrix {
    pub fn new(grid: LineGrid, kernel: Vec<Complex64>) -> Result<Self> {
        let n = grid.n();
        if kernel.len() != n * n {
            return Err(QhaError::GridMismatch(format!(
                "kernel of length {} on a grid of {n} points",
                kernel.len()
            )));
        }
        Ok(Self { grid, kernel })
    }

    pub fn zeros(grid: &LineGrid) -> Self {
        let n = grid.n();
        Self {
            grid: grid.clone(),
            kernel: vec![ZERO; n * n],
        }
    }

    /// The identity, with kernel `delta_jk / h`.
    pub fn identity(grid: &LineGrid) -> Self {
        let n = grid.n();
        let mut op = Self::zeros(grid);
        for j in 0..n {
            op.kernel[j * n + j] = Complex64::new(1.0 / grid.h(), 0.0);
        }
        op
    }

    /// Operator whose weighted matrix `h K` equals `m`.
    pub fn from_weighted(grid: &LineGrid, m: Vec<Complex64>) -> Result<Self> {
        let inv = 1.0 / grid.h();
        Self::new(grid.clone(), m.into_iter().map(|v| v * inv).collect())
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn weighted(&self) -> Vec<Complex64> {
        let h = self.grid.h();
        self.kernel.iter().map(|v| v * h).collect()
    }

    pub fn at(&self, j: usize, k: usize) -> Complex64 {
        self.kernel[j * self.n() + k]
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            grid: self.grid.clone(),
            kernel: self.kernel.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &OperatorMatrix) -> Result<Self> {
        check_line(&self.grid, &other.grid)?;
        Ok(Self {
            grid: self.grid.clone(),
            kernel: self.kernel.iter().zip(&other.kernel).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &OperatorMatrix) -> Result<Self> {
        check_line(&self.grid, &other.grid)?;
        Ok(Self {
            grid: self.grid.clone(),
            kernel: self.kernel.iter().zip(&other.kernel).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> f64 {
        crate::grid::max_abs_diff(&self.kernel, &other.kernel)
    }

    pub fn max_abs(&self) -> f64 {
        self.kernel.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// `||K - K*||_max` on the weighted matrix.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n();
        let h = self.grid.h();
        let mut d: f64 = 0.0;
        for j in 0..n {
            for k in j..n {
                d = d.max((self.at(j, k) - self.at(k, j).conj()).norm() * h);
            }
        }
        d
    }
}

/// `f (x) g`, the operator `u -> <u, g> f`.
pub fn rank_one(f: &GridFunction, g: &GridFunction) -> Result<OperatorMatrix> {
    check_line(&f.grid, &g.grid)?;
    let mut kernel = Vec::with_capacity(f.values.len() * g.values.len());
    for a in &f.values {
        for b in &g.values {
            kernel.push(a * b.conj());
        }
    }
    OperatorMatrix::new(f.grid.clone(), kernel)
}

pub fn apply(t: &OperatorMatrix, f: &GridFunction) -> Result<GridFunction> {
    check_line(&t.grid, &f.grid)?;
    let n = t.n();
    let h = t.grid.h();
    let values = t
        .kernel
        .chunks_exact(n)
        .map(|row| row.iter().zip(&f.values).map(|(k, v)| k * v).sum::<Complex64>() * h)
        .collect();
    Ok(GridFunction {
        grid: f.grid.clone(),
        values,
    })
}

/// `S T` (apply `t` first).
pub fn compose(s: &OperatorMatrix, t: &OperatorMatrix) -> Result<OperatorMatrix> {
    check_line(&s.grid, &t.grid)?;
    let n = s.n();
    let h = s.grid.h();
    let mut k = linalg::matmul(&s.kernel, &t.kernel, n);
    for v in k.iter_mut() {
        *v *= h;
    }
    OperatorMatrix::new(s.grid.clone(), k)
}

pub fn adjoint(t: &OperatorMatrix) -> OperatorMatrix {
    let n = t.n();
    let mut kernel = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            kernel.push(t.at(k, j).conj());
        }
    }
    OperatorMatrix {
        grid: t.grid.clone(),
        kernel,
    }
}

pub fn trace(t: &OperatorMatrix) -> Complex64 {
    let n = t.n();
    (0..n).map(|j| t.at(j, j)).sum::<Complex64>() * t.grid.h()
}

/// Hilbert-Schmidt pairing `tr(S T*)`.
pub fn hs_inner(s: &OperatorMatrix, t: &OperatorMatrix) -> Result<Complex64> {
    check_line(&s.grid, &t.grid)?;
    let h = s.grid.h();
    let acc: Complex64 = s.kernel.iter().zip(&t.kernel).map(|(a, b)| a * b.conj()).sum();
    Ok(acc * h * h)
}

/// `P T P` with kernel `K(-t, -s)`.
pub fn parity_conjugate(t: &OperatorMatrix) -> OperatorMatrix {
    let n = t.n();
    let g = &t.grid;
    let mut kernel = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            kernel.push(t.at(g.negate_index(j), g.negate_index(k)));
        }
    }
    OperatorMatrix {
        grid: t.grid.clone(),
        kernel,
    }
}

/// The parity operator `(Pf)(t) = f(-t)`.
pub fn parity_operator(grid: &LineGrid) -> OperatorMatrix {
    let n = grid.n();
    let mut op = OperatorMatrix::zeros(grid);
    for j in 0..n {
        op.kernel[j * n + grid.negate_index(j)] = Complex64::new(1.0 / grid.h(), 0.0);
    }
    op
}

/// Kernel of the time-frequency shift `rho(z)`.
pub fn shift_operator(grid: &LineGrid, z: LatticePoint) -> OperatorMatrix {
    let n = grid.n();
    let roots = Roots::new(n);
    let c = (n / 2) as i64;
    let (sx, sxi) = z.steps(n);
    let global = roots.half(-sx * sxi);
    let inv_h = 1.0 / grid.h();
    let mut op = OperatorMatrix::zeros(grid);
    for j in 0..n {
        let k = (j as i64 - sx).rem_euclid(n as i64) as usize;
        op.kernel[j * n + k] = global * roots.half(2 * sxi * (j as i64 - c)) * inv_h;
    }
    op
}

pub fn singular_values(t: &OperatorMatrix) -> Result<SingularSpectrum> {
    Ok(SingularSpectrum::new(linalg::singular_values(&t.weighted(), t.n())?))
}

pub fn schatten_norm(t: &OperatorMatrix, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(QhaError::InvalidExponent(format!("Schatten exponent {p} < 1")));
    }
    if p == 2.0 {
        let h = t.grid.h();
        return Ok(t.kernel.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt() * h);
    }
    singular_values(t)?.schatten(p)
}

pub fn lorentz_schatten_norm(t: &OperatorMatrix, p: f64, q: f64) -> Result<f64> {
    singular_values(t)?.lorentz(p, q)
}

/// Eigenvalues (nondecreasing) of an operator that is self-adjoint up to
/// roundoff.
pub fn hermitian_eigenvalues(t: &OperatorMatrix) -> Result<Vec<f64>> {
    let defect = t.hermitian_defect();
    if defect >= 1e-8 {
        return Err(QhaError::NotSelfAdjoint(defect));
    }
    let n = t.n();
    let m = t.weighted();
    let mut sym = vec![ZERO; n * n];
    for j in 0..n {
        for k in 0..n {
            sym[j * n + k] = (m[j * n + k] + m[k * n + j].conj()) * 0.5;
        }
    }
    linalg::hermitian_eigenvalues(&sym, n)
}

/// Weyl quantization through the spreading function `F_sigma a`.
pub fn weyl_quantize(a: &PhaseFunction) -> OperatorMatrix {
    fw_inverse(&symplectic_ft(a))
}

/// Weyl symbol `F_sigma F_W T`.
pub fn weyl_symbol(t: &OperatorMatrix) -> PhaseFunction {
    symplectic_ft(&fw_transform(t))
}

/// Settings of the random trace-class generator.
#[derive(Clone, Debug)]
pub struct EnsembleSpec {
    pub rank: usize,
    pub hermite_modes: usize,
}

impl Default for EnsembleSpec {
    fn default() -> Self {
        Self {
            rank: 8,
            hermite_modes: 16,
        }
    }
}

/// Random unit vector in the span of the first `modes` Hermite functions.
pub fn random_hermite_vector(rng: &mut impl Rng, family: &[GridFunction]) -> GridFunction {
    let grid = &family[0].grid;
    let mut v = GridFunction::zeros(grid);
    for hk in family {
        let c = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        for (a, b) in v.values.iter_mut().zip(&hk.values) {
            *a += c * b;
        }
    }
    let nrm = v.norm();
    v.scale(Complex64::new(1.0 / nrm, 0.0))
}

/// `T = sum_k c_k u_k (x) v_k` with `|c_k| = exp(-decay k)`, random phases and
/// random unit vectors in a Hermite span.
pub fn random_trace_class(seed: u64, decay: f64, grid: &LineGrid) -> OperatorMatrix {
    random_trace_class_with(seed, decay, grid, &EnsembleSpec::default())
}

pub fn random_trace_class_with(seed: u64, decay: f64, grid: &LineGrid, spec: &EnsembleSpec) -> OperatorMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes = spec.hermite_modes.min(grid.n() / 4).max(1);
    let family = hermite_family(grid, modes);
    let n = grid.n();
    let mut kernel = vec![ZERO; n * n];
    for k in 0..spec.rank {
        let u = random_hermite_vector(&mut rng, &family);
        let v = random_hermite_vector(&mut rng, &family);
        let phase: f64 = rng.random::<f64>() * std::f64::consts::TAU;
        let c = Complex64::from_polar((-decay * k as f64).exp(), phase);
        for (j, a) in u.values.iter().enumerate() {
            let ca = c * a;
            let row = &mut kernel[j * n..(j + 1) * n];
            for (slot, b) in row.iter_mut().zip(&v.values) {
                *slot += ca * b.conj();
            }
        }
    }
    OperatorMatrix {
        grid: grid.clone(),
        kernel,
    }
}

/// Random self-adjoint trace-class operator `(T + T*) / 2`.
pub fn random_self_adjoint(seed: u64, decay: f64, grid: &LineGrid) -> OperatorMatrix {
    let t = random_trace_class(seed, decay, grid);
    t.add(&adjoint(&t)).expect("same grid").scale(Complex64::new(0.5, 0.0))
}
