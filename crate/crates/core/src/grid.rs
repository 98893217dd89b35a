//! Centered sampling of the line and of phase space, quadrature and norms.

use num_complex::Complex64;

use crate::error::{QhaError, Result};

/// Uniform centered grid `x_j = (j - n/2) h`, `j = 0..n`.
///
/// The reciprocal spacing `1 / (n h)` is stored alongside `h` so that taking
/// the dual grid twice returns a bit-identical grid.
#[derive(Clone, Debug, PartialEq)]
pub struct LineGrid {
    n: usize,
    h: f64,
    dual_h: f64,
}

impl LineGrid {
    pub fn new(n: usize, h: f64) -> Result<Self> {
        if n < 2 || n % 2 != 0 {
            return Err(QhaError::InvalidParameter(format!(
                "grid size must be even and at least 2, got {n}"
            )));
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(QhaError::InvalidParameter(format!("spacing must be positive, got {h}")));
        }
        Ok(Self {
            n,
            h,
            dual_h: 1.0 / (n as f64 * h),
        })
    }

    /// Grid of `n` points covering an interval of total length `length`.
    pub fn with_length(n: usize, length: f64) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(QhaError::InvalidParameter(format!("length must be positive, got {length}")));
        }
        Self::new(n, length / n as f64)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn length(&self) -> f64 {
        self.n as f64 * self.h
    }

    /// Index of the origin.
    pub fn center(&self) -> usize {
        self.n / 2
    }

    /// Spacing of the reciprocal grid, `1 / (n h)`.
    pub fn dual_spacing(&self) -> f64 {
        self.dual_h
    }

    pub fn dual(&self) -> LineGrid {
        LineGrid {
            n: self.n,
            h: self.dual_h,
            dual_h: self.h,
        }
    }

    pub fn point(&self, j: usize) -> f64 {
        (j as f64 - self.center() as f64) * self.h
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.point(j)).collect()
    }

    /// Index `j` with `x_j` closest to `x`, if it lies on the grid.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let j = (x / self.h).round() + self.center() as f64;
        if j >= 0.0 && j < self.n as f64 {
            Some(j as usize)
        } else {
            None
        }
    }

    /// Circular negation `j -> -j` about the center.
    pub fn negate_index(&self, j: usize) -> usize {
        (self.n - j) % self.n
    }
}

/// Phase space `x` times `xi`, where `xi` is the reciprocal grid of `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseGrid {
    pub x: LineGrid,
    pub xi: LineGrid,
}

impl PhaseGrid {
    pub fn new(x: LineGrid) -> Self {
        let xi = x.dual();
        Self { x, xi }
    }

    pub fn with_length(n: usize, length: f64) -> Result<Self> {
        Ok(Self::new(LineGrid::with_length(n, length)?))
    }

    /// Grid with `L = sqrt(n)`, so that both axes have spacing `1/sqrt(n)`.
    pub fn balanced(n: usize) -> Result<Self> {
        Self::with_length(n, (n as f64).sqrt())
    }

    /// Exchanges the roles of position and frequency.
    pub fn swapped(&self) -> Self {
        Self {
            x: self.xi.clone(),
            xi: self.x.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.x.n()
    }

    pub fn cell_area(&self) -> f64 {
        self.x.h() * self.xi.h()
    }

    pub fn point(&self, jx: usize, jxi: usize) -> (f64, f64) {
        (self.x.point(jx), self.xi.point(jxi))
    }
}

/// Samples of a function on a [`LineGrid`].
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    pub grid: LineGrid,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: LineGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(QhaError::GridMismatch(format!(
                "{} samples on a grid of {} points",
                values.len(),
                grid.n()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: &LineGrid) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![Complex64::new(0.0, 0.0); grid.n()],
        }
    }

    pub fn from_fn(grid: &LineGrid, f: impl Fn(f64) -> Complex64) -> Self {
        Self {
            grid: grid.clone(),
            values: grid.points().into_iter().map(f).collect(),
        }
    }

    pub fn from_real_fn(grid: &LineGrid, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |t| Complex64::new(f(t), 0.0))
    }

    /// The normalised Gaussian `2^{1/4} exp(-pi t^2)`.
    pub fn gaussian(grid: &LineGrid) -> Self {
        Self::from_real_fn(grid, |t| 2f64.powf(0.25) * (-std::f64::consts::PI * t * t).exp())
    }

    pub fn norm(&self) -> f64 {
        (self.grid.h() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &GridFunction) -> Result<Self> {
        check_line(&self.grid, &other.grid)?;
        Ok(Self {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    /// `(Pf)(t) = f(-t)` with circular index negation.
    pub fn parity(&self) -> Self {
        let g = &self.grid;
        Self {
            grid: g.clone(),
            values: (0..g.n()).map(|j| self.values[g.negate_index(j)]).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &GridFunction) -> f64 {
        max_abs_diff(&self.values, &other.values)
    }
}

/// Samples of a function on a [`PhaseGrid`], stored row-major as `[jx][jxi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseFunction {
    pub grid: PhaseGrid,
    pub values: Vec<Complex64>,
}

impl PhaseFunction {
    pub fn new(grid: PhaseGrid, values: Vec<Complex64>) -> Result<Self> {
        let n = grid.n();
        if values.len() != n * n {
            return Err(QhaError::GridMismatch(format!(
                "{} samples on a {n}x{n} phase grid",
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: &PhaseGrid) -> Self {
        let n = grid.n();
        Self {
            grid: grid.clone(),
            values: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn constant(grid: &PhaseGrid, c: Complex64) -> Self {
        let n = grid.n();
        Self {
            grid: grid.clone(),
            values: vec![c; n * n],
        }
    }

    pub fn from_fn(grid: &PhaseGrid, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let n = grid.n();
        let xs = grid.x.points();
        let xis = grid.xi.points();
        let mut values = Vec::with_capacity(n * n);
        for &x in &xs {
            for &xi in &xis {
                values.push(f(x, xi));
            }
        }
        Self {
            grid: grid.clone(),
            values,
        }
    }

    pub fn from_real_fn(grid: &PhaseGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        Self::from_fn(grid, |x, xi| Complex64::new(f(x, xi), 0.0))
    }

    /// Indicator of the single lattice cell at `(jx, jxi)`.
    pub fn delta(grid: &PhaseGrid, jx: usize, jxi: usize, mass: f64) -> Self {
        let mut f = Self::zeros(grid);
        let n = grid.n();
        f.values[jx * n + jxi] = Complex64::new(mass / grid.cell_area(), 0.0);
        f
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn at(&self, jx: usize, jxi: usize) -> Complex64 {
        self.values[jx * self.n() + jxi]
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn mul(&self, other: &PhaseFunction) -> Result<Self> {
        check_phase(&self.grid, &other.grid)?;
        Ok(Self {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }

    pub fn add(&self, other: &PhaseFunction) -> Result<Self> {
        check_phase(&self.grid, &other.grid)?;
        Ok(Self {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &PhaseFunction) -> Result<Self> {
        check_phase(&self.grid, &other.grid)?;
        Ok(Self {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        })
    }

    /// `z -> F(-z)` with circular negation of both indices.
    pub fn reflect(&self) -> Self {
        let n = self.n();
        let gx = &self.grid.x;
        let mut values = Vec::with_capacity(n * n);
        for jx in 0..n {
            for jxi in 0..n {
                values.push(self.at(gx.negate_index(jx), gx.negate_index(jxi)));
            }
        }
        Self {
            grid: self.grid.clone(),
            values,
        }
    }

    /// Quadrature `sum F * cell_area`.
    pub fn integral(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() * self.grid.cell_area()
    }

    /// `sum F conj(G) * cell_area`.
    pub fn inner(&self, other: &PhaseFunction) -> Result<Complex64> {
        check_phase(&self.grid, &other.grid)?;
        let s: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum();
        Ok(s * self.grid.cell_area())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn max_abs_diff(&self, other: &PhaseFunction) -> f64 {
        max_abs_diff(&self.values, &other.values)
    }

    /// Transposes the table onto the swapped grid.
    pub fn swapped(&self) -> Self {
        let n = self.n();
        let mut values = self.values.clone();
        crate::dft::transpose_square(&mut values, n);
        Self {
            grid: self.grid.swapped(),
            values,
        }
    }
}

pub(crate) fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

pub(crate) fn check_line(a: &LineGrid, b: &LineGrid) -> Result<()> {
    if a != b {
        return Err(QhaError::GridMismatch(format!(
            "(n={}, h={}) vs (n={}, h={})",
            a.n(),
            a.h(),
            b.n(),
            b.h()
        )));
    }
    Ok(())
}

pub(crate) fn check_phase(a: &PhaseGrid, b: &PhaseGrid) -> Result<()> {
    check_line(&a.x, &b.x)?;
    check_line(&a.xi, &b.xi)
}

fn check_exponent(p: f64, name: &str) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(QhaError::InvalidExponent(format!("{name} = {p} must lie in [1, inf]")));
    }
    Ok(())
}

/// `h * sum f_j conj(g_j)`.
pub fn inner_product(f: &GridFunction, g: &GridFunction) -> Result<Complex64> {
    check_line(&f.grid, &g.grid)?;
    let s: Complex64 = f.values.iter().zip(&g.values).map(|(a, b)| a * b.conj()).sum();
    Ok(s * f.grid.h())
}

/// `l^p` norm of `values` against the uniform weight `mu`.
pub(crate) fn weighted_lp(values: impl Iterator<Item = f64>, p: f64, mu: f64) -> f64 {
    if p.is_infinite() {
        values.fold(0.0, f64::max)
    } else if p == 1.0 {
        values.sum::<f64>() * mu
    } else if p == 2.0 {
        (values.map(|v| v * v).sum::<f64>() * mu).sqrt()
    } else {
        (values.map(|v| v.powf(p)).sum::<f64>() * mu).powf(1.0 / p)
    }
}

/// `L^p` norm with cell-area quadrature.
pub fn function_norm(f: &PhaseFunction, p: f64) -> Result<f64> {
    check_exponent(p, "p")?;
    Ok(weighted_lp(f.values.iter().map(|v| v.norm()), p, f.grid.cell_area()))
}

/// Discrete Lorentz quasi-norm of a nonincreasing sequence `a` in which every
/// term carries measure `mu`.
pub(crate) fn lorentz_sorted(a: &[f64], p: f64, q: f64, mu: f64) -> f64 {
    if q.is_infinite() {
        return a
            .iter()
            .enumerate()
            .fold(0.0, |m, (k, &v)| m.max(((k + 1) as f64 * mu).powf(1.0 / p) * v));
    }
    let r = q / p;
    let mut prev = 0.0;
    let mut acc = 0.0;
    for (k, &v) in a.iter().enumerate() {
        let next = ((k + 1) as f64 * mu).powf(r);
        if v > 0.0 {
            acc += v.powf(q) * (next - prev);
        }
        prev = next;
    }
    acc.powf(1.0 / q)
}

/// Lorentz `L^{p,q}` quasi-norm via the layer-cake sum over the decreasing
/// rearrangement of `|F|`.
pub fn lorentz_norm(f: &PhaseFunction, p: f64, q: f64) -> Result<f64> {
    check_exponent(p, "p")?;
    check_exponent(q, "q")?;
    if p.is_infinite() {
        return Err(QhaError::InvalidExponent("Lorentz norm requires p < inf".into()));
    }
    let mut a: Vec<f64> = f.values.iter().map(|v| v.norm()).collect();
    a.sort_by(|x, y| y.total_cmp(x));
    Ok(lorentz_sorted(&a, p, q, f.grid.cell_area()))
}

/// `|| || F(., xi) ||_{L^p_x} ||_{L^q_xi}`.
pub fn mixed_norm(f: &PhaseFunction, p: f64, q: f64) -> Result<f64> {
    check_exponent(p, "p")?;
    check_exponent(q, "q")?;
    let n = f.n();
    let hx = f.grid.x.h();
    let inner: Vec<f64> = (0..n)
        .map(|jxi| weighted_lp((0..n).map(|jx| f.at(jx, jxi).norm()), p, hx))
        .collect();
    Ok(weighted_lp(inner.into_iter(), q, f.grid.xi.h()))
}

/// `L^2`-normalised Hermite function of order `k`, scaled so that `k = 0` is
/// `2^{1/4} exp(-pi t^2)`.
pub fn hermite(grid: &LineGrid, k: usize) -> Result<GridFunction> {
    if k > grid.n() / 4 {
        return Err(QhaError::Resolution(format!(
            "Hermite order {k} exceeds n/4 = {} for this grid",
            grid.n() / 4
        )));
    }
    Ok(hermite_family(grid, k + 1).pop().expect("at least one mode"))
}

/// Hermite functions of orders `0..count`, without the resolution guard.
pub(crate) fn hermite_family(grid: &LineGrid, count: usize) -> Vec<GridFunction> {
    use std::f64::consts::PI;
    let scale = (2.0 * PI).sqrt();
    let amp = (2.0 * PI).powf(0.25);
    let xs: Vec<f64> = grid.points().iter().map(|t| t * scale).collect();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(count);
    for k in 0..count {
        let row: Vec<f64> = if k == 0 {
            xs.iter().map(|x| PI.powf(-0.25) * (-x * x / 2.0).exp()).collect()
        } else {
            let kf = k as f64;
            let a = (2.0 / kf).sqrt();
            let b = ((kf - 1.0) / kf).sqrt();
            xs.iter()
                .enumerate()
                .map(|(j, x)| {
                    let prev2 = if k >= 2 { rows[k - 2][j] } else { 0.0 };
                    a * x * rows[k - 1][j] - b * prev2
                })
                .collect()
        };
        rows.push(row);
    }
    rows.into_iter()
        .map(|row| GridFunction {
            grid: grid.clone(),
            values: row.into_iter().map(|v| Complex64::new(amp * v, 0.0)).collect(),
        })
        .collect()
}
