//! Radon transform, its dual, the Hilbert transform in `t`, the filter
//! `|D_t|^{n-1}`, the `h`-Fourier transform, filtered backprojection,
//! the Plancherel pairing and the range moment check.
//!
//! Conventions: `R u(ω,t) = ∫_{x·ω=t} u dm`, `R^* U(x) = ∫_{S^{n-1}} U(ω, x·ω) dω`
//! with the full surface measure, `H U(t) = PV ∫ U(s)/(t-s) ds` (symbol
//! `-iπ sgn τ` for `e^{2πitτ}`), `D_t = -i ∂_t`.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Error, Result};
use crate::grids::{sample_sino, BoxGrid, DirectionGrid, GridFunction, Parity, Sinogram, TAxis};
use crate::quadrature::{composite_uniform, dot, norm, orthonormal_complement, Rule};
use crate::special::{constant_c, half_power_of_minus_one, inversion_constant, plancherel_constant};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// How `|D_t|^{n-1}` is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FilterMode {
    /// `(-1)^k ∂^{2k}` for `n = 2k+1`, `(-1)^{k-1} π^{-1} H ∂^{2k-1}` for `n = 2k`.
    #[default]
    Derivative,
    /// Direct convolution with the band-limited kernel of `|2πτ|^{n-1}`.
    Multiplier,
}

impl std::str::FromStr for FilterMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "derivative" => Ok(FilterMode::Derivative),
            "multiplier" => Ok(FilterMode::Multiplier),
            other => Err(invalid("filter", format!("expected `derivative` or `multiplier`, got `{other}`"))),
        }
    }
}

/// Tensor Gauss–Legendre rule on `[-L, L]^{n-1}` in coordinates of `ω^⊥`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperplaneQuadrature {
    pub half_width: f64,
    pub panels: usize,
    pub per_panel: usize,
}

impl Default for HyperplaneQuadrature {
    fn default() -> Self {
        Self { half_width: 8.0, panels: 32, per_panel: 12 }
    }
}

impl HyperplaneQuadrature {
    fn rule(&self) -> Rule {
        composite_uniform(-self.half_width, self.half_width, self.panels, self.per_panel)
    }
}

fn check_unit(omega: &[f64]) -> Result<()> {
    let len = norm(omega);
    if (len - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnit(len));
    }
    Ok(())
}

/// Integral of `u` over the hyperplane `x·ω = t`.
pub fn radon<F>(u: F, omega: &[f64], t: f64, quad: &HyperplaneQuadrature) -> Result<Complex64>
where
    F: Fn(&[f64]) -> Complex64,
{
    check_unit(omega)?;
    let n = omega.len();
    let basis = orthonormal_complement(omega);
    let rule = quad.rule();
    let base: Vec<f64> = omega.iter().map(|w| t * w).collect();
    let mut y = vec![0.0; n];
    let mut total = ZERO;
    match n {
        2 => {
            for (s, w) in rule.nodes.iter().zip(&rule.weights) {
                for k in 0..n {
                    y[k] = base[k] + s * basis[0][k];
                }
                total += *w * u(&y);
            }
        }
        3 => {
            for (s1, w1) in rule.nodes.iter().zip(&rule.weights) {
                let mut inner = ZERO;
                for (s2, w2) in rule.nodes.iter().zip(&rule.weights) {
                    for k in 0..n {
                        y[k] = base[k] + s1 * basis[0][k] + s2 * basis[1][k];
                    }
                    inner += *w2 * u(&y);
                }
                total += *w1 * inner;
            }
        }
        _ => return Err(Error::Dimension(n, "2 or 3")),
    }
    if !total.is_finite() {
        return Err(Error::NonFinite(format!("radon at omega = {omega:?}, t = {t}")));
    }
    Ok(total)
}

/// Radon transform of a sampled function (multilinear interpolation).
pub fn radon_grid(u: &GridFunction, omega: &[f64], t: f64, quad: &HyperplaneQuadrature) -> Result<Complex64> {
    if u.dim() != omega.len() {
        return Err(invalid("omega", "dimension differs from the grid"));
    }
    radon(|y| u.interpolate(y), omega, t, quad)
}

/// Sinogram of `u` by numerical hyperplane integration.
pub fn radon_sinogram<F>(u: F, dirs: Arc<DirectionGrid>, t: TAxis, quad: &HyperplaneQuadrature) -> Result<Sinogram>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    let failure = std::sync::Mutex::new(None);
    let s = sample_sino(
        |omega, tj| match radon(&u, omega, tj, quad) {
            Ok(v) => v,
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                ZERO
            }
        },
        dirs,
        t,
        Parity::EvenP,
    )?;
    match failure.into_inner().unwrap() {
        Some(e) => Err(e),
        None => Ok(s),
    }
}

/// Four-point Lagrange interpolation of a row at `t`, stencil clamped at
/// the ends of the axis.
pub fn interpolate_row(row: &[Complex64], axis: &TAxis, t: f64) -> Result<Complex64> {
    let dt = axis.step();
    let tol = 1e-9 * dt;
    if t < axis.t_min - tol || t > axis.t_max + tol {
        return Err(Error::OutOfRange { t, min: axis.t_min, max: axis.t_max });
    }
    let m = axis.count;
    let s = ((t - axis.t_min) / dt).clamp(0.0, (m - 1) as f64);
    if m < 4 {
        let i = (s.floor() as usize).min(m - 2);
        let f = s - i as f64;
        return Ok(row[i] * (1.0 - f) + row[i + 1] * f);
    }
    let i = (s.floor() as usize).clamp(1, m - 3);
    let u = s - i as f64;
    let w = [
        -u * (u - 1.0) * (u - 2.0) / 6.0,
        (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0,
        -(u + 1.0) * u * (u - 2.0) / 2.0,
        (u + 1.0) * u * (u - 1.0) / 6.0,
    ];
    Ok(w[0] * row[i - 1] + w[1] * row[i] + w[2] * row[i + 1] + w[3] * row[i + 2])
}

/// `R^* U(x) = ∫_{S^{n-1}} U(ω, x·ω) dω`.
pub fn dual_radon(u: &Sinogram, x: &[f64]) -> Result<Complex64> {
    if u.parity != Parity::EvenP {
        return Err(Error::Parity(format!("dual Radon needs an even sinogram, got {:?}", u.parity)));
    }
    if x.len() != u.n() {
        return Err(invalid("x", "dimension differs from the sinogram"));
    }
    let mut total = ZERO;
    for (i, omega) in u.dirs.directions.iter().enumerate() {
        total += u.dirs.weights[i] * interpolate_row(u.row(i), &u.t, dot(x, omega))?;
    }
    Ok(total)
}

/// Linear (non-periodic) convolution `y_i = Σ_m k(m) x_{i-m}` for rows of a
/// fixed length, by zero-padded FFT.
struct RowConvolver {
    len: usize,
    padded: usize,
    kernel_hat: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl RowConvolver {
    fn new(len: usize, kernel: impl Fn(i64) -> f64) -> Self {
        let padded = (2 * len).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(padded);
        let inverse = planner.plan_fft_inverse(padded);
        let mut kernel_hat = vec![ZERO; padded];
        for m in -(len as i64 - 1)..(len as i64) {
            let idx = m.rem_euclid(padded as i64) as usize;
            kernel_hat[idx] = Complex64::new(kernel(m), 0.0);
        }
        forward.process(&mut kernel_hat);
        Self { len, padded, kernel_hat, forward, inverse }
    }

    fn apply(&self, row: &[Complex64]) -> Vec<Complex64> {
        let mut buf = vec![ZERO; self.padded];
        buf[..self.len].copy_from_slice(row);
        self.forward.process(&mut buf);
        for (b, k) in buf.iter_mut().zip(&self.kernel_hat) {
            *b *= k;
        }
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.padded as f64;
        buf[..self.len].iter().map(|v| v * scale).collect()
    }
}

/// Spectral derivative of order `order` of a row, zero padded to avoid
/// wrap-around between the two ends.
struct RowDifferentiator {
    len: usize,
    padded: usize,
    symbol: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl RowDifferentiator {
    fn new(len: usize, dt: f64, order: u32) -> Self {
        let padded = (2 * len).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(padded);
        let inverse = planner.plan_fft_inverse(padded);
        let symbol = (0..padded)
            .map(|f| {
                if order % 2 == 1 && 2 * f == padded {
                    return ZERO;
                }
                let k = if 2 * f <= padded { f as f64 } else { f as f64 - padded as f64 };
                let tau = k / (padded as f64 * dt);
                Complex64::new(0.0, 2.0 * PI * tau).powu(order) / padded as f64
            })
            .collect();
        Self { len, padded, symbol, forward, inverse }
    }

    fn apply(&self, row: &[Complex64]) -> Vec<Complex64> {
        let mut buf = vec![ZERO; self.padded];
        buf[..self.len].copy_from_slice(row);
        self.forward.process(&mut buf);
        for (b, s) in buf.iter_mut().zip(&self.symbol) {
            *b *= s;
        }
        self.inverse.process(&mut buf);
        buf.truncate(self.len);
        buf
    }
}

fn require_symmetric(u: &Sinogram) -> Result<()> {
    if !u.t.is_symmetric() {
        return Err(Error::AsymmetricGrid(u.t.t_min, u.t.t_max));
    }
    Ok(())
}

/// Hilbert transform in `t`, row by row.
///
/// The discrete kernel is that of the multiplier `-iπ sgn τ` restricted to
/// the Nyquist band: `2/m` at odd offsets `m`, zero at even ones. The
/// convolution is linear, so the result is exact for band-limited rows that
/// vanish beyond the sampled window.
pub fn hilbert_t(u: &Sinogram) -> Result<Sinogram> {
    require_symmetric(u)?;
    let conv = RowConvolver::new(u.t.count, |m| if m % 2 != 0 { 2.0 / m as f64 } else { 0.0 });
    Ok(u.map_rows(u.parity.flipped(u.n()), |row| conv.apply(row)))
}

/// `d^order/dt^order` of every row (spectral).
pub fn derivative_t(u: &Sinogram, order: u32) -> Result<Sinogram> {
    require_symmetric(u)?;
    let parity = if order % 2 == 0 { u.parity } else { u.parity.flipped(u.n()) };
    let diff = RowDifferentiator::new(u.t.count, u.t.step(), order);
    Ok(u.map_rows(parity, |row| diff.apply(row)))
}

/// `∫_0^π u^p cos(m u) du`.
fn cosine_moment(p: u32, m: i64) -> f64 {
    if m == 0 {
        return PI.powi(p as i32 + 1) / (p as f64 + 1.0);
    }
    let mf = m as f64;
    let alt = if m % 2 == 0 { 1.0 } else { -1.0 };
    let mut c = 0.0;
    let mut s = (1.0 - alt) / mf;
    for q in 1..=p {
        let qf = q as f64;
        let c_next = -(qf / mf) * s;
        let s_next = -PI.powi(q as i32) * alt / mf + (qf / mf) * c;
        c = c_next;
        s = s_next;
    }
    c
}

/// `|D_t|^{n-1} U` with `n` the sinogram dimension.
pub fn abs_dt_power(u: &Sinogram, mode: FilterMode) -> Result<Sinogram> {
    require_symmetric(u)?;
    let n = u.n();
    if n < 2 {
        return Err(Error::Dimension(n, ">= 2"));
    }
    match mode {
        FilterMode::Derivative if n % 2 == 1 => {
            let k = (n - 1) / 2;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let mut d = derivative_t(u, 2 * k as u32)?;
            d.values.iter_mut().for_each(|v| *v *= sign);
            Ok(d)
        }
        FilterMode::Derivative => {
            let k = n / 2;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let d = derivative_t(u, 2 * k as u32 - 1)?;
            let mut hd = hilbert_t(&d)?;
            hd.values.iter_mut().for_each(|v| *v *= sign / PI);
            hd.parity = u.parity;
            Ok(hd)
        }
        FilterMode::Multiplier => {
            let p = (n - 1) as u32;
            let dt = u.t.step();
            let scale = 1.0 / (PI * dt.powi(p as i32));
            let conv = RowConvolver::new(u.t.count, |m| scale * cosine_moment(p, m));
            Ok(u.map_rows(u.parity, |row| conv.apply(row)))
        }
    }
}

/// One axis of the scaled DFT: `out_k = step Σ_j e^{sign 2πi a_j b_k / h} in_j`
/// with `a_j = a0 + j step`, `b_k = b0 + k h/(N step)`.
fn scaled_dft_axis(
    values: &mut [Complex64],
    shape: &[usize],
    axis: usize,
    a0: f64,
    step: f64,
    b0: f64,
    h: f64,
    sign: f64,
) {
    let len = shape[axis];
    let stride: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let dual = h / (len as f64 * step);
    let mut planner = FftPlanner::new();
    let fft = if sign < 0.0 { planner.plan_fft_forward(len) } else { planner.plan_fft_inverse(len) };
    let pre: Vec<Complex64> = (0..len)
        .map(|j| Complex64::from_polar(1.0, sign * 2.0 * PI * j as f64 * step * b0 / h))
        .collect();
    let post: Vec<Complex64> = (0..len)
        .map(|k| {
            let b = b0 + k as f64 * dual;
            Complex64::from_polar(step / h.sqrt(), sign * 2.0 * PI * a0 * b / h)
        })
        .collect();
    let mut buf = vec![ZERO; len];
    for o in 0..outer {
        for r in 0..stride {
            let base = o * len * stride + r;
            for j in 0..len {
                buf[j] = values[base + j * stride] * pre[j];
            }
            fft.process(&mut buf);
            for k in 0..len {
                values[base + k * stride] = buf[k] * post[k];
            }
        }
    }
}

/// `F_h u(η) = h^{-n/2} ∫ e^{-2πi y·η/h} u(y) dy` on the dual grid with
/// spacing `h/(N Δ)` per axis, centred so that `η = 0` is a node.
pub fn fourier_h(u: &GridFunction, h: f64) -> Result<GridFunction> {
    if !(h > 0.0) {
        return Err(invalid("h", "must be positive"));
    }
    let grid = &u.grid;
    let mut values = u.values.clone();
    let mut origin = Vec::with_capacity(grid.dim());
    let mut spacing = Vec::with_capacity(grid.dim());
    for axis in 0..grid.dim() {
        let len = grid.shape[axis];
        let dual = h / (len as f64 * grid.spacing[axis]);
        let b0 = -((len / 2) as f64) * dual;
        scaled_dft_axis(&mut values, &grid.shape, axis, grid.origin[axis], grid.spacing[axis], b0, h, -1.0);
        origin.push(b0);
        spacing.push(dual);
    }
    GridFunction::new(BoxGrid::new(origin, spacing, grid.shape.clone())?, values)
}

/// Inverse of [`fourier_h`]: returns samples on the grid with the given
/// origin and spacing `h/(N δη)`.
pub fn inverse_fourier_h(v: &GridFunction, h: f64, origin: &[f64]) -> Result<GridFunction> {
    if !(h > 0.0) {
        return Err(invalid("h", "must be positive"));
    }
    if origin.len() != v.dim() {
        return Err(invalid("origin", "dimension differs from the grid"));
    }
    let grid = &v.grid;
    let mut values = v.values.clone();
    let mut spacing = Vec::with_capacity(grid.dim());
    for axis in 0..grid.dim() {
        let len = grid.shape[axis];
        scaled_dft_axis(&mut values, &grid.shape, axis, grid.origin[axis], grid.spacing[axis], origin[axis], h, 1.0);
        spacing.push(h / (len as f64 * grid.spacing[axis]));
    }
    GridFunction::new(BoxGrid::new(origin.to_vec(), spacing, grid.shape.clone())?, values)
}

/// Filtered backprojection `u = R^*(|D_t|^{n-1} U) / (2 (2π)^{n-1})`
/// evaluated on `grid`.
pub fn inverse_radon(u: &Sinogram, grid: &BoxGrid, mode: FilterMode) -> Result<GridFunction> {
    if grid.dim() != u.n() {
        return Err(invalid("grid", "dimension differs from the sinogram"));
    }
    let filtered = abs_dt_power(u, mode)?;
    let scale = 1.0 / inversion_constant(u.n())?;
    let values: Result<Vec<Complex64>> = (0..grid.len())
        .into_par_iter()
        .map(|i| dual_radon(&filtered, &grid.point(i)).map(|v| v * scale))
        .collect();
    GridFunction::new(grid.clone(), values?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlancherelReport {
    /// `(2π)^{n-1} ∫ u v`.
    pub lhs: Complex64,
    /// `∬ |D_t|^{n-1} Ru · Rv` over hyperplane space.
    pub rhs: Complex64,
    pub rel_gap: f64,
    /// `(-1)^{(n-1)/2} C_n ∫ u v` with the principal branch, for comparison.
    pub printed_lhs: Complex64,
}

/// Compare `∫ u v` (supplied) with the hyperplane pairing of the sinograms.
pub fn plancherel_check(uv: Complex64, ru: &Sinogram, rv: &Sinogram, mode: FilterMode) -> Result<PlancherelReport> {
    let n = ru.n();
    if rv.n() != n || rv.t != ru.t || rv.dirs.len() != ru.dirs.len() {
        return Err(invalid("rv", "sinograms must share geometry"));
    }
    let filtered = abs_dt_power(ru, mode)?;
    let mut product = filtered.clone();
    for (p, v) in product.values.iter_mut().zip(&rv.values) {
        *p *= v;
    }
    let rhs = product.integrate_half();
    let lhs = plancherel_constant(n)? * uv;
    let printed_lhs = half_power_of_minus_one(n) * constant_c(n)? * uv;
    let rel_gap = if lhs.norm() == 0.0 {
        if rhs.norm() == 0.0 { 0.0 } else { f64::INFINITY }
    } else {
        (lhs - rhs).norm() / lhs.norm()
    };
    Ok(PlancherelReport { lhs, rhs, rel_gap, printed_lhs })
}

/// Exponent vectors of all monomials of degree `k` in `n` variables.
pub fn monomial_exponents(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == n {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=k).rev() {
            prefix.push(a);
            rec(n, k - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::new(), &mut out);
    out
}

/// `Σ_j v_j t_j^k`, summed in mirrored pairs so that exactly odd integrands
/// on a symmetric axis cancel exactly.
fn moment(row: &[Complex64], ts: &[f64], k: usize) -> Complex64 {
    let m = row.len();
    let term = |j: usize| row[j] * ts[j].powi(k as i32);
    let mut total = ZERO;
    for j in 0..m / 2 {
        total += term(j) + term(m - 1 - j);
    }
    if m % 2 == 1 {
        total += term(m / 2);
    }
    total
}

/// Least-squares residual of fitting `m_k(ω) = ∫ U(ω,t) t^k dt` by a
/// homogeneous polynomial of degree `k` in `ω`, relative to the moments of
/// `|U| |t|^k` (which cannot cancel). Returns 0 for identically zero data.
pub fn moment_residual(u: &Sinogram, k: usize) -> Result<f64> {
    let n = u.n();
    let dt = u.t.step();
    let ts = u.t.values();
    let rows = u.dirs.len();
    let mut re = DVector::zeros(rows);
    let mut im = DVector::zeros(rows);
    let mut scale2 = 0.0;
    for i in 0..rows {
        let m = moment(u.row(i), &ts, k) * dt;
        re[i] = m.re;
        im[i] = m.im;
        let row = u.row(i);
        let abs: f64 = row.iter().zip(&ts).map(|(v, t)| v.norm() * t.abs().powi(k as i32)).sum::<f64>() * dt;
        scale2 += abs * abs;
    }
    let size = scale2.sqrt();
    if size == 0.0 {
        return Ok(0.0);
    }
    let exps = monomial_exponents(n, k);
    let a = DMatrix::from_fn(rows, exps.len(), |i, j| {
        let omega = &u.dirs.directions[i];
        exps[j].iter().zip(omega).map(|(&e, &w)| w.powi(e as i32)).product::<f64>()
    });
    let svd = a.clone().svd(true, true);
    let mut residual2 = 0.0;
    for b in [&re, &im] {
        let coef = svd.solve(b, 1e-12).map_err(|e| Error::Format(e.to_string()))?;
        residual2 += (&a * coef - b).norm_squared();
    }
    Ok(residual2.sqrt() / size)
}
