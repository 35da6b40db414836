//! The Bargmann transform `T_h` on `R^n` and its hyperplane counterpart
//! `B_h`, together with coherent states and their phase-space statistics.
//!
//! `T_h u(z) = 2^{n/4} h^{-3n/4} ∫ e^{-π(z-y)²/h} u(y) dy` and
//! `B_h U(z) = A h^{-3n/4} ∬ e^{-π(zω-t)²/h} H_{n-1}(√(π/h)(zω-t)) U(ω,t) dω dt`
//! over hyperplane space. Both are evaluated in weighted form,
//! `e^{-π|ξ|²/h} F(x - iξ)`, whose integrands are bounded by one; the
//! unweighted values are recovered by multiplying back.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::grids::{BoxGrid, DirectionGrid, GridFunction, Parity, Sinogram};
use crate::quadrature::{dot, norm, sqrt_graded, Rule};
use crate::special::{b_normalization, hermite, HermiteOrder};
use crate::transforms::fourier_h;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Gaussian factors below `e^{-40}` are dropped.
const GAUSS_CUT: f64 = 40.0;

/// `z = x - iξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpacePoint {
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
    z: Vec<Complex64>,
}

impl PhaseSpacePoint {
    pub fn new(x: Vec<f64>, xi: Vec<f64>) -> Result<Self> {
        if x.len() != xi.len() || x.is_empty() {
            return Err(invalid("xi", "x and xi must have the same non-zero length"));
        }
        if x.iter().chain(&xi).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("phase-space point".into()));
        }
        let z = x.iter().zip(&xi).map(|(&a, &b)| Complex64::new(a, -b)).collect();
        Ok(Self { x, xi, z })
    }

    pub fn from_z(z: &[Complex64]) -> Result<Self> {
        Self::new(z.iter().map(|c| c.re).collect(), z.iter().map(|c| -c.im).collect())
    }

    pub fn z(&self) -> &[Complex64] {
        &self.z
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// `Φ(z) = π |Im z|²`.
    pub fn weight_exponent(&self) -> f64 {
        PI * dot(&self.xi, &self.xi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SemiclassicalParam(f64);

impl SemiclassicalParam {
    pub fn new(h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(invalid("h", format!("must be positive, got {h}")));
        }
        Ok(Self(h))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Tensor product of one-dimensional rules.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorRule {
    pub axes: Vec<Rule>,
}

impl TensorRule {
    pub fn cube(n: usize, rule: Rule) -> Self {
        Self { axes: vec![rule; n] }
    }
}

fn check_h(h: f64) -> Result<f64> {
    SemiclassicalParam::new(h).map(|p| p.get())
}

/// `e^{-π|ξ|²/h} T_h u(x - iξ)` by tensor quadrature of the bounded kernel
/// `2^{n/4} h^{-3n/4} e^{-π(x-y)²/h + 2πi(x-y)·ξ/h}`.
pub fn weighted_bargmann_t<F>(u: F, p: &PhaseSpacePoint, h: f64, rule: &TensorRule) -> Result<Complex64>
where
    F: Fn(&[f64]) -> Complex64,
{
    let h = check_h(h)?;
    let n = p.dim();
    if rule.axes.len() != n {
        return Err(invalid("rule", "one rule per axis is required"));
    }
    // per-axis kernel values at the nodes
    let kernels: Vec<Vec<Complex64>> = (0..n)
        .map(|k| {
            rule.axes[k]
                .nodes
                .iter()
                .zip(&rule.axes[k].weights)
                .map(|(&y, &w)| {
                    let d = p.x[k] - y;
                    w * Complex64::from_polar((-PI * d * d / h).exp(), 2.0 * PI * d * p.xi[k] / h)
                })
                .collect()
        })
        .collect();
    let sizes: Vec<usize> = rule.axes.iter().map(|r| r.len()).collect();
    let total_len: usize = sizes.iter().product();
    let mut idx = vec![0usize; n];
    let mut y = vec![0.0; n];
    let mut acc = ZERO;
    for _ in 0..total_len {
        let mut k_prod = Complex64::new(1.0, 0.0);
        for k in 0..n {
            y[k] = rule.axes[k].nodes[idx[k]];
            k_prod *= kernels[k][idx[k]];
        }
        if k_prod.norm_sqr() > 1e-40 {
            acc += k_prod * u(&y);
        }
        for k in (0..n).rev() {
            idx[k] += 1;
            if idx[k] < sizes[k] {
                break;
            }
            idx[k] = 0;
        }
    }
    let nf = n as f64;
    let v = 2f64.powf(nf / 4.0) * h.powf(-0.75 * nf) * acc;
    if !v.is_finite() {
        return Err(Error::NonFinite("weighted Bargmann integrand".into()));
    }
    Ok(v)
}

/// `T_h u(z)`.
pub fn bargmann_t<F>(u: F, z: &[Complex64], h: f64, rule: &TensorRule) -> Result<Complex64>
where
    F: Fn(&[f64]) -> Complex64,
{
    let p = PhaseSpacePoint::from_z(z)?;
    let w = weighted_bargmann_t(u, &p, h, rule)?;
    Ok(w * (p.weight_exponent() / h).exp())
}

/// Weighted `T_h` of sampled data (Riemann sum, separable contraction).
pub fn weighted_bargmann_t_grid(u: &GridFunction, p: &PhaseSpacePoint, h: f64) -> Result<Complex64> {
    let h = check_h(h)?;
    let n = u.dim();
    if p.dim() != n {
        return Err(invalid("point", "dimension differs from the grid"));
    }
    let grid = &u.grid;
    let mut values = u.values.clone();
    let mut shape = grid.shape.clone();
    for k in (0..n).rev() {
        let kernel: Vec<Complex64> = grid
            .axis(k)
            .iter()
            .map(|&y| {
                let d = p.x[k] - y;
                Complex64::from_polar((-PI * d * d / h).exp(), 2.0 * PI * d * p.xi[k] / h)
            })
            .collect();
        let len = shape[k];
        let outer = values.len() / len;
        values = (0..outer)
            .map(|o| values[o * len..(o + 1) * len].iter().zip(&kernel).map(|(a, b)| a * b).sum())
            .collect();
        shape.pop();
    }
    let nf = n as f64;
    Ok(values[0] * grid.cell_volume() * 2f64.powf(nf / 4.0) * h.powf(-0.75 * nf))
}

/// `φ(z, ω, t) = iπ(zω - t)²`.
pub fn phase_phi(z: &[Complex64], omega: &[f64], t: f64) -> Complex64 {
    let c = zdot(z, omega) - t;
    Complex64::new(0.0, PI) * c * c
}

/// `Im φ = π(xω - t)² - π(ξω)²`.
pub fn im_phase(x: &[f64], xi: &[f64], omega: &[f64], t: f64) -> f64 {
    let a = dot(x, omega) - t;
    let b = dot(xi, omega);
    PI * (a * a - b * b)
}

fn zdot(z: &[Complex64], omega: &[f64]) -> Complex64 {
    z.iter().zip(omega).map(|(a, b)| a * b).sum()
}

/// `a_n(z, ω, t) = H_{n-1}(√(π/h)(zω - t))`.
pub fn amplitude_a(n: usize, z: &[Complex64], omega: &[f64], t: f64, h: f64) -> Result<Complex64> {
    if n < 2 {
        return Err(Error::Dimension(n, ">= 2"));
    }
    let h = check_h(h)?;
    Ok(hermite(HermiteOrder(n - 1), (PI / h).sqrt() * (zdot(z, omega) - t)))
}

fn check_b_parity(parity: Parity, n: usize) -> Result<()> {
    let wanted = if n % 2 == 1 { 1.0 } else { -1.0 };
    if parity.sign(n) != wanted {
        return Err(Error::Parity(format!(
            "B_h needs data with U(-ω,-t) = (-1)^(n-1) U(ω,t); got {parity:?} in dimension {n}"
        )));
    }
    Ok(())
}

/// `e^{-π|ξ|²/h} B_h U(x - iξ)` for sampled data.
///
/// Each direction only visits the `t` nodes where the Gaussian factor
/// exceeds `e^{-40}`; along them the factor is advanced by a two-term
/// multiplicative recurrence instead of one complex exponential per node.
pub fn weighted_bargmann_b(u: &Sinogram, p: &PhaseSpacePoint, h: f64) -> Result<Complex64> {
    let h = check_h(h)?;
    let n = u.n();
    if p.dim() != n {
        return Err(invalid("point", "dimension differs from the sinogram"));
    }
    check_b_parity(u.parity, n)?;
    let dt = u.t.step();
    let reach = (GAUSS_CUT * h / PI).sqrt();
    let xi2 = dot(&p.xi, &p.xi);
    let scale = (PI / h).sqrt();
    let order = HermiteOrder(n - 1);
    let step_decay = (-2.0 * PI * dt * dt / h).exp();
    let mut total = ZERO;
    for (i, omega) in u.dirs.directions.iter().enumerate() {
        let xw = dot(&p.x, omega);
        let b = dot(&p.xi, omega);
        let j_lo = (((xw - reach - u.t.t_min) / dt).ceil().max(0.0)) as usize;
        let j_hi_f = ((xw + reach - u.t.t_min) / dt).floor();
        if j_hi_f < 0.0 || j_lo >= u.t.count {
            continue;
        }
        let j_hi = (j_hi_f as usize).min(u.t.count - 1);
        if j_lo > j_hi {
            continue;
        }
        let row = u.row(i);
        let t0 = u.t.value(j_lo);
        let c0 = Complex64::new(xw - t0, -b);
        // E_j = exp(-π c_j²/h - π|ξ|²/h), c_{j+1} = c_j - Δ
        let mut e = (-PI * c0 * c0 / h - PI * xi2 / h).exp();
        let mut ratio = ((2.0 * PI * dt * c0 - PI * dt * dt) / h).exp();
        let mut acc = ZERO;
        for j in j_lo..=j_hi {
            let c = Complex64::new(xw - u.t.value(j), -b);
            acc += e * hermite(order, scale * c) * row[j];
            e *= ratio;
            ratio *= step_decay;
        }
        total += u.dirs.weights[i] * acc;
    }
    let norm_b = b_normalization(n)? * h.powf(-0.75 * n as f64);
    let v = 0.5 * dt * norm_b * total;
    if !v.is_finite() {
        return Err(Error::NonFinite("weighted hyperplane Bargmann sum".into()));
    }
    Ok(v)
}

/// `B_h U(z)`.
pub fn bargmann_b(u: &Sinogram, z: &[Complex64], h: f64) -> Result<Complex64> {
    let p = PhaseSpacePoint::from_z(z)?;
    Ok(weighted_bargmann_b(u, &p, h)? * (p.weight_exponent() / h).exp())
}

/// A function on `S^{n-1} × R` known in closed form.
pub trait HyperplaneSource: Sync {
    fn dim(&self) -> usize;
    fn parity(&self) -> Parity;
    fn value(&self, omega: &[f64], t: f64) -> Complex64;
    /// Points in `t` where the function is not smooth.
    fn breakpoints(&self, _omega: &[f64]) -> Vec<f64> {
        Vec::new()
    }
}

/// Weighted `B_h` of a closed-form source: the `t` integral uses
/// Gauss–Legendre panels graded towards the breakpoints, directions use
/// the grid rule.
pub fn weighted_bargmann_b_source<S>(src: &S, dirs: &DirectionGrid, p: &PhaseSpacePoint, h: f64) -> Result<Complex64>
where
    S: HyperplaneSource + ?Sized,
{
    let h = check_h(h)?;
    let n = src.dim();
    if p.dim() != n || dirs.n != n {
        return Err(invalid("point", "dimension mismatch"));
    }
    check_b_parity(src.parity(), n)?;
    let reach = (GAUSS_CUT * h / PI).sqrt();
    let xi2 = dot(&p.xi, &p.xi);
    let scale = (PI / h).sqrt();
    let order = HermiteOrder(n - 1);
    let mut total = ZERO;
    for (i, omega) in dirs.directions.iter().enumerate() {
        let xw = dot(&p.x, omega);
        let b = dot(&p.xi, omega);
        let (lo, hi) = (xw - reach, xw + reach);
        let mut breaks = vec![lo];
        breaks.extend(src.breakpoints(omega).into_iter().filter(|&s| s > lo && s < hi));
        breaks.push(hi);
        let k_max = 2.0 * PI * b.abs() / h + 2.0 * PI / h.sqrt();
        let mut acc = ZERO;
        for w in breaks.windows(2) {
            let panels = (((w[1] - w[0]) * k_max / 8.0).ceil() as usize).max(1);
            let rule = sqrt_graded(w[0], w[1], panels, 16);
            for (&t, &wt) in rule.nodes.iter().zip(&rule.weights) {
                let c = Complex64::new(xw - t, -b);
                let g = (-PI * c * c / h - PI * xi2 / h).exp();
                acc += wt * g * hermite(order, scale * c) * src.value(omega, t);
            }
        }
        total += dirs.weights[i] * acc;
    }
    Ok(0.5 * b_normalization(n)? * h.powf(-0.75 * n as f64) * total)
}

/// Largest value of the weighted `B_h` integrand's asymmetry
/// `|I(-ω,-t) - I(ω,t)|` over the sampled grid, `I = e^{-π(zω-t)²/h} a_n U`.
pub fn integrand_parity_defect(u: &Sinogram, z: &[Complex64], h: f64) -> Result<f64> {
    let h = check_h(h)?;
    let n = u.n();
    if !u.t.is_symmetric() {
        return Err(Error::AsymmetricGrid(u.t.t_min, u.t.t_max));
    }
    let m = u.t.count;
    let mut worst = 0.0f64;
    let integrand = |i: usize, j: usize| -> Result<Complex64> {
        let omega = &u.dirs.directions[i];
        let c = zdot(z, omega) - u.t.value(j);
        Ok((-PI * c * c / h).exp() * amplitude_a(n, z, omega, u.t.value(j), h)? * u.at(i, j))
    };
    for i in 0..u.dirs.len() {
        let a = u.dirs.antipode[i];
        for j in 0..m {
            let d = (integrand(a, m - 1 - j)? - integrand(i, j)?).norm();
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

/// A normalized Gaussian wave packet centred at `(x, ξ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentState {
    pub center: PhaseSpacePoint,
    pub h: SemiclassicalParam,
}

impl CoherentState {
    pub fn new(center: PhaseSpacePoint, h: SemiclassicalParam) -> Self {
        Self { center, h }
    }

    /// A grid wide enough for both the packet and its `h`-Fourier transform
    /// (which lives on the dual grid `h/(NΔ)`).
    pub fn default_grid(&self) -> Result<BoxGrid> {
        let h = self.h.get();
        let n = self.center.dim();
        let reach = (GAUSS_CUT * h / (2.0 * PI)).sqrt() * 1.25;
        let xi_max = self.center.xi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let step = h / (2.0 * (xi_max + reach));
        let count = (2.0 * reach / step).ceil() as usize + 1;
        let count = count + count % 2;
        let origin = self.center.x.iter().map(|x| x - step * (count / 2) as f64).collect();
        BoxGrid::new(origin, vec![step; n], vec![count; n])
    }

    pub fn sample(&self, grid: &BoxGrid) -> Result<GridFunction> {
        crate::grids::sample(|y| coherent_state_value(self, y), grid)
    }
}

/// `ψ(y; x, ξ, h) = 2^{n/4} h^{-n/4} e^{-2πi(x-y)ξ/h - π(x-y)²/h}`.
pub fn coherent_state_value(cs: &CoherentState, y: &[f64]) -> Complex64 {
    let h = cs.h.get();
    let n = y.len() as f64;
    let mut d2 = 0.0;
    let mut phase = 0.0;
    for k in 0..y.len() {
        let d = cs.center.x[k] - y[k];
        d2 += d * d;
        phase += d * cs.center.xi[k];
    }
    Complex64::from_polar(2f64.powf(n / 4.0) * h.powf(-n / 4.0) * (-PI * d2 / h).exp(), -2.0 * PI * phase / h)
}

/// Position and frequency statistics of a sampled function.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceStats {
    pub norm: f64,
    pub mean_pos: Vec<f64>,
    pub mean_freq: Vec<f64>,
    /// `∫ |2π(y - x̄)|² |u|²`.
    pub var_pos: f64,
    /// `∫ |2π(η - ξ̄)|² |F_h u|²`.
    pub var_freq: f64,
}

fn moments(u: &GridFunction) -> (f64, Vec<f64>, f64) {
    let n = u.dim();
    let vol = u.grid.cell_volume();
    let mut mass = 0.0;
    let mut first = vec![0.0; n];
    for (i, v) in u.values.iter().enumerate() {
        let w = v.norm_sqr();
        mass += w;
        for (k, y) in u.grid.point(i).iter().enumerate() {
            first[k] += w * y;
        }
    }
    let mean: Vec<f64> = first.iter().map(|f| f / mass).collect();
    let mut second = 0.0;
    for (i, v) in u.values.iter().enumerate() {
        let p = u.grid.point(i);
        let d2: f64 = p.iter().zip(&mean).map(|(a, b)| (a - b) * (a - b)).sum();
        second += v.norm_sqr() * d2;
    }
    (mass * vol, mean, 4.0 * PI * PI * second * vol)
}

/// Statistics of `u` (not renormalized): `norm = ‖u‖`, means are
/// normalized by `‖u‖²`, spreads are not.
pub fn phase_space_stats(u: &GridFunction, h: f64) -> Result<PhaseSpaceStats> {
    let h = check_h(h)?;
    let (mass, mean_pos, var_pos) = moments(u);
    let fu = fourier_h(u, h)?;
    let (_, mean_freq, var_freq) = moments(&fu);
    Ok(PhaseSpaceStats { norm: mass.sqrt(), mean_pos, mean_freq, var_pos, var_freq })
}

pub fn coherent_stats(cs: &CoherentState) -> Result<PhaseSpaceStats> {
    let grid = cs.default_grid()?;
    phase_space_stats(&cs.sample(&grid)?, cs.h.get())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeisenbergReport {
    pub sigma_pos: f64,
    pub sigma_freq: f64,
    pub product: f64,
    /// `nπh`.
    pub bound: f64,
    pub ok: bool,
}

/// Spreads of `u / ‖u‖` and the check `σ_x σ_ξ ≥ nπh (1 - 1e-6)`.
pub fn heisenberg_check(u: &GridFunction, h: f64) -> Result<HeisenbergReport> {
    let norm_u = u.l2_norm();
    if norm_u == 0.0 {
        return Err(invalid("u", "zero function has no spreads"));
    }
    let mut v = u.clone();
    v.values.iter_mut().for_each(|x| *x /= norm_u);
    let s = phase_space_stats(&v, h)?;
    let product = s.var_pos.sqrt() * s.var_freq.sqrt();
    let bound = u.dim() as f64 * PI * h;
    Ok(HeisenbergReport {
        sigma_pos: s.var_pos.sqrt(),
        sigma_freq: s.var_freq.sqrt(),
        product,
        bound,
        ok: product >= bound * (1.0 - 1e-6),
    })
}

/// `h^{-n/2} ∫ u ψ̄ dy` on the grid of `u`; equals the weighted `T_h u`.
pub fn husimi_inner(u: &GridFunction, p: &PhaseSpacePoint, h: f64) -> Result<Complex64> {
    let cs = CoherentState::new(p.clone(), SemiclassicalParam::new(h)?);
    let n = u.dim() as f64;
    let s: Complex64 = u
        .values
        .par_iter()
        .enumerate()
        .map(|(i, v)| v * coherent_state_value(&cs, &u.grid.point(i)).conj())
        .sum();
    Ok(s * u.grid.cell_volume() * h.powf(-n / 2.0))
}

/// `e^{-π|ξ|²/h} T_h u(x - iξ)` (alias kept for phase-space language).
pub fn husimi_weight<F>(u: F, p: &PhaseSpacePoint, h: f64, rule: &TensorRule) -> Result<Complex64>
where
    F: Fn(&[f64]) -> Complex64,
{
    weighted_bargmann_t(u, p, h, rule)
}

/// `max_k |∂f/∂z̄_k| / max(|f(z)|, |∇f|)` by fourth-order central differences.
pub fn cauchy_riemann_residual<F>(f: F, z: &[Complex64], step: f64) -> Result<f64>
where
    F: Fn(&[Complex64]) -> Result<Complex64>,
{
    let mut worst = 0.0f64;
    let mut scale = f(z)?.norm();
    let mut w = z.to_vec();
    for k in 0..z.len() {
        let mut deriv = |dir: Complex64| -> Result<Complex64> {
            let mut at = |s: f64| -> Result<Complex64> {
                w[k] = z[k] + dir * s;
                let v = f(&w);
                w[k] = z[k];
                v
            };
            Ok((8.0 * (at(step)? - at(-step)?) - (at(2.0 * step)? - at(-2.0 * step)?)) / (12.0 * step))
        };
        let dx = deriv(Complex64::new(1.0, 0.0))?;
        let dy = deriv(Complex64::new(0.0, 1.0))?;
        let dzbar = 0.5 * (dx + Complex64::new(0.0, 1.0) * dy);
        let dz = 0.5 * (dx - Complex64::new(0.0, 1.0) * dy);
        scale = scale.max(dz.norm());
        worst = worst.max(dzbar.norm());
    }
    Ok(if scale == 0.0 { 0.0 } else { worst / scale })
}

/// Unit-norm check used by callers that accept raw directions.
pub fn is_unit(omega: &[f64]) -> bool {
    (norm(omega) - 1.0).abs() <= 1e-12
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::{make_direction_grid, sample_sino, TAxis};
    use crate::quadrature::composite_uniform;
    use crate::special::gaussian_bargmann_oracle;
    use approx::assert_relative_eq;
    use std::sync::Arc;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn gaussian(y: &[f64]) -> Complex64 {
        c((-PI * dot(y, y)).exp(), 0.0)
    }

    fn rule(n: usize) -> TensorRule {
        TensorRule::cube(n, composite_uniform(-7.0, 7.0, 28, 8))
    }

    fn fine_rule(n: usize) -> TensorRule {
        TensorRule::cube(n, composite_uniform(-7.0, 7.0, 70, 12))
    }

    #[test]
    fn transform_of_gaussian_examples() {
        let v2 = bargmann_t(gaussian, &[c(0.0, 0.0); 2], 1.0, &rule(2)).unwrap();
        assert_relative_eq!(v2.re, 0.707_106_781_186_547_5, epsilon = 1e-12);
        let v3 = bargmann_t(gaussian, &[c(0.0, 0.0); 3], 1.0, &rule(3)).unwrap();
        assert_relative_eq!(v3.re, 2f64.powf(-0.75), epsilon = 1e-12);
        let zero = bargmann_t(|_| c(0.0, 0.0), &[c(0.3, -0.2); 2], 0.5, &rule(2)).unwrap();
        assert_eq!(zero, c(0.0, 0.0));
        let z = [c(0.4, -0.9), c(-0.3, 0.5)];
        let v = bargmann_t(gaussian, &z, 0.25, &fine_rule(2)).unwrap();
        let o = gaussian_bargmann_oracle(2, 0.25, &z);
        assert!((v - o).norm() < 1e-10 * o.norm(), "{v} vs {o}");
    }

    #[test]
    fn grid_transform_agrees_with_quadrature() {
        let grid = BoxGrid::centered(2, 6.0, 241).unwrap();
        let u = crate::grids::sample(gaussian, &grid).unwrap();
        let p = PhaseSpacePoint::new(vec![0.3, -0.5], vec![0.7, 0.2]).unwrap();
        let a = weighted_bargmann_t_grid(&u, &p, 0.5).unwrap();
        let b = weighted_bargmann_t(gaussian, &p, 0.5, &fine_rule(2)).unwrap();
        assert!((a - b).norm() < 1e-12, "{a} vs {b}");
        let inner = husimi_inner(&u, &p, 0.5).unwrap();
        assert!((inner - b).norm() < 1e-12);
    }

    #[test]
    fn phase_examples() {
        assert_eq!(phase_phi(&[c(0.3, 0.0), c(0.4, 0.0)], &[0.6, 0.8], 0.5), c(0.0, 0.0));
        assert_relative_eq!(im_phase(&[1.0, 0.0], &[0.0, 1.0], &[0.0, 1.0], 0.0), -PI);
        let z = [c(0.3, -1.2), c(-0.7, 0.4), c(1.1, 0.9)];
        let x = [0.3, -0.7, 1.1];
        let xi = [1.2, -0.4, -0.9];
        let omega = [0.48, 0.6, 0.64];
        for t in [-1.0, 0.0, 0.77] {
            assert!((phase_phi(&z, &omega, t).im - im_phase(&x, &xi, &omega, t)).abs() < 1e-12);
        }
    }

    #[test]
    fn amplitude_examples() {
        assert!(amplitude_a(1, &[c(0.0, 0.0)], &[1.0], 0.0, 1.0).is_err());
        assert_eq!(amplitude_a(2, &[c(0.6, 0.0), c(0.8, 0.0)], &[0.6, 0.8], 1.0, 1.0).unwrap(), c(0.0, 0.0));
        // zω - t = -i|ξ| at the nondegenerate critical point
        let xi = 1.7;
        let h = 0.3;
        let z = [c(0.2, 0.0), c(0.0, 0.0), c(0.5, -xi)];
        let v = amplitude_a(3, &z, &[0.0, 0.0, 1.0], 0.5, h).unwrap();
        assert_relative_eq!(v.re, -4.0 * PI * xi * xi / h - 2.0, max_relative = 1e-13);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn b_rejects_wrong_parity_and_handles_zero() {
        let dirs = Arc::new(make_direction_grid(2, 16).unwrap());
        let t = TAxis::symmetric(4.0, 0.1).unwrap();
        let even = sample_sino(|_, t| c((-PI * t * t).exp(), 0.0), dirs.clone(), t, Parity::EvenP).unwrap();
        assert!(matches!(bargmann_b(&even, &[c(0.0, 0.0); 2], 1.0), Err(Error::Parity(_))));
        let zero = Sinogram::zeros(dirs, t, Parity::SignedPtilde);
        assert_eq!(bargmann_b(&zero, &[c(0.2, -1.0), c(0.0, 0.5)], 1.0).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn b_of_gaussian_radon_in_three_dimensions() {
        let dirs = Arc::new(make_direction_grid(3, 40).unwrap());
        let t = TAxis::symmetric(8.0, 0.05).unwrap();
        let sino = sample_sino(|_, t| c((-PI * t * t).exp(), 0.0), dirs, t, Parity::EvenP).unwrap();
        for z in [[c(0.0, 0.0); 3], [c(0.5, -0.6), c(-0.3, 0.0), c(0.2, 0.4)]] {
            let b = bargmann_b(&sino, &z, 1.0).unwrap();
            let o = gaussian_bargmann_oracle(3, 1.0, &z);
            assert!((b - o).norm() < 1e-6 * o.norm(), "{b} vs {o}");
        }
    }

    #[test]
    fn b_of_hilbert_radon_in_the_plane() {
        let dirs = Arc::new(make_direction_grid(2, 64).unwrap());
        let t = TAxis::symmetric(8.0, 0.05).unwrap();
        let sino = sample_sino(|_, t| c((-PI * t * t).exp(), 0.0), dirs, t, Parity::EvenP).unwrap();
        let hr = crate::transforms::hilbert_t(&sino).unwrap();
        let z = [c(0.5, -0.6), c(-0.3, 0.2)];
        let b = bargmann_b(&hr, &z, 1.0).unwrap();
        let o = gaussian_bargmann_oracle(2, 1.0, &z);
        assert!((b - o).norm() < 1e-6 * o.norm(), "{b} vs {o}");
        assert!(integrand_parity_defect(&hr, &z, 1.0).unwrap() < 1e-10);
    }

    #[test]
    fn coherent_state_statistics() {
        for (n, h) in [(2usize, 1.0), (2, 0.25), (3, 0.5)] {
            let x: Vec<f64> = [1.0, 2.0, -0.5][..n].to_vec();
            let xi: Vec<f64> = [0.5, -1.0, 0.25][..n].to_vec();
            let cs = CoherentState::new(PhaseSpacePoint::new(x.clone(), xi.clone()).unwrap(), SemiclassicalParam::new(h).unwrap());
            let s = coherent_stats(&cs).unwrap();
            assert!((s.norm - 1.0).abs() < 1e-8);
            for k in 0..n {
                assert!((s.mean_pos[k] - x[k]).abs() < 1e-8);
                assert!((s.mean_freq[k] - xi[k]).abs() < 1e-8);
            }
            let target = n as f64 * PI * h;
            assert!((s.var_pos - target).abs() < 1e-6, "{}", s.var_pos);
            assert!((s.var_freq - target).abs() < 1e-6, "{}", s.var_freq);
        }
    }

    #[test]
    fn heisenberg_examples() {
        let cs = CoherentState::new(PhaseSpacePoint::new(vec![0.2, -0.1], vec![0.3, 0.0]).unwrap(), SemiclassicalParam::new(0.5).unwrap());
        let grid = cs.default_grid().unwrap();
        let rep = heisenberg_check(&cs.sample(&grid).unwrap(), 0.5).unwrap();
        assert!((rep.product - 2.0 * PI * 0.5).abs() < 1e-6 && rep.ok);

        let grid = BoxGrid::centered(2, 6.0, 161).unwrap();
        let g = crate::grids::sample(gaussian, &grid).unwrap();
        let rep = heisenberg_check(&g, 1.0).unwrap();
        assert!(rep.product >= 2.0 * PI * (1.0 - 1e-6) && rep.ok);

        // an odd Hermite function is not a minimizer
        let d = crate::grids::sample(|y| c(y[0] * (-PI * dot(y, y)).exp(), 0.0), &grid).unwrap();
        let rep = heisenberg_check(&d, 0.25).unwrap();
        assert!(rep.ok && rep.product > rep.bound * 1.5, "{rep:?}");
    }

    #[test]
    fn husimi_of_coherent_state_at_its_centre() {
        let h = 0.5;
        let p = PhaseSpacePoint::new(vec![0.4, -0.3], vec![0.6, 0.2]).unwrap();
        let cs = CoherentState::new(p.clone(), SemiclassicalParam::new(h).unwrap());
        let v = husimi_weight(|y| coherent_state_value(&cs, y), &p, h, &rule(2)).unwrap();
        assert!((v - c(1.0 / h, 0.0)).norm() < 1e-10, "{v}");
        let p0 = PhaseSpacePoint::new(vec![0.4, -0.3], vec![0.0, 0.0]).unwrap();
        let w = husimi_weight(gaussian, &p0, h, &rule(2)).unwrap();
        let t = bargmann_t(gaussian, p0.z(), h, &rule(2)).unwrap();
        assert_eq!(w, t);
    }

    #[test]
    fn transforms_are_holomorphic() {
        let r = rule(2);
        let f = |z: &[Complex64]| bargmann_t(gaussian, z, 0.5, &r);
        let res = cauchy_riemann_residual(f, &[c(0.3, -0.4), c(-0.2, 0.1)], 1e-3).unwrap();
        assert!(res < 1e-6, "{res}");
        // a non-holomorphic function is caught
        let g = |z: &[Complex64]| Ok(z[0].conj() * z[1]);
        assert!(cauchy_riemann_residual(g, &[c(0.3, -0.4), c(-0.2, 0.1)], 1e-3).unwrap() > 0.1);
    }
}
