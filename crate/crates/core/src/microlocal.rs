//! Canonical transforms between the cotangent bundle of hyperplane space
//! and `Λ_Φ`, critical-point analysis of the `B_h` phase, and decay scans
//! that read wave-front sets off weighted transform magnitudes.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::bargmann::{weighted_bargmann_b, weighted_bargmann_b_source, weighted_bargmann_t_grid, PhaseSpacePoint};
use crate::error::{invalid, Error, Result};
use crate::grids::{CotangentPointP, DirectionGrid, GridFunction, Sinogram};
use crate::phantom::{BargmannData, PhantomSpec};
use crate::quadrature::{dot, norm};

const TOL: f64 = 1e-10;

/// A point `(z, ζ)` of `Λ_Φ = {(x - iξ, 2πξ)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaPhiPoint {
    pub z: Vec<Complex64>,
    pub zeta_dual: Vec<Complex64>,
}

impl LambdaPhiPoint {
    pub fn new(z: Vec<Complex64>, zeta_dual: Vec<Complex64>) -> Result<Self> {
        let p = Self { z, zeta_dual };
        let gap = p.invariant_gap();
        if p.z.len() != p.zeta_dual.len() || gap > TOL * (1.0 + p.scale()) {
            return Err(invalid("zeta_dual", format!("point is off Λ_Φ by {gap:e}")));
        }
        Ok(p)
    }

    /// `max_k |ζ_k - 2π(-Im z_k)|`.
    pub fn invariant_gap(&self) -> f64 {
        self.z
            .iter()
            .zip(&self.zeta_dual)
            .map(|(z, d)| (d - Complex64::new(-2.0 * PI * z.im, 0.0)).norm())
            .fold(0.0, f64::max)
    }

    fn scale(&self) -> f64 {
        self.zeta_dual.iter().map(|d| d.norm()).fold(0.0, f64::max)
    }

    pub fn x(&self) -> Vec<f64> {
        self.z.iter().map(|z| z.re).collect()
    }

    pub fn xi(&self) -> Vec<f64> {
        self.z.iter().map(|z| -z.im).collect()
    }
}

/// `κ_B(ω, t, 2πτη, 2πτ) = (tω - η - iτω, 2πτω)`.
pub fn kappa_b(p: &CotangentPointP) -> Result<LambdaPhiPoint> {
    let scale = norm(&p.eta).max(1.0);
    if dot(&p.eta, &p.omega).abs() > TOL * scale {
        return Err(invalid("eta", "must be orthogonal to omega"));
    }
    let z = p
        .omega
        .iter()
        .zip(&p.eta)
        .map(|(&w, &e)| Complex64::new(p.t * w - e, -p.tau * w))
        .collect();
    let dual = p.omega.iter().map(|&w| Complex64::new(2.0 * PI * p.tau * w, 0.0)).collect();
    LambdaPhiPoint::new(z, dual)
}

/// Both representatives of `κ_B^{-1}(x - iξ, 2πξ)`, canonical one first.
pub fn kappa_b_inv(x: &[f64], xi: &[f64]) -> Result<[CotangentPointP; 2]> {
    if x.len() != xi.len() || x.len() < 2 {
        return Err(invalid("xi", "x and xi must share a dimension >= 2"));
    }
    let len = norm(xi);
    if len == 0.0 {
        return Err(invalid("xi", "must be non-zero"));
    }
    let omega: Vec<f64> = xi.iter().map(|v| v / len).collect();
    let t = dot(x, &omega);
    let eta: Vec<f64> = x.iter().zip(&omega).map(|(&xk, &wk)| -xk + t * wk).collect();
    let p = CotangentPointP::new(omega, t, eta, len)?.canonical();
    let q = p.antipode();
    Ok([p, q])
}

/// `K_T(x, 2πξ) = (x - iξ, 2πξ)`.
pub fn kappa_t(x: &[f64], xi: &[f64]) -> Result<LambdaPhiPoint> {
    if x.len() != xi.len() {
        return Err(invalid("xi", "dimension mismatch"));
    }
    let z = x.iter().zip(xi).map(|(&a, &b)| Complex64::new(a, -b)).collect();
    let dual = xi.iter().map(|&b| Complex64::new(2.0 * PI * b, 0.0)).collect();
    LambdaPhiPoint::new(z, dual)
}

/// Object-side points `(x, ξ)` for sinogram-side detections.
pub fn wavefront_map(detections: &[CotangentPointP]) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
    detections
        .iter()
        .map(|p| {
            if p.tau == 0.0 {
                return Err(invalid("tau", "a detection with τ = 0 carries no object frequency"));
            }
            let l = kappa_b(p)?;
            Ok((l.x(), l.xi()))
        })
        .collect()
}

/// Local coordinates `ζ = (ω', t)` on hyperplane space: the axis with the
/// largest `|ω_j|` at the base point is solved for, the rest are free.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    /// `perm[k]` is the original axis placed at position `k`; the solved
    /// axis is last.
    pub perm: Vec<usize>,
    pub sign: f64,
}

impl Chart {
    pub fn around(omega: &[f64]) -> Self {
        let n = omega.len();
        let last = (0..n).fold(0, |best, j| if omega[j].abs() > omega[best].abs() { j } else { best });
        let mut perm: Vec<usize> = (0..n).filter(|&j| j != last).collect();
        perm.push(last);
        Self { perm, sign: if omega[last] < 0.0 { -1.0 } else { 1.0 } }
    }

    pub fn coords(&self, omega: &[f64], t: f64) -> Vec<f64> {
        let n = omega.len();
        let mut zeta: Vec<f64> = self.perm[..n - 1].iter().map(|&j| omega[j]).collect();
        zeta.push(t);
        zeta
    }

    /// `(ω, t)` in the original axis order.
    pub fn point(&self, zeta: &[f64]) -> (Vec<f64>, f64) {
        let n = zeta.len();
        let mut omega = vec![0.0; n];
        let mut r2 = 0.0;
        for k in 0..n - 1 {
            omega[self.perm[k]] = zeta[k];
            r2 += zeta[k] * zeta[k];
        }
        omega[self.perm[n - 1]] = self.sign * (1.0 - r2).max(0.0).sqrt();
        (omega, zeta[n - 1])
    }

    pub fn permute(&self, v: &[f64]) -> Vec<f64> {
        self.perm.iter().map(|&j| v[j]).collect()
    }
}

const FD_STEP: f64 = 1e-4;

/// Central difference with one Richardson step: `(4D(ε) - D(2ε)) / 3`.
fn richardson<F: Fn(f64) -> T, T>(d: F) -> T
where
    T: std::ops::Mul<f64, Output = T> + std::ops::Sub<Output = T>,
{
    (d(FD_STEP) * 4.0 - d(2.0 * FD_STEP)) * (1.0 / 3.0)
}

fn im_phi_chart(x: &[f64], xi: &[f64], chart: &Chart, zeta: &[f64]) -> f64 {
    let (omega, t) = chart.point(zeta);
    let a = dot(x, &omega) - t;
    let b = dot(xi, &omega);
    PI * (a * a - b * b)
}

/// Gradient of `Im φ` in the chart centred at `(ω, t)`.
pub fn im_phase_gradient(x: &[f64], xi: &[f64], omega: &[f64], t: f64) -> Vec<f64> {
    let chart = Chart::around(omega);
    let base = chart.coords(omega, t);
    (0..base.len())
        .map(|k| {
            richardson(|e| {
                let mut p = base.clone();
                p[k] += e;
                let f1 = im_phi_chart(x, xi, &chart, &p);
                p[k] -= 2.0 * e;
                let f0 = im_phi_chart(x, xi, &chart, &p);
                (f1 - f0) / (2.0 * e)
            })
        })
        .collect()
}

/// Hessian of `Im φ` in the chart centred at `(ω, t)`.
pub fn im_phase_hessian(x: &[f64], xi: &[f64], omega: &[f64], t: f64) -> DMatrix<f64> {
    let chart = Chart::around(omega);
    let base = chart.coords(omega, t);
    let n = base.len();
    let f = |p: &[f64]| im_phi_chart(x, xi, &chart, p);
    let mut hess = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = richardson(|e| {
                let at = |si: f64, sj: f64| {
                    let mut p = base.clone();
                    p[i] += si * e;
                    p[j] += sj * e;
                    f(&p)
                };
                if i == j {
                    let mut p = base.clone();
                    let mid = f(&p);
                    p[i] += e;
                    let hi = f(&p);
                    p[i] -= 2.0 * e;
                    (hi - 2.0 * mid + f(&p)) / (e * e)
                } else {
                    (at(1.0, 1.0) - at(1.0, -1.0) - at(-1.0, 1.0) + at(-1.0, -1.0)) / (4.0 * e * e)
                }
            });
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    hess
}

/// The critical set of `Im φ(x - iξ; ω, t)` for fixed `ξ ≠ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPoints {
    /// `ω* = ξ/|ξ|` in canonical sign.
    pub omega: Vec<f64>,
    /// `t* = xω*`.
    pub t: f64,
    /// Largest gradient component at `(ω*, t*)`.
    pub gradient_norm: f64,
    pub degenerate: DegenerateSet,
}

/// `{(ω, t) : ξω = 0, t = xω}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegenerateSet {
    pub x: Vec<f64>,
    pub normal: Vec<f64>,
}

impl DegenerateSet {
    pub fn contains(&self, omega: &[f64], t: f64) -> bool {
        dot(&self.normal, omega).abs() <= TOL && (dot(&self.x, omega) - t).abs() <= TOL
    }

    /// A point of the set built from the first basis vector orthogonal to
    /// the normal.
    pub fn sample(&self) -> (Vec<f64>, f64) {
        let omega = crate::quadrature::orthonormal_complement(&self.normal).swap_remove(0);
        let t = dot(&self.x, &omega);
        (omega, t)
    }

    /// `Im φ` there is `π(xω - t)² - π(ξω)² = 0`.
    pub fn im_phase_value(&self) -> f64 {
        0.0
    }
}

pub fn critical_points(x: &[f64], xi: &[f64]) -> Result<CriticalPoints> {
    if x.len() != xi.len() || x.len() < 2 {
        return Err(invalid("xi", "x and xi must share a dimension >= 2"));
    }
    let len = norm(xi);
    if len == 0.0 {
        return Err(invalid("xi", "must be non-zero"));
    }
    let normal: Vec<f64> = xi.iter().map(|v| v / len).collect();
    let (omega, t, _) = crate::grids::canonical_hyperplane(&normal, dot(x, &normal));
    let gradient_norm = im_phase_gradient(x, xi, &omega, t).iter().fold(0.0f64, |m, g| m.max(g.abs()));
    Ok(CriticalPoints { omega, t, gradient_norm, degenerate: DegenerateSet { x: x.to_vec(), normal } })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HessianReport {
    pub eigenvalues: Vec<f64>,
    pub eigen_min: f64,
    /// `det ∂²φ/∂z∂ζ` by finite differences.
    pub det_zzeta: Complex64,
    /// `(2π)^n (ξ_n/ω_n)^{n-1} (-iω_n) det(E + ω'ω'ᵀ/ω_n²)`, in chart order.
    pub det_closed: Complex64,
    pub det_rel_gap: f64,
}

pub fn symmetric_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut e: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Hessian of `Im φ` and `det φ''_{zζ}` at the nondegenerate critical point.
pub fn hessian_check(x: &[f64], xi: &[f64]) -> Result<HessianReport> {
    let cp = critical_points(x, xi)?;
    let n = x.len();
    let eigenvalues = symmetric_eigenvalues(im_phase_hessian(x, xi, &cp.omega, cp.t));
    let eigen_min = eigenvalues[0];

    // everything below is in chart order
    let chart = Chart::around(&cp.omega);
    let xp = chart.permute(x);
    let xip = chart.permute(xi);
    let z: Vec<Complex64> = xp.iter().zip(&xip).map(|(&a, &b)| Complex64::new(a, -b)).collect();
    let base = chart.coords(&cp.omega, cp.t);
    let local = |zeta: &[f64]| -> (Vec<f64>, f64) {
        let (omega, t) = chart.point(zeta);
        (chart.permute(&omega), t)
    };
    // ∂φ/∂z_k = 2πi(zω - t)ω_k, differentiated in ζ
    let dz_phi = |zeta: &[f64], k: usize| -> Complex64 {
        let (omega, t) = local(zeta);
        let c: Complex64 = z.iter().zip(&omega).map(|(a, b)| a * b).sum::<Complex64>() - t;
        Complex64::new(0.0, 2.0 * PI) * c * omega[k]
    };
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for k in 0..n {
        for l in 0..n {
            m[(k, l)] = richardson(|e| {
                let mut p = base.clone();
                p[l] += e;
                let hi = dz_phi(&p, k);
                p[l] -= 2.0 * e;
                (hi - dz_phi(&p, k)) / (2.0 * e)
            });
        }
    }
    let det_zzeta = m.determinant();

    let (omega, _) = local(&base);
    let wn = omega[n - 1];
    let w_prime = &omega[..n - 1];
    let mut e = DMatrix::<f64>::identity(n - 1, n - 1);
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            e[(i, j)] += w_prime[i] * w_prime[j] / (wn * wn);
        }
    }
    let det_closed = (2.0 * PI).powi(n as i32)
        * (xip[n - 1] / wn).powi(n as i32 - 1)
        * Complex64::new(0.0, -wn)
        * e.determinant();
    let det_rel_gap = (det_zzeta - det_closed).norm() / det_closed.norm();
    if !det_rel_gap.is_finite() {
        return Err(Error::NonFinite("determinant comparison".into()));
    }
    Ok(HessianReport { eigenvalues, eigen_min, det_zzeta, det_closed, det_rel_gap })
}

/// Eigenvalues of the `Im φ` Hessian at a point of the degenerate set.
pub fn degenerate_hessian(x: &[f64], xi: &[f64]) -> Result<Vec<f64>> {
    let cp = critical_points(x, xi)?;
    let (omega, t) = cp.degenerate.sample();
    Ok(symmetric_eigenvalues(im_phase_hessian(x, xi, &omega, t)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecayClass {
    ExponentialDecay,
    RapidDecay,
    Slow,
}

impl DecayClass {
    pub fn name(self) -> &'static str {
        match self {
            Self::ExponentialDecay => "exponential_decay",
            Self::RapidDecay => "rapid_decay",
            Self::Slow => "slow",
        }
    }

    pub fn is_decaying(self) -> bool {
        self != Self::Slow
    }
}

impl std::fmt::Display for DecayClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Classification thresholds: `ε₀` for the slope against `1/h`, `N₀` for
/// the slope against `log h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayThresholds {
    pub eps0: f64,
    pub n0: f64,
}

impl Default for DecayThresholds {
    fn default() -> Self {
        Self { eps0: 0.01, n0: 3.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayProfile {
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
    /// `(h, weighted magnitude)`, `h` strictly decreasing.
    pub samples: Vec<(f64, f64)>,
    /// Slope of `log magnitude` against `1/h`.
    pub fitted_rate: f64,
    /// Slope of `log magnitude` against `log h`, when it was needed.
    pub log_slope: Option<f64>,
    pub class: DecayClass,
    /// Some magnitude was below the smallest normal double and was clamped.
    pub clamped: bool,
}

/// Anything whose weighted transform can be evaluated at `x - iξ`.
pub trait WeightedTransform: Sync {
    fn weighted(&self, p: &PhaseSpacePoint, h: f64) -> Result<Complex64>;
}

impl WeightedTransform for GridFunction {
    fn weighted(&self, p: &PhaseSpacePoint, h: f64) -> Result<Complex64> {
        weighted_bargmann_t_grid(self, p, h)
    }
}

impl WeightedTransform for Sinogram {
    fn weighted(&self, p: &PhaseSpacePoint, h: f64) -> Result<Complex64> {
        weighted_bargmann_b(self, p, h)
    }
}

/// Object-side `T_h` of a phantom.
pub struct ObjectSide<'a>(pub &'a PhantomSpec);

impl WeightedTransform for ObjectSide<'_> {
    fn weighted(&self, p: &PhaseSpacePoint, h: f64) -> Result<Complex64> {
        self.0.weighted_bargmann_t(&p.x, &p.xi, h)
    }
}

/// Sinogram-side `B_h` of a phantom's closed-form hyperplane data.
pub struct SinogramSide<'a> {
    pub phantom: &'a PhantomSpec,
    pub dirs: &'a DirectionGrid,
}

impl WeightedTransform for SinogramSide<'_> {
    fn weighted(&self, p: &PhaseSpacePoint, h: f64) -> Result<Complex64> {
        weighted_bargmann_b_source(&BargmannData(self.phantom), self.dirs, p, h)
    }
}

fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn check_h_list(h_list: &[f64]) -> Result<()> {
    if h_list.len() < 4 {
        return Err(invalid("h_list", "at least four values are needed for a fit"));
    }
    if h_list.iter().any(|&h| !(h > 0.0 && h.is_finite())) || h_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(invalid("h_list", "must be positive and strictly decreasing"));
    }
    Ok(())
}

/// Classify already measured magnitudes.
pub fn classify(x: &[f64], xi: &[f64], h_list: &[f64], magnitudes: &[f64], th: DecayThresholds) -> Result<DecayProfile> {
    check_h_list(h_list)?;
    if magnitudes.len() != h_list.len() || magnitudes.iter().any(|m| !(*m >= 0.0)) {
        return Err(invalid("magnitudes", "need one non-negative value per h"));
    }
    let mut clamped = false;
    let logs: Vec<f64> = magnitudes
        .iter()
        .map(|&m| {
            if m < f64::MIN_POSITIVE {
                clamped = true;
                f64::MIN_POSITIVE.ln()
            } else {
                m.ln()
            }
        })
        .collect();
    let inv_h: Vec<f64> = h_list.iter().map(|h| 1.0 / h).collect();
    let fitted_rate = fit_slope(&inv_h, &logs);
    let (class, log_slope) = if fitted_rate <= -th.eps0 {
        (DecayClass::ExponentialDecay, None)
    } else {
        let log_h: Vec<f64> = h_list.iter().map(|h| h.ln()).collect();
        let s = fit_slope(&log_h, &logs);
        (if s >= th.n0 { DecayClass::RapidDecay } else { DecayClass::Slow }, Some(s))
    };
    Ok(DecayProfile {
        x: x.to_vec(),
        xi: xi.to_vec(),
        samples: h_list.iter().copied().zip(magnitudes.iter().copied()).collect(),
        fitted_rate,
        log_slope,
        class,
        clamped,
    })
}

/// Weighted magnitudes at `x - iξ` for every `h`, then [`classify`].
pub fn decay_scan<S>(source: &S, x: &[f64], xi: &[f64], h_list: &[f64], th: DecayThresholds) -> Result<DecayProfile>
where
    S: WeightedTransform + ?Sized,
{
    if norm(xi) == 0.0 {
        return Err(invalid("xi", "must be non-zero"));
    }
    check_h_list(h_list)?;
    let p = PhaseSpacePoint::new(x.to_vec(), xi.to_vec())?;
    let magnitudes = h_list
        .par_iter()
        .map(|&h| source.weighted(&p, h).map(|v| v.norm()))
        .collect::<Result<Vec<f64>>>()?;
    classify(x, xi, h_list, &magnitudes, th)
}

/// `6s⁵ - 15s⁴ + 10s³` clamped to `[0, 1]`.
pub fn smoothstep(s: f64) -> f64 {
    let s = s.clamp(0.0, 1.0);
    s * s * s * (s * (6.0 * s - 15.0) + 10.0)
}

/// Cutoff data near a degenerate configuration. With `ν₀ = ξ₀/|ξ₀|` and
/// `α = asin(ρ/|ξ₀|)`, the angle `β = asin|ων₀|` measures how far a
/// hyperplane normal is from `ν₀^⊥`: `χ₁ = 1` for `β ≤ α` and vanishes
/// for `β ≥ 30° - α`. `χ₂ = 1` for `|t| ≤ T0` and vanishes for `|t| ≥ T1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffSpec {
    pub x0: Vec<f64>,
    pub xi0: Vec<f64>,
    pub rho: f64,
    pub t0: f64,
    pub t1: f64,
}

impl CutoffSpec {
    /// `T0 = sup_{β ≤ α} |x0·ω| + ρ` and `T1 = T0 + ρ`.
    pub fn new(x0: Vec<f64>, xi0: Vec<f64>, rho: f64) -> Result<Self> {
        if x0.len() != xi0.len() || x0.len() < 2 {
            return Err(invalid("xi0", "x0 and xi0 must share a dimension >= 2"));
        }
        let len = norm(&xi0);
        if !(rho > 0.0) || rho > len / 2.0 || rho > 1.0 {
            return Err(invalid("rho", format!("need 0 < ρ ≤ min(|ξ0|/2, 1), got ρ = {rho}, |ξ0| = {len}")));
        }
        let nu: Vec<f64> = xi0.iter().map(|v| v / len).collect();
        let a = dot(&x0, &nu).abs();
        let perp = (dot(&x0, &x0) - a * a).max(0.0).sqrt();
        let sin_alpha = rho / len;
        let x_len = norm(&x0);
        // maximize a·s + |x⊥|·√(1 - s²) over |s| ≤ sin α
        let sup = if x_len == 0.0 || a / x_len <= sin_alpha {
            x_len
        } else {
            a * sin_alpha + perp * (1.0 - sin_alpha * sin_alpha).sqrt()
        };
        let t0 = sup + rho;
        Ok(Self { x0, xi0, rho, t0, t1: t0 + rho })
    }

    /// Replace `T1`; values not above `T0` fall back to `T0 + ρ`.
    pub fn with_t1(mut self, t1: f64) -> Self {
        self.t1 = if t1 > self.t0 { t1 } else { self.t0 + self.rho };
        self
    }

    pub fn alpha(&self) -> f64 {
        (self.rho / norm(&self.xi0)).asin()
    }

    pub fn chi1(&self, omega: &[f64]) -> f64 {
        let len = norm(&self.xi0);
        let beta = (dot(omega, &self.xi0).abs() / len).min(1.0).asin();
        let lo = self.alpha();
        let hi = PI / 6.0 - lo;
        if hi <= lo {
            return if beta <= lo { 1.0 } else { 0.0 };
        }
        1.0 - smoothstep((beta - lo) / (hi - lo))
    }

    pub fn chi2(&self, t: f64) -> f64 {
        1.0 - smoothstep((t.abs() - self.t0) / (self.t1 - self.t0))
    }

    pub fn chi(&self, omega: &[f64], t: f64) -> f64 {
        self.chi1(omega) * self.chi2(t)
    }

    /// The points of `B_ρ(x0) × B_ρ(ξ0)` where the sup is sampled: the
    /// centre and the `±ρ` offsets along each axis, in both factors.
    pub fn probe_points(&self) -> Vec<(Vec<f64>, Vec<f64>)> {
        let n = self.x0.len();
        let offsets = |c: &[f64]| {
            let mut v = vec![c.to_vec()];
            for k in 0..n {
                for s in [-1.0, 1.0] {
                    let mut p = c.to_vec();
                    p[k] += s * self.rho;
                    v.push(p);
                }
            }
            v
        };
        let xs = offsets(&self.x0);
        let xis = offsets(&self.xi0);
        xs.iter().flat_map(|x| xis.iter().map(move |xi| (x.clone(), xi.clone()))).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutoffReport {
    /// `(h, sup of weighted |B_h(χU)|)`.
    pub samples: Vec<(f64, f64)>,
    /// `-d log(sup)/d(1/h)`; infinite when every magnitude is zero.
    pub measured_rate: f64,
    /// `π|ξ0|²/8`.
    pub bound_rate: f64,
    pub ok: bool,
}

/// Decay rate of `e^{-π|ξ|²/h} B_h(χU)(x - iξ)` near `(x0, ξ0)`, compared
/// with `π|ξ0|²/8` at 10% tolerance.
pub fn degenerate_cutoff_experiment(u: &Sinogram, spec: &CutoffSpec, h_list: &[f64]) -> Result<CutoffReport> {
    check_h_list(h_list)?;
    if spec.x0.len() != u.n() {
        return Err(invalid("spec", "dimension differs from the sinogram"));
    }
    let ts = u.t.values();
    let mut values = Vec::with_capacity(u.values.len());
    for (i, omega) in u.dirs.directions.iter().enumerate() {
        let c1 = spec.chi1(omega);
        values.extend(u.row(i).iter().zip(&ts).map(|(v, &t)| v * (c1 * spec.chi2(t))));
    }
    let chi_u = Sinogram::new(u.dirs.clone(), u.t, values, u.parity)?;
    let probes = spec.probe_points();
    let tasks: Vec<(usize, usize)> = (0..h_list.len()).flat_map(|i| (0..probes.len()).map(move |j| (i, j))).collect();
    let values = tasks
        .par_iter()
        .map(|&(i, j)| {
            let p = PhaseSpacePoint::new(probes[j].0.clone(), probes[j].1.clone())?;
            weighted_bargmann_b(&chi_u, &p, h_list[i]).map(|v| v.norm())
        })
        .collect::<Result<Vec<f64>>>()?;
    let samples: Vec<(f64, f64)> = h_list
        .iter()
        .enumerate()
        .map(|(i, &h)| (h, values[i * probes.len()..(i + 1) * probes.len()].iter().fold(0.0, |m: f64, v| m.max(*v))))
        .collect();
    let bound_rate = PI * dot(&spec.xi0, &spec.xi0) / 8.0;
    let measured_rate = if samples.iter().all(|s| s.1 == 0.0) {
        f64::INFINITY
    } else {
        let inv_h: Vec<f64> = samples.iter().map(|s| 1.0 / s.0).collect();
        let logs: Vec<f64> = samples.iter().map(|s| s.1.max(f64::MIN_POSITIVE).ln()).collect();
        -fit_slope(&inv_h, &logs)
    };
    Ok(CutoffReport { samples, measured_rate, bound_rate, ok: measured_rate >= 0.9 * bound_rate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::{make_direction_grid, sample_sino, Parity, TAxis};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let l = norm(&v);
            if l > 0.1 && l <= 1.0 {
                return v.iter().map(|x| x / l).collect();
            }
        }
    }

    #[test]
    fn kappa_b_examples() {
        let p = CotangentPointP::new(vec![0.0, 1.0], 1.0, vec![1.0, 0.0], 1.0).unwrap();
        let l = kappa_b(&p).unwrap();
        assert_eq!(l.z, vec![c(-1.0, 0.0), c(1.0, -1.0)]);
        assert_relative_eq!(l.zeta_dual[1].re, 2.0 * PI);
        assert_eq!(l.zeta_dual[0], c(0.0, 0.0));
        // the example as an actual covector ((2πτη, 2πτ) = ((2π, 0), 2π))
        let q = CotangentPointP::from_covector(vec![0.0, 1.0], 1.0, &[2.0 * PI, 0.0], 2.0 * PI).unwrap();
        assert_eq!(kappa_b(&q).unwrap(), l);
        let zero = CotangentPointP::new(vec![0.6, 0.8], 0.5, vec![0.0, 0.0], 0.0).unwrap();
        let l = kappa_b(&zero).unwrap();
        assert!(l.z.iter().all(|z| z.im == 0.0));
        assert_relative_eq!(l.z[0].re, 0.3);
        assert!(l.zeta_dual.iter().all(|d| d.norm() == 0.0));
    }

    #[test]
    fn kappa_b_rejects_non_orthogonal_fibre() {
        let p = CotangentPointP { omega: vec![0.0, 1.0], t: 0.0, eta: vec![0.0, 1.0], tau: 1.0 };
        assert!(kappa_b(&p).is_err());
        assert!(LambdaPhiPoint::new(vec![c(0.0, -1.0)], vec![c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn kappa_b_inv_examples() {
        let [p, q] = kappa_b_inv(&[1.0, 0.0], &[0.0, 2.0]).unwrap();
        let (eta, tau) = p.covector();
        assert_eq!(p.omega, vec![0.0, 1.0]);
        assert_eq!(p.t, 0.0);
        assert_relative_eq!(eta[0], -4.0 * PI, epsilon = 1e-12);
        assert_eq!(eta[1], 0.0);
        assert_relative_eq!(tau, 4.0 * PI);
        assert_eq!(q, p.antipode());
        let [p, _] = kappa_b_inv(&[0.0, 0.0, 0.0], &[0.3, -1.0, 2.0]).unwrap();
        assert_eq!(p.t, 0.0);
        assert!(p.eta.iter().all(|e| *e == 0.0));
        assert!(kappa_b_inv(&[0.0, 0.0], &[0.0, 0.0]).is_err());
    }

    #[test]
    fn kappa_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2, 3] {
            for _ in 0..100 {
                let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
                let xi: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
                let target = kappa_t(&x, &xi).unwrap();
                for p in kappa_b_inv(&x, &xi).unwrap() {
                    let l = kappa_b(&p).unwrap();
                    for k in 0..n {
                        assert!((l.z[k] - target.z[k]).norm() <= 1e-10);
                        assert!((l.zeta_dual[k] - target.zeta_dual[k]).norm() <= 1e-10);
                    }
                }
                // starting on the sinogram side
                let omega = random_unit(&mut rng, n);
                let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let s = dot(&raw, &omega);
                let eta: Vec<f64> = raw.iter().zip(&omega).map(|(r, w)| r - s * w).collect();
                let p = CotangentPointP::new(omega, rng.gen_range(-2.0..2.0), eta, rng.gen_range(0.2..3.0)).unwrap();
                let l = kappa_b(&p).unwrap();
                assert!(l.invariant_gap() <= 1e-10);
                let back = kappa_b_inv(&l.x(), &l.xi()).unwrap();
                let same = |a: &CotangentPointP, b: &CotangentPointP| {
                    a.omega.iter().zip(&b.omega).all(|(u, v)| (u - v).abs() < 1e-10)
                        && (a.t - b.t).abs() < 1e-10
                        && a.eta.iter().zip(&b.eta).all(|(u, v)| (u - v).abs() < 1e-10)
                        && (a.tau - b.tau).abs() < 1e-10
                };
                assert!(same(&back[0], &p) || same(&back[1], &p));
                assert_eq!(kappa_b(&p.antipode()).unwrap().z, l.z);
            }
        }
    }

    #[test]
    fn kappa_t_examples() {
        let l = kappa_t(&[0.0, 0.0], &[0.0, 0.0]).unwrap();
        assert!(l.z.iter().chain(&l.zeta_dual).all(|v| v.norm() == 0.0));
        let l = kappa_t(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert_eq!(l.z, vec![c(1.0, 0.0), c(0.0, -1.0)]);
        assert_eq!(l.zeta_dual, vec![c(0.0, 0.0), c(2.0 * PI, 0.0)]);
    }

    #[test]
    fn wavefront_map_examples() {
        let d = CotangentPointP::from_covector(vec![0.0, 1.0], 0.0, &[-4.0 * PI, 0.0], 4.0 * PI).unwrap();
        let out = wavefront_map(&[d.clone(), d.antipode()]).unwrap();
        for (x, xi) in out {
            assert!((x[0] - 1.0).abs() < 1e-12 && x[1].abs() < 1e-12);
            assert!(xi[0].abs() < 1e-12 && (xi[1] - 2.0).abs() < 1e-12);
        }
        assert!(wavefront_map(&[]).unwrap().is_empty());
        let flat = CotangentPointP::new(vec![1.0, 0.0], 0.0, vec![0.0, 0.0], 0.0).unwrap();
        assert!(wavefront_map(&[flat]).is_err());
    }

    #[test]
    fn critical_point_examples() {
        let cp = critical_points(&[0.0, 0.0], &[0.0, 1.0]).unwrap();
        assert_eq!(cp.omega, vec![0.0, 1.0]);
        assert_eq!(cp.t, 0.0);
        assert!(cp.gradient_norm <= 1e-8);
        let xi = [0.6 * 2.0, 0.8 * 2.0];
        let cp = critical_points(&[1.0, 1.0], &xi).unwrap();
        assert_relative_eq!(cp.t, 1.4, epsilon = 1e-14);
        assert!(cp.gradient_norm <= 1e-8);
        let g = im_phase_gradient(&[1.0, 1.0], &xi, &[1.0, 0.0], 0.3);
        assert!(g.iter().any(|v| v.abs() > 0.1));
        assert!(critical_points(&[0.0, 0.0], &[0.0, 0.0]).is_err());
        let (omega, t) = cp.degenerate.sample();
        assert!(cp.degenerate.contains(&omega, t));
        assert!(im_phase_gradient(&[1.0, 1.0], &xi, &omega, t).iter().all(|v| v.abs() <= 1e-8));
    }

    #[test]
    fn critical_value_is_the_maximum_of_minus_im_phase() {
        let x = [0.4, -0.2, 0.1];
        let xi = [1.0, -0.5, 0.7];
        let bound = PI * dot(&xi, &xi);
        let dirs = make_direction_grid(3, 24).unwrap();
        let t = TAxis::symmetric(2.0, 0.05).unwrap();
        let mut best = f64::NEG_INFINITY;
        for omega in &dirs.directions {
            for tv in t.values() {
                best = best.max(-crate::bargmann::im_phase(&x, &xi, omega, tv));
            }
        }
        assert!(best <= bound + 1e-12);
        assert!(best > 0.9 * bound);
    }

    #[test]
    fn hessian_examples() {
        let r = hessian_check(&[0.0, 0.0], &[0.0, 1.0]).unwrap();
        assert!(r.eigen_min > 0.0);
        assert!(r.det_rel_gap <= 1e-6, "{r:?}");
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2, 3] {
            for _ in 0..20 {
                let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let xi: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let r = hessian_check(&x, &xi).unwrap();
                assert!(r.eigen_min > 0.0, "{r:?}");
                assert!(r.det_zzeta.norm() > 0.0);
                assert!(r.det_rel_gap <= 1e-6, "{r:?}");
                let cp = critical_points(&x, &xi).unwrap();
                assert!(cp.gradient_norm <= 1e-8);
            }
        }
    }

    #[test]
    fn degenerate_points_have_a_flat_direction_in_three_dimensions() {
        let e = degenerate_hessian(&[0.3, -0.1, 0.5], &[0.2, 1.1, -0.7]).unwrap();
        assert!(e.iter().any(|v| v.abs() <= 1e-6), "{e:?}");
        // in the plane the degenerate point is a saddle
        let e = degenerate_hessian(&[0.3, -0.1], &[0.2, 1.1]).unwrap();
        assert!(e[0] < 0.0 && e[1] > 0.0, "{e:?}");
    }

    #[test]
    fn chart_round_trip() {
        let omega = [0.36, -0.48, 0.8];
        let ch = Chart::around(&omega);
        assert_eq!(ch.perm, vec![0, 1, 2]);
        let (w, t) = ch.point(&ch.coords(&omega, 0.7));
        assert!(w.iter().zip(&omega).all(|(a, b)| (a - b).abs() < 1e-15) && t == 0.7);
        let ch = Chart::around(&[-0.8, 0.6]);
        assert_eq!((ch.perm.clone(), ch.sign), (vec![1, 0], -1.0));
    }

    #[test]
    fn classification_rules() {
        let h = [0.5, 0.25, 0.125, 0.0625];
        let th = DecayThresholds::default();
        let exp: Vec<f64> = h.iter().map(|h: &f64| (-2.0 / h).exp()).collect();
        assert_eq!(classify(&[0.0], &[1.0], &h, &exp, th).unwrap().class, DecayClass::ExponentialDecay);
        // on so short an h range a power law is also steep against 1/h
        let poly: Vec<f64> = h.iter().map(|h| h.powi(5)).collect();
        assert_eq!(classify(&[0.0], &[1.0], &h, &poly, th).unwrap().class, DecayClass::ExponentialDecay);
        let loose = DecayThresholds { eps0: 10.0, n0: 3.0 };
        let p = classify(&[0.0], &[1.0], &h, &poly, loose).unwrap();
        assert_eq!(p.class, DecayClass::RapidDecay);
        assert_relative_eq!(p.log_slope.unwrap(), 5.0, epsilon = 1e-12);
        let flat: Vec<f64> = h.iter().map(|h| h.powf(0.005)).collect();
        assert_eq!(classify(&[0.0], &[1.0], &h, &flat, th).unwrap().class, DecayClass::Slow);
        let zero = classify(&[0.0], &[1.0], &h, &[1.0, 1e-200, 0.0, 0.0], th).unwrap();
        assert!(zero.clamped);
        assert!(classify(&[0.0], &[1.0], &[0.5, 0.25, 0.25, 0.1], &exp, th).is_err());
        assert!(classify(&[0.0], &[1.0], &h[..3], &exp[..3], th).is_err());
    }

    #[test]
    fn gaussian_scans_decay_exponentially() {
        let g = PhantomSpec::standard_gaussian(2).unwrap();
        let h = [0.25, 0.125, 0.0625, 0.03125];
        for (x, xi) in [([0.0, 0.0], [1.0, 0.0]), ([1.0, -0.5], [0.3, 0.4]), ([0.2, 0.1], [-1.0, 0.0])] {
            let p = decay_scan(&ObjectSide(&g), &x, &xi, &h, DecayThresholds::default()).unwrap();
            assert_eq!(p.class, DecayClass::ExponentialDecay, "{p:?}");
        }
        assert!(decay_scan(&ObjectSide(&g), &[0.0, 0.0], &[0.0, 0.0], &h, DecayThresholds::default()).is_err());
    }

    #[test]
    fn disk_scans_separate_conormal_points() {
        let disk = PhantomSpec::unit_disk();
        let h = [0.25, 0.125, 0.0625, 0.03125];
        let th = DecayThresholds::default();
        let conormal = decay_scan(&ObjectSide(&disk), &[1.0, 0.0], &[1.0, 0.0], &h, th).unwrap();
        assert_eq!(conormal.class, DecayClass::Slow, "{conormal:?}");
        let interior = decay_scan(&ObjectSide(&disk), &[0.0, 0.0], &[1.0, 0.0], &h, th).unwrap();
        assert_eq!(interior.class, DecayClass::ExponentialDecay, "{interior:?}");
        let flipped = decay_scan(&ObjectSide(&disk), &[1.0, 0.0], &[-1.0, 0.0], &h, th).unwrap();
        assert_eq!(flipped.class, conormal.class);

        let dirs = make_direction_grid(2, 256).unwrap();
        let side = SinogramSide { phantom: &disk, dirs: &dirs };
        let s = decay_scan(&side, &[1.0, 0.0], &[1.0, 0.0], &h, th).unwrap();
        assert_eq!(s.class, DecayClass::Slow, "{s:?}");
    }

    #[test]
    fn cutoff_spec_validation() {
        assert!(CutoffSpec::new(vec![0.0; 3], vec![0.0, 0.0, 2.0], 1.5).is_err());
        let s = CutoffSpec::new(vec![0.0; 3], vec![0.0, 0.0, 2.0], 0.25).unwrap();
        assert_relative_eq!(s.t0, 0.25);
        assert_relative_eq!(s.t1, 0.5);
        assert_eq!(s.clone().with_t1(0.1).t1, 0.5);
        assert_eq!(s.chi(&[1.0, 0.0, 0.0], 0.0), 1.0);
        assert_eq!(s.chi(&[0.0, 0.0, 1.0], 0.0), 0.0);
        assert_eq!(s.chi(&[1.0, 0.0, 0.0], 0.6), 0.0);
        assert_eq!(s.probe_points().len(), 49);
        let off = CutoffSpec::new(vec![1.0, 0.0], vec![0.0, 2.0], 0.5).unwrap();
        assert_relative_eq!(off.t0, 1.5);
        assert_eq!(smoothstep(0.5), 0.5);
    }

    #[test]
    fn cutoff_of_zero_data() {
        let dirs = Arc::new(make_direction_grid(3, 8).unwrap());
        let t = TAxis::symmetric(2.0, 0.1).unwrap();
        let zero = Sinogram::zeros(dirs, t, Parity::EvenP);
        let spec = CutoffSpec::new(vec![0.0; 3], vec![0.0, 0.0, 2.0], 0.25).unwrap();
        let r = degenerate_cutoff_experiment(&zero, &spec, &[0.5, 0.25, 0.125, 0.0625]).unwrap();
        assert!(r.ok && r.samples.iter().all(|s| s.1 == 0.0));
        assert!(degenerate_cutoff_experiment(&zero, &spec, &[0.5, 0.25, 0.125]).is_err());
    }

    #[test]
    fn cutoff_of_gaussian_data() {
        let dirs = Arc::new(make_direction_grid(3, 64).unwrap());
        let t = TAxis::symmetric(6.0, 0.025).unwrap();
        let u = sample_sino(|_, t| c((-PI * t * t).exp(), 0.0), dirs, t, Parity::EvenP).unwrap();
        let spec = CutoffSpec::new(vec![0.0; 3], vec![0.0, 0.0, 2.0], 0.25).unwrap();
        let r = degenerate_cutoff_experiment(&u, &spec, &[0.5, 0.25, 0.125, 0.0625]).unwrap();
        assert!(r.ok, "{r:?}");
    }
}
