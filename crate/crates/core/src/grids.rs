//! Box grids on `R^n`, antipodally symmetric direction grids on the sphere,
//! uniform `t` axes and sinograms with their parity bookkeeping.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::quadrature::{dot, gauss_legendre, norm};

/// Uniform tensor grid: `origin[k] + i * spacing[k]` for `i < shape[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxGrid {
    pub origin: Vec<f64>,
    pub spacing: Vec<f64>,
    pub shape: Vec<usize>,
}

impl BoxGrid {
    pub fn new(origin: Vec<f64>, spacing: Vec<f64>, shape: Vec<usize>) -> Result<Self> {
        if origin.len() != spacing.len() || origin.len() != shape.len() || origin.is_empty() {
            return Err(invalid("grid", "origin, spacing and shape must have equal non-zero length"));
        }
        if spacing.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
            return Err(invalid("spacing", "every spacing must be positive and finite"));
        }
        if shape.contains(&0) {
            return Err(invalid("shape", "every axis needs at least one sample"));
        }
        Ok(Self { origin, spacing, shape })
    }

    /// `count` points per axis covering `[-half_width, half_width]`.
    pub fn centered(n: usize, half_width: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(invalid("count", "need at least two points per axis"));
        }
        let step = 2.0 * half_width / (count - 1) as f64;
        Self::new(vec![-half_width; n], vec![step; n], vec![count; n])
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    /// Multi-index of the flat (row-major) index.
    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for k in (0..self.dim()).rev() {
            idx[k] = flat % self.shape[k];
            flat /= self.shape[k];
        }
        idx
    }

    pub fn coordinate(&self, axis: usize, i: usize) -> f64 {
        self.origin[axis] + i as f64 * self.spacing[axis]
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        self.unravel(flat)
            .iter()
            .enumerate()
            .map(|(k, &i)| self.coordinate(k, i))
            .collect()
    }

    pub fn axis(&self, axis: usize) -> Vec<f64> {
        (0..self.shape[axis]).map(|i| self.coordinate(axis, i)).collect()
    }
}

/// Samples of a function on a [`BoxGrid`], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub grid: BoxGrid,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: BoxGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(invalid(
                "values",
                format!("expected {} samples, got {}", grid.len(), values.len()),
            ));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: BoxGrid) -> Self {
        let len = grid.len();
        Self { grid, values: vec![Complex64::new(0.0, 0.0); len] }
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    /// Riemann sum `Σ f(y_i) Δ^n`.
    pub fn integrate(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() * self.grid.cell_volume()
    }

    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.cell_volume()).sqrt()
    }

    /// Multilinear interpolation; zero outside the grid.
    pub fn interpolate(&self, y: &[f64]) -> Complex64 {
        let n = self.dim();
        let mut base = vec![0usize; n];
        let mut frac = vec![0.0; n];
        for k in 0..n {
            let s = (y[k] - self.grid.origin[k]) / self.grid.spacing[k];
            let last = self.grid.shape[k] as f64 - 1.0;
            if !(s >= 0.0 && s <= last) {
                return Complex64::new(0.0, 0.0);
            }
            let i = (s.floor() as usize).min(self.grid.shape[k].saturating_sub(2));
            base[k] = i;
            frac[k] = s - i as f64;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for corner in 0..(1usize << n) {
            let mut weight = 1.0;
            let mut flat = 0;
            for k in 0..n {
                let bit = (corner >> k) & 1;
                let i = (base[k] + bit).min(self.grid.shape[k] - 1);
                weight *= if bit == 1 { frac[k] } else { 1.0 - frac[k] };
                flat = flat * self.grid.shape[k] + i;
            }
            if weight != 0.0 {
                acc += weight * self.values[flat];
            }
        }
        acc
    }
}

/// Evaluate `f` at every node of `grid`.
pub fn sample<F>(f: F, grid: &BoxGrid) -> Result<GridFunction>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    let values: Vec<Complex64> = (0..grid.len())
        .into_par_iter()
        .map(|i| f(&grid.point(i)))
        .collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("grid point {:?}", grid.point(i))));
    }
    GridFunction::new(grid.clone(), values)
}

/// Quadrature on the unit sphere `S^{n-1}` with an exact antipodal pairing.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionGrid {
    pub n: usize,
    pub directions: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub antipode: Vec<usize>,
}

impl DirectionGrid {
    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        self.directions
            .iter()
            .zip(&self.weights)
            .map(|(d, w)| w * f(d))
            .sum()
    }
}

/// Direction grid with `resolution` angles (n = 2) or
/// `resolution / 2` Gauss–Legendre polar nodes times `resolution`
/// azimuths (n = 3).
///
/// For `n = 3` the rule integrates spherical harmonics of degree
/// `< resolution` exactly. Antipodes are exact negations of the stored
/// vectors, not merely close to them.
pub fn make_direction_grid(n: usize, resolution: usize) -> Result<DirectionGrid> {
    if resolution == 0 || resolution % 2 == 1 {
        return Err(invalid("resolution", format!("must be even and positive, got {resolution}")));
    }
    match n {
        2 => {
            let m = resolution;
            let half = m / 2;
            let mut directions = Vec::with_capacity(m);
            for i in 0..half {
                let theta = 2.0 * PI * i as f64 / m as f64;
                directions.push(vec![theta.cos(), theta.sin()]);
            }
            for i in 0..half {
                let d: Vec<f64> = directions[i].iter().map(|c: &f64| -c).collect();
                directions.push(d);
            }
            let antipode = (0..m).map(|i| (i + half) % m).collect();
            Ok(DirectionGrid { n, directions, weights: vec![2.0 * PI / m as f64; m], antipode })
        }
        3 => {
            let polar = resolution / 2;
            let azim = resolution;
            let half = azim / 2;
            let rule = gauss_legendre(polar);
            let mut cs = Vec::with_capacity(azim);
            for j in 0..half {
                let phi = 2.0 * PI * j as f64 / azim as f64;
                cs.push((phi.cos(), phi.sin()));
            }
            for j in 0..half {
                cs.push((-cs[j].0, -cs[j].1));
            }
            let mut directions = Vec::with_capacity(polar * azim);
            let mut weights = Vec::with_capacity(polar * azim);
            let mut antipode = Vec::with_capacity(polar * azim);
            for i in 0..polar {
                let ct = rule.nodes[i];
                let st = (1.0 - ct * ct).max(0.0).sqrt();
                for (j, &(c, s)) in cs.iter().enumerate() {
                    directions.push(vec![st * c, st * s, ct]);
                    weights.push(rule.weights[i] * 2.0 * PI / azim as f64);
                    antipode.push((polar - 1 - i) * azim + (j + half) % azim);
                }
            }
            // Gauss–Legendre nodes are symmetric but computed per half;
            // enforce exact negation on the pairs.
            for k in 0..directions.len() {
                let a = antipode[k];
                if a > k {
                    let neg: Vec<f64> = directions[k].iter().map(|c| -c).collect();
                    directions[a] = neg;
                }
            }
            Ok(DirectionGrid { n, directions, weights, antipode })
        }
        _ => Err(Error::Dimension(n, "2 or 3")),
    }
}

/// Uniform axis `t_j = t_min + j (t_max - t_min)/(count - 1)`.
///
/// When the axis is symmetric, nodes are generated so that
/// `t_{count-1-j} = -t_j` holds bit for bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TAxis {
    pub t_min: f64,
    pub t_max: f64,
    pub count: usize,
}

impl TAxis {
    pub fn new(t_min: f64, t_max: f64, count: usize) -> Result<Self> {
        if count < 2 || !(t_max > t_min) || !t_min.is_finite() || !t_max.is_finite() {
            return Err(invalid("t axis", format!("need t_min < t_max and count >= 2, got [{t_min}, {t_max}] x {count}")));
        }
        Ok(Self { t_min, t_max, count })
    }

    /// Symmetric axis `[-half_width, half_width]` with spacing close to `dt`
    /// (the count is rounded up to the next odd number so `t = 0` is a node).
    pub fn symmetric(half_width: f64, dt: f64) -> Result<Self> {
        let mut intervals = (2.0 * half_width / dt).round() as usize;
        if intervals % 2 == 1 {
            intervals += 1;
        }
        Self::new(-half_width, half_width, intervals + 1)
    }

    pub fn step(&self) -> f64 {
        (self.t_max - self.t_min) / (self.count - 1) as f64
    }

    pub fn is_symmetric(&self) -> bool {
        (self.t_min + self.t_max).abs() <= 1e-12 * self.t_max.abs().max(1.0)
    }

    pub fn value(&self, j: usize) -> f64 {
        if self.is_symmetric() {
            let m = (self.count - 1) as f64;
            (2.0 * j as f64 - m) * (self.t_max / m)
        } else {
            self.t_min + j as f64 * self.step()
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|j| self.value(j)).collect()
    }
}

/// Behaviour of a hyperplane function under `(ω, t) ↦ (-ω, -t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    /// `U(-ω,-t) = U(ω,t)`: a function on hyperplane space.
    EvenP,
    /// `U(-ω,-t) = (-1)^{n-1} U(ω,t)`.
    SignedPtilde,
    /// `U(-ω,-t) = -U(ω,t)`.
    Odd,
}

impl Parity {
    pub fn sign(self, n: usize) -> f64 {
        match self {
            Parity::EvenP => 1.0,
            Parity::Odd => -1.0,
            Parity::SignedPtilde => {
                if n % 2 == 1 {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }

    /// The parity after a map that flips the sign under reflection
    /// (Hilbert transform, odd derivatives).
    pub fn flipped(self, n: usize) -> Parity {
        let s = -self.sign(n);
        Parity::from_sign(s, n)
    }

    pub fn from_sign(sign: f64, n: usize) -> Parity {
        if sign > 0.0 {
            Parity::EvenP
        } else if n % 2 == 0 {
            Parity::SignedPtilde
        } else {
            Parity::Odd
        }
    }

    pub fn code(self) -> u8 {
        match self {
            Parity::EvenP => 0,
            Parity::SignedPtilde => 1,
            Parity::Odd => 2,
        }
    }

    pub fn from_code(code: u8) -> Result<Parity> {
        match code {
            0 => Ok(Parity::EvenP),
            1 => Ok(Parity::SignedPtilde),
            2 => Ok(Parity::Odd),
            other => Err(Error::Format(format!("unknown parity code {other}"))),
        }
    }
}

/// Samples `U(ω_i, t_j)`, direction-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Sinogram {
    pub dirs: Arc<DirectionGrid>,
    pub t: TAxis,
    pub values: Vec<Complex64>,
    pub parity: Parity,
}

impl Sinogram {
    pub fn new(dirs: Arc<DirectionGrid>, t: TAxis, values: Vec<Complex64>, parity: Parity) -> Result<Self> {
        if values.len() != dirs.len() * t.count {
            return Err(invalid(
                "values",
                format!("expected {} samples, got {}", dirs.len() * t.count, values.len()),
            ));
        }
        Ok(Self { dirs, t, values, parity })
    }

    pub fn zeros(dirs: Arc<DirectionGrid>, t: TAxis, parity: Parity) -> Self {
        let len = dirs.len() * t.count;
        Self { dirs, t, values: vec![Complex64::new(0.0, 0.0); len], parity }
    }

    pub fn n(&self) -> usize {
        self.dirs.n
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.values[i * self.t.count..(i + 1) * self.t.count]
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.t.count + j]
    }

    /// Apply `f` to every row, keeping geometry; the result carries `parity`.
    pub fn map_rows<F>(&self, parity: Parity, f: F) -> Sinogram
    where
        F: Fn(&[Complex64]) -> Vec<Complex64> + Sync,
    {
        let rows: Vec<Vec<Complex64>> = (0..self.dirs.len())
            .into_par_iter()
            .map(|i| f(self.row(i)))
            .collect();
        Sinogram {
            dirs: Arc::clone(&self.dirs),
            t: self.t,
            values: rows.into_iter().flatten().collect(),
            parity,
        }
    }

    /// `½ Σ_i w_i Σ_j Δt f(U_ij, i, j)`: integral over hyperplane space
    /// realized as half the integral over the double cover.
    pub fn integrate_half(&self) -> Complex64 {
        let dt = self.t.step();
        let mut total = Complex64::new(0.0, 0.0);
        for (i, w) in self.dirs.weights.iter().enumerate() {
            let s: Complex64 = self.row(i).iter().sum();
            total += *w * s;
        }
        0.5 * dt * total
    }
}

/// Evaluate `f(ω, t)` on the direction grid times the `t` axis.
pub fn sample_sino<F>(f: F, dirs: Arc<DirectionGrid>, t: TAxis, parity: Parity) -> Result<Sinogram>
where
    F: Fn(&[f64], f64) -> Complex64 + Sync,
{
    let ts = t.values();
    let rows: Vec<Vec<Complex64>> = dirs
        .directions
        .par_iter()
        .map(|omega| ts.iter().map(|&tj| f(omega, tj)).collect())
        .collect();
    let values: Vec<Complex64> = rows.into_iter().flatten().collect();
    if let Some(k) = values.iter().position(|v| !v.is_finite()) {
        let (i, j) = (k / t.count, k % t.count);
        return Err(Error::NonFinite(format!("omega = {:?}, t = {}", dirs.directions[i], ts[j])));
    }
    Sinogram::new(dirs, t, values, parity)
}

/// `max |U(-ω,-t) - σ U(ω,t)|` over the grid, `σ` the parity sign.
pub fn parity_defect(u: &Sinogram) -> Result<f64> {
    if !u.t.is_symmetric() {
        return Err(Error::AsymmetricGrid(u.t.t_min, u.t.t_max));
    }
    let sigma = u.parity.sign(u.n());
    let m = u.t.count;
    let mut worst = 0.0f64;
    for i in 0..u.dirs.len() {
        let a = u.dirs.antipode[i];
        for j in 0..m {
            let d = (u.at(a, m - 1 - j) - sigma * u.at(i, j)).norm();
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

/// Representative of `(ω, t) ~ (-ω, -t)` whose first non-zero component of
/// `ω` is positive (ties broken by `t > 0`). The flag reports a flip.
pub fn canonical_hyperplane(omega: &[f64], t: f64) -> (Vec<f64>, f64, bool) {
    let lead = omega.iter().copied().find(|c| c.abs() > 1e-14);
    let flip = match lead {
        Some(c) => c < 0.0,
        None => t < 0.0,
    };
    if flip {
        (omega.iter().map(|c| -c).collect(), -t, true)
    } else {
        (omega.to_vec(), t, false)
    }
}

/// A point of the cotangent bundle of hyperplane space in the reduced
/// parametrization `(ω, t, η, τ)`, `η ⊥ ω`. The actual covector over
/// `(ω, t)` is `(2πτη, 2πτ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CotangentPointP {
    pub omega: Vec<f64>,
    pub t: f64,
    pub eta: Vec<f64>,
    pub tau: f64,
}

impl CotangentPointP {
    pub fn new(omega: Vec<f64>, t: f64, eta: Vec<f64>, tau: f64) -> Result<Self> {
        if omega.len() != eta.len() || omega.len() < 2 {
            return Err(invalid("eta", "omega and eta must have the same dimension >= 2"));
        }
        let len = norm(&omega);
        if (len - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnit(len));
        }
        let scale = norm(&eta).max(1.0);
        if dot(&eta, &omega).abs() > 1e-10 * scale {
            return Err(invalid("eta", format!("not orthogonal to omega (eta.omega = {})", dot(&eta, &omega))));
        }
        if !t.is_finite() || !tau.is_finite() || eta.iter().any(|e| !e.is_finite()) {
            return Err(Error::NonFinite("cotangent point".into()));
        }
        Ok(Self { omega, t, eta, tau })
    }

    /// Build from an actual covector `(η', τ')` over `(ω, t)`; needs `τ' ≠ 0`.
    pub fn from_covector(omega: Vec<f64>, t: f64, eta_prime: &[f64], tau_prime: f64) -> Result<Self> {
        if tau_prime == 0.0 {
            return Err(invalid("tau", "the covector must have a non-zero t component"));
        }
        let eta = eta_prime.iter().map(|e| e / tau_prime).collect();
        Self::new(omega, t, eta, tau_prime / (2.0 * PI))
    }

    /// `(2πτη, 2πτ)`.
    pub fn covector(&self) -> (Vec<f64>, f64) {
        let s = 2.0 * PI * self.tau;
        (self.eta.iter().map(|e| s * e).collect(), s)
    }

    /// The same point seen from `(-ω, -t)`.
    pub fn antipode(&self) -> Self {
        Self {
            omega: self.omega.iter().map(|c| -c).collect(),
            t: -self.t,
            eta: self.eta.clone(),
            tau: -self.tau,
        }
    }

    /// Representative with canonical `(ω, t)` (see [`canonical_hyperplane`]).
    pub fn canonical(&self) -> Self {
        let (_, _, flip) = canonical_hyperplane(&self.omega, self.t);
        if flip {
            self.antipode()
        } else {
            self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn circle_grid_example() {
        let g = make_direction_grid(2, 8).unwrap();
        assert_eq!(g.len(), 8);
        for w in &g.weights {
            assert_relative_eq!(*w, PI / 4.0, epsilon = 1e-15);
        }
        assert_relative_eq!(g.total_weight(), 2.0 * PI, epsilon = 1e-14);
        assert_eq!(g.directions[0], vec![1.0, 0.0]);
        assert_eq!(g.directions[g.antipode[0]], vec![-1.0, -0.0]);
    }

    #[test]
    fn grids_reject_bad_input() {
        assert!(make_direction_grid(2, 7).is_err());
        assert!(make_direction_grid(4, 8).is_err());
        assert!(make_direction_grid(1, 8).is_err());
    }

    #[test]
    fn antipodes_are_exact_involutions() {
        for (n, res) in [(2, 8), (2, 30), (3, 8), (3, 18), (3, 32)] {
            let g = make_direction_grid(n, res).unwrap();
            for i in 0..g.len() {
                let a = g.antipode[i];
                assert_eq!(g.antipode[a], i);
                for k in 0..n {
                    assert_eq!(g.directions[a][k], -g.directions[i][k]);
                }
                assert!((norm(&g.directions[i]) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sphere_area() {
        for res in [2, 4, 10, 24, 64] {
            let g = make_direction_grid(3, res).unwrap();
            assert!((g.total_weight() - 4.0 * PI).abs() < 4.0 * PI * 1e-8);
        }
    }

    #[test]
    fn circle_rule_integrates_fourier_modes() {
        let m = 16;
        let g = make_direction_grid(2, m).unwrap();
        for k in 1..(m / 2) as i32 {
            let re = g.integrate(|w| (k as f64 * w[1].atan2(w[0])).cos());
            let im = g.integrate(|w| (k as f64 * w[1].atan2(w[0])).sin());
            assert!(re.abs() < 1e-12 && im.abs() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn sphere_rule_integrates_harmonics() {
        // products of low-degree monomials integrate to their known moments
        let g = make_direction_grid(3, 12).unwrap();
        let z4 = g.integrate(|w| w[2].powi(4));
        assert_relative_eq!(z4, 4.0 * PI / 5.0, epsilon = 1e-12);
        let xy2 = g.integrate(|w| w[0] * w[0] * w[1] * w[1]);
        assert_relative_eq!(xy2, 4.0 * PI / 15.0, epsilon = 1e-12);
        let odd = g.integrate(|w| w[0] * w[1].powi(2) * w[2]);
        assert!(odd.abs() < 1e-13);
    }

    #[test]
    fn parity_examples() {
        let dirs = Arc::new(make_direction_grid(2, 8).unwrap());
        let t = TAxis::symmetric(2.0, 0.25).unwrap();
        let even = sample_sino(|_, t| c(t * t), dirs.clone(), t, Parity::EvenP).unwrap();
        assert_eq!(parity_defect(&even).unwrap(), 0.0);
        let odd = sample_sino(|_, t| c(t), dirs.clone(), t, Parity::EvenP).unwrap();
        assert_relative_eq!(parity_defect(&odd).unwrap(), 4.0, epsilon = 1e-14);
        let gauss = sample_sino(|_, t| c((-PI * t * t).exp()), dirs.clone(), t, Parity::EvenP).unwrap();
        assert_eq!(parity_defect(&gauss).unwrap(), 0.0);
        let skew = Sinogram::zeros(dirs, TAxis::new(-1.0, 2.0, 5).unwrap(), Parity::EvenP);
        assert!(matches!(parity_defect(&skew), Err(Error::AsymmetricGrid(..))));
    }

    #[test]
    fn sample_examples() {
        let grid = BoxGrid::centered(2, 1.0, 5).unwrap();
        let ones = sample(|_| c(1.0), &grid).unwrap();
        assert!(ones.values.iter().all(|v| *v == c(1.0)));
        let g = sample(|y| c((-PI * dot(y, y)).exp()), &grid).unwrap();
        assert_eq!(g.values[12], c(1.0));
        assert!(sample(|_| c(f64::NAN), &grid).is_err());
    }

    #[test]
    fn symmetric_axis_is_bitwise_symmetric() {
        let t = TAxis::symmetric(8.0, 0.05).unwrap();
        let v = t.values();
        for j in 0..v.len() {
            assert_eq!(v[j], -v[v.len() - 1 - j]);
        }
        assert_eq!(v[v.len() / 2], 0.0);
    }

    #[test]
    fn parity_signs() {
        assert_eq!(Parity::SignedPtilde.sign(2), -1.0);
        assert_eq!(Parity::SignedPtilde.sign(3), 1.0);
        assert_eq!(Parity::EvenP.flipped(2), Parity::SignedPtilde);
        assert_eq!(Parity::EvenP.flipped(3), Parity::Odd);
    }

    #[test]
    fn canonical_representative() {
        let (w, t, f) = canonical_hyperplane(&[-0.6, 0.8], 1.0);
        assert_eq!((w, t, f), (vec![0.6, -0.8], -1.0, true));
        let (w, t, f) = canonical_hyperplane(&[0.0, 1.0], -2.0);
        assert_eq!((w, t, f), (vec![0.0, 1.0], -2.0, false));
    }

    #[test]
    fn cotangent_point_validation() {
        assert!(CotangentPointP::new(vec![0.0, 1.0], 0.0, vec![1.0, 0.0], 1.0).is_ok());
        assert!(matches!(
            CotangentPointP::new(vec![0.0, 2.0], 0.0, vec![1.0, 0.0], 1.0),
            Err(Error::NotUnit(_))
        ));
        assert!(CotangentPointP::new(vec![0.0, 1.0], 0.0, vec![1.0, 0.5], 1.0).is_err());
        let p = CotangentPointP::from_covector(vec![0.0, 1.0], 0.0, &[-32.0 * PI * PI, 0.0], 8.0 * PI * PI).unwrap();
        assert_relative_eq!(p.tau, 4.0 * PI, epsilon = 1e-12);
        assert_relative_eq!(p.eta[0], -4.0, epsilon = 1e-12);
    }

    #[test]
    fn interpolation_is_exact_for_affine_functions() {
        let grid = BoxGrid::centered(3, 1.0, 7).unwrap();
        let f = sample(|y| c(1.0 + 2.0 * y[0] - y[1] + 0.5 * y[2]), &grid).unwrap();
        let v = f.interpolate(&[0.13, -0.71, 0.42]);
        assert_relative_eq!(v.re, 1.0 + 0.26 + 0.71 + 0.21, epsilon = 1e-12);
        assert_eq!(f.interpolate(&[2.0, 0.0, 0.0]), c(0.0));
    }
}
