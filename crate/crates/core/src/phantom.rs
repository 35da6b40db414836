//! Test objects with closed-form (or semi-analytic) Radon, Hilbert–Radon and
//! weighted Bargmann transforms.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bargmann::HyperplaneSource;
use crate::error::{invalid, Error, Result};
use crate::grids::Parity;
use crate::quadrature::{composite_uniform, dot};
use crate::special::dawson;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhantomKind {
    /// `w exp(-π|y|²/s²)`, centred at the origin.
    Gaussian,
    /// `w` on the ball of radius `s` about `center`.
    BallIndicator,
    /// `w exp(-π|y-c|²/s²)`.
    ShiftedGaussian,
}

impl std::str::FromStr for PhantomKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(PhantomKind::Gaussian),
            "ball_indicator" => Ok(PhantomKind::BallIndicator),
            "shifted_gaussian" => Ok(PhantomKind::ShiftedGaussian),
            other => Err(invalid("kind", format!("unknown phantom kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhantomComponent {
    pub kind: PhantomKind,
    pub center: Vec<f64>,
    pub scale: f64,
    pub weight: f64,
}

impl PhantomComponent {
    pub fn gaussian(n: usize, scale: f64, weight: f64) -> Self {
        Self { kind: PhantomKind::Gaussian, center: vec![0.0; n], scale, weight }
    }

    pub fn shifted_gaussian(center: Vec<f64>, scale: f64, weight: f64) -> Self {
        Self { kind: PhantomKind::ShiftedGaussian, center, scale, weight }
    }

    pub fn ball(center: Vec<f64>, radius: f64, weight: f64) -> Self {
        Self { kind: PhantomKind::BallIndicator, center, scale: radius, weight }
    }

    fn is_gaussian(&self) -> bool {
        !matches!(self.kind, PhantomKind::BallIndicator)
    }
}

/// A finite sum of components in `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhantomSpec {
    pub n: usize,
    pub components: Vec<PhantomComponent>,
}

/// Volume of the unit ball in `R^d` for `d = 1, 2`.
fn unit_ball_volume(d: usize) -> f64 {
    match d {
        1 => 2.0,
        2 => PI,
        _ => PI.powf(d as f64 / 2.0) / crate::special::gamma_half_integer(d + 2),
    }
}

impl PhantomSpec {
    pub fn new(n: usize, components: Vec<PhantomComponent>) -> Result<Self> {
        if !(2..=3).contains(&n) {
            return Err(Error::Dimension(n, "2 or 3"));
        }
        for c in &components {
            if c.center.len() != n {
                return Err(invalid("center", format!("expected {n} coordinates, got {}", c.center.len())));
            }
            if !(c.scale > 0.0 && c.scale.is_finite()) {
                return Err(invalid("scale", format!("must be positive, got {}", c.scale)));
            }
            if !c.weight.is_finite() {
                return Err(invalid("weight", "must be finite"));
            }
            if c.kind == PhantomKind::Gaussian && c.center.iter().any(|&x| x != 0.0) {
                return Err(invalid("center", "a `gaussian` component is centred at the origin; use `shifted_gaussian`"));
            }
        }
        Ok(Self { n, components })
    }

    /// The standard Gaussian `exp(-π|y|²)`.
    pub fn standard_gaussian(n: usize) -> Result<Self> {
        Self::new(n, vec![PhantomComponent::gaussian(n, 1.0, 1.0)])
    }

    /// The indicator of the unit disk in the plane.
    pub fn unit_disk() -> Self {
        Self { n: 2, components: vec![PhantomComponent::ball(vec![0.0, 0.0], 1.0, 1.0)] }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.weight == 0.0)
    }

    pub fn value(&self, y: &[f64]) -> f64 {
        self.components
            .iter()
            .map(|c| {
                let d2: f64 = y.iter().zip(&c.center).map(|(a, b)| (a - b) * (a - b)).sum();
                if c.is_gaussian() {
                    c.weight * (-PI * d2 / (c.scale * c.scale)).exp()
                } else if d2 <= c.scale * c.scale {
                    c.weight
                } else {
                    0.0
                }
            })
            .sum()
    }

    /// Closed-form `R u(ω, t)`.
    pub fn radon(&self, omega: &[f64], t: f64) -> f64 {
        let n = self.n;
        self.components
            .iter()
            .map(|c| {
                let d = t - dot(&c.center, omega);
                let s = c.scale;
                if c.is_gaussian() {
                    c.weight * s.powi(n as i32 - 1) * (-PI * d * d / (s * s)).exp()
                } else if d.abs() < s {
                    c.weight * unit_ball_volume(n - 1) * (s * s - d * d).powf((n as f64 - 1.0) / 2.0)
                } else {
                    0.0
                }
            })
            .sum()
    }

    /// Closed-form `H R u(ω, t)` with `H U(t) = PV ∫ U(s)/(t-s) ds`.
    pub fn hilbert_radon(&self, omega: &[f64], t: f64) -> f64 {
        let n = self.n;
        self.components
            .iter()
            .map(|c| {
                let d = t - dot(&c.center, omega);
                let r = c.scale;
                if c.is_gaussian() {
                    c.weight * r.powi(n as i32 - 1) * 2.0 * PI.sqrt() * dawson(PI.sqrt() * d / r)
                } else if n == 2 {
                    let outside = if d.abs() > r { d.signum() * (d * d - r * r).sqrt() } else { 0.0 };
                    c.weight * 2.0 * PI * (d - outside)
                } else {
                    // PV ∫_{-r}^{r} π(r² - s²)/(d - s) ds
                    let log = if (d.abs() - r).abs() < 1e-300 {
                        0.0
                    } else {
                        ((d + r) / (d - r)).abs().ln()
                    };
                    c.weight * PI * ((r * r - d * d) * log + 2.0 * r * d)
                }
            })
            .sum()
    }

    /// Points in `t` where the Radon data fails to be smooth.
    pub fn breakpoints(&self, omega: &[f64]) -> Vec<f64> {
        let mut b: Vec<f64> = self
            .components
            .iter()
            .filter(|c| !c.is_gaussian())
            .flat_map(|c| {
                let m = dot(&c.center, omega);
                [m - c.scale, m + c.scale]
            })
            .collect();
        b.sort_by(f64::total_cmp);
        b
    }

    /// `∫ u v dy` for Gaussian-only phantoms.
    pub fn inner_product(&self, other: &PhantomSpec) -> Result<f64> {
        if other.n != self.n {
            return Err(invalid("other", "dimension mismatch"));
        }
        let n = self.n as f64;
        let mut total = 0.0;
        for a in &self.components {
            for b in &other.components {
                if !(a.is_gaussian() && b.is_gaussian()) {
                    return Err(invalid("phantom", "closed-form inner products need Gaussian components"));
                }
                let (sa, sb) = (a.scale * a.scale, b.scale * b.scale);
                let d2: f64 = a.center.iter().zip(&b.center).map(|(x, y)| (x - y) * (x - y)).sum();
                total += a.weight * b.weight * (sa * sb / (sa + sb)).powf(n / 2.0) * (-PI * d2 / (sa + sb)).exp();
            }
        }
        Ok(total)
    }

    /// `e^{-π|ξ|²/h} T_h u(x - iξ)`: closed form for Gaussians, polar
    /// quadrature for disks (`n = 2`).
    pub fn weighted_bargmann_t(&self, x: &[f64], xi: &[f64], h: f64) -> Result<Complex64> {
        if x.len() != self.n || xi.len() != self.n {
            return Err(invalid("x", "dimension mismatch"));
        }
        if !(h > 0.0) {
            return Err(invalid("h", "must be positive"));
        }
        let n = self.n as f64;
        let prefactor = 2f64.powf(n / 4.0) * h.powf(-0.75 * n);
        let xi2 = dot(xi, xi);
        let mut total = Complex64::new(0.0, 0.0);
        for c in &self.components {
            if c.weight == 0.0 {
                continue;
            }
            if c.is_gaussian() {
                let s2 = c.scale * c.scale;
                // (z - c)² with z = x - iξ
                let mut zc2 = Complex64::new(0.0, 0.0);
                for k in 0..self.n {
                    let d = Complex64::new(x[k] - c.center[k], -xi[k]);
                    zc2 += d * d;
                }
                let exponent = -PI * zc2 / (h + s2) - PI * xi2 / h;
                total += c.weight * prefactor * (h * s2 / (h + s2)).powf(n / 2.0) * exponent.exp();
            } else if self.n == 2 {
                total += c.weight * prefactor * disk_kernel_integral(&c.center, c.scale, x, xi, h);
            } else {
                return Err(Error::Dimension(self.n, "2 for ball components"));
            }
        }
        Ok(total)
    }
}

/// The data `B_h` acts on for a phantom: `R u` in odd dimension and
/// `H R u` in even dimension.
#[derive(Debug, Clone, Copy)]
pub struct BargmannData<'a>(pub &'a PhantomSpec);

impl HyperplaneSource for BargmannData<'_> {
    fn dim(&self) -> usize {
        self.0.n
    }

    fn parity(&self) -> Parity {
        Parity::SignedPtilde
    }

    fn value(&self, omega: &[f64], t: f64) -> Complex64 {
        let v = if self.0.n % 2 == 1 { self.0.radon(omega, t) } else { self.0.hilbert_radon(omega, t) };
        Complex64::new(v, 0.0)
    }

    fn breakpoints(&self, omega: &[f64]) -> Vec<f64> {
        self.0.breakpoints(omega)
    }
}

/// `∫_{|y-c|<r} exp(-π|x-y|²/h + 2πi (x-y)·ξ/h) dy` in polar coordinates
/// about `c`: Gauss–Legendre in the radius, trapezoid in the angle.
fn disk_kernel_integral(c: &[f64], r: f64, x: &[f64], xi: &[f64], h: f64) -> Complex64 {
    let dx = [x[0] - c[0], x[1] - c[1]];
    let dist = (dx[0] * dx[0] + dx[1] * dx[1]).sqrt();
    let xi_len = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
    let reach = (40.0 * h / PI).sqrt();
    let lo = (dist - reach).max(0.0);
    let hi = (dist + reach).min(r);
    if hi <= lo {
        return Complex64::new(0.0, 0.0);
    }
    let k_max = 2.0 * PI * (dist + xi_len) / h + 2.0 * PI / h.sqrt();
    let panels = (((hi - lo) * k_max / 4.0).ceil() as usize).max(4);
    let radial = composite_uniform(lo, hi, panels, 16);
    let a = 2.0 * PI * hi * (dist + xi_len) / h;
    let mut m = (a + (80.0 * a).sqrt() + 64.0).ceil() as usize;
    m += m % 2;
    let dtheta = 2.0 * PI / m as f64;
    let dirs: Vec<(f64, f64)> = (0..m).map(|j| (j as f64 * dtheta).sin_cos()).map(|(s, c)| (c, s)).collect();
    let mut total = Complex64::new(0.0, 0.0);
    for (&rho, &w) in radial.nodes.iter().zip(&radial.weights) {
        let mut ring = Complex64::new(0.0, 0.0);
        for &(ct, st) in &dirs {
            // x - y = dx - ρ e_θ
            let u0 = dx[0] - rho * ct;
            let u1 = dx[1] - rho * st;
            let re = -PI * (u0 * u0 + u1 * u1) / h;
            let im = 2.0 * PI * (u0 * xi[0] + u1 * xi[1]) / h;
            ring += Complex64::from_polar(re.exp(), im);
        }
        total += w * rho * ring;
    }
    total * dtheta
}
