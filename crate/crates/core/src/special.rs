//! Special functions and dimension-dependent constants.
//!
//! Two families of constants live here. [`constant_c`] and [`constant_a`] are
//! the closed forms usually quoted for the Radon inversion constant and for the
//! normalization of the hyperplane Bargmann transform. Under the standard
//! surface measure `dω` on the sphere (total mass `2π` for `n = 2`) and with the
//! hyperplane space integrated as half of `S^{n-1} × R`, those closed forms do
//! not reproduce the Plancherel, inversion and intertwining identities. The
//! constants the transforms actually use are [`plancherel_constant`],
//! [`inversion_constant`] and [`b_normalization`], derived from the Fourier
//! slice theorem; the ratio between the two families is exposed so callers can
//! report it.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Degree of a Hermite polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HermiteOrder(pub usize);

/// Physicists' Hermite polynomial `H_l(s)` at complex argument.
///
/// Evaluated with the three-term recurrence
/// `H_{l+1}(s) = 2s H_l(s) - 2l H_{l-1}(s)`.
pub fn hermite(order: HermiteOrder, s: Complex64) -> Complex64 {
    let l = order.0;
    if l == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let two_s = 2.0 * s;
    let mut prev = Complex64::new(1.0, 0.0);
    let mut cur = two_s;
    for k in 1..l {
        let next = two_s * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `Γ(n/2)` for a positive integer `n`, by the half-integer recursion.
pub fn gamma_half_integer(n: usize) -> f64 {
    assert!(n > 0, "gamma_half_integer needs n >= 1");
    let (mut value, mut x) = if n % 2 == 0 { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    let target = n as f64 / 2.0;
    while x < target - 0.25 {
        value *= x;
        x += 1.0;
    }
    value
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * j as f64)
}

fn check_dimension(n: usize) -> Result<()> {
    if n < 2 {
        return Err(invalid("n", format!("dimension must be at least 2, got {n}")));
    }
    Ok(())
}

/// `C_n = (4π)^{(n-1)/2} Γ(n/2) Γ(1/2)`.
pub fn constant_c(n: usize) -> Result<f64> {
    check_dimension(n)?;
    Ok((4.0 * PI).powf((n as f64 - 1.0) / 2.0) * gamma_half_integer(n) * PI.sqrt())
}

/// The closed-form normalization
/// `A_{2k+1} = (-1)^k k! / (2^{k/2-1/4} (2k)!)` and
/// `A_{2k} = (-1)^{k-1/2} π^{1/2} / (2^{3k/2} (k-1)!)`,
/// with the half-integer power taken on the principal branch,
/// `(-1)^{k-1/2} = i (-1)^{k-1}`.
pub fn constant_a(n: usize) -> Result<Complex64> {
    check_dimension(n)?;
    let k = n / 2;
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    if n % 2 == 1 {
        let value = sign * factorial(k) / (2f64.powf(k as f64 / 2.0 - 0.25) * factorial(2 * k));
        Ok(Complex64::new(value, 0.0))
    } else {
        // (-1)^{k-1} = -(-1)^k
        let value = -sign * PI.sqrt() / (2f64.powf(1.5 * k as f64) * factorial(k - 1));
        Ok(Complex64::new(0.0, value))
    }
}

/// `K_n = (2π)^{n-1}`: the constant in
/// `K_n ∫ u v dx = ∬_{P^n} |D_t|^{n-1} Ru · Rv dω dt`,
/// where the hyperplane integral is half the integral over `S^{n-1} × R`.
pub fn plancherel_constant(n: usize) -> Result<f64> {
    check_dimension(n)?;
    Ok((2.0 * PI).powi(n as i32 - 1))
}

/// Constant in `u = R^*(|D_t|^{n-1} R u) / c` with `R^*` integrating over the
/// whole sphere: `c = 2 (2π)^{n-1}`.
pub fn inversion_constant(n: usize) -> Result<f64> {
    Ok(2.0 * plancherel_constant(n)?)
}

/// Normalization of the hyperplane Bargmann transform that makes it intertwine
/// with the Bargmann transform on `R^n`:
/// `(-1)^{⌊n/2⌋} 2^{n/4} π^{(n-1)/2} / ((2π)^{n-1} π^{[n even]})`.
///
/// The extra `1/π` for even `n` comes from the Hilbert transform being
/// normalized as `PV ∫ U(s)/(t-s) ds` (symbol `-iπ sgn τ`).
pub fn b_normalization(n: usize) -> Result<f64> {
    check_dimension(n)?;
    let sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let even_factor = if n % 2 == 0 { PI } else { 1.0 };
    Ok(sign * 2f64.powf(n as f64 / 4.0) * PI.powf((n as f64 - 1.0) / 2.0)
        / ((2.0 * PI).powi(n as i32 - 1) * even_factor))
}

/// Both families of constants for one dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionConstants {
    pub n: usize,
    pub c_n: f64,
    pub a_n: Complex64,
    pub plancherel: f64,
    pub b_norm: f64,
}

impl DimensionConstants {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self {
            n,
            c_n: constant_c(n)?,
            a_n: constant_a(n)?,
            plancherel: plancherel_constant(n)?,
            b_norm: b_normalization(n)?,
        })
    }

    /// `A_n / b_norm`; equals 1 when the closed form agrees with the
    /// normalization the transform needs.
    pub fn a_ratio(&self) -> Complex64 {
        self.a_n / self.b_norm
    }

    /// `(-1)^{(n-1)/2} C_n / K_n` on the principal branch.
    pub fn c_ratio(&self) -> Complex64 {
        half_power_of_minus_one(self.n) * self.c_n / self.plancherel
    }
}

/// `(-1)^{(n-1)/2}` on the principal branch: `i^{n-1}`.
pub fn half_power_of_minus_one(n: usize) -> Complex64 {
    match (n + 3) % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Closed form of the Bargmann transform of `u(y) = exp(-π|y|²)`:
/// `2^{n/4} h^{-3n/4} (h/(1+h))^{n/2} exp(-π z²/(1+h))`.
pub fn gaussian_bargmann_oracle(n: usize, h: f64, z: &[Complex64]) -> Complex64 {
    let nf = n as f64;
    let z2: Complex64 = z.iter().map(|zk| zk * zk).sum();
    let amplitude =
        2f64.powf(nf / 4.0) * h.powf(-0.75 * nf) * (h / (1.0 + h)).powf(nf / 2.0);
    amplitude * (-PI * z2 / (1.0 + h)).exp()
}

/// Dawson's integral `F(x) = exp(-x²) ∫_0^x exp(y²) dy`.
///
/// Uses Rybicki's sampling series with step 0.2, whose aliasing error is of
/// order `exp(-(π/0.4)²) ≈ 1e-27`.
pub fn dawson(x: f64) -> f64 {
    const STEP: f64 = 0.2;
    const SPAN: f64 = 7.5;
    if x == 0.0 {
        return 0.0;
    }
    if x.abs() > 60.0 {
        // asymptotic series 1/(2x) (1 + 1/(2x²) + 3/(4x⁴))
        let inv2 = 1.0 / (x * x);
        return 0.5 / x * (1.0 + 0.5 * inv2 + 0.75 * inv2 * inv2);
    }
    let centre = (x / STEP).round() as i64;
    let reach = (SPAN / STEP).ceil() as i64;
    let mut sum = 0.0;
    for m in (centre - reach)..=(centre + reach) {
        if m % 2 == 0 {
            continue;
        }
        let d = x - m as f64 * STEP;
        sum += (-d * d).exp() / m as f64;
    }
    sum / PI.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Explicit sum `l! Σ_j (-1)^j (2s)^{l-2j} / (j! (l-2j)!)`.
    fn hermite_explicit(l: usize, s: Complex64) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for j in 0..=l / 2 {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign / (factorial(j) * factorial(l - 2 * j)) * (2.0 * s).powu((l - 2 * j) as u32);
        }
        sum * factorial(l)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite(HermiteOrder(0), c(3.7, -1.2)), c(1.0, 0.0));
        assert_relative_eq!(hermite(HermiteOrder(3), c(1.0, 0.0)).re, -4.0, epsilon = 1e-14);
        let v = hermite(HermiteOrder(2), c(1.0, 1.0));
        assert_relative_eq!(v.re, -2.0, epsilon = 1e-14);
        assert_relative_eq!(v.im, 8.0, epsilon = 1e-14);
    }

    #[test]
    fn recurrence_matches_explicit_sum() {
        let samples = [
            c(0.0, 0.0),
            c(1.0, 0.0),
            c(-3.5, 0.0),
            c(9.9, 0.0),
            c(0.3, 0.7),
            c(-2.0, 5.0),
            c(6.0, -7.5),
            c(0.0, -10.0),
        ];
        for l in 0..=12 {
            for &s in &samples {
                let r = hermite(HermiteOrder(l), s);
                let e = hermite_explicit(l, s);
                let scale = e.norm().max(1e-300);
                assert!(
                    (r - e).norm() <= 1e-10 * scale.max(1.0),
                    "l={l} s={s}: {r} vs {e}"
                );
            }
        }
    }

    #[test]
    fn hermite_parity() {
        for l in 0..=12 {
            for s in [c(0.4, -1.1), c(2.5, 0.0), c(-0.7, 3.2)] {
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                let a = hermite(HermiteOrder(l), -s);
                let b = sign * hermite(HermiteOrder(l), s);
                assert!((a - b).norm() <= 1e-12 * b.norm().max(1.0));
            }
        }
    }

    #[test]
    fn c_examples() {
        assert_relative_eq!(constant_c(2).unwrap(), 2.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(constant_c(3).unwrap(), 2.0 * PI * PI, max_relative = 1e-14);
        // (4π)² Γ(5/2) Γ(1/2) = 16π² · (3√π/4) · √π
        assert_relative_eq!(constant_c(5).unwrap(), 12.0 * PI.powi(3), max_relative = 1e-14);
        assert!(constant_c(1).is_err());
    }

    #[test]
    fn c_against_gamma_oracle() {
        use statrs::function::gamma::gamma;
        for n in 2..10 {
            let oracle = (4.0 * PI).powf((n as f64 - 1.0) / 2.0) * gamma(n as f64 / 2.0) * gamma(0.5);
            assert_relative_eq!(constant_c(n).unwrap(), oracle, max_relative = 1e-12);
        }
    }

    #[test]
    fn a_examples() {
        let a3 = constant_a(3).unwrap();
        assert_relative_eq!(a3.re, -(2f64.powf(-1.25)), max_relative = 1e-14);
        assert_relative_eq!(a3.re, -0.4204482, epsilon = 1e-7);
        let a2 = constant_a(2).unwrap();
        assert_eq!(a2.re, 0.0);
        assert_relative_eq!(a2.im, PI.sqrt() / 2f64.powf(1.5), max_relative = 1e-14);
        assert_relative_eq!(a2.im, 0.6266571, epsilon = 1e-7);
        let a5 = constant_a(5).unwrap();
        // 2! / (2^{3/4} 4!)
        assert_relative_eq!(a5.re, 2f64.powf(0.25) / 24.0, max_relative = 1e-14);
        assert!(constant_a(1).is_err());
    }

    #[test]
    fn a_is_real_or_imaginary_by_parity() {
        for n in 2..12 {
            let a = constant_a(n).unwrap();
            if n % 2 == 0 {
                assert_eq!(a.re, 0.0);
            } else {
                assert_eq!(a.im, 0.0);
            }
        }
    }

    #[test]
    fn gaussian_oracle_examples() {
        let z2 = [c(0.0, 0.0), c(0.0, 0.0)];
        assert_relative_eq!(gaussian_bargmann_oracle(2, 1.0, &z2).re, 0.5f64.sqrt(), max_relative = 1e-14);
        let z = [c(1.0, 0.0), c(0.0, 0.0)];
        assert_relative_eq!(
            gaussian_bargmann_oracle(2, 1.0, &z).re,
            0.5f64.sqrt() * (-PI / 2.0).exp(),
            max_relative = 1e-14
        );
        let z3 = [c(0.0, 0.0); 3];
        assert_relative_eq!(gaussian_bargmann_oracle(3, 1.0, &z3).re, 2f64.powf(-0.75), max_relative = 1e-14);
    }

    #[test]
    fn normalization_values() {
        // n = 3: -2^{3/4} / (4π); n = 2: -2^{1/2} / (2 π^{3/2})
        assert_relative_eq!(b_normalization(3).unwrap(), -(2f64.powf(0.75)) / (4.0 * PI), max_relative = 1e-14);
        assert_relative_eq!(b_normalization(2).unwrap(), -(2f64.sqrt()) / (2.0 * PI.powf(1.5)), max_relative = 1e-14);
        assert_relative_eq!(plancherel_constant(3).unwrap(), 4.0 * PI * PI, max_relative = 1e-14);
        let k3 = DimensionConstants::new(3).unwrap();
        assert_relative_eq!(k3.a_ratio().re, PI, max_relative = 1e-12);
    }

    #[test]
    fn dawson_values() {
        // reference values of Dawson's integral
        assert_relative_eq!(dawson(0.5), 0.424_436_383_502_022_3, max_relative = 1e-13);
        assert_relative_eq!(dawson(1.0), 0.538_079_506_912_768_4, max_relative = 1e-13);
        assert_relative_eq!(dawson(2.0), 0.301_340_388_923_792, max_relative = 1e-13);
        assert_relative_eq!(dawson(-3.0), -0.178_271_030_610_558_3, max_relative = 1e-13);
        assert_relative_eq!(dawson(100.0), 0.005_000_250_037_509_4, max_relative = 1e-10);
    }

    #[test]
    fn dawson_satisfies_its_ode() {
        // F' = 1 - 2 x F
        for &x in &[0.1, 0.9, 2.3, 5.0, 11.0] {
            let d = 1e-4;
            let deriv = (dawson(x + d) - dawson(x - d)) / (2.0 * d);
            assert!((deriv - (1.0 - 2.0 * x * dawson(x))).abs() < 1e-8);
        }
    }
}
