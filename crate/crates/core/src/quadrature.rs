//! Gauss–Legendre rules and small vector helpers shared by the transforms.

use std::f64::consts::PI;

/// Nodes and weights of a one-dimensional rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    fn push_mapped(&mut self, reference: &Rule, a: f64, b: f64) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, w) in reference.nodes.iter().zip(&reference.weights) {
            self.nodes.push(mid + half * x);
            self.weights.push(half * w);
        }
    }
}

/// `m`-point Gauss–Legendre rule on `[-1, 1]`, nodes ascending.
///
/// Newton iteration on `P_m` from the Chebyshev-like initial guess; the
/// rule is symmetric by construction (the lower half mirrors the upper).
pub fn gauss_legendre(m: usize) -> Rule {
    assert!(m > 0, "gauss_legendre needs at least one node");
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(m, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    Rule { nodes, weights }
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite rule: `per_panel` Gauss points on each interval between
/// consecutive `breaks` (which must be ascending).
pub fn composite(breaks: &[f64], per_panel: usize) -> Rule {
    let reference = gauss_legendre(per_panel);
    let mut rule = Rule { nodes: Vec::new(), weights: Vec::new() };
    for pair in breaks.windows(2) {
        if pair[1] > pair[0] {
            rule.push_mapped(&reference, pair[0], pair[1]);
        }
    }
    rule
}

/// Uniform composite rule with `panels` equal panels on `[a, b]`.
pub fn composite_uniform(a: f64, b: f64, panels: usize, per_panel: usize) -> Rule {
    let breaks: Vec<f64> = (0..=panels)
        .map(|k| a + (b - a) * k as f64 / panels as f64)
        .collect();
    composite(&breaks, per_panel)
}

/// Rule on `[a, b]` graded towards the endpoints by `s ↦ s²`, suited to
/// integrands with square-root behaviour at both ends (chord lengths).
pub fn sqrt_graded(a: f64, b: f64, panels: usize, per_panel: usize) -> Rule {
    let half = 0.5 * (b - a);
    let reference = composite_uniform(0.0, 1.0, panels, per_panel);
    // x = a + half s² on the left half, x = b - half s² on the right half
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(2 * reference.len());
    for (&s, &w) in reference.nodes.iter().zip(&reference.weights) {
        pairs.push((a + half * s * s, 2.0 * half * s * w));
        pairs.push((b - half * s * s, 2.0 * half * s * w));
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Orthonormal basis of `ω^⊥`, by Gram–Schmidt starting from the standard
/// basis vectors ordered by increasing `|ω_j|` (ties to the smaller index).
pub fn orthonormal_complement(omega: &[f64]) -> Vec<Vec<f64>> {
    let n = omega.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| omega[i].abs().total_cmp(&omega[j].abs()).then(i.cmp(&j)));
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n.saturating_sub(1));
    for &j in order.iter() {
        if basis.len() + 1 == n {
            break;
        }
        let mut v = vec![0.0; n];
        v[j] = 1.0;
        let c = dot(&v, omega);
        for k in 0..n {
            v[k] -= c * omega[k];
        }
        for b in &basis {
            let c = dot(&v, b);
            for k in 0..n {
                v[k] -= c * b[k];
            }
        }
        let len = norm(&v);
        if len < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= len);
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        for m in 1..=20 {
            let rule = gauss_legendre(m);
            for p in 0..2 * m {
                let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
                let got = rule.integrate(|x| x.powi(p as i32));
                assert!((got - exact).abs() < 1e-13, "m={m} p={p}: {got}");
            }
        }
    }

    #[test]
    fn known_three_point_rule() {
        let r = gauss_legendre(3);
        assert_relative_eq!(r.nodes[2], (0.6f64).sqrt(), epsilon = 1e-15);
        assert_relative_eq!(r.weights[1], 8.0 / 9.0, epsilon = 1e-15);
        assert_relative_eq!(r.weights[0], 5.0 / 9.0, epsilon = 1e-15);
    }

    #[test]
    fn sqrt_graded_handles_semicircle() {
        let r = sqrt_graded(-1.0, 1.0, 4, 8);
        let area = r.integrate(|x| (1.0 - x * x).max(0.0).sqrt());
        assert_relative_eq!(area, PI / 2.0, epsilon = 1e-12);
        assert!(r.nodes.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn complement_is_orthonormal() {
        for omega in [
            vec![1.0, 0.0],
            vec![0.6, -0.8],
            vec![0.0, 0.0, 1.0],
            vec![1.0 / 3f64.sqrt(); 3],
            vec![0.2, -0.4, (1.0f64 - 0.2).sqrt()],
        ] {
            let b = orthonormal_complement(&omega);
            assert_eq!(b.len(), omega.len() - 1);
            for (i, u) in b.iter().enumerate() {
                assert!(dot(u, &omega).abs() < 1e-14);
                assert!((norm(u) - 1.0).abs() < 1e-14);
                for v in &b[i + 1..] {
                    assert!(dot(u, v).abs() < 1e-14);
                }
            }
        }
    }
}
