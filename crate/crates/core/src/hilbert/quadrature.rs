use nalgebra::{DMatrix, SymmetricEigen};

use super::{TruncatedOperator, C64};
use crate::error::{Error, Result};

/// Integration domain and implied weight function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    /// ∫_a^b f(x) dx.
    Interval { a: f64, b: f64 },
    /// ∫_0^∞ e^{-x} f(x) dx.
    HalfLineExp,
}

/// Gaussian rule: ∫ w(x) f(x) dx ≈ Σ wᵢ f(xᵢ), exact for polynomial f of
/// degree ≤ 2n − 1.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    support: Support,
}

impl QuadratureRule {
    pub const DEFAULT_NODES: usize = 200;

    pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("quadrature needs >= 2 nodes, got {n}")));
        }
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidParameter(format!("invalid interval [{a}, {b}]")));
        }
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            // x runs from +1 down to -1; mapping through -x keeps nodes ascending.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, q) = legendre_pair(n, x);
                let dx = p * (x * x - 1.0) / (n as f64 * (x * p - q));
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (p, q) = legendre_pair(n, x);
            let dp = n as f64 * (x * p - q) / (x * x - 1.0);
            nodes.push(mid - half * x);
            weights.push(half * 2.0 / ((1.0 - x * x) * dp * dp));
        }
        Ok(Self { nodes, weights, support: Support::Interval { a, b } })
    }

    /// Gauss-Laguerre rule for the weight e^{-x} on [0, ∞).
    ///
    /// Nodes start from the Golub-Welsch eigenvalues and are polished by
    /// Newton steps on the Laguerre functions e^{-x/2} Lₙ(x), which stay
    /// bounded; weights use the closed form x / (n² L_{n-1}(x)²) in log
    /// space so tiny weights keep full relative precision.
    pub fn gauss_laguerre(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("quadrature needs >= 2 nodes, got {n}")));
        }
        let jacobi = DMatrix::<f64>::from_fn(n, n, |i, j| {
            if i == j {
                (2 * i + 1) as f64
            } else if i + 1 == j || j + 1 == i {
                i.max(j) as f64
            } else {
                0.0
            }
        });
        let mut guesses: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
        guesses.sort_by(f64::total_cmp);

        let nf = n as f64;
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for mut x in guesses {
            for _ in 0..50 {
                let (ln, lm) = laguerre_scaled(n, x);
                let dx = x * ln / (nf * (ln - lm));
                x -= dx;
                if dx.abs() <= 4.0 * f64::EPSILON * x.max(1.0) {
                    break;
                }
            }
            let (_, lm) = laguerre_scaled(n, x);
            let log_w = x.ln() - x - 2.0 * (nf * lm.abs()).ln();
            nodes.push(x);
            weights.push(log_w.exp());
        }
        Ok(Self { nodes, weights, support: Support::HalfLineExp })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest polynomial degree integrated exactly.
    pub fn degree(&self) -> usize {
        2 * self.len() - 1
    }

    /// ln of the weight function implied by the support (0 on intervals,
    /// −x on the exponential half-line).
    pub fn ln_weight_function(&self, x: f64) -> f64 {
        match self.support {
            Support::Interval { .. } => 0.0,
            Support::HalfLineExp => -x,
        }
    }

    pub fn upper_bound(&self) -> f64 {
        match self.support {
            Support::Interval { b, .. } => b,
            Support::HalfLineExp => f64::INFINITY,
        }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .filter(|(_, &w)| w > 0.0)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Σ wᵢ g(xᵢ) for operator-valued integrands.
pub fn quadrature_integrate<G>(rule: &QuadratureRule, g: G) -> TruncatedOperator
where
    G: Fn(f64) -> TruncatedOperator,
{
    let mut acc: Option<TruncatedOperator> = None;
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        if w == 0.0 {
            continue;
        }
        let term = g(x) * C64::new(w, 0.0);
        match acc.as_mut() {
            Some(a) => *a += term,
            None => acc = Some(term),
        }
    }
    // Every rule has at least two positive weights.
    acc.expect("quadrature rule without positive weights")
}

/// (Pₙ(x), Pₙ₋₁(x)).
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 1..n {
        let k = k as f64;
        let p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// (e^{-x/2} Lₙ(x), e^{-x/2} Lₙ₋₁(x)).
fn laguerre_scaled(n: usize, x: f64) -> (f64, f64) {
    let s = (-0.5 * x).exp();
    let (mut l0, mut l1) = (s, (1.0 - x) * s);
    for k in 1..n {
        let k = k as f64;
        let l2 = ((2.0 * k + 1.0 - x) * l1 - k * l0) / (k + 1.0);
        l0 = l1;
        l1 = l2;
    }
    (l1, l0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ln_factorial(k: usize) -> f64 {
        (1..=k).map(|i| (i as f64).ln()).sum()
    }

    #[test]
    fn legendre_monomials_exact_to_degree() {
        for n in [2usize, 5, 17, 64, 200] {
            let rule = QuadratureRule::gauss_legendre(n, 0.0, 1.0).unwrap();
            assert!(rule.weights().iter().all(|&w| w > 0.0));
            for k in 0..=rule.degree() {
                let got = rule.integrate(|x| x.powi(k as i32));
                let want = 1.0 / (k as f64 + 1.0);
                assert!((got - want).abs() < 1e-13, "n={n} k={k}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn legendre_shifted_interval() {
        let rule = QuadratureRule::gauss_legendre(8, -1.0, 3.0).unwrap();
        let got = rule.integrate(|x| x * x * x - 2.0 * x);
        assert!((got - (3f64.powi(4) / 4.0 - 0.25 - 9.0 + 1.0)).abs() < 1e-12);
        assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn laguerre_moments_are_factorials() {
        for n in [2usize, 10, 64, 200] {
            let rule = QuadratureRule::gauss_laguerre(n).unwrap();
            let max_k = rule.degree().min(120);
            for k in 0..=max_k {
                // ∫ e^{-x} x^k / k! dx = 1
                let got = rule.integrate(|x| {
                    if k == 0 {
                        1.0
                    } else {
                        (k as f64 * x.ln() - ln_factorial(k)).exp()
                    }
                });
                assert!((got - 1.0).abs() < 1e-11, "n={n} k={k}: {got}");
            }
        }
    }

    #[test]
    fn operator_integration() {
        let rule = QuadratureRule::gauss_legendre(4, 0.0, 1.0).unwrap();
        let id = TruncatedOperator::identity(3, 3);
        let out = quadrature_integrate(&rule, |_| id.clone());
        assert!(crate::hilbert::max_abs_diff(&out, &id) < 1e-14);
        let half = quadrature_integrate(&rule, |x| &id * C64::new(x, 0.0));
        assert!(crate::hilbert::max_abs_diff(&half, &(&id * C64::new(0.5, 0.0))) < 1e-14);
    }

    #[test]
    fn rejects_degenerate_rules() {
        assert!(QuadratureRule::gauss_legendre(1, 0.0, 1.0).is_err());
        assert!(QuadratureRule::gauss_legendre(4, 1.0, 1.0).is_err());
        assert!(QuadratureRule::gauss_laguerre(1).is_err());
    }
}
