//! Monotonicity index M₀, the cut K₀, the decomposition H = H₁ ⊕ H₂ ⊕ H₃,
//! and the minimal code dimension over a grid of coupling rates.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{outer, StateVector, TruncatedOperator, TruncationConfig};
use crate::jc_spectrum::{dressed_vector, eigenenergy, JcParams, Level};

/// Lower-branch energies: S₀ = E_{0,g}, S_k = E_{k,−}.
pub fn s_sequence(params: &JcParams, k: usize) -> f64 {
    let level = if k == 0 { Level::GROUND } else { Level::minus(k) };
    eigenenergy(params, level).expect("valid level")
}

/// Smallest M₀ ≥ 1 with
/// (√(Δ² + κ²(M₀+1)) + √(Δ² + κ²M₀))⁻¹ < 2ω_f/κ².
///
/// The left side decreases in M₀, so a linear scan finds the threshold
/// beyond which S_k increases strictly. κ = 0 gives 1.
pub fn minimal_m0(params: &JcParams) -> usize {
    let kappa = params.kappa();
    if kappa == 0.0 {
        return 1;
    }
    let d2 = params.delta().powi(2);
    let k2 = kappa * kappa;
    let rhs = 2.0 * params.omega_f() / k2;
    let mut m = 1usize;
    loop {
        let mf = m as f64;
        let lhs = 1.0 / ((d2 + k2 * (mf + 1.0)).sqrt() + (d2 + k2 * mf).sqrt());
        if lhs < rhs {
            return m;
        }
        m += 1;
    }
}

/// M₀ from the rate form
/// √((γ_f⁻¹ − γ_s⁻¹)² + M₀ + 1) + √((γ_f⁻¹ − γ_s⁻¹)² + M₀) > γ_f / 2.
pub fn minimal_m0_from_rates(gamma_f: f64, gamma_s: f64) -> usize {
    let d2 = (1.0 / gamma_f - 1.0 / gamma_s).powi(2);
    let rhs = 0.5 * gamma_f;
    let mut m = 1usize;
    loop {
        let mf = m as f64;
        if (d2 + mf + 1.0).sqrt() + (d2 + mf).sqrt() > rhs {
            return m;
        }
        m += 1;
    }
}

/// K₀* = max(3, M₀).
pub fn minimal_k0(m0: usize) -> usize {
    m0.max(3)
}

/// Decomposition of the truncated space for a chosen cut K₀.
#[derive(Debug, Clone)]
pub struct CodeSpec {
    pub m0: usize,
    pub k0: usize,
    /// K₀ − 1, the reported minimal code dimension for this cut.
    pub default_code_dim: usize,
    /// Projector onto span{|n,+⟩ : 1 ≤ n ≤ N}.
    pub p1: TruncatedOperator,
    /// Projector onto span{|n,−⟩ : K₀ ≤ n ≤ N}.
    pub p2: TruncatedOperator,
    /// Projector onto span{|0,g⟩, |n,−⟩ : 1 ≤ n < K₀}.
    pub p3: TruncatedOperator,
    /// Orthonormal basis of H₃ in the order |0,g⟩, |1,−⟩, …, |K₀−1,−⟩.
    pub h3_basis: Vec<StateVector>,
    /// Projector onto the first `code_dim` vectors of `h3_basis`.
    pub code_projector: TruncatedOperator,
    pub code_dim: usize,
}

impl CodeSpec {
    pub fn dim_h3(&self) -> usize {
        self.h3_basis.len()
    }

    /// Same decomposition with the code spanned by the first `d` vectors of H₃.
    pub fn with_code_dim(mut self, d: usize) -> Result<Self> {
        if d < 2 || d > self.dim_h3() {
            return Err(Error::InvalidParameter(format!(
                "code dimension {d} must lie in 2..={}",
                self.dim_h3()
            )));
        }
        self.code_projector = span_projector(&self.h3_basis[..d]);
        self.code_dim = d;
        Ok(self)
    }

    pub fn code_basis(&self) -> &[StateVector] {
        &self.h3_basis[..self.code_dim]
    }
}

fn span_projector(vectors: &[StateVector]) -> TruncatedOperator {
    let dim = vectors[0].len();
    vectors.iter().fold(TruncatedOperator::zeros(dim, dim), |acc, v| acc + outer(v, v))
}

/// Build H₁, H₂, H₃ for the cut `k0`; the code defaults to K₀ − 1 vectors
/// of H₃.
pub fn decompose(params: &JcParams, k0: usize, trunc: &TruncationConfig) -> Result<CodeSpec> {
    let m0 = minimal_m0(params);
    let required = minimal_k0(m0);
    if k0 < required {
        return Err(Error::ConstraintViolation { k0, required });
    }
    let n = trunc.n_fock();
    if k0 >= n {
        return Err(Error::InvalidParameter(format!(
            "cut K0 = {k0} must stay below the photon cutoff N = {n}"
        )));
    }
    let plus: Vec<StateVector> =
        (1..=n).map(|m| dressed_vector(params, Level::plus(m), trunc)).collect::<Result<_>>()?;
    let upper_minus: Vec<StateVector> =
        (k0..=n).map(|m| dressed_vector(params, Level::minus(m), trunc)).collect::<Result<_>>()?;
    let mut h3_basis = vec![dressed_vector(params, Level::GROUND, trunc)?];
    for m in 1..k0 {
        h3_basis.push(dressed_vector(params, Level::minus(m), trunc)?);
    }
    let code_dim = (k0 - 1).min(h3_basis.len());
    Ok(CodeSpec {
        m0,
        k0,
        default_code_dim: k0 - 1,
        p1: span_projector(&plus),
        p2: span_projector(&upper_minus),
        p3: span_projector(&h3_basis),
        code_projector: span_projector(&h3_basis[..code_dim]),
        h3_basis,
        code_dim,
    })
}

/// One grid point of the minimal-dimension map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub gamma_s: f64,
    pub gamma_f: f64,
    pub m0: usize,
    pub k0_star: usize,
    pub d_min: usize,
}

impl SweepRow {
    pub fn at(gamma_f: f64, gamma_s: f64) -> Self {
        let m0 = minimal_m0_from_rates(gamma_f, gamma_s);
        let k0_star = minimal_k0(m0);
        SweepRow { gamma_s, gamma_f, m0, k0_star, d_min: k0_star - 1 }
    }
}

/// Closed interval sampled at `steps + 1` equispaced points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridAxis {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        if !(min > 0.0 && max > min) || steps == 0 {
            return Err(Error::InvalidParameter(format!(
                "grid axis needs 0 < min < max and steps >= 1 (got [{min}, {max}], {steps})"
            )));
        }
        Ok(Self { min, max, steps })
    }

    pub fn value(&self, i: usize) -> f64 {
        if i == self.steps {
            self.max
        } else {
            self.min + (self.max - self.min) * i as f64 / self.steps as f64
        }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.steps).map(|i| self.value(i))
    }
}

/// Rows in row-major order: γ_s is the outer (slow) index, γ_f the inner.
pub fn dmin_sweep(gamma_f: &GridAxis, gamma_s: &GridAxis) -> Vec<SweepRow> {
    let points: Vec<(f64, f64)> =
        gamma_s.values().flat_map(|gs| gamma_f.values().map(move |gf| (gf, gs))).collect();
    points.par_iter().map(|&(gf, gs)| SweepRow::at(gf, gs)).collect()
}

/// The resonant line γ_s = γ_f.
pub fn resonant_sweep(gamma_f: &GridAxis) -> Vec<SweepRow> {
    let points: Vec<f64> = gamma_f.values().collect();
    points.par_iter().map(|&g| SweepRow::at(g, g)).collect()
}

pub const CSV_HEADER: &str = "gamma_s,gamma_f,m0,k0_star,d_min";

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            crate::format::sig12(r.gamma_s),
            crate::format::sig12(r.gamma_f),
            r.m0,
            r.k0_star,
            r.d_min
        )?;
    }
    Ok(())
}
