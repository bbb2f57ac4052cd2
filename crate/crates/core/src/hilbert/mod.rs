//! Dense numerics on the truncated qubit ⊗ Fock space.
//!
//! Basis layout is interleaved: the ket |n, s⟩ (photon number `n`, qubit
//! level `s`) lives at index `2n + s` with `g = 0`, `e = 1`. Every other
//! module goes through [`TruncationConfig::index`] instead of hard-coding
//! offsets.

mod quadrature;

pub use quadrature::{quadrature_integrate, QuadratureRule, Support};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
/// Complex amplitudes over the truncated basis, length `2(N + 1)`.
pub type StateVector = DVector<C64>;
/// Dense complex operator on the truncated space.
pub type TruncatedOperator = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Qubit level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Qubit {
    G,
    E,
}

impl Qubit {
    fn offset(self) -> usize {
        match self {
            Qubit::G => 0,
            Qubit::E => 1,
        }
    }
}

/// Photon-number cutoff plus the admissible neglected coefficient mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationConfig {
    n_fock: usize,
    tail_tol: f64,
}

impl TruncationConfig {
    pub const DEFAULT_TAIL_TOL: f64 = 1e-10;

    pub fn new(n_fock: usize, tail_tol: f64) -> Result<Self> {
        if n_fock < 2 {
            return Err(Error::InvalidParameter(format!(
                "photon cutoff N = {n_fock} must be at least 2"
            )));
        }
        if !(tail_tol > 0.0 && tail_tol < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "tail tolerance {tail_tol} must lie in (0, 1)"
            )));
        }
        Ok(Self { n_fock, tail_tol })
    }

    pub fn with_cutoff(n_fock: usize) -> Result<Self> {
        Self::new(n_fock, Self::DEFAULT_TAIL_TOL)
    }

    pub fn n_fock(&self) -> usize {
        self.n_fock
    }

    pub fn tail_tol(&self) -> f64 {
        self.tail_tol
    }

    pub fn dim(&self) -> usize {
        2 * (self.n_fock + 1)
    }

    /// Index of |n, s⟩: `2n + s`.
    pub fn index(&self, n: usize, s: Qubit) -> Result<usize> {
        if n > self.n_fock {
            return Err(Error::IndexOutOfRange { n, max: self.n_fock });
        }
        Ok(2 * n + s.offset())
    }

    /// Inverse of [`index`](Self::index).
    pub fn label(&self, index: usize) -> (usize, Qubit) {
        let s = if index.is_multiple_of(2) { Qubit::G } else { Qubit::E };
        (index / 2, s)
    }

    pub fn basis_vector(&self, n: usize, s: Qubit) -> Result<StateVector> {
        let mut v = StateVector::zeros(self.dim());
        v[self.index(n, s)?] = ONE;
        Ok(v)
    }

    pub fn zero_operator(&self) -> TruncatedOperator {
        TruncatedOperator::zeros(self.dim(), self.dim())
    }

    pub fn identity(&self) -> TruncatedOperator {
        TruncatedOperator::identity(self.dim(), self.dim())
    }
}

pub fn basis_index(trunc: &TruncationConfig, n: usize, s: Qubit) -> Result<usize> {
    trunc.index(n, s)
}

/// Largest entry modulus.
pub fn max_abs(a: &TruncatedOperator) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &TruncatedOperator, b: &TruncatedOperator) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn hermiticity_defect(a: &TruncatedOperator) -> f64 {
    max_abs_diff(a, &a.adjoint())
}

pub fn projector_defect(p: &TruncatedOperator) -> f64 {
    max_abs_diff(&(p * p), p).max(hermiticity_defect(p))
}

pub fn unitarity_defect(u: &TruncatedOperator) -> f64 {
    let n = u.nrows();
    max_abs_diff(&(u.adjoint() * u), &TruncatedOperator::identity(n, n))
}

pub fn trace(a: &TruncatedOperator) -> C64 {
    a.diagonal().iter().sum()
}

pub fn outer(u: &StateVector, v: &StateVector) -> TruncatedOperator {
    u * v.adjoint()
}

/// Σ |v⟩⟨v| over a pairwise orthonormal list.
pub fn projector_onto(dim: usize, vectors: &[StateVector]) -> Result<TruncatedOperator> {
    const TOL: f64 = 1e-10;
    for (i, v) in vectors.iter().enumerate() {
        if v.len() != dim {
            return Err(Error::InvalidParameter(format!(
                "vector {i} has length {} but the space has dimension {dim}",
                v.len()
            )));
        }
        for (j, w) in vectors.iter().enumerate().skip(i) {
            let overlap = v.dotc(w);
            let expected = if i == j { 1.0 } else { 0.0 };
            if (overlap - C64::new(expected, 0.0)).norm() > TOL {
                return Err(Error::NotOrthonormal { i, j, overlap: overlap.norm() });
            }
        }
    }
    let mut p = TruncatedOperator::zeros(dim, dim);
    for v in vectors {
        p += outer(v, v);
    }
    Ok(p)
}

/// U A U†, rejecting non-unitary `u`.
pub fn conjugate(u: &TruncatedOperator, a: &TruncatedOperator) -> Result<TruncatedOperator> {
    let deviation = unitarity_defect(u);
    if deviation > 1e-10 {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(u * a * u.adjoint())
}

/// Infinite-time average of y ↦ e^{-i(h_j - h_k) y} M_jk.
///
/// For pairwise distinct frequencies every off-diagonal term averages to
/// zero and the diagonal is untouched, so the mean is the diagonal of `m`.
pub fn bohr_mean_diagonal(h: &[f64], m: &TruncatedOperator) -> Result<TruncatedOperator> {
    if m.nrows() != h.len() || m.ncols() != h.len() {
        return Err(Error::InvalidParameter(format!(
            "energy list of length {} does not match a {}x{} matrix",
            h.len(),
            m.nrows(),
            m.ncols()
        )));
    }
    if let Some(index) = h.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::RepeatedEnergy { index: index + 1 });
    }
    Ok(TruncatedOperator::from_diagonal(&m.diagonal()))
}

/// Brute-force time average (1/2T) ∫_{-T}^{T} f(y) dy by the composite
/// trapezoid rule on `samples` equispaced points.
pub fn finite_time_mean<F>(f: F, t_max: f64, samples: usize) -> Result<TruncatedOperator>
where
    F: Fn(f64) -> TruncatedOperator,
{
    if !(t_max > 0.0) || samples < 2 {
        return Err(Error::InvalidParameter(format!(
            "finite-time mean needs T > 0 and at least 2 samples (got T = {t_max}, {samples})"
        )));
    }
    let step = 2.0 * t_max / (samples - 1) as f64;
    let mut acc = f(-t_max) * C64::new(0.5, 0.0);
    for i in 1..samples - 1 {
        acc += f(-t_max + step * i as f64);
    }
    acc += f(t_max) * C64::new(0.5, 0.0);
    Ok(acc * C64::new(step / (2.0 * t_max), 0.0))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(a: &TruncatedOperator) -> Vec<f64> {
    let mut ev: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Uhlmann fidelity (tr √(√ρ σ √ρ))².
///
/// Evaluated on the support of `rho` (eigenvalues above 1e-13 of the
/// largest), so numerically-zero directions of ρ cannot leak √ε terms into
/// the trace.
pub fn fidelity(rho: &TruncatedOperator, sigma: &TruncatedOperator) -> f64 {
    let eig = rho.clone().symmetric_eigen();
    let top = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let support: Vec<usize> =
        (0..eig.eigenvalues.len()).filter(|&i| eig.eigenvalues[i] > 1e-13 * top).collect();
    if support.is_empty() {
        return 0.0;
    }
    let basis = TruncatedOperator::from_columns(
        &support.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<_>>(),
    );
    let roots = TruncatedOperator::from_diagonal(&DVector::from_iterator(
        support.len(),
        support.iter().map(|&i| C64::new(eig.eigenvalues[i].sqrt(), 0.0)),
    ));
    let reduced = basis.adjoint() * sigma * &basis;
    let inner = &roots * reduced * &roots;
    let inner = (&inner + inner.adjoint()) * C64::new(0.5, 0.0);
    let t: f64 = inner
        .symmetric_eigenvalues()
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .sum();
    t * t
}

/// Orthonormalize `vectors` with modified Gram-Schmidt, dropping any that
/// fall below `tol` after projection.
pub fn orthonormalize(vectors: &[StateVector], tol: f64) -> Vec<StateVector> {
    let mut out: Vec<StateVector> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c = q.dotc(&w);
                w -= q * c;
            }
        }
        let norm = w.norm();
        if norm > tol {
            out.push(w / C64::new(norm, 0.0));
        }
    }
    out
}
