//! Jaynes-Cummings Hamiltonian
//!
//! H = ω_f a⁺a⁻ + (ω_s/2) σ_z + (κ/2)(σ⁻a⁺ + σ⁺a⁻), with σ_z|e⟩ = +|e⟩ and
//! σ_z|g⟩ = −|g⟩. H conserves the excitation number, so on the truncated
//! space it splits into the ground state |0,g⟩, the 2×2 sectors
//! {|n−1,e⟩, |n,g⟩} for 1 ≤ n ≤ N, and the leftover |N,e⟩ whose partner
//! |N+1,g⟩ has been cut away.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::hilbert::{outer, Qubit, StateVector, TruncatedOperator, TruncationConfig, C64};

/// Field frequency, qubit frequency and coupling. Detuning and coupling
/// rates are always derived from these three.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JcParams {
    omega_f: f64,
    omega_s: f64,
    kappa: f64,
}

impl JcParams {
    pub fn new(omega_f: f64, omega_s: f64, kappa: f64) -> Result<Self> {
        if !(omega_f > 0.0 && omega_f.is_finite()) {
            return Err(Error::InvalidParameter(format!("omega_f = {omega_f} must be positive")));
        }
        if !(omega_s > 0.0 && omega_s.is_finite()) {
            return Err(Error::InvalidParameter(format!("omega_s = {omega_s} must be positive")));
        }
        if !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidParameter(format!("kappa = {kappa} must be non-negative")));
        }
        Ok(Self { omega_f, omega_s, kappa })
    }

    /// Parameters with coupling rates γ_f = κ/ω_f and γ_s = κ/ω_s at a given
    /// field frequency.
    pub fn from_rates(gamma_f: f64, gamma_s: f64, omega_f: f64) -> Result<Self> {
        if !(gamma_f > 0.0 && gamma_s > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "coupling rates must be positive (gamma_f = {gamma_f}, gamma_s = {gamma_s})"
            )));
        }
        let kappa = gamma_f * omega_f;
        Self::new(omega_f, kappa / gamma_s, kappa)
    }

    pub fn omega_f(&self) -> f64 {
        self.omega_f
    }

    pub fn omega_s(&self) -> f64 {
        self.omega_s
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Δ = ω_f − ω_s.
    pub fn delta(&self) -> f64 {
        self.omega_f - self.omega_s
    }

    pub fn gamma_f(&self) -> f64 {
        self.kappa / self.omega_f
    }

    pub fn gamma_s(&self) -> f64 {
        self.kappa / self.omega_s
    }

    /// Same physics measured in units of `unit` (time scales by `unit`).
    pub fn rescaled(&self, unit: f64) -> Result<Self> {
        Self::new(self.omega_f / unit, self.omega_s / unit, self.kappa / unit)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Ground,
    Plus,
    Minus,
}

/// An eigenlevel label: |0,g⟩ or |n,±⟩ with n ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Level {
    pub n: usize,
    pub branch: Branch,
}

impl Level {
    pub const GROUND: Level = Level { n: 0, branch: Branch::Ground };

    pub fn plus(n: usize) -> Level {
        Level { n, branch: Branch::Plus }
    }

    pub fn minus(n: usize) -> Level {
        Level { n, branch: Branch::Minus }
    }

    fn validate(self) -> Result<Self> {
        match (self.branch, self.n) {
            (Branch::Ground, 0) => Ok(self),
            (Branch::Ground, n) => Err(Error::InvalidLevel(format!("ground level with n = {n}"))),
            (_, 0) => Err(Error::InvalidLevel("dressed level |0,±⟩ does not exist".into())),
            _ => Ok(self),
        }
    }
}

/// A labelled eigenlevel with its mixing angle and energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedLevel {
    pub level: Level,
    /// θ_n ∈ [0, π]; `None` for the ground level.
    pub theta: Option<f64>,
    pub energy: f64,
}

/// θ_n = atan2(κ√n, Δ) ∈ (0, π) for κ > 0, continuous through Δ = 0.
pub fn mixing_angle(params: &JcParams, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidLevel("mixing angle needs n >= 1".into()));
    }
    if params.kappa == 0.0 && params.delta() == 0.0 {
        return Err(Error::DegenerateLevel);
    }
    Ok((params.kappa * (n as f64).sqrt()).atan2(params.delta()))
}

/// E_{n,±} = ω_f(n − ½) ± ½√(Δ² + κ²n); the ground level is the diagonal
/// element ⟨0,g|H|0,g⟩ = −ω_s/2.
pub fn eigenenergy(params: &JcParams, level: Level) -> Result<f64> {
    let level = level.validate()?;
    let n = level.n as f64;
    let split = || 0.5 * (params.delta().powi(2) + params.kappa.powi(2) * n).sqrt();
    Ok(match level.branch {
        Branch::Ground => -0.5 * params.omega_s,
        Branch::Plus => params.omega_f * (n - 0.5) + split(),
        Branch::Minus => params.omega_f * (n - 0.5) - split(),
    })
}

pub fn dressed_level(params: &JcParams, level: Level) -> Result<DressedLevel> {
    let energy = eigenenergy(params, level)?;
    let theta = match level.branch {
        Branch::Ground => None,
        _ => Some(vector_angle(params, level.n)),
    };
    Ok(DressedLevel { level, theta, energy })
}

/// Angle used for the eigenvectors. Equals θ_n except in the fully
/// degenerate case κ = Δ = 0, where every rotation diagonalizes the sector
/// and the resonant limit π/2 is taken.
fn vector_angle(params: &JcParams, n: usize) -> f64 {
    mixing_angle(params, n).unwrap_or(FRAC_PI_2)
}

/// (coefficient on |n−1,e⟩, coefficient on |n,g⟩) of |n,±⟩.
///
/// With Δ = ω_f − ω_s and σ_z|e⟩ = +|e⟩ the upper eigenvector of the
/// sector is sin(θ/2)|n−1,e⟩ + cos(θ/2)|n,g⟩ and the lower one is
/// cos(θ/2)|n−1,e⟩ − sin(θ/2)|n,g⟩. At resonance (θ = π/2) these are
/// (|n−1,e⟩ ± |n,g⟩)/√2 up to a global sign.
fn sector_coefficients(theta: f64, branch: Branch) -> (f64, f64) {
    let (s, c) = (0.5 * theta).sin_cos();
    match branch {
        Branch::Plus => (s, c),
        Branch::Minus => (c, -s),
        Branch::Ground => unreachable!("ground level has no sector"),
    }
}

/// Unit eigenvector of H for `level`, embedded in the truncated space.
pub fn dressed_vector(params: &JcParams, level: Level, trunc: &TruncationConfig) -> Result<StateVector> {
    let level = level.validate()?;
    if level.n > trunc.n_fock() {
        return Err(Error::Truncation { n: level.n, max: trunc.n_fock() });
    }
    if level.branch == Branch::Ground {
        return trunc.basis_vector(0, Qubit::G);
    }
    let (ce, cg) = sector_coefficients(vector_angle(params, level.n), level.branch);
    let mut v = StateVector::zeros(trunc.dim());
    v[trunc.index(level.n - 1, Qubit::E)?] = C64::new(ce, 0.0);
    v[trunc.index(level.n, Qubit::G)?] = C64::new(cg, 0.0);
    Ok(v)
}

/// Dense truncated Hamiltonian. The coupling ⟨N,e|H|N+1,g⟩ falls outside
/// the space, which leaves |N,e⟩ an exact eigenvector of the truncation.
pub fn hamiltonian_matrix(params: &JcParams, trunc: &TruncationConfig) -> TruncatedOperator {
    let mut h = trunc.zero_operator();
    for n in 0..=trunc.n_fock() {
        let nf = n as f64;
        let ig = 2 * n;
        let ie = 2 * n + 1;
        h[(ig, ig)] = C64::new(params.omega_f * nf - 0.5 * params.omega_s, 0.0);
        h[(ie, ie)] = C64::new(params.omega_f * nf + 0.5 * params.omega_s, 0.0);
        if n >= 1 {
            // σ⁺a⁻ |n,g⟩ = √n |n−1,e⟩
            let c = C64::new(0.5 * params.kappa * nf.sqrt(), 0.0);
            let ie_prev = 2 * (n - 1) + 1;
            h[(ie_prev, ig)] = c;
            h[(ig, ie_prev)] = c;
        }
    }
    h
}

/// Energy of the leftover vector |N,e⟩ (its diagonal element).
pub fn leftover_energy(params: &JcParams, trunc: &TruncationConfig) -> f64 {
    params.omega_f * trunc.n_fock() as f64 + 0.5 * params.omega_s
}

/// U_t = e^{−itH} on the truncated space, assembled block by block from
/// the dressed eigenpairs.
pub fn evolution_operator(params: &JcParams, t: f64, trunc: &TruncationConfig) -> TruncatedOperator {
    let phase = |e: f64| C64::from_polar(1.0, -e * t);
    let mut u = trunc.zero_operator();
    let e0 = eigenenergy(params, Level::GROUND).expect("ground level is valid");
    u[(0, 0)] = phase(e0);
    let top = trunc.dim() - 1;
    u[(top, top)] = phase(leftover_energy(params, trunc));
    for n in 1..=trunc.n_fock() {
        let theta = vector_angle(params, n);
        let idx = [2 * (n - 1) + 1, 2 * n];
        for branch in [Branch::Plus, Branch::Minus] {
            let e = eigenenergy(params, Level { n, branch }).expect("n >= 1");
            let (ce, cg) = sector_coefficients(theta, branch);
            let v = [ce, cg];
            let p = phase(e);
            for a in 0..2 {
                for b in 0..2 {
                    u[(idx[a], idx[b])] += p * (v[a] * v[b]);
                }
            }
        }
    }
    u
}

/// All eigenpairs of the truncated Hamiltonian.
#[derive(Debug, Clone)]
pub struct DressedBasis {
    pub levels: Vec<DressedLevel>,
    pub vectors: Vec<StateVector>,
    pub leftover_vector: StateVector,
    pub leftover_energy: f64,
}

impl DressedBasis {
    /// Ground level first, then |n,+⟩, |n,−⟩ for n = 1..=N.
    pub fn new(params: &JcParams, trunc: &TruncationConfig) -> Result<Self> {
        let mut labels = vec![Level::GROUND];
        for n in 1..=trunc.n_fock() {
            labels.push(Level::plus(n));
            labels.push(Level::minus(n));
        }
        let mut levels = Vec::with_capacity(labels.len());
        let mut vectors = Vec::with_capacity(labels.len());
        for level in labels {
            levels.push(dressed_level(params, level)?);
            vectors.push(dressed_vector(params, level, trunc)?);
        }
        Ok(Self {
            levels,
            vectors,
            leftover_vector: trunc.basis_vector(trunc.n_fock(), Qubit::E)?,
            leftover_energy: leftover_energy(params, trunc),
        })
    }

    /// Every eigenpair including the leftover, sorted by energy.
    pub fn sorted_pairs(&self) -> Vec<(f64, &StateVector)> {
        let mut pairs: Vec<(f64, &StateVector)> = self
            .levels
            .iter()
            .map(|l| l.energy)
            .zip(self.vectors.iter())
            .chain(std::iter::once((self.leftover_energy, &self.leftover_vector)))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs
    }

    /// Projector onto the span of the listed levels.
    pub fn projector(&self, select: impl Fn(&Level) -> bool) -> TruncatedOperator {
        let dim = self.leftover_vector.len();
        let mut p = TruncatedOperator::zeros(dim, dim);
        for (l, v) in self.levels.iter().zip(&self.vectors) {
            if select(&l.level) {
                p += outer(v, v);
            }
        }
        p
    }
}

/// Numerical health of the dressed spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumDiagnostics {
    /// max ‖Hv − Ev‖₂ over every eigenpair, leftover included.
    pub max_eigen_residual: f64,
    /// max |G − I| for the Gram matrix of the dressed basis.
    pub gram_deviation: f64,
    /// min_k (J_{k+1} − J_k) over representable k.
    pub min_j_gap: f64,
}

pub fn spectrum_diagnostics(params: &JcParams, trunc: &TruncationConfig) -> Result<SpectrumDiagnostics> {
    let h = hamiltonian_matrix(params, trunc);
    let basis = DressedBasis::new(params, trunc)?;
    let pairs = basis.sorted_pairs();

    let max_eigen_residual = pairs
        .iter()
        .map(|(e, v)| (&h * *v - *v * C64::new(*e, 0.0)).norm())
        .fold(0.0, f64::max);

    let dim = trunc.dim();
    let vmat = TruncatedOperator::from_columns(&pairs.iter().map(|(_, v)| (*v).clone()).collect::<Vec<_>>());
    let gram = vmat.adjoint() * &vmat;
    let gram_deviation = crate::hilbert::max_abs_diff(&gram, &TruncatedOperator::identity(dim, dim));

    let j: Vec<f64> = (1..=trunc.n_fock())
        .map(|n| eigenenergy(params, Level::plus(n)))
        .collect::<Result<_>>()?;
    let min_j_gap = j.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);

    Ok(SpectrumDiagnostics { max_eigen_residual, gram_deviation, min_j_gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{max_abs_diff, unitarity_defect};
    use std::f64::consts::{FRAC_PI_4, PI};

    fn params(omega_f: f64, omega_s: f64, kappa: f64) -> JcParams {
        JcParams::new(omega_f, omega_s, kappa).unwrap()
    }

    #[test]
    fn derived_quantities() {
        let p = params(2.0, 1.5, 0.3);
        assert_eq!(p.delta(), 0.5);
        assert!((p.gamma_f() - 0.15).abs() < 1e-15);
        assert!((p.gamma_s() - 0.2).abs() < 1e-15);
        let q = JcParams::from_rates(0.15, 0.2, 2.0).unwrap();
        assert!((q.omega_s() - 1.5).abs() < 1e-12);
        assert!(JcParams::new(0.0, 1.0, 1.0).is_err());
        assert!(JcParams::new(1.0, -1.0, 1.0).is_err());
        assert!(JcParams::new(1.0, 1.0, -0.1).is_err());
    }

    #[test]
    fn mixing_angle_examples() {
        // Δ = κ√n
        assert!((mixing_angle(&params(3.0, 1.0, 2.0), 1).unwrap() - FRAC_PI_4).abs() < 1e-15);
        // resonance
        assert!((mixing_angle(&params(1.0, 1.0, 0.7), 5).unwrap() - FRAC_PI_2).abs() < 1e-15);
        // κ = 1, Δ = 1, n = 4: atan(2)
        let theta = mixing_angle(&params(2.0, 1.0, 1.0), 4).unwrap();
        assert!((theta - 1.107_148_717_794_090_4).abs() < 1e-15);
        assert_eq!(mixing_angle(&params(1.0, 1.0, 0.0), 1), Err(Error::DegenerateLevel));
        // continuity through Δ = 0
        let eps = 1e-9;
        let up = mixing_angle(&params(1.0 + eps, 1.0, 0.5), 3).unwrap();
        let down = mixing_angle(&params(1.0 - eps, 1.0, 0.5), 3).unwrap();
        assert!((up - down).abs() < 1e-8);
        assert!(up > 0.0 && up < PI);
    }

    #[test]
    fn eigenenergy_examples() {
        let uncoupled = params(1.0, 1.0, 0.0);
        assert_eq!(eigenenergy(&uncoupled, Level::plus(3)).unwrap(), 2.5);
        let weak = params(1.0, 1.0, 0.2);
        assert!((eigenenergy(&weak, Level::plus(1)).unwrap() - 0.6).abs() < 1e-15);
        assert!((eigenenergy(&weak, Level::minus(1)).unwrap() - 0.4).abs() < 1e-15);
        assert_eq!(eigenenergy(&params(1.0, 1.0, 3.0), Level::GROUND).unwrap(), -0.5);
        assert!(eigenenergy(&weak, Level::plus(0)).is_err());
        assert!(eigenenergy(&weak, Level { n: 2, branch: Branch::Ground }).is_err());
    }

    #[test]
    fn dressed_vector_examples() {
        let trunc = TruncationConfig::with_cutoff(6).unwrap();
        let r = 0.5f64.sqrt();

        let resonant = params(1.0, 1.0, 0.4);
        let v = dressed_vector(&resonant, Level::plus(1), &trunc).unwrap();
        let mut want = StateVector::zeros(trunc.dim());
        want[trunc.index(0, Qubit::E).unwrap()] = C64::new(r, 0.0);
        want[trunc.index(1, Qubit::G).unwrap()] = C64::new(r, 0.0);
        assert!((v - want).norm() < 1e-15);

        // κ = 0 with Δ > 0: |n,g⟩ carries the upper energy ω_f n − ω_s/2.
        let detuned = params(1.3, 1.0, 0.0);
        let v = dressed_vector(&detuned, Level::plus(2), &trunc).unwrap();
        assert!((v - trunc.basis_vector(2, Qubit::G).unwrap()).norm() < 1e-15);
        let v = dressed_vector(&detuned, Level::minus(2), &trunc).unwrap();
        assert!((v - trunc.basis_vector(1, Qubit::E).unwrap()).norm() < 1e-15);

        let p = params(1.0, 0.6, 0.35);
        for n in 1..=6 {
            let a = dressed_vector(&p, Level::plus(n), &trunc).unwrap();
            let b = dressed_vector(&p, Level::minus(n), &trunc).unwrap();
            assert!(a.dotc(&b).norm() < 1e-15);
            assert!((a.norm() - 1.0).abs() < 1e-15);
        }
        assert_eq!(
            dressed_vector(&p, Level::plus(7), &trunc),
            Err(Error::Truncation { n: 7, max: 6 })
        );
        assert_eq!(
            dressed_vector(&p, Level::GROUND, &trunc).unwrap(),
            trunc.basis_vector(0, Qubit::G).unwrap()
        );
    }

    #[test]
    fn hamiltonian_examples() {
        let trunc = TruncationConfig::with_cutoff(4).unwrap();
        let p = params(1.0, 1.0, 0.2);
        let h = hamiltonian_matrix(&p, &trunc);
        let g0 = trunc.index(0, Qubit::G).unwrap();
        let e0 = trunc.index(0, Qubit::E).unwrap();
        let g1 = trunc.index(1, Qubit::G).unwrap();
        assert_eq!(h[(g0, g0)].re, -0.5);
        assert!((h[(e0, g1)].re - 0.1).abs() < 1e-15);
        assert_eq!(crate::hilbert::hermiticity_defect(&h), 0.0);

        // 2×2 oracle for the n = 1 sector: [[ω_s/2, κ/2], [κ/2, ω_f − ω_s/2]]
        let (a, b, d) = (h[(e0, e0)].re, h[(e0, g1)].re, h[(g1, g1)].re);
        let mean = 0.5 * (a + d);
        let rad = (0.25 * (a - d).powi(2) + b * b).sqrt();
        assert!((mean - rad - 0.4).abs() < 1e-15);
        assert!((mean + rad - 0.6).abs() < 1e-15);
    }

    #[test]
    fn eigen_residuals_either_detuning_sign() {
        let trunc = TruncationConfig::with_cutoff(12).unwrap();
        for p in [params(1.0, 1.7, 0.3), params(1.0, 0.4, 0.3), params(1.0, 1.0, 2.5), params(2.0, 1.0, 0.0)] {
            let d = spectrum_diagnostics(&p, &trunc).unwrap();
            assert!(d.max_eigen_residual < 1e-12, "{p:?}: {}", d.max_eigen_residual);
            assert!(d.gram_deviation < 1e-14);
            assert!(d.min_j_gap > 0.0);
            for n in 1..=12 {
                let up = eigenenergy(&p, Level::plus(n)).unwrap();
                let down = eigenenergy(&p, Level::minus(n)).unwrap();
                assert!(up > down);
            }
        }
    }

    #[test]
    fn evolution_group_law() {
        let trunc = TruncationConfig::with_cutoff(20).unwrap();
        let p = params(1.0, 0.8, 0.45);
        let u0 = evolution_operator(&p, 0.0, &trunc);
        assert!(max_abs_diff(&u0, &trunc.identity()) < 1e-15);
        let a = evolution_operator(&p, 0.3, &trunc);
        let b = evolution_operator(&p, 0.7, &trunc);
        let c = evolution_operator(&p, 1.0, &trunc);
        assert!(max_abs_diff(&(&a * &b), &c) < 1e-10);
        assert!(unitarity_defect(&c) < 1e-13);

        let v = dressed_vector(&p, Level::minus(4), &trunc).unwrap();
        let e = eigenenergy(&p, Level::minus(4)).unwrap();
        let expect = &v * C64::from_polar(1.0, -e * 1.0);
        assert!((&c * &v - expect).norm() < 1e-14);
    }

    #[test]
    fn evolution_matches_series_exponential() {
        // Independent route: e^{-itH} by scaling and squaring of a Taylor series.
        let trunc = TruncationConfig::with_cutoff(6).unwrap();
        let p = params(1.0, 1.2, 0.6);
        let t = 0.9;
        let h = hamiltonian_matrix(&p, &trunc);
        let steps = 1 << 10;
        let a = &h * C64::new(0.0, -t / steps as f64);
        let mut term = trunc.identity();
        let mut small = trunc.identity();
        for k in 1..20 {
            term = &term * &a * C64::new(1.0 / k as f64, 0.0);
            small += &term;
        }
        let mut u = small;
        for _ in 0..10 {
            u = &u * &u;
        }
        assert!(max_abs_diff(&u, &evolution_operator(&p, t, &trunc)) < 1e-11);
    }
}
