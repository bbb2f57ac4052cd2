//! Operator-graph generators U_t P_x^j U_t*, the identity and anticlique
//! checks, and the projective channel Φᵗ.

use rand::Rng;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::code_construction::CodeSpec;
use crate::error::{Error, Result};
use crate::format::round_sig;
use crate::gk_states::{gk_state, resolution_operator, JcFamilies};
use crate::hilbert::{
    conjugate, fidelity, hermitian_eigenvalues, hermiticity_defect, max_abs, max_abs_diff, outer, projector_defect,
    trace, QuadratureRule, StateVector, TruncatedOperator, TruncationConfig, C64,
};
use crate::jc_spectrum::{dressed_vector, evolution_operator, JcParams, Level};

/// One element U_t P_x^j U_t* of the spanning set.
#[derive(Debug, Clone)]
pub struct GraphGenerator {
    pub j: u8,
    pub x: f64,
    pub t: f64,
    pub operator: TruncatedOperator,
}

fn check_k0(code: &CodeSpec, families: &JcFamilies) -> Result<()> {
    if code.k0 != families.k0 {
        return Err(Error::InconsistentK0 { families: families.k0, code: code.k0 });
    }
    Ok(())
}

/// Normalized |J,x,0⟩ (j = 1) or |S,x,0⟩ (j = 2).
fn family_state(families: &JcFamilies, j: u8, x: f64, trunc: &TruncationConfig) -> Result<StateVector> {
    let spec = match j {
        1 => &families.j,
        2 => &families.s,
        _ => return Err(Error::InvalidParameter(format!("no coherent family for j = {j}"))),
    };
    let v = gk_state(spec, x, 0.0, trunc)?;
    let n = v.norm();
    Ok(v / C64::new(n, 0.0))
}

/// P_x^j at t = 0.
pub fn base_projector(
    code: &CodeSpec,
    families: &JcFamilies,
    j: u8,
    x: f64,
    trunc: &TruncationConfig,
) -> Result<TruncatedOperator> {
    check_k0(code, families)?;
    match j {
        1 | 2 => {
            let v = family_state(families, j, x, trunc)?;
            Ok(outer(&v, &v))
        }
        3 => Ok(code.p3.clone()),
        _ => Err(Error::InvalidParameter(format!("generator index j = {j} not in 1..=3"))),
    }
}

pub fn generator(
    params: &JcParams,
    code: &CodeSpec,
    families: &JcFamilies,
    j: u8,
    x: f64,
    t: f64,
    trunc: &TruncationConfig,
) -> Result<GraphGenerator> {
    check_k0(code, families)?;
    let u = evolution_operator(params, t, trunc);
    let operator = match j {
        1 | 2 => {
            let v = &u * family_state(families, j, x, trunc)?;
            outer(&v, &v)
        }
        3 => conjugate(&u, &code.p3)?,
        _ => return Err(Error::InvalidParameter(format!("generator index j = {j} not in 1..=3"))),
    };
    Ok(GraphGenerator { j, x, t, operator })
}

/// Coefficients (1, τ₂/τ₁, 1/(R τ₁)) of Q_x. The third is `None` when the
/// two families do not share a finite radius.
pub fn q_coefficients(x: f64, families: &JcFamilies) -> Result<(f64, f64, Option<f64>)> {
    let (f1, f2) = (families.j.family, families.s.family);
    f1.check_domain(x)?;
    f2.check_domain(x)?;
    let t1 = f1.tau(x);
    let third = families.shared_radius().filter(|r| r.is_finite()).map(|r| 1.0 / (r * t1));
    Ok((1.0, f2.tau(x) / t1, third))
}

fn finite_radius(families: &JcFamilies) -> Result<f64> {
    families.shared_radius().filter(|r| r.is_finite()).ok_or_else(|| {
        Error::Unsupported(format!(
            "identity membership needs two families with one finite radius (got {} and {}); use uniform_moment",
            families.j.family, families.s.family
        ))
    })
}

/// Q_x = P_x^1 + (τ₂/τ₁) P_x^2 + (1/(R τ₁)) P_{H₃}.
pub fn q_operator(
    x: f64,
    families: &JcFamilies,
    code: &CodeSpec,
    trunc: &TruncationConfig,
) -> Result<TruncatedOperator> {
    finite_radius(families)?;
    let (a, b, c) = q_coefficients(x, families)?;
    let c = c.expect("finite shared radius");
    let p1 = base_projector(code, families, 1, x, trunc)?;
    let p2 = base_projector(code, families, 2, x, trunc)?;
    Ok(p1 * C64::new(a, 0.0) + p2 * C64::new(b, 0.0) + &code.p3 * C64::new(c, 0.0))
}

/// Residuals of ∫ τ₁(x) · mean_t[U_t Q_x U_t*] dx against the identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MembershipReport {
    /// max entrywise |M − I| with the |N,e⟩ row and column removed.
    pub residual: f64,
    /// max |M − I| restricted to H₃.
    pub h3_residual: f64,
    /// max_k |⟨J_k|M|J_k⟩ − 1|.
    pub h1_diag_residual: f64,
}

/// Reconstruct the identity from the graph's Q_x orbit.
///
/// τ₁ P_x^1 and τ₁ (τ₂/τ₁) P_x^2 average over t to the two resolutions of
/// identity, evaluated in moment form, and τ₁ / (R τ₁) = 1/R integrates to
/// one on H₃.
pub fn verify_identity_membership(
    code: &CodeSpec,
    families: &JcFamilies,
    rule: &QuadratureRule,
    trunc: &TruncationConfig,
) -> Result<MembershipReport> {
    check_k0(code, families)?;
    let r = finite_radius(families)?;
    let (m1, moments1) = resolution_operator(&families.j, rule)?;
    let (m2, _) = resolution_operator(&families.s, rule)?;
    let h3_weight: f64 = rule.weights().iter().map(|w| w / r).sum();
    let total = m1 + m2 + &code.p3 * C64::new(h3_weight, 0.0);

    // |N,e⟩ is the last basis index; the graph never reaches it.
    let interior = trunc.dim() - 1;
    let diff = &total - trunc.identity();
    let residual = diff.view((0, 0), (interior, interior)).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let h3_residual = max_abs_diff(&(&code.p3 * &total * &code.p3), &code.p3);
    let h1_diag_residual = moments1.iter().map(|m| (m - 1.0).abs()).fold(0.0, f64::max);
    Ok(MembershipReport { residual, h3_residual, h1_diag_residual })
}

/// One pass/fail line of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub alpha: Option<C64>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self { name: name.into(), residual, tolerance, pass: residual < tolerance, alpha: None }
    }

    /// Pass/fail without a numeric residual: 0 on success, 1 on failure.
    pub fn boolean(name: impl Into<String>, ok: bool) -> Self {
        Self::new(name, if ok { 0.0 } else { 1.0 }, 0.5)
    }

    /// A check that could not run; recorded as failing with an infinite residual.
    pub fn failed(name: impl Into<String>) -> Self {
        Self { name: name.into(), residual: f64::INFINITY, tolerance: 0.0, pass: false, alpha: None }
    }
}

impl Serialize for CheckRecord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let finite = |v: f64| v.is_finite().then_some(round_sig(v, 12));
        let mut st = s.serialize_struct("CheckRecord", 6)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("residual", &finite(self.residual))?;
        st.serialize_field("tolerance", &round_sig(self.tolerance, 12))?;
        st.serialize_field("pass", &self.pass)?;
        st.serialize_field("alpha_re", &self.alpha.map(|a| round_sig(a.re, 12)))?;
        st.serialize_field("alpha_im", &self.alpha.map(|a| round_sig(a.im, 12)))?;
        st.end()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerificationReport {
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn push(&mut self, record: CheckRecord) {
        self.checks.push(record);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn overall_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl Serialize for VerificationReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("VerificationReport", 2)?;
        st.serialize_field("checks", &self.checks)?;
        st.serialize_field("overall_pass", &self.overall_pass())?;
        st.end()
    }
}

fn projector_rank(p: &TruncatedOperator) -> usize {
    trace(p).re.round().max(0.0) as usize
}

/// Fit α(A) = tr(PAP)/rank P for each operator and report ‖PAP − αP‖_max.
pub fn knill_laflamme_check(p: &TruncatedOperator, ops: &[(String, TruncatedOperator)], tol: f64) -> VerificationReport {
    let rank = projector_rank(p).max(1) as f64;
    let checks = ops
        .iter()
        .map(|(name, a)| {
            let pap = p * a * p;
            let alpha = trace(&pap) / rank;
            let residual = max_abs_diff(&pap, &(p * alpha));
            CheckRecord { alpha: Some(alpha), ..CheckRecord::new(name.clone(), residual, tol) }
        })
        .collect();
    VerificationReport { checks }
}

/// Knill-Laflamme test of `p` against the samples and the identity.
pub fn verify_anticlique(
    p: &TruncatedOperator,
    samples: &[(String, TruncatedOperator)],
    tol: f64,
) -> Result<VerificationReport> {
    let rank = projector_rank(p);
    if rank < 2 {
        return Err(Error::InvalidAnticlique { rank });
    }
    if samples.is_empty() {
        return Err(Error::InvalidParameter("anticlique check needs at least one sample".into()));
    }
    let dim = p.nrows();
    let mut ops = vec![("identity".to_string(), TruncatedOperator::identity(dim, dim))];
    ops.extend(samples.iter().cloned());
    Ok(knill_laflamme_check(p, &ops, tol))
}

/// Random real-linear combinations of the generators, coefficients in [−1, 1].
pub fn random_combinations<R: Rng>(
    generators: &[GraphGenerator],
    count: usize,
    rng: &mut R,
) -> Vec<(String, TruncatedOperator)> {
    (0..count)
        .map(|i| {
            let dim = generators[0].operator.nrows();
            let op = generators.iter().fold(TruncatedOperator::zeros(dim, dim), |acc, g| {
                acc + &g.operator * C64::new(rng.random_range(-1.0..=1.0), 0.0)
            });
            (format!("combination[{i}]"), op)
        })
        .collect()
}

/// Φᵗ(ρ) = Σ_k U_t P_k U_t* ρ U_t P_k U_t* for an orthogonal resolution {P_k}.
#[derive(Debug, Clone)]
pub struct Channel {
    projectors: Vec<TruncatedOperator>,
    t: f64,
    evolved: Vec<TruncatedOperator>,
}

impl Channel {
    pub const TOL: f64 = 1e-9;

    pub fn new(
        projectors: Vec<TruncatedOperator>,
        params: &JcParams,
        t: f64,
        trunc: &TruncationConfig,
    ) -> Result<Self> {
        let dim = trunc.dim();
        if projectors.is_empty() || projectors.iter().any(|p| p.nrows() != dim || p.ncols() != dim) {
            return Err(Error::InvalidChannel(format!("channel needs {dim}x{dim} projectors")));
        }
        for (k, p) in projectors.iter().enumerate() {
            let d = projector_defect(p);
            if d > Self::TOL {
                return Err(Error::InvalidChannel(format!("element {k} is not a projector (defect {d:.3e})")));
            }
            for (l, q) in projectors.iter().enumerate().skip(k + 1) {
                let overlap = max_abs(&(p * q));
                if overlap > Self::TOL {
                    return Err(Error::InvalidChannel(format!(
                        "elements {k} and {l} are not orthogonal ({overlap:.3e})"
                    )));
                }
            }
        }
        let sum = projectors.iter().fold(trunc.zero_operator(), |acc, p| acc + p);
        let gap = max_abs_diff(&sum, &trunc.identity());
        if gap > Self::TOL {
            return Err(Error::InvalidChannel(format!("projectors do not sum to identity ({gap:.3e})")));
        }
        let u = evolution_operator(params, t, trunc);
        let evolved = projectors.iter().map(|p| conjugate(&u, p)).collect::<Result<_>>()?;
        Ok(Self { projectors, t, evolved })
    }

    /// {P_x^1, P_x^2, I − P_x^1 − P_x^2} evolved for time t.
    pub fn from_families(
        params: &JcParams,
        code: &CodeSpec,
        families: &JcFamilies,
        x: f64,
        t: f64,
        trunc: &TruncationConfig,
    ) -> Result<Self> {
        let p1 = base_projector(code, families, 1, x, trunc)?;
        let p2 = base_projector(code, families, 2, x, trunc)?;
        let rest = trunc.identity() - &p1 - &p2;
        Self::new(vec![p1, p2, rest], params, t, trunc)
    }

    pub fn projectors(&self) -> &[TruncatedOperator] {
        &self.projectors
    }

    pub fn time(&self) -> f64 {
        self.t
    }
}

/// Reject operators that are not unit-trace positive semidefinite.
pub fn check_density(rho: &TruncatedOperator) -> Result<()> {
    let herm = hermiticity_defect(rho);
    if herm > Channel::TOL {
        return Err(Error::InvalidDensity(format!("not Hermitian (defect {herm:.3e})")));
    }
    let tr = trace(rho);
    if (tr - C64::new(1.0, 0.0)).norm() > Channel::TOL {
        return Err(Error::InvalidDensity(format!("trace {tr} differs from 1")));
    }
    let min = hermitian_eigenvalues(rho)[0];
    if min < -Channel::TOL {
        return Err(Error::InvalidDensity(format!("negative eigenvalue {min:.3e}")));
    }
    Ok(())
}

pub fn channel_apply(ch: &Channel, rho: &TruncatedOperator) -> Result<TruncatedOperator> {
    if rho.nrows() != ch.evolved[0].nrows() || rho.ncols() != rho.nrows() {
        return Err(Error::InvalidDensity("dimension does not match the channel".into()));
    }
    check_density(rho)?;
    Ok(ch.evolved.iter().fold(TruncatedOperator::zeros(rho.nrows(), rho.ncols()), |acc, q| acc + q * rho * q))
}

/// Result of sending one state through Φᵗ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Transmission {
    pub fidelity: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

/// ‖PρP − ρ‖_max for the code projector P.
pub fn code_leakage(code: &CodeSpec, rho: &TruncatedOperator) -> f64 {
    let p = &code.code_projector;
    max_abs_diff(&(p * rho * p), rho)
}

/// Send `rho` through the channel built from (x, t) and compare the
/// output with the input. With `allow_leak` false, states outside the code
/// are refused.
#[allow(clippy::too_many_arguments)]
pub fn transmit_demo(
    params: &JcParams,
    code: &CodeSpec,
    families: &JcFamilies,
    x: f64,
    t: f64,
    rho: &TruncatedOperator,
    allow_leak: bool,
    trunc: &TruncationConfig,
) -> Result<Transmission> {
    if !allow_leak {
        let leakage = code_leakage(code, rho);
        if leakage > 1e-10 {
            return Err(Error::NotInCodeSpace { leakage });
        }
    }
    let ch = Channel::from_families(params, code, families, x, t, trunc)?;
    let out = channel_apply(&ch, rho)?;
    Ok(Transmission {
        fidelity: fidelity(rho, &out),
        trace_error: (trace(&out) - C64::new(1.0, 0.0)).norm(),
        min_eigenvalue: hermitian_eigenvalues(&out)[0],
    })
}

/// Random pure state of the code subspace, amplitudes uniform in the unit
/// square before normalization.
pub fn random_code_state<R: Rng>(code: &CodeSpec, rng: &mut R) -> StateVector {
    let basis = code.code_basis();
    let mut v = StateVector::zeros(basis[0].len());
    for b in basis {
        v += b * C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    let n = v.norm();
    v / C64::new(n, 0.0)
}

/// √(1−ε)|ψ⟩ + √ε |1,+⟩, which overlaps the J-family projector.
pub fn leaked_state(psi: &StateVector, params: &JcParams, eps: f64, trunc: &TruncationConfig) -> Result<StateVector> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!("leak weight {eps} outside [0, 1]")));
    }
    let out = dressed_vector(params, Level::plus(1), trunc)?;
    let v = psi * C64::new((1.0 - eps).sqrt(), 0.0) + out * C64::new(eps.sqrt(), 0.0);
    let n = v.norm();
    Ok(v / C64::new(n, 0.0))
}
