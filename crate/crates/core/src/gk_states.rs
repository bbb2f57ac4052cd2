//! Gazeau-Klauder coherent states: weight families, the states |x,y⟩,
//! the two Jaynes-Cummings families, and checks of their defining
//! properties.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::code_construction::minimal_k0;
use crate::error::{Error, Result};
use crate::hilbert::{
    bohr_mean_diagonal, max_abs_diff, QuadratureRule, StateVector, TruncatedOperator, TruncationConfig, C64,
};
use crate::jc_spectrum::{dressed_vector, eigenenergy, evolution_operator, JcParams, Level};

/// Moment weights c_k with their density ρ on [0, R).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightFamily {
    /// c_k = k!, ρ(x) = e^{−x} on [0, ∞), N²(x) = e^x, τ ≡ 1.
    Factorial,
    /// c_k = 1/(k+1), ρ ≡ 1 on [0, 1), N²(x) = (1−x)^{−2}.
    UniformMoment,
}

impl WeightFamily {
    pub const ALL: [WeightFamily; 2] = [WeightFamily::Factorial, WeightFamily::UniformMoment];

    pub fn name(self) -> &'static str {
        match self {
            WeightFamily::Factorial => "factorial",
            WeightFamily::UniformMoment => "uniform_moment",
        }
    }

    pub fn ln_c(self, k: usize) -> f64 {
        match self {
            WeightFamily::Factorial => ln_factorial(k),
            WeightFamily::UniformMoment => -((k + 1) as f64).ln(),
        }
    }

    pub fn c(self, k: usize) -> f64 {
        self.ln_c(k).exp()
    }

    /// ln c_0, …, ln c_{count−1}.
    pub fn ln_c_table(self, count: usize) -> Vec<f64> {
        match self {
            WeightFamily::Factorial => {
                let mut acc = 0.0;
                (0..count)
                    .map(|k| {
                        if k > 0 {
                            acc += (k as f64).ln();
                        }
                        acc
                    })
                    .collect()
            }
            WeightFamily::UniformMoment => (0..count).map(|k| self.ln_c(k)).collect(),
        }
    }

    /// R = limsup c_k^{1/k}; infinite for the factorial family.
    pub fn radius(self) -> f64 {
        match self {
            WeightFamily::Factorial => f64::INFINITY,
            WeightFamily::UniformMoment => 1.0,
        }
    }

    /// c_k^{1/k}, whose limsup is the radius.
    pub fn root_estimate(self, k: usize) -> f64 {
        (self.ln_c(k) / k as f64).exp()
    }

    pub fn ln_density(self, x: f64) -> f64 {
        match self {
            WeightFamily::Factorial => -x,
            WeightFamily::UniformMoment => 0.0,
        }
    }

    pub fn ln_norm_sq(self, x: f64) -> f64 {
        match self {
            WeightFamily::Factorial => x,
            WeightFamily::UniformMoment => -2.0 * (1.0 - x).ln(),
        }
    }

    /// N²(x) = Σ x^k / c_k.
    pub fn norm_sq(self, x: f64) -> f64 {
        self.ln_norm_sq(x).exp()
    }

    /// τ(x) = N²(x) ρ(x).
    pub fn tau(self, x: f64) -> f64 {
        (self.ln_norm_sq(x) + self.ln_density(x)).exp()
    }

    pub fn check_domain(self, x: f64) -> Result<()> {
        if x >= 0.0 && x < self.radius() {
            Ok(())
        } else {
            Err(Error::Domain { x, radius: self.radius() })
        }
    }

    /// Gauss-Laguerre for the factorial family, Gauss-Legendre on [0, 1]
    /// for the uniform one.
    pub fn default_rule(self, nodes: usize) -> Result<QuadratureRule> {
        match self {
            WeightFamily::Factorial => QuadratureRule::gauss_laguerre(nodes),
            WeightFamily::UniformMoment => QuadratureRule::gauss_legendre(nodes, 0.0, 1.0),
        }
    }

    /// ∫₀^R ρ(x) x^k dx / c_k by the given rule, evaluated in log space.
    pub fn normalized_moment(self, rule: &QuadratureRule, k: usize) -> f64 {
        self.normalized_moments(rule, k + 1)[k]
    }

    /// Normalized moments for k = 0..count.
    pub fn normalized_moments(self, rule: &QuadratureRule, count: usize) -> Vec<f64> {
        let ln_c = self.ln_c_table(count);
        let mut out = vec![0.0; count];
        for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
            if w <= 0.0 || x >= self.radius() {
                continue;
            }
            let base = self.ln_density(x) - rule.ln_weight_function(x) + w.ln();
            let lx = x.ln();
            for (k, slot) in out.iter_mut().enumerate() {
                let power = if k == 0 { 0.0 } else { k as f64 * lx };
                *slot += (base + power - ln_c[k]).exp();
            }
        }
        out
    }
}

impl fmt::Display for WeightFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WeightFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        builtin_family(s)
    }
}

pub fn builtin_family(name: &str) -> Result<WeightFamily> {
    match name {
        "factorial" => Ok(WeightFamily::Factorial),
        "uniform_moment" => Ok(WeightFamily::UniformMoment),
        other => Err(Error::UnknownFamily(other.to_string())),
    }
}

fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// ln of the k-th probability p_k = x^k / (c_k N²(x)).
fn ln_term(family: WeightFamily, x: f64, k: usize, ln_c: f64) -> f64 {
    let power = if k == 0 { 0.0 } else { k as f64 * x.ln() };
    power - ln_c - family.ln_norm_sq(x)
}

/// Upper bound on Σ_{k > n_cut} x^k / (c_k N²(x)).
///
/// Terms past `n_cut` are summed explicitly until a geometric remainder
/// bound is negligible. Both built-in families have non-increasing ratios
/// p_{k+1}/p_k, so once a ratio r < 1 is seen the rest is at most
/// p·r/(1−r).
pub fn tail_mass(family: WeightFamily, x: f64, n_cut: usize) -> Result<f64> {
    family.check_domain(x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let ratio = |k: usize| (x.ln() + family.ln_c(k) - family.ln_c(k + 1)).exp();
    if ratio(n_cut) >= 1.0 {
        return Err(Error::BoundUnavailable { n_cut });
    }
    let mut k = n_cut + 1;
    let mut ln_c = family.ln_c(k);
    let mut sum = 0.0;
    loop {
        let p = ln_term(family, x, k, ln_c).exp();
        sum += p;
        let r = ratio(k);
        let bound = p * r / (1.0 - r);
        if bound <= 1e-6 * sum || p < f64::MIN_POSITIVE || k > n_cut + 100_000 {
            return Ok(sum + bound);
        }
        ln_c = family.ln_c(k + 1);
        k += 1;
    }
}

/// Smallest cut with tail mass below `tol`.
pub fn required_cutoff(family: WeightFamily, x: f64, tol: f64) -> Result<usize> {
    family.check_domain(x)?;
    let mut n = 0usize;
    loop {
        match tail_mass(family, x, n) {
            Ok(t) if t < tol => return Ok(n),
            Ok(_) | Err(Error::BoundUnavailable { .. }) => {}
            Err(e) => return Err(e),
        }
        n += 1;
        if n > 1_000_000 {
            return Err(Error::BoundUnavailable { n_cut: n });
        }
    }
}

/// Largest x (to bisection accuracy) at which the tail beyond `n_cut`
/// stays below `tol`.
pub fn max_safe_x(family: WeightFamily, n_cut: usize, tol: f64) -> f64 {
    let ok = |x: f64| matches!(tail_mass(family, x, n_cut), Ok(t) if t < tol);
    let mut lo = 0.0;
    let mut hi = family.radius().min(n_cut as f64 + 1.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// A GK family: weights, energies h_k and the embedding k ↦ |e_k⟩.
#[derive(Debug, Clone)]
pub struct GkFamilySpec {
    pub family: WeightFamily,
    pub energies: Vec<f64>,
    pub embedding: Vec<StateVector>,
    pub label: String,
    /// Photon number of the k = 0 level; converts a k cutoff to an N.
    pub photon_offset: usize,
}

impl GkFamilySpec {
    pub fn new(
        family: WeightFamily,
        energies: Vec<f64>,
        embedding: Vec<StateVector>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let label = label.into();
        if energies.len() != embedding.len() || energies.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "family {label}: {} energies for {} embedding vectors",
                energies.len(),
                embedding.len()
            )));
        }
        if let Some(i) = energies.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::NotIncreasing { family: label, index: i + 1 });
        }
        for i in 0..embedding.len() {
            for j in i..embedding.len() {
                let overlap = embedding[i].dotc(&embedding[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                if (overlap - C64::new(want, 0.0)).norm() > 1e-10 {
                    return Err(Error::NotOrthonormal { i, j, overlap: overlap.norm() });
                }
            }
        }
        Ok(Self { family, energies, embedding, label, photon_offset: 0 })
    }

    /// h_k = k embedded as the standard basis of C^count.
    pub fn canonical(family: WeightFamily, count: usize) -> Result<Self> {
        let energies = (0..count).map(|k| k as f64).collect();
        let embedding = (0..count)
            .map(|k| {
                let mut v = StateVector::zeros(count);
                v[k] = C64::new(1.0, 0.0);
                v
            })
            .collect();
        Self::new(family, energies, embedding, "canonical")
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.embedding[0].len()
    }

    /// Projector onto the span of the embedding.
    pub fn span_projector(&self) -> TruncatedOperator {
        let d = self.dim();
        self.embedding.iter().fold(TruncatedOperator::zeros(d, d), |acc, v| acc + v * v.adjoint())
    }

    /// x^{k/2} e^{−i h_k y} / (√c_k N(x)) for k < len.
    pub fn coefficients(&self, x: f64, y: f64) -> Result<Vec<C64>> {
        self.family.check_domain(x)?;
        if x == 0.0 {
            let mut c = vec![C64::new(0.0, 0.0); self.len()];
            c[0] = C64::from_polar(1.0, -self.energies[0] * y);
            return Ok(c);
        }
        let ln_c = self.family.ln_c_table(self.len());
        Ok(self
            .energies
            .iter()
            .enumerate()
            .map(|(k, &h)| {
                let amp = (0.5 * ln_term(self.family, x, k, ln_c[k])).exp();
                C64::from_polar(amp, -h * y)
            })
            .collect())
    }

    /// Tail mass beyond the representable levels.
    pub fn tail(&self, x: f64) -> Result<f64> {
        tail_mass(self.family, x, self.len() - 1)
    }
}

/// |x,y⟩ = N(x)^{−1} Σ_k x^{k/2} e^{−i h_k y} / √c_k |e_k⟩ on the truncated space.
///
/// Fails with `TailTooLarge` when the discarded mass reaches the
/// truncation tolerance; the error carries the photon cutoff that would
/// suffice.
pub fn gk_state(spec: &GkFamilySpec, x: f64, y: f64, trunc: &TruncationConfig) -> Result<StateVector> {
    spec.family.check_domain(x)?;
    if x > 0.0 {
        let tol = trunc.tail_tol();
        let tail = match spec.tail(x) {
            Ok(t) => t,
            Err(Error::BoundUnavailable { .. }) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        if tail >= tol {
            let required_n = required_cutoff(spec.family, x, tol)? + 1 + spec.photon_offset;
            return Err(Error::TailTooLarge { tail, tol, required_n });
        }
    }
    let coeffs = spec.coefficients(x, y)?;
    let mut v = StateVector::zeros(spec.dim());
    for (c, e) in coeffs.iter().zip(&spec.embedding) {
        if *c != C64::new(0.0, 0.0) {
            v += e * *c;
        }
    }
    Ok(v)
}

/// The J family over H₁ and the S family over H₂.
#[derive(Debug, Clone)]
pub struct JcFamilies {
    pub j: GkFamilySpec,
    pub s: GkFamilySpec,
    pub k0: usize,
}

impl JcFamilies {
    /// Identity membership needs both families on one finite radius.
    pub fn shared_radius(&self) -> Option<f64> {
        let (r1, r2) = (self.j.family.radius(), self.s.family.radius());
        (r1 == r2).then_some(r1)
    }
}

/// J: h_k = E_{k+1,+}, k ↦ |k+1,+⟩. S: h_k = E_{k+K₀,−}, k ↦ |k+K₀,−⟩.
pub fn jc_families(
    params: &JcParams,
    k0: usize,
    family1: WeightFamily,
    family2: WeightFamily,
    trunc: &TruncationConfig,
) -> Result<JcFamilies> {
    let n = trunc.n_fock();
    if k0 < minimal_k0(1) || k0 + 1 >= n {
        return Err(Error::InvalidParameter(format!("K0 = {k0} needs 3 <= K0 < N - 1 = {}", n - 1)));
    }
    let build = |levels: Vec<Level>, family, label: &str, offset| -> Result<GkFamilySpec> {
        let energies: Vec<f64> = levels.iter().map(|&l| eigenenergy(params, l)).collect::<Result<_>>()?;
        let embedding = levels.iter().map(|&l| dressed_vector(params, l, trunc)).collect::<Result<_>>()?;
        let mut spec = GkFamilySpec::new(family, energies, embedding, label)?;
        spec.photon_offset = offset;
        Ok(spec)
    };
    let j = build((1..=n).map(Level::plus).collect(), family1, "J", 1)?;
    let s = build((k0..=n).map(Level::minus).collect(), family2, "S", k0)?;
    Ok(JcFamilies { j, s, k0 })
}

/// Outcome of a resolution-of-identity check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolutionReport {
    /// max_k |∫ρ x^k dx / c_k − 1| over tail-safe k.
    pub max_diag_residual: f64,
    /// max entrywise |R − P| of the reconstructed projector.
    pub max_projector_residual: f64,
    pub safe_levels: usize,
}

/// ∫∫ |x,y⟩⟨x,y| τ(x) dx dμ(y) on the truncated space, with the
/// normalized moments it is built from.
///
/// The Bohr mean over y is taken analytically: with distinct h_k the
/// off-diagonal phases average out and the diagonal reduces to the
/// normalized moment. Levels beyond the rule's exactness degree are
/// left out.
pub fn resolution_operator(spec: &GkFamilySpec, rule: &QuadratureRule) -> Result<(TruncatedOperator, Vec<f64>)> {
    if rule.upper_bound() > spec.family.radius() {
        return Err(Error::InvalidParameter(format!(
            "quadrature support exceeds radius {}",
            spec.family.radius()
        )));
    }
    let safe = spec.len().min(rule.degree() + 1);
    // τ(x)|x,0⟩⟨x,0| in the k basis has entries ρ(x) x^{(j+k)/2} / √(c_j c_k);
    // only its diagonal survives the mean.
    let moments = spec.family.normalized_moments(rule, safe);
    let mut gram = TruncatedOperator::zeros(safe, safe);
    for (k, m) in moments.iter().enumerate() {
        gram[(k, k)] = C64::new(*m, 0.0);
    }
    let mean = bohr_mean_diagonal(&spec.energies[..safe], &gram)?;
    let d = spec.dim();
    let mut recon = TruncatedOperator::zeros(d, d);
    for k in 0..safe {
        let e = &spec.embedding[k];
        recon += (e * e.adjoint()) * mean[(k, k)];
    }
    Ok((recon, moments))
}

/// Compare the reconstructed resolution with the projector onto the
/// tail-safe part of the family's span.
pub fn verify_resolution(spec: &GkFamilySpec, rule: &QuadratureRule) -> Result<ResolutionReport> {
    let (recon, moments) = resolution_operator(spec, rule)?;
    let d = spec.dim();
    let target = spec.embedding[..moments.len()]
        .iter()
        .fold(TruncatedOperator::zeros(d, d), |acc, e| acc + e * e.adjoint());
    Ok(ResolutionReport {
        max_diag_residual: moments.iter().map(|m| (m - 1.0).abs()).fold(0.0, f64::max),
        max_projector_residual: max_abs_diff(&recon, &target),
        safe_levels: moments.len(),
    })
}

/// |⟨x,t| U_t |x,0⟩|².
pub fn verify_temporal_stability(
    spec: &GkFamilySpec,
    params: &JcParams,
    x: f64,
    t: f64,
    trunc: &TruncationConfig,
) -> Result<f64> {
    let start = gk_state(spec, x, 0.0, trunc)?;
    let moved = gk_state(spec, x, t, trunc)?;
    let u = evolution_operator(params, t, trunc);
    Ok(moved.dotc(&(u * start)).norm_sqr())
}

/// ⟨x,y|G|x,y⟩ with a flag telling whether the action identity is
/// guaranteed for this family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActionValue {
    pub value: f64,
    pub guaranteed: bool,
}

/// Σ_k p_k h_k over the family's levels. The identity ⟨G⟩ = x is
/// guaranteed when h₀ = 0 and c_k / c_{k−1} = h_k.
pub fn verify_action_identity(spec: &GkFamilySpec, x: f64) -> Result<ActionValue> {
    spec.family.check_domain(x)?;
    let coeffs = spec.coefficients(x, 0.0)?;
    let value = coeffs.iter().zip(&spec.energies).map(|(c, h)| c.norm_sqr() * h).sum();
    let ln_c = spec.family.ln_c_table(spec.len());
    let guaranteed = spec.energies[0] == 0.0
        && (1..spec.len()).all(|k| {
            let ratio = (ln_c[k] - ln_c[k - 1]).exp();
            (ratio - spec.energies[k]).abs() <= 1e-12 * ratio.max(1.0)
        });
    Ok(ActionValue { value, guaranteed })
}

/// Per-(x, y) coefficient record of a dump.
#[derive(Debug, Clone, Serialize)]
pub struct CoefficientRecord {
    pub x: f64,
    pub y: f64,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

/// Serializable description of a family and sampled coefficients. An
/// infinite radius is written as null.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyDump {
    pub family: String,
    #[serde(rename = "R")]
    pub radius: Option<f64>,
    pub h: Vec<f64>,
    pub coefficients: Vec<CoefficientRecord>,
}

pub fn dump_family(spec: &GkFamilySpec, points: &[(f64, f64)]) -> Result<FamilyDump> {
    let coefficients = points
        .iter()
        .map(|&(x, y)| {
            let c = spec.coefficients(x, y)?;
            Ok(CoefficientRecord { x, y, re: c.iter().map(|z| z.re).collect(), im: c.iter().map(|z| z.im).collect() })
        })
        .collect::<Result<_>>()?;
    let r = spec.family.radius();
    Ok(FamilyDump {
        family: spec.family.name().to_string(),
        radius: r.is_finite().then_some(r),
        h: spec.energies.clone(),
        coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn haroche() -> JcParams {
        JcParams::new(2.0 * PI * 51.1e9, 2.0 * PI * 51.1e9, 2.0 * PI * 47e3).unwrap()
    }

    #[test]
    fn builtin_family_examples() {
        let f = builtin_family("factorial").unwrap();
        assert!((f.norm_sq(2.0) - 7.38905609893065).abs() < 1e-12);
        assert_eq!(f.tau(3.0), 1.0);
        let u = builtin_family("uniform_moment").unwrap();
        assert!((u.c(3) - 0.25).abs() < 1e-15);
        assert!((u.norm_sq(0.5) - 4.0).abs() < 1e-14);
        assert!((u.tau(0.5) - 4.0).abs() < 1e-14);
        assert_eq!(builtin_family("gaussian").unwrap_err(), Error::UnknownFamily("gaussian".into()));
        assert_eq!("uniform_moment".parse::<WeightFamily>().unwrap(), u);
    }

    #[test]
    fn series_matches_closed_form_norm() {
        for fam in WeightFamily::ALL {
            for x in [0.1, 0.4, 0.9] {
                let s: f64 = (0..2000).map(|k| (ln_term(fam, x, k, fam.ln_c(k))).exp()).sum();
                assert!((s - 1.0).abs() < 1e-12, "{fam} {x}: {s}");
            }
        }
    }

    #[test]
    fn radius_from_roots() {
        let u = WeightFamily::UniformMoment;
        assert!((u.root_estimate(2000) - 1.0).abs() < 5e-3);
        let f = WeightFamily::Factorial;
        assert!(f.root_estimate(200) > 50.0);
        assert!(f.root_estimate(400) > f.root_estimate(200));
    }

    #[test]
    fn moment_identity() {
        for fam in WeightFamily::ALL {
            let rule = fam.default_rule(200).unwrap();
            for (k, m) in fam.normalized_moments(&rule, 61).iter().enumerate() {
                assert!((m - 1.0).abs() < 1e-8, "{fam} k={k}: {m}");
            }
        }
        let f = WeightFamily::Factorial;
        assert!((f.normalized_moment(&f.default_rule(64).unwrap(), 5) - 1.0).abs() < 1e-13);
        let u = WeightFamily::UniformMoment;
        assert!((u.normalized_moment(&u.default_rule(8).unwrap(), 7) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tail_mass_examples() {
        assert_eq!(tail_mass(WeightFamily::Factorial, 0.0, 5).unwrap(), 0.0);
        let t = tail_mass(WeightFamily::Factorial, 1.0, 20).unwrap();
        assert!(t > 0.0 && t < 1e-18);
        let t = tail_mass(WeightFamily::UniformMoment, 0.5, 60).unwrap();
        // geometric oracle Σ_{k>60} (k+1) 0.5^k · 0.25
        let oracle: f64 = (61..400).map(|k| (k + 1) as f64 * 0.5f64.powi(k) * 0.25).sum();
        assert!(t >= oracle && t < 1.01 * oracle && t < 1e-15);
        assert!(matches!(tail_mass(WeightFamily::Factorial, 30.0, 10), Err(Error::BoundUnavailable { n_cut: 10 })));
        assert!(matches!(tail_mass(WeightFamily::UniformMoment, 1.0, 10), Err(Error::Domain { .. })));
    }

    #[test]
    fn safe_range() {
        let x = max_safe_x(WeightFamily::UniformMoment, 57, 1e-10);
        assert!(x > 0.55 && x < 0.65, "{x}");
        assert!(tail_mass(WeightFamily::UniformMoment, x, 57).unwrap() < 1e-10);
        let x = max_safe_x(WeightFamily::Factorial, 59, 1e-10);
        assert!(x > 15.0 && tail_mass(WeightFamily::Factorial, x, 59).unwrap() < 1e-10);
    }

    #[test]
    fn canonical_state_examples() {
        let trunc = TruncationConfig::with_cutoff(40).unwrap();
        let spec = GkFamilySpec::canonical(WeightFamily::Factorial, 40).unwrap();
        let v = gk_state(&spec, 0.0, 1.3, &trunc).unwrap();
        assert!((v[0].norm() - 1.0).abs() < 1e-15 && v.iter().skip(1).all(|c| c.norm() == 0.0));

        let v = gk_state(&spec, 1.0, 0.0, &trunc).unwrap();
        for k in 0..10 {
            let want = (-0.5f64).exp() / ln_factorial(k).exp().sqrt();
            assert!((v[k].re - want).abs() < 1e-15 && v[k].im == 0.0);
        }
        assert!((v.norm_squared() - 1.0).abs() < trunc.tail_tol());

        match gk_state(&spec, 20.0, 0.0, &trunc) {
            Err(Error::TailTooLarge { required_n, .. }) => assert!(required_n > 40),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn action_identity() {
        let spec = GkFamilySpec::canonical(WeightFamily::Factorial, 80).unwrap();
        let a = verify_action_identity(&spec, 2.0).unwrap();
        assert!(a.guaranteed && (a.value - 2.0).abs() < 1e-10);
        assert_eq!(verify_action_identity(&spec, 0.0).unwrap().value, 0.0);
        let uni = GkFamilySpec::canonical(WeightFamily::UniformMoment, 80).unwrap();
        assert!(!verify_action_identity(&uni, 0.3).unwrap().guaranteed);

        let trunc = TruncationConfig::with_cutoff(30).unwrap();
        let p = JcParams::new(1.0, 1.0, 0.2).unwrap();
        let fams = jc_families(&p, 3, WeightFamily::Factorial, WeightFamily::Factorial, &trunc).unwrap();
        let a = verify_action_identity(&fams.j, 1.0).unwrap();
        assert!(!a.guaranteed);
        assert!(a.value > 0.0);
    }

    #[test]
    fn jc_family_examples() {
        let trunc = TruncationConfig::with_cutoff(20).unwrap();
        let p = haroche();
        let f = jc_families(&p, 3, WeightFamily::Factorial, WeightFamily::UniformMoment, &trunc).unwrap();
        assert_eq!(f.j.energies[0], eigenenergy(&p, Level::plus(1)).unwrap());
        assert_eq!(f.s.embedding[0], dressed_vector(&p, Level::minus(3), &trunc).unwrap());
        assert_eq!((f.j.len(), f.s.len()), (20, 18));
        assert_eq!(f.shared_radius(), None);

        let strong = JcParams::new(1.0, 1.0, 8.0).unwrap();
        match jc_families(&strong, 3, WeightFamily::Factorial, WeightFamily::Factorial, &trunc) {
            Err(Error::NotIncreasing { family, index }) => assert_eq!((family.as_str(), index), ("S", 1)),
            other => panic!("{other:?}"),
        }
        assert!(jc_families(&strong, 4, WeightFamily::Factorial, WeightFamily::Factorial, &trunc).is_ok());
    }

    #[test]
    fn resolution_on_jc_families() {
        let trunc = TruncationConfig::with_cutoff(60).unwrap();
        for (f1, f2) in [
            (WeightFamily::Factorial, WeightFamily::Factorial),
            (WeightFamily::UniformMoment, WeightFamily::UniformMoment),
        ] {
            let fams = jc_families(&haroche(), 3, f1, f2, &trunc).unwrap();
            for spec in [&fams.j, &fams.s] {
                let rule = spec.family.default_rule(200).unwrap();
                let r = verify_resolution(spec, &rule).unwrap();
                assert_eq!(r.safe_levels, spec.len());
                assert!(r.max_diag_residual < 1e-8 && r.max_projector_residual < 1e-6, "{r:?}");
            }
        }
    }

    #[test]
    fn temporal_stability() {
        let trunc = TruncationConfig::with_cutoff(60).unwrap();
        let p = haroche();
        let fams = jc_families(&p, 3, WeightFamily::Factorial, WeightFamily::UniformMoment, &trunc).unwrap();
        assert!((verify_temporal_stability(&fams.j, &p, 1.0, 0.0, &trunc).unwrap() - 1.0).abs() < 1e-10);
        assert!((verify_temporal_stability(&fams.s, &p, 0.0, 2.5, &trunc).unwrap() - 1.0).abs() < 1e-12);
        let f = verify_temporal_stability(&fams.j, &p, 1.0, 0.37, &trunc).unwrap();
        assert!((f - 1.0).abs() < 1e-9, "{f}");
        let f = verify_temporal_stability(&fams.s, &p, 0.6, 1e-6, &trunc).unwrap();
        assert!((f - 1.0).abs() < 1e-9, "{f}");
    }

    #[test]
    fn dump_schema() {
        let spec = GkFamilySpec::canonical(WeightFamily::Factorial, 4).unwrap();
        let dump = dump_family(&spec, &[(0.5, 0.0)]).unwrap();
        let json = serde_json::to_value(&dump).unwrap();
        assert_eq!(json["family"], "factorial");
        assert!(json["R"].is_null());
        assert_eq!(json["h"].as_array().unwrap().len(), 4);
        assert_eq!(json["coefficients"][0]["re"].as_array().unwrap().len(), 4);
        let uni = GkFamilySpec::canonical(WeightFamily::UniformMoment, 4).unwrap();
        assert_eq!(serde_json::to_value(dump_family(&uni, &[]).unwrap()).unwrap()["R"], 1.0);
    }
}
