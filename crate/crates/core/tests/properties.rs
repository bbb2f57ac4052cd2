use jcgraph::code_construction::{
    decompose, minimal_k0, minimal_m0, minimal_m0_from_rates, s_sequence, SweepRow,
};
use jcgraph::gk_states::{gk_state, jc_families, max_safe_x, tail_mass, GkFamilySpec, WeightFamily};
use jcgraph::graph_verify::{
    channel_apply, generator, knill_laflamme_check, q_operator, random_code_state, verify_anticlique, Channel,
};
use jcgraph::hilbert::{
    bohr_mean_diagonal, conjugate, finite_time_mean, hermitian_eigenvalues, max_abs, max_abs_diff, orthonormalize,
    outer, projector_defect, projector_onto, trace, unitarity_defect, Qubit, StateVector, TruncatedOperator,
    TruncationConfig, C64,
};
use jcgraph::jc_spectrum::{evolution_operator, spectrum_diagnostics, JcParams};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params() -> impl Strategy<Value = JcParams> {
    (0.2f64..3.0, 0.2f64..3.0, 0.0f64..4.0).prop_map(|(wf, ws, k)| JcParams::new(wf, ws, k).unwrap())
}

fn random_state(dim: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let v = StateVector::from_fn(dim, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let n = v.norm();
    v / C64::new(n, 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn index_label_roundtrip(n_fock in 2usize..40, n in 0usize..40, e in any::<bool>()) {
        let trunc = TruncationConfig::with_cutoff(n_fock).unwrap();
        let s = if e { Qubit::E } else { Qubit::G };
        match trunc.index(n, s) {
            Ok(i) => {
                prop_assert!(n <= n_fock);
                prop_assert_eq!(trunc.label(i), (n, s));
            }
            Err(_) => prop_assert!(n > n_fock),
        }
    }

    #[test]
    fn projectors_from_random_frames(seed in any::<u64>(), rank in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<StateVector> = (0..rank).map(|_| random_state(12, &mut rng)).collect();
        let frame = orthonormalize(&raw, 1e-8);
        let p = projector_onto(12, &frame).unwrap();
        prop_assert!(projector_defect(&p) < 1e-12);
        prop_assert!((trace(&p).re - frame.len() as f64).abs() < 1e-12);
    }

    #[test]
    fn dressed_spectrum_is_exact(p in params(), n in 5usize..40) {
        let trunc = TruncationConfig::with_cutoff(n).unwrap();
        let d = spectrum_diagnostics(&p, &trunc).unwrap();
        prop_assert!(d.max_eigen_residual < 1e-10 * p.omega_f().max(p.kappa()).max(1.0) * n as f64);
        prop_assert!(d.gram_deviation < 1e-12);
        prop_assert!(d.min_j_gap > 0.0);
    }

    #[test]
    fn evolution_group_law(p in params(), s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let trunc = TruncationConfig::with_cutoff(12).unwrap();
        let us = evolution_operator(&p, s, &trunc);
        let ut = evolution_operator(&p, t, &trunc);
        prop_assert!(unitarity_defect(&us) < 1e-12);
        prop_assert!(max_abs_diff(&(&us * &ut), &evolution_operator(&p, s + t, &trunc)) < 1e-11);
    }

    #[test]
    fn monotone_certificate(p in params()) {
        let m0 = minimal_m0(&p);
        for k in m0..80 {
            prop_assert!(s_sequence(&p, k + 1) > s_sequence(&p, k));
        }
        if m0 > 1 {
            prop_assert!(s_sequence(&p, m0) <= s_sequence(&p, m0 - 1));
        }
        prop_assert!(minimal_k0(m0) >= 3);
    }

    #[test]
    fn rate_and_frequency_forms_agree(gf in 0.05f64..20.0, gs in 0.05f64..20.0) {
        let p = JcParams::from_rates(gf, gs, 1.0).unwrap();
        prop_assert_eq!(minimal_m0(&p), minimal_m0_from_rates(gf, gs));
        let row = SweepRow::at(gf, gs);
        prop_assert!(row.d_min >= 2);
        prop_assert!(row.m0 <= minimal_m0_from_rates(gf, gf));
    }

    #[test]
    fn gk_norm_defect_bounded_by_tail(x in 0.0f64..0.55, y in -5.0f64..5.0) {
        let trunc = TruncationConfig::with_cutoff(60).unwrap();
        for fam in WeightFamily::ALL {
            let spec = GkFamilySpec::canonical(fam, 61).unwrap();
            let v = gk_state(&spec, x, y, &trunc).unwrap();
            let tail = tail_mass(fam, x, 60).unwrap();
            prop_assert!(1.0 - v.norm_squared() <= tail + 1e-15);
        }
    }

    #[test]
    fn gk_continuity_step_halving(x in 0.1f64..0.5, y in -2.0f64..2.0) {
        let trunc = TruncationConfig::with_cutoff(60).unwrap();
        for fam in WeightFamily::ALL {
            let spec = GkFamilySpec::canonical(fam, 61).unwrap();
            let base = gk_state(&spec, x, y, &trunc).unwrap();
            let dist = |h: f64| (gk_state(&spec, x + h, y + h, &trunc).unwrap() - &base).norm();
            let ratio = dist(1e-3) / dist(5e-4);
            prop_assert!((1.5..=2.5).contains(&ratio), "{fam} ratio {ratio}");
        }
    }

    #[test]
    fn channel_preserves_trace_and_positivity(seed in any::<u64>(), t in 0.0f64..5.0, x in 0.0f64..0.4) {
        let p = JcParams::new(1.0, 0.9, 0.3).unwrap();
        let trunc = TruncationConfig::with_cutoff(40).unwrap();
        let code = decompose(&p, 3, &trunc).unwrap();
        let fams = jc_families(&p, 3, WeightFamily::UniformMoment, WeightFamily::UniformMoment, &trunc).unwrap();
        let ch = Channel::from_families(&p, &code, &fams, x, t, &trunc).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_state(trunc.dim(), &mut rng);
        let b = random_state(trunc.dim(), &mut rng);
        let rho = outer(&a, &a) * C64::new(0.3, 0.0) + outer(&b, &b) * C64::new(0.7, 0.0);
        let out = channel_apply(&ch, &rho).unwrap();
        prop_assert!((trace(&out) - C64::new(1.0, 0.0)).norm() < 1e-10);
        prop_assert!(hermitian_eigenvalues(&out)[0] > -1e-9);
    }

    #[test]
    fn orbit_covariance(j in 1u8..=3, x in 0.0f64..0.4, t in -4.0f64..4.0) {
        let p = JcParams::new(1.0, 1.2, 0.5).unwrap();
        let trunc = TruncationConfig::with_cutoff(40).unwrap();
        let code = decompose(&p, 3, &trunc).unwrap();
        let fams = jc_families(&p, 3, WeightFamily::UniformMoment, WeightFamily::UniformMoment, &trunc).unwrap();
        let g0 = generator(&p, &code, &fams, j, x, 0.0, &trunc).unwrap();
        let gt = generator(&p, &code, &fams, j, x, t, &trunc).unwrap();
        let u = evolution_operator(&p, t, &trunc);
        prop_assert!(max_abs_diff(&gt.operator, &conjugate(&u, &g0.operator).unwrap()) < 1e-12);
        prop_assert!(projector_defect(&gt.operator) < 1e-9);
    }

    #[test]
    fn q_operator_positive(x in 0.0f64..0.4, seed in any::<u64>()) {
        let p = JcParams::new(1.0, 1.0, 0.7).unwrap();
        let trunc = TruncationConfig::with_cutoff(40).unwrap();
        let code = decompose(&p, 3, &trunc).unwrap();
        let fams = jc_families(&p, 3, WeightFamily::UniformMoment, WeightFamily::UniformMoment, &trunc).unwrap();
        let q = q_operator(x, &fams, &code, &trunc).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_state(trunc.dim(), &mut rng);
        prop_assert!(v.dotc(&(&q * &v)).re >= -1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sub_projectors_of_h3_are_anticliques(seed in any::<u64>()) {
        let p = JcParams::new(1.0, 1.0, 2.0).unwrap();
        let trunc = TruncationConfig::with_cutoff(30).unwrap();
        let k0 = minimal_k0(minimal_m0(&p)) + 1;
        let code = decompose(&p, k0, &trunc).unwrap();
        let fams = jc_families(&p, k0, WeightFamily::Factorial, WeightFamily::Factorial, &trunc).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        // rank-2 subspace of H₃ from random combinations of its basis
        let mix = |rng: &mut ChaCha8Rng| {
            code.h3_basis.iter().fold(StateVector::zeros(trunc.dim()), |acc, b| {
                acc + b * C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            })
        };
        let frame = orthonormalize(&[mix(&mut rng), mix(&mut rng)], 1e-8);
        let sub = projector_onto(trunc.dim(), &frame).unwrap();
        prop_assert!(max_abs_diff(&(&code.p3 * &sub), &sub) < 1e-12);

        let x_max = max_safe_x(WeightFamily::Factorial, fams.s.len() - 1, 1e-10);
        let samples: Vec<(String, TruncatedOperator)> = (0..6)
            .map(|i| {
                let j = 1 + (i % 3) as u8;
                let g = generator(&p, &code, &fams, j, rng.random_range(0.0..x_max), rng.random_range(0.0..20.0), &trunc).unwrap();
                (format!("g{i}"), g.operator)
            })
            .collect();
        let report = verify_anticlique(&sub, &samples, 1e-9).unwrap();
        prop_assert!(report.overall_pass(), "{:?}", report);
    }

    #[test]
    fn code_states_are_fixed_points(seed in any::<u64>(), t in 0.0f64..10.0, x in 0.0f64..3.0) {
        let p = JcParams::new(1.0, 0.8, 0.4).unwrap();
        let trunc = TruncationConfig::with_cutoff(40).unwrap();
        let code = decompose(&p, 3, &trunc).unwrap();
        let fams = jc_families(&p, 3, WeightFamily::Factorial, WeightFamily::Factorial, &trunc).unwrap();
        let ch = Channel::from_families(&p, &code, &fams, x, t, &trunc).unwrap();
        let psi = random_code_state(&code, &mut ChaCha8Rng::seed_from_u64(seed));
        let rho = outer(&psi, &psi);
        prop_assert!(max_abs_diff(&channel_apply(&ch, &rho).unwrap(), &rho) < 1e-12);
    }
}

#[test]
fn knill_laflamme_on_random_rank_one_fails() {
    let trunc = TruncationConfig::with_cutoff(6).unwrap();
    let p = projector_onto(
        trunc.dim(),
        &[trunc.basis_vector(0, Qubit::G).unwrap(), trunc.basis_vector(0, Qubit::E).unwrap()],
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let v = random_state(trunc.dim(), &mut rng);
        let report = knill_laflamme_check(&p, &[("v".into(), outer(&v, &v))], 1e-9);
        assert!(!report.overall_pass());
    }
}

/// Distinct energies: the finite-time mean approaches the diagonal and the
/// error envelope shrinks like 1/T.
#[test]
fn finite_time_mean_converges_like_inverse_time() {
    let h = [0.0, 0.7, 1.9, 2.6];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let m = TruncatedOperator::from_fn(4, 4, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let m = &m + m.adjoint();
    let exact = bohr_mean_diagonal(&h, &m).unwrap();
    let orbit = |y: f64| {
        TruncatedOperator::from_fn(4, 4, |a, b| m[(a, b)] * C64::from_polar(1.0, -(h[a] - h[b]) * y))
    };
    let envelope = |t0: f64| {
        (0..=20)
            .map(|i| {
                let t = t0 * (1.0 + i as f64 / 20.0);
                let mean = finite_time_mean(orbit, t, (t * 40.0) as usize + 1).unwrap();
                max_abs(&(mean - &exact))
            })
            .fold(0.0, f64::max)
    };
    let (near, far) = (envelope(50.0), envelope(500.0));
    let ratio = near / far;
    assert!((5.0..20.0).contains(&ratio), "envelope ratio {ratio}");
}
