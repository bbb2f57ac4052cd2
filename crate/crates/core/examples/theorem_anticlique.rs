//! Identity membership and the anticlique property of P_H3 for the graph
//! spanned by the orbits U_t P_x^j U_t*.

use jcgraph::code_construction::{decompose, minimal_k0, minimal_m0};
use jcgraph::gk_states::{jc_families, WeightFamily};
use jcgraph::graph_verify::{generator, random_combinations, verify_anticlique, verify_identity_membership};
use jcgraph::hilbert::{QuadratureRule, TruncationConfig};
use jcgraph::jc_spectrum::JcParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> jcgraph::Result<()> {
    let params = JcParams::from_rates(8.0, 8.0, 1.0)?;
    let k0 = minimal_k0(minimal_m0(&params));
    let trunc = TruncationConfig::with_cutoff(50)?;
    let code = decompose(&params, k0, &trunc)?;
    let fams = jc_families(&params, k0, WeightFamily::UniformMoment, WeightFamily::UniformMoment, &trunc)?;
    println!("K0 = {k0}, dim H3 = {}", code.dim_h3());

    let rule = QuadratureRule::gauss_legendre(200, 0.0, 1.0)?;
    let m = verify_identity_membership(&code, &fams, &rule, &trunc)?;
    println!("identity reconstruction: max residual {:.2e} (H3 block {:.2e})", m.residual, m.h3_residual);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let gens = (0..60)
        .map(|i| generator(&params, &code, &fams, 1 + (i % 3) as u8, rng.random_range(0.0..0.5), rng.random_range(0.0..50.0), &trunc))
        .collect::<jcgraph::Result<Vec<_>>>()?;
    let mut samples: Vec<_> = gens.iter().enumerate().map(|(i, g)| (format!("j={} #{i}", g.j), g.operator.clone())).collect();
    samples.extend(random_combinations(&gens, 10, &mut rng));

    let report = verify_anticlique(&code.p3, &samples, 1e-8)?;
    println!("anticlique: {} checks, max residual {:.2e}, pass = {}", report.checks.len(), report.max_residual(), report.overall_pass());
    for c in report.checks.iter().take(4) {
        let a = c.alpha.unwrap_or_default();
        println!("  {:<12} alpha = {:+.3}{:+.3}i", c.name, a.re, a.im);
    }
    Ok(())
}
