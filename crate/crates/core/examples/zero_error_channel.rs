//! Send code states through the projective channel built from one pair of
//! coherent-state projectors, then a state with a component outside the code.

use std::f64::consts::TAU;

use jcgraph::code_construction::decompose;
use jcgraph::gk_states::{jc_families, WeightFamily};
use jcgraph::graph_verify::{leaked_state, random_code_state, transmit_demo};
use jcgraph::hilbert::{outer, TruncationConfig};
use jcgraph::jc_spectrum::JcParams;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> jcgraph::Result<()> {
    let params = JcParams::new(TAU * 51.1e9, TAU * 51.1e9, TAU * 47e3)?;
    let trunc = TruncationConfig::with_cutoff(60)?;
    let code = decompose(&params, 3, &trunc)?;
    let fams = jc_families(&params, 3, WeightFamily::Factorial, WeightFamily::Factorial, &trunc)?;
    let (x, t) = (0.7, 1e-3);

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for i in 0..5 {
        let psi = random_code_state(&code, &mut rng);
        let out = transmit_demo(&params, &code, &fams, x, t, &outer(&psi, &psi), false, &trunc)?;
        println!("code state {i}: fidelity {:.12}, trace error {:.1e}", out.fidelity, out.trace_error);
    }

    let psi = random_code_state(&code, &mut rng);
    for eps in [0.01, 0.1, 0.5] {
        let leak = leaked_state(&psi, &params, eps, &trunc)?;
        let out = transmit_demo(&params, &code, &fams, x, t, &outer(&leak, &leak), true, &trunc)?;
        println!("leak weight {eps:>4}: fidelity {:.6}", out.fidelity);
    }
    Ok(())
}
