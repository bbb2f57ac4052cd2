//! Dressed energies and eigen-residuals of the truncated Hamiltonian.

use jcgraph::code_construction::{minimal_m0, s_sequence};
use jcgraph::hilbert::TruncationConfig;
use jcgraph::jc_spectrum::{eigenenergy, mixing_angle, spectrum_diagnostics, JcParams, Level};

fn main() -> jcgraph::Result<()> {
    let params = JcParams::new(1.0, 0.9, 6.0)?;
    let trunc = TruncationConfig::with_cutoff(40)?;

    println!(" n   theta_n    E(n,+)      E(n,-)");
    for n in 1..=8 {
        println!(
            "{n:>2}  {:8.5}  {:10.5}  {:10.5}",
            mixing_angle(&params, n)?,
            eigenenergy(&params, Level::plus(n))?,
            eigenenergy(&params, Level::minus(n))?
        );
    }

    let m0 = minimal_m0(&params);
    println!("lower branch S_k increases strictly from k = {m0}:");
    for k in 0..=m0 + 2 {
        println!("  S_{k} = {:.5}", s_sequence(&params, k));
    }

    let d = spectrum_diagnostics(&params, &trunc)?;
    println!("max |Hv - Ev| = {:.2e}", d.max_eigen_residual);
    println!("max |V*V - I| = {:.2e}", d.gram_deviation);
    println!("min J gap     = {:.4}", d.min_j_gap);
    Ok(())
}
