//! Minimal code dimension for the cavity-QED parameters of a Rydberg atom
//! in a microwave cavity: ω_f = ω_s = 2π·51.1 GHz, κ = 2π·47 kHz.

use std::f64::consts::TAU;

use jcgraph::code_construction::{decompose, minimal_k0, minimal_m0};
use jcgraph::hilbert::TruncationConfig;
use jcgraph::jc_spectrum::JcParams;

fn main() -> jcgraph::Result<()> {
    let params = JcParams::new(TAU * 51.1e9, TAU * 51.1e9, TAU * 47e3)?;
    println!("gamma_f = {:.3e}, gamma_s = {:.3e}", params.gamma_f(), params.gamma_s());

    let m0 = minimal_m0(&params);
    let k0 = minimal_k0(m0);
    println!("M0 = {m0}, K0* = {k0}, D_min = {}", k0 - 1);

    let trunc = TruncationConfig::with_cutoff(20)?;
    let code = decompose(&params, k0, &trunc)?;
    println!("dim H3 = {}, code dimension = {}", code.dim_h3(), code.code_dim);
    for (i, v) in code.code_basis().iter().enumerate() {
        let support: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > 1e-12)
            .map(|(idx, c)| {
                let (n, s) = trunc.label(idx);
                format!("{:+.4}|{n},{s:?}>", c.re)
            })
            .collect();
        println!("  code[{i}] = {}", support.join(" "));
    }
    Ok(())
}
