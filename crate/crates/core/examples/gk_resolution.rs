//! Resolution of identity and temporal stability for the two coherent-state
//! families over H1 and H2.

use jcgraph::gk_states::{jc_families, max_safe_x, verify_resolution, verify_temporal_stability, WeightFamily};
use jcgraph::hilbert::TruncationConfig;
use jcgraph::jc_spectrum::JcParams;

fn main() -> jcgraph::Result<()> {
    let params = JcParams::new(1.0, 1.0, 0.5)?;
    let trunc = TruncationConfig::with_cutoff(60)?;

    for fam in WeightFamily::ALL {
        let fams = jc_families(&params, 3, fam, fam, &trunc)?;
        let rule = fam.default_rule(200)?;
        for spec in [&fams.j, &fams.s] {
            let r = verify_resolution(spec, &rule)?;
            let x = 0.5 * max_safe_x(fam, spec.len() - 1, trunc.tail_tol());
            let f = verify_temporal_stability(spec, &params, x, 2.7, &trunc)?;
            println!(
                "{fam:>14} {}: moments {:.1e}, projector {:.1e}, stability at x={x:.3} 1-F = {:.1e}",
                spec.label,
                r.max_diag_residual,
                r.max_projector_residual,
                1.0 - f
            );
        }
    }
    Ok(())
}
