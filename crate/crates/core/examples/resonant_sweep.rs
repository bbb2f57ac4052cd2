//! D_min along the resonant line γ_s = γ_f, printed at every jump.
//!
//! Pass a path to also write the full CSV.

use jcgraph::code_construction::{resonant_sweep, write_sweep_csv, GridAxis};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rows = resonant_sweep(&GridAxis::new(0.1, 16.0, 1590)?);
    let mut last = 0;
    for r in &rows {
        if r.d_min != last {
            println!("gamma_f = {:>6.2}  M0 = {:>2}  D_min = {:>2}", r.gamma_f, r.m0, r.d_min);
            last = r.d_min;
        }
    }
    println!("first jump expected at 2(2+sqrt 3) = {:.4}", 2.0 * (2.0 + 3f64.sqrt()));

    if let Some(path) = std::env::args().nth(1) {
        write_sweep_csv(&rows, std::fs::File::create(&path)?)?;
        println!("wrote {path}");
    }
    Ok(())
}
