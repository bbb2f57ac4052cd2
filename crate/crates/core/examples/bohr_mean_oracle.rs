//! Brute-force time average of an orbit against the analytic Bohr mean.

use jcgraph::hilbert::{bohr_mean_diagonal, finite_time_mean, max_abs_diff, TruncatedOperator, C64};

fn main() -> jcgraph::Result<()> {
    let h = [-0.4, 0.31, 0.78, 1.52, 2.05];
    let m = TruncatedOperator::from_fn(5, 5, |a, b| C64::new(1.0 / (1.0 + a as f64 + b as f64), 0.0));
    let exact = bohr_mean_diagonal(&h, &m)?;
    let orbit = |y: f64| TruncatedOperator::from_fn(5, 5, |a, b| m[(a, b)] * C64::from_polar(1.0, -(h[a] - h[b]) * y));

    for t in [1e1, 1e2, 1e3, 1e4] {
        let mean = finite_time_mean(orbit, t, (t * 20.0) as usize + 1)?;
        println!("T = {t:>7.0e}: max |mean - Bohr mean| = {:.3e}", max_abs_diff(&mean, &exact));
    }
    Ok(())
}
