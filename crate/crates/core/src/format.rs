//! Number formatting shared by the CSV and JSON writers.

/// Round to 12 significant digits and print the shortest decimal form.
pub fn sig12(v: f64) -> String {
    round_sig(v, 12).to_string()
}

pub fn round_sig(v: f64, digits: usize) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{:.*e}", digits - 1, v).parse().expect("scientific literal")
}
