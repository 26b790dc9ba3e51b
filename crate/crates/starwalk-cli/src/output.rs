//! Numeric formatting for command output: every float is printed with six
//! significant digits, fixed notation near unit scale and scientific
//! elsewhere.

use starwalk_core::Complex64;

/// Six-significant-digit rendering of a float.
pub fn sig(x: f64) -> String {
    if x == 0.0 {
        return "0.00000".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exponent) {
        let decimals = (5 - exponent).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

/// `a+bi` / `a-bi` with six significant digits on both parts.
pub fn sig_complex(z: Complex64) -> String {
    if z.im < 0.0 {
        format!("{}-{}i", sig(z.re), sig(-z.im))
    } else {
        format!("{}+{}i", sig(z.re), sig(z.im))
    }
}
