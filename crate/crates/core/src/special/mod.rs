//! Dawson's integral, the paired oscillator eigenfunctions and parabolic
//! cylinder functions of negative order along the imaginary axis.

mod dawson;
mod eigen;
mod pcf;

pub use dawson::dawson;
pub use eigen::{eigenfunctions_at, EigenfunctionTable, X_LIMIT};
pub use pcf::{i_pow, parabolic_cylinder_neg, parabolic_cylinder_neg_scaled, parabolic_cylinder_neg_scaled_seq};

use libm::lgamma;

/// `ln n!`
pub fn ln_factorial(n: usize) -> f64 {
    if n < 2 {
        0.0
    } else {
        lgamma(n as f64 + 1.0)
    }
}

/// `ln C(n, k)`, requires `k <= n`.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `C(n, k)` as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c
}
