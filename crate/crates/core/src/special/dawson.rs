use core::f64::consts::PI;
use libm::{exp, fabs, floor, sqrt};

const H: f64 = 0.2;
const WINDOW: f64 = 7.5;

/// Dawson's integral `D(y) = exp(-y^2) * integral_0^y exp(t^2) dt`.
///
/// Maclaurin series near the origin, Rybicki's exponentially convergent
/// sampling sum elsewhere, and the asymptotic series for huge arguments.
pub fn dawson(y: f64) -> f64 {
    if y.is_nan() {
        return y;
    }
    let a = fabs(y);
    let sign = if y < 0.0 { -1.0 } else { 1.0 };
    let value = if a < 0.2 {
        series(a)
    } else if a > 1.0e4 {
        asymptotic(a)
    } else {
        rybicki(a)
    };
    sign * value
}

fn series(y: f64) -> f64 {
    let y2 = y * y;
    let mut term = y;
    let mut sum = y;
    let mut k = 0usize;
    while fabs(term) > 1e-18 * fabs(sum) {
        term *= -2.0 * y2 / (2 * k + 3) as f64;
        sum += term;
        k += 1;
    }
    sum
}

fn asymptotic(y: f64) -> f64 {
    let z = 1.0 / (2.0 * y * y);
    (1.0 + z * (1.0 + 3.0 * z * (1.0 + 5.0 * z))) / (2.0 * y)
}

// (1/sqrt(pi)) * sum over all odd n of exp(-(y - n h)^2) / n
fn rybicki(y: f64) -> f64 {
    let lo = floor((y - WINDOW) / H) as i64;
    let hi = floor((y + WINDOW) / H) as i64 + 1;
    let mut n = if lo.rem_euclid(2) == 0 { lo + 1 } else { lo };
    let mut sum = 0.0;
    while n <= hi {
        let d = y - n as f64 * H;
        sum += exp(-d * d) / n as f64;
        n += 2;
    }
    sum / sqrt(PI)
}
