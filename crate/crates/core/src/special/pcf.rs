use alloc::vec::Vec;
use core::f64::consts::PI;
use libm::exp;
use num_complex::Complex64;

use super::{ln_factorial, EigenfunctionTable};
use crate::error::{Error, Result};

/// `exp(-y^2) * D_{-p}(-2 i y)` for `p = 0..=p_max`.
///
/// Evaluated through the eigenfunction pair at `y`:
/// `i^(p-1) * (pi/2 * u_0 u_{p-1} + i * u_0 v_{p-1}) / sqrt((p-1)!)`,
/// which avoids the unstable recurrences in `p`.
pub fn parabolic_cylinder_neg_scaled_seq(p_max: usize, y: f64) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(p_max + 1);
    out.push(Complex64::new(1.0, 0.0));
    if p_max == 0 {
        return Ok(out);
    }
    let t = EigenfunctionTable::build(p_max - 1, &[y])?;
    let u0 = t.u(0, 0);
    for p in 1..=p_max {
        let j = p - 1;
        let norm = exp(-0.5 * ln_factorial(j));
        let z = Complex64::new(0.5 * PI * u0 * t.u(j, 0) * norm, u0 * t.v(j, 0) * norm);
        out.push(i_pow(j) * z);
    }
    Ok(out)
}

/// `exp(-y^2) * D_{-p}(-2 i y)`.
pub fn parabolic_cylinder_neg_scaled(p: usize, y: f64) -> Result<Complex64> {
    Ok(parabolic_cylinder_neg_scaled_seq(p, y)?[p])
}

/// `D_{-p}(-2 i y)` itself. Fails once `exp(y^2)` leaves the double range.
pub fn parabolic_cylinder_neg(p: usize, y: f64) -> Result<Complex64> {
    if y * y > 700.0 {
        return Err(Error::Overflow { what: "parabolic cylinder function", x: y });
    }
    Ok(parabolic_cylinder_neg_scaled(p, y)? * exp(y * y))
}

/// `i^k`
pub fn i_pow(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::CompositeRule;
    use libm::{cos, sin, sqrt};

    // D_{-p}(z) = exp(-z^2/4) / Gamma(p) * int_0^inf t^(p-1) exp(-t^2/2 - z t) dt
    fn oracle(p: usize, y: f64) -> Complex64 {
        // z = -2 i y: exp(-z t) = exp(2 i y t), exp(-z^2/4) = exp(y^2)
        let r = CompositeRule::with_max_width(0.0, 14.0, 0.05, 20);
        let re = r.integrate(|t| libm::pow(t, (p - 1) as f64) * exp(-t * t / 2.0) * cos(2.0 * y * t));
        let im = r.integrate(|t| libm::pow(t, (p - 1) as f64) * exp(-t * t / 2.0) * sin(2.0 * y * t));
        Complex64::new(re, im) * exp(y * y - ln_factorial(p - 1))
    }

    #[test]
    fn values_at_origin() {
        assert!((parabolic_cylinder_neg(1, 0.0).unwrap().re - sqrt(PI / 2.0)).abs() < 1e-15);
        assert!((parabolic_cylinder_neg(2, 0.0).unwrap().re - 1.0).abs() < 1e-15);
        assert_eq!(parabolic_cylinder_neg(0, 0.7).unwrap(), Complex64::new(exp(0.49), 0.0));
    }

    #[test]
    fn matches_integral_representation() {
        for &(p, y) in &[(1, 0.5), (2, 0.5), (3, -1.1), (5, 2.0), (8, 0.3), (12, 1.7)] {
            let a = parabolic_cylinder_neg(p, y).unwrap();
            let b = oracle(p, y);
            assert!((a - b).norm() < 1e-8 * b.norm().max(1.0), "p={p} y={y} {a} {b}");
        }
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(parabolic_cylinder_neg(3, 30.0), Err(Error::Overflow { .. })));
        assert!(parabolic_cylinder_neg_scaled(3, 20.0).is_ok());
    }
}
