//! Kernel functions `<m+d| K_phi(x) |m>` whose averages over homodyne data
//! give density-matrix elements.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, SQRT_2};
use libm::{cos, exp, fabs, log, sqrt};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_eta, Error, Result};
use crate::quadrature::GaussLegendre;
use crate::special::{binomial, dawson, i_pow, ln_binomial, ln_factorial, parabolic_cylinder_neg_scaled_seq, EigenfunctionTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelMethod {
    /// Products of eigenfunction pairs, unit efficiency only.
    Factorized,
    /// Finite sum over parabolic cylinder functions, `eta < 1` only.
    ClosedForm,
    /// Unit-efficiency kernels at the rescaled argument `chi x`, combined with
    /// binomial weights. Works for every `eta` and stays accurate near 1.
    Rescaled,
    /// Direct numerical integration over the Fourier variable. Slow.
    QuadratureOracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub eta: f64,
    pub chi: f64,
    pub n_max: usize,
    pub method: KernelMethod,
}

/// `chi = sqrt(eta / (2 eta - 1))`
pub fn chi_of(eta: f64) -> f64 {
    sqrt(eta / (2.0 * eta - 1.0))
}

impl KernelSpec {
    pub fn new(eta: f64, n_max: usize, method: KernelMethod) -> Result<Self> {
        check_eta(eta)?;
        match method {
            KernelMethod::Factorized if eta != 1.0 => {
                return Err(Error::Config("the factorized kernel needs eta = 1".into()))
            }
            KernelMethod::ClosedForm if eta == 1.0 => {
                return Err(Error::Config("the closed-form kernel needs eta < 1".into()))
            }
            _ => {}
        }
        Ok(Self { eta, chi: chi_of(eta), n_max, method })
    }

    /// Default production method for `eta`.
    pub fn for_eta(eta: f64, n_max: usize) -> Result<Self> {
        let method = if eta == 1.0 { KernelMethod::Factorized } else { KernelMethod::Rescaled };
        Self::new(eta, n_max, method)
    }
}

#[inline]
fn phase(d: usize, phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, d as f64 * phi)
}

/// Real factor of the unit-efficiency kernel at grid index `i`:
/// `4x u_m v_{m+d} - 2 sqrt(m+1) u_{m+1} v_{m+d} - 2 sqrt(m+d+1) u_m v_{m+d+1}`.
pub fn profile_eta1(table: &EigenfunctionTable, m: usize, d: usize, i: usize) -> Result<f64> {
    table.check(m + d + 1)?;
    let x = table.x_grid()[i];
    let n = m + d;
    Ok(4.0 * x * table.u(m, i) * table.v(n, i)
        - 2.0 * sqrt((m + 1) as f64) * table.u(m + 1, i) * table.v(n, i)
        - 2.0 * sqrt((n + 1) as f64) * table.u(m, i) * table.v(n + 1, i))
}

/// Unit-efficiency kernel `<m+d| K_phi(x_i) |m>` from a precomputed table.
pub fn kernel_eta1(table: &EigenfunctionTable, m: usize, d: usize, i: usize, phi: f64) -> Result<Complex64> {
    Ok(phase(d, phi) * profile_eta1(table, m, d, i)?)
}

/// Closed-form kernel for `eta < 1`, summing parabolic cylinder functions of
/// order `-(2 nu + d + 2)` with log-space coefficients.
pub fn kernel_eta_lt1(m: usize, d: usize, x: f64, phi: f64, spec: &KernelSpec) -> Result<Complex64> {
    if !(spec.eta < 1.0) {
        return Err(Error::Config("the closed-form kernel needs eta < 1".into()));
    }
    let chi = spec.chi;
    let s = parabolic_cylinder_neg_scaled_seq(2 * m + d + 2, chi * x)?;
    Ok(phase(d, phi) * closed_form_sum(m, d, chi, |p| s[p])?)
}

fn closed_form_sum(m: usize, d: usize, chi: f64, scaled_pcf: impl Fn(usize) -> Complex64) -> Result<f64> {
    let ln_chi = log(chi);
    let ln_pre = log(2.0) + (d + 2) as f64 * ln_chi + 0.5 * (ln_factorial(m) - ln_factorial(m + d));
    let rot = i_pow(d).conj();
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    for nu in 0..=m {
        let p = 2 * nu + d + 2;
        let ln_c = ln_pre - ln_factorial(nu) + ln_binomial(m + d, m - nu) + ln_factorial(p - 1) + 2.0 * nu as f64 * ln_chi;
        let sign = if nu % 2 == 0 { 1.0 } else { -1.0 };
        let t = sign * exp(ln_c) * (rot * scaled_pcf(p)).re;
        sum += t;
        abs_sum += fabs(t);
    }
    let estimate = 16.0 * f64::EPSILON * abs_sum;
    let tolerance = 1e-6 * sum.abs().max(1.0);
    if !(estimate <= tolerance) {
        return Err(Error::PrecisionLoss { estimate, tolerance });
    }
    Ok(sum)
}

/// Weights expressing the `eta < 1` kernel through unit-efficiency kernels at
/// `chi x`: `K^eta_{m+d,m}(x) = sum_j c_j k_{j,d}(chi x)`.
#[derive(Debug, Clone)]
pub struct RescaleWeights {
    n_max: usize,
    // per (m, d): weights for j = 0..=m
    weights: Vec<Vec<f64>>,
}

impl RescaleWeights {
    pub fn new(chi: f64, n_max: usize) -> Self {
        let mut weights = Vec::with_capacity(pair_count(n_max));
        for d in 0..=n_max {
            for m in 0..=(n_max - d) {
                weights.push((0..=m).map(|j| rescale_weight(chi, m, d, j)).collect());
            }
        }
        Self { n_max, weights }
    }

    pub fn weights(&self, m: usize, d: usize) -> &[f64] {
        &self.weights[pair_index(self.n_max, m, d)]
    }
}

// chi^(2+d) sqrt(m!/(m+d)!) C(m+d, m-j) chi^(2j) (1-chi^2)^(m-j) sqrt((j+d)!/j!)
fn rescale_weight(chi: f64, m: usize, d: usize, j: usize) -> f64 {
    let k = m - j;
    let excess = chi * chi - 1.0;
    if excess == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let ln_chi = log(chi);
    let ln_w = (d + 2 + 2 * j) as f64 * ln_chi
        + 0.5 * (ln_factorial(m) - ln_factorial(m + d) + ln_factorial(j + d) - ln_factorial(j))
        + ln_binomial(m + d, k)
        + k as f64 * log(fabs(excess));
    let sign = if excess > 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
    sign * exp(ln_w)
}

/// Number of `(m, d)` pairs with `m + d <= n_max`.
pub fn pair_count(n_max: usize) -> usize {
    (n_max + 1) * (n_max + 2) / 2
}

/// Position of `(m, d)` in the d-major enumeration used by tables.
pub fn pair_index(n_max: usize, m: usize, d: usize) -> usize {
    debug_assert!(m + d <= n_max);
    // rows before d have lengths n_max + 1, n_max, ...
    d * (n_max + 1) - d * d.saturating_sub(1) / 2 + m
}

/// Kernel through the rescaled unit-efficiency route at a single point.
pub fn kernel_rescaled(m: usize, d: usize, x: f64, phi: f64, spec: &KernelSpec) -> Result<Complex64> {
    let table = EigenfunctionTable::build(m + d + 1, &[spec.chi * x])?;
    let mut sum = 0.0;
    for j in 0..=m {
        sum += rescale_weight(spec.chi, m, d, j) * profile_eta1(&table, j, d, 0)?;
    }
    Ok(phase(d, phi) * sum)
}

/// Reference value from direct integration over the Fourier variable `k`:
/// `int_0^inf dk (k/2) l_m^d(k^2/4) exp(k^2 (1-eta)/(8 eta)) cos(k x - d pi/2)`,
/// where `l_m^d` is the normalised Laguerre function. Returns the `phi = 0`
/// value together with the estimated residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub value: Complex64,
    pub residual: f64,
}

pub fn kernel_oracle(m: usize, d: usize, x: f64, spec: &KernelSpec) -> Result<OracleValue> {
    let chi = spec.chi;
    let width = 1.5 / (fabs(x) + sqrt((m + d + 1) as f64) + 1.0);
    let rule = GaussLegendre::new(24);
    let coarse = oracle_integral(m, d, x, chi, width, &rule)?;
    let fine = oracle_integral(m, d, x, chi, 0.5 * width, &rule)?;
    let residual = fabs(coarse - fine);
    if residual > 1e-8 * fine.abs().max(1.0) {
        return Err(Error::NonConvergence { residual });
    }
    Ok(OracleValue { value: Complex64::new(fine, 0.0), residual })
}

fn oracle_integral(m: usize, d: usize, x: f64, chi: f64, width: f64, rule: &GaussLegendre) -> Result<f64> {
    let k_turn = 2.0 * sqrt((4 * m + 2 * d + 2) as f64);
    let damp = 1.0 / (8.0 * chi * chi);
    let integrand = |k: f64| -> f64 {
        let s = 0.25 * k * k;
        // normalised Laguerre function times exp(s/2) exp(-k^2/(8 chi^2))
        let l0 = if s == 0.0 {
            if d == 0 { exp(-damp * k * k) } else { 0.0 }
        } else {
            exp(0.5 * d as f64 * log(s) - 0.5 * ln_factorial(d) - damp * k * k)
        };
        let mut prev = 0.0;
        let mut cur = l0;
        for j in 0..m {
            let jf = j as f64;
            let df = d as f64;
            let next = ((2.0 * jf + 1.0 + df - s) * cur - sqrt(jf * (jf + df)) * prev) / sqrt((jf + 1.0) * (jf + 1.0 + df));
            prev = cur;
            cur = next;
        }
        0.5 * k * cur * cos(k * x - d as f64 * FRAC_PI_2)
    };
    let mut total = 0.0;
    let mut peak: f64 = 0.0;
    let mut a = 0.0;
    loop {
        let b = a + width;
        let mut panel_peak: f64 = 0.0;
        let part = rule.integrate(a, b, |k| {
            let v = integrand(k);
            panel_peak = panel_peak.max(fabs(v));
            v
        });
        total += part;
        peak = peak.max(panel_peak);
        a = b;
        if a > k_turn && panel_peak <= 1e-18 * peak {
            break;
        }
        if a > 400.0 {
            return Err(Error::NonConvergence { residual: panel_peak });
        }
    }
    Ok(total)
}

/// Any method, pointwise.
pub fn kernel(spec: &KernelSpec, m: usize, d: usize, x: f64, phi: f64) -> Result<Complex64> {
    if m + d > spec.n_max {
        return Err(Error::IndexOutOfRange { index: m + d, limit: spec.n_max });
    }
    match spec.method {
        KernelMethod::Factorized => {
            let t = EigenfunctionTable::build(m + d + 1, &[x])?;
            kernel_eta1(&t, m, d, 0, phi)
        }
        KernelMethod::ClosedForm => kernel_eta_lt1(m, d, x, phi, spec),
        KernelMethod::Rescaled => kernel_rescaled(m, d, x, phi, spec),
        KernelMethod::QuadratureOracle => Ok(phase(d, phi) * kernel_oracle(m, d, x, spec)?.value),
    }
}

/// Kernel for an arbitrary element `<n| K_phi(x) |m>`, using Hermiticity when
/// `n < m`.
pub fn kernel_element(spec: &KernelSpec, n: usize, m: usize, x: f64, phi: f64) -> Result<Complex64> {
    if n >= m {
        kernel(spec, m, n - m, x, phi)
    } else {
        Ok(kernel(spec, n, m - n, x, phi)?.conj())
    }
}

/// Real kernel factors for every `(m, d)` with `m + d <= n_max` on a grid.
#[derive(Debug, Clone)]
pub struct KernelTable {
    spec: KernelSpec,
    x: Vec<f64>,
    data: Vec<f64>,
}

impl KernelTable {
    pub fn build(spec: &KernelSpec, x_grid: &[f64]) -> Result<Self> {
        let n_max = spec.n_max;
        let len = x_grid.len();
        let mut data = vec![0.0; pair_count(n_max) * len];
        match spec.method {
            KernelMethod::Factorized => {
                let t = EigenfunctionTable::build(n_max + 1, x_grid)?;
                fill_eta1(&t, n_max, &mut data);
            }
            KernelMethod::Rescaled => {
                let scaled: Vec<f64> = x_grid.iter().map(|x| spec.chi * x).collect();
                let t = EigenfunctionTable::build(n_max + 1, &scaled)?;
                let mut unit = vec![0.0; data.len()];
                fill_eta1(&t, n_max, &mut unit);
                let w = RescaleWeights::new(spec.chi, n_max);
                for d in 0..=n_max {
                    for m in 0..=(n_max - d) {
                        let row = pair_index(n_max, m, d) * len;
                        for (j, c) in w.weights(m, d).iter().enumerate() {
                            let src = pair_index(n_max, j, d) * len;
                            for i in 0..len {
                                data[row + i] += c * unit[src + i];
                            }
                        }
                    }
                }
            }
            KernelMethod::ClosedForm => {
                if !(spec.eta < 1.0) {
                    return Err(Error::Config("the closed-form kernel needs eta < 1".into()));
                }
                for (i, &x) in x_grid.iter().enumerate() {
                    let s = parabolic_cylinder_neg_scaled_seq(2 * n_max + 2, spec.chi * x)?;
                    for d in 0..=n_max {
                        for m in 0..=(n_max - d) {
                            data[pair_index(n_max, m, d) * len + i] = closed_form_sum(m, d, spec.chi, |p| s[p])?;
                        }
                    }
                }
            }
            KernelMethod::QuadratureOracle => {
                for (i, &x) in x_grid.iter().enumerate() {
                    for d in 0..=n_max {
                        for m in 0..=(n_max - d) {
                            data[pair_index(n_max, m, d) * len + i] = kernel_oracle(m, d, x, spec)?.value.re;
                        }
                    }
                }
            }
        }
        Ok(Self { spec: *spec, x: x_grid.to_vec(), data })
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn x_grid(&self) -> &[f64] {
        &self.x
    }

    /// Real factor of `<m+d| K |m>` on the grid (multiply by `exp(i d phi)`).
    pub fn profile(&self, m: usize, d: usize) -> Result<&[f64]> {
        if m + d > self.spec.n_max {
            return Err(Error::IndexOutOfRange { index: m + d, limit: self.spec.n_max });
        }
        let len = self.x.len();
        let start = pair_index(self.spec.n_max, m, d) * len;
        Ok(&self.data[start..start + len])
    }

    pub fn kernel(&self, m: usize, d: usize, i: usize, phi: f64) -> Result<Complex64> {
        Ok(phase(d, phi) * self.profile(m, d)?[i])
    }
}

fn fill_eta1(t: &EigenfunctionTable, n_max: usize, data: &mut [f64]) {
    let len = t.len();
    let x = t.x_grid();
    for d in 0..=n_max {
        for m in 0..=(n_max - d) {
            let n = m + d;
            let row = &mut data[pair_index(n_max, m, d) * len..][..len];
            let (a, b) = (2.0 * sqrt((m + 1) as f64), 2.0 * sqrt((n + 1) as f64));
            for (i, out) in row.iter_mut().enumerate() {
                let um = t.u(m, i);
                *out = (4.0 * x[i] * um - a * t.u(m + 1, i)) * t.v(n, i) - b * um * t.v(n + 1, i);
            }
        }
    }
}

/// Residuals of the two eigenfunction-product identities behind the
/// factorized kernel, for every `(nu, d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub entries: Vec<IdentityResidual>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResidual {
    /// `None` for the single-derivative identity
    /// `(-d/dx / 2)^d u_0 v_0 = sqrt(d!) u_0 v_d`.
    pub nu: Option<usize>,
    pub d: usize,
    pub max_residual: f64,
}

impl IdentityReport {
    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.max_residual).fold(0.0, f64::max)
    }

    pub fn get(&self, nu: Option<usize>, d: usize) -> Option<f64> {
        self.entries.iter().find(|e| e.nu == nu && e.d == d).map(|e| e.max_residual)
    }
}

// Polynomial with ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
struct Poly(Vec<f64>);

impl Poly {
    fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    fn derivative(&self) -> Poly {
        Poly(self.0.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect())
    }

    fn times_x(&self, s: f64) -> Poly {
        let mut out = vec![0.0];
        out.extend(self.0.iter().map(|c| s * c));
        Poly(out)
    }

    fn add(&self, other: &Poly, s: f64) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly((0..n)
            .map(|k| self.0.get(k).copied().unwrap_or(0.0) + s * other.0.get(k).copied().unwrap_or(0.0))
            .collect())
    }

    fn scale(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|c| s * c).collect())
    }
}

// P(x) g(x) + Q(x) with g(x) = D(sqrt2 x), so g' = sqrt2 - 4 x g.
#[derive(Debug, Clone)]
struct DawsonForm {
    p: Poly,
    q: Poly,
}

impl DawsonForm {
    fn derivative(&self) -> Self {
        Self {
            p: self.p.derivative().add(&self.p.times_x(1.0), -4.0),
            q: self.q.derivative().add(&self.p, SQRT_2),
        }
    }

    fn scale(&self, s: f64) -> Self {
        Self { p: self.p.scale(s), q: self.q.scale(s) }
    }

    fn eval(&self, x: f64) -> f64 {
        self.p.eval(x) * dawson(SQRT_2 * x) + self.q.eval(x)
    }
}

/// Checks both identities on `|x| <= 3`, applying the derivatives
/// analytically to the closed form of `u_0 v_d` and comparing with products
/// from the numerical eigenfunction table.
pub fn verify_appendix_identities(nu_max: usize, d_max: usize) -> Result<IdentityReport> {
    let xs: Vec<f64> = (0..=120).map(|k| -3.0 + 0.05 * k as f64).collect();
    let table = EigenfunctionTable::build(nu_max + d_max + 1, &xs)?;
    // u_0 v_0 = sqrt2 D(sqrt2 x)
    let seed = DawsonForm { p: Poly(vec![SQRT_2]), q: Poly(vec![0.0]) };
    let step = |f: &DawsonForm| f.derivative().scale(-0.5);
    let mut entries = Vec::new();

    // (-d/dx / 2)^d u_0 v_0 = sqrt(d!) u_0 v_d
    let mut cur = seed.clone();
    for d in 0..=(d_max + 2 * nu_max) {
        if d <= d_max {
            let norm = sqrt(exp(ln_factorial(d)));
            let r = xs
                .iter()
                .enumerate()
                .map(|(i, &x)| fabs(cur.eval(x) - norm * table.u(0, i) * table.v(d, i)))
                .fold(0.0, f64::max);
            entries.push(IdentityResidual { nu: None, d, max_residual: r });
        }
        cur = step(&cur);
    }

    // (1/nu!) (-d/dx / 2)^(2 nu) u_0 v_d
    //   = sum_j sqrt(C(j+d, j)) (-1)^(nu-j) C(nu+d, j+d) u_j v_{j+d}
    for d in 0..=d_max {
        let mut base = seed.clone();
        for _ in 0..d {
            base = step(&base);
        }
        // base now holds sqrt(d!) u_0 v_d
        let mut lhs = base.scale(1.0 / sqrt(exp(ln_factorial(d))));
        for nu in 0..=nu_max {
            let inv = 1.0 / exp(ln_factorial(nu));
            let r = xs
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    let rhs: f64 = (0..=nu)
                        .map(|j| {
                            let sign = if (nu - j) % 2 == 0 { 1.0 } else { -1.0 };
                            sqrt(binomial(j + d, j)) * sign * binomial(nu + d, j + d) * table.u(j, i) * table.v(j + d, i)
                        })
                        .sum();
                    fabs(inv * lhs.eval(x) - rhs)
                })
                .fold(0.0, f64::max);
            entries.push(IdentityResidual { nu: Some(nu), d, max_residual: r });
            lhs = step(&step(&lhs));
        }
    }
    Ok(IdentityReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn unit(n_max: usize) -> KernelSpec {
        KernelSpec::new(1.0, n_max, KernelMethod::Factorized).unwrap()
    }

    #[test]
    fn vacuum_kernel_at_origin_is_two() {
        let v = kernel(&unit(1), 0, 0, 0.0, 0.3).unwrap();
        assert!((v.re - 2.0).abs() < 1e-14 && v.im == 0.0);
    }

    #[test]
    fn phase_factor() {
        let s = unit(10);
        assert_eq!(kernel(&s, 5, 0, 0.7, 0.1).unwrap(), kernel(&s, 5, 0, 0.7, 2.9).unwrap());
        let v = kernel(&s, 2, 3, 1.0, PI / 4.0).unwrap();
        let arg = v.arg().rem_euclid(PI);
        assert!((arg - 3.0 * PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn pair_enumeration_is_dense() {
        let n_max = 7;
        let mut seen = vec![false; pair_count(n_max)];
        for d in 0..=n_max {
            for m in 0..=(n_max - d) {
                let k = pair_index(n_max, m, d);
                assert!(!seen[k]);
                seen[k] = true;
            }
        }
        assert!(seen.iter().all(|s| *s));
    }

    #[test]
    fn closed_form_limits() {
        let s = KernelSpec::new(1.0 - 1e-9, 0, KernelMethod::ClosedForm).unwrap();
        assert!((kernel_eta_lt1(0, 0, 0.0, 0.0, &s).unwrap().re - 2.0).abs() < 1e-4);
        assert!(KernelSpec::new(1.0, 0, KernelMethod::ClosedForm).is_err());
        assert!(KernelSpec::new(0.9, 0, KernelMethod::Factorized).is_err());
    }

    #[test]
    fn closed_form_matches_oracle() {
        let s = KernelSpec::new(0.8, 5, KernelMethod::ClosedForm).unwrap();
        let a = kernel_eta_lt1(0, 0, 0.5, 1.1, &s).unwrap();
        let o = kernel_oracle(0, 0, 0.5, &s).unwrap();
        assert!(a.im.abs() < 1e-15);
        assert!((a.re - o.value.re).abs() < 1e-6, "{a} {o:?}");
        let b1 = kernel_eta_lt1(1, 2, 0.0, 0.0, &s).unwrap();
        let b2 = kernel_eta_lt1(1, 2, 0.0, 2.0, &s).unwrap();
        assert!((b1.norm() - b2.norm()).abs() < 1e-14);
    }

    #[test]
    fn three_routes_agree() {
        for &eta in &[0.95, 0.8] {
            let cf = KernelSpec::new(eta, 12, KernelMethod::ClosedForm).unwrap();
            let rs = KernelSpec::new(eta, 12, KernelMethod::Rescaled).unwrap();
            for &(m, d, x) in &[(0, 0, 0.3), (3, 1, -1.2), (7, 4, 2.5), (2, 9, 0.8)] {
                let a = kernel(&cf, m, d, x, 0.0).unwrap().re;
                let b = kernel(&rs, m, d, x, 0.0).unwrap().re;
                let o = kernel_oracle(m, d, x, &cf).unwrap().value.re;
                assert!((a - o).abs() < 1e-6 && (b - o).abs() < 1e-9, "eta={eta} ({m},{d},{x}) {a} {b} {o}");
            }
        }
    }

    #[test]
    fn oracle_at_unit_efficiency() {
        let s = KernelSpec::new(1.0, 10, KernelMethod::QuadratureOracle).unwrap();
        let t = unit(10);
        for &(m, d, x) in &[(0, 0, 0.0), (4, 2, 1.3), (6, 3, -2.2)] {
            let o = kernel_oracle(m, d, x, &s).unwrap().value.re;
            let f = kernel(&t, m, d, x, 0.0).unwrap().re;
            assert!((o - f).abs() < 1e-8, "({m},{d},{x}) {o} {f}");
        }
        let edge = KernelSpec::new(0.51, 0, KernelMethod::QuadratureOracle).unwrap();
        let v = kernel_oracle(0, 0, 0.0, &edge).unwrap().value;
        assert!(v.re.is_finite() && v.im.abs() < 1e-10);
    }

    #[test]
    fn table_matches_pointwise() {
        let xs = [-2.0, -0.4, 0.0, 1.1, 3.3];
        for spec in [unit(6), KernelSpec::new(0.85, 6, KernelMethod::Rescaled).unwrap(), KernelSpec::new(0.85, 6, KernelMethod::ClosedForm).unwrap()] {
            let t = KernelTable::build(&spec, &xs).unwrap();
            for (i, &x) in xs.iter().enumerate() {
                for &(m, d) in &[(0, 0), (2, 3), (5, 1), (0, 6)] {
                    let a = t.kernel(m, d, i, 0.4).unwrap();
                    let b = kernel(&spec, m, d, x, 0.4).unwrap();
                    assert!((a - b).norm() < 1e-9 * b.norm().max(1.0), "{spec:?} ({m},{d},{x})");
                }
            }
            assert!(t.profile(4, 3).is_err());
        }
    }

    #[test]
    fn hermitian_elements() {
        let s = KernelSpec::new(0.9, 8, KernelMethod::Rescaled).unwrap();
        let a = kernel_element(&s, 6, 2, 0.9, 0.7).unwrap();
        let b = kernel_element(&s, 2, 6, 0.9, 0.7).unwrap();
        assert_eq!(a, b.conj());
    }

    #[test]
    fn identities() {
        let r = verify_appendix_identities(2, 2).unwrap();
        assert!(r.get(Some(0), 0).unwrap() < 1e-14);
        assert!(r.get(None, 1).unwrap() < 1e-6);
        assert!(r.get(Some(2), 1).unwrap() < 1e-5);
        assert!(r.max_residual() < 1e-10, "{r:?}");
        let big = verify_appendix_identities(4, 4).unwrap();
        assert!(big.max_residual() < 1e-8, "{}", big.max_residual());
    }
}
