//! Quantum states of the field mode and their homodyne statistics.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
use libm::{cos, cosh, exp, fabs, sinh, sqrt, tanh};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{check_eta, Error, Result};
use crate::matrix::ComplexMatrix;
use crate::quadrature::CompositeRule;
use crate::special::EigenfunctionTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    Coherent,
    Squeezed,
    Fock,
}

/// A displaced squeezed vacuum `D(alpha) S(xi) |0>` or a number state.
///
/// `squeeze_angle` is the quadrature angle of minimum variance, so the
/// squeezing parameter is `xi = r * exp(2i * squeeze_angle)`. `alpha_phase`
/// is the phase of the displacement; its modulus follows from
/// `mean_photons = |alpha|^2 + sinh(r)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateSpec {
    pub kind: StateKind,
    pub mean_photons: f64,
    #[serde(default)]
    pub squeeze_r: f64,
    #[serde(default)]
    pub squeeze_angle: f64,
    #[serde(default)]
    pub alpha_phase: f64,
    #[serde(default)]
    pub fock_n: usize,
}

impl StateSpec {
    pub fn coherent(mean_photons: f64) -> Self {
        Self {
            kind: StateKind::Coherent,
            mean_photons,
            squeeze_r: 0.0,
            squeeze_angle: 0.0,
            alpha_phase: 0.0,
            fock_n: 0,
        }
    }

    /// Squeezed state with real displacement and the amplitude quadrature
    /// anti-squeezed (minimum variance at angle pi/2).
    pub fn squeezed(mean_photons: f64, r: f64) -> Self {
        Self {
            kind: StateKind::Squeezed,
            mean_photons,
            squeeze_r: r,
            squeeze_angle: FRAC_PI_2,
            alpha_phase: 0.0,
            fock_n: 0,
        }
    }

    pub fn fock(n: usize) -> Self {
        Self {
            kind: StateKind::Fock,
            mean_photons: n as f64,
            squeeze_r: 0.0,
            squeeze_angle: 0.0,
            alpha_phase: 0.0,
            fock_n: n,
        }
    }

    pub fn vacuum() -> Self {
        Self::coherent(0.0)
    }

    pub fn with_alpha_phase(mut self, phase: f64) -> Self {
        self.alpha_phase = phase;
        self
    }

    pub fn with_squeeze_angle(mut self, angle: f64) -> Self {
        self.squeeze_angle = angle;
        self
    }

    pub fn is_gaussian(&self) -> bool {
        self.kind != StateKind::Fock
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.mean_photons.is_finite()
            && self.squeeze_r.is_finite()
            && self.squeeze_angle.is_finite()
            && self.alpha_phase.is_finite();
        if !finite {
            return Err(Error::InvalidState(format!("non-finite parameter in {self:?}")));
        }
        match self.kind {
            StateKind::Fock => Ok(()),
            StateKind::Coherent if self.squeeze_r != 0.0 => {
                Err(Error::InvalidState(format!("coherent state with squeeze_r = {}", self.squeeze_r)))
            }
            _ => {
                if self.squeeze_r < 0.0 {
                    return Err(Error::InvalidState(format!("negative squeeze_r {}", self.squeeze_r)));
                }
                let s = sinh(self.squeeze_r);
                if self.mean_photons < s * s - 1e-12 {
                    return Err(Error::InvalidState(format!(
                        "mean photon number {} below the squeezing contribution {}",
                        self.mean_photons,
                        s * s
                    )));
                }
                Ok(())
            }
        }
    }

    /// Displacement amplitude `alpha` (zero for number states).
    pub fn displacement(&self) -> Result<Complex64> {
        self.validate()?;
        if self.kind == StateKind::Fock {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let s = sinh(self.squeeze_r);
        let modulus = sqrt((self.mean_photons - s * s).max(0.0));
        Ok(Complex64::from_polar(modulus, self.alpha_phase))
    }

    /// Photon-number variance of the state.
    pub fn photon_variance(&self) -> Result<f64> {
        let alpha = self.displacement()?;
        if self.kind == StateKind::Fock {
            return Ok(0.0);
        }
        let r = self.squeeze_r;
        let (s, c) = (sinh(r), cosh(r));
        // |alpha|^2 * (e^{-2r} cos^2 + e^{2r} sin^2 along alpha) + 2 sinh^2 cosh^2
        let t = alpha.arg() - self.squeeze_angle;
        let along = exp(-2.0 * r) * cos(t) * cos(t) + exp(2.0 * r) * libm::sin(t) * libm::sin(t);
        Ok(alpha.norm_sqr() * along + 2.0 * s * s * c * c)
    }
}

/// Probability density of the homodyne output `x` at phase `phi`, including
/// the Gaussian smearing of detection efficiency `eta`.
#[derive(Debug, Clone)]
pub struct QuadratureDistribution {
    alpha: Complex64,
    r: f64,
    theta: f64,
    eta: f64,
    fock: Option<usize>,
}

pub fn quadrature_pdf(state: &StateSpec, eta: f64) -> Result<QuadratureDistribution> {
    check_eta(eta)?;
    let alpha = state.displacement()?;
    Ok(QuadratureDistribution {
        alpha,
        r: state.squeeze_r,
        theta: state.squeeze_angle,
        eta,
        fock: (state.kind == StateKind::Fock).then_some(state.fock_n),
    })
}

impl QuadratureDistribution {
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Extra variance `(1 - eta) / (4 eta)` added by losses.
    pub fn smearing_variance(&self) -> f64 {
        (1.0 - self.eta) / (4.0 * self.eta)
    }

    pub fn mean(&self, phi: f64) -> f64 {
        self.alpha.norm() * cos(self.alpha.arg() - phi)
    }

    pub fn variance(&self, phi: f64) -> f64 {
        let extra = self.smearing_variance();
        if let Some(n) = self.fock {
            return (2 * n + 1) as f64 / 4.0 + extra;
        }
        let t = phi - self.theta;
        let c = cos(t);
        let s = libm::sin(t);
        (exp(-2.0 * self.r) * c * c + exp(2.0 * self.r) * s * s) / 4.0 + extra
    }

    pub fn std_dev(&self, phi: f64) -> f64 {
        sqrt(self.variance(phi))
    }

    /// Largest standard deviation over all phases.
    pub fn max_std_dev(&self) -> f64 {
        match self.fock {
            Some(_) => self.std_dev(0.0),
            None => sqrt(exp(2.0 * self.r) / 4.0 + self.smearing_variance()),
        }
    }

    pub fn displacement(&self) -> Complex64 {
        self.alpha
    }

    /// Density values at `xs` for phase `phi`.
    pub fn density_on(&self, xs: &[f64], phi: f64) -> Result<Vec<f64>> {
        match self.fock {
            None => {
                let m = self.mean(phi);
                let var = self.variance(phi);
                let norm = 1.0 / sqrt(2.0 * PI * var);
                Ok(xs.iter().map(|&x| norm * exp(-(x - m) * (x - m) / (2.0 * var))).collect())
            }
            Some(n) => self.fock_density(n, xs),
        }
    }

    pub fn density(&self, x: f64, phi: f64) -> Result<f64> {
        Ok(self.density_on(&[x], phi)?[0])
    }

    fn fock_density(&self, n: usize, xs: &[f64]) -> Result<Vec<f64>> {
        let ideal = |pts: &[f64]| -> Result<Vec<f64>> {
            let t = EigenfunctionTable::build(n, pts)?;
            Ok(t.u_row(n)?.iter().map(|u| u * u).collect())
        };
        let s2 = self.smearing_variance();
        if s2 == 0.0 {
            return ideal(xs);
        }
        // convolve |u_n|^2 with the loss Gaussian
        let half = sqrt((2 * n + 1) as f64) + 8.0;
        let rule = CompositeRule::with_max_width(-half, half, 0.25, 16);
        let base = ideal(rule.nodes())?;
        let norm = 1.0 / sqrt(2.0 * PI * s2);
        Ok(xs
            .iter()
            .map(|&x| {
                rule.nodes()
                    .iter()
                    .zip(rule.weights())
                    .zip(&base)
                    .map(|((y, w), p)| w * p * norm * exp(-(x - y) * (x - y) / (2.0 * s2)))
                    .sum()
            })
            .collect())
    }

    /// Draws one homodyne outcome at phase `phi`.
    pub fn sample<R: Rng + ?Sized>(&self, phi: f64, rng: &mut R) -> Result<f64> {
        if self.fock.is_some() {
            return Err(Error::Unsupported("sampling of number-state quadratures"));
        }
        let z: f64 = StandardNormal.sample(rng);
        Ok(self.mean(phi) + self.std_dev(phi) * z)
    }
}

/// Draws `n` homodyne outcomes at phase `phi`.
pub fn sample_quadrature<R: Rng + ?Sized>(
    dist: &QuadratureDistribution,
    phi: f64,
    n: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    (0..n).map(|_| dist.sample(phi, rng)).collect()
}

/// Number-basis amplitudes `<n|psi>` for `n = 0..=n_max`.
pub fn fock_amplitudes(state: &StateSpec, n_max: usize) -> Result<Vec<Complex64>> {
    let alpha = state.displacement()?;
    if state.kind == StateKind::Fock {
        return Ok((0..=n_max)
            .map(|n| Complex64::new(if n == state.fock_n { 1.0 } else { 0.0 }, 0.0))
            .collect());
    }
    let r = state.squeeze_r;
    let rot = Complex64::from_polar(1.0, 2.0 * state.squeeze_angle);
    let (ch, th) = (cosh(r), tanh(r));
    let gamma = alpha * ch + alpha.conj() * rot * sinh(r);
    let pre = (-0.5 * alpha.norm_sqr() - 0.5 * alpha.conj() * alpha.conj() * rot * th).exp() / sqrt(ch);
    let mut out = Vec::with_capacity(n_max + 1);
    let mut prev = Complex64::new(0.0, 0.0);
    let mut cur = Complex64::new(1.0, 0.0);
    for n in 0..=n_max {
        out.push(pre * cur);
        let next = (gamma / ch * cur - rot * th * sqrt(n as f64) * prev) / sqrt((n + 1) as f64);
        prev = cur;
        cur = next;
    }
    Ok(out)
}

/// Exact density matrix truncated to `0..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoreticalDensityMatrix {
    pub elements: ComplexMatrix,
}

impl TheoreticalDensityMatrix {
    pub fn get(&self, n: usize, m: usize) -> Complex64 {
        self.elements.get(n, m)
    }

    pub fn n_max(&self) -> usize {
        self.elements.n_max()
    }

    /// Population outside the truncation, `1 - trace`.
    pub fn tail(&self) -> f64 {
        fabs(1.0 - self.elements.trace().re)
    }
}

pub fn theoretical_dm(state: &StateSpec, n_max: usize) -> Result<TheoreticalDensityMatrix> {
    let psi = fock_amplitudes(state, n_max)?;
    Ok(TheoreticalDensityMatrix {
        elements: ComplexMatrix::from_fn(n_max, |n, m| psi[n] * psi[m].conj()),
    })
}
