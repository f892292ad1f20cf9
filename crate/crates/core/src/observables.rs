//! Direct homodyne estimation of photon-number moments at unit efficiency.

use libm::sqrt;
use serde::{Deserialize, Serialize};

use crate::error::{check_eta, Error, Result};
use crate::quadrature::CompositeRule;
use crate::reconstruction::{phase_grid, HomodyneDataset};
use crate::states::{quadrature_pdf, StateSpec};

/// A function of `(x, phi)` whose average over homodyne data is an
/// expectation value.
#[derive(Debug, Clone, Copy)]
pub struct ObservableKernel {
    pub name: &'static str,
    pub f: fn(f64, f64) -> f64,
}

impl ObservableKernel {
    pub fn eval(&self, x: f64, phi: f64) -> f64 {
        (self.f)(x, phi)
    }
}

/// `2x^2 - 1/2`, averages to `<n>`.
pub const PHOTON_NUMBER: ObservableKernel = ObservableKernel { name: "photon_number", f: |x, _| 2.0 * x * x - 0.5 };

/// `8/3 x^4 - 2x^2`, averages to `<n^2>`.
pub const PHOTON_NUMBER_SQUARED: ObservableKernel = ObservableKernel {
    name: "photon_number_squared",
    f: |x, _| {
        let x2 = x * x;
        8.0 / 3.0 * x2 * x2 - 2.0 * x2
    },
};

/// Where the averages come from.
#[derive(Debug, Clone, Copy)]
pub enum ObservableSource<'a> {
    /// Exact integration over the quadrature distributions at `phases`
    /// equally spaced phases.
    State { state: &'a StateSpec, eta: f64, phases: usize },
    /// Sample averages over recorded outcomes.
    Data(&'a HomodyneDataset),
}

impl<'a> ObservableSource<'a> {
    pub fn state(state: &'a StateSpec) -> Self {
        ObservableSource::State { state, eta: 1.0, phases: 16 }
    }

    fn eta(&self) -> f64 {
        match self {
            ObservableSource::State { eta, .. } => *eta,
            ObservableSource::Data(ds) => ds.meta.eta,
        }
    }
}

/// Mean, second moment and number of samples (zero for exact integration).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelAverage {
    pub mean: f64,
    pub second_moment: f64,
    pub samples: usize,
}

impl KernelAverage {
    pub fn variance(&self) -> f64 {
        self.second_moment - self.mean * self.mean
    }

    /// Standard error of the mean, `None` for exact integration.
    pub fn std_error(&self) -> Option<f64> {
        (self.samples > 0).then(|| sqrt(self.variance().max(0.0) / self.samples as f64))
    }
}

pub fn kernel_average(kernel: &ObservableKernel, src: &ObservableSource) -> Result<KernelAverage> {
    let eta = src.eta();
    check_eta(eta)?;
    if eta != 1.0 {
        return Err(Error::Unsupported("observable kernels are defined for unit efficiency only"));
    }
    match src {
        ObservableSource::State { state, phases, .. } => {
            if *phases == 0 {
                return Err(Error::Config("phases must be positive".into()));
            }
            let pdf = quadrature_pdf(state, eta)?;
            let reach = pdf.displacement().norm() + 12.0 * pdf.max_std_dev();
            let rule = CompositeRule::with_max_width(-reach, reach, 0.25, 20);
            let (mut a, mut b) = (0.0, 0.0);
            for phi in phase_grid(*phases) {
                let p = pdf.density_on(rule.nodes(), phi)?;
                for ((x, w), p) in rule.nodes().iter().zip(rule.weights()).zip(&p) {
                    let v = kernel.eval(*x, phi);
                    a += w * p * v;
                    b += w * p * v * v;
                }
            }
            let nf = *phases as f64;
            Ok(KernelAverage { mean: a / nf, second_moment: b / nf, samples: 0 })
        }
        ObservableSource::Data(ds) => {
            let n = ds.records.len();
            if n == 0 {
                return Err(Error::Config("empty dataset".into()));
            }
            let (a, b) = ds.records.iter().fold((0.0, 0.0), |(a, b), r| {
                let v = kernel.eval(r.x, r.phi);
                (a + v, b + v * v)
            });
            Ok(KernelAverage { mean: a / n as f64, second_moment: b / n as f64, samples: n })
        }
    }
}

/// `<n>` and the single-measurement spread `sigma_<n> = sqrt(<F^2> - <n>^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanPhoton {
    pub mean: f64,
    pub sigma: f64,
    pub std_error: Option<f64>,
}

pub fn mean_photon_estimate(src: &ObservableSource) -> Result<MeanPhoton> {
    let avg = kernel_average(&PHOTON_NUMBER, src)?;
    Ok(MeanPhoton { mean: avg.mean, sigma: sqrt(avg.variance().max(0.0)), std_error: avg.std_error() })
}

/// Intrinsic photon-number variance `<8/3 x^4 - 2x^2> - <n>^2`.
pub fn photon_variance_estimate(src: &ObservableSource) -> Result<f64> {
    let n = kernel_average(&PHOTON_NUMBER, src)?.mean;
    Ok(kernel_average(&PHOTON_NUMBER_SQUARED, src)?.mean - n * n)
}

/// `sqrt((<dn^2> + <n>^2 + <n> + 1) / 2)`
pub fn precision_from_moments(mean: f64, variance: f64) -> f64 {
    sqrt((variance + mean * mean + mean + 1.0) / 2.0)
}

/// Precision of homodyning the photon number of `state`, from its exact
/// moments.
pub fn homodyne_precision(state: &StateSpec) -> Result<f64> {
    state.validate()?;
    Ok(precision_from_moments(state.mean_photons, state.photon_variance()?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonStatistics {
    pub mean: f64,
    pub sigma: f64,
    pub variance: f64,
    pub precision: f64,
    pub std_error: Option<f64>,
}

/// All photon-number figures from one source; `precision` uses the estimated
/// moments.
pub fn photon_statistics(src: &ObservableSource) -> Result<PhotonStatistics> {
    let m = mean_photon_estimate(src)?;
    let variance = photon_variance_estimate(src)?;
    Ok(PhotonStatistics {
        mean: m.mean,
        sigma: m.sigma,
        variance,
        precision: precision_from_moments(m.mean, variance),
        std_error: m.std_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reconstruction::simulate_dataset;
    use crate::states::theoretical_dm;

    #[test]
    fn kernel_values() {
        assert_eq!(PHOTON_NUMBER.eval(0.0, 1.0), -0.5);
        assert_eq!(PHOTON_NUMBER.eval(1.0, 0.0), 1.5);
        assert_eq!(PHOTON_NUMBER.eval(0.7, 0.0), PHOTON_NUMBER.eval(0.7, 2.0));
    }

    #[test]
    fn vacuum() {
        let s = StateSpec::vacuum();
        let src = ObservableSource::state(&s);
        assert!(mean_photon_estimate(&src).unwrap().mean.abs() < 1e-12);
        assert!(photon_variance_estimate(&src).unwrap().abs() < 1e-12);
        assert!((homodyne_precision(&s).unwrap() - 1.0 / sqrt(2.0)).abs() < 1e-15);
    }

    #[test]
    fn coherent_triangle() {
        let s = StateSpec::coherent(4.0);
        let src = ObservableSource::state(&s);
        let m = mean_photon_estimate(&src).unwrap();
        let v = photon_variance_estimate(&src).unwrap();
        let eps = homodyne_precision(&s).unwrap();
        assert!((m.mean - 4.0).abs() < 1e-8);
        assert!((v - 4.0).abs() < 1e-8);
        assert!((eps - 5.0 / sqrt(2.0)).abs() < 1e-12);
        assert!((m.sigma * m.sigma - v - eps * eps).abs() < 1e-8);
    }

    #[test]
    fn squeezed_matches_fock_sums() {
        let s = StateSpec::squeezed(4.0, 1.0);
        let rho = theoretical_dm(&s, 200).unwrap();
        assert!(rho.tail() < 1e-6);
        let (mut a, mut b) = (0.0, 0.0);
        for n in 0..=200 {
            let p = rho.get(n, n).re;
            a += n as f64 * p;
            b += (n * n) as f64 * p;
        }
        let src = ObservableSource::state(&s);
        let m = mean_photon_estimate(&src).unwrap();
        let v = photon_variance_estimate(&src).unwrap();
        assert!((m.mean - a).abs() < rho.tail() + 1e-8);
        assert!((v - (b - a * a)).abs() < 1e-6);
        let eps = homodyne_precision(&s).unwrap();
        assert!((m.sigma * m.sigma - v - eps * eps).abs() < 1e-8);
    }

    #[test]
    fn lossy_data_rejected() {
        let s = StateSpec::coherent(1.0);
        let src = ObservableSource::State { state: &s, eta: 0.9, phases: 4 };
        assert!(matches!(mean_photon_estimate(&src), Err(Error::Unsupported(_))));
        let ds = simulate_dataset(&s, 0.9, 2, 10, 1).unwrap();
        assert!(photon_variance_estimate(&ObservableSource::Data(&ds)).is_err());
    }

    #[test]
    fn sampled_mean_within_errors() {
        let s = StateSpec::coherent(4.0);
        let ds = simulate_dataset(&s, 1.0, 10, 20_000, 3).unwrap();
        let m = mean_photon_estimate(&ObservableSource::Data(&ds)).unwrap();
        let se = m.std_error.unwrap();
        assert!((m.mean - 4.0).abs() < 3.0 * se, "{m:?}");
        assert!((se - sqrt(16.5 / 200_000.0)).abs() < 0.05 * se);
    }
}
