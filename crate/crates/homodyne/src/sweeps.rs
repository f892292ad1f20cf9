//! Parallel drivers. Work items are independent; results are collected in
//! input order, so output does not depend on the thread count.

use homodyne_core::reconstruction::{
    mc_assemble, mc_element, mc_phase, min_phases_with, McOutcome, Reconstructor,
};
use homodyne_core::{Complex64, ErrorMatrix, ScanConfig, StateSpec};
use rayon::prelude::*;

use crate::error::Result;

/// `epsilon(n, m)` for every element at every phase count.
pub fn deviation_table(
    state: &StateSpec,
    eta: f64,
    elements: &[(usize, usize)],
    f_list: &[usize],
    n_max: usize,
) -> Result<Vec<(usize, Vec<f64>)>> {
    let engine = Reconstructor::new(state, eta, &ScanConfig::deterministic(1, n_max))?;
    f_list
        .par_iter()
        .map(|&f| {
            let eps = elements
                .iter()
                .map(|&(n, m)| engine.element(f, n, m).map(|(_, e)| e))
                .collect::<homodyne_core::Result<Vec<_>>>()?;
            Ok((f, eps))
        })
        .collect()
}

/// Minimum phase counts for several states.
pub fn f0_table(
    states: &[StateSpec],
    eta: f64,
    n_max: usize,
    threshold: f64,
    f_max: usize,
) -> Vec<homodyne_core::Result<usize>> {
    states
        .par_iter()
        .map(|s| {
            let engine = Reconstructor::new(s, eta, &ScanConfig::deterministic(1, n_max))?;
            min_phases_with(&engine, threshold, f_max)
        })
        .collect()
}

/// Error matrices for each efficiency.
pub fn eta_sweep(state: &StateSpec, etas: &[f64], f: usize, n_max: usize) -> Result<Vec<(f64, ErrorMatrix)>> {
    etas.par_iter()
        .map(|&eta| {
            let e = Reconstructor::new(state, eta, &ScanConfig::deterministic(f, n_max))?.errors(f)?;
            Ok((eta, e))
        })
        .collect()
}

/// Simulated experiment with phases processed in parallel. Bit-identical to
/// the sequential version.
pub fn mc_experiment_par(state: &StateSpec, eta: f64, cfg: &ScanConfig, seed: u64) -> Result<McOutcome> {
    cfg.validate()?;
    let phases = (0..cfg.f)
        .into_par_iter()
        .map(|k| mc_phase(state, eta, cfg, seed, k))
        .collect::<homodyne_core::Result<Vec<_>>>()?;
    Ok(mc_assemble(state, eta, cfg, seed, phases)?)
}

/// Independent replicates of a single-element estimate with seeds
/// `first_seed..first_seed + replicates`.
pub fn mc_replicates(
    state: &StateSpec,
    eta: f64,
    f: usize,
    samples_per_phase: usize,
    first_seed: u64,
    replicates: usize,
    element: (usize, usize),
) -> Result<Vec<(Complex64, f64)>> {
    (0..replicates as u64)
        .into_par_iter()
        .map(|r| Ok(mc_element(state, eta, f, samples_per_phase, first_seed + r, element)?))
        .collect()
}
