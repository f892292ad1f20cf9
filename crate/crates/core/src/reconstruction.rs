//! Density-matrix estimation by phase-scanned kernel averaging, systematic
//! deviations, minimum phase counts and statistical errors.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use libm::{cos, sin, sqrt};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_eta, Error, Result};
use crate::kernels::{pair_count, pair_index, KernelSpec, KernelTable};
use crate::matrix::{ComplexMatrix, RealMatrix};
use crate::quadrature::CompositeRule;
use crate::states::{quadrature_pdf, theoretical_dm, QuadratureDistribution, StateSpec};

/// Residual above which the x-integration counts as unconverged.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanMode {
    Deterministic,
    MonteCarlo,
}

/// Composite Gauss-Legendre scheme for the x-integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XQuadrature {
    /// Nodes per panel.
    pub order: usize,
    /// Panel width; `None` sizes panels to one period of the fastest kernel
    /// oscillation.
    pub panel_width: Option<f64>,
    /// Half-width of the grid in units of the widest standard deviation,
    /// measured from the extreme means.
    pub extent_sigmas: f64,
}

impl Default for XQuadrature {
    fn default() -> Self {
        Self { order: 16, panel_width: None, extent_sigmas: 8.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub f: usize,
    pub n_max: usize,
    pub x_quadrature: XQuadrature,
    pub mode: ScanMode,
    pub samples_per_phase: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            f: 32,
            n_max: 47,
            x_quadrature: XQuadrature::default(),
            mode: ScanMode::Deterministic,
            samples_per_phase: 10_000,
        }
    }
}

impl ScanConfig {
    pub fn deterministic(f: usize, n_max: usize) -> Self {
        Self { f, n_max, ..Self::default() }
    }

    pub fn monte_carlo(f: usize, n_max: usize, samples_per_phase: usize) -> Self {
        Self { f, n_max, mode: ScanMode::MonteCarlo, samples_per_phase, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.f == 0 {
            return Err(Error::Config("the number of phases f must be at least 1".into()));
        }
        let q = &self.x_quadrature;
        if q.order == 0 || !(q.extent_sigmas >= 6.0) {
            return Err(Error::Config(format!(
                "x quadrature needs order >= 1 and extent >= 6 standard deviations, got {q:?}"
            )));
        }
        if let Some(w) = q.panel_width {
            if !(w > 0.0) {
                return Err(Error::Config(format!("panel width must be positive, got {w}")));
            }
        }
        if self.mode == ScanMode::MonteCarlo && self.samples_per_phase == 0 {
            return Err(Error::Config("samples_per_phase must be positive".into()));
        }
        Ok(())
    }
}

/// Phases `k pi / f`, `k = 0..f`.
pub fn phase_grid(f: usize) -> Vec<f64> {
    (0..f).map(|k| k as f64 * PI / f as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrixEstimate {
    pub elements: ComplexMatrix,
    /// `|rho(n, m) - rho_t(n, m)|`
    pub deviation: RealMatrix,
    /// Change of each element under panel refinement (zero for sampled data).
    pub residual: RealMatrix,
    pub config: ScanConfig,
    pub state: StateSpec,
    pub eta: f64,
}

impl DensityMatrixEstimate {
    pub fn max_deviation(&self) -> f64 {
        self.deviation.max()
    }

    pub fn max_residual(&self) -> f64 {
        self.residual.max()
    }

    pub fn trace(&self) -> f64 {
        self.elements.trace().re
    }

    /// Largest `|rho(n, m) - conj(rho(m, n))|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.elements
            .iter()
            .map(|(n, m, v)| (v - self.elements.get(m, n).conj()).norm())
            .fold(0.0, f64::max)
    }
}

/// Statistical error amplitudes per single measurement. Divide by `sqrt(N)`
/// for an experiment with `N` records (see [`ErrorMatrix::for_records`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorMatrix {
    pub re_sigma: RealMatrix,
    pub im_sigma: RealMatrix,
    pub sigma: RealMatrix,
}

impl ErrorMatrix {
    fn from_parts(re_sigma: RealMatrix, im_sigma: RealMatrix) -> Self {
        let sigma = re_sigma.map(|n, m, r| {
            let i = im_sigma.get(n, m);
            sqrt(r * r + i * i)
        });
        Self { re_sigma, im_sigma, sigma }
    }

    pub fn n_max(&self) -> usize {
        self.sigma.n_max()
    }

    /// Expected errors for `n_records` measurements.
    pub fn for_records(&self, n_records: usize) -> Self {
        let s = 1.0 / sqrt(n_records as f64);
        Self::from_parts(self.re_sigma.map(|_, _, v| v * s), self.im_sigma.map(|_, _, v| v * s))
    }
}

/// Sums of kernel moments over a set of phases.
#[derive(Debug, Clone)]
struct ScanSums {
    // per pair, averaged over phases: rho, and the cos^2/sin^2 weighted second moments
    first: Vec<Complex64>,
    second_re: Vec<f64>,
    second_im: Vec<f64>,
}

#[derive(Debug, Clone)]
struct GridKernels {
    rule: CompositeRule,
    table: KernelTable,
}

impl GridKernels {
    fn new(spec: &KernelSpec, rule: CompositeRule) -> Result<Self> {
        let table = KernelTable::build(spec, rule.nodes())?;
        Ok(Self { rule, table })
    }

    // density times weight at the nodes
    fn weighted_density(&self, pdf: &QuadratureDistribution, phi: f64) -> Result<Vec<f64>> {
        let p = pdf.density_on(self.rule.nodes(), phi)?;
        Ok(p.iter().zip(self.rule.weights()).map(|(p, w)| p * w).collect())
    }

    fn scan(&self, pdf: &QuadratureDistribution, f: usize, pairs: &[(usize, usize)], second: bool) -> Result<ScanSums> {
        let n_max = self.table.spec().n_max;
        let count = pair_count(n_max);
        let mut first = vec![Complex64::new(0.0, 0.0); count];
        let mut second_re = vec![0.0; if second { count } else { 0 }];
        let mut second_im = vec![0.0; if second { count } else { 0 }];
        let inv_f = 1.0 / f as f64;
        for phi in phase_grid(f) {
            let w = self.weighted_density(pdf, phi)?;
            for &(m, d) in pairs {
                let k = self.table.profile(m, d)?;
                let idx = pair_index(n_max, m, d);
                let rot = Complex64::from_polar(inv_f, d as f64 * phi);
                if second {
                    let (a, b) = k.iter().zip(&w).fold((0.0, 0.0), |(a, b), (k, w)| (a + w * k, b + w * k * k));
                    first[idx] += rot * a;
                    let c = cos(d as f64 * phi);
                    let s = sin(d as f64 * phi);
                    second_re[idx] += inv_f * c * c * b;
                    second_im[idx] += inv_f * s * s * b;
                } else {
                    let a: f64 = k.iter().zip(&w).map(|(k, w)| w * k).sum();
                    first[idx] += rot * a;
                }
            }
        }
        Ok(ScanSums { first, second_re, second_im })
    }
}

/// Deterministic phase-scan engine for one state and efficiency. Kernel tables
/// are built once and reused for every phase count.
#[derive(Debug, Clone)]
pub struct Reconstructor {
    state: StateSpec,
    eta: f64,
    cfg: ScanConfig,
    pdf: QuadratureDistribution,
    theory: ComplexMatrix,
    base: GridKernels,
    refined: GridKernels,
}

impl Reconstructor {
    pub fn new(state: &StateSpec, eta: f64, cfg: &ScanConfig) -> Result<Self> {
        check_eta(eta)?;
        cfg.validate()?;
        let pdf = quadrature_pdf(state, eta)?;
        let spec = KernelSpec::for_eta(eta, cfg.n_max)?;
        let rule = x_rule(&pdf, &spec, &cfg.x_quadrature);
        let refined = GridKernels::new(&spec, rule.refined())?;
        let base = GridKernels::new(&spec, rule)?;
        let theory = theoretical_dm(state, cfg.n_max)?.elements;
        Ok(Self { state: *state, eta, cfg: *cfg, pdf, theory, base, refined })
    }

    pub fn n_max(&self) -> usize {
        self.cfg.n_max
    }

    pub fn grid_len(&self) -> usize {
        self.base.rule.len()
    }

    fn all_pairs(&self) -> Vec<(usize, usize)> {
        let n_max = self.cfg.n_max;
        (0..=n_max).flat_map(|d| (0..=(n_max - d)).map(move |m| (m, d))).collect()
    }

    fn assemble(&self, f: usize, sums: &ScanSums, residual: Option<&ScanSums>) -> Result<DensityMatrixEstimate> {
        let n_max = self.cfg.n_max;
        let elements = ComplexMatrix::from_fn(n_max, |n, m| {
            if n >= m {
                sums.first[pair_index(n_max, m, n - m)]
            } else {
                sums.first[pair_index(n_max, n, m - n)].conj()
            }
        });
        let deviation = elements.map(|n, m, v| (v - self.theory.get(n, m)).norm());
        let residual = match residual {
            Some(fine) => elements.map(|n, m, v| {
                let (lo, hi) = (n.min(m), n.max(m));
                let r = fine.first[pair_index(n_max, lo, hi - lo)];
                let r = if n >= m { r } else { r.conj() };
                (v - r).norm()
            }),
            None => RealMatrix::zeros(n_max),
        };
        let worst = residual.max();
        if worst > RESIDUAL_TOLERANCE {
            return Err(Error::NonConvergence { residual: worst });
        }
        let mut config = self.cfg;
        config.f = f;
        config.mode = ScanMode::Deterministic;
        Ok(DensityMatrixEstimate { elements, deviation, residual, config, state: self.state, eta: self.eta })
    }

    /// Full estimate with `f` phases, including the refinement residual.
    pub fn estimate(&self, f: usize) -> Result<DensityMatrixEstimate> {
        check_f(f)?;
        let pairs = self.all_pairs();
        let coarse = self.base.scan(&self.pdf, f, &pairs, false)?;
        let fine = self.refined.scan(&self.pdf, f, &pairs, false)?;
        self.assemble(f, &coarse, Some(&fine))
    }

    /// Estimate on the base grid only.
    pub fn estimate_unchecked(&self, f: usize) -> Result<DensityMatrixEstimate> {
        check_f(f)?;
        let coarse = self.base.scan(&self.pdf, f, &self.all_pairs(), false)?;
        self.assemble(f, &coarse, None)
    }

    /// `rho(n, m)` and its deviation from the exact value, base grid only.
    pub fn element(&self, f: usize, n: usize, m: usize) -> Result<(Complex64, f64)> {
        check_f(f)?;
        let (lo, hi) = (n.min(m), n.max(m));
        if hi > self.cfg.n_max {
            return Err(Error::IndexOutOfRange { index: hi, limit: self.cfg.n_max });
        }
        let sums = self.base.scan(&self.pdf, f, &[(lo, hi - lo)], false)?;
        let v = sums.first[pair_index(self.cfg.n_max, lo, hi - lo)];
        let v = if n >= m { v } else { v.conj() };
        Ok((v, (v - self.theory.get(n, m)).norm()))
    }

    /// Single-measurement error amplitudes with `f` phases.
    pub fn errors(&self, f: usize) -> Result<ErrorMatrix> {
        check_f(f)?;
        let n_max = self.cfg.n_max;
        let sums = self.base.scan(&self.pdf, f, &self.all_pairs(), true)?;
        let part = |n: usize, m: usize, real: bool| -> f64 {
            let (lo, hi) = (n.min(m), n.max(m));
            if !real && lo == hi {
                return 0.0;
            }
            let idx = pair_index(n_max, lo, hi - lo);
            let mean = if real { sums.first[idx].re } else { sums.first[idx].im };
            let second = if real { sums.second_re[idx] } else { sums.second_im[idx] };
            sqrt((second - mean * mean).max(0.0))
        };
        let re = RealMatrix::from_fn(n_max, |n, m| part(n, m, true));
        let im = RealMatrix::from_fn(n_max, |n, m| part(n, m, false));
        Ok(ErrorMatrix::from_parts(re, im))
    }
}

fn check_f(f: usize) -> Result<()> {
    if f == 0 {
        Err(Error::Config("the number of phases f must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Composite rule covering every phase's distribution, with panels no wider
/// than one period of the fastest kernel oscillation.
pub fn x_rule(pdf: &QuadratureDistribution, spec: &KernelSpec, q: &XQuadrature) -> CompositeRule {
    let reach = pdf.displacement().norm() + q.extent_sigmas * pdf.max_std_dev();
    let width = q.panel_width.unwrap_or_else(|| {
        let k_max = 2.0 * spec.chi * sqrt((4 * (spec.n_max + 1) + 2) as f64);
        (2.0 * PI / k_max).min(0.5)
    });
    CompositeRule::with_max_width(-reach, reach, width, q.order)
}

/// Deterministic (or sampled, per `cfg.mode`) estimate of the density matrix.
pub fn reconstruct(state: &StateSpec, eta: f64, cfg: &ScanConfig) -> Result<DensityMatrixEstimate> {
    match cfg.mode {
        ScanMode::Deterministic => Reconstructor::new(state, eta, cfg)?.estimate(cfg.f),
        ScanMode::MonteCarlo => Ok(mc_experiment(state, eta, cfg, 0)?.estimate),
    }
}

/// Smallest `f <= f_search_max` with `max epsilon < threshold` at both `f`
/// and `f + 1`.
pub fn min_phases(state: &StateSpec, eta: f64, threshold: f64, f_search_max: usize, cfg: &ScanConfig) -> Result<usize> {
    let engine = Reconstructor::new(state, eta, cfg)?;
    min_phases_with(&engine, threshold, f_search_max)
}

pub fn min_phases_with(engine: &Reconstructor, threshold: f64, f_search_max: usize) -> Result<usize> {
    let mut previous_ok = false;
    for f in 1..=(f_search_max + 1) {
        let ok = engine.estimate_unchecked(f)?.max_deviation() < threshold;
        if ok && previous_ok {
            // one refinement check at the accepted phase count
            engine.estimate(f - 1)?;
            return Ok(f - 1);
        }
        previous_ok = ok;
    }
    Err(Error::ThresholdNotReached { f_max: f_search_max, threshold })
}

/// `epsilon(n, m)` for each phase count in `f_list`.
pub fn deviation_curve(
    state: &StateSpec,
    eta: f64,
    element: (usize, usize),
    f_list: &[usize],
    cfg: &ScanConfig,
) -> Result<Vec<(usize, f64)>> {
    let engine = Reconstructor::new(state, eta, cfg)?;
    f_list.iter().map(|&f| Ok((f, engine.element(f, element.0, element.1)?.1))).collect()
}

/// Single-measurement statistical errors `|sigma(n, m)|`, by deterministic
/// integration of the kernel second moments over `cfg.f` phases.
pub fn statistical_errors(state: &StateSpec, eta: f64, cfg: &ScanConfig) -> Result<ErrorMatrix> {
    Reconstructor::new(state, eta, cfg)?.errors(cfg.f)
}

/// One homodyne outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomodyneRecord {
    pub phase_index: usize,
    pub phi: f64,
    pub x: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub state: StateSpec,
    pub eta: f64,
    pub f: usize,
    #[serde(rename = "N")]
    pub n_records: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomodyneDataset {
    pub meta: DatasetMeta,
    pub records: Vec<HomodyneRecord>,
}

/// Random stream for phase `k`: ChaCha8 seeded with `seed`, stream `k`.
pub fn phase_rng(seed: u64, phase_index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(phase_index as u64);
    rng
}

/// Outcomes for phase `k` of `f`.
pub fn simulate_phase(pdf: &QuadratureDistribution, f: usize, k: usize, samples: usize, seed: u64) -> Result<Vec<f64>> {
    let phi = k as f64 * PI / f as f64;
    let mut rng = phase_rng(seed, k);
    (0..samples).map(|_| pdf.sample(phi, &mut rng)).collect()
}

pub fn simulate_dataset(state: &StateSpec, eta: f64, f: usize, samples_per_phase: usize, seed: u64) -> Result<HomodyneDataset> {
    check_f(f)?;
    let pdf = quadrature_pdf(state, eta)?;
    let mut records = Vec::with_capacity(f * samples_per_phase);
    for k in 0..f {
        let phi = k as f64 * PI / f as f64;
        for x in simulate_phase(&pdf, f, k, samples_per_phase, seed)? {
            records.push(HomodyneRecord { phase_index: k, phi, x });
        }
    }
    Ok(HomodyneDataset {
        meta: DatasetMeta { state: *state, eta, f, n_records: records.len(), seed },
        records,
    })
}

const CHUNK: usize = 1024;

/// Running sums of kernel values and squares over sampled records, for all
/// elements with `n, m <= n_max`. Accumulators for separate phases are merged
/// in phase order so results do not depend on scheduling.
#[derive(Debug, Clone)]
pub struct McAccumulator {
    spec: KernelSpec,
    count: usize,
    sum: Vec<Complex64>,
    sum_sq: Vec<f64>,
}

impl McAccumulator {
    pub fn new(eta: f64, n_max: usize) -> Result<Self> {
        let spec = KernelSpec::for_eta(eta, n_max)?;
        let count = pair_count(n_max);
        Ok(Self { spec, count: 0, sum: vec![Complex64::new(0.0, 0.0); count], sum_sq: vec![0.0; count] })
    }

    /// Adds records measured at phase `phi`.
    pub fn add(&mut self, phi: f64, xs: &[f64]) -> Result<()> {
        let n_max = self.spec.n_max;
        for chunk in xs.chunks(CHUNK) {
            let table = KernelTable::build(&self.spec, chunk)?;
            for d in 0..=n_max {
                let rot = Complex64::from_polar(1.0, d as f64 * phi);
                for m in 0..=(n_max - d) {
                    let idx = pair_index(n_max, m, d);
                    let (a, b) = table.profile(m, d)?.iter().fold((0.0, 0.0), |(a, b), k| (a + k, b + k * k));
                    self.sum[idx] += rot * a;
                    self.sum_sq[idx] += b;
                }
            }
            self.count += chunk.len();
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &McAccumulator) {
        self.count += other.count;
        for (a, b) in self.sum.iter_mut().zip(&other.sum) {
            *a += b;
        }
        for (a, b) in self.sum_sq.iter_mut().zip(&other.sum_sq) {
            *a += b;
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Sample mean of every element and its standard error
    /// `sqrt((<|K|^2> - |<K>|^2) / N)`.
    pub fn finish(&self) -> (ComplexMatrix, RealMatrix) {
        let n_max = self.spec.n_max;
        let nf = self.count.max(1) as f64;
        let pick = |n: usize, m: usize| pair_index(n_max, n.min(m), n.max(m) - n.min(m));
        let mean = ComplexMatrix::from_fn(n_max, |n, m| {
            let v = self.sum[pick(n, m)] / nf;
            if n >= m { v } else { v.conj() }
        });
        let se = RealMatrix::from_fn(n_max, |n, m| {
            let idx = pick(n, m);
            let var = self.sum_sq[idx] / nf - (self.sum[idx] / nf).norm_sqr();
            sqrt(var.max(0.0) / nf)
        });
        (mean, se)
    }
}

#[derive(Debug, Clone)]
pub struct McOutcome {
    pub estimate: DensityMatrixEstimate,
    pub std_errors: RealMatrix,
    pub dataset: HomodyneDataset,
}

/// Kernel averages over a recorded dataset.
pub fn estimate_from_dataset(ds: &HomodyneDataset, n_max: usize) -> Result<(DensityMatrixEstimate, RealMatrix)> {
    let meta = &ds.meta;
    let mut total = McAccumulator::new(meta.eta, n_max)?;
    let mut start = 0;
    // records are grouped by phase; accumulate per phase, merge in order
    while start < ds.records.len() {
        let k = ds.records[start].phase_index;
        let phi = ds.records[start].phi;
        let end = start + ds.records[start..].iter().take_while(|r| r.phase_index == k).count();
        let xs: Vec<f64> = ds.records[start..end].iter().map(|r| r.x).collect();
        let mut acc = McAccumulator::new(meta.eta, n_max)?;
        acc.add(phi, &xs)?;
        total.merge(&acc);
        start = end;
    }
    let per_phase = if meta.f > 0 { ds.records.len() / meta.f } else { 0 };
    let cfg = ScanConfig::monte_carlo(meta.f.max(1), n_max, per_phase.max(1));
    Ok(finish_mc(&meta.state, meta.eta, &cfg, &total)?)
}

pub(crate) fn finish_mc(
    state: &StateSpec,
    eta: f64,
    cfg: &ScanConfig,
    acc: &McAccumulator,
) -> Result<(DensityMatrixEstimate, RealMatrix)> {
    let (elements, se) = acc.finish();
    let theory = theoretical_dm(state, cfg.n_max)?.elements;
    let deviation = elements.map(|n, m, v| (v - theory.get(n, m)).norm());
    let estimate = DensityMatrixEstimate {
        elements,
        deviation,
        residual: RealMatrix::zeros(cfg.n_max),
        config: *cfg,
        state: *state,
        eta,
    };
    Ok((estimate, se))
}

/// Accumulator for one phase of a simulated experiment.
pub fn mc_phase(state: &StateSpec, eta: f64, cfg: &ScanConfig, seed: u64, k: usize) -> Result<(McAccumulator, Vec<f64>)> {
    let pdf = quadrature_pdf(state, eta)?;
    let xs = simulate_phase(&pdf, cfg.f, k, cfg.samples_per_phase, seed)?;
    let mut acc = McAccumulator::new(eta, cfg.n_max)?;
    acc.add(k as f64 * PI / cfg.f as f64, &xs)?;
    Ok((acc, xs))
}

/// Combines per-phase results (in phase order) into an outcome.
pub fn mc_assemble(
    state: &StateSpec,
    eta: f64,
    cfg: &ScanConfig,
    seed: u64,
    phases: Vec<(McAccumulator, Vec<f64>)>,
) -> Result<McOutcome> {
    let mut total = McAccumulator::new(eta, cfg.n_max)?;
    let mut records = Vec::with_capacity(cfg.f * cfg.samples_per_phase);
    for (k, (acc, xs)) in phases.into_iter().enumerate() {
        total.merge(&acc);
        let phi = k as f64 * PI / cfg.f as f64;
        records.extend(xs.into_iter().map(|x| HomodyneRecord { phase_index: k, phi, x }));
    }
    let (estimate, std_errors) = finish_mc(state, eta, cfg, &total)?;
    let dataset = HomodyneDataset {
        meta: DatasetMeta { state: *state, eta, f: cfg.f, n_records: records.len(), seed },
        records,
    };
    Ok(McOutcome { estimate, std_errors, dataset })
}

/// Simulated experiment: `cfg.f` phases with `cfg.samples_per_phase` records
/// each, kernels averaged over the records.
pub fn mc_experiment(state: &StateSpec, eta: f64, cfg: &ScanConfig, seed: u64) -> Result<McOutcome> {
    cfg.validate()?;
    let phases = (0..cfg.f).map(|k| mc_phase(state, eta, cfg, seed, k)).collect::<Result<Vec<_>>>()?;
    mc_assemble(state, eta, cfg, seed, phases)
}

/// Sampled estimate of one element and its standard error, without storing
/// records. Used for scaling studies.
pub fn mc_element(
    state: &StateSpec,
    eta: f64,
    f: usize,
    samples_per_phase: usize,
    seed: u64,
    element: (usize, usize),
) -> Result<(Complex64, f64)> {
    check_f(f)?;
    let (n, m) = element;
    let pdf = quadrature_pdf(state, eta)?;
    let mut total = McAccumulator::new(eta, n.max(m))?;
    for k in 0..f {
        let xs = simulate_phase(&pdf, f, k, samples_per_phase, seed)?;
        let mut acc = McAccumulator::new(eta, n.max(m))?;
        acc.add(k as f64 * PI / f as f64, &xs)?;
        total.merge(&acc);
    }
    let (mean, se) = total.finish();
    Ok((mean.get(n, m), se.get(n, m)))
}

