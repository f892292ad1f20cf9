//! Multiprecision evaluation of the lossy kernel as a k-integral. Used where
//! double-precision quadrature cancels too badly to serve as a reference.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

pub const PREC: u32 = 320;

fn f(v: f64) -> Float {
    Float::with_val(PREC, v)
}

/// Gauss-Legendre nodes and weights on [-1, 1], refined by Newton steps.
pub struct Rule {
    nodes: Vec<Float>,
    weights: Vec<Float>,
}

impl Rule {
    pub fn new(n: usize) -> Self {
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = f((std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos());
            for _ in 0..12 {
                let (p, dp) = legendre(n, &x);
                x -= p / dp;
            }
            let (_, dp) = legendre(n, &x);
            let w = Float::with_val(PREC, 2) / ((Float::with_val(PREC, 1) - x.clone().square()) * dp.square());
            nodes.push(x);
            weights.push(w);
        }
        Self { nodes, weights }
    }
}

/// `P_n(x)` and its derivative.
fn legendre(n: usize, x: &Float) -> (Float, Float) {
    let mut p0 = f(1.0);
    let mut p1 = x.clone();
    for j in 2..=n {
        let jf = j as f64;
        let p2 = (Float::with_val(PREC, 2.0 * jf - 1.0) * x.clone() * &p1 - Float::with_val(PREC, jf - 1.0) * &p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = Float::with_val(PREC, n) * (x.clone() * &p1 - &p0) / (x.clone().square() - 1u32);
    (p1, d)
}

struct Integrand {
    m: usize,
    d: usize,
    x: Float,
    damp: Float,
    lead: Float,
    a: Vec<Float>,
    b: Vec<Float>,
    shift: Float,
}

impl Integrand {
    fn new(m: usize, d: usize, x: f64, chi: f64) -> Self {
        let chi = f(chi);
        let damp = Float::with_val(PREC, 1) / (Float::with_val(PREC, 8) * chi.square());
        let mut fact = f(1.0);
        for j in 2..=d {
            fact *= j as u32;
        }
        let lead = Float::with_val(PREC, 1) / fact.sqrt();
        let a = (0..m).map(|j| Float::with_val(PREC, ((j + 1) * (j + 1 + d)) as u64).sqrt()).collect();
        let b = (0..m).map(|j| Float::with_val(PREC, (j * (j + d)) as u64).sqrt()).collect();
        let shift = Float::with_val(PREC, Constant::Pi) * d as u32 / 2u32;
        Self { m, d, x: f(x), damp, lead, a, b, shift }
    }

    fn eval(&self, k: &Float) -> Float {
        let k2 = k.clone().square();
        let s = k2.clone() / 4u32;
        let mut cur = self.lead.clone() * s.clone().pow(self.d as u32 / 2) * (-(self.damp.clone() * &k2)).exp();
        if self.d % 2 == 1 {
            cur *= s.clone().sqrt();
        }
        let mut prev = f(0.0);
        for j in 0..self.m {
            let c = Float::with_val(PREC, 2 * j + 1 + self.d) - &s;
            let next = (c * &cur - self.b[j].clone() * &prev) / &self.a[j];
            prev = cur;
            cur = next;
        }
        let phase = k.clone() * &self.x - &self.shift;
        cur * k / 2u32 * phase.cos()
    }
}

fn integrate(g: &Integrand, rule: &Rule, width: f64) -> Float {
    let k_turn = 2.0 * ((4 * g.m + 2 * g.d + 2) as f64).sqrt();
    let mut total = f(0.0);
    let mut peak = f(0.0);
    let width_mp = f(width);
    let half = width_mp.clone() / 2u32;
    let mut panel = 0u32;
    loop {
        // panel edges in full precision so neighbouring panels tile exactly
        let mid = width_mp.clone() * Float::with_val(PREC, f64::from(panel) + 0.5);
        let mut part = f(0.0);
        let mut panel_peak = f(0.0);
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            let k = mid.clone() + half.clone() * t;
            let v = g.eval(&k);
            let av = v.clone().abs();
            if av > panel_peak {
                panel_peak = av;
            }
            part += v * w;
        }
        total += part * &half;
        if panel_peak > peak {
            peak = panel_peak.clone();
        }
        panel += 1;
        let a = panel as f64 * width;
        if a > k_turn && panel_peak < peak.clone() * f(1e-45) {
            return total;
        }
        assert!(a < 2000.0, "integrand does not decay");
    }
}

/// Kernel value at phase zero together with the change under panel halving.
pub fn kernel(m: usize, d: usize, x: f64, chi: f64, rule: &Rule) -> (f64, f64) {
    let g = Integrand::new(m, d, x, chi);
    let width = 1.5 / (x.abs() + ((m + d + 1) as f64).sqrt() + 1.0);
    let coarse = integrate(&g, rule, width);
    let fine = integrate(&g, rule, 0.5 * width);
    let diff = (coarse - &fine).abs();
    (fine.to_f64(), diff.to_f64())
}
