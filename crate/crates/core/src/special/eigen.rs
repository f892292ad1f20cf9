use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use libm::{exp, fabs, pow, sqrt};

use crate::error::{Error, Result};

/// Largest `|x|` accepted: the irregular solutions grow like `exp(x^2)`.
pub const X_LIMIT: f64 = 25.0;

const MAX_STEP: f64 = 0.05;

/// Regular (`u_j`) and irregular (`v_j`) solutions of the oscillator equation in
/// the quadrature convention `a = x + d/dx / 2`, tabulated on a grid for
/// `j = 0..=j_max`.
///
/// `u_j` comes from the upward three-term recurrence. For `v_j` the upward
/// recurrence loses all accuracy once `|x|` exceeds about 4, so the top pair
/// `(v_{J-1}, v_J)` is integrated from its exact values at the origin and the
/// rest follows by downward recurrence.
#[derive(Debug, Clone)]
pub struct EigenfunctionTable {
    x: Vec<f64>,
    j_max: usize,
    u: Vec<f64>,
    v: Vec<f64>,
}

impl EigenfunctionTable {
    pub fn build(j_max: usize, x_grid: &[f64]) -> Result<Self> {
        let len = x_grid.len();
        for &x in x_grid {
            if !(fabs(x) <= X_LIMIT) {
                return Err(Error::Overflow { what: "eigenfunction table", x });
            }
        }
        let mut u = vec![0.0; (j_max + 1) * len];
        let mut v = vec![0.0; (j_max + 1) * len];
        let cu = pow(2.0 / PI, 0.25);
        let cv = pow(2.0 * PI, 0.25);

        for (i, &x) in x_grid.iter().enumerate() {
            let mut prev = 0.0;
            let mut cur = cu * exp(-x * x);
            u[i] = cur;
            for j in 0..j_max {
                let next = (2.0 * x * cur - sqrt(j as f64) * prev) / sqrt((j + 1) as f64);
                u[(j + 1) * len + i] = next;
                prev = cur;
                cur = next;
            }
        }

        // Top pair (v_{top-1}, v_top) with top >= 1.
        let top = j_max.max(1);
        let s = sqrt(top as f64);
        let mut start = vec![0.0; top + 1];
        start[1] = -cv / sqrt(2.0);
        for j in 1..top {
            start[j + 1] = -sqrt(j as f64 / (j + 1) as f64) * start[j - 1];
        }
        let mut order: Vec<usize> = (0..len).collect();
        order.sort_by(|&a, &b| fabs(x_grid[a]).total_cmp(&fabs(x_grid[b])));

        let mut pos = 0.0;
        let mut y = [start[top - 1], start[top]];
        let mut column = vec![0.0; top + 1];
        for &i in &order {
            let x = x_grid[i];
            let target = fabs(x);
            while pos < target {
                let h = (target - pos).min(MAX_STEP.min(1.0 / (pos + s + 1.0)));
                y = taylor_step(y, pos, s, h);
                pos += h;
            }
            pos = target;
            column[top - 1] = y[0];
            column[top] = y[1];
            for j in (1..top).rev() {
                column[j - 1] = (2.0 * target * column[j] - sqrt((j + 1) as f64) * column[j + 1]) / sqrt(j as f64);
            }
            // v_j(-x) = (-1)^(j+1) v_j(x)
            for j in 0..=j_max {
                let sign = if x < 0.0 && j % 2 == 0 { -1.0 } else { 1.0 };
                v[j * len + i] = sign * column[j];
            }
        }
        Ok(Self { x: x_grid.to_vec(), j_max, u, v })
    }

    pub fn x_grid(&self) -> &[f64] {
        &self.x
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn j_max(&self) -> usize {
        self.j_max
    }

    #[inline]
    pub fn u(&self, j: usize, i: usize) -> f64 {
        self.u[j * self.x.len() + i]
    }

    #[inline]
    pub fn v(&self, j: usize, i: usize) -> f64 {
        self.v[j * self.x.len() + i]
    }

    pub fn u_row(&self, j: usize) -> Result<&[f64]> {
        self.check(j)?;
        let len = self.x.len();
        Ok(&self.u[j * len..(j + 1) * len])
    }

    pub fn v_row(&self, j: usize) -> Result<&[f64]> {
        self.check(j)?;
        let len = self.x.len();
        Ok(&self.v[j * len..(j + 1) * len])
    }

    pub(crate) fn check(&self, j: usize) -> Result<()> {
        if j > self.j_max {
            Err(Error::IndexOutOfRange { index: j, limit: self.j_max })
        } else {
            Ok(())
        }
    }
}

// One Taylor step of y' = [[2x, -2s], [2s, -2x]] y from x0 over h.
fn taylor_step(y0: [f64; 2], x0: f64, s: f64, h: f64) -> [f64; 2] {
    let mut prev = [0.0f64; 2];
    let mut cur = y0;
    let mut sum = y0;
    let mut hk = 1.0;
    let mut small = 0;
    for k in 0..400usize {
        let kp = (k + 1) as f64;
        let next = [
            (2.0 * x0 * cur[0] - 2.0 * s * cur[1] + 2.0 * prev[0]) / kp,
            (2.0 * s * cur[0] - 2.0 * x0 * cur[1] - 2.0 * prev[1]) / kp,
        ];
        hk *= h;
        let t0 = next[0] * hk;
        let t1 = next[1] * hk;
        sum[0] += t0;
        sum[1] += t1;
        let scale = fabs(sum[0]) + fabs(sum[1]);
        if fabs(t0) + fabs(t1) <= 1e-18 * scale {
            small += 1;
            if small >= 2 && k >= 8 {
                break;
            }
        } else {
            small = 0;
        }
        prev = cur;
        cur = next;
    }
    sum
}

/// Values `(u_j(x), v_j(x))` for `j = 0..=j_max` at a single point.
pub fn eigenfunctions_at(x: f64, j_max: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let t = EigenfunctionTable::build(j_max, &[x])?;
    Ok((t.u, t.v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::dawson;

    fn c() -> f64 {
        pow(2.0 * PI, 0.25)
    }

    #[test]
    fn lowest_pair_closed_forms() {
        let xs = [-3.0, -1.2, -0.3, 0.0, 0.4, 1.0, 2.5, 4.0, 6.0];
        let t = EigenfunctionTable::build(3, &xs).unwrap();
        for (i, &x) in xs.iter().enumerate() {
            let u0 = pow(2.0 / PI, 0.25) * exp(-x * x);
            let v0 = c() * exp(x * x) * dawson(sqrt(2.0) * x);
            let v1 = 2.0 * x * v0 - c() * exp(x * x) / sqrt(2.0);
            assert!((t.u(0, i) - u0).abs() < 1e-15);
            assert!((t.v(0, i) - v0).abs() <= 1e-12 * v0.abs().max(1.0), "x={x}");
            assert!((t.v(1, i) - v1).abs() <= 1e-12 * v1.abs().max(1.0), "x={x}");
        }
    }

    #[test]
    fn v1_at_origin() {
        let t = EigenfunctionTable::build(1, &[0.0]).unwrap();
        assert!((t.v(1, 0) + 1.119_515_134_920).abs() < 1e-11);
        assert_eq!(t.v(0, 0), 0.0);
    }

    #[test]
    fn rejects_huge_arguments() {
        assert!(matches!(EigenfunctionTable::build(2, &[30.0]), Err(Error::Overflow { .. })));
        let t = EigenfunctionTable::build(2, &[0.5]).unwrap();
        assert!(matches!(t.v_row(3), Err(Error::IndexOutOfRange { index: 3, limit: 2 })));
    }
}
