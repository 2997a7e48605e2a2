//! Dormand–Prince 5(4) Runge–Kutta on small fixed-size states.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
// Difference between the 5th and embedded 4th order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Take one step of size `h`; returns the 5th order update and the error estimate.
pub fn dopri_step<const N: usize, F>(f: &F, t: f64, y: &[f64; N], h: f64) -> Result<([f64; N], [f64; N])>
where
    F: Fn(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let mut k = [[0.0; N]; 7];
    k[0] = f(t, y)?;
    for s in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = A[s][j];
            if a != 0.0 {
                for i in 0..N {
                    ys[i] += h * a * kj[i];
                }
            }
        }
        k[s] = f(t + C[s] * h, &ys)?;
    }
    let mut y_new = *y;
    let mut err = [0.0; N];
    for s in 0..7 {
        for i in 0..N {
            y_new[i] += h * B[s] * k[s][i];
            err[i] += h * E[s] * k[s][i];
        }
    }
    Ok((y_new, err))
}

#[derive(Clone, Copy, Debug)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-13,
            h_init: 1e-3,
            h_max: 0.1,
            h_min: 1e-14,
            max_steps: 200_000,
        }
    }
}

impl Dopri5 {
    /// Integrate from `t0` in the direction of `sign(h_init)` until `stop`
    /// returns true for an accepted state. All accepted states are returned,
    /// starting with `(t0, y0)`.
    pub fn integrate<const N: usize, F, S>(
        &self,
        f: &F,
        t0: f64,
        y0: [f64; N],
        direction: f64,
        mut stop: S,
    ) -> Result<Vec<(f64, [f64; N])>>
    where
        F: Fn(f64, &[f64; N]) -> Result<[f64; N]>,
        S: FnMut(f64, &[f64; N]) -> bool,
    {
        let dir = direction.signum();
        let mut out = vec![(t0, y0)];
        let (mut t, mut y) = (t0, y0);
        let mut h = self.h_init.abs();
        let mut steps = 0;
        while !stop(t, &y) {
            if steps >= self.max_steps {
                return Err(Error::Integrator(format!("step budget exhausted at t = {t}")));
            }
            steps += 1;
            match dopri_step(f, t, &y, dir * h) {
                Ok((y_new, err)) => {
                    let mut norm = 0.0f64;
                    for i in 0..N {
                        let sc = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
                        norm = norm.max((err[i] / sc).abs());
                    }
                    if !norm.is_finite() {
                        h *= 0.25;
                    } else if norm <= 1.0 {
                        t += dir * h;
                        y = y_new;
                        out.push((t, y));
                        let fac = if norm == 0.0 { 5.0 } else { (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0) };
                        h = (h * fac).min(self.h_max);
                    } else {
                        h *= (0.9 * norm.powf(-0.2)).clamp(0.1, 0.9);
                    }
                }
                // Stage evaluated outside the domain: shrink and retry.
                Err(_) => h *= 0.25,
            }
            if h < self.h_min {
                return Err(Error::Integrator(format!("step size underflow at t = {t}")));
            }
        }
        Ok(out)
    }
}

/// Fixed-step integration with `n` equal steps from `t0` to `t1`.
pub fn fixed_step<const N: usize, F>(f: &F, t0: f64, y0: [f64; N], t1: f64, n: usize) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let h = (t1 - t0) / n as f64;
    let mut y = y0;
    for i in 0..n {
        y = dopri_step(f, t0 + i as f64 * h, &y, h)?.0;
    }
    Ok(y)
}
