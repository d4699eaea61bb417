//! Adaptive Dormand-Prince 5(4) integrator for small complex systems.
//!
//! The state is a fixed-size array of complex amplitudes; the right-hand
//! side is any `Fn(x, &state) -> state`. Steps are error-controlled with
//! a hard cap on the step size so that oscillatory coefficients are always
//! resolved regardless of the controller's behavior. Integration direction
//! follows the sign of `x1 - x0`.

use num_complex::Complex64;

use crate::error::{Error, Result};

type C = Complex64;

/// Butcher tableau of the Dormand-Prince 5(4) pair.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C_NODES: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
/// 5th-order weights (same as the last row of A; FSAL pair).
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
/// Embedded 4th-order weights.
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 5.0;
const MAX_STEPS: usize = 50_000_000;

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    /// Relative tolerance of the embedded error estimate.
    pub rtol: f64,
    /// Absolute tolerance floor.
    pub atol: f64,
    /// Hard cap on |h|.
    pub max_step: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-10,
            atol: 1e-12,
            max_step: 1.0,
        }
    }
}

/// Step statistics of one integration.
#[derive(Debug, Clone, Copy, Default)]
pub struct OdeStats {
    pub steps: usize,
    pub rejected: usize,
}

fn rms_error_norm<const N: usize>(err: &[C; N], y: &[C; N], ynew: &[C; N], opts: &OdeOptions) -> f64 {
    let mut acc = 0.0;
    for i in 0..N {
        let scale = opts.atol + opts.rtol * y[i].norm().max(ynew[i].norm());
        let e = err[i].norm() / scale;
        acc += e * e;
    }
    (acc / N as f64).sqrt()
}

/// Integrate dy/dx = f(x, y) from `x0` to `x1` (either direction).
///
/// `on_sample` is invoked at every point of `samples` in traversal order;
/// the integrator lands on each sample exactly. Sample positions must lie
/// inside [min(x0,x1), max(x0,x1)] and be sorted in traversal direction.
pub fn integrate<const N: usize, F, S>(
    f: F,
    x0: f64,
    x1: f64,
    y0: [C; N],
    opts: &OdeOptions,
    samples: &[f64],
    mut on_sample: S,
) -> Result<([C; N], OdeStats)>
where
    F: Fn(f64, &[C; N]) -> [C; N],
    S: FnMut(f64, &[C; N]),
{
    let span = x1 - x0;
    if span == 0.0 {
        for &s in samples {
            on_sample(s, &y0);
        }
        return Ok((y0, OdeStats::default()));
    }
    let dir = span.signum();
    let mut stats = OdeStats::default();
    let mut y = y0;
    let mut x = x0;
    // Controller's preferred step magnitude; actual steps may be clipped
    // to land on sample points or the end without disturbing it.
    let mut h_ctrl = opts.max_step.min(span.abs());
    let min_step = span.abs() * 1e-13;

    let mut sample_iter = samples.iter().copied().peekable();
    // Emit any samples sitting exactly at the start.
    while let Some(&s) = sample_iter.peek() {
        if (s - x0).abs() <= f64::EPSILON * x0.abs().max(1.0) {
            on_sample(s, &y);
            sample_iter.next();
        } else {
            break;
        }
    }

    let mut k = [[C::ZERO; N]; 7];
    k[0] = f(x, &y);

    loop {
        let remaining = x1 - x;
        if remaining * dir <= f64::EPSILON * span.abs() {
            break;
        }
        // Clip to the end point and to the next sample boundary.
        let mut h_mag = h_ctrl.min(remaining.abs());
        let mut clipped = h_mag < h_ctrl;
        if let Some(&s) = sample_iter.peek() {
            let to_sample = (s - x).abs();
            if (s - x) * dir > 0.0 && h_mag >= to_sample {
                h_mag = to_sample;
                clipped = true;
            }
        }
        let h = h_mag * dir;

        for stage in 0..6 {
            let mut ys = y;
            for i in 0..N {
                let mut acc = C::ZERO;
                for j in 0..=stage {
                    if A[stage][j] != 0.0 {
                        acc += k[j][i] * A[stage][j];
                    }
                }
                ys[i] += acc * h;
            }
            k[stage + 1] = f(x + C_NODES[stage] * h, &ys);
        }

        let mut ynew = y;
        let mut err = [C::ZERO; N];
        for i in 0..N {
            let mut acc5 = C::ZERO;
            let mut acc_err = C::ZERO;
            for j in 0..7 {
                if B5[j] != 0.0 {
                    acc5 += k[j][i] * B5[j];
                }
                let d = B5[j] - B4[j];
                if d != 0.0 {
                    acc_err += k[j][i] * d;
                }
            }
            ynew[i] += acc5 * h;
            err[i] = acc_err * h;
        }

        let err_norm = rms_error_norm(&err, &y, &ynew, opts);
        let accepted = err_norm.is_finite() && err_norm <= 1.0;
        let fac = if !err_norm.is_finite() {
            FAC_MIN
        } else if err_norm == 0.0 {
            FAC_MAX
        } else {
            (SAFETY * err_norm.powf(-0.2)).clamp(FAC_MIN, FAC_MAX)
        };

        if accepted {
            stats.steps += 1;
            x += h;
            y = ynew;
            // FSAL: the seventh stage is f at the accepted point.
            k[0] = k[6];
            while let Some(&s) = sample_iter.peek() {
                if (s - x).abs() <= 1e-9 * span.abs() || (s - x) * dir <= 0.0 {
                    on_sample(s, &y);
                    sample_iter.next();
                } else {
                    break;
                }
            }
            h_ctrl = if clipped && fac >= 1.0 {
                // Boundary-shortened step: keep the controller's scale.
                h_ctrl.min(opts.max_step)
            } else {
                (h_mag * fac).min(opts.max_step)
            };
        } else {
            stats.rejected += 1;
            // k[0] still holds f at the unchanged (x, y).
            h_ctrl = h_mag * fac;
        }

        if h_ctrl < min_step {
            return Err(Error::IntegrationFailure {
                reason: "step size underflow".into(),
                x,
                step: h_ctrl,
                steps: stats.steps,
            });
        }
        if stats.steps + stats.rejected > MAX_STEPS {
            return Err(Error::IntegrationFailure {
                reason: "step budget exhausted".into(),
                x,
                step: h_ctrl,
                steps: stats.steps,
            });
        }
    }

    // Flush any samples at (or numerically past) the end point.
    for s in sample_iter {
        if (s - x1) * dir <= 1e-9 * span.abs() {
            on_sample(s, &y);
        }
    }
    Ok((y, stats))
}

/// Convenience wrapper without trajectory sampling.
pub fn integrate_to<const N: usize, F>(
    f: F,
    x0: f64,
    x1: f64,
    y0: [C; N],
    opts: &OdeOptions,
) -> Result<([C; N], OdeStats)>
where
    F: Fn(f64, &[C; N]) -> [C; N],
{
    integrate(f, x0, x1, y0, opts, &[], |_, _| {})
}
