//! Spatial pump configuration: wavevector sweep, coupling ramps, induced
//! coupling strength, and forward/backward phase mismatch.

use serde::Serialize;

use crate::circuit::{wavevector, DispersionForm, Mode, ModePair};
use crate::error::{Error, Result};

/// Shape of the modulation-depth ramp along the device.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RampShape {
    /// 4 (L-x) x / L^2 scaling, zero at both ends, peak at the center.
    Quadratic,
    /// Two-sided generalized Gaussian exp(-|x/L - 1/2|^p) with per-side
    /// exponents and a per-side scale factor s = exp(-(1/2)^p) so the
    /// profile is exactly zero at the ends and peaks at the center. The
    /// ramp-up side is deliberately fuller for exponents (3, 2).
    GeneralizedGaussian { p_up: f64, p_down: f64 },
    /// No ramp: full depth over the whole device.
    Constant,
}

/// Pump configuration over a device of `length` unit cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PumpProfile {
    /// Device length L in unit cells.
    pub length: u32,
    /// Pump wavevector at the device center (rad/cell).
    pub k_center: f64,
    /// Sweep half-range alpha (rad/cell): k_p runs K -+ alpha over [0, L].
    pub alpha: f64,
    /// Pump angular frequency (rad/s).
    pub omega_p: f64,
    /// Peak modulation depth.
    pub m0: f64,
    /// Ramp shape of the modulation depth.
    pub ramp: RampShape,
}

/// Phase-mismatch sample at one position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MismatchSample {
    /// Position (cells).
    pub x: f64,
    /// Forward mismatch k_o - k_e - k_p(x) (rad/cell).
    pub dk_f: f64,
    /// Backward mismatch k_o - k_e + k_p(x) (rad/cell).
    pub dk_b: f64,
    /// Coupling strength at x (rad/cell).
    pub kappa: f64,
}

impl PumpProfile {
    /// Validated constructor.
    pub fn new(
        length: u32,
        k_center: f64,
        alpha: f64,
        omega_p: f64,
        m0: f64,
        ramp: RampShape,
    ) -> Result<Self> {
        if length < 2 {
            return Err(Error::InvalidParameter(format!(
                "device length must be at least 2 cells, got {length}"
            )));
        }
        if !(alpha >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be non-negative, got {alpha}"
            )));
        }
        if !(0.0..1.0).contains(&m0) {
            return Err(Error::InvalidParameter(format!(
                "m0 must lie in [0, 1), got {m0}"
            )));
        }
        if !(omega_p > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "pump frequency must be positive, got {omega_p:.3e} rad/s"
            )));
        }
        if !(k_center - alpha > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "pump must propagate forward over the whole device: K - alpha = {:.6} rad/cell",
                k_center - alpha
            )));
        }
        if let RampShape::GeneralizedGaussian { p_up, p_down } = ramp {
            if !(p_up >= 1.0) || !(p_down >= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "generalized Gaussian exponents must be >= 1, got ({p_up}, {p_down})"
                )));
            }
        }
        Ok(PumpProfile {
            length,
            k_center,
            alpha,
            omega_p,
            m0,
            ramp,
        })
    }

    /// Device length as a float (cells).
    pub fn len(&self) -> f64 {
        f64::from(self.length)
    }

    fn check_x(&self, x: f64) -> Result<()> {
        if x < 0.0 || x > self.len() || !x.is_finite() {
            return Err(Error::PositionOutOfRange {
                x,
                length: self.len(),
            });
        }
        Ok(())
    }

    /// Instantaneous pump wavevector k_p(x) = K + (2 alpha / L)(x - L/2).
    pub fn pump_wavevector(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        let l = self.len();
        Ok(self.k_center + 2.0 * self.alpha / l * (x - l / 2.0))
    }

    /// Accumulated pump phase int_0^x k_p dx', in closed form (the
    /// integrand is affine, so the antiderivative is quadratic).
    pub fn accumulated_phase(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        let l = self.len();
        Ok(self.k_center * x + self.alpha / l * x * x - self.alpha * x)
    }

    /// Modulation depth m(x) of the selected ramp.
    pub fn modulation_depth(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        let l = self.len();
        Ok(match self.ramp {
            RampShape::Constant => self.m0,
            RampShape::Quadratic => self.m0 * 4.0 * (l - x) * x / (l * l),
            RampShape::GeneralizedGaussian { p_up, p_down } => {
                let u = (x / l - 0.5).abs();
                let p = if x <= l / 2.0 { p_up } else { p_down };
                let s = (-(0.5f64.powf(p))).exp();
                self.m0 * ((-(u.powf(p))).exp() - s) / (1.0 - s)
            }
        })
    }

    /// Spatial derivative dm/dx of the ramp, in closed form.
    ///
    /// The generalized Gaussian has a derivative kink at L/2; this returns
    /// the one-sided value of the side `x` belongs to (x = L/2 counts as
    /// the ramp-up side).
    pub fn modulation_depth_derivative(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        let l = self.len();
        Ok(match self.ramp {
            RampShape::Constant => 0.0,
            RampShape::Quadratic => self.m0 * 4.0 * (l - 2.0 * x) / (l * l),
            RampShape::GeneralizedGaussian { p_up, p_down } => {
                let u = (x / l - 0.5).abs();
                let (p, sign) = if x <= l / 2.0 {
                    (p_up, 1.0) // u decreases with x on the way up
                } else {
                    (p_down, -1.0)
                };
                let s = (-(0.5f64.powf(p))).exp();
                if u == 0.0 && p < 2.0 {
                    0.0 // |u|^(p-1) not differentiable; profile peak anyway
                } else {
                    sign * self.m0 / (1.0 - s) * (-(u.powf(p))).exp() * p * u.powf(p - 1.0) / l
                }
            }
        })
    }

    /// Frequency-dependent coupling strength
    /// kappa(x) = sqrt(k_e(omega_e) k_o(omega_e + omega_p)) m(x).
    pub fn coupling_strength(
        &self,
        modes: &ModePair,
        omega_e: f64,
        x: f64,
        form: DispersionForm,
    ) -> Result<f64> {
        let (k_e, k_o) = self.signal_wavevectors(modes, omega_e, form)?;
        Ok((k_e * k_o).sqrt() * self.modulation_depth(x)?)
    }

    /// Even-mode and up-converted odd-mode wavevectors for a signal at
    /// `omega_e`.
    pub fn signal_wavevectors(
        &self,
        modes: &ModePair,
        omega_e: f64,
        form: DispersionForm,
    ) -> Result<(f64, f64)> {
        if !(omega_e > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "signal frequency must be positive, got {omega_e:.3e} rad/s"
            )));
        }
        let k_e = wavevector(modes, Mode::Even, omega_e, form)?;
        let k_o = wavevector(modes, Mode::Odd, omega_e + self.omega_p, form)?;
        Ok((k_e, k_o))
    }

    /// Phase mismatch and coupling at one position.
    pub fn mismatch(
        &self,
        modes: &ModePair,
        omega_e: f64,
        x: f64,
        form: DispersionForm,
    ) -> Result<MismatchSample> {
        let (k_e, k_o) = self.signal_wavevectors(modes, omega_e, form)?;
        let k_p = self.pump_wavevector(x)?;
        let gap = k_o - k_e;
        Ok(MismatchSample {
            x,
            dk_f: gap - k_p,
            dk_b: gap + k_p,
            kappa: (k_e * k_o).sqrt() * self.modulation_depth(x)?,
        })
    }
}

/// Pump center wavevector that yields zero forward mismatch at the device
/// center for a signal at `omega_center`:
/// K = k_o(omega_center + omega_p) - k_e(omega_center).
pub fn default_k_center(
    modes: &ModePair,
    omega_p: f64,
    omega_center: f64,
    form: DispersionForm,
) -> Result<f64> {
    let k_e = wavevector(modes, Mode::Even, omega_center, form)?;
    let k_o = wavevector(modes, Mode::Odd, omega_center + omega_p, form)?;
    Ok(k_o - k_e)
}

/// Signal frequency band (rad/s) over which the swept pump can be exactly
/// phase matched somewhere in the device: solves
/// k_o(omega + omega_p) - k_e(omega) = K -+ alpha by bisection.
///
/// The band edges depend on the dispersion form; they are computed
/// numerically rather than quoted.
pub fn phase_matched_band(
    modes: &ModePair,
    profile: &PumpProfile,
    form: DispersionForm,
) -> Result<(f64, f64)> {
    let gap = |omega: f64| -> Result<f64> {
        let k_e = wavevector(modes, Mode::Even, omega, form)?;
        let k_o = wavevector(modes, Mode::Odd, omega + profile.omega_p, form)?;
        Ok(k_o - k_e)
    };
    let lo_target = profile.k_center - profile.alpha;
    let hi_target = profile.k_center + profile.alpha;

    // The gap is monotone in omega below the plasma cutoff.
    let omega_min = 1e-3 * profile.omega_p.max(1e6);
    let mut omega_max = omega_min * 2.0;
    let cutoff = match form {
        DispersionForm::Exact => modes.wj_o - profile.omega_p,
        DispersionForm::Linear => f64::INFINITY,
    };
    while gap(omega_max)? < hi_target {
        omega_max *= 1.5;
        if omega_max >= cutoff {
            omega_max = cutoff * (1.0 - 1e-9);
            if gap(omega_max)? < hi_target {
                return Err(Error::InvalidParameter(
                    "pump sweep range extends beyond the dispersive band".into(),
                ));
            }
            break;
        }
    }
    if gap(omega_min)? > lo_target {
        return Err(Error::InvalidParameter(
            "pump sweep range starts below zero signal frequency".into(),
        ));
    }

    let bisect = |target: f64, mut lo: f64, mut hi: f64| -> Result<f64> {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if gap(mid)? < target {
                lo = mid;
            } else {
                hi = mid;
            }
            if (hi - lo) / hi < 1e-12 {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    };
    let omega_lo = bisect(lo_target, omega_min, omega_max)?;
    let omega_hi = bisect(hi_target, omega_lo, omega_max)?;
    Ok((omega_lo, omega_hi))
}
