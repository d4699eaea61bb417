//! Adiabaticity diagnostics: instantaneous eigen-mixing angle, deviation
//! of the propagated state from the followed eigenmode on the Bloch
//! sphere, and the first-order geometric estimate of the residual
//! excitation after the sweep.

use num_complex::Complex64;

use crate::circuit::{DispersionForm, ModePair};
use crate::dynamics::TrajectoryPoint;
use crate::error::{Error, Result};
use crate::pump::PumpProfile;

type C = Complex64;

/// One sample of the adiabatic diagnostics along the device.
#[derive(Debug, Clone, Copy)]
pub struct AdiabaticSample {
    pub x: f64,
    /// Eigen-mixing angle atan2(kappa, dk_f) in [0, pi].
    pub theta_adi: f64,
    /// Bloch angle between the state and the followed eigen-axis.
    pub theta_dev: f64,
    /// Eigenvalue gap sqrt(kappa^2 + dk_f^2) (rad/cell).
    pub g: f64,
}

/// Deviation-angle diagnostics of one forward conversion run.
#[derive(Debug, Clone)]
pub struct AdiabaticTrace {
    pub samples: Vec<AdiabaticSample>,
    /// Deviation angle at the end of the device.
    pub theta_final: f64,
    /// Residual even-mode power |E_f(L)|^2.
    pub p_residual: f64,
}

/// First-order estimate of the residual excitation angle.
#[derive(Debug, Clone, Copy)]
pub struct GeometricEstimate {
    /// Complex residual angle theta_L.
    pub theta_l: C,
    /// |theta_L|^2 / 4, the estimated residual even-mode power.
    pub p_residual: f64,
    /// Quadrature grid step used for the converged result.
    pub grid_step: f64,
}

impl GeometricEstimate {
    /// Isolation equivalent of the estimate, in dB.
    pub fn isolation_db(&self) -> f64 {
        -10.0 * self.p_residual.max(1e-300).log10()
    }
}

/// Mixing angle of the instantaneous eigenmodes at `x`.
///
/// With kappa >= 0 this is atan2(kappa, dk_f) in [0, pi], continuous in x
/// wherever kappa > 0; at ramped ends it settles to 0 for dk_f > 0 and to
/// pi for dk_f < 0.
pub fn mixing_angle(
    profile: &PumpProfile,
    modes: &ModePair,
    omega_e: f64,
    x: f64,
    form: DispersionForm,
) -> Result<f64> {
    let s = profile.mismatch(modes, omega_e, x, form)?;
    Ok(f64::atan2(s.kappa, s.dk_f))
}

/// Analytic spatial derivative of the mixing angle,
/// (kappa' dk_f - kappa dk_f') / g^2.
fn mixing_angle_derivative(
    profile: &PumpProfile,
    modes: &ModePair,
    omega_e: f64,
    x: f64,
    form: DispersionForm,
) -> Result<f64> {
    let s = profile.mismatch(modes, omega_e, x, form)?;
    let (k_e, k_o) = profile.signal_wavevectors(modes, omega_e, form)?;
    let kappa_prime = (k_e * k_o).sqrt() * profile.modulation_depth_derivative(x)?;
    let dk_prime = -2.0 * profile.alpha / profile.len();
    let g2 = s.kappa * s.kappa + s.dk_f * s.dk_f;
    if g2 < 1e-300 {
        return Ok(0.0);
    }
    Ok((kappa_prime * s.dk_f - s.kappa * dk_prime) / g2)
}

/// Bloch vector of the forward two-level state (E_f, O_f).
fn bloch(e: C, o: C) -> Result<[f64; 3]> {
    let norm = e.norm_sqr() + o.norm_sqr();
    if norm < 1e-300 {
        return Err(Error::ZeroNormState { x: f64::NAN });
    }
    let cross = e * o.conj();
    Ok([
        2.0 * cross.re / norm,
        2.0 * cross.im / norm,
        (e.norm_sqr() - o.norm_sqr()) / norm,
    ])
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Deviation-angle trace of a recorded forward two-level trajectory.
///
/// At each sample the state's Bloch vector is compared with the eigen-axis
/// branch that is continuously connected to the state at x = 0; for a
/// signal entering in mode E with ramped coupling that branch starts at
/// the E pole and ends at the O pole.
pub fn deviation_angle(
    trajectory: &[TrajectoryPoint],
    profile: &PumpProfile,
    modes: &ModePair,
    omega_e: f64,
    form: DispersionForm,
) -> Result<AdiabaticTrace> {
    if trajectory.is_empty() {
        return Err(Error::InvalidParameter(
            "deviation angle needs a recorded trajectory".into(),
        ));
    }

    // Fix the branch sign from the first sample with a usable overlap.
    let mut branch = 0.0f64;
    for point in trajectory {
        let s = profile.mismatch(modes, omega_e, point.x, form)?;
        let g = (s.kappa * s.kappa + s.dk_f * s.dk_f).sqrt();
        if g < 1e-300 {
            continue;
        }
        let axis = [s.kappa / g, 0.0, -s.dk_f / g];
        let bv = bloch(point.state.e_f, point.state.o_f).map_err(|_| Error::ZeroNormState {
            x: point.x,
        })?;
        let overlap = dot3(&bv, &axis);
        if overlap.abs() > 1e-9 {
            branch = overlap.signum();
            break;
        }
    }
    if branch == 0.0 {
        branch = 1.0;
    }

    let mut samples = Vec::with_capacity(trajectory.len());
    for point in trajectory {
        let s = profile.mismatch(modes, omega_e, point.x, form)?;
        let g = (s.kappa * s.kappa + s.dk_f * s.dk_f).sqrt();
        let bv = bloch(point.state.e_f, point.state.o_f).map_err(|_| Error::ZeroNormState {
            x: point.x,
        })?;
        let theta_dev = if g < 1e-300 {
            0.0 // degenerate point: no eigen-axis to deviate from
        } else {
            let axis = [
                branch * s.kappa / g,
                0.0,
                branch * -s.dk_f / g,
            ];
            let norm = dot3(&bv, &bv).sqrt();
            (dot3(&bv, &axis) / norm).clamp(-1.0, 1.0).acos()
        };
        samples.push(AdiabaticSample {
            x: point.x,
            theta_adi: f64::atan2(s.kappa, s.dk_f),
            theta_dev,
            g,
        });
    }

    let last_point = trajectory.last().expect("nonempty");
    Ok(AdiabaticTrace {
        theta_final: samples.last().expect("nonempty").theta_dev,
        p_residual: last_point.state.e_f.norm_sqr(),
        samples,
    })
}

/// First-order geometric estimate of the residual angle,
/// theta_L = -int_0^L dtheta_adi/dx exp(-i int_0^x g) dx, plus the
/// eigenbasis projection jumps at hard (un-ramped) device ends.
///
/// The oscillatory integral uses a composite trapezoid resolving the
/// fastest phase rotation with at least 20 points per period; the result
/// must be stable under step halving to 1%.
pub fn geometric_estimate(
    profile: &PumpProfile,
    modes: &ModePair,
    omega_e: f64,
    form: DispersionForm,
) -> Result<GeometricEstimate> {
    let length = profile.len();
    let (k_e, k_o) = profile.signal_wavevectors(modes, omega_e, form)?;
    let kappa_max = (k_e * k_o).sqrt() * profile.m0;
    let dk_max = {
        let a = profile.mismatch(modes, omega_e, 0.0, form)?.dk_f.abs();
        let b = profile.mismatch(modes, omega_e, length, form)?.dk_f.abs();
        a.max(b)
    };
    let g_max = (kappa_max * kappa_max + dk_max * dk_max).sqrt();
    let base_step = if g_max > 0.0 {
        (std::f64::consts::TAU / (20.0 * g_max)).min(1.0)
    } else {
        1.0
    };

    let eval = |h_request: f64| -> Result<(C, f64)> {
        let n = (length / h_request).ceil() as usize;
        let h = length / n as f64;
        let mut phase = 0.0;
        let mut g_prev = 0.0;
        let mut integral = C::ZERO;
        for i in 0..=n {
            let x = i as f64 * h;
            let s = profile.mismatch(modes, omega_e, x.min(length), form)?;
            let g = (s.kappa * s.kappa + s.dk_f * s.dk_f).sqrt();
            if i > 0 {
                phase += 0.5 * (g + g_prev) * h;
            }
            g_prev = g;
            let dtheta = mixing_angle_derivative(profile, modes, omega_e, x.min(length), form)?;
            let weight = if i == 0 || i == n { 0.5 } else { 1.0 };
            integral += C::from_polar(dtheta * weight * h, -phase);
        }
        // Projection jumps where the coupling does not ramp to zero.
        let start = profile.mismatch(modes, omega_e, 0.0, form)?;
        let theta_in = if start.dk_f >= 0.0 { 0.0 } else { std::f64::consts::PI };
        let jump_in = f64::atan2(start.kappa, start.dk_f) - theta_in;
        let end = profile.mismatch(modes, omega_e, length, form)?;
        let theta_out = if end.dk_f >= 0.0 { 0.0 } else { std::f64::consts::PI };
        let jump_out = theta_out - f64::atan2(end.kappa, end.dk_f);
        let total = -(integral + C::from(jump_in) + C::from_polar(jump_out, -phase));
        Ok((total, h))
    };

    let (coarse, _) = eval(base_step)?;
    let (fine, h_fine) = eval(base_step / 2.0)?;
    let delta = (coarse - fine).norm();
    let limit = 0.01 * fine.norm() + 1e-12;
    if delta > limit {
        return Err(Error::QuadratureNonConvergence {
            delta_rel: delta / fine.norm().max(1e-300),
            limit: 0.01,
        });
    }
    Ok(GeometricEstimate {
        theta_l: fine,
        p_residual: fine.norm_sqr() / 4.0,
        grid_step: h_fine,
    })
}

/// Residual conversion floor of an un-ramped (constant-coupling) device,
/// kappa0^2 / (kappa0^2 + alpha^2): the eigenmode at the device ends is
/// rotated away from the bare modes by the finite kappa0/alpha ratio.
pub fn constant_ramp_residual_floor(kappa0: f64, alpha: f64) -> f64 {
    kappa0 * kappa0 / (kappa0 * kappa0 + alpha * alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{derive_modes, CircuitParams, Mode};
    use crate::dynamics::{ModelKind, PropagateOptions, Setup, StateVector};
    use crate::pump::{default_k_center, RampShape};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn modes() -> ModePair {
        derive_modes(&CircuitParams::default()).unwrap()
    }

    fn gg_profile(modes: &ModePair, length: u32, m0: f64) -> PumpProfile {
        let k = default_k_center(modes, TAU * 2e9, TAU * 6e9, DispersionForm::Exact).unwrap();
        PumpProfile::new(
            length,
            k,
            0.05,
            TAU * 2e9,
            m0,
            RampShape::GeneralizedGaussian {
                p_up: 3.0,
                p_down: 2.0,
            },
        )
        .unwrap()
    }

    #[test]
    fn mixing_angle_ends_and_center() {
        let modes = modes();
        let profile = gg_profile(&modes, 2000, 0.1);
        let omega = TAU * 6e9;
        let form = DispersionForm::Exact;
        // Ramped coupling: angle 0 entering (dk_f = +alpha), pi leaving.
        assert_abs_diff_eq!(
            mixing_angle(&profile, &modes, omega, 0.0, form).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            mixing_angle(&profile, &modes, omega, 2000.0, form).unwrap(),
            PI,
            epsilon = 1e-12
        );
        // Matched center: equal superposition.
        assert_abs_diff_eq!(
            mixing_angle(&profile, &modes, omega, 1000.0, form).unwrap(),
            FRAC_PI_2,
            epsilon = 1e-9
        );
    }

    #[test]
    fn mixing_angle_monotone_for_monotone_mismatch() {
        let modes = modes();
        let profile = gg_profile(&modes, 2000, 0.1);
        let omega = TAU * 6e9;
        let mut last = -1.0;
        for i in 0..=200 {
            let x = 10.0 * i as f64;
            let th = mixing_angle(&profile, &modes, omega, x, DispersionForm::Exact).unwrap();
            assert!(th >= last - 1e-12, "theta_adi must not decrease at x = {x}");
            last = th;
        }
    }

    #[test]
    fn mixing_angle_derivative_matches_central_differences() {
        let modes = modes();
        let profile = gg_profile(&modes, 2000, 0.1);
        let omega = TAU * 5.1e9;
        let form = DispersionForm::Exact;
        let h = 1e-3;
        for &x in &[120.0, 480.0, 990.0, 1240.0, 1870.0] {
            let ana = mixing_angle_derivative(&profile, &modes, omega, x, form).unwrap();
            let num = (mixing_angle(&profile, &modes, omega, x + h, form).unwrap()
                - mixing_angle(&profile, &modes, omega, x - h, form).unwrap())
                / (2.0 * h);
            assert_relative_eq!(ana, num, max_relative = 1e-6);
        }
    }

    fn forward_trace(
        modes: &ModePair,
        profile: &PumpProfile,
        omega: f64,
        stride: f64,
    ) -> Vec<crate::dynamics::TrajectoryPoint> {
        let setup = Setup::new(modes, profile, DispersionForm::Exact);
        setup
            .propagate(
                ModelKind::Simple2x2Forward,
                omega,
                &StateVector::forward_e(),
                &PropagateOptions {
                    stride: Some(stride),
                    ..PropagateOptions::default()
                },
            )
            .unwrap()
            .trajectory
    }

    #[test]
    fn deviation_angle_branch_convention_with_pump_off() {
        let modes = modes();
        let profile = gg_profile(&modes, 2000, 0.0);
        let omega = TAU * 6e9;
        let traj = forward_trace(&modes, &profile, omega, 10.0);
        let trace = deviation_angle(&traj, &profile, &modes, omega, DispersionForm::Exact).unwrap();
        // State pinned to E; the eigen-axis flips across the mismatch zero,
        // so theta_dev is 0 before and pi after the crossing.
        for s in &trace.samples {
            let dk = profile
                .mismatch(&modes, omega, s.x, DispersionForm::Exact)
                .unwrap()
                .dk_f;
            if dk > 1e-9 {
                assert_abs_diff_eq!(s.theta_dev, 0.0, epsilon = 1e-9);
            } else if dk < -1e-9 {
                assert_abs_diff_eq!(s.theta_dev, PI, epsilon = 1e-9);
            }
        }
        assert_relative_eq!(trace.p_residual, 1.0, max_relative = 1e-9);
    }

    #[test]
    fn deviation_angle_small_at_matched_frequency() {
        let modes = modes();
        let profile = gg_profile(&modes, 2000, 0.1);
        let omega = TAU * 6e9;
        let traj = forward_trace(&modes, &profile, omega, 5.0);
        let trace = deviation_angle(&traj, &profile, &modes, omega, DispersionForm::Exact).unwrap();
        assert!(
            trace.theta_final < 0.2,
            "theta_dev(L) = {} should clear the conversion threshold",
            trace.theta_final
        );
        // Final residual and final angle describe the same state.
        let by_angle = (trace.theta_final / 2.0).sin().powi(2);
        assert_abs_diff_eq!(trace.p_residual, by_angle, epsilon = 1e-6);
    }

    #[test]
    fn deviation_angle_shrinks_with_device_length() {
        let modes = modes();
        let omega = TAU * 6e9;
        let mut maxima = Vec::new();
        for length in [500u32, 1000, 2000] {
            let profile = gg_profile(&modes, length, 0.1);
            let traj = forward_trace(&modes, &profile, omega, f64::from(length) / 400.0);
            let trace =
                deviation_angle(&traj, &profile, &modes, omega, DispersionForm::Exact).unwrap();
            let max_dev = trace
                .samples
                .iter()
                .map(|s| s.theta_dev)
                .fold(0.0f64, f64::max);
            maxima.push(max_dev);
        }
        assert!(
            maxima[0] > maxima[1] && maxima[1] > maxima[2],
            "deviation maxima must fall with length: {maxima:?}"
        );
    }

    #[test]
    fn deviation_angle_rejects_empty_and_zero_norm() {
        let modes = modes();
        let profile = gg_profile(&modes, 2000, 0.1);
        let omega = TAU * 6e9;
        assert!(deviation_angle(&[], &profile, &modes, omega, DispersionForm::Exact).is_err());
        let zero = vec![crate::dynamics::TrajectoryPoint {
            x: 0.0,
            state: StateVector::default(),
        }];
        assert!(matches!(
            deviation_angle(&zero, &profile, &modes, omega, DispersionForm::Exact),
            Err(Error::ZeroNormState { .. })
        ));
    }

    #[test]
    fn geometric_estimate_zero_for_pump_off() {
        let modes = modes();
        let profile = gg_profile(&modes, 2000, 0.0);
        let est =
            geometric_estimate(&profile, &modes, TAU * 6e9, DispersionForm::Exact).unwrap();
        assert_abs_diff_eq!(est.theta_l.norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn geometric_estimate_clears_threshold_at_matched_frequency() {
        let modes = modes();
        let profile = gg_profile(&modes, 2000, 0.1);
        let est =
            geometric_estimate(&profile, &modes, TAU * 6e9, DispersionForm::Exact).unwrap();
        assert!(
            est.isolation_db() >= 20.0,
            "estimate gives only {:.2} dB",
            est.isolation_db()
        );
    }

    #[test]
    fn geometric_estimate_bounded_by_total_variation() {
        let modes = modes();
        let profile = gg_profile(&modes, 1200, 0.1);
        let omega = TAU * 5.4e9;
        let form = DispersionForm::Exact;
        let est = geometric_estimate(&profile, &modes, omega, form).unwrap();
        // Total variation of theta_adi on a fine grid.
        let n = 60_000;
        let h = profile.len() / n as f64;
        let mut tv = 0.0;
        let mut last = mixing_angle(&profile, &modes, omega, 0.0, form).unwrap();
        for i in 1..=n {
            let th = mixing_angle(&profile, &modes, omega, i as f64 * h, form).unwrap();
            tv += (th - last).abs();
            last = th;
        }
        assert!(
            est.theta_l.norm() <= tv * (1.0 + 1e-6),
            "|theta_L| = {} exceeds total variation {}",
            est.theta_l.norm(),
            tv
        );
    }

    #[test]
    fn geometric_estimate_constant_ramp_closed_form() {
        // Constant coupling and constant mismatch: the interior integrand
        // vanishes and only the projection jumps contribute, giving
        // |theta_L| = 2 theta_0 |sin(g L / 2)|.
        let modes = modes();
        let omega = TAU * 6e9;
        let form = DispersionForm::Exact;
        let gap = default_k_center(&modes, TAU * 2e9, omega, form).unwrap();
        let dk = 0.04;
        let length = 500u32;
        let k_e = crate::circuit::wavevector(&modes, Mode::Even, omega, form).unwrap();
        let k_o = crate::circuit::wavevector(&modes, Mode::Odd, omega + TAU * 2e9, form).unwrap();
        let kappa = 0.008;
        let m0 = kappa / (k_e * k_o).sqrt();
        let profile =
            PumpProfile::new(length, gap - dk, 0.0, TAU * 2e9, m0, RampShape::Constant).unwrap();
        let est = geometric_estimate(&profile, &modes, omega, form).unwrap();
        let g = (kappa * kappa + dk * dk).sqrt();
        let theta0 = f64::atan2(kappa, dk);
        let expect = 2.0 * theta0 * (0.5 * g * f64::from(length)).sin().abs();
        assert_relative_eq!(est.theta_l.norm(), expect, max_relative = 1e-3);
        // Trend check against the two-level conversion amplitude: for
        // kappa << dk the estimated residual tracks the exact one.
        let exact = kappa * kappa / (g * g) * (0.5 * g * f64::from(length)).sin().powi(2);
        assert_relative_eq!(est.p_residual, exact, max_relative = 0.2);
    }

    #[test]
    fn constant_ramp_floor_reference_value() {
        let xi = constant_ramp_residual_floor(0.023, 0.05);
        assert_abs_diff_eq!(xi, 0.175, epsilon = 1e-3);
        // About -7.6 dB isolation floor.
        assert_abs_diff_eq!(-10.0 * xi.log10(), 7.58, epsilon = 0.05);
    }
}
