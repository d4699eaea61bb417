//! Scattering figures of merit: isolation and transmission spectra, the
//! dielectric loss model, bandwidth extraction, device-length sweeps, and
//! the rotating-wave validity comparison.

use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{wavevector, DispersionForm, Mode, ModePair};
use crate::dynamics::{Drive, ModelKind, Setup};
use crate::error::{Error, Result};
use crate::pump::PumpProfile;

/// Dielectric dissipation of the transmission lines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LossModel {
    pub tan_delta: f64,
}

impl LossModel {
    pub fn new(tan_delta: f64) -> Result<Self> {
        if !(tan_delta >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "loss tangent must be non-negative, got {tan_delta}"
            )));
        }
        Ok(LossModel { tan_delta })
    }

    pub fn lossless() -> Self {
        LossModel { tan_delta: 0.0 }
    }
}

const DB_PER_NEPER: f64 = 8.685889638065035; // 20 log10(e)

/// Dielectric attenuation of one mode over `length` cells, in dB:
/// attenuation constant k(omega) tan_delta / 2 nepers per cell.
pub fn dielectric_loss_db(
    modes: &ModePair,
    omega: f64,
    mode: Mode,
    length: f64,
    loss: &LossModel,
    form: DispersionForm,
) -> Result<f64> {
    let k = wavevector(modes, mode, omega, form)?;
    Ok(DB_PER_NEPER * k * loss.tan_delta / 2.0 * length)
}

/// Per-frequency scattering summary.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRow {
    pub f_signal_hz: f64,
    /// Forward even-port rejection, -10 log10 |e_f(L)|^2.
    pub isolation_db: f64,
    /// Lossless backward through transmission, 10 log10 |e_b(0)|^2 (<= 0).
    pub backward_transmission_db: f64,
    /// Backward through loss plus dielectric loss (>= 0).
    pub insertion_loss_db: f64,
    /// |e_f(L)|^2 of the forward drive.
    pub forward_residual: f64,
    /// |o_b(0)|^2 of the backward drive (power lost to conversion).
    pub backward_converted: f64,
}

/// Frequency-resolved scattering spectra for one model.
#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub model: ModelKind,
    pub rows: Vec<SweepRow>,
}

fn power_db(p: f64) -> f64 {
    10.0 * p.max(1e-300).log10()
}

/// Scattering figures of merit at one signal frequency.
pub fn sweep_point(
    setup: &Setup,
    model: ModelKind,
    loss: &LossModel,
    f_signal_hz: f64,
) -> Result<SweepRow> {
    let omega = std::f64::consts::TAU * f_signal_hz;
    let run = || -> Result<SweepRow> {
        let fwd = setup.scatter(model, omega, Drive::ForwardE)?;
        let bwd = setup.scatter(model, omega, Drive::BackwardE)?;
        let through = bwd.backward_through_power();
        let backward_transmission_db = power_db(through);
        let dielectric = dielectric_loss_db(
            setup.modes,
            omega,
            Mode::Even,
            setup.profile.len(),
            loss,
            setup.dispersion,
        )?;
        Ok(SweepRow {
            f_signal_hz,
            isolation_db: -power_db(fwd.forward_residual_power()),
            backward_transmission_db,
            insertion_loss_db: -backward_transmission_db + dielectric,
            forward_residual: fwd.forward_residual_power(),
            backward_converted: bwd.backward_converted_power(),
        })
    };
    run().map_err(|source| Error::SweepFailure {
        f_signal_hz,
        source: Box::new(source),
    })
}

/// Scattering spectra over `n_points` evenly spaced frequencies.
///
/// Frequency points run in parallel; rows come back in ascending
/// frequency regardless of completion order.
pub fn frequency_sweep(
    setup: &Setup,
    model: ModelKind,
    loss: &LossModel,
    f_min_hz: f64,
    f_max_hz: f64,
    n_points: usize,
) -> Result<SweepResult> {
    if n_points < 2 || !(f_max_hz > f_min_hz) || !(f_min_hz > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "sweep needs an increasing positive band with at least 2 points, got [{f_min_hz:.3e}, {f_max_hz:.3e}] x {n_points}"
        )));
    }
    let step = (f_max_hz - f_min_hz) / (n_points - 1) as f64;
    let rows = (0..n_points)
        .into_par_iter()
        .map(|i| sweep_point(setup, model, loss, f_min_hz + step * i as f64))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { model, rows })
}

/// Largest contiguous frequency interval (Hz) with isolation at or above
/// `threshold_db`, crossing positions linearly interpolated.
pub fn isolation_window(result: &SweepResult, threshold_db: f64) -> Option<(f64, f64)> {
    let rows = &result.rows;
    if rows.len() < 2 {
        return None;
    }
    let mut best: Option<(f64, f64)> = None;
    let mut consider = |lo: f64, hi: f64| {
        if best.is_none_or(|(a, b)| hi - lo > b - a) {
            best = Some((lo, hi));
        }
    };
    let mut open: Option<f64> = None;
    for i in 0..rows.len() {
        let above = rows[i].isolation_db >= threshold_db;
        if above && open.is_none() {
            open = Some(if i == 0 {
                rows[0].f_signal_hz
            } else {
                cross(&rows[i - 1], &rows[i], threshold_db)
            });
        }
        if !above {
            if let Some(start) = open.take() {
                consider(start, cross(&rows[i - 1], &rows[i], threshold_db));
            }
        }
    }
    if let Some(start) = open {
        consider(start, rows.last().unwrap().f_signal_hz);
    }
    best
}

/// Width (Hz) of the largest contiguous interval with isolation at or
/// above `threshold_db`; 0 when the threshold is never reached.
pub fn bandwidth(result: &SweepResult, threshold_db: f64) -> f64 {
    isolation_window(result, threshold_db).map_or(0.0, |(lo, hi)| hi - lo)
}

fn cross(a: &SweepRow, b: &SweepRow, threshold_db: f64) -> f64 {
    let da = b.isolation_db - a.isolation_db;
    if da == 0.0 {
        return a.f_signal_hz;
    }
    a.f_signal_hz + (threshold_db - a.isolation_db) * (b.f_signal_hz - a.f_signal_hz) / da
}

/// Bandwidth of one device length.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LengthBandwidth {
    pub length: u32,
    pub bandwidth_hz: f64,
}

/// Isolation bandwidth for each device length, holding the rest of the
/// pump template fixed (same K, sweep range, depth, ramp).
#[allow(clippy::too_many_arguments)]
pub fn length_sweep(
    modes: &ModePair,
    template: &PumpProfile,
    dispersion: DispersionForm,
    model: ModelKind,
    loss: &LossModel,
    lengths: &[u32],
    threshold_db: f64,
    f_min_hz: f64,
    f_max_hz: f64,
    n_points: usize,
) -> Result<Vec<LengthBandwidth>> {
    lengths
        .iter()
        .map(|&length| {
            let profile = PumpProfile::new(
                length,
                template.k_center,
                template.alpha,
                template.omega_p,
                template.m0,
                template.ramp,
            )?;
            let setup = Setup::new(modes, &profile, dispersion);
            let sweep = frequency_sweep(&setup, model, loss, f_min_hz, f_max_hz, n_points)?;
            Ok(LengthBandwidth {
                length,
                bandwidth_hz: bandwidth(&sweep, threshold_db),
            })
        })
        .collect()
}

/// Per-frequency difference between the block-diagonal and full models.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RwaDelta {
    pub f_signal_hz: f64,
    pub isolation_rwa_db: f64,
    pub isolation_full_db: f64,
    pub delta_isolation_db: f64,
    pub backward_rwa_db: f64,
    pub backward_full_db: f64,
    pub delta_backward_db: f64,
}

/// Aligned spectra with and without the spatial rotating-wave reduction.
#[derive(Debug, Clone, Serialize)]
pub struct RwaComparison {
    pub rwa: SweepResult,
    pub full: SweepResult,
    pub deltas: Vec<RwaDelta>,
    /// Largest |delta isolation| over the whole band.
    pub max_abs_delta_isolation_db: f64,
    /// Largest |delta backward transmission| over the whole band.
    pub max_abs_delta_backward_db: f64,
}

impl RwaComparison {
    /// Largest isolation difference restricted to rows where both models
    /// report isolation below `threshold_db` (deep conversion nulls are
    /// excluded: decibels diverge as the residual power approaches zero).
    pub fn max_abs_delta_isolation_below(&self, threshold_db: f64) -> f64 {
        self.deltas
            .iter()
            .filter(|d| d.isolation_rwa_db < threshold_db && d.isolation_full_db < threshold_db)
            .map(|d| d.delta_isolation_db.abs())
            .fold(0.0, f64::max)
    }
}

/// Run the same sweep with the block-diagonal and the full model.
pub fn rwa_comparison(
    setup: &Setup,
    loss: &LossModel,
    f_min_hz: f64,
    f_max_hz: f64,
    n_points: usize,
) -> Result<RwaComparison> {
    let rwa = frequency_sweep(setup, ModelKind::Rwa4x4, loss, f_min_hz, f_max_hz, n_points)?;
    let full = frequency_sweep(setup, ModelKind::Full4x4, loss, f_min_hz, f_max_hz, n_points)?;
    let deltas: Vec<RwaDelta> = rwa
        .rows
        .iter()
        .zip(&full.rows)
        .map(|(r, f)| RwaDelta {
            f_signal_hz: r.f_signal_hz,
            isolation_rwa_db: r.isolation_db,
            isolation_full_db: f.isolation_db,
            delta_isolation_db: f.isolation_db - r.isolation_db,
            backward_rwa_db: r.backward_transmission_db,
            backward_full_db: f.backward_transmission_db,
            delta_backward_db: f.backward_transmission_db - r.backward_transmission_db,
        })
        .collect();
    let max_abs_delta_isolation_db = deltas
        .iter()
        .map(|d| d.delta_isolation_db.abs())
        .fold(0.0, f64::max);
    let max_abs_delta_backward_db = deltas
        .iter()
        .map(|d| d.delta_backward_db.abs())
        .fold(0.0, f64::max);
    Ok(RwaComparison {
        rwa,
        full,
        deltas,
        max_abs_delta_isolation_db,
        max_abs_delta_backward_db,
    })
}
