//! Subcommand implementations. Each command assembles its output files in
//! memory and returns them for atomic emission; `modes` reports on stdout.

use std::f64::consts::TAU;

use anyhow::{Context, Result};
use serde::Serialize;

use isolator::adiabatic::{deviation_angle, geometric_estimate};
use isolator::circuit::{wavevector, DispersionForm, Mode};
use isolator::dynamics::{Drive, ModelKind, PropagateOptions, Setup, StateVector};
use isolator::metrics::{
    frequency_sweep, isolation_window, length_sweep, rwa_comparison, LengthBandwidth, SweepResult,
};
use isolator::pump::phase_matched_band;

use crate::config::Resolved;
use crate::emit::{sci, Csv};

type Files = Vec<(String, String)>;

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value).context("cannot serialize summary")?;
    text.push('\n');
    Ok(text)
}

fn ghz(hz: f64) -> f64 {
    hz / 1e9
}

#[derive(Serialize)]
struct ModesReport {
    l_dc_ph: f64,
    l_e_ph: f64,
    l_o_ph: f64,
    c_e_ff: f64,
    c_o_ff: f64,
    z_e_ohm: f64,
    z_o_ohm: f64,
    cutoff_e_ghz: f64,
    cutoff_o_ghz: f64,
    plasma_e_ghz: f64,
    plasma_o_ghz: f64,
    k_center_per_cell: f64,
    phase_matched_band_ghz: Option<[f64; 2]>,
    warnings: Vec<String>,
}

/// Mode constants and derived quantities, as JSON on stdout.
pub fn modes(r: &Resolved) -> Result<String> {
    let m = &r.modes;
    let mut warnings = Vec::new();
    if m.is_degenerate() {
        warnings.push(
            "even and odd modes are degenerate (lm = 0, cm = 0): identical dispersion defeats \
             the conversion scheme"
                .to_string(),
        );
    }
    let band = phase_matched_band(&r.modes, &r.profile, r.dispersion)
        .ok()
        .map(|(lo, hi)| [ghz(lo / TAU), ghz(hi / TAU)]);
    let report = ModesReport {
        l_dc_ph: m.l_dc * 1e12,
        l_e_ph: m.l_e * 1e12,
        l_o_ph: m.l_o * 1e12,
        c_e_ff: m.c_e * 1e15,
        c_o_ff: m.c_o * 1e15,
        z_e_ohm: m.z_e,
        z_o_ohm: m.z_o,
        cutoff_e_ghz: ghz(m.w0_e / TAU),
        cutoff_o_ghz: ghz(m.w0_o / TAU),
        plasma_e_ghz: ghz(m.wj_e / TAU),
        plasma_o_ghz: ghz(m.wj_o / TAU),
        k_center_per_cell: r.profile.k_center,
        phase_matched_band_ghz: band,
        warnings,
    };
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    json(&report)
}

/// Dispersion curves from dc to the top of the sweep band.
pub fn dispersion(r: &Resolved) -> Result<Files> {
    let mut csv = Csv::new(&["f_GHz", "k_e", "k_o", "k_e_linear", "k_o_linear"]);
    let n = r.grid_points;
    for i in 0..n {
        let f_hz = r.f_max_hz * i as f64 / (n - 1) as f64;
        let omega = TAU * f_hz;
        let row = [
            sci(ghz(f_hz)),
            sci(wavevector(&r.modes, Mode::Even, omega, DispersionForm::Exact)?),
            sci(wavevector(&r.modes, Mode::Odd, omega, DispersionForm::Exact)?),
            sci(wavevector(&r.modes, Mode::Even, omega, DispersionForm::Linear)?),
            sci(wavevector(&r.modes, Mode::Odd, omega, DispersionForm::Linear)?),
        ];
        csv.row(&row);
    }
    Ok(vec![("dispersion.csv".into(), csv.finish())])
}

/// Spatial pump profile and mismatch at the center signal frequency.
pub fn profile(r: &Resolved) -> Result<Files> {
    let mut csv = Csv::new(&["x", "k_p", "m", "kappa_at_center_freq", "dk_f", "dk_b"]);
    let omega = TAU * r.center_signal_hz;
    let length = r.profile.len();
    let mut x = 0.0;
    loop {
        let s = r.profile.mismatch(&r.modes, omega, x, r.dispersion)?;
        csv.row(&[
            sci(x),
            sci(r.profile.pump_wavevector(x)?),
            sci(r.profile.modulation_depth(x)?),
            sci(s.kappa),
            sci(s.dk_f),
            sci(s.dk_b),
        ]);
        if x >= length {
            break;
        }
        x = (x + r.stride).min(length);
    }
    Ok(vec![("profile.csv".into(), csv.finish())])
}

#[derive(Serialize)]
struct SimulateSummary {
    f_ghz: f64,
    direction: String,
    model: String,
    p_e_f_final: f64,
    p_o_f_final: f64,
    p_e_b_final: f64,
    p_o_b_final: f64,
    /// Forward drive: residual rejection; backward drive: through level.
    isolation_db: Option<f64>,
    through_db: Option<f64>,
    converted_power: f64,
}

/// One scattering solve with a recorded trajectory.
pub fn simulate(r: &Resolved, f_ghz: f64, backward: bool) -> Result<Files> {
    let omega = TAU * f_ghz * 1e9;
    let drive = if backward {
        Drive::BackwardE
    } else {
        Drive::ForwardE
    };
    let setup = Setup::new(&r.modes, &r.profile, r.dispersion);
    let solution = setup.scatter(r.model, omega, drive)?;
    // Re-propagate the solved boundary state, recording the trajectory.
    let prop = setup.propagate(
        r.model,
        omega,
        &solution.at_start,
        &PropagateOptions {
            stride: Some(r.stride),
            ..PropagateOptions::default()
        },
    )?;

    let mut csv = Csv::new(&[
        "x", "re_e_f", "im_e_f", "re_o_f", "im_o_f", "re_e_b", "im_e_b", "re_o_b", "im_o_b",
        "p_e", "p_o",
    ]);
    for point in &prop.trajectory {
        let s = point.state;
        csv.row(&[
            sci(point.x),
            sci(s.e_f.re),
            sci(s.e_f.im),
            sci(s.o_f.re),
            sci(s.o_f.im),
            sci(s.e_b.re),
            sci(s.e_b.im),
            sci(s.o_b.re),
            sci(s.o_b.im),
            sci(s.e_f.norm_sqr() + s.e_b.norm_sqr()),
            sci(s.o_f.norm_sqr() + s.o_b.norm_sqr()),
        ]);
    }

    let fin = prop.final_state;
    let direction = if backward { "backward" } else { "forward" };
    let summary = SimulateSummary {
        f_ghz,
        direction: direction.into(),
        model: r.model_name.clone(),
        p_e_f_final: fin.e_f.norm_sqr(),
        p_o_f_final: fin.o_f.norm_sqr(),
        p_e_b_final: fin.e_b.norm_sqr(),
        p_o_b_final: fin.o_b.norm_sqr(),
        isolation_db: (!backward)
            .then(|| -10.0 * solution.forward_residual_power().max(1e-300).log10()),
        through_db: backward
            .then(|| 10.0 * solution.backward_through_power().max(1e-300).log10()),
        converted_power: if backward {
            solution.backward_converted_power()
        } else {
            solution.forward_converted_power()
        },
    };
    let stem = format!("simulate_{direction}_{f_ghz:.3}GHz");
    Ok(vec![
        (format!("{stem}.csv"), csv.finish()),
        (format!("{stem}.json"), json(&summary)?),
    ])
}

fn sweep_csv(sweep: &SweepResult, model_name: &str) -> String {
    let mut csv = Csv::new(&[
        "f_GHz",
        "isolation_dB",
        "backward_transmission_dB",
        "insertion_loss_dB",
        "forward_residual",
        "model",
    ]);
    for row in &sweep.rows {
        csv.row(&[
            sci(ghz(row.f_signal_hz)),
            sci(row.isolation_db),
            sci(row.backward_transmission_db),
            sci(row.insertion_loss_db),
            sci(row.forward_residual),
            model_name.to_string(),
        ]);
    }
    csv.finish()
}

#[derive(Serialize)]
struct SweepSummary<'a> {
    f_min_ghz: f64,
    f_max_ghz: f64,
    grid_points: usize,
    model: String,
    bandwidth_20db_ghz: f64,
    window_20db_ghz: Option<[f64; 2]>,
    insertion_loss_db_min: f64,
    insertion_loss_db_max: f64,
    phase_matched_band_ghz: Option<[f64; 2]>,
    params: &'a crate::config::Echo,
}

/// Isolation/transmission spectrum over the configured band.
pub fn sweep(r: &Resolved) -> Result<Files> {
    let setup = Setup::new(&r.modes, &r.profile, r.dispersion);
    let result = frequency_sweep(
        &setup,
        r.model,
        &r.loss,
        r.f_min_hz,
        r.f_max_hz,
        r.grid_points,
    )?;
    let window = isolation_window(&result, 20.0);
    let (il_min, il_max) = result.rows.iter().fold((f64::MAX, f64::MIN), |acc, row| {
        (acc.0.min(row.insertion_loss_db), acc.1.max(row.insertion_loss_db))
    });
    let band = phase_matched_band(&r.modes, &r.profile, r.dispersion)
        .ok()
        .map(|(lo, hi)| [ghz(lo / TAU), ghz(hi / TAU)]);
    let summary = SweepSummary {
        f_min_ghz: ghz(r.f_min_hz),
        f_max_ghz: ghz(r.f_max_hz),
        grid_points: r.grid_points,
        model: r.model_name.clone(),
        bandwidth_20db_ghz: window.map_or(0.0, |(lo, hi)| ghz(hi - lo)),
        window_20db_ghz: window.map(|(lo, hi)| [ghz(lo), ghz(hi)]),
        insertion_loss_db_min: il_min,
        insertion_loss_db_max: il_max,
        phase_matched_band_ghz: band,
        params: &r.echo,
    };
    let stem = format!("sweep_{}_L{}", r.model_name, r.profile.length);
    Ok(vec![
        (format!("{stem}.csv"), sweep_csv(&result, &r.model_name)),
        (format!("{stem}.json"), json(&summary)?),
    ])
}

/// Isolation bandwidth for a list of device lengths.
pub fn lengths(r: &Resolved, lengths_arg: &[u32], threshold_db: f64) -> Result<Files> {
    let rows: Vec<LengthBandwidth> = length_sweep(
        &r.modes,
        &r.profile,
        r.dispersion,
        r.model,
        &r.loss,
        lengths_arg,
        threshold_db,
        r.f_min_hz,
        r.f_max_hz,
        r.grid_points,
    )?;
    let mut csv = Csv::new(&["L_cells", "bandwidth_GHz"]);
    for row in &rows {
        csv.row(&[row.length.to_string(), sci(ghz(row.bandwidth_hz))]);
    }
    Ok(vec![(
        format!("lengths_{}.csv", r.model_name),
        csv.finish(),
    )])
}

#[derive(Serialize)]
struct AdiabaticSummaryRow {
    f_ghz: f64,
    theta_final_rad: f64,
    p_residual: f64,
    estimate_abs_theta_l: f64,
    estimate_p_residual: f64,
    estimate_isolation_db: f64,
}

/// Deviation-angle traces and geometric estimates per frequency.
pub fn adiabatic(r: &Resolved, freqs_ghz: &[f64]) -> Result<Files> {
    let setup = Setup::new(&r.modes, &r.profile, r.dispersion);
    let mut files = Files::new();
    let mut summary = Vec::new();
    for &f_ghz in freqs_ghz {
        let omega = TAU * f_ghz * 1e9;
        let prop = setup.propagate(
            ModelKind::Simple2x2Forward,
            omega,
            &StateVector::forward_e(),
            &PropagateOptions {
                stride: Some(r.stride),
                ..PropagateOptions::default()
            },
        )?;
        let trace = deviation_angle(&prop.trajectory, &r.profile, &r.modes, omega, r.dispersion)?;
        let mut csv = Csv::new(&["x", "theta_adi", "theta_dev", "g"]);
        for s in &trace.samples {
            csv.row(&[sci(s.x), sci(s.theta_adi), sci(s.theta_dev), sci(s.g)]);
        }
        files.push((format!("adiabatic_{f_ghz:.3}GHz.csv"), csv.finish()));
        let est = geometric_estimate(&r.profile, &r.modes, omega, r.dispersion)?;
        summary.push(AdiabaticSummaryRow {
            f_ghz,
            theta_final_rad: trace.theta_final,
            p_residual: trace.p_residual,
            estimate_abs_theta_l: est.theta_l.norm(),
            estimate_p_residual: est.p_residual,
            estimate_isolation_db: est.isolation_db(),
        });
    }
    files.push(("adiabatic_summary.json".into(), json(&summary)?));
    Ok(files)
}

#[derive(Serialize)]
struct CompareSummary {
    f_min_ghz: f64,
    f_max_ghz: f64,
    grid_points: usize,
    max_abs_delta_isolation_db: f64,
    max_abs_delta_isolation_below_25db: f64,
    max_abs_delta_backward_db: f64,
}

/// Spectra with and without the spatial rotating-wave reduction.
pub fn compare_rwa(r: &Resolved) -> Result<Files> {
    let setup = Setup::new(&r.modes, &r.profile, r.dispersion);
    let cmp = rwa_comparison(&setup, &r.loss, r.f_min_hz, r.f_max_hz, r.grid_points)?;
    let mut csv = Csv::new(&[
        "f_GHz",
        "isolation_rwa_dB",
        "isolation_full_dB",
        "delta_isolation_dB",
        "backward_rwa_dB",
        "backward_full_dB",
        "delta_backward_dB",
    ]);
    for d in &cmp.deltas {
        csv.row(&[
            sci(ghz(d.f_signal_hz)),
            sci(d.isolation_rwa_db),
            sci(d.isolation_full_db),
            sci(d.delta_isolation_db),
            sci(d.backward_rwa_db),
            sci(d.backward_full_db),
            sci(d.delta_backward_db),
        ]);
    }
    let summary = CompareSummary {
        f_min_ghz: ghz(r.f_min_hz),
        f_max_ghz: ghz(r.f_max_hz),
        grid_points: r.grid_points,
        max_abs_delta_isolation_db: cmp.max_abs_delta_isolation_db,
        max_abs_delta_isolation_below_25db: cmp.max_abs_delta_isolation_below(25.0),
        max_abs_delta_backward_db: cmp.max_abs_delta_backward_db,
    };
    Ok(vec![
        ("compare_rwa.csv".into(), csv.finish()),
        ("compare_rwa.json".into(), json(&summary)?),
    ])
}

