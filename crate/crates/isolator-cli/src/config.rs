//! Config file handling: a single TOML file with sections mirroring the
//! simulation layers. Every physical key carries its unit in the name;
//! omitted sections and keys fall back to the bundled reference operating
//! point. Unknown keys are rejected.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use isolator::circuit::{derive_modes, CircuitParams, DispersionForm, ModePair};
use isolator::dynamics::ModelKind;
use isolator::metrics::LossModel;
use isolator::pump::{default_k_center, PumpProfile, RampShape};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CircuitSection {
    #[serde(rename = "c0_fF")]
    pub c0_ff: f64,
    #[serde(rename = "cs_fF")]
    pub cs_ff: f64,
    #[serde(rename = "cm_fF")]
    pub cm_ff: f64,
    #[serde(rename = "lj0_pH")]
    pub lj0_ph: f64,
    #[serde(rename = "lm_pH")]
    pub lm_ph: f64,
    pub phi_dc_phi0: f64,
    pub m0: f64,
}

impl Default for CircuitSection {
    fn default() -> Self {
        CircuitSection {
            c0_ff: 80.0,
            cs_ff: 40.0,
            cm_ff: 20.0,
            lj0_ph: 250.0,
            lm_ph: -50.0,
            phi_dc_phi0: TAU / 3.0,
            m0: 0.1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PumpSection {
    pub length_cells: u32,
    pub alpha_per_cell: f64,
    #[serde(rename = "pump_freq_GHz")]
    pub pump_freq_ghz: f64,
    /// Peak modulation depth; defaults to the circuit section's m0.
    pub m0: Option<f64>,
    /// "generalized_gaussian", "quadratic", or "constant".
    pub ramp: String,
    pub p_up: f64,
    pub p_down: f64,
    /// Explicit pump center wavevector; computed from the center signal
    /// frequency when absent.
    pub k_center_per_cell: Option<f64>,
    #[serde(rename = "center_signal_GHz")]
    pub center_signal_ghz: f64,
}

impl Default for PumpSection {
    fn default() -> Self {
        PumpSection {
            length_cells: 2000,
            alpha_per_cell: 0.05,
            pump_freq_ghz: 2.0,
            m0: None,
            ramp: "generalized_gaussian".into(),
            p_up: 3.0,
            p_down: 2.0,
            k_center_per_cell: None,
            center_signal_ghz: 6.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    #[serde(rename = "f_min_GHz")]
    pub f_min_ghz: f64,
    #[serde(rename = "f_max_GHz")]
    pub f_max_ghz: f64,
    pub grid_points: usize,
    /// "simple", "rwa", or "full".
    pub model: String,
    pub tan_delta: f64,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            f_min_ghz: 4.0,
            f_max_ghz: 8.0,
            grid_points: 201,
            model: "rwa".into(),
            tan_delta: 1e-5,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: String,
    pub stride_cells: u32,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: "out".into(),
            stride_cells: 10,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub circuit: CircuitSection,
    pub pump: PumpSection,
    pub sweep: SweepSection,
    pub output: OutputSection,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(RunConfig::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("cannot read config {}", p.display()))?;
                let cfg: RunConfig = toml::from_str(&text)
                    .with_context(|| format!("cannot parse config {}", p.display()))?;
                Ok(cfg)
            }
        }
    }
}

/// Command-line overrides applied on top of the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out_dir: Option<PathBuf>,
    pub model: Option<String>,
    pub grid: Option<usize>,
    pub stride: Option<u32>,
    pub linear_dispersion: bool,
}

/// Fully resolved run: validated library types plus an echo of the
/// effective configuration for reproducibility.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub modes: ModePair,
    pub profile: PumpProfile,
    pub model: ModelKind,
    pub model_name: String,
    pub loss: LossModel,
    pub dispersion: DispersionForm,
    pub f_min_hz: f64,
    pub f_max_hz: f64,
    pub grid_points: usize,
    pub out_dir: PathBuf,
    pub stride: f64,
    pub center_signal_hz: f64,
    pub echo: Echo,
}

/// Effective configuration with all defaults and derived values applied.
#[derive(Debug, Clone, Serialize)]
pub struct Echo {
    pub circuit: CircuitSection,
    pub pump: PumpSection,
    pub sweep: SweepSection,
    pub output: OutputSection,
    pub dispersion: String,
    pub resolved_k_center_per_cell: f64,
    pub resolved_m0: f64,
}

pub fn parse_model(name: &str) -> Result<ModelKind> {
    Ok(match name {
        "simple" => ModelKind::Simple2x2Forward,
        "rwa" => ModelKind::Rwa4x4,
        "full" => ModelKind::Full4x4,
        other => bail!("unknown model '{other}' (expected simple, rwa, or full)"),
    })
}

pub fn resolve(config: &RunConfig, overrides: &Overrides) -> Result<Resolved> {
    let c = &config.circuit;
    let params = CircuitParams {
        c0: c.c0_ff * 1e-15,
        cs: c.cs_ff * 1e-15,
        cm: c.cm_ff * 1e-15,
        lj0: c.lj0_ph * 1e-12,
        lm: c.lm_ph * 1e-12,
        phi_dc: c.phi_dc_phi0,
        m0: c.m0,
    };
    let modes = derive_modes(&params).context("invalid [circuit] section")?;

    let dispersion = if overrides.linear_dispersion {
        DispersionForm::Linear
    } else {
        DispersionForm::Exact
    };

    let p = &config.pump;
    let omega_p = TAU * p.pump_freq_ghz * 1e9;
    let center_signal_hz = p.center_signal_ghz * 1e9;
    let k_center = match p.k_center_per_cell {
        Some(k) => k,
        None => default_k_center(&modes, omega_p, TAU * center_signal_hz, dispersion)
            .context("cannot derive the pump center wavevector")?,
    };
    let m0 = p.m0.unwrap_or(c.m0);
    let ramp = match p.ramp.as_str() {
        "generalized_gaussian" => RampShape::GeneralizedGaussian {
            p_up: p.p_up,
            p_down: p.p_down,
        },
        "quadratic" => RampShape::Quadratic,
        "constant" => RampShape::Constant,
        other => bail!("unknown ramp '{other}' (expected generalized_gaussian, quadratic, or constant)"),
    };
    let profile = PumpProfile::new(p.length_cells, k_center, p.alpha_per_cell, omega_p, m0, ramp)
        .context("invalid [pump] section")?;

    let s = &config.sweep;
    let model_name = overrides.model.clone().unwrap_or_else(|| s.model.clone());
    let model = parse_model(&model_name)?;
    let loss = LossModel::new(s.tan_delta).context("invalid [sweep] section")?;
    let grid_points = overrides.grid.unwrap_or(s.grid_points);
    if grid_points < 2 {
        bail!("grid must have at least 2 points, got {grid_points}");
    }
    let f_min_hz = s.f_min_ghz * 1e9;
    let f_max_hz = s.f_max_ghz * 1e9;
    if !(f_min_hz > 0.0 && f_max_hz > f_min_hz) {
        bail!(
            "sweep band must satisfy 0 < f_min < f_max, got [{}, {}] GHz",
            s.f_min_ghz,
            s.f_max_ghz
        );
    }

    let stride = f64::from(overrides.stride.unwrap_or(config.output.stride_cells).max(1));
    let out_dir = overrides
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from(&config.output.dir));

    let echo = Echo {
        circuit: config.circuit.clone(),
        pump: PumpSection {
            m0: Some(m0),
            k_center_per_cell: Some(k_center),
            ..config.pump.clone()
        },
        sweep: SweepSection {
            model: model_name.clone(),
            grid_points,
            ..config.sweep.clone()
        },
        output: OutputSection {
            dir: out_dir.display().to_string(),
            stride_cells: stride as u32,
        },
        dispersion: match dispersion {
            DispersionForm::Exact => "exact".into(),
            DispersionForm::Linear => "linear".into(),
        },
        resolved_k_center_per_cell: k_center,
        resolved_m0: m0,
    };

    Ok(Resolved {
        modes,
        profile,
        model,
        model_name,
        loss,
        dispersion,
        f_min_hz,
        f_max_hz,
        grid_points,
        out_dir,
        stride,
        center_signal_hz,
        echo,
    })
}
