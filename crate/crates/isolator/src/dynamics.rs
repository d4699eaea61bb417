//! Coupled-mode propagation across the device: dynamical matrices for each
//! model variant, adaptive propagation, transfer matrices, and the
//! two-point scattering solve.
//!
//! Amplitudes are photon-flux normalized, so lossless conversion preserves
//! |E|^2 + |O|^2 per propagation direction. The integrator works in an
//! interaction picture with the block-diagonal mismatch phases removed in
//! closed form (exact accumulated pump phase); states are transformed back
//! to the plain coupled-mode frame at every sample, so results are the
//! numerical solution of the documented matrices.

use num_complex::Complex64;

use crate::circuit::{DispersionForm, ModePair};
use crate::error::{Error, Result};
use crate::ode::{self, OdeOptions};
use crate::pump::PumpProfile;

type C = Complex64;

const I_HALF: C = C::new(0.0, 0.5);

/// Model variants, from the forward-only two-level reduction to the full
/// four-wave matrix with counter-propagating coupling terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum ModelKind {
    /// Forward pair (E_f, O_f) only.
    Simple2x2Forward,
    /// Backward pair (E_b, O_b) only.
    Simple2x2Backward,
    /// Block-diagonal four-wave model; forward and backward decouple.
    Rwa4x4,
    /// Four-wave model retaining the spatially oscillatory
    /// forward/backward coupling entries.
    Full4x4,
}

impl ModelKind {
    pub fn dim(self) -> usize {
        match self {
            ModelKind::Simple2x2Forward | ModelKind::Simple2x2Backward => 2,
            ModelKind::Rwa4x4 | ModelKind::Full4x4 => 4,
        }
    }

    /// Forward and backward waves stay decoupled in this model.
    pub fn is_block_diagonal(self) -> bool {
        !matches!(self, ModelKind::Full4x4)
    }
}

/// Four complex wave amplitudes in photon-flux normalization.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StateVector {
    pub e_f: C,
    pub o_f: C,
    pub e_b: C,
    pub o_b: C,
}

impl StateVector {
    pub fn new(e_f: C, o_f: C, e_b: C, o_b: C) -> Self {
        StateVector { e_f, o_f, e_b, o_b }
    }

    /// Unit forward drive in the even mode.
    pub fn forward_e() -> Self {
        StateVector::new(C::ONE, C::ZERO, C::ZERO, C::ZERO)
    }

    /// Unit backward drive in the even mode.
    pub fn backward_e() -> Self {
        StateVector::new(C::ZERO, C::ZERO, C::ONE, C::ZERO)
    }

    pub fn to_array(self) -> [C; 4] {
        [self.e_f, self.o_f, self.e_b, self.o_b]
    }

    pub fn from_array(a: [C; 4]) -> Self {
        StateVector::new(a[0], a[1], a[2], a[3])
    }

    /// |E_f|^2 + |O_f|^2.
    pub fn forward_norm_sqr(&self) -> f64 {
        self.e_f.norm_sqr() + self.o_f.norm_sqr()
    }

    /// |E_b|^2 + |O_b|^2.
    pub fn backward_norm_sqr(&self) -> f64 {
        self.e_b.norm_sqr() + self.o_b.norm_sqr()
    }
}

/// One recorded point of a propagation.
#[derive(Debug, Clone, Copy)]
pub struct TrajectoryPoint {
    pub x: f64,
    pub state: StateVector,
}

/// Result of a propagation across the device.
#[derive(Debug, Clone)]
pub struct Propagation {
    pub final_state: StateVector,
    /// Samples every `stride` cells when recording was requested.
    pub trajectory: Vec<TrajectoryPoint>,
    pub steps: usize,
    pub rejected: usize,
    /// Conservation-law drift over the run (per-direction photon flux for
    /// block-diagonal models, flux difference for the full model).
    pub norm_drift: f64,
}

/// Integration controls for [`Setup::propagate`].
#[derive(Debug, Clone, Copy)]
pub struct PropagateOptions {
    /// Record the trajectory every `stride` cells.
    pub stride: Option<f64>,
    pub rtol: f64,
    pub atol: f64,
    /// Override the model-derived step cap (still capped at 1 cell).
    pub max_step: Option<f64>,
}

impl Default for PropagateOptions {
    fn default() -> Self {
        PropagateOptions {
            stride: None,
            rtol: 1e-10,
            atol: 1e-12,
            max_step: None,
        }
    }
}

/// Dynamical matrix at one position, in the plain coupled-mode frame.
#[derive(Debug, Clone, Copy)]
pub enum DynamicalMatrix {
    TwoByTwo([[C; 2]; 2]),
    FourByFour([[C; 4]; 4]),
}

/// Transfer matrix mapping StateVector(0) to StateVector(L).
///
/// Two-level models embed as a 4x4 with an identity inactive block.
#[derive(Debug, Clone)]
pub struct TransferMatrix {
    pub model: ModelKind,
    pub omega_e: f64,
    pub steps: usize,
    m: [[C; 4]; 4],
}

impl TransferMatrix {
    pub fn entry(&self, row: usize, col: usize) -> C {
        self.m[row][col]
    }

    pub fn matrix(&self) -> &[[C; 4]; 4] {
        &self.m
    }

    /// Forward 2x2 block (E_f, O_f).
    pub fn block_forward(&self) -> [[C; 2]; 2] {
        [
            [self.m[0][0], self.m[0][1]],
            [self.m[1][0], self.m[1][1]],
        ]
    }

    /// Backward 2x2 block (E_b, O_b).
    pub fn block_backward(&self) -> [[C; 2]; 2] {
        [
            [self.m[2][2], self.m[2][3]],
            [self.m[3][2], self.m[3][3]],
        ]
    }

    /// Largest magnitude found in the off-diagonal blocks.
    pub fn max_off_block(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 2..4 {
                worst = worst.max(self.m[i][j].norm());
                worst = worst.max(self.m[j][i].norm());
            }
        }
        worst
    }

    pub fn apply(&self, v: &StateVector) -> StateVector {
        let a = v.to_array();
        let mut out = [C::ZERO; 4];
        for (i, out_i) in out.iter_mut().enumerate() {
            for (j, &aj) in a.iter().enumerate() {
                *out_i += self.m[i][j] * aj;
            }
        }
        StateVector::from_array(out)
    }
}

/// Scattering drive: unit even-mode input from one end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Drive {
    /// e_f(0) = 1; nothing enters at x = L.
    ForwardE,
    /// e_b(L) = 1; nothing enters at x = 0.
    BackwardE,
}

/// Amplitudes at both device ends after imposing the drive's boundary
/// conditions.
#[derive(Debug, Clone, Copy)]
pub struct ScatteringSolution {
    pub drive: Drive,
    pub at_start: StateVector,
    pub at_end: StateVector,
}

impl ScatteringSolution {
    /// Power left in the even mode at the far end of a forward drive.
    pub fn forward_residual_power(&self) -> f64 {
        self.at_end.e_f.norm_sqr()
    }

    /// Power converted to the odd mode for a forward drive.
    pub fn forward_converted_power(&self) -> f64 {
        self.at_end.o_f.norm_sqr()
    }

    /// Through power of a backward drive (emerges at x = 0 in mode E).
    pub fn backward_through_power(&self) -> f64 {
        self.at_start.e_b.norm_sqr()
    }

    /// Power a backward drive loses to odd-mode conversion.
    pub fn backward_converted_power(&self) -> f64 {
        self.at_start.o_b.norm_sqr()
    }
}

/// Everything needed to run one configuration: mode constants, pump
/// profile, and the dispersion form used for wavevectors.
#[derive(Debug, Clone, Copy)]
pub struct Setup<'a> {
    pub modes: &'a ModePair,
    pub profile: &'a PumpProfile,
    pub dispersion: DispersionForm,
    /// Multiplier on the model-derived integrator step cap; 1.0 normally,
    /// smaller values drive grid-convergence checks.
    pub step_scale: f64,
}

/// Precomputed per-frequency quantities.
#[derive(Debug, Clone, Copy)]
struct System {
    /// k_o - k_e.
    gap: f64,
    /// k_e + k_o.
    sigma: f64,
    /// sqrt(k_e k_o); kappa(x) = kappa0 * m(x).
    kappa0: f64,
    length: f64,
    k_center: f64,
    alpha: f64,
    profile: PumpProfile,
}

impl System {
    fn m(&self, x: f64) -> f64 {
        // The integrator may poke one ulp outside the device.
        self.profile
            .modulation_depth(x.clamp(0.0, self.length))
            .expect("clamped position is in range")
    }

    fn kappa(&self, x: f64) -> f64 {
        self.kappa0 * self.m(x)
    }

    fn k_p(&self, x: f64) -> f64 {
        self.k_center + 2.0 * self.alpha / self.length * (x - self.length / 2.0)
    }

    /// Closed-form accumulated pump phase int_0^x k_p.
    fn pump_phase(&self, x: f64) -> f64 {
        self.k_center * x + self.alpha / self.length * x * x - self.alpha * x
    }

    fn dk_f(&self, x: f64) -> f64 {
        self.gap - self.k_p(x)
    }

    fn dk_b(&self, x: f64) -> f64 {
        self.gap + self.k_p(x)
    }

    /// Accumulated forward mismatch int_0^x dk_f.
    fn theta_f(&self, x: f64) -> f64 {
        self.gap * x - self.pump_phase(x)
    }

    /// Accumulated backward mismatch int_0^x dk_b.
    fn theta_b(&self, x: f64) -> f64 {
        self.gap * x + self.pump_phase(x)
    }

    /// Diagonal interaction-picture transform D(x) with
    /// state_plain = D(x) * state_tilde; D(0) = identity.
    fn frame(&self, x: f64) -> [C; 4] {
        let tf = self.theta_f(x) / 2.0;
        let tb = self.theta_b(x) / 2.0;
        [
            C::from_polar(1.0, -tf),
            C::from_polar(1.0, tf),
            C::from_polar(1.0, tb),
            C::from_polar(1.0, -tb),
        ]
    }

    fn strip_phases(&self, x: f64, s: &StateVector) -> [C; 4] {
        let d = self.frame(x);
        let a = s.to_array();
        [a[0] / d[0], a[1] / d[1], a[2] / d[2], a[3] / d[3]]
    }

    fn restore_phases(&self, x: f64, y: &[C; 4]) -> StateVector {
        let d = self.frame(x);
        StateVector::from_array([y[0] * d[0], y[1] * d[1], y[2] * d[2], y[3] * d[3]])
    }

    /// Interaction-picture right-hand side of the chosen model.
    fn rhs(&self, model: ModelKind, x: f64, y: &[C; 4]) -> [C; 4] {
        let kap = self.kappa(x);
        if kap == 0.0 && model != ModelKind::Full4x4 {
            return [C::ZERO; 4];
        }
        let half_kap = I_HALF * kap;
        let mut dy = [C::ZERO; 4];
        let fwd = matches!(
            model,
            ModelKind::Simple2x2Forward | ModelKind::Rwa4x4 | ModelKind::Full4x4
        );
        let bwd = matches!(
            model,
            ModelKind::Simple2x2Backward | ModelKind::Rwa4x4 | ModelKind::Full4x4
        );
        if fwd {
            let ph_f = C::from_polar(1.0, self.theta_f(x));
            dy[0] += half_kap * ph_f * y[1];
            dy[1] += half_kap * ph_f.conj() * y[0];
        }
        if bwd {
            let ph_b = C::from_polar(1.0, self.theta_b(x));
            dy[2] += half_kap * ph_b.conj() * y[3];
            dy[3] += half_kap * ph_b * y[2];
        }
        if model == ModelKind::Full4x4 {
            let p = self.pump_phase(x);
            let sx = self.sigma * x;
            let ph_minus = C::from_polar(1.0, sx - p);
            let ph_plus = C::from_polar(1.0, sx + p);
            dy[0] += half_kap * ph_minus * y[3];
            dy[1] -= half_kap * ph_plus * y[2];
            dy[2] += half_kap * ph_plus.conj() * y[1];
            dy[3] -= half_kap * ph_minus.conj() * y[0];
        }
        dy
    }

    /// Fastest spatial rate a model can exhibit, for the hard step cap.
    fn max_rate(&self, model: ModelKind) -> f64 {
        let kap_max = self.kappa0 * self.profile.m0;
        let dk_f_max = self.dk_f(0.0).abs().max(self.dk_f(self.length).abs());
        let dk_b_max = self.dk_b(0.0).abs().max(self.dk_b(self.length).abs());
        let g_f = (kap_max * kap_max + dk_f_max * dk_f_max).sqrt();
        let g_b = (kap_max * kap_max + dk_b_max * dk_b_max).sqrt();
        match model {
            ModelKind::Simple2x2Forward => g_f,
            ModelKind::Simple2x2Backward => g_b,
            ModelKind::Rwa4x4 => g_f.max(g_b),
            ModelKind::Full4x4 => {
                let k_p_max = self.k_p(0.0).abs().max(self.k_p(self.length).abs());
                g_f.max(g_b).max(self.sigma + k_p_max)
            }
        }
    }

    /// min(1 cell, one twentieth of the shortest oscillation period).
    fn step_cap(&self, model: ModelKind) -> f64 {
        let rate = self.max_rate(model);
        if rate <= 0.0 {
            1.0
        } else {
            (std::f64::consts::TAU / (20.0 * rate)).min(1.0)
        }
    }
}

impl<'a> Setup<'a> {
    pub fn new(modes: &'a ModePair, profile: &'a PumpProfile, dispersion: DispersionForm) -> Self {
        Setup {
            modes,
            profile,
            dispersion,
            step_scale: 1.0,
        }
    }

    pub fn with_step_scale(mut self, scale: f64) -> Self {
        self.step_scale = scale;
        self
    }

    fn system(&self, omega_e: f64) -> Result<System> {
        let (k_e, k_o) = self
            .profile
            .signal_wavevectors(self.modes, omega_e, self.dispersion)?;
        Ok(System {
            gap: k_o - k_e,
            sigma: k_o + k_e,
            kappa0: (k_e * k_o).sqrt(),
            length: self.profile.len(),
            k_center: self.profile.k_center,
            alpha: self.profile.alpha,
            profile: *self.profile,
        })
    }

    /// Signal-frequency wavevectors (k_e at omega_e, k_o at omega_e + omega_p).
    pub fn wavevectors(&self, omega_e: f64) -> Result<(f64, f64)> {
        self.profile
            .signal_wavevectors(self.modes, omega_e, self.dispersion)
    }

    /// Dynamical matrix of `model` at position `x`, plain frame.
    pub fn dynamical_matrix(
        &self,
        model: ModelKind,
        omega_e: f64,
        x: f64,
    ) -> Result<DynamicalMatrix> {
        self.profile.pump_wavevector(x)?; // domain check
        let sys = self.system(omega_e)?;
        let kap = C::from(sys.kappa(x));
        let dk_f = C::from(sys.dk_f(x));
        let dk_b = C::from(sys.dk_b(x));
        Ok(match model {
            ModelKind::Simple2x2Forward => DynamicalMatrix::TwoByTwo([
                [I_HALF * -dk_f, I_HALF * kap],
                [I_HALF * kap, I_HALF * dk_f],
            ]),
            ModelKind::Simple2x2Backward => DynamicalMatrix::TwoByTwo([
                [I_HALF * dk_b, I_HALF * kap],
                [I_HALF * kap, I_HALF * -dk_b],
            ]),
            ModelKind::Rwa4x4 => {
                let z = C::ZERO;
                DynamicalMatrix::FourByFour([
                    [I_HALF * -dk_f, I_HALF * kap, z, z],
                    [I_HALF * kap, I_HALF * dk_f, z, z],
                    [z, z, I_HALF * dk_b, I_HALF * kap],
                    [z, z, I_HALF * kap, I_HALF * -dk_b],
                ])
            }
            ModelKind::Full4x4 => {
                let z = C::ZERO;
                let ph = C::from_polar(1.0, sys.sigma * x);
                DynamicalMatrix::FourByFour([
                    [I_HALF * -dk_f, I_HALF * kap, z, I_HALF * kap * ph],
                    [I_HALF * kap, I_HALF * dk_f, -(I_HALF * kap * ph), z],
                    [z, I_HALF * kap * ph.conj(), I_HALF * dk_b, I_HALF * kap],
                    [-(I_HALF * kap * ph.conj()), z, I_HALF * kap, I_HALF * -dk_b],
                ])
            }
        })
    }

    /// Propagate an initial state from x = 0 to x = L.
    pub fn propagate(
        &self,
        model: ModelKind,
        omega_e: f64,
        initial: &StateVector,
        options: &PropagateOptions,
    ) -> Result<Propagation> {
        let sys = self.system(omega_e)?;
        let length = sys.length;
        let cap = options
            .max_step
            .map(|m| m.min(1.0))
            .unwrap_or_else(|| (sys.step_cap(model) * self.step_scale).min(1.0));
        let opts = OdeOptions {
            rtol: options.rtol,
            atol: options.atol,
            max_step: cap,
        };

        let samples: Vec<f64> = match options.stride {
            Some(stride) if stride > 0.0 => {
                let mut xs: Vec<f64> = std::iter::successors(Some(0.0), |x| Some(x + stride))
                    .take_while(|&x| x < length)
                    .collect();
                xs.push(length);
                xs
            }
            _ => Vec::new(),
        };

        let mut trajectory = Vec::with_capacity(samples.len());
        let y0 = sys.strip_phases(0.0, initial);
        let (y_end, stats) = ode::integrate(
            |x, y: &[C; 4]| sys.rhs(model, x, y),
            0.0,
            length,
            y0,
            &opts,
            &samples,
            |x, y| {
                trajectory.push(TrajectoryPoint {
                    x,
                    state: sys.restore_phases(x, y),
                });
            },
        )?;
        let final_state = sys.restore_phases(length, &y_end);

        let norm_drift = conservation_drift(model, initial, &final_state);
        if norm_drift > 1e-6 {
            return Err(Error::IntegrationFailure {
                reason: format!("conservation drift {norm_drift:.3e} beyond tolerance"),
                x: length,
                step: cap,
                steps: stats.steps,
            });
        }

        Ok(Propagation {
            final_state,
            trajectory,
            steps: stats.steps,
            rejected: stats.rejected,
            norm_drift,
        })
    }

    /// Transfer matrix by propagating the four basis states.
    pub fn transfer_matrix(&self, model: ModelKind, omega_e: f64) -> Result<TransferMatrix> {
        let mut m = [[C::ZERO; 4]; 4];
        let mut steps = 0;
        for col in 0..4 {
            let mut a = [C::ZERO; 4];
            a[col] = C::ONE;
            let prop = self.propagate(
                model,
                omega_e,
                &StateVector::from_array(a),
                &PropagateOptions::default(),
            )?;
            let out = prop.final_state.to_array();
            for (row, &v) in out.iter().enumerate() {
                m[row][col] = v;
            }
            steps += prop.steps;
        }
        Ok(TransferMatrix {
            model,
            omega_e,
            steps,
            m,
        })
    }

    /// Scattering solve for one drive.
    ///
    /// Block-diagonal models reduce to initial-value propagations (the
    /// backward drive integrates from x = L down to 0); the full model
    /// goes through the transfer-matrix boundary partition.
    pub fn scatter(
        &self,
        model: ModelKind,
        omega_e: f64,
        drive: Drive,
    ) -> Result<ScatteringSolution> {
        if model.is_block_diagonal() {
            match drive {
                Drive::ForwardE => {
                    let model = match model {
                        ModelKind::Simple2x2Backward => ModelKind::Simple2x2Forward,
                        m => m,
                    };
                    let prop = self.propagate(
                        model,
                        omega_e,
                        &StateVector::forward_e(),
                        &PropagateOptions::default(),
                    )?;
                    Ok(ScatteringSolution {
                        drive,
                        at_start: StateVector::forward_e(),
                        at_end: StateVector::new(
                            prop.final_state.e_f,
                            prop.final_state.o_f,
                            C::ZERO,
                            C::ZERO,
                        ),
                    })
                }
                Drive::BackwardE => {
                    let sys = self.system(omega_e)?;
                    let bwd_model = match model {
                        ModelKind::Simple2x2Forward => ModelKind::Simple2x2Backward,
                        m => m,
                    };
                    let opts = OdeOptions {
                        max_step: (sys.step_cap(bwd_model) * self.step_scale).min(1.0),
                        ..OdeOptions::default()
                    };
                    let end = StateVector::backward_e();
                    let y_l = sys.strip_phases(sys.length, &end);
                    let (y0, _) = ode::integrate(
                        |x, y: &[C; 4]| sys.rhs(bwd_model, x, y),
                        sys.length,
                        0.0,
                        y_l,
                        &opts,
                        &[],
                        |_, _| {},
                    )?;
                    let at_start = sys.restore_phases(0.0, &y0);
                    let drift = (at_start.backward_norm_sqr() - 1.0).abs();
                    if drift > 1e-6 {
                        return Err(Error::IntegrationFailure {
                            reason: format!("conservation drift {drift:.3e} beyond tolerance"),
                            x: 0.0,
                            step: opts.max_step,
                            steps: 0,
                        });
                    }
                    Ok(ScatteringSolution {
                        drive,
                        at_start: StateVector::new(C::ZERO, C::ZERO, at_start.e_b, at_start.o_b),
                        at_end: end,
                    })
                }
            }
        } else {
            let tm = self.transfer_matrix(model, omega_e)?;
            scattering_solve(&tm, drive)
        }
    }
}

/// Conservation drift of the model's invariant between two states.
fn conservation_drift(model: ModelKind, initial: &StateVector, final_state: &StateVector) -> f64 {
    let scale = (initial.forward_norm_sqr() + initial.backward_norm_sqr()).max(1e-300);
    match model {
        ModelKind::Simple2x2Forward | ModelKind::Simple2x2Backward | ModelKind::Rwa4x4 => {
            let df = final_state.forward_norm_sqr() - initial.forward_norm_sqr();
            let db = final_state.backward_norm_sqr() - initial.backward_norm_sqr();
            df.abs().max(db.abs()) / scale
        }
        ModelKind::Full4x4 => {
            // Counter-propagating flux enters with opposite sign.
            let flux = |s: &StateVector| s.forward_norm_sqr() - s.backward_norm_sqr();
            (flux(final_state) - flux(initial)).abs() / scale
        }
    }
}

/// Solve the two-point scattering problem on a transfer matrix.
///
/// Incoming amplitudes are fixed on both ends; the linear system for the
/// unknown backward amplitudes at x = 0 is the lower 2x2 partition.
pub fn scattering_solve(tm: &TransferMatrix, drive: Drive) -> Result<ScatteringSolution> {
    let t = &tm.m;
    let a = [[t[2][2], t[2][3]], [t[3][2], t[3][3]]];
    let cond = cond2(&a);
    if !cond.is_finite() || cond > 1e12 {
        return Err(Error::IllConditionedScattering { cond });
    }
    match drive {
        Drive::ForwardE => {
            // e_b(L) = o_b(L) = 0 with e_f(0) = 1.
            let rhs = [-t[2][0], -t[3][0]];
            let (e_b0, o_b0) = solve2(&a, &rhs);
            let e_fl = t[0][0] + t[0][2] * e_b0 + t[0][3] * o_b0;
            let o_fl = t[1][0] + t[1][2] * e_b0 + t[1][3] * o_b0;
            Ok(ScatteringSolution {
                drive,
                at_start: StateVector::new(C::ONE, C::ZERO, e_b0, o_b0),
                at_end: StateVector::new(e_fl, o_fl, C::ZERO, C::ZERO),
            })
        }
        Drive::BackwardE => {
            // e_b(L) = 1, o_b(L) = 0 with no forward input.
            let rhs = [C::ONE, C::ZERO];
            let (e_b0, o_b0) = solve2(&a, &rhs);
            let e_fl = t[0][2] * e_b0 + t[0][3] * o_b0;
            let o_fl = t[1][2] * e_b0 + t[1][3] * o_b0;
            Ok(ScatteringSolution {
                drive,
                at_start: StateVector::new(C::ZERO, C::ZERO, e_b0, o_b0),
                at_end: StateVector::new(e_fl, o_fl, C::ONE, C::ZERO),
            })
        }
    }
}

fn solve2(a: &[[C; 2]; 2], b: &[C; 2]) -> (C, C) {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    (
        (b[0] * a[1][1] - b[1] * a[0][1]) / det,
        (a[0][0] * b[1] - a[1][0] * b[0]) / det,
    )
}

/// 2-norm condition number of a 2x2 complex matrix (exact singular values).
fn cond2(a: &[[C; 2]; 2]) -> f64 {
    let fro: f64 = a.iter().flatten().map(|z| z.norm_sqr()).sum();
    let det = (a[0][0] * a[1][1] - a[0][1] * a[1][0]).norm();
    let disc = (fro * fro - 4.0 * det * det).max(0.0).sqrt();
    let s_max = ((fro + disc) / 2.0).sqrt();
    let s_min = ((fro - disc) / 2.0).max(0.0).sqrt();
    if s_min == 0.0 {
        f64::INFINITY
    } else {
        s_max / s_min
    }
}
