//! Even/odd mode constants and dispersion of the coupled SQUID transmission lines.
//!
//! Raw per-unit-cell circuit values are reduced to the two orthogonal
//! propagation modes (symmetric "even", antisymmetric "odd"), each an
//! ordinary LC ladder with its own inductance, capacitance, impedance,
//! cutoff and plasma frequency. Positions are measured in unit cells
//! (cell length a = 1), so wavevectors carry rad/cell.

use serde::Serialize;

use crate::error::{Error, Result};

/// Guard for the SQUID cosine; below this the bias sits on a divergence.
const COS_DIVERGENCE_GUARD: f64 = 1e-12;

/// Raw circuit values for one unit cell.
///
/// Flux values are stored as dimensionless ratios phi/phi0 of the reduced
/// flux quantum, so no physical-constant dependency enters the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircuitParams {
    /// Capacitance to ground per cell (F).
    pub c0: f64,
    /// Junction shunt capacitance per cell (F).
    pub cs: f64,
    /// Mutual capacitance between the lines per cell (F).
    pub cm: f64,
    /// Single-junction inductance (H).
    pub lj0: f64,
    /// Mutual inductance between the lines per cell (H); may be negative.
    pub lm: f64,
    /// DC flux bias through each SQUID, as phi_dc/phi0.
    pub phi_dc: f64,
    /// Maximum modulation depth of the SQUID inductance.
    pub m0: f64,
}

impl Default for CircuitParams {
    /// Reference operating values used throughout the test suite and as
    /// CLI defaults: 80/40/20 fF, 250 pH junctions, -50 pH mutual
    /// inductance, 2*pi/3 flux bias, 10% peak modulation.
    fn default() -> Self {
        CircuitParams {
            c0: 80e-15,
            cs: 40e-15,
            cm: 20e-15,
            lj0: 250e-12,
            lm: -50e-12,
            phi_dc: 2.0 * std::f64::consts::PI / 3.0,
            m0: 0.1,
        }
    }
}

impl CircuitParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.c0 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "c0 must be positive, got {:.3e} F",
                self.c0
            )));
        }
        if !(self.cs > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "cs must be positive, got {:.3e} F",
                self.cs
            )));
        }
        if !(self.cm >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "cm must be non-negative, got {:.3e} F",
                self.cm
            )));
        }
        if !(self.lj0 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "lj0 must be positive, got {:.3e} H",
                self.lj0
            )));
        }
        if !(0.0..1.0).contains(&self.m0) {
            return Err(Error::InvalidParameter(format!(
                "m0 must lie in [0, 1) for the weak-modulation model, got {}",
                self.m0
            )));
        }
        let l_dc = squid_inductance(self.lj0, self.phi_dc, 0.0)?;
        if !(self.lm.abs() < l_dc) {
            return Err(Error::InvalidParameter(format!(
                "|lm| = {:.3e} H must stay below the dc SQUID inductance {:.3e} H",
                self.lm.abs(),
                l_dc
            )));
        }
        Ok(())
    }
}

/// Which propagation mode a quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    Even,
    Odd,
}

/// Dispersion evaluation: the exact form carries the plasma-frequency
/// correction; the linear form is the long-wavelength slope, kept for
/// hand-checkable cross-checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum DispersionForm {
    #[default]
    Exact,
    Linear,
}

/// Derived even/odd mode constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModePair {
    /// Mode inductances per cell (H).
    pub l_e: f64,
    pub l_o: f64,
    /// Mode capacitances per cell (F).
    pub c_e: f64,
    pub c_o: f64,
    /// Characteristic impedances (ohm).
    pub z_e: f64,
    pub z_o: f64,
    /// Cutoff angular frequencies 1/sqrt(l c) (rad/s).
    pub w0_e: f64,
    pub w0_o: f64,
    /// Plasma angular frequencies 1/sqrt(cs l) (rad/s).
    pub wj_e: f64,
    pub wj_o: f64,
    /// DC-biased SQUID inductance (H).
    pub l_dc: f64,
}

impl ModePair {
    pub fn inductance(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Even => self.l_e,
            Mode::Odd => self.l_o,
        }
    }

    pub fn capacitance(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Even => self.c_e,
            Mode::Odd => self.c_o,
        }
    }

    pub fn impedance(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Even => self.z_e,
            Mode::Odd => self.z_o,
        }
    }

    pub fn plasma_frequency(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Even => self.wj_e,
            Mode::Odd => self.wj_o,
        }
    }

    /// True when even and odd modes share the same dispersion, which
    /// defeats the conversion scheme.
    pub fn is_degenerate(&self) -> bool {
        self.l_e == self.l_o && self.c_e == self.c_o
    }
}

/// Instantaneous SQUID inductance under dc plus rf flux.
///
/// `phi_dc_ratio` and `phi_rf_ratio` are phi/phi0. With zero rf flux this
/// is the dc-biased inductance; at `phi_dc_ratio = 0` it reduces to half
/// the single-junction inductance.
pub fn squid_inductance(lj0: f64, phi_dc_ratio: f64, phi_rf_ratio: f64) -> Result<f64> {
    let cos_half = ((phi_dc_ratio + phi_rf_ratio) / 2.0).cos();
    if cos_half.abs() < COS_DIVERGENCE_GUARD {
        return Err(Error::FluxAtDivergence {
            cos_abs: cos_half.abs(),
        });
    }
    Ok(0.5 * lj0 / cos_half.abs())
}

/// First-order expansion of the SQUID inductance, L_dc / (1 -+ m) with
/// m = tan(phi_dc/2) * phi_rf/2. Valid for small rf flux; exposed for
/// cross-checks against the exact form.
pub fn squid_inductance_first_order(
    lj0: f64,
    phi_dc_ratio: f64,
    phi_rf_ratio: f64,
) -> Result<f64> {
    let l_dc = squid_inductance(lj0, phi_dc_ratio, 0.0)?;
    let m = (phi_dc_ratio / 2.0).tan() * phi_rf_ratio / 2.0;
    let denom = 1.0 - m;
    if denom.abs() < COS_DIVERGENCE_GUARD {
        return Err(Error::FluxAtDivergence { cos_abs: 0.0 });
    }
    Ok(l_dc / denom)
}

/// Reduce raw circuit values to even/odd mode constants.
pub fn derive_modes(p: &CircuitParams) -> Result<ModePair> {
    p.validate()?;
    let l_dc = squid_inductance(p.lj0, p.phi_dc, 0.0)?;
    let l_e = l_dc + p.lm;
    let l_o = l_dc - p.lm;
    let c_e = p.c0;
    let c_o = p.c0 + 2.0 * p.cm;
    Ok(ModePair {
        l_e,
        l_o,
        c_e,
        c_o,
        z_e: (l_e / c_e).sqrt(),
        z_o: (l_o / c_o).sqrt(),
        w0_e: 1.0 / (l_e * c_e).sqrt(),
        w0_o: 1.0 / (l_o * c_o).sqrt(),
        wj_e: 1.0 / (p.cs * l_e).sqrt(),
        wj_o: 1.0 / (p.cs * l_o).sqrt(),
        l_dc,
    })
}

/// Wavevector of one mode at angular frequency `omega` (rad/cell).
///
/// Exact form diverges toward the plasma frequency and is monotone below
/// it; the linear form is sqrt(l c) * omega.
pub fn wavevector(modes: &ModePair, mode: Mode, omega: f64, form: DispersionForm) -> Result<f64> {
    if !(omega >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "omega must be non-negative, got {omega:.6e}"
        )));
    }
    let slope = (modes.inductance(mode) * modes.capacitance(mode)).sqrt();
    match form {
        DispersionForm::Linear => Ok(slope * omega),
        DispersionForm::Exact => {
            let wj = modes.plasma_frequency(mode);
            if omega >= wj {
                return Err(Error::AbovePlasmaCutoff { omega, omega_j: wj });
            }
            let r = omega / wj;
            Ok(slope * omega / (1.0 - r * r).sqrt())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    const TWO_PI: f64 = 2.0 * PI;

    #[test]
    fn squid_inductance_at_reference_bias_equals_lj0() {
        // cos(pi/3) = 1/2, so the dc-biased value equals the bare junction.
        let l = squid_inductance(250e-12, TWO_PI / 3.0, 0.0).unwrap();
        assert_relative_eq!(l, 250e-12, max_relative = 1e-15);
    }

    #[test]
    fn squid_inductance_unbiased_is_half_lj0() {
        let l = squid_inductance(250e-12, 0.0, 0.0).unwrap();
        assert_relative_eq!(l, 125e-12, max_relative = 1e-15);
    }

    #[test]
    fn squid_inductance_rf_flux_matches_direct_cosine_and_expansion() {
        // Oracle: direct evaluation of the half-flux cosine.
        let expected = 0.5 * 250e-12 / (PI / 3.0 + 0.05).cos();
        let l = squid_inductance(250e-12, TWO_PI / 3.0, 0.1).unwrap();
        assert_relative_eq!(l, expected, max_relative = 1e-14);

        // First-order expansion with m = tan(pi/3) * 0.05 agrees to < 1%.
        let m = (PI / 3.0).tan() * 0.05;
        assert_abs_diff_eq!(m, 0.0866, epsilon = 1e-4);
        let approx = 250e-12 / (1.0 - m);
        assert!((l - approx).abs() / l < 0.01);
        let first = squid_inductance_first_order(250e-12, TWO_PI / 3.0, 0.1).unwrap();
        assert_relative_eq!(first, approx, max_relative = 1e-14);
    }

    #[test]
    fn squid_inductance_degenerate_bias_errors() {
        // phi_dc/phi0 = pi puts the half-flux argument at pi/2.
        let err = squid_inductance(250e-12, PI, 0.0).unwrap_err();
        assert!(matches!(err, Error::FluxAtDivergence { .. }));
        assert!(err.to_string().contains("inductance divergence"));
    }

    #[test]
    fn first_order_expansion_error_bounded_by_m_squared() {
        let phi_dc = TWO_PI / 3.0;
        let tan_half = (phi_dc / 2.0).tan();
        for i in 1..=40 {
            let m = 0.005 * i as f64; // up to 0.2
            let phi_rf = 2.0 * m / tan_half;
            let exact = squid_inductance(250e-12, phi_dc, phi_rf).unwrap();
            let first = squid_inductance_first_order(250e-12, phi_dc, phi_rf).unwrap();
            let rel = ((exact - first) / exact).abs();
            assert!(
                rel <= m * m,
                "m = {m}: relative error {rel:.3e} exceeds m^2 = {:.3e}",
                m * m
            );
        }
    }

    #[test]
    fn derive_modes_reference_values() {
        let modes = derive_modes(&CircuitParams::default()).unwrap();
        assert_relative_eq!(modes.l_dc, 250e-12, max_relative = 1e-12);
        assert_relative_eq!(modes.l_e, 200e-12, max_relative = 1e-12);
        assert_relative_eq!(modes.l_o, 300e-12, max_relative = 1e-12);
        assert_relative_eq!(modes.c_e, 80e-15, max_relative = 1e-15);
        assert_relative_eq!(modes.c_o, 120e-15, max_relative = 1e-15);
        assert_relative_eq!(modes.z_e, 50.0, max_relative = 1e-12);
        assert_relative_eq!(modes.z_o, 50.0, max_relative = 1e-12);
    }

    #[test]
    fn derive_modes_degenerate_when_uncoupled() {
        let p = CircuitParams {
            lm: 0.0,
            cm: 0.0,
            ..CircuitParams::default()
        };
        let modes = derive_modes(&p).unwrap();
        assert!(modes.is_degenerate());
        assert_eq!(modes.l_e, modes.l_o);
        assert_eq!(modes.c_e, modes.c_o);
        assert_relative_eq!(modes.l_e, modes.l_dc, max_relative = 1e-15);
    }

    #[test]
    fn derive_modes_rejects_bad_parameters() {
        let bad_c0 = CircuitParams {
            c0: 0.0,
            ..CircuitParams::default()
        };
        assert!(derive_modes(&bad_c0).is_err());

        let bad_lm = CircuitParams {
            lm: -260e-12,
            ..CircuitParams::default()
        };
        assert!(derive_modes(&bad_lm).is_err());

        let bad_m0 = CircuitParams {
            m0: 1.0,
            ..CircuitParams::default()
        };
        assert!(derive_modes(&bad_m0).is_err());
    }

    #[test]
    fn wavevector_linear_reference_values() {
        let modes = derive_modes(&CircuitParams::default()).unwrap();
        // sqrt(200 pH * 80 fF) = 4e-12 s/cell exactly.
        let k_e = wavevector(&modes, Mode::Even, TWO_PI * 6e9, DispersionForm::Linear).unwrap();
        assert_relative_eq!(k_e, 4e-12 * TWO_PI * 6e9, max_relative = 1e-12);
        assert_abs_diff_eq!(k_e, 0.15080, epsilon = 5e-6);
        // sqrt(300 pH * 120 fF) = 6e-12 s/cell exactly.
        let k_o = wavevector(&modes, Mode::Odd, TWO_PI * 8e9, DispersionForm::Linear).unwrap();
        assert_relative_eq!(k_o, 6e-12 * TWO_PI * 8e9, max_relative = 1e-12);
        assert_abs_diff_eq!(k_o, 0.30159, epsilon = 5e-6);
    }

    #[test]
    fn wavevector_zero_frequency_is_zero() {
        let modes = derive_modes(&CircuitParams::default()).unwrap();
        for form in [DispersionForm::Exact, DispersionForm::Linear] {
            assert_eq!(wavevector(&modes, Mode::Even, 0.0, form).unwrap(), 0.0);
            assert_eq!(wavevector(&modes, Mode::Odd, 0.0, form).unwrap(), 0.0);
        }
    }

    #[test]
    fn wavevector_exact_errors_at_plasma_cutoff() {
        let modes = derive_modes(&CircuitParams::default()).unwrap();
        let err = wavevector(&modes, Mode::Odd, modes.wj_o, DispersionForm::Exact).unwrap_err();
        assert!(err.to_string().contains("above plasma cutoff"));
        // Linear form has no cutoff.
        assert!(wavevector(&modes, Mode::Odd, modes.wj_o, DispersionForm::Linear).is_ok());
    }

    #[test]
    fn exact_dispersion_dominates_linear_and_agrees_at_low_frequency() {
        let modes = derive_modes(&CircuitParams::default()).unwrap();
        for mode in [Mode::Even, Mode::Odd] {
            let wj = modes.plasma_frequency(mode);
            let mut last = 0.0;
            for i in 1..=99 {
                let omega = wj * 0.01 * i as f64 * 0.99; // up to 0.98 wj
                let exact = wavevector(&modes, mode, omega, DispersionForm::Exact).unwrap();
                let lin = wavevector(&modes, mode, omega, DispersionForm::Linear).unwrap();
                assert!(exact >= lin, "exact must dominate linear at {omega:.3e}");
                assert!(exact > last, "exact form must be monotone");
                last = exact;
                if omega / wj < 0.198 {
                    assert!(
                        (exact - lin) / exact < 0.02,
                        "forms must agree to 2% at omega/wj = {:.3}",
                        omega / wj
                    );
                }
            }
        }
    }

    proptest! {
        #[test]
        fn impedance_squared_is_l_over_c(
            c0 in 10e-15..500e-15f64,
            cs in 1e-15..200e-15f64,
            cm in 0.0..100e-15f64,
            lj0 in 50e-12..2000e-12f64,
            lm_frac in -0.8..0.8f64,
            phi_dc in 0.0..2.5f64,
        ) {
            let l_dc = squid_inductance(lj0, phi_dc, 0.0).unwrap();
            let p = CircuitParams { c0, cs, cm, lj0, lm: lm_frac * l_dc, phi_dc, m0: 0.1 };
            let modes = derive_modes(&p).unwrap();
            prop_assert!((modes.z_e * modes.z_e - modes.l_e / modes.c_e).abs()
                <= 4.0 * f64::EPSILON * (modes.l_e / modes.c_e));
            prop_assert!((modes.z_o * modes.z_o - modes.l_o / modes.c_o).abs()
                <= 4.0 * f64::EPSILON * (modes.l_o / modes.c_o));
            prop_assert!(modes.l_e > 0.0 && modes.l_o > 0.0);
        }

        #[test]
        fn squid_inductance_even_in_rf_flux_at_zero_bias(phi_rf in -1.5..1.5f64) {
            let plus = squid_inductance(300e-12, 0.0, phi_rf).unwrap();
            let minus = squid_inductance(300e-12, 0.0, -phi_rf).unwrap();
            prop_assert!((plus - minus).abs() <= f64::EPSILON * plus.abs());
        }
    }
}
