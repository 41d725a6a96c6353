//! Linear impedance-mismatch analysis of a Thévenin source.
//!
//! A source `V_th` with internal impedance `Z_th` drives a load
//! `Z_L = z · conj(Z_th)`. The normalized load `z` is mapped to the
//! reflection coefficient `Γ = (z − 1)/(z + 1)`, so that the matched load sits
//! at the centre of the Smith chart and every passive choice lies in the unit
//! disk.
//!
//! **Amplitude convention.** Every voltage and current in this crate is a
//! *peak* phasor amplitude, never RMS. Average power is therefore
//! `0.5 · Re(V · conj(I))`, which is where the `1/8` in the matched power
//! `|V_th|² / (8 Re Z_th)` comes from.

mod contour;
mod smith;

pub use contour::{gamma_for_amplitude_target, optimal_angle, pareto_front, ParetoPoint};
pub use smith::{smith_grid, SmithCell, SMITH_ANGULAR_DEFAULT, SMITH_RADIAL_DEFAULT};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Slack allowed on `|Γ| ≤ 1` for points computed on the unit circle.
const UNIT_DISK_SLACK: f64 = 1e-12;

/// Which load amplitude a ratio or contour refers to.
///
/// Carries the sign selector `ε` of the amplitude-ratio formula: `+1` for
/// voltage, `−1` for current.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantity {
    Voltage,
    Current,
}

impl Quantity {
    pub fn epsilon(self) -> f64 {
        match self {
            Quantity::Voltage => 1.0,
            Quantity::Current => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Voltage => "voltage",
            Quantity::Current => "current",
        }
    }
}

/// Source voltage phasor and internal impedance at one frequency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TheveninSource {
    v_th: Complex64,
    z_th: Complex64,
}

impl TheveninSource {
    pub fn new(v_th: Complex64, z_th: Complex64) -> Result<Self> {
        if !(z_th.re > 0.0) || !z_th.im.is_finite() {
            return Err(Error::Domain(format!(
                "source resistance must be positive, got Z_th = {z_th}"
            )));
        }
        if !(v_th.norm() > 0.0) || !v_th.norm().is_finite() {
            return Err(Error::Domain(format!(
                "source voltage must be non-zero and finite, got V_th = {v_th}"
            )));
        }
        Ok(Self { v_th, z_th })
    }

    pub fn v_th(&self) -> Complex64 {
        self.v_th
    }

    pub fn z_th(&self) -> Complex64 {
        self.z_th
    }

    /// Reactance-to-resistance ratio `Im(Z_th)/Re(Z_th)`.
    pub fn alpha(&self) -> f64 {
        self.z_th.im / self.z_th.re
    }

    /// Physical load impedance for a normalized load `z`.
    pub fn load_impedance(&self, z: Complex64) -> Complex64 {
        z * self.z_th.conj()
    }

    /// Load current phasor for a physical load impedance.
    pub fn load_current(&self, z_load: Complex64) -> Result<Complex64> {
        let total = self.z_th + z_load;
        if total.norm() == 0.0 {
            return Err(Error::Domain(format!(
                "load {z_load} shorts the source impedance"
            )));
        }
        Ok(self.v_th / total)
    }

    /// Average power, voltage and current amplitudes at the conjugate match.
    pub fn matched_baseline(&self) -> MatchedBaseline {
        let v = self.v_th.norm();
        let r = self.z_th.re;
        MatchedBaseline {
            p_matched: v * v / (8.0 * r),
            v_peak_matched: v * self.z_th.norm() / (2.0 * r),
            i_peak_matched: v / (2.0 * r),
        }
    }
}

/// Free-function form of [`TheveninSource::matched_baseline`].
pub fn matched_baseline(src: &TheveninSource) -> MatchedBaseline {
    src.matched_baseline()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatchedBaseline {
    /// Average load power (W).
    pub p_matched: f64,
    /// Peak load voltage (V).
    pub v_peak_matched: f64,
    /// Peak load current (A).
    pub i_peak_matched: f64,
}

pub fn gamma_from_z(z: Complex64) -> Result<Complex64> {
    let den = z + 1.0;
    if den.norm() == 0.0 {
        return Err(Error::Singular {
            what: "z = -1 has no reflection coefficient",
            gamma: Complex64::new(f64::INFINITY, 0.0),
            alpha: f64::NAN,
        });
    }
    Ok((z - 1.0) / den)
}

pub fn z_from_gamma(gamma: Complex64) -> Result<Complex64> {
    let den = Complex64::new(1.0, 0.0) - gamma;
    if den.norm() == 0.0 {
        return Err(Error::Singular {
            what: "gamma = 1 is an open circuit",
            gamma,
            alpha: f64::NAN,
        });
    }
    Ok((gamma + 1.0) / den)
}

fn check_passive(gamma: Complex64) -> Result<()> {
    if gamma.norm() > 1.0 + UNIT_DISK_SLACK || !gamma.norm().is_finite() {
        return Err(Error::Domain(format!(
            "|gamma| = {} exceeds 1 (active load)",
            gamma.norm()
        )));
    }
    Ok(())
}

/// Load power as a fraction of the matched power, `1 − |Γ|²`.
///
/// This is the Smith-chart power ratio. It coincides with the actual circuit
/// power when the source is purely resistive; see [`exact_power_ratio`] for the
/// general case.
pub fn power_ratio(gamma: Complex64) -> Result<f64> {
    check_passive(gamma)?;
    Ok(1.0 - gamma.norm_sqr())
}

fn reactance_denominator(gamma: Complex64, alpha: f64) -> Result<f64> {
    let den = alpha * alpha * gamma.norm_sqr() + 2.0 * alpha * gamma.im + 1.0;
    if den <= 1e-14 * (1.0 + alpha * alpha * gamma.norm_sqr()) {
        return Err(Error::Singular {
            what: "load cancels the source impedance",
            gamma,
            alpha,
        });
    }
    Ok(den)
}

/// Load amplitude relative to its matched value, `|V_L|/|V_L^m|` or
/// `|I_L|/|I_L^m|`.
pub fn amplitude_ratio(gamma: Complex64, alpha: f64, quantity: Quantity) -> Result<f64> {
    let den = reactance_denominator(gamma, alpha)?;
    let num = gamma.norm_sqr() + 2.0 * quantity.epsilon() * gamma.re + 1.0;
    Ok((num.max(0.0) / den).sqrt())
}

/// Average load power relative to the matched power, computed from the
/// circuit itself: `0.5 |I_L|² Re(Z_L) / P_m`.
///
/// Equal to [`power_ratio`] for `alpha = 0` and in general
/// `(1 − |Γ|² + 2α Im Γ) / (α²|Γ|² + 2α Im Γ + 1)`.
pub fn exact_power_ratio(gamma: Complex64, alpha: f64) -> Result<f64> {
    check_passive(gamma)?;
    let den = reactance_denominator(gamma, alpha)?;
    Ok((1.0 - gamma.norm_sqr() + 2.0 * alpha * gamma.im) / den)
}

/// A load choice and the amplitudes it produces, all relative to the match.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatingPoint {
    pub z: Complex64,
    pub gamma: Complex64,
    pub power_ratio: f64,
    pub v_ratio: f64,
    pub i_ratio: f64,
}

impl OperatingPoint {
    pub fn from_gamma(gamma: Complex64, alpha: f64) -> Result<Self> {
        let z = if gamma == Complex64::new(1.0, 0.0) {
            Complex64::new(f64::INFINITY, 0.0)
        } else {
            z_from_gamma(gamma)?
        };
        Ok(Self {
            z,
            gamma,
            power_ratio: power_ratio(gamma)?,
            v_ratio: amplitude_ratio(gamma, alpha, Quantity::Voltage)?,
            i_ratio: amplitude_ratio(gamma, alpha, Quantity::Current)?,
        })
    }

    pub fn from_z(z: Complex64, alpha: f64) -> Result<Self> {
        let gamma = gamma_from_z(z)?;
        let mut op = Self::from_gamma(gamma, alpha)?;
        op.z = z;
        Ok(op)
    }

    pub fn ratio(&self, quantity: Quantity) -> f64 {
        match quantity {
            Quantity::Voltage => self.v_ratio,
            Quantity::Current => self.i_ratio,
        }
    }
}
