use std::f64::consts::PI;

use num_complex::Complex64;

use super::{amplitude_ratio, power_ratio, Quantity};
use crate::error::{Error, Result};

pub const SMITH_RADIAL_DEFAULT: usize = 101;
pub const SMITH_ANGULAR_DEFAULT: usize = 360;

/// One polar cell of the reflection-coefficient disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmithCell {
    pub gamma_mag: f64,
    pub gamma_angle: f64,
    pub gamma: Complex64,
    pub power_ratio: f64,
    /// `+inf` where the load cancels the source impedance.
    pub v_ratio: f64,
    pub i_ratio: f64,
    pub v_exceeds_one: bool,
    pub i_exceeds_one: bool,
}

/// Polar grid over `|Γ| ∈ [0, 1]` (`radial` rings, endpoints included) and
/// `∠Γ ∈ [−π, π)` (`angular` spokes). Rows are ordered ring by ring.
pub fn smith_grid(alpha: f64, radial: usize, angular: usize) -> Result<Vec<SmithCell>> {
    if radial < 2 || angular < 2 {
        return Err(Error::Domain(format!(
            "smith grid resolution must be at least 2x2, got {radial}x{angular}"
        )));
    }
    let mut cells = Vec::with_capacity(radial * angular);
    for k in 0..radial {
        let mag = k as f64 / (radial - 1) as f64;
        for j in 0..angular {
            let angle = -PI + 2.0 * PI * j as f64 / angular as f64;
            let gamma = Complex64::from_polar(mag, angle);
            let v_ratio = ratio_or_inf(gamma, alpha, Quantity::Voltage)?;
            let i_ratio = ratio_or_inf(gamma, alpha, Quantity::Current)?;
            cells.push(SmithCell {
                gamma_mag: mag,
                gamma_angle: angle,
                gamma,
                power_ratio: power_ratio(gamma)?,
                v_ratio,
                i_ratio,
                v_exceeds_one: v_ratio > 1.0,
                i_exceeds_one: i_ratio > 1.0,
            });
        }
    }
    Ok(cells)
}

fn ratio_or_inf(gamma: Complex64, alpha: f64, q: Quantity) -> Result<f64> {
    match amplitude_ratio(gamma, alpha, q) {
        Ok(r) => Ok(r),
        Err(Error::Singular { .. }) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}
