use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::{amplitude_ratio, power_ratio, Quantity};
use crate::error::{Error, Result};

/// Scan resolution over `|Γ| ∈ [0, 1]` before bisecting a target crossing.
const TARGET_SCAN_SAMPLES: usize = 64;
const TARGET_TOL: f64 = 1e-12;

/// Wrap an angle into `(−π, π]`.
pub(crate) fn wrap_angle(angle: f64) -> f64 {
    let mut a = angle.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    a
}

/// Angle of `Γ` that minimizes the voltage (or current) ratio for a fixed
/// `|Γ|`, in `(−π, π]`.
///
/// Stationary condition of the ratio with respect to `∠Γ`:
/// `A sin φ + ε α B cos φ = −2α|Γ|` with `A = α²|Γ|² + 1`, `B = |Γ|² + 1`.
/// With `σ = √(A² + α²B²)` the minimizing root is
/// `2·atan(A / (σ + εαB)) + ε·acos(−2α|Γ|/σ)`. The denominator of the
/// half-angle term never vanishes because `σ ≥ |αB|` and `A ≥ 1`.
pub fn optimal_angle(gamma_mag: f64, alpha: f64, quantity: Quantity) -> Result<f64> {
    if !(0.0..=1.0).contains(&gamma_mag) {
        return Err(Error::Domain(format!(
            "|gamma| = {gamma_mag} is outside [0, 1]"
        )));
    }
    if !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha = {alpha} is not finite")));
    }
    let eps = quantity.epsilon();
    let g2 = gamma_mag * gamma_mag;
    let a = alpha * alpha * g2 + 1.0;
    let b = g2 + 1.0;
    let sigma = a.hypot(alpha * b);
    let half = 2.0 * (a / (sigma + eps * alpha * b)).atan();
    let cos_arg = (-2.0 * alpha * gamma_mag / sigma).clamp(-1.0, 1.0);
    Ok(wrap_angle(half + eps * cos_arg.acos()))
}

fn on_contour(gamma_mag: f64, alpha: f64, quantity: Quantity) -> Result<Complex64> {
    let angle = optimal_angle(gamma_mag, alpha, quantity)?;
    Ok(Complex64::from_polar(gamma_mag, angle))
}

/// Smallest-`|Γ|` point on the optimal contour whose amplitude ratio equals
/// `target_ratio`, i.e. the largest-power load meeting the amplitude limit.
///
/// The ratio along the contour is not assumed monotone: the contour is
/// scanned at 64 intervals and the first crossing is bisected.
pub fn gamma_for_amplitude_target(
    target_ratio: f64,
    alpha: f64,
    quantity: Quantity,
) -> Result<Complex64> {
    if !(target_ratio > 0.0 && target_ratio <= 1.0) {
        return Err(Error::Domain(format!(
            "target ratio {target_ratio} is outside (0, 1]"
        )));
    }
    if target_ratio == 1.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let ratio_at = |g: f64| -> Result<f64> {
        amplitude_ratio(on_contour(g, alpha, quantity)?, alpha, quantity)
    };

    let mut lo = 0.0;
    let mut hi = None;
    for k in 1..=TARGET_SCAN_SAMPLES {
        let g = k as f64 / TARGET_SCAN_SAMPLES as f64;
        if ratio_at(g)? <= target_ratio {
            hi = Some(g);
            break;
        }
        lo = g;
    }
    let mut hi = hi.ok_or(Error::Infeasible {
        target: target_ratio,
        alpha,
    })?;

    // invariant: ratio(lo) > target >= ratio(hi)
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let r = ratio_at(mid)?;
        if (r - target_ratio).abs() <= TARGET_TOL {
            return on_contour(mid, alpha, quantity);
        }
        if r > target_ratio {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    on_contour(hi, alpha, quantity)
}

/// One nondominated (power, voltage, current) combination.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParetoPoint {
    pub power_ratio: f64,
    pub v_ratio: f64,
    pub i_ratio: f64,
    pub gamma: Complex64,
    /// Contour the point was taken from.
    pub contour: Quantity,
}

impl ParetoPoint {
    fn dominates(&self, other: &ParetoPoint) -> bool {
        let no_worse = self.power_ratio >= other.power_ratio
            && self.v_ratio <= other.v_ratio
            && self.i_ratio <= other.i_ratio;
        let better = self.power_ratio > other.power_ratio
            || self.v_ratio < other.v_ratio
            || self.i_ratio < other.i_ratio;
        no_worse && better
    }

    fn same_triple(&self, other: &ParetoPoint) -> bool {
        self.power_ratio == other.power_ratio
            && self.v_ratio == other.v_ratio
            && self.i_ratio == other.i_ratio
    }
}

/// Nondominated triples along the minimum-voltage and minimum-current
/// contours, sorted by power ratio (descending).
pub fn pareto_front(alpha: f64, n_points: usize) -> Result<Vec<ParetoPoint>> {
    if n_points < 2 {
        return Err(Error::Domain(format!(
            "pareto front needs at least 2 points, got {n_points}"
        )));
    }
    let mut candidates = Vec::with_capacity(2 * n_points);
    for k in 0..n_points {
        let g = k as f64 / (n_points - 1) as f64;
        for contour in [Quantity::Voltage, Quantity::Current] {
            let gamma = on_contour(g, alpha, contour)?;
            candidates.push(ParetoPoint {
                power_ratio: power_ratio(gamma)?,
                v_ratio: amplitude_ratio(gamma, alpha, Quantity::Voltage)?,
                i_ratio: amplitude_ratio(gamma, alpha, Quantity::Current)?,
                gamma,
                contour,
            });
        }
    }

    let mut front: Vec<ParetoPoint> = Vec::new();
    for (idx, p) in candidates.iter().enumerate() {
        if candidates.iter().any(|q| q.dominates(p)) {
            continue;
        }
        if candidates[..idx].iter().any(|q| q.same_triple(p)) {
            continue;
        }
        front.push(*p);
    }
    front.sort_by(|a, b| {
        b.power_ratio
            .total_cmp(&a.power_ratio)
            .then(a.v_ratio.total_cmp(&b.v_ratio))
            .then(a.i_ratio.total_cmp(&b.i_ratio))
            .then_with(|| match (a.contour, b.contour) {
                (Quantity::Voltage, Quantity::Current) => Ordering::Less,
                (Quantity::Current, Quantity::Voltage) => Ordering::Greater,
                _ => Ordering::Equal,
            })
    });
    Ok(front)
}
