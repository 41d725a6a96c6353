//! Describing-function linearization of a current (force) limit.
//!
//! The controller computes a temporary current `I_temp = V_L / Z_C`, and the
//! drive applies `I = I_max · sat(I_temp / I_max)`. For a sinusoidal `I_temp`
//! the clipped waveform is an odd-harmonic series whose `n`th amplitude is
//! `f_sat,n · |I_temp|`; each harmonic then sees the equivalent load
//! `Z_C / f_sat,n`.
//!
//! Phasors are cosine-referenced (`x(t) = Re(X e^{iωt})`). If
//! `i_temp(t) = |I_temp| cos(ωt + ψ)`, harmonic `n` of the clipped current has
//! phase `nψ + (n − 1)π/2`, the same as `sin(n(ωt + ψ + π/2))`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mismatch::{gamma_for_amplitude_target, OperatingPoint, Quantity, TheveninSource};
use crate::wec::WecPlant;

pub const DEFAULT_HARMONICS: u32 = 9;
const SOLVER_TOL: f64 = 1e-12;
const SOLVER_MAX_ITER: usize = 200;
const FIXED_POINT_BUDGET: usize = 100;
const DAMPING: f64 = 0.5;

/// Harmonic amplitude of a unit sine clipped at `i_script`, relative to the
/// unclipped amplitude.
///
/// `i_script = I_max / |I_temp|`; values at or above one mean no clipping.
/// Even harmonics are identically zero. For odd `n ≥ 3` the coefficient is
/// signed (relative to `sin(n u)`); magnitudes decay like `1/n²`.
pub fn saturation_factor(n: u32, i_script: f64) -> f64 {
    if n.is_multiple_of(2) {
        return 0.0;
    }
    if i_script >= 1.0 {
        return if n == 1 { 1.0 } else { 0.0 };
    }
    let i = i_script.max(0.0);
    let root = (1.0 - i * i).sqrt();
    if n == 1 {
        return 2.0 / PI * (i * root + i.asin());
    }
    let nf = f64::from(n);
    let theta = nf * i.asin();
    4.0 / PI * (nf * root * theta.sin() - i * theta.cos()) / (nf * (nf * nf - 1.0))
}

/// Saturation factors for harmonics `1, 3, …, n_max` at one clipping depth.
#[derive(Clone, Debug, PartialEq)]
pub struct SaturationFactors {
    pub i_script: f64,
    pub factors: BTreeMap<u32, f64>,
}

impl SaturationFactors {
    pub fn new(i_script: f64, n_max: u32) -> Self {
        let factors = (1..=n_max)
            .step_by(2)
            .map(|n| (n, saturation_factor(n, i_script)))
            .collect();
        Self { i_script, factors }
    }

    pub fn get(&self, n: u32) -> f64 {
        self.factors.get(&n).copied().unwrap_or(0.0)
    }
}

/// Source impedance at integer multiples of the wave frequency.
pub trait HarmonicImpedance {
    fn z_th_harmonic(&self, n: u32) -> Complex64;
}

impl HarmonicImpedance for WecPlant {
    fn z_th_harmonic(&self, n: u32) -> Complex64 {
        self.z_th_at(f64::from(n) * self.omega)
    }
}

/// Source whose impedance is the same at every harmonic.
#[derive(Clone, Copy, Debug)]
pub struct FlatImpedance(pub Complex64);

impl HarmonicImpedance for FlatImpedance {
    fn z_th_harmonic(&self, _n: u32) -> Complex64 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Harmonic {
    pub n: u32,
    /// Current phasor (A).
    pub current: Complex64,
    /// Terminal voltage phasor (V).
    pub voltage: Complex64,
    /// Average power delivered to the controller (W).
    pub power: f64,
    pub f_sat: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SaturationSolution {
    pub i_max: f64,
    pub z_c: Complex64,
    pub i_temp: Complex64,
    pub psi: f64,
    pub i_script: f64,
    /// Fundamental saturation factor at the operating point.
    pub f_sat1: f64,
    pub harmonics: Vec<Harmonic>,
    pub p_total: f64,
    pub converged: bool,
    pub iterations: usize,
    pub residual: f64,
}

impl SaturationSolution {
    pub fn fundamental(&self) -> &Harmonic {
        &self.harmonics[0]
    }

    /// Ratio of fundamental current to the peak current limit, `f_sat,1 / 𝓘`.
    pub fn fundamental_gain(&self) -> f64 {
        self.fundamental().current.norm() / self.i_max
    }

    pub fn is_saturated(&self) -> bool {
        self.f_sat1 < 1.0
    }

    /// Truncated harmonic series of the clipped current at phase `ωt`.
    pub fn current_at_phase(&self, wt: f64) -> f64 {
        self.harmonics
            .iter()
            .map(|h| (h.current * Complex64::from_polar(1.0, f64::from(h.n) * wt)).re)
            .sum()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Controller impedance; `None` uses the conjugate match `conj(Z_th)`.
    pub z_c: Option<Complex64>,
    /// Highest odd harmonic kept.
    pub n_harmonics: u32,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            z_c: None,
            n_harmonics: DEFAULT_HARMONICS,
        }
    }
}

/// Solves `I_temp = V_th / (f Z_th + Z_C)` together with
/// `f = f_sat,1(I_max / |I_temp|)` for the fundamental saturation factor, then
/// assembles the harmonic currents, voltages and powers.
///
/// Damped fixed-point iteration on `f ∈ [0, 1]`, falling back to bisection on
/// the residual once it changes sign between iterates.
pub fn solve_operating_point(
    src: &TheveninSource,
    harmonics: &impl HarmonicImpedance,
    i_max: f64,
    opts: SolveOptions,
) -> Result<SaturationSolution> {
    if !(i_max > 0.0) {
        return Err(Error::Domain(format!(
            "current limit {i_max} must be positive"
        )));
    }
    if opts.n_harmonics.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "harmonic truncation must be odd, got {}",
            opts.n_harmonics
        )));
    }
    let z_th = src.z_th();
    let v_th = src.v_th();
    let z_c = opts.z_c.unwrap_or_else(|| z_th.conj());
    if !(z_c.re > 0.0) {
        return Err(Error::Domain(format!(
            "controller impedance {z_c} must have positive real part"
        )));
    }

    let i_temp_at = |f: f64| v_th / (f * z_th + z_c);
    let residual = |f: f64| saturation_factor(1, i_max / i_temp_at(f).norm()) - f;

    let mut trace = Vec::new();
    let mut f = 1.0;
    let mut r = residual(f);
    trace.push(r);
    let mut iterations = 1;

    // g(0) > 0 and g(1) <= 0 always hold, so [lo, hi] brackets a root.
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    if r.abs() > SOLVER_TOL {
        let mut prev_sign = r.signum();
        while iterations < FIXED_POINT_BUDGET {
            f = (f + DAMPING * r).clamp(0.0, 1.0);
            r = residual(f);
            trace.push(r);
            iterations += 1;
            if r > 0.0 {
                lo = lo.max(f);
            } else {
                hi = hi.min(f);
            }
            if r.abs() <= SOLVER_TOL || r.signum() != prev_sign {
                break;
            }
            prev_sign = r.signum();
        }
        while r.abs() > SOLVER_TOL && iterations < SOLVER_MAX_ITER {
            f = 0.5 * (lo + hi);
            if f <= lo || f >= hi {
                break;
            }
            r = residual(f);
            trace.push(r);
            iterations += 1;
            if r > 0.0 {
                lo = f;
            } else {
                hi = f;
            }
        }
    }
    if !(r.abs() <= SOLVER_TOL) {
        return Err(Error::NonConvergence {
            iterations,
            last: r,
            residuals: trace,
        });
    }

    let i_temp = i_temp_at(f);
    let mag = i_temp.norm();
    let psi = i_temp.arg();
    let i_script = i_max / mag;
    let mut out = Vec::new();
    let mut p_total = 0.0;
    for n in (1..=opts.n_harmonics).step_by(2) {
        let f_n = if n == 1 {
            f
        } else {
            saturation_factor(n, i_script)
        };
        let phase = f64::from(n) * psi + f64::from(n - 1) * FRAC_PI_2;
        let current = Complex64::from_polar(f_n * mag, phase);
        let source = if n == 1 {
            v_th
        } else {
            Complex64::new(0.0, 0.0)
        };
        let voltage = source - harmonics.z_th_harmonic(n) * current;
        let power = 0.5 * (voltage * current.conj()).re;
        p_total += power;
        out.push(Harmonic {
            n,
            current,
            voltage,
            power,
            f_sat: f_n,
        });
    }

    Ok(SaturationSolution {
        i_max,
        z_c,
        i_temp,
        psi,
        i_script,
        f_sat1: f,
        harmonics: out,
        p_total,
        converged: true,
        iterations,
        residual: r,
    })
}

/// Fundamental-only power, the classic single-harmonic describing function.
pub fn classic_sidf_power(solution: &SaturationSolution) -> f64 {
    solution.fundamental().power
}

/// Normalized load `Z_C / (f_sat,n conj(Z_th))` seen by harmonic `n`.
/// Returns `None` (open circuit) when the harmonic carries no current.
pub fn equivalent_z(z_c: Complex64, f_sat_n: f64, z_th: Complex64) -> Option<Complex64> {
    if f_sat_n == 0.0 {
        None
    } else {
        Some(z_c / (f_sat_n * z_th.conj()))
    }
}

/// Best linear controller meeting the same current limit: the point on the
/// minimum-current contour with `|I_L| / |I_L^m| = i_max / |I_L^m|`.
/// An inactive limit (`i_max ≥ |I_L^m|`) returns the matched point.
pub fn linear_saturation_equivalent(src: &TheveninSource, i_max: f64) -> Result<OperatingPoint> {
    if !(i_max > 0.0) {
        return Err(Error::Domain(format!(
            "current limit {i_max} must be positive"
        )));
    }
    let alpha = src.alpha();
    let target = (i_max / src.matched_baseline().i_peak_matched).min(1.0);
    let gamma = gamma_for_amplitude_target(target, alpha, Quantity::Current)?;
    OperatingPoint::from_gamma(gamma, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mismatch::{exact_power_ratio, gamma_from_z, power_ratio};
    use crate::wec::{fixtures::reference_plant, thevenin_from_plant};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn factor_branches() {
        assert_eq!(saturation_factor(1, 1.0), 1.0);
        assert_eq!(saturation_factor(1, 3.0), 1.0);
        assert_eq!(saturation_factor(3, 1.5), 0.0);
        assert_eq!(saturation_factor(4, 0.3), 0.0);
        assert!((saturation_factor(1, 1.0 - 1e-12) - 1.0).abs() < 1e-5);
        let i = 1e-4;
        assert!((saturation_factor(1, i) / i - 4.0 / PI).abs() < 1e-6);
        assert!((saturation_factor(3, i) / i - 4.0 / (3.0 * PI)).abs() < 1e-6);
    }

    #[test]
    fn fundamental_factor_monotone() {
        let mut prev = 0.0;
        for k in 1..=1000 {
            let f = saturation_factor(1, k as f64 / 1000.0);
            assert!(f >= prev && f <= 1.0);
            prev = f;
        }
    }

    #[test]
    fn factor_table() {
        let t = SaturationFactors::new(0.5, 7);
        assert_eq!(t.factors.len(), 4);
        assert_eq!(t.get(2), 0.0);
        assert_eq!(t.get(1), saturation_factor(1, 0.5));
    }

    #[test]
    fn unsaturated_solution_is_matched() {
        let p = reference_plant();
        let src = thevenin_from_plant(&p).unwrap();
        let m = src.matched_baseline();
        let sol = solve_operating_point(&src, &p, 1.2 * m.i_peak_matched, SolveOptions::default())
            .unwrap();
        assert_eq!(sol.f_sat1, 1.0);
        assert!(
            (sol.fundamental().current.norm() - m.i_peak_matched).abs() < 1e-9 * m.i_peak_matched
        );
        assert!((sol.p_total - m.p_matched).abs() < 1e-9 * m.p_matched);
        assert!(sol.harmonics[1..].iter().all(|h| h.current.norm() == 0.0));
        assert!((classic_sidf_power(&sol) - m.p_matched).abs() < 1e-9 * m.p_matched);
    }

    #[test]
    fn deep_saturation_approaches_square_wave() {
        let p = reference_plant();
        let src = thevenin_from_plant(&p).unwrap();
        let i_max = 1e-6 * src.matched_baseline().i_peak_matched;
        let sol = solve_operating_point(&src, &p, i_max, SolveOptions::default()).unwrap();
        assert!((sol.fundamental_gain() - 4.0 / PI).abs() < 1e-5);
    }

    #[test]
    fn solution_invariants() {
        let p = reference_plant();
        let src = thevenin_from_plant(&p).unwrap();
        let im = src.matched_baseline().i_peak_matched;
        for frac in [0.9, 0.6, 0.3, 0.05] {
            let sol = solve_operating_point(&src, &p, frac * im, SolveOptions::default()).unwrap();
            let h1 = sol.fundamental();
            assert!((h1.current.norm() - sol.f_sat1 * sol.i_temp.norm()).abs() < 1e-12 * im);
            let dphi = (h1.current / sol.i_temp).arg();
            assert!(dphi.abs() < 1e-12);
            assert!(h1.current.norm() <= 4.0 / PI * sol.i_max * (1.0 + 1e-12));
            for h in &sol.harmonics[1..] {
                assert!(h.power <= 0.0, "{h:?}");
            }
            assert!(classic_sidf_power(&sol) >= sol.p_total);
            let gain = sol.fundamental_gain();
            assert!((1.0..=4.0 / PI + 1e-12).contains(&gain), "{gain}");
        }
    }

    #[test]
    fn classic_power_matches_mismatch_route() {
        let p = reference_plant();
        let src = thevenin_from_plant(&p).unwrap();
        let m = src.matched_baseline();
        let sol = solve_operating_point(&src, &p, 0.5 * m.i_peak_matched, SolveOptions::default())
            .unwrap();
        let z1 = equivalent_z(sol.z_c, sol.f_sat1, src.z_th()).unwrap();
        let g1 = gamma_from_z(z1).unwrap();
        let exact = exact_power_ratio(g1, src.alpha()).unwrap() * m.p_matched;
        assert!((classic_sidf_power(&sol) - exact).abs() < 1e-10 * m.p_matched);
    }

    #[test]
    fn classic_power_matches_smith_ratio_when_resistive() {
        let src = TheveninSource::new(c(10.0, 0.0), c(2.0, 0.0)).unwrap();
        let flat = FlatImpedance(src.z_th());
        let m = src.matched_baseline();
        let sol =
            solve_operating_point(&src, &flat, 0.4 * m.i_peak_matched, SolveOptions::default())
                .unwrap();
        let g1 = gamma_from_z(equivalent_z(sol.z_c, sol.f_sat1, src.z_th()).unwrap()).unwrap();
        assert!(
            (classic_sidf_power(&sol) - power_ratio(g1).unwrap() * m.p_matched).abs()
                < 1e-10 * m.p_matched
        );
    }

    #[test]
    fn equivalent_load_values() {
        let zth = c(1.5, -0.4);
        assert!((equivalent_z(zth.conj(), 1.0, zth).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!((equivalent_z(zth.conj(), 0.5, zth).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
        assert_eq!(equivalent_z(zth.conj(), 0.0, zth), None);
    }

    #[test]
    fn linear_baseline() {
        let src = TheveninSource::new(c(4.0, 0.0), c(1.0, 0.0)).unwrap();
        let im = src.matched_baseline().i_peak_matched;
        let op = linear_saturation_equivalent(&src, im).unwrap();
        assert_eq!(op.gamma, c(0.0, 0.0));
        let op = linear_saturation_equivalent(&src, 0.5 * im).unwrap();
        assert!((op.gamma - c(0.5, 0.0)).norm() < 1e-10);
        assert!((op.power_ratio - 0.75).abs() < 1e-10);
    }

    #[test]
    fn nonlinear_beats_linear_when_strongly_saturated() {
        let src = TheveninSource::new(c(4.0, 0.0), c(1.0, 0.0)).unwrap();
        let m = src.matched_baseline();
        for frac in [0.5, 0.3, 0.1] {
            let i_max = frac * m.i_peak_matched;
            let sol = solve_operating_point(
                &src,
                &FlatImpedance(src.z_th()),
                i_max,
                SolveOptions::default(),
            )
            .unwrap();
            let lin = linear_saturation_equivalent(&src, i_max).unwrap();
            assert!(sol.p_total > lin.power_ratio * m.p_matched, "{frac}");
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let src = TheveninSource::new(c(4.0, 0.0), c(1.0, 0.0)).unwrap();
        let flat = FlatImpedance(src.z_th());
        assert!(solve_operating_point(&src, &flat, 0.0, SolveOptions::default()).is_err());
        let even = SolveOptions {
            n_harmonics: 4,
            ..Default::default()
        };
        assert!(solve_operating_point(&src, &flat, 1.0, even).is_err());
        let active = SolveOptions {
            z_c: Some(c(-1.0, 0.0)),
            ..Default::default()
        };
        assert!(solve_operating_point(&src, &flat, 1.0, active).is_err());
    }
}
