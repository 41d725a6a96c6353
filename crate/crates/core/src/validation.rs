//! Describing-function predictions checked against the time-domain
//! simulation on the same plant and current limit.

use num_complex::Complex64;

use crate::describing::{equivalent_z, solve_operating_point, SaturationSolution, SolveOptions};
use crate::error::Result;
use crate::simulation::{harmonic_decompose, simulate, SimConfig, SimResult};
use crate::wec::{position_phasor, thevenin_from_plant, WecPlant};

/// Relative error allowed everywhere when the limit is inactive.
pub const UNSATURATED_TOL: f64 = 5e-3;
/// Relative error in total power under saturation.
pub const SATURATED_POWER_TOL: f64 = 0.05;
/// Relative error in the fundamental current under saturation.
pub const SATURATED_FUNDAMENTAL_TOL: f64 = 0.02;
/// Below this `|Z_th(ω)| / |Z_th(3ω)|` the sinusoidal-input assumption is
/// considered violated and failures are reported but not counted.
pub const LOW_PASS_FLAG: f64 = 1.5;

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub i_max: f64,
    pub i_max_fraction: f64,
    pub low_pass_merit: f64,
    pub assumption_violated: bool,
    pub saturated: bool,
    pub power_predicted: f64,
    pub power_simulated: f64,
    pub power_rel_err: f64,
    pub fundamental_predicted: f64,
    pub fundamental_simulated: f64,
    pub fundamental_rel_err: f64,
    pub position_predicted: f64,
    pub position_simulated: f64,
    pub position_rel_err: f64,
    pub sim_converged: bool,
    pub solution: SaturationSolution,
    pub sim: SimResult,
}

impl ValidationReport {
    /// Whether every error is inside the threshold that applies to this row.
    pub fn within_tolerance(&self) -> bool {
        if !self.sim_converged {
            return false;
        }
        if self.saturated {
            self.power_rel_err <= SATURATED_POWER_TOL
                && self.fundamental_rel_err <= SATURATED_FUNDAMENTAL_TOL
        } else {
            self.power_rel_err <= UNSATURATED_TOL
                && self.fundamental_rel_err <= UNSATURATED_TOL
                && self.position_rel_err <= UNSATURATED_TOL
        }
    }

    /// A row fails only if it is out of tolerance and its assumptions hold.
    pub fn passes(&self) -> bool {
        self.assumption_violated || self.within_tolerance()
    }
}

fn rel(predicted: f64, reference: f64) -> f64 {
    (predicted - reference).abs() / reference.abs()
}

/// Runs the conjugate-match saturated controller through both the
/// describing-function solve and the simulation.
pub fn validate_df(plant: &WecPlant, i_max: f64, cfg: &SimConfig) -> Result<ValidationReport> {
    let src = thevenin_from_plant(plant)?;
    let z_c = src.z_th().conj();
    let solution = solve_operating_point(
        &src,
        plant,
        i_max,
        SolveOptions {
            z_c: Some(z_c),
            ..SolveOptions::default()
        },
    )?;
    let sim = simulate(plant, z_c, i_max, cfg)?;
    let dft = harmonic_decompose(&sim, 1)?;

    let z1 = equivalent_z(z_c, solution.f_sat1, src.z_th())
        .unwrap_or(Complex64::new(f64::INFINITY, 0.0));
    let position_predicted = position_phasor(plant, z1)?.norm();
    let fundamental_predicted = solution.fundamental().current.norm();
    let fundamental_simulated = dft.phasors[0].norm();
    let merit = plant.low_pass_merit();

    Ok(ValidationReport {
        i_max,
        i_max_fraction: i_max / src.matched_baseline().i_peak_matched,
        low_pass_merit: merit,
        assumption_violated: merit < LOW_PASS_FLAG,
        saturated: solution.is_saturated(),
        power_predicted: solution.p_total,
        power_simulated: sim.p_avg,
        power_rel_err: rel(solution.p_total, sim.p_avg),
        fundamental_predicted,
        fundamental_simulated,
        fundamental_rel_err: rel(fundamental_predicted, fundamental_simulated),
        position_predicted,
        position_simulated: sim.x_amp,
        position_rel_err: rel(position_predicted, sim.x_amp),
        sim_converged: sim.converged,
        solution,
        sim,
    })
}
