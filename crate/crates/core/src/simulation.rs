//! Fixed-step time-domain simulation of the converter under a (possibly
//! saturated) impedance controller, used as a brute-force check of the
//! frequency-domain predictions.
//!
//! Body: `(m + A) ẍ + B_h ẋ + K_h x + G (G B_d ẋ + G K_d x + K_t i) = f_e(t)`
//! with `f_e(t) = |F_e| cos(ωt + ∠F_e)`. Generator terminal voltage
//! `v_L = K_t G ẋ − R i − L di/dt`.
//!
//! Controller `Z_C = B_c + K_c/s`. Without winding inductance it is realized
//! as the proper filter `i_temp = (v_L − (K_c/B_c) ξ) / B_c`,
//! `ξ̇ = −(K_c/B_c) ξ + v_L`, and the applied current is
//! `i = I_max sat(i_temp / I_max)`. The loop `v_L ↔ i` is algebraic and is
//! closed per evaluation by picking the consistent linear branch. With
//! winding inductance the current is a state and the controller voltage law
//! `v_L = B_c i + K_c ∫ i` is used; that path is linear only.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::wec::WecPlant;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimConfig {
    pub steps_per_period: usize,
    pub n_periods: usize,
    pub transient_periods: usize,
    /// Relative change of period-averaged power that counts as steady.
    pub convergence_tol: f64,
    pub algebraic_loop_tol: f64,
    /// Harmonics extracted into [`SimResult::harmonic_currents`].
    pub n_harmonics: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            steps_per_period: 2000,
            n_periods: 40,
            transient_periods: 20,
            convergence_tol: 1e-3,
            algebraic_loop_tol: 1e-12,
            n_harmonics: 9,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.steps_per_period < 100 {
            return Err(Error::Domain(format!(
                "steps_per_period must be at least 100, got {}",
                self.steps_per_period
            )));
        }
        if self.n_periods <= self.transient_periods {
            return Err(Error::Domain(format!(
                "n_periods ({}) must exceed transient_periods ({})",
                self.n_periods, self.transient_periods
            )));
        }
        if !(self.convergence_tol > 0.0) || !(self.algebraic_loop_tol > 0.0) {
            return Err(Error::Domain("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Integrator state. `aux` is the controller filter state `ξ` without winding
/// inductance, or the controller charge `∫ i dt` with it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimState {
    pub x: f64,
    pub v: f64,
    pub aux: f64,
    /// Winding current (A); only integrated when `L > 0`.
    pub i_wind: f64,
    pub t: f64,
}

impl SimState {
    fn to_array(self) -> [f64; 4] {
        [self.x, self.v, self.aux, self.i_wind]
    }

    fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimSample {
    pub t: f64,
    pub x: f64,
    pub v: f64,
    pub i: f64,
    pub v_load: f64,
    pub p_inst: f64,
}

/// Period averages of every power flow over the extraction window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyBalance {
    /// Power delivered by the wave excitation force.
    pub excitation: f64,
    /// Hydrodynamic and drivetrain damping losses.
    pub mechanical_loss: f64,
    pub winding_loss: f64,
    pub electrical: f64,
}

impl EnergyBalance {
    /// `(input − outputs) / input`.
    pub fn relative_residual(&self) -> f64 {
        let out = self.mechanical_loss + self.winding_loss + self.electrical;
        (self.excitation - out) / self.excitation
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimResult {
    /// One period of samples at the step starts of the extraction window.
    pub waveforms: Vec<SimSample>,
    pub steps_per_period: usize,
    pub omega: f64,
    /// Period-averaged electrical power (W).
    pub p_avg: f64,
    /// Cosine-referenced current phasors for `n = 1..=n_harmonics`.
    pub harmonic_currents: Vec<Complex64>,
    /// Fundamental position amplitude (m).
    pub x_amp: f64,
    /// Largest `|i|` in the extraction window.
    pub peak_current: f64,
    /// Largest `|i|` over every accepted step, transient included.
    pub max_abs_current: f64,
    pub energy: EnergyBalance,
    pub periods_run: usize,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicDecomposition {
    /// Mean value of the signal over the window.
    pub dc: f64,
    /// `phasors[k]` is harmonic `k + 1`.
    pub phasors: Vec<Complex64>,
}

#[derive(Clone, Copy)]
enum Mode {
    /// Filter realization, algebraic current.
    Algebraic,
    /// Winding current as a state, linear controller.
    Inductive,
}

struct Model {
    mass: f64,
    b_h: f64,
    b_mech: f64,
    k_h: f64,
    k_d_eff: f64,
    b_d_eff: f64,
    kg: f64,
    r: f64,
    l: f64,
    b_c: f64,
    k_c: f64,
    i_max: f64,
    omega: f64,
    f_mag: f64,
    f_phase: f64,
    mode: Mode,
    loop_tol: f64,
}

struct Eval {
    deriv: [f64; 4],
    i: f64,
    v_load: f64,
    force: f64,
}

impl Model {
    fn excitation(&self, t: f64) -> f64 {
        self.f_mag * (self.omega * t + self.f_phase).cos()
    }

    /// Applied current and terminal voltage for the algebraic controller.
    fn close_loop(&self, v: f64, xi: f64, t: f64) -> Result<(f64, f64)> {
        let emf = self.kg * v;
        let kappa = self.k_c / self.b_c;
        let drive = emf - kappa * xi;
        let linear = drive / (self.b_c + self.r);
        let i = if linear.abs() <= self.i_max {
            linear
        } else {
            self.i_max.copysign(drive)
        };
        let v_load = emf - self.r * i;
        let i_temp = (v_load - kappa * xi) / self.b_c;
        let applied = if i_temp.abs() <= self.i_max {
            i_temp
        } else {
            self.i_max.copysign(i_temp)
        };
        if (applied - i).abs() > self.loop_tol * (1.0 + i.abs()) {
            return Err(Error::AlgebraicLoop { t });
        }
        Ok((i, v_load))
    }

    fn eval(&self, t: f64, s: &[f64; 4]) -> Result<Eval> {
        let [x, v, aux, i_w] = *s;
        let force = self.excitation(t);
        let (i, v_load, d_aux, d_i) = match self.mode {
            Mode::Algebraic => {
                let (i, v_load) = self.close_loop(v, aux, t)?;
                let kappa = self.k_c / self.b_c;
                (i, v_load, -kappa * aux + v_load, 0.0)
            }
            Mode::Inductive => {
                let v_load = self.b_c * i_w + self.k_c * aux;
                let d_i = (self.kg * v - self.r * i_w - v_load) / self.l;
                (i_w, v_load, i_w, d_i)
            }
        };
        let pto = self.b_d_eff * v + self.k_d_eff * x + self.kg * i;
        let accel = (force - self.b_h * v - self.k_h * x - pto) / self.mass;
        Ok(Eval {
            deriv: [v, accel, d_aux, d_i],
            i,
            v_load,
            force,
        })
    }

    fn rk4(&self, t: f64, s: &[f64; 4], dt: f64) -> Result<[f64; 4]> {
        let add = |a: &[f64; 4], k: &[f64; 4], h: f64| -> [f64; 4] {
            [
                a[0] + h * k[0],
                a[1] + h * k[1],
                a[2] + h * k[2],
                a[3] + h * k[3],
            ]
        };
        let k1 = self.eval(t, s)?.deriv;
        let k2 = self.eval(t + 0.5 * dt, &add(s, &k1, 0.5 * dt))?.deriv;
        let k3 = self.eval(t + 0.5 * dt, &add(s, &k2, 0.5 * dt))?.deriv;
        let k4 = self.eval(t + dt, &add(s, &k3, dt))?.deriv;
        let mut out = *s;
        for j in 0..4 {
            out[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        Ok(out)
    }
}

/// Integrates from rest until the period-averaged electrical power settles
/// (and at least `transient_periods` have elapsed), then extracts one period.
///
/// `i_max = f64::INFINITY` disables saturation.
pub fn simulate(
    plant: &WecPlant,
    z_c: Complex64,
    i_max: f64,
    cfg: &SimConfig,
) -> Result<SimResult> {
    plant.validate()?;
    cfg.validate()?;
    if !(z_c.re > 0.0) || !z_c.im.is_finite() {
        return Err(Error::Domain(format!(
            "controller impedance {z_c} must have positive real part"
        )));
    }
    if !(i_max > 0.0) {
        return Err(Error::Domain(format!(
            "current limit {i_max} must be positive"
        )));
    }
    // The controller is realized as B_c + K_c / s, which is passive only for K_c ≥ 0.
    if z_c.im > 0.0 {
        return Err(Error::Unsupported(format!(
            "controller impedance {z_c} is inductive; only Im Z_C <= 0 can be simulated"
        )));
    }
    let mode = if plant.l_w > 0.0 {
        if i_max.is_finite() {
            return Err(Error::Unsupported(
                "saturated simulation requires zero winding inductance".into(),
            ));
        }
        Mode::Inductive
    } else {
        Mode::Algebraic
    };
    let g = plant.g_ratio;
    let model = Model {
        mass: plant.total_mass(),
        b_h: plant.b_h,
        b_mech: plant.total_damping(),
        k_h: plant.k_h,
        k_d_eff: g * g * plant.k_d,
        b_d_eff: g * g * plant.b_d,
        kg: plant.coupling(),
        r: plant.r_w,
        l: plant.l_w,
        b_c: z_c.re,
        // Z_C(iω) = B_c − i K_c / ω
        k_c: -plant.omega * z_c.im,
        i_max,
        omega: plant.omega,
        f_mag: plant.f_e.norm(),
        f_phase: plant.f_e.arg(),
        mode,
        loop_tol: cfg.algebraic_loop_tol,
    };
    let n = cfg.steps_per_period;
    let period = 2.0 * PI / plant.omega;
    let dt = period / n as f64;
    let mut state = [0.0_f64; 4];
    let mut step = 0usize;
    let mut trace: Vec<[f64; 4]> = Vec::new();
    let mut max_abs_current = 0.0_f64;
    let mut prev_power: Option<f64> = None;
    let mut converged = false;
    let mut window = Vec::with_capacity(n);
    let mut energy = EnergyBalance {
        excitation: 0.0,
        mechanical_loss: 0.0,
        winding_loss: 0.0,
        electrical: 0.0,
    };
    let mut periods_run = 0;

    for p in 0..cfg.n_periods {
        window.clear();
        let mut acc = EnergyBalance {
            excitation: 0.0,
            mechanical_loss: 0.0,
            winding_loss: 0.0,
            electrical: 0.0,
        };
        for k in 0..n {
            let t = (p * n + k) as f64 * dt;
            let e = model.eval(t, &state)?;
            max_abs_current = max_abs_current.max(e.i.abs());
            let v = state[1];
            acc.excitation += e.force * v;
            acc.mechanical_loss += model.b_mech * v * v;
            acc.winding_loss += model.r * e.i * e.i;
            acc.electrical += e.v_load * e.i;
            window.push(SimSample {
                t,
                x: state[0],
                v,
                i: e.i,
                v_load: e.v_load,
                p_inst: e.v_load * e.i,
            });

            let next = model.rk4(t, &state, dt)?;
            step += 1;
            if trace.len() == 8 {
                trace.remove(0);
            }
            trace.push(next);
            if !next.iter().all(|v| v.is_finite()) {
                return Err(Error::Divergence {
                    t: t + dt,
                    step,
                    trace,
                });
            }
            state = next;
        }
        let scale = 1.0 / n as f64;
        energy = EnergyBalance {
            excitation: acc.excitation * scale,
            mechanical_loss: acc.mechanical_loss * scale,
            winding_loss: acc.winding_loss * scale,
            electrical: acc.electrical * scale,
        };
        periods_run = p + 1;
        let power = energy.electrical;
        let settled = prev_power
            .map(|prev| (power - prev).abs() <= cfg.convergence_tol * power.abs())
            .unwrap_or(false);
        prev_power = Some(power);
        if periods_run > cfg.transient_periods && settled {
            converged = true;
            break;
        }
    }
    let final_state = SimState {
        x: state[0],
        v: state[1],
        aux: state[2],
        i_wind: state[3],
        t: periods_run as f64 * period,
    };
    if !final_state.is_finite() {
        return Err(Error::Divergence {
            t: final_state.t,
            step,
            trace,
        });
    }

    let currents: Vec<f64> = window.iter().map(|s| s.i).collect();
    let positions: Vec<f64> = window.iter().map(|s| s.x).collect();
    let harmonic_currents = (1..=cfg.n_harmonics)
        .map(|h| fourier_coefficient(&currents, h))
        .collect();
    let peak_current = currents.iter().fold(0.0_f64, |m, i| m.max(i.abs()));

    Ok(SimResult {
        p_avg: energy.electrical,
        harmonic_currents,
        x_amp: fourier_coefficient(&positions, 1).norm(),
        peak_current,
        max_abs_current,
        energy,
        waveforms: window,
        steps_per_period: n,
        omega: plant.omega,
        periods_run,
        converged,
    })
}

/// Cosine-referenced phasor of harmonic `n` of a signal sampled uniformly
/// over a whole number of periods starting at phase zero.
pub(crate) fn fourier_coefficient(samples: &[f64], n: usize) -> Complex64 {
    let len = samples.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, s) in samples.iter().enumerate() {
        let phase = -2.0 * PI * ((n * k) % len) as f64 / len as f64;
        acc += *s * Complex64::from_polar(1.0, phase);
    }
    acc * (2.0 / len as f64)
}

/// Current phasors `I_n = (2/T_w) ∫ i(t) e^{−inωt} dt` over the extraction
/// window, `n = 1..=n_max`, plus the mean.
pub fn harmonic_decompose(result: &SimResult, n_max: usize) -> Result<HarmonicDecomposition> {
    let samples = result.waveforms.len();
    let per = result.steps_per_period;
    if samples == 0 || per == 0 || !samples.is_multiple_of(per) {
        return Err(Error::Windowing {
            samples,
            per_period: per,
        });
    }
    let periods = samples / per;
    let currents: Vec<f64> = result.waveforms.iter().map(|s| s.i).collect();
    let dc = currents.iter().sum::<f64>() / samples as f64;
    let phasors = (1..=n_max)
        .map(|n| fourier_coefficient(&currents, n * periods))
        .collect();
    Ok(HarmonicDecomposition { dc, phasors })
}

/// CSV dump of the extraction window with header `t,x,v,i,v_load,p_inst`.
pub fn waveform_csv(result: &SimResult) -> String {
    use crate::emit::fmt_sig;
    let mut out = String::from("t,x,v,i,v_load,p_inst\n");
    for s in &result.waveforms {
        let row = [s.t, s.x, s.v, s.i, s.v_load, s.p_inst]
            .iter()
            .map(|v| fmt_sig(*v))
            .collect::<Vec<_>>()
            .join(",");
        out.push_str(&row);
        out.push('\n');
    }
    out
}
