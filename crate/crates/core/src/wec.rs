//! Single-degree-of-freedom wave energy converter with a drivetrain and a
//! permanent-magnet generator, reduced to a Thévenin source seen from the
//! generator terminals.
//!
//! Units are strict SI with `ω` in rad/s. The gear ratio `G` carries whatever
//! unit turns `τ_PTO · Ω` into watts: for a rotary generator on a heaving body
//! `G` is in rad/m and `B_d`, `K_d`, `K_t` are rotational (N·m·s/rad, N·m/rad,
//! N·m/A); for a direct-drive linear generator `G = 1` and the same fields are
//! translational (N·s/m, N/m, N/A).
//!
//! Load convention: the controller impedance `Z_C` is the load, so the
//! terminal voltage is `V_L = K_t Ω − Z_w I = Z_C I` and the generated
//! electrical power `0.5 Re(V_L conj(I))` is positive.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mismatch::{OperatingPoint, TheveninSource};

const J: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WecPlant {
    /// Body mass (kg).
    pub m: f64,
    /// Added mass (kg).
    pub a_added: f64,
    /// Radiation damping (N·s/m).
    pub b_h: f64,
    /// Hydrostatic stiffness (N/m).
    pub k_h: f64,
    pub g_ratio: f64,
    pub b_d: f64,
    pub k_d: f64,
    pub k_t: f64,
    /// Winding resistance (Ω).
    pub r_w: f64,
    /// Winding inductance (H).
    pub l_w: f64,
    /// Machine poles, used literally in the phase-voltage speed term.
    pub p_poles: u32,
    /// Wave angular frequency (rad/s).
    pub omega: f64,
    /// Excitation force phasor (N).
    pub f_e: Complex64,
    /// Incident wave energy flux density (W/m).
    pub j_density: f64,
    /// Wavenumber (1/m).
    pub k_wavenumber: f64,
    /// 1 for heave, 2 for surge or pitch.
    pub g0: u8,
}

impl WecPlant {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::DegeneratePlant(msg));
        let finite = [
            self.m,
            self.a_added,
            self.b_h,
            self.k_h,
            self.g_ratio,
            self.b_d,
            self.k_d,
            self.k_t,
            self.r_w,
            self.l_w,
            self.omega,
            self.f_e.re,
            self.f_e.im,
            self.j_density,
            self.k_wavenumber,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return bad("all plant parameters must be finite".into());
        }
        if !(self.m + self.a_added > 0.0) {
            return bad(format!(
                "total mass {} must be positive",
                self.m + self.a_added
            ));
        }
        if !(self.b_h > 0.0) {
            return bad(format!("radiation damping {} must be positive", self.b_h));
        }
        if self.k_h < 0.0 {
            return bad(format!(
                "hydrostatic stiffness {} must be non-negative",
                self.k_h
            ));
        }
        if !(self.k_t > 0.0) {
            return bad(format!("torque constant {} must be positive", self.k_t));
        }
        if self.r_w < 0.0 || self.l_w < 0.0 {
            return bad("winding resistance and inductance must be non-negative".into());
        }
        if !(self.omega > 0.0) {
            return bad(format!("wave frequency {} must be positive", self.omega));
        }
        if self.g_ratio == 0.0 {
            return bad("gear ratio must be non-zero".into());
        }
        if self.b_h + self.g_ratio * self.g_ratio * self.b_d <= 0.0 {
            return bad("total mechanical damping must be positive".into());
        }
        if self.g0 != 1 && self.g0 != 2 {
            return bad(format!("mode gain must be 1 or 2, got {}", self.g0));
        }
        Ok(())
    }

    /// Excitation force amplitude implied by the Haskind relation,
    /// `|F_e|² = 8 B_h G0 J / k`.
    pub fn haskind_force_amplitude(b_h: f64, g0: u8, j_density: f64, k_wavenumber: f64) -> f64 {
        (8.0 * b_h * f64::from(g0) * j_density / k_wavenumber).sqrt()
    }

    /// Replace the excitation force by the Haskind-consistent amplitude with
    /// the given phase (rad), so the matched-power identities hold exactly.
    pub fn with_haskind_force(mut self, phase: f64) -> Result<Self> {
        if !(self.j_density > 0.0) || !(self.k_wavenumber > 0.0) {
            return Err(Error::DegeneratePlant(
                "Haskind force needs positive energy flux and wavenumber".into(),
            ));
        }
        let mag =
            Self::haskind_force_amplitude(self.b_h, self.g0, self.j_density, self.k_wavenumber);
        self.f_e = Complex64::from_polar(mag, phase);
        self.validate()?;
        Ok(self)
    }

    pub fn total_mass(&self) -> f64 {
        self.m + self.a_added
    }

    /// `K_h + G² K_d`.
    pub fn total_stiffness(&self) -> f64 {
        self.k_h + self.g_ratio * self.g_ratio * self.k_d
    }

    /// `B_h + G² B_d`.
    pub fn total_damping(&self) -> f64 {
        self.b_h + self.g_ratio * self.g_ratio * self.b_d
    }

    /// `K_t G`, the force (N) per ampere and volt per m/s.
    pub fn coupling(&self) -> f64 {
        self.k_t * self.g_ratio
    }

    /// Mechanical impedance `B + M s + K/s` at `s = i w`.
    pub fn z_mech_at(&self, w: f64) -> Complex64 {
        Complex64::new(
            self.total_damping(),
            self.total_mass() * w - self.total_stiffness() / w,
        )
    }

    pub fn z_mech(&self) -> Complex64 {
        self.z_mech_at(self.omega)
    }

    pub fn z_wind_at(&self, w: f64) -> Complex64 {
        Complex64::new(self.r_w, w * self.l_w)
    }

    /// Source impedance seen from the terminals at angular frequency `w`.
    pub fn z_th_at(&self, w: f64) -> Complex64 {
        let kg = self.coupling();
        self.z_wind_at(w) + kg * kg / self.z_mech_at(w)
    }

    /// Natural frequency `√((K_h + G²K_d)/(m + A))`.
    pub fn natural_frequency(&self) -> f64 {
        (self.total_stiffness() / self.total_mass()).sqrt()
    }

    /// `|Z_th(ω)| / |Z_th(3ω)|`. Large values mean the source impedance
    /// falls off above the wave frequency, so harmonics injected by the
    /// controller produce little terminal voltage.
    pub fn low_pass_merit(&self) -> f64 {
        self.z_th_at(self.omega).norm() / self.z_th_at(3.0 * self.omega).norm()
    }
}

pub fn thevenin_from_plant(plant: &WecPlant) -> Result<TheveninSource> {
    plant.validate()?;
    let z_m = plant.z_mech();
    if z_m.norm() == 0.0 {
        return Err(Error::DegeneratePlant(
            "mechanical impedance vanishes".into(),
        ));
    }
    let v_th = plant.coupling() * plant.f_e / z_m;
    TheveninSource::new(v_th, plant.z_th_at(plant.omega))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NondimGroups {
    /// Normalized winding resistance `R B_h / (K_t G)²`.
    pub r_cal: f64,
    /// Hydrodynamic share of mechanical damping, `B_h / (B_h + G² B_d)`.
    pub d_cal: f64,
    /// Mechanical reactance ratio `Im Z_m / Re Z_m`.
    pub alpha_m: f64,
    /// Winding time-constant ratio `ω L / R`.
    pub l_cal: f64,
}

impl NondimGroups {
    pub fn new(r_cal: f64, d_cal: f64, alpha_m: f64, l_cal: f64) -> Result<Self> {
        let g = Self {
            r_cal,
            d_cal,
            alpha_m,
            l_cal,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_cal >= 0.0) || !self.r_cal.is_finite() {
            return Err(Error::Domain(format!("R = {} must be >= 0", self.r_cal)));
        }
        if !(self.d_cal > 0.0 && self.d_cal <= 1.0) {
            return Err(Error::Domain(format!(
                "D = {} must be in (0, 1]",
                self.d_cal
            )));
        }
        if !(self.l_cal >= 0.0) || !self.l_cal.is_finite() {
            return Err(Error::Domain(format!("L = {} must be >= 0", self.l_cal)));
        }
        if !self.alpha_m.is_finite() {
            return Err(Error::Domain("alpha_m must be finite".into()));
        }
        Ok(())
    }

    /// A dimensional plant realizing these groups at `ω = 1` with unit
    /// radiation damping, unit coupling `K_t G` and a Haskind-consistent
    /// excitation force of phase 0.
    ///
    /// The groups fix the source impedance only at the wave frequency, so
    /// harmonic impedances of the returned plant reflect the particular mass
    /// and stiffness chosen here (total mass `1 + max(α_m/D, 0)`, all
    /// stiffness hydrostatic, stiffness non-negative).
    pub fn canonical_plant(&self, j_density: f64, k_wavenumber: f64, g0: u8) -> Result<WecPlant> {
        self.validate()?;
        if self.r_cal == 0.0 && self.l_cal > 0.0 {
            return Err(Error::Domain(
                "L/R ratio cannot be realized with zero winding resistance".into(),
            ));
        }
        let reactance = self.alpha_m / self.d_cal;
        let mass = 1.0 + reactance.max(0.0);
        let plant = WecPlant {
            m: mass,
            a_added: 0.0,
            b_h: 1.0,
            k_h: mass - reactance,
            g_ratio: 1.0,
            b_d: 1.0 / self.d_cal - 1.0,
            k_d: 0.0,
            k_t: 1.0,
            r_w: self.r_cal,
            l_w: self.l_cal * self.r_cal,
            p_poles: 2,
            omega: 1.0,
            f_e: Complex64::new(0.0, 0.0),
            j_density,
            k_wavenumber,
            g0,
        };
        plant.with_haskind_force(0.0)
    }
}

pub fn nondim_from_plant(plant: &WecPlant) -> Result<NondimGroups> {
    plant.validate()?;
    let kg = plant.coupling();
    let z_m = plant.z_mech();
    let l_cal = if plant.l_w == 0.0 {
        0.0
    } else if plant.r_w == 0.0 {
        return Err(Error::Domain(
            "L/R ratio is undefined for zero winding resistance with non-zero inductance".into(),
        ));
    } else {
        plant.omega * plant.l_w / plant.r_w
    };
    Ok(NondimGroups {
        r_cal: plant.r_w * plant.b_h / (kg * kg),
        d_cal: plant.b_h / plant.total_damping(),
        alpha_m: z_m.im / z_m.re,
        l_cal,
    })
}

/// Matched electrical power `(G0 J / k) · D / (1 + (R/D)(1 + α_m²))`.
pub fn matched_power(
    groups: &NondimGroups,
    j_density: f64,
    k_wavenumber: f64,
    g0: u8,
) -> Result<f64> {
    groups.validate()?;
    if !(k_wavenumber > 0.0) {
        return Err(Error::Domain(format!(
            "wavenumber {k_wavenumber} must be positive"
        )));
    }
    let NondimGroups {
        r_cal,
        d_cal,
        alpha_m,
        ..
    } = *groups;
    let resource = f64::from(g0) * j_density / k_wavenumber;
    Ok(resource * d_cal / (1.0 + r_cal / d_cal * (1.0 + alpha_m * alpha_m)))
}

/// Source reactance ratio from the nondimensional groups.
pub fn alpha_from_nondim(groups: &NondimGroups) -> Result<f64> {
    let NondimGroups {
        r_cal,
        d_cal,
        alpha_m,
        l_cal,
    } = *groups;
    let spread = r_cal * (1.0 + alpha_m * alpha_m);
    let den = spread + d_cal;
    if !(den > 0.0) {
        return Err(Error::DegeneratePlant(format!(
            "alpha denominator vanishes (R = {r_cal}, D = {d_cal})"
        )));
    }
    Ok((l_cal * spread - d_cal * alpha_m) / den)
}

/// The two mechanical reactance ratios `±√(1 + D/R)` that maximize `|α|`
/// when the winding inductance is negligible.
pub fn optimal_alpha_m_for_limits(groups: &NondimGroups) -> Result<(f64, f64)> {
    if groups.l_cal != 0.0 {
        return Err(Error::Domain(format!(
            "closed form assumes L = 0, got {}",
            groups.l_cal
        )));
    }
    if !(groups.r_cal > 0.0) {
        return Err(Error::Domain(
            "|alpha| is unbounded in alpha_m when R = 0".into(),
        ));
    }
    let a = (1.0 + groups.d_cal / groups.r_cal).sqrt();
    Ok((a, -a))
}

/// Amplitudes of physically limited quantities at a load choice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatingAmplitudes {
    /// Position phasor (m).
    pub x_amp: Complex64,
    /// Phase-voltage amplitude including the inductive speed term (V).
    pub v_s_amp: f64,
    /// Upper apparent-power extreme (W).
    pub s_max: f64,
    /// Lower apparent-power extreme (W).
    pub s_min: f64,
    /// Terminal current phasor (A).
    pub current: Complex64,
    /// Terminal voltage phasor (V).
    pub voltage: Complex64,
    /// Generator speed phasor (rad/s or m/s, per `G`).
    pub speed: Complex64,
}

/// Body position phasor for a controller load `Z_L = z conj(Z_th)`:
/// `X = (F_e / s) / (Z_m + (K_t G)² / (Z_w + Z_L))`.
pub fn position_phasor(plant: &WecPlant, z: Complex64) -> Result<Complex64> {
    let src = thevenin_from_plant(plant)?;
    let z_load = src.load_impedance(z);
    let loop_z = plant.z_wind_at(plant.omega) + z_load;
    position_through(plant, loop_z)
}

/// Position phasor with the generator branch taken as `Z_w − z conj(Z_th)`.
///
/// This treats the controller as acting on the source side of the winding.
/// It disagrees with the time-domain simulation for any dissipative load and
/// is kept only to compare against [`position_phasor`].
pub fn position_phasor_source_side(plant: &WecPlant, z: Complex64) -> Result<Complex64> {
    let src = thevenin_from_plant(plant)?;
    let loop_z = plant.z_wind_at(plant.omega) - src.load_impedance(z);
    position_through(plant, loop_z)
}

fn position_through(plant: &WecPlant, loop_z: Complex64) -> Result<Complex64> {
    if loop_z.norm() == 0.0 {
        return Err(Error::Singular {
            what: "electrical loop impedance vanishes",
            gamma: Complex64::new(f64::NAN, f64::NAN),
            alpha: f64::NAN,
        });
    }
    let kg = plant.coupling();
    let s = J * plant.omega;
    let den = plant.z_mech() + kg * kg / loop_z;
    if den.norm() == 0.0 {
        return Err(Error::DegeneratePlant(
            "closed-loop mechanical impedance vanishes".into(),
        ));
    }
    Ok(plant.f_e / s / den)
}

pub fn constraint_amplitudes(plant: &WecPlant, z: Complex64) -> Result<OperatingAmplitudes> {
    let src = thevenin_from_plant(plant)?;
    let alpha = src.alpha();
    let op = OperatingPoint::from_z(z, alpha)?;
    let z_load = src.load_impedance(z);
    let loop_z = plant.z_wind_at(plant.omega) + z_load;
    let x_amp = position_through(plant, loop_z)?;
    let current = src.load_current(z_load)?;
    let voltage = z_load * current;
    let speed = plant.g_ratio * J * plant.omega * x_amp;

    let d_axis = plant.l_w * f64::from(plant.p_poles) * speed.norm() * current.norm();
    let v_s_amp = voltage.norm().hypot(d_axis);

    let p_m = src.matched_baseline().p_matched;
    let reactive = op.v_ratio * op.i_ratio * (1.0 + alpha * alpha).sqrt();
    Ok(OperatingAmplitudes {
        x_amp,
        v_s_amp,
        s_max: p_m * (op.power_ratio + reactive),
        s_min: p_m * (op.power_ratio - reactive),
        current,
        voltage,
        speed,
    })
}

/// Wave period `2π/ω` (s).
pub fn period(plant: &WecPlant) -> f64 {
    2.0 * PI / plant.omega
}


#[cfg(test)]
mod tests {
    use super::fixtures::reference_plant;
    use super::*;

    #[test]
    fn decoupled_generator_limit() {
        let mut p = reference_plant();
        p.k_t = 1e-9;
        let src = thevenin_from_plant(&p).unwrap();
        assert!((src.z_th() - p.z_wind_at(p.omega)).norm() < 1e-12);
        assert!(src.v_th().norm() < 1e-3);
    }

    #[test]
    fn resonant_plant_has_real_source() {
        let mut p = reference_plant();
        p.b_d = 0.0;
        p.k_d = 0.0;
        p.l_w = 0.0;
        p.omega = p.natural_frequency();
        let src = thevenin_from_plant(&p).unwrap();
        let kg = p.coupling();
        assert!(src.z_th().im.abs() < 1e-9 * src.z_th().re);
        assert!((src.z_th().re - (p.r_w + kg * kg / p.b_h)).abs() < 1e-9);
    }

    #[test]
    fn nondim_landmarks() {
        let mut p = reference_plant();
        p.b_d = 0.0;
        assert_eq!(nondim_from_plant(&p).unwrap().d_cal, 1.0);
        p.omega = p.natural_frequency();
        assert!(nondim_from_plant(&p).unwrap().alpha_m.abs() < 1e-12);
    }

    #[test]
    fn alpha_m_from_damping_ratio() {
        let p = reference_plant();
        let g = nondim_from_plant(&p).unwrap();
        let wn = p.natural_frequency();
        let zeta = p.total_damping() / (2.0 * (p.total_mass() * p.total_stiffness()).sqrt());
        let w = p.omega;
        let expected = (w * w - wn * wn) / (2.0 * zeta * w * wn);
        assert!((g.alpha_m - expected).abs() < 1e-12 * expected.abs().max(1.0));
    }

    #[test]
    fn undefined_inductance_ratio() {
        let mut p = reference_plant();
        p.r_w = 0.0;
        p.l_w = 1e-3;
        assert!(matches!(nondim_from_plant(&p), Err(Error::Domain(_))));
        p.l_w = 0.0;
        assert_eq!(nondim_from_plant(&p).unwrap().l_cal, 0.0);
    }

    #[test]
    fn matched_power_landmarks() {
        let j = 2.0e4;
        let k = 0.05;
        let ideal = NondimGroups::new(0.0, 1.0, 0.0, 0.0).unwrap();
        assert!((matched_power(&ideal, j, k, 1).unwrap() - j / k).abs() < 1e-9);
        let lossy = NondimGroups::new(1.0, 1.0, 0.0, 0.0).unwrap();
        assert!((matched_power(&lossy, j, k, 1).unwrap() - j / k / 2.0).abs() < 1e-9);
        let surge = matched_power(&ideal, j, k, 2).unwrap();
        assert!((surge - 2.0 * j / k).abs() < 1e-9);
    }

    #[test]
    fn matched_power_even_in_alpha_m() {
        for am in [0.3, 1.7, 8.0] {
            let a = NondimGroups::new(0.4, 0.8, am, 0.0).unwrap();
            let b = NondimGroups::new(0.4, 0.8, -am, 0.0).unwrap();
            assert_eq!(
                matched_power(&a, 1.0, 1.0, 1).unwrap(),
                matched_power(&b, 1.0, 1.0, 1).unwrap()
            );
        }
    }

    #[test]
    fn alpha_limits() {
        let g = NondimGroups::new(0.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(alpha_from_nondim(&g).unwrap(), 0.0);
        let g = NondimGroups::new(1e-12, 1.0, 2.5, 0.0).unwrap();
        assert!((alpha_from_nondim(&g).unwrap() + 2.5).abs() < 1e-10);
    }

    #[test]
    fn optimal_alpha_m_closed_form() {
        let g = NondimGroups::new(1.0, 1.0, 0.0, 0.0).unwrap();
        let (a, b) = optimal_alpha_m_for_limits(&g).unwrap();
        assert!((a - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(b, -a);
        let g = NondimGroups::new(1e9, 1.0, 0.0, 0.0).unwrap();
        assert!((optimal_alpha_m_for_limits(&g).unwrap().0 - 1.0).abs() < 1e-9);
        let g = NondimGroups::new(0.0, 1.0, 0.0, 0.0).unwrap();
        assert!(optimal_alpha_m_for_limits(&g).is_err());
    }

    #[test]
    fn canonical_plant_reproduces_groups() {
        for (r, d, am, l) in [
            (0.3, 0.9, -1.2, 0.0),
            (0.05, 0.5, 2.0, 0.1),
            (1.0, 1.0, 0.0, 0.0),
        ] {
            let g = NondimGroups::new(r, d, am, l).unwrap();
            let p = g.canonical_plant(1.0e4, 0.1, 1).unwrap();
            let back = nondim_from_plant(&p).unwrap();
            assert!((back.r_cal - r).abs() < 1e-12);
            assert!((back.d_cal - d).abs() < 1e-12);
            assert!((back.alpha_m - am).abs() < 1e-12);
            assert!((back.l_cal - l).abs() < 1e-12);
        }
    }

    #[test]
    fn amplitudes_at_match() {
        let p = reference_plant();
        let src = thevenin_from_plant(&p).unwrap();
        let alpha = src.alpha();
        let amp = constraint_amplitudes(&p, Complex64::new(1.0, 0.0)).unwrap();
        let pm = src.matched_baseline().p_matched;
        let root = (1.0 + alpha * alpha).sqrt();
        assert!((amp.s_max / pm - (1.0 + root)).abs() < 1e-12);
        assert!((amp.s_min / pm - (1.0 - root)).abs() < 1e-12);
        // no inductance: phase voltage is the terminal voltage
        assert!((amp.v_s_amp - amp.voltage.norm()).abs() < 1e-12 * amp.v_s_amp);
        assert!((amp.current.norm() - src.matched_baseline().i_peak_matched).abs() < 1e-9);
    }

    #[test]
    fn phase_voltage_includes_inductive_term() {
        let mut p = reference_plant();
        p.l_w = 0.02;
        let amp = constraint_amplitudes(&p, Complex64::new(0.7, 0.3)).unwrap();
        assert!(amp.v_s_amp > amp.voltage.norm());
        assert!(amp.s_max >= amp.s_min);
    }

    #[test]
    fn position_forms_differ() {
        let p = reference_plant();
        let z = Complex64::new(1.0, 0.0);
        let a = position_phasor(&p, z).unwrap();
        let b = position_phasor_source_side(&p, z).unwrap();
        assert!((a - b).norm() > 1e-3 * a.norm());
    }
}
