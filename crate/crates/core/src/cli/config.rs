//! Run configuration: a TOML file of `key = value` lines under section
//! headers. Unknown keys are rejected so a misspelt physics parameter cannot
//! silently fall back to a default.
//!
//! ```toml
//! [plant]            # or [nondim], exactly one of the two
//! m = 1.0e5
//! ...
//! [sweep]
//! alpha = [0.0, 1.0, 2.0, 5.0]
//! i_max_fractions = [1.0, 0.8, 0.6, 0.4]
//! [simulation]
//! steps_per_period = 2000
//! [output]
//! dir = "out"
//! svg = true
//! ```

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::mismatch::{SMITH_ANGULAR_DEFAULT, SMITH_RADIAL_DEFAULT};
use crate::simulation::SimConfig;
use crate::wec::{NondimGroups, WecPlant};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Analysis {
    Matched,
    Smith,
    Pareto,
    Fsat,
    Saturate,
    Verify,
}

impl Analysis {
    pub fn name(self) -> &'static str {
        match self {
            Analysis::Matched => "matched",
            Analysis::Smith => "smith",
            Analysis::Pareto => "pareto",
            Analysis::Fsat => "fsat",
            Analysis::Saturate => "saturate",
            Analysis::Verify => "verify",
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PlantSection {
    pub m: f64,
    #[serde(default)]
    pub a_added: f64,
    pub b_h: f64,
    #[serde(default)]
    pub k_h: f64,
    #[serde(default = "one")]
    pub g_ratio: f64,
    #[serde(default)]
    pub b_d: f64,
    #[serde(default)]
    pub k_d: f64,
    pub k_t: f64,
    #[serde(default)]
    pub r_w: f64,
    #[serde(default)]
    pub l_w: f64,
    #[serde(default = "two")]
    pub p_poles: u32,
    pub omega: f64,
    /// Excitation force amplitude (N). Required unless `haskind = true`.
    pub f_e: Option<f64>,
    #[serde(default)]
    pub f_e_phase: f64,
    /// Derive the force from the Haskind relation instead of `f_e`.
    #[serde(default)]
    pub haskind: bool,
    #[serde(default)]
    pub j_density: f64,
    #[serde(default)]
    pub k_wavenumber: f64,
    #[serde(default = "heave")]
    pub g0: u8,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct NondimSection {
    pub r_cal: f64,
    pub d_cal: f64,
    pub alpha_m: f64,
    #[serde(default)]
    pub l_cal: f64,
    pub j_density: f64,
    pub k_wavenumber: f64,
    #[serde(default = "heave")]
    pub g0: u8,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// Source reactance ratios for Smith charts and Pareto fronts. Defaults
    /// to the configured plant's own ratio.
    pub alpha: Option<Vec<f64>>,
    #[serde(default = "smith_radial")]
    pub smith_radial: usize,
    #[serde(default = "smith_angular")]
    pub smith_angular: usize,
    #[serde(default = "pareto_points")]
    pub pareto_points: usize,
    /// Range of `|I_temp| / I_max` for saturation-factor curves.
    #[serde(default = "fsat_inverse_min")]
    pub fsat_inverse_min: f64,
    #[serde(default = "fsat_inverse_max")]
    pub fsat_inverse_max: f64,
    #[serde(default = "fsat_points")]
    pub fsat_points: usize,
    /// Current limits as fractions of the matched current amplitude.
    #[serde(default = "fractions")]
    pub i_max_fractions: Vec<f64>,
    #[serde(default = "harmonics")]
    pub n_harmonics: u32,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            alpha: None,
            smith_radial: smith_radial(),
            smith_angular: smith_angular(),
            pareto_points: pareto_points(),
            fsat_inverse_min: fsat_inverse_min(),
            fsat_inverse_max: fsat_inverse_max(),
            fsat_points: fsat_points(),
            i_max_fractions: fractions(),
            n_harmonics: harmonics(),
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    #[serde(default = "steps")]
    pub steps_per_period: usize,
    #[serde(default = "periods")]
    pub n_periods: usize,
    #[serde(default = "transient")]
    pub transient_periods: usize,
    #[serde(default = "conv_tol")]
    pub convergence_tol: f64,
    /// Write the final-period waveform of each verification run.
    #[serde(default)]
    pub dump_waveforms: bool,
}

impl Default for SimulationSection {
    fn default() -> Self {
        Self {
            steps_per_period: steps(),
            n_periods: periods(),
            transient_periods: transient(),
            convergence_tol: conv_tol(),
            dump_waveforms: false,
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub svg: bool,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    plant: Option<PlantSection>,
    nondim: Option<NondimSection>,
    #[serde(default)]
    sweep: SweepSection,
    #[serde(default)]
    simulation: SimulationSection,
    #[serde(default)]
    output: OutputSection,
}

fn one() -> f64 {
    1.0
}
fn two() -> u32 {
    2
}
fn heave() -> u8 {
    1
}
fn smith_radial() -> usize {
    SMITH_RADIAL_DEFAULT
}
fn smith_angular() -> usize {
    SMITH_ANGULAR_DEFAULT
}
fn pareto_points() -> usize {
    201
}
fn fsat_inverse_min() -> f64 {
    0.5
}
fn fsat_inverse_max() -> f64 {
    10.0
}
fn fsat_points() -> usize {
    200
}
fn fractions() -> Vec<f64> {
    vec![1.0, 0.8, 0.6, 0.4]
}
fn harmonics() -> u32 {
    9
}
fn steps() -> usize {
    2000
}
fn periods() -> usize {
    40
}
fn transient() -> usize {
    20
}
fn conv_tol() -> f64 {
    1e-3
}

/// The converter under study, given either dimensionally or through its
/// nondimensional groups.
#[derive(Clone, Debug, PartialEq)]
pub enum PlantSpec {
    Dimensional(WecPlant),
    Nondimensional {
        groups: NondimGroups,
        j_density: f64,
        k_wavenumber: f64,
        g0: u8,
    },
}

impl PlantSpec {
    /// A dimensional plant; nondimensional input is realized with
    /// [`NondimGroups::canonical_plant`].
    pub fn plant(&self) -> Result<WecPlant> {
        match self {
            PlantSpec::Dimensional(p) => Ok(*p),
            PlantSpec::Nondimensional {
                groups,
                j_density,
                k_wavenumber,
                g0,
            } => groups.canonical_plant(*j_density, *k_wavenumber, *g0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub plant: PlantSpec,
    pub sweep: SweepSection,
    pub simulation: SimulationSection,
    pub output: OutputSection,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let plant = match (raw.plant, raw.nondim) {
            (Some(p), None) => PlantSpec::Dimensional(build_plant(&p)?),
            (None, Some(n)) => {
                let groups = NondimGroups::new(n.r_cal, n.d_cal, n.alpha_m, n.l_cal)
                    .map_err(|e| Error::Config(e.to_string()))?;
                if !(n.j_density > 0.0 && n.k_wavenumber > 0.0) {
                    return Err(Error::Config(
                        "[nondim] needs positive j_density and k_wavenumber".into(),
                    ));
                }
                if n.g0 != 1 && n.g0 != 2 {
                    return Err(Error::Config(format!("g0 must be 1 or 2, got {}", n.g0)));
                }
                PlantSpec::Nondimensional {
                    groups,
                    j_density: n.j_density,
                    k_wavenumber: n.k_wavenumber,
                    g0: n.g0,
                }
            }
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "give either [plant] or [nondim], not both".into(),
                ))
            }
            (None, None) => {
                return Err(Error::Config(
                    "missing plant: add a [plant] or [nondim] section".into(),
                ))
            }
        };
        let cfg = Self {
            plant,
            sweep: raw.sweep,
            simulation: raw.simulation,
            output: raw.output,
        };
        cfg.validate_sweeps()?;
        cfg.sim_config()?;
        Ok(cfg)
    }

    fn validate_sweeps(&self) -> Result<()> {
        let s = &self.sweep;
        if matches!(&s.alpha, Some(a) if a.is_empty()) {
            return Err(Error::Config("sweep.alpha must not be empty".into()));
        }
        if s.alpha.iter().flatten().any(|a| !a.is_finite()) {
            return Err(Error::Config("sweep.alpha entries must be finite".into()));
        }
        if s.i_max_fractions.is_empty() || s.i_max_fractions.iter().any(|f| !(*f > 0.0)) {
            return Err(Error::Config(
                "sweep.i_max_fractions must be a non-empty list of positive numbers".into(),
            ));
        }
        if s.smith_radial < 2 || s.smith_angular < 2 || s.pareto_points < 2 || s.fsat_points < 2 {
            return Err(Error::Config("sweep resolutions must be at least 2".into()));
        }
        if !(s.fsat_inverse_min > 0.0 && s.fsat_inverse_max > s.fsat_inverse_min) {
            return Err(Error::Config(
                "need 0 < sweep.fsat_inverse_min < sweep.fsat_inverse_max".into(),
            ));
        }
        if s.n_harmonics.is_multiple_of(2) {
            return Err(Error::Config("sweep.n_harmonics must be odd".into()));
        }
        Ok(())
    }

    pub fn sim_config(&self) -> Result<SimConfig> {
        let s = &self.simulation;
        let cfg = SimConfig {
            steps_per_period: s.steps_per_period,
            n_periods: s.n_periods,
            transient_periods: s.transient_periods,
            convergence_tol: s.convergence_tol,
            n_harmonics: self.sweep.n_harmonics as usize,
            ..SimConfig::default()
        };
        cfg.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }

    /// Output directory, falling back to `./out`.
    pub fn out_dir(&self) -> PathBuf {
        self.output
            .dir
            .clone()
            .unwrap_or_else(|| PathBuf::from("out"))
    }
}

fn build_plant(p: &PlantSection) -> Result<WecPlant> {
    let mut plant = WecPlant {
        m: p.m,
        a_added: p.a_added,
        b_h: p.b_h,
        k_h: p.k_h,
        g_ratio: p.g_ratio,
        b_d: p.b_d,
        k_d: p.k_d,
        k_t: p.k_t,
        r_w: p.r_w,
        l_w: p.l_w,
        p_poles: p.p_poles,
        omega: p.omega,
        f_e: Complex64::new(0.0, 0.0),
        j_density: p.j_density,
        k_wavenumber: p.k_wavenumber,
        g0: p.g0,
    };
    let cfg_err = |e: Error| Error::Config(e.to_string());
    match (p.haskind, p.f_e) {
        (true, None) => plant = plant.with_haskind_force(p.f_e_phase).map_err(cfg_err)?,
        (false, Some(f)) => {
            plant.f_e = Complex64::from_polar(f, p.f_e_phase);
            plant.validate().map_err(cfg_err)?;
        }
        (true, Some(_)) => {
            return Err(Error::Config(
                "plant.f_e conflicts with plant.haskind = true".into(),
            ))
        }
        (false, None) => return Err(Error::Config("plant needs f_e or haskind = true".into())),
    }
    Ok(plant)
}
