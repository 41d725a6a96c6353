use std::thread;

use crate::describing::{
    classic_sidf_power, linear_saturation_equivalent, saturation_factor, solve_operating_point,
    SaturationSolution, SolveOptions,
};
use crate::emit::CsvTable;
use crate::error::Result;
use crate::mismatch::{exact_power_ratio, pareto_front, smith_grid, Quantity};
use crate::simulation::waveform_csv;
use crate::validation::{validate_df, ValidationReport};
use crate::wec::{
    alpha_from_nondim, matched_power, nondim_from_plant, optimal_alpha_m_for_limits,
    thevenin_from_plant,
};

use super::config::{Analysis, PlantSpec, RunConfig};
use super::svg::{smith_chart, LinePlot, Series};

/// One file to be written under the output directory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

/// Everything a command produced. Nothing touches the filesystem until
/// [`CommandOutput::write_to`].
#[derive(Clone, Debug, Default)]
pub struct CommandOutput {
    pub files: Vec<OutputFile>,
    pub summary: String,
    /// Set by `verify` when an unflagged row is out of tolerance.
    pub verification_failed: bool,
}

impl CommandOutput {
    fn with_summary(summary: String) -> Self {
        Self {
            summary,
            ..Self::default()
        }
    }

    fn add(&mut self, name: impl Into<String>, contents: String) {
        self.files.push(OutputFile {
            name: name.into(),
            contents,
        });
    }

    pub fn file(&self, name: &str) -> Option<&str> {
        self.files
            .iter()
            .find(|f| f.name == name)
            .map(|f| f.contents.as_str())
    }

    pub fn write_to(&self, dir: &std::path::Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for f in &self.files {
            std::fs::write(dir.join(&f.name), &f.contents)?;
        }
        Ok(())
    }
}

pub fn run(analysis: Analysis, cfg: &RunConfig, svg: bool) -> Result<CommandOutput> {
    match analysis {
        Analysis::Matched => cmd_matched(cfg),
        Analysis::Smith => cmd_smith(cfg, svg),
        Analysis::Pareto => cmd_pareto(cfg, svg),
        Analysis::Fsat => cmd_fsat(cfg, svg),
        Analysis::Saturate => cmd_saturate(cfg),
        Analysis::Verify => cmd_verify(cfg),
    }
}

/// Maps `f` over `items` on scoped worker threads, keeping input order.
fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> Result<U> + Sync) -> Result<Vec<U>> {
    let f = &f;
    thread::scope(|s| {
        let handles: Vec<_> = items.iter().map(|it| s.spawn(move || f(it))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    })
}

fn alphas(cfg: &RunConfig) -> Result<Vec<f64>> {
    match &cfg.sweep.alpha {
        Some(a) => Ok(a.clone()),
        None => Ok(vec![thevenin_from_plant(&cfg.plant.plant()?)?.alpha()]),
    }
}

/// Stable file-name tag for an α value, e.g. `2.5` → `2p5`, `-1` → `m1`.
fn alpha_tag(alpha: f64) -> String {
    let s = format!("{alpha}");
    s.replace('-', "m").replace('.', "p")
}

pub fn cmd_matched(cfg: &RunConfig) -> Result<CommandOutput> {
    let plant = cfg.plant.plant()?;
    let src = thevenin_from_plant(&plant)?;
    let base = src.matched_baseline();
    let groups = match &cfg.plant {
        PlantSpec::Nondimensional { groups, .. } => *groups,
        PlantSpec::Dimensional(p) => nondim_from_plant(p)?,
    };
    let p_nondim = matched_power(&groups, plant.j_density, plant.k_wavenumber, plant.g0)?;
    let alpha_nondim = alpha_from_nondim(&groups)?;
    let alpha_m_opt = optimal_alpha_m_for_limits(&groups)
        .map(|(a, _)| a)
        .unwrap_or(f64::NAN);

    let mut t = CsvTable::new(&[
        "v_th_re",
        "v_th_im",
        "z_th_re",
        "z_th_im",
        "alpha",
        "p_matched",
        "v_peak_matched",
        "i_peak_matched",
        "r_cal",
        "d_cal",
        "alpha_m",
        "l_cal",
        "alpha_nondim",
        "p_matched_nondim",
        "alpha_m_opt_limits",
        "low_pass_merit",
    ]);
    t.row()
        .complex(src.v_th())
        .complex(src.z_th())
        .num(src.alpha())
        .num(base.p_matched)
        .num(base.v_peak_matched)
        .num(base.i_peak_matched)
        .num(groups.r_cal)
        .num(groups.d_cal)
        .num(groups.alpha_m)
        .num(groups.l_cal)
        .num(alpha_nondim)
        .num(p_nondim)
        .num(alpha_m_opt)
        .num(plant.low_pass_merit())
        .push();

    let mut out = CommandOutput::with_summary(format!(
        "matched power {:.6e} W (nondimensional route {:.6e} W), alpha = {:.6}",
        base.p_matched,
        p_nondim,
        src.alpha()
    ));
    out.add("matched.csv", t.render());
    Ok(out)
}

pub fn cmd_smith(cfg: &RunConfig, svg: bool) -> Result<CommandOutput> {
    let alphas = alphas(cfg)?;
    let (radial, angular) = (cfg.sweep.smith_radial, cfg.sweep.smith_angular);
    let grids = par_map(&alphas, |&a| smith_grid(a, radial, angular))?;

    let mut out = CommandOutput::default();
    for (&alpha, cells) in alphas.iter().zip(&grids) {
        let mut t = CsvTable::new(&[
            "gamma_mag",
            "gamma_angle",
            "gamma_re",
            "gamma_im",
            "power_ratio",
            "v_ratio",
            "i_ratio",
            "v_exceeds_one",
            "i_exceeds_one",
        ]);
        for c in cells {
            t.row()
                .num(c.gamma_mag)
                .num(c.gamma_angle)
                .complex(c.gamma)
                .num(c.power_ratio)
                .num(c.v_ratio)
                .num(c.i_ratio)
                .flag(c.v_exceeds_one)
                .flag(c.i_exceeds_one)
                .push();
        }
        let tag = alpha_tag(alpha);
        out.add(format!("smith_alpha_{tag}.csv"), t.render());
        if svg {
            out.add(
                format!("smith_alpha_{tag}.svg"),
                smith_chart(alpha, cells, angular),
            );
        }
    }
    out.summary = format!(
        "{} smith grid(s) of {}x{} cells",
        alphas.len(),
        radial,
        angular
    );
    Ok(out)
}

pub fn cmd_pareto(cfg: &RunConfig, svg: bool) -> Result<CommandOutput> {
    let alphas = alphas(cfg)?;
    let fronts = par_map(&alphas, |&a| pareto_front(a, cfg.sweep.pareto_points))?;

    let mut t = CsvTable::new(&[
        "alpha",
        "power_ratio",
        "v_ratio",
        "i_ratio",
        "gamma_re",
        "gamma_im",
        "contour_epsilon",
    ]);
    let mut series = Vec::new();
    for (&alpha, front) in alphas.iter().zip(&fronts) {
        for p in front {
            t.row()
                .num(alpha)
                .num(p.power_ratio)
                .num(p.v_ratio)
                .num(p.i_ratio)
                .complex(p.gamma)
                .num(p.contour.epsilon())
                .push();
        }
        for q in [Quantity::Voltage, Quantity::Current] {
            series.push(Series {
                label: format!("alpha={alpha} {}", q.name()),
                points: front
                    .iter()
                    .filter(|p| p.contour == q)
                    .map(|p| {
                        let r = if q == Quantity::Voltage {
                            p.v_ratio
                        } else {
                            p.i_ratio
                        };
                        (r, p.power_ratio)
                    })
                    .collect(),
            });
        }
    }
    let mut out = CommandOutput::with_summary(format!(
        "{} pareto front(s), {} points",
        alphas.len(),
        t.len()
    ));
    out.add("pareto.csv", t.render());
    if svg {
        let plot = LinePlot {
            title: "Pareto fronts".into(),
            x_label: "amplitude ratio".into(),
            y_label: "power ratio".into(),
            series,
        };
        out.add("pareto.svg", plot.render());
    }
    Ok(out)
}

const FSAT_ORDERS: [u32; 4] = [1, 3, 5, 7];

pub fn cmd_fsat(cfg: &RunConfig, svg: bool) -> Result<CommandOutput> {
    let s = &cfg.sweep;
    let mut t = CsvTable::new(&[
        "inv_i_script",
        "i_script",
        "f_sat_1",
        "f_sat_3",
        "f_sat_5",
        "f_sat_7",
    ]);
    let mut series: Vec<Series> = FSAT_ORDERS
        .iter()
        .map(|n| Series {
            label: format!("n = {n}"),
            points: Vec::new(),
        })
        .collect();
    for k in 0..s.fsat_points {
        let inv = s.fsat_inverse_min
            + (s.fsat_inverse_max - s.fsat_inverse_min) * k as f64 / (s.fsat_points - 1) as f64;
        let i_script = 1.0 / inv;
        let mut row = t.row().num(inv).num(i_script);
        for (n, ser) in FSAT_ORDERS.iter().zip(series.iter_mut()) {
            let f = saturation_factor(*n, i_script);
            ser.points.push((inv, f));
            row = row.num(f);
        }
        row.push();
    }
    let mut out = CommandOutput::with_summary(format!("{} saturation-factor rows", t.len()));
    out.add("fsat.csv", t.render());
    if svg {
        let plot = LinePlot {
            title: "Saturation factors".into(),
            x_label: "|I_temp| / I_max".into(),
            y_label: "f_sat,n".into(),
            series,
        };
        out.add("fsat.svg", plot.render());
    }
    Ok(out)
}

pub fn cmd_saturate(cfg: &RunConfig) -> Result<CommandOutput> {
    let plant = cfg.plant.plant()?;
    let src = thevenin_from_plant(&plant)?;
    let base = src.matched_baseline();
    let opts = SolveOptions {
        z_c: None,
        n_harmonics: cfg.sweep.n_harmonics,
    };
    let fractions = &cfg.sweep.i_max_fractions;
    let solved: Vec<(SaturationSolution, crate::mismatch::OperatingPoint)> =
        par_map(fractions, |&frac| {
            let i_max = frac * base.i_peak_matched;
            let sol = solve_operating_point(&src, &plant, i_max, opts)?;
            let lin = linear_saturation_equivalent(&src, i_max)?;
            Ok((sol, lin))
        })?;

    let mut t = CsvTable::new(&[
        "i_max_fraction",
        "i_max",
        "i_temp_re",
        "i_temp_im",
        "i_script",
        "f_sat_1",
        "fundamental_gain",
        "p_total",
        "p_fundamental",
        "p_linear",
        "p_linear_circuit",
        "p_matched",
        "gamma_linear_re",
        "gamma_linear_im",
        "iterations",
    ]);
    let mut h = CsvTable::new(&[
        "i_max_fraction",
        "n",
        "f_sat",
        "current_re",
        "current_im",
        "voltage_re",
        "voltage_im",
        "power",
    ]);
    let alpha = src.alpha();
    for (&frac, (sol, lin)) in fractions.iter().zip(&solved) {
        t.row()
            .num(frac)
            .num(sol.i_max)
            .complex(sol.i_temp)
            .num(sol.i_script)
            .num(sol.f_sat1)
            .num(sol.fundamental_gain())
            .num(sol.p_total)
            .num(classic_sidf_power(sol))
            .num(lin.power_ratio * base.p_matched)
            .num(exact_power_ratio(lin.gamma, alpha)? * base.p_matched)
            .num(base.p_matched)
            .complex(lin.gamma)
            .int(sol.iterations as i64)
            .push();
        for hm in &sol.harmonics {
            h.row()
                .num(frac)
                .int(hm.n)
                .num(hm.f_sat)
                .complex(hm.current)
                .complex(hm.voltage)
                .num(hm.power)
                .push();
        }
    }
    let mut out = CommandOutput::with_summary(
        solved
            .iter()
            .zip(fractions)
            .map(|((s, _), f)| {
                format!(
                    "i_max fraction {f}: P = {:.6e} W ({:.4} of matched), f_sat,1 = {:.6}",
                    s.p_total,
                    s.p_total / base.p_matched,
                    s.f_sat1
                )
            })
            .collect::<Vec<_>>()
            .join("\n"),
    );
    out.add("saturate.csv", t.render());
    out.add("saturate_harmonics.csv", h.render());
    Ok(out)
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<CommandOutput> {
    let plant = cfg.plant.plant()?;
    let src = thevenin_from_plant(&plant)?;
    let i_peak = src.matched_baseline().i_peak_matched;
    let sim_cfg = cfg.sim_config()?;
    let fractions = &cfg.sweep.i_max_fractions;
    let reports: Vec<ValidationReport> = par_map(fractions, |&frac| {
        validate_df(&plant, frac * i_peak, &sim_cfg)
    })?;

    let mut t = CsvTable::new(&[
        "i_max_fraction",
        "low_pass_merit",
        "assumption_violated",
        "saturated",
        "power_predicted",
        "power_simulated",
        "power_rel_err",
        "fundamental_predicted",
        "fundamental_simulated",
        "fundamental_rel_err",
        "position_predicted",
        "position_simulated",
        "position_rel_err",
        "converged",
        "pass",
    ]);
    let mut out = CommandOutput::default();
    let mut lines = Vec::new();
    for (&frac, r) in fractions.iter().zip(&reports) {
        t.row()
            .num(frac)
            .num(r.low_pass_merit)
            .flag(r.assumption_violated)
            .flag(r.saturated)
            .num(r.power_predicted)
            .num(r.power_simulated)
            .num(r.power_rel_err)
            .num(r.fundamental_predicted)
            .num(r.fundamental_simulated)
            .num(r.fundamental_rel_err)
            .num(r.position_predicted)
            .num(r.position_simulated)
            .num(r.position_rel_err)
            .flag(r.sim_converged)
            .flag(r.passes())
            .push();
        let status = match (r.within_tolerance(), r.assumption_violated) {
            (true, _) => "PASS",
            (false, true) => "FLAGGED",
            (false, false) => "FAIL",
        };
        lines.push(format!(
            "{status} i_max fraction {frac}: power err {:.3e}, fundamental err {:.3e}",
            r.power_rel_err, r.fundamental_rel_err
        ));
        if !r.passes() {
            out.verification_failed = true;
        }
        if cfg.simulation.dump_waveforms {
            out.add(
                format!("waveform_fraction_{}.csv", alpha_tag(frac)),
                waveform_csv(&r.sim),
            );
        }
    }
    out.summary = lines.join("\n");
    out.files.insert(
        0,
        OutputFile {
            name: "verify.csv".into(),
            contents: t.render(),
        },
    );
    Ok(out)
}
