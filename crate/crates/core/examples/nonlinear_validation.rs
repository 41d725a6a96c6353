//! Describing-function predictions against the time-domain simulation.

use std::path::Path;

use wec_satlin::cli::RunConfig;
use wec_satlin::validation::validate_df;
use wec_satlin::wec::thevenin_from_plant;

fn main() -> wec_satlin::Result<()> {
    let cfg = RunConfig::from_path(Path::new(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/configs/point_absorber.toml"
    )))?;
    let plant = cfg.plant.plant()?;
    let sim = cfg.sim_config()?;
    let i_peak = thevenin_from_plant(&plant)?
        .matched_baseline()
        .i_peak_matched;
    println!(
        "low-pass merit |Z_th(w)|/|Z_th(3w)| = {:.2}",
        plant.low_pass_merit()
    );
    println!(
        "{:>9} {:>12} {:>12} {:>8} {:>8} {:>6}",
        "fraction", "P predicted", "P simulated", "P err", "I1 err", "pass"
    );
    for frac in [1.0, 0.8, 0.6, 0.4] {
        let r = validate_df(&plant, frac * i_peak, &sim)?;
        println!(
            "{frac:9.2} {:12.4e} {:12.4e} {:7.2}% {:7.2}% {:>6}",
            r.power_predicted,
            r.power_simulated,
            100.0 * r.power_rel_err,
            100.0 * r.fundamental_rel_err,
            r.passes()
        );
    }
    Ok(())
}
