//! Conjugate control of a point absorber under a force (current) limit,
//! predicted with the harmonic describing-function solve.

use std::path::Path;

use wec_satlin::cli::RunConfig;
use wec_satlin::describing::{linear_saturation_equivalent, solve_operating_point, SolveOptions};
use wec_satlin::wec::thevenin_from_plant;

fn main() -> wec_satlin::Result<()> {
    let cfg = RunConfig::from_path(Path::new(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/configs/point_absorber.toml"
    )))?;
    let plant = cfg.plant.plant()?;
    let src = thevenin_from_plant(&plant)?;
    let m = src.matched_baseline();
    println!(
        "{:>9} {:>8} {:>10} {:>12} {:>12}",
        "i_max/I_m", "I", "P/P_m", "P3+P5+...", "mismatch P/P_m"
    );
    for frac in [1.0, 0.8, 0.6, 0.4, 0.2] {
        let i_max = frac * m.i_peak_matched;
        let sol = solve_operating_point(&src, &plant, i_max, SolveOptions::default())?;
        let harmonic_power: f64 = sol.harmonics[1..].iter().map(|h| h.power).sum();
        let linear = linear_saturation_equivalent(&src, i_max)?;
        println!(
            "{frac:9.2} {:8.4} {:10.4} {:12.3e} {:12.4}",
            sol.i_script,
            sol.p_total / m.p_matched,
            harmonic_power / m.p_matched,
            linear.power_ratio
        );
    }
    Ok(())
}
