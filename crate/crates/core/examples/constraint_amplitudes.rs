//! Position, phase voltage and apparent power for a few load choices.

use std::path::Path;

use num_complex::Complex64;
use wec_satlin::cli::RunConfig;
use wec_satlin::mismatch::{exact_power_ratio, gamma_from_z};
use wec_satlin::wec::{constraint_amplitudes, thevenin_from_plant};

fn main() -> wec_satlin::Result<()> {
    let cfg = RunConfig::from_path(Path::new(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/configs/point_absorber.toml"
    )))?;
    let plant = cfg.plant.plant()?;
    let alpha = thevenin_from_plant(&plant)?.alpha();
    println!("alpha = {alpha:.4}");
    println!(
        "{:>14} {:>8} {:>8} {:>10} {:>12} {:>12}",
        "z", "P/P_m", "|X| (m)", "|V_s| (V)", "S_max (W)", "S_min (W)"
    );
    for z in [
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, alpha),
        Complex64::new(2.0, 0.0),
        Complex64::new(0.5, -0.3),
    ] {
        let a = constraint_amplitudes(&plant, z)?;
        let p = exact_power_ratio(gamma_from_z(z)?, alpha)?;
        println!(
            "{:>14} {p:8.4} {:8.4} {:10.2} {:12.4e} {:12.4e}",
            format!("{:.2}{:+.2}i", z.re, z.im),
            a.x_amp.norm(),
            a.v_s_amp,
            a.s_max,
            a.s_min
        );
    }
    Ok(())
}
