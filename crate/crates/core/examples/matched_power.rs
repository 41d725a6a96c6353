//! Matched power of a plant, computed from physical parameters and from
//! nondimensional groups.

use std::path::Path;

use wec_satlin::cli::RunConfig;
use wec_satlin::wec::{
    alpha_from_nondim, matched_power, nondim_from_plant, optimal_alpha_m_for_limits,
    thevenin_from_plant, NondimGroups,
};

fn main() -> wec_satlin::Result<()> {
    let cfg = RunConfig::from_path(Path::new(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/configs/point_absorber.toml"
    )))?;
    let plant = cfg.plant.plant()?;
    let src = thevenin_from_plant(&plant)?;
    let m = src.matched_baseline();
    println!(
        "Thevenin source: V_th = {:.4}, Z_th = {:.4}",
        src.v_th(),
        src.z_th()
    );
    println!(
        "matched: P = {:.4e} W, |V| = {:.2} V, |I| = {:.2} A",
        m.p_matched, m.v_peak_matched, m.i_peak_matched
    );

    let g = nondim_from_plant(&plant)?;
    println!(
        "groups: R = {:.4}, D = {:.4}, alpha_m = {:.4}, L = {:.4}",
        g.r_cal, g.d_cal, g.alpha_m, g.l_cal
    );
    let p = matched_power(&g, plant.j_density, plant.k_wavenumber, plant.g0)?;
    println!(
        "nondimensional route: P = {p:.4e} W, alpha = {:.4}",
        alpha_from_nondim(&g)?
    );
    println!(
        "ideal design bound J/k = {:.4e} W",
        plant.j_density / plant.k_wavenumber
    );

    let (plus, _) = optimal_alpha_m_for_limits(&g)?;
    let best = alpha_from_nondim(&NondimGroups { alpha_m: plus, ..g })?;
    println!("|alpha| is largest at alpha_m = ±{plus:.4}, where alpha = {best:.4}");
    Ok(())
}
