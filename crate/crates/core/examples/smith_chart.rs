//! Smith-chart regions where voltage or current exceed the matched value.
//!
//! Writes `smith_alpha_<a>.svg` into the working directory.

use wec_satlin::cli::svg::smith_chart;
use wec_satlin::mismatch::smith_grid;

fn main() -> wec_satlin::Result<()> {
    let (radial, angular) = (41, 180);
    for alpha in [0.0, 1.0, 3.0] {
        let cells = smith_grid(alpha, radial, angular)?;
        let v_frac = cells.iter().filter(|c| c.v_exceeds_one).count() as f64 / cells.len() as f64;
        let i_frac = cells.iter().filter(|c| c.i_exceeds_one).count() as f64 / cells.len() as f64;
        println!(
            "alpha = {alpha}: |V| > |V_m| on {:.1}% of cells, |I| > |I_m| on {:.1}%",
            100.0 * v_frac,
            100.0 * i_frac
        );
        let path = format!("smith_alpha_{alpha}.svg");
        std::fs::write(&path, smith_chart(alpha, &cells, angular))?;
        println!("  wrote {path}");
    }
    Ok(())
}
