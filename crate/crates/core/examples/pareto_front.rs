//! Power, voltage and current trade-off along the optimal mismatch contours.

use wec_satlin::mismatch::{gamma_for_amplitude_target, pareto_front, power_ratio, Quantity};

fn main() -> wec_satlin::Result<()> {
    for alpha in [0.0, 1.0, 5.0] {
        let front = pareto_front(alpha, 11)?;
        println!("alpha = {alpha}");
        println!("  {:>8} {:>8} {:>8}  contour", "P/P_m", "V/V_m", "I/I_m");
        for p in &front {
            println!(
                "  {:8.4} {:8.4} {:8.4}  {:?}",
                p.power_ratio, p.v_ratio, p.i_ratio, p.contour
            );
        }
    }

    println!("\nbest power ratio when the current is held to 70% of matched:");
    for alpha in [0.0, 1.0, 2.0, 5.0] {
        let g = gamma_for_amplitude_target(0.7, alpha, Quantity::Current)?;
        println!(
            "  alpha = {alpha}: P/P_m = {:.4} at Γ = {g:.4}",
            power_ratio(g)?
        );
    }
    Ok(())
}
