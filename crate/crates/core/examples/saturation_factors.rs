//! Harmonic content of a clipped sinusoid as the clipping deepens.

use std::f64::consts::PI;

use wec_satlin::describing::SaturationFactors;

fn main() {
    println!(
        "{:>6} {:>8} {:>8} {:>8} {:>8} {:>8}",
        "I", "f1", "f3", "f5", "f7", "f1/I"
    );
    for i in [2.0, 1.0, 0.9, 0.7, 0.5, 0.3, 0.1, 0.01] {
        let f = SaturationFactors::new(i, 7);
        println!(
            "{i:6.2} {:8.4} {:8.4} {:8.4} {:8.4} {:8.4}",
            f.get(1),
            f.get(3),
            f.get(5),
            f.get(7),
            f.get(1) / i
        );
    }
    println!("square-wave limit of f1/I: {:.4}", 4.0 / PI);
}
