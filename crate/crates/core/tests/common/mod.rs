//! Plant generators shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::Rng;
use wec_satlin::wec::WecPlant;

fn log_uniform(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// Any valid plant with a Haskind-consistent force.
pub fn random_plant(rng: &mut StdRng) -> WecPlant {
    let omega = rng.random_range(0.3..3.0);
    let m = log_uniform(rng, 1e3, 1e6);
    WecPlant {
        m,
        a_added: rng.random_range(0.0..m),
        b_h: log_uniform(rng, 1e2, 1e5),
        k_h: rng.random_range(0.0..5.0) * m * omega * omega,
        g_ratio: log_uniform(rng, 0.5, 50.0),
        b_d: if rng.random_bool(0.3) {
            0.0
        } else {
            log_uniform(rng, 1e-1, 1e2)
        },
        k_d: if rng.random_bool(0.5) {
            0.0
        } else {
            log_uniform(rng, 1e-1, 1e3)
        },
        k_t: log_uniform(rng, 1.0, 500.0),
        r_w: log_uniform(rng, 1e-2, 10.0),
        l_w: if rng.random_bool(0.3) {
            0.0
        } else {
            log_uniform(rng, 1e-4, 1e-1)
        },
        p_poles: 2 * rng.random_range(1..12),
        omega,
        f_e: Complex64::new(0.0, 0.0),
        j_density: log_uniform(rng, 1e3, 1e5),
        k_wavenumber: omega * omega / 9.81,
        g0: if rng.random_bool(0.5) { 1 } else { 2 },
    }
    .with_haskind_force(rng.random_range(-3.0..3.0))
    .unwrap()
}

/// A heaving plant driven below resonance, so `Im Z_th > 0` and the
/// conjugate controller is passive. Electrical and mechanical time constants
/// are kept within a few wave periods.
pub fn simulation_plant(rng: &mut StdRng, inductive: bool) -> WecPlant {
    let omega = rng.random_range(0.5..1.5);
    let m = log_uniform(rng, 5e4, 5e5);
    let a_added = rng.random_range(0.2..1.0) * m;
    let b_h = rng.random_range(0.1..0.5) * (m + a_added) * omega;
    let k_h = rng.random_range(1.5..3.0) * (m + a_added) * omega * omega;
    let g_ratio = rng.random_range(5.0..20.0);
    let r_w = rng.random_range(0.05..0.5);
    let r_cal = rng.random_range(0.05..0.5);
    let l_w = if inductive {
        rng.random_range(0.05..0.5) * r_w / omega
    } else {
        0.0
    };
    WecPlant {
        m,
        a_added,
        b_h,
        k_h,
        g_ratio,
        b_d: rng.random_range(0.0..0.1) * b_h / (g_ratio * g_ratio),
        k_d: 0.0,
        k_t: (r_w * b_h / r_cal).sqrt() / g_ratio,
        r_w,
        l_w,
        p_poles: 8,
        omega,
        f_e: Complex64::new(0.0, 0.0),
        j_density: rng.random_range(1e4..5e4),
        k_wavenumber: omega * omega / 9.81,
        g0: 1,
    }
    .with_haskind_force(rng.random_range(-1.0..1.0))
    .unwrap()
}

/// Low-pass test plant used for the saturated closure checks.
pub fn low_pass_plant() -> WecPlant {
    WecPlant {
        m: 1e5,
        a_added: 5e4,
        b_h: 4e4,
        k_h: 2e5,
        g_ratio: 12.0,
        b_d: 50.0,
        k_d: 0.0,
        k_t: 60.0,
        r_w: 0.1,
        l_w: 0.0,
        p_poles: 8,
        omega: 1.0,
        f_e: Complex64::new(0.0, 0.0),
        j_density: 3e4,
        k_wavenumber: 0.1,
        g0: 1,
    }
    .with_haskind_force(0.0)
    .unwrap()
}
