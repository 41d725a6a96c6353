mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use wec_satlin::mismatch::{exact_power_ratio, gamma_from_z, OperatingPoint};
use wec_satlin::wec::*;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Solves the coupled body and winding equations directly for a controller
/// impedance `z_c`, returning (velocity, current).
fn coupled_solve(p: &WecPlant, z_c: Complex64) -> (Complex64, Complex64) {
    let w = p.omega;
    let s = I * w;
    let g2 = p.g_ratio * p.g_ratio;
    let z_m = (p.b_h + g2 * p.b_d) + s * (p.m + p.a_added) + (p.k_h + g2 * p.k_d) / s;
    let kg = p.k_t * p.g_ratio;
    let z_e = Complex64::new(p.r_w, w * p.l_w) + z_c;
    // [z_m  kg] [u]   [f_e]
    // [-kg z_e] [i] = [ 0 ]
    let det = z_m * z_e + kg * kg;
    let u = p.f_e * z_e / det;
    let i = kg * p.f_e / det;
    (u, i)
}

#[test]
fn two_routes_agree_over_random_plants() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..1000 {
        let p = common::random_plant(&mut rng);
        let src = thevenin_from_plant(&p).unwrap();
        let groups = nondim_from_plant(&p).unwrap();
        let a1 = src.alpha();
        let a2 = alpha_from_nondim(&groups).unwrap();
        assert!(
            (a1 - a2).abs() <= 1e-12 * a1.abs().max(1.0),
            "{a1} vs {a2} for {p:?}"
        );
        let p1 = src.matched_baseline().p_matched;
        let p2 = matched_power(&groups, p.j_density, p.k_wavenumber, p.g0).unwrap();
        assert!(rel(p2, p1) < 1e-10, "{p1} vs {p2}");
    }
}

#[test]
fn thevenin_matches_coupled_circuit() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..200 {
        let p = common::random_plant(&mut rng);
        let src = thevenin_from_plant(&p).unwrap();
        for z in [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.3, -0.7),
            Complex64::new(4.0, 2.0),
        ] {
            let z_c = src.load_impedance(z);
            let (_, i) = coupled_solve(&p, z_c);
            let i_th = src.load_current(z_c).unwrap();
            assert!((i - i_th).norm() <= 1e-9 * i.norm(), "{i} vs {i_th}");
        }
    }
}

#[test]
fn position_matches_coupled_circuit() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..200 {
        let p = common::random_plant(&mut rng);
        let src = thevenin_from_plant(&p).unwrap();
        for z in [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 0.2),
            Complex64::new(2.0, -1.0),
        ] {
            let (u, _) = coupled_solve(&p, src.load_impedance(z));
            let x = u / (I * p.omega);
            let got = position_phasor(&p, z).unwrap();
            assert!((got - x).norm() <= 1e-9 * x.norm());
            let amps = constraint_amplitudes(&p, z).unwrap();
            assert!((amps.x_amp - x).norm() <= 1e-9 * x.norm());
        }
    }
}

#[test]
fn source_side_position_differs_for_dissipative_loads() {
    let p = common::low_pass_plant();
    let z = Complex64::new(1.0, 0.0);
    let a = position_phasor(&p, z).unwrap();
    let b = position_phasor_source_side(&p, z).unwrap();
    assert!((a - b).norm() > 1e-3 * a.norm());
}

#[test]
fn damping_ratio_form_of_reactance_ratio() {
    let mut rng = StdRng::seed_from_u64(14);
    for _ in 0..200 {
        let mut p = common::random_plant(&mut rng);
        p.k_h = p.k_h.max(1.0);
        let g = nondim_from_plant(&p).unwrap();
        let wn = p.natural_frequency();
        let zeta = p.total_damping() / (2.0 * (p.total_mass() * p.total_stiffness()).sqrt());
        let w = p.omega;
        let want = (w * w - wn * wn) / (2.0 * zeta * w * wn);
        assert!(
            (g.alpha_m - want).abs() <= 1e-12 * want.abs().max(1.0),
            "{} vs {want}",
            g.alpha_m
        );
    }
}

#[test]
fn resonant_plant_is_resistive() {
    let mut p = common::low_pass_plant();
    p.b_d = 0.0;
    p.k_h = p.omega * p.omega * (p.m + p.a_added);
    let src = thevenin_from_plant(&p).unwrap();
    let kg = p.coupling();
    assert!(src.z_th().im.abs() < 1e-12 * src.z_th().re);
    assert!(rel(src.z_th().re, p.r_w + kg * kg / p.b_h) < 1e-12);
}

#[test]
fn weak_coupling_limit() {
    let mut p = common::low_pass_plant();
    p.k_t = 1e-9;
    let src = thevenin_from_plant(&p).unwrap();
    assert!((src.z_th() - p.z_wind_at(p.omega)).norm() < 1e-12);
    assert!(src.v_th().norm() < 1e-6);
}

#[test]
fn matched_power_grid_peaks_at_ideal_design() {
    let (j, k) = (2.0e4, 0.05);
    let ideal = matched_power(&NondimGroups::new(0.0, 1.0, 0.0, 0.0).unwrap(), j, k, 1).unwrap();
    assert!(rel(ideal, j / k) < 1e-15);
    // With zero resistance the power no longer depends on alpha_m, so the
    // maximum is shared by the whole R = 0, D = 1 edge of the grid.
    let mut best = f64::NEG_INFINITY;
    let mut argmax = Vec::new();
    for a in 0..=50 {
        let r = 5.0 * a as f64 / 50.0;
        for b in 1..=40 {
            let d = b as f64 / 40.0;
            for c in 0..=100 {
                let am = -5.0 + 10.0 * c as f64 / 100.0;
                let g = NondimGroups::new(r, d, am, 0.0).unwrap();
                let pw = matched_power(&g, j, k, 1).unwrap();
                if pw > best {
                    best = pw;
                    argmax.clear();
                }
                if pw == best {
                    argmax.push((r, d, am));
                }
            }
        }
    }
    assert_eq!(best, ideal);
    assert!(argmax.contains(&(0.0, 1.0, 0.0)));
    assert!(argmax.iter().all(|&(r, d, _)| r == 0.0 && d == 1.0));
}

#[test]
fn optimal_alpha_m_maximizes_reactance_ratio() {
    for (r, d) in [(1.0, 1.0), (0.1, 0.8), (3.0, 0.5), (0.02, 1.0)] {
        let g = NondimGroups::new(r, d, 0.0, 0.0).unwrap();
        let (plus, minus) = optimal_alpha_m_for_limits(&g).unwrap();
        assert_eq!(plus, -minus);
        let n = 200_001;
        let span = 4.0 * plus;
        let h = 2.0 * span / (n - 1) as f64;
        let mut best = (0.0, 0.0);
        for k in 0..n {
            let am = -span + h * k as f64;
            let a = alpha_from_nondim(&NondimGroups { alpha_m: am, ..g })
                .unwrap()
                .abs();
            if a > best.0 {
                best = (a, am);
            }
        }
        assert!(
            (best.1.abs() - plus).abs() <= h,
            "R={r} D={d}: {} vs {plus}",
            best.1
        );
    }
    let g = NondimGroups::new(1.0, 1.0, 0.0, 0.0).unwrap();
    assert!((optimal_alpha_m_for_limits(&g).unwrap().0 - 2f64.sqrt()).abs() < 1e-15);
    assert!(optimal_alpha_m_for_limits(&NondimGroups::new(0.0, 1.0, 0.0, 0.0).unwrap()).is_err());
}

#[test]
fn constraint_amplitudes_at_match_and_off_match() {
    let mut rng = StdRng::seed_from_u64(15);
    for _ in 0..100 {
        let p = common::random_plant(&mut rng);
        let src = thevenin_from_plant(&p).unwrap();
        let alpha = src.alpha();
        let pm = src.matched_baseline().p_matched;
        let m = constraint_amplitudes(&p, Complex64::new(1.0, 0.0)).unwrap();
        let root = (1.0 + alpha * alpha).sqrt();
        assert!(rel(m.s_max, pm * (1.0 + root)) < 1e-12);
        assert!((m.s_min - pm * (1.0 - root)).abs() < 1e-12 * pm * root);
        assert!(m.v_s_amp >= m.voltage.norm());

        let z = Complex64::new(0.6, -0.4);
        let a = constraint_amplitudes(&p, z).unwrap();
        let op = OperatingPoint::from_z(z, alpha).unwrap();
        let spread = 2.0 * op.v_ratio * op.i_ratio * root * pm;
        assert!((a.s_max - a.s_min - spread).abs() <= 1e-12 * spread);
        assert!(a.s_max >= a.s_min);
        // Terminal power from the phasors is the exact circuit power.
        let p_l = 0.5 * (a.voltage * a.current.conj()).re;
        let exact = exact_power_ratio(gamma_from_z(z).unwrap(), alpha).unwrap() * pm;
        assert!(rel(p_l, exact) < 1e-9);
    }
}

#[test]
fn phase_voltage_without_inductance_is_terminal_voltage() {
    let p = common::low_pass_plant();
    let a = constraint_amplitudes(&p, Complex64::new(0.7, 0.1)).unwrap();
    assert_eq!(a.v_s_amp, a.voltage.norm());
}

#[test]
fn canonical_plant_round_trip() {
    for (r, d, am, l) in [
        (0.0, 1.0, 0.0, 0.0),
        (0.2, 0.7, -1.5, 0.0),
        (1.0, 0.4, 3.0, 0.5),
    ] {
        let g = NondimGroups::new(r, d, am, l).unwrap();
        let p = g.canonical_plant(1e4, 0.1, 2).unwrap();
        let back = nondim_from_plant(&p).unwrap();
        assert!((back.r_cal - r).abs() < 1e-12);
        assert!((back.d_cal - d).abs() < 1e-12);
        assert!((back.alpha_m - am).abs() < 1e-12);
        assert!((back.l_cal - l).abs() < 1e-12);
        let pm = thevenin_from_plant(&p)
            .unwrap()
            .matched_baseline()
            .p_matched;
        assert!(rel(pm, matched_power(&g, 1e4, 0.1, 2).unwrap()) < 1e-12);
    }
}

#[test]
fn inductance_without_resistance_is_rejected() {
    let mut p = common::low_pass_plant();
    p.r_w = 0.0;
    p.l_w = 1e-3;
    assert!(nondim_from_plant(&p).is_err());
}

proptest! {
    #[test]
    fn matched_power_even_in_alpha_m(r in 0.0..5.0f64, d in 0.01..=1.0f64, am in -10.0..10.0f64) {
        let a = matched_power(&NondimGroups::new(r, d, am, 0.0).unwrap(), 1.0, 1.0, 1).unwrap();
        let b = matched_power(&NondimGroups::new(r, d, -am, 0.0).unwrap(), 1.0, 1.0, 1).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn resistance_free_reactance_is_mirrored(am in -10.0..10.0f64) {
        let a = alpha_from_nondim(&NondimGroups::new(1e-12, 1.0, am, 0.0).unwrap()).unwrap();
        prop_assert!((a + am).abs() < 1e-9 * am.abs().max(1.0));
    }
}
