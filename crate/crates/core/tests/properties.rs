use std::f64::consts::PI;

use invosc::analytic::*;
use invosc::csvfmt::sig15;
use invosc::propagator::{cn_step, init_mode_superposition};
use invosc::quadrature::{apply_hamiltonian, inner_product, Grid1D, SampledField};
use invosc::statmech::{cooling_curve, gibbs_deviation, gibbs_occupations};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn mode(n: i64, l0: f64, omega: f64) -> ConfinedMode {
    ConfinedMode::new(
        n,
        BoxConfig::new(l0, OscillatorParams::new(omega).unwrap()).unwrap(),
    )
    .unwrap()
}

fn convention() -> impl Strategy<Value = PhaseConvention> {
    prop_oneof![
        Just(PhaseConvention::Corrected),
        Just(PhaseConvention::AsPrinted)
    ]
}

proptest! {
    #[test]
    fn psi1_is_odd(n in 1i64..8, l0 in 0.5f64..5.0, omega in -1.0f64..1.0, x in -10.0f64..10.0,
                   t in -1.0f64..1.0, conv in convention()) {
        let m = mode(n, l0, omega);
        let sum = psi1_eval(&m, -x, t, conv) + psi1_eval(&m, x, t, conv);
        prop_assert!(sum.norm() <= 1e-15);
    }

    #[test]
    fn time_reversal_flips_omega(n in 1i64..8, l0 in 0.5f64..5.0, omega in -1.0f64..1.0,
                                 x in -6.0f64..6.0, t in -1.0f64..1.0) {
        let m = mode(n, l0, omega);
        let r = m.with_params(m.params().reversed());
        let lhs = psi1_eval(&m, x, -t, PhaseConvention::Corrected).conj();
        let rhs = psi1_eval(&r, x, t, PhaseConvention::Corrected);
        prop_assert!((lhs - rhs).norm() <= 1e-12);
    }

    #[test]
    fn plane_wave_modulus(k in -5.0f64..5.0, omega in prop_oneof![-1.0f64..-0.01, 0.01f64..1.0],
                          x in -10.0f64..10.0, t in -2.0f64..2.0) {
        let p = OscillatorParams::new(omega).unwrap();
        let z = psi2_eval(&ScatteringMode::new(k, p).unwrap(), x, t).unwrap();
        let expect = decay_intensity(p, t);
        prop_assert!((z.norm_sqr() - expect).abs() <= 1e-14 * expect.max(1.0));
    }

    #[test]
    fn scale_factor_inverse(omega in -2.0f64..2.0, t in -3.0f64..3.0) {
        let p = OscillatorParams::new(omega).unwrap();
        prop_assert!((scale_factor(p, t) * scale_factor(p, -t) - 1.0).abs() <= 1e-14);
        prop_assert!(scale_factor(p, t) > 0.0);
    }

    #[test]
    fn tau_increasing_and_bounded(omega in 0.01f64..2.0, t in 0.0f64..10.0, dt in 1e-6f64..1.0) {
        let p = OscillatorParams::new(omega).unwrap();
        prop_assert!(tau_of(p, t + dt) >= tau_of(p, t));
        if 4.0 * omega * t < 20.0 {
            prop_assert!(tau_of(p, t + dt) > tau_of(p, t));
        }
        prop_assert!(tau_of(p, t + dt) <= 1.0 / (4.0 * omega));
    }

    #[test]
    fn energy_is_scaled_epsilon(n in 1i64..20, l0 in 0.5f64..5.0, omega in -1.0f64..1.0, t in -2.0f64..2.0) {
        let m = mode(n, l0, omega);
        let e = energy_level(&m, t);
        prop_assert_eq!(e, m.epsilon() * (-4.0 * omega * t).exp());
        prop_assert!(e > 0.0);
    }

    #[test]
    fn inner_product_hermitian(a in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 17),
                               b in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 17)) {
        let g = Grid1D::new(0.0, 2.0, 16).unwrap();
        let f = SampledField::new(g, a.iter().map(|&(r, i)| C64::new(r, i)).collect()).unwrap();
        let h = SampledField::new(g, b.iter().map(|&(r, i)| C64::new(r, i)).collect()).unwrap();
        let fh = inner_product(&f, &h).unwrap();
        let hf = inner_product(&h, &f).unwrap();
        prop_assert!((fh - hf.conj()).norm() <= 1e-14);
        let ff = inner_product(&f, &f).unwrap();
        prop_assert!(ff.re >= 0.0 || ff.re.abs() <= 1e-14);
        prop_assert!(ff.im.abs() <= 1e-14 * ff.re.abs().max(1e-300));
    }

    #[test]
    fn hamiltonian_linear(a in prop::collection::vec(-1.0f64..1.0, 33), b in prop::collection::vec(-1.0f64..1.0, 33),
                          alpha in (-2.0f64..2.0, -2.0f64..2.0), beta in (-2.0f64..2.0, -2.0f64..2.0)) {
        let g = Grid1D::new(-1.0, 1.0, 32).unwrap();
        let p = OscillatorParams::new(0.7).unwrap();
        let f = SampledField::new(g, a.iter().map(|&v| C64::new(v, 0.3 * v)).collect()).unwrap();
        let h = SampledField::new(g, b.iter().map(|&v| C64::new(-v, v)).collect()).unwrap();
        let (al, be) = (C64::new(alpha.0, alpha.1), C64::new(beta.0, beta.1));
        let lhs = apply_hamiltonian(&f.combine(al, &h, be).unwrap(), p).unwrap();
        let rhs = apply_hamiltonian(&f, p).unwrap().combine(al, &apply_hamiltonian(&h, p).unwrap(), be).unwrap();
        let scale = lhs.values().iter().map(|z| z.norm()).fold(1.0, f64::max);
        for (x, y) in lhs.values().iter().zip(rhs.values()) {
            prop_assert!((x - y).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn cn_step_is_unitary(coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..6),
                          dtau in 1e-5f64..0.5, omega in -1.0f64..1.0) {
        let boxed = BoxConfig::new(PI, OscillatorParams::new(omega).unwrap()).unwrap();
        let list: Vec<(i64, C64)> = coeffs.iter().enumerate()
            .map(|(i, &(r, im))| (3 * i as i64 + 1, C64::new(r, im) + C64::new(1e-3, 0.0)))
            .collect();
        let field = init_mode_superposition(boxed, 256, &list).unwrap();
        let next = cn_step(&field, dtau).unwrap();
        prop_assert!((next.norm_sqr() - field.norm_sqr()).abs() <= 1e-13 * field.norm_sqr());
        let v = next.values();
        prop_assert_eq!(v[0], C64::new(0.0, 0.0));
        prop_assert_eq!(v[v.len() - 1], C64::new(0.0, 0.0));
    }

    #[test]
    fn gas_stays_gibbs_and_adiabatic(beta0 in 0.05f64..20.0, omega in 0.0f64..1.0, l0 in 0.5f64..4.0,
                                     mut ts in prop::collection::vec(0.0f64..2.0, 1..8)) {
        ts.sort_by(f64::total_cmp);
        let boxed = BoxConfig::new(l0, OscillatorParams::new(omega).unwrap()).unwrap();
        let gas = gibbs_occupations(boxed, beta0, 2).unwrap();
        prop_assert!((gas.occupations().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        let rows = cooling_curve(&gas, &ts).unwrap();
        for r in &rows {
            prop_assert!((r.adiabatic - rows[0].adiabatic).abs() <= 1e-12 * rows[0].adiabatic);
            prop_assert!(gibbs_deviation(&gas, r.t) <= 1e-12);
        }
    }

    #[test]
    fn sig15_round_trip(x in prop::num::f64::NORMAL) {
        let back: f64 = sig15(x).parse().unwrap();
        prop_assert!(((back - x) / x).abs() <= 5e-15);
    }
}
