//! Independent oracles for the frozen expected values. Each one takes a
//! different route from the library: the comoving/gauge composition instead
//! of the closed form, analytic derivatives instead of stencils, fine
//! trapezoid sums instead of Simpson, compensated level sums for the gas.

use std::f64::consts::PI;

use invosc::analytic::*;
use invosc::quadrature::{
    expectation_energy, inner_product, sample_confined, schrodinger_residual, Grid1D,
};
use invosc::statmech::{frozen_mean_energy, gibbs_occupations};
use invosc::Execution;
use num_complex::Complex64 as C64;

fn params(omega: f64) -> OscillatorParams {
    OscillatorParams::new(omega).unwrap()
}

fn mode(n: i64, l0: f64, omega: f64) -> ConfinedMode {
    ConfinedMode::new(n, BoxConfig::new(l0, params(omega)).unwrap()).unwrap()
}

/// Ψ1 assembled as gauge factor × comoving free-particle mode evolved in τ.
fn psi1_by_composition(n: i64, l0: f64, omega: f64, x: f64, t: f64) -> C64 {
    let k = n as f64 * PI / l0;
    let eps = k * k;
    let tau = (1.0 - (-4.0 * omega * t).exp()) / (4.0 * omega);
    let y = x / (2.0 * omega * t).exp();
    let comoving =
        C64::from_polar((2.0 / l0).sqrt(), eps / (4.0 * omega) - eps * tau) * (k * y).sin();
    C64::from_polar((-omega * t).exp(), omega * x * x / 2.0) * comoving
}

/// `H Ψ1` with every derivative taken analytically.
fn h_psi1_analytic(n: i64, l0: f64, omega: f64, x: f64, t: f64) -> C64 {
    // Ψ = G Φ with G = exp(iωx²/2 - ωt), Φ = N f(t) sin(a x); H Ψ = G(-iωΦ - 2iωxΦ_x - Φ_xx)
    let k = n as f64 * PI / l0;
    let a = k * (-2.0 * omega * t).exp();
    let eps = k * k;
    let g = C64::from_polar((-omega * t).exp(), omega * x * x / 2.0);
    let f = C64::from_polar(
        (2.0 / l0).sqrt(),
        eps / (4.0 * omega) * (-4.0 * omega * t).exp(),
    );
    let phi = f * (a * x).sin();
    let phi_x = f * (a * (a * x).cos());
    let phi_xx = -phi * (a * a);
    let i = C64::i();
    g * (-i * omega * phi - i * (2.0 * omega * x) * phi_x - phi_xx)
}

fn trapezoid(n: usize, len: f64, f: impl Fn(f64) -> C64) -> C64 {
    let h = len / n as f64;
    let mut acc = (f(0.0) + f(len)) * 0.5;
    for j in 1..n {
        acc += f(j as f64 * h);
    }
    acc * h
}

#[test]
fn psi1_matches_gauge_and_comoving_composition() {
    for &(n, omega, t) in &[(1, 0.5, 0.0), (2, 0.25, 1.0), (3, 0.5, 0.3), (1, -0.4, 0.8)] {
        let m = mode(n, PI, omega);
        for j in 0..50 {
            let x = -2.0 + 0.13 * j as f64;
            let direct = psi1_eval(&m, x, t, PhaseConvention::Corrected);
            let composed = psi1_by_composition(n, PI, omega, x, t);
            assert!(
                (direct - composed).norm() < 1e-12,
                "n={n} ω={omega} t={t} x={x}"
            );
        }
    }
}

#[test]
fn energy_against_analytic_hamiltonian() {
    // ⟨Ψ|HΨ⟩ with analytic derivatives and a 2·10⁵-panel trapezoid rule
    for &(n, omega, t) in &[(1, 0.5, 0.0), (2, 0.25, 1.0), (3, 0.5, 0.5)] {
        let m = mode(n, PI, omega);
        let len = box_length(&m.box_config(), t);
        let oracle = trapezoid(200_000, len, |x| {
            psi1_eval(&m, x, t, PhaseConvention::Corrected).conj()
                * h_psi1_analytic(n, PI, omega, x, t)
        });
        let law = energy_level(&m, t);
        assert!(
            (oracle.re - law).abs() / law < 1e-9,
            "oracle {oracle} vs {law}"
        );
        assert!(oracle.im.abs() < 1e-9);
        let numeric = expectation_energy(&m, t, 8192, PhaseConvention::Corrected).unwrap();
        assert!((numeric.re - oracle.re).abs() / law < 1e-5);
        assert!(numeric.im.abs() < 1e-6);
    }
}

#[test]
fn energy_reference_values() {
    let e = expectation_energy(&mode(1, PI, 0.5), 0.0, 8192, PhaseConvention::Corrected).unwrap();
    assert!((e.re - 1.0).abs() < 1e-5 && e.im.abs() < 1e-6);
    let e = expectation_energy(&mode(2, PI, 0.25), 1.0, 8192, PhaseConvention::Corrected).unwrap();
    assert!((e.re - 1.4715177646857693).abs() / 1.4715177646857693 < 1e-5);
}

#[test]
fn norms_and_overlaps_by_fine_trapezoid() {
    for t in [0.0, 0.5, 1.0] {
        let modes: Vec<_> = (1..=3).map(|n| mode(n, PI, 0.5)).collect();
        let len = box_length(&modes[0].box_config(), t);
        for a in &modes {
            for b in &modes {
                let oracle = trapezoid(100_000, len, |x| {
                    psi1_eval(a, x, t, PhaseConvention::Corrected).conj()
                        * psi1_eval(b, x, t, PhaseConvention::Corrected)
                });
                let grid = Grid1D::new(0.0, len, 8192).unwrap();
                let fa = sample_confined(
                    Execution::Sequential,
                    a,
                    grid,
                    t,
                    PhaseConvention::Corrected,
                )
                .unwrap();
                let fb = sample_confined(
                    Execution::Sequential,
                    b,
                    grid,
                    t,
                    PhaseConvention::Corrected,
                )
                .unwrap();
                let numeric = inner_product(&fa, &fb).unwrap();
                let target = if a.n() == b.n() { 1.0 } else { 0.0 };
                assert!((oracle - target).norm() < 1e-9);
                assert!((numeric - target).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn tau_matches_integral_of_compression_factor() {
    let p = params(0.5);
    for t in [0.1, 0.5, 2.0] {
        let oracle = trapezoid(100_000, t, |s| C64::new((-4.0 * 0.5 * s).exp(), 0.0)).re;
        assert!((tau_of(p, t) - oracle).abs() < 1e-10);
    }
}

#[test]
fn residual_of_exact_solutions_and_printed_sign() {
    let p = params(0.5);
    let m = mode(1, PI, 0.5);
    let t = 0.3;
    let grid = Grid1D::new(0.0, box_length(&m.box_config(), t), 4096).unwrap();
    let res =
        |conv, dt| schrodinger_residual(|x, s| psi1_eval(&m, x, s, conv), &grid, p, t, dt).unwrap();
    let coarse = res(PhaseConvention::Corrected, 1e-4);
    let fine = res(PhaseConvention::Corrected, 5e-5);
    assert!(coarse < 1e-6 && coarse / fine >= 3.5, "{coarse} {fine}");
    // printed sign: residual is 2ε exp(-4ωt) |Ψ| up to discretization
    let printed = res(PhaseConvention::AsPrinted, 1e-4);
    let plateau = 2.0 * m.epsilon() * (-4.0 * 0.5 * t).exp() * m.norm() * (-0.5 * t).exp();
    assert!(printed > 1e-2);
    assert!(
        (printed - plateau).abs() / plateau < 1e-6,
        "{printed} vs {plateau}"
    );
    let wave = ScatteringMode::new(1.0, p).unwrap();
    let r2 =
        schrodinger_residual(|x, s| psi2_eval(&wave, x, s).unwrap(), &grid, p, t, 1e-4).unwrap();
    let r2_fine =
        schrodinger_residual(|x, s| psi2_eval(&wave, x, s).unwrap(), &grid, p, t, 5e-5).unwrap();
    assert!(r2 < 1e-6 && r2_fine < r2);
}

/// Neumaier-compensated `Σ w_n` and `Σ n² w_n` for `w_n = exp(-n²)`.
fn gas_sums() -> (f64, f64) {
    let mut z = (0.0_f64, 0.0_f64);
    let mut u = (0.0_f64, 0.0_f64);
    let add = |acc: &mut (f64, f64), v: f64| {
        let t = acc.0 + v;
        acc.1 += if acc.0.abs() >= v.abs() {
            (acc.0 - t) + v
        } else {
            (v - t) + acc.0
        };
        acc.0 = t;
    };
    for n in 1..40 {
        let w = (-(n as f64) * (n as f64)).exp();
        add(&mut z, w);
        add(&mut u, (n * n) as f64 * w);
    }
    (z.0 + z.1, u.0 + u.1)
}

#[test]
fn gas_against_compensated_sum_and_mpmath() {
    // 40-digit mpmath values of e^{-1}/Z and Σn²e^{-n²}/Z
    const P1: f64 = 0.952_269_548_691_948_5;
    const U0: f64 = 1.144_792_104_523_067_2;
    let (z, u) = gas_sums();
    assert!(((-1.0f64).exp() / z - P1).abs() < 1e-15);
    assert!((u / z - U0).abs() < 1e-15);
    let gas = gibbs_occupations(BoxConfig::new(PI, params(0.5)).unwrap(), 1.0, 20).unwrap();
    assert!((gas.occupations()[0] - P1).abs() / P1 < 1e-12);
    assert!((frozen_mean_energy(&gas, 0.0) - U0).abs() / U0 < 1e-12);
    let ratio = frozen_mean_energy(&gas, 1.0) / frozen_mean_energy(&gas, 0.0);
    assert!((ratio - 0.1353352832366127).abs() < 1e-12);
}
