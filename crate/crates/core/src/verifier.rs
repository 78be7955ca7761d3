//! Pass/fail checks for every quantitative property of the confined and
//! scattering solutions, the propagator and the gas model, gathered into a
//! deterministic CSV report.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64 as C64;

use crate::analytic::{
    box_length, decay_rate, energy_level, psi1_eval, psi2_eval, BoxConfig, ConfinedMode,
    OscillatorParams, PhaseConvention, ScatteringMode,
};
use crate::csvfmt::sig15;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::propagator::{
    init_mode_superposition, lab_frame, propagate_to, ComovingField, LabField,
};
use crate::quadrature::{
    apply_hamiltonian, box_grid, expectation_energy_with, inner_product, sample_confined,
    schrodinger_residual_with, simpson_integrate, Grid1D, SampledField,
};
use crate::statmech::{
    cooling_curve, effective_temperature, frozen_mean_energy, gibbs_deviation, gibbs_occupations,
};

/// Direction in which a measured value must sit relative to its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub params: String,
    pub value: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub pass: bool,
}

impl CheckResult {
    pub fn new(name: &str, params: String, value: f64, tolerance: f64, bound: Bound) -> Self {
        let pass = match bound {
            Bound::AtMost => value <= tolerance,
            Bound::AtLeast => value >= tolerance,
        };
        Self {
            name: name.to_string(),
            params,
            value,
            tolerance,
            bound,
            pass,
        }
    }

    pub fn at_most(name: &str, params: String, value: f64, tolerance: f64) -> Self {
        Self::new(name, params, value, tolerance, Bound::AtMost)
    }

    pub fn at_least(name: &str, params: String, value: f64, tolerance: f64) -> Self {
        Self::new(name, params, value, tolerance, Bound::AtLeast)
    }

    /// A check that could not be evaluated.
    pub fn errored(name: &str, err: &Error) -> Self {
        let params = format!("error={}", err.to_string().replace([',', '\n'], ";"));
        Self {
            name: name.to_string(),
            params,
            value: f64::INFINITY,
            tolerance: 0.0,
            bound: Bound::AtMost,
            pass: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    results: Vec<CheckResult>,
    all_pass: bool,
}

impl Report {
    pub fn new(results: Vec<CheckResult>) -> Self {
        let all_pass = results.iter().all(|r| r.pass);
        Self { results, all_pass }
    }

    pub fn results(&self) -> &[CheckResult] {
        &self.results
    }

    pub fn all_pass(&self) -> bool {
        self.all_pass
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.results.iter().find(|r| r.name == name)
    }

    /// `check,params,value,tolerance,pass` with LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,params,value,tolerance,pass\n");
        for r in &self.results {
            let mut params = r.params.clone();
            if r.bound == Bound::AtLeast {
                params.push_str(";bound=at-least");
            }
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.name,
                params,
                sig15(r.value),
                sig15(r.tolerance),
                r.pass
            );
        }
        out
    }
}

/// Fixed tolerances. Each sits at least an order of magnitude above what the
/// default resolution actually achieves.
pub mod tol {
    pub const ORTHONORMALITY: f64 = 1e-10;
    pub const ENERGY_RELATIVE: f64 = 1e-5;
    pub const ENERGY_IMAG: f64 = 1e-6;
    pub const ENERGY_DYNAMICS: f64 = 1e-5;
    pub const FREE_LIMIT: f64 = 1e-6;
    pub const PARITY: f64 = 1e-14;
    pub const TIME_REVERSAL: f64 = 1e-12;
    pub const DECAY_SLOPE: f64 = 1e-10;
    pub const RESIDUAL: f64 = 1e-5;
    pub const RESIDUAL_RATIO: f64 = 3.5;
    pub const AS_PRINTED_FLOOR: f64 = 1e-2;
    pub const PROPAGATION: f64 = 1e-5;
    pub const FREE_PROPAGATION: f64 = 1e-6;
    pub const NORM_DRIFT: f64 = 1e-12;
    pub const MODE_MIXING: f64 = 1e-12;
    pub const FRAME_NORM: f64 = 1e-13;
    pub const GAS: f64 = 1e-12;
}

/// Inputs of [`run_full_report`]. `Default` gives the documented defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub l0: f64,
    pub omega: f64,
    /// Highest mode in Gram, parity and time-reversal checks.
    pub n_max: usize,
    /// Highest mode in energy and residual checks.
    pub energy_n_max: usize,
    /// Quadrature intervals for norms and energies.
    pub grid: usize,
    pub norm_times: Vec<f64>,
    pub energy_times: Vec<f64>,
    pub residual_grid: usize,
    pub residual_dt: f64,
    pub residual_times: Vec<f64>,
    pub decay_times: Vec<f64>,
    pub symmetry_samples: usize,
    pub parity_time: f64,
    pub reversal_time: f64,
    pub propagation_time: f64,
    pub propagation_grid: usize,
    pub propagation_steps: usize,
    pub beta0: f64,
    pub gas_n_max: usize,
    pub gas_times: Vec<f64>,
    /// The convention treated as the exact solution.
    pub convention: PhaseConvention,
    pub exec: Execution,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            l0: PI,
            omega: 0.5,
            n_max: 5,
            energy_n_max: 3,
            grid: 8192,
            norm_times: vec![0.0, 0.5, 1.0],
            energy_times: vec![0.0, 0.5],
            residual_grid: 4096,
            residual_dt: 1e-4,
            residual_times: vec![0.0, 0.3],
            decay_times: (0..=8).map(|i| i as f64 * 0.25).collect(),
            symmetry_samples: 1000,
            parity_time: 0.7,
            reversal_time: 0.4,
            propagation_time: 0.5,
            propagation_grid: crate::propagator::DEFAULT_INTERVALS,
            propagation_steps: crate::propagator::DEFAULT_STEPS,
            beta0: 1.0,
            gas_n_max: 20,
            gas_times: (0..=8).map(|i| i as f64 * 0.25).collect(),
            convention: PhaseConvention::Corrected,
            exec: Execution::default(),
        }
    }
}

impl VerifyConfig {
    pub fn box_config(&self) -> Result<BoxConfig> {
        BoxConfig::new(self.l0, OscillatorParams::new(self.omega)?)
    }
}

fn modes(boxed: BoxConfig, n_max: usize) -> Result<Vec<ConfinedMode>> {
    (1..=n_max as i64)
        .map(|n| ConfinedMode::new(n, boxed))
        .collect()
}

fn describe(boxed: &BoxConfig) -> String {
    format!("l0={};omega={}", boxed.l0(), boxed.omega())
}

fn list(ts: &[f64]) -> String {
    ts.iter().map(f64::to_string).collect::<Vec<_>>().join(" ")
}

/// Gram matrix of the first `n_max` confined modes over `[0, L(t)]`.
pub fn gram_matrix(
    exec: Execution,
    boxed: BoxConfig,
    n_max: usize,
    t: f64,
    m: usize,
    conv: PhaseConvention,
) -> Result<Vec<Vec<C64>>> {
    let modes = modes(boxed, n_max)?;
    let grid = Grid1D::new(0.0, box_length(&boxed, t), m)?;
    let fields = exec::map_slice(exec, &modes, |mode| {
        sample_confined(Execution::Sequential, mode, grid, t, conv)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let entries = exec::map_indices(exec, n_max * n_max, |k| {
        inner_product(&fields[k / n_max], &fields[k % n_max])
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(entries.chunks(n_max).map(<[C64]>::to_vec).collect())
}

/// `max |G - I|` entrywise.
pub fn check_orthonormality(
    exec: Execution,
    boxed: BoxConfig,
    n_max: usize,
    t: f64,
    m: usize,
    conv: PhaseConvention,
) -> Result<CheckResult> {
    if n_max < 2 {
        return Err(Error::InvalidSuperposition(format!(
            "n_max = {n_max}, need at least 2 modes"
        )));
    }
    let gram = gram_matrix(exec, boxed, n_max, t, m, conv)?;
    let mut dev = 0.0_f64;
    for (i, row) in gram.iter().enumerate() {
        for (j, g) in row.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((g - target).norm());
        }
    }
    let params = format!("{};n_max={n_max};t={t};m={m}", describe(&boxed));
    Ok(CheckResult::at_most(
        "orthonormality",
        params,
        dev,
        tol::ORTHONORMALITY,
    ))
}

/// Quadrature energies against `exp(-4ωt) n²π²/l0²`: relative error, stray
/// imaginary part and (for `ω > 0`) strict decrease along `t_list`.
pub fn check_energy_law(
    exec: Execution,
    boxed: BoxConfig,
    n_max: usize,
    t_list: &[f64],
    m: usize,
    conv: PhaseConvention,
) -> Result<Vec<CheckResult>> {
    let modes = modes(boxed, n_max)?;
    let jobs: Vec<(ConfinedMode, f64)> = modes
        .iter()
        .flat_map(|md| t_list.iter().map(move |&t| (*md, t)))
        .collect();
    let energies = exec::map_slice(exec, &jobs, |(md, t)| {
        expectation_energy_with(Execution::Sequential, md, *t, m, conv)
            .map(|e| (e, energy_level(md, *t)))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let rel = energies
        .iter()
        .map(|(e, exact)| (e.re - exact).abs() / exact)
        .fold(0.0, f64::max);
    let imag = energies.iter().map(|(e, _)| e.im.abs()).fold(0.0, f64::max);
    let params = format!(
        "{};n_max={n_max};t={};m={m}",
        describe(&boxed),
        list(t_list)
    );
    let mut out = vec![
        CheckResult::at_most("energy_law", params.clone(), rel, tol::ENERGY_RELATIVE),
        CheckResult::at_most("energy_imag", params.clone(), imag, tol::ENERGY_IMAG),
    ];
    if boxed.omega() > 0.0 {
        let mut sorted = t_list.to_vec();
        sorted.sort_by(f64::total_cmp);
        let violations = modes
            .iter()
            .flat_map(|md| sorted.windows(2).map(move |w| (md, w[0], w[1])))
            .filter(|(md, t1, t2)| t2 > t1 && energy_level(md, *t2) >= energy_level(md, *t1))
            .count();
        out.push(CheckResult::at_most(
            "energy_monotone",
            params,
            violations as f64,
            0.0,
        ));
    }
    Ok(out)
}

/// Relative gap between `⟨Ψ|i∂tΨ⟩` (central difference of step `dt`) and
/// `⟨Ψ|H|Ψ⟩`. Zero only for a true solution.
pub fn check_energy_dynamics(
    exec: Execution,
    boxed: BoxConfig,
    n_max: usize,
    t_list: &[f64],
    m: usize,
    dt: f64,
    conv: PhaseConvention,
) -> Result<CheckResult> {
    let modes = modes(boxed, n_max)?;
    let jobs: Vec<(ConfinedMode, f64)> = modes
        .iter()
        .flat_map(|md| t_list.iter().map(move |&t| (*md, t)))
        .collect();
    let gaps = exec::map_slice(exec, &jobs, |(md, t)| -> Result<f64> {
        let grid = box_grid(md, *t, m)?;
        let psi = sample_confined(Execution::Sequential, md, grid, *t, conv)?;
        let later = sample_confined(Execution::Sequential, md, grid, *t + dt, conv)?;
        let earlier = sample_confined(Execution::Sequential, md, grid, *t - dt, conv)?;
        let i_dt = later.combine(C64::new(0.0, 0.5 / dt), &earlier, C64::new(0.0, -0.5 / dt))?;
        let lhs = inner_product(&psi, &i_dt)?;
        let rhs = inner_product(&psi, &apply_hamiltonian(&psi, md.params())?)?;
        Ok((lhs - rhs).norm() / energy_level(md, *t))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let params = format!(
        "{};n_max={n_max};t={};m={m};dt={dt};convention={}",
        describe(&boxed),
        list(t_list),
        conv.name()
    );
    Ok(CheckResult::at_most(
        "energy_dynamics",
        params,
        gaps.into_iter().fold(0.0, f64::max),
        tol::ENERGY_DYNAMICS,
    ))
}

/// Energies at `ω = 0` and at a tiny `ω` against the particle-in-a-box levels.
pub fn check_free_limit(
    exec: Execution,
    l0: f64,
    n_max: usize,
    t_list: &[f64],
    m: usize,
    conv: PhaseConvention,
) -> Result<Vec<CheckResult>> {
    [(0.0, "free_limit"), (1e-8, "free_limit_continuity")]
        .into_iter()
        .map(|(omega, name)| {
            let boxed = BoxConfig::new(l0, OscillatorParams::new(omega)?)?;
            let modes = modes(boxed, n_max)?;
            let jobs: Vec<(ConfinedMode, f64)> = modes
                .iter()
                .flat_map(|md| t_list.iter().map(move |&t| (*md, t)))
                .collect();
            let devs = exec::map_slice(exec, &jobs, |(md, t)| {
                let free = (md.n() as f64 * PI / l0).powi(2);
                expectation_energy_with(Execution::Sequential, md, *t, m, conv)
                    .map(|e| (e.re - free).abs() / free)
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
            let params = format!(
                "{};n_max={n_max};t={};m={m}",
                describe(&boxed),
                list(t_list)
            );
            Ok(CheckResult::at_most(
                name,
                params,
                devs.into_iter().fold(0.0, f64::max),
                tol::FREE_LIMIT,
            ))
        })
        .collect()
}

/// `max |Ψ1(-x) + Ψ1(x)|` over `samples` points of `(0, L(t)]`.
pub fn parity_deviation(mode: &ConfinedMode, t: f64, samples: usize, conv: PhaseConvention) -> f64 {
    let len = box_length(&mode.box_config(), t);
    (1..=samples)
        .map(|j| {
            let x = len * j as f64 / samples as f64;
            (psi1_eval(mode, -x, t, conv) + psi1_eval(mode, x, t, conv)).norm()
        })
        .fold(0.0, f64::max)
}

/// `max |conj(Ψ1(ω; x, -t)) - Ψ1(-ω; x, t)|` over `samples` points of `[-L, L]`
/// with `L` the larger of the two wall positions.
pub fn time_reversal_deviation(
    mode: &ConfinedMode,
    t: f64,
    samples: usize,
    conv: PhaseConvention,
) -> f64 {
    let reversed = mode.with_params(mode.params().reversed());
    let boxed = mode.box_config();
    let len = box_length(&boxed, t).max(box_length(&boxed, -t));
    (0..samples)
        .map(|j| {
            let x = -len + 2.0 * len * j as f64 / (samples.max(2) - 1) as f64;
            (psi1_eval(mode, x, -t, conv).conj() - psi1_eval(&reversed, x, t, conv)).norm()
        })
        .fold(0.0, f64::max)
}

/// Parity and time-reversal checks for one mode.
pub fn check_symmetries(
    mode: &ConfinedMode,
    t: f64,
    samples: usize,
    conv: PhaseConvention,
) -> (CheckResult, CheckResult) {
    let params = format!(
        "{};n={};t={t};samples={samples}",
        describe(&mode.box_config()),
        mode.n()
    );
    (
        CheckResult::at_most(
            "parity",
            params.clone(),
            parity_deviation(mode, t, samples, conv),
            tol::PARITY,
        ),
        CheckResult::at_most(
            "time_reversal",
            params,
            time_reversal_deviation(mode, t, samples, conv),
            tol::TIME_REVERSAL,
        ),
    )
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return Err(Error::InvalidFit(n.min(y.len())));
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidFit(1));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    Ok(sxy / sxx)
}

/// Fits `ln|Ψ2(x0, t)|²` over `t_list` (k = 1, x0 = 0.7). At `ω = 0` the free
/// plane wave stands in for Ψ2. Returns the slope row (`|slope + 2ω|`) and the
/// rate row (`|Γ + 2 slope|` with `Γ = 4ω`).
pub fn check_decay(params: OscillatorParams, t_list: &[f64]) -> Result<(CheckResult, CheckResult)> {
    let (k, x0) = (1.0, 0.7);
    let omega = params.omega();
    let mode = ScatteringMode::new(k, params)?;
    let logs = t_list
        .iter()
        .map(|&t| {
            let z = if omega == 0.0 {
                Ok(C64::from_polar(1.0, k * x0 - k * k * t))
            } else {
                psi2_eval(&mode, x0, t)
            };
            z.map(|z| z.norm_sqr().ln())
        })
        .collect::<Result<Vec<_>>>()?;
    let slope = fit_slope(t_list, &logs)?;
    let gamma = decay_rate(params);
    let params_s = format!("omega={omega};k={k};x0={x0};t={}", list(t_list));
    Ok((
        CheckResult::at_most(
            "decay_slope",
            params_s.clone(),
            (slope + 2.0 * omega).abs(),
            tol::DECAY_SLOPE,
        ),
        CheckResult::at_most(
            "decay_rate",
            format!("{params_s};gamma={gamma}"),
            (gamma + 2.0 * slope).abs(),
            2.0 * tol::DECAY_SLOPE,
        ),
    ))
}

/// Residual of the selected convention at `dt` and `dt/2`, the convergence
/// ratio between them, the as-printed plateau and the plane-wave residual.
pub fn check_residuals(
    exec: Execution,
    boxed: BoxConfig,
    n_max: usize,
    conv: PhaseConvention,
    t_list: &[f64],
    m: usize,
    dt: f64,
) -> Result<Vec<CheckResult>> {
    let params = boxed.params();
    let modes = modes(boxed, n_max)?;
    let residual = |md: &ConfinedMode, c: PhaseConvention, t: f64, step: f64| -> Result<f64> {
        let grid = box_grid(md, t, m)?;
        schrodinger_residual_with(exec, |x, s| psi1_eval(md, x, s, c), &grid, params, t, step)
    };
    let mut finest = 0.0_f64;
    let mut ratio = f64::INFINITY;
    let mut printed = f64::INFINITY;
    for md in &modes {
        for &t in t_list {
            let coarse = residual(md, conv, t, dt)?;
            let fine = residual(md, conv, t, dt / 2.0)?;
            finest = finest.max(fine);
            ratio = ratio.min(coarse / fine);
            printed = printed.min(residual(md, PhaseConvention::AsPrinted, t, dt)?);
        }
    }
    let mut psi2 = 0.0_f64;
    if params.omega() != 0.0 {
        let wave = ScatteringMode::new(1.0, params)?;
        for &t in t_list {
            let grid = Grid1D::new(0.0, box_length(&boxed, t), m)?;
            let r = schrodinger_residual_with(
                exec,
                |x, s| psi2_eval(&wave, x, s).expect("omega is nonzero"),
                &grid,
                params,
                t,
                dt,
            )?;
            psi2 = psi2.max(r);
        }
    }
    let base = format!(
        "{};n_max={n_max};t={};m={m}",
        describe(&boxed),
        list(t_list)
    );
    let conv_s = conv.name();
    Ok(vec![
        CheckResult::at_most(
            "residual",
            format!("{base};dt={};convention={conv_s}", dt / 2.0),
            finest,
            tol::RESIDUAL,
        ),
        CheckResult::at_least(
            "residual_convergence",
            format!("{base};dt={dt};convention={conv_s}"),
            ratio,
            tol::RESIDUAL_RATIO,
        ),
        CheckResult::at_least(
            "residual_as_printed",
            format!("{base};dt={dt};convention=as-printed"),
            printed,
            tol::AS_PRINTED_FLOOR,
        ),
        CheckResult::at_most(
            "residual_psi2",
            format!("{base};k=1;dt={dt}"),
            psi2,
            tol::RESIDUAL,
        ),
    ])
}

/// Lab-frame L2 distance `sqrt(∫|a - b|² dx)` between two samplings on one grid.
pub fn l2_distance(a: &SampledField, b: &SampledField) -> Result<f64> {
    let diff = a.combine(C64::new(1.0, 0.0), b, C64::new(-1.0, 0.0))?;
    let sq = SampledField::new(
        *diff.grid(),
        diff.values()
            .iter()
            .map(|z| C64::new(z.norm_sqr(), 0.0))
            .collect(),
    )?;
    Ok(simpson_integrate(&sq).re.max(0.0).sqrt())
}

/// Propagated single mode against the analytic `Ψ1`, sampled on the lab image
/// of the comoving grid.
pub fn propagation_error(
    lab: &LabField,
    mode: &ConfinedMode,
    conv: PhaseConvention,
) -> Result<f64> {
    let t = lab.t_lab();
    let exact = SampledField::new(
        *lab.grid(),
        lab.grid()
            .coordinates()
            .into_iter()
            .map(|x| psi1_eval(mode, x, t, conv))
            .collect(),
    )?;
    l2_distance(lab.as_sampled(), &exact)
}

fn wall_deviation(field: &ComovingField, lab: &LabField) -> f64 {
    let wall = box_length(&field.box_config(), field.t_lab());
    let v = field.values();
    (lab.grid().x_max() - wall).abs() / wall + v[0].norm() + v[v.len() - 1].norm()
}

/// Propagates mode `n` from `t = 0` to `t_target` and reports the lab-frame
/// error, norm drift, leakage into other modes, the moving-wall position and
/// the frame-mapping norm identity.
pub fn check_propagation(
    boxed: BoxConfig,
    n: i64,
    t_target: f64,
    m: usize,
    steps: usize,
    conv: PhaseConvention,
) -> Result<Vec<CheckResult>> {
    let mode = ConfinedMode::new(n, boxed)?;
    let start = init_mode_superposition(boxed, m, &[(n, C64::new(1.0, 0.0))])?;
    let end = propagate_to(&start, t_target, steps)?;
    let lab = lab_frame(&end);
    let error = propagation_error(&lab, &mode, conv)?;
    let drift = (end.norm_sqr() - start.norm_sqr()).abs() / start.norm_sqr();
    let mixing = (1..=(n as u32 + 4))
        .filter(|&k| k != n as u32)
        .map(|k| end.mode_overlap(k).norm())
        .fold(0.0, f64::max);
    let frame = (lab.norm_sqr() - end.norm_sqr()).abs() / end.norm_sqr();
    let params = format!(
        "{};n={n};t={t_target};m={m};steps={steps}",
        describe(&boxed)
    );
    let tolerance = if boxed.omega() == 0.0 {
        tol::FREE_PROPAGATION
    } else {
        tol::PROPAGATION
    };
    Ok(vec![
        CheckResult::at_most(
            "propagation_error",
            format!("{params};convention={}", conv.name()),
            error,
            tolerance,
        ),
        CheckResult::at_most(
            "propagation_norm_drift",
            params.clone(),
            drift,
            tol::NORM_DRIFT,
        ),
        CheckResult::at_most(
            "propagation_mode_mixing",
            params.clone(),
            mixing,
            tol::MODE_MIXING,
        ),
        CheckResult::at_most(
            "propagation_wall",
            params.clone(),
            wall_deviation(&end, &lab),
            0.0,
        ),
        CheckResult::at_most("propagation_frame_norm", params, frame, tol::FRAME_NORM),
    ])
}

/// Equal-weight superposition of modes 1 and 2: the magnitudes of both
/// coefficients must not change during propagation.
pub fn check_superposition(
    boxed: BoxConfig,
    t_target: f64,
    m: usize,
    steps: usize,
) -> Result<CheckResult> {
    let c = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let start = init_mode_superposition(boxed, m, &[(1, c), (2, c)])?;
    let end = propagate_to(&start, t_target, steps)?;
    let drift = (1..=2)
        .map(|k| (end.mode_overlap(k).norm() - start.mode_overlap(k).norm()).abs())
        .fold(0.0, f64::max);
    let params = format!(
        "{};modes=1 2;t={t_target};m={m};steps={steps}",
        describe(&boxed)
    );
    Ok(CheckResult::at_most(
        "superposition_drift",
        params,
        drift,
        tol::MODE_MIXING,
    ))
}

/// Frozen-occupation gas: normalization, `U(t)/U(0) = exp(-4ωt)`, constancy of
/// `T L²`, Gibbs self-consistency and (for `ω > 0`) cooling.
pub fn check_gas(
    boxed: BoxConfig,
    beta0: f64,
    n_max: usize,
    t_list: &[f64],
) -> Result<Vec<CheckResult>> {
    let gas = gibbs_occupations(boxed, beta0, n_max)?;
    let rows = cooling_curve(&gas, t_list)?;
    let omega = boxed.omega();
    let sum = gas.occupations().iter().rev().sum::<f64>();
    let u0 = frozen_mean_energy(&gas, 0.0);
    let ratio = rows
        .iter()
        .map(|r| (r.energy / u0 - (-4.0 * omega * r.t).exp()).abs())
        .fold(0.0, f64::max);
    let a0 = rows[0].adiabatic;
    let adiabatic = rows
        .iter()
        .map(|r| (r.adiabatic - a0).abs() / a0)
        .fold(0.0, f64::max);
    let gibbs = t_list
        .iter()
        .map(|&t| gibbs_deviation(&gas, t))
        .fold(0.0, f64::max);
    let params = format!(
        "{};beta0={beta0};n_max={};t={}",
        describe(&boxed),
        gas.n_max(),
        list(t_list)
    );
    let mut out = vec![
        CheckResult::at_most(
            "gas_normalization",
            params.clone(),
            (sum - 1.0).abs(),
            tol::GAS,
        ),
        CheckResult::at_most("gas_energy_ratio", params.clone(), ratio, tol::GAS),
        CheckResult::at_most("gas_adiabatic", params.clone(), adiabatic, tol::GAS),
        CheckResult::at_most("gas_gibbs", params.clone(), gibbs, tol::GAS),
    ];
    if omega > 0.0 {
        let warming = rows
            .windows(2)
            .filter(|w| {
                w[1].t > w[0].t
                    && (w[1].energy >= w[0].energy || w[1].temperature >= w[0].temperature)
            })
            .count();
        let t_first = effective_temperature(&gas, t_list[0]);
        debug_assert_eq!(t_first, rows[0].temperature);
        out.push(CheckResult::at_most(
            "gas_cooling",
            params,
            warming as f64,
            0.0,
        ));
    }
    Ok(out)
}

type Job<'a> = (
    &'static str,
    Box<dyn Fn() -> Result<Vec<CheckResult>> + Send + Sync + 'a>,
);

/// Runs every check in a fixed order. Checks run concurrently under
/// [`Execution::Parallel`]; a check that errors becomes a failed row.
pub fn run_full_report(config: &VerifyConfig) -> Report {
    let cfg = config;
    let exec = cfg.exec;
    let conv = cfg.convention;
    let boxed = match cfg.box_config() {
        Ok(b) => b,
        Err(e) => return Report::new(vec![CheckResult::errored("config", &e)]),
    };
    let mut jobs: Vec<Job> = Vec::new();
    for &t in &cfg.norm_times {
        jobs.push((
            "orthonormality",
            Box::new(move || {
                Ok(vec![check_orthonormality(
                    exec, boxed, cfg.n_max, t, cfg.grid, conv,
                )?])
            }),
        ));
    }
    jobs.push((
        "energy_law",
        Box::new(move || {
            check_energy_law(
                exec,
                boxed,
                cfg.energy_n_max,
                &cfg.energy_times,
                cfg.grid,
                conv,
            )
        }),
    ));
    jobs.push((
        "energy_dynamics",
        Box::new(move || {
            Ok(vec![check_energy_dynamics(
                exec,
                boxed,
                cfg.energy_n_max,
                &cfg.energy_times,
                cfg.grid,
                cfg.residual_dt,
                conv,
            )?])
        }),
    ));
    jobs.push((
        "free_limit",
        Box::new(move || {
            check_free_limit(
                exec,
                cfg.l0,
                cfg.energy_n_max,
                &cfg.energy_times,
                cfg.grid,
                conv,
            )
        }),
    ));
    jobs.push((
        "symmetries",
        Box::new(move || {
            let modes = modes(boxed, cfg.n_max)?;
            let free = OscillatorParams::new(0.0)?;
            let samples = cfg.symmetry_samples;
            let worst = |f: &dyn Fn(&ConfinedMode) -> f64| modes.iter().map(f).fold(0.0, f64::max);
            let parity = worst(&|md| parity_deviation(md, cfg.parity_time, samples, conv));
            let reversal =
                worst(&|md| time_reversal_deviation(md, cfg.reversal_time, samples, conv));
            let reversal_free = worst(&|md| {
                time_reversal_deviation(&md.with_params(free), cfg.reversal_time, samples, conv)
            });
            let base = format!("{};n_max={};samples={samples}", describe(&boxed), cfg.n_max);
            Ok(vec![
                CheckResult::at_most(
                    "parity",
                    format!("{base};t={}", cfg.parity_time),
                    parity,
                    tol::PARITY,
                ),
                CheckResult::at_most(
                    "time_reversal",
                    format!("{base};t={}", cfg.reversal_time),
                    reversal,
                    tol::TIME_REVERSAL,
                ),
                CheckResult::at_most(
                    "time_reversal_free",
                    format!(
                        "l0={};omega=0;n_max={};samples={samples};t={}",
                        cfg.l0, cfg.n_max, cfg.reversal_time
                    ),
                    reversal_free,
                    tol::TIME_REVERSAL,
                ),
            ])
        }),
    ));
    jobs.push((
        "decay",
        Box::new(move || {
            let (slope, rate) = check_decay(boxed.params(), &cfg.decay_times)?;
            Ok(vec![slope, rate])
        }),
    ));
    jobs.push((
        "residual",
        Box::new(move || {
            check_residuals(
                exec,
                boxed,
                cfg.energy_n_max,
                conv,
                &cfg.residual_times,
                cfg.residual_grid,
                cfg.residual_dt,
            )
        }),
    ));
    jobs.push((
        "propagation",
        Box::new(move || {
            check_propagation(
                boxed,
                1,
                cfg.propagation_time,
                cfg.propagation_grid,
                cfg.propagation_steps,
                conv,
            )
        }),
    ));
    jobs.push((
        "superposition",
        Box::new(move || {
            Ok(vec![check_superposition(
                boxed,
                cfg.propagation_time,
                cfg.propagation_grid,
                cfg.propagation_steps,
            )?])
        }),
    ));
    jobs.push((
        "free_propagation",
        Box::new(move || {
            let free = boxed.with_params(OscillatorParams::new(0.0)?);
            let mut rows = check_propagation(
                free,
                1,
                cfg.propagation_time,
                cfg.propagation_grid,
                cfg.propagation_steps,
                conv,
            )?;
            rows.truncate(1);
            rows[0].name = "free_propagation_error".into();
            Ok(rows)
        }),
    ));
    jobs.push((
        "gas",
        Box::new(move || check_gas(boxed, cfg.beta0, cfg.gas_n_max, &cfg.gas_times)),
    ));

    let results = exec::map_slice(exec, &jobs, |(name, job)| match job() {
        Ok(rows) => rows,
        Err(e) => vec![CheckResult::errored(name, &e)],
    });
    Report::new(results.into_iter().flatten().collect())
}
