//! Numerical propagation in the comoving frame.
//!
//! With `y = x exp(-2ωt)` and `Ψ = exp(iωx²/2 - ωt) Φ`, the lab-frame equation
//! becomes `iΦ_t = -exp(-4ωt) Φ_yy` on the fixed interval `[0, l0]`. Trading
//! `t` for `τ(t)` removes the time-dependent coefficient, so the state is
//! advanced with a constant-coefficient Crank–Nicolson (Cayley) step of the
//! free equation `iΦ_τ = -Φ_yy` with Dirichlet walls.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::analytic::{scale_factor, tau_of, BoxConfig, ConfinedMode};
use crate::error::{Error, Result};
use crate::quadrature::{Grid1D, SampledField};

/// Default spatial resolution of the comoving grid.
pub const DEFAULT_INTERVALS: usize = 2048;
/// Default number of Crank–Nicolson steps per propagation.
pub const DEFAULT_STEPS: usize = 4096;

/// `Φ(y)` on `[0, l0]` at lab time `t_lab`. Both end samples are always zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ComovingField {
    grid: Grid1D,
    values: Vec<C64>,
    t_lab: f64,
    boxed: BoxConfig,
}

impl ComovingField {
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn t_lab(&self) -> f64 {
        self.t_lab
    }

    pub fn box_config(&self) -> BoxConfig {
        self.boxed
    }

    /// Discrete `∫|Φ|² dy` (trapezoid; the ends vanish).
    pub fn norm_sqr(&self) -> f64 {
        self.grid.spacing() * self.values.iter().map(C64::norm_sqr).sum::<f64>()
    }

    /// Overlap `⟨χ_n|Φ⟩` with the unit-normalized sine `χ_n = sqrt(2/l0) sin(nπy/l0)`.
    /// The sampled sines are exact eigenvectors of the three-point Laplacian,
    /// so these overlaps only change by a phase under [`cn_step`].
    pub fn mode_overlap(&self, n: u32) -> C64 {
        let l0 = self.boxed.l0();
        let k = n as f64 * PI / l0;
        let norm = (2.0 / l0).sqrt();
        let sum: C64 = self
            .values
            .iter()
            .enumerate()
            .map(|(j, v)| v * (norm * (k * self.grid.point(j)).sin()))
            .sum();
        sum * self.grid.spacing()
    }
}

/// `Ψ(x, t)` on the image of the comoving grid, `x_j = exp(2ωt) y_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabField {
    field: SampledField,
    t_lab: f64,
}

impl LabField {
    pub fn grid(&self) -> &Grid1D {
        self.field.grid()
    }

    pub fn values(&self) -> &[C64] {
        self.field.values()
    }

    pub fn t_lab(&self) -> f64 {
        self.t_lab
    }

    pub fn as_sampled(&self) -> &SampledField {
        &self.field
    }

    /// Discrete `∫|Ψ|² dx` with the same trapezoid weights as [`ComovingField::norm_sqr`].
    pub fn norm_sqr(&self) -> f64 {
        self.grid().spacing() * self.values().iter().map(C64::norm_sqr).sum::<f64>()
    }
}

/// Builds `Φ(y, 0) = Σ c_n sqrt(2/l0) exp(iε_n/(4ω)) sin(nπy/l0)`. The constant
/// phases make a single-mode start coincide with the corrected `Ψ1`; at
/// `ω = 0` they are dropped, matching the evaluator's free limit.
pub fn init_mode_superposition(
    boxed: BoxConfig,
    m: usize,
    coeffs: &[(i64, C64)],
) -> Result<ComovingField> {
    if coeffs.is_empty() {
        return Err(Error::InvalidSuperposition("no modes given".into()));
    }
    if coeffs.iter().all(|(_, c)| *c == C64::new(0.0, 0.0)) {
        return Err(Error::InvalidSuperposition(
            "all coefficients are zero".into(),
        ));
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut modes = Vec::with_capacity(coeffs.len());
    for &(n, c) in coeffs {
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::NonFinite("superposition coefficient"));
        }
        let mode = ConfinedMode::new(n, boxed)?;
        if !seen.insert(n) {
            return Err(Error::InvalidSuperposition(format!(
                "mode {n} listed twice"
            )));
        }
        let omega = boxed.omega();
        let phase = if omega == 0.0 {
            0.0
        } else {
            mode.epsilon() / (4.0 * omega)
        };
        modes.push((mode, c * C64::from_polar(mode.norm(), phase)));
    }
    let grid = Grid1D::new(0.0, boxed.l0(), m)?;
    let mut values: Vec<C64> = (0..grid.points())
        .map(|j| {
            let y = grid.point(j);
            modes
                .iter()
                .map(|(mode, a)| a * (mode.wavenumber() * y).sin())
                .sum()
        })
        .collect();
    let last = values.len() - 1;
    values[0] = C64::new(0.0, 0.0);
    values[last] = C64::new(0.0, 0.0);
    Ok(ComovingField {
        grid,
        values,
        t_lab: 0.0,
        boxed,
    })
}

/// Factored Cayley step `(I - i dτ/2 D) Φ⁺ = (I + i dτ/2 D) Φ` for a fixed
/// `dτ` and grid, where `D` is the three-point Laplacian with Dirichlet ends.
///
/// The step is solved for the increment: `Φ⁺ = Φ + δ` with
/// `(I - i dτ/2 D) δ = i dτ D Φ`, so rounding scales with the update rather
/// than with `dτ/h²` times the field. The matrix is constant and factored once.
#[derive(Debug, Clone)]
pub struct CnStepper {
    /// `dτ / h²`.
    ratio: f64,
    /// Off-diagonal `-i dτ / (2h²)` of the implicit matrix.
    off: C64,
    /// Pivots after forward elimination.
    pivots: Vec<C64>,
    /// Elimination multipliers `off / pivots[k - 1]`.
    multipliers: Vec<C64>,
}

impl CnStepper {
    pub fn new(grid: &Grid1D, dtau: f64) -> Self {
        let h = grid.spacing();
        let ratio = dtau / (h * h);
        let off = C64::new(0.0, -0.5 * ratio);
        let diag = C64::new(1.0, ratio);
        let interior = grid.intervals() - 1;
        let mut pivots = Vec::with_capacity(interior);
        let mut multipliers = Vec::with_capacity(interior);
        pivots.push(diag);
        multipliers.push(C64::new(0.0, 0.0));
        for k in 1..interior {
            let w = off / pivots[k - 1];
            multipliers.push(w);
            pivots.push(diag - w * off);
        }
        Self {
            ratio,
            off,
            pivots,
            multipliers,
        }
    }

    /// Advances `values` (including the two zero end samples) in place.
    pub fn step(&self, values: &mut [C64], scratch: &mut Vec<C64>) {
        let n = values.len();
        let interior = n - 2;
        debug_assert_eq!(interior, self.pivots.len());
        let gain = C64::new(0.0, self.ratio);
        scratch.clear();
        scratch.extend(
            (1..n - 1).map(|j| ((values[j - 1] - values[j]) + (values[j + 1] - values[j])) * gain),
        );
        for k in 1..interior {
            let prev = scratch[k - 1];
            scratch[k] -= self.multipliers[k] * prev;
        }
        scratch[interior - 1] /= self.pivots[interior - 1];
        for k in (0..interior - 1).rev() {
            let next = scratch[k + 1];
            scratch[k] = (scratch[k] - self.off * next) / self.pivots[k];
        }
        for (v, d) in values[1..n - 1].iter_mut().zip(scratch.iter()) {
            *v += d;
        }
        values[0] = C64::new(0.0, 0.0);
        values[n - 1] = C64::new(0.0, 0.0);
    }
}

/// One Crank–Nicolson step of size `dtau` in reparameterized time. The lab
/// time is left unchanged; use [`propagate_to`] to advance a schedule.
pub fn cn_step(field: &ComovingField, dtau: f64) -> Result<ComovingField> {
    if !(dtau.is_finite() && dtau > 0.0) {
        return Err(Error::NonFinite("dtau"));
    }
    let stepper = CnStepper::new(&field.grid, dtau);
    let mut out = field.clone();
    stepper.step(&mut out.values, &mut Vec::with_capacity(field.values.len()));
    Ok(out)
}

/// Advances to `t_target` with `steps` uniform increments of
/// `dτ = (τ(t_target) - τ(t_lab)) / steps`.
pub fn propagate_to(field: &ComovingField, t_target: f64, steps: usize) -> Result<ComovingField> {
    if !t_target.is_finite() {
        return Err(Error::NonFinite("t_target"));
    }
    if t_target <= field.t_lab {
        return Err(Error::InvalidTargetTime {
            current: field.t_lab,
            target: t_target,
        });
    }
    if steps == 0 {
        return Err(Error::InvalidSteps(steps));
    }
    let params = field.boxed.params();
    let span = tau_of(params, t_target) - tau_of(params, field.t_lab);
    let mut out = field.clone();
    out.t_lab = t_target;
    if span <= 0.0 {
        // target so close that τ rounds to the same value
        return Ok(out);
    }
    let stepper = CnStepper::new(&field.grid, span / steps as f64);
    let mut scratch = Vec::with_capacity(field.values.len());
    for _ in 0..steps {
        stepper.step(&mut out.values, &mut scratch);
    }
    Ok(out)
}

/// Maps the comoving state back to the lab frame:
/// `Ψ(x_j, t) = exp(iω x_j²/2 - ωt) Φ_j` with `x_j = exp(2ωt) y_j`.
pub fn lab_frame(field: &ComovingField) -> LabField {
    let params = field.boxed.params();
    let omega = params.omega();
    let t = field.t_lab;
    let grid = field
        .grid
        .scaled(scale_factor(params, t))
        .expect("a positive rescaling of a valid grid is valid");
    let damp = (-omega * t).exp();
    let values = field
        .values
        .iter()
        .enumerate()
        .map(|(j, phi)| {
            let x = grid.point(j);
            phi * C64::from_polar(damp, omega * x * x / 2.0)
        })
        .collect();
    let field = SampledField::new(grid, values).expect("lab samples share the comoving length");
    LabField { field, t_lab: t }
}
