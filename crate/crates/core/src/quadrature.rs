//! Sampled complex fields on uniform grids: composite Simpson integration,
//! inner products, fourth-order finite-difference Hamiltonian, energy
//! expectations and the Schrödinger residual used to arbitrate phase signs.

use num_complex::Complex64 as C64;

use crate::analytic::{box_length, psi1_eval, ConfinedMode, OscillatorParams, PhaseConvention};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};

/// Uniform grid of `m` intervals (`m + 1` points) on `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    m: usize,
}

impl Grid1D {
    pub const MIN_INTERVALS: usize = 8;

    /// `m` must be even and at least 8 so composite Simpson applies.
    pub fn new(x_min: f64, x_max: f64, m: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) {
            return Err(Error::InvalidGrid("non-finite endpoint".into()));
        }
        if x_max <= x_min {
            return Err(Error::InvalidGrid(format!(
                "empty interval [{x_min}, {x_max}]"
            )));
        }
        if m < Self::MIN_INTERVALS {
            return Err(Error::InvalidGrid(format!(
                "{m} intervals, need at least {}",
                Self::MIN_INTERVALS
            )));
        }
        if !m.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "{m} intervals, Simpson needs an even count"
            )));
        }
        Ok(Self { x_min, x_max, m })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn intervals(&self) -> usize {
        self.m
    }

    pub fn points(&self) -> usize {
        self.m + 1
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / self.m as f64
    }

    /// Point `j`; the last point is `x_max` exactly.
    pub fn point(&self, j: usize) -> f64 {
        if j == self.m {
            return self.x_max;
        }
        self.x_min + (self.x_max - self.x_min) * (j as f64 / self.m as f64)
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.points()).map(|j| self.point(j)).collect()
    }

    /// The grid with both endpoints multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.x_min * factor, self.x_max * factor, self.m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    grid: Grid1D,
    values: Vec<C64>,
}

impl SampledField {
    pub fn new(grid: Grid1D, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.points() {
            return Err(Error::InvalidGrid(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.points()
            )));
        }
        if values
            .iter()
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::NonFinite("field sample"));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self {
            grid,
            values: vec![C64::new(0.0, 0.0); grid.points()],
        }
    }

    /// Samples `f` at every grid point.
    pub fn sample<F>(grid: Grid1D, f: F) -> Result<Self>
    where
        F: Fn(f64) -> C64 + Sync + Send,
    {
        Self::sample_with(Execution::default(), grid, f)
    }

    pub fn sample_with<F>(exec: Execution, grid: Grid1D, f: F) -> Result<Self>
    where
        F: Fn(f64) -> C64 + Sync + Send,
    {
        let values = exec::map_indices(exec, grid.points(), |j| f(grid.point(j)));
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    /// `α self + β other` on a shared grid.
    pub fn combine(&self, alpha: C64, other: &SampledField, beta: C64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::IncompatibleGrids);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        Ok(Self {
            grid: self.grid,
            values,
        })
    }
}

/// Composite Simpson weights applied to a raw sample sequence.
pub(crate) fn simpson_sum(values: &[C64], h: f64) -> C64 {
    let m = values.len() - 1;
    debug_assert!(m >= 2 && m.is_multiple_of(2));
    let mut odd = C64::new(0.0, 0.0);
    let mut even = C64::new(0.0, 0.0);
    for (j, v) in values.iter().enumerate().take(m).skip(1) {
        if j % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    (values[0] + values[m] + odd * 4.0 + even * 2.0) * (h / 3.0)
}

/// Composite Simpson estimate of `∫ f dx` over the field's grid.
pub fn simpson_integrate(field: &SampledField) -> C64 {
    simpson_sum(&field.values, field.grid.spacing())
}

/// `⟨f|g⟩ = ∫ conj(f) g dx`.
pub fn inner_product(f: &SampledField, g: &SampledField) -> Result<C64> {
    if f.grid != g.grid {
        return Err(Error::IncompatibleGrids);
    }
    let integrand: Vec<C64> = f
        .values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| a.conj() * b)
        .collect();
    Ok(simpson_sum(&integrand, f.grid.spacing()))
}

/// Fourth-order second derivative at every sample. Interior points use the
/// centred five-point stencil; the two outermost points on each side use the
/// six-point one-sided stencils of the same order.
pub(crate) fn second_derivative(values: &[C64], h: f64) -> Vec<C64> {
    let n = values.len();
    debug_assert!(n >= 6);
    let inv = 1.0 / (12.0 * h * h);
    let f = values;
    let mut out = vec![C64::new(0.0, 0.0); n];
    let edge0 = |g: &dyn Fn(usize) -> C64| {
        (g(0) * 45.0 - g(1) * 154.0 + g(2) * 214.0 - g(3) * 156.0 + g(4) * 61.0 - g(5) * 10.0) * inv
    };
    let edge1 = |g: &dyn Fn(usize) -> C64| {
        (g(0) * 10.0 - g(1) * 15.0 - g(2) * 4.0 + g(3) * 14.0 - g(4) * 6.0 + g(5)) * inv
    };
    out[0] = edge0(&|k| f[k]);
    out[1] = edge1(&|k| f[k]);
    out[n - 1] = edge0(&|k| f[n - 1 - k]);
    out[n - 2] = edge1(&|k| f[n - 1 - k]);
    for i in 2..n - 2 {
        out[i] = (-f[i - 2] + f[i - 1] * 16.0 - f[i] * 30.0 + f[i + 1] * 16.0 - f[i + 2]) * inv;
    }
    out
}

/// Samples of `-f'' - ω² x² f`.
pub fn apply_hamiltonian(field: &SampledField, params: OscillatorParams) -> Result<SampledField> {
    if field.grid.intervals() < 16 {
        return Err(Error::InvalidGrid(format!(
            "{} intervals, the Hamiltonian stencils need at least 16",
            field.grid.intervals()
        )));
    }
    let w2 = params.omega() * params.omega();
    let d2 = second_derivative(&field.values, field.grid.spacing());
    let values = d2
        .iter()
        .zip(&field.values)
        .enumerate()
        .map(|(j, (d, f))| {
            let x = field.grid.point(j);
            -d - f * (w2 * x * x)
        })
        .collect();
    Ok(SampledField {
        grid: field.grid,
        values,
    })
}

/// Grid covering the box `[0, L(t)]` with `m` intervals.
pub fn box_grid(mode: &ConfinedMode, t: f64, m: usize) -> Result<Grid1D> {
    Grid1D::new(0.0, box_length(&mode.box_config(), t), m)
}

/// `Ψ1` sampled on the box at time `t`.
pub fn sample_confined(
    exec: Execution,
    mode: &ConfinedMode,
    grid: Grid1D,
    t: f64,
    conv: PhaseConvention,
) -> Result<SampledField> {
    SampledField::sample_with(exec, grid, |x| psi1_eval(mode, x, t, conv))
}

/// `⟨Ψ1|H|Ψ1⟩` over `[0, L(t)]` by finite differences and Simpson.
pub fn expectation_energy(
    mode: &ConfinedMode,
    t: f64,
    m: usize,
    conv: PhaseConvention,
) -> Result<C64> {
    expectation_energy_with(Execution::default(), mode, t, m, conv)
}

pub fn expectation_energy_with(
    exec: Execution,
    mode: &ConfinedMode,
    t: f64,
    m: usize,
    conv: PhaseConvention,
) -> Result<C64> {
    let psi = sample_confined(exec, mode, box_grid(mode, t, m)?, t, conv)?;
    let h_psi = apply_hamiltonian(&psi, mode.params())?;
    inner_product(&psi, &h_psi)
}

/// Max over interior points of `|i Ψ_t + Ψ_xx + ω² x² Ψ|` with a central
/// difference in time (step `dt`) and the five-point stencil in space. The two
/// outermost points on each side are excluded.
pub fn schrodinger_residual<F>(
    evaluator: F,
    region: &Grid1D,
    params: OscillatorParams,
    t: f64,
    dt: f64,
) -> Result<f64>
where
    F: Fn(f64, f64) -> C64 + Sync + Send,
{
    schrodinger_residual_with(Execution::default(), evaluator, region, params, t, dt)
}

pub fn schrodinger_residual_with<F>(
    exec: Execution,
    evaluator: F,
    region: &Grid1D,
    params: OscillatorParams,
    t: f64,
    dt: f64,
) -> Result<f64>
where
    F: Fn(f64, f64) -> C64 + Sync + Send,
{
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "time step {dt} must be positive"
        )));
    }
    let h = region.spacing();
    let inv = 1.0 / (12.0 * h * h);
    let w2 = params.omega() * params.omega();
    let m = region.intervals();
    Ok(exec::max_over(exec, m - 3, |k| {
        let i = k + 2;
        let x = region.point(i);
        let at = |j: usize| evaluator(region.point(j), t);
        let psi = at(i);
        let psi_t = (evaluator(x, t + dt) - evaluator(x, t - dt)) / (2.0 * dt);
        let psi_xx =
            (-at(i - 2) + at(i - 1) * 16.0 - psi * 30.0 + at(i + 1) * 16.0 - at(i + 2)) * inv;
        (C64::i() * psi_t + psi_xx + psi * (w2 * x * x)).norm()
    }))
}
