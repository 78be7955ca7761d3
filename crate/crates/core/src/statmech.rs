//! Ideal Maxwell–Boltzmann gas in the expanding box.
//!
//! Occupations are fixed by a Gibbs distribution at `t = 0` and then frozen,
//! since distinct confined modes never mix. Every level scales by the same
//! factor `exp(-4ωt)`, so the frozen populations stay Gibbs at the
//! temperature `T(t) = T0 exp(-4ωt)` and `T L²` is conserved.

use crate::analytic::{box_length, energy_level, BoxConfig, ConfinedMode};
use crate::error::{Error, Result};

/// Populations beyond this many levels are never computed.
pub const MAX_LEVELS: usize = 1_000_000;
/// Required ratio `p_{n_max} / p_1` for a cutoff to be accepted.
pub const TAIL_BOUND: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct GasState {
    boxed: BoxConfig,
    beta0: f64,
    occupations: Vec<f64>,
}

impl GasState {
    pub fn box_config(&self) -> BoxConfig {
        self.boxed
    }

    pub fn beta0(&self) -> f64 {
        self.beta0
    }

    pub fn n_max(&self) -> usize {
        self.occupations.len()
    }

    /// `p_n` for `n = 1..=n_max`, stored at index `n - 1`.
    pub fn occupations(&self) -> &[f64] {
        &self.occupations
    }

    fn mode(&self, n: usize) -> ConfinedMode {
        ConfinedMode::new(n as i64, self.boxed).expect("level indices start at 1")
    }
}

/// Gibbs populations `p_n ∝ exp(-β0 E_n(0))`. The cutoff is doubled until the
/// last level carries less than [`TAIL_BOUND`] of the ground population.
pub fn gibbs_occupations(boxed: BoxConfig, beta0: f64, n_max: usize) -> Result<GasState> {
    if !(beta0.is_finite() && beta0 > 0.0) {
        return Err(Error::InvalidTemperature(beta0));
    }
    if n_max < 2 {
        return Err(Error::InvalidCutoff(n_max));
    }
    let ground = ConfinedMode::new(1, boxed)?.epsilon();
    let mut cutoff = n_max.min(MAX_LEVELS);
    loop {
        let level = |n: usize| ground * (n as f64) * (n as f64);
        // weights relative to the ground level, so p_1's weight is exactly 1
        let weights: Vec<f64> = (1..=cutoff)
            .map(|n| (-beta0 * (level(n) - ground)).exp())
            .collect();
        if weights[cutoff - 1] < TAIL_BOUND {
            // sum smallest first
            let z: f64 = weights.iter().rev().sum();
            let occupations = weights.iter().map(|w| w / z).collect();
            return Ok(GasState {
                boxed,
                beta0,
                occupations,
            });
        }
        if cutoff >= MAX_LEVELS {
            return Err(Error::CutoffInsufficient { cap: MAX_LEVELS });
        }
        cutoff = (cutoff * 2).min(MAX_LEVELS);
    }
}

/// `U(t) = Σ p_n E_n(t)` with populations held fixed.
pub fn frozen_mean_energy(gas: &GasState, t: f64) -> f64 {
    gas.occupations
        .iter()
        .enumerate()
        .rev()
        .map(|(i, p)| p * energy_level(&gas.mode(i + 1), t))
        .sum()
}

/// `T(t) = exp(-4ωt) / β0`, the temperature at which the frozen populations
/// are Gibbs for the instantaneous levels.
pub fn effective_temperature(gas: &GasState, t: f64) -> f64 {
    (-4.0 * gas.boxed.omega() * t).exp() / gas.beta0
}

/// Largest `|p_n - exp(-β(t) E_n(t)) / Z(t)|` over the retained levels,
/// with `β(t) = 1 / T(t)`.
pub fn gibbs_deviation(gas: &GasState, t: f64) -> f64 {
    let beta = 1.0 / effective_temperature(gas, t);
    let ground = energy_level(&gas.mode(1), t);
    let weights: Vec<f64> = (1..=gas.n_max())
        .map(|n| (-beta * (energy_level(&gas.mode(n), t) - ground)).exp())
        .collect();
    let z: f64 = weights.iter().rev().sum();
    weights
        .iter()
        .zip(&gas.occupations)
        .map(|(w, p)| (w / z - p).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoolingRow {
    pub t: f64,
    pub length: f64,
    pub energy: f64,
    pub temperature: f64,
    /// `T L²`, constant along the curve.
    pub adiabatic: f64,
}

/// One row per time of a non-empty ascending schedule.
pub fn cooling_curve(gas: &GasState, t_grid: &[f64]) -> Result<Vec<CoolingRow>> {
    if t_grid.is_empty() {
        return Err(Error::InvalidSchedule("no times given".into()));
    }
    if let Some(bad) = t_grid.iter().find(|t| !t.is_finite()) {
        return Err(Error::InvalidSchedule(format!("non-finite time {bad}")));
    }
    if let Some(w) = t_grid.windows(2).find(|w| w[1] < w[0]) {
        return Err(Error::InvalidSchedule(format!(
            "{} listed after {}",
            w[1], w[0]
        )));
    }
    Ok(t_grid
        .iter()
        .map(|&t| {
            let length = box_length(&gas.boxed, t);
            let temperature = effective_temperature(gas, t);
            CoolingRow {
                t,
                length,
                energy: frozen_mean_energy(gas, t),
                temperature,
                adiabatic: temperature * length * length,
            }
        })
        .collect())
}
