//! Closed-form solutions of the inverted oscillator `H = -d²/dx² - ω² x²`
//! in units where `ħ = ħ²/2m = 1`.
//!
//! The confined family lives in a box whose right wall follows the classical
//! trajectory `q(t) = exp(2ωt)`; the scattering family is the gauge-dressed
//! plane wave. Both evaluators are total on the real line, masking to the box
//! is left to the caller.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    omega: f64,
}

impl OscillatorParams {
    /// Any finite frequency is accepted, including zero (free particle) and
    /// negative values (the time-reversed system).
    pub fn new(omega: f64) -> Result<Self> {
        if !omega.is_finite() {
            return Err(Error::NonFinite("omega"));
        }
        Ok(Self { omega })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// The same oscillator with `ω -> -ω`.
    pub fn reversed(&self) -> Self {
        Self { omega: -self.omega }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxConfig {
    l0: f64,
    params: OscillatorParams,
}

impl BoxConfig {
    pub fn new(l0: f64, params: OscillatorParams) -> Result<Self> {
        if !(l0.is_finite() && l0 > 0.0) {
            return Err(Error::InvalidBox(l0));
        }
        Ok(Self { l0, params })
    }

    pub fn l0(&self) -> f64 {
        self.l0
    }

    pub fn params(&self) -> OscillatorParams {
        self.params
    }

    pub fn omega(&self) -> f64 {
        self.params.omega
    }

    pub fn with_params(&self, params: OscillatorParams) -> Self {
        Self {
            l0: self.l0,
            params,
        }
    }
}

/// Sign of the `(ε/4ω) exp(-4ωt)` phase in the confined solution.
///
/// `Corrected` carries `+i`, which solves the Schrödinger equation exactly.
/// `AsPrinted` carries `-i` and leaves a residual of `2ε exp(-4ωt) Ψ`; it is
/// kept so the discrepancy can be measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseConvention {
    #[default]
    Corrected,
    AsPrinted,
}

impl PhaseConvention {
    fn sign(self) -> f64 {
        match self {
            PhaseConvention::Corrected => 1.0,
            PhaseConvention::AsPrinted => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PhaseConvention::Corrected => "corrected",
            PhaseConvention::AsPrinted => "as-printed",
        }
    }
}

/// Box eigenmode `n` of the expanding well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfinedMode {
    n: u32,
    boxed: BoxConfig,
    epsilon: f64,
    norm: f64,
}

impl ConfinedMode {
    pub fn new(n: i64, boxed: BoxConfig) -> Result<Self> {
        if n < 1 || n > u32::MAX as i64 {
            return Err(Error::InvalidQuantumNumber(n));
        }
        let root = n as f64 * PI / boxed.l0;
        Ok(Self {
            n: n as u32,
            boxed,
            epsilon: root * root,
            norm: (2.0 / boxed.l0).sqrt(),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn box_config(&self) -> BoxConfig {
        self.boxed
    }

    pub fn params(&self) -> OscillatorParams {
        self.boxed.params
    }

    /// Separation constant `ε = (nπ/l0)²`.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `√ε = nπ/l0`, computed directly rather than through a square root.
    pub fn wavenumber(&self) -> f64 {
        self.n as f64 * PI / self.boxed.l0
    }

    /// Normalization `N = sqrt(2/l0)`; time independent.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Same mode in a box driven by a different frequency.
    pub fn with_params(&self, params: OscillatorParams) -> Self {
        Self {
            boxed: self.boxed.with_params(params),
            ..*self
        }
    }
}

/// Plane-wave family with wavenumber `k`; its separation constant is `-k²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringMode {
    k: f64,
    params: OscillatorParams,
}

impl ScatteringMode {
    pub fn new(k: f64, params: OscillatorParams) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::NonFinite("k"));
        }
        Ok(Self { k, params })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn params(&self) -> OscillatorParams {
        self.params
    }

    pub fn epsilon(&self) -> f64 {
        -self.k * self.k
    }
}

/// Classical trajectory `q(t) = exp(2ωt)`.
pub fn scale_factor(params: OscillatorParams, t: f64) -> f64 {
    (2.0 * params.omega * t).exp()
}

/// Position of the moving wall, `l0 exp(2ωt)`.
pub fn box_length(boxed: &BoxConfig, t: f64) -> f64 {
    boxed.l0 * scale_factor(boxed.params, t)
}

/// Confined solution `Ψ1(x, t)`.
///
/// At `ω = 0` the `ε/(4ω)` phase is a divergent constant; that global phase is
/// dropped and the stationary box state `N exp(-iεt) sin(√ε x)` is returned.
pub fn psi1_eval(mode: &ConfinedMode, x: f64, t: f64, conv: PhaseConvention) -> C64 {
    let omega = mode.params().omega;
    if omega == 0.0 {
        let amp = mode.norm * (mode.wavenumber() * x).sin();
        return C64::from_polar(amp, -mode.epsilon * t);
    }
    let q_inv = (-2.0 * omega * t).exp();
    let amp = mode.norm * (-omega * t).exp() * (q_inv * mode.wavenumber() * x).sin();
    let phase = omega * x * x / 2.0
        + conv.sign() * (mode.epsilon / (4.0 * omega)) * (-4.0 * omega * t).exp();
    C64::from_polar(amp, phase)
}

/// Scattering solution `Ψ2(x, t)`; its modulus is `exp(-ωt)` everywhere.
pub fn psi2_eval(mode: &ScatteringMode, x: f64, t: f64) -> Result<C64> {
    let omega = mode.params.omega;
    if omega == 0.0 {
        return Err(Error::UndefinedPhase);
    }
    let k = mode.k;
    let phase = omega * x * x / 2.0
        + k * (-2.0 * omega * t).exp() * x
        + (k * k / (4.0 * omega)) * (-4.0 * omega * t).exp();
    Ok(C64::from_polar((-omega * t).exp(), phase))
}

/// `E_n(t) = exp(-4ωt) (nπ/l0)²`.
pub fn energy_level(mode: &ConfinedMode, t: f64) -> f64 {
    mode.epsilon * (-4.0 * mode.params().omega * t).exp()
}

/// `|Ψ2|² = exp(-2ωt)`.
pub fn decay_intensity(params: OscillatorParams, t: f64) -> f64 {
    (-2.0 * params.omega * t).exp()
}

/// `Γ` in `|Ψ2|² = exp(-Γt/2)`.
pub fn decay_rate(params: OscillatorParams) -> f64 {
    4.0 * params.omega
}

/// Reparameterized time `τ(t) = (1 - exp(-4ωt)) / (4ω)`, with `dτ = exp(-4ωt) dt`.
///
/// Evaluated through `expm1` so it tends smoothly to `t` as `ω -> 0`.
pub fn tau_of(params: OscillatorParams, t: f64) -> f64 {
    let rate = 4.0 * params.omega;
    if rate == 0.0 {
        return t;
    }
    -(-rate * t).exp_m1() / rate
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn params(omega: f64) -> OscillatorParams {
        OscillatorParams::new(omega).unwrap()
    }

    fn mode(n: i64, l0: f64, omega: f64) -> ConfinedMode {
        ConfinedMode::new(n, BoxConfig::new(l0, params(omega)).unwrap()).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn scale_factor_values() {
        assert_eq!(scale_factor(params(3.7), 0.0), 1.0);
        assert!(close(scale_factor(params(0.5), 1.0), E, 1e-15));
        assert!(close(scale_factor(params(0.25), 2.0), E, 1e-15));
    }

    #[test]
    fn box_length_values() {
        let b = BoxConfig::new(PI, params(0.5)).unwrap();
        assert!(close(box_length(&b, 1.0), 8.539734222673567, 1e-14));
        assert_eq!(box_length(&b, 0.0), PI);
        let fixed = BoxConfig::new(2.0, params(0.0)).unwrap();
        assert_eq!(box_length(&fixed, 17.0), 2.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            OscillatorParams::new(f64::NAN),
            Err(Error::NonFinite(_))
        ));
        assert!(matches!(
            BoxConfig::new(0.0, params(1.0)),
            Err(Error::InvalidBox(_))
        ));
        assert!(matches!(
            BoxConfig::new(-1.0, params(1.0)),
            Err(Error::InvalidBox(_))
        ));
        let b = BoxConfig::new(PI, params(0.5)).unwrap();
        assert_eq!(ConfinedMode::new(0, b), Err(Error::InvalidQuantumNumber(0)));
        assert_eq!(
            ConfinedMode::new(-2, b),
            Err(Error::InvalidQuantumNumber(-2))
        );
        assert!(ScatteringMode::new(f64::INFINITY, params(0.5)).is_err());
    }

    #[test]
    fn confined_mode_constants() {
        let m1 = mode(1, PI, 0.5);
        assert!(close(m1.epsilon(), 1.0, 1e-15));
        assert!(close(m1.norm(), 0.7978845608028654, 1e-15));
        assert!(close(mode(3, PI, 0.5).epsilon(), 9.0, 1e-14));
    }

    #[test]
    fn psi1_node_at_origin() {
        for t in [-1.0, 0.0, 0.3, 2.0] {
            for omega in [0.0, 0.5, -0.2] {
                let z = psi1_eval(&mode(2, 1.3, omega), 0.0, t, PhaseConvention::Corrected);
                assert_eq!(z.norm(), 0.0);
            }
        }
    }

    #[test]
    fn psi1_reference_values() {
        // 40-digit mpmath evaluations.
        let m = mode(1, PI, 0.5);
        let c = psi1_eval(&m, PI / 2.0, 0.0, PhaseConvention::Corrected);
        assert!(close(c.re, 0.3498846268358478, 1e-14));
        assert!(close(c.im, 0.7170777644520299, 1e-14));
        let p = psi1_eval(&m, PI / 2.0, 0.0, PhaseConvention::AsPrinted);
        assert!(close(p.re, 0.7924436033045166, 1e-14));
        assert!(close(p.im, 0.0930210081074982, 1e-14));
    }

    #[test]
    fn psi1_free_limit_is_box_state() {
        let m = mode(2, PI, 0.0);
        let t = 0.7;
        let z = psi1_eval(&m, 0.4, t, PhaseConvention::Corrected);
        let expect = C64::from_polar((2.0 / PI).sqrt() * (0.8_f64).sin(), -4.0 * t);
        assert!((z - expect).norm() < 1e-15);
    }

    #[test]
    fn psi2_reference_values() {
        let z = psi2_eval(&ScatteringMode::new(1.0, params(0.5)).unwrap(), 0.0, 0.0).unwrap();
        assert!(close(z.re, 0.8775825618903728, 1e-15));
        assert!(close(z.im, 0.479425538604203, 1e-15));
        let z = psi2_eval(&ScatteringMode::new(0.0, params(0.5)).unwrap(), 2.0, 0.0).unwrap();
        assert!(close(z.re, 0.5403023058681398, 1e-15));
        assert!(close(z.im, 0.8414709848078965, 1e-15));
        let free = ScatteringMode::new(1.0, params(0.0)).unwrap();
        assert_eq!(psi2_eval(&free, 1.0, 1.0), Err(Error::UndefinedPhase));
        assert_eq!(free.epsilon(), -1.0);
    }

    #[test]
    fn energy_values() {
        assert!(close(energy_level(&mode(1, PI, 0.9), 0.0), 1.0, 1e-15));
        assert!(close(
            energy_level(&mode(2, PI, 0.25), 1.0),
            1.4715177646857693,
            1e-14
        ));
        assert!(close(energy_level(&mode(3, PI, 0.0), 123.0), 9.0, 1e-14));
    }

    #[test]
    fn decay_values() {
        assert_eq!(decay_intensity(params(0.5), 0.0), 1.0);
        assert!(close(
            decay_intensity(params(0.5), 1.0),
            0.36787944117144233,
            1e-16
        ));
        assert_eq!(decay_rate(params(0.5)), 2.0);
    }

    #[test]
    fn tau_values() {
        assert_eq!(tau_of(params(0.5), 0.0), 0.0);
        assert_eq!(tau_of(params(0.0), 3.0), 3.0);
        assert!(close(tau_of(params(0.5), 20.0), 0.5, 1e-12));
        // continuity through the removable singularity
        assert!(close(tau_of(params(1e-12), 3.0), 3.0, 1e-10));
    }
}
