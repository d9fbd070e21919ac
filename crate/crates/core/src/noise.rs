//! Closed-form detection, visibility and Bell-parameter model for a
//! temporally multiplexed spin-wave memory read out through one
//! collection channel.
//!
//! Every quantity here is a first-order expansion in the per-pulse
//! excitation probability `chi`. The multimode noise comes from the
//! `m - 1` unwanted spin waves that the read pulse converts into
//! non-directional anti-Stokes emission; only the fraction collected by
//! the read channel (`beta_ratio`) reaches the detectors.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximal CHSH value for a maximally entangled pair.
pub const S_MAX: f64 = 2.0 * SQRT_2;

/// Above this excitation probability the first-order model is outside its
/// validity regime.
pub const CHI_VALIDITY_LIMIT: f64 = 0.1;

/// Physical parameters of one photon-collection channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelParams {
    /// Pair-creation probability per write pulse.
    pub chi: f64,
    /// Intrinsic retrieval efficiency of one spin-wave mode.
    pub gamma: f64,
    /// Stokes detection efficiency.
    pub eta_w: f64,
    /// Anti-Stokes detection efficiency.
    pub eta_r: f64,
    /// Branching ratio of the read transition.
    pub xi_se: f64,
    /// Read-to-write collection solid-angle ratio `beta_r / beta_w`.
    pub beta_ratio: f64,
    /// Single-mode base visibility.
    pub v0: f64,
    /// Schmidt (asymmetry) angle of the pair state, radians.
    pub theta_schmidt: f64,
    /// Absolute write-collection solid-angle fraction, only needed to
    /// report the total number of spin excitations per pulse.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_w_abs: Option<f64>,
}

/// Asymmetric channel: large Stokes collector, small anti-Stokes collector
/// (fitted `beta_w / beta_r = 1.7`).
pub const CH1: ChannelParams = ChannelParams {
    chi: 0.01,
    gamma: 0.158,
    eta_w: 1.0,
    eta_r: 1.0,
    xi_se: 0.093,
    beta_ratio: 1.0 / 1.7,
    v0: 0.91,
    theta_schmidt: 0.81 * FRAC_PI_4,
    beta_w_abs: None,
};

/// Symmetric channel: identical write and read collectors.
pub const CH2: ChannelParams = ChannelParams {
    chi: 0.01,
    gamma: 0.167,
    eta_w: 1.0,
    eta_r: 1.0,
    xi_se: 0.093,
    beta_ratio: 1.0,
    v0: 0.91,
    theta_schmidt: 0.81 * FRAC_PI_4,
    beta_w_abs: None,
};

/// Looks up a named preset (`CH1` / `CH2`, case-insensitive).
pub fn preset(name: &str) -> Option<ChannelParams> {
    match name.to_ascii_uppercase().as_str() {
        "CH1" => Some(CH1),
        "CH2" => Some(CH2),
        _ => None,
    }
}

fn check_unit(name: &str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} = {value} is outside [0, 1]")))
    }
}

impl ChannelParams {
    /// Checks the type invariants and logs a warning when `chi` leaves the
    /// model's validity regime.
    pub fn validate(&self) -> Result<()> {
        check_unit("chi", self.chi)?;
        check_unit("gamma", self.gamma)?;
        check_unit("eta_w", self.eta_w)?;
        check_unit("eta_r", self.eta_r)?;
        check_unit("xi_se", self.xi_se)?;
        check_unit("v0", self.v0)?;
        // beta_ratio = 0 is accepted as the limit of a vanishing read collector.
        if !(self.beta_ratio >= 0.0 && self.beta_ratio.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "beta_ratio = {} must be a finite non-negative number",
                self.beta_ratio
            )));
        }
        if !(0.0..=FRAC_PI_2).contains(&self.theta_schmidt) {
            return Err(Error::InvalidParams(format!("theta_schmidt = {} is outside [0, pi/2]", self.theta_schmidt)));
        }
        if let Some(b) = self.beta_w_abs {
            if !(b > 0.0 && b <= 1.0) {
                return Err(Error::InvalidParams(format!("beta_w_abs = {b} is outside (0, 1]")));
            }
        }
        for w in self.warnings() {
            warn!("{w}");
        }
        Ok(())
    }

    /// Non-fatal diagnostics about the validity regime.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.chi > CHI_VALIDITY_LIMIT {
            out.push(format!(
                "chi = {} exceeds {CHI_VALIDITY_LIMIT}; the first-order model is unreliable here",
                self.chi
            ));
        }
        out
    }

    /// Write-to-read solid-angle ratio `beta_w / beta_r`.
    pub fn write_read_ratio(&self) -> f64 {
        1.0 / self.beta_ratio
    }

    /// Total spin excitations created per write pulse, `chi / beta_w`.
    pub fn spin_excitations_per_pulse(&self) -> Option<f64> {
        self.beta_w_abs.map(|b| self.chi / b)
    }

    /// Coefficient of `(m - 1)` in the denominator of the approximate
    /// visibility: `2 chi xi_se beta_ratio / gamma`.
    pub fn multimode_noise_coefficient(&self) -> Result<f64> {
        if self.gamma == 0.0 {
            return Err(Error::DegenerateModel("retrieval efficiency gamma is zero".into()));
        }
        Ok(2.0 * self.chi * self.xi_se * self.beta_ratio / self.gamma)
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        Self { gamma, ..self }
    }

    pub fn with_beta_ratio(self, beta_ratio: f64) -> Self {
        Self { beta_ratio, ..self }
    }
}

fn check_modes(m: u32) -> Result<()> {
    if m == 0 {
        Err(Error::InvalidArgument("mode number m must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Storage-time decay law applied to the retrieval efficiency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecayKind {
    Exponential,
    #[default]
    Gaussian,
    None,
}

/// Retrieval-efficiency decay model `d(t)` with lifetime `tau` in
/// microseconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayModel {
    pub kind: DecayKind,
    /// Lifetime in microseconds; ignored for [`DecayKind::None`].
    pub tau: f64,
}

impl DecayModel {
    pub fn new(kind: DecayKind, tau: f64) -> Result<Self> {
        let model = Self { kind, tau };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind != DecayKind::None && !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidArgument(format!("decay lifetime tau = {} must be positive", self.tau)));
        }
        Ok(())
    }

    /// Decay factor at storage time `t` (microseconds, `t >= 0`).
    pub fn factor(&self, t: f64) -> f64 {
        match self.kind {
            DecayKind::Exponential => (-t / self.tau).exp(),
            DecayKind::Gaussian => (-(t / self.tau).powi(2)).exp(),
            DecayKind::None => 1.0,
        }
    }
}

/// Anti-Stokes detection probability split into its three sources.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityBreakdown {
    /// Photon retrieved from the heralded spin wave.
    pub signal: f64,
    /// Non-directional emission of the unretrieved part of the heralded
    /// spin wave.
    pub imperfect_retrieval_noise: f64,
    /// Non-directional emission of the `m - 1` unwanted spin waves.
    pub multimode_noise: f64,
    pub total: f64,
}

/// Which single-mode visibility anchors the approximate `V(m)` curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum V1Convention {
    /// `V(1) = v0`; reproduces the published fits.
    #[default]
    UseV0,
    /// `V(1)` from the exact coincidence expression at `m = 1`.
    UseExactV1,
}

/// Largest mode number still violating the Bell inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeLimit {
    Finite(u32),
    /// No multimode noise and `S(1)` above threshold: every `m` violates.
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuppressionMode {
    /// Ratio of the solid-angle ratios alone.
    RatioOnly,
    /// Ratio of the full multimode-noise coefficients `beta xi / gamma`.
    FullTerm,
}

/// Total excitation probability of an `m`-mode train, `m chi`, clamped to 1.
pub fn excitation_probability(chi: f64, m: u32) -> Result<f64> {
    check_modes(m)?;
    check_unit("chi", chi)?;
    let p = f64::from(m) * chi;
    if p > 1.0 {
        warn!("m * chi = {p} exceeds 1; clamping the excitation probability");
        Ok(1.0)
    } else {
        Ok(p)
    }
}

/// Probability of detecting a Stokes photon in one time bin.
pub fn p_stokes(params: &ChannelParams) -> f64 {
    params.chi * params.eta_w
}

/// Probability of detecting an anti-Stokes photon after reading one mode
/// of an `m`-mode memory.
pub fn p_antistokes(params: &ChannelParams, m: u32) -> Result<ProbabilityBreakdown> {
    check_modes(m)?;
    let leak = params.chi * params.beta_ratio * params.xi_se * params.eta_r;
    let signal = params.chi * params.gamma * params.eta_r;
    let imperfect_retrieval_noise = (1.0 - params.gamma) * leak;
    let multimode_noise = f64::from(m - 1) * leak;
    Ok(ProbabilityBreakdown {
        signal,
        imperfect_retrieval_noise,
        multimode_noise,
        total: signal + imperfect_retrieval_noise + multimode_noise,
    })
}

/// Stokes/anti-Stokes coincidence probability as `(true, accidental)`.
pub fn p_coincidence(params: &ChannelParams, m: u32) -> Result<(f64, f64)> {
    let anti_stokes = p_antistokes(params, m)?;
    let true_part = params.chi * params.gamma * params.eta_w * params.eta_r;
    Ok((true_part, p_stokes(params) * anti_stokes.total))
}

/// Fringe visibility from the full coincidence expression,
/// `v0 (P_c - P_S P_AS) / (P_c + P_S P_AS)` with `P_c = true + accidental`.
pub fn visibility_exact(params: &ChannelParams, m: u32) -> Result<f64> {
    let (true_part, accidental) = p_coincidence(params, m)?;
    if true_part == 0.0 {
        return Err(Error::DegenerateModel("true coincidence probability is zero".into()));
    }
    Ok(params.v0 * true_part / (true_part + 2.0 * accidental))
}

/// Approximate visibility `V(1) / (1 + 2 chi (m-1) xi_se beta_ratio / gamma)`.
pub fn visibility_approx(params: &ChannelParams, m: u32, convention: V1Convention) -> Result<f64> {
    check_modes(m)?;
    let coeff = params.multimode_noise_coefficient()?;
    let v1 = match convention {
        V1Convention::UseV0 => params.v0,
        V1Convention::UseExactV1 => visibility_exact(params, 1)?,
    };
    Ok(v1 / (1.0 + coeff * f64::from(m - 1)))
}

/// CHSH parameter `S = 2 sqrt(2) V(m)`.
pub fn bell_parameter(params: &ChannelParams, m: u32, convention: V1Convention) -> Result<f64> {
    Ok(S_MAX * visibility_approx(params, m, convention)?)
}

/// Largest `m` with `S(m) > threshold`.
pub fn max_modes(params: &ChannelParams, threshold: f64, convention: V1Convention) -> Result<ModeLimit> {
    if !(threshold > 0.0) {
        return Err(Error::InvalidArgument(format!("threshold {threshold} must be positive")));
    }
    let s1 = bell_parameter(params, 1, convention)?;
    if s1 <= threshold {
        return Ok(ModeLimit::Finite(0));
    }
    let coeff = params.multimode_noise_coefficient()?;
    if coeff == 0.0 {
        return Ok(ModeLimit::Unbounded);
    }
    // S(m) > T  <=>  m - 1 < (S(1)/T - 1) / coeff
    let bound = (s1 / threshold - 1.0) / coeff;
    let cap = f64::from(u32::MAX - 1);
    let mut m = (bound.ceil().min(cap) as u32).max(1);
    // Settle rounding at the boundary against the model itself.
    while m > 1 && bell_parameter(params, m, convention)? <= threshold {
        m -= 1;
    }
    while m < u32::MAX - 1 && bell_parameter(params, m + 1, convention)? > threshold {
        m += 1;
    }
    Ok(ModeLimit::Finite(m))
}

/// Multimode-noise reduction of channel `a` relative to channel `b`.
pub fn noise_suppression_factor(a: &ChannelParams, b: &ChannelParams, mode: SuppressionMode) -> Result<f64> {
    let (num, den) = match mode {
        SuppressionMode::RatioOnly => (b.beta_ratio, a.beta_ratio),
        SuppressionMode::FullTerm => {
            if a.gamma == 0.0 || b.gamma == 0.0 {
                return Err(Error::DegenerateModel("retrieval efficiency gamma is zero".into()));
            }
            (b.beta_ratio * b.xi_se / b.gamma, a.beta_ratio * a.xi_se / a.gamma)
        }
    };
    if den == 0.0 {
        return Err(Error::DegenerateModel("reference channel has no multimode noise".into()));
    }
    Ok(num / den)
}

/// Bell parameter after storage time `t` (microseconds), with the retrieval
/// efficiency scaled by the decay factor.
pub fn bell_vs_time(params: &ChannelParams, m: u32, decay: &DecayModel, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("storage time {t} must be non-negative")));
    }
    decay.validate()?;
    let decayed = params.with_gamma(params.gamma * decay.factor(t));
    bell_parameter(&decayed, m, V1Convention::UseV0)
}

/// Retrieval efficiency at which the `V(1) = v0` model gives `s_target`.
pub fn invert_gamma_for_bell(params: &ChannelParams, m: u32, s_target: f64) -> Result<f64> {
    check_modes(m)?;
    let s1 = S_MAX * params.v0;
    let noise = 2.0 * params.chi * f64::from(m - 1) * params.xi_se * params.beta_ratio;
    if noise == 0.0 {
        return if (s_target - s1).abs() <= 1e-12 * s1.max(1.0) {
            Ok(params.gamma)
        } else {
            Err(Error::NoSolution(format!("without multimode noise S is fixed at {s1}, cannot reach {s_target}")))
        };
    }
    if !(s_target > 0.0 && s_target < s1) {
        return Err(Error::NoSolution(format!("target S = {s_target} is outside the achievable range (0, {s1})")));
    }
    Ok(noise / (s1 / s_target - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn excitation_probability_is_linear() {
        assert!(close(excitation_probability(0.01, 14).unwrap(), 0.14, 1e-15));
        assert_eq!(excitation_probability(0.01, 1).unwrap(), 0.01);
        for m in 1..=14u32 {
            let p = excitation_probability(0.01, m).unwrap();
            assert!(close(p, 0.01 * f64::from(m), 1e-15));
        }
        assert!(matches!(excitation_probability(0.01, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn excitation_probability_clamps() {
        assert_eq!(excitation_probability(0.3, 5).unwrap(), 1.0);
    }

    #[test]
    fn stokes_probability() {
        let p = ChannelParams { eta_w: 0.5, ..CH1 };
        assert!(close(p_stokes(&p), 0.005, 1e-15));
        assert_eq!(p_stokes(&ChannelParams { chi: 0.0, ..p }), 0.0);
        assert_eq!(p_stokes(&CH1), 0.01);
    }

    #[test]
    fn antistokes_breakdown_ch1() {
        let b = p_antistokes(&CH1, 14).unwrap();
        // Hand evaluation: 0.01*0.158, 0.01*0.842*0.093/1.7, 13*0.01*0.093/1.7
        assert!(close(b.signal, 0.00158, 1e-15));
        assert!(close(b.imperfect_retrieval_noise, 4.606235294117647e-4, 1e-15));
        assert!(close(b.multimode_noise, 7.111764705882353e-3, 1e-15));
        assert!(close(b.total, 9.152388235294118e-3, 1e-15));
        assert_eq!(b.total, b.signal + b.imperfect_retrieval_noise + b.multimode_noise);
    }

    #[test]
    fn antistokes_limits() {
        let perfect = ChannelParams { gamma: 1.0, ..CH2 };
        let b = p_antistokes(&perfect, 1).unwrap();
        assert_eq!(b.imperfect_retrieval_noise, 0.0);
        assert_eq!(b.multimode_noise, 0.0);
        assert_eq!(b.total, perfect.chi * perfect.eta_r);

        let closed = CH1.with_beta_ratio(0.0);
        let b = p_antistokes(&closed, 14).unwrap();
        assert_eq!(b.total, closed.chi * closed.gamma * closed.eta_r);
        assert!(p_antistokes(&CH1, 0).is_err());
    }

    #[test]
    fn coincidence_parts() {
        let (t, a) = p_coincidence(&CH1, 14).unwrap();
        assert!(close(t, 0.00158, 1e-15));
        assert!(close(a, 9.152388235294118e-5, 1e-16));

        let vac = ChannelParams { chi: 0.0, ..CH1 };
        assert_eq!(p_coincidence(&vac, 14).unwrap(), (0.0, 0.0));

        let p = ChannelParams { gamma: 1.0, beta_ratio: 3.7, ..CH1 };
        let (_, a) = p_coincidence(&p, 1).unwrap();
        assert!(close(a, p.chi * p.chi * p.eta_w * p.eta_r, 1e-18));
    }

    #[test]
    fn exact_visibility() {
        // Methods expression at m = 1 evaluated by hand
        let v = visibility_exact(&CH1, 1).unwrap();
        assert!(close(v, 0.8870859683589335, 1e-12));

        let noiseless = ChannelParams { chi: 1e-300, beta_ratio: 0.0, ..CH1 };
        assert!(close(visibility_exact(&noiseless, 5).unwrap(), CH1.v0, 1e-12));

        assert_eq!(visibility_exact(&ChannelParams { v0: 0.0, ..CH1 }, 3).unwrap(), 0.0);
        assert!(matches!(visibility_exact(&ChannelParams { gamma: 0.0, ..CH1 }, 3), Err(Error::DegenerateModel(_))));
    }

    #[test]
    fn approximate_visibility() {
        let v = visibility_approx(&CH1, 14, V1Convention::UseV0).unwrap();
        assert!(close(v, 0.8348452763166884, 1e-12));
        let v = visibility_approx(&CH2, 14, V1Convention::UseV0).unwrap();
        assert!(close(v, 0.7949053248247725, 1e-12));
        assert_eq!(visibility_approx(&CH1, 1, V1Convention::UseV0).unwrap(), CH1.v0);
        assert!(close(
            visibility_approx(&CH1, 1, V1Convention::UseExactV1).unwrap(),
            visibility_exact(&CH1, 1).unwrap(),
            1e-12
        ));
        assert!(matches!(
            visibility_approx(&ChannelParams { gamma: 0.0, ..CH1 }, 2, V1Convention::UseV0),
            Err(Error::DegenerateModel(_))
        ));
    }

    #[test]
    fn bell_parameter_anchors() {
        let s1 = bell_parameter(&CH1, 14, V1Convention::UseV0).unwrap();
        let s2 = bell_parameter(&CH2, 14, V1Convention::UseV0).unwrap();
        assert!(close(s1, 2.36129902450035, 1e-9));
        assert!(close(s2, 2.2483317823395677, 1e-9));
        assert!((s1 - 2.36).abs() < 0.03);
        assert!((s2 - 2.24).abs() < 0.04);
        let ideal = ChannelParams { v0: 1.0, ..CH1 };
        assert!(close(bell_parameter(&ideal, 1, V1Convention::UseV0).unwrap(), S_MAX, 1e-15));
    }

    #[test]
    fn mode_limits() {
        assert_eq!(max_modes(&CH1, 2.0, V1Convention::UseV0).unwrap(), ModeLimit::Finite(42));
        assert_eq!(max_modes(&CH2, 2.0, V1Convention::UseV0).unwrap(), ModeLimit::Finite(26));
        let weak = ChannelParams { v0: 0.6, ..CH1 };
        assert_eq!(max_modes(&weak, 2.0, V1Convention::UseV0).unwrap(), ModeLimit::Finite(0));
        let quiet = CH1.with_beta_ratio(0.0);
        assert_eq!(max_modes(&quiet, 2.0, V1Convention::UseV0).unwrap(), ModeLimit::Unbounded);
        assert!(max_modes(&CH1, 0.0, V1Convention::UseV0).is_err());
    }

    #[test]
    fn suppression_factor() {
        let r = noise_suppression_factor(&CH1, &CH2, SuppressionMode::RatioOnly).unwrap();
        assert!(close(r, 1.7, 1e-12));
        assert_eq!(noise_suppression_factor(&CH1, &CH1, SuppressionMode::FullTerm).unwrap(), 1.0);
        let full = noise_suppression_factor(&CH1, &CH2, SuppressionMode::FullTerm).unwrap();
        assert!(close(full, (1.0 / 0.167) / ((1.0 / 1.7) / 0.158), 1e-12));
        assert!(close(full, 1.608383, 1e-6));
        let quiet = CH1.with_beta_ratio(0.0);
        assert!(noise_suppression_factor(&quiet, &CH2, SuppressionMode::RatioOnly).is_err());
    }

    #[test]
    fn decay_and_time_dependence() {
        let decay = DecayModel::new(DecayKind::Gaussian, 30.0).unwrap();
        let s0 = bell_parameter(&CH1, 14, V1Convention::UseV0).unwrap();
        assert_eq!(bell_vs_time(&CH1, 14, &decay, 0.0).unwrap(), s0);
        let mut prev = s0;
        for i in 1..=60 {
            let s = bell_vs_time(&CH1, 14, &decay, f64::from(i)).unwrap();
            assert!(s <= prev);
            prev = s;
        }
        let none = DecayModel { kind: DecayKind::None, tau: 0.0 };
        assert_eq!(bell_vs_time(&CH1, 14, &none, 100.0).unwrap(), s0);
        assert!(bell_vs_time(&CH1, 14, &decay, -1.0).is_err());
        assert!(DecayModel::new(DecayKind::Exponential, 0.0).is_err());
    }

    #[test]
    fn gamma_inversion() {
        let g = invert_gamma_for_bell(&CH1, 14, 2.12).unwrap();
        assert!(close(g, 0.06643745966156016, 1e-12));
        let back = bell_parameter(&CH1.with_gamma(g), 14, V1Convention::UseV0).unwrap();
        assert!(close(back, 2.12, 1e-9));

        let g2 = invert_gamma_for_bell(&CH2, 14, 2.06).unwrap();
        let back = bell_parameter(&CH2.with_gamma(g2), 14, V1Convention::UseV0).unwrap();
        assert!(close(back, 2.06, 1e-9));

        let s1 = S_MAX * CH1.v0;
        assert_eq!(invert_gamma_for_bell(&CH1, 1, s1).unwrap(), CH1.gamma);
        assert!(matches!(invert_gamma_for_bell(&CH1, 14, 2.9), Err(Error::NoSolution(_))));
        assert!(matches!(invert_gamma_for_bell(&CH1, 1, 2.0), Err(Error::NoSolution(_))));
    }

    #[test]
    fn validation() {
        assert!(CH1.validate().is_ok());
        assert!(ChannelParams { chi: 1.5, ..CH1 }.validate().is_err());
        assert!(ChannelParams { beta_ratio: -1.0, ..CH1 }.validate().is_err());
        assert!(ChannelParams { theta_schmidt: 2.0, ..CH1 }.validate().is_err());
        let hot = ChannelParams { chi: 0.2, ..CH1 };
        assert!(hot.validate().is_ok());
        assert_eq!(hot.warnings().len(), 1);
        assert!(CH1.warnings().is_empty());
        assert_eq!(CH1.spin_excitations_per_pulse(), None);
        let p = ChannelParams { beta_w_abs: Some(0.02), ..CH1 };
        assert!(close(p.spin_excitations_per_pulse().unwrap(), 0.5, 1e-15));
        assert_eq!(preset("ch2"), Some(CH2));
        assert_eq!(preset("ch3"), None);
    }
}
