//! Polarization pair state, analyzer projections and CHSH estimation.
//!
//! The retrieved pair is `cos(t)|HH> + sin(t)|VV>` with the HH-VV coherence
//! scaled by `coherence`. Detector 1 sits on the transmitted (H) port of each
//! polarizing beam splitter and counts as outcome +1; detector 2 sits on the
//! reflected port and counts as -1.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sign pattern of the CHSH combination over the four setting pairs.
pub const CHSH_SIGNS: [f64; 4] = [1.0, -1.0, 1.0, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairState {
    pub theta_schmidt: f64,
    pub coherence: f64,
}

impl PairState {
    pub fn new(theta_schmidt: f64, coherence: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta_schmidt) {
            return Err(Error::InvalidArgument(format!("Schmidt angle {theta_schmidt} is outside [0, pi/2]")));
        }
        if !(0.0..=1.0).contains(&coherence) {
            return Err(Error::InvalidArgument(format!("coherence {coherence} is outside [0, 1]")));
        }
        Ok(Self { theta_schmidt, coherence })
    }

    /// Maximally entangled, fully coherent state.
    pub fn bell() -> Self {
        Self { theta_schmidt: FRAC_PI_4, coherence: 1.0 }
    }

    /// State whose canonical-angle CHSH value is `2 sqrt(2) v0`.
    pub fn calibrated(v0: f64, theta_schmidt: f64) -> Result<Self> {
        Ok(Self { theta_schmidt, coherence: calibrate_coherence(v0, theta_schmidt)? })
    }

    /// Density matrix in the `{HH, HV, VH, VV}` basis.
    pub fn density_matrix(&self) -> [[f64; 4]; 4] {
        let (s, c) = self.theta_schmidt.sin_cos();
        let off = self.coherence * c * s;
        let mut rho = [[0.0; 4]; 4];
        rho[0][0] = c * c;
        rho[3][3] = s * s;
        rho[0][3] = off;
        rho[3][0] = off;
        rho
    }
}

/// Analyzer angles of the Stokes and anti-Stokes arms, radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyzerSettings {
    pub theta_s: f64,
    pub theta_as: f64,
}

impl AnalyzerSettings {
    /// Builds settings with both angles reduced modulo pi.
    pub fn new(theta_s: f64, theta_as: f64) -> Self {
        Self { theta_s: theta_s.rem_euclid(PI), theta_as: theta_as.rem_euclid(PI) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshSettings {
    pub theta_s: f64,
    pub theta_s_prime: f64,
    pub theta_as: f64,
    pub theta_as_prime: f64,
}

impl ChshSettings {
    /// (0, 45, 22.5, 67.5) degrees.
    pub const CANONICAL: Self =
        Self { theta_s: 0.0, theta_s_prime: FRAC_PI_4, theta_as: FRAC_PI_8, theta_as_prime: 3.0 * FRAC_PI_8 };

    /// The four setting pairs in CHSH order:
    /// `(s, as)`, `(s, as')`, `(s', as)`, `(s', as')`.
    pub fn pairs(&self) -> [AnalyzerSettings; 4] {
        [
            AnalyzerSettings::new(self.theta_s, self.theta_as),
            AnalyzerSettings::new(self.theta_s, self.theta_as_prime),
            AnalyzerSettings::new(self.theta_s_prime, self.theta_as),
            AnalyzerSettings::new(self.theta_s_prime, self.theta_as_prime),
        ]
    }
}

impl Default for ChshSettings {
    fn default() -> Self {
        Self::CANONICAL
    }
}

/// Coincidence counts at one setting pair. First index: Stokes detector,
/// second: anti-Stokes detector.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoincidenceTable {
    pub c11: u64,
    pub c12: u64,
    pub c21: u64,
    pub c22: u64,
}

impl CoincidenceTable {
    pub fn total(&self) -> u64 {
        self.c11 + self.c12 + self.c21 + self.c22
    }

    /// Adds one coincidence between Stokes detector `a` and anti-Stokes
    /// detector `b` (both 1 or 2).
    pub fn record(&mut self, a: u8, b: u8) {
        match (a, b) {
            (1, 1) => self.c11 += 1,
            (1, 2) => self.c12 += 1,
            (2, 1) => self.c21 += 1,
            (2, 2) => self.c22 += 1,
            _ => panic!("detector indices must be 1 or 2, got ({a}, {b})"),
        }
    }

    pub fn merge(&mut self, other: &Self) {
        self.c11 += other.c11;
        self.c12 += other.c12;
        self.c21 += other.c21;
        self.c22 += other.c22;
    }

    pub fn scaled(&self, k: u64) -> Self {
        Self { c11: self.c11 * k, c12: self.c12 * k, c21: self.c21 * k, c22: self.c22 * k }
    }
}

/// Coherence `(2 v0 - 1) / sin(2 t)` reproducing a canonical CHSH value of
/// `2 sqrt(2) v0`.
pub fn calibrate_coherence(v0: f64, theta_schmidt: f64) -> Result<f64> {
    let s2 = (2.0 * theta_schmidt).sin();
    if !(theta_schmidt > 0.0 && theta_schmidt < FRAC_PI_2) || s2.abs() < 1e-15 {
        return Err(Error::DegenerateState(format!(
            "sin(2 * {theta_schmidt}) vanishes; no coherence can be calibrated"
        )));
    }
    if !(0.5..=1.0).contains(&v0) {
        return Err(Error::NoSolution(format!(
            "base visibility {v0} is outside [0.5, 1]; the coherence would leave [0, 1]"
        )));
    }
    let mu = (2.0 * v0 - 1.0) / s2;
    if mu > 1.0 + 1e-12 {
        return Err(Error::NoSolution(format!(
            "visibility {v0} needs coherence {mu} > 1 at Schmidt angle {theta_schmidt}"
        )));
    }
    Ok(mu.min(1.0))
}

fn port(theta: f64, detector: u8) -> (f64, f64) {
    let t = match detector {
        1 => theta,
        2 => theta + FRAC_PI_2,
        _ => panic!("detector index must be 1 or 2, got {detector}"),
    };
    t.sin_cos()
}

/// Probability that Stokes detector `a` and anti-Stokes detector `b` fire
/// together.
pub fn joint_probability(state: &PairState, settings: &AnalyzerSettings, a: u8, b: u8) -> f64 {
    let (ss, cs) = port(settings.theta_s, a);
    let (sa, ca) = port(settings.theta_as, b);
    let (st, ct) = state.theta_schmidt.sin_cos();
    ct * ct * cs * cs * ca * ca + st * st * ss * ss * sa * sa + 2.0 * state.coherence * ct * st * cs * ss * ca * sa
}

/// All four joint probabilities as `[[p11, p12], [p21, p22]]`.
pub fn joint_distribution(state: &PairState, settings: &AnalyzerSettings) -> [[f64; 2]; 2] {
    [
        [joint_probability(state, settings, 1, 1), joint_probability(state, settings, 1, 2)],
        [joint_probability(state, settings, 2, 1), joint_probability(state, settings, 2, 2)],
    ]
}

/// Polarization correlation `E(theta_s, theta_as)`.
pub fn correlation_from_state(state: &PairState, settings: &AnalyzerSettings) -> f64 {
    let (s2s, c2s) = (2.0 * settings.theta_s).sin_cos();
    let (s2a, c2a) = (2.0 * settings.theta_as).sin_cos();
    c2s * c2a + state.coherence * (2.0 * state.theta_schmidt).sin() * s2s * s2a
}

/// Absolute CHSH combination of the four correlations.
pub fn chsh_from_state(state: &PairState, settings: &ChshSettings) -> f64 {
    settings.pairs().iter().zip(CHSH_SIGNS).map(|(p, sign)| sign * correlation_from_state(state, p)).sum::<f64>().abs()
}

/// Correlation estimate and its Poisson standard error from one table.
pub fn correlation_from_counts(table: &CoincidenceTable) -> Result<(f64, f64)> {
    let n = table.total();
    if n == 0 {
        return Err(Error::EmptyTable(None));
    }
    let n = n as f64;
    let same = (table.c11 + table.c22) as f64;
    let diff = (table.c12 + table.c21) as f64;
    let e = (same - diff) / n;
    let var = (same * (1.0 - e).powi(2) + diff * (1.0 + e).powi(2)) / (n * n);
    Ok((e, var.sqrt()))
}

/// CHSH value and standard error from the four tables in CHSH order.
pub fn chsh_from_counts(tables: &[CoincidenceTable; 4]) -> Result<(f64, f64)> {
    let mut s = 0.0;
    let mut var = 0.0;
    for (i, (table, sign)) in tables.iter().zip(CHSH_SIGNS).enumerate() {
        let (e, sigma) = correlation_from_counts(table).map_err(|_| Error::EmptyTable(Some(i)))?;
        s += sign * e;
        var += sigma * sigma;
    }
    Ok((s.abs(), var.sqrt()))
}

/// Canonical-angle CHSH value `sqrt(2) (1 + mu sin 2t)`.
pub fn canonical_chsh(state: &PairState) -> f64 {
    SQRT_2 * (1.0 + state.coherence * (2.0 * state.theta_schmidt).sin())
}
