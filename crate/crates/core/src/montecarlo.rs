//! Event-level simulation of the multiplexed write/read protocol.
//!
//! One trial applies `m` write pulses. Each pulse creates a pair with
//! probability `chi`; detected Stokes photons herald stored spin waves, and
//! only the earliest herald is read out. The read pulse retrieves the
//! heralded spin wave with efficiency `gamma` and converts the unwanted
//! spin waves into unpolarized noise photons.
//!
//! Trial `i` draws all of its randomness from a ChaCha8 stream keyed by the
//! run seed with stream id `i`, and the per-trial tallies are integers, so
//! the result does not depend on how trials are distributed over threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::chsh::{
    chsh_from_counts, chsh_from_state, joint_distribution, AnalyzerSettings, ChshSettings, CoincidenceTable, PairState,
};
use crate::error::{Error, Result};
use crate::noise::ChannelParams;

/// Default upper bound on `n_trials * m`.
pub const DEFAULT_EVENT_BUDGET: u64 = 50_000_000_000;

/// Trials per work unit. Fixed so the partition is independent of thread count.
const BLOCK_TRIALS: u64 = 1 << 14;

/// Detector that wins when both Stokes detectors click in one bin.
pub const SAME_BIN_TIE_DETECTOR: u8 = 1;

pub const SETTING_LABELS: [&str; 4] = ["(s, as)", "(s, as')", "(s', as)", "(s', as')"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SettingSchedule {
    /// Trial `i` uses setting pair `i mod 4`.
    #[default]
    RoundRobin,
    /// Four contiguous blocks of trials, one per setting pair.
    PerBlock,
}

impl SettingSchedule {
    pub fn setting_for(self, trial: u64, n_trials: u64) -> usize {
        match self {
            Self::RoundRobin => (trial % 4) as usize,
            Self::PerBlock => ((u128::from(trial) * 4 / u128::from(n_trials)) as usize).min(3),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Uses the rayon pool when the `parallel` feature is enabled, otherwise
    /// runs sequentially.
    #[default]
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub params: ChannelParams,
    pub m: u32,
    pub n_trials: u64,
    pub seed: u64,
    #[serde(default)]
    pub settings: ChshSettings,
    #[serde(default)]
    pub setting_schedule: SettingSchedule,
    #[serde(default = "default_budget")]
    pub event_budget: u64,
}

fn default_budget() -> u64 {
    DEFAULT_EVENT_BUDGET
}

impl SimConfig {
    pub fn new(params: ChannelParams, m: u32, n_trials: u64, seed: u64) -> Self {
        Self {
            params,
            m,
            n_trials,
            seed,
            settings: ChshSettings::CANONICAL,
            setting_schedule: SettingSchedule::RoundRobin,
            event_budget: DEFAULT_EVENT_BUDGET,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.m == 0 {
            return Err(Error::InvalidArgument("mode number m must be at least 1".into()));
        }
        if self.n_trials == 0 {
            return Err(Error::InvalidArgument("n_trials must be at least 1".into()));
        }
        let requested = u128::from(self.n_trials) * u128::from(self.m);
        if requested > u128::from(self.event_budget) {
            return Err(Error::ResourceLimit { requested, budget: self.event_budget });
        }
        Ok(())
    }

    pub fn state(&self) -> Result<PairState> {
        PairState::calibrated(self.params.v0, self.params.theta_schmidt)
    }
}

/// Mean number of noise photons reaching the anti-Stokes collection mode per
/// read pulse: `chi beta_ratio xi_se ((1 - gamma) + (m - 1))`.
pub fn noise_photon_mean(params: &ChannelParams, m: u32) -> f64 {
    params.chi * params.beta_ratio * params.xi_se * ((1.0 - params.gamma) + f64::from(m.saturating_sub(1)))
}

/// Probability that a trial produces at least one Stokes detection.
pub fn herald_probability(params: &ChannelParams, m: u32) -> f64 {
    1.0 - (1.0 - params.chi * params.eta_w).powi(m as i32)
}

/// Event-level CHSH expectation: signal correlations diluted by unpolarized
/// noise clicks, `S_state gamma / (gamma + lambda_n)`.
pub fn expected_event_chsh(params: &ChannelParams, m: u32, settings: &ChshSettings) -> Result<f64> {
    let state = PairState::calibrated(params.v0, params.theta_schmidt)?;
    let lambda = noise_photon_mean(params, m);
    if params.gamma + lambda == 0.0 {
        return Err(Error::DegenerateModel("no anti-Stokes photons are ever emitted".into()));
    }
    Ok(chsh_from_state(&state, settings) * params.gamma / (params.gamma + lambda))
}

/// Earliest herald; same-bin ties go to [`SAME_BIN_TIE_DETECTOR`].
pub fn first_herald(stokes_hits: &[(u32, u8)]) -> Option<(u32, u8)> {
    stokes_hits.iter().copied().min_by_key(|&(bin, det)| (bin, det != SAME_BIN_TIE_DETECTOR))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    /// `(bin, detector)` for every detected Stokes photon, bins from 1.
    pub stokes_hits: Vec<(u32, u8)>,
    pub readout_bin: Option<u32>,
    /// Detector of the retrieved signal anti-Stokes photon, if detected.
    pub as_signal_hit: Option<u8>,
    pub as_noise_hits: Vec<u8>,
}

impl TrialRecord {
    pub fn herald_detector(&self) -> Option<u8> {
        first_herald(&self.stokes_hits).map(|(_, d)| d)
    }
}

/// Per-run sampling constants.
#[derive(Debug, Clone)]
struct TrialLaw {
    chi: f64,
    eta_w: f64,
    gamma: f64,
    eta_r: f64,
    m: u32,
    noise: Option<Poisson<f64>>,
}

impl TrialLaw {
    fn new(params: &ChannelParams, m: u32) -> Self {
        let lambda = noise_photon_mean(params, m);
        Self {
            chi: params.chi,
            eta_w: params.eta_w,
            gamma: params.gamma,
            eta_r: params.eta_r,
            m,
            noise: (lambda > 0.0).then(|| Poisson::new(lambda).expect("positive finite mean")),
        }
    }
}

/// Polarization statistics at one setting pair.
#[derive(Debug, Clone, Copy)]
struct SettingLaw {
    /// P(Stokes detector 1).
    stokes_one: f64,
    /// P(anti-Stokes detector 1 | Stokes detector a) for a = 1, 2.
    anti_stokes_one: [f64; 2],
}

impl SettingLaw {
    fn new(state: &PairState, settings: &AnalyzerSettings) -> Self {
        let p = joint_distribution(state, settings);
        let row = |a: usize| {
            let marginal = p[a][0] + p[a][1];
            if marginal > 0.0 {
                p[a][0] / marginal
            } else {
                0.5
            }
        };
        Self { stokes_one: p[0][0] + p[0][1], anti_stokes_one: [row(0), row(1)] }
    }
}

fn detector(rng: &mut impl Rng, p_one: f64) -> u8 {
    if rng.gen::<f64>() < p_one {
        1
    } else {
        2
    }
}

fn sample_trial<R: Rng>(rng: &mut R, law: &TrialLaw, setting: &SettingLaw) -> TrialRecord {
    let mut record = TrialRecord::default();
    for bin in 1..=law.m {
        if rng.gen::<f64>() < law.chi {
            let det = detector(rng, setting.stokes_one);
            if rng.gen::<f64>() < law.eta_w {
                record.stokes_hits.push((bin, det));
            }
        }
    }
    let Some((bin, herald)) = first_herald(&record.stokes_hits) else {
        return record;
    };
    record.readout_bin = Some(bin);
    if rng.gen::<f64>() < law.gamma {
        let det = detector(rng, setting.anti_stokes_one[usize::from(herald - 1)]);
        if rng.gen::<f64>() < law.eta_r {
            record.as_signal_hit = Some(det);
        }
    }
    if let Some(noise) = &law.noise {
        let n = noise.sample(rng) as u64;
        for _ in 0..n {
            let detected = rng.gen::<f64>() < law.eta_r;
            let det = detector(rng, 0.5);
            if detected {
                record.as_noise_hits.push(det);
            }
        }
    }
    record
}

/// Runs one trial at the given analyzer setting, drawing from `rng`.
pub fn run_trial<R: Rng>(rng: &mut R, config: &SimConfig, setting: &AnalyzerSettings) -> Result<TrialRecord> {
    let state = config.state()?;
    Ok(sample_trial(rng, &TrialLaw::new(&config.params, config.m), &SettingLaw::new(&state, setting)))
}

/// Counter-based stream factory: stream `i` is a pure function of
/// `(seed, i)`.
#[derive(Debug, Clone)]
pub struct StreamFactory {
    key: <ChaCha8Rng as SeedableRng>::Seed,
}

impl StreamFactory {
    pub fn new(seed: u64) -> Self {
        Self { key: ChaCha8Rng::seed_from_u64(seed).get_seed() }
    }

    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(index);
        rng
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimResult {
    /// Coincidences per setting pair, CHSH order.
    pub tables: [CoincidenceTable; 4],
    /// Coincidences involving noise-photon clicks only.
    pub noise_tables: [CoincidenceTable; 4],
    pub n_trials: u64,
    pub trials_per_setting: [u64; 4],
    pub n_heralds: u64,
    pub n_readouts: u64,
    /// Stokes detections in each bin (index 0 is bin 1).
    pub per_bin_stokes_counts: Vec<u64>,
    /// Total anti-Stokes clicks (signal + noise) over all readouts.
    pub as_detection_given_herald: u64,
    /// Trials with two or more Stokes detections.
    pub multi_herald_trials: u64,
}

impl SimResult {
    fn empty(m: u32) -> Self {
        Self {
            tables: Default::default(),
            noise_tables: Default::default(),
            n_trials: 0,
            trials_per_setting: [0; 4],
            n_heralds: 0,
            n_readouts: 0,
            per_bin_stokes_counts: vec![0; m as usize],
            as_detection_given_herald: 0,
            multi_herald_trials: 0,
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for i in 0..4 {
            self.tables[i].merge(&other.tables[i]);
            self.noise_tables[i].merge(&other.noise_tables[i]);
            self.trials_per_setting[i] += other.trials_per_setting[i];
        }
        self.n_trials += other.n_trials;
        self.n_heralds += other.n_heralds;
        self.n_readouts += other.n_readouts;
        for (a, b) in self.per_bin_stokes_counts.iter_mut().zip(&other.per_bin_stokes_counts) {
            *a += b;
        }
        self.as_detection_given_herald += other.as_detection_given_herald;
        self.multi_herald_trials += other.multi_herald_trials;
        self
    }

    fn tally(&mut self, setting: usize, record: &TrialRecord) {
        self.n_trials += 1;
        self.trials_per_setting[setting] += 1;
        for &(bin, _) in &record.stokes_hits {
            self.per_bin_stokes_counts[bin as usize - 1] += 1;
        }
        if !record.stokes_hits.is_empty() {
            self.n_heralds += 1;
        }
        if record.stokes_hits.len() > 1 {
            self.multi_herald_trials += 1;
        }
        let Some(herald) = record.herald_detector().filter(|_| record.readout_bin.is_some()) else {
            return;
        };
        self.n_readouts += 1;
        if let Some(b) = record.as_signal_hit {
            self.tables[setting].record(herald, b);
            self.as_detection_given_herald += 1;
        }
        for &b in &record.as_noise_hits {
            self.tables[setting].record(herald, b);
            self.noise_tables[setting].record(herald, b);
            self.as_detection_given_herald += 1;
        }
    }
}

/// One line of the optional event log, emitted for heralded trials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialEvent {
    pub trial: u64,
    pub setting: u8,
    pub readout_bin: Option<u32>,
    /// `(Stokes detector, anti-Stokes detector)` per coincidence.
    pub coincidences: Vec<(u8, u8)>,
}

impl TrialEvent {
    fn from_record(trial: u64, setting: usize, record: &TrialRecord) -> Self {
        let coincidences = match record.herald_detector() {
            Some(h) => record.as_signal_hit.iter().chain(&record.as_noise_hits).map(|&b| (h, b)).collect(),
            None => Vec::new(),
        };
        Self { trial, setting: setting as u8, readout_bin: record.readout_bin, coincidences }
    }
}

struct Runner {
    law: TrialLaw,
    settings: [SettingLaw; 4],
    streams: StreamFactory,
    schedule: SettingSchedule,
    n_trials: u64,
    m: u32,
}

impl Runner {
    fn new(config: &SimConfig) -> Result<Self> {
        config.validate()?;
        let state = config.state()?;
        Ok(Self {
            law: TrialLaw::new(&config.params, config.m),
            settings: config.settings.pairs().map(|p| SettingLaw::new(&state, &p)),
            streams: StreamFactory::new(config.seed),
            schedule: config.setting_schedule,
            n_trials: config.n_trials,
            m: config.m,
        })
    }

    fn n_blocks(&self) -> u64 {
        self.n_trials.div_ceil(BLOCK_TRIALS)
    }

    fn block(&self, index: u64, mut events: Option<&mut Vec<TrialEvent>>) -> SimResult {
        let start = index * BLOCK_TRIALS;
        let end = (start + BLOCK_TRIALS).min(self.n_trials);
        let mut acc = SimResult::empty(self.m);
        for trial in start..end {
            let setting = self.schedule.setting_for(trial, self.n_trials);
            let mut rng = self.streams.stream(trial);
            let record = sample_trial(&mut rng, &self.law, &self.settings[setting]);
            acc.tally(setting, &record);
            if let Some(log) = events.as_deref_mut() {
                if record.readout_bin.is_some() {
                    log.push(TrialEvent::from_record(trial, setting, &record));
                }
            }
        }
        acc
    }

    fn run(&self, exec: Execution) -> SimResult {
        let blocks = self.n_blocks();
        match exec {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..blocks)
                    .into_par_iter()
                    .map(|b| self.block(b, None))
                    .reduce(|| SimResult::empty(self.m), SimResult::merge)
            }
            _ => (0..blocks).map(|b| self.block(b, None)).fold(SimResult::empty(self.m), SimResult::merge),
        }
    }

    fn run_with_events(&self, exec: Execution) -> (SimResult, Vec<TrialEvent>) {
        let one = |b: u64| {
            let mut log = Vec::new();
            let acc = self.block(b, Some(&mut log));
            (acc, log)
        };
        let parts: Vec<(SimResult, Vec<TrialEvent>)> = match exec {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..self.n_blocks()).into_par_iter().map(one).collect()
            }
            _ => (0..self.n_blocks()).map(one).collect(),
        };
        let mut total = SimResult::empty(self.m);
        let mut events = Vec::new();
        for (acc, log) in parts {
            total = total.merge(acc);
            events.extend(log);
        }
        (total, events)
    }
}

/// Runs all trials with the default execution strategy.
pub fn simulate(config: &SimConfig) -> Result<SimResult> {
    simulate_with(config, Execution::default())
}

pub fn simulate_with(config: &SimConfig, exec: Execution) -> Result<SimResult> {
    Ok(Runner::new(config)?.run(exec))
}

/// Like [`simulate_with`], also returning one event per heralded trial in
/// trial order.
pub fn simulate_with_events(config: &SimConfig, exec: Execution) -> Result<(SimResult, Vec<TrialEvent>)> {
    Ok(Runner::new(config)?.run_with_events(exec))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChshOutcome {
    pub s: f64,
    pub sigma_s: f64,
    /// Event-level closed-form expectation.
    pub expected: f64,
    pub noise_photon_mean: f64,
    pub result: SimResult,
}

/// Simulates the four-setting CHSH measurement and estimates `S`.
pub fn chsh_experiment(config: &SimConfig) -> Result<ChshOutcome> {
    chsh_experiment_with(config, Execution::default())
}

pub fn chsh_experiment_with(config: &SimConfig, exec: Execution) -> Result<ChshOutcome> {
    let result = simulate_with(config, exec)?;
    chsh_outcome(config, result)
}

/// Estimates `S` from an existing simulation result.
pub fn chsh_outcome(config: &SimConfig, result: SimResult) -> Result<ChshOutcome> {
    let (table, smallest) = result.tables.iter().enumerate().min_by_key(|(_, t)| t.total()).expect("four tables");
    if smallest.total() == 0 {
        return Err(Error::InsufficientStatistics { table, label: SETTING_LABELS[table], count: 0 });
    }
    let (s, sigma_s) = chsh_from_counts(&result.tables)?;
    Ok(ChshOutcome {
        s,
        sigma_s,
        expected: expected_event_chsh(&config.params, config.m, &config.settings)?,
        noise_photon_mean: noise_photon_mean(&config.params, config.m),
        result,
    })
}

/// Trials needed for a CHSH standard error of about `target_sigma`, with a
/// 20 % margin.
pub fn trials_for_sigma(params: &ChannelParams, m: u32, target_sigma: f64) -> Result<u64> {
    let state = PairState::calibrated(params.v0, params.theta_schmidt)?;
    let lambda = noise_photon_mean(params, m);
    let dilution = params.gamma / (params.gamma + lambda);
    // Var(S) = sum_i (1 - E_i^2) / N_i with N_i = N_c / 4
    let var_sum: f64 = ChshSettings::CANONICAL
        .pairs()
        .iter()
        .map(|p| 1.0 - (crate::chsh::correlation_from_state(&state, p) * dilution).powi(2))
        .sum();
    let coincidences = 4.0 * var_sum / (target_sigma * target_sigma);
    let per_trial = herald_probability(params, m) * (params.gamma + lambda) * params.eta_r;
    if per_trial <= 0.0 {
        return Err(Error::DegenerateModel("coincidence rate is zero".into()));
    }
    Ok((1.2 * coincidences / per_trial).ceil() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::CH1;

    #[test]
    fn first_herald_rule() {
        assert_eq!(first_herald(&[(3, 1), (7, 2)]), Some((3, 1)));
        assert_eq!(first_herald(&[(7, 2), (3, 1)]), Some((3, 1)));
        assert_eq!(first_herald(&[]), None);
        assert_eq!(first_herald(&[(5, 2)]), Some((5, 2)));
        assert_eq!(first_herald(&[(4, 2), (4, 1)]), Some((4, 1)));
    }

    #[test]
    fn vacuum_and_certain_trials() {
        let vac = SimConfig::new(ChannelParams { chi: 0.0, ..CH1 }, 14, 1, 0);
        let certain = SimConfig::new(ChannelParams { chi: 1.0, ..CH1 }, 14, 1, 0);
        let set = ChshSettings::CANONICAL.pairs()[0];
        let streams = StreamFactory::new(9);
        for i in 0..500 {
            let r = run_trial(&mut streams.stream(i), &vac, &set).unwrap();
            assert!(r.stokes_hits.is_empty());
            assert_eq!(r.readout_bin, None);
            assert!(r.as_signal_hit.is_none() && r.as_noise_hits.is_empty());
            let r = run_trial(&mut streams.stream(i), &certain, &set).unwrap();
            assert_eq!(r.readout_bin, Some(1));
            assert_eq!(r.stokes_hits.len(), 14);
        }
    }

    #[test]
    fn streams_are_reproducible() {
        let f = StreamFactory::new(42);
        let a: Vec<u64> = (0..8).map(|i| f.stream(i).gen()).collect();
        let b: Vec<u64> = (0..8).map(|i| StreamFactory::new(42).stream(i).gen()).collect();
        assert_eq!(a, b);
        assert_ne!(f.stream(0).gen::<u64>(), f.stream(1).gen::<u64>());
        assert_ne!(StreamFactory::new(1).stream(0).gen::<u64>(), f.stream(0).gen::<u64>());
    }

    #[test]
    fn schedules() {
        let n = 10;
        let rr: Vec<_> = (0..n).map(|i| SettingSchedule::RoundRobin.setting_for(i, n)).collect();
        assert_eq!(rr, vec![0, 1, 2, 3, 0, 1, 2, 3, 0, 1]);
        let pb: Vec<_> = (0..n).map(|i| SettingSchedule::PerBlock.setting_for(i, n)).collect();
        assert_eq!(pb, vec![0, 0, 0, 1, 1, 2, 2, 2, 3, 3]);
    }

    #[test]
    fn config_validation() {
        assert!(SimConfig::new(CH1, 14, 0, 1).validate().is_err());
        assert!(SimConfig::new(CH1, 0, 10, 1).validate().is_err());
        let mut c = SimConfig::new(CH1, 14, 1000, 1);
        c.event_budget = 13_999;
        assert!(matches!(simulate(&c), Err(Error::ResourceLimit { .. })));
        c.event_budget = 14_000;
        assert!(simulate(&c).is_ok());
    }

    #[test]
    fn too_few_trials() {
        let c = SimConfig::new(CH1, 14, 10, 3);
        match chsh_experiment(&c) {
            Err(Error::InsufficientStatistics { count: 0, .. }) => {}
            other => panic!("expected insufficient statistics, got {other:?}"),
        }
    }

    #[test]
    fn event_log_matches_tallies() {
        let c = SimConfig::new(CH1, 14, 40_000, 5);
        let (res, events) = simulate_with_events(&c, Execution::Parallel).unwrap();
        assert_eq!(res, simulate(&c).unwrap());
        assert_eq!(events.len() as u64, res.n_readouts);
        assert!(events.windows(2).all(|w| w[0].trial < w[1].trial));
        let clicks: usize = events.iter().map(|e| e.coincidences.len()).sum();
        assert_eq!(clicks as u64, res.as_detection_given_herald);
    }

    #[test]
    fn noise_mean() {
        let l = noise_photon_mean(&CH1, 14);
        assert!((l - 0.01 / 1.7 * 0.093 * (0.842 + 13.0)).abs() < 1e-15);
        let e = expected_event_chsh(&CH1, 14, &ChshSettings::CANONICAL).unwrap();
        assert!((e - 2.4561538087986547).abs() < 1e-9);
    }
}
