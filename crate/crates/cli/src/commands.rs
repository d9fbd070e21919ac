use std::path::Path;

use log::info;
use mmqi::chsh::correlation_from_counts;
use mmqi::fitting::{self, DataSeries, FitResult};
use mmqi::geometry::{self, beam_profile, propagate_beam, solid_angle_ratio};
use mmqi::montecarlo::{self, Execution, SimConfig, TrialEvent, SETTING_LABELS};
use mmqi::noise::{
    self, bell_parameter, bell_vs_time, excitation_probability, invert_gamma_for_bell, max_modes,
    noise_suppression_factor, visibility_approx, ChannelParams, DecayKind, DecayModel, ModeLimit, SuppressionMode,
    V1Convention, CH1, CH2,
};
use serde::Serialize;

use crate::config::Format;
use crate::error::CliError;
use crate::output::{ensure_dir, write_json, write_text, CsvTable};
use crate::svg::{self, Markers, Plot, Series};
use crate::{Context, Figure, FitTarget};

const DEFAULT_M: u32 = 14;
const DEFAULT_SEED: u64 = 1;
const DEFAULT_TARGET_SIGMA: f64 = 0.02;

/// Published S(m = 14) measurements: (channel, S, sigma).
const FIG3_ANCHORS: [(&str, f64, f64); 2] = [("CH1", 2.36, 0.03), ("CH2", 2.24, 0.04)];
/// Published storage-time points at m = 14: (channel, t in us, S, sigma).
const FIG4_ANCHORS: [(&str, f64, f64, f64); 2] = [("CH1", 25.0, 2.12, 0.04), ("CH2", 20.0, 2.06, 0.03)];

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
enum Provenance {
    Paper,
    Trivial,
    Derived,
}

#[derive(Debug, Clone, Serialize)]
struct ReportEntry {
    name: String,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma: Option<f64>,
    provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn entry(name: impl Into<String>, value: f64, provenance: Provenance) -> ReportEntry {
    ReportEntry { name: name.into(), value, sigma: None, provenance, note: None }
}

impl ReportEntry {
    fn sigma(mut self, sigma: f64) -> Self {
        self.sigma = Some(sigma);
        self
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Serialize)]
struct Report {
    figure: &'static str,
    description: &'static str,
    entries: Vec<ReportEntry>,
}

fn mode_limit_value(limit: ModeLimit) -> f64 {
    match limit {
        ModeLimit::Finite(m) => f64::from(m),
        ModeLimit::Unbounded => f64::INFINITY,
    }
}

fn s_curve(params: &ChannelParams, ms: &[u32]) -> Result<Vec<(u32, f64, f64)>, CliError> {
    ms.iter()
        .map(|&m| {
            let v = visibility_approx(params, m, V1Convention::UseV0)?;
            Ok((m, v, noise::S_MAX * v))
        })
        .collect()
}

fn curves_table(channels: &[(String, ChannelParams)], ms: &[u32]) -> Result<(CsvTable, Vec<Series>), CliError> {
    let mut table = CsvTable::new(&["channel", "m", "V", "S"]);
    let mut lines = Vec::new();
    for (name, params) in channels {
        let curve = s_curve(params, ms)?;
        for &(m, v, s) in &curve {
            table.push(vec![name.as_str().into(), m.into(), v.into(), s.into()]);
        }
        lines.push(Series {
            label: format!("{name} model"),
            points: curve.iter().map(|&(m, _, s)| (f64::from(m), s)).collect(),
        });
    }
    Ok((table, lines))
}

#[derive(Serialize)]
struct ChannelSummary {
    channel: String,
    params: ChannelParams,
    s_at_14: f64,
    max_modes: ModeLimit,
}

pub fn curves(ctx: &Context) -> Result<(), CliError> {
    let channels = ctx.config.channels()?;
    let ms = ctx.config.m_range(1..=50)?;
    ensure_dir(&ctx.out)?;
    let (table, lines) = curves_table(&channels, &ms)?;
    if ctx.wants(Format::Csv) {
        table.write(&ctx.out, "curves.csv")?;
    }
    if ctx.wants(Format::Json) {
        let summary = channels
            .iter()
            .map(|(name, p)| {
                Ok(ChannelSummary {
                    channel: name.clone(),
                    params: *p,
                    s_at_14: bell_parameter(p, 14, V1Convention::UseV0)?,
                    max_modes: max_modes(p, 2.0, V1Convention::UseV0)?,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        write_json(&ctx.out, "curves.json", &summary)?;
    }
    if ctx.wants(Format::Svg) {
        let plot = Plot {
            title: "Bell parameter vs mode number".into(),
            x_label: "m".into(),
            y_label: "S".into(),
            lines,
            markers: vec![],
            reference_y: Some(2.0),
        };
        write_text(&ctx.out, "curves.svg", &svg::render(&plot))?;
    }
    Ok(())
}

pub struct SimFlags {
    pub m: Option<u32>,
    pub trials: Option<u64>,
    pub target_sigma: Option<f64>,
    pub event_log: bool,
}

#[derive(Serialize)]
struct Rates {
    herald_rate: f64,
    herald_rate_expected: f64,
    per_bin_stokes_rate: Vec<f64>,
    stokes_rate_expected: f64,
    as_clicks_per_readout: f64,
    as_clicks_per_readout_expected: f64,
}

#[derive(Serialize)]
struct SimReport {
    channel: String,
    config: SimConfig,
    s: f64,
    sigma_s: f64,
    expected: f64,
    deviation_sigmas: f64,
    noise_photon_mean: f64,
    rates: Rates,
    counts: montecarlo::SimResult,
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::failure(format!("cannot start {n} worker threads: {e}")))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

pub fn simulate(ctx: &Context, flags: SimFlags) -> Result<(), CliError> {
    let (channel, params) = ctx.config.channel_or_ch1()?;
    let sim = ctx.config.sim.clone().unwrap_or_default();
    let m = flags.m.or(sim.m).unwrap_or(DEFAULT_M);
    let seed = ctx.seed.or(sim.seed).unwrap_or(DEFAULT_SEED);
    let n_trials = match flags.trials.or(sim.n_trials) {
        Some(n) => n,
        None => {
            let target = flags.target_sigma.or(sim.target_sigma).unwrap_or(DEFAULT_TARGET_SIGMA);
            if !(target > 0.0) {
                return Err(CliError::user("target_sigma must be positive"));
            }
            montecarlo::trials_for_sigma(&params, m, target)?
        }
    };
    let mut config = SimConfig::new(params, m, n_trials, seed);
    if let Some(s) = sim.settings {
        config.settings = s;
    }
    if let Some(s) = sim.setting_schedule {
        config.setting_schedule = s;
    }
    if let Some(b) = sim.event_budget {
        config.event_budget = b;
    }
    config.validate()?;
    let event_log = flags.event_log || sim.event_log.unwrap_or(false);
    ensure_dir(&ctx.out)?;
    info!("simulating {n_trials} trials of {m} modes on {channel}");

    let (result, events) = with_pool(ctx.threads, || {
        if event_log {
            montecarlo::simulate_with_events(&config, Execution::Parallel).map(|(r, e)| (r, Some(e)))
        } else {
            montecarlo::simulate_with(&config, Execution::Parallel).map(|r| (r, None))
        }
    })??;
    if let Some(events) = events {
        write_events(&ctx.out, &events)?;
    }

    let mut table = CsvTable::new(&[
        "setting",
        "label",
        "theta_s_deg",
        "theta_as_deg",
        "trials",
        "c11",
        "c12",
        "c21",
        "c22",
        "E",
        "sigma_E",
    ]);
    for (i, (pair, t)) in config.settings.pairs().iter().zip(&result.tables).enumerate() {
        let (e, sigma) = correlation_from_counts(t).unwrap_or((f64::NAN, f64::NAN));
        table.push(vec![
            (i as u64).into(),
            SETTING_LABELS[i].into(),
            pair.theta_s.to_degrees().into(),
            pair.theta_as.to_degrees().into(),
            result.trials_per_setting[i].into(),
            t.c11.into(),
            t.c12.into(),
            t.c21.into(),
            t.c22.into(),
            e.into(),
            sigma.into(),
        ]);
    }
    if ctx.wants(Format::Csv) {
        table.write(&ctx.out, "sim.csv")?;
    }

    let outcome = montecarlo::chsh_outcome(&config, result)?;
    let res = &outcome.result;
    let n = res.n_trials as f64;
    let rates = Rates {
        herald_rate: res.n_heralds as f64 / n,
        herald_rate_expected: montecarlo::herald_probability(&params, m),
        per_bin_stokes_rate: res.per_bin_stokes_counts.iter().map(|&c| c as f64 / n).collect(),
        stokes_rate_expected: noise::p_stokes(&params),
        as_clicks_per_readout: if res.n_readouts > 0 {
            res.as_detection_given_herald as f64 / res.n_readouts as f64
        } else {
            0.0
        },
        as_clicks_per_readout_expected: (params.gamma + outcome.noise_photon_mean) * params.eta_r,
    };
    let report = SimReport {
        channel,
        s: outcome.s,
        sigma_s: outcome.sigma_s,
        expected: outcome.expected,
        deviation_sigmas: (outcome.s - outcome.expected) / outcome.sigma_s,
        noise_photon_mean: outcome.noise_photon_mean,
        rates,
        counts: outcome.result.clone(),
        config,
    };
    write_json(&ctx.out, "sim.json", &report)?;
    println!("S = {:.4} +/- {:.4} (event-level expectation {:.4})", report.s, report.sigma_s, report.expected);
    Ok(())
}

fn write_events(dir: &Path, events: &[TrialEvent]) -> Result<(), CliError> {
    let mut text = String::with_capacity(events.len() * 64);
    for e in events {
        text.push_str(&serde_json::to_string(e)?);
        text.push('\n');
    }
    write_text(dir, "events.jsonl", &text)?;
    Ok(())
}

#[derive(Serialize)]
struct FitReport {
    target: &'static str,
    channel: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    orientation: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decay: Option<DecayKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<u32>,
    value: f64,
    std_error: f64,
    chi2_per_dof: f64,
    n_iterations: usize,
    residuals: Vec<f64>,
}

pub fn fit(ctx: &Context, data: &Path, target: FitTarget, m: u32) -> Result<(), CliError> {
    let file = std::fs::File::open(data)
        .map_err(|e| CliError::user(format!("cannot open data file {}: {e}", data.display())))?;
    let series = DataSeries::from_csv(file).map_err(|e| CliError::user(format!("{}: {e}", data.display())))?;
    let (channel, params) = ctx.config.channel_or_ch1()?;
    ensure_dir(&ctx.out)?;
    let report = match target {
        FitTarget::BetaRatio => {
            let fit = fitting::fit_beta_ratio(&series, &params, V1Convention::UseV0)?;
            let fitted = params.with_beta_ratio(1.0 / fit.value);
            let res = fitting::residual_report(&series, |x| bell_parameter(&fitted, x as u32, V1Convention::UseV0), 0)?;
            fit_report("beta_ratio", channel, fit, res.residuals).orientation("beta_w/beta_r")
        }
        FitTarget::Lifetime => {
            let kind = match ctx.config.decay.map(|d| d.kind) {
                Some(DecayKind::None) => return Err(CliError::user("lifetime fit needs a decay kind other than none")),
                Some(k) => k,
                None => DecayKind::Gaussian,
            };
            let fit = fitting::fit_lifetime(&series, &params, m, kind)?;
            let decay = DecayModel { kind, tau: fit.value };
            let res = fitting::residual_report(&series, |t| bell_vs_time(&params, m, &decay, t), 0)?;
            let mut r = fit_report("lifetime", channel, fit, res.residuals);
            r.decay = Some(kind);
            r.m = Some(m);
            r
        }
    };
    write_json(&ctx.out, "fit.json", &report)?;
    println!("{} = {:.6} +/- {:.6}", report.target, report.value, report.std_error);
    Ok(())
}

fn fit_report(target: &'static str, channel: String, fit: FitResult, residuals: Vec<f64>) -> FitReport {
    FitReport {
        target,
        channel,
        orientation: None,
        decay: None,
        m: None,
        value: fit.value,
        std_error: fit.std_error,
        chi2_per_dof: fit.chi2_per_dof,
        n_iterations: fit.n_iterations,
        residuals,
    }
}

impl FitReport {
    fn orientation(mut self, o: &'static str) -> Self {
        self.orientation = Some(o);
        self
    }
}

#[derive(Serialize)]
struct GeometryReport {
    ch1_ratio: f64,
    ch2_ratio: f64,
    fitted_ratio_ch1: f64,
    path_length_m: f64,
    gaussian_diameter_at_read_collimator_mm: f64,
    stated_diameter_at_read_collimator_mm: f64,
    gaussian_diameter_at_atoms_mm: f64,
    stated_diameter_at_atoms_mm: f64,
}

pub fn geometry(ctx: &Context, samples: usize) -> Result<(), CliError> {
    let presets = geometry::channel_presets();
    ensure_dir(&ctx.out)?;
    let mut table = CsvTable::new(&["channel", "A_w_mm", "A_r_mm", "ratio"]);
    let rows = [("CH1", presets.ch1.geometry), ("CH2", presets.ch2)];
    for (name, g) in rows {
        table.push(vec![
            name.into(),
            (g.write_aperture_diameter * 1e3).into(),
            (g.read_aperture_diameter * 1e3).into(),
            solid_angle_ratio(&g)?.into(),
        ]);
    }
    let profile = beam_profile(&presets.ch1.path, samples)?;
    let mut prof = CsvTable::new(&["z_m", "diameter_mm"]);
    for &(z, d) in &profile {
        prof.push(vec![z.into(), (d * 1e3).into()]);
    }
    if ctx.wants(Format::Csv) {
        table.write(&ctx.out, "geometry.csv")?;
        prof.write(&ctx.out, "beam_profile.csv")?;
    }
    if ctx.wants(Format::Json) {
        let path = &presets.ch1.path;
        let bounds = path.segment_boundaries();
        let report = GeometryReport {
            ch1_ratio: solid_angle_ratio(&presets.ch1.geometry)?,
            ch2_ratio: solid_angle_ratio(&presets.ch2)?,
            fitted_ratio_ch1: CH1.write_read_ratio(),
            path_length_m: path.total_length(),
            gaussian_diameter_at_read_collimator_mm: propagate_beam(path, bounds[1])? * 1e3,
            stated_diameter_at_read_collimator_mm: presets.ch1.stated_read_diameter * 1e3,
            gaussian_diameter_at_atoms_mm: propagate_beam(path, path.total_length())? * 1e3,
            stated_diameter_at_atoms_mm: presets.ch1.stated_atom_diameter * 1e3,
        };
        write_json(&ctx.out, "geometry.json", &report)?;
    }
    if ctx.wants(Format::Svg) {
        let plot = Plot {
            title: "CH1 beam diameter".into(),
            x_label: "z (m)".into(),
            y_label: "diameter (mm)".into(),
            lines: vec![Series {
                label: "Gaussian model".into(),
                points: profile.iter().map(|&(z, d)| (z, d * 1e3)).collect(),
            }],
            markers: vec![],
            reference_y: None,
        };
        write_text(&ctx.out, "beam_profile.svg", &svg::render(&plot))?;
    }
    Ok(())
}

fn presets() -> [(String, ChannelParams); 2] {
    [("CH1".into(), CH1), ("CH2".into(), CH2)]
}

fn anchor_markers() -> Vec<Markers> {
    FIG3_ANCHORS
        .iter()
        .map(|&(name, s, sigma)| Markers { label: format!("{name} measured"), points: vec![(14.0, s, sigma)] })
        .collect()
}

fn model_entries(entries: &mut Vec<ReportEntry>) -> Result<(), CliError> {
    for (name, p) in presets() {
        entries.push(entry(format!("{name}.chi"), p.chi, Provenance::Paper));
        entries.push(entry(format!("{name}.gamma"), p.gamma, Provenance::Paper));
        entries.push(entry(format!("{name}.xi_se"), p.xi_se, Provenance::Paper));
        entries.push(entry(format!("{name}.beta_w_over_beta_r"), p.write_read_ratio(), Provenance::Paper));
        entries.push(entry(format!("{name}.v0"), p.v0, Provenance::Paper));
        entries.push(
            entry(format!("{name}.S_model(m=14)"), bell_parameter(&p, 14, V1Convention::UseV0)?, Provenance::Derived)
                .note("V(1) = v0 convention"),
        );
        entries.push(
            entry(format!("{name}.S_model(m=1)"), bell_parameter(&p, 1, V1Convention::UseV0)?, Provenance::Trivial)
                .note("2 sqrt(2) v0"),
        );
        let limit = max_modes(&p, 2.0, V1Convention::UseV0)?;
        entries.push(entry(format!("{name}.max_modes_model"), mode_limit_value(limit), Provenance::Derived));
    }
    for ((name, s, sigma), published_limit) in FIG3_ANCHORS.iter().zip([42.0, 26.0]) {
        entries.push(entry(format!("{name}.S_measured(m=14)"), *s, Provenance::Paper).sigma(*sigma));
        entries.push(entry(format!("{name}.max_modes_published"), published_limit, Provenance::Paper));
    }
    let ratio = noise_suppression_factor(&CH1, &CH2, SuppressionMode::RatioOnly)?;
    let full = noise_suppression_factor(&CH1, &CH2, SuppressionMode::FullTerm)?;
    entries.push(entry("noise_suppression.published", 1.7, Provenance::Paper));
    entries.push(
        entry("noise_suppression.ratio_only", ratio, Provenance::Derived)
            .note("ratio of the solid-angle ratios; matches the published 1.7-fold figure"),
    );
    entries.push(entry("noise_suppression.full_term", full, Provenance::Derived).note(format!(
        "ratio of beta xi / gamma coefficients; differs from 1.7 by {:.3} because the channels' retrieval efficiencies differ",
        ratio - full
    )));
    let g = geometry::channel_presets();
    entries.push(
        entry("CH1.beta_w_over_beta_r_aperture", solid_angle_ratio(&g.ch1.geometry)?, Provenance::Paper)
            .note("(2.6/1.2)^2 aperture estimate; the fitted value is 1.7"),
    );
    Ok(())
}

pub fn reproduce(ctx: &Context, figure: Figure) -> Result<(), CliError> {
    ensure_dir(&ctx.out)?;
    let channels = presets();
    let mut entries = Vec::new();
    let report = match figure {
        Figure::Fig2 => {
            let mut table = CsvTable::new(&["channel", "m", "chi_m"]);
            let mut lines = Vec::new();
            for (name, p) in &channels {
                let mut pts = Vec::new();
                for m in 1..=14u32 {
                    let chi_m = excitation_probability(p.chi, m)?;
                    table.push(vec![name.as_str().into(), m.into(), chi_m.into()]);
                    pts.push((f64::from(m), chi_m));
                }
                lines.push(Series { label: format!("{name} linear model"), points: pts });
                entries.push(entry(format!("{name}.chi"), p.chi, Provenance::Paper));
                entries.push(entry(
                    format!("{name}.chi_m(m=14)"),
                    excitation_probability(p.chi, 14)?,
                    Provenance::Trivial,
                ));
            }
            emit(ctx, "fig2.csv", &table)?;
            emit_svg(
                ctx,
                "fig2.svg",
                Plot {
                    title: "Excitation probability vs m (linear model only)".into(),
                    x_label: "m".into(),
                    y_label: "chi_m".into(),
                    lines,
                    markers: vec![],
                    reference_y: None,
                },
            )?;
            Report {
                figure: "fig2",
                description: "linear excitation model m*chi; measured values are not published numerically",
                entries,
            }
        }
        Figure::Fig3 | Figure::Fig5 => {
            let (name, ms, description) = match figure {
                Figure::Fig3 => {
                    ("fig3", (1..=14).collect::<Vec<u32>>(), "S(m) model fits with the measured m = 14 anchors")
                }
                _ => ("fig5", (1..=50).collect(), "S(m) model extrapolation with the measured m = 14 anchors"),
            };
            let (table, lines) = curves_table(&channels, &ms)?;
            emit(ctx, &format!("{name}_model.csv"), &table)?;
            let mut anchors = CsvTable::new(&["channel", "m", "S", "sigma"]);
            for (ch, s, sigma) in FIG3_ANCHORS {
                anchors.push(vec![ch.into(), 14u32.into(), s.into(), sigma.into()]);
            }
            emit(ctx, &format!("{name}_anchors.csv"), &anchors)?;
            emit_svg(
                ctx,
                &format!("{name}.svg"),
                Plot {
                    title: "Bell parameter vs mode number".into(),
                    x_label: "m".into(),
                    y_label: "S".into(),
                    lines,
                    markers: anchor_markers(),
                    reference_y: Some(2.0),
                },
            )?;
            model_entries(&mut entries)?;
            Report { figure: name, description, entries }
        }
        Figure::Fig4 => {
            let configured = ctx.config.decay.unwrap_or_default();
            let kind = configured.kind;
            if kind == DecayKind::None {
                return Err(CliError::user("fig4 needs a decay kind other than none"));
            }
            if let Some(tau) = configured.tau {
                DecayModel::new(kind, tau)?;
            }
            let mut model = CsvTable::new(&["channel", "t_us", "S"]);
            let mut anchors = CsvTable::new(&["channel", "t_us", "S", "sigma"]);
            let mut lines = Vec::new();
            let mut markers = Vec::new();
            for ((name, p), (_, t, s, sigma)) in channels.iter().zip(FIG4_ANCHORS) {
                let s0 = bell_parameter(p, DEFAULT_M, V1Convention::UseV0)?;
                let tau = match configured.tau {
                    Some(tau) => tau,
                    None => {
                        let series = DataSeries::from_triples(&[(0.0, s0, sigma), (t, s, sigma)])?;
                        fitting::fit_lifetime(&series, p, DEFAULT_M, kind)?.value
                    }
                };
                let decay = DecayModel::new(kind, tau)?;
                let mut pts = Vec::new();
                for i in 0..=80 {
                    let ti = 0.5 * f64::from(i);
                    let si = bell_vs_time(p, DEFAULT_M, &decay, ti)?;
                    model.push(vec![name.as_str().into(), ti.into(), si.into()]);
                    pts.push((ti, si));
                }
                anchors.push(vec![name.as_str().into(), t.into(), s.into(), sigma.into()]);
                lines.push(Series { label: format!("{name} {kind:?} decay"), points: pts });
                markers.push(Markers { label: format!("{name} measured"), points: vec![(t, s, sigma)] });
                entries.push(entry(format!("{name}.S_measured(t={t}us)"), s, Provenance::Paper).sigma(sigma));
                entries.push(entry(format!("{name}.tau_us"), tau, Provenance::Derived).note(match configured.tau {
                    Some(_) => format!("{kind:?} decay of gamma with the configured lifetime"),
                    None => {
                        format!("{kind:?} decay of gamma fitted through the anchor; the decay law is an assumption")
                    }
                }));
                entries.push(entry(
                    format!("{name}.S_model(t={t}us)"),
                    bell_vs_time(p, DEFAULT_M, &decay, t)?,
                    Provenance::Derived,
                ));
                entries.push(entry(
                    format!("{name}.gamma_at_anchor"),
                    invert_gamma_for_bell(p, DEFAULT_M, s)?,
                    Provenance::Derived,
                ));
                entries.push(entry(format!("{name}.S_model(t=0)"), s0, Provenance::Derived));
            }
            emit(ctx, "fig4_model.csv", &model)?;
            emit(ctx, "fig4_anchors.csv", &anchors)?;
            emit_svg(
                ctx,
                "fig4.svg",
                Plot {
                    title: "Bell parameter vs storage time (m = 14)".into(),
                    x_label: "t (us)".into(),
                    y_label: "S".into(),
                    lines,
                    markers,
                    reference_y: Some(2.0),
                },
            )?;
            Report {
                figure: "fig4",
                description:
                    "S(t) at m = 14 with gamma decaying in storage time, calibrated through the measured points",
                entries,
            }
        }
    };
    write_json(&ctx.out, "report.json", &report)?;
    Ok(())
}

fn emit(ctx: &Context, name: &str, table: &CsvTable) -> Result<(), CliError> {
    if ctx.wants(Format::Csv) {
        table.write(&ctx.out, name)?;
    }
    Ok(())
}

fn emit_svg(ctx: &Context, name: &str, plot: Plot) -> Result<(), CliError> {
    if ctx.wants(Format::Svg) {
        write_text(&ctx.out, name, &svg::render(&plot))?;
    }
    Ok(())
}
