use mmqi::fitting::*;
use mmqi::montecarlo::StreamFactory;
use mmqi::noise::{bell_parameter, bell_vs_time, DecayKind, DecayModel};
use mmqi::{Error, V1Convention, CH1, CH2};
use rand_distr::{Distribution, Normal};

const SIGMA: f64 = 0.03;

fn curve_to(ratio: f64, m_max: u32) -> Vec<(f64, f64)> {
    let p = CH1.with_beta_ratio(1.0 / ratio);
    (1..=m_max).map(|m| (f64::from(m), bell_parameter(&p, m, V1Convention::UseV0).unwrap())).collect()
}

fn curve(ratio: f64) -> Vec<(f64, f64)> {
    curve_to(ratio, 14)
}

fn noisy_to(ratio: f64, m_max: u32, seed: u64, run: u64) -> DataSeries {
    let mut rng = StreamFactory::new(seed).stream(run);
    let normal = Normal::new(0.0, SIGMA).unwrap();
    let pts: Vec<_> =
        curve_to(ratio, m_max).into_iter().map(|(m, s)| (m, s + normal.sample(&mut rng), SIGMA)).collect();
    DataSeries::from_triples(&pts).unwrap()
}

fn noisy(ratio: f64, seed: u64, run: u64) -> DataSeries {
    noisy_to(ratio, 14, seed, run)
}

#[test]
fn noiseless_recovery_and_regeneration() {
    for ratio in [0.5, 1.0, 1.7, 4.69] {
        let pts: Vec<_> = curve(ratio).into_iter().map(|(m, s)| (m, s, SIGMA)).collect();
        let series = DataSeries::from_triples(&pts).unwrap();
        let fit = fit_beta_ratio(&series, &CH1, V1Convention::UseV0).unwrap();
        assert!((fit.value - ratio).abs() < 1e-6, "{ratio}: {}", fit.value);
        assert!(fit.objective_trace.windows(2).all(|w| w[1] <= w[0]));
        for ((_, s), (m, s_fit)) in curve(ratio).iter().zip(curve(fit.value)) {
            assert!((s - s_fit).abs() < 1e-6, "m = {m}");
        }
    }
}

fn coverage(m_max: u32) -> (usize, usize) {
    let mut hits = 0;
    let mut chi2_ok = 0;
    for run in 0..100 {
        let fit = fit_beta_ratio(&noisy_to(1.7, m_max, 2024, run), &CH1, V1Convention::UseV0).unwrap();
        if (fit.value - 1.7).abs() <= 0.2 {
            hits += 1;
        }
        if (0.3..=3.0).contains(&fit.chi2_per_dof) {
            chi2_ok += 1;
        }
    }
    (hits, chi2_ok)
}

// m = 1..50: the ratio's Cramer-Rao sigma is 0.022.
#[test]
fn noisy_recovery_coverage() {
    let (hits, chi2_ok) = coverage(50);
    assert!(hits >= 95, "{hits}/100 within 0.2");
    assert!(chi2_ok >= 97, "{chi2_ok}/100 with plausible chi2");
}

// m = 1..14 only: sigma 0.114, so about 92 % of runs land within 0.2.
#[test]
fn noisy_recovery_short_range() {
    let (hits, chi2_ok) = coverage(14);
    assert!((84..=99).contains(&hits), "{hits}/100 within 0.2");
    assert!(chi2_ok >= 90, "{chi2_ok}/100 with plausible chi2");
}

#[test]
fn reciprocal_parameterization_agrees() {
    for run in 0..10 {
        let series = noisy(1.7, 7, run);
        let wr = fit_beta_ratio_oriented(&series, &CH1, V1Convention::UseV0, RatioOrientation::WriteOverRead).unwrap();
        let rw = fit_beta_ratio_oriented(&series, &CH1, V1Convention::UseV0, RatioOrientation::ReadOverWrite).unwrap();
        assert!((wr.value * rw.value - 1.0).abs() < 1e-6, "{} vs {}", wr.value, rw.value);
    }
}

#[test]
fn common_sigma_scale_only_moves_std_error() {
    let series = noisy(1.7, 99, 0);
    let a = fit_beta_ratio(&series, &CH1, V1Convention::UseV0).unwrap();
    let b = fit_beta_ratio(&series.with_scaled_sigma(3.0).unwrap(), &CH1, V1Convention::UseV0).unwrap();
    assert!((a.value - b.value).abs() < 1e-6);
    assert!((b.std_error / a.std_error - 3.0).abs() < 1e-3);
}

#[test]
fn single_anchor_inversion() {
    let series = DataSeries::from_triples(&[
        (1.0, bell_parameter(&CH1, 1, V1Convention::UseV0).unwrap(), SIGMA),
        (14.0, 2.36, SIGMA),
    ])
    .unwrap();
    let fit = fit_beta_ratio(&series, &CH1, V1Convention::UseV0).unwrap();
    assert!((fit.value - 1.69).abs() <= 0.02, "{}", fit.value);
    assert!((fit.value - 1.6887447676322436).abs() < 1e-6);
}

#[test]
fn lifetime_round_trip() {
    for kind in [DecayKind::Exponential, DecayKind::Gaussian] {
        let decay = DecayModel::new(kind, 30.0).unwrap();
        let pts: Vec<_> =
            (0..6).map(|i| f64::from(i) * 8.0).map(|t| (t, bell_vs_time(&CH2, 14, &decay, t).unwrap(), 0.03)).collect();
        let fit = fit_lifetime(&DataSeries::from_triples(&pts).unwrap(), &CH2, 14, kind).unwrap();
        assert!((fit.value - 30.0).abs() < 1e-5, "{kind:?}: {}", fit.value);
        for &(t, s, _) in &pts {
            let back = bell_vs_time(&CH2, 14, &DecayModel::new(kind, fit.value).unwrap(), t).unwrap();
            assert!((back - s).abs() < 1e-6);
        }
    }
}

#[test]
fn unidentifiable_and_bad_input() {
    let one = DataSeries::from_triples(&[(14.0, 2.36, 0.03)]).unwrap();
    assert!(matches!(fit_beta_ratio(&one, &CH1, V1Convention::UseV0), Err(Error::Unidentifiable(_))));
    let flat = DataSeries::from_triples(&[(1.0, 2.5, 0.03), (1.5, 2.4, 0.03)]).unwrap();
    assert!(matches!(fit_beta_ratio(&flat, &CH1, V1Convention::UseV0), Err(Error::InvalidArgument(_))));
    assert!(DataSeries::from_triples(&[(1.0, 2.5, 0.0)]).is_err());
    assert!(DataSeries::from_triples(&[(1.0, 2.5, 0.1), (1.0, 2.4, 0.1)]).is_err());
    assert!(matches!(
        fit_lifetime(
            &DataSeries::from_triples(&[(0.0, 2.3, 0.1), (5.0, 2.2, 0.1)]).unwrap(),
            &CH1,
            14,
            DecayKind::None
        ),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn csv_round_trip_and_errors() {
    let series = noisy(1.7, 5, 3);
    let mut buf = Vec::new();
    series.write_csv(&mut buf).unwrap();
    let back = DataSeries::from_csv(buf.as_slice()).unwrap();
    for (a, b) in series.points().iter().zip(back.points()) {
        assert!(((a.s - b.s) / a.s).abs() <= 5e-12);
        assert_eq!(a.x, b.x);
    }

    let text = "# comment\nx,s,sigma\n1,2.5,0.03\n# mid\n14,oops,0.03\n";
    match DataSeries::from_csv(text.as_bytes()) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
        other => panic!("{other:?}"),
    }
    match DataSeries::from_csv("x,s\n1,2\n".as_bytes()) {
        Err(Error::Parse { line, message }) => {
            assert_eq!(line, 1);
            assert!(message.contains("sigma"));
        }
        other => panic!("{other:?}"),
    }
}
