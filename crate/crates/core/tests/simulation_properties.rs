use aumcf::simulation::{
    generate_dataset, run_operating_characteristics, simulate_subject, true_value_oracle,
    Domain, HarnessOptions, Hypothesis, Method, OracleScale, ScenarioConfig, ScenarioKind,
    SubjectStreams, CovariateMode,
};
use aumcf::Arm;
use proptest::prelude::*;

fn icr(tau: f64) -> ScenarioConfig {
    ScenarioConfig::published(ScenarioKind::Icr, Hypothesis::Null, tau)
}

fn subjects(config: &ScenarioConfig, n: u64) -> Vec<aumcf::SubjectHistory> {
    let base = SubjectStreams::new(config.seed, Domain::Replicate, 0, Arm::One, 0);
    (0..n)
        .map(|i| simulate_subject(config, Arm::One, &base.with_subject(i), format!("s{i}")))
        .collect()
}

fn mean_and_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    (m, xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0))
}

#[test]
fn exponential_marginals() {
    let cfg = icr(4.0).with_seed(21);
    let subs = subjects(&cfg, 100_000);
    let n = subs.len() as f64;
    // X ~ Exp(0.4); P(death) = 0.2 / 0.4.
    let (mx, vx) = mean_and_var(&subs.iter().map(|s| s.follow_up).collect::<Vec<_>>());
    assert!((mx - 2.5).abs() < 3.0 * (vx / n).sqrt(), "mean follow-up {mx}");
    let p_death = subs.iter().filter(|s| s.terminal).count() as f64 / n;
    assert!((p_death - 0.5).abs() < 3.0 * (0.25 / n).sqrt(), "death fraction {p_death}");
    // Events on [0, min(X, 4)]: λ_E E[min(X, 4)] = (1 - e^{-1.6}) / 0.4.
    let counts: Vec<f64> = subs
        .iter()
        .map(|s| s.event_times().filter(|&t| t <= 4.0).count() as f64)
        .collect();
    let (mc, vc) = mean_and_var(&counts);
    let expected = (1.0 - (-1.6f64).exp()) / 0.4;
    assert!((mc - expected).abs() < 3.0 * (vc / n).sqrt(), "mean count {mc} vs {expected}");
    assert!((mc - expected).abs() / expected < 0.02);
}

#[test]
fn frailty_overdispersion() {
    let mut cfg = ScenarioConfig::published(ScenarioKind::Frailty, Hypothesis::Null, 2.0).with_seed(22);
    cfg.censoring_rate = 0.0;
    cfg.arm1.death_rate = 0.0;
    let subs = subjects(&cfg, 200_000);
    let counts: Vec<f64> = subs
        .iter()
        .map(|s| s.event_times().filter(|&t| t <= 2.0).count() as f64)
        .collect();
    let (m, v) = mean_and_var(&counts);
    // Poisson-Gamma mixture: Var/mean = 1 + variance · mean.
    let expected = 1.0 + 3.0 * m;
    assert!((m - 2.0).abs() < 0.05, "mean {m}");
    assert!(v / m > 1.0);
    assert!(((v / m) - expected).abs() / expected < 0.05, "ratio {} vs {expected}", v / m);
}

#[test]
fn oracle_recovers_closed_forms() {
    let scale = OracleScale {
        datasets: 20,
        n_per_arm: 5000,
    };
    let mut cfg = icr(1.0).with_seed(23);
    cfg.arm1.death_rate = 0.0;
    let (est, _) = true_value_oracle(&cfg, scale);
    assert!((est.theta1 - 0.5).abs() / 0.5 < 0.01, "{}", est.theta1);
    let expected = 1.0 / 0.2 - (1.0 - (-0.2f64).exp()) / 0.04;
    assert!((est.theta2 - expected).abs() / expected < 0.01, "{}", est.theta2);

    let (null, mcse) = true_value_oracle(&icr(1.0).with_seed(24), scale);
    assert!(null.difference().abs() < 4.0 * (mcse.theta1.powi(2) + mcse.theta2.powi(2)).sqrt());
}

#[test]
fn parallel_equals_serial() {
    let mut cfg = icr(1.0).with_seed(25).with_replicates(40).with_covariate(CovariateMode::Informative);
    cfg.n_per_arm = 50;
    let mut opts = HarnessOptions {
        methods: vec![Method::Unadjusted, Method::Adjusted],
        ..HarnessOptions::default()
    };
    let par = run_operating_characteristics(&cfg, &opts).unwrap();
    opts.parallel = false;
    let ser = run_operating_characteristics(&cfg, &opts).unwrap();
    assert_eq!(par, ser);
    assert_eq!(par.to_csv(), ser.to_csv());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn datasets_are_pure_functions_of_seed_and_replicate(seed in any::<u64>(), r in 0u64..1000) {
        let mut cfg = ScenarioConfig::published(ScenarioKind::TimeVarying, Hypothesis::Alternative, 4.0).with_seed(seed);
        cfg.n_per_arm = 20;
        let a = generate_dataset(&cfg, r);
        prop_assert_eq!(&a, &generate_dataset(&cfg, r));
        prop_assert_ne!(&a, &generate_dataset(&cfg, r + 1));
        // Adding subjects does not perturb the existing ones.
        let mut bigger = cfg.clone();
        bigger.n_per_arm = 30;
        let b = generate_dataset(&bigger, r);
        prop_assert_eq!(&b.arm1.subjects()[..20], a.arm1.subjects());
    }
}
