use annealing_paths::paths::{make_path, Normalization};
use annealing_paths::sampler::{mh_kernel_step, run_ais, AisConfig, ExactSampler, Kernel, Schedule, State};
use annealing_paths::{materialize, Density, DensitySpec, Representation, Support};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn disc(v: Vec<f64>) -> Density {
    Density::new(Support::discrete(v.len()).unwrap(), v).unwrap()
}

fn node(s: State) -> usize {
    match s {
        State::Node(i) => i,
        State::Point(x) => panic!("expected a node, got {x}"),
    }
}

/// Pearson statistic against the normalized target and its 0.999 critical value.
fn chi_square(counts: &[usize], target: &[f64]) -> (f64, f64) {
    let total: usize = counts.iter().sum();
    let mass: f64 = target.iter().sum();
    let stat = counts
        .iter()
        .zip(target)
        .map(|(&c, &t)| {
            let e = total as f64 * t / mass;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    let crit = ChiSquared::new((counts.len() - 1) as f64).unwrap().inverse_cdf(0.999);
    (stat, crit)
}

#[test]
fn mh_on_three_states_reaches_target() {
    let target = disc(vec![1.0, 2.0, 3.0]);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut counts = [0usize; 3];
    for _ in 0..20_000 {
        let mut x = State::Node(0);
        for _ in 0..60 {
            x = mh_kernel_step(&target, x, 1.0, &mut rng).0;
        }
        counts[node(x)] += 1;
    }
    let (stat, crit) = chi_square(&counts, target.values());
    assert!(stat < crit, "chi-square {stat} >= {crit}, counts {counts:?}");
}

#[test]
fn mh_step_leaves_target_invariant() {
    let target = disc(vec![0.5, 4.0, 1.0, 2.5]);
    let exact = ExactSampler::new(&target).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut counts = [0usize; 4];
    for _ in 0..40_000 {
        let x = mh_kernel_step(&target, exact.sample(&mut rng), 1.0, &mut rng).0;
        counts[node(x)] += 1;
    }
    let (stat, crit) = chi_square(&counts, target.values());
    assert!(stat < crit, "chi-square {stat} >= {crit}, counts {counts:?}");
}

#[test]
fn mh_step_on_grid_keeps_moments() {
    let target = materialize(&DensitySpec::gaussian(1.0, 0.7), Support::grid(-6.0, 8.0, 1401).unwrap()).unwrap();
    let exact = ExactSampler::new(&target).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let n = 40_000;
    let xs: Vec<f64> = (0..n)
        .map(|_| match mh_kernel_step(&target, exact.sample(&mut rng), 0.8, &mut rng).0 {
            State::Point(x) => x,
            State::Node(i) => panic!("expected a point, got node {i}"),
        })
        .collect();
    let m = xs.iter().sum::<f64>() / n as f64;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
    assert!((m - 1.0).abs() < 5.0 * 0.7 / (n as f64).sqrt(), "mean {m}");
    assert!((v - 0.49).abs() < 0.03, "variance {v}");
}

#[test]
fn tiny_steps_are_almost_always_accepted() {
    let target = materialize(&DensitySpec::gaussian(0.0, 1.0), Support::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut x = State::Point(0.3);
    let mut accepted = 0;
    for _ in 0..2000 {
        let (next, ok) = mh_kernel_step(&target, x, 1e-6, &mut rng);
        x = next;
        accepted += ok as usize;
    }
    assert!(accepted >= 1990, "accepted {accepted}");
}

fn two_state(rho: Representation, seed: u64) -> AisConfig {
    AisConfig {
        path: make_path(disc(vec![1.0, 1.0]), disc(vec![2.0, 6.0]), rho, Normalization::Unnormalized).unwrap(),
        schedule: Schedule::linear(10).unwrap(),
        kernel: Kernel::ExactResample,
        chains: 50_000,
        seed,
        record_trace: false,
    }
}

fn standard_error(log_weights: &[f64]) -> f64 {
    let w: Vec<f64> = log_weights.iter().map(|l| l.exp()).collect();
    let k = w.len() as f64;
    let m = w.iter().sum::<f64>() / k;
    (w.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (k - 1.0) / k).sqrt()
}

#[test]
fn geometric_and_q_paths_agree() {
    let g = run_ais(&two_state(Representation::Log, 21)).unwrap();
    let q = run_ais(&two_state(Representation::log_q(0.5), 22)).unwrap();
    let se = standard_error(&g.log_weights).hypot(standard_error(&q.log_weights));
    assert!((g.ratio_estimate - q.ratio_estimate).abs() < 4.0 * se, "{} vs {}", g.ratio_estimate, q.ratio_estimate);
    for r in [&g, &q] {
        assert!((r.ratio_estimate - 4.0).abs() < 4.0 * standard_error(&r.log_weights));
        assert!((r.log_ratio_estimate - r.ratio_estimate.ln()).abs() < 1e-12);
        assert_eq!(r.acceptance_rates.len(), 10);
        assert_eq!(r.acceptance_rates[0], 1.0);
        assert!(r.ess > 0.0 && r.ess <= 50_000.0);
    }
}

#[test]
fn same_seed_same_weights() {
    let a = run_ais(&two_state(Representation::Log, 5)).unwrap();
    let b = run_ais(&two_state(Representation::Log, 5)).unwrap();
    let c = run_ais(&two_state(Representation::Log, 6)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.log_weights, c.log_weights);
}

#[test]
fn trace_ends_at_final_weights() {
    let mut cfg = two_state(Representation::Log, 8);
    cfg.chains = 100;
    cfg.record_trace = true;
    let r = run_ais(&cfg).unwrap();
    let trace = r.trace.as_ref().unwrap();
    assert_eq!(trace.len(), 100);
    for (row, lw) in trace.iter().zip(&r.log_weights) {
        assert_eq!(row.len(), 10);
        assert_eq!(row.last(), Some(lw));
    }
}

#[test]
fn gaussian_mh_run_recovers_mass_ratio() {
    let s = Support::default();
    let cfg = AisConfig {
        path: make_path(
            materialize(&DensitySpec::gaussian(-2.0, 1.0), s).unwrap(),
            materialize(&DensitySpec::gaussian(3.0, 0.5).with_scale(5.0), s).unwrap(),
            Representation::Log,
            Normalization::Unnormalized,
        )
        .unwrap(),
        schedule: Schedule::linear(200).unwrap(),
        kernel: Kernel::RandomWalkMh { step: 0.5, sweeps: 5 },
        chains: 2000,
        seed: 7,
        record_trace: false,
    };
    let r = run_ais(&cfg).unwrap();
    assert!((r.ratio_estimate - 5.0).abs() < 0.25, "estimate {}", r.ratio_estimate);
    assert!(r.acceptance_rates[1..].iter().all(|&a| a > 0.0 && a < 1.0));
}

#[test]
fn bad_configs_are_rejected() {
    assert!(Schedule::new(vec![0.0, 0.6, 0.4, 1.0]).is_err());
    assert!(Schedule::new(vec![0.1, 1.0]).is_err());
    assert!(Schedule::linear(0).is_err());
    let mut cfg = two_state(Representation::Log, 0);
    cfg.chains = 0;
    assert!(run_ais(&cfg).is_err());
}
