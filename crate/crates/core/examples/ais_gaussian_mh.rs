//! AIS with random-walk Metropolis between Gaussians on a grid; the true ratio is 5.
use annealing_paths::paths::{make_path, Normalization};
use annealing_paths::sampler::{run_ais, AisConfig, Kernel, Schedule};
use annealing_paths::{materialize, DensitySpec, Representation, Support};

fn main() -> annealing_paths::Result<()> {
    let s = Support::default();
    let start = materialize(&DensitySpec::gaussian(-2.0, 1.0), s)?;
    let end = materialize(&DensitySpec::gaussian(3.0, 0.5).with_scale(5.0), s)?;
    for steps in [20, 50, 200] {
        let r = run_ais(&AisConfig {
            path: make_path(start.clone(), end.clone(), Representation::Log, Normalization::Unnormalized)?,
            schedule: Schedule::linear(steps)?,
            kernel: Kernel::RandomWalkMh { step: 0.5, sweeps: 5 },
            chains: 2000,
            seed: 7,
            record_trace: false,
        })?;
        let acc = r.acceptance_rates[1..].iter().sum::<f64>() / (r.acceptance_rates.len() - 1).max(1) as f64;
        println!("T = {steps:<4} estimate {:.4}  log {:.4}  ess {:>7.1}  mean acceptance {acc:.3}", r.ratio_estimate, r.log_ratio_estimate, r.ess);
    }
    Ok(())
}
