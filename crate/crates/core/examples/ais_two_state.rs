//! AIS on two states with exact resampling; the true ratio of masses is 4.
use annealing_paths::paths::{make_path, Normalization};
use annealing_paths::sampler::{run_ais, AisConfig, Kernel, Schedule};
use annealing_paths::{Density, Representation, Support};

fn main() -> annealing_paths::Result<()> {
    let s = Support::discrete(2)?;
    let start = Density::new(s, vec![1.0, 1.0])?;
    let end = Density::new(s, vec![2.0, 6.0])?;
    for (name, rho) in [("geometric", Representation::Log), ("q = 0.5", Representation::log_q(0.5)), ("arithmetic", Representation::Identity)] {
        for steps in [1, 10, 50] {
            let r = run_ais(&AisConfig {
                path: make_path(start.clone(), end.clone(), rho.clone(), Normalization::Unnormalized)?,
                schedule: Schedule::linear(steps)?,
                kernel: Kernel::ExactResample,
                chains: 100_000,
                seed: 1,
                record_trace: false,
            })?;
            println!("{name:>10} T = {steps:<3} estimate {:.5}  ess {:>9.1}", r.ratio_estimate, r.ess);
        }
    }
    Ok(())
}
