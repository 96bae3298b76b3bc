//! The quasi-arithmetic mean minimizes the expected divergence; the minimum is a Jensen gap.
use annealing_paths::divergences::{expected_divergence, suboptimality_gap, rho_tau_bregman};
use annealing_paths::paths::MixtureWeights;
use annealing_paths::verify::suites::{catalog_pairs, label};
use annealing_paths::verify::{barycenter_bruteforce, SearchConfig};
use annealing_paths::{Density, Support};

fn main() -> annealing_paths::Result<()> {
    let s = Support::discrete(5)?;
    let inputs = [
        Density::new(s, vec![0.5, 1.0, 2.0, 0.3, 1.7])?,
        Density::new(s, vec![1.5, 0.2, 0.9, 2.5, 1.1])?,
        Density::new(s, vec![0.8, 2.2, 0.4, 1.0, 0.6])?,
    ];
    let refs: Vec<&Density> = inputs.iter().collect();
    let w = MixtureWeights::new(vec![0.2, 0.5, 0.3])?;
    println!("{:>24} {:>10} {:>12} {:>12}", "pair", "argmin dev", "jensen gap", "E[D] at mean");
    for pair in catalog_pairs() {
        let r = barycenter_bruteforce(&pair, &refs, &w, SearchConfig::default())?;
        println!(
            "{:>24} {:>10.1e} {:>12.8} {:>12.8}",
            format!("({}, {})", label(pair.rho()), label(pair.tau())),
            r.max_abs_deviation,
            r.jensen_gap,
            r.objective_at_mean
        );
    }

    let pair = &catalog_pairs()[0];
    let mu = Density::new(s, vec![1.0; 5])?;
    let mean = barycenter_bruteforce(pair, &refs, &w, SearchConfig::default())?.analytic_mean;
    println!(
        "\nat mu = 1: E[D] = {:.10}, gap = {:.10}, D[mean:mu] = {:.10}",
        expected_divergence(pair, &refs, &w, &mu)?,
        suboptimality_gap(pair, &refs, &w, &mu)?,
        rho_tau_bregman(pair, &mean, &mu)?
    );
    Ok(())
}
