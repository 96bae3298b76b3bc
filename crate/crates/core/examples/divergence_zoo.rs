//! Named divergences next to the rho-tau constructions that produce them.
use annealing_paths::divergences::{
    bregman_information, named_divergence, rho_tau_bregman, scaled_divergence, DivergenceKind,
};
use annealing_paths::paths::MixtureWeights;
use annealing_paths::{Density, Representation, RhoTauPair, Support};

fn main() -> annealing_paths::Result<()> {
    let s = Support::discrete(4)?;
    let a = Density::new(s, vec![0.4, 1.2, 2.0, 0.7])?;
    let b = Density::new(s, vec![1.1, 0.3, 1.5, 2.2])?;
    let (q, lambda, beta) = (0.5, 1.5, 0.3);
    let pair = |r: Representation, t: Representation| RhoTauPair::new(r, t);

    let rows: Vec<(&str, f64, f64)> = vec![
        (
            "KL[b:a]",
            rho_tau_bregman(&RhoTauPair::kl(), &a, &b)?,
            named_divergence(&DivergenceKind::KlUnnormalized, &b, &a)?,
        ),
        (
            "Amari(beta)",
            scaled_divergence(&RhoTauPair::kl(), &a, &b, beta)?,
            named_divergence(&DivergenceKind::AmariAlpha { alpha: beta }, &a, &b)?,
        ),
        (
            "Amari(q)",
            rho_tau_bregman(&pair(Representation::log_q(q), Representation::log_one_minus_lambda(q))?, &a, &b)?,
            named_divergence(&DivergenceKind::AmariAlpha { alpha: q }, &a, &b)?,
        ),
        (
            "Beta(2-q)[b:a]",
            rho_tau_bregman(&pair(Representation::log_q(q), Representation::Identity)?, &a, &b)?,
            named_divergence(&DivergenceKind::Beta { order: 2.0 - q }, &b, &a)?,
        ),
        (
            "Zhang(beta,q)",
            scaled_divergence(&pair(Representation::log_q(q), Representation::log_one_minus_lambda(q))?, &a, &b, beta)?,
            named_divergence(&DivergenceKind::ZhangAb { beta, q }, &a, &b)?,
        ),
        (
            "Jensen-Shannon",
            bregman_information(
                &pair(Representation::Identity, Representation::Log)?,
                &[&a, &b],
                &MixtureWeights::pair(beta)?,
            )?
            .value,
            named_divergence(&DivergenceKind::JensenShannon { beta }, &a, &b)?,
        ),
        (
            "Cichocki-Amari",
            rho_tau_bregman(&pair(Representation::log_q(q), Representation::log_one_minus_lambda(lambda))?, &a, &b)?,
            named_divergence(&DivergenceKind::CichockiAmari { q, lambda }, &a, &b)?,
        ),
    ];
    println!("{:>16} {:>20} {:>20} {:>10}", "divergence", "rho-tau", "named", "gap");
    for (name, x, y) in rows {
        println!("{name:>16} {x:>20.15} {y:>20.15} {:>10.1e}", (x - y).abs());
    }
    Ok(())
}
