//! A q-mixture of normalized endpoints is a reweighted q-mixture of the unnormalized ones.
use annealing_paths::paths::{make_path, normalized_q_mixture_constant, reparameterize_normalized_q_mixture, Normalization};
use annealing_paths::{materialize, DensitySpec, Representation, Support};

fn main() -> annealing_paths::Result<()> {
    let s = Support::default();
    let u0 = materialize(&DensitySpec::gaussian(-1.0, 1.0), s)?;
    let u1 = materialize(&DensitySpec::gaussian(2.0, 0.8).with_scale(2.0), s)?;
    for q in [0.5, 1.0, 2.0] {
        let rho = Representation::log_q(q);
        let norm = make_path(u0.normalized()?, u1.normalized()?, rho.clone(), Normalization::NormalizeOutput)?;
        let raw = make_path(u0.clone(), u1.clone(), rho, Normalization::NormalizeOutput)?;
        for beta in [0.25, 0.5, 0.75] {
            let bp = reparameterize_normalized_q_mixture(&u0, &u1, beta, q)?;
            let c = normalized_q_mixture_constant(&u0, &u1, beta, q)?;
            let gap = norm
                .evaluate(beta)?
                .values()
                .iter()
                .zip(raw.evaluate(bp)?.values())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            println!("q = {q}, beta = {beta}: beta' = {bp:.6}, c = {c:.6}, max gap {gap:.1e}");
        }
    }
    Ok(())
}
