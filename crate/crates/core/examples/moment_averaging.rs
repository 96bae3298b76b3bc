//! Moment averaging mixes mean parameters instead of natural parameters.
use annealing_paths::paths::{moment_average_path, MomentFamily};

fn main() -> annealing_paths::Result<()> {
    let g = MomentFamily::Gaussian;
    let (t0, t1) = (MomentFamily::gaussian_natural(0.0, 1.0), MomentFamily::gaussian_natural(4.0, 2.0));
    println!("{:>6} {:>22} {:>22}", "beta", "moment (mean, var)", "geometric (mean, var)");
    for beta in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let m = g.natural_to_mean(&moment_average_path(g, &t0, &t1, beta)?)?;
        let mixed: Vec<f64> = t0.iter().zip(&t1).map(|(a, b)| (1.0 - beta) * a + beta * b).collect();
        let n = g.natural_to_mean(&mixed)?;
        println!(
            "{beta:>6} {:>22} {:>22}",
            format!("({:.4}, {:.4})", m[0], m[1] - m[0] * m[0]),
            format!("({:.4}, {:.4})", n[0], n[1] - n[0] * n[0])
        );
    }
    let b = MomentFamily::Bernoulli;
    let mid = moment_average_path(b, &[-2.0], &[3.0], 0.5)?;
    println!("\nbernoulli logits -2 and 3: moment midpoint p = {:.6}", b.natural_to_mean(&mid)?[0]);
    Ok(())
}
