//! Geometric, arithmetic and q-paths between two Gaussians of different mass.
use annealing_paths::paths::{make_path, Normalization};
use annealing_paths::{materialize, DensitySpec, Representation, Support};

fn main() -> annealing_paths::Result<()> {
    let s = Support::default();
    let start = materialize(&DensitySpec::gaussian(-3.0, 1.0), s)?;
    let end = materialize(&DensitySpec::gaussian(3.0, 1.0).with_scale(4.0), s)?;
    let paths = [
        ("arithmetic", Representation::Identity),
        ("q = 0.5", Representation::log_q(0.5)),
        ("geometric", Representation::Log),
        ("q = 2", Representation::log_q(2.0)),
    ];
    println!("{:>12} {:>6} {:>10} {:>8} {:>8}", "path", "beta", "mass", "mode", "modes");
    for (name, rho) in paths {
        let path = make_path(start.clone(), end.clone(), rho, Normalization::Unnormalized)?;
        for beta in [0.25, 0.5, 0.75] {
            let d = path.evaluate(beta)?;
            let v = d.values();
            let (mode, _) = v
                .iter()
                .enumerate()
                .fold((0, f64::MIN), |best, (i, &x)| if x > best.1 { (i, x) } else { best });
            let peaks = (1..v.len() - 1).filter(|&i| v[i] > v[i - 1] && v[i] >= v[i + 1]).count();
            println!("{name:>12} {beta:>6} {:>10.5} {:>8.2} {peaks:>8}", d.mass()?, s.node(mode));
        }
    }
    Ok(())
}
