//! Paths affine in a representation solve the geodesic equation of its connection.
use annealing_paths::paths::{make_path, Normalization};
use annealing_paths::verify::suites::geodesic_endpoints;
use annealing_paths::verify::{convergence_order, geodesic_residual, Connection};
use annealing_paths::{Representation, RhoTauPair};

fn main() -> annealing_paths::Result<()> {
    let (a, b) = geodesic_endpoints()?;
    let kl = RhoTauPair::kl();
    let cases = [
        ("geometric, primal", Representation::Log, kl.clone(), Connection::Primal),
        ("arithmetic, dual", Representation::Identity, kl.clone(), Connection::Dual),
        ("arithmetic under primal", Representation::Identity, kl, Connection::Primal),
        (
            "q = 0.5, primal",
            Representation::log_q(0.5),
            RhoTauPair::new(Representation::log_q(0.5), Representation::log_one_minus_lambda(0.5))?,
            Connection::Primal,
        ),
    ];
    let steps = [1e-2, 5e-3, 2.5e-3, 1e-3];
    for (name, rho, pair, conn) in cases {
        let path = make_path(a.clone(), b.clone(), rho, Normalization::Unnormalized)?;
        println!("{name}");
        let mut prev: Option<(f64, f64)> = None;
        for h in steps {
            let r = geodesic_residual(&path, &pair, conn, &[0.25, 0.5, 0.75], h)?;
            let order = prev.map_or(String::new(), |(h0, r0)| format!("order {:.2}", convergence_order(h0, r0, h, r.max_residual)));
            println!("  h = {h:<7} residual {:.3e}  floor {:.1e}  {order}", r.max_residual, r.rounding_floor);
            prev = Some((h, r.max_residual));
        }
    }
    Ok(())
}
