//! q-exponential families: normalizers, parametric Bregman divergences and the
//! likelihood-ratio family of a q-path.
use annealing_paths::divergences::{named_divergence, DivergenceKind};
use annealing_paths::parametric::{make_lr_family, parametric_bregman, FamilyGenerator, QExpFamily};
use annealing_paths::{materialize, DensitySpec, Support};

fn main() -> annealing_paths::Result<()> {
    let grid = Support::grid(-4.0, 4.0, 801)?;
    let base = materialize(&DensitySpec::gaussian(0.0, 1.0), grid)?;
    let (ta, tb) = ([0.2, -0.05], [-0.1, 0.02]);
    for q in [0.5, 1.0, 2.0] {
        let fam = QExpFamily::polynomial(q, base.clone(), &[1, 2])?;
        let d = parametric_bregman(&fam, &ta, &tb, FamilyGenerator::ScaledZq)?;
        let amari = named_divergence(&DivergenceKind::AmariAlpha { alpha: q }, &fam.unnormalized(&ta)?, &fam.unnormalized(&tb)?)?;
        println!("q = {q}: Z_q(ta) = {:.8}, D[ta:tb] = {d:.12}, Amari(q) = {amari:.12}", fam.z_q(&ta)?);
    }

    let s = Support::default();
    let p0 = materialize(&DensitySpec::gaussian(0.0, 1.0), s)?;
    let p1 = materialize(&DensitySpec::gaussian(1.0, 1.0), s)?;
    let lr = make_lr_family(&p0, &p1, 1.0)?;
    println!("\ngeometric family N(0,1) -> N(1,1): Z(0.5) = {:.12}, exp(-1/8) = {:.12}", lr.z_q(0.5)?, (-0.125f64).exp());
    for beta in [0.2, 0.5, 0.8] {
        let gap = lr.scaled_jensen_gap(beta, FamilyGenerator::LogZ)?;
        let renyi = named_divergence(&DivergenceKind::Renyi { beta }, &p0, &p1)?;
        println!("  beta = {beta}: scaled gap of ln Z {gap:.12}, renyi {renyi:.12}");
    }
    let zq = make_lr_family(&p0, &p1.scaled(2.0)?, 0.5)?;
    println!(
        "q = 0.5 family to 2 N(1,1): zhang via normalizers {:.12}, named {:.12}",
        zq.scaled_jensen_gap(0.3, FamilyGenerator::ScaledZq)?,
        named_divergence(&DivergenceKind::ZhangAb { beta: 0.3, q: 0.5 }, &p0, &p1.scaled(2.0)?)?
    );
    Ok(())
}
