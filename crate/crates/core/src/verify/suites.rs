//! Named, seeded check suites with a machine-readable report.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{barycenter_bruteforce, convergence_order, geodesic_residual, vector_bregman_information_check};
use super::{Connection, SearchConfig, VectorGenerator};
use crate::deformed::{Representation, RhoTauPair};
use crate::density::{materialize, Density, DensitySpec, Support};
use crate::divergences::{
    bregman_information, named_divergence, rho_tau_bregman, scaled_divergence,
    suboptimality_gap, zhang_f, DivergenceKind,
};
use crate::error::{Error, Result};
use crate::parametric::{make_lr_family, parametric_bregman, FamilyGenerator, QExpFamily};
use crate::paths::{
    make_path, normalized_q_mixture_constant, reparameterize_normalized_q_mixture, AnnealingPath, MixtureWeights,
    Normalization,
};

pub const SUITES: [&str; 6] = ["theorem1", "theorem2", "theorem3", "zoo", "limits", "parametric"];

/// Random draws per randomized check.
pub const DRAWS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

struct Checks {
    tol_override: Option<f64>,
    list: Vec<Check>,
}

impl Checks {
    fn push(&mut self, name: impl Into<String>, measured: f64, tolerance: f64, relation: Relation) {
        let tolerance = match relation {
            Relation::AtMost => self.tol_override.unwrap_or(tolerance),
            Relation::AtLeast => tolerance,
        };
        let passed = match relation {
            Relation::AtMost => measured <= tolerance,
            Relation::AtLeast => measured >= tolerance,
        };
        self.list.push(Check {
            name: name.into(),
            measured,
            tolerance,
            relation,
            passed,
        });
    }

    fn at_most(&mut self, name: impl Into<String>, measured: f64, tolerance: f64) {
        self.push(name, measured, tolerance, Relation::AtMost);
    }

    fn at_least(&mut self, name: impl Into<String>, measured: f64, tolerance: f64) {
        self.push(name, measured, tolerance, Relation::AtLeast);
    }
}

/// `|x - y| / max(1, |y|)`.
pub fn rel_err(x: f64, y: f64) -> f64 {
    let d = (x - y).abs() / y.abs().max(1.0);
    if d.is_nan() {
        f64::INFINITY
    } else {
        d
    }
}

/// Short name of a representation for check labels.
pub fn label(r: &Representation) -> String {
    match r {
        Representation::Identity => "id".into(),
        Representation::Log => "log".into(),
        Representation::LogQ { q } => format!("log_q({q})"),
        Representation::LogOneMinusLambda { lambda } => format!("log_1-l({lambda})"),
        Representation::Affine { base, scale, shift } => format!("{scale}*{}+{shift}", label(base)),
    }
}

fn pair_label(p: &RhoTauPair) -> String {
    format!("({},{})", label(p.rho()), label(p.tau()))
}

/// The catalog pairs exercised by the barycenter and identity checks.
pub fn catalog_pairs() -> Vec<RhoTauPair> {
    let mut reps = vec![
        (Representation::Log, Representation::Identity),
        (Representation::Identity, Representation::Identity),
    ];
    for q in [0.5, 2.0] {
        reps.push((Representation::log_q(q), Representation::log_one_minus_lambda(q)));
        reps.push((Representation::log_q(q), Representation::Identity));
        for lambda in [0.5, 1.5] {
            reps.push((Representation::log_q(q), Representation::log_one_minus_lambda(lambda)));
        }
    }
    reps.into_iter()
        .map(|(r, t)| RhoTauPair::new(r, t).expect("catalog pair"))
        .collect()
}

/// Strictly positive random values on a discrete support.
pub fn random_density(rng: &mut ChaCha8Rng, n: usize) -> Density {
    let values = (0..n).map(|_| rng.random_range(0.1..3.0)).collect();
    Density::new(Support::Discrete { n }, values).expect("positive values")
}

/// Random weights on the simplex, bounded away from zero.
pub fn random_weights(rng: &mut ChaCha8Rng, k: usize) -> MixtureWeights {
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let s: f64 = raw.iter().sum();
    let mut w: Vec<f64> = raw.iter().map(|x| x / s).collect();
    let head: f64 = w[..k - 1].iter().sum();
    w[k - 1] = 1.0 - head;
    MixtureWeights::new(w).expect("simplex weights")
}

fn random_tuple(rng: &mut ChaCha8Rng) -> (Vec<Density>, MixtureWeights) {
    let k = [2, 3, 5][rng.random_range(0..3)];
    let n = rng.random_range(2..=64);
    let inputs = (0..k).map(|_| random_density(rng, n)).collect();
    (inputs, random_weights(rng, k))
}

fn refs(v: &[Density]) -> Vec<&Density> {
    v.iter().collect()
}

/// Run one suite by name, or every suite for `"all"`.
pub fn run_suite(name: &str, seed: u64, tol_override: Option<f64>) -> Result<SuiteReport> {
    let names: Vec<&str> = if name == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&name) {
        vec![name]
    } else {
        return Err(Error::Config(format!(
            "unknown suite {name:?}; expected one of {} or all",
            SUITES.join(", ")
        )));
    };
    let mut checks = Checks {
        tol_override,
        list: Vec::new(),
    };
    for n in names {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match n {
            "theorem1" => theorem1(&mut checks, &mut rng)?,
            "theorem2" => theorem2(&mut checks)?,
            "theorem3" => theorem3(&mut checks, &mut rng)?,
            "zoo" => zoo(&mut checks, &mut rng)?,
            "limits" => limits(&mut checks, &mut rng)?,
            "parametric" => parametric(&mut checks)?,
            _ => unreachable!(),
        }
    }
    Ok(SuiteReport {
        suite: name.to_string(),
        seed,
        passed: checks.list.iter().all(|c| c.passed),
        checks: checks.list,
    })
}

fn theorem1(checks: &mut Checks, rng: &mut ChaCha8Rng) -> Result<()> {
    for pair in catalog_pairs() {
        let name = pair_label(&pair);
        let (mut dev, mut opt, mut jensen, mut gap): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
        for _ in 0..DRAWS {
            let (inputs, w) = random_tuple(rng);
            let r = refs(&inputs);
            let rep = barycenter_bruteforce(&pair, &r, &w, SearchConfig::default())?;
            dev = dev.max(rep.max_abs_deviation);
            opt = opt.max(rep.objective_at_mean - rep.objective_at_argmin);
            jensen = jensen.max(rel_err(rep.objective_at_mean, rep.jensen_gap));
            let mu = perturb(rng, &rep.analytic_mean, pair.rho())?;
            let lhs = suboptimality_gap(&pair, &r, &w, &mu)?;
            gap = gap.max(rel_err(lhs, rho_tau_bregman(&pair, &rep.analytic_mean, &mu)?));
        }
        checks.at_most(format!("theorem1.argmin_deviation{name}"), dev, 1e-7);
        checks.at_most(format!("theorem1.mean_optimality{name}"), opt, 1e-9);
        checks.at_most(format!("theorem1.jensen_gap{name}"), jensen, 1e-10);
        checks.at_most(format!("theorem1.suboptimality_gap{name}"), gap, 1e-9);
    }
    Ok(())
}

/// Random multiplicative perturbation kept inside the domain of `rho`.
fn perturb(rng: &mut ChaCha8Rng, d: &Density, rho: &Representation) -> Result<Density> {
    let values: Vec<f64> = d.values().iter().map(|&u| u * rng.random_range(0.5..1.5)).collect();
    if let Some(j) = values.iter().position(|&u| !rho.in_domain(u)) {
        return Err(Error::Domain {
            index: j,
            value: values[j],
            what: "perturbed representative left the domain",
        });
    }
    Density::new(*d.support(), values)
}

/// Endpoints used by the geodesic checks.
pub fn geodesic_endpoints() -> Result<(Density, Density)> {
    let s = Support::default();
    Ok((
        materialize(&DensitySpec::gaussian(-1.0, 1.0), s)?,
        materialize(&DensitySpec::gaussian(2.0, 1.5), s)?,
    ))
}

pub const GEODESIC_BETAS: [f64; 3] = [0.25, 0.5, 0.75];
pub const GEODESIC_STEPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];
pub const GEODESIC_FINE_STEP: f64 = 1e-3;

/// Residuals of a path under one connection at the three coarse steps and the fine step.
pub struct GeodesicSweep {
    pub coarse: Vec<super::GeodesicReport>,
    pub fine: super::GeodesicReport,
}

impl GeodesicSweep {
    pub fn run(path: &AnnealingPath, pair: &RhoTauPair, connection: Connection) -> Result<Self> {
        let coarse = GEODESIC_STEPS
            .iter()
            .map(|&h| geodesic_residual(path, pair, connection, &GEODESIC_BETAS, h))
            .collect::<Result<_>>()?;
        let fine = geodesic_residual(path, pair, connection, &GEODESIC_BETAS, GEODESIC_FINE_STEP)?;
        Ok(Self { coarse, fine })
    }

    /// Smallest observed order between consecutive steps.
    pub fn min_order(&self) -> f64 {
        self.coarse
            .windows(2)
            .map(|w| convergence_order(w[0].step, w[0].max_residual, w[1].step, w[1].max_residual))
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest ratio of residual to its rounding floor over all steps.
    pub fn floor_ratio(&self) -> f64 {
        self.coarse
            .iter()
            .chain(std::iter::once(&self.fine))
            .map(|r| r.max_residual / r.rounding_floor)
            .fold(0.0, f64::max)
    }
}

fn theorem2(checks: &mut Checks) -> Result<()> {
    let (a, b) = geodesic_endpoints()?;
    let path = |rho: Representation| make_path(a.clone(), b.clone(), rho, Normalization::Unnormalized);
    // Paths whose residual is a genuine truncation error.
    let curved = [
        ("geometric", RhoTauPair::kl(), Connection::Primal),
        (
            "q2",
            RhoTauPair::new(Representation::log_q(2.0), Representation::Identity)?,
            Connection::Primal,
        ),
        (
            "geometric_tau",
            RhoTauPair::new(Representation::Identity, Representation::Log)?,
            Connection::Dual,
        ),
    ];
    for (name, pair, conn) in curved {
        let rep = match conn {
            Connection::Primal => pair.rho().clone(),
            Connection::Dual => pair.tau().clone(),
        };
        let sweep = GeodesicSweep::run(&path(rep)?, &pair, conn)?;
        checks.at_least(format!("theorem2.{name}.order"), sweep.min_order(), 1.9);
        checks.at_most(format!("theorem2.{name}.residual_fine"), sweep.fine.max_residual, 1e-4);
    }
    // Paths polynomial in beta: central differences are exact, only rounding remains.
    let exact = [
        (
            "q0.5",
            RhoTauPair::new(Representation::log_q(0.5), Representation::log_one_minus_lambda(0.5))?,
            Connection::Primal,
        ),
        ("arithmetic", RhoTauPair::new(Representation::Identity, Representation::Identity)?, Connection::Primal),
        ("arithmetic_tau", RhoTauPair::kl(), Connection::Dual),
        (
            "q0.5_tau",
            RhoTauPair::new(Representation::log_q(0.5), Representation::log_one_minus_lambda(0.5))?,
            Connection::Dual,
        ),
    ];
    for (name, pair, conn) in exact {
        let rep = match conn {
            Connection::Primal => pair.rho().clone(),
            Connection::Dual => pair.tau().clone(),
        };
        let sweep = GeodesicSweep::run(&path(rep)?, &pair, conn)?;
        checks.at_most(format!("theorem2.{name}.residual_fine"), sweep.fine.max_residual, 1e-4);
        checks.at_most(format!("theorem2.{name}.floor_ratio"), sweep.floor_ratio(), 1.0);
    }
    Ok(())
}

fn theorem3(checks: &mut Checks, rng: &mut ChaCha8Rng) -> Result<()> {
    let gens: [(&str, Representation); 3] = [
        ("quadratic", Representation::Identity),
        ("log_sum_exp", Representation::Log),
        ("log_sum_exp_q", Representation::log_q(0.5)),
    ];
    for (name, rho) in gens {
        let mut dev: f64 = 0.0;
        let mut gap: f64 = 0.0;
        for _ in 0..DRAWS {
            let d = rng.random_range(1..=super::VECTOR_MAX_DIM);
            let k = rng.random_range(2..=super::VECTOR_MAX_INPUTS);
            let inputs: Vec<Vec<f64>> = (0..k)
                .map(|_| (0..d).map(|_| rng.random_range(0.2..3.0)).collect())
                .collect();
            let w = random_weights(rng, k);
            let generator = if name == "quadratic" {
                random_spd(rng, d)
            } else {
                VectorGenerator::LogSumExp
            };
            let r = vector_bregman_information_check(&generator, &rho, &inputs, &w)?;
            dev = dev.max(r.max_abs_deviation);
            gap = gap.max(rel_err(r.objective_at_mean, r.jensen_gap));
        }
        checks.at_most(format!("theorem3.{name}.argmin_deviation"), dev, 1e-6);
        checks.at_most(format!("theorem3.{name}.jensen_gap"), gap, 1e-10);
    }
    Ok(())
}

fn random_spd(rng: &mut ChaCha8Rng, d: usize) -> VectorGenerator {
    let b: Vec<Vec<f64>> = (0..d)
        .map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let matrix = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| (0..d).map(|k| b[i][k] * b[j][k]).sum::<f64>() + if i == j { 0.5 } else { 0.0 })
                .collect()
        })
        .collect();
    VectorGenerator::Quadratic { matrix }
}

fn zoo(checks: &mut Checks, rng: &mut ChaCha8Rng) -> Result<()> {
    let mut worst = [0.0f64; 10];
    let names = [
        ("zoo.kl_pair_is_reverse_kl", 1e-10),
        ("zoo.scaled_kl_pair_is_amari", 1e-9),
        ("zoo.q_pair_is_amari", 1e-9),
        ("zoo.q_identity_pair_is_beta", 1e-9),
        ("zoo.scaled_q_pair_is_zhang", 1e-9),
        ("zoo.dual_kl_pair_is_jensen_shannon", 1e-10),
        ("zoo.general_pair_is_cichocki_amari", 1e-9),
        ("zoo.zhang_is_f_divergence", 1e-9),
        ("zoo.zhang_homogeneity", 1e-10),
        ("zoo.negativity", 1e-10),
    ];
    for _ in 0..DRAWS {
        let n = rng.random_range(2..=64);
        let a = random_density(rng, n);
        let b = random_density(rng, n);
        let beta = rng.random_range(0.05..0.95);
        let q = [0.5, 2.0, rng.random_range(0.1..3.0)][rng.random_range(0..3)];
        let lambda = rng.random_range(0.2..2.0);
        let kl = RhoTauPair::kl();
        let ks = [
            rel_err(rho_tau_bregman(&kl, &a, &b)?, named_divergence(&DivergenceKind::KlUnnormalized, &b, &a)?),
            rel_err(
                scaled_divergence(&kl, &a, &b, beta)?,
                named_divergence(&DivergenceKind::AmariAlpha { alpha: beta }, &a, &b)?,
            ),
            rel_err(
                rho_tau_bregman(&RhoTauPair::new(Representation::log_q(q), Representation::log_one_minus_lambda(q))?, &a, &b)?,
                named_divergence(&DivergenceKind::AmariAlpha { alpha: q }, &a, &b)?,
            ),
            rel_err(
                rho_tau_bregman(&RhoTauPair::new(Representation::log_q(q), Representation::Identity)?, &a, &b)?,
                named_divergence(&DivergenceKind::Beta { order: 2.0 - q }, &b, &a)?,
            ),
            rel_err(
                scaled_divergence(
                    &RhoTauPair::new(Representation::log_q(q), Representation::log_one_minus_lambda(q))?,
                    &a,
                    &b,
                    beta,
                )?,
                named_divergence(&DivergenceKind::ZhangAb { beta, q }, &a, &b)?,
            ),
            rel_err(
                bregman_information(
                    &RhoTauPair::new(Representation::Identity, Representation::Log)?,
                    &[&a, &b],
                    &MixtureWeights::pair(beta)?,
                )?
                .value,
                named_divergence(&DivergenceKind::JensenShannon { beta }, &a, &b)?,
            ),
            rel_err(
                rho_tau_bregman(
                    &RhoTauPair::new(Representation::log_q(q), Representation::log_one_minus_lambda(lambda))?,
                    &a,
                    &b,
                )?,
                named_divergence(&DivergenceKind::CichockiAmari { q, lambda }, &a, &b)?,
            ),
            {
                let f_div: f64 = a
                    .values()
                    .iter()
                    .zip(b.values())
                    .map(|(&x, &y)| x * zhang_f(beta, q, y / x))
                    .sum();
                rel_err(f_div, named_divergence(&DivergenceKind::ZhangAb { beta, q }, &a, &b)?)
            },
            {
                let z = named_divergence(&DivergenceKind::ZhangAb { beta, q }, &a, &b)?;
                let mut e: f64 = 0.0;
                for c in [0.1, 7.0] {
                    let zc = named_divergence(&DivergenceKind::ZhangAb { beta, q }, &a.scaled(c)?, &b.scaled(c)?)?;
                    e = e.max(rel_err(zc, c * z));
                }
                e
            },
            {
                let kinds = [
                    DivergenceKind::KlUnnormalized,
                    DivergenceKind::KlNormalized,
                    DivergenceKind::AmariAlpha { alpha: q },
                    DivergenceKind::Renyi { beta },
                    DivergenceKind::JensenShannon { beta },
                    DivergenceKind::JensenShannonScaled { beta },
                    DivergenceKind::Beta { order: 2.0 - q },
                    DivergenceKind::CichockiAmari { q, lambda },
                    DivergenceKind::ZhangAb { beta, q },
                ];
                let mut most_negative: f64 = 0.0;
                for k in &kinds {
                    most_negative = most_negative.max(-named_divergence(k, &a, &b)?);
                }
                most_negative
            },
        ];
        for (w, k) in worst.iter_mut().zip(ks) {
            *w = w.max(k);
        }
    }
    for ((name, tol), m) in names.iter().zip(worst) {
        checks.at_most(*name, m, *tol);
    }
    Ok(())
}

fn limits(checks: &mut Checks, rng: &mut ChaCha8Rng) -> Result<()> {
    let mut amari = 0.0f64;
    let mut amari_zero = 0.0f64;
    let mut beta2 = 0.0f64;
    let mut is = 0.0f64;
    let mut continuity = 0.0f64;
    for _ in 0..DRAWS {
        let n = rng.random_range(2..=64);
        let a = random_density(rng, n).normalized()?;
        let b = random_density(rng, n).normalized()?;
        let kl_ba = named_divergence(&DivergenceKind::KlUnnormalized, &b, &a)?;
        let kl_ab = named_divergence(&DivergenceKind::KlUnnormalized, &a, &b)?;
        for dq in [1e-3, -1e-3, 1e-5, -1e-5] {
            let near_one = named_divergence(&DivergenceKind::AmariAlpha { alpha: 1.0 + dq }, &a, &b)?;
            amari = amari.max((near_one - kl_ba).abs() / (5.0 * dq.abs()));
            let near_zero = named_divergence(&DivergenceKind::AmariAlpha { alpha: dq }, &a, &b)?;
            amari_zero = amari_zero.max((near_zero - kl_ab).abs() / (5.0 * dq.abs()));
        }
        let half_sq: f64 = a.values().iter().zip(b.values()).map(|(x, y)| 0.5 * (x - y) * (x - y)).sum();
        let via_pair = rho_tau_bregman(&RhoTauPair::new(Representation::log_q(0.0), Representation::Identity)?, &b, &a)?;
        let named = named_divergence(&DivergenceKind::Beta { order: 2.0 }, &a, &b)?;
        beta2 = beta2.max((via_pair - half_sq).abs().max((named - half_sq).abs()) / half_sq);
        let q = 2.0 - 1e-5;
        let is_ab = named_divergence(&DivergenceKind::Beta { order: 0.0 }, &a, &b)?;
        let via_pair = rho_tau_bregman(&RhoTauPair::new(Representation::log_q(q), Representation::Identity)?, &b, &a)?;
        let named = named_divergence(&DivergenceKind::Beta { order: 2.0 - q }, &a, &b)?;
        is = is.max(((via_pair - is_ab).abs().max((named - is_ab).abs())) / is_ab);
        let kl = RhoTauPair::kl();
        for (lim, near) in [(0.0, 1e-6), (1.0, 1.0 - 1e-6)] {
            let l = scaled_divergence(&kl, &a, &b, lim)?;
            continuity = continuity.max((scaled_divergence(&kl, &a, &b, near)? - l).abs() / l);
        }
    }
    checks.at_most("limits.amari_to_kl_near_one", amari, 1.0);
    checks.at_most("limits.amari_to_kl_near_zero", amari_zero, 1.0);
    checks.at_most("limits.beta_order_two_is_half_squared", beta2, 1e-14);
    checks.at_most("limits.beta_to_itakura_saito", is, 1e-4);
    checks.at_most("limits.scaled_divergence_branches", continuity, 1e-4);
    Ok(())
}

fn parametric(checks: &mut Checks) -> Result<()> {
    let s = Support::default();
    let g0 = materialize(&DensitySpec::gaussian(0.0, 1.0), s)?;
    let g1 = materialize(&DensitySpec::gaussian(1.0, 1.5), s)?.scaled(2.0)?;

    let mut amari: f64 = 0.0;
    let base = materialize(&DensitySpec::gaussian(0.0, 1.0), Support::grid(-4.0, 4.0, 801)?)?;
    for q in [0.5, 2.0] {
        let fam = QExpFamily::polynomial(q, base.clone(), &[1, 2])?;
        let (ta, tb) = ([0.2, -0.05], [-0.1, 0.02]);
        let d = parametric_bregman(&fam, &ta, &tb, FamilyGenerator::ScaledZq)?;
        let want = named_divergence(
            &DivergenceKind::AmariAlpha { alpha: q },
            &fam.unnormalized(&ta)?,
            &fam.unnormalized(&tb)?,
        )?;
        amari = amari.max((d - want).abs());
    }
    checks.at_most("parametric.scaled_zq_is_amari", amari, 1e-8);

    let lr = make_lr_family(&g0, &g1, 1.0)?;
    let mut kl: f64 = 0.0;
    let mut renyi: f64 = 0.0;
    for (ba, bb) in [(0.2, 0.7), (0.9, 0.1), (0.5, 0.55)] {
        let d = lr.bregman(ba, bb, FamilyGenerator::LogZ)?;
        let want = named_divergence(&DivergenceKind::KlNormalized, &lr.unnormalized(bb)?, &lr.unnormalized(ba)?)?;
        kl = kl.max((d - want).abs());
    }
    for beta in [0.1, 0.5, 0.8] {
        let gap = lr.scaled_jensen_gap(beta, FamilyGenerator::LogZ)?;
        renyi = renyi.max((gap - named_divergence(&DivergenceKind::Renyi { beta }, &g0, &g1)?).abs());
    }
    checks.at_most("parametric.log_z_is_reverse_kl", kl, 1e-8);
    checks.at_most("parametric.renyi_from_jensen_gap", renyi, 1e-8);

    let mut reparam: f64 = 0.0;
    for q in [0.5, 2.0] {
        for beta in [0.2, 0.5, 0.7] {
            reparam = reparam.max(reparameterization_error(&g0, &g1, beta, q)?);
        }
    }
    checks.at_most("parametric.normalized_mixture_reparameterization", reparam, 1e-10);
    let fixed = reparameterize_normalized_q_mixture(&g0, &g1, 0.3, 1.0)?;
    checks.at_most("parametric.q_one_keeps_beta", (fixed - 0.3).abs(), 0.0);

    let mut linear: f64 = 0.0;
    for q in [0.5, 1.0, 2.0] {
        linear = linear.max(linear_theta_error(q)?);
    }
    checks.at_most("parametric.linear_theta_annealing", linear, 1e-10);
    Ok(())
}

/// Pointwise gap between the normalized-endpoint q-mixture at `beta` and the
/// unnormalized q-mixture at the reparameterized weight, both after normalization,
/// together with the gap to the rescaled unnormalized mixture.
pub fn reparameterization_error(start: &Density, end: &Density, beta: f64, q: f64) -> Result<f64> {
    let rho = Representation::log_q(q);
    let norm = make_path(start.normalized()?, end.normalized()?, rho.clone(), Normalization::NormalizeOutput)?;
    let raw = make_path(start.clone(), end.clone(), rho, Normalization::NormalizeOutput)?;
    let bp = reparameterize_normalized_q_mixture(start, end, beta, q)?;
    let c = normalized_q_mixture_constant(start, end, beta, q)?;
    let shapes = norm
        .evaluate(beta)?
        .values()
        .iter()
        .zip(raw.evaluate(bp)?.values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let scaled = norm
        .values(beta)?
        .iter()
        .zip(&raw.values(bp)?)
        .map(|(x, y)| (x - c * y).abs())
        .fold(0.0, f64::max);
    Ok(shapes.max(scaled))
}

/// Pointwise gap between the q-path joining two members of a q-exponential family
/// and the member at the linearly mixed natural parameter.
pub fn linear_theta_error(q: f64) -> Result<f64> {
    let s = Support::grid(-4.0, 4.0, 401)?;
    let base = materialize(&DensitySpec::gaussian(0.0, 1.0), s)?;
    let fam = QExpFamily::polynomial(q, base.clone(), &[1, 2])?;
    let (t0, t1) = ([0.2, -0.05], [-0.1, 0.02]);
    let path = make_path(fam.unnormalized(&t0)?, fam.unnormalized(&t1)?, Representation::log_q(q), Normalization::Unnormalized)?
        .with_base(base)?;
    let mut worst: f64 = 0.0;
    for beta in [0.1, 0.25, 0.5, 0.9] {
        let tb = [(1.0 - beta) * t0[0] + beta * t1[0], (1.0 - beta) * t0[1] + beta * t1[1]];
        let member = fam.unnormalized(&tb)?;
        for (x, y) in path.values(beta)?.iter().zip(member.values()) {
            worst = worst.max((x - y).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_config_error() {
        assert!(matches!(run_suite("nope", 0, None), Err(Error::Config(_))));
    }

    #[test]
    fn catalog_pairs_are_closed_form() {
        assert!(catalog_pairs().iter().all(RhoTauPair::is_closed_form));
    }
}
