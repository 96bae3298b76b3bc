//! Rho-tau Bregman divergences, Bregman information, and named divergences.
//!
//! ```text
//! D_f[rho(a) : rho(b)] = int f(rho a) - f(rho b) - (rho a - rho b) f'(rho b)
//! I_f(u; w)            = sum_i w_i Psi_f[rho u_i] - Psi_f[rho mu*]     (Jensen gap)
//! D^(beta)[u0 : u1]    = I_f((u0, u1); (1 - beta, beta)) / (beta (1 - beta))
//! ```
//!
//! | pair                           | `D_f[rho a : rho b]`       |
//! |--------------------------------|----------------------------|
//! | `(Log, Identity)`              | `KL[b : a]`                |
//! | `(LogQ q, LogOneMinusLambda q)`| `AmariAlpha(q)[a : b]`     |
//! | `(LogQ q, Identity)`           | `Beta(2 - q)[b : a]`       |
//! | `(LogQ q, LogOneMinusLambda l)`| `CichockiAmari(q, l)[a : b]` |

use serde::{Deserialize, Serialize};

use crate::deformed::{Representation, RhoTauPair, Q_EPS};
use crate::density::Density;
use crate::error::{Error, Result};
use crate::paths::{quasi_arithmetic_mean, MixtureWeights};

/// `scaled_divergence` switches to its limit branches this close to 0 or 1.
pub const BETA_LIMIT_EPS: f64 = 1e-7;

fn integrate(a: &Density, b: &Density, term: impl Fn(f64, f64) -> Result<f64>) -> Result<f64> {
    a.ensure_same_support(b)?;
    let mut s = 0.0;
    for (j, ((&x, &y), &w)) in a.values().iter().zip(b.values()).zip(a.weights()).enumerate() {
        s += w * term(x, y).map_err(|e| e.at_index(j))?;
    }
    if s.is_finite() {
        Ok(s)
    } else {
        Err(Error::Overflow(format!("divergence integral is {s}")))
    }
}

/// `D_f[rho(a) : rho(b)]` by quadrature.
pub fn rho_tau_bregman(pair: &RhoTauPair, a: &Density, b: &Density) -> Result<f64> {
    let rho = pair.rho();
    integrate(a, b, |x, y| pair.bregman_term(rho.apply(x)?, rho.apply(y)?))
}

/// `D_{f*}[tau(a) : tau(b)]`, which equals `D_f[rho(b) : rho(a)]`.
pub fn dual_rho_tau_bregman(pair: &RhoTauPair, a: &Density, b: &Density) -> Result<f64> {
    let d = pair.dual();
    let tau = pair.tau();
    integrate(a, b, |x, y| d.bregman_term(tau.apply(x)?, tau.apply(y)?))
}

/// Jensen gap of `Psi_f` at the quasi-arithmetic mean.
#[derive(Debug, Clone)]
pub struct BregmanInformation {
    pub value: f64,
    /// The quasi-arithmetic mean, the unique minimizer of the expected divergence.
    pub minimizer: Density,
    /// Pointwise gap `sum_i w_i f(rho u_i(x)) - f(rho mu*(x))`.
    pub per_point: Vec<f64>,
}

fn check_inputs(inputs: &[&Density], weights: &MixtureWeights) -> Result<()> {
    if inputs.is_empty() || inputs.len() != weights.as_slice().len() {
        return Err(Error::param(format!(
            "{} inputs for {} weights",
            inputs.len(),
            weights.as_slice().len()
        )));
    }
    for d in &inputs[1..] {
        inputs[0].ensure_same_support(d)?;
    }
    Ok(())
}

pub fn bregman_information(
    pair: &RhoTauPair,
    inputs: &[&Density],
    weights: &MixtureWeights,
) -> Result<BregmanInformation> {
    check_inputs(inputs, weights)?;
    let minimizer = quasi_arithmetic_mean(inputs, weights, pair.rho())?;
    let w = weights.as_slice();
    let rho = pair.rho();
    let mut per_point = Vec::with_capacity(minimizer.len());
    for j in 0..minimizer.len() {
        let first = inputs[0].values()[j];
        if inputs.iter().all(|d| d.values()[j] == first) {
            // (1 - b) r + b r need not round back to r, and the gap is scaled by 1/(b(1 - b))
            rho.apply(first).map_err(|e| e.at_index(j))?;
            per_point.push(0.0);
            continue;
        }
        let mut mean_rep = 0.0;
        let mut mean_f = 0.0;
        for (d, &wi) in inputs.iter().zip(w) {
            if wi == 0.0 {
                continue;
            }
            let r = rho.apply(d.values()[j]).map_err(|e| e.at_index(j))?;
            mean_rep += wi * r;
            mean_f += wi * pair.f(r).map_err(|e| e.at_index(j))?;
        }
        per_point.push(mean_f - pair.f(mean_rep).map_err(|e| e.at_index(j))?);
    }
    let value = minimizer.quadrature(|j| per_point[j]);
    if !value.is_finite() {
        return Err(Error::Overflow(format!("Bregman information is {value}")));
    }
    Ok(BregmanInformation {
        value,
        minimizer,
        per_point,
    })
}

/// `sum_i w_i D_f[rho(u_i) : rho(mu)]`.
pub fn expected_divergence(
    pair: &RhoTauPair,
    inputs: &[&Density],
    weights: &MixtureWeights,
    mu: &Density,
) -> Result<f64> {
    check_inputs(inputs, weights)?;
    let mut s = 0.0;
    for (d, &wi) in inputs.iter().zip(weights.as_slice()) {
        if wi > 0.0 {
            s += wi * rho_tau_bregman(pair, d, mu)?;
        }
    }
    Ok(s)
}

/// Excess of the expected divergence at `mu` over its minimum.
pub fn suboptimality_gap(
    pair: &RhoTauPair,
    inputs: &[&Density],
    weights: &MixtureWeights,
    mu: &Density,
) -> Result<f64> {
    Ok(expected_divergence(pair, inputs, weights, mu)? - bregman_information(pair, inputs, weights)?.value)
}

/// Bregman information of two endpoints divided by `beta (1 - beta)`.
///
/// Near `beta = 0` this tends to `D_f[rho(u1) : rho(u0)]` and near `beta = 1` to
/// `D_f[rho(u0) : rho(u1)]`; those limits are used within [`BETA_LIMIT_EPS`].
pub fn scaled_divergence(pair: &RhoTauPair, start: &Density, end: &Density, beta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::param(format!("beta must lie in [0, 1], got {beta}")));
    }
    if beta < BETA_LIMIT_EPS {
        return rho_tau_bregman(pair, end, start);
    }
    if 1.0 - beta < BETA_LIMIT_EPS {
        return rho_tau_bregman(pair, start, end);
    }
    let w = MixtureWeights::pair(beta)?;
    Ok(bregman_information(pair, &[start, end], &w)?.value / (beta * (1.0 - beta)))
}

/// Named divergences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DivergenceKind {
    /// `int a ln(a/b) - a + b`.
    KlUnnormalized,
    /// KL between the normalized inputs.
    KlNormalized,
    AmariAlpha { alpha: f64 },
    /// `-ln(int p0^(1-b) p1^b) / (b (1-b))` between the normalized inputs.
    Renyi { beta: f64 },
    /// `(1-b) KL[a : m] + b KL[b : m]`, `m = (1-b) a + b b`.
    JensenShannon { beta: f64 },
    /// Jensen-Shannon divided by `beta (1 - beta)`.
    JensenShannonScaled { beta: f64 },
    Beta { order: f64 },
    CichockiAmari { q: f64, lambda: f64 },
    ZhangAb { beta: f64, q: f64 },
    RhoTauGeneric { rho: Representation, tau: Representation },
}

/// A named divergence value with the masses of its inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NamedValue {
    pub value: f64,
    pub masses: [f64; 2],
}

fn open_unit(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must lie in (0, 1), got {x}")))
    }
}

fn finite_param(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must be finite, got {x}")))
    }
}

fn positive_pair(x: f64, y: f64) -> Result<()> {
    if x > 0.0 && y > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            index: 0,
            value: if x > 0.0 { y } else { x },
            what: "divergence needs strictly positive values here",
        })
    }
}

fn kl_term(x: f64, y: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(y);
    }
    if y == 0.0 {
        return Err(Error::Domain {
            index: 0,
            value: y,
            what: "KL needs b > 0 wherever a > 0",
        });
    }
    Ok(x * (x / y).ln() - x + y)
}

fn amari_term(alpha: f64, x: f64, y: f64) -> Result<f64> {
    if x > 0.0 && y > 0.0 {
        let r = (y / x).ln();
        return Ok((alpha * (y - x) - x * (alpha * r).exp_m1()) / (alpha * (1.0 - alpha)));
    }
    let cross = x.powf(1.0 - alpha) * y.powf(alpha);
    let v = x / alpha + y / (1.0 - alpha) - cross / (alpha * (1.0 - alpha));
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain {
            index: 0,
            value: if x == 0.0 { x } else { y },
            what: "alpha-divergence undefined at a zero value for this alpha",
        })
    }
}

fn beta_term(order: f64, x: f64, y: f64) -> Result<f64> {
    if (order - 2.0).abs() < Q_EPS {
        let d = x - y;
        return Ok(0.5 * d * d);
    }
    if (order - 1.0).abs() < Q_EPS {
        return kl_term(x, y);
    }
    if order.abs() < Q_EPS {
        positive_pair(x, y)?;
        let r = x / y;
        return Ok(r - r.ln() - 1.0);
    }
    let v = if x > 0.0 && y > 0.0 {
        // y^o [r (r^(o-1) - 1) / (o-1) - (r - 1)] / o, no 1/(o-1) cancellation near o = 1
        let (r, d) = (x / y, order - 1.0);
        y.powf(order) * (r * (d * r.ln()).exp_m1() / d - (r - 1.0)) / order
    } else {
        x.powf(order) / (order * (order - 1.0)) + y.powf(order) / order - x * y.powf(order - 1.0) / (order - 1.0)
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain {
            index: 0,
            value: y,
            what: "beta divergence undefined at a zero value for this order",
        })
    }
}

fn jensen_shannon(beta: f64, a: &Density, b: &Density) -> Result<f64> {
    integrate(a, b, |x, y| {
        let m = (1.0 - beta) * x + beta * y;
        let part = |u: f64| if u == 0.0 { 0.0 } else { u * (u / m).ln() };
        Ok((1.0 - beta) * part(x) + beta * part(y))
    })
}

fn cichocki_amari(q: f64, lambda: f64, a: &Density, b: &Density) -> Result<f64> {
    let k = lambda + 1.0 - q;
    if (1.0 - q).abs() < Q_EPS || lambda.abs() < Q_EPS || k.abs() < Q_EPS {
        // Degenerate exponents: evaluate the limit through its generator.
        let pair = RhoTauPair::new_numerical(Representation::log_q(q), Representation::log_one_minus_lambda(lambda))?;
        return rho_tau_bregman(&pair, a, b);
    }
    let c = 1.0 / (lambda * (1.0 - q) * k);
    integrate(a, b, |x, y| {
        positive_pair(x, y)?;
        Ok(c * ((1.0 - q) * x.powf(k) + lambda * y.powf(k) - k * x.powf(1.0 - q) * y.powf(lambda)))
    })
}

fn zhang(beta: f64, q: f64, a: &Density, b: &Density) -> Result<f64> {
    if q.abs() < Q_EPS {
        return Ok(jensen_shannon(beta, a, b)? / (beta * (1.0 - beta)));
    }
    let rho = Representation::log_q(q);
    let w = [1.0 - beta, beta];
    let c = 1.0 / (beta * (1.0 - beta) * q);
    integrate(a, b, |x, y| {
        let m = rho.quasi_mean(&[x, y], &w)?;
        Ok(c * ((1.0 - beta) * x + beta * y - m))
    })
}

fn renyi(beta: f64, a: &Density, b: &Density) -> Result<f64> {
    let (p0, p1) = (a.normalized()?, b.normalized()?);
    if beta.abs() < Q_EPS {
        return integrate(&p1, &p0, kl_term);
    }
    if (1.0 - beta).abs() < Q_EPS {
        return integrate(&p0, &p1, kl_term);
    }
    let z = integrate(&p0, &p1, |x, y| Ok(x.powf(1.0 - beta) * y.powf(beta)))?;
    if z <= 0.0 {
        return Err(Error::ZeroMass);
    }
    Ok(-z.ln() / (beta * (1.0 - beta)))
}

/// Evaluate a named divergence and record input masses.
pub fn evaluate_named(kind: &DivergenceKind, a: &Density, b: &Density) -> Result<NamedValue> {
    a.ensure_same_support(b)?;
    let masses = [a.mass()?, b.mass()?];
    let value = match *kind {
        DivergenceKind::KlUnnormalized => integrate(a, b, kl_term)?,
        DivergenceKind::KlNormalized => integrate(&a.normalized()?, &b.normalized()?, kl_term)?,
        DivergenceKind::AmariAlpha { alpha } => {
            finite_param("alpha", alpha)?;
            if alpha.abs() < Q_EPS {
                integrate(a, b, kl_term)?
            } else if (1.0 - alpha).abs() < Q_EPS {
                integrate(b, a, kl_term)?
            } else {
                integrate(a, b, |x, y| amari_term(alpha, x, y))?
            }
        }
        DivergenceKind::Renyi { beta } => {
            if !(0.0..=1.0).contains(&beta) {
                return Err(Error::param(format!("beta must lie in [0, 1], got {beta}")));
            }
            renyi(beta, a, b)?
        }
        DivergenceKind::JensenShannon { beta } => {
            open_unit("beta", beta)?;
            jensen_shannon(beta, a, b)?
        }
        DivergenceKind::JensenShannonScaled { beta } => {
            open_unit("beta", beta)?;
            jensen_shannon(beta, a, b)? / (beta * (1.0 - beta))
        }
        DivergenceKind::Beta { order } => {
            finite_param("order", order)?;
            integrate(a, b, |x, y| beta_term(order, x, y))?
        }
        DivergenceKind::CichockiAmari { q, lambda } => {
            finite_param("q", q)?;
            finite_param("lambda", lambda)?;
            cichocki_amari(q, lambda, a, b)?
        }
        DivergenceKind::ZhangAb { beta, q } => {
            open_unit("beta", beta)?;
            finite_param("q", q)?;
            zhang(beta, q, a, b)?
        }
        DivergenceKind::RhoTauGeneric { ref rho, ref tau } => {
            rho_tau_bregman(&RhoTauPair::new(rho.clone(), tau.clone())?, a, b)?
        }
    };
    Ok(NamedValue { value, masses })
}

pub fn named_divergence(kind: &DivergenceKind, a: &Density, b: &Density) -> Result<f64> {
    Ok(evaluate_named(kind, a, b)?.value)
}

/// The convex function `f` with `ZhangAb(beta, q)[a : b] = int a f(b / a)`.
pub fn zhang_f(beta: f64, q: f64, u: f64) -> f64 {
    let m = if (1.0 - q).abs() < Q_EPS {
        u.powf(beta)
    } else {
        ((1.0 - beta) + beta * u.powf(1.0 - q)).powf(1.0 / (1.0 - q))
    };
    ((1.0 - beta) + beta * u - m) / (beta * (1.0 - beta) * q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{materialize, DensitySpec, Support};

    fn disc(v: &[f64]) -> Density {
        Density::new(Support::discrete(v.len()).unwrap(), v.to_vec()).unwrap()
    }

    #[test]
    fn kl_constants_on_unit_grid() {
        // 2 ln 2 - 1 from int_0^1 (2 ln 2 - 2 + 1) dx.
        let want = 2.0 * 2f64.ln() - 1.0;
        for n in [11, 101] {
            let s = Support::grid(0.0, 1.0, n).unwrap();
            let a = Density::new(s, vec![2.0; n]).unwrap();
            let b = Density::new(s, vec![1.0; n]).unwrap();
            let d = rho_tau_bregman(&RhoTauPair::kl(), &b, &a).unwrap();
            assert!((d - want).abs() < 1e-14, "{d}");
        }
    }

    #[test]
    fn squared_euclidean_discrete() {
        let p = RhoTauPair::new(Representation::Identity, Representation::Identity).unwrap();
        let d = rho_tau_bregman(&p, &disc(&[1.0, 2.0]), &disc(&[3.0, 5.0])).unwrap();
        assert!((d - 6.5).abs() < 1e-14);
    }

    #[test]
    fn dual_reverses_arguments() {
        let (a, b) = (disc(&[2.0, 1.0]), disc(&[1.0, 1.0]));
        let p = RhoTauPair::kl();
        let d = dual_rho_tau_bregman(&p, &a, &b).unwrap();
        assert!((d - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-15);
        assert!((d - rho_tau_bregman(&p, &b, &a).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn squared_euclidean_suboptimality() {
        let p = RhoTauPair::new(Representation::Identity, Representation::Identity).unwrap();
        let (x, y) = (disc(&[0.0, 1.0]), disc(&[2.0, 1.0]));
        let w = MixtureWeights::pair(0.5).unwrap();
        let mu = disc(&[0.0, 1.0]);
        let bi = bregman_information(&p, &[&x, &y], &w).unwrap();
        // First node: (0 + 2)/2 - 1/2. Expected divergence at mu is 1, so the gap is 1/2.
        assert!((bi.value - 0.5).abs() < 1e-15);
        let gap = suboptimality_gap(&p, &[&x, &y], &w, &mu).unwrap();
        assert!((gap - 0.5).abs() < 1e-15);
        assert!((gap - rho_tau_bregman(&p, &bi.minimizer, &mu).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn degenerate_weights_give_zero() {
        let p = RhoTauPair::kl();
        let (a, b) = (disc(&[1.0, 3.0]), disc(&[2.0, 0.5]));
        let bi = bregman_information(&p, &[&a, &b], &MixtureWeights::new(vec![1.0, 0.0]).unwrap()).unwrap();
        assert_eq!(bi.value, 0.0);
        assert_eq!(bi.minimizer, a);
    }

    #[test]
    fn scaled_divergence_limits_are_continuous() {
        let (a, b) = (disc(&[1.0, 3.0, 0.2]), disc(&[2.0, 0.5, 0.7]));
        for p in [RhoTauPair::kl(), RhoTauPair::new(Representation::log_q(0.5), Representation::Identity).unwrap()] {
            let lo = scaled_divergence(&p, &a, &b, 0.0).unwrap();
            let near_lo = scaled_divergence(&p, &a, &b, 1e-6).unwrap();
            assert!((lo - near_lo).abs() < 1e-4 * lo);
            let hi = scaled_divergence(&p, &a, &b, 1.0).unwrap();
            let near_hi = scaled_divergence(&p, &a, &b, 1.0 - 1e-6).unwrap();
            assert!((hi - near_hi).abs() < 1e-4 * hi);
        }
    }

    #[test]
    fn renyi_between_unit_gaussians() {
        let s = Support::default();
        let a = materialize(&DensitySpec::gaussian(0.0, 1.0), s).unwrap();
        let b = materialize(&DensitySpec::gaussian(1.0, 1.0).with_scale(5.0), s).unwrap();
        // int N(0,1)^(1-b) N(1,1)^b = exp(-b (1-b) / 2).
        for beta in [0.2, 0.5, 0.9] {
            let r = named_divergence(&DivergenceKind::Renyi { beta }, &a, &b).unwrap();
            assert!((r - 0.5).abs() < 1e-9, "{r}");
        }
    }

    #[test]
    fn amari_half_is_symmetric() {
        let (a, b) = (disc(&[1.0, 3.0, 0.2]), disc(&[2.0, 0.5, 0.7]));
        let k = DivergenceKind::AmariAlpha { alpha: 0.5 };
        let d1 = named_divergence(&k, &a, &b).unwrap();
        let d2 = named_divergence(&k, &b, &a).unwrap();
        assert!((d1 - d2).abs() < 1e-14);
        assert_eq!(named_divergence(&DivergenceKind::KlUnnormalized, &a, &a).unwrap(), 0.0);
    }

    #[test]
    fn parameter_domains() {
        let (a, b) = (disc(&[1.0, 3.0]), disc(&[2.0, 0.5]));
        assert!(named_divergence(&DivergenceKind::JensenShannon { beta: 1.0 }, &a, &b).is_err());
        assert!(named_divergence(&DivergenceKind::ZhangAb { beta: 0.0, q: 0.5 }, &a, &b).is_err());
        assert!(named_divergence(&DivergenceKind::AmariAlpha { alpha: f64::NAN }, &a, &b).is_err());
        let z = disc(&[1.0, 0.0]);
        assert!(named_divergence(&DivergenceKind::KlUnnormalized, &a, &z).is_err());
    }

    #[test]
    fn zero_values_where_allowed() {
        let (a, b) = (disc(&[1.0, 0.0]), disc(&[1.0, 2.0]));
        let kl = named_divergence(&DivergenceKind::KlUnnormalized, &a, &b).unwrap();
        assert!((kl - 2.0).abs() < 1e-15);
        let js = named_divergence(&DivergenceKind::JensenShannon { beta: 0.5 }, &a, &b).unwrap();
        assert!(js.is_finite() && js > 0.0);
    }
}
