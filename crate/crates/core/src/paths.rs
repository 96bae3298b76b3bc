//! Quasi-arithmetic means of densities and the annealing paths built from them.
//!
//! ```text
//! mu(x)          = rho^-1( sum_i w_i rho(u_i(x)) )
//! path_beta(x)   = rho^-1( (1-beta) rho(u_0(x)) + beta rho(u_1(x)) )
//! ```
//!
//! `Log` gives the geometric path, `Identity` the arithmetic mixture, and
//! `LogQ { q }` the power (q-) paths in between. A path may carry a base measure
//! `g`, in which case the mean is taken of `u_i / g` and multiplied back by `g`.

use serde::{Deserialize, Serialize};

use crate::deformed::{q_exp, q_log, Representation, Q_EPS};
use crate::density::Density;
use crate::error::{Error, Result};

/// Tolerance on the sum of mixture weights.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureWeights(Vec<f64>);

impl MixtureWeights {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::param("mixture weights are empty"));
        }
        if let Some(bad) = w.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(Error::param(format!("mixture weight {bad} is not a finite nonnegative number")));
        }
        let s: f64 = w.iter().sum();
        if (s - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::param(format!("mixture weights sum to {s}, not 1")));
        }
        Ok(Self(w))
    }

    /// `(1 - beta, beta)`.
    pub fn pair(beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Self::new(vec![1.0 - beta, beta])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&beta) {
        Ok(())
    } else {
        Err(Error::param(format!("beta must lie in [0, 1], got {beta}")))
    }
}

/// Pointwise quasi-arithmetic mean of densities on a shared support.
pub fn quasi_arithmetic_mean(
    inputs: &[&Density],
    weights: &MixtureWeights,
    rho: &Representation,
) -> Result<Density> {
    let w = weights.as_slice();
    if inputs.len() != w.len() {
        return Err(Error::param(format!(
            "{} inputs but {} weights",
            inputs.len(),
            w.len()
        )));
    }
    let first = inputs.first().ok_or_else(|| Error::param("no inputs"))?;
    for d in &inputs[1..] {
        first.ensure_same_support(d)?;
    }
    if let Some(i) = w.iter().position(|&x| x == 1.0) {
        return Ok(inputs[i].clone());
    }
    let mut point = vec![0.0; inputs.len()];
    let values = (0..first.len())
        .map(|j| {
            for (p, d) in point.iter_mut().zip(inputs) {
                *p = d.values()[j];
            }
            rho.quasi_mean(&point, w).map_err(|e| at_node(e, j))
        })
        .collect::<Result<Vec<f64>>>()?;
    Density::new(*first.support(), values)
}

/// Replace the input index of a pointwise error with the support node index.
fn at_node(e: Error, j: usize) -> Error {
    match e {
        Error::Domain { value, what, .. } => Error::Domain { index: j, value, what },
        other => other,
    }
}

/// Whether path members are returned as computed or rescaled to unit mass.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    #[default]
    Unnormalized,
    NormalizeOutput,
}

/// A one-parameter family of densities between two endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnealingPath {
    start: Density,
    end: Density,
    rho: Representation,
    policy: Normalization,
    base: Option<Density>,
}

/// Build a path, checking that every endpoint value lies in the domain of `rho`.
pub fn make_path(
    start: Density,
    end: Density,
    rho: Representation,
    policy: Normalization,
) -> Result<AnnealingPath> {
    rho.validate()?;
    start.ensure_same_support(&end)?;
    for d in [&start, &end] {
        for (j, &u) in d.values().iter().enumerate() {
            if !rho.in_domain(u) {
                return Err(Error::Domain {
                    index: j,
                    value: u,
                    what: "endpoint value outside the domain of the representation",
                });
            }
        }
    }
    Ok(AnnealingPath {
        start,
        end,
        rho,
        policy,
        base: None,
    })
}

impl AnnealingPath {
    /// Take means relative to a strictly positive base measure `g`.
    pub fn with_base(mut self, base: Density) -> Result<Self> {
        self.start.ensure_same_support(&base)?;
        if let Some(j) = base.values().iter().position(|&g| g <= 0.0) {
            return Err(Error::Domain {
                index: j,
                value: base.values()[j],
                what: "base measure must be strictly positive",
            });
        }
        self.base = Some(base);
        Ok(self)
    }

    pub fn start(&self) -> &Density {
        &self.start
    }

    pub fn end(&self) -> &Density {
        &self.end
    }

    pub fn rho(&self) -> &Representation {
        &self.rho
    }

    pub fn policy(&self) -> Normalization {
        self.policy
    }

    pub fn base(&self) -> Option<&Density> {
        self.base.as_ref()
    }

    /// Unnormalized path value from endpoint values `u0`, `u1` and base value `g`.
    pub fn value_from(&self, beta: f64, u0: f64, u1: f64, g: f64) -> Result<f64> {
        if beta == 0.0 {
            return Ok(u0);
        }
        if beta == 1.0 {
            return Ok(u1);
        }
        let w = [1.0 - beta, beta];
        if g == 1.0 {
            self.rho.quasi_mean(&[u0, u1], &w)
        } else {
            Ok(g * self.rho.quasi_mean(&[u0 / g, u1 / g], &w)?)
        }
    }

    /// Unnormalized path value at support node `j`.
    pub fn value_at_node(&self, beta: f64, j: usize) -> Result<f64> {
        let g = self.base.as_ref().map_or(1.0, |b| b.values()[j]);
        self.value_from(beta, self.start.values()[j], self.end.values()[j], g)
            .map_err(|e| at_node(e, j))
    }

    /// Unnormalized values at every node.
    pub fn values(&self, beta: f64) -> Result<Vec<f64>> {
        check_beta(beta)?;
        (0..self.start.len())
            .map(|j| self.value_at_node(beta, j))
            .collect::<Result<_>>()
            .map_err(|e| e.at_beta(beta))
    }

    /// Path member at `beta`, normalized if the policy asks for it.
    pub fn evaluate(&self, beta: f64) -> Result<Density> {
        let d = Density::new(*self.start.support(), self.values(beta)?).map_err(|e| e.at_beta(beta))?;
        match self.policy {
            Normalization::Unnormalized => Ok(d),
            Normalization::NormalizeOutput => d.normalized().map_err(|e| e.at_beta(beta)),
        }
    }
}

/// `pi_0 * exp_q(beta * log_q(pi_1 / pi_0))`, the likelihood-ratio form of a q-path.
pub fn likelihood_ratio_form(start: &Density, end: &Density, beta: f64, q: f64) -> Result<Density> {
    start.ensure_same_support(end)?;
    let values = start
        .values()
        .iter()
        .zip(end.values())
        .enumerate()
        .map(|(j, (&u0, &u1))| {
            if !(u0 > 0.0) {
                return Err(Error::Domain {
                    index: j,
                    value: u0,
                    what: "likelihood ratio needs a positive start density",
                });
            }
            let t = q_log(u1 / u0, q).map_err(|e| e.at_index(j))?;
            Ok(u0 * q_exp(beta * t, q))
        })
        .collect::<Result<Vec<f64>>>()?;
    Density::new(*start.support(), values)
}

/// The unnormalized mixing weight `beta'` at which the q-path between the
/// unnormalized endpoints matches, after normalization, the q-path at `beta`
/// between the normalized endpoints.
pub fn reparameterize_normalized_q_mixture(start: &Density, end: &Density, beta: f64, q: f64) -> Result<f64> {
    check_beta(beta)?;
    if (1.0 - q).abs() < Q_EPS {
        return Ok(beta);
    }
    let (z0, z1) = (start.mass()?, end.mass()?);
    let a = beta * z1.powf(q - 1.0);
    let b = (1.0 - beta) * z0.powf(q - 1.0);
    Ok(a / (a + b))
}

/// Constant `c` with `normalized-endpoint q-mixture = c * unnormalized q-mixture at beta'`.
pub fn normalized_q_mixture_constant(start: &Density, end: &Density, beta: f64, q: f64) -> Result<f64> {
    check_beta(beta)?;
    let (z0, z1) = (start.mass()?, end.mass()?);
    if (1.0 - q).abs() < Q_EPS {
        return Ok(1.0 / (z0.powf(1.0 - beta) * z1.powf(beta)));
    }
    let a = 1.0 - q;
    Ok(((1.0 - beta) * z0.powf(-a) + beta * z1.powf(-a)).powf(1.0 / a))
}

/// Exponential families with closed-form natural/mean parameter maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentFamily {
    /// Natural parameters `(mu / s2, -1 / (2 s2))`, moments `(E x, E x^2)`.
    Gaussian,
    /// Natural parameter `logit p`, moment `p`.
    Bernoulli,
}

impl MomentFamily {
    pub fn dim(&self) -> usize {
        match self {
            MomentFamily::Gaussian => 2,
            MomentFamily::Bernoulli => 1,
        }
    }

    fn check_dim(&self, v: &[f64]) -> Result<()> {
        if v.len() == self.dim() && v.iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(Error::param(format!("{self:?} needs {} finite parameters, got {v:?}", self.dim())))
        }
    }

    pub fn natural_to_mean(&self, theta: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(theta)?;
        match self {
            MomentFamily::Gaussian => {
                if theta[1] >= 0.0 {
                    return Err(Error::param(format!("gaussian needs theta_2 < 0, got {}", theta[1])));
                }
                let var = -0.5 / theta[1];
                let mu = theta[0] * var;
                Ok(vec![mu, var + mu * mu])
            }
            MomentFamily::Bernoulli => Ok(vec![1.0 / (1.0 + (-theta[0]).exp())]),
        }
    }

    pub fn mean_to_natural(&self, eta: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(eta)?;
        match self {
            MomentFamily::Gaussian => {
                let var = eta[1] - eta[0] * eta[0];
                if var <= 0.0 {
                    return Err(Error::param(format!("moments {eta:?} imply nonpositive variance")));
                }
                Ok(vec![eta[0] / var, -0.5 / var])
            }
            MomentFamily::Bernoulli => {
                let p = eta[0];
                if !(p > 0.0 && p < 1.0) {
                    return Err(Error::param(format!("bernoulli mean must be in (0, 1), got {p}")));
                }
                Ok(vec![(p / (1.0 - p)).ln()])
            }
        }
    }

    /// Natural parameters of `N(mean, var)`.
    pub fn gaussian_natural(mean: f64, var: f64) -> Vec<f64> {
        vec![mean / var, -0.5 / var]
    }
}

/// Natural parameters of the moment-averaged member: mean parameters are mixed linearly.
pub fn moment_average_path(family: MomentFamily, theta0: &[f64], theta1: &[f64], beta: f64) -> Result<Vec<f64>> {
    check_beta(beta)?;
    let e0 = family.natural_to_mean(theta0)?;
    let e1 = family.natural_to_mean(theta1)?;
    let eta: Vec<f64> = e0.iter().zip(&e1).map(|(a, b)| (1.0 - beta) * a + beta * b).collect();
    family.mean_to_natural(&eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{materialize, DensitySpec, Support};

    fn two_state(a: [f64; 2]) -> Density {
        Density::new(Support::discrete(2).unwrap(), a.to_vec()).unwrap()
    }

    #[test]
    fn discrete_geometric_midpoint() {
        let p = make_path(two_state([1.0, 4.0]), two_state([4.0, 1.0]), Representation::Log, Normalization::Unnormalized).unwrap();
        let m = p.evaluate(0.5).unwrap();
        assert!((m.values()[0] - 2.0).abs() < 1e-15 && (m.values()[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn endpoints_are_exact() {
        let s = Support::grid(-5.0, 5.0, 201).unwrap();
        let a = materialize(&DensitySpec::gaussian(0.0, 1.0), s).unwrap();
        let b = materialize(&DensitySpec::gaussian(2.0, 0.5).with_scale(3.0), s).unwrap();
        for rho in [Representation::Log, Representation::log_q(0.5), Representation::Identity] {
            let p = make_path(a.clone(), b.clone(), rho, Normalization::Unnormalized).unwrap();
            assert_eq!(p.evaluate(0.0).unwrap(), a);
            assert_eq!(p.evaluate(1.0).unwrap(), b);
        }
    }

    #[test]
    fn gaussian_geometric_midpoint_is_gaussian() {
        let s = Support::default();
        let a = materialize(&DensitySpec::gaussian(0.0, 1.0), s).unwrap();
        let b = materialize(&DensitySpec::gaussian(4.0, 1.0), s).unwrap();
        let p = make_path(a, b, Representation::Log, Normalization::NormalizeOutput).unwrap();
        let m = p.evaluate(0.5).unwrap();
        let want = materialize(&DensitySpec::gaussian(2.0, 1.0), s).unwrap();
        for (x, y) in m.values().iter().zip(want.values()) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn q_path_zero_endpoint_is_domain_error() {
        let e = make_path(two_state([1.0, 0.0]), two_state([1.0, 1.0]), Representation::log_q(0.5), Normalization::Unnormalized);
        assert!(matches!(e, Err(Error::Domain { index: 1, .. })));
        assert!(make_path(two_state([1.0, 0.0]), two_state([1.0, 1.0]), Representation::Identity, Normalization::Unnormalized).is_ok());
    }

    #[test]
    fn invalid_beta_and_weights() {
        let p = make_path(two_state([1.0, 2.0]), two_state([2.0, 1.0]), Representation::Log, Normalization::Unnormalized).unwrap();
        assert!(p.evaluate(1.5).is_err());
        assert!(p.evaluate(-0.1).is_err());
        assert!(MixtureWeights::new(vec![0.5, 0.6]).is_err());
        assert!(MixtureWeights::new(vec![1.5, -0.5]).is_err());
    }

    #[test]
    fn reparameterization_reference_values() {
        let a = two_state([0.5, 0.5]);
        let b = two_state([1.0, 1.0]);
        let bp = reparameterize_normalized_q_mixture(&a, &b, 0.5, 2.0).unwrap();
        assert!((bp - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(reparameterize_normalized_q_mixture(&a, &b, 0.3, 1.0).unwrap(), 0.3);
    }

    #[test]
    fn moment_averaging_gaussians() {
        let t0 = MomentFamily::gaussian_natural(0.0, 1.0);
        let t1 = MomentFamily::gaussian_natural(2.0, 4.0);
        let t = moment_average_path(MomentFamily::Gaussian, &t0, &t1, 0.5).unwrap();
        let eta = MomentFamily::Gaussian.natural_to_mean(&t).unwrap();
        // E x = 1 and E x^2 = (1 + 8) / 2.
        assert!((eta[0] - 1.0).abs() < 1e-14);
        assert!((eta[1] - eta[0] * eta[0] - 3.5).abs() < 1e-14);
    }

    #[test]
    fn moment_averaging_bernoulli() {
        let t = moment_average_path(MomentFamily::Bernoulli, &[(0.2f64 / 0.8).ln()], &[(0.6f64 / 0.4).ln()], 0.5).unwrap();
        let p = MomentFamily::Bernoulli.natural_to_mean(&t).unwrap()[0];
        assert!((p - 0.4).abs() < 1e-15);
    }
}
