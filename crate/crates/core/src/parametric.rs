//! q-exponential families and the likelihood-ratio family of a q-path.
//!
//! ```text
//! u_theta(x) = g(x) exp_q(<theta, T(x)>)
//! Z_q(theta) = int u_theta
//! dZ_q/dtheta_j = int g^(1-q) u_theta^q T_j
//! ```
//!
//! The likelihood-ratio family takes `g = u_0`, `T = log_q(u_1 / u_0)` and a scalar
//! parameter `beta`; its members are exactly the q-path between `u_0` and `u_1`.
//! Bregman divergences of `Z_q / q` reproduce the Amari alpha-divergence of order
//! `q` between members; at `q = 1` those of `ln Z` give the normalized KL.

use serde::{Deserialize, Serialize};

use crate::deformed::{q_exp, q_log, Q_EPS};
use crate::density::Density;
use crate::error::{Error, Result};

/// A q-exponential family tabulated on a support.
#[derive(Debug, Clone, PartialEq)]
pub struct QExpFamily {
    q: f64,
    base: Density,
    stats: Vec<Vec<f64>>,
    bounds: Option<Vec<(f64, f64)>>,
}

impl QExpFamily {
    /// `stats[j][i]` is the `j`-th sufficient statistic at node `i`.
    pub fn new(q: f64, base: Density, stats: Vec<Vec<f64>>) -> Result<Self> {
        if !q.is_finite() {
            return Err(Error::param(format!("q must be finite, got {q}")));
        }
        if stats.is_empty() {
            return Err(Error::param("family needs at least one sufficient statistic"));
        }
        for (j, t) in stats.iter().enumerate() {
            if t.len() != base.len() {
                return Err(Error::SupportMismatch(format!(
                    "statistic {j} has {} values for {} nodes",
                    t.len(),
                    base.len()
                )));
            }
            if t.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
                return Err(Error::param(format!("statistic {j} has NaN or +inf values")));
            }
        }
        Ok(Self {
            q,
            base,
            stats,
            bounds: None,
        })
    }

    /// Polynomial statistics `x^p` for each power.
    pub fn polynomial(q: f64, base: Density, powers: &[i32]) -> Result<Self> {
        let nodes = base.support().nodes();
        let stats = powers.iter().map(|&p| nodes.iter().map(|x| x.powi(p)).collect()).collect();
        Self::new(q, base, stats)
    }

    /// Restrict parameters to a box.
    pub fn with_bounds(mut self, bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.len() != self.dim() {
            return Err(Error::param("bounds must have one interval per parameter"));
        }
        self.bounds = Some(bounds);
        Ok(self)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.stats.len()
    }

    pub fn base(&self) -> &Density {
        &self.base
    }

    fn check_theta(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.dim() {
            return Err(Error::param(format!(
                "theta has {} entries, the family has {} statistics",
                theta.len(),
                self.dim()
            )));
        }
        if let Some(t) = theta.iter().find(|t| !t.is_finite()) {
            return Err(Error::param(format!("theta entry {t} is not finite")));
        }
        if let Some(b) = &self.bounds {
            for (j, (&t, &(lo, hi))) in theta.iter().zip(b).enumerate() {
                if !(lo..=hi).contains(&t) {
                    return Err(Error::param(format!("theta[{j}] = {t} outside [{lo}, {hi}]")));
                }
            }
        }
        Ok(())
    }

    fn natural(&self, theta: &[f64], i: usize) -> f64 {
        theta
            .iter()
            .zip(&self.stats)
            .filter(|(t, _)| **t != 0.0)
            .map(|(t, s)| t * s[i])
            .sum()
    }

    /// `exp_q(<theta, T>)` at every node (zero where the base vanishes).
    fn deformed_values(&self, theta: &[f64]) -> Vec<f64> {
        (0..self.base.len())
            .map(|i| {
                if self.base.values()[i] == 0.0 {
                    0.0
                } else {
                    q_exp(self.natural(theta, i), self.q)
                }
            })
            .collect()
    }

    /// Unnormalized member; `exp_q` clips to zero where `1 + (1-q)<theta,T>` is negative.
    pub fn unnormalized(&self, theta: &[f64]) -> Result<Density> {
        self.check_theta(theta)?;
        let e = self.deformed_values(theta);
        let values = self.base.values().iter().zip(&e).map(|(g, e)| g * e).collect();
        Density::new(*self.base.support(), values)
    }

    pub fn z_q(&self, theta: &[f64]) -> Result<f64> {
        self.unnormalized(theta)?.mass()
    }

    pub fn log_z(&self, theta: &[f64]) -> Result<f64> {
        Ok(self.z_q(theta)?.ln())
    }

    /// `int g exp_q(<theta,T>)^q T_j`.
    pub fn grad_z_q(&self, theta: &[f64]) -> Result<Vec<f64>> {
        self.check_theta(theta)?;
        let e = self.deformed_values(theta);
        let escort: Vec<f64> = e
            .iter()
            .zip(self.base.values())
            .map(|(&e, &g)| if e == 0.0 { 0.0 } else { g * e.powf(self.q) })
            .collect();
        let grad: Vec<f64> = self
            .stats
            .iter()
            .map(|t| self.base.quadrature(|i| if escort[i] == 0.0 { 0.0 } else { escort[i] * t[i] }))
            .collect();
        if grad.iter().all(|g| g.is_finite()) {
            Ok(grad)
        } else {
            Err(Error::Overflow(format!("gradient of Z_q is {grad:?}")))
        }
    }
}

/// Convex functions of the natural parameter used as Bregman generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyGenerator {
    /// `Z_q / q`, for `q > 0`.
    ScaledZq,
    /// `ln Z`, for `q = 1`.
    LogZ,
}

/// Bregman divergence `F(a) - F(b) - <grad F(b), a - b>` of a generator given as value and gradient.
pub fn generator_bregman<G>(generator: G, a: &[f64], b: &[f64]) -> Result<f64>
where
    G: Fn(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    let (fa, _) = generator(a)?;
    let (fb, gb) = generator(b)?;
    let inner: f64 = gb.iter().zip(a.iter().zip(b)).map(|(g, (x, y))| g * (x - y)).sum();
    Ok(fa - fb - inner)
}

pub fn parametric_bregman(
    family: &QExpFamily,
    theta_a: &[f64],
    theta_b: &[f64],
    generator: FamilyGenerator,
) -> Result<f64> {
    let q = family.q;
    match generator {
        FamilyGenerator::ScaledZq => {
            if !(q > 0.0) {
                return Err(Error::param(format!("Z_q / q needs q > 0, got {q}")));
            }
            generator_bregman(
                |t| {
                    let z = family.z_q(t)?;
                    let g = family.grad_z_q(t)?;
                    Ok((z / q, g.into_iter().map(|x| x / q).collect()))
                },
                theta_a,
                theta_b,
            )
        }
        FamilyGenerator::LogZ => {
            if (1.0 - q).abs() >= Q_EPS {
                return Err(Error::param(format!("ln Z generator needs q = 1, got {q}")));
            }
            generator_bregman(
                |t| {
                    let z = family.z_q(t)?;
                    let g = family.grad_z_q(t)?;
                    Ok((z.ln(), g.into_iter().map(|x| x / z).collect()))
                },
                theta_a,
                theta_b,
            )
        }
    }
}

/// The q-path between two densities viewed as a one-parameter q-exponential family.
#[derive(Debug, Clone, PartialEq)]
pub struct LikelihoodRatioFamily {
    family: QExpFamily,
}

/// Build the likelihood-ratio family with base `start` and statistic `log_q(end / start)`.
pub fn make_lr_family(start: &Density, end: &Density, q: f64) -> Result<LikelihoodRatioFamily> {
    start.ensure_same_support(end)?;
    let mut t = Vec::with_capacity(start.len());
    for (i, (&u0, &u1)) in start.values().iter().zip(end.values()).enumerate() {
        let v = if u0 == 0.0 {
            if u1 != 0.0 {
                return Err(Error::Domain {
                    index: i,
                    value: u1,
                    what: "end density must vanish where the start density does",
                });
            }
            0.0
        } else if u1 == 0.0 {
            if q < 1.0 {
                -1.0 / (1.0 - q)
            } else {
                f64::NEG_INFINITY
            }
        } else {
            q_log(u1 / u0, q).map_err(|e| e.at_index(i))?
        };
        t.push(v);
    }
    Ok(LikelihoodRatioFamily {
        family: QExpFamily::new(q, start.clone(), vec![t])?,
    })
}

impl LikelihoodRatioFamily {
    pub fn family(&self) -> &QExpFamily {
        &self.family
    }

    pub fn q(&self) -> f64 {
        self.family.q
    }

    pub fn unnormalized(&self, beta: f64) -> Result<Density> {
        self.family.unnormalized(&[beta])
    }

    pub fn z_q(&self, beta: f64) -> Result<f64> {
        self.family.z_q(&[beta])
    }

    pub fn grad_z_q(&self, beta: f64) -> Result<f64> {
        Ok(self.family.grad_z_q(&[beta])?[0])
    }

    pub fn bregman(&self, beta_a: f64, beta_b: f64, generator: FamilyGenerator) -> Result<f64> {
        parametric_bregman(&self.family, &[beta_a], &[beta_b], generator)
    }

    /// `[(1-b) F(0) + b F(1) - F(b)] / (b (1-b))` for the chosen normalizer `F`.
    ///
    /// With `Z_q / q` this is the Zhang divergence between the endpoints; with
    /// `ln Z` (at `q = 1`) it is the Renyi divergence between their normalizations.
    pub fn scaled_jensen_gap(&self, beta: f64, generator: FamilyGenerator) -> Result<f64> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::param(format!("beta must lie in (0, 1), got {beta}")));
        }
        let q = self.q();
        let value = |b: f64| -> Result<f64> {
            match generator {
                FamilyGenerator::ScaledZq => Ok(self.z_q(b)? / q),
                FamilyGenerator::LogZ => Ok(self.z_q(b)?.ln()),
            }
        };
        if generator == FamilyGenerator::ScaledZq && !(q.abs() > 0.0) {
            return Err(Error::param("Z_q / q needs q != 0"));
        }
        let gap = (1.0 - beta) * value(0.0)? + beta * value(1.0)? - value(beta)?;
        Ok(gap / (beta * (1.0 - beta)))
    }
}
