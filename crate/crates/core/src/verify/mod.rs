//! Independent numerical checks of the variational and geodesic characterizations.
//!
//! - [`barycenter_bruteforce`] minimizes the expected rho-tau divergence point by
//!   point with golden-section search and compares against the quasi-arithmetic mean.
//! - [`vector_bregman_information_check`] does the same for a non-decomposable
//!   generator on `R^d` by coordinate descent.
//! - [`geodesic_residual`] measures `gamma'' + (c''/c')(gamma) gamma'^2` along a path by
//!   central differences in `beta`, for the representation `c` of either connection.
//!
//! [`suites`] bundles these into named, seeded check suites.

pub mod suites;

use serde::Serialize;

use crate::deformed::{Representation, RhoTauPair};
use crate::density::Density;
use crate::divergences::{bregman_information, expected_divergence};
use crate::error::{Error, Result};
use crate::paths::{quasi_arithmetic_mean, AnnealingPath, MixtureWeights};

/// Golden-section settings on the representation scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            tol: 1e-10,
            max_iter: 200,
        }
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimize a unimodal function on `[lo, hi]`. Returns the midpoint of the final bracket.
pub fn golden_section<F>(mut f: F, lo: f64, hi: f64, cfg: SearchConfig) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (lo, hi);
    if !(a <= b) {
        return Err(Error::param(format!("empty bracket [{lo}, {hi}]")));
    }
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..cfg.max_iter {
        let mid = 0.5 * (a + b);
        if b - a <= cfg.tol * mid.abs().max(1.0) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(0.5 * (a + b))
}

/// Stencil spacing of the parabolic polish, relative to `max(1, |m|)`.
const POLISH_STEP: f64 = 1e-5;

/// Refine a noise-limited minimizer by a least-squares parabola through five
/// equispaced samples. The fit averages out rounding in the objective, which
/// caps golden-section accuracy at roughly the square root of machine epsilon.
pub fn parabolic_polish<F>(f: F, m: f64, lo: f64, hi: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let h = POLISH_STEP * m.abs().max(1.0);
    let (mut a1, mut a2) = (0.0, 0.0);
    for k in -2i32..=2 {
        let y = f(m + k as f64 * h)?;
        a1 += k as f64 * y / 10.0;
        a2 += (k * k - 2) as f64 * y / 14.0;
    }
    if !(a2 > 0.0) {
        return Ok(m);
    }
    let shift = -a1 / (2.0 * a2);
    if shift.abs() > 2.0 {
        return Ok(m);
    }
    Ok((m + shift * h).clamp(lo, hi))
}

#[derive(Debug, Clone)]
pub struct BarycenterReport {
    pub pointwise_argmin: Density,
    pub analytic_mean: Density,
    pub max_abs_deviation: f64,
    pub objective_at_argmin: f64,
    pub objective_at_mean: f64,
    /// Bregman information (Jensen gap) of the same inputs.
    pub jensen_gap: f64,
}

/// Brute-force minimizer of `mu -> sum_i w_i D_f[rho(u_i) : rho(mu)]`.
pub fn barycenter_bruteforce(
    pair: &RhoTauPair,
    inputs: &[&Density],
    weights: &MixtureWeights,
    search: SearchConfig,
) -> Result<BarycenterReport> {
    let analytic_mean = quasi_arithmetic_mean(inputs, weights, pair.rho())?;
    let rho = pair.rho();
    let w = weights.as_slice();
    let n = analytic_mean.len();
    let mut argmin = Vec::with_capacity(n);
    let mut reps = vec![0.0; inputs.len()];
    for j in 0..n {
        for (r, d) in reps.iter_mut().zip(inputs) {
            *r = rho.apply(d.values()[j]).map_err(|e| e.at_index(j))?;
        }
        let active = || reps.iter().zip(w).filter(|(_, &wi)| wi > 0.0);
        let lo = active().map(|(r, _)| *r).fold(f64::INFINITY, f64::min);
        let hi = active().map(|(r, _)| *r).fold(f64::NEG_INFINITY, f64::max);
        let objective = |m: f64| -> Result<f64> {
            let mut s = 0.0;
            for (&r, &wi) in active() {
                s += wi * pair.bregman_term(r, m)?;
            }
            Ok(s)
        };
        let m = if hi - lo <= search.tol * lo.abs().max(1.0) {
            0.5 * (lo + hi)
        } else {
            let m = golden_section(&objective, lo, hi, search)?;
            if m < lo || m > hi {
                return Err(Error::BracketViolation(format!(
                    "argmin {m} left [{lo}, {hi}] at node {j}"
                )));
            }
            parabolic_polish(&objective, m, lo, hi)?
        };
        argmin.push(rho.inverse(m).map_err(|e| e.at_index(j))?);
    }
    let pointwise_argmin = Density::new(*analytic_mean.support(), argmin)?;
    let max_abs_deviation = pointwise_argmin
        .values()
        .iter()
        .zip(analytic_mean.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(BarycenterReport {
        objective_at_argmin: expected_divergence(pair, inputs, weights, &pointwise_argmin)?,
        objective_at_mean: expected_divergence(pair, inputs, weights, &analytic_mean)?,
        jensen_gap: bregman_information(pair, inputs, weights)?.value,
        pointwise_argmin,
        analytic_mean,
        max_abs_deviation,
    })
}

/// Convex generators on `R^d` for the vector-valued check.
#[derive(Debug, Clone, PartialEq)]
pub enum VectorGenerator {
    /// `m^T A m / 2` with `A` symmetric positive definite.
    Quadratic { matrix: Vec<Vec<f64>> },
    /// `ln(1 + sum_j exp(m_j))`, the log-partition of a categorical with a reference class.
    LogSumExp,
}

impl VectorGenerator {
    pub fn identity_quadratic(d: usize) -> Self {
        let matrix = (0..d)
            .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        VectorGenerator::Quadratic { matrix }
    }

    fn validate(&self, d: usize) -> Result<()> {
        if let VectorGenerator::Quadratic { matrix } = self {
            if matrix.len() != d || matrix.iter().any(|r| r.len() != d) {
                return Err(Error::param(format!("quadratic form must be {d} x {d}")));
            }
            for i in 0..d {
                for j in 0..i {
                    if (matrix[i][j] - matrix[j][i]).abs() > 1e-12 * (1.0 + matrix[i][j].abs()) {
                        return Err(Error::param("quadratic form must be symmetric"));
                    }
                }
            }
            // Cholesky without storing the factor beyond what is needed.
            let mut l = vec![vec![0.0; d]; d];
            for i in 0..d {
                for j in 0..=i {
                    let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
                    if i == j {
                        let v = matrix[i][i] - s;
                        if v <= 0.0 {
                            return Err(Error::param("quadratic form must be positive definite"));
                        }
                        l[i][i] = v.sqrt();
                    } else {
                        l[i][j] = (matrix[i][j] - s) / l[j][j];
                    }
                }
            }
        }
        Ok(())
    }

    pub fn value(&self, m: &[f64]) -> f64 {
        match self {
            VectorGenerator::Quadratic { matrix } => {
                0.5 * m
                    .iter()
                    .zip(matrix)
                    .map(|(mi, row)| mi * row.iter().zip(m).map(|(a, mj)| a * mj).sum::<f64>())
                    .sum::<f64>()
            }
            VectorGenerator::LogSumExp => {
                let top = m.iter().copied().fold(0.0, f64::max);
                top + ((-top).exp() + m.iter().map(|x| (x - top).exp()).sum::<f64>()).ln()
            }
        }
    }

    pub fn gradient(&self, m: &[f64]) -> Vec<f64> {
        match self {
            VectorGenerator::Quadratic { matrix } => matrix
                .iter()
                .map(|row| row.iter().zip(m).map(|(a, mj)| a * mj).sum())
                .collect(),
            VectorGenerator::LogSumExp => {
                let top = m.iter().copied().fold(0.0, f64::max);
                let denom = (-top).exp() + m.iter().map(|x| (x - top).exp()).sum::<f64>();
                m.iter().map(|x| (x - top).exp() / denom).collect()
            }
        }
    }

    /// `F(a) - F(b) - <grad F(b), a - b>`.
    pub fn bregman(&self, a: &[f64], b: &[f64]) -> f64 {
        let g = self.gradient(b);
        self.value(a) - self.value(b) - g.iter().zip(a.iter().zip(b)).map(|(g, (x, y))| g * (x - y)).sum::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VectorBarycenterReport {
    pub argmin: Vec<f64>,
    pub analytic_mean: Vec<f64>,
    pub max_abs_deviation: f64,
    pub jensen_gap: f64,
    pub objective_at_mean: f64,
    pub sweeps: usize,
}

/// Largest dimension and input count of the vector check.
pub const VECTOR_MAX_DIM: usize = 4;
pub const VECTOR_MAX_INPUTS: usize = 5;
const VECTOR_MAX_SWEEPS: usize = 20_000;

/// Minimize `mu -> sum_i w_i D_F[rho(u_i) : rho(mu)]` by cyclic golden-section coordinate descent.
pub fn vector_bregman_information_check(
    generator: &VectorGenerator,
    rho: &Representation,
    inputs: &[Vec<f64>],
    weights: &MixtureWeights,
) -> Result<VectorBarycenterReport> {
    let w = weights.as_slice();
    let d = inputs.first().map_or(0, Vec::len);
    if inputs.is_empty() || inputs.len() != w.len() {
        return Err(Error::param("one weight per input vector is required"));
    }
    if d == 0 || d > VECTOR_MAX_DIM || inputs.len() > VECTOR_MAX_INPUTS || inputs.iter().any(|v| v.len() != d) {
        return Err(Error::param(format!(
            "vector check supports 1 <= d <= {VECTOR_MAX_DIM} and at most {VECTOR_MAX_INPUTS} inputs of equal length"
        )));
    }
    generator.validate(d)?;
    let reps: Vec<Vec<f64>> = inputs
        .iter()
        .map(|v| v.iter().enumerate().map(|(j, &u)| rho.apply(u).map_err(|e| e.at_index(j))).collect())
        .collect::<Result<_>>()?;
    let analytic_mean: Vec<f64> = (0..d)
        .map(|j| {
            let col: Vec<f64> = inputs.iter().map(|v| v[j]).collect();
            rho.quasi_mean(&col, w)
        })
        .collect::<Result<_>>()?;
    let objective = |m: &[f64]| -> f64 {
        reps.iter()
            .zip(w)
            .filter(|(_, &wi)| wi > 0.0)
            .map(|(r, wi)| wi * generator.bregman(r, m))
            .sum()
    };
    let span: Vec<(f64, f64)> = (0..d)
        .map(|j| {
            let lo = reps.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min);
            let hi = reps.iter().map(|r| r[j]).fold(f64::NEG_INFINITY, f64::max);
            let pad = (hi - lo).max(1.0);
            (lo - pad, hi + pad)
        })
        .collect();
    let mut m: Vec<f64> = span.iter().map(|(lo, hi)| 0.5 * (lo + hi)).collect();
    let search = SearchConfig {
        tol: 1e-12,
        max_iter: 200,
    };
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        let mut change: f64 = 0.0;
        for j in 0..d {
            let mut trial = m.clone();
            let mut along = |x: f64| {
                trial[j] = x;
                Ok(objective(&trial))
            };
            let coarse = golden_section(&mut along, span[j].0, span[j].1, search)?;
            let best = parabolic_polish(|x| {
                let mut t = m.clone();
                t[j] = x;
                Ok(objective(&t))
            }, coarse, span[j].0, span[j].1)?;
            change = change.max((best - m[j]).abs());
            m[j] = best;
        }
        if change <= 1e-10 {
            break;
        }
        if sweeps >= VECTOR_MAX_SWEEPS {
            return Err(Error::BracketViolation(format!(
                "coordinate descent did not converge in {sweeps} sweeps (last change {change})"
            )));
        }
    }
    let argmin: Vec<f64> = m.iter().map(|&x| rho.inverse(x)).collect::<Result<_>>()?;
    let max_abs_deviation = argmin
        .iter()
        .zip(&analytic_mean)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let mean_rep: Vec<f64> = analytic_mean.iter().map(|&u| rho.apply(u)).collect::<Result<_>>()?;
    let jensen_gap = reps
        .iter()
        .zip(w)
        .map(|(r, wi)| wi * generator.value(r))
        .sum::<f64>()
        - generator.value(&mean_rep);
    Ok(VectorBarycenterReport {
        objective_at_mean: objective(&mean_rep),
        argmin,
        analytic_mean,
        max_abs_deviation,
        jensen_gap,
        sweeps,
    })
}

/// Which flat connection a path is tested against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Connection {
    /// Uses `rho''/rho'` of the pair.
    Primal,
    /// Uses `tau''/tau'` of the pair.
    Dual,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesicReport {
    pub betas: Vec<f64>,
    /// Weighted sup norm `max_x w(x) |r(x)|` at each beta.
    pub residuals: Vec<f64>,
    /// Plain sup norm at each beta.
    pub unweighted: Vec<f64>,
    pub step: f64,
    pub max_residual: f64,
    /// Estimated size of rounding error in the weighted residual at this step.
    pub rounding_floor: f64,
}

/// Residual of the geodesic equation along `path` by central differences with step `h`.
pub fn geodesic_residual(
    path: &AnnealingPath,
    pair: &RhoTauPair,
    connection: Connection,
    betas: &[f64],
    h: f64,
) -> Result<GeodesicReport> {
    if !(h > 0.0 && h.is_finite()) || h < 1e-7 {
        return Err(Error::param(format!("differentiation step {h} is too small or invalid")));
    }
    let rep = match connection {
        Connection::Primal => pair.rho(),
        Connection::Dual => pair.tau(),
    };
    let weights = path.start().weights().to_vec();
    let mut residuals = Vec::with_capacity(betas.len());
    let mut unweighted = Vec::with_capacity(betas.len());
    let mut floor: f64 = 0.0;
    for &beta in betas {
        if beta - h < 0.0 || beta + h > 1.0 {
            return Err(Error::param(format!("beta {beta} +- {h} leaves [0, 1]")));
        }
        let lo = path.values(beta - h)?;
        let mid = path.values(beta)?;
        let hi = path.values(beta + h)?;
        let (mut wr, mut ur): (f64, f64) = (0.0, 0.0);
        for j in 0..mid.len() {
            let g = mid[j];
            let d1 = (hi[j] - lo[j]) / (2.0 * h);
            let d2 = (hi[j] - 2.0 * g + lo[j]) / (h * h);
            let r = d2 + rep.curvature_ratio(g).map_err(|e| e.at_index(j).at_beta(beta))? * d1 * d1;
            wr = wr.max(weights[j] * r.abs());
            ur = ur.max(r.abs());
            floor = floor.max(weights[j] * 16.0 * f64::EPSILON * g.abs().max(hi[j].abs()).max(lo[j].abs()) / (h * h));
        }
        residuals.push(wr);
        unweighted.push(ur);
    }
    Ok(GeodesicReport {
        betas: betas.to_vec(),
        max_residual: residuals.iter().copied().fold(0.0, f64::max),
        residuals,
        unweighted,
        step: h,
        rounding_floor: floor,
    })
}

/// `log(r1 / r2) / log(h1 / h2)`.
pub fn convergence_order(h1: f64, r1: f64, h2: f64, r2: f64) -> f64 {
    (r1 / r2).ln() / (h1 / h2).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{materialize, DensitySpec, Support};
    use crate::paths::{make_path, Normalization};

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let m = golden_section(|x| Ok((x - 0.3) * (x - 0.3)), -1.0, 2.0, SearchConfig::default()).unwrap();
        assert!((m - 0.3).abs() < 1e-7);
    }

    #[test]
    fn arithmetic_barycenter() {
        let s = Support::discrete(3).unwrap();
        let a = Density::new(s, vec![1.0, 2.0, 3.0]).unwrap();
        let b = Density::new(s, vec![3.0, 0.5, 1.0]).unwrap();
        let p = RhoTauPair::new(Representation::Identity, Representation::Identity).unwrap();
        let r = barycenter_bruteforce(&p, &[&a, &b], &MixtureWeights::pair(0.25).unwrap(), SearchConfig::default()).unwrap();
        assert!(r.max_abs_deviation < 1e-9);
        assert!(r.objective_at_mean <= r.objective_at_argmin + 1e-9);
    }

    #[test]
    fn vector_checks() {
        let w = MixtureWeights::pair(0.5).unwrap();
        let inputs = vec![vec![0.5, 2.0], vec![1.5, 0.7]];
        let q = vector_bregman_information_check(&VectorGenerator::identity_quadratic(2), &Representation::Identity, &inputs, &w).unwrap();
        assert!(q.max_abs_deviation < 1e-9);
        let l = vector_bregman_information_check(&VectorGenerator::LogSumExp, &Representation::Log, &inputs, &w).unwrap();
        assert!(l.max_abs_deviation < 1e-6, "{l:?}");
        let first = vector_bregman_information_check(&VectorGenerator::LogSumExp, &Representation::Log, &inputs, &MixtureWeights::new(vec![1.0, 0.0]).unwrap()).unwrap();
        assert_eq!(first.analytic_mean, inputs[0]);
        assert!(first.max_abs_deviation < 1e-6);
    }

    #[test]
    fn rejects_indefinite_quadratic() {
        let g = VectorGenerator::Quadratic {
            matrix: vec![vec![1.0, 2.0], vec![2.0, 1.0]],
        };
        let w = MixtureWeights::pair(0.5).unwrap();
        assert!(vector_bregman_information_check(&g, &Representation::Identity, &[vec![1.0, 1.0], vec![2.0, 2.0]], &w).is_err());
    }

    #[test]
    fn arithmetic_path_residual_is_rounding() {
        let s = Support::default();
        let pair = RhoTauPair::new(Representation::Identity, Representation::Identity).unwrap();
        for (sd, bound) in [(1.0, None), (2.0, Some(1e-10))] {
            let a = materialize(&DensitySpec::gaussian(0.0, sd), s).unwrap();
            let b = materialize(&DensitySpec::gaussian(1.0, sd), s).unwrap();
            let path = make_path(a, b, Representation::Identity, Normalization::Unnormalized).unwrap();
            let r = geodesic_residual(&path, &pair, Connection::Primal, &[0.25, 0.5, 0.75], 1e-4).unwrap();
            assert!(r.max_residual <= r.rounding_floor, "{r:?}");
            if let Some(bound) = bound {
                assert!(r.max_residual <= bound, "{r:?}");
            }
        }
    }
}
