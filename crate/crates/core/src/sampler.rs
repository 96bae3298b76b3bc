//! Annealed importance sampling along an [`AnnealingPath`].
//!
//! Each chain draws `x_0` exactly from the start density, then for `t = 1..=T`
//! moves with a kernel that leaves `pi_{beta_{t-1}}` invariant (no move at `t = 1`,
//! where `x_0` is already an exact draw) and accumulates
//! `ln pi_{beta_t}(x_t) - ln pi_{beta_{t-1}}(x_t)`. The mean of the weights estimates
//! `Z_1 / Z_0` without bias.
//!
//! On a grid the state is continuous and every intermediate density is the
//! piecewise-linear interpolant of its tabulated values, so the estimand is the
//! ratio of trapezoid masses. On a discrete support the state is an index.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{Density, Support};
use crate::error::{Error, Result};
use crate::paths::AnnealingPath;

/// Annealing schedule `0 = beta_0 < ... < beta_T = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Schedule(Vec<f64>);

impl Schedule {
    pub fn new(betas: Vec<f64>) -> Result<Self> {
        if betas.len() < 2 {
            return Err(Error::param("schedule needs at least beta_0 and beta_T"));
        }
        if betas[0] != 0.0 || *betas.last().unwrap() != 1.0 {
            return Err(Error::param("schedule must start at 0 and end at 1"));
        }
        if let Some(w) = betas.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::param(format!(
                "schedule must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(Self(betas))
    }

    /// `beta_t = t / T`.
    pub fn linear(steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::param("schedule needs at least one step"));
        }
        let mut b: Vec<f64> = (0..=steps).map(|t| t as f64 / steps as f64).collect();
        b[steps] = 1.0;
        Self::new(b)
    }

    pub fn betas(&self) -> &[f64] {
        &self.0
    }

    /// Number of increments `T`.
    pub fn steps(&self) -> usize {
        self.0.len() - 1
    }
}

/// Transition kernel applied between weight increments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Kernel {
    /// Random-walk Metropolis: Gaussian steps on a grid, a cyclic neighbor on a discrete support.
    RandomWalkMh { step: f64, sweeps: usize },
    /// An independent exact draw from the current intermediate density.
    ExactResample,
}

#[derive(Debug, Clone)]
pub struct AisConfig {
    pub path: AnnealingPath,
    pub schedule: Schedule,
    pub kernel: Kernel,
    pub chains: usize,
    pub seed: u64,
    /// Keep the running log-weight of every chain after every step.
    pub record_trace: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AisResult {
    pub log_weights: Vec<f64>,
    pub ratio_estimate: f64,
    pub log_ratio_estimate: f64,
    pub ess: f64,
    /// Mean acceptance at each step `t = 1..=T`; the first step makes no move and reports 1.
    pub acceptance_rates: Vec<f64>,
    /// `trace[k][t - 1]` is the log-weight of chain `k` after step `t`, when recorded.
    #[serde(skip)]
    pub trace: Option<Vec<Vec<f64>>>,
}

/// A chain state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum State {
    Point(f64),
    Node(usize),
}

/// Unnormalized density at a state: linear interpolation on a grid, lookup on a discrete support.
pub fn density_at(target: &Density, x: State) -> f64 {
    match x {
        State::Point(x) => target.value_at(x),
        State::Node(i) => target.values().get(i).copied().unwrap_or(0.0),
    }
}

/// One Metropolis step targeting `target`. Returns the new state and whether the move was accepted.
pub fn mh_kernel_step<R: Rng + ?Sized>(target: &Density, x: State, step: f64, rng: &mut R) -> (State, bool) {
    let proposal = match (x, target.support()) {
        (State::Point(x), _) => {
            let z: f64 = rng.sample(StandardNormal);
            State::Point(x + step * z)
        }
        (State::Node(i), Support::Discrete { n }) => {
            let n = *n;
            if n < 2 {
                return (x, false);
            }
            if rng.random::<bool>() {
                State::Node((i + 1) % n)
            } else {
                State::Node((i + n - 1) % n)
            }
        }
        (State::Node(_), Support::Grid { .. }) => return (x, false),
    };
    let (cur, new) = (density_at(target, x), density_at(target, proposal));
    if !(new > 0.0) {
        return (x, false);
    }
    if new >= cur || rng.random::<f64>() * cur < new {
        (proposal, true)
    } else {
        (x, false)
    }
}

/// Exact sampler for a tabulated density: inverse CDF of the piecewise-linear
/// interpolant on a grid, categorical on a discrete support.
#[derive(Debug, Clone)]
pub struct ExactSampler {
    cells: WeightedIndex<f64>,
    values: Vec<f64>,
    support: Support,
}

impl ExactSampler {
    pub fn new(target: &Density) -> Result<Self> {
        let v = target.values();
        let weights: Vec<f64> = match target.support() {
            Support::Grid { .. } => v.windows(2).map(|w| w[0] + w[1]).collect(),
            Support::Discrete { .. } => v.to_vec(),
        };
        let cells = WeightedIndex::new(&weights).map_err(|_| Error::ZeroMass)?;
        Ok(Self {
            cells,
            values: v.to_vec(),
            support: *target.support(),
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> State {
        let i = self.cells.sample(rng);
        match self.support {
            Support::Discrete { .. } => State::Node(i),
            Support::Grid { a, b, n } => {
                let h = (b - a) / (n - 1) as f64;
                let (lo, hi) = (self.values[i], self.values[i + 1]);
                // Solve lo s + (hi - lo) s^2 / 2 = u (lo + hi) / 2 for s in [0, 1].
                let u: f64 = rng.random();
                let c = u * (lo + hi);
                let disc = lo * lo + (hi - lo) * c;
                let s = if c == 0.0 { 0.0 } else { c / (lo + disc.max(0.0).sqrt()) };
                State::Point((a + (i as f64 + s.clamp(0.0, 1.0)) * h).min(b))
            }
        }
    }
}

/// `ln((1/K) sum_k exp(l_k))` with a max shift.
pub fn log_sum_exp_mean(log_weights: &[f64]) -> Result<f64> {
    if log_weights.is_empty() {
        return Err(Error::param("no log-weights"));
    }
    let top = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return Ok(top);
    }
    if !top.is_finite() {
        return Err(Error::Overflow(format!("log-weight {top}")));
    }
    let s: f64 = log_weights.iter().map(|l| (l - top).exp()).sum();
    Ok(top + (s / log_weights.len() as f64).ln())
}

/// Effective sample size `(sum w)^2 / sum w^2` of log-weights.
pub fn ess(log_weights: &[f64]) -> f64 {
    let top = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return 0.0;
    }
    let (s, s2) = log_weights.iter().fold((0.0, 0.0), |(s, s2), l| {
        let w = (l - top).exp();
        (s + w, s2 + w * w)
    });
    s * s / s2
}

struct Chain {
    log_w: f64,
    /// Accepted moves per step.
    accepted: Vec<usize>,
    trace: Vec<f64>,
}

fn ln(v: f64) -> f64 {
    if v > 0.0 {
        v.ln()
    } else {
        f64::NEG_INFINITY
    }
}

fn run_chain(
    cfg: &AisConfig,
    targets: &[Density],
    samplers: &[Option<ExactSampler>],
    k: usize,
) -> Chain {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(k as u64);
    let steps = cfg.schedule.steps();
    let mut x = samplers[0].as_ref().expect("start sampler").sample(&mut rng);
    let mut log_w = 0.0;
    let mut accepted = Vec::with_capacity(steps);
    let mut trace = Vec::with_capacity(if cfg.record_trace { steps } else { 0 });
    for t in 1..=steps {
        if t == 1 {
            accepted.push(0);
        } else {
            let prev = &targets[t - 1];
            match cfg.kernel {
                Kernel::ExactResample => {
                    x = samplers[t - 1].as_ref().expect("exact sampler").sample(&mut rng);
                    accepted.push(1);
                }
                Kernel::RandomWalkMh { step, sweeps } => {
                    let mut acc = 0usize;
                    for _ in 0..sweeps {
                        let (nx, ok) = mh_kernel_step(prev, x, step, &mut rng);
                        x = nx;
                        acc += ok as usize;
                    }
                    accepted.push(acc);
                }
            }
        }
        let (lo, hi) = (density_at(&targets[t - 1], x), density_at(&targets[t], x));
        if lo != hi && log_w != f64::NEG_INFINITY {
            log_w += ln(hi) - ln(lo);
        }
        if cfg.record_trace {
            trace.push(log_w);
        }
    }
    Chain { log_w, accepted, trace }
}

fn validate(cfg: &AisConfig) -> Result<()> {
    if cfg.chains == 0 {
        return Err(Error::param("number of chains must be at least 1"));
    }
    if let Kernel::RandomWalkMh { step, sweeps } = cfg.kernel {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::param(format!("MH step must be positive and finite, got {step}")));
        }
        if sweeps == 0 {
            return Err(Error::param("MH sweeps must be at least 1"));
        }
    }
    Ok(())
}

pub fn run_ais(cfg: &AisConfig) -> Result<AisResult> {
    validate(cfg)?;
    let betas = cfg.schedule.betas();
    let support = *cfg.path.start().support();
    let targets = betas
        .iter()
        .map(|&b| Density::new(support, cfg.path.values(b)?).map_err(|e| e.at_beta(b)))
        .collect::<Result<Vec<_>>>()?;
    let exact = matches!(cfg.kernel, Kernel::ExactResample);
    let samplers = targets
        .iter()
        .enumerate()
        .map(|(t, d)| {
            if t == 0 || (exact && t < betas.len() - 1) {
                ExactSampler::new(d).map(Some).map_err(|e| e.at_beta(betas[t]))
            } else {
                Ok(None)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let chains: Vec<Chain> = (0..cfg.chains)
        .into_par_iter()
        .map(|k| run_chain(cfg, &targets, &samplers, k))
        .collect();
    let log_weights: Vec<f64> = chains.iter().map(|c| c.log_w).collect();
    if log_weights.iter().all(|l| *l == f64::NEG_INFINITY) {
        return Err(Error::Overflow("every importance weight is zero".into()));
    }
    let log_ratio_estimate = log_sum_exp_mean(&log_weights)?;
    let steps = cfg.schedule.steps();
    let moves = match cfg.kernel {
        Kernel::RandomWalkMh { sweeps, .. } => sweeps,
        Kernel::ExactResample => 1,
    };
    let acceptance_rates = (0..steps)
        .map(|t| {
            if t == 0 {
                1.0
            } else {
                chains.iter().map(|c| c.accepted[t]).sum::<usize>() as f64 / (cfg.chains * moves) as f64
            }
        })
        .collect();
    Ok(AisResult {
        ratio_estimate: log_ratio_estimate.exp(),
        log_ratio_estimate,
        ess: ess(&log_weights),
        acceptance_rates,
        trace: cfg.record_trace.then(|| chains.into_iter().map(|c| c.trace).collect()),
        log_weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformed::Representation;
    use crate::paths::{make_path, Normalization};

    fn two_state(kernel: Kernel, steps: usize, chains: usize, seed: u64) -> AisResult {
        let s = Support::discrete(2).unwrap();
        let a = Density::new(s, vec![1.0, 1.0]).unwrap();
        let b = Density::new(s, vec![2.0, 6.0]).unwrap();
        let path = make_path(a, b, Representation::Log, Normalization::Unnormalized).unwrap();
        run_ais(&AisConfig {
            path,
            schedule: Schedule::linear(steps).unwrap(),
            kernel,
            chains,
            seed,
            record_trace: false,
        })
        .unwrap()
    }

    #[test]
    fn log_sum_exp_mean_cases() {
        assert_eq!(log_sum_exp_mean(&[0.0; 4]).unwrap(), 0.0);
        assert!((log_sum_exp_mean(&[0.0, 3f64.ln()]).unwrap() - 2f64.ln()).abs() < 1e-15);
        let big = log_sum_exp_mean(&[1000.0, 1000.0 + 3f64.ln()]).unwrap();
        assert!((big - 1000.0 - 2f64.ln()).abs() < 1e-12);
        assert!(log_sum_exp_mean(&[]).is_err());
    }

    #[test]
    fn schedule_validation() {
        assert!(Schedule::new(vec![0.0, 0.5, 0.5, 1.0]).is_err());
        assert!(Schedule::new(vec![0.1, 1.0]).is_err());
        assert_eq!(Schedule::linear(4).unwrap().betas(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn single_step_is_importance_sampling() {
        let r = two_state(Kernel::ExactResample, 1, 1000, 3);
        for l in &r.log_weights {
            assert!(*l == 2f64.ln() || *l == 6f64.ln());
        }
        assert_eq!(r.acceptance_rates, vec![1.0]);
    }

    #[test]
    fn two_state_ratio() {
        let r = two_state(Kernel::ExactResample, 10, 20_000, 11);
        let w: Vec<f64> = r.log_weights.iter().map(|l| l.exp()).collect();
        let mean = w.iter().sum::<f64>() / w.len() as f64;
        let var = w.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (w.len() - 1) as f64;
        assert!((mean - 4.0).abs() < 4.0 * (var / w.len() as f64).sqrt(), "{mean}");
        assert!((r.ratio_estimate - mean).abs() < 1e-12 * mean);
    }

    #[test]
    fn mh_uphill_always_accepted() {
        let s = Support::discrete(2).unwrap();
        let d = Density::new(s, vec![1.0, 5.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            assert_eq!(mh_kernel_step(&d, State::Node(0), 1.0, &mut rng), (State::Node(1), true));
        }
    }

    #[test]
    fn grid_inverse_cdf_stays_on_support() {
        let s = Support::grid(0.0, 1.0, 3).unwrap();
        let d = Density::new(s, vec![0.0, 2.0, 0.0]).unwrap();
        let sampler = ExactSampler::new(&d).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut mean = 0.0;
        for _ in 0..20_000 {
            let State::Point(x) = sampler.sample(&mut rng) else { panic!() };
            assert!((0.0..=1.0).contains(&x));
            mean += x / 20_000.0;
        }
        assert!((mean - 0.5).abs() < 0.01);
    }
}
