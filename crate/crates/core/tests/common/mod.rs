//! Reference formulas written out directly, used to check the library.
#![allow(dead_code)]

use annealing_paths::Representation;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn exp_q(t: f64, q: f64) -> f64 {
    if q == 1.0 {
        return t.exp();
    }
    let base = 1.0 + (1.0 - q) * t;
    if base <= 0.0 {
        return if q < 1.0 { 0.0 } else { f64::INFINITY };
    }
    base.powf(1.0 / (1.0 - q))
}

pub fn log_q(u: f64, q: f64) -> f64 {
    if q == 1.0 {
        u.ln()
    } else {
        (u.powf(1.0 - q) - 1.0) / (1.0 - q)
    }
}

pub fn rho(r: &Representation, u: f64) -> f64 {
    match r {
        Representation::Identity => u,
        Representation::Log => u.ln(),
        Representation::LogQ { q } => log_q(u, *q),
        Representation::LogOneMinusLambda { lambda } => (u.powf(*lambda) - 1.0) / lambda,
        Representation::Affine { base, scale, shift } => scale * rho(base, u) + shift,
    }
}

pub fn rho_inv(r: &Representation, y: f64) -> f64 {
    match r {
        Representation::Identity => y,
        Representation::Log => y.exp(),
        Representation::LogQ { q } => exp_q(y, *q),
        Representation::LogOneMinusLambda { lambda } => (1.0 + lambda * y).powf(1.0 / lambda),
        Representation::Affine { base, scale, shift } => rho_inv(base, (y - shift) / scale),
    }
}

/// `rho^{-1}(sum_i w_i rho(u_i))`.
pub fn mean(r: &Representation, u: &[f64], w: &[f64]) -> f64 {
    rho_inv(r, u.iter().zip(w).map(|(x, wi)| wi * rho(r, *x)).sum())
}

pub fn kl(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * (x / y).ln() - x + y).sum()
}

pub fn amari(alpha: f64, a: &[f64], b: &[f64]) -> f64 {
    let c = 1.0 / (alpha * (1.0 - alpha));
    a.iter()
        .zip(b)
        .map(|(x, y)| x / alpha + y / (1.0 - alpha) - c * x.powf(1.0 - alpha) * y.powf(alpha))
        .sum()
}

pub fn beta_div(order: f64, a: &[f64], b: &[f64]) -> f64 {
    let o = order;
    a.iter()
        .zip(b)
        .map(|(x, y)| x.powf(o) / (o * (o - 1.0)) + y.powf(o) / o - x * y.powf(o - 1.0) / (o - 1.0))
        .sum()
}

pub fn itakura_saito(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x / y - (x / y).ln() - 1.0).sum()
}

pub fn half_squared(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| 0.5 * (x - y) * (x - y)).sum()
}

pub fn jensen_shannon(beta: f64, a: &[f64], b: &[f64]) -> f64 {
    let m: Vec<f64> = a.iter().zip(b).map(|(x, y)| (1.0 - beta) * x + beta * y).collect();
    (1.0 - beta) * kl(a, &m) + beta * kl(b, &m)
}

pub fn cichocki_amari(q: f64, lambda: f64, a: &[f64], b: &[f64]) -> f64 {
    let k = lambda + 1.0 - q;
    let c = 1.0 / (lambda * (1.0 - q) * k);
    a.iter()
        .zip(b)
        .map(|(x, y)| c * ((1.0 - q) * x.powf(k) + lambda * y.powf(k) - k * x.powf(1.0 - q) * y.powf(lambda)))
        .sum()
}

pub fn zhang(beta: f64, q: f64, a: &[f64], b: &[f64]) -> f64 {
    let c = 1.0 / (beta * (1.0 - beta) * q);
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let m = exp_q((1.0 - beta) * log_q(*x, q) + beta * log_q(*y, q), q);
            c * ((1.0 - beta) * x + beta * y - m)
        })
        .sum()
}

/// Divergence `D[rho(a) : rho(b)]` of a catalog pair written as its named formula.
pub fn pair_divergence(rho: &Representation, tau: &Representation, a: &[f64], b: &[f64]) -> f64 {
    use Representation as R;
    match (rho, tau) {
        (R::Log, R::Identity) => kl(b, a),
        (R::Identity, R::Identity) => half_squared(a, b),
        (R::LogQ { q }, R::Identity) if *q == 2.0 => itakura_saito(b, a),
        (R::LogQ { q }, R::Identity) => beta_div(2.0 - q, b, a),
        (R::LogQ { q }, R::LogOneMinusLambda { lambda }) if q == lambda => amari(*q, a, b),
        (R::LogQ { q }, R::LogOneMinusLambda { lambda }) => cichocki_amari(*q, *lambda, a, b),
        other => panic!("no reference formula for {other:?}"),
    }
}

/// `|x - y| / max(1, |y|)`.
pub fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs().max(1.0)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn positive_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.1..3.0)).collect()
}

pub fn simplex(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let s: f64 = raw.iter().sum();
    let mut w: Vec<f64> = raw.iter().map(|x| x / s).collect();
    let head: f64 = w[..k - 1].iter().sum();
    w[k - 1] = 1.0 - head;
    w
}

/// Unnormalized Gaussian `scale * N(x; mean, sd^2)`.
pub fn gaussian(x: f64, mean: f64, sd: f64, scale: f64) -> f64 {
    let z = (x - mean) / sd;
    scale * (-0.5 * z * z).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt())
}
