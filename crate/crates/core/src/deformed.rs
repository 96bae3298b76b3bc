//! Deformed logarithms, monotone representations, and rho-tau generator pairs.
//!
//! ```text
//! log_q(u) = (u^(1-q) - 1) / (1 - q)          u > 0
//! exp_q(t) = [1 + (1-q) t]_+ ^ (1 / (1-q))
//! ```
//!
//! Both reduce to `ln` / `exp` as `q -> 1`. Every representation shipped here is an
//! affine image of a power logarithm `L_a(u) = (u^a - 1)/a` (`L_0 = ln`):
//!
//! | kind                  | exponent `a` | affine part      |
//! |-----------------------|--------------|------------------|
//! | `Identity`            | 1            | `L_1(u) + 1`     |
//! | `Log`                 | 0            | `L_0(u)`         |
//! | `LogQ { q }`          | `1 - q`      | `L_a(u)`         |
//! | `LogOneMinusLambda`   | `lambda`     | `L_a(u)`         |
//! | `Affine`              | inherited    | `c * base + s`   |
//!
//! A [`RhoTauPair`] couples two representations through a convex generator `f`
//! with `f' = tau o rho^-1` and convex conjugate `f*` with `(f*)' = rho o tau^-1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this `|1 - q|` the deformed functions switch to `ln` / `exp`.
pub const Q_EPS: f64 = 1e-8;

/// Up to this `|1 - q|` the deformed functions use `expm1` / `ln_1p` forms.
const STABLE_BAND: f64 = 1e-4;

/// Power means switch to the `expm1` / `ln_1p` form below this exponent.
const POWER_MEAN_BAND: f64 = 1e-3;

/// Deformed logarithm. Errors for `u <= 0` or NaN.
pub fn q_log(u: f64, q: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::Domain {
            index: 0,
            value: u,
            what: "q-logarithm needs u > 0",
        });
    }
    Ok(power_log(u, 1.0 - q))
}

/// Deformed exponential, clipped at zero for `q < 1`.
///
/// For `q > 1` arguments at or beyond the pole `1/(q-1)` give `+inf`.
pub fn q_exp(t: f64, q: f64) -> f64 {
    power_exp(t, 1.0 - q)
}

/// `L_a(u) = (u^a - 1)/a`, `ln u` at `a = 0`. Assumes `u > 0`.
fn power_log(u: f64, a: f64) -> f64 {
    if a.abs() < Q_EPS {
        u.ln()
    } else if a.abs() <= STABLE_BAND {
        (a * u.ln()).exp_m1() / a
    } else {
        (u.powf(a) - 1.0) / a
    }
}

/// Inverse of [`power_log`] with clipping below and `+inf` past the pole.
fn power_exp(t: f64, a: f64) -> f64 {
    if a.abs() < Q_EPS {
        return t.exp();
    }
    let base = 1.0 + a * t;
    if base <= 0.0 {
        return if a > 0.0 { 0.0 } else { f64::INFINITY };
    }
    if a.abs() <= STABLE_BAND {
        ((a * t).ln_1p() / a).exp()
    } else {
        base.powf(1.0 / a)
    }
}

/// A strictly increasing map from density values to a representation scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Representation {
    Identity,
    Log,
    LogQ {
        q: f64,
    },
    /// `log_{1-lambda}(u) = (u^lambda - 1)/lambda`.
    LogOneMinusLambda {
        lambda: f64,
    },
    /// `scale * base(u) + shift` with `scale > 0`.
    Affine {
        base: Box<Representation>,
        scale: f64,
        shift: f64,
    },
}

/// `rho(u) = scale * L_a(u) + shift`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct PowerForm {
    a: f64,
    scale: f64,
    shift: f64,
}

impl Representation {
    pub fn log_q(q: f64) -> Self {
        Representation::LogQ { q }
    }

    pub fn log_one_minus_lambda(lambda: f64) -> Self {
        Representation::LogOneMinusLambda { lambda }
    }

    pub fn affine(self, scale: f64, shift: f64) -> Self {
        Representation::Affine {
            base: Box::new(self),
            scale,
            shift,
        }
    }

    /// Check parameters are finite and affine scales positive.
    pub fn validate(&self) -> Result<()> {
        match self {
            Representation::Identity | Representation::Log => Ok(()),
            Representation::LogQ { q } if q.is_finite() => Ok(()),
            Representation::LogOneMinusLambda { lambda } if lambda.is_finite() => Ok(()),
            Representation::Affine { base, scale, shift } => {
                if !(scale.is_finite() && *scale > 0.0 && shift.is_finite()) {
                    return Err(Error::param(format!(
                        "affine representation needs finite scale > 0, got scale {scale} shift {shift}"
                    )));
                }
                base.validate()
            }
            other => Err(Error::param(format!("non-finite parameter in {other:?}"))),
        }
    }

    fn form(&self) -> PowerForm {
        let snap = |a: f64| if a.abs() < Q_EPS { 0.0 } else { a };
        match self {
            Representation::Identity => PowerForm {
                a: 1.0,
                scale: 1.0,
                shift: 1.0,
            },
            Representation::Log => PowerForm {
                a: 0.0,
                scale: 1.0,
                shift: 0.0,
            },
            Representation::LogQ { q } => PowerForm {
                a: snap(1.0 - q),
                scale: 1.0,
                shift: 0.0,
            },
            Representation::LogOneMinusLambda { lambda } => PowerForm {
                a: snap(*lambda),
                scale: 1.0,
                shift: 0.0,
            },
            Representation::Affine { base, scale, shift } => {
                let b = base.form();
                PowerForm {
                    a: b.a,
                    scale: scale * b.scale,
                    shift: scale * b.shift + shift,
                }
            }
        }
    }

    /// The power exponent `a` of the underlying `L_a`.
    pub fn exponent(&self) -> f64 {
        self.form().a
    }

    /// Whether zero is inside the domain (only identity-based kinds).
    pub fn allows_zero(&self) -> bool {
        match self {
            Representation::Identity => true,
            Representation::Affine { base, .. } => base.allows_zero(),
            _ => false,
        }
    }

    pub fn in_domain(&self, u: f64) -> bool {
        u.is_finite() && (u > 0.0 || (u == 0.0 && self.allows_zero()))
    }

    fn check(&self, u: f64) -> Result<()> {
        if self.in_domain(u) {
            Ok(())
        } else {
            Err(Error::Domain {
                index: 0,
                value: u,
                what: if self.allows_zero() {
                    "representation needs a finite value >= 0"
                } else {
                    "representation needs a finite value > 0"
                },
            })
        }
    }

    pub fn apply(&self, u: f64) -> Result<f64> {
        self.check(u)?;
        let p = self.form();
        let l = if u == 0.0 {
            -1.0 / p.a
        } else {
            power_log(u, p.a)
        };
        Ok(p.scale * l + p.shift)
    }

    /// Map a representation-scale value back to a density value.
    ///
    /// Values below the lower end of the range clip to zero; values past an upper
    /// pole or overflowing are range errors.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if y.is_nan() {
            return Err(Error::Range {
                value: y,
                what: "NaN on representation scale",
            });
        }
        let p = self.form();
        let u = power_exp((y - p.shift) / p.scale, p.a);
        if u.is_finite() {
            Ok(u)
        } else {
            Err(Error::Range {
                value: y,
                what: "outside the range of the representation",
            })
        }
    }

    /// First derivative `rho'(u)`.
    pub fn d1(&self, u: f64) -> Result<f64> {
        self.check(u)?;
        let p = self.form();
        Ok(p.scale * u.powf(p.a - 1.0))
    }

    /// Second derivative `rho''(u)`.
    pub fn d2(&self, u: f64) -> Result<f64> {
        self.check(u)?;
        let p = self.form();
        Ok(p.scale * (p.a - 1.0) * u.powf(p.a - 2.0))
    }

    /// `rho''(u) / rho'(u) = (a - 1)/u`, the connection coefficient of a rho-geodesic.
    pub fn curvature_ratio(&self, u: f64) -> Result<f64> {
        self.check(u)?;
        Ok((self.form().a - 1.0) / u)
    }

    /// Quasi-arithmetic mean `rho^-1(sum_i w_i rho(u_i))` of scalar values.
    ///
    /// Weights are assumed nonnegative and summing to one. A weight equal to one
    /// returns its input unchanged. The mean is computed as a power mean, which is
    /// the same quantity (the mean ignores the affine part of `rho`) without the
    /// cancellation of working on the representation scale.
    pub fn quasi_mean(&self, values: &[f64], weights: &[f64]) -> Result<f64> {
        debug_assert_eq!(values.len(), weights.len());
        for (i, &u) in values.iter().enumerate() {
            self.check(u).map_err(|e| e.at_index(i))?;
        }
        if let Some(i) = weights.iter().position(|&w| w == 1.0) {
            return Ok(values[i]);
        }
        if values.iter().all(|&u| u == values[0]) {
            return Ok(values[0]);
        }
        let a = self.form().a;
        let pairs = values.iter().zip(weights).filter(|(_, &w)| w > 0.0);
        let m = if a == 0.0 {
            pairs.map(|(u, w)| w * u.ln()).sum::<f64>().exp()
        } else if a == 1.0 {
            pairs.map(|(u, w)| w * u).sum::<f64>()
        } else if a.abs() >= POWER_MEAN_BAND {
            pairs.map(|(u, w)| w * u.powf(a)).sum::<f64>().powf(1.0 / a)
        } else {
            let s: f64 = pairs.map(|(u, w)| w * (a * u.ln()).exp_m1()).sum();
            (s.ln_1p() / a).exp()
        };
        if m.is_finite() {
            Ok(m)
        } else {
            Err(Error::Overflow(format!("quasi-arithmetic mean overflowed ({m})")))
        }
    }

    /// Same mean as [`Representation::quasi_mean`] computed literally as
    /// `rho^-1(sum_i w_i rho(u_i))`.
    pub fn quasi_mean_direct(&self, values: &[f64], weights: &[f64]) -> Result<f64> {
        let mut s = 0.0;
        for (i, (&u, &w)) in values.iter().zip(weights).enumerate() {
            s += w * self.apply(u).map_err(|e| e.at_index(i))?;
        }
        self.inverse(s)
    }
}

/// Closed-form generators. The primal orientation is the catalog orientation.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Generator {
    /// `(Log, Identity)`: `f = e^r - 1`, `f* = t ln t - t + 1`.
    Exp,
    /// `(Identity, Identity)`: `f = r^2/2`.
    Quadratic,
    /// `(LogQ q, LogOneMinusLambda lambda)`.
    CichockiAmari { q: f64, lambda: f64 },
    /// `(LogQ q, Identity)`, `q` away from 1 and 2.
    Beta { q: f64 },
    /// `(LogQ 2, Identity)`: `f = -ln(1 - r)`, `f* = t - ln t - 1`.
    ItakuraSaito,
    /// Adaptive quadrature of `f'` from the anchor `rho(1)`.
    Numerical,
}

/// A pair of representations with its convex generator and conjugate.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoTauPair {
    rho: Representation,
    tau: Representation,
    generator: Generator,
    /// When set, `f` and `f*` of the catalog generator are swapped.
    swapped: bool,
}

/// Tolerance of the adaptive Simpson rule used for non-catalog generators.
pub const GENERATOR_QUAD_TOL: f64 = 1e-12;

fn near(x: f64, y: f64) -> bool {
    (x - y).abs() < Q_EPS
}

/// Normalize near-degenerate kinds so catalog matching sees `Log`.
fn canonical(r: &Representation) -> Representation {
    match r {
        Representation::LogQ { q } if near(*q, 1.0) => Representation::Log,
        Representation::LogOneMinusLambda { lambda } if near(*lambda, 0.0) => Representation::Log,
        Representation::LogOneMinusLambda { lambda } if near(*lambda, 1.0) => {
            Representation::LogOneMinusLambda { lambda: 1.0 }
        }
        other => other.clone(),
    }
}

fn catalog(rho: &Representation, tau: &Representation) -> Option<Generator> {
    use Representation as R;
    match (canonical(rho), canonical(tau)) {
        (R::Log, R::Identity) => Some(Generator::Exp),
        (R::Identity, R::Identity) => Some(Generator::Quadratic),
        (R::LogQ { q }, R::Identity) if near(q, 2.0) => Some(Generator::ItakuraSaito),
        (R::LogQ { q }, R::Identity) => Some(Generator::Beta { q }),
        (R::LogQ { q }, R::LogOneMinusLambda { lambda }) if !near(lambda + 1.0 - q, 0.0) => {
            Some(Generator::CichockiAmari { q, lambda })
        }
        _ => None,
    }
}

impl RhoTauPair {
    /// Build a pair, using a closed-form generator when one is catalogued.
    pub fn new(rho: Representation, tau: Representation) -> Result<Self> {
        rho.validate()?;
        tau.validate()?;
        if let Some(g) = catalog(&rho, &tau) {
            return Ok(Self {
                rho,
                tau,
                generator: g,
                swapped: false,
            });
        }
        if let Some(g) = catalog(&tau, &rho) {
            return Ok(Self {
                rho,
                tau,
                generator: g,
                swapped: true,
            });
        }
        Ok(Self {
            rho,
            tau,
            generator: Generator::Numerical,
            swapped: false,
        })
    }

    /// Same pair but with the generator always integrated numerically.
    pub fn new_numerical(rho: Representation, tau: Representation) -> Result<Self> {
        rho.validate()?;
        tau.validate()?;
        Ok(Self {
            rho,
            tau,
            generator: Generator::Numerical,
            swapped: false,
        })
    }

    /// `(Log, Identity)`: the pair behind the KL divergence.
    pub fn kl() -> Self {
        Self::new(Representation::Log, Representation::Identity).expect("valid pair")
    }

    pub fn rho(&self) -> &Representation {
        &self.rho
    }

    pub fn tau(&self) -> &Representation {
        &self.tau
    }

    /// Whether `f` is evaluated in closed form.
    pub fn is_closed_form(&self) -> bool {
        self.generator != Generator::Numerical
    }

    /// The pair with roles of `rho` and `tau` (and of `f` and `f*`) exchanged.
    pub fn dual(&self) -> Self {
        Self {
            rho: self.tau.clone(),
            tau: self.rho.clone(),
            generator: self.generator,
            swapped: !self.swapped,
        }
    }

    /// `f'(r) = tau(rho^-1(r))`.
    pub fn f_prime(&self, r: f64) -> Result<f64> {
        self.tau.apply(self.rho.inverse(r)?)
    }

    /// `(f*)'(t) = rho(tau^-1(t))`.
    pub fn f_conj_prime(&self, t: f64) -> Result<f64> {
        self.rho.apply(self.tau.inverse(t)?)
    }

    /// The convex generator on the `rho` scale.
    pub fn f(&self, r: f64) -> Result<f64> {
        let v = match (self.generator, self.swapped) {
            (Generator::Numerical, _) => self.numerical_f(r)?,
            (g, false) => catalog_f(g, r)?,
            (g, true) => catalog_conj(g, r)?,
        };
        finite(v, "generator")
    }

    /// The convex conjugate on the `tau` scale.
    pub fn f_conj(&self, t: f64) -> Result<f64> {
        let v = match (self.generator, self.swapped) {
            (Generator::Numerical, _) => {
                let u = self.tau.inverse(t)?;
                let r = self.rho.apply(u)?;
                r * t - self.numerical_f(r)?
            }
            (g, false) => catalog_conj(g, t)?,
            (g, true) => catalog_f(g, t)?,
        };
        finite(v, "conjugate generator")
    }

    fn numerical_f(&self, r: f64) -> Result<f64> {
        let r0 = self.rho.apply(1.0)?;
        let g = |s: f64| self.f_prime(s);
        adaptive_simpson(&g, r0, r, GENERATOR_QUAD_TOL)
    }

    /// Pointwise Bregman term `f(ra) - f(rb) - (ra - rb) f'(rb)` on the rho scale.
    pub fn bregman_term(&self, ra: f64, rb: f64) -> Result<f64> {
        if ra == rb {
            return Ok(0.0);
        }
        if matches!(self.generator, Generator::Quadratic | Generator::Beta { q: 0.0 }) {
            let d = ra - rb;
            return Ok(0.5 * d * d);
        }
        let v = self.f(ra)? - self.f(rb)? - (ra - rb) * self.f_prime(rb)?;
        finite(v, "Bregman term")
    }
}

fn finite(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!("{what} evaluated to {v}")))
    }
}

fn out_of_range(v: f64) -> Error {
    Error::Range {
        value: v,
        what: "outside the generator domain",
    }
}

fn catalog_f(g: Generator, r: f64) -> Result<f64> {
    Ok(match g {
        Generator::Exp => r.exp_m1(),
        Generator::Quadratic => 0.5 * r * r,
        Generator::CichockiAmari { q, lambda } => {
            let k = lambda + 1.0 - q;
            let e = q_exp(r, q);
            if !e.is_finite() {
                return Err(out_of_range(r));
            }
            (e.powf(k) - 1.0) / (lambda * k) - r / lambda
        }
        Generator::Beta { q } => {
            let e = q_exp(r, q);
            if !e.is_finite() {
                return Err(out_of_range(r));
            }
            (e.powf(2.0 - q) - 1.0) / (2.0 - q)
        }
        Generator::ItakuraSaito => {
            if r >= 1.0 {
                return Err(out_of_range(r));
            }
            -(-r).ln_1p()
        }
        Generator::Numerical => unreachable!("numerical generator has no closed form"),
    })
}

fn catalog_conj(g: Generator, t: f64) -> Result<f64> {
    Ok(match g {
        Generator::Exp => {
            if t < 0.0 {
                return Err(out_of_range(t));
            }
            if t == 0.0 {
                1.0
            } else {
                t * t.ln() - t + 1.0
            }
        }
        Generator::Quadratic => 0.5 * t * t,
        Generator::CichockiAmari { q, lambda } => {
            let k = lambda + 1.0 - q;
            let u = q_exp(t, 1.0 - lambda);
            if !u.is_finite() {
                return Err(out_of_range(t));
            }
            (u.powf(k) - 1.0) / ((1.0 - q) * k) - t / (1.0 - q)
        }
        Generator::Beta { q } => {
            if t < 0.0 {
                return Err(out_of_range(t));
            }
            t.powf(2.0 - q) / ((1.0 - q) * (2.0 - q)) - t / (1.0 - q) + 1.0 / (2.0 - q)
        }
        Generator::ItakuraSaito => {
            if t <= 0.0 {
                return Err(out_of_range(t));
            }
            t - t.ln() - 1.0
        }
        Generator::Numerical => unreachable!("numerical generator has no closed form"),
    })
}

/// Adaptive Simpson quadrature of a fallible integrand to absolute tolerance `tol`.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return Ok(-adaptive_simpson(f, b, a, tol)?);
    }
    // A few fixed panels keep the recursion away from pathological first guesses.
    const PANELS: usize = 8;
    let h = (b - a) / PANELS as f64;
    let mut total = 0.0;
    for k in 0..PANELS {
        let lo = a + h * k as f64;
        let hi = if k + 1 == PANELS { b } else { lo + h };
        let fa = f(lo)?;
        let fb = f(hi)?;
        let m = 0.5 * (lo + hi);
        let fm = f(m)?;
        let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson_step(f, lo, hi, fa, fm, fb, whole, tol / PANELS as f64, 48)?;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol || m <= a || m >= b {
        return Ok(left + right + delta / 15.0);
    }
    Ok(simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_log_reference_values() {
        assert!((q_log(2.0, 2.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((q_log(4.0, 0.5).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(q_log(2.0, 1.0).unwrap(), 2f64.ln());
        assert!(q_log(0.0, 0.5).is_err());
        assert!(q_log(-1.0, 2.0).is_err());
        assert!(q_log(f64::NAN, 2.0).is_err());
    }

    #[test]
    fn q_exp_clips_and_saturates() {
        assert_eq!(q_exp(-3.0, 0.5), 0.0);
        assert_eq!(q_exp(2.0, 2.0), f64::INFINITY);
        assert!((q_exp(0.5, 2.0) - 2.0).abs() < 1e-15);
        assert!((q_exp(2.0, 0.5) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn q_near_one_is_continuous() {
        for &u in &[0.1f64, 0.7, 1.3, 5.0] {
            let l = u.ln();
            for &dq in &[1e-9, 1e-7, 1e-5, 3e-4] {
                for q in [1.0 - dq, 1.0 + dq] {
                    let v = q_log(u, q).unwrap();
                    if dq < Q_EPS {
                        assert_eq!(v, l);
                        continue;
                    }
                    // log_q(u) = ln u + (1-q) ln(u)^2 / 2 + ...
                    let approx = l + (1.0 - q) * l * l / 2.0;
                    assert!((v - approx).abs() < 2.0 * dq * dq * l.abs().powi(3) + 1e-15);
                }
            }
        }
    }

    #[test]
    fn representation_inverse_and_derivatives() {
        let reps = [
            Representation::Identity,
            Representation::Log,
            Representation::log_q(0.5),
            Representation::log_q(2.0),
            Representation::log_one_minus_lambda(1.5),
            Representation::log_q(0.3).affine(2.5, -1.0),
        ];
        for r in &reps {
            for &u in &[0.05, 0.5, 1.0, 2.0, 7.0] {
                let y = r.apply(u).unwrap();
                assert!((r.inverse(y).unwrap() - u).abs() < 1e-13 * u.max(1.0));
                let h = 1e-5 * u;
                let fd = (r.apply(u + h).unwrap() - r.apply(u - h).unwrap()) / (2.0 * h);
                assert!((fd - r.d1(u).unwrap()).abs() < 1e-6 * fd.abs().max(1.0));
                let fd2 = (r.d1(u + h).unwrap() - r.d1(u - h).unwrap()) / (2.0 * h);
                assert!((fd2 - r.d2(u).unwrap()).abs() < 1e-5 * fd2.abs().max(1.0));
            }
        }
    }

    #[test]
    fn pole_is_a_range_error() {
        assert!(Representation::log_q(2.0).inverse(1.0).is_err());
        assert_eq!(Representation::log_q(0.5).inverse(-3.0).unwrap(), 0.0);
    }

    #[test]
    fn quasi_mean_known_values() {
        let w = [0.5, 0.5];
        let geo = Representation::Log.quasi_mean(&[1.0, 4.0], &w).unwrap();
        assert!((geo - 2.0).abs() < 1e-15);
        let ari = Representation::Identity.quasi_mean(&[1.0, 4.0], &w).unwrap();
        assert_eq!(ari, 2.5);
        let harm = Representation::log_q(2.0).quasi_mean(&[1.0, 4.0], &w).unwrap();
        assert!((harm - 1.6).abs() < 1e-15);
        let half = Representation::log_q(0.5).quasi_mean(&[1.0, 4.0], &w).unwrap();
        assert!((half - 2.25).abs() < 1e-15);
        assert_eq!(
            Representation::log_q(0.5)
                .quasi_mean(&[0.3, 4.0], &[1.0, 0.0])
                .unwrap(),
            0.3
        );
    }

    #[test]
    fn catalog_is_used_for_named_pairs() {
        let ca = RhoTauPair::new(Representation::log_q(0.5), Representation::log_one_minus_lambda(1.5)).unwrap();
        assert!(ca.is_closed_form());
        let dual = RhoTauPair::new(Representation::Identity, Representation::Log).unwrap();
        assert!(dual.is_closed_form());
        let other = RhoTauPair::new(Representation::Log, Representation::Log).unwrap();
        assert!(!other.is_closed_form());
    }

    #[test]
    fn closed_forms_match_quadrature() {
        let pairs = [
            (Representation::Log, Representation::Identity),
            (Representation::Identity, Representation::Identity),
            (Representation::log_q(0.5), Representation::log_one_minus_lambda(1.5)),
            (Representation::log_q(2.0), Representation::log_one_minus_lambda(0.5)),
            (Representation::log_q(0.5), Representation::Identity),
            (Representation::log_q(2.0), Representation::Identity),
            (Representation::Identity, Representation::Log),
        ];
        for (rho, tau) in pairs {
            let closed = RhoTauPair::new(rho.clone(), tau.clone()).unwrap();
            let num = RhoTauPair::new_numerical(rho.clone(), tau.clone()).unwrap();
            assert!(closed.is_closed_form());
            let anchor_f = closed.f(rho.apply(1.0).unwrap()).unwrap();
            let anchor_c = closed.f_conj(tau.apply(1.0).unwrap()).unwrap();
            for &u in &[0.2, 0.9, 1.7, 3.0] {
                let r = rho.apply(u).unwrap();
                let t = tau.apply(u).unwrap();
                let df = closed.f(r).unwrap() - anchor_f - num.f(r).unwrap();
                assert!(df.abs() < 1e-10, "{rho:?} {tau:?} u={u}: {df}");
                let dc = closed.f_conj(t).unwrap() - anchor_c - (num.f_conj(t).unwrap() - num.f_conj(tau.apply(1.0).unwrap()).unwrap());
                assert!(dc.abs() < 1e-10, "{rho:?} {tau:?} u={u}: conj {dc}");
            }
        }
    }
}
