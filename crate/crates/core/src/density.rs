//! Nonnegative tabulated densities on a 1-D grid or a finite discrete support.
//!
//! Integrals use fixed quadrature weights: the composite trapezoid rule on a
//! uniform grid, unit weights on a discrete support.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use statrs::distribution::{Continuous, Normal, StudentsT};

use crate::error::{Error, Result};

/// Where a density lives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Support {
    /// Uniform grid of `n >= 2` nodes from `a` to `b` inclusive.
    Grid { a: f64, b: f64, n: usize },
    /// States `0..n`.
    Discrete { n: usize },
}

impl Default for Support {
    fn default() -> Self {
        Support::Grid {
            a: -10.0,
            b: 10.0,
            n: 2001,
        }
    }
}

impl Support {
    pub fn grid(a: f64, b: f64, n: usize) -> Result<Self> {
        let s = Support::Grid { a, b, n };
        s.validate()?;
        Ok(s)
    }

    pub fn discrete(n: usize) -> Result<Self> {
        let s = Support::Discrete { n };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Support::Grid { a, b, n } => {
                if !(a.is_finite() && b.is_finite() && a < b) {
                    return Err(Error::param(format!("grid needs finite a < b, got [{a}, {b}]")));
                }
                if n < 2 {
                    return Err(Error::param(format!("grid needs n >= 2, got {n}")));
                }
                Ok(())
            }
            Support::Discrete { n } => {
                if n == 0 {
                    return Err(Error::param("discrete support needs n >= 1"));
                }
                Ok(())
            }
        }
    }

    pub fn len(&self) -> usize {
        match *self {
            Support::Grid { n, .. } | Support::Discrete { n } => n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_grid(&self) -> bool {
        matches!(self, Support::Grid { .. })
    }

    /// Grid spacing, `None` for discrete supports.
    pub fn spacing(&self) -> Option<f64> {
        match *self {
            Support::Grid { a, b, n } => Some((b - a) / (n - 1) as f64),
            Support::Discrete { .. } => None,
        }
    }

    /// Coordinate of node `i` (the index itself on a discrete support).
    pub fn node(&self, i: usize) -> f64 {
        match *self {
            Support::Grid { a, b, n } => {
                if i + 1 == n {
                    b
                } else {
                    a + (b - a) * (i as f64 / (n - 1) as f64)
                }
            }
            Support::Discrete { .. } => i as f64,
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.node(i)).collect()
    }

    /// Quadrature weights.
    pub fn weights(&self) -> Vec<f64> {
        match *self {
            Support::Grid { n, .. } => {
                let h = self.spacing().unwrap_or(1.0);
                let mut w = vec![h; n];
                w[0] = 0.5 * h;
                w[n - 1] = 0.5 * h;
                w
            }
            Support::Discrete { n } => vec![1.0; n],
        }
    }
}

/// A nonnegative, finite-mass function tabulated on a [`Support`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityRecord", into = "DensityRecord")]
pub struct Density {
    support: Support,
    values: Vec<f64>,
    weights: Vec<f64>,
}

/// Serialized mirror of a density.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityRecord {
    support: Support,
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl TryFrom<DensityRecord> for Density {
    type Error = Error;

    fn try_from(r: DensityRecord) -> Result<Self> {
        let d = Density::new(r.support, r.values)?;
        check_weights(&d.weights, &r.weights)?;
        Ok(d)
    }
}

impl From<Density> for DensityRecord {
    fn from(d: Density) -> Self {
        DensityRecord {
            support: d.support,
            values: d.values,
            weights: d.weights,
        }
    }
}

fn check_weights(expected: &[f64], given: &[f64]) -> Result<()> {
    if expected.len() != given.len() {
        return Err(Error::param("weights length does not match the support"));
    }
    for (i, (e, g)) in expected.iter().zip(given).enumerate() {
        if (e - g).abs() > 1e-9 * e.abs() {
            return Err(Error::param(format!(
                "weight {i} is {g}, the support implies {e}"
            )));
        }
    }
    Ok(())
}

impl Density {
    /// Validate values (finite, nonnegative, positive finite mass) and attach weights.
    pub fn new(support: Support, values: Vec<f64>) -> Result<Self> {
        support.validate()?;
        if values.len() != support.len() {
            return Err(Error::SupportMismatch(format!(
                "{} values for a support of {} nodes",
                values.len(),
                support.len()
            )));
        }
        for (i, &v) in values.iter().enumerate() {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Domain {
                    index: i,
                    value: v,
                    what: "density values must be finite and nonnegative",
                });
            }
        }
        let weights = support.weights();
        let d = Density {
            support,
            values,
            weights,
        };
        d.mass()?;
        Ok(d)
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Quadrature of `sum_i w_i g(i)`.
    pub fn quadrature(&self, g: impl Fn(usize) -> f64) -> f64 {
        self.weights.iter().enumerate().map(|(i, w)| w * g(i)).sum()
    }

    /// `int density`, checked positive and finite.
    pub fn mass(&self) -> Result<f64> {
        let z = self.quadrature(|i| self.values[i]);
        if !z.is_finite() {
            Err(Error::NonFiniteMass(z))
        } else if z <= 0.0 {
            Err(Error::ZeroMass)
        } else {
            Ok(z)
        }
    }

    pub fn normalized(&self) -> Result<Density> {
        let z = self.mass()?;
        Density::new(self.support, self.values.iter().map(|v| v / z).collect())
    }

    pub fn scaled(&self, c: f64) -> Result<Density> {
        Density::new(self.support, self.values.iter().map(|v| c * v).collect())
    }

    /// Apply `g` pointwise; errors carry the failing index.
    pub fn map_values(&self, g: impl Fn(f64) -> Result<f64>) -> Result<Vec<f64>> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| g(v).map_err(|e| e.at_index(i)))
            .collect()
    }

    pub fn ensure_same_support(&self, other: &Density) -> Result<()> {
        if self.support == other.support {
            Ok(())
        } else {
            Err(Error::SupportMismatch(format!(
                "{:?} vs {:?}",
                self.support, other.support
            )))
        }
    }

    /// Piecewise-linear interpolant on a grid, zero outside `[a, b]`.
    /// On a discrete support `x` is rounded to the nearest state.
    pub fn value_at(&self, x: f64) -> f64 {
        match self.support {
            Support::Grid { a, b, n } => {
                if !(x >= a && x <= b) {
                    return 0.0;
                }
                let h = (b - a) / (n - 1) as f64;
                let s = (x - a) / h;
                let i = (s.floor() as usize).min(n - 2);
                let t = (s - i as f64).clamp(0.0, 1.0);
                // Snap round-off so nodes reproduce their tabulated values.
                if t < 1e-12 {
                    return self.values[i];
                } else if t > 1.0 - 1e-12 {
                    return self.values[i + 1];
                }
                (1.0 - t) * self.values[i] + t * self.values[i + 1]
            }
            Support::Discrete { n } => {
                let r = x.round();
                if r >= 0.0 && (r as usize) < n {
                    self.values[r as usize]
                } else {
                    0.0
                }
            }
        }
    }

    /// CSV with header `x,value,weight` (grid) or `index,value` (discrete).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        match self.support {
            Support::Grid { .. } => {
                w.write_record(["x", "value", "weight"])?;
                for i in 0..self.len() {
                    w.write_record([
                        self.support.node(i).to_string(),
                        self.values[i].to_string(),
                        self.weights[i].to_string(),
                    ])?;
                }
            }
            Support::Discrete { .. } => {
                w.write_record(["index", "value"])?;
                for (i, v) in self.values.iter().enumerate() {
                    w.write_record([i.to_string(), v.to_string()])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Density> {
        let mut r = csv::Reader::from_reader(input);
        let headers: Vec<String> = r.headers()?.iter().map(|h| h.trim().to_string()).collect();
        let rows: Vec<Vec<f64>> = r
            .records()
            .map(|rec| {
                let rec = rec?;
                rec.iter()
                    .map(|f| {
                        f.trim()
                            .parse::<f64>()
                            .map_err(|e| Error::param(format!("bad number {f:?}: {e}")))
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<_>>()?;
        match headers.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
            ["x", "value", "weight"] => {
                if rows.len() < 2 {
                    return Err(Error::param("grid CSV needs at least two rows"));
                }
                let n = rows.len();
                let support = Support::grid(rows[0][0], rows[n - 1][0], n)?;
                let tol = 1e-9 * (rows[n - 1][0] - rows[0][0]);
                for (i, row) in rows.iter().enumerate() {
                    if (row[0] - support.node(i)).abs() > tol {
                        return Err(Error::param(format!("grid CSV row {i} is not uniformly spaced")));
                    }
                }
                let d = Density::new(support, rows.iter().map(|r| r[1]).collect())?;
                let given: Vec<f64> = rows.iter().map(|r| r[2]).collect();
                check_weights(&d.weights, &given)?;
                Ok(d)
            }
            ["index", "value"] => {
                for (i, row) in rows.iter().enumerate() {
                    if row[0] != i as f64 {
                        return Err(Error::param(format!("discrete CSV row {i} has index {}", row[0])));
                    }
                }
                Density::new(Support::discrete(rows.len())?, rows.iter().map(|r| r[1]).collect())
            }
            other => Err(Error::param(format!(
                "unrecognized CSV header {other:?}, expected x,value,weight or index,value"
            ))),
        }
    }
}

/// One Gaussian component of a mixture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub weight: f64,
    pub mean: f64,
    pub sd: f64,
}

/// Named families that can be tabulated on a support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Family {
    Gaussian { mean: f64, sd: f64 },
    GaussianMixture { components: Vec<Component> },
    StudentT { df: f64, loc: f64, scale: f64 },
    /// Explicit values on a discrete support.
    DiscreteTable { values: Vec<f64> },
}

/// A family together with a multiplicative scale (the unnormalized mass).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensitySpec {
    pub family: Family,
    #[serde(default = "one")]
    pub scale: f64,
}

fn one() -> f64 {
    1.0
}

impl DensitySpec {
    pub fn new(family: Family) -> Self {
        DensitySpec { family, scale: 1.0 }
    }

    pub fn gaussian(mean: f64, sd: f64) -> Self {
        Self::new(Family::Gaussian { mean, sd })
    }

    pub fn table(values: Vec<f64>) -> Self {
        Self::new(Family::DiscreteTable { values })
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }
}

fn normal(mean: f64, sd: f64) -> Result<Normal> {
    Normal::new(mean, sd).map_err(|e| Error::param(format!("gaussian({mean}, {sd}): {e}")))
}

/// Tabulate a spec on a support.
pub fn materialize(spec: &DensitySpec, support: Support) -> Result<Density> {
    support.validate()?;
    if !(spec.scale.is_finite() && spec.scale > 0.0) {
        return Err(Error::param(format!("scale must be finite and > 0, got {}", spec.scale)));
    }
    let c = spec.scale;
    let values = match (&spec.family, support) {
        (Family::DiscreteTable { values }, Support::Discrete { n }) => {
            if values.len() != n {
                return Err(Error::SupportMismatch(format!(
                    "table has {} values for {n} states",
                    values.len()
                )));
            }
            values.iter().map(|v| c * v).collect()
        }
        (Family::DiscreteTable { .. }, Support::Grid { .. }) => {
            return Err(Error::SupportMismatch("a discrete table needs a discrete support".into()))
        }
        (_, Support::Discrete { .. }) => {
            return Err(Error::SupportMismatch("continuous families need a grid support".into()))
        }
        (Family::Gaussian { mean, sd }, _) => {
            let g = normal(*mean, *sd)?;
            support.nodes().iter().map(|&x| c * g.pdf(x)).collect()
        }
        (Family::GaussianMixture { components }, _) => {
            if components.is_empty() {
                return Err(Error::param("mixture needs at least one component"));
            }
            let parts = components
                .iter()
                .map(|k| {
                    if !(k.weight.is_finite() && k.weight >= 0.0) {
                        return Err(Error::param(format!("mixture weight {} is invalid", k.weight)));
                    }
                    Ok((k.weight, normal(k.mean, k.sd)?))
                })
                .collect::<Result<Vec<_>>>()?;
            support
                .nodes()
                .iter()
                .map(|&x| c * parts.iter().map(|(w, g)| w * g.pdf(x)).sum::<f64>())
                .collect()
        }
        (Family::StudentT { df, loc, scale }, _) => {
            let t = StudentsT::new(*loc, *scale, *df)
                .map_err(|e| Error::param(format!("student_t({df}, {loc}, {scale}): {e}")))?;
            support.nodes().iter().map(|&x| c * t.pdf(x)).collect()
        }
    };
    Density::new(support, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_gaussian_has_unit_mass() {
        let d = materialize(&DensitySpec::gaussian(0.0, 1.0), Support::default()).unwrap();
        assert_eq!(d.len(), 2001);
        assert!((d.mass().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scale_multiplies_mass() {
        let d = materialize(&DensitySpec::gaussian(1.0, 2.0).with_scale(3.0), Support::default()).unwrap();
        assert!((d.mass().unwrap() - 3.0).abs() < 1e-4);
    }

    #[test]
    fn rejects_bad_values() {
        let s = Support::discrete(2).unwrap();
        assert!(matches!(Density::new(s, vec![0.0, 0.0]), Err(Error::ZeroMass)));
        assert!(matches!(
            Density::new(s, vec![1.0, -0.5]),
            Err(Error::Domain { index: 1, .. })
        ));
        assert!(Density::new(s, vec![1.0, f64::NAN]).is_err());
        assert!(Density::new(s, vec![1.0]).is_err());
        assert!(Support::grid(1.0, 1.0, 5).is_err());
    }

    #[test]
    fn family_support_mismatch() {
        assert!(materialize(&DensitySpec::table(vec![1.0, 2.0]), Support::default()).is_err());
        assert!(materialize(&DensitySpec::gaussian(0.0, 1.0), Support::Discrete { n: 3 }).is_err());
    }

    #[test]
    fn student_t_and_mixture() {
        let s = Support::grid(-60.0, 60.0, 24001).unwrap();
        let t = materialize(
            &DensitySpec::new(Family::StudentT {
                df: 5.0,
                loc: 0.0,
                scale: 1.0,
            }),
            s,
        )
        .unwrap();
        assert!((t.mass().unwrap() - 1.0).abs() < 1e-4);
        let m = materialize(
            &DensitySpec::new(Family::GaussianMixture {
                components: vec![
                    Component { weight: 0.3, mean: -2.0, sd: 1.0 },
                    Component { weight: 0.7, mean: 2.0, sd: 0.5 },
                ],
            }),
            Support::default(),
        )
        .unwrap();
        assert!((m.mass().unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn csv_round_trip() {
        let g = materialize(&DensitySpec::gaussian(0.3, 1.1), Support::grid(-5.0, 5.0, 101).unwrap()).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        assert_eq!(Density::read_csv(&buf[..]).unwrap(), g);

        let d = Density::new(Support::discrete(3).unwrap(), vec![0.1, 2.0, 1e-300]).unwrap();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        assert_eq!(Density::read_csv(&buf[..]).unwrap(), d);
    }

    #[test]
    fn json_round_trip() {
        let g = materialize(&DensitySpec::gaussian(0.0, 1.0), Support::grid(-3.0, 3.0, 31).unwrap()).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        let back: Density = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<Density>(r#"{"support":{"discrete":{"n":1}},"values":[1],"weights":[2]}"#).is_err());
    }

    #[test]
    fn interpolation_is_exact_at_nodes() {
        let g = materialize(&DensitySpec::gaussian(0.0, 1.0), Support::grid(-3.0, 3.0, 31).unwrap()).unwrap();
        for i in 0..31 {
            assert_eq!(g.value_at(g.support().node(i)), g.values()[i]);
        }
        assert_eq!(g.value_at(3.5), 0.0);
    }
}
