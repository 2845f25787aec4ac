use std::f64::consts::PI;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Gaussian targets in the affine grid coordinate `z`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TargetFunction {
    /// `exp(-W^2 z^2 / 2)`, even in `z`.
    Centered { w: f64 },
    /// `exp(-2 W^2 (z - (W + alpha) / (2W))^2)`.
    Shifted { w: f64, alpha: f64 },
}

impl TargetFunction {
    pub fn eval(&self, z: f64) -> f64 {
        match *self {
            TargetFunction::Centered { w } => (-0.5 * w * w * z * z).exp(),
            TargetFunction::Shifted { w, alpha } => {
                let c = (w + alpha) / (2.0 * w);
                (-2.0 * w * w * (z - c) * (z - c)).exp()
            }
        }
    }

    /// The target as a function of the signal value `x = sin(z)`.
    pub fn eval_signal(&self, x: f64) -> f64 {
        self.eval(x.clamp(-1.0, 1.0).asin())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

/// `sum_k c_k T_k(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChebyshevPolynomial {
    coeffs: Vec<f64>,
}

impl ChebyshevPolynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParams("Chebyshev coefficients must be finite and nonempty".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Definite parity, if any. The zero polynomial counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let even = self.coeffs.iter().skip(1).step_by(2).all(|&c| c == 0.0);
        let odd = self.coeffs.iter().step_by(2).all(|&c| c == 0.0);
        match (even, odd) {
            (true, _) => Some(Parity::Even),
            (false, true) => Some(Parity::Odd),
            _ => None,
        }
    }

    /// Clenshaw recurrence.
    pub fn eval(&self, x: f64) -> f64 {
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * x * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        x * b1 - b2 + self.coeffs[0]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Largest `|p|` on `points` equispaced samples of `[-1, 1]`.
    pub fn max_abs(&self, points: usize) -> f64 {
        linspace(points).map(|x| self.eval(x).abs()).fold(0.0, f64::max)
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRecord {
    basis: String,
    parity: Option<Parity>,
    coeffs: Vec<f64>,
}

impl Serialize for ChebyshevPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRecord {
            basis: "chebyshev".into(),
            parity: self.parity(),
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChebyshevPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rec = PolyRecord::deserialize(d)?;
        if rec.basis != "chebyshev" {
            return Err(D::Error::custom(format!("unsupported basis '{}'", rec.basis)));
        }
        let poly = ChebyshevPolynomial::new(rec.coeffs).map_err(D::Error::custom)?;
        if rec.parity.is_some() && rec.parity != poly.parity() {
            return Err(D::Error::custom("declared parity does not match the coefficients"));
        }
        Ok(poly)
    }
}

pub(crate) fn linspace(points: usize) -> impl Iterator<Item = f64> {
    let step = 2.0 / (points.max(2) - 1) as f64;
    (0..points.max(2)).map(move |i| if i + 1 == points.max(2) { 1.0 } else { -1.0 + i as f64 * step })
}

/// Number of samples used to report the sup-norm error.
pub const ERROR_GRID_POINTS: usize = 2001;
const NORM_GRID_POINTS: usize = 20001;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GaussianApproximation {
    pub target: TargetFunction,
    pub poly: ChebyshevPolynomial,
    /// `max |p(x) - h0(arcsin x)|` on the error grid.
    pub sup_error: f64,
}

impl GaussianApproximation {
    pub fn meets(&self, tolerance: f64) -> bool {
        self.sup_error <= tolerance
    }
}

/// Chebyshev interpolant of `h0(arcsin x)` through the `d + 1` first-kind
/// nodes, with odd coefficients set to zero and rescaled to `max |p| <= 1`
/// when it overshoots.
pub fn approx_gaussian_poly(w: f64, degree: usize) -> Result<GaussianApproximation> {
    if degree < 2 || degree % 2 != 0 {
        return Err(Error::InvalidParams(format!("degree must be even and at least 2, got {degree}")));
    }
    if !(w > 0.0 && w.is_finite()) {
        return Err(Error::InvalidParams(format!("half-width must be positive, got {w}")));
    }
    let target = TargetFunction::Centered { w };
    let n = degree + 1;
    let samples: Vec<(f64, f64)> = (0..n)
        .map(|j| {
            let theta = PI * (j as f64 + 0.5) / n as f64;
            (theta, target.eval_signal(theta.cos()))
        })
        .collect();
    let coeffs: Vec<f64> = (0..n)
        .map(|k| {
            if k % 2 == 1 {
                return 0.0;
            }
            let s: f64 = samples.iter().map(|(th, f)| f * (k as f64 * th).cos()).sum();
            let c = 2.0 * s / n as f64;
            if k == 0 {
                0.5 * c
            } else {
                c
            }
        })
        .collect();
    let mut poly = ChebyshevPolynomial::new(coeffs)?;
    let peak = poly.max_abs(NORM_GRID_POINTS);
    if peak > 1.0 {
        poly = poly.scaled(1.0 / peak);
    }
    let sup_error = linspace(ERROR_GRID_POINTS)
        .map(|x| (poly.eval(x) - target.eval_signal(x)).abs())
        .fold(0.0, f64::max);
    Ok(GaussianApproximation { target, poly, sup_error })
}
