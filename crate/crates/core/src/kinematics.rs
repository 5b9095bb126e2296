//! The first-quadrant Fermat curve `x^n + y^n = 1` as an explicit graph
//! `y(x)`, with its first and second derivatives.
//!
//! The curve is parameterized by `x` itself. With the horizontal angular
//! speed normalized to one, the derivatives with respect to `x` coincide
//! with the time derivatives used for the "velocity" and "acceleration" of a
//! point moving along the curve.
//!
//! All powers go through `exp(c * ln(.))` with `x = 0` handled explicitly,
//! since the interesting behaviour sits exactly at that boundary.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KinematicsError {
    #[error("x = {x} outside the curve domain")]
    Domain { x: f64 },
    #[error("derivative is singular at x = 1")]
    Singularity,
    #[error("acceleration diverges to -inf at x = 0 for n = {n} < 2")]
    Divergence { n: f64 },
    #[error("exponent n = {n} outside the supported range")]
    Exponent { n: f64 },
    #[error("finite-difference stencil [{lo}, {hi}] leaves (0, 1)")]
    Stencil { lo: f64, hi: f64 },
    #[error("{0}")]
    Grid(&'static str),
}

/// Curve exponent `n > 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CurveParam(f64);

impl CurveParam {
    pub fn new(n: f64) -> Result<Self, KinematicsError> {
        if n.is_finite() && n > 0.0 {
            Ok(CurveParam(n))
        } else {
            Err(KinematicsError::Exponent { n })
        }
    }

    /// Exponent admitted by the derivative operations (`n >= 1`).
    pub fn for_kinematics(n: f64) -> Result<Self, KinematicsError> {
        if n.is_finite() && n >= 1.0 {
            Ok(CurveParam(n))
        } else {
            Err(KinematicsError::Exponent { n })
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Limit of the curve's second derivative as `x -> 0+`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseClass {
    /// `n < 2`: the acceleration falls to minus infinity.
    DivergesNeg,
    /// `n = 2`: the acceleration tends to exactly -1.
    FiniteMinusOne,
    /// `n > 2`: the acceleration tends to 0.
    LimitZero,
}

impl PhaseClass {
    pub fn classify(n: f64) -> Self {
        if n < 2.0 {
            PhaseClass::DivergesNeg
        } else if n == 2.0 {
            PhaseClass::FiniteMinusOne
        } else {
            PhaseClass::LimitZero
        }
    }

    /// The finite limit, if there is one.
    pub fn limit(self) -> Option<f64> {
        match self {
            PhaseClass::DivergesNeg => None,
            PhaseClass::FiniteMinusOne => Some(-1.0),
            PhaseClass::LimitZero => Some(0.0),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PhaseClass::DivergesNeg => "DIVERGES_NEG",
            PhaseClass::FiniteMinusOne => "FINITE_MINUS_ONE",
            PhaseClass::LimitZero => "LIMIT_ZERO",
        }
    }
}

impl fmt::Display for PhaseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicsSample {
    pub x: f64,
    pub n: f64,
    pub y: f64,
    pub vel: f64,
    pub acc: f64,
}

/// `ln(1 - x^n)` for `x` in `(0, 1)`, accurate at both ends of the interval.
fn ln_one_minus_pow(x: f64, n: f64) -> f64 {
    let t = n * x.ln();
    if t < -std::f64::consts::LN_2 {
        (-t.exp()).ln_1p()
    } else {
        (-t.exp_m1()).ln()
    }
}

fn check_unit(x: f64) -> Result<(), KinematicsError> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(KinematicsError::Domain { x })
    }
}

fn check_half_open(x: f64) -> Result<(), KinematicsError> {
    check_unit(x)?;
    if x == 1.0 {
        Err(KinematicsError::Singularity)
    } else {
        Ok(())
    }
}

/// `y = (1 - x^n)^(1/n)`.
pub fn curve_y(x: f64, n: f64) -> Result<f64, KinematicsError> {
    CurveParam::new(n)?;
    check_unit(x)?;
    Ok(if x == 0.0 {
        1.0
    } else if x == 1.0 {
        0.0
    } else {
        (ln_one_minus_pow(x, n) / n).exp()
    })
}

/// `dy/dx = -(x / y)^(n - 1)`.
pub fn velocity(x: f64, n: f64) -> Result<f64, KinematicsError> {
    CurveParam::for_kinematics(n)?;
    check_half_open(x)?;
    if n == 1.0 {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let ln_y = ln_one_minus_pow(x, n) / n;
    Ok(-((n - 1.0) * (x.ln() - ln_y)).exp())
}

/// `d^2y/dx^2 = -(n - 1) x^(n - 2) / (1 - x^n)^(2 - 1/n)`.
///
/// At `x = 0` the exact limit is returned for `n >= 2`; for `n < 2` the
/// value diverges and [`KinematicsError::Divergence`] is reported instead of
/// an infinity. `n = 1` is the straight line and has zero acceleration
/// everywhere.
pub fn acceleration(x: f64, n: f64) -> Result<f64, KinematicsError> {
    CurveParam::for_kinematics(n)?;
    check_half_open(x)?;
    if n == 1.0 {
        return Ok(0.0);
    }
    if x == 0.0 {
        return match PhaseClass::classify(n).limit() {
            Some(limit) => Ok(limit),
            None => Err(KinematicsError::Divergence { n }),
        };
    }
    let log_mag = (n - 2.0) * x.ln() - (2.0 - 1.0 / n) * ln_one_minus_pow(x, n);
    Ok(-(n - 1.0) * log_mag.exp())
}

/// Central-difference estimates of `(dy/dx, d^2y/dx^2)` from [`curve_y`].
pub fn finite_diff_oracle(x: f64, n: f64, h: f64) -> Result<(f64, f64), KinematicsError> {
    if h.is_nan() || h <= 0.0 {
        return Err(KinematicsError::Grid("step h must be positive"));
    }
    let (lo, hi) = (x - h, x + h);
    if !(lo > 0.0 && hi < 1.0) {
        return Err(KinematicsError::Stencil { lo, hi });
    }
    let y_lo = curve_y(lo, n)?;
    let y_mid = curve_y(x, n)?;
    let y_hi = curve_y(hi, n)?;
    let vel = (y_hi - y_lo) / (2.0 * h);
    let acc = (y_hi - 2.0 * y_mid + y_lo) / (h * h);
    Ok((vel, acc))
}

/// Result of [`phase_scan`].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseScan {
    /// One sample per `(n, x)` pair, sorted by `n` then `x`.
    pub samples: Vec<KinematicsSample>,
    /// Analytic `x -> 0+` class for each requested `n`, in input order.
    pub classes: Vec<(f64, PhaseClass)>,
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

/// Samples the curve and its derivatives on an `n x x` grid and classifies
/// the small-`x` limit of the acceleration for each `n`.
pub fn phase_scan(n_values: &[f64], x_grid: &[f64]) -> Result<PhaseScan, KinematicsError> {
    if n_values.is_empty() || x_grid.is_empty() {
        return Err(KinematicsError::Grid("grids must be non-empty"));
    }
    if !strictly_increasing(n_values) || !strictly_increasing(x_grid) {
        return Err(KinematicsError::Grid("grids must be strictly increasing"));
    }
    if let Some(&x) = x_grid.iter().find(|&&x| !(x > 0.0 && x < 1.0)) {
        return Err(KinematicsError::Domain { x });
    }
    let mut samples = Vec::with_capacity(n_values.len() * x_grid.len());
    let mut classes = Vec::with_capacity(n_values.len());
    for &n in n_values {
        CurveParam::for_kinematics(n)?;
        classes.push((n, PhaseClass::classify(n)));
        for &x in x_grid {
            samples.push(KinematicsSample {
                x,
                n,
                y: curve_y(x, n)?,
                vel: velocity(x, n)?,
                acc: acceleration(x, n)?,
            });
        }
    }
    Ok(PhaseScan { samples, classes })
}

/// `m` points of the curve with `x` evenly spaced on `[0, 1]`.
pub fn sample_curve(n: f64, m: usize) -> Result<Vec<(f64, f64)>, KinematicsError> {
    if m < 2 {
        return Err(KinematicsError::Grid("need at least two samples"));
    }
    CurveParam::new(n)?;
    let last = (m - 1) as f64;
    (0..m)
        .map(|i| {
            let x = if i == m - 1 { 1.0 } else { i as f64 / last };
            curve_y(x, n).map(|y| (x, y))
        })
        .collect()
}

/// `m` evenly spaced points on `[lo, hi]`, endpoints included exactly.
pub fn linspace(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    match m {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (m - 1) as f64;
            (0..m)
                .map(|i| if i == m - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}
