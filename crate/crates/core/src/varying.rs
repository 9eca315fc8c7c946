//! Slowly varying weights, dilation functions, and dilation indices.
//!
//! The iterated-log ladder is ℓ₁(t) = 1 + |ln t|, ℓᵢ = ℓ₁ ∘ ℓᵢ₋₁. Dilation
//! suprema are taken over a fixed dyadic grid s = 2^k, k ∈ [-40, 40]; this
//! keeps every quantity reproducible at the cost of slightly underestimating
//! the true sup.

use crate::error::{Error, Result};
use std::fmt;

/// ℓᵢ(t) for i ≥ 1.
pub fn ell(i: usize, t: f64) -> f64 {
    assert!(i >= 1 && t > 0.0);
    let mut v = 1.0 + t.ln().abs();
    for _ in 1..i {
        v = 1.0 + v.ln().abs();
    }
    v
}

/// Sampled positive function stored as (ln t, ln value) with linear
/// interpolation in log-log coordinates and constant extrapolation outside
/// the sampled range.
#[derive(Debug, Clone, PartialEq)]
pub struct LogLogTable {
    log_t: Vec<f64>,
    log_v: Vec<f64>,
}

impl LogLogTable {
    pub fn new(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidParameter("table needs at least two points".into()));
        }
        let mut log_t = Vec::with_capacity(points.len());
        let mut log_v = Vec::with_capacity(points.len());
        for &(t, v) in points {
            if !(t > 0.0 && v > 0.0 && t.is_finite() && v.is_finite()) {
                return Err(Error::InvalidParameter("table points must be positive".into()));
            }
            log_t.push(t.ln());
            log_v.push(v.ln());
        }
        for w in log_t.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidParameter("table abscissae must increase".into()));
            }
        }
        Ok(LogLogTable { log_t, log_v })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let x = t.ln();
        if x <= self.log_t[0] {
            return self.log_v[0].exp();
        }
        if x >= *self.log_t.last().unwrap() {
            return self.log_v.last().unwrap().exp();
        }
        let i = self.log_t.partition_point(|&u| u <= x) - 1;
        let t0 = self.log_t[i];
        let t1 = self.log_t[i + 1];
        let s = (x - t0) / (t1 - t0);
        (self.log_v[i] + s * (self.log_v[i + 1] - self.log_v[i])).exp()
    }
}

/// Slowly varying weight b(t).
#[derive(Debug, Clone, PartialEq)]
pub enum SlowlyVarying {
    Constant(f64),
    /// ∏ᵢ ℓᵢ(t)^{αᵢ} with αᵢ the i-th entry.
    IterLogPow(Vec<f64>),
    Table(LogLogTable),
    /// ℓ(t)^{-θ} · base(t ℓ(t)), the composite weight of the reiteration
    /// corollaries. Kept symbolic so it stays exact.
    Composite { theta: f64, base: Box<SlowlyVarying> },
}

impl SlowlyVarying {
    pub fn one() -> Self {
        SlowlyVarying::Constant(1.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        debug_assert!(t > 0.0);
        match self {
            SlowlyVarying::Constant(c) => *c,
            SlowlyVarying::IterLogPow(alpha) => {
                let mut prod = 1.0;
                let mut l = 1.0 + t.ln().abs();
                for (i, &a) in alpha.iter().enumerate() {
                    if i > 0 {
                        l = 1.0 + l.ln().abs();
                    }
                    if a != 0.0 {
                        prod *= l.powf(a);
                    }
                }
                prod
            }
            SlowlyVarying::Table(tab) => tab.eval(t),
            SlowlyVarying::Composite { theta, base } => {
                let l = 1.0 + t.ln().abs();
                l.powf(-theta) * base.eval(t * l)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SlowlyVarying::Constant(c) if !(*c > 0.0 && c.is_finite()) => {
                Err(Error::InvalidParameter("constant weight must be positive".into()))
            }
            SlowlyVarying::IterLogPow(a) if a.iter().any(|x| !x.is_finite()) => {
                Err(Error::InvalidParameter("non-finite exponent".into()))
            }
            SlowlyVarying::Composite { theta, base } => {
                if !theta.is_finite() {
                    return Err(Error::InvalidParameter("non-finite theta".into()));
                }
                base.validate()
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for SlowlyVarying {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlowlyVarying::Constant(c) => write!(f, "{c}"),
            SlowlyVarying::IterLogPow(alpha) => {
                if alpha.iter().all(|a| *a == 0.0) {
                    return write!(f, "1");
                }
                let mut first = true;
                for (i, a) in alpha.iter().enumerate() {
                    if *a == 0.0 {
                        continue;
                    }
                    if !first {
                        write!(f, " * ")?;
                    }
                    write!(f, "l{}^{}", i + 1, a)?;
                    first = false;
                }
                Ok(())
            }
            SlowlyVarying::Table(_) => write!(f, "table"),
            SlowlyVarying::Composite { theta, base } => {
                write!(f, "l1^-{theta} ∘ shift({base})")
            }
        }
    }
}

/// Positive parameter function φ on (0, ∞), given symbolically.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamFunction {
    Power(f64),
    /// t^p · b(t)
    PowerTimesSv { p: f64, sv: SlowlyVarying },
    Table(LogLogTable),
    /// t ↦ s_φ(t), the grid dilation majorant of the inner function.
    DilationMajorant(Box<ParamFunction>),
}

impl ParamFunction {
    pub fn constant_one() -> Self {
        ParamFunction::Power(0.0)
    }

    pub fn from_sv(sv: SlowlyVarying) -> Self {
        ParamFunction::PowerTimesSv { p: 0.0, sv }
    }

    /// Point evaluation; may return a non-finite value on overflow, which
    /// grid routines convert into `GridOverflow`.
    pub fn eval(&self, t: f64) -> f64 {
        debug_assert!(t > 0.0);
        match self {
            ParamFunction::Power(p) => t.powf(*p),
            ParamFunction::PowerTimesSv { p, sv } => t.powf(*p) * sv.eval(t),
            ParamFunction::Table(tab) => tab.eval(t),
            ParamFunction::DilationMajorant(inner) => {
                dilation_function(inner, t).unwrap_or(f64::NAN)
            }
        }
    }
}

impl fmt::Display for ParamFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamFunction::Power(p) => write!(f, "t^{p}"),
            ParamFunction::PowerTimesSv { p, sv } => {
                if *p == 0.0 {
                    write!(f, "{sv}")
                } else {
                    write!(f, "t^{p} * {sv}")
                }
            }
            ParamFunction::Table(_) => write!(f, "table"),
            ParamFunction::DilationMajorant(inner) => write!(f, "s_phi({inner})"),
        }
    }
}

const GRID_LOG2_RANGE: i32 = 40;

/// s_φ(t) = sup_s φ(ts)/φ(s), the sup taken over s = 2^k, |k| ≤ 40.
pub fn dilation_function(phi: &ParamFunction, t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter("dilation argument must be positive".into()));
    }
    // exact for pure powers; also avoids overflow for large |p|
    if let ParamFunction::Power(p) = phi {
        return Ok(t.powf(*p));
    }
    let mut sup = 0.0f64;
    for k in -GRID_LOG2_RANGE..=GRID_LOG2_RANGE {
        let s = (k as f64).exp2();
        let num = phi.eval(t * s);
        let den = phi.eval(s);
        if !(num.is_finite() && den > 0.0 && den.is_finite()) {
            return Err(Error::GridOverflow(format!(
                "dilation grid overflow at s = 2^{k} (num {num}, den {den})"
            )));
        }
        sup = sup.max(num / den);
    }
    if !sup.is_finite() || sup <= 0.0 {
        return Err(Error::GridOverflow("dilation sup not finite".into()));
    }
    Ok(sup)
}

/// Dilation indices with the two-scale discrepancy reported as error bars.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DilationIndices {
    pub lower: f64,
    pub upper: f64,
    pub lower_err: f64,
    pub upper_err: f64,
}

/// Fit log s_φ(t) = idx·log t + c·log ℓ(t) through two sample scales and
/// return idx. A plain log-ratio at one scale is polluted by slowly varying
/// factors (for φ = ℓ^α it is off by ≈ 0.15α even at t = 2³⁰); the
/// two-parameter fit cancels the first-order log correction exactly for the
/// power-times-iterated-log family.
fn fitted_index(t1: f64, s1: f64, t2: f64, s2: f64) -> f64 {
    let (l1, m1) = (t1.ln(), (1.0 + t1.ln().abs()).ln());
    let (l2, m2) = (t2.ln(), (1.0 + t2.ln().abs()).ln());
    let det = l1 * m2 - l2 * m1;
    (s1.ln() * m2 - s2.ln() * m1) / det
}

/// Estimate the lower and upper dilation indices of φ from samples at
/// |log₂ t| ∈ {30, 40}. The error bar is the gap between the naive
/// single-scale estimates; `NotConverged` when that gap exceeds 0.1.
pub fn dilation_indices(phi: &ParamFunction) -> Result<DilationIndices> {
    let side = |sign: f64| -> Result<(f64, f64)> {
        let t1 = (sign * 30.0).exp2();
        let t2 = (sign * 40.0).exp2();
        let s1 = dilation_function(phi, t1)?;
        let s2 = dilation_function(phi, t2)?;
        let naive1 = s1.ln() / t1.ln();
        let naive2 = s2.ln() / t2.ln();
        let err = (naive1 - naive2).abs();
        if err > 0.1 {
            return Err(Error::NotConverged(format!(
                "dilation index estimates disagree: {naive1:.4} vs {naive2:.4}"
            )));
        }
        Ok((fitted_index(t1, s1, t2, s2), err))
    };
    let (upper, upper_err) = side(1.0)?;
    let (lower, lower_err) = side(-1.0)?;
    Ok(DilationIndices { lower, upper, lower_err, upper_err })
}

/// The submultiplicative majorant written m_φ downstream; defined here as
/// the grid dilation function s_φ (the standard convention).
pub fn m_phi(phi: &ParamFunction) -> ParamFunction {
    ParamFunction::DilationMajorant(Box::new(phi.clone()))
}

/// The composite weight t ↦ ℓ(t)^{-θ} b(t ℓ(t)).
pub fn b_theta(b: &SlowlyVarying, theta: f64) -> SlowlyVarying {
    SlowlyVarying::Composite { theta, base: Box::new(b.clone()) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ell_ladder_values() {
        assert_eq!(ell(1, 1.0), 1.0);
        assert!((ell(1, std::f64::consts::E) - 2.0).abs() < 1e-15);
        assert_eq!(ell(2, 1.0), 1.0);
        assert!((ell(2, std::f64::consts::E) - (1.0 + 2.0f64.ln())).abs() < 1e-15);
        // minimum of ℓ₁ at t = 1
        for t in [0.1, 0.5, 2.0, 10.0] {
            assert!(ell(1, t) > 1.0);
        }
    }

    #[test]
    fn power_dilation_is_exact() {
        let phi = ParamFunction::Power(1.5);
        for t in [0.25, 1.0, 3.0, 1e6] {
            assert!((dilation_function(&phi, t).unwrap() - t.powf(1.5)).abs() <= 1e-12 * t.powf(1.5));
        }
    }

    #[test]
    fn dilation_at_one_is_one() {
        let cases = [
            ParamFunction::Power(2.0),
            ParamFunction::from_sv(SlowlyVarying::IterLogPow(vec![1.0])),
            ParamFunction::PowerTimesSv { p: 0.5, sv: SlowlyVarying::IterLogPow(vec![-0.5, 1.0]) },
        ];
        for phi in &cases {
            assert!((dilation_function(phi, 1.0).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn log_weight_dilation_lies_between_one_and_two() {
        let phi = ParamFunction::from_sv(SlowlyVarying::IterLogPow(vec![1.0]));
        let v = dilation_function(&phi, 2.0).unwrap();
        assert!((1.0..=2.0).contains(&v), "{v}");
    }

    #[test]
    fn submultiplicative_on_dyadic_points() {
        let phis = [
            ParamFunction::from_sv(SlowlyVarying::IterLogPow(vec![1.0])),
            ParamFunction::PowerTimesSv { p: 0.7, sv: SlowlyVarying::IterLogPow(vec![-1.0]) },
        ];
        for phi in &phis {
            for a in [-10i32, -3, 1, 8] {
                for b in [-6i32, 2, 9] {
                    let t = (a as f64).exp2();
                    let u = (b as f64).exp2();
                    let lhs = dilation_function(phi, t * u).unwrap();
                    let rhs = dilation_function(phi, t).unwrap() * dilation_function(phi, u).unwrap();
                    assert!(lhs <= rhs * (1.0 + 1e-6), "t=2^{a}, u=2^{b}: {lhs} > {rhs}");
                }
            }
        }
    }

    #[test]
    fn indices_power() {
        let idx = dilation_indices(&ParamFunction::Power(2.5)).unwrap();
        assert!((idx.lower - 2.5).abs() < 1e-9);
        assert!((idx.upper - 2.5).abs() < 1e-9);
    }

    #[test]
    fn indices_slowly_varying_are_near_zero() {
        for alpha in [1.0, -0.5, 2.0] {
            let phi = ParamFunction::from_sv(SlowlyVarying::IterLogPow(vec![alpha]));
            let idx = dilation_indices(&phi).unwrap();
            assert!(idx.lower.abs() <= 0.05, "alpha={alpha}: lower {}", idx.lower);
            assert!(idx.upper.abs() <= 0.05, "alpha={alpha}: upper {}", idx.upper);
            assert!(idx.lower <= idx.upper + idx.lower_err + idx.upper_err);
        }
    }

    #[test]
    fn indices_power_times_log() {
        let phi = ParamFunction::PowerTimesSv { p: 1.0, sv: SlowlyVarying::IterLogPow(vec![1.0]) };
        let idx = dilation_indices(&phi).unwrap();
        assert!((idx.lower - 1.0).abs() <= 0.05, "{}", idx.lower);
        assert!((idx.upper - 1.0).abs() <= 0.05, "{}", idx.upper);
    }

    #[test]
    fn majorant_of_constant_is_one() {
        let m = m_phi(&ParamFunction::from_sv(SlowlyVarying::one()));
        for t in [0.01, 1.0, 42.0] {
            assert!((m.eval(t) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn majorant_of_power_is_power() {
        let m = m_phi(&ParamFunction::Power(0.75));
        for t in [0.2, 5.0] {
            assert!((m.eval(t) - t.powf(0.75)).abs() < 1e-12 * t.powf(0.75));
        }
    }

    #[test]
    fn composite_weight_examples() {
        let one = SlowlyVarying::one();
        let b0 = b_theta(&one, 0.0);
        assert!((b0.eval(7.3) - 1.0).abs() < 1e-15);
        let b1 = b_theta(&one, 1.0);
        assert!((b1.eval(10.0) - 1.0 / (1.0 + 10.0f64.ln())).abs() < 1e-15);
        let bl = b_theta(&SlowlyVarying::IterLogPow(vec![1.0]), 0.0);
        assert!((bl.eval(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn table_interpolates_in_log_log() {
        let tab = LogLogTable::new(&[(1.0, 2.0), (100.0, 8.0)]).unwrap();
        // geometric midpoint maps to geometric mean of values
        assert!((tab.eval(10.0) - 4.0).abs() < 1e-12);
        assert!((tab.eval(0.5) - 2.0).abs() < 1e-12);
        assert!((tab.eval(1e9) - 8.0).abs() < 1e-12);
    }
}
