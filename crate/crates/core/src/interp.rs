//! Peetre K- and J-functionals and the weighted real-method norms built
//! from them.
//!
//! The continuous-parameter norms integrate over the whole line; here they
//! are discretized on a uniform grid in t = ln s with window [-T, T] and
//! step h, both recorded in reports. Boundary summands of the discretized
//! integral serve as a truncation diagnostic.
//!
//! K-functional evaluation is exact for (L¹, L∞). For couples whose second
//! space is L∞ the one-parameter clamp family contains near-optimal
//! decompositions and is minimized directly. For general couples the clamp
//! families in both orders give an upper bound, flagged as
//! family-restricted.

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::maximal::MaximalFunction;
use crate::quad::golden_min;
use crate::spaces::{SpaceFamily, SpaceSpec};
use crate::step::StepFunction;
use crate::sum::Compensated;
use crate::varying::SlowlyVarying;
use rayon::prelude::*;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct CoupleSpec {
    pub x0: SpaceSpec,
    pub x1: SpaceSpec,
}

impl CoupleSpec {
    pub fn new(x0: SpaceSpec, x1: SpaceSpec) -> Result<Self> {
        if x0.domain != x1.domain {
            return Err(Error::DomainMismatch { expected: x0.domain, got: x1.domain });
        }
        x0.validate()?;
        x1.validate()?;
        Ok(CoupleSpec { x0, x1 })
    }

    pub fn l1_linf(domain: Domain) -> Self {
        CoupleSpec {
            x0: SpaceSpec::lebesgue(1.0, domain),
            x1: SpaceSpec::lebesgue(f64::INFINITY, domain),
        }
    }

    fn is_l1_linf(&self) -> bool {
        matches!(self.x0.family, SpaceFamily::Lebesgue(p) if p == 1.0)
            && matches!(self.x1.family, SpaceFamily::Lebesgue(p) if p.is_infinite())
    }

    fn x1_is_sup(&self) -> bool {
        matches!(self.x1.family, SpaceFamily::Lebesgue(p) if p.is_infinite())
    }
}

impl fmt::Display for CoupleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "couple({}, {})", self.x0, self.x1)
    }
}

/// Outer norm applied to the weighted sample function of t.
///
/// Lebesgue(q) covers the classical methods (q = ∞ for the sup). The
/// KMethodInstance variant re-enters the weighted method itself over a
/// couple of spaces on ℝ: this is the computable stand-in used when an
/// inequality's outer space is an interpolated space, fixed to weight 1 and
/// sup outer norm one level down.
#[derive(Debug, Clone)]
pub enum OuterSpace {
    Lebesgue(f64),
    KMethodInstance { couple: Box<CoupleSpec>, theta: f64 },
}

impl OuterSpace {
    fn validate(&self) -> Result<()> {
        match self {
            OuterSpace::Lebesgue(q) if !(*q >= 1.0) => {
                Err(Error::InvalidParameter(format!("outer exponent {q} < 1")))
            }
            OuterSpace::KMethodInstance { couple, theta } => {
                if couple.x0.domain != Domain::RealLine {
                    return Err(Error::InvalidParameter(
                        "outer K-method instance needs a couple on the real line".into(),
                    ));
                }
                if !(*theta > 0.0 && *theta < 1.0) {
                    return Err(Error::InvalidParameter(
                        "outer K-method instance needs interior theta".into(),
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Norm of the sample vector read as a step function on cells
    /// [t0 + i·h, t0 + (i+1)·h).
    pub(crate) fn norm_of_samples(&self, t0: f64, h: f64, vals: &[f64]) -> Result<f64> {
        match self {
            OuterSpace::Lebesgue(q) if q.is_infinite() => {
                Ok(vals.iter().cloned().fold(0.0, f64::max))
            }
            OuterSpace::Lebesgue(q) => {
                let mut acc = Compensated::new();
                for &v in vals {
                    acc.add(h * v.powf(*q));
                }
                Ok(acc.total().powf(1.0 / q))
            }
            OuterSpace::KMethodInstance { couple, theta } => {
                if vals.iter().all(|&v| v == 0.0) {
                    return Ok(0.0);
                }
                let breakpoints: Vec<f64> =
                    (0..=vals.len()).map(|i| t0 + h * i as f64).collect();
                let f = StepFunction::real(Domain::RealLine, breakpoints, vals.to_vec())?;
                let inner = InterpParams {
                    theta: *theta,
                    b: SlowlyVarying::one(),
                    outer: OuterSpace::Lebesgue(f64::INFINITY),
                    window: 40.0,
                    step: 0.01,
                    override_conditions: false,
                };
                Ok(k_method_report(couple, &inner, &f)?.value)
            }
        }
    }
}

impl fmt::Display for OuterSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OuterSpace::Lebesgue(q) if q.is_infinite() => f.write_str("linf"),
            OuterSpace::Lebesgue(q) => write!(f, "lebesgue({q})"),
            OuterSpace::KMethodInstance { couple, theta } => {
                write!(f, "kmethod({couple}, theta={theta})")
            }
        }
    }
}

/// Parameters of the weighted real-method norm: weight e^{-θt} b(e^t),
/// outer space, and the t-grid.
#[derive(Debug, Clone)]
pub struct InterpParams {
    pub theta: f64,
    pub b: SlowlyVarying,
    pub outer: OuterSpace,
    pub window: f64,
    pub step: f64,
    /// proceed even when the θ ∈ {0, 1} admissibility probe fails
    pub override_conditions: bool,
}

impl InterpParams {
    pub fn new(theta: f64, b: SlowlyVarying, outer: OuterSpace, window: f64, step: f64) -> Result<Self> {
        let p = InterpParams { theta, b, outer, window, step, override_conditions: false };
        p.validate()?;
        Ok(p)
    }

    /// Classical outer space: Lebesgue(q) in t, q = ∞ for the sup.
    pub fn lebesgue(theta: f64, b: SlowlyVarying, q: f64, window: f64, step: f64) -> Result<Self> {
        InterpParams::new(theta, b, OuterSpace::Lebesgue(q), window, step)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(Error::InvalidParameter(format!("theta {} outside [0,1]", self.theta)));
        }
        self.outer.validate()?;
        if !(self.window > 0.0 && self.step > 0.0) {
            return Err(Error::InvalidParameter("window and step must be positive".into()));
        }
        self.b.validate()
    }
}

impl fmt::Display for InterpParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "params(theta={}, b=\"{}\", E={}, T={}, h={})",
            self.theta, self.b, self.outer, self.window, self.step
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionStatus {
    InteriorOk,
    Theta0Ok,
    Theta1Ok,
    Trivial,
}

impl fmt::Display for ConditionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConditionStatus::InteriorOk => "interior-ok",
            ConditionStatus::Theta0Ok => "theta0-ok",
            ConditionStatus::Theta1Ok => "theta1-ok",
            ConditionStatus::Trivial => "trivial",
        };
        f.write_str(s)
    }
}

/// Per-function evaluation state shared across a t-grid.
struct KEval<'a> {
    couple: &'a CoupleSpec,
    f: &'a StepFunction,
    /// prefix integrals of f*, set on the exact (L¹, L∞) path
    maximal: Option<MaximalFunction>,
    sup: f64,
}

impl<'a> KEval<'a> {
    fn new(couple: &'a CoupleSpec, f: &'a StepFunction) -> Result<Self> {
        // surface norm errors (domain mismatch, trivial spaces) once
        couple.x0.norm(f)?;
        couple.x1.norm(f)?;
        let maximal = if couple.is_l1_linf() { Some(MaximalFunction::from_step(f)) } else { None };
        Ok(KEval { couple, f, maximal, sup: f.sup_norm() })
    }

    fn restricted(&self) -> bool {
        self.maximal.is_none() && !self.couple.x1_is_sup()
    }

    /// K(t, f), exact or family-restricted upper bound.
    fn value(&self, t: f64) -> f64 {
        if let Some(m) = &self.maximal {
            return t * m.eval(t);
        }
        self.minimize(t).1
    }

    /// Clamp level minimizing the family bound, and the bound. The bound as
    /// a function of the clamp level is convex (the excess is pointwise
    /// convex in the level), so golden section plus a scan over the value
    /// moduli is reliable.
    fn minimize(&self, t: f64) -> (f64, f64) {
        if self.sup == 0.0 {
            return (0.0, 0.0);
        }
        let high = |c: f64| -> f64 {
            let e = self.couple.x0.norm(&self.f.excess_over(c)).unwrap_or(f64::INFINITY);
            let b = self.couple.x1.norm(&self.f.clamp_modulus(c)).unwrap_or(f64::INFINITY);
            e + t * b
        };
        let (mut best_c, mut best) = golden_min(0.0, self.sup, high);
        for v in self.f.values() {
            let c = v.norm();
            let cand = high(c);
            if cand < best {
                best = cand;
                best_c = c;
            }
        }
        if !self.couple.x1_is_sup() {
            // opposite order: bounded part in X₀, excess in X₁
            let low = |c: f64| -> f64 {
                let b = self.couple.x0.norm(&self.f.clamp_modulus(c)).unwrap_or(f64::INFINITY);
                let e = self.couple.x1.norm(&self.f.excess_over(c)).unwrap_or(f64::INFINITY);
                b + t * e
            };
            let (_, lo_best) = golden_min(0.0, self.sup, low);
            let lo_scan = self.f.values().iter().map(|v| low(v.norm())).fold(lo_best, f64::min);
            if lo_scan < best {
                best = lo_scan;
                // keep the clamp-high split for decompositions; the value
                // is still a valid upper bound
            }
        }
        (best_c, best)
    }

    /// Near-optimal split f = f₀ + f₁ at parameter t (clamp family).
    fn decompose(&self, t: f64) -> (StepFunction, StepFunction) {
        let c = if self.maximal.is_some() {
            self.f.decreasing_rearrangement().eval(t).re
        } else {
            self.minimize(t).0
        };
        (self.f.excess_over(c), self.f.clamp_modulus(c))
    }

    /// Precomputed lower envelope of the clamp-family bounds
    /// A(c) + t·B(c), for cheap K evaluation across a whole t-grid. None on
    /// the exact (L¹, L∞) path.
    fn frontier(&self) -> Option<Frontier> {
        if self.maximal.is_some() || self.sup == 0.0 {
            return None;
        }
        let mut levels: Vec<f64> = self.f.values().iter().map(|v| v.norm()).collect();
        levels.push(0.0);
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        // Quantile-thin huge level sets (sampled outer-norm inputs): the
        // envelope build is linear in grid size times cell count, and the
        // clamp bound moves by at most one quantile gap.
        let subdiv = if levels.len() > 257 {
            let n = levels.len();
            let thin: Vec<f64> =
                (0..=256).map(|i| levels[(i * (n - 1)) / 256]).collect();
            levels = thin;
            levels.dedup();
            4
        } else {
            24
        };
        let mut cs: Vec<f64> = Vec::with_capacity(levels.len() * (subdiv + 1));
        for w in levels.windows(2) {
            for k in 0..subdiv {
                cs.push(w[0] + (w[1] - w[0]) * k as f64 / subdiv as f64);
            }
        }
        cs.push(self.sup);
        let mut lines: Vec<(f64, f64)> = Vec::with_capacity(cs.len() * 2);
        for &c in &cs {
            let excess = self.f.excess_over(c);
            let clamp = self.f.clamp_modulus(c);
            let a = self.couple.x0.norm(&excess).unwrap_or(f64::INFINITY);
            let b = self.couple.x1.norm(&clamp).unwrap_or(f64::INFINITY);
            if a.is_finite() && b.is_finite() {
                lines.push((a, b));
            }
            if !self.couple.x1_is_sup() {
                let a2 = self.couple.x0.norm(&clamp).unwrap_or(f64::INFINITY);
                let b2 = self.couple.x1.norm(&excess).unwrap_or(f64::INFINITY);
                if a2.is_finite() && b2.is_finite() {
                    lines.push((a2, b2));
                }
            }
        }
        if lines.is_empty() {
            return None;
        }
        Some(Frontier::new(lines))
    }
}

/// Lower envelope of lines t ↦ a + t·b over t > 0.
struct Frontier {
    /// hull lines in decreasing slope order
    lines: Vec<(f64, f64)>,
    /// lines[i] is minimal on [cross[i-1], cross[i]]
    cross: Vec<f64>,
}

impl Frontier {
    fn new(mut lines: Vec<(f64, f64)>) -> Self {
        // sort by slope descending, intercept ascending; drop dominated
        lines.sort_by(|l, r| r.1.total_cmp(&l.1).then(l.0.total_cmp(&r.0)));
        lines.dedup_by(|a, b| a.1 == b.1 && {
            // keep the first (smaller intercept) among equal slopes
            a.0 >= b.0
        });
        let mut hull: Vec<(f64, f64)> = Vec::with_capacity(lines.len());
        for l in lines {
            loop {
                match hull.len() {
                    0 => break,
                    _ if l.0 <= hull[hull.len() - 1].0 => {
                        // lower intercept and lower slope: the last line is
                        // never minimal again
                        hull.pop();
                    }
                    1 => break,
                    _ => {
                        let a = hull[hull.len() - 2];
                        let b = hull[hull.len() - 1];
                        // b is useless if l overtakes a before b does
                        let cross_ab = (b.0 - a.0) / (a.1 - b.1);
                        let cross_al = (l.0 - a.0) / (a.1 - l.1);
                        if cross_al <= cross_ab {
                            hull.pop();
                        } else {
                            break;
                        }
                    }
                }
            }
            hull.push(l);
        }
        let cross: Vec<f64> = hull
            .windows(2)
            .map(|w| (w[1].0 - w[0].0) / (w[0].1 - w[1].1))
            .collect();
        Frontier { lines: hull, cross }
    }

    fn query(&self, t: f64) -> f64 {
        let i = self.cross.partition_point(|&c| c < t);
        let (a, b) = self.lines[i];
        a + t * b
    }
}

/// K(t, f; X₀, X₁) = inf { ‖f₀‖₀ + t‖f₁‖₁ : f = f₀ + f₁ }.
pub fn k_functional(couple: &CoupleSpec, t: f64, f: &StepFunction) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("k_functional needs t > 0, got {t}")));
    }
    if f.is_zero() {
        return Ok(0.0);
    }
    Ok(KEval::new(couple, f)?.value(t))
}

/// True when the K value is only a family-restricted upper bound.
pub fn k_functional_is_restricted(couple: &CoupleSpec) -> bool {
    !(couple.is_l1_linf() || couple.x1_is_sup())
}

/// J(t, f) = max(‖f‖₀, t·‖f‖₁).
pub fn j_functional(couple: &CoupleSpec, t: f64, f: &StepFunction) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("j_functional needs t > 0, got {t}")));
    }
    Ok(couple.x0.norm(f)?.max(t * couple.x1.norm(f)?))
}

/// Admissibility of the parameters: interior θ is always fine; the endpoint
/// cases need the weight to have finite outer norm on the relevant half
/// line, probed by window doubling.
pub fn check_conditions(params: &InterpParams) -> ConditionStatus {
    if params.theta > 0.0 && params.theta < 1.0 {
        return ConditionStatus::InteriorOk;
    }
    let half: Vec<(f64, f64)> = if params.theta == 0.0 {
        vec![(0.0, params.window), (0.0, 2.0 * params.window)]
    } else {
        vec![(-params.window, 0.0), (-2.0 * params.window, 0.0)]
    };
    let h = params.step.max(params.window / 2000.0);
    let norms: Vec<f64> = half
        .iter()
        .map(|&(lo, hi)| {
            let n = ((hi - lo) / h).ceil() as usize;
            let vals: Vec<f64> = (0..n)
                .map(|i| params.b.eval((lo + (hi - lo) * i as f64 / n as f64).exp()))
                .collect();
            params.outer.norm_of_samples(lo, (hi - lo) / n as f64, &vals).unwrap_or(f64::INFINITY)
        })
        .collect();
    let stable = norms[0].is_finite() && norms[1] <= norms[0] * 1.02 + 1e-12;
    match (params.theta == 0.0, stable) {
        (true, true) => ConditionStatus::Theta0Ok,
        (false, true) => ConditionStatus::Theta1Ok,
        (_, false) => ConditionStatus::Trivial,
    }
}

/// Everything the weighted-norm evaluation produces in one pass.
#[derive(Debug, Clone)]
pub struct KMethodReport {
    pub value: f64,
    /// share of the discretized outer norm carried by the two boundary cells
    pub boundary_share: f64,
    /// sup over the grid of the weighted integrand (pointwise-bound numerator)
    pub sup_weighted: f64,
    pub condition: ConditionStatus,
    pub family_restricted: bool,
    pub window: f64,
    pub step_effective: f64,
}

pub fn k_method_report(
    couple: &CoupleSpec,
    params: &InterpParams,
    f: &StepFunction,
) -> Result<KMethodReport> {
    params.validate()?;
    let condition = check_conditions(params);
    if condition == ConditionStatus::Trivial && !params.override_conditions {
        return Err(Error::TrivialSpace(format!(
            "endpoint parameters inadmissible: {params}"
        )));
    }
    let t_cap = params.window;
    let n = ((2.0 * t_cap / params.step).round() as usize).max(2);
    let h = 2.0 * t_cap / n as f64;
    if f.is_zero() {
        return Ok(KMethodReport {
            value: 0.0,
            boundary_share: 0.0,
            sup_weighted: 0.0,
            condition,
            family_restricted: false,
            window: t_cap,
            step_effective: h,
        });
    }
    let eval = KEval::new(couple, f)?;
    let frontier = eval.frontier();
    let weighted: Vec<f64> = (0..=n)
        .into_par_iter()
        .map(|i| {
            let t = -t_cap + h * i as f64;
            let s = t.exp();
            let k = match &frontier {
                Some(fr) => fr.query(s),
                None => eval.value(s),
            };
            (-params.theta * t).exp() * params.b.eval(s) * k
        })
        .collect();
    let value = params.outer.norm_of_samples(-t_cap, h, &weighted)?;
    let boundary_share = match &params.outer {
        OuterSpace::Lebesgue(q) if !q.is_infinite() => {
            let mut acc = Compensated::new();
            for &v in &weighted {
                acc.add(h * v.powf(*q));
            }
            let total = acc.total();
            if total > 0.0 {
                h * (weighted[0].powf(*q) + weighted[n].powf(*q)) / total
            } else {
                0.0
            }
        }
        _ => {
            let sup = weighted.iter().cloned().fold(0.0, f64::max);
            if sup > 0.0 { weighted[0].max(weighted[n]) / sup } else { 0.0 }
        }
    };
    Ok(KMethodReport {
        value,
        boundary_share,
        sup_weighted: weighted.iter().cloned().fold(0.0, f64::max),
        condition,
        family_restricted: eval.restricted(),
        window: t_cap,
        step_effective: h,
    })
}

/// ‖ e^{-θt} b(e^t) K(e^t, f) ‖ in the outer space, on the recorded grid.
pub fn k_method_norm(couple: &CoupleSpec, params: &InterpParams, f: &StepFunction) -> Result<f64> {
    let report = k_method_report(couple, params, f)?;
    if report.boundary_share > 0.01 {
        return Err(Error::TruncationDominant { share: report.boundary_share });
    }
    Ok(report.value)
}

/// sup_t of the weighted integrand divided by the norm (0/0 → 0).
pub fn pointwise_bound_ratio(
    couple: &CoupleSpec,
    params: &InterpParams,
    f: &StepFunction,
) -> Result<f64> {
    let report = k_method_report(couple, params, f)?;
    if report.value == 0.0 {
        return Ok(0.0);
    }
    Ok(report.sup_weighted / report.value)
}

/// Discrete J-method representation f = Σ parts, indexed by a uniform grid
/// in log coordinates. Each part approximates h·u(e^{t_k}).
#[derive(Debug, Clone)]
pub struct JRepresentation {
    pub t_lo: f64,
    pub h: f64,
    pub parts: Vec<(f64, StepFunction)>,
}

/// Builds the telescoped clamp representation u_k = f₀(t_{k+1}) - f₀(t_k);
/// it sums to f exactly when the window covers the value range, which is
/// verified and otherwise reported as RepresentationFailed.
pub fn j_representation(
    couple: &CoupleSpec,
    params: &InterpParams,
    f: &StepFunction,
    n_terms: usize,
) -> Result<JRepresentation> {
    params.validate()?;
    if n_terms == 0 {
        return Err(Error::InvalidParameter("n_terms must be positive".into()));
    }
    let m = ((params.window / params.step).floor() as usize).min(n_terms).max(1);
    let h = params.step;
    let t_lo = -(m as f64) * h;
    if f.is_zero() {
        return Ok(JRepresentation { t_lo, h, parts: vec![(0.0, f.clone())] });
    }
    let eval = KEval::new(couple, f)?;
    // f₀ parts of the clamp decompositions on the grid t_k = k·h
    let parts: Vec<StepFunction> = (-(m as i64)..=m as i64)
        .into_par_iter()
        .map(|k| eval.decompose((k as f64 * h).exp()).0)
        .collect();
    // u_k = f₀(t_{k+1}) − f₀(t_k), with the outermost pieces closing the sum
    let mut reps: Vec<(f64, StepFunction)> = Vec::with_capacity(parts.len() + 1);
    reps.push((t_lo, parts[0].clone()));
    for (i, w) in parts.windows(2).enumerate() {
        let t = t_lo + h * i as f64;
        reps.push((t + h, w[1].sub(&w[0])?));
    }
    let t_hi = m as f64 * h;
    reps.push((t_hi, f.sub(parts.last().unwrap())?));
    // telescoping must reconstruct f
    let mut total = StepFunction::zero(f.domain());
    for (_, u) in &reps {
        total = total.add(u)?;
    }
    let residual_norm = {
        let r = f.sub(&total)?;
        let resid = KEval::new(couple, &r)?;
        if r.is_zero() { 0.0 } else { resid.value(1.0) }
    };
    let scale = eval.value(1.0).max(1.0);
    if residual_norm > 1e-8 * scale {
        return Err(Error::RepresentationFailed { residual: residual_norm });
    }
    Ok(JRepresentation { t_lo, h, parts: reps })
}

/// Weighted outer norm of a representation's J-density samples.
pub fn j_norm_of_representation(
    couple: &CoupleSpec,
    params: &InterpParams,
    rep: &JRepresentation,
) -> Result<f64> {
    let h = rep.h;
    let j_vals: Vec<f64> = rep
        .parts
        .par_iter()
        .map(|(t, u)| {
            if u.is_zero() {
                return Ok(0.0);
            }
            let j = j_functional(couple, t.exp(), u)?;
            Ok((-params.theta * t).exp() * params.b.eval(t.exp()) * j / h)
        })
        .collect::<Result<Vec<f64>>>()?;
    params.outer.norm_of_samples(rep.t_lo, h, &j_vals)
}

/// Upper bound on the J-method norm through the telescoped clamp
/// representation.
pub fn j_method_norm_upper(
    couple: &CoupleSpec,
    params: &InterpParams,
    f: &StepFunction,
    n_terms: usize,
) -> Result<f64> {
    if f.is_zero() {
        params.validate()?;
        return Ok(0.0);
    }
    let rep = j_representation(couple, params, f, n_terms)?;
    j_norm_of_representation(couple, params, &rep)
}
