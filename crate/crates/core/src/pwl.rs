//! Continuous piecewise-linear functions.
//!
//! These arise as exact convolutions of step functions on the line and the
//! torus. Line functions interpolate between nodes and vanish outside the
//! node range; torus functions are cyclic (the last segment runs back to the
//! first node plus 2π).

use crate::domain::{Domain, TORUS};
use crate::error::{Error, Result};
use crate::quad;
use crate::step::StepFunction;
use crate::sum::Compensated;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    domain: Domain,
    nodes: Vec<f64>,
    values: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy)]
pub struct Segment {
    pub x0: f64,
    pub x1: f64,
    pub v0: Complex64,
    pub v1: Complex64,
}

impl Segment {
    #[inline]
    pub fn len(&self) -> f64 {
        self.x1 - self.x0
    }

    /// Value at relative position t ∈ [0, 1].
    #[inline]
    pub fn at(&self, t: f64) -> Complex64 {
        self.v0 + (self.v1 - self.v0) * t
    }
}

impl PiecewiseLinear {
    pub fn from_nodes(domain: Domain, nodes: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        let err = |msg: &str| Err(Error::InvalidParameter(format!("piecewise linear: {msg}")));
        if nodes.len() != values.len() {
            return err("node/value length mismatch");
        }
        if nodes.iter().any(|x| !x.is_finite())
            || values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return err("non-finite data");
        }
        for w in nodes.windows(2) {
            if w[1] <= w[0] {
                return err("nodes not strictly increasing");
            }
        }
        match domain {
            Domain::RealLine => {
                if nodes.len() == 1 {
                    return err("a line function needs at least two nodes");
                }
            }
            Domain::Torus => {
                if nodes.is_empty() {
                    return err("a torus function needs at least one node");
                }
                if nodes[0] < 0.0 || *nodes.last().unwrap() >= TORUS {
                    return err("torus nodes must lie in [0, 2π)");
                }
            }
            other => return Err(Error::UnsupportedDomain(other)),
        }
        Ok(PiecewiseLinear { domain, nodes, values })
    }

    pub fn zero(domain: Domain) -> Self {
        match domain {
            Domain::Torus => PiecewiseLinear {
                domain,
                nodes: vec![0.0],
                values: vec![Complex64::ZERO],
            },
            _ => PiecewiseLinear { domain, nodes: Vec::new(), values: Vec::new() },
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn segments(&self) -> Vec<Segment> {
        match self.domain {
            Domain::Torus => {
                let k = self.nodes.len();
                if k == 1 {
                    return vec![Segment {
                        x0: self.nodes[0],
                        x1: self.nodes[0] + TORUS,
                        v0: self.values[0],
                        v1: self.values[0],
                    }];
                }
                (0..k)
                    .map(|i| {
                        let j = (i + 1) % k;
                        let x1 = if j == 0 { self.nodes[0] + TORUS } else { self.nodes[j] };
                        Segment { x0: self.nodes[i], x1, v0: self.values[i], v1: self.values[j] }
                    })
                    .collect()
            }
            _ => self
                .nodes
                .windows(2)
                .zip(self.values.windows(2))
                .map(|(x, v)| Segment { x0: x[0], x1: x[1], v0: v[0], v1: v[1] })
                .collect(),
        }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        if self.nodes.is_empty() {
            return Complex64::ZERO;
        }
        match self.domain {
            Domain::Torus => {
                let base = self.nodes[0];
                let x = base + (x - base).rem_euclid(TORUS);
                let k = self.nodes.len();
                if k == 1 {
                    return self.values[0];
                }
                let i = self.nodes.partition_point(|&n| n <= x) - 1;
                let j = (i + 1) % k;
                let x1 = if j == 0 { self.nodes[0] + TORUS } else { self.nodes[j] };
                let t = (x - self.nodes[i]) / (x1 - self.nodes[i]);
                self.values[i] + (self.values[j] - self.values[i]) * t
            }
            _ => {
                let first = self.nodes[0];
                let last = *self.nodes.last().unwrap();
                if x < first || x > last {
                    return Complex64::ZERO;
                }
                if x == last {
                    return *self.values.last().unwrap();
                }
                let i = self.nodes.partition_point(|&n| n <= x) - 1;
                let t = (x - self.nodes[i]) / (self.nodes[i + 1] - self.nodes[i]);
                self.values[i] + (self.values[i + 1] - self.values[i]) * t
            }
        }
    }

    /// Largest modulus. |affine|² is convex, so the maximum sits at a node.
    pub fn sup_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Exact integral (trapezoid rule is exact on affine segments).
    pub fn integrate(&self) -> Complex64 {
        let mut re = Compensated::new();
        let mut im = Compensated::new();
        for s in self.segments() {
            let len = s.len();
            re.add(0.5 * (s.v0.re + s.v1.re) * len);
            im.add(0.5 * (s.v0.im + s.v1.im) * len);
        }
        Complex64::new(re.total(), im.total())
    }

    fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    /// ‖·‖_p. Real segments use the closed-form antiderivative of |affine|^p,
    /// complex p = 2 has a closed form, other complex exponents fall back to
    /// high-order quadrature per segment.
    pub fn norm_lp(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.sup_abs();
        }
        let mut acc = Compensated::new();
        if self.is_real() {
            for s in self.segments() {
                acc.add(real_segment_abs_pow(s.v0.re, s.v1.re, s.len(), p));
            }
        } else if p == 2.0 {
            for s in self.segments() {
                let a = s.v0;
                let b = s.v1 - s.v0;
                let val = a.norm_sqr() + (a.conj() * b).re + b.norm_sqr() / 3.0;
                acc.add(val * s.len());
            }
        } else {
            for s in self.segments() {
                acc.add(quad::integrate_gl32(0.0, 1.0, |t| s.at(t).norm().powf(p)) * s.len());
            }
        }
        acc.total().max(0.0).powf(1.0 / p)
    }

    /// Exact cell averages on a grid refining every segment `refine` times.
    /// Averaging preserves the integral and can only shrink any norm that is
    /// monotone under averaging, so this is a safe lower-side surrogate.
    pub fn to_step(&self, refine: usize) -> Result<StepFunction> {
        let refine = refine.max(1);
        if self.nodes.is_empty() {
            return Ok(StepFunction::zero(self.domain));
        }
        match self.domain {
            Domain::Torus => {
                let mut cells: Vec<(f64, Complex64)> = Vec::new();
                for s in self.segments() {
                    let h = s.len() / refine as f64;
                    for j in 0..refine {
                        let start = s.x0 + h * j as f64;
                        let mid = start + 0.5 * h;
                        let t = (mid - s.x0) / s.len();
                        cells.push((start.rem_euclid(TORUS), s.at(t)));
                    }
                }
                cells.sort_by(|a, b| a.0.total_cmp(&b.0));
                cells.dedup_by(|a, b| a.0 == b.0);
                let breakpoints = cells.iter().map(|c| c.0).collect();
                let values = cells.iter().map(|c| c.1).collect();
                StepFunction::new(Domain::Torus, breakpoints, values)
            }
            _ => {
                let mut breakpoints = Vec::new();
                let mut values = Vec::new();
                for s in self.segments() {
                    let h = s.len() / refine as f64;
                    for j in 0..refine {
                        let start = s.x0 + h * j as f64;
                        breakpoints.push(start);
                        let t = (start + 0.5 * h - s.x0) / s.len();
                        values.push(s.at(t));
                    }
                }
                breakpoints.push(*self.nodes.last().unwrap());
                breakpoints.dedup_by(|a: &mut f64, b: &mut f64| *a == *b);
                StepFunction::new(self.domain, breakpoints, values)
            }
        }
    }

    pub fn scale(&self, c: Complex64) -> PiecewiseLinear {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= c;
        }
        out
    }

    /// Pointwise sum on the union node grid. On the line this assumes both
    /// summands vanish at their own support endpoints (true for
    /// convolutions), so the sum stays continuous.
    pub fn add(&self, other: &PiecewiseLinear) -> Result<PiecewiseLinear> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch { expected: self.domain, got: other.domain });
        }
        let mut grid: Vec<f64> = Vec::new();
        grid.extend_from_slice(&self.nodes);
        grid.extend_from_slice(&other.nodes);
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        if grid.is_empty() {
            return Ok(PiecewiseLinear::zero(self.domain));
        }
        let values: Vec<Complex64> = grid.iter().map(|&x| self.eval(x) + other.eval(x)).collect();
        PiecewiseLinear::from_nodes(self.domain, grid, values)
    }
}

/// ∫₀^len |g(x)|^p dx for the real affine g with g(0) = v0, g(len) = v1.
/// F(y) = sign(y)|y|^{p+1}/(p+1) is a global antiderivative of |g|^p g′,
/// valid across sign changes.
fn real_segment_abs_pow(v0: f64, v1: f64, len: f64, p: f64) -> f64 {
    let m = 0.5 * (v0 + v1);
    let d = 0.5 * (v1 - v0);
    if d == 0.0 {
        return m.abs().powf(p) * len;
    }
    // Nearly flat same-sign segments make the antiderivative difference
    // cancel; a short binomial series around the midpoint is exact to
    // O((d/m)^6) and has no cancellation.
    if d.abs() <= 1e-4 * m.abs() {
        let r = d / m;
        let corr = 1.0
            + p * (p - 1.0) / 6.0 * r * r
            + p * (p - 1.0) * (p - 2.0) * (p - 3.0) / 120.0 * r.powi(4);
        return m.abs().powf(p) * corr * len;
    }
    let f = |y: f64| y.signum() * y.abs().powf(p + 1.0) / (p + 1.0);
    ((f(v1) - f(v0)) / (v1 - v0)) * len
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tent() -> PiecewiseLinear {
        // hat function on [0, 2], peak 1 at x = 1 (χ_[0,1] ⋆ χ_[0,1])
        PiecewiseLinear::from_nodes(
            Domain::RealLine,
            vec![0.0, 1.0, 2.0],
            vec![Complex64::ZERO, Complex64::new(1.0, 0.0), Complex64::ZERO],
        )
        .unwrap()
    }

    #[test]
    fn tent_norms_match_closed_forms() {
        let h = tent();
        assert!((h.integrate().re - 1.0).abs() < 1e-15);
        assert!((h.norm_lp(1.0) - 1.0).abs() < 1e-15);
        // ∫ tent² = 2/3
        assert!((h.norm_lp(2.0) - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        // ∫ tent³ = 1/2
        assert!((h.norm_lp(3.0) - 0.5f64.powf(1.0 / 3.0)).abs() < 1e-15);
        assert_eq!(h.norm_lp(f64::INFINITY), 1.0);
    }

    #[test]
    fn sign_change_handled_exactly() {
        // line from -1 to 1 over [0, 2]: ∫|g| = 1, ∫ g² = 2/3
        let g = PiecewiseLinear::from_nodes(
            Domain::RealLine,
            vec![0.0, 2.0],
            vec![Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)],
        )
        .unwrap();
        assert!((g.norm_lp(1.0) - 1.0).abs() < 1e-15);
        assert!((g.norm_lp(2.0) - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((g.integrate().re - 0.0).abs() < 1e-15);
    }

    #[test]
    fn near_flat_segments_have_no_cancellation() {
        // a one-ulp tilt used to blow up the divided-difference antiderivative
        let v = -0.2832287461;
        let tilted = PiecewiseLinear::from_nodes(
            Domain::RealLine,
            vec![0.0, 2.5],
            vec![Complex64::new(v, 0.0), Complex64::new(f64::from_bits(v.to_bits() + 1), 0.0)],
        )
        .unwrap();
        for p in [1.0, 2.0, 3.0] {
            let want = v.abs().powf(p) * 2.5;
            let got = tilted.norm_lp(p).powf(p);
            assert!((got - want).abs() <= 1e-12 * want, "p={p}: {got} vs {want}");
        }
        // moderate tilt still matches the exact antiderivative
        let ramp = PiecewiseLinear::from_nodes(
            Domain::RealLine,
            vec![0.0, 1.0],
            vec![Complex64::new(1.0, 0.0), Complex64::new(1.0 + 1e-4, 0.0)],
        )
        .unwrap();
        // reference itself cancels at ~1e-12, hence the loose bound
        let exact = ((1.0f64 + 1e-4).powi(3) - 1.0) / (3.0 * 1e-4);
        assert!((ramp.norm_lp(2.0).powi(2) - exact).abs() <= 1e-11);
    }

    #[test]
    fn complex_p2_closed_form_matches_quadrature() {
        let g = PiecewiseLinear::from_nodes(
            Domain::RealLine,
            vec![0.0, 1.0, 3.0],
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, -2.0),
                Complex64::new(0.0, 0.5),
            ],
        )
        .unwrap();
        let closed = g.norm_lp(2.0);
        // brute-force Riemann check
        let n = 200_000;
        let mut acc = 0.0;
        for i in 0..n {
            let x = 3.0 * (i as f64 + 0.5) / n as f64;
            acc += g.eval(x).norm_sqr();
        }
        let brute = (acc * 3.0 / n as f64).sqrt();
        assert!((closed - brute).abs() < 1e-6);
    }

    #[test]
    fn to_step_preserves_integral_and_contracts_l2() {
        let h = tent();
        let s = h.to_step(4).unwrap();
        assert!((s.integrate().re - h.integrate().re).abs() < 1e-14);
        assert!(s.norm_lp(2.0) <= h.norm_lp(2.0) + 1e-14);
        assert!(s.norm_lp(2.0) > 0.95 * h.norm_lp(2.0));
    }

    #[test]
    fn torus_eval_wraps() {
        let g = PiecewiseLinear::from_nodes(
            Domain::Torus,
            vec![0.0, 3.0],
            vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)],
        )
        .unwrap();
        // segment from 3.0 back to 2π interpolates 2 → 1
        let mid = 0.5 * (3.0 + TORUS);
        assert!((g.eval(mid).re - 1.5).abs() < 1e-14);
        assert!((g.eval(mid + TORUS).re - 1.5).abs() < 1e-13);
        let total: f64 = g.segments().iter().map(Segment::len).sum();
        assert!((total - TORUS).abs() < 1e-14);
    }
}
