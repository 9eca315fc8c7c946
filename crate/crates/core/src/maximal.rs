//! The level function f**(t) = (1/t)∫₀ᵗ f*(s) ds, kept as an exact
//! piecewise object.
//!
//! On each rearrangement cell f** has the form v + w/t, so integrals of f**
//! and of its powers reduce to logarithms and power antiderivatives; only
//! mixed pieces raised to a non-integer power need quadrature.

use crate::domain::Domain;
use crate::error::Result;
use crate::quad;
use crate::step::StepFunction;
use crate::sum::Compensated;

#[derive(Debug, Clone)]
pub struct MaximalFunction {
    /// rearrangement knots, starting at 0
    knots: Vec<f64>,
    /// rearrangement cell values (nonincreasing, positive)
    vals: Vec<f64>,
    /// cum[i] = ∫₀^{knots[i]} f*
    cum: Vec<f64>,
    total: f64,
}

/// One piece of f** on (lo, hi): f**(t) = v + w / t.
#[derive(Debug, Clone, Copy)]
struct Piece {
    lo: f64,
    hi: f64,
    v: f64,
    w: f64,
}

impl MaximalFunction {
    pub fn from_step(f: &StepFunction) -> Self {
        let fs = f.decreasing_rearrangement();
        let mut knots = vec![0.0];
        let mut vals = Vec::with_capacity(fs.num_cells());
        let mut cum = vec![0.0];
        let mut acc = Compensated::new();
        for c in fs.cells() {
            vals.push(c.value.re);
            acc.add(c.value.re * c.measure());
            knots.push(c.end);
            cum.push(acc.total());
        }
        let total = acc.total();
        MaximalFunction { knots, vals, cum, total }
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    /// ∫₀^∞ f* (equals ‖f‖₁).
    pub fn total_integral(&self) -> f64 {
        self.total
    }

    /// sup f** = f**(0+) = f*(0+).
    pub fn sup(&self) -> f64 {
        self.vals.first().copied().unwrap_or(0.0)
    }

    fn pieces(&self) -> impl Iterator<Item = Piece> + '_ {
        let k = self.vals.len();
        (0..=k).filter_map(move |i| {
            if i < k {
                let lo = self.knots[i];
                let hi = self.knots[i + 1];
                let v = self.vals[i];
                let w = self.cum[i] - v * lo;
                Some(Piece { lo, hi, v, w })
            } else if k > 0 {
                Some(Piece { lo: self.knots[k], hi: f64::INFINITY, v: 0.0, w: self.total })
            } else {
                None
            }
        })
    }

    pub fn eval(&self, t: f64) -> f64 {
        if self.vals.is_empty() {
            return 0.0;
        }
        if t <= 0.0 {
            return self.sup();
        }
        let last = *self.knots.last().unwrap();
        if t >= last {
            return self.total / t;
        }
        let i = self.knots.partition_point(|&k| k <= t) - 1;
        let v = self.vals[i];
        let w = self.cum[i] - v * self.knots[i];
        v + w / t
    }

    /// ∫_a^b f**(t) dt, exact (logarithmic antiderivatives per piece).
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        debug_assert!(a >= 0.0 && b >= a);
        let mut acc = Compensated::new();
        for p in self.pieces() {
            let lo = p.lo.max(a);
            let hi = p.hi.min(b);
            if hi <= lo {
                continue;
            }
            acc.add(p.v * (hi - lo));
            if p.w != 0.0 {
                acc.add(p.w * (hi / lo).ln());
            }
        }
        acc.total()
    }

    /// ∫_a^b f**(t)^p dt. Exact for constant and pure-hyperbola pieces,
    /// high-order quadrature on mixed pieces.
    pub fn integral_pow(&self, a: f64, b: f64, p: f64) -> f64 {
        debug_assert!(p >= 1.0);
        if p == 1.0 {
            return self.integral(a, b);
        }
        let mut acc = Compensated::new();
        for pc in self.pieces() {
            let lo = pc.lo.max(a);
            let hi = pc.hi.min(b);
            if hi <= lo {
                continue;
            }
            if pc.w == 0.0 {
                acc.add(pc.v.powf(p) * (hi - lo));
            } else if pc.v == 0.0 {
                // ∫ (w/t)^p = w^p (hi^{1-p} - lo^{1-p}) / (1-p)
                let e = 1.0 - p;
                acc.add(pc.w.powf(p) * (hi.powf(e) - lo.powf(e)) / e);
            } else {
                acc.add(quad::integrate_gl32(lo, hi, |t| (pc.v + pc.w / t).powf(p)));
            }
        }
        acc.total()
    }

    /// Project onto a geometric step grid on [t_min, t_max]; cell values are
    /// exact averages, so the integral over the window is preserved.
    pub fn sample_log_grid(&self, t_min: f64, t_max: f64, cells: usize) -> Result<StepFunction> {
        assert!(t_min > 0.0 && t_max > t_min && cells > 0);
        let ratio = (t_max / t_min).powf(1.0 / cells as f64);
        let mut breakpoints = Vec::with_capacity(cells + 1);
        let mut values = Vec::with_capacity(cells);
        let mut lo = t_min;
        breakpoints.push(lo);
        for i in 1..=cells {
            let hi = if i == cells { t_max } else { t_min * ratio.powi(i as i32) };
            values.push(self.integral(lo, hi) / (hi - lo));
            breakpoints.push(hi);
            lo = hi;
        }
        StepFunction::real(Domain::HalfLine, breakpoints, values)
    }
}
