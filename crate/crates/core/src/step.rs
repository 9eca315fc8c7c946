//! Exact step functions with finitely many cells.
//!
//! Representation: strictly increasing breakpoints plus one complex value per
//! cell. On the line, half-line and integers the function vanishes outside
//! the listed cells and `values.len() + 1 == breakpoints.len()`. On the torus
//! the cells wrap around (`values.len() == breakpoints.len()`, last cell runs
//! from the last breakpoint to the first one plus 2π), so a torus function is
//! total. Integer-domain functions use unit cells `[n, n+1)`, which makes
//! counting measure literal.
//!
//! All constructors canonicalise: adjacent cells with exactly equal values
//! are merged and zero cells at the ends are trimmed (non-torus). Equality
//! of canonical forms is structural equality.

use crate::domain::{Domain, TORUS};
use crate::error::{Error, Result};
use crate::sum::Compensated;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    domain: Domain,
    breakpoints: Vec<f64>,
    values: Vec<Complex64>,
}

/// One cell of a step function. For torus functions `end` may exceed 2π on
/// the wrap-around cell; `end - start` is always the cell measure.
#[derive(Debug, Clone, Copy)]
pub struct Cell {
    pub start: f64,
    pub end: f64,
    pub value: Complex64,
}

impl Cell {
    #[inline]
    pub fn measure(&self) -> f64 {
        self.end - self.start
    }
}

impl StepFunction {
    pub fn new(domain: Domain, breakpoints: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        validate(domain, &breakpoints, &values)?;
        let mut f = StepFunction { domain, breakpoints, values };
        f.canonicalize();
        Ok(f)
    }

    /// Real-valued convenience constructor.
    pub fn real(domain: Domain, breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let values = values.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
        StepFunction::new(domain, breakpoints, values)
    }

    pub fn zero(domain: Domain) -> Self {
        match domain {
            Domain::Torus => StepFunction {
                domain,
                breakpoints: vec![0.0],
                values: vec![Complex64::ZERO],
            },
            _ => StepFunction { domain, breakpoints: Vec::new(), values: Vec::new() },
        }
    }

    /// Indicator of `[a, b)`. On the torus the complementary arc is filled
    /// with an explicit zero cell (torus representations are total).
    pub fn indicator(domain: Domain, a: f64, b: f64) -> Result<Self> {
        match domain {
            Domain::Torus => {
                if !(0.0 <= a && a < b && b <= TORUS) {
                    return Err(Error::InvalidParameter(format!(
                        "torus arc [{a}, {b}) must sit inside [0, 2π]"
                    )));
                }
                if a == 0.0 && b == TORUS {
                    StepFunction::real(domain, vec![0.0], vec![1.0])
                } else if b == TORUS {
                    StepFunction::real(domain, vec![0.0, a], vec![0.0, 1.0])
                } else {
                    StepFunction::real(domain, vec![a, b], vec![1.0, 0.0])
                }
            }
            _ => StepFunction::real(domain, vec![a, b], vec![1.0]),
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == Complex64::ZERO)
    }

    pub fn num_cells(&self) -> usize {
        self.values.len()
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        let k = self.values.len();
        (0..k).map(move |i| {
            let start = self.breakpoints[i];
            let end = if i + 1 < self.breakpoints.len() {
                self.breakpoints[i + 1]
            } else {
                // torus wrap-around cell
                self.breakpoints[0] + TORUS
            };
            Cell { start, end, value: self.values[i] }
        })
    }

    /// Right-continuous evaluation; zero outside the support (non-torus).
    pub fn eval(&self, x: f64) -> Complex64 {
        if self.values.is_empty() {
            return Complex64::ZERO;
        }
        let x = match self.domain {
            Domain::Torus => {
                let b0 = self.breakpoints[0];
                b0 + (x - b0).rem_euclid(TORUS)
            }
            _ => x,
        };
        if x < self.breakpoints[0] {
            return Complex64::ZERO;
        }
        if self.domain != Domain::Torus && x >= *self.breakpoints.last().unwrap() {
            return Complex64::ZERO;
        }
        // index of the cell containing x
        let idx = self.breakpoints.partition_point(|&b| b <= x) - 1;
        self.values.get(idx).copied().unwrap_or(Complex64::ZERO)
    }

    /// ∫ f dμ with compensated summation.
    pub fn integrate(&self) -> Complex64 {
        let mut re = Compensated::new();
        let mut im = Compensated::new();
        for c in self.cells() {
            let m = c.measure();
            re.add(c.value.re * m);
            im.add(c.value.im * m);
        }
        Complex64::new(re.total(), im.total())
    }

    /// ∫ |f|^p dμ.
    pub fn integrate_abs_pow(&self, p: f64) -> f64 {
        let mut acc = Compensated::new();
        for c in self.cells() {
            let a = c.value.norm();
            if a > 0.0 {
                acc.add(a.powf(p) * c.measure());
            }
        }
        acc.total()
    }

    /// ‖f‖_p. `p = ∞` gives the essential sup.
    pub fn norm_lp(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.sup_norm();
        }
        self.integrate_abs_pow(p).powf(1.0 / p)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// μ{ |f| > λ }. Negative λ yields the measure of the whole domain.
    pub fn distribution(&self, lambda: f64) -> f64 {
        if lambda < 0.0 {
            return self.domain.total_measure();
        }
        let mut acc = Compensated::new();
        for c in self.cells() {
            if c.value.norm() > lambda {
                acc.add(c.measure());
            }
        }
        acc.total()
    }

    /// Measure of { f ≠ 0 }.
    pub fn support_measure(&self) -> f64 {
        self.distribution(0.0)
    }

    /// Decreasing rearrangement f*, a nonincreasing real step function on the
    /// half-line. Exact: cells are sorted by |value| and their measures are
    /// accumulated.
    pub fn decreasing_rearrangement(&self) -> StepFunction {
        let mut cells: Vec<(f64, f64)> = self
            .cells()
            .filter_map(|c| {
                let a = c.value.norm();
                (a > 0.0).then_some((a, c.measure()))
            })
            .collect();
        cells.sort_by(|x, y| y.0.total_cmp(&x.0));
        // merge equal moduli so the output is canonical by construction
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(cells.len());
        for (a, m) in cells {
            match merged.last_mut() {
                Some(last) if last.0 == a => last.1 += m,
                _ => merged.push((a, m)),
            }
        }
        let mut breakpoints = Vec::with_capacity(merged.len() + 1);
        let mut values = Vec::with_capacity(merged.len());
        let mut edge = 0.0;
        breakpoints.push(0.0);
        for (a, m) in merged {
            edge += m;
            breakpoints.push(edge);
            values.push(Complex64::new(a, 0.0));
        }
        if values.is_empty() {
            return StepFunction::zero(Domain::HalfLine);
        }
        StepFunction { domain: Domain::HalfLine, breakpoints, values }
    }

    /// Cell moduli with measures, sorted by modulus descending. Zero cells
    /// are dropped.
    pub fn sorted_cells(&self) -> Vec<(f64, f64)> {
        let mut cells: Vec<(f64, f64)> = self
            .cells()
            .filter_map(|c| {
                let a = c.value.norm();
                (a > 0.0).then_some((a, c.measure()))
            })
            .collect();
        cells.sort_by(|x, y| y.0.total_cmp(&x.0));
        cells
    }

    pub fn max_abs(&self) -> f64 {
        self.sup_norm()
    }

    /// |f| as a real step function.
    pub fn abs(&self) -> StepFunction {
        let mut out = self.clone();
        for v in &mut out.values {
            *v = Complex64::new(v.norm(), 0.0);
        }
        out.canonicalize();
        out
    }

    /// Map every value through `op` (measure structure unchanged).
    pub fn map_values(&self, op: impl Fn(Complex64) -> Complex64) -> StepFunction {
        let mut out = self.clone();
        for v in &mut out.values {
            *v = op(*v);
        }
        out.canonicalize();
        out
    }

    pub fn scale(&self, c: Complex64) -> StepFunction {
        self.map_values(|v| v * c)
    }

    /// Pointwise clamp of the modulus at level `c ≥ 0`, preserving phase.
    /// This is the bounded part of the standard truncation decomposition.
    pub fn clamp_modulus(&self, c: f64) -> StepFunction {
        self.map_values(|v| {
            let a = v.norm();
            if a <= c || a == 0.0 {
                v
            } else {
                v * (c / a)
            }
        })
    }

    /// f − clamp(f, c): the part of f above modulus level `c`.
    pub fn excess_over(&self, c: f64) -> StepFunction {
        self.map_values(|v| {
            let a = v.norm();
            if a <= c || a == 0.0 {
                Complex64::ZERO
            } else {
                v * ((a - c) / a)
            }
        })
    }

    pub fn translate(&self, h: f64) -> Result<StepFunction> {
        match self.domain {
            Domain::RealLine => {
                let mut out = self.clone();
                for b in &mut out.breakpoints {
                    *b += h;
                }
                Ok(out)
            }
            Domain::Torus => {
                if self.values.is_empty() {
                    return Ok(self.clone());
                }
                let mut cells: Vec<(f64, Complex64)> = self
                    .cells()
                    .map(|c| ((c.start + h).rem_euclid(TORUS), c.value))
                    .collect();
                cells.sort_by(|a, b| a.0.total_cmp(&b.0));
                let breakpoints = cells.iter().map(|c| c.0).collect();
                let values = cells.iter().map(|c| c.1).collect();
                StepFunction::new(Domain::Torus, breakpoints, values)
            }
            Domain::Integers => {
                if h.fract() != 0.0 {
                    return Err(Error::InvalidParameter(
                        "integer-domain translation must be integral".into(),
                    ));
                }
                let mut out = self.clone();
                for b in &mut out.breakpoints {
                    *b += h;
                }
                Ok(out)
            }
            Domain::HalfLine => Err(Error::UnsupportedDomain(Domain::HalfLine)),
        }
    }

    /// Pointwise combination on the union grid. Exact for step inputs.
    fn zip_with(&self, other: &StepFunction, op: impl Fn(Complex64, Complex64) -> Complex64) -> Result<StepFunction> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch { expected: self.domain, got: other.domain });
        }
        let mut grid: Vec<f64> = Vec::new();
        grid.extend_from_slice(&self.breakpoints);
        grid.extend_from_slice(&other.breakpoints);
        if self.domain != Domain::Torus {
            if grid.is_empty() {
                return Ok(StepFunction::zero(self.domain));
            }
            grid.sort_by(f64::total_cmp);
            grid.dedup();
            let values: Vec<Complex64> = grid
                .windows(2)
                .map(|w| {
                    let mid = 0.5 * (w[0] + w[1]);
                    op(self.eval(mid), other.eval(mid))
                })
                .collect();
            StepFunction::new(self.domain, grid, values)
        } else {
            grid.sort_by(f64::total_cmp);
            grid.dedup();
            let k = grid.len();
            let values: Vec<Complex64> = (0..k)
                .map(|i| {
                    let start = grid[i];
                    let end = if i + 1 < k { grid[i + 1] } else { grid[0] + TORUS };
                    let mid = 0.5 * (start + end);
                    op(self.eval(mid), other.eval(mid))
                })
                .collect();
            StepFunction::new(self.domain, grid, values)
        }
    }

    pub fn add(&self, other: &StepFunction) -> Result<StepFunction> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &StepFunction) -> Result<StepFunction> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &StepFunction) -> Result<StepFunction> {
        self.zip_with(other, |a, b| a * b)
    }

    /// Serialize to the documented line-based text format. Floats use Rust's
    /// shortest round-trip formatting, so `from_text(to_text(f)) == f`.
    pub fn to_text(&self) -> String {
        let mut out = String::from("stepfn v1\n");
        out.push_str(&format!("domain {}\n", self.domain.tag()));
        let join = |xs: &mut dyn Iterator<Item = String>| xs.collect::<Vec<_>>().join(" ");
        out.push_str("breakpoints ");
        out.push_str(&join(&mut self.breakpoints.iter().map(|b| format!("{b}"))));
        out.push_str("\nre ");
        out.push_str(&join(&mut self.values.iter().map(|v| format!("{}", v.re))));
        out.push_str("\nim ");
        out.push_str(&join(&mut self.values.iter().map(|v| format!("{}", v.im))));
        out.push('\n');
        out
    }

    pub fn from_text(text: &str) -> Result<StepFunction> {
        let mut domain = None;
        let mut breakpoints: Option<Vec<f64>> = None;
        let mut re: Option<Vec<f64>> = None;
        let mut im: Option<Vec<f64>> = None;
        let bad = |msg: &str| Error::ParseStepFunction(msg.into());
        let mut lines = text.lines();
        match lines.next() {
            Some("stepfn v1") => {}
            _ => return Err(bad("missing 'stepfn v1' header")),
        }
        for line in lines {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
            match key {
                "domain" => {
                    domain = Some(
                        Domain::from_tag(rest.trim()).ok_or_else(|| bad("unknown domain tag"))?,
                    )
                }
                "breakpoints" | "re" | "im" => {
                    let parsed: std::result::Result<Vec<f64>, _> =
                        rest.split_whitespace().map(str::parse::<f64>).collect();
                    let parsed = parsed.map_err(|e| bad(&format!("bad float: {e}")))?;
                    match key {
                        "breakpoints" => breakpoints = Some(parsed),
                        "re" => re = Some(parsed),
                        _ => im = Some(parsed),
                    }
                }
                other => return Err(bad(&format!("unknown record '{other}'"))),
            }
        }
        let domain = domain.ok_or_else(|| bad("missing domain record"))?;
        let breakpoints = breakpoints.ok_or_else(|| bad("missing breakpoints record"))?;
        let re = re.ok_or_else(|| bad("missing re record"))?;
        let im = im.ok_or_else(|| bad("missing im record"))?;
        if re.len() != im.len() {
            return Err(bad("re/im length mismatch"));
        }
        let values = re
            .into_iter()
            .zip(im)
            .map(|(r, i)| Complex64::new(r, i))
            .collect();
        StepFunction::new(domain, breakpoints, values)
    }

    fn canonicalize(&mut self) {
        if self.domain == Domain::Torus {
            // merge equal neighbours (non-cyclic pass)
            let mut bs = Vec::with_capacity(self.breakpoints.len());
            let mut vs: Vec<Complex64> = Vec::with_capacity(self.values.len());
            for (b, v) in self.breakpoints.iter().zip(&self.values) {
                if let Some(last) = vs.last() {
                    if *last == *v {
                        continue;
                    }
                }
                bs.push(*b);
                vs.push(*v);
            }
            // cyclic merge across the wrap
            while vs.len() > 1 && vs.first() == vs.last() {
                bs.remove(0);
                vs.remove(0);
            }
            if vs.len() == 1 {
                bs[0] = 0.0;
            }
            self.breakpoints = bs;
            self.values = vs;
            return;
        }
        // merge equal neighbours
        let mut bs: Vec<f64> = Vec::with_capacity(self.breakpoints.len());
        let mut vs: Vec<Complex64> = Vec::with_capacity(self.values.len());
        for i in 0..self.values.len() {
            if !vs.is_empty() && *vs.last().unwrap() == self.values[i] {
                continue;
            }
            bs.push(self.breakpoints[i]);
            vs.push(self.values[i]);
        }
        if !self.breakpoints.is_empty() {
            bs.push(*self.breakpoints.last().unwrap());
        }
        // trim zero ends
        while let Some(first) = vs.first() {
            if *first == Complex64::ZERO {
                vs.remove(0);
                bs.remove(0);
            } else {
                break;
            }
        }
        while let Some(last) = vs.last() {
            if *last == Complex64::ZERO {
                vs.pop();
                bs.pop();
            } else {
                break;
            }
        }
        if vs.is_empty() {
            bs.clear();
        }
        self.breakpoints = bs;
        self.values = vs;
    }
}

fn validate(domain: Domain, breakpoints: &[f64], values: &[Complex64]) -> Result<()> {
    let err = |msg: String| Err(Error::InvalidStepFunction(msg));
    for b in breakpoints {
        if !b.is_finite() {
            return err("non-finite breakpoint".into());
        }
    }
    for v in values {
        if !v.re.is_finite() || !v.im.is_finite() {
            return err("non-finite value".into());
        }
    }
    for w in breakpoints.windows(2) {
        if w[1] <= w[0] {
            return err(format!("breakpoints not strictly increasing at {}", w[0]));
        }
    }
    match domain {
        Domain::Torus => {
            if values.is_empty() && breakpoints.is_empty() {
                return Ok(());
            }
            if values.len() != breakpoints.len() {
                return err("torus functions need one value per breakpoint".into());
            }
            if let (Some(first), Some(last)) = (breakpoints.first(), breakpoints.last()) {
                if *first < 0.0 || *last >= TORUS {
                    return err("torus breakpoints must lie in [0, 2π)".into());
                }
            }
        }
        Domain::HalfLine => {
            if !breakpoints.is_empty() && breakpoints[0] < 0.0 {
                return err("half-line breakpoints must be nonnegative".into());
            }
            if !breakpoints.is_empty() && values.len() + 1 != breakpoints.len() {
                return err("need one value per cell".into());
            }
            if breakpoints.is_empty() && !values.is_empty() {
                return err("values without breakpoints".into());
            }
        }
        Domain::RealLine => {
            if !breakpoints.is_empty() && values.len() + 1 != breakpoints.len() {
                return err("need one value per cell".into());
            }
            if breakpoints.is_empty() && !values.is_empty() {
                return err("values without breakpoints".into());
            }
        }
        Domain::Integers => {
            if breakpoints.is_empty() && values.is_empty() {
                return Ok(());
            }
            if values.len() + 1 != breakpoints.len() {
                return err("need one value per cell".into());
            }
            // cells may span several integers (merged runs of equal values)
            for w in breakpoints.windows(2) {
                if w[0].fract() != 0.0 || w[1].fract() != 0.0 || (w[1] - w[0]) < 1.0 {
                    return err("integer-domain breakpoints must be increasing integers".into());
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi01(domain: Domain) -> StepFunction {
        StepFunction::indicator(domain, 0.0, 1.0).unwrap()
    }

    #[test]
    fn integrate_matches_cell_sum() {
        let f = StepFunction::real(Domain::RealLine, vec![0.0, 1.0, 3.0], vec![2.0, -1.0]).unwrap();
        assert_eq!(f.integrate().re, 2.0 - 2.0);
        assert_eq!(f.norm_lp(1.0), 4.0);
    }

    #[test]
    fn canonical_merges_and_trims() {
        let f = StepFunction::real(
            Domain::RealLine,
            vec![0.0, 1.0, 2.0, 3.0, 4.0],
            vec![0.0, 2.0, 2.0, 0.0],
        )
        .unwrap();
        assert_eq!(f.breakpoints(), &[1.0, 3.0]);
        assert_eq!(f.values().len(), 1);
    }

    #[test]
    fn torus_cyclic_merge() {
        let f = StepFunction::real(
            Domain::Torus,
            vec![0.0, 1.0, 2.0],
            vec![3.0, 5.0, 3.0],
        )
        .unwrap();
        // first and last cells share the value 3 across the wrap
        assert_eq!(f.num_cells(), 2);
        assert_eq!(f.eval(6.0), Complex64::new(3.0, 0.0));
        assert_eq!(f.eval(1.5), Complex64::new(5.0, 0.0));
        let m: f64 = f.cells().map(|c| c.measure()).sum();
        assert!((m - TORUS).abs() < 1e-12);
    }

    #[test]
    fn rearrangement_is_sorted_and_equimeasurable() {
        let f = StepFunction::real(
            Domain::RealLine,
            vec![-1.0, 0.0, 2.0, 5.0],
            vec![-3.0, 1.0, 2.0],
        )
        .unwrap();
        let fs = f.decreasing_rearrangement();
        assert_eq!(fs.domain(), Domain::HalfLine);
        let vals: Vec<f64> = fs.values().iter().map(|v| v.re).collect();
        assert_eq!(vals, vec![3.0, 2.0, 1.0]);
        assert_eq!(fs.breakpoints(), &[0.0, 1.0, 4.0, 6.0]);
        for p in [1.0, 2.0, 3.0] {
            let a = f.integrate_abs_pow(p);
            let b = fs.integrate_abs_pow(p);
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn distribution_counts_level_sets() {
        let f = StepFunction::real(Domain::RealLine, vec![0.0, 1.0, 3.0], vec![2.0, 1.0]).unwrap();
        assert_eq!(f.distribution(1.5), 1.0);
        assert_eq!(f.distribution(0.5), 3.0);
        assert_eq!(f.distribution(2.0), 0.0);
    }

    #[test]
    fn text_round_trip_is_exact() {
        let f = StepFunction::new(
            Domain::Torus,
            vec![0.1, 1.0 / 3.0, 5.0],
            vec![
                Complex64::new(0.1 + 0.2, -1.0),
                Complex64::new(f64::MIN_POSITIVE, 0.0),
                Complex64::new(1e300, 1.0 / 7.0),
            ],
        )
        .unwrap();
        let g = StepFunction::from_text(&f.to_text()).unwrap();
        assert_eq!(f, g);
        let z = StepFunction::zero(Domain::RealLine);
        assert_eq!(StepFunction::from_text(&z.to_text()).unwrap(), z);
    }

    #[test]
    fn halfline_indicator_eval() {
        let f = chi01(Domain::HalfLine);
        assert_eq!(f.eval(0.5).re, 1.0);
        assert_eq!(f.eval(1.0).re, 0.0);
        assert_eq!(f.eval(-0.5).re, 0.0);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(StepFunction::real(Domain::RealLine, vec![0.0, 0.0], vec![1.0]).is_err());
        assert!(StepFunction::real(Domain::Torus, vec![0.0, 7.0], vec![1.0, 2.0]).is_err());
        assert!(StepFunction::real(Domain::HalfLine, vec![-1.0, 1.0], vec![1.0]).is_err());
        assert!(StepFunction::real(Domain::Integers, vec![0.5, 1.5], vec![1.0]).is_err());
        assert!(StepFunction::real(Domain::RealLine, vec![0.0, f64::NAN], vec![1.0]).is_err());
    }

    #[test]
    fn clamp_and_excess_partition() {
        let f = StepFunction::real(Domain::RealLine, vec![0.0, 1.0, 2.0], vec![3.0, -1.0]).unwrap();
        let lo = f.clamp_modulus(2.0);
        let hi = f.excess_over(2.0);
        let sum = lo.add(&hi).unwrap();
        assert_eq!(sum, f);
        assert_eq!(lo.sup_norm(), 2.0);
        assert_eq!(hi.norm_lp(1.0), 1.0);
    }
}
