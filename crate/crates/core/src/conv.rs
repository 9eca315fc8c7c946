//! Exact convolution of step functions.
//!
//! On the line the convolution of two step functions is continuous and
//! piecewise linear with breakpoints at all pairwise sums of the input
//! breakpoints; node values come from the exact antiderivative of one
//! factor. Torus convolution lifts both factors to the line, convolves
//! there and wraps the result. Integer convolution is the exact discrete
//! sum. The half-line carries no translation structure, so convolution is
//! rejected there.

use crate::domain::{Domain, TORUS};
use crate::error::{Error, Result};
use crate::pwl::PiecewiseLinear;
use crate::step::StepFunction;
use num_complex::Complex64;

/// Convolution output: continuous domains give piecewise-linear functions,
/// the integers give a step function again.
#[derive(Debug, Clone)]
pub enum Convolution {
    Continuous(PiecewiseLinear),
    Discrete(StepFunction),
}

impl Convolution {
    pub fn norm_lp(&self, p: f64) -> f64 {
        match self {
            Convolution::Continuous(h) => h.norm_lp(p),
            Convolution::Discrete(h) => h.norm_lp(p),
        }
    }

    pub fn sup_abs(&self) -> f64 {
        match self {
            Convolution::Continuous(h) => h.sup_abs(),
            Convolution::Discrete(h) => h.sup_norm(),
        }
    }

    /// Step-function surrogate: exact cell averages for the continuous case
    /// (norm-contracting), the identity for the discrete case.
    pub fn to_step(&self, refine: usize) -> Result<StepFunction> {
        match self {
            Convolution::Continuous(h) => h.to_step(refine),
            Convolution::Discrete(h) => Ok(h.clone()),
        }
    }

    pub fn as_continuous(&self) -> Option<&PiecewiseLinear> {
        match self {
            Convolution::Continuous(h) => Some(h),
            Convolution::Discrete(_) => None,
        }
    }
}

/// Exact antiderivative F(t) = ∫_{-∞}^t f of a line-lifted step function.
struct Antiderivative {
    points: Vec<f64>,
    cums: Vec<Complex64>,
    values: Vec<Complex64>,
}

impl Antiderivative {
    fn new(cells: &[(f64, f64, Complex64)]) -> Self {
        let mut points = Vec::with_capacity(cells.len() + 1);
        let mut values = Vec::with_capacity(cells.len());
        for &(a, b, v) in cells {
            points.push(a);
            values.push(v);
            debug_assert!(b > a);
        }
        if let Some(&(_, b, _)) = cells.last() {
            points.push(b);
        }
        let mut cums = Vec::with_capacity(points.len());
        let mut acc = Complex64::ZERO;
        cums.push(acc);
        for (i, v) in values.iter().enumerate() {
            acc += *v * (points[i + 1] - points[i]);
            cums.push(acc);
        }
        Antiderivative { points, cums, values }
    }

    fn eval(&self, t: f64) -> Complex64 {
        if self.points.is_empty() || t <= self.points[0] {
            return Complex64::ZERO;
        }
        if t >= *self.points.last().unwrap() {
            return *self.cums.last().unwrap();
        }
        let i = self.points.partition_point(|&p| p <= t) - 1;
        self.cums[i] + self.values[i] * (t - self.points[i])
    }
}

/// Contiguous line cells of a function, gaps filled with zero cells so the
/// antiderivative lookup stays a single binary search.
fn line_cells(f: &StepFunction) -> Vec<(f64, f64, Complex64)> {
    let mut cells: Vec<(f64, f64, Complex64)> = Vec::new();
    for c in f.cells() {
        if let Some(&(_, prev_end, _)) = cells.last() {
            if c.start > prev_end {
                cells.push((prev_end, c.start, Complex64::ZERO));
            }
        }
        cells.push((c.start, c.end, c.value));
    }
    cells
}

fn conv_value(fa: &Antiderivative, g_cells: &[(f64, f64, Complex64)], x: f64) -> Complex64 {
    // Σ_j g_j ( F(x - u_j) - F(x - u_{j+1}) )
    let mut acc = Complex64::ZERO;
    for &(u0, u1, gv) in g_cells {
        if gv == Complex64::ZERO {
            continue;
        }
        acc += gv * (fa.eval(x - u0) - fa.eval(x - u1));
    }
    acc
}

fn convolve_line_cells(
    f_cells: &[(f64, f64, Complex64)],
    g_cells: &[(f64, f64, Complex64)],
) -> (Vec<f64>, Vec<Complex64>) {
    let fa = Antiderivative::new(f_cells);
    let mut f_pts: Vec<f64> = f_cells.iter().map(|c| c.0).collect();
    f_pts.push(f_cells.last().unwrap().1);
    let mut g_pts: Vec<f64> = g_cells.iter().map(|c| c.0).collect();
    g_pts.push(g_cells.last().unwrap().1);

    let mut nodes: Vec<f64> = Vec::with_capacity(f_pts.len() * g_pts.len());
    for &s in &f_pts {
        for &u in &g_pts {
            nodes.push(s + u);
        }
    }
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    let values = nodes.iter().map(|&x| conv_value(&fa, g_cells, x)).collect();
    (nodes, values)
}

pub fn convolve(f: &StepFunction, g: &StepFunction) -> Result<Convolution> {
    if f.domain() != g.domain() {
        return Err(Error::DomainMismatch { expected: f.domain(), got: g.domain() });
    }
    match f.domain() {
        Domain::HalfLine => Err(Error::UnsupportedDomain(Domain::HalfLine)),
        Domain::RealLine => {
            if f.is_zero() || g.is_zero() {
                return Ok(Convolution::Continuous(PiecewiseLinear::zero(Domain::RealLine)));
            }
            let (nodes, values) = convolve_line_cells(&line_cells(f), &line_cells(g));
            Ok(Convolution::Continuous(PiecewiseLinear::from_nodes(
                Domain::RealLine,
                nodes,
                values,
            )?))
        }
        Domain::Torus => {
            if f.is_zero() || g.is_zero() {
                return Ok(Convolution::Continuous(PiecewiseLinear::zero(Domain::Torus)));
            }
            // lift to the line (torus cells are already contiguous over one
            // period), convolve there, then wrap by summing translates
            let fc: Vec<_> = f.cells().map(|c| (c.start, c.end, c.value)).collect();
            let gc: Vec<_> = g.cells().map(|c| (c.start, c.end, c.value)).collect();
            let (line_nodes, line_values) = convolve_line_cells(&fc, &gc);
            let lifted = PiecewiseLinear::from_nodes(Domain::RealLine, line_nodes, line_values)?;
            let lo = lifted.nodes()[0];
            let hi = *lifted.nodes().last().unwrap();
            let mut nodes: Vec<f64> = lifted.nodes().iter().map(|b| b.rem_euclid(TORUS)).collect();
            nodes.sort_by(f64::total_cmp);
            nodes.dedup();
            let values: Vec<Complex64> = nodes
                .iter()
                .map(|&theta| {
                    let mut acc = Complex64::ZERO;
                    let k_lo = ((lo - theta) / TORUS).floor() as i64;
                    let k_hi = ((hi - theta) / TORUS).ceil() as i64;
                    for k in k_lo..=k_hi {
                        acc += lifted.eval(theta + TORUS * k as f64);
                    }
                    acc
                })
                .collect();
            Ok(Convolution::Continuous(PiecewiseLinear::from_nodes(
                Domain::Torus,
                nodes,
                values,
            )?))
        }
        Domain::Integers => {
            if f.is_zero() || g.is_zero() {
                return Ok(Convolution::Discrete(StepFunction::zero(Domain::Integers)));
            }
            // re-expand merged runs into unit cells
            let expand = |h: &StepFunction| -> Vec<(i64, Complex64)> {
                h.cells()
                    .flat_map(|c| {
                        let (a, b) = (c.start as i64, c.end as i64);
                        (a..b).map(move |n| (n, c.value))
                    })
                    .collect()
            };
            let fc = expand(f);
            let gc = expand(g);
            let lo = fc[0].0 + gc[0].0;
            let hi = fc.last().unwrap().0 + gc.last().unwrap().0;
            let mut out = vec![Complex64::ZERO; (hi - lo + 1) as usize];
            for &(n, a) in &fc {
                if a == Complex64::ZERO {
                    continue;
                }
                for &(m, b) in &gc {
                    out[(n + m - lo) as usize] += a * b;
                }
            }
            let breakpoints = (lo..=hi + 1).map(|n| n as f64).collect();
            Ok(Convolution::Discrete(StepFunction::new(
                Domain::Integers,
                breakpoints,
                out,
            )?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(domain: Domain, a: f64, b: f64) -> StepFunction {
        StepFunction::indicator(domain, a, b).unwrap()
    }

    #[test]
    fn unit_box_self_convolution_is_tent() {
        let f = chi(Domain::RealLine, 0.0, 1.0);
        let h = convolve(&f, &f).unwrap();
        let h = h.as_continuous().unwrap();
        assert_eq!(h.nodes(), &[0.0, 1.0, 2.0]);
        assert!((h.eval(1.0).re - 1.0).abs() < 1e-15);
        assert!((h.eval(0.5).re - 0.5).abs() < 1e-15);
        assert!((h.norm_lp(1.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn translation_shifts_the_output() {
        let f = chi(Domain::RealLine, 2.0, 3.0);
        let g = chi(Domain::RealLine, -5.0, -4.0);
        let h = convolve(&f, &g).unwrap();
        let h = h.as_continuous().unwrap();
        assert_eq!(h.nodes(), &[-3.0, -2.0, -1.0]);
        assert!((h.eval(-2.0).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn matches_riemann_oracle_on_general_steps() {
        let f = StepFunction::real(
            Domain::RealLine,
            vec![-1.0, 0.5, 1.0, 2.5],
            vec![2.0, -1.0, 0.75],
        )
        .unwrap();
        let g = StepFunction::real(Domain::RealLine, vec![0.0, 0.25, 3.0], vec![1.5, -0.5]).unwrap();
        let h = convolve(&f, &g).unwrap();
        let h = h.as_continuous().unwrap();
        let n = 400_000;
        for x in [-0.7, 0.3, 1.1, 2.0, 3.9, 5.2] {
            // oracle: midpoint Riemann sum of ∫ f(x-y) g(y) dy over supp g
            let (a, b) = (0.0, 3.0);
            let mut acc = 0.0;
            for i in 0..n {
                let y = a + (b - a) * (i as f64 + 0.5) / n as f64;
                acc += f.eval(x - y).re * g.eval(y).re;
            }
            let oracle = acc * (b - a) / n as f64;
            assert!(
                (h.eval(x).re - oracle).abs() < 2e-4,
                "x={x}: got {}, oracle {oracle}",
                h.eval(x).re
            );
        }
    }

    #[test]
    fn integral_of_convolution_factorises() {
        let f = StepFunction::new(
            Domain::RealLine,
            vec![0.0, 1.0, 2.0],
            vec![Complex64::new(1.0, 1.0), Complex64::new(0.0, -2.0)],
        )
        .unwrap();
        let g = StepFunction::new(
            Domain::RealLine,
            vec![-1.0, 4.0],
            vec![Complex64::new(0.5, 0.25)],
        )
        .unwrap();
        let h = convolve(&f, &g).unwrap();
        let lhs = h.as_continuous().unwrap().integrate();
        let rhs = f.integrate() * g.integrate();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn torus_half_circle_tent() {
        use std::f64::consts::PI;
        let f = chi(Domain::Torus, 0.0, PI);
        let h = convolve(&f, &f).unwrap();
        let h = h.as_continuous().unwrap();
        assert!((h.eval(PI).re - PI).abs() < 1e-12);
        assert!((h.eval(0.5 * PI).re - 0.5 * PI).abs() < 1e-12);
        assert!(h.eval(0.0).re.abs() < 1e-12);
        assert!((h.integrate().re - PI * PI).abs() < 1e-10);
    }

    #[test]
    fn torus_constant_absorbs() {
        let f = StepFunction::real(Domain::Torus, vec![0.0], vec![2.0]).unwrap();
        let g = chi(Domain::Torus, 1.0, 2.5);
        let h = convolve(&f, &g).unwrap();
        let h = h.as_continuous().unwrap();
        // constant 2 convolved with χ of measure 1.5 gives constant 3
        for theta in [0.0, 1.0, 3.0, 5.0] {
            assert!((h.eval(theta).re - 3.0).abs() < 1e-12, "at {theta}: {}", h.eval(theta).re);
        }
    }

    #[test]
    fn integer_convolution_is_discrete() {
        let f = StepFunction::real(Domain::Integers, vec![0.0, 1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0])
            .unwrap();
        let g = StepFunction::real(Domain::Integers, vec![5.0, 6.0, 7.0], vec![1.0, 1.0]).unwrap();
        let h = convolve(&f, &g).unwrap();
        let h = match h {
            Convolution::Discrete(h) => h,
            _ => panic!("expected discrete output"),
        };
        let got: Vec<f64> = (5..9).map(|n| h.eval(n as f64).re).collect();
        assert_eq!(got, vec![1.0, 3.0, 5.0, 3.0]);
    }

    #[test]
    fn commutes() {
        let f = StepFunction::real(Domain::RealLine, vec![0.0, 1.0, 3.0], vec![1.0, -2.0]).unwrap();
        let g = StepFunction::real(Domain::RealLine, vec![-2.0, 0.5], vec![0.5]).unwrap();
        let a = convolve(&f, &g).unwrap();
        let b = convolve(&g, &f).unwrap();
        let (a, b) = (a.as_continuous().unwrap(), b.as_continuous().unwrap());
        for x in [-1.9, -0.3, 0.0, 1.4, 3.2] {
            assert!((a.eval(x) - b.eval(x)).norm() < 1e-12);
        }
    }

    #[test]
    fn half_line_is_rejected() {
        let f = chi(Domain::HalfLine, 0.0, 1.0);
        assert!(matches!(
            convolve(&f, &f),
            Err(Error::UnsupportedDomain(Domain::HalfLine))
        ));
    }
}
