//! Bilinear operator instances with declared endpoint bounds, and the two
//! interpolation suites that exercise them.
//!
//! Suites never quantify over abstract functors: the interpolated spaces
//! are always the computable weighted K-method instances, and the J-side
//! quantities are the telescoped clamp representations from `interp`.

use rayon::prelude::*;

use crate::conv::convolve;
use crate::corpus;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::interp::{
    j_functional, j_method_norm_upper, j_norm_of_representation, j_representation, k_method_norm,
    CoupleSpec, InterpParams, JRepresentation, OuterSpace,
};
use crate::report::{ReportBuilder, SuiteRun};
use crate::spaces::{associate_space, SpaceFamily, SpaceSpec};
use crate::step::StepFunction;
use crate::varying::{dilation_function, LogLogTable, ParamFunction, SlowlyVarying};

type Pair = (StepFunction, StepFunction);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BilinearKind {
    Convolution,
    PointwiseProduct,
}

impl std::fmt::Display for BilinearKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BilinearKind::Convolution => f.write_str("convolution"),
            BilinearKind::PointwiseProduct => f.write_str("pointwise-product"),
        }
    }
}

/// A concrete bilinear operator with declared endpoint bounds
/// ‖T(a,b)‖_{Cᵢ} ≤ kᵢ ‖a‖_{Aᵢ} ‖b‖_{Bᵢ}.
#[derive(Debug, Clone)]
pub struct BilinearOpSpec {
    pub kind: BilinearKind,
    pub couple_a: CoupleSpec,
    pub couple_b: CoupleSpec,
    pub couple_c: CoupleSpec,
    pub k0: f64,
    pub k1: f64,
}

impl BilinearOpSpec {
    /// Convolution on the torus with endpoint couples (L¹, L∞), (L¹, L¹),
    /// (L¹, L∞) and both endpoint constants 1.
    pub fn conv_torus_endpoints() -> Self {
        let d = Domain::Torus;
        BilinearOpSpec {
            kind: BilinearKind::Convolution,
            couple_a: CoupleSpec::l1_linf(d),
            couple_b: CoupleSpec::new(
                SpaceSpec::lebesgue(1.0, d),
                SpaceSpec::lebesgue(1.0, d),
            )
            .expect("degenerate couple"),
            couple_c: CoupleSpec::l1_linf(d),
            k0: 1.0,
            k1: 1.0,
        }
    }

    /// Pointwise product with every endpoint space L∞; scalar-bounded.
    pub fn product_sup() -> Self {
        let d = Domain::Torus;
        let sup = || SpaceSpec::lebesgue(f64::INFINITY, d);
        let c = || CoupleSpec::new(sup(), sup()).expect("degenerate couple");
        BilinearOpSpec {
            kind: BilinearKind::PointwiseProduct,
            couple_a: c(),
            couple_b: c(),
            couple_c: c(),
            k0: 1.0,
            k1: 1.0,
        }
    }

    pub fn domain(&self) -> Domain {
        self.couple_a.x0.domain
    }

    pub fn max_k(&self) -> f64 {
        self.k0.max(self.k1)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k0 > 0.0 && self.k1 > 0.0) {
            return Err(Error::InvalidParameter("endpoint constants must be positive".into()));
        }
        let d = self.domain();
        for c in [&self.couple_a, &self.couple_b, &self.couple_c] {
            if c.x0.domain != d {
                return Err(Error::DomainMismatch { expected: d, got: c.x0.domain });
            }
        }
        if self.kind == BilinearKind::Convolution && d == Domain::HalfLine {
            return Err(Error::UnsupportedDomain(d));
        }
        Ok(())
    }

    /// T(a, b) as a step function; convolution output is discretized by
    /// exact cell averaging on a refined mesh.
    pub fn apply(&self, a: &StepFunction, b: &StepFunction) -> Result<StepFunction> {
        match self.kind {
            BilinearKind::Convolution => convolve(a, b)?.to_step(4),
            BilinearKind::PointwiseProduct => a.mul(b),
        }
    }

    /// Measures the declared endpoint inequalities on a smoke corpus; any
    /// ratio above kᵢ(1 + 1e-6) refuses the instance.
    pub fn certify_endpoints(&self, smoke: &[Pair]) -> Result<()> {
        self.validate()?;
        for (a, b) in smoke {
            let image = self.apply(a, b)?;
            for (i, k) in [(0usize, self.k0), (1usize, self.k1)] {
                let (xa, xb, xc) = if i == 0 {
                    (&self.couple_a.x0, &self.couple_b.x0, &self.couple_c.x0)
                } else {
                    (&self.couple_a.x1, &self.couple_b.x1, &self.couple_c.x1)
                };
                let lhs = xc.norm(&image)?;
                let rhs = k * xa.norm(a)? * xb.norm(b)?;
                if lhs > rhs * (1.0 + 1e-6) {
                    return Err(Error::EndpointCertification(format!(
                        "endpoint {i}: {lhs:.6e} exceeds {k} x {:.6e}",
                        rhs / k
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Grid and slack knobs shared by both theorem suites.
#[derive(Debug, Clone, Copy)]
pub struct BilinearGrid {
    pub window: f64,
    pub step: f64,
    pub n_terms: usize,
    pub slack: f64,
}

impl Default for BilinearGrid {
    fn default() -> Self {
        BilinearGrid { window: 40.0, step: 0.05, n_terms: 4000, slack: 0.10 }
    }
}

/// Dilation majorant of a slowly varying weight, sampled into a table.
/// Constants majorize to 1 exactly.
fn majorant_weight(phi: &SlowlyVarying) -> Result<SlowlyVarying> {
    if matches!(phi, SlowlyVarying::Constant(_)) {
        return Ok(SlowlyVarying::one());
    }
    let pf = ParamFunction::from_sv(phi.clone());
    let mut pts = Vec::with_capacity(121);
    for k in -60..=60 {
        let t = (k as f64 * 0.75).exp();
        pts.push((t, dilation_function(&pf, t)?));
    }
    Ok(SlowlyVarying::Table(LogLogTable::new(&pts)?))
}

fn outer_exponent(e_space: &SpaceSpec) -> Result<f64> {
    match e_space.family {
        SpaceFamily::Lebesgue(q) => Ok(q),
        _ => Err(Error::Unsupported(
            "outer parameter space must be Lebesgue".into(),
        )),
    }
}

fn smoke_corpus(op: &BilinearOpSpec, corpus: &[Pair]) -> Vec<Pair> {
    let mut smoke = corpus::near_extremal_pairs(op.domain());
    smoke.extend(corpus.iter().take(4).cloned());
    smoke
}

struct OuterInstances {
    /// weighted K over (E, L∞) on the line, for the target side
    target: OuterSpace,
    /// weighted K over (L¹, E') on the line, for the second factor
    partner: OuterSpace,
    e_exponent: f64,
}

fn outer_instances(e_space: &SpaceSpec, theta: f64) -> Result<OuterInstances> {
    let q = outer_exponent(e_space)?;
    let line = Domain::RealLine;
    let e_line = SpaceSpec::lebesgue(q, line);
    let (dual, _) = associate_space(&e_line).expect("lebesgue dual");
    let target = OuterSpace::KMethodInstance {
        couple: Box::new(CoupleSpec::new(
            e_line.clone(),
            SpaceSpec::lebesgue(f64::INFINITY, line),
        )?),
        theta,
    };
    let partner = OuterSpace::KMethodInstance {
        couple: Box::new(CoupleSpec::new(SpaceSpec::lebesgue(1.0, line), dual)?),
        theta,
    };
    Ok(OuterInstances { target, partner, e_exponent: q })
}

/// First bilinear suite: K-norm of T(a,b) in the target against the
/// J-bound of a times the K-norm of b in the partner instance.
pub fn verify_thm35(
    op: &BilinearOpSpec,
    theta: f64,
    phi: &SlowlyVarying,
    e_space: &SpaceSpec,
    corpus: &[Pair],
    grid: &BilinearGrid,
    seed: u64,
) -> Result<SuiteRun> {
    op.certify_endpoints(&smoke_corpus(op, corpus))?;
    let outers = outer_instances(e_space, theta)?;
    let lhs_params =
        InterpParams::new(theta, phi.clone(), outers.target, grid.window, grid.step)?;
    let partner_params =
        InterpParams::new(theta, phi.clone(), outers.partner, grid.window, grid.step)?;
    let j_params = InterpParams::new(
        theta,
        majorant_weight(phi)?,
        OuterSpace::Lebesgue(outers.e_exponent),
        grid.window,
        grid.step,
    )?;

    let rows: Vec<(f64, f64)> = corpus
        .par_iter()
        .map(|(a, b)| -> Result<(f64, f64)> {
            let image = op.apply(a, b)?;
            let lhs =
                if image.is_zero() { 0.0 } else { k_method_norm(&op.couple_c, &lhs_params, &image)? };
            let j_a = j_method_norm_upper(&op.couple_a, &j_params, a, grid.n_terms)?;
            let k_b =
                if b.is_zero() { 0.0 } else { k_method_norm(&op.couple_b, &partner_params, b)? };
            Ok((lhs, j_a * k_b))
        })
        .collect::<Result<_>>()?;

    let mut builder = ReportBuilder::new("thm35", "thm 3.5")
        .claimed(op.max_k(), grid.slack * op.max_k(), false)
        .seed(seed);
    builder.config_kv("kind", op.kind);
    builder.config_kv("theta", theta);
    builder.config_kv("phi", phi);
    builder.config_kv("E", e_space);
    builder.config_kv("window", grid.window);
    builder.config_kv("step", grid.step);
    builder.config_kv("slack", grid.slack);
    builder.config_kv("pairs", corpus.len());
    for (row, (a, b)) in rows.iter().zip(corpus) {
        builder.push_case_with_inputs("bilinear-k", row.0, row.1, Some(a), Some(b));
    }
    builder.note("operator norm read as max of the two endpoint constants");
    builder.note("first factor is a representation upper bound: ratios are conservative");
    Ok(builder.finish())
}

/// Second bilinear suite: builds the product representation
/// w_n = Σ_{k+j=n} T(u_k, v_j) and compares its weighted J-density norm in
/// the target instance against the product of the input J-bounds.
pub fn verify_thm36(
    op: &BilinearOpSpec,
    theta: f64,
    phi: &SlowlyVarying,
    e_space: &SpaceSpec,
    corpus: &[Pair],
    grid: &BilinearGrid,
    seed: u64,
) -> Result<SuiteRun> {
    op.certify_endpoints(&smoke_corpus(op, corpus))?;
    let outers = outer_instances(e_space, theta)?;
    let m_phi_w = majorant_weight(phi)?;
    // a-side J parameters carry phi and the plain outer space; b-side carry
    // the majorant weight and the partner instance.
    let a_params = InterpParams::new(
        theta,
        phi.clone(),
        OuterSpace::Lebesgue(outers.e_exponent),
        grid.window,
        grid.step,
    )?;
    let b_params = InterpParams::new(theta, m_phi_w, outers.partner, grid.window, grid.step)?;
    let target_outer = outers.target;

    let rows: Vec<(f64, f64)> = corpus
        .par_iter()
        .map(|(a, b)| -> Result<(f64, f64)> {
            if a.is_zero() || b.is_zero() {
                return Ok((0.0, 0.0));
            }
            let rep_a = j_representation(&op.couple_a, &a_params, a, grid.n_terms)?;
            let rep_b = j_representation(&op.couple_b, &b_params, b, grid.n_terms)?;
            let lhs = product_density_norm(op, theta, phi, &target_outer, &rep_a, &rep_b)?;
            let rhs = j_norm_of_representation(&op.couple_a, &a_params, &rep_a)?
                * j_norm_of_representation(&op.couple_b, &b_params, &rep_b)?;
            Ok((lhs, rhs))
        })
        .collect::<Result<_>>()?;

    let mut builder = ReportBuilder::new("thm36", "thm 3.6")
        .claimed(op.max_k(), grid.slack * op.max_k(), false)
        .seed(seed);
    builder.config_kv("kind", op.kind);
    builder.config_kv("theta", theta);
    builder.config_kv("phi", phi);
    builder.config_kv("E", e_space);
    builder.config_kv("window", grid.window);
    builder.config_kv("step", grid.step);
    builder.config_kv("slack", grid.slack);
    builder.config_kv("pairs", corpus.len());
    for (row, (a, b)) in rows.iter().zip(corpus) {
        builder.push_case_with_inputs("bilinear-j", row.0, row.1, Some(a), Some(b));
    }
    builder.note("target norm evaluated on the constructive product representation");
    Ok(builder.finish())
}

/// Weighted target-instance norm of the J-density of the product
/// representation. Index arithmetic keeps the two grids aligned: part i of
/// a and part j of b contribute at output index i + j.
fn product_density_norm(
    op: &BilinearOpSpec,
    theta: f64,
    phi: &SlowlyVarying,
    target_outer: &OuterSpace,
    rep_a: &JRepresentation,
    rep_b: &JRepresentation,
) -> Result<f64> {
    let h = rep_a.h;
    if (rep_b.h - h).abs() > 1e-12 {
        return Err(Error::InvalidParameter("mismatched representation grids".into()));
    }
    let na = rep_a.parts.len();
    let nb = rep_b.parts.len();
    let y_lo = rep_a.t_lo + rep_b.t_lo;
    let mut pieces: Vec<Option<StepFunction>> = vec![None; na + nb - 1];
    for (i, (_, u)) in rep_a.parts.iter().enumerate() {
        if u.is_zero() {
            continue;
        }
        for (j, (_, v)) in rep_b.parts.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let w = op.apply(u, v)?;
            let slot = &mut pieces[i + j];
            *slot = Some(match slot.take() {
                Some(acc) => acc.add(&w)?,
                None => w,
            });
        }
    }
    let density: Vec<f64> = pieces
        .iter()
        .enumerate()
        .map(|(n, piece)| -> Result<f64> {
            let Some(w) = piece else { return Ok(0.0) };
            if w.is_zero() {
                return Ok(0.0);
            }
            let y = y_lo + h * n as f64;
            let j = j_functional(&op.couple_c, y.exp(), w)?;
            Ok((-theta * y).exp() * phi.eval(y.exp()) * j / h)
        })
        .collect::<Result<_>>()?;
    target_outer.norm_of_samples(y_lo, h, &density)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;

    fn torus_chi(a: f64, b: f64) -> StepFunction {
        StepFunction::indicator(Domain::Torus, a, b).unwrap()
    }

    fn tiny_grid() -> BilinearGrid {
        BilinearGrid { window: 20.0, step: 0.1, n_terms: 400, slack: 0.10 }
    }

    #[test]
    fn certification_accepts_true_endpoints() {
        let op = BilinearOpSpec::conv_torus_endpoints();
        let smoke = corpus::near_extremal_pairs(Domain::Torus);
        op.certify_endpoints(&smoke).unwrap();
        let prod = BilinearOpSpec::product_sup();
        prod.certify_endpoints(&smoke).unwrap();
    }

    #[test]
    fn certification_rejects_planted_constants() {
        let mut op = BilinearOpSpec::conv_torus_endpoints();
        op.k0 = 0.4;
        op.k1 = 0.4;
        let smoke = corpus::near_extremal_pairs(Domain::Torus);
        assert!(matches!(
            op.certify_endpoints(&smoke),
            Err(Error::EndpointCertification(_))
        ));
    }

    #[test]
    fn convolution_is_bilinear_pointwise() {
        let a1 = torus_chi(0.0, 1.0);
        let a2 = StepFunction::real(
            Domain::Torus,
            vec![0.0, 2.0, 3.0],
            vec![0.0, 2.0, 0.0],
        )
        .unwrap();
        let b = torus_chi(0.5, 2.5);
        let sum = a1.add(&a2).unwrap();
        let lhs = convolve(&sum, &b).unwrap();
        let r1 = convolve(&a1, &b).unwrap();
        let r2 = convolve(&a2, &b).unwrap();
        for k in 0..40 {
            let x = k as f64 * 0.157;
            let want = r1.as_continuous().unwrap().eval(x) + r2.as_continuous().unwrap().eval(x);
            let got = lhs.as_continuous().unwrap().eval(x);
            assert!((got - want).norm() < 1e-10, "x={x}");
        }
    }

    #[test]
    fn single_term_product_bound_is_tight() {
        // One-term representations: the product piece satisfies
        // J_C(s·t, T(u,v)) ≤ k · J_A(s,u) · J_B(t,v), with equality for
        // matched indicators on the torus.
        let op = BilinearOpSpec::conv_torus_endpoints();
        let u = torus_chi(0.0, 1.0);
        let v = torus_chi(0.0, 0.5);
        let w = op.apply(&u, &v).unwrap();
        for (s_log, t_log) in [(0.0f64, 0.0f64), (1.0, 0.0), (1.0, 1.0), (-1.0, 2.0)] {
            let lhs = j_functional(&op.couple_c, (s_log + t_log).exp(), &w).unwrap();
            let rhs = op.max_k()
                * j_functional(&op.couple_a, s_log.exp(), &u).unwrap()
                * j_functional(&op.couple_b, t_log.exp(), &v).unwrap();
            assert!(lhs <= rhs + 1e-12, "lhs {lhs} rhs {rhs}");
            // hand values: J_A = max(1, s), J_B = 0.5, J_C = 0.5 max(1, st)
            let hand = 0.5 * (1f64).max((s_log + t_log).exp());
            assert!((lhs - hand).abs() < 1e-9, "lhs {lhs} hand {hand}");
        }
    }

    #[test]
    fn thm35_conv_instance_passes() {
        let corpus = corpus::default_pair_corpus(Domain::Torus, 4, 21);
        let op = BilinearOpSpec::conv_torus_endpoints();
        let e = SpaceSpec::lebesgue(2.0, Domain::Torus);
        let run = verify_thm35(
            &op,
            0.5,
            &SlowlyVarying::one(),
            &e,
            &corpus,
            &tiny_grid(),
            3,
        )
        .unwrap();
        assert_ne!(run.verdict(), Verdict::Violated, "max {}", run.report.max_ratio);
        assert!(run.report.max_ratio > 0.0);
    }

    #[test]
    fn thm36_conv_instance_passes() {
        let corpus = corpus::default_pair_corpus(Domain::Torus, 3, 22);
        let op = BilinearOpSpec::conv_torus_endpoints();
        let e = SpaceSpec::lebesgue(2.0, Domain::Torus);
        let run = verify_thm36(
            &op,
            0.5,
            &SlowlyVarying::one(),
            &e,
            &corpus,
            &tiny_grid(),
            3,
        )
        .unwrap();
        assert_ne!(run.verdict(), Verdict::Violated, "max {}", run.report.max_ratio);
        assert!(run.report.max_ratio > 0.0);
    }

    #[test]
    fn product_instance_smoke() {
        let corpus = corpus::default_pair_corpus(Domain::Torus, 3, 23);
        let op = BilinearOpSpec::product_sup();
        let e = SpaceSpec::lebesgue(2.0, Domain::Torus);
        let run = verify_thm35(
            &op,
            0.5,
            &SlowlyVarying::one(),
            &e,
            &corpus,
            &tiny_grid(),
            3,
        )
        .unwrap();
        assert_ne!(run.verdict(), Verdict::Violated, "max {}", run.report.max_ratio);
    }

    #[test]
    fn majorant_of_constant_weight_is_one() {
        let w = majorant_weight(&SlowlyVarying::one()).unwrap();
        for t in [0.01, 1.0, 7.0, 1e6] {
            assert!((w.eval(t) - 1.0).abs() < 1e-12);
        }
    }
}
