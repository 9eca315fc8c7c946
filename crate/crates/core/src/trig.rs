//! Trigonometric polynomials on the torus and finite bilinear multiplier
//! symbols.
//!
//! Convention, fixed once: analysis c(k) = (1/2π)∫₀^{2π} f(θ)e^{-ikθ}dθ,
//! synthesis f(θ) = Σ c(k)e^{ikθ}. Uniform n-point quadrature is exact for
//! trig polynomials of degree < n, so even-exponent Lebesgue norms are
//! exact once the grid outruns the degree.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{Domain, TORUS};
use crate::error::{Error, Result};
use crate::step::StepFunction;

/// Finitely supported Fourier series: coefficients c(k) for |k| ≤ degree.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    degree: usize,
    /// index k + degree
    coeffs: Vec<Complex64>,
}

impl TrigPolynomial {
    pub fn zero(degree: usize) -> Self {
        TrigPolynomial { degree, coeffs: vec![Complex64::ZERO; 2 * degree + 1] }
    }

    pub fn from_coeffs(degree: usize, pairs: &[(i64, Complex64)]) -> Result<Self> {
        let mut p = TrigPolynomial::zero(degree);
        for &(k, c) in pairs {
            p.set_coeff(k, c)?;
        }
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        if k.unsigned_abs() as usize > self.degree {
            Complex64::ZERO
        } else {
            self.coeffs[(k + self.degree as i64) as usize]
        }
    }

    pub fn set_coeff(&mut self, k: i64, c: Complex64) -> Result<()> {
        if k.unsigned_abs() as usize > self.degree {
            return Err(Error::InvalidParameter(format!(
                "coefficient index {k} outside degree {}",
                self.degree
            )));
        }
        self.coeffs[(k + self.degree as i64) as usize] = c;
        Ok(())
    }

    /// (k, c(k)) over the stored support, ascending in k.
    pub fn coeffs(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let d = self.degree as i64;
        self.coeffs.iter().enumerate().map(move |(i, &c)| (i as i64 - d, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm_sqr() == 0.0)
    }

    /// Exact restriction (or zero-padded extension) to the given degree.
    pub fn truncated(&self, degree: usize) -> Self {
        let mut out = TrigPolynomial::zero(degree);
        for (k, c) in self.coeffs() {
            if k.unsigned_abs() as usize <= degree {
                out.set_coeff(k, c).expect("in range");
            }
        }
        out
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        // iterate e^{ikθ} from k = -d upward by one multiplication each
        let d = self.degree as f64;
        let root = Complex64::from_polar(1.0, theta);
        let mut ch = Complex64::from_polar(1.0, -d * theta);
        let mut acc = Complex64::ZERO;
        for &c in &self.coeffs {
            acc += c * ch;
            ch *= root;
        }
        acc
    }

    pub fn add(&self, other: &TrigPolynomial) -> TrigPolynomial {
        let mut out = TrigPolynomial::zero(self.degree.max(other.degree));
        for (k, c) in self.coeffs().chain(other.coeffs()) {
            let cur = out.coeff(k);
            out.set_coeff(k, cur + c).expect("in range");
        }
        out
    }

    pub fn scale(&self, z: Complex64) -> TrigPolynomial {
        TrigPolynomial {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * z).collect(),
        }
    }

    /// Values at θ_j = 2πj/n.
    pub fn grid_values(&self, n: usize) -> Vec<Complex64> {
        (0..n).map(|j| self.eval(TORUS * j as f64 / n as f64)).collect()
    }

    /// ‖f‖₂ by the coefficient identity; exact up to rounding.
    pub fn norm_l2(&self) -> f64 {
        let s: f64 = self.coeffs.iter().map(|c| c.norm_sqr()).sum();
        (TORUS * s).sqrt()
    }

    /// L^p norm by uniform quadrature. Exact for even integer p with the
    /// grid chosen below; other p and the sup norm sample densely and land
    /// on the safe (lower) side.
    pub fn norm_lp(&self, p: f64) -> f64 {
        let d = self.degree.max(1);
        if p.is_infinite() {
            let n = 4096.max(64 * (d + 1));
            return self
                .grid_values(n)
                .iter()
                .map(|v| v.norm())
                .fold(0.0, f64::max);
        }
        let even = p.fract() == 0.0 && (p as u64) % 2 == 0 && p <= 32.0;
        let n = if even { (p as usize) * d + 8 } else { 1024.max(16 * (d + 1)) };
        let mean: f64 =
            self.grid_values(n).iter().map(|v| v.norm().powf(p)).sum::<f64>() / n as f64;
        (TORUS * mean).powf(1.0 / p)
    }

    /// Midpoint sampling onto an n-cell torus step function.
    pub fn to_step(&self, n: usize) -> StepFunction {
        let breakpoints: Vec<f64> = (0..n).map(|j| TORUS * j as f64 / n as f64).collect();
        let values: Vec<Complex64> =
            (0..n).map(|j| self.eval(TORUS * (j as f64 + 0.5) / n as f64)).collect();
        StepFunction::new(Domain::Torus, breakpoints, values).expect("uniform torus mesh")
    }
}

/// Analysis coefficients of a torus step function, by closed-form per-cell
/// character integrals. No quadrature error.
pub fn fourier_coeffs(f: &StepFunction, degree: usize) -> Result<TrigPolynomial> {
    if f.domain() != Domain::Torus {
        return Err(Error::DomainMismatch { expected: Domain::Torus, got: f.domain() });
    }
    let mut out = TrigPolynomial::zero(degree);
    for cell in f.cells() {
        let (a, b, v) = (cell.start, cell.end, cell.value);
        if v.norm_sqr() == 0.0 || b <= a {
            continue;
        }
        for k in -(degree as i64)..=(degree as i64) {
            let add = if k == 0 {
                v * ((b - a) / TORUS)
            } else {
                let kf = k as f64;
                let ea = Complex64::from_polar(1.0, -kf * a);
                let eb = Complex64::from_polar(1.0, -kf * b);
                v * (ea - eb) / Complex64::new(0.0, kf * TORUS)
            };
            let cur = out.coeff(k);
            out.set_coeff(k, cur + add).expect("in range");
        }
    }
    Ok(out)
}

/// Finite bilinear symbol: entries m(k, k') for |k|, |k'| ≤ degree.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierSymbol {
    degree: usize,
    /// row-major, row index k + degree, column index k' + degree
    entries: Vec<Complex64>,
}

impl MultiplierSymbol {
    pub fn zero(degree: usize) -> Self {
        let w = 2 * degree + 1;
        MultiplierSymbol { degree, entries: vec![Complex64::ZERO; w * w] }
    }

    pub fn constant(degree: usize, z: Complex64) -> Self {
        let w = 2 * degree + 1;
        MultiplierSymbol { degree, entries: vec![z; w * w] }
    }

    pub fn from_fn(degree: usize, mut f: impl FnMut(i64, i64) -> Complex64) -> Self {
        let mut m = MultiplierSymbol::zero(degree);
        let d = degree as i64;
        for k in -d..=d {
            for kp in -d..=d {
                m.set(k, kp, f(k, kp)).expect("in range");
            }
        }
        m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn index(&self, k: i64, kp: i64) -> Option<usize> {
        let d = self.degree as i64;
        if k.abs() > d || kp.abs() > d {
            return None;
        }
        let w = 2 * self.degree + 1;
        Some((k + d) as usize * w + (kp + d) as usize)
    }

    pub fn get(&self, k: i64, kp: i64) -> Complex64 {
        self.index(k, kp).map_or(Complex64::ZERO, |i| self.entries[i])
    }

    pub fn set(&mut self, k: i64, kp: i64, z: Complex64) -> Result<()> {
        match self.index(k, kp) {
            Some(i) => {
                self.entries[i] = z;
                Ok(())
            }
            None => Err(Error::InvalidParameter(format!(
                "symbol index ({k}, {kp}) outside degree {}",
                self.degree
            ))),
        }
    }

    /// ℓ^p norm of the entry array; p = ∞ is the max modulus.
    pub fn entry_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max);
        }
        self.entries.iter().map(|z| z.norm().powf(p)).sum::<f64>().powf(1.0 / p)
    }

    /// Zero-padded copy with larger support; the operator is unchanged.
    pub fn embedded(&self, degree: usize) -> MultiplierSymbol {
        assert!(degree >= self.degree, "embedding cannot shrink support");
        let mut out = MultiplierSymbol::zero(degree);
        let d = self.degree as i64;
        for k in -d..=d {
            for kp in -d..=d {
                out.set(k, kp, self.get(k, kp)).expect("in range");
            }
        }
        out
    }

    /// Parses `k,k',re,im` rows. Blank lines and `#` comments are skipped,
    /// as is a literal header row.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut triples: Vec<(i64, i64, Complex64)> = Vec::new();
        let mut max_abs: i64 = 0;
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with('k') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(Error::Config {
                    line: ln + 1,
                    col: 1,
                    msg: format!("expected 4 fields, found {}", fields.len()),
                });
            }
            let parse_int = |col: usize| -> Result<i64> {
                fields[col].parse().map_err(|_| Error::Config {
                    line: ln + 1,
                    col: col + 1,
                    msg: format!("bad integer {:?}", fields[col]),
                })
            };
            let parse_float = |col: usize| -> Result<f64> {
                fields[col].parse().map_err(|_| Error::Config {
                    line: ln + 1,
                    col: col + 1,
                    msg: format!("bad number {:?}", fields[col]),
                })
            };
            let (k, kp) = (parse_int(0)?, parse_int(1)?);
            let z = Complex64::new(parse_float(2)?, parse_float(3)?);
            max_abs = max_abs.max(k.abs()).max(kp.abs());
            triples.push((k, kp, z));
        }
        let mut m = MultiplierSymbol::zero(max_abs as usize);
        for (k, kp, z) in triples {
            m.set(k, kp, z).expect("degree covers all rows");
        }
        Ok(m)
    }

    /// Nonzero entries as `k,k',re,im` rows, row-major order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,k',re,im\n");
        let d = self.degree as i64;
        for k in -d..=d {
            for kp in -d..=d {
                let z = self.get(k, kp);
                if z.norm_sqr() != 0.0 {
                    out.push_str(&format!("{k},{kp},{},{}\n", z.re, z.im));
                }
            }
        }
        out
    }
}

/// The coefficient-level bilinear action: output coefficient at n is
/// Σ_{k+k'=n} c_f(k) c_g(k') m(k,k'). Exact double sum; output degree is
/// the sum of the input degrees.
pub fn apply_pm(
    m: &MultiplierSymbol,
    f: &TrigPolynomial,
    g: &TrigPolynomial,
) -> Result<TrigPolynomial> {
    if f.degree() > m.degree() || g.degree() > m.degree() {
        return Err(Error::InvalidParameter(format!(
            "input degrees ({}, {}) exceed symbol support {}",
            f.degree(),
            g.degree(),
            m.degree()
        )));
    }
    let mut out = TrigPolynomial::zero(f.degree() + g.degree());
    for (k, cf) in f.coeffs() {
        if cf.norm_sqr() == 0.0 {
            continue;
        }
        for (kp, cg) in g.coeffs() {
            if cg.norm_sqr() == 0.0 {
                continue;
            }
            let w = m.get(k, kp);
            if w.norm_sqr() == 0.0 {
                continue;
            }
            let cur = out.coeff(k + kp);
            out.set_coeff(k + kp, cur + cf * cg * w).expect("in range");
        }
    }
    Ok(out)
}

/// Outcome of the operator-norm search: a lower bound and the pair that
/// attains it.
#[derive(Debug, Clone)]
pub struct MultiplierEstimate {
    pub value: f64,
    pub f: TrigPolynomial,
    pub g: TrigPolynomial,
}

fn pm_ratio(
    m: &MultiplierSymbol,
    p: (f64, f64, f64),
    f: &TrigPolynomial,
    g: &TrigPolynomial,
) -> Result<f64> {
    let den = f.norm_lp(p.0) * g.norm_lp(p.1);
    if den <= 0.0 || !den.is_finite() {
        return Ok(0.0);
    }
    Ok(apply_pm(m, f, g)?.norm_lp(p.2) / den)
}

pub(crate) fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> TrigPolynomial {
    let decay: f64 = [0.0, 0.5, 1.0][rng.random_range(0..3)];
    let mut p = TrigPolynomial::zero(degree);
    for k in -(degree as i64)..=(degree as i64) {
        let scale = (1.0 + k.abs() as f64).powf(-decay);
        let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        p.set_coeff(k, c * scale).expect("in range");
    }
    p
}

/// Lower-bound estimate of ‖P_m‖ for L^{p₁} × L^{p₂} → L^{p₃}: seeded
/// random polynomials, symbol-matched warm starts, then coefficient ascent.
pub fn estimate_multiplier_norm(
    m: &MultiplierSymbol,
    p1: f64,
    p2: f64,
    p3: f64,
    budget: usize,
    seed: u64,
) -> Result<MultiplierEstimate> {
    if budget == 0 {
        return Err(Error::EmptyBudget);
    }
    let d = m.degree();
    let di = d as i64;
    let p = (p1, p2, p3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d75_6c74);

    let mut candidates: Vec<(TrigPolynomial, TrigPolynomial)> = Vec::new();
    let ones = TrigPolynomial::from_coeffs(
        d,
        &(-di..=di).map(|k| (k, Complex64::ONE)).collect::<Vec<_>>(),
    )?;
    candidates.push((ones.clone(), ones));
    let center = TrigPolynomial::from_coeffs(d, &[(0, Complex64::ONE)])?;
    candidates.push((center.clone(), center));
    // symbol-matched pair: conjugate the dominant column and row so all
    // contributions align in phase at θ = 0
    let col_mass = |kp: i64| (-di..=di).map(|k| m.get(k, kp).norm_sqr()).sum::<f64>();
    let row_mass = |k: i64| (-di..=di).map(|kp| m.get(k, kp).norm_sqr()).sum::<f64>();
    let best_col = (-di..=di).max_by(|a, b| col_mass(*a).total_cmp(&col_mass(*b))).unwrap_or(0);
    let best_row = (-di..=di).max_by(|a, b| row_mass(*a).total_cmp(&row_mass(*b))).unwrap_or(0);
    let matched_f = TrigPolynomial::from_coeffs(
        d,
        &(-di..=di).map(|k| (k, m.get(k, best_col).conj())).collect::<Vec<_>>(),
    )?;
    let matched_g = TrigPolynomial::from_coeffs(
        d,
        &(-di..=di).map(|kp| (kp, m.get(best_row, kp).conj())).collect::<Vec<_>>(),
    )?;
    candidates.push((matched_f, matched_g));
    let n_random = budget.min(24);
    for _ in 0..n_random {
        candidates.push((random_poly(&mut rng, d), random_poly(&mut rng, d)));
    }

    let mut best_val = 0.0f64;
    let mut best = candidates[0].clone();
    for (f, g) in candidates {
        let r = pm_ratio(m, p, &f, &g)?;
        if r > best_val {
            best_val = r;
            best = (f, g);
        }
    }

    let steps = budget.saturating_sub(n_random);
    for i in 0..steps {
        let delta = 0.5 * 0.99f64.powi(i as i32) + 1e-3;
        let (mut f, mut g) = best.clone();
        let target = if rng.random_range(0..2) == 0 { &mut f } else { &mut g };
        let k = rng.random_range(-di..=di);
        let nudge = Complex64::from_polar(delta, rng.random_range(0.0..TORUS));
        let cur = target.coeff(k);
        target.set_coeff(k, cur + nudge).expect("in range");
        let r = pm_ratio(m, p, &f, &g)?;
        if r > best_val {
            best_val = r;
            best = (f, g);
        }
    }
    Ok(MultiplierEstimate { value: best_val, f: best.0, g: best.1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seeded(degree: usize, seed: u64) -> TrigPolynomial {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_poly(&mut rng, degree)
    }

    #[test]
    fn constant_function_coefficients() {
        let one = StepFunction::real(Domain::Torus, vec![0.0, 3.0], vec![1.0, 1.0]).unwrap();
        let c = fourier_coeffs(&one, 5).unwrap();
        assert!((c.coeff(0) - Complex64::ONE).norm() < 1e-12);
        for k in 1..=5i64 {
            assert!(c.coeff(k).norm() < 1e-12, "k={k}");
            assert!(c.coeff(-k).norm() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn character_is_its_own_spectrum() {
        let f = TrigPolynomial::from_coeffs(4, &[(3, Complex64::ONE)]).unwrap();
        let t = f.truncated(6);
        assert!((t.coeff(3) - Complex64::ONE).norm() == 0.0);
        assert_eq!(t.coeffs().filter(|(_, c)| c.norm_sqr() != 0.0).count(), 1);
    }

    #[test]
    fn half_arc_mean_value() {
        let chi = StepFunction::indicator(Domain::Torus, 0.0, std::f64::consts::PI).unwrap();
        let c = fourier_coeffs(&chi, 3).unwrap();
        assert!((c.coeff(0).re - 0.5).abs() < 1e-15);
        assert!(c.coeff(0).im.abs() < 1e-15);
        // even nonzero frequencies vanish on a half arc
        assert!(c.coeff(2).norm() < 1e-15);
    }

    #[test]
    fn grid_round_trip_is_exact() {
        let f = seeded(8, 11);
        let n = 64;
        let vals = f.grid_values(n);
        for k in -8i64..=8 {
            let mut acc = Complex64::ZERO;
            for (j, v) in vals.iter().enumerate() {
                acc += v * Complex64::from_polar(1.0, -(k as f64) * TORUS * j as f64 / n as f64);
            }
            acc /= n as f64;
            assert!((acc - f.coeff(k)).norm() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn quadrature_matches_coefficient_l2() {
        let f = seeded(6, 12);
        assert!((f.norm_lp(2.0) - f.norm_l2()).abs() < 1e-10);
    }

    #[test]
    fn unit_symbol_is_pointwise_product() {
        let m = MultiplierSymbol::constant(4, Complex64::ONE);
        let f = seeded(4, 13);
        let g = seeded(3, 14);
        let h = apply_pm(&m, &f, &g).unwrap();
        for j in 0..29 {
            let x = 0.217 * j as f64;
            assert!((h.eval(x) - f.eval(x) * g.eval(x)).norm() < 1e-10);
        }
    }

    #[test]
    fn zero_and_point_mass_symbols() {
        let f = seeded(4, 15);
        let g = seeded(4, 16);
        let z = apply_pm(&MultiplierSymbol::zero(4), &f, &g).unwrap();
        assert!(z.is_zero());
        let mut point = MultiplierSymbol::zero(4);
        point.set(0, 0, Complex64::ONE).unwrap();
        let h = apply_pm(&point, &f, &g).unwrap();
        let want = f.coeff(0) * g.coeff(0);
        assert!((h.eval(1.3) - want).norm() < 1e-12);
        assert!((h.coeff(0) - want).norm() == 0.0);
    }

    #[test]
    fn degree_overflow_is_rejected() {
        let m = MultiplierSymbol::zero(2);
        let f = seeded(4, 17);
        assert!(matches!(apply_pm(&m, &f, &f), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn holder_case_stays_below_one() {
        let m = MultiplierSymbol::constant(4, Complex64::ONE);
        let est = estimate_multiplier_norm(&m, 8.0, 8.0, 4.0, 60, 7).unwrap();
        assert!(est.value <= 1.0 + 1e-6, "value {}", est.value);
        assert!(est.value > 0.5);
    }

    #[test]
    fn rank_one_estimate_hits_closed_form() {
        let a: Vec<Complex64> = (0..7)
            .map(|i| Complex64::from_polar(1.0 / (1 + i) as f64, 0.7 * i as f64))
            .collect();
        let b: Vec<Complex64> =
            (0..7).map(|i| Complex64::from_polar(0.3 + 0.1 * i as f64, -0.4 * i as f64)).collect();
        let m = MultiplierSymbol::from_fn(3, |k, kp| {
            a[(k + 3) as usize] * b[(kp + 3) as usize]
        });
        let na: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let nb: f64 = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let analytic = na * nb / TORUS;
        let est =
            estimate_multiplier_norm(&m, 2.0, 2.0, f64::INFINITY, 40, 9).unwrap();
        assert!(est.value >= 0.9 * analytic, "est {} analytic {analytic}", est.value);
        assert!(est.value <= analytic * (1.0 + 1e-9));
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let mut m = MultiplierSymbol::zero(2);
        m.set(-2, 1, Complex64::new(0.5, -1.5)).unwrap();
        m.set(0, 0, Complex64::new(2.0, 0.0)).unwrap();
        let text = m.to_csv();
        let back = MultiplierSymbol::from_csv(&text).unwrap();
        assert_eq!(back, m);
        let bad = "0,0,1.0\n";
        match MultiplierSymbol::from_csv(bad) {
            Err(Error::Config { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn step_projection_tracks_values() {
        let f = seeded(5, 18);
        let s = f.to_step(512);
        let cont = f.eval(1.0);
        let step = s.eval(1.0);
        assert!((cont - step).norm() < 0.05 * (1.0 + cont.norm()));
    }
}
