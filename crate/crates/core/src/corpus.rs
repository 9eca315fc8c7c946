//! Seeded corpora of step functions for the verification suites.
//!
//! Corpora mix a fixed library of structured shapes (indicators, staircases,
//! lacunary spikes, thin tall bumps) with seeded random step functions. All
//! randomness flows through a counter-mode generator keyed by the caller's
//! seed, so a corpus is a pure function of (domain, size, seed).

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::domain::{Domain, TORUS};
use crate::step::StepFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ValueKind {
    Nonnegative,
    Signed,
    Complex,
}

const KINDS: [ValueKind; 3] = [ValueKind::Nonnegative, ValueKind::Signed, ValueKind::Complex];

fn random_value(rng: &mut ChaCha8Rng, kind: ValueKind) -> Complex64 {
    // Log-uniform magnitudes over ~2 decades keep norms well-conditioned
    // while still exercising scale spread.
    let mag = 10f64.powf(rng.random_range(-1.0..1.0));
    match kind {
        ValueKind::Nonnegative => Complex64::new(mag, 0.0),
        ValueKind::Signed => {
            let s = if rng.random::<bool>() { 1.0 } else { -1.0 };
            Complex64::new(s * mag, 0.0)
        }
        ValueKind::Complex => {
            let phase = rng.random_range(0.0..std::f64::consts::TAU);
            Complex64::from_polar(mag, phase)
        }
    }
}

fn sorted_distinct(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64, min_gap: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = (0..n).map(|_| rng.random_range(lo..hi)).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<f64> = Vec::with_capacity(n);
    for p in pts {
        if out.last().map(|&q| p - q >= min_gap).unwrap_or(true) {
            out.push(p);
        }
    }
    out
}

fn random_step(domain: Domain, rng: &mut ChaCha8Rng, kind: ValueKind) -> StepFunction {
    loop {
        let f = match domain {
            Domain::RealLine | Domain::HalfLine => {
                let cells = rng.random_range(1..=6usize);
                let (lo, hi) = if domain == Domain::RealLine { (-4.0, 4.0) } else { (0.0, 6.0) };
                let bps = sorted_distinct(rng, cells + 1, lo, hi, 1e-3);
                if bps.len() < 2 {
                    continue;
                }
                let vals = (0..bps.len() - 1).map(|_| random_value(rng, kind)).collect();
                StepFunction::new(domain, bps, vals)
            }
            Domain::Torus => {
                let cells = rng.random_range(1..=6usize);
                let bps = sorted_distinct(rng, cells, 0.0, TORUS, 1e-3);
                if bps.is_empty() {
                    continue;
                }
                let vals = (0..bps.len()).map(|_| random_value(rng, kind)).collect();
                StepFunction::new(domain, bps, vals)
            }
            Domain::Integers => {
                let runs = rng.random_range(1..=4usize);
                let mut bps = Vec::with_capacity(runs + 1);
                let mut x = rng.random_range(-6i64..0) as f64;
                bps.push(x);
                for _ in 0..runs {
                    x += rng.random_range(1..=3i64) as f64;
                    bps.push(x);
                }
                let vals = (0..runs).map(|_| random_value(rng, kind)).collect();
                StepFunction::new(domain, bps, vals)
            }
        };
        match f {
            Ok(f) if !f.is_zero() => return f,
            _ => continue,
        }
    }
}

/// `n` seeded step functions on `domain`, value kinds rotating
/// nonnegative / signed / complex.
pub fn seeded_functions(domain: Domain, n: usize, seed: u64) -> Vec<StepFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|i| random_step(domain, &mut rng, KINDS[i % 3])).collect()
}

/// `n` seeded pairs on `domain`; both elements of a pair share a kind.
pub fn seeded_pairs(domain: Domain, n: usize, seed: u64) -> Vec<(StepFunction, StepFunction)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let k = KINDS[i % 3];
            (random_step(domain, &mut rng, k), random_step(domain, &mut rng, k))
        })
        .collect()
}

/// Fixed structured shapes on `domain`; deterministic, no seed.
pub fn library(domain: Domain) -> Vec<StepFunction> {
    let mut out = Vec::new();
    let unit = |a: f64, b: f64| StepFunction::indicator(domain, a, b).unwrap();
    match domain {
        Domain::RealLine | Domain::HalfLine => {
            out.push(unit(0.0, 1.0));
            out.push(unit(0.0, 1e-3).scale(Complex64::new(1e3, 0.0)));
            // Decreasing staircase.
            out.push(
                StepFunction::real(domain, vec![0.0, 0.5, 1.0, 2.0, 4.0], vec![4.0, 2.0, 1.0, 0.5])
                    .unwrap(),
            );
            // Two separated levels.
            out.push(
                StepFunction::real(domain, vec![0.0, 1.0, 2.0, 3.0], vec![1.0, 0.0, 2.0]).unwrap(),
            );
            // Lacunary spikes: width 4^-k, height 2^k.
            let mut bps = vec![0.0];
            let mut vals = Vec::new();
            let mut x = 0.0;
            for k in 0..5 {
                let w = 0.25f64.powi(k);
                vals.push(2f64.powi(k));
                x += w;
                bps.push(x);
                x += w; // gap
                bps.push(x);
                vals.push(0.0);
            }
            bps.pop();
            vals.pop();
            out.push(StepFunction::real(domain, bps, vals).unwrap());
        }
        Domain::Torus => {
            let full = TORUS;
            out.push(unit(0.0, full)); // constant 1
            out.push(unit(0.0, 1.0));
            out.push(unit(0.0, 1e-3).scale(Complex64::new(1e3, 0.0)));
            out.push(
                StepFunction::real(
                    domain,
                    vec![0.0, 1.0, 2.0, 4.0],
                    vec![3.0, 1.0, 0.25, 0.0],
                )
                .unwrap(),
            );
            // Antipodal double bump.
            out.push(
                StepFunction::real(
                    domain,
                    vec![0.0, 0.5, 3.0, 3.5],
                    vec![2.0, 0.0, 2.0, 0.0],
                )
                .unwrap(),
            );
        }
        Domain::Integers => {
            out.push(unit(0.0, 1.0));
            out.push(unit(-2.0, 3.0));
            out.push(
                StepFunction::real(domain, vec![0.0, 1.0, 2.0, 4.0], vec![3.0, 1.0, 0.5]).unwrap(),
            );
        }
    }
    out
}

/// Pairs close to the extremizers of the convolution inequalities:
/// matched indicators and their staircase smoothings.
pub fn near_extremal_pairs(domain: Domain) -> Vec<(StepFunction, StepFunction)> {
    let unit = |a: f64, b: f64| StepFunction::indicator(domain, a, b).unwrap();
    if domain == Domain::Integers {
        let tent =
            StepFunction::real(domain, vec![0.0, 1.0, 2.0, 4.0], vec![0.5, 1.0, 0.5]).unwrap();
        return vec![
            (unit(0.0, 1.0), unit(0.0, 1.0)),
            (unit(0.0, 3.0), unit(0.0, 3.0)),
            (tent.clone(), tent),
        ];
    }
    let mut out = vec![
        (unit(0.0, 1.0), unit(0.0, 1.0)),
        (unit(0.0, 0.25), unit(0.0, 0.25)),
        (unit(0.0, 2.0), unit(0.0, 2.0)),
    ];
    // Tent-like staircase pair: still nearly extremal, not an exact indicator.
    let mut values = vec![0.5, 1.0, 0.5];
    if domain == Domain::Torus {
        // cyclic layout carries one value per breakpoint
        values.push(0.0);
    }
    let tent = StepFunction::real(domain, vec![0.0, 0.25, 0.75, 1.0], values).unwrap();
    out.push((tent.clone(), tent));
    out
}

/// Default suite corpus: near-extremal pairs, library cross pairs, then
/// seeded random pairs, truncated or padded to exactly `n` pairs.
pub fn default_pair_corpus(
    domain: Domain,
    n: usize,
    seed: u64,
) -> Vec<(StepFunction, StepFunction)> {
    let mut out = near_extremal_pairs(domain);
    let lib = library(domain);
    for i in 0..lib.len() {
        out.push((lib[i].clone(), lib[(i + 1) % lib.len()].clone()));
    }
    out.truncate(n);
    if out.len() < n {
        out.extend(seeded_pairs(domain, n - out.len(), seed));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_corpora_are_reproducible() {
        for domain in [Domain::RealLine, Domain::HalfLine, Domain::Torus, Domain::Integers] {
            let a = seeded_functions(domain, 20, 7);
            let b = seeded_functions(domain, 20, 7);
            assert_eq!(a.len(), 20);
            for (x, y) in a.iter().zip(&b) {
                assert_eq!(x.to_text(), y.to_text());
            }
            let c = seeded_functions(domain, 20, 8);
            assert!(a.iter().zip(&c).any(|(x, y)| x.to_text() != y.to_text()));
        }
    }

    #[test]
    fn corpus_members_are_valid_and_nonzero() {
        for domain in [Domain::RealLine, Domain::Torus, Domain::Integers] {
            for f in seeded_functions(domain, 60, 3) {
                assert_eq!(f.domain(), domain);
                assert!(!f.is_zero());
                // Round trip through text proves validity.
                let back = StepFunction::from_text(&f.to_text()).unwrap();
                assert_eq!(back.breakpoints(), f.breakpoints());
            }
        }
    }

    #[test]
    fn kind_rotation_produces_all_three() {
        let fs = seeded_functions(Domain::RealLine, 9, 1);
        let nonneg = |f: &StepFunction| f.values().iter().all(|v| v.im == 0.0 && v.re >= 0.0);
        let has_neg = |f: &StepFunction| f.values().iter().any(|v| v.im == 0.0 && v.re < 0.0);
        let has_im = |f: &StepFunction| f.values().iter().any(|v| v.im != 0.0);
        assert!(fs.iter().any(nonneg));
        assert!(fs.iter().any(has_neg));
        assert!(fs.iter().any(has_im));
    }

    #[test]
    fn default_corpus_has_exact_size_and_leads_with_extremals() {
        let pairs = default_pair_corpus(Domain::RealLine, 30, 5);
        assert_eq!(pairs.len(), 30);
        // First pair is the matched unit indicator pair.
        let chi = StepFunction::indicator(Domain::RealLine, 0.0, 1.0).unwrap();
        assert_eq!(pairs[0].0.to_text(), chi.to_text());
        assert_eq!(pairs[0].1.to_text(), chi.to_text());
        let tiny = default_pair_corpus(Domain::RealLine, 2, 5);
        assert_eq!(tiny.len(), 2);
    }

    #[test]
    fn library_members_live_on_their_domain() {
        for domain in [Domain::RealLine, Domain::HalfLine, Domain::Torus, Domain::Integers] {
            let lib = library(domain);
            assert!(!lib.is_empty());
            for f in lib {
                assert_eq!(f.domain(), domain);
                assert!(!f.is_zero());
            }
        }
    }
}
