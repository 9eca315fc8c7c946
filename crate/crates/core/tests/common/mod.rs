//! Shared oracles for the integration tests: independent reimplementations
//! kept deliberately naive so the library is checked against first
//! principles, not against itself.

#![allow(dead_code)]

use ri_core::StepFunction;

/// ∫₀ᵗ f*(s) ds computed straight off the sorted cell list.
pub fn prefix_integral_of_rearrangement(f: &StepFunction, t: f64) -> f64 {
    let star = f.decreasing_rearrangement();
    let mut remaining = t;
    let mut acc = 0.0;
    for cell in star.cells() {
        if remaining <= 0.0 {
            break;
        }
        let width = cell.measure().min(remaining);
        acc += cell.value.norm() * width;
        remaining -= width;
    }
    acc
}

/// Brute-force K(t) for (L¹, L∞) by scanning level decompositions
/// f = (|f|-c)₊ + min(|f|, c): a dense grid of clamp levels plus every
/// exact cell modulus.
pub fn brute_k_l1_linf(f: &StepFunction, t: f64, grid: usize) -> f64 {
    let cells: Vec<(f64, f64)> =
        f.cells().map(|c| (c.value.norm(), c.measure())).collect();
    let sup = cells.iter().map(|&(a, _)| a).fold(0.0, f64::max);
    let mut levels: Vec<f64> = (0..=grid).map(|i| sup * i as f64 / grid as f64).collect();
    levels.extend(cells.iter().map(|&(a, _)| a));
    let mut best = f64::INFINITY;
    for c in levels {
        let excess: f64 =
            cells.iter().map(|&(a, m)| (a - c).max(0.0) * m).sum();
        let candidate = excess + t * c.min(sup);
        best = best.min(candidate);
    }
    best
}

/// Log-spaced grid between `lo` and `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..=n).map(|i| (a + (b - a) * i as f64 / n as f64).exp()).collect()
}

/// Relative gap |x - y| / max(|x|, |y|, floor).
pub fn rel_gap(x: f64, y: f64) -> f64 {
    let scale = x.abs().max(y.abs()).max(1e-300);
    (x - y).abs() / scale
}
