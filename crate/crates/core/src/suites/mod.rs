//! Verification suites.
//!
//! Each suite evaluates both sides of one inequality on a corpus of step
//! function pairs, collects the ratios into a [`SuiteRun`](crate::report::SuiteRun),
//! and decides a verdict. Suites are pure functions of (parameters, corpus),
//! so reports are reproducible byte for byte.

pub mod bilinear;
pub mod multiplier;
pub mod young;

pub use bilinear::{verify_thm35, verify_thm36, BilinearGrid, BilinearKind, BilinearOpSpec};
pub use multiplier::{
    check_blasco_endpoints, check_grand_chain, max_ratio_of_kind, seeded_poly_pairs,
    seeded_symbol,
};
pub use young::{
    classical_young_ratio, extremal_search, verify_classical_young, verify_conv_endpoints,
    verify_gustavsson_peetre, verify_karamata_young, verify_orlicz_young, verify_theta_edge,
    verify_thm21, verify_torus_zygmund, InequalityInstance, ThetaEdge,
};

/// Catalogue entry: stable id, the claim token it exercises, and a summary.
#[derive(Debug, Clone, Copy)]
pub struct SuiteInfo {
    pub id: &'static str,
    pub anchor: &'static str,
    pub summary: &'static str,
}

/// Stable-ordered suite catalogue.
pub const CATALOGUE: [SuiteInfo; 13] = [
    SuiteInfo {
        id: "conv-endpoints",
        anchor: "eq 2.1 / eq 2.2",
        summary: "convolution endpoint bounds: L1 factor and dual factor",
    },
    SuiteInfo {
        id: "classical-young",
        anchor: "young",
        summary: "constant-exact Young inequality over exponent triples",
    },
    SuiteInfo {
        id: "thm21",
        anchor: "thm 2.1",
        summary: "interpolated Young inequality through the weighted K-norm",
    },
    SuiteInfo {
        id: "cor22",
        anchor: "cor 2.2",
        summary: "Orlicz-space Young inequality from the theta construction",
    },
    SuiteInfo {
        id: "cor23",
        anchor: "cor 2.3",
        summary: "parameter-function Orlicz Young inequality",
    },
    SuiteInfo {
        id: "cor24",
        anchor: "cor 2.4",
        summary: "torus Zygmund-scale convolution bound",
    },
    SuiteInfo {
        id: "cor27",
        anchor: "cor 2.7",
        summary: "Lorentz-Karamata convolution bound on the torus",
    },
    SuiteInfo {
        id: "cor28",
        anchor: "cor 2.8",
        summary: "theta = 0 edge: report-only computable sub-expressions",
    },
    SuiteInfo {
        id: "cor29",
        anchor: "cor 2.9",
        summary: "theta = 1 edge: report-only computable sub-expressions",
    },
    SuiteInfo {
        id: "thm35",
        anchor: "thm 3.5",
        summary: "bilinear K/J interpolation bound on operator instances",
    },
    SuiteInfo {
        id: "thm36",
        anchor: "thm 3.6",
        summary: "bilinear J-method representation bound",
    },
    SuiteInfo {
        id: "blasco-endpoints",
        anchor: "sec 4 endpoints",
        summary: "bilinear multiplier endpoint bounds on the torus",
    },
    SuiteInfo {
        id: "grand-chain",
        anchor: "sec 4 chain",
        summary: "multiplier bound into exponential integrability",
    },
];

pub fn suite_info(id: &str) -> Option<&'static SuiteInfo> {
    CATALOGUE.iter().find(|s| s.id == id)
}

/// Relative change of a scalar under refinement; 0/0 reads as 0.
pub fn relative_drift(base: f64, refined: f64) -> f64 {
    if base == 0.0 && refined == 0.0 {
        0.0
    } else {
        (refined - base).abs() / base.abs().max(refined.abs())
    }
}
