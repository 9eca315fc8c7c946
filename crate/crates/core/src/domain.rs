use serde::{Deserialize, Serialize};

/// Circumference of the torus domain.
pub const TORUS: f64 = std::f64::consts::TAU;

/// Underlying measure space of a step function.
///
/// `RealLine` and `HalfLine` carry Lebesgue measure, `Torus` is the circle of
/// circumference 2π with Lebesgue measure, and `Integers` carries counting
/// measure (each lattice point is modelled as a unit cell `[n, n+1)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    RealLine,
    HalfLine,
    Torus,
    Integers,
}

impl Domain {
    pub fn tag(self) -> &'static str {
        match self {
            Domain::RealLine => "real",
            Domain::HalfLine => "half",
            Domain::Torus => "torus",
            Domain::Integers => "integers",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Domain> {
        match tag {
            "real" => Some(Domain::RealLine),
            "half" => Some(Domain::HalfLine),
            "torus" => Some(Domain::Torus),
            "integers" => Some(Domain::Integers),
            _ => None,
        }
    }

    /// Total measure of the domain, infinite except for the torus.
    pub fn total_measure(self) -> f64 {
        match self {
            Domain::Torus => TORUS,
            _ => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}
