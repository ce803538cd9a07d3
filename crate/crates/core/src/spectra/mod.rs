//! Elastic eigenvalue solvers on concrete flat domains.
//!
//! Three solver routes: the interval reduces to a scalar closed form, the
//! unit disk separates into Bessel boundary determinants per angular order,
//! and rectangles are discretized by assembling the strain-energy quadratic
//! form on a uniform grid.

mod disk;
mod fd;
mod io;

pub use disk::disk_spectrum;
pub use fd::rectangle_fd_spectrum;
pub use io::{spectrum_export, spectrum_import};

use crate::error::Error;
use crate::geometry::LameParameters;
use crate::Result;

/// Flat computational domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Interval { length: f64 },
    Rectangle { a: f64, b: f64 },
    Disk { radius: f64 },
}

impl Domain {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Domain::Interval { length } => *length > 0.0,
            Domain::Rectangle { a, b } => *a > 0.0 && *b > 0.0,
            Domain::Disk { radius } => *radius > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("domain lengths must be positive: {self:?}")))
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Interval { .. } => 1,
            _ => 2,
        }
    }

    pub fn volume(&self) -> f64 {
        match self {
            Domain::Interval { length } => *length,
            Domain::Rectangle { a, b } => a * b,
            Domain::Disk { radius } => std::f64::consts::PI * radius * radius,
        }
    }

    pub fn boundary_volume(&self) -> f64 {
        match self {
            Domain::Interval { .. } => 2.0,
            Domain::Rectangle { a, b } => 2.0 * (a + b),
            Domain::Disk { radius } => 2.0 * std::f64::consts::PI * radius,
        }
    }
}

impl std::fmt::Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Domain::Interval { length } => write!(f, "interval:{length}"),
            Domain::Rectangle { a, b } => write!(f, "rectangle:{a}:{b}"),
            Domain::Disk { radius } => write!(f, "disk:{radius}"),
        }
    }
}

impl std::str::FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let parse = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("bad domain number {v:?}")))
        };
        let d = match parts.as_slice() {
            ["interval", l] => Domain::Interval { length: parse(l)? },
            ["rectangle", a, b] => Domain::Rectangle { a: parse(a)?, b: parse(b)? },
            ["disk", r] => Domain::Disk { radius: parse(r)? },
            _ => return Err(Error::InvalidParameter(format!("bad domain string {s:?}"))),
        };
        d.validate()?;
        Ok(d)
    }
}

/// Boundary condition of the eigenvalue problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    /// Displacement pinned to zero on the boundary.
    Dirichlet,
    /// Zero surface traction; admits rigid-motion zero modes.
    NeumannTraction,
}

impl BoundaryCondition {
    /// Sign of the boundary term in the heat-trace model.
    pub fn sign(&self) -> i8 {
        match self {
            BoundaryCondition::Dirichlet => -1,
            BoundaryCondition::NeumannTraction => 1,
        }
    }
}

impl std::fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundaryCondition::Dirichlet => write!(f, "dirichlet"),
            BoundaryCondition::NeumannTraction => write!(f, "neumann"),
        }
    }
}

impl std::str::FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dirichlet" => Ok(BoundaryCondition::Dirichlet),
            "neumann" | "neumann-traction" => Ok(BoundaryCondition::NeumannTraction),
            _ => Err(Error::InvalidParameter(format!("bad boundary condition {s:?}"))),
        }
    }
}

/// How a spectrum was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Analytic,
    BesselRoots,
    FiniteDifference { grid_n: usize },
}

impl std::fmt::Display for SolveMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolveMethod::Analytic => write!(f, "analytic"),
            SolveMethod::BesselRoots => write!(f, "bessel"),
            SolveMethod::FiniteDifference { .. } => write!(f, "fd"),
        }
    }
}

/// One eigenvalue with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub value: f64,
    pub multiplicity: u32,
}

/// Ascending eigenvalue sequence with solver metadata.
#[derive(Debug, Clone)]
pub struct Spectrum {
    entries: Vec<SpectrumEntry>,
    bc: BoundaryCondition,
    params: LameParameters,
    domain: Domain,
    method: SolveMethod,
}

impl Spectrum {
    /// Validates sortedness and nonnegativity.
    pub fn new(
        entries: Vec<SpectrumEntry>,
        bc: BoundaryCondition,
        params: LameParameters,
        domain: Domain,
        method: SolveMethod,
    ) -> Result<Self> {
        let mut prev = f64::NEG_INFINITY;
        for (i, e) in entries.iter().enumerate() {
            if !e.value.is_finite() || e.value < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "eigenvalue {i} is not a nonnegative finite number: {}",
                    e.value
                )));
            }
            if e.value < prev {
                return Err(Error::InvalidParameter(format!(
                    "eigenvalues not sorted ascending at position {i}"
                )));
            }
            if e.multiplicity == 0 {
                return Err(Error::InvalidParameter(format!("zero multiplicity at position {i}")));
            }
            prev = e.value;
        }
        Ok(Self { entries, bc, params, domain, method })
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn params(&self) -> &LameParameters {
        &self.params
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn method(&self) -> SolveMethod {
        self.method
    }

    /// Total count with multiplicity.
    pub fn count(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Smallest eigenvalue, if any.
    pub fn first(&self) -> Option<f64> {
        self.entries.first().map(|e| e.value)
    }

    /// Largest computed eigenvalue, if any.
    pub fn last(&self) -> Option<f64> {
        self.entries.last().map(|e| e.value)
    }

    /// Eigenvalues expanded with multiplicity, ascending.
    pub fn expanded(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.count());
        for e in &self.entries {
            for _ in 0..e.multiplicity {
                out.push(e.value);
            }
        }
        out
    }

    /// The lowest entries whose expanded count does not exceed `count`.
    pub fn truncated(&self, count: usize) -> Spectrum {
        let mut entries = Vec::new();
        let mut total = 0usize;
        for e in &self.entries {
            if total + e.multiplicity as usize > count {
                break;
            }
            total += e.multiplicity as usize;
            entries.push(*e);
        }
        Spectrum { entries, ..self.clone() }
    }
}

/// Closed-form spectrum on an interval of the given length. The operator
/// reduces to `-(2 mu + lambda) d^2/dx^2` acting on the single displacement
/// component.
pub fn interval_spectrum(
    length: f64,
    params: &LameParameters,
    bc: BoundaryCondition,
    count: usize,
) -> Result<Spectrum> {
    let domain = Domain::Interval { length };
    domain.validate()?;
    let c = params.pressure_modulus();
    let entries: Vec<SpectrumEntry> = match bc {
        BoundaryCondition::Dirichlet => (1..=count)
            .map(|k| SpectrumEntry {
                value: c * (k as f64 * std::f64::consts::PI / length).powi(2),
                multiplicity: 1,
            })
            .collect(),
        BoundaryCondition::NeumannTraction => (0..count)
            .map(|k| SpectrumEntry {
                value: c * (k as f64 * std::f64::consts::PI / length).powi(2),
                multiplicity: 1,
            })
            .collect(),
    };
    Spectrum::new(entries, bc, *params, domain, SolveMethod::Analytic)
}
