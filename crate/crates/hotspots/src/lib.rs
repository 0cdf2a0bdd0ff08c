//! A numerical laboratory for second Neumann eigenfunctions on symmetric
//! quadrilaterals.
//!
//! The library computes the second Neumann eigenvalue `mu_2` and the first
//! mixed (Dirichlet/Neumann) eigenvalue of the Laplacian on parameterized
//! polygon families — isosceles trapezoids, kites, parallelograms, right
//! trapezoids and triangles — and classifies the second eigenfunction as
//! symmetric or antisymmetric about the domain's symmetry axis by comparing
//! the half-domain eigenvalues `mu_s` and `mu_a`.
//!
//! The pipeline is
//!
//! 1. [`geometry`] — build a domain family member as a marked [`geometry::Polygon`];
//! 2. [`meshing`] — triangulate it into a conforming, symmetric P1 mesh;
//! 3. [`discretization`] — assemble the stiffness/mass pencil;
//! 4. [`eigensolve`] — compute the smallest eigenpairs with Richardson
//!    extrapolation over uniform refinements;
//! 5. [`spectra`] — split into symmetric/antisymmetric halves and compare;
//! 6. [`closedform`] — closed-form eigenvalues, bounds, Bessel limits, and an
//!    independent Sturm–Liouville oracle;
//! 7. [`analysis`] — transition heights, derivative identities, critical
//!    points, nodal lines, and level-set export;
//! 8. [`cli`] — the command-line front end.
//!
//! A guided tour with worked examples lives in the `book/` directory of the
//! repository; the code snippets there are kept in sync with the doc-tests in
//! this crate.
//!
//! ```
//! use hotspots::geometry::{make_isosceles_trapezoid, TrapezoidParams};
//! use hotspots::spectra::split;
//!
//! // A low isosceles trapezoid: the second Neumann eigenfunction is
//! // antisymmetric about the vertical symmetry axis.
//! let q = make_isosceles_trapezoid(TrapezoidParams { alpha: 0.9, h: 0.3 })?;
//! let s = split(&q, 1e-3)?;
//! assert_eq!(s.verdict, hotspots::spectra::Verdict::Antisymmetric);
//! # Ok::<(), hotspots::Error>(())
//! ```

pub mod acceptance;
pub mod analysis;
pub mod cli;
pub mod closedform;
pub mod discretization;
pub mod eigensolve;
pub mod geometry;
pub mod meshing;
pub mod spectra;

use std::fmt;

/// Crate-wide error type.
#[derive(Debug)]
pub enum Error {
    /// A family constructor was called outside its parameter domain.
    InvalidParams(String),
    /// A polygon failed validation (self-intersection, orientation, ...).
    DegeneratePolygon(String),
    /// An operation required a declared symmetry axis.
    NoSymmetryAxis,
    /// An operation required a declared symmetry center.
    NoSymmetryCenter,
    /// A mesh triangle has nonpositive area.
    DegenerateTriangle { index: usize, area: f64 },
    /// Vector length does not match the expected dimension.
    SizeMismatch { expected: usize, got: usize },
    /// Dirichlet elimination removed every degree of freedom.
    EmptySystem,
    /// The eigensolver did not reach its residual tolerance.
    NonConvergence(String),
    /// The refinement ladder hit its cap before the tolerance was met.
    RefinementCap { levels: usize, nodes: usize },
    /// An eigenvalue gap was too small for a derivative or simplicity check.
    NearDegenerate(String),
    /// The requested operation only applies in the symmetric regime.
    NotSymmetricRegime(String),
    /// Root bracketing failed inside the documented search interval.
    BracketNotFound(String),
    Io(std::io::Error),
    Json(serde_json::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams(m) => write!(f, "invalid parameters: {m}"),
            Error::DegeneratePolygon(m) => write!(f, "degenerate polygon: {m}"),
            Error::NoSymmetryAxis => write!(f, "polygon has no declared symmetry axis"),
            Error::NoSymmetryCenter => write!(f, "polygon has no declared symmetry center"),
            Error::DegenerateTriangle { index, area } => {
                write!(f, "triangle {index} has nonpositive area {area:e}")
            }
            Error::SizeMismatch { expected, got } => {
                write!(f, "size mismatch: expected {expected}, got {got}")
            }
            Error::EmptySystem => write!(f, "no degrees of freedom left after elimination"),
            Error::NonConvergence(m) => write!(f, "eigensolver did not converge: {m}"),
            Error::RefinementCap { levels, nodes } => write!(
                f,
                "refinement cap reached before tolerance ({levels} levels, {nodes} nodes)"
            ),
            Error::NearDegenerate(m) => write!(f, "near-degenerate eigenvalue: {m}"),
            Error::NotSymmetricRegime(m) => write!(f, "not in the symmetric regime: {m}"),
            Error::BracketNotFound(m) => write!(f, "root bracket not found: {m}"),
            Error::Io(e) => write!(f, "io error: {e}"),
            Error::Json(e) => write!(f, "json error: {e}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
