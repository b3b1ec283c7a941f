//! Exact symbolic engine for the quantum matrix ball.
//!
//! Scalars live in ℚ(v) with q = v². Algebras are presented by an ordered
//! alphabet and quadratic rewrite rules; every element is kept in normal form.

pub mod boundary;
pub mod classical;
pub mod error;
pub mod hua;
pub mod kernel;
pub mod linalg;
pub mod ncpoly;
pub mod polmat;
pub mod props;
pub mod qmatrix;
pub mod report;
pub mod scalar;
pub mod uqact;

pub use boundary::{N1Boundary, ShilovReducer};
pub use error::{Error, Result};
pub use kernel::{Kernel, KernelAlgebra};
pub use ncpoly::{Algebra, GenClass, GeneratorId, NCPoly, Strategy, Word};
pub use polmat::TruncatedSeries;
pub use report::{Report, Status};
pub use scalar::VScalar;
pub use uqact::{ActionTable, UqGen};
