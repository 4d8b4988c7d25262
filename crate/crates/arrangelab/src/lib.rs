#![forbid(unsafe_code)]

//! Exact computations on projective line arrangements: intersection
//! lattices and double-point counts, characteristic polynomials, modular
//! points and supersolvability, Ziegler restrictions and multiarrangement
//! exponents, graded pieces of logarithmic derivation modules, and a
//! freeness decision with constructive certification. Scalars live in Q,
//! a quadratic extension, or a prime field; there is no floating point
//! anywhere, so every verdict is certified rather than approximated.

pub mod cli;
pub mod combin;
pub mod derivation;
pub mod error;
pub mod families;
pub mod field;
pub mod fileio;
pub mod geom;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod verify;

pub use combin::{CharPoly, MultiArrangement, P1Point};
pub use derivation::{Derivation, FreenessStatus, FreenessVerdict, SaitoOutcome};
pub use error::{Error, Result};
pub use families::FamilySpec;
pub use field::{Field, FieldDescriptor, Scalar};
pub use geom::{Arrangement, IntersectionLattice, Line, ProjPoint};
