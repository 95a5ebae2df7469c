//! Exact-arithmetic calculus for lattice-level mirror symmetry.
//!
//! * [`lattice`]: integer lattices, Hermite/Smith normal forms, saturation,
//!   isotropic quotients and Eichler-transvection isometries.
//! * [`mukai`]: Mukai vectors on K3 surfaces, the Euler pairing, moduli
//!   dimensions and the lattice mirror map.
//! * [`avhs`]: the A-model variation of Hodge structure over truncated
//!   formal series (Gromov–Witten maps, the logarithmic connection,
//!   flatness, weight filtrations, Griffiths transversality, mirror tests).
//! * [`tduality`]: annihilator T-duals of pure cycles and the Leray
//!   filtration.
//! * [`io`]: the JSON file formats shared by the command-line front end.
//!
//! Nothing in this crate uses floating point.

pub mod avhs;
pub mod io;
pub mod lattice;
pub mod matrix;
pub mod mukai;
pub mod series;
pub mod tduality;

pub use num::{BigInt, BigRational};

/// Arbitrary-precision integer used throughout.
pub type Int = BigInt;
/// Arbitrary-precision rational used throughout.
pub type Rat = BigRational;
