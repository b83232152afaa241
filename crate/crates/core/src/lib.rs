//! Exact quadratic spaces over finite semi-local rings in which 2 is a unit.

pub mod error;
pub mod oracle;
pub mod quadspace;
pub mod rings;
pub mod springer;
pub mod witt;

pub use error::{Error, Result};
pub use quadspace::{QuadraticSpace, SubspaceWitness, Vector};
pub use rings::{Elem, Poly, Ring, RingHom};
