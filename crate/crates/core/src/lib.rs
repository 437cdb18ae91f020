//! Computational symbolic dynamics: digit expansions for GLS, β and
//! continued-fraction systems, cylinder-measure oracles and genericity
//! statistics, generic-point synthesis, and the two Wadge-reduction stream
//! transducers together with their finite-depth verifiers.

pub mod arith;
pub mod error;
pub mod measures;
pub mod numeration;
pub mod reduction;
pub mod symbolic;
pub mod synthesis;

pub use error::{Error, Result};
pub use symbolic::{Alphabet, Block, Digit, DigitStream, Symbol};
