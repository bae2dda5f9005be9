//! Random Hermitian matrices over truncated rings of integers of quadratic
//! extensions of `Q_p`: exact arithmetic, cokernel types, closed-form
//! predictions, brute-force oracles, congruence classification and a
//! deterministic Monte Carlo harness.

pub mod classify;
pub mod closed_forms;
pub mod cokernel;
pub mod error;
pub mod experiment;
pub mod matrix;
pub mod oracles;
pub mod partition;
pub mod ring;
pub mod sampler;

pub use error::{Error, Result};
pub use matrix::{HermitianMatrix, Matrix};
pub use partition::Partition;
pub use ring::{ExtensionKind, ExtensionSpec, RingElem};
