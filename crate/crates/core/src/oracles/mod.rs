//! Exhaustive enumerators used as ground truth for the closed forms.
//!
//! Every enumerator takes an explicit [`Budget`] and fails with
//! [`Error::BudgetExceeded`](crate::Error::BudgetExceeded) instead of
//! sampling when an instance is too large.

pub mod automorphisms;
pub mod charsum;
pub mod invertible;
pub mod maps;
pub mod module;
pub mod pairings;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use automorphisms::{automorphisms_by_extension, brute_force_automorphisms, enumerate_automorphisms};
pub use charsum::{exhaustive_character_check, fx_is_zero, indicator_character_sum, Cyclotomic};
pub use invertible::{brute_force_invertible_count, MatrixField};
pub use maps::{brute_force_hom_count, brute_force_submodule_types, brute_force_surjection_count};
pub use module::FiniteModule;
pub use pairings::{
    count_pairing_preserving_automorphisms, count_perfect_hermitian_pairings, pairing_classes,
    perfect_hermitian_pairings, PairingClass, PairingClasses, PairingTable,
};

/// Upper bound on the elementary steps an enumerator may take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_work: u128,
}

impl Budget {
    pub const DEFAULT_WORK: u128 = 1 << 30;

    pub fn new(max_work: u128) -> Self {
        Budget { max_work }
    }

    pub fn unlimited() -> Self {
        Budget { max_work: u128::MAX }
    }

    pub fn check(&self, needed: u128) -> Result<()> {
        if needed > self.max_work {
            return Err(Error::BudgetExceeded { needed, budget: self.max_work });
        }
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_work: Self::DEFAULT_WORK }
    }
}

/// Result of an enumeration together with the work it took.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCount {
    pub count: u128,
    pub work: u128,
}
