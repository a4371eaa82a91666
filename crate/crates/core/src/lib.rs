//! Exact kernels for sums of bijections `{1,…,n} → G` into a finite abelian
//! group `G`.
//!
//! * [`group`]: cyclic-product groups, duals and the character pairing.
//! * [`fourier`]: Fourier coefficients of the bijection indicator by two
//!   independent routes, plus entropy, killing partitions and sparse sums.
//! * [`counting`]: exact solution counts for `π₁+⋯+π_d = f`, singular series,
//!   predictions and injection-sum distances.
//! * [`latin`]: group-induced Latin hypercubes and their transversals.
//! * [`xor`]: distance and advantage figures for the xor of two permutations.
//! * [`verify`]: the invariant batteries behind the `verify` command.
//!
//! Heavy loops go through [`par`], which uses rayon under the default
//! `parallel` feature and runs sequentially without it.

pub mod budget;
pub mod combin;
pub mod counting;
pub mod error;
pub mod fourier;
pub mod group;
pub mod latin;
pub mod par;
pub mod verify;
pub mod xor;

pub use budget::Budgets;
pub use error::{Error, Result};
pub use fourier::{CharacterVector, FourierEngine};
pub use group::{AbelianGroup, DualCharacter, GroupElement};
pub use latin::{count_transversals, LatinCube, TransversalCount};
pub use verify::{run_verify, VerifyLevel, VerifyReport};
pub use xor::AdvantageReport;
