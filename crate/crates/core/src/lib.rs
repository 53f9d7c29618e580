//! A partition of the natural numbers into classes `A_2, A_3, …` whose
//! asymptotic densities are `ζ(k) − 1`.
//!
//! Each `A_k` is the union over `m ≥ 2` of cells `B_{m,k}` of density `1/m^k`.
//! The column `B_m = ⋃_k B_{m,k}` has density `1/(m(m−1))` and is a union of
//! residue classes modulo `m!`, read off the factorial-base digits of a number.
//!
//! - [`numeral`]: factorial-base conversions and left factorials.
//! - [`partition`]: fast classification and closed-form residue classes.
//! - [`oracle`]: the greedy construction the closed form is checked against.
//! - [`analysis`]: zeta values, density identities and empirical scans.
//! - [`cli`]: the `zeta-partition` command line.

pub mod analysis;
pub mod cli;
pub mod descriptor;
pub mod numeral;
pub mod oracle;
pub mod partition;

pub use descriptor::SetDescriptor;
pub use numeral::{FactorialDigits, Natural};
pub use partition::{classify_a, classify_b, PartitionClass, ResidueClassSet, Selector};
