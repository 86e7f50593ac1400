//! Toolkit for multiplicative Sidon sets over {1..n}.
//!
//! A set is multiplicative 3-Sidon when the equation `s1*s2*s3 = t1*t2*t3`
//! has no solution in six pairwise-distinct elements of the set. The crate
//! provides:
//!
//! - [`arith`]: a smallest-prime-factor sieve and the factorization
//!   primitives everything else is built on,
//! - [`decompose`]: the two-case split `m = u*v` (large prime cofactor, or
//!   a balanced split with `2*omega(u) - 2 <= omega(v)`),
//! - [`encode`]: the product graph whose edges are those splits; a hexagon
//!   in the graph is exactly a violating triple pair,
//! - [`extremal`]: exhaustive maximum-edge search for C6-free graphs plus
//!   closed-form edge bounds,
//! - [`sidonkit`]: verifiers and exact/greedy/constructive set builders,
//! - [`ledger`]: the edge partition by size band and prime-divisor count,
//!   with the theoretical cap attached to every part,
//! - [`cli`]: the command-line front end.

pub mod arith;
pub mod cli;
pub mod decompose;
pub mod encode;
mod error;
pub mod extremal;
pub mod ledger;
pub mod sidonkit;
mod sixcycle;

pub use error::{Error, Result};
