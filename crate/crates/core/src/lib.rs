//! Covering numbers of Δ-sets for partitions of finite semigroups.
//!
//! For a semigroup `S` and `A ⊆ S`, `Δ(A) = {x ∈ S : x∘A ∩ A ≠ ∅}` and
//! `cov A = min{|X| : S = X⁻¹A}` where `X⁻¹A = {y : x∘y ∈ A for some x ∈ X}`.
//! Given an n-partition of `S`, the question is whether some cell `A`
//! satisfies `cov Δ(A) ≤ n`. This crate computes these quantities exactly,
//! builds verifiable cover certificates from three constructive bounds, and
//! enumerates small semigroups and partitions for exhaustive checks.
//!
//! Modules:
//! * [`table`], [`mask`]: Cayley tables, subsets and partitions.
//! * [`delta`]: Δ-sets, covering numbers and certificate verification.
//! * [`structure`]: minimal right ideals and right-group decomposition.
//! * [`theorems`]: certificate constructions.
//! * [`enumeration`]: semigroups up to isomorphism, set partitions.

pub mod delta;
pub mod enumeration;
pub mod mask;
pub mod setcover;
pub mod structure;
pub mod table;
pub mod theorems;

pub use delta::{cov, delta, min_cov_over_cells, verify_cover, CovMode, CovResult, CoverCertificate, Provenance};
pub use enumeration::{
    canonical_key, enumerate_partitions, enumerate_semigroups, CanonicalKey, CellCount, EnumerationOptions,
    PartitionCode,
};
pub use mask::SubsetMask;
pub use table::{CayleyTable, ElementId, Partition};
