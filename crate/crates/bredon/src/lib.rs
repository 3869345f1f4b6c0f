//! Exact-arithmetic computation of Bredon cohomological dimension for proper
//! actions, and of virtual cohomological dimension for groups presented as
//! Coxeter systems, graph products of finite groups, or simple complexes of
//! finite groups over a finite poset.
//!
//! Everything is computed over the integers; no floating point enters any
//! result (a numeric positive-definiteness oracle exists in test code only).

pub mod cli;
pub mod cog;
pub mod coxeter;
pub mod instances;
pub mod pgroup;
pub mod poset;
pub mod report;
pub mod scomplex;
pub mod zcohomology;

/// Default bound on group enumeration, overridable via `BREDON_SIZE_CAP` or
/// the `--size-cap` CLI flag.
pub const DEFAULT_SIZE_CAP: usize = 20_000;
