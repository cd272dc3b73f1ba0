//! Partial automorphisms `PAut(P_n)` and injective partial endomorphisms
//! `IEnd(P_n)` of the undirected path `P_n` on vertices `{1, …, n}`.
//!
//! Elements are [`PartialInjection`]s composed as a right action
//! (`x(αβ) = (xα)β`). The crate covers membership, Green's relations,
//! exact counting, the named generator families with their word relations,
//! constructive factorization over minimal generating sets, and rank checks.

pub mod census;
pub mod error;
pub mod factorize;
pub mod genwords;
pub mod greens;
pub mod path_core;
pub mod rankcheck;

pub use error::{Error, Result};
pub use path_core::{is_iend, is_paut, Family, Interval, IntervalDecomposition, PartialInjection};
