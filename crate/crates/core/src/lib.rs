//! Rota-Baxter operators of weight 1 on finite groups.
//!
//! A map `B: G -> G` is a Rota-Baxter operator when
//! `B(g) B(h) = B(g B(g) h B(g)^{-1})` for all `g, h`. This crate verifies
//! such maps, builds them from factorizations and extensions, enumerates
//! them on small groups through their graphs `{(B(g), g B(g))} <= G x G`,
//! sorts them into equivalence classes, and classifies the splitting ones
//! on PSL(2,q) through exact factorizations.

pub mod catalog;
pub mod constructions;
pub mod enumeration;
pub mod error;
pub mod factorization;
pub mod group;
pub mod io;
pub mod lattice;
pub mod limits;
pub mod morphism;
pub mod naming;
pub mod perm;
pub mod rb;
pub mod subgroup;

pub use error::{Error, Result};
pub use group::{direct_square, BackendKind, Element, FiniteGroup, ProductGroup};
pub use limits::Caps;
pub use subgroup::Subgroup;
