// index-based loops mirror the row/column arithmetic throughout and read
// better than iterator chains here
#![allow(clippy::needless_range_loop)]

//! Exact computation of the automorphism-group stratification of the parameter
//! spaces of numerical Godeaux surfaces with torsion of order 3, 4 and 5, and of
//! the component decomposition of the inertia stacks of the associated quotient
//! stacks.
//!
//! The pipeline works entirely in exact arithmetic over Z/nu:
//!
//! 1. [`zmod`] — Howell canonical forms and affine system solving over Z/n,
//!    including the non-field case n = 4.
//! 2. [`group`] — the finite projective monomial-matrix groups `H_nu`, their
//!    torsion quotients, centralizers, and isomorphism fingerprints.
//! 3. [`config`] — the three torsion cases (coordinates, relations with
//!    parametric coefficients, candidate automorphism shapes, coefficient
//!    coupling) and the generation of modular equation systems.
//! 4. [`psolve`] — the parametric congruence solver separating unknown
//!    exponents from ratio parameters.
//! 5. [`strat`] — vanishing-pattern enumeration, automorphism assignment,
//!    propagation, regrouping, orbit collapse and Hasse diagrams.
//! 6. [`inertia`] — fixed strata of group elements and the per-element inertia
//!    component lists with centralizer data.
//! 7. [`report`] — text tables, JSON documents and DOT graphs, plus the
//!    `godeaux` CLI entry points.

pub mod catalog;
pub mod config;
pub mod error;
pub mod group;
pub mod inertia;
pub mod psolve;
pub mod report;
pub mod strat;
pub mod zmod;

pub use error::GodeauxError;

/// Version stamp embedded in every report document.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
