//! Exact machinery for symmetric-function style identities over configuration
//! spaces of a finite point set: plethystic series calculus, symmetric-group
//! combinatorics, weighted equivariant sheaf models, index-tree complexes,
//! stratified sheaf systems and the end-to-end product identity they assemble
//! into.
//!
//! Everything is computed over exact rationals; every checker either proves
//! an identity at the configured size or returns a concrete witness of
//! failure.

pub mod coeffring;
pub mod combinat;
pub mod equirep;
pub mod error;
pub mod linalg;
pub mod mainthm;
pub mod report;
pub mod stratsys;
pub mod treecx;

pub use coeffring::{LaurentPoly, QSeries, Rat, RatFun};
pub use error::{Error, Result};
pub use linalg::QMatrix;
