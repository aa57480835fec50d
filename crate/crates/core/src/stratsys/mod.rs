//! Stratified configuration spaces and systems of weighted sheaves on them.
//!
//! [`space`] builds `X^n` for a finite weighted point set `X`, stratified by
//! which coordinates coincide.  [`system`] puts a weighted fiber over every
//! (index partition, point) pair with regrouping transitions between
//! comparable indices, either partial (defined and invertible over the
//! overlap set of the pair) or strict (defined everywhere), plus the
//! symmetric group action tying everything together.  [`strictify`] resolves
//! a partial system into a signed combination of strict ones, one stratum
//! orbit at a time, preserving every graded trace.

pub mod space;
pub mod strictify;
pub mod system;

pub use space::{build_space, StratSpace, XSpace};
pub use strictify::{
    assemble_strict, orbit_image, signed_kclass_matches, stratum_image, strictify,
    support_measure, verify_strictify, SignedSystemList, SupportMeasure,
};
pub use system::{
    cokernel_system, kernel_system, system_from_local_datum, validate_morphism,
    LocalDatum, Morphism, System,
};
