//! Equivariant weighted spaces and their class-level calculus.
//!
//! Groups act on finite carriers of graded fibers; block tensors spread
//! inputs over set partitions, and class functions with unit denominators
//! assemble into the local exponential whose average is a plethystic one.

pub mod charfun;
pub mod group;
pub mod sheaf;
pub mod space;

pub use charfun::{
    alpha_lambda, alpha_lambda_orbit_sum, loc_exp, loc_exp_orbit, twisted_unit_trace,
    verify_character_lemma, ClassFunction, Presentation,
};
pub use group::PermGroup;
pub use sheaf::{
    f_lambda, graded_trace, random_sheaf, tensor_over_partition, tensor_space, WeightedSheaf,
};
pub use space::{BasisLine, WeightedSpace};
