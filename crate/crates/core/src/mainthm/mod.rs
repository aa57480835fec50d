//! End-to-end machinery for the generating identity on finite weighted
//! bases: the tree-indexed complex over `X^n`, its cohomology along the
//! small diagonal, the two-block filtration splitting it into exact
//! two-term pieces off the merging locus, and the final series comparison
//! against the plethystic exponential.

pub mod complex;
pub mod diagonal;
pub mod filtration;
pub mod identity;

pub use complex::{build_gn, GnComplex};
pub use diagonal::{averaged_euler_trace, diagonal_point, extract_hn, DiagonalFiber, DiagonalSheaf};
pub use filtration::{filtration_check, filtration_check_all, matched_pairs};
pub use identity::{
    chi_sym, chi_sym_burnside, log_coefficient_trace, point_monomial, symmetric_series,
    verify_log_bridge, verify_log_bridge_random, verify_main, verify_main_random,
};
