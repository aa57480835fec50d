//! Trees of nested subsets of `[n]`, the contractions between them, and the
//! exhaustive structural checks they satisfy: the contraction differential
//! squares to zero, relabelling commutes with it up to designed signs, the
//! tree tabulation of the logarithm matches its defining recursion, and the
//! two-block statistic admits a perfect matching by preserving contractions.

pub mod contract;
pub mod psi;
pub mod shlog;
pub mod tree;

pub use contract::{
    check_d_squared, check_equivariance, coefficient, contractions_of, differential, inversions,
    s_exponent, sign_l, sign_s, Contraction, ContractionKind, DiffMatrix, FormalTerm,
};
pub use psi::{check_psi, check_psi_monotone, psi, psi_matching, psi_partner, MatchRole, PsiValue};
pub use shlog::{
    embed_subset, embed_tree_labels, glue_trees, induced_block_perm, shlog_inductive,
    shlog_tree_formula, sign_identity_check, LogMultiset,
};
pub use tree::{census, census_oracle, enumerate_trees, IndexTree};
