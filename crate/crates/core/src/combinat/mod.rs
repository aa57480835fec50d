//! Combinatorics of the index set `[n] = {1..n}`: subsets in binary order,
//! permutations, set partitions with the refinement lattice, and the axioms
//! a stratified orbit poset has to satisfy.

pub mod axioms;
pub mod partition;
pub mod perm;
pub mod subset;

pub use axioms::{check_axioms, AxiomsReport};
pub use partition::{
    consecutive_partition_of_shape, count_cycle_type, enumerate_int_partitions,
    enumerate_set_partitions, factorial, partitions_of_subset, two_block_partitions, IntPartition,
    PartitionTable, SetPartition,
};
pub use perm::{all_perms, class_representative, generators, induced_block_perm, Permutation};
pub use subset::Subset;
