//! Generalized Levenshtein distance with pluggable substitution costs.

mod cost;
mod levenshtein;
pub mod pam120;

pub use cost::{pam120_costs, pam_to_costs, CostMatrix, CostScheme, Substitution, DEFAULT_INDEL};
pub use levenshtein::{
    distances_to, levenshtein, normalized_levenshtein, pairwise_distances, Pattern, Sequence,
};
