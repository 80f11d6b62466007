//! Global complexity descriptors of contact graphs.

mod ambiguity;
mod entropy;
mod features;

pub use ambiguity::{
    ambiguity, ambiguity_exhaustive, ambiguity_heuristic, fuzzify_partition, fuzzy_entropy, is_admissible,
    Ambiguity, AmbiguityOptions, FuzzyVertexSet, Partition, TConorm,
};
pub use entropy::renyi2_entropy;
pub use features::{complexity_features, graph_entropy, write_features_csv, ClassSummary, ComplexityReport, ComplexityRow};
