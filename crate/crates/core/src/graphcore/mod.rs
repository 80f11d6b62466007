//! Contact graphs, random-walk matrices and spectral seriation.

mod graph;
mod seriate;
mod transition;

pub use graph::{build_contact_graph, LabeledGraph, Provenance, DEFAULT_R_MAX, DEFAULT_R_MIN};
pub use seriate::{seriate, Seriation};
pub use transition::{stationary_distribution, transition_view, EdgeWeighting, TransitionView};
