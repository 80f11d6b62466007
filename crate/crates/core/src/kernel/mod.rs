//! Dissimilarity matrices, their double-centered kernels, and vector kernels.

mod center;
mod matrix;

pub use center::{center_to_kernel, center_with_stats, gaussian_kernel, gaussian_row, kernel_row, Centering};
pub use matrix::{DistanceMatrix, KernelMatrix};
