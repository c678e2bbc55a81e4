//! Graded `(S, S)`-bimodules free over the right copy of `S`: standard and
//! elementary bimodules, Bott–Samelson products, graded Hom spaces and
//! decomposition into indecomposables.

mod bimodule;
mod decompose;
mod hom;
mod matrix;

pub use bimodule::{Bimodule, BimoduleDoc, Generator, SpecializeSide};
pub use decompose::{decompose, decompose_labels, Decomposition, DecompositionEntry, Summand, ATTEMPT_CAP};
pub use hom::{
    compose, default_degree_bound, hom_basis, hom_dimension, hom_graded, is_bimodule_map, right_multiplication,
    GradedHomSpace,
};
pub use matrix::PolyMatrix;
