//! Coxeter and Weyl group arithmetic from a generalized Cartan matrix.

mod cartan;
mod group;

pub use cartan::{GeneralizedCartanMatrix, Realization, RealizationDoc};
pub use group::{
    format_word, parse_word, CosetKind, CosetSide, ParabolicSubset, WeylElement, WeylGroup,
    FINITE_TYPE_ELEMENT_CAP,
};
