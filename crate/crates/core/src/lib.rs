//! Exact combinatorics for equivariant and monodromic Hecke categories of
//! Kac–Moody groups: Coxeter groups, Hecke algebras, Soergel-type bimodules
//! and the regrading calculus relating the two sides.

pub mod bimod;
pub mod coxeter;
pub mod duality;
pub mod error;
pub mod hecke;
pub mod laurent;
pub mod linalg;
pub mod modp;
pub mod parabolic;
pub mod polyring;
pub mod unipoly;

pub use bimod::{Bimodule, Decomposition, GradedHomSpace};
pub use coxeter::{GeneralizedCartanMatrix, ParabolicSubset, Realization, WeylElement, WeylGroup};
pub use duality::{BigradedDim, DualMode, EmReport};
pub use error::{Error, Result};
pub use hecke::{HeckeAlgebra, HeckeElement, KlBasis};
pub use laurent::LaurentPoly;
pub use polyring::{GradedPoly, PolyRing, Side};
