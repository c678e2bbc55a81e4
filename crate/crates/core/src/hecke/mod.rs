//! Hecke algebra over `Z[v, v^-1]`, Kazhdan–Lusztig basis, parabolic
//! modules and the Hom pairing.

mod algebra;
pub mod cache;
mod kl;
mod parabolic;

pub use algebra::{Basis, HeckeAlgebra, HeckeElement};
pub use kl::{
    h_to_p, hom_pairing, p_to_h, KlBasis, KlTable, Provenance, TableSource, CONVENTION_VERSION,
    HOM_PAIRING_NORMALIZATION,
};
pub use parabolic::{Flavor, ParabolicModule, ParabolicModuleElement};

#[cfg(test)]
mod tests;
