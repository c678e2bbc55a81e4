//! Graded polynomial rings `Sym(V_H^dual)` and `Sym(V_H)` with the Weyl
//! group action and Demazure operators.

mod poly;
mod ring;

pub use poly::{count_monomials, monomials_of_degree, GradedPoly, Monomial};
pub use ring::{PolyRing, Side};
