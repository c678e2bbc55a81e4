use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::poly::GradedPoly;
use crate::coxeter::{Realization, WeylElement};
use crate::error::{Error, Result};
use crate::linalg::{frac, rat, Rational};

/// Which vector space the polynomial generators come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `Sym(V_H^dual)`; generators have weight `+2`.
    Equivariant,
    /// `Sym(V_H)`; generators have weight `-2`.
    Monodromic,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Equivariant => Side::Monodromic,
            Side::Monodromic => Side::Equivariant,
        }
    }

    /// Weight of a linear generator.
    pub fn generator_weight(self) -> i32 {
        match self {
            Side::Equivariant => 2,
            Side::Monodromic => -2,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Equivariant => "equivariant",
            Side::Monodromic => "monodromic",
        })
    }
}

/// Polynomial ring on a realization with its W-action.
///
/// On the equivariant side the variables are the basis of `V_H^dual` dual
/// to the standard basis of `V_H`, and `s(l) = l - <l, coroot_s> root_s`.
/// On the monodromic side the variables are the standard basis of `V_H`
/// and `s(v) = v - <root_s, v> coroot_s`. Linear generators sit in degree 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    realization: Arc<Realization>,
    side: Side,
    /// `reflections[s][c]` is the image of variable `c` under `s`.
    reflections: Vec<Vec<GradedPoly>>,
}

impl PolyRing {
    pub fn new(realization: Arc<Realization>, side: Side) -> Self {
        let n = realization.dim_h;
        let mut reflections = Vec::with_capacity(realization.rank());
        for s in 0..realization.rank() {
            let (divisor, pairing) = Self::divisor_and_pairing(&realization, side, s);
            let images = (0..n)
                .map(|c| {
                    let mut img = GradedPoly::var(n, c);
                    img.add_assign_scaled(&GradedPoly::linear_int(divisor), &rat(-pairing[c]));
                    img
                })
                .collect();
            reflections.push(images);
        }
        PolyRing { realization, side, reflections }
    }

    fn divisor_and_pairing(r: &Realization, side: Side, s: usize) -> (&[i64], &[i64]) {
        match side {
            Side::Equivariant => (&r.roots[s], &r.coroots[s]),
            Side::Monodromic => (&r.coroots[s], &r.roots[s]),
        }
    }

    pub fn realization(&self) -> &Arc<Realization> {
        &self.realization
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn nvars(&self) -> usize {
        self.realization.dim_h
    }

    pub fn rank(&self) -> usize {
        self.realization.rank()
    }

    pub fn zero(&self) -> GradedPoly {
        GradedPoly::zero(self.nvars())
    }

    pub fn one(&self) -> GradedPoly {
        GradedPoly::one(self.nvars())
    }

    pub fn var(&self, i: usize) -> GradedPoly {
        GradedPoly::var(self.nvars(), i)
    }

    pub fn constant(&self, c: Rational) -> GradedPoly {
        GradedPoly::constant(self.nvars(), c)
    }

    /// `alpha_s` on the equivariant side, `alpha_s^dual` on the monodromic.
    pub fn root(&self, s: usize) -> GradedPoly {
        GradedPoly::linear_int(Self::divisor_and_pairing(&self.realization, self.side, s).0)
    }

    /// `alpha_s / 2`
    pub fn half_root(&self, s: usize) -> GradedPoly {
        self.root(s).scale(&frac(1, 2))
    }

    /// Internal grading of a homogeneous polynomial (twice its degree).
    pub fn grading(&self, f: &GradedPoly) -> Option<i32> {
        f.poly_degree().map(|d| 2 * d as i32)
    }

    /// Frobenius weight of a homogeneous polynomial.
    pub fn weight(&self, f: &GradedPoly) -> Option<i32> {
        f.poly_degree().map(|d| self.side.generator_weight() * d as i32)
    }

    /// Images of the variables under `w`.
    pub fn variable_images(&self, w: &WeylElement) -> Vec<GradedPoly> {
        (0..self.nvars())
            .map(|c| {
                let mut img = self.var(c);
                for &s in w.word().iter().rev() {
                    img = self.reflect(s, &img);
                }
                img
            })
            .collect()
    }

    /// `s . f`
    pub fn reflect(&self, s: usize, f: &GradedPoly) -> GradedPoly {
        f.substitute(&self.reflections[s])
    }

    /// `w . f`
    pub fn act(&self, w: &WeylElement, f: &GradedPoly) -> GradedPoly {
        if w.is_identity() {
            return f.clone();
        }
        f.substitute(&self.variable_images(w))
    }

    /// Demazure operator `(f - s.f) / alpha_s`.
    pub fn demazure(&self, s: usize, f: &GradedPoly) -> Result<GradedPoly> {
        let diff = f - &self.reflect(s, f);
        diff.div_linear(&self.root(s))
            .map_err(|e| Error::DivisionFailure(format!("demazure at s{s}: {e}")))
    }

    /// `(p, q)` with `p = (f + s.f)/2`, `q = d_s f`, so `f = p + (alpha_s/2) q`.
    pub fn split_invariant(&self, s: usize, f: &GradedPoly) -> (GradedPoly, GradedPoly) {
        let p = (f + &self.reflect(s, f)).scale(&frac(1, 2));
        let q = self.demazure(s, f).expect("alpha_s divides f - s.f for a valid realization");
        (p, q)
    }

    pub fn is_invariant(&self, s: usize, f: &GradedPoly) -> bool {
        self.reflect(s, f) == *f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{GeneralizedCartanMatrix, WeylGroup};
    use proptest::prelude::*;

    fn ring(cartan: GeneralizedCartanMatrix, side: Side) -> (PolyRing, WeylGroup) {
        let r = Arc::new(Realization::minimal(cartan));
        (PolyRing::new(r.clone(), side), WeylGroup::from_arc(r))
    }

    #[test]
    fn sl2_reflection_negates_generator() {
        let (s, g) = ring(GeneralizedCartanMatrix::a1(), Side::Equivariant);
        let x = s.var(0);
        assert_eq!(s.act(&g.generator(0).unwrap(), &x), -&x);
        assert_eq!(s.act(&g.identity(), &x), x);
    }

    #[test]
    fn a2_reflections_on_roots() {
        let (s, g) = ring(GeneralizedCartanMatrix::a2(), Side::Equivariant);
        let s0 = g.generator(0).unwrap();
        let (a0, a1) = (s.root(0), s.root(1));
        assert_eq!(s.act(&s0, &a0), -&a0);
        assert_eq!(s.act(&s0, &a1), &a0 + &a1);
    }

    #[test]
    fn demazure_examples() {
        let (s, _) = ring(GeneralizedCartanMatrix::a2(), Side::Equivariant);
        assert!(s.demazure(0, &s.one()).unwrap().is_zero());
        assert_eq!(s.demazure(0, &s.root(0)).unwrap(), s.constant(rat(2)));
        let sq = &s.root(0) * &s.root(0);
        assert!(s.demazure(0, &sq).unwrap().is_zero());
    }

    #[test]
    fn split_examples() {
        let (s, _) = ring(GeneralizedCartanMatrix::b2(), Side::Equivariant);
        let a = s.root(0);
        assert_eq!(s.split_invariant(0, &a), (s.zero(), s.constant(rat(2))));
        let g = &s.root(1) + &s.root(1).scale(&rat(1)).substitute(&s.reflections[0]);
        assert!(s.is_invariant(0, &g));
        assert_eq!(s.split_invariant(0, &g), (g.clone(), s.zero()));
        assert_eq!(s.split_invariant(0, &(&a * &g)), (s.zero(), g.scale(&rat(2))));
    }

    #[test]
    fn monodromic_side_uses_coroots() {
        let (s, g) = ring(GeneralizedCartanMatrix::b2(), Side::Monodromic);
        let r = s.realization().clone();
        assert_eq!(s.root(0), GradedPoly::linear_int(&r.coroots[0]));
        let s0 = g.generator(0).unwrap();
        assert_eq!(s.act(&s0, &s.root(0)), -&s.root(0));
        assert_eq!(s.weight(&s.var(0)), Some(-2));
    }

    fn arb_poly(nvars: usize, max_deg: u32) -> impl Strategy<Value = GradedPoly> {
        proptest::collection::vec((proptest::collection::vec(0u32..=max_deg, nvars), -5i64..=5), 0..6).prop_map(
            move |terms| {
                let mut p = GradedPoly::zero(nvars);
                for (mut e, c) in terms {
                    // cap total degree
                    while e.iter().sum::<u32>() > max_deg {
                        let i = e.iter().position(|&x| x > 0).unwrap();
                        e[i] -= 1;
                    }
                    p.add_term(super::super::Monomial(e), rat(c));
                }
                p
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn demazure_squares_to_zero(f in arb_poly(3, 10), s in 0usize..2) {
            let (r, _) = ring(GeneralizedCartanMatrix::affine_a1(), Side::Equivariant);
            let d = r.demazure(s, &f).unwrap();
            prop_assert!(r.is_invariant(s, &d));
            prop_assert!(r.demazure(s, &d).unwrap().is_zero());
        }

        #[test]
        fn twisted_leibniz(f in arb_poly(2, 4), g in arb_poly(2, 4), s in 0usize..2) {
            let (r, _) = ring(GeneralizedCartanMatrix::b2(), Side::Equivariant);
            let lhs = r.demazure(s, &(&f * &g)).unwrap();
            let rhs = &(&r.demazure(s, &f).unwrap() * &g) + &(&r.reflect(s, &f) * &r.demazure(s, &g).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn demazure_braid_relation(f in arb_poly(2, 6)) {
            let (r, _) = ring(GeneralizedCartanMatrix::a2(), Side::Equivariant);
            let d = |s: usize, p: &GradedPoly| r.demazure(s, p).unwrap();
            prop_assert_eq!(d(0, &d(1, &d(0, &f))), d(1, &d(0, &d(1, &f))));
        }

        #[test]
        fn demazure_braid_relation_b2(f in arb_poly(2, 7), side in prop_oneof![Just(Side::Equivariant), Just(Side::Monodromic)]) {
            let (r, _) = ring(GeneralizedCartanMatrix::b2(), side);
            let d = |s: usize, p: &GradedPoly| r.demazure(s, p).unwrap();
            prop_assert_eq!(d(0, &d(1, &d(0, &d(1, &f)))), d(1, &d(0, &d(1, &d(0, &f)))));
        }

        #[test]
        fn split_reassembles(f in arb_poly(3, 6), s in 0usize..2) {
            let (r, _) = ring(GeneralizedCartanMatrix::affine_a1(), Side::Monodromic);
            let (p, q) = r.split_invariant(s, &f);
            prop_assert!(r.is_invariant(s, &p) && r.is_invariant(s, &q));
            prop_assert_eq!(&p + &(&r.half_root(s) * &q), f);
        }

        #[test]
        fn action_is_a_group_action(f in arb_poly(2, 4), a in proptest::collection::vec(0usize..2, 0..5), b in proptest::collection::vec(0usize..2, 0..5)) {
            let (r, g) = ring(GeneralizedCartanMatrix::b2(), Side::Equivariant);
            let (wa, wb) = (g.from_word(&a).unwrap(), g.from_word(&b).unwrap());
            prop_assert_eq!(r.act(&g.multiply(&wa, &wb), &f), r.act(&wa, &r.act(&wb, &f)));
        }
    }
}
