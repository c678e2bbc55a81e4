use std::collections::HashMap;
use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::coxeter::{GeneralizedCartanMatrix, WeylElement, WeylGroup};
use crate::laurent::LaurentPoly;

fn kl_for(cartan: GeneralizedCartanMatrix) -> KlBasis {
    KlBasis::for_group(Arc::new(WeylGroup::from_cartan(cartan)))
}

fn v(e: i32) -> LaurentPoly {
    LaurentPoly::monomial(1, e)
}

/// Bruhat order by brute force over subwords of the canonical word.
fn subword_leq(g: &WeylGroup, u: &WeylElement, w: &WeylElement) -> bool {
    let word = w.word();
    (0u64..1 << word.len()).any(|mask| {
        let sub: Vec<usize> = (0..word.len()).filter(|i| mask >> i & 1 == 1).map(|i| word[i]).collect();
        sub.len() == u.length() && g.from_word(&sub).unwrap() == *u
    })
}

/// Independent KL oracle in the classical `q`-normalization via
/// R-polynomials: `q^d P(q^-1) - P(q) = sum_{x<y<=w} R_{x,y} P_{y,w}`.
struct RPolyOracle<'a> {
    g: &'a WeylGroup,
    elems: Vec<WeylElement>,
    r: HashMap<(WeylElement, WeylElement), LaurentPoly>,
    p: HashMap<(WeylElement, WeylElement), LaurentPoly>,
}

impl<'a> RPolyOracle<'a> {
    fn new(g: &'a WeylGroup, bound: usize) -> Self {
        RPolyOracle { g, elems: g.elements_up_to(bound), r: HashMap::new(), p: HashMap::new() }
    }

    fn leq(&self, u: &WeylElement, w: &WeylElement) -> bool {
        subword_leq(self.g, u, w)
    }

    fn r(&mut self, x: &WeylElement, w: &WeylElement) -> LaurentPoly {
        if let Some(p) = self.r.get(&(x.clone(), w.clone())) {
            return p.clone();
        }
        let out = if !self.leq(x, w) {
            LaurentPoly::zero()
        } else if x == w {
            LaurentPoly::one()
        } else {
            let s = *w.word().last().unwrap();
            let ws = self.g.right_mul_gen(w, s);
            let xs = self.g.right_mul_gen(x, s);
            if xs.length() < x.length() {
                self.r(&xs, &ws)
            } else {
                let a = &self.r(x, &ws) * &(&v(1) - &v(0));
                let b = &self.r(&xs, &ws) * &v(1);
                &a + &b
            }
        };
        self.r.insert((x.clone(), w.clone()), out.clone());
        out
    }

    fn p(&mut self, x: &WeylElement, w: &WeylElement) -> LaurentPoly {
        if let Some(p) = self.p.get(&(x.clone(), w.clone())) {
            return p.clone();
        }
        let out = if !self.leq(x, w) {
            LaurentPoly::zero()
        } else if x == w {
            LaurentPoly::one()
        } else {
            let mut rhs = LaurentPoly::zero();
            let ys: Vec<_> = self
                .elems
                .iter()
                .filter(|y| y.length() > x.length() && y.length() <= w.length())
                .cloned()
                .collect();
            for y in ys {
                if self.leq(x, &y) && self.leq(&y, w) {
                    rhs += &(&self.r(x, &y) * &self.p(&y, w));
                }
            }
            let d = (w.length() - x.length()) as i32;
            // P = -(rhs truncated to degrees below d/2)
            LaurentPoly::from_terms(rhs.terms().filter(|(e, _)| 2 * e < d).map(|(e, c)| (e, -c)))
        };
        self.p.insert((x.clone(), w.clone()), out.clone());
        out
    }
}

#[test]
fn quadratic_relation_and_length_additivity() {
    let kl = kl_for(GeneralizedCartanMatrix::a2());
    let alg = kl.algebra();
    let g = kl.group();
    let hs = alg.standard_word(&[0]).unwrap();
    let sq = alg.mult(&hs, &hs);
    let mut expected = hs.scale(&(&v(-1) - &v(1)));
    expected.add_term(&g.identity(), &LaurentPoly::one());
    assert_eq!(sq, expected);
    let h01 = alg.mult(&alg.standard_word(&[0]).unwrap(), &alg.standard_word(&[1]).unwrap());
    assert_eq!(h01, alg.standard_word(&[0, 1]).unwrap());
    let w = g.from_word(&[0, 1, 0]).unwrap();
    assert_eq!(alg.mult(&alg.one(), &alg.standard(w.clone())), alg.standard(w));
}

#[test]
fn kl_generator_is_standard_plus_v() {
    let kl = kl_for(GeneralizedCartanMatrix::b2());
    let g = kl.group();
    for s in 0..2 {
        let bs = kl.b(&g.generator(s).unwrap());
        assert_eq!(bs, kl.algebra().kl_generator(s));
        assert_eq!(bs.coeff(&g.identity()), v(1));
    }
    assert_eq!(kl.b(&g.identity()), kl.algebra().one());
}

#[test]
fn bar_is_independent_of_reduced_word_and_fixes_kl_basis() {
    for cartan in [GeneralizedCartanMatrix::a2(), GeneralizedCartanMatrix::b2(), GeneralizedCartanMatrix::affine_a1()] {
        let kl = kl_for(cartan);
        let alg = kl.algebra();
        for w in kl.group().elements_up_to(6) {
            let reference = alg.bar_standard(&w);
            for word in kl.group().reduced_words(&w) {
                assert_eq!(alg.bar_along_word(&word), reference, "bar(H_{w}) via {word:?}");
            }
            let bw = kl.b(&w);
            assert_eq!(alg.bar(&bw), bw, "b_{w} not bar invariant");
            assert_eq!(alg.bar(&alg.bar(&alg.standard(w.clone()))), alg.standard(w.clone()));
        }
    }
}

#[test]
fn kl_polynomials_match_r_polynomial_oracle() {
    for (cartan, bound) in [
        (GeneralizedCartanMatrix::a2(), 3),
        (GeneralizedCartanMatrix::b2(), 4),
        (GeneralizedCartanMatrix::a3(), 6),
        (GeneralizedCartanMatrix::affine_a1(), 6),
    ] {
        let kl = kl_for(cartan);
        let g = kl.group().clone();
        let mut oracle = RPolyOracle::new(&g, bound);
        let elems = g.elements_up_to(bound);
        for w in &elems {
            for u in &elems {
                if u.length() <= w.length() {
                    assert_eq!(kl.kl_poly(u, w), oracle.p(u, w), "P_{{{u},{w}}}");
                }
            }
        }
    }
}

#[test]
fn smallest_a3_element_with_nontrivial_kl_polynomial() {
    // Located with the R-polynomial oracle and frozen here.
    let kl = kl_for(GeneralizedCartanMatrix::a3());
    let g = kl.group().clone();
    let mut oracle = RPolyOracle::new(&g, 6);
    let elems = g.elements_up_to(6);
    let mut found = None;
    'outer: for w in &elems {
        for u in &elems {
            let p = oracle.p(u, w);
            if !p.is_zero() && p != LaurentPoly::one() {
                found = Some((u.clone(), w.clone(), p));
                break 'outer;
            }
        }
    }
    let (u, w, p) = found.unwrap();
    assert_eq!(u.word(), &[] as &[usize]);
    assert_eq!(w.word(), &[1, 0, 2, 1]);
    assert_eq!(p, LaurentPoly::from_coeffs(&[1, 1]));
    assert_eq!(kl.kl_poly(&u, &w), LaurentPoly::from_coeffs(&[1, 1]));
    assert_eq!(kl.kl_poly(&g.from_word(&[1]).unwrap(), &w), LaurentPoly::from_coeffs(&[1, 1]));
}

#[test]
fn dihedral_kl_polynomials_are_one() {
    let kl = kl_for(GeneralizedCartanMatrix::b2());
    let table = KlTable::compute(&kl, 4);
    assert!(table.invariant_violations(kl.group()).is_empty());
    assert!(table.entries.values().all(|p| *p == LaurentPoly::one()));
}

#[test]
fn table_invariants_hold() {
    for (cartan, bound) in [(GeneralizedCartanMatrix::a3(), 6), (GeneralizedCartanMatrix::affine_a1(), 8)] {
        let kl = kl_for(cartan);
        let table = KlTable::compute(&kl, bound);
        assert_eq!(table.invariant_violations(kl.group()), Vec::<String>::new());
    }
}

#[test]
fn products_have_parity_and_length_additive_multiplicity_one() {
    for cartan in [GeneralizedCartanMatrix::a2(), GeneralizedCartanMatrix::b2()] {
        let kl = kl_for(cartan);
        let g = kl.group().clone();
        let elems = g.elements_up_to(4);
        for x in &elems {
            for y in &elems {
                let prod = kl.kl_product(x, y);
                let total = (x.length() + y.length()) as i32;
                for (w, m) in prod.terms() {
                    assert!(m.has_nonnegative_coeffs());
                    for (e, _) in m.terms() {
                        assert_eq!((e - total + w.length() as i32).rem_euclid(2), 0);
                    }
                    assert_eq!(m.bar(), *m);
                }
                let xy = g.multiply(x, y);
                if xy.length() == x.length() + y.length() {
                    assert_eq!(prod.coeff(&xy), LaurentPoly::one());
                }
            }
        }
    }
}

#[test]
fn bs_squared_is_two_copies() {
    let kl = kl_for(GeneralizedCartanMatrix::a1());
    let s = kl.group().generator(0).unwrap();
    let prod = kl.kl_product(&s, &s);
    assert_eq!(prod.coeff(&s), &v(1) + &v(-1));
    assert_eq!(prod.terms().count(), 1);
}

#[test]
fn hom_pairing_values() {
    let kl = kl_for(GeneralizedCartanMatrix::a1());
    let g = kl.group().clone();
    let alg = kl.algebra();
    let e = alg.one();
    let hs = alg.standard(g.generator(0).unwrap());
    let bs = kl.b(&g.generator(0).unwrap());
    assert_eq!(hom_pairing(&kl, &e, &e), LaurentPoly::one());
    assert_eq!(hom_pairing(&kl, &bs, &bs), LaurentPoly::from_coeffs(&[1, 0, 1]));
    assert_eq!(hom_pairing(&kl, &e, &hs), LaurentPoly::zero());
}

#[test]
fn hom_pairing_is_positive_and_symmetric() {
    let kl = kl_for(GeneralizedCartanMatrix::b2());
    let g = kl.group().clone();
    let elems = g.elements_up_to(4);
    for x in &elems {
        for y in &elems {
            let p = hom_pairing(&kl, &kl.b(x), &kl.b(y));
            assert!(p.has_nonnegative_coeffs());
            assert_eq!(p, hom_pairing(&kl, &kl.b(y), &kl.b(x)));
            assert_eq!(p, hom_pairing(&kl, &kl.b(&g.inverse(x)), &kl.b(&g.inverse(y))));
        }
    }
}

fn a2_module(flavor: Flavor, theta: &[usize]) -> ParabolicModule {
    let kl = Arc::new(kl_for(GeneralizedCartanMatrix::a2()));
    let theta = kl.group().parabolic(theta).unwrap();
    ParabolicModule::new(kl, theta, flavor)
}

#[test]
fn antispherical_kills_b_theta() {
    let m = a2_module(Flavor::Antispherical, &[0]);
    let g = m.group().clone();
    let kl = KlBasis::for_group(g.clone());
    let b0 = kl.b(&g.generator(0).unwrap());
    assert!(m.act(&m.unit(), &b0).is_zero());
    let h1 = kl.algebra().standard(g.generator(1).unwrap());
    assert_eq!(m.act(&m.unit(), &h1), m.basis_element(&g.generator(1).unwrap()).unwrap());
}

#[test]
fn spherical_unit_is_fixed_by_identity() {
    let m = a2_module(Flavor::Spherical, &[0]);
    let alg = HeckeAlgebra::new(m.group().clone());
    assert_eq!(m.act(&m.unit(), &alg.one()), m.unit());
}

#[test]
fn parabolic_kl_values() {
    let sph = a2_module(Flavor::Spherical, &[0]);
    let anti = a2_module(Flavor::Antispherical, &[0]);
    let g = sph.group().clone();
    let theta = sph.theta().clone();
    let reps = g.coset_representatives(&theta, crate::coxeter::CosetSide::Left, crate::coxeter::CosetKind::Minimal, 3).unwrap();
    assert_eq!(reps.len(), 3);
    for w in &reps {
        for u in &reps {
            if g.bruhat_leq(u, w) {
                assert_eq!(sph.parabolic_kl(u, w).unwrap(), LaurentPoly::one(), "{u} {w}");
            }
        }
        assert_eq!(anti.parabolic_kl(w, w).unwrap(), LaurentPoly::one());
    }
    let s1s0 = g.from_word(&[1, 0]).unwrap();
    assert_eq!(anti.parabolic_kl(&g.identity(), &s1s0).unwrap(), LaurentPoly::zero());
    assert!(sph.parabolic_kl(&g.generator(0).unwrap(), &s1s0).is_err());
}

#[test]
fn parabolic_basis_is_bar_invariant() {
    for flavor in [Flavor::Spherical, Flavor::Antispherical] {
        let kl = Arc::new(kl_for(GeneralizedCartanMatrix::b2()));
        let theta = kl.group().parabolic(&[1]).unwrap();
        let m = ParabolicModule::new(kl.clone(), theta.clone(), flavor);
        for w in kl.group().elements_up_to(4) {
            if kl.group().is_minimal_left(&w, &theta) {
                let n = m.kl_element(&w).unwrap();
                assert_eq!(m.bar(&n), n);
            }
        }
    }
}

#[test]
fn empty_theta_recovers_ordinary_kl() {
    let kl = Arc::new(kl_for(GeneralizedCartanMatrix::a3()));
    let theta = kl.group().parabolic(&[]).unwrap();
    for flavor in [Flavor::Spherical, Flavor::Antispherical] {
        let m = ParabolicModule::new(kl.clone(), theta.clone(), flavor);
        for w in kl.group().elements_up_to(4) {
            for u in kl.group().elements_up_to(w.length()) {
                assert_eq!(m.parabolic_kl(&u, &w).unwrap(), kl.kl_poly(&u, &w));
            }
        }
    }
}

#[test]
fn cache_round_trip_and_validation() {
    let dir = std::env::temp_dir().join(format!("kmdual-cache-test-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let kl = kl_for(GeneralizedCartanMatrix::a3());
    let cold = cache::load_or_compute(&kl, 5, &dir).unwrap();
    assert_eq!(cold.provenance.source, TableSource::Computed);
    let warm = cache::load_or_compute(&kl, 5, &dir).unwrap();
    assert_eq!(warm.provenance.source, TableSource::Cache);
    assert_eq!(cold.entries, warm.entries);
    let path = cache::cache_path(&dir, &kl.group().realization().gcm_hash(), 5);
    cache::verify(&kl, &path).unwrap();

    // A table for another GCM is rejected.
    let other = kl_for(GeneralizedCartanMatrix::b2());
    assert!(cache::read_table(&path, other.group()).is_err());

    // A corrupted entry is caught when a larger table is recomputed.
    let text = std::fs::read_to_string(&path).unwrap();
    let corrupted = text.replacen("\"p\":[1,1]", "\"p\":[1,2]", 1);
    assert_ne!(text, corrupted);
    std::fs::write(&path, corrupted).unwrap();
    assert!(cache::verify(&kl, &path).is_err());
    assert!(cache::load_or_compute(&kl, 6, &dir).is_err());
    let _ = std::fs::remove_dir_all(&dir);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_associative(
        a in proptest::collection::vec(0usize..2, 0..5),
        b in proptest::collection::vec(0usize..2, 0..5),
        c in proptest::collection::vec(0usize..2, 0..5),
    ) {
        let kl = kl_for(GeneralizedCartanMatrix::affine_a1());
        let alg = kl.algebra();
        let x = alg.bott_samelson(&a);
        let y = alg.bott_samelson(&b);
        let z = alg.bott_samelson(&c);
        prop_assert_eq!(alg.mult(&alg.mult(&x, &y), &z), alg.mult(&x, &alg.mult(&y, &z)));
    }

    #[test]
    fn bar_is_an_antilinear_ring_map(
        a in proptest::collection::vec(0usize..3, 0..4),
        b in proptest::collection::vec(0usize..3, 0..4),
    ) {
        let kl = kl_for(GeneralizedCartanMatrix::a3());
        let alg = kl.algebra();
        let x = alg.standard_word(&a).unwrap().scale(&(&v(2) + &v(-1)));
        let y = alg.standard_word(&b).unwrap();
        prop_assert_eq!(alg.bar(&alg.mult(&x, &y)), alg.mult(&alg.bar(&x), &alg.bar(&y)));
    }

    #[test]
    fn kl_expansion_round_trips(word in proptest::collection::vec(0usize..2, 0..6)) {
        let kl = kl_for(GeneralizedCartanMatrix::b2());
        let h = kl.algebra().bott_samelson(&word);
        let back = kl.to_standard(&kl.to_kl(&h));
        prop_assert_eq!(back, h);
    }
}
