use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use crate::coxeter::{WeylElement, WeylGroup};
use crate::laurent::LaurentPoly;

/// Which basis the coefficients of a [`HeckeElement`] refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    /// `H_w`
    Standard,
    /// `b_w`
    KazhdanLusztig,
}

/// Finite linear combination of basis elements indexed by the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeElement {
    basis: Basis,
    terms: BTreeMap<WeylElement, LaurentPoly>,
}

impl HeckeElement {
    pub fn zero(basis: Basis) -> Self {
        HeckeElement { basis, terms: BTreeMap::new() }
    }

    pub fn basis_element(basis: Basis, w: WeylElement) -> Self {
        Self::term(basis, w, LaurentPoly::one())
    }

    pub fn term(basis: Basis, w: WeylElement, c: LaurentPoly) -> Self {
        let mut h = Self::zero(basis);
        h.add_term(&w, &c);
        h
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn add_term(&mut self, w: &WeylElement, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(w);
        }
    }

    pub fn add_scaled(&mut self, other: &HeckeElement, c: &LaurentPoly) {
        assert_eq!(self.basis, other.basis, "mixing bases");
        for (w, p) in &other.terms {
            self.add_term(w, &(p * c));
        }
    }

    pub fn coeff(&self, w: &WeylElement) -> LaurentPoly {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&WeylElement, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> Vec<WeylElement> {
        self.terms.keys().cloned().collect()
    }

    /// Element of maximal length in the support (maximal in Bruhat order
    /// among the support).
    pub fn top(&self) -> Option<(&WeylElement, &LaurentPoly)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero(self.basis);
        out.add_scaled(self, c);
        out
    }
}

/// Hecke algebra of a Weyl group over `Z[v, v^-1]` with quadratic relation
/// `H_s^2 = (v^-1 - v) H_s + H_e`.
#[derive(Debug)]
pub struct HeckeAlgebra {
    group: Arc<WeylGroup>,
    bar_cache: RwLock<HashMap<WeylElement, HeckeElement>>,
}

impl HeckeAlgebra {
    pub fn new(group: Arc<WeylGroup>) -> Self {
        HeckeAlgebra { group, bar_cache: RwLock::new(HashMap::new()) }
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    pub fn one(&self) -> HeckeElement {
        self.standard(self.group.identity())
    }

    pub fn standard(&self, w: WeylElement) -> HeckeElement {
        HeckeElement::basis_element(Basis::Standard, w)
    }

    pub fn standard_word(&self, word: &[usize]) -> crate::Result<HeckeElement> {
        Ok(self.standard(self.group.from_word(word)?))
    }

    /// `b_s = H_s + v`
    pub fn kl_generator(&self, s: usize) -> HeckeElement {
        let mut h = self.standard(self.group.generator(s).expect("generator in range"));
        h.add_term(&self.group.identity(), &LaurentPoly::v());
        h
    }

    /// `h * H_s`
    pub fn mul_gen_right(&self, h: &HeckeElement, s: usize) -> HeckeElement {
        assert_eq!(h.basis, Basis::Standard);
        let mut out = HeckeElement::zero(Basis::Standard);
        let quad = &LaurentPoly::v_inv() - &LaurentPoly::v();
        for (x, p) in &h.terms {
            let xs = self.group.right_mul_gen(x, s);
            out.add_term(&xs, p);
            if x.is_right_descent(s) {
                out.add_term(x, &(p * &quad));
            }
        }
        out
    }

    /// `H_s * h`
    pub fn mul_gen_left(&self, s: usize, h: &HeckeElement) -> HeckeElement {
        assert_eq!(h.basis, Basis::Standard);
        let mut out = HeckeElement::zero(Basis::Standard);
        let quad = &LaurentPoly::v_inv() - &LaurentPoly::v();
        for (x, p) in &h.terms {
            let sx = self.group.left_mul_gen(s, x);
            out.add_term(&sx, p);
            if x.is_left_descent(s) {
                out.add_term(x, &(p * &quad));
            }
        }
        out
    }

    /// Product in the standard basis.
    pub fn mult(&self, a: &HeckeElement, b: &HeckeElement) -> HeckeElement {
        assert_eq!(a.basis, Basis::Standard, "multiplication needs the standard basis");
        assert_eq!(b.basis, Basis::Standard, "multiplication needs the standard basis");
        let mut out = HeckeElement::zero(Basis::Standard);
        for (y, q) in &b.terms {
            let mut t = a.clone();
            for &s in y.word() {
                t = self.mul_gen_right(&t, s);
            }
            out.add_scaled(&t, q);
        }
        out
    }

    /// Product of `b_s` over the word, i.e. the character of a
    /// Bott–Samelson object.
    pub fn bott_samelson(&self, word: &[usize]) -> HeckeElement {
        let mut h = self.one();
        for &s in word {
            let hs = self.mul_gen_right(&h, s);
            h = {
                let mut t = hs;
                t.add_scaled(&h, &LaurentPoly::v());
                t
            };
        }
        h
    }

    /// `bar(H_x)`, built along the canonical word with
    /// `bar(H_s) = H_s + (v - v^-1) H_e`.
    pub fn bar_standard(&self, x: &WeylElement) -> HeckeElement {
        if let Some(h) = self.bar_cache.read().unwrap().get(x) {
            return h.clone();
        }
        let h = self.bar_along_word(x.word());
        self.bar_cache.write().unwrap().insert(x.clone(), h.clone());
        h
    }

    /// `bar(H_{s1}) ... bar(H_{sk})` for an arbitrary word.
    pub fn bar_along_word(&self, word: &[usize]) -> HeckeElement {
        let mut h = self.one();
        let c = &LaurentPoly::v() - &LaurentPoly::v_inv();
        for &s in word {
            let mut t = self.mul_gen_right(&h, s);
            t.add_scaled(&h, &c);
            h = t;
        }
        h
    }

    pub fn bar(&self, h: &HeckeElement) -> HeckeElement {
        assert_eq!(h.basis, Basis::Standard);
        let mut out = HeckeElement::zero(Basis::Standard);
        for (x, p) in &h.terms {
            out.add_scaled(&self.bar_standard(x), &p.bar());
        }
        out
    }

    /// Anti-involution `H_w -> H_{w^-1}`, coefficients unchanged.
    pub fn iota(&self, h: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero(h.basis);
        for (x, p) in &h.terms {
            out.add_term(&self.group.inverse(x), p);
        }
        out
    }

    /// Coefficient of `H_e`.
    pub fn epsilon(&self, h: &HeckeElement) -> LaurentPoly {
        assert_eq!(h.basis, Basis::Standard);
        h.coeff(&self.group.identity())
    }
}
