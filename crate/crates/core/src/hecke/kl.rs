use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use super::algebra::{Basis, HeckeAlgebra, HeckeElement};
use crate::coxeter::{WeylElement, WeylGroup};
use crate::laurent::LaurentPoly;

/// Power of `v` multiplying `epsilon(iota(x) y)` in [`hom_pairing`].
/// Fixed by the rank-one calibration test `calibration_matches_end_of_bs`
/// in the bimodule crate tests: with `b_s = H_s + v` the raw value
/// `1 + v^2` already equals the graded rank of `End(B_s)`.
pub const HOM_PAIRING_NORMALIZATION: i32 = 0;

/// Lazily filled table of Kazhdan–Lusztig basis elements.
///
/// Readers share a read lock; computing a missing `b_w` takes the write lock
/// only to insert.
#[derive(Debug)]
pub struct KlBasis {
    algebra: Arc<HeckeAlgebra>,
    cache: RwLock<HashMap<WeylElement, HeckeElement>>,
}

impl KlBasis {
    pub fn new(algebra: Arc<HeckeAlgebra>) -> Self {
        KlBasis { algebra, cache: RwLock::new(HashMap::new()) }
    }

    pub fn for_group(group: Arc<WeylGroup>) -> Self {
        Self::new(Arc::new(HeckeAlgebra::new(group)))
    }

    pub fn algebra(&self) -> &Arc<HeckeAlgebra> {
        &self.algebra
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        self.algebra.group()
    }

    /// `b_w` expanded in the standard basis.
    pub fn b(&self, w: &WeylElement) -> HeckeElement {
        if let Some(h) = self.cache.read().unwrap().get(w) {
            return h.clone();
        }
        let h = self.compute(w);
        self.cache.write().unwrap().insert(w.clone(), h.clone());
        h
    }

    fn compute(&self, w: &WeylElement) -> HeckeElement {
        let alg = &self.algebra;
        let group = alg.group();
        if w.is_identity() {
            return alg.one();
        }
        let s = *w.word().last().unwrap();
        let x = group.right_mul_gen(w, s);
        let bx = self.b(&x);
        let mut c = alg.mul_gen_right(&bx, s);
        c.add_scaled(&bx, &LaurentPoly::v());
        // Strip constant terms top-down; each subtraction only touches
        // strictly smaller elements.
        loop {
            let next = c
                .terms()
                .filter(|(y, p)| *y != w && p.coeff(0) != 0)
                .map(|(y, p)| (y.clone(), p.coeff(0)))
                .next_back();
            let Some((y, c0)) = next else { break };
            let by = self.b(&y);
            c.add_scaled(&by, &LaurentPoly::monomial(-c0, 0));
        }
        debug_assert_eq!(c.coeff(w), LaurentPoly::one());
        for (y, p) in c.terms() {
            if y != w {
                assert!(
                    p.min_degree().unwrap() > 0,
                    "KL recursion left a non-positive power at {y} in b_{w}: {p}"
                );
            }
        }
        c
    }

    /// `h_{u,w}`, the coefficient of `H_u` in `b_w`.
    pub fn h(&self, u: &WeylElement, w: &WeylElement) -> LaurentPoly {
        self.b(w).coeff(u)
    }

    /// `P_{u,w}` as a polynomial in `q = v^-2`, recovered from
    /// `h_{u,w} = v^{l(w)-l(u)} P_{u,w}(v^-2)`.
    pub fn kl_poly(&self, u: &WeylElement, w: &WeylElement) -> LaurentPoly {
        h_to_p(&self.h(u, w), w.length() as i32 - u.length() as i32)
    }

    /// Expand a standard-basis element in the KL basis.
    pub fn to_kl(&self, h: &HeckeElement) -> HeckeElement {
        assert_eq!(h.basis(), Basis::Standard);
        let mut rest = h.clone();
        let mut out = HeckeElement::zero(Basis::KazhdanLusztig);
        while let Some((w, p)) = rest.top().map(|(w, p)| (w.clone(), p.clone())) {
            out.add_term(&w, &p);
            rest.add_scaled(&self.b(&w), &-&p);
        }
        out
    }

    /// Expand a KL-basis element in the standard basis.
    pub fn to_standard(&self, h: &HeckeElement) -> HeckeElement {
        match h.basis() {
            Basis::Standard => h.clone(),
            Basis::KazhdanLusztig => {
                let mut out = HeckeElement::zero(Basis::Standard);
                for (w, p) in h.terms() {
                    out.add_scaled(&self.b(w), p);
                }
                out
            }
        }
    }

    /// `b_x b_y` in the KL basis.
    pub fn kl_product(&self, x: &WeylElement, y: &WeylElement) -> HeckeElement {
        let prod = self.algebra.mult(&self.b(x), &self.b(y));
        self.to_kl(&prod)
    }
}

/// Convert `h_{u,w}` to `P_{u,w}(q)` given `l(w) - l(u)`.
pub fn h_to_p(h: &LaurentPoly, length_diff: i32) -> LaurentPoly {
    LaurentPoly::from_terms(h.terms().map(|(e, c)| {
        let k = length_diff - e;
        assert!(k % 2 == 0, "parity violation in KL coefficient {h}");
        (k / 2, c)
    }))
}

/// `P(q) -> v^{d} P(v^-2)`
pub fn p_to_h(p: &LaurentPoly, length_diff: i32) -> LaurentPoly {
    LaurentPoly::from_terms(p.terms().map(|(k, c)| (length_diff - 2 * k, c)))
}

/// `epsilon(iota(x) y)` times the pinned normalization. Arguments may be in
/// either basis.
pub fn hom_pairing(kl: &KlBasis, x: &HeckeElement, y: &HeckeElement) -> LaurentPoly {
    let alg = kl.algebra();
    let xs = kl.to_standard(x);
    let ys = kl.to_standard(y);
    // epsilon(iota(x) y) = sum_w x_w y_w since epsilon(H_{w^-1} H_u) = [u = w].
    let mut out = LaurentPoly::zero();
    for (w, p) in xs.terms() {
        let q = ys.coeff(w);
        if !q.is_zero() {
            out += &(p * &q);
        }
    }
    debug_assert_eq!(out, alg.epsilon(&alg.mult(&alg.iota(&xs), &ys)));
    out.shift(HOM_PAIRING_NORMALIZATION)
}

/// Where a table came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub gcm_hash: String,
    pub convention: u32,
    pub max_length: usize,
    pub source: TableSource,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableSource {
    Computed,
    Cache,
}

/// Version of the Hecke conventions baked into stored tables.
pub const CONVENTION_VERSION: u32 = 1;

/// All nonzero `P_{u,w}` with `l(w) <= max_length`.
#[derive(Clone, Debug)]
pub struct KlTable {
    pub entries: BTreeMap<(WeylElement, WeylElement), LaurentPoly>,
    pub dirty: bool,
    pub provenance: Provenance,
}

impl KlTable {
    pub fn compute(kl: &KlBasis, max_length: usize) -> Self {
        let group = kl.group();
        let mut entries = BTreeMap::new();
        for w in group.elements_up_to(max_length) {
            let bw = kl.b(&w);
            for (u, h) in bw.terms() {
                let p = h_to_p(h, w.length() as i32 - u.length() as i32);
                if !p.has_nonnegative_coeffs() {
                    panic!("negative KL coefficient: P_{{{u},{w}}} = {}", p.render("q"));
                }
                entries.insert((u.clone(), w.clone()), p);
            }
        }
        KlTable {
            entries,
            dirty: true,
            provenance: Provenance {
                gcm_hash: group.realization().gcm_hash(),
                convention: CONVENTION_VERSION,
                max_length,
                source: TableSource::Computed,
            },
        }
    }

    pub fn get(&self, u: &WeylElement, w: &WeylElement) -> LaurentPoly {
        self.entries.get(&(u.clone(), w.clone())).cloned().unwrap_or_default()
    }

    /// Violations of `P_{w,w} = 1`, support in the Bruhat interval, degree
    /// bound and positivity.
    pub fn invariant_violations(&self, group: &WeylGroup) -> Vec<String> {
        let mut out = Vec::new();
        for ((u, w), p) in &self.entries {
            if u == w {
                if *p != LaurentPoly::one() {
                    out.push(format!("P_{{{w},{w}}} = {}", p.render("q")));
                }
                continue;
            }
            if !group.bruhat_leq(u, w) {
                out.push(format!("P_{{{u},{w}}} nonzero but {u} is not below {w}"));
            }
            let deg = p.max_degree().unwrap_or(0);
            if 2 * deg >= w.length() as i32 - u.length() as i32 {
                out.push(format!("degree bound fails for P_{{{u},{w}}} = {}", p.render("q")));
            }
            if !p.has_nonnegative_coeffs() || p.min_degree().unwrap_or(0) < 0 {
                out.push(format!("P_{{{u},{w}}} = {} is not a positive polynomial", p.render("q")));
            }
        }
        for w in self.entries.keys().map(|(_, w)| w) {
            if !self.entries.contains_key(&(w.clone(), w.clone())) {
                out.push(format!("missing diagonal entry for {w}"));
            }
        }
        out
    }

    /// Entries on which `other` disagrees with this table, restricted to the
    /// common length range.
    pub fn mismatches(&self, other: &KlTable) -> Vec<(WeylElement, WeylElement)> {
        let bound = self.provenance.max_length.min(other.provenance.max_length);
        let keys: std::collections::BTreeSet<_> = self
            .entries
            .keys()
            .chain(other.entries.keys())
            .filter(|(_, w)| w.length() <= bound)
            .cloned()
            .collect();
        keys.into_iter().filter(|(u, w)| self.get(u, w) != other.get(u, w)).collect()
    }
}
