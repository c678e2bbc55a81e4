use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use super::algebra::HeckeElement;
use super::kl::{h_to_p, KlBasis};
use crate::coxeter::{ParabolicSubset, WeylElement, WeylGroup};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// `H_t` for `t` in Theta acts by `v^-1`.
    Spherical,
    /// `H_t` for `t` in Theta acts by `-v`.
    Antispherical,
}

impl Flavor {
    /// Scalar by which `H_t`, `t` in Theta, acts on the unit.
    pub fn scalar(self) -> LaurentPoly {
        match self {
            Flavor::Spherical => LaurentPoly::v_inv(),
            Flavor::Antispherical => LaurentPoly::monomial(-1, 1),
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Spherical => "spherical",
            Flavor::Antispherical => "antispherical",
        })
    }
}

/// Element of the right Hecke module induced from a one-dimensional
/// representation of the parabolic subalgebra; basis `N_x`, `x` minimal in
/// `W_Theta x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicModuleElement {
    pub theta: ParabolicSubset,
    pub flavor: Flavor,
    terms: BTreeMap<WeylElement, LaurentPoly>,
}

impl ParabolicModuleElement {
    pub fn zero(theta: ParabolicSubset, flavor: Flavor) -> Self {
        ParabolicModuleElement { theta, flavor, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, x: &WeylElement, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(x.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(x);
        }
    }

    pub fn add_scaled(&mut self, other: &ParabolicModuleElement, c: &LaurentPoly) {
        for (x, p) in &other.terms {
            self.add_term(x, &(p * c));
        }
    }

    pub fn coeff(&self, x: &WeylElement) -> LaurentPoly {
        self.terms.get(x).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&WeylElement, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// The (anti)spherical module for a parabolic subset.
#[derive(Debug)]
pub struct ParabolicModule {
    kl: Arc<KlBasis>,
    theta: ParabolicSubset,
    flavor: Flavor,
    cache: RwLock<HashMap<WeylElement, ParabolicModuleElement>>,
}

impl ParabolicModule {
    pub fn new(kl: Arc<KlBasis>, theta: ParabolicSubset, flavor: Flavor) -> Self {
        ParabolicModule { kl, theta, flavor, cache: RwLock::new(HashMap::new()) }
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        self.kl.group()
    }

    pub fn theta(&self) -> &ParabolicSubset {
        &self.theta
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn zero(&self) -> ParabolicModuleElement {
        ParabolicModuleElement::zero(self.theta.clone(), self.flavor)
    }

    pub fn basis_element(&self, x: &WeylElement) -> Result<ParabolicModuleElement> {
        if !self.group().is_minimal_left(x, &self.theta) {
            return Err(Error::NotMinimal(x.to_string()));
        }
        let mut m = self.zero();
        m.add_term(x, &LaurentPoly::one());
        Ok(m)
    }

    pub fn unit(&self) -> ParabolicModuleElement {
        self.basis_element(&self.group().identity()).expect("identity is minimal")
    }

    /// `m * H_s`
    pub fn act_gen(&self, m: &ParabolicModuleElement, s: usize) -> ParabolicModuleElement {
        let group = self.group();
        let quad = &LaurentPoly::v_inv() - &LaurentPoly::v();
        let scalar = self.flavor.scalar();
        let mut out = self.zero();
        for (x, p) in m.terms() {
            let xs = group.right_mul_gen(x, s);
            if group.is_minimal_left(&xs, &self.theta) {
                out.add_term(&xs, p);
                if xs.length() < x.length() {
                    out.add_term(x, &(p * &quad));
                }
            } else {
                out.add_term(x, &(p * &scalar));
            }
        }
        out
    }

    /// Right action of a Hecke element (either basis).
    pub fn act(&self, m: &ParabolicModuleElement, h: &HeckeElement) -> ParabolicModuleElement {
        let h = self.kl.to_standard(h);
        let mut out = self.zero();
        for (y, q) in h.terms() {
            let mut t = m.clone();
            for &s in y.word() {
                t = self.act_gen(&t, s);
            }
            out.add_scaled(&t, q);
        }
        out
    }

    /// `N_e * h`
    pub fn project(&self, h: &HeckeElement) -> ParabolicModuleElement {
        self.act(&self.unit(), h)
    }

    /// Bar involution `bar(N_e h) = N_e bar(h)`.
    pub fn bar(&self, m: &ParabolicModuleElement) -> ParabolicModuleElement {
        let alg = self.kl.algebra();
        let mut out = self.zero();
        for (x, p) in m.terms() {
            let t = self.project(&alg.bar_standard(x));
            out.add_scaled(&t, &p.bar());
        }
        out
    }

    /// Self-dual basis element `n_x = N_x + sum_{y<x} v Z[v] N_y`.
    pub fn kl_element(&self, x: &WeylElement) -> Result<ParabolicModuleElement> {
        if !self.group().is_minimal_left(x, &self.theta) {
            return Err(Error::NotMinimal(x.to_string()));
        }
        Ok(self.kl_element_unchecked(x))
    }

    fn kl_element_unchecked(&self, x: &WeylElement) -> ParabolicModuleElement {
        if let Some(m) = self.cache.read().unwrap().get(x) {
            return m.clone();
        }
        let m = if x.is_identity() {
            self.unit()
        } else {
            let s = *x.word().last().unwrap();
            let xs = self.group().right_mul_gen(x, s);
            let base = self.kl_element_unchecked(&xs);
            let mut c = self.act_gen(&base, s);
            c.add_scaled(&base, &LaurentPoly::v());
            loop {
                let next = c
                    .terms()
                    .filter(|(y, p)| *y != x && p.coeff(0) != 0)
                    .map(|(y, p)| (y.clone(), p.coeff(0)))
                    .next_back();
                let Some((y, c0)) = next else { break };
                let ny = self.kl_element_unchecked(&y);
                c.add_scaled(&ny, &LaurentPoly::monomial(-c0, 0));
            }
            for (y, p) in c.terms() {
                if y != x {
                    assert!(p.min_degree().unwrap() > 0, "parabolic KL recursion failed at {y} for {x}");
                }
            }
            c
        };
        self.cache.write().unwrap().insert(x.clone(), m.clone());
        m
    }

    /// Parabolic KL polynomial `m_{u,w}` in `q = v^-2`.
    pub fn parabolic_kl(&self, u: &WeylElement, w: &WeylElement) -> Result<LaurentPoly> {
        if !self.group().is_minimal_left(u, &self.theta) {
            return Err(Error::NotMinimal(u.to_string()));
        }
        let nw = self.kl_element(w)?;
        Ok(h_to_p(&nw.coeff(u), w.length() as i32 - u.length() as i32))
    }

    /// Expand in the self-dual basis `n_x`.
    pub fn to_kl(&self, m: &ParabolicModuleElement) -> BTreeMap<WeylElement, LaurentPoly> {
        let mut rest = m.clone();
        let mut out = BTreeMap::new();
        while let Some((x, p)) = rest.terms.iter().next_back().map(|(x, p)| (x.clone(), p.clone())) {
            rest.add_scaled(&self.kl_element_unchecked(&x), &-&p);
            out.insert(x, p);
        }
        out
    }
}
