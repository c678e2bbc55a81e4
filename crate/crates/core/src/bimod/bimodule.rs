use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::matrix::PolyMatrix;
use crate::coxeter::{Realization, RealizationDoc, WeylElement, WeylGroup};
use crate::error::{Error, Result};
use crate::linalg::{sparse_from_dense, Echelon, Rational};
use crate::polyring::{monomials_of_degree, GradedPoly, Monomial, PolyRing, Side};

/// Degree (internal polynomial grading) and Frobenius weight of a free
/// generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub degree: i32,
    pub weight: i32,
}

/// Graded `(S, S)`-bimodule, free as a right module with generators
/// `e_j`. For each variable `x_k` the matrix `left[k]` gives
/// `x_k . e_j = sum_i e_i left[k][i][j]`.
#[derive(Clone, Debug)]
pub struct Bimodule {
    ring: Arc<PolyRing>,
    gens: Vec<Generator>,
    left: Vec<PolyMatrix>,
    word: Option<Vec<usize>>,
}

impl PartialEq for Bimodule {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.gens == other.gens && self.left == other.left
    }
}

impl Bimodule {
    /// Build and validate: shapes, homogeneity of the action and pairwise
    /// commutation of the action matrices.
    pub fn new(ring: Arc<PolyRing>, gens: Vec<Generator>, left: Vec<PolyMatrix>, word: Option<Vec<usize>>) -> Result<Self> {
        let b = Bimodule { ring, gens, left, word };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.rank();
        if self.left.len() != self.ring.nvars() {
            return Err(Error::InvalidBimodule("one action matrix per variable required".into()));
        }
        for (k, m) in self.left.iter().enumerate() {
            if m.rows != n || m.cols != n {
                return Err(Error::InvalidBimodule(format!("action matrix {k} has the wrong shape")));
            }
            for ((i, j), p) in m.entries() {
                if p.is_zero() {
                    continue;
                }
                let want = self.gens[j].degree + 2 - self.gens[i].degree;
                if !p.is_homogeneous() || self.ring.grading(p) != Some(want) {
                    return Err(Error::InvalidBimodule(format!(
                        "x{k} entry ({i},{j}) = {p} should have degree {want}"
                    )));
                }
            }
        }
        self.check_commutation()
    }

    pub fn check_commutation(&self) -> Result<()> {
        for a in 0..self.left.len() {
            for b in a + 1..self.left.len() {
                if self.left[a].mul(&self.left[b]) != self.left[b].mul(&self.left[a]) {
                    return Err(Error::InvalidBimodule(format!("actions of x{a} and x{b} do not commute")));
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn side(&self) -> Side {
        self.ring.side()
    }

    pub fn realization(&self) -> &Arc<Realization> {
        self.ring.realization()
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn degree(&self, j: usize) -> i32 {
        self.gens[j].degree
    }

    pub fn left_action(&self, k: usize) -> &PolyMatrix {
        &self.left[k]
    }

    pub fn left_actions(&self) -> &[PolyMatrix] {
        &self.left
    }

    /// Word of the Bott–Samelson product this bimodule was built as, if any.
    pub fn word(&self) -> Option<&[usize]> {
        self.word.as_deref()
    }

    /// Right-module graded rank: generator count per degree.
    pub fn graded_rank(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for g in &self.gens {
            *out.entry(g.degree).or_insert(0) += 1;
        }
        out
    }

    /// Shift the internal grading down by `n` (`B[n]`), with the weight
    /// following the side's weight-per-degree rule.
    pub fn shifted(&self, n: i32) -> Bimodule {
        let sign = self.side().generator_weight() / 2;
        let mut out = self.clone();
        for g in &mut out.gens {
            g.degree -= n;
            g.weight -= sign * n;
        }
        out
    }

    /// `O(Gamma(w))`: rank one, left action of `f` is right multiplication by
    /// `w^-1 . f`. The generator sits at degree `-shift` and weight
    /// `-twist_doubled`.
    pub fn standard(ring: Arc<PolyRing>, group: &WeylGroup, w: &WeylElement, shift: i32, twist_doubled: i32) -> Bimodule {
        let winv = group.inverse(w);
        let n = ring.nvars();
        let images = ring.variable_images(&winv);
        let left = images.into_iter().map(|p| PolyMatrix::from_rows(vec![vec![p]], n)).collect();
        let b = Bimodule {
            ring,
            gens: vec![Generator { degree: -shift, weight: -twist_doubled }],
            left,
            word: if w.is_identity() { Some(Vec::new()) } else { None },
        };
        debug_assert!(b.validate().is_ok());
        b
    }

    /// The diagonal bimodule `S`.
    pub fn unit(ring: Arc<PolyRing>) -> Bimodule {
        let n = ring.nvars();
        let left = (0..n).map(|k| PolyMatrix::from_rows(vec![vec![GradedPoly::var(n, k)]], n)).collect();
        Bimodule { ring, gens: vec![Generator { degree: 0, weight: 0 }], left, word: Some(Vec::new()) }
    }

    /// `B_s = S (x)_{S^s} S` with right basis `1 (x) 1` (degree 0) and
    /// `d (x) 1` (degree 2), `d = alpha_s / 2`.
    pub fn elementary(ring: Arc<PolyRing>, s: usize) -> Result<Bimodule> {
        if s >= ring.rank() {
            return Err(Error::GeneratorOutOfRange { index: s, rank: ring.rank() });
        }
        let n = ring.nvars();
        let d2 = {
            let d = ring.half_root(s);
            &d * &d
        };
        let mut left = Vec::with_capacity(n);
        for k in 0..n {
            let (p, q) = ring.split_invariant(s, &ring.var(k));
            left.push(PolyMatrix::from_rows(vec![vec![p.clone(), &d2 * &q], vec![q, p]], n));
        }
        let w = ring.side().generator_weight();
        Bimodule::new(
            ring,
            vec![Generator { degree: 0, weight: 0 }, Generator { degree: 2, weight: w }],
            left,
            None,
        )
    }

    /// `B_s[1]`, generators in degrees `-1, 1`; the factor used in
    /// Bott–Samelson products.
    pub fn elementary_normalized(ring: Arc<PolyRing>, s: usize) -> Result<Bimodule> {
        let mut b = Self::elementary(ring, s)?.shifted(1);
        b.word = Some(vec![s]);
        Ok(b)
    }

    /// `B_{s1} (x) ... (x) B_{sm}` with each factor normalized as in
    /// [`Bimodule::elementary_normalized`].
    pub fn bott_samelson(ring: Arc<PolyRing>, word: &[usize]) -> Result<Bimodule> {
        let mut b = Self::unit(ring.clone());
        for &s in word {
            let bs = Self::elementary_normalized(ring.clone(), s)?;
            b = b.tensor(&bs)?;
        }
        Ok(b)
    }

    /// `rho(g)`: the matrix of left multiplication by an arbitrary
    /// polynomial.
    pub fn rho(&self, g: &GradedPoly) -> PolyMatrix {
        let mut cache: HashMap<Monomial, PolyMatrix> = HashMap::new();
        self.rho_cached(g, &mut cache)
    }

    pub(crate) fn rho_cached(&self, g: &GradedPoly, cache: &mut HashMap<Monomial, PolyMatrix>) -> PolyMatrix {
        let n = self.nvars();
        let r = self.rank();
        let mut out = PolyMatrix::zeros(r, r, n);
        for (m, c) in g.terms() {
            let mm = self.monomial_matrix(m, cache);
            out = out.axpy(&mm, c);
        }
        out
    }

    fn monomial_matrix(&self, m: &Monomial, cache: &mut HashMap<Monomial, PolyMatrix>) -> PolyMatrix {
        if let Some(x) = cache.get(m) {
            return x.clone();
        }
        let out = match m.0.iter().position(|&e| e > 0) {
            None => PolyMatrix::identity(self.rank(), self.nvars()),
            Some(k) => {
                let mut rest = m.clone();
                rest.0[k] -= 1;
                let prev = self.monomial_matrix(&rest, cache);
                self.left[k].mul(&prev)
            }
        };
        cache.insert(m.clone(), out.clone());
        out
    }

    /// Lift a matrix `phi` over `S` (a right-linear map `M -> N`) to
    /// `phi (x) id_C : M (x) C -> N (x) C`.
    pub fn lift_through(&self, phi: &PolyMatrix) -> PolyMatrix {
        let nc = self.rank();
        let mut cache = HashMap::new();
        let mut out = PolyMatrix::zeros(phi.rows * nc, phi.cols * nc, self.nvars());
        for a in 0..phi.rows {
            for i in 0..phi.cols {
                let g = phi.get(a, i);
                if g.is_zero() {
                    continue;
                }
                let block = self.rho_cached(g, &mut cache);
                for b in 0..nc {
                    for j in 0..nc {
                        let p = block.get(b, j);
                        if !p.is_zero() {
                            out.set(a * nc + b, i * nc + j, p.clone());
                        }
                    }
                }
            }
        }
        out
    }

    /// `self (x)_S other`, basis `e_a (x) f_b` indexed `a * rank(other) + b`.
    pub fn tensor(&self, other: &Bimodule) -> Result<Bimodule> {
        if self.ring != other.ring {
            return Err(Error::SideMismatch);
        }
        let nb = other.rank();
        let mut gens = Vec::with_capacity(self.rank() * nb);
        for g in &self.gens {
            for h in &other.gens {
                gens.push(Generator { degree: g.degree + h.degree, weight: g.weight + h.weight });
            }
        }
        let left = self.left.iter().map(|l| other.lift_through(l)).collect();
        let word = match (&self.word, &other.word) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        Ok(Bimodule { ring: self.ring.clone(), gens, left, word })
    }

    /// Reinterpret over the dual realization on the other side, negating
    /// weights. The action matrices are unchanged: the reflection action on
    /// `V_H^dual` for a realization is the action on `V_H` for its dual.
    pub fn dualize_side(&self) -> Bimodule {
        let ring = Arc::new(PolyRing::new(Arc::new(self.realization().dual()), self.side().flip()));
        Bimodule {
            ring,
            gens: self.gens.iter().map(|g| Generator { degree: g.degree, weight: -g.weight }).collect(),
            left: self.left.clone(),
            word: self.word.clone(),
        }
    }

    /// Graded dimensions of `B (x)_S Q` (right) or `Q (x)_S B` (left).
    pub fn specialize(&self, side: SpecializeSide) -> BTreeMap<i32, usize> {
        match side {
            SpecializeSide::Right => self.graded_rank(),
            SpecializeSide::Left => self.left_quotient_dims(),
        }
    }

    /// Degree-wise dimension of `B / (S_+ . B)`.
    fn left_quotient_dims(&self) -> BTreeMap<i32, usize> {
        let n = self.nvars();
        let mut out = BTreeMap::new();
        if self.gens.is_empty() {
            return out;
        }
        let min = self.gens.iter().map(|g| g.degree).min().unwrap();
        let max = self.gens.iter().map(|g| g.degree).max().unwrap();
        let mut zeros_in_a_row = 0;
        let mut d = min;
        loop {
            let basis = self.degree_basis(d);
            let index: HashMap<(usize, Monomial), usize> =
                basis.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
            let mut ech = Echelon::new(basis.len());
            for (j, m) in self.degree_basis(d - 2) {
                for k in 0..n {
                    let mut v = vec![Rational::from_integer(0.into()); basis.len()];
                    for i in 0..self.rank() {
                        let entry = self.left[k].get(i, j);
                        for (mono, c) in entry.terms() {
                            let key = (i, mono.mul(&m));
                            v[index[&key]] += c;
                        }
                    }
                    ech.insert(sparse_from_dense(&v));
                }
            }
            let dim = basis.len() - ech.rank();
            if dim > 0 {
                out.insert(d, dim);
                zeros_in_a_row = 0;
            } else if d >= max {
                zeros_in_a_row += 1;
                if zeros_in_a_row >= 2 {
                    break;
                }
            }
            d += 1;
            debug_assert!(n > 0 || d <= max + 2);
        }
        out
    }

    /// Q-basis of the degree-`d` part: pairs (generator, monomial).
    pub(crate) fn degree_basis(&self, d: i32) -> Vec<(usize, Monomial)> {
        let n = self.nvars();
        let mut out = Vec::new();
        for (j, g) in self.gens.iter().enumerate() {
            let diff = d - g.degree;
            if diff >= 0 && diff % 2 == 0 {
                for m in monomials_of_degree(n, (diff / 2) as u32) {
                    out.push((j, m));
                }
            }
        }
        out
    }

    pub fn to_doc(&self) -> BimoduleDoc {
        BimoduleDoc {
            side: self.side(),
            realization: self.realization().to_doc(),
            generators: self.gens.clone(),
            left_action: self
                .left
                .iter()
                .map(|m| (0..m.rows).map(|i| (0..m.cols).map(|j| m.get(i, j).to_text()).collect()).collect())
                .collect(),
            word: self.word.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("bimodule serializes")
    }

    pub fn from_doc(doc: &BimoduleDoc) -> Result<Bimodule> {
        let real = Arc::new(Realization::from_doc(doc.realization.clone())?);
        let ring = Arc::new(PolyRing::new(real, doc.side));
        let n = ring.nvars();
        let mut left = Vec::with_capacity(doc.left_action.len());
        for m in &doc.left_action {
            let rows = m
                .iter()
                .map(|row| row.iter().map(|t| GradedPoly::from_text(n, t)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            left.push(PolyMatrix::from_rows(rows, n));
        }
        Bimodule::new(ring, doc.generators.clone(), left, doc.word.clone())
    }

    pub fn from_json(text: &str) -> Result<Bimodule> {
        let doc: BimoduleDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_doc(&doc)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpecializeSide {
    Left,
    Right,
}

/// Fixture format: generator labels and action matrices in canonical
/// polynomial text.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BimoduleDoc {
    pub side: Side,
    pub realization: RealizationDoc,
    pub generators: Vec<Generator>,
    pub left_action: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<Vec<usize>>,
}
