//! Weyl group elements in ShortLex normal form, Bruhat order and parabolic
//! cosets.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::coxeter::cartan::{GeneralizedCartanMatrix, Realization};
use crate::error::{Error, Result};

/// Element cap when enumerating a parabolic subgroup to decide finiteness.
pub const FINITE_TYPE_ELEMENT_CAP: usize = 1_000_000;

/// A Weyl group element.
///
/// `word` is the lexicographically least reduced word. `root_action` is the
/// matrix of the element on the root lattice in simple-root coordinates
/// (column `j` is `w(alpha_j)`), and `root_action_inv` that of its inverse.
#[derive(Clone)]
pub struct WeylElement {
    word: Vec<usize>,
    rank: usize,
    root_action: Vec<i64>,
    root_action_inv: Vec<i64>,
}

impl WeylElement {
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// `w(alpha_j)` in simple-root coordinates.
    pub fn image_of_simple_root(&self, j: usize) -> Vec<i64> {
        (0..self.rank).map(|r| self.root_action[r * self.rank + j]).collect()
    }

    /// Apply to a root-lattice vector in simple-root coordinates.
    pub fn act_on_root(&self, v: &[i64]) -> Vec<i64> {
        (0..self.rank)
            .map(|r| (0..self.rank).map(|c| self.root_action[r * self.rank + c] * v[c]).sum())
            .collect()
    }

    fn col_negative(m: &[i64], n: usize, j: usize) -> bool {
        (0..n).any(|r| m[r * n + j] < 0)
    }

    pub fn is_left_descent(&self, s: usize) -> bool {
        Self::col_negative(&self.root_action_inv, self.rank, s)
    }

    pub fn is_right_descent(&self, s: usize) -> bool {
        Self::col_negative(&self.root_action, self.rank, s)
    }

    pub fn left_descents(&self) -> Vec<usize> {
        (0..self.rank).filter(|&s| self.is_left_descent(s)).collect()
    }

    pub fn right_descents(&self) -> Vec<usize> {
        (0..self.rank).filter(|&s| self.is_right_descent(s)).collect()
    }
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.word == other.word
    }
}

impl Eq for WeylElement {}

impl Hash for WeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.word.hash(state);
    }
}

impl PartialOrd for WeylElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// ShortLex: by length, then by canonical word.
impl Ord for WeylElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.word.len(), &self.word).cmp(&(other.word.len(), &other.word))
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_word(&self.word))
    }
}

/// `e` for the empty word, otherwise `s0s1s0`; indices of two or more
/// digits are bracketed (`s[12]`).
pub fn format_word(word: &[usize]) -> String {
    if word.is_empty() {
        return "e".into();
    }
    word.iter()
        .map(|&i| if i < 10 { format!("s{i}") } else { format!("s[{i}]") })
        .collect()
}

/// Parses `e`, the empty string, `0,1,0`, `010` (one digit per letter),
/// `s0s1s0` or `s[12]s0`.
pub fn parse_word(text: &str) -> Result<Vec<usize>> {
    let t = text.trim();
    if t.is_empty() || t == "e" {
        return Ok(Vec::new());
    }
    if t.chars().all(|c| c.is_ascii_digit()) {
        return Ok(t.chars().map(|c| c.to_digit(10).unwrap() as usize).collect());
    }
    if t.contains(',') {
        return t
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|e| Error::Parse(format!("bad word {text:?}: {e}"))))
            .collect();
    }
    let mut out = Vec::new();
    let mut chars = t.chars().peekable();
    while let Some(c) = chars.next() {
        if c != 's' {
            return Err(Error::Parse(format!("bad word {text:?}")));
        }
        match chars.next() {
            Some('[') => {
                let mut num = String::new();
                for d in chars.by_ref() {
                    if d == ']' {
                        break;
                    }
                    num.push(d);
                }
                out.push(num.parse().map_err(|_| Error::Parse(format!("bad word {text:?}")))?);
            }
            Some(d) if d.is_ascii_digit() => out.push(d.to_digit(10).unwrap() as usize),
            _ => return Err(Error::Parse(format!("bad word {text:?}"))),
        }
    }
    Ok(out)
}

/// Which side the parabolic subgroup acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CosetSide {
    /// Cosets `W_Theta \ W`; representatives are judged by left descents.
    Left,
    /// Cosets `W / W_Theta`; representatives are judged by right descents.
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CosetKind {
    Minimal,
    Maximal,
}

/// A subset of simple reflections with its finiteness status.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParabolicSubset {
    generators: Vec<usize>,
    finite_type: bool,
}

impl ParabolicSubset {
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn finite_type(&self) -> bool {
        self.finite_type
    }

    pub fn contains(&self, s: usize) -> bool {
        self.generators.binary_search(&s).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    fn require_finite(&self) -> Result<()> {
        if self.finite_type {
            Ok(())
        } else {
            Err(Error::NotFiniteType(self.generators.clone()))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum EnumerationStatus {
    Complete,
    LengthCapped,
    ElementCapped,
}

struct Enumeration {
    elements: Vec<WeylElement>,
    status: EnumerationStatus,
}

/// A Weyl group determined by a realization, with cached simple reflections.
#[derive(Debug)]
pub struct WeylGroup {
    realization: Arc<Realization>,
    rank: usize,
    simple: Vec<Vec<i64>>,
    identity: WeylElement,
}

impl WeylGroup {
    pub fn new(realization: Realization) -> Self {
        Self::from_arc(Arc::new(realization))
    }

    pub fn from_arc(realization: Arc<Realization>) -> Self {
        let n = realization.rank();
        let a = &realization.cartan;
        let simple = (0..n)
            .map(|i| {
                let mut m = vec![0i64; n * n];
                for j in 0..n {
                    m[j * n + j] = 1;
                    // s_i(alpha_j) = alpha_j - a[i][j] alpha_i
                    m[i * n + j] -= a.entry(i, j);
                }
                m
            })
            .collect();
        let mut id = vec![0i64; n * n];
        for i in 0..n {
            id[i * n + i] = 1;
        }
        let identity = WeylElement { word: Vec::new(), rank: n, root_action: id.clone(), root_action_inv: id };
        WeylGroup { realization, rank: n, simple, identity }
    }

    pub fn from_cartan(cartan: GeneralizedCartanMatrix) -> Self {
        Self::new(Realization::minimal(cartan))
    }

    pub fn realization(&self) -> &Arc<Realization> {
        &self.realization
    }

    pub fn cartan(&self) -> &GeneralizedCartanMatrix {
        &self.realization.cartan
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn identity(&self) -> WeylElement {
        self.identity.clone()
    }

    fn matmul(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let n = self.rank;
        let mut out = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = a[i * n + k];
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += x * b[k * n + j];
                }
            }
        }
        out
    }

    fn check_gen(&self, s: usize) -> Result<()> {
        if s < self.rank {
            Ok(())
        } else {
            Err(Error::GeneratorOutOfRange { index: s, rank: self.rank })
        }
    }

    /// Build the element from its action matrices by peeling the smallest
    /// left descent until the identity is reached.
    fn normalize(&self, action: Vec<i64>, action_inv: Vec<i64>) -> WeylElement {
        let n = self.rank;
        let mut word = Vec::new();
        let mut inv = action_inv.clone();
        loop {
            let Some(s) = (0..n).find(|&s| WeylElement::col_negative(&inv, n, s)) else {
                break;
            };
            word.push(s);
            // w <- s w, so w^{-1} <- w^{-1} s
            inv = self.matmul(&inv, &self.simple[s]);
        }
        WeylElement { word, rank: n, root_action: action, root_action_inv: action_inv }
    }

    pub fn generator(&self, s: usize) -> Result<WeylElement> {
        self.check_gen(s)?;
        Ok(self.normalize(self.simple[s].clone(), self.simple[s].clone()))
    }

    /// Product of the generators in `word` (any word, reduced or not).
    pub fn from_word(&self, word: &[usize]) -> Result<WeylElement> {
        let mut m = self.identity.root_action.clone();
        let mut minv = m.clone();
        for &s in word {
            self.check_gen(s)?;
            m = self.matmul(&m, &self.simple[s]);
            minv = self.matmul(&self.simple[s], &minv);
        }
        Ok(self.normalize(m, minv))
    }

    /// Like [`from_word`](Self::from_word) but rejects non-reduced words.
    pub fn from_reduced_word(&self, word: &[usize]) -> Result<WeylElement> {
        let w = self.from_word(word)?;
        if w.length() != word.len() {
            return Err(Error::NotReduced(word.to_vec()));
        }
        Ok(w)
    }

    pub fn multiply(&self, u: &WeylElement, v: &WeylElement) -> WeylElement {
        let m = self.matmul(&u.root_action, &v.root_action);
        let minv = self.matmul(&v.root_action_inv, &u.root_action_inv);
        self.normalize(m, minv)
    }

    pub fn left_mul_gen(&self, s: usize, w: &WeylElement) -> WeylElement {
        let m = self.matmul(&self.simple[s], &w.root_action);
        let minv = self.matmul(&w.root_action_inv, &self.simple[s]);
        self.normalize(m, minv)
    }

    pub fn right_mul_gen(&self, w: &WeylElement, s: usize) -> WeylElement {
        let m = self.matmul(&w.root_action, &self.simple[s]);
        let minv = self.matmul(&self.simple[s], &w.root_action_inv);
        self.normalize(m, minv)
    }

    pub fn inverse(&self, w: &WeylElement) -> WeylElement {
        self.normalize(w.root_action_inv.clone(), w.root_action.clone())
    }

    /// Matrix of `w` acting on `V_H` (column convention), from its word.
    pub fn matrix_on_vh(&self, w: &WeylElement) -> Vec<Vec<i64>> {
        self.word_matrix(w, |i| self.realization.reflection_on_vh(i))
    }

    /// Matrix of `w` acting on `V_H^dual` (column convention).
    pub fn matrix_on_dual(&self, w: &WeylElement) -> Vec<Vec<i64>> {
        self.word_matrix(w, |i| self.realization.reflection_on_dual(i))
    }

    fn word_matrix(&self, w: &WeylElement, refl: impl Fn(usize) -> Vec<Vec<i64>>) -> Vec<Vec<i64>> {
        let d = self.realization.dim_h;
        let mut m: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
        for &s in w.word() {
            let r = refl(s);
            m = (0..d).map(|i| (0..d).map(|j| (0..d).map(|k| m[i][k] * r[k][j]).sum()).collect()).collect();
        }
        m
    }

    /// All elements of length at most `length_bound`, in ShortLex order.
    pub fn elements_up_to(&self, length_bound: usize) -> Vec<WeylElement> {
        self.enumerate(&(0..self.rank).collect::<Vec<_>>(), length_bound, usize::MAX)
            .elements
    }

    /// Elements of the subgroup generated by `gens`, by breadth-first search,
    /// stopping at a length bound or an element cap.
    fn enumerate(&self, gens: &[usize], length_bound: usize, cap: usize) -> Enumeration {
        let mut all = vec![self.identity()];
        let mut level = vec![self.identity()];
        for _ in 0..length_bound {
            let mut next: BTreeSet<WeylElement> = BTreeSet::new();
            for w in &level {
                for &s in gens {
                    if !w.is_right_descent(s) {
                        next.insert(self.right_mul_gen(w, s));
                    }
                }
            }
            if next.is_empty() {
                return Enumeration { elements: all, status: EnumerationStatus::Complete };
            }
            level = next.into_iter().collect();
            all.extend(level.iter().cloned());
            if all.len() > cap {
                return Enumeration { elements: all, status: EnumerationStatus::ElementCapped };
            }
        }
        let extends = level.iter().any(|w| gens.iter().any(|&s| !w.is_right_descent(s)));
        let status = if extends { EnumerationStatus::LengthCapped } else { EnumerationStatus::Complete };
        Enumeration { elements: all, status }
    }

    /// Build a parabolic subset, deciding finiteness twice: by principal
    /// minors of the sub-matrix and by enumeration of `W_Theta`.
    pub fn parabolic(&self, gens: &[usize]) -> Result<ParabolicSubset> {
        let mut generators = gens.to_vec();
        generators.sort_unstable();
        generators.dedup();
        for &s in &generators {
            self.check_gen(s)?;
        }
        let by_minors = self.cartan().is_finite_type_on(&generators);
        let k = generators.len();
        // longest elements of finite Weyl groups of rank k have length <= max(k^2, 120)
        let length_cap = (k * k).max(120);
        let by_enumeration = match self.enumerate(&generators, length_cap, FINITE_TYPE_ELEMENT_CAP).status {
            EnumerationStatus::Complete => Some(true),
            EnumerationStatus::LengthCapped => Some(false),
            EnumerationStatus::ElementCapped => None,
        };
        if let Some(fin) = by_enumeration {
            assert_eq!(fin, by_minors, "finite-type classification disagrees with enumeration for {generators:?}");
        }
        Ok(ParabolicSubset { generators, finite_type: by_minors })
    }

    pub fn full_parabolic(&self) -> Result<ParabolicSubset> {
        self.parabolic(&(0..self.rank).collect::<Vec<_>>())
    }

    /// Bruhat order via the descent recursion: for a left descent `s` of
    /// `w`, `u <= w` iff `min(u, su) <= sw`.
    pub fn bruhat_leq(&self, u: &WeylElement, w: &WeylElement) -> bool {
        let mut u = u.clone();
        let mut w = w.clone();
        loop {
            if u.length() > w.length() {
                return false;
            }
            if u.length() == w.length() {
                return u == w;
            }
            if u.is_identity() {
                return true;
            }
            let s = w.word()[0];
            if u.is_left_descent(s) {
                u = self.left_mul_gen(s, &u);
            }
            w = self.left_mul_gen(s, &w);
        }
    }

    /// Coset representatives up to `length_bound`.
    pub fn coset_representatives(
        &self,
        theta: &ParabolicSubset,
        side: CosetSide,
        kind: CosetKind,
        length_bound: usize,
    ) -> Result<Vec<WeylElement>> {
        if kind == CosetKind::Maximal {
            theta.require_finite()?;
        }
        let descent = |w: &WeylElement, s: usize| match side {
            CosetSide::Left => w.is_left_descent(s),
            CosetSide::Right => w.is_right_descent(s),
        };
        Ok(self
            .elements_up_to(length_bound)
            .into_iter()
            .filter(|w| match kind {
                CosetKind::Minimal => theta.generators().iter().all(|&s| !descent(w, s)),
                CosetKind::Maximal => theta.generators().iter().all(|&s| descent(w, s)),
            })
            .collect())
    }

    /// Whether `w` is the minimal representative of `W_Theta w`.
    pub fn is_minimal_left(&self, w: &WeylElement, theta: &ParabolicSubset) -> bool {
        theta.generators().iter().all(|&s| !w.is_left_descent(s))
    }

    pub fn longest_element(&self, theta: &ParabolicSubset) -> Result<WeylElement> {
        theta.require_finite()?;
        let mut w = self.identity();
        while let Some(&s) = theta.generators().iter().find(|&&s| !w.is_right_descent(s)) {
            w = self.right_mul_gen(&w, s);
        }
        Ok(w)
    }

    /// All elements of a finite-type `W_Theta`.
    pub fn parabolic_subgroup(&self, theta: &ParabolicSubset) -> Result<Vec<WeylElement>> {
        let top = self.longest_element(theta)?;
        Ok(self.enumerate(theta.generators(), top.length(), usize::MAX).elements)
    }

    /// `w = u v` with `u` in `W_Theta` and `v` minimal in `W_Theta v`.
    pub fn factor_parabolic(&self, w: &WeylElement, theta: &ParabolicSubset) -> (WeylElement, WeylElement) {
        let mut u = self.identity();
        let mut v = w.clone();
        while let Some(&s) = theta.generators().iter().find(|&&s| v.is_left_descent(s)) {
            v = self.left_mul_gen(s, &v);
            u = self.right_mul_gen(&u, s);
        }
        (u, v)
    }

    /// Every reduced word of `w`.
    pub fn reduced_words(&self, w: &WeylElement) -> Vec<Vec<usize>> {
        if w.is_identity() {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for s in w.right_descents() {
            let ws = self.right_mul_gen(w, s);
            for mut word in self.reduced_words(&ws) {
                word.push(s);
                out.push(word);
            }
        }
        out.sort();
        out
    }

    /// Distinct products of all subwords of `word`.
    pub fn subword_products(&self, word: &[usize]) -> Vec<WeylElement> {
        let mut set: HashSet<WeylElement> = HashSet::new();
        let mut frontier = vec![self.identity()];
        for &s in word {
            let mut next = Vec::with_capacity(frontier.len() * 2);
            for w in &frontier {
                next.push(w.clone());
                next.push(self.right_mul_gen(w, s));
            }
            next.sort();
            next.dedup();
            frontier = next;
        }
        set.extend(frontier);
        let mut out: Vec<_> = set.into_iter().collect();
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> WeylGroup {
        WeylGroup::from_cartan(GeneralizedCartanMatrix::a2())
    }

    #[test]
    fn enumeration_sizes() {
        let a1 = WeylGroup::from_cartan(GeneralizedCartanMatrix::a1());
        assert_eq!(a1.elements_up_to(1).len(), 2);
        assert_eq!(a2().elements_up_to(3).len(), 6);
        assert_eq!(a2().elements_up_to(10).len(), 6);
        let aff = WeylGroup::from_cartan(GeneralizedCartanMatrix::affine_a1());
        let els = aff.elements_up_to(7);
        for n in 1..=7 {
            assert_eq!(els.iter().filter(|w| w.length() == n).count(), 2);
        }
    }

    #[test]
    fn multiplication_examples() {
        let g = a2();
        let s1 = g.generator(0).unwrap();
        let s2 = g.generator(1).unwrap();
        assert_eq!(g.multiply(&s1, &g.identity()), s1);
        assert!(g.multiply(&s1, &s1).is_identity());
        let w = g.multiply(&g.from_word(&[0, 1]).unwrap(), &s1);
        assert_eq!(w.length(), 3);
        assert_eq!(w, g.from_word(&[1, 0, 1]).unwrap());
        assert_eq!(w.word(), &[0, 1, 0]);
        let _ = s2;
    }

    #[test]
    fn bruhat_examples() {
        let g = a2();
        let s1 = g.from_word(&[0]).unwrap();
        let s12 = g.from_word(&[0, 1]).unwrap();
        let s21 = g.from_word(&[1, 0]).unwrap();
        assert!(g.bruhat_leq(&g.identity(), &s21));
        assert!(g.bruhat_leq(&s1, &s12));
        assert!(!g.bruhat_leq(&s12, &s21));
        assert!(!g.bruhat_leq(&s21, &s12));
    }

    #[test]
    fn cosets_and_longest() {
        let g = a2();
        let th = g.parabolic(&[0]).unwrap();
        let reps = g.coset_representatives(&th, CosetSide::Left, CosetKind::Minimal, 3).unwrap();
        let words: Vec<Vec<usize>> = reps.iter().map(|w| w.word().to_vec()).collect();
        assert_eq!(words, vec![vec![], vec![1], vec![1, 0]]);
        let full = g.full_parabolic().unwrap();
        let w0 = g.longest_element(&full).unwrap();
        assert_eq!(w0.length(), 3);
        assert_eq!(w0, g.from_word(&[1, 0, 1]).unwrap());
        let aff = WeylGroup::from_cartan(GeneralizedCartanMatrix::affine_a1());
        let th = aff.full_parabolic().unwrap();
        assert!(!th.finite_type());
        assert_eq!(aff.longest_element(&th), Err(Error::NotFiniteType(vec![0, 1])));
        assert!(matches!(
            aff.coset_representatives(&th, CosetSide::Left, CosetKind::Maximal, 4),
            Err(Error::NotFiniteType(_))
        ));
        let s0 = aff.parabolic(&[0]).unwrap();
        assert_eq!(aff.longest_element(&s0).unwrap().word(), &[0]);
    }

    #[test]
    fn factor_examples() {
        let g = a2();
        let th = g.parabolic(&[0]).unwrap();
        let (u, v) = g.factor_parabolic(&g.identity(), &th);
        assert!(u.is_identity() && v.is_identity());
        let (u, v) = g.factor_parabolic(&g.from_word(&[0, 1]).unwrap(), &th);
        assert_eq!((u.word(), v.word()), (&[0][..], &[1][..]));
        let (u, v) = g.factor_parabolic(&g.from_word(&[1]).unwrap(), &th);
        assert_eq!((u.word(), v.word()), (&[][..], &[1][..]));
    }

    #[test]
    fn word_parsing() {
        assert_eq!(parse_word("e").unwrap(), Vec::<usize>::new());
        assert_eq!(parse_word("0,1,0").unwrap(), vec![0, 1, 0]);
        assert_eq!(parse_word("010").unwrap(), vec![0, 1, 0]);
        assert_eq!(parse_word("12,3").unwrap(), vec![12, 3]);
        assert_eq!(parse_word("s0s1s[12]").unwrap(), vec![0, 1, 12]);
        assert_eq!(format_word(&[0, 1, 12]), "s0s1s[12]");
        assert!(parse_word("x1").is_err());
    }

    #[test]
    fn out_of_range_generator() {
        assert!(matches!(a2().from_word(&[2]), Err(Error::GeneratorOutOfRange { .. })));
    }
}
