//! Bigraded dimension tables, the regrading calculus, and the comparison of
//! equivariant and monodromic Hom spaces between Bott-Samelson bimodules.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bimod::{default_degree_bound, hom_graded, Bimodule, GradedHomSpace};
use crate::coxeter::{Realization, WeylGroup};
use crate::error::{Error, Result};
use crate::polyring::{PolyRing, Side};

/// Finite table of multiplicities indexed by `(degree, weight)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<BigradedEntry>", from = "Vec<BigradedEntry>")]
pub struct BigradedDim {
    dims: BTreeMap<(i32, i32), u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedEntry {
    pub degree: i32,
    pub weight: i32,
    pub dim: u64,
}

impl From<BigradedDim> for Vec<BigradedEntry> {
    fn from(m: BigradedDim) -> Self {
        m.entries().map(|(degree, weight, dim)| BigradedEntry { degree, weight, dim }).collect()
    }
}

impl From<Vec<BigradedEntry>> for BigradedDim {
    fn from(entries: Vec<BigradedEntry>) -> Self {
        entries.into_iter().map(|e| (e.degree, e.weight, e.dim)).collect()
    }
}

impl FromIterator<(i32, i32, u64)> for BigradedDim {
    fn from_iter<I: IntoIterator<Item = (i32, i32, u64)>>(iter: I) -> Self {
        let mut m = BigradedDim::new();
        for (d, w, n) in iter {
            m.add(d, w, n);
        }
        m
    }
}

impl BigradedDim {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(degree: i32, weight: i32) -> Self {
        [(degree, weight, 1)].into_iter().collect()
    }

    /// Adds `n` to the multiplicity at `(degree, weight)`.
    pub fn add(&mut self, degree: i32, weight: i32, n: u64) {
        if n > 0 {
            *self.dims.entry((degree, weight)).or_insert(0) += n;
        }
    }

    pub fn get(&self, degree: i32, weight: i32) -> u64 {
        self.dims.get(&(degree, weight)).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Sum of all multiplicities.
    pub fn total(&self) -> u64 {
        self.dims.values().sum()
    }

    /// `(degree, weight, dim)` in increasing `(degree, weight)` order.
    pub fn entries(&self) -> impl Iterator<Item = (i32, i32, u64)> + '_ {
        self.dims.iter().map(|(&(d, w), &n)| (d, w, n))
    }

    fn map_support(&self, f: impl Fn(i32, i32) -> (i32, i32)) -> Self {
        self.entries()
            .map(|(d, w, n)| {
                let (d2, w2) = f(d, w);
                (d2, w2, n)
            })
            .collect()
    }

    /// The regrading `(d, w) -> (d - w, -w)`.
    pub fn regrade(&self) -> Self {
        self.map_support(|d, w| (d - w, -w))
    }

    /// Cohomological shift `[n]`: `(d, w) -> (d - n, w)`.
    pub fn shift(&self, n: i32) -> Self {
        self.map_support(|d, w| (d - n, w))
    }

    /// Tate twist by `k_doubled / 2`: `(d, w) -> (d, w - k_doubled)`.
    pub fn twist(&self, k_doubled: i32) -> Self {
        self.map_support(|d, w| (d, w - k_doubled))
    }

    /// Convolution of tables: degrees and weights add.
    pub fn convolve(&self, other: &Self) -> Self {
        let mut out = BigradedDim::new();
        for (d1, w1, n1) in self.entries() {
            for (d2, w2, n2) in other.entries() {
                out.add(d1 + d2, w1 + w2, n1 * n2);
            }
        }
        out
    }

    /// Convolution of tables supported in degree 0: weights add.
    pub fn convolve_weights(&self, other: &Self) -> Option<Self> {
        (self.in_degree_zero() && other.in_degree_zero()).then(|| self.convolve(other))
    }

    /// Whether every entry has weight equal to its degree.
    pub fn is_pure(&self) -> bool {
        self.dims.keys().all(|&(d, w)| d == w)
    }

    pub fn in_degree_zero(&self) -> bool {
        self.dims.keys().all(|&(d, _)| d == 0)
    }

    /// Largest weight in each degree.
    pub fn top_weights(&self) -> BTreeMap<i32, i32> {
        let mut out = BTreeMap::new();
        for &(d, w) in self.dims.keys() {
            out.entry(d).and_modify(|m: &mut i32| *m = (*m).max(w)).or_insert(w);
        }
        out
    }

    /// First `(degree, weight)` where the tables differ, with both values.
    pub fn first_difference(&self, other: &Self) -> Option<Discrepancy> {
        let keys: std::collections::BTreeSet<_> = self.dims.keys().chain(other.dims.keys()).collect();
        keys.into_iter().find_map(|&(d, w)| {
            let (a, b) = (self.get(d, w), other.get(d, w));
            (a != b).then_some(Discrepancy { degree: d, weight: w, expected: a, found: b })
        })
    }
}

impl fmt::Display for BigradedDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries().map(|(d, w, n)| format!("({d},{w})x{n}")).collect();
        write!(f, "{{{}}}", parts.join(" "))
    }
}

/// Regrades a table of graded `Q[T]`-module pieces (`T` pure of degree and
/// weight 2) into the weight table of the corresponding `Q[t]`-modules in
/// degree 0, checking that regrading is an involution on it.
pub fn baby_case_roundtrip(m: &BigradedDim) -> BigradedDim {
    let image = m.regrade();
    assert_eq!(&image.regrade(), m, "regrading must be an involution");
    image
}

/// Graded table of the polynomial ring `Q[T]` truncated below `T^(top+1)`.
pub fn truncated_polynomial_table(top: u32) -> BigradedDim {
    (0..=top as i32).map(|k| (2 * k, 2 * k, 1)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub degree: i32,
    pub weight: i32,
    /// Multiplicity predicted by regrading the equivariant table.
    pub expected: u64,
    /// Multiplicity on the monodromic side.
    pub found: u64,
}

/// Realization used for the monodromic side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DualMode {
    /// The dual realization with the transposed Cartan matrix.
    Transpose,
    /// The same realization; meaningful for symmetrizable matrices.
    SelfDual,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub degree_bound: i32,
    pub equivariant: BigradedDim,
    pub monodromic: BigradedDim,
    pub pass: bool,
    pub discrepancy: Option<Discrepancy>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EmReport {
    pub mode: DualMode,
    pub length_bound: usize,
    pub pairs: Vec<PairReport>,
}

impl EmReport {
    pub fn passed(&self) -> bool {
        self.pairs.iter().all(|p| p.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PairReport> {
        self.pairs.iter().filter(|p| !p.pass)
    }
}

/// Graded right-rank table of `Hom(B, C)`, each generator placed at the
/// label of its degree.
pub fn rank_table(space: &GradedHomSpace) -> Result<BigradedDim> {
    let rank = space.graded_rank()?;
    let mut out = BigradedDim::new();
    for (k, c) in rank.terms() {
        let (d, w) = space
            .label(k)
            .ok_or_else(|| Error::InvalidBimodule("generators do not have a uniform weight offset".into()))?;
        out.add(d, w, c as u64);
    }
    Ok(out)
}

/// Every pair of reduced words (of any elements) of length at most `bound`.
pub fn reduced_word_pairs(group: &WeylGroup, bound: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let words: Vec<Vec<usize>> =
        group.elements_up_to(bound).iter().flat_map(|w| group.reduced_words(w)).collect();
    words.iter().flat_map(|x| words.iter().map(move |y| (x.clone(), y.clone()))).collect()
}

/// Compares, for each pair of reduced words, the regraded equivariant table
/// of `Hom(BS(x), BS(y))` with the monodromic one.
pub fn em_check(
    realization: &Arc<Realization>,
    word_pairs: &[(Vec<usize>, Vec<usize>)],
    length_bound: usize,
    mode: DualMode,
) -> Result<EmReport> {
    let group = WeylGroup::from_arc(realization.clone());
    for w in word_pairs.iter().flat_map(|(x, y)| [x, y]) {
        if w.len() > length_bound {
            return Err(Error::LengthBoundExceeded { word: w.clone(), bound: length_bound });
        }
        group.from_reduced_word(w)?;
    }
    let e_ring = Arc::new(PolyRing::new(realization.clone(), Side::Equivariant));
    let m_realization = match mode {
        DualMode::Transpose => Arc::new(realization.dual()),
        DualMode::SelfDual => realization.clone(),
    };
    let m_ring = Arc::new(PolyRing::new(m_realization, Side::Monodromic));
    let pairs = word_pairs
        .par_iter()
        .map(|(x, y)| compare_pair(&e_ring, &m_ring, x, y))
        .collect::<Result<Vec<_>>>()?;
    Ok(EmReport { mode, length_bound, pairs })
}

fn compare_pair(e_ring: &Arc<PolyRing>, m_ring: &Arc<PolyRing>, x: &[usize], y: &[usize]) -> Result<PairReport> {
    let bx = Bimodule::bott_samelson(e_ring.clone(), x)?;
    let by = Bimodule::bott_samelson(e_ring.clone(), y)?;
    let bound = default_degree_bound(&bx, &by);
    let equivariant = rank_table(&hom_graded(&bx, &by, bound)?)?;
    if !equivariant.is_pure() {
        return Err(Error::WeightLock(format!("Hom({x:?}, {y:?}) has table {equivariant}")));
    }
    let mx = Bimodule::bott_samelson(m_ring.clone(), x)?;
    let my = Bimodule::bott_samelson(m_ring.clone(), y)?;
    let monodromic = rank_table(&hom_graded(&mx, &my, bound)?)?;
    let discrepancy = equivariant.regrade().first_difference(&monodromic);
    Ok(PairReport {
        x: x.to_vec(),
        y: y.to_vec(),
        degree_bound: bound,
        equivariant,
        monodromic,
        pass: discrepancy.is_none(),
        discrepancy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::GeneralizedCartanMatrix;
    use proptest::prelude::*;

    fn table() -> impl Strategy<Value = BigradedDim> {
        proptest::collection::vec((-8i32..=8, -8i32..=8, 1u64..=3), 0..8).prop_map(|v| v.into_iter().collect())
    }

    fn pure_table() -> impl Strategy<Value = BigradedDim> {
        proptest::collection::vec((-6i32..=6, 1u64..=3), 0..6).prop_map(|v| v.into_iter().map(|(d, n)| (d, d, n)).collect())
    }

    #[test]
    fn regrade_examples() {
        assert_eq!(BigradedDim::singleton(0, 0).regrade(), BigradedDim::singleton(0, 0));
        assert_eq!(BigradedDim::singleton(5, 5).regrade(), BigradedDim::singleton(0, -5));
    }

    #[test]
    fn shift_and_twist_place_pure_objects() {
        let m = BigradedDim::singleton(0, 0);
        assert_eq!(m.shift(0), m);
        // [n](n/2) with n = 3
        assert_eq!(m.shift(3).twist(3), BigradedDim::singleton(-3, -3));
    }

    #[test]
    fn baby_case_examples() {
        assert!(baby_case_roundtrip(&BigradedDim::new()).is_empty());
        assert_eq!(baby_case_roundtrip(&BigradedDim::singleton(0, 0)), BigradedDim::singleton(0, 0));
        let image = baby_case_roundtrip(&truncated_polynomial_table(3));
        let expected: BigradedDim = [0, -2, -4, -6].into_iter().map(|w| (0, w, 1)).collect();
        assert_eq!(image, expected);
        assert!(image.top_weights().values().all(|&w| w <= 0));
    }

    #[test]
    fn json_lists_entries() {
        let m: BigradedDim = [(2, 2, 1), (0, 0, 3)].into_iter().collect();
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"[{"degree":0,"weight":0,"dim":3},{"degree":2,"weight":2,"dim":1}]"#);
        assert_eq!(serde_json::from_str::<BigradedDim>(&text).unwrap(), m);
    }

    #[test]
    fn sl2_pair_s_s() {
        let r = Arc::new(Realization::minimal(GeneralizedCartanMatrix::a1()));
        let pairs = vec![(vec![], vec![]), (vec![0], vec![0])];
        let report = em_check(&r, &pairs, 1, DualMode::Transpose).unwrap();
        assert!(report.passed());
        let ss = &report.pairs[1];
        // End(B_s) is generated in degrees 0 and 2 over S
        let expected_e: BigradedDim = [(0, 0, 1), (2, 2, 1)].into_iter().collect();
        let expected_m: BigradedDim = [(0, 0, 1), (0, -2, 1)].into_iter().collect();
        assert_eq!(ss.equivariant, expected_e);
        assert_eq!(ss.monodromic, expected_m);
        assert_eq!(report.pairs[0].monodromic, BigradedDim::singleton(0, 0));
    }

    #[test]
    fn a2_pairs_agree_in_both_modes() {
        let r = Arc::new(Realization::minimal(GeneralizedCartanMatrix::a2()));
        let pairs = vec![(vec![0], vec![0, 1, 0]), (vec![0, 1], vec![1, 0]), (vec![1, 0, 1], vec![0, 1, 0])];
        for mode in [DualMode::Transpose, DualMode::SelfDual] {
            let report = em_check(&r, &pairs, 3, mode).unwrap();
            assert!(report.passed(), "{mode:?}: {:?}", report.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn double_dual_gives_the_same_report() {
        let r = Realization::minimal(GeneralizedCartanMatrix::b2());
        let pairs = vec![(vec![0, 1], vec![0, 1]), (vec![1], vec![1, 0, 1])];
        let a = em_check(&Arc::new(r.clone()), &pairs, 3, DualMode::Transpose).unwrap();
        let b = em_check(&Arc::new(r.dual().dual()), &pairs, 3, DualMode::Transpose).unwrap();
        assert!(a.passed());
        let tables = |rep: &EmReport| rep.pairs.iter().map(|p| (p.equivariant.clone(), p.monodromic.clone())).collect::<Vec<_>>();
        assert_eq!(tables(&a), tables(&b));
    }

    #[test]
    fn em_check_rejects_bad_words() {
        let r = Arc::new(Realization::minimal(GeneralizedCartanMatrix::a2()));
        assert!(matches!(em_check(&r, &[(vec![0, 0], vec![])], 4, DualMode::Transpose), Err(Error::NotReduced(_))));
        assert!(matches!(
            em_check(&r, &[(vec![0, 1, 0], vec![])], 2, DualMode::Transpose),
            Err(Error::LengthBoundExceeded { .. })
        ));
    }

    #[test]
    fn reduced_word_pairs_of_a2() {
        let g = WeylGroup::from_cartan(GeneralizedCartanMatrix::a2());
        // e, s1, s2, s1s2, s2s1 and two words of the longest element
        assert_eq!(reduced_word_pairs(&g, 4).len(), 49);
    }

    /// Generator tables of Bott-Samelson bimodules (degree = weight) for
    /// every word of length at most 4 in the first `rank` letters.
    fn bott_samelson_tables(cartan: GeneralizedCartanMatrix) -> Vec<BigradedDim> {
        let rank = cartan.rank();
        let ring = Arc::new(PolyRing::new(Arc::new(Realization::minimal(cartan)), Side::Equivariant));
        let mut words = vec![Vec::new()];
        let mut frontier = vec![Vec::new()];
        for _ in 0..4 {
            frontier = frontier
                .iter()
                .flat_map(|w: &Vec<usize>| (0..rank).map(move |s| [w.as_slice(), &[s]].concat()))
                .collect();
            words.extend(frontier.iter().cloned());
        }
        words
            .iter()
            .map(|w| {
                let b = Bimodule::bott_samelson(ring.clone(), w).unwrap();
                b.graded_rank().into_iter().map(|(d, n)| (d, d, n as u64)).collect()
            })
            .collect()
    }

    #[test]
    fn regrading_is_monoidal_on_convolution_tables() {
        for cartan in [GeneralizedCartanMatrix::a1(), GeneralizedCartanMatrix::a2()] {
            let tables = bott_samelson_tables(cartan);
            for a in &tables {
                for b in &tables {
                    let lhs = a.convolve(b).regrade();
                    let rhs = a.regrade().convolve_weights(&b.regrade()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn regrade_is_an_involution(m in table()) {
            prop_assert_eq!(m.regrade().regrade(), m.clone());
            prop_assert_eq!(m.regrade().total(), m.total());
        }

        #[test]
        fn regrade_turns_twist_into_shift_and_inverse_twist(m in table()) {
            prop_assert_eq!(m.twist(2).regrade(), m.regrade().twist(-2).shift(-2));
        }

        #[test]
        fn shift_and_twist_commute(m in table(), n in -4i32..=4, k in -4i32..=4) {
            prop_assert_eq!(m.shift(n).twist(k), m.twist(k).shift(n));
        }

        #[test]
        fn pure_tables_land_in_degree_zero(a in pure_table(), b in pure_table()) {
            let ra = a.regrade();
            prop_assert!(ra.in_degree_zero());
            prop_assert_eq!(a.convolve(&b).regrade(), ra.convolve_weights(&b.regrade()).unwrap());
        }
    }
}
