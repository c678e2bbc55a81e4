use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::Serialize;

use super::bimodule::Bimodule;
use super::matrix::PolyMatrix;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::linalg::{Rational, SparseVec};
use crate::modp::certified_nullspace;
use crate::polyring::{monomials_of_degree, GradedPoly, Monomial, Side};

/// Number of top degrees of the rank window that must vanish for the rank
/// report to be trusted.
const RANK_GUARD: i32 = 4;

/// Unknown layout for degree-`delta` maps `B -> C`: for each matrix slot
/// `(i, j)` (row in `C`, column in `B`), the monomials its entry may use.
struct Layout {
    slots: Vec<(usize, usize, u32, usize)>,
    by_pos: HashMap<(usize, usize), usize>,
    monomials: HashMap<u32, (Vec<Monomial>, HashMap<Monomial, usize>)>,
    nunknowns: usize,
}

impl Layout {
    fn new(b: &Bimodule, c: &Bimodule, delta: i32) -> Self {
        let n = b.nvars();
        let mut slots = Vec::new();
        let mut by_pos = HashMap::new();
        let mut monomials = HashMap::new();
        let mut offset = 0;
        for i in 0..c.rank() {
            for j in 0..b.rank() {
                let d = b.degree(j) + delta - c.degree(i);
                if d < 0 || d % 2 != 0 {
                    continue;
                }
                let k = (d / 2) as u32;
                let (list, _) = monomials.entry(k).or_insert_with(|| {
                    let list = monomials_of_degree(n, k);
                    let index = list.iter().cloned().enumerate().map(|(u, m)| (m, u)).collect();
                    (list, index)
                });
                by_pos.insert((i, j), slots.len());
                slots.push((i, j, k, offset));
                offset += list.len();
            }
        }
        Layout { slots, by_pos, monomials, nunknowns: offset }
    }

    fn slot_monomials(&self, s: usize) -> &[Monomial] {
        &self.monomials[&self.slots[s].2].0
    }

    fn flatten(&self, phi: &PolyMatrix) -> Option<SparseVec> {
        let mut out = Vec::new();
        for ((i, j), p) in phi.entries() {
            if p.is_zero() {
                continue;
            }
            let &s = self.by_pos.get(&(i, j))?;
            let (_, _, k, off) = self.slots[s];
            let index = &self.monomials[&k].1;
            for (m, c) in p.terms() {
                out.push((off + index.get(m)?, c.clone()));
            }
        }
        out.sort_by_key(|e| e.0);
        Some(out)
    }

    fn unflatten(&self, v: &SparseVec, rows: usize, cols: usize, nvars: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(rows, cols, nvars);
        let mut s = 0;
        for (col, x) in v {
            while self.slots[s].3 + self.slot_monomials(s).len() <= *col {
                s += 1;
            }
            let (i, j, _, off) = self.slots[s];
            m.get_mut(i, j).add_term(self.slot_monomials(s)[col - off].clone(), x.clone());
        }
        m
    }
}

/// Exact equations `Phi L_k - M_k Phi = 0` for degree-`delta` maps
/// `B -> C`, one row per variable, matrix position and monomial.
fn hom_equations(b: &Bimodule, c: &Bimodule, layout: &Layout) -> Vec<SparseVec> {
    let mut rows = Vec::new();
    if layout.nunknowns == 0 {
        return rows;
    }
    for k in 0..b.nvars() {
        let lk = b.left_action(k);
        let mk = c.left_action(k);
        for a in 0..c.rank() {
            for j in 0..b.rank() {
                let mut acc: HashMap<Monomial, BTreeMap<usize, Rational>> = HashMap::new();
                // (Phi L_k)[a][j] = sum_x Phi[a][x] L_k[x][j]
                for x in 0..b.rank() {
                    let l = lk.get(x, j);
                    if l.is_zero() {
                        continue;
                    }
                    if let Some(&s) = layout.by_pos.get(&(a, x)) {
                        let off = layout.slots[s].3;
                        for (u, m) in layout.slot_monomials(s).iter().enumerate() {
                            for (mono, coef) in l.terms() {
                                *acc.entry(m.mul(mono)).or_default().entry(off + u).or_default() += coef;
                            }
                        }
                    }
                }
                // - (M_k Phi)[a][j] = - sum_y M_k[a][y] Phi[y][j]
                for y in 0..c.rank() {
                    let mterm = mk.get(a, y);
                    if mterm.is_zero() {
                        continue;
                    }
                    if let Some(&s) = layout.by_pos.get(&(y, j)) {
                        let off = layout.slots[s].3;
                        for (u, m) in layout.slot_monomials(s).iter().enumerate() {
                            for (mono, coef) in mterm.terms() {
                                *acc.entry(m.mul(mono)).or_default().entry(off + u).or_default() -= coef;
                            }
                        }
                    }
                }
                let mut eqs: Vec<(Monomial, BTreeMap<usize, Rational>)> = acc.into_iter().collect();
                eqs.sort_by(|x, y| x.0.cmp(&y.0));
                for (_, row) in eqs {
                    let row: SparseVec = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
    }
    rows
}

/// Basis of degree-`delta` maps, extending the independent part of
/// `known` (which must consist of bimodule maps of that degree).
fn solve_degree(b: &Bimodule, c: &Bimodule, delta: i32, known: &[PolyMatrix]) -> Vec<PolyMatrix> {
    let layout = Layout::new(b, c, delta);
    if layout.nunknowns == 0 {
        return Vec::new();
    }
    let rows = hom_equations(b, c, &layout);
    let known: Vec<SparseVec> = known.iter().filter_map(|k| layout.flatten(k)).collect();
    certified_nullspace(layout.nunknowns, &rows, &known)
        .iter()
        .map(|v| layout.unflatten(v, c.rank(), b.rank(), b.nvars()))
        .collect()
}

/// Dimension over `Q` of degree-`delta` bimodule maps `B -> C`.
pub fn hom_dimension(b: &Bimodule, c: &Bimodule, delta: i32) -> Result<usize> {
    Ok(hom_basis(b, c, delta)?.len())
}

/// Basis of degree-`delta` bimodule maps `B -> C`, as `rank(C) x rank(B)`
/// matrices over `S`.
pub fn hom_basis(b: &Bimodule, c: &Bimodule, delta: i32) -> Result<Vec<PolyMatrix>> {
    check_compatible(b, c)?;
    Ok(solve_degree(b, c, delta, &[]))
}

fn check_compatible(b: &Bimodule, c: &Bimodule) -> Result<()> {
    if b.ring() != c.ring() {
        return Err(Error::SideMismatch);
    }
    Ok(())
}

/// Whether `phi` (a `rank(C) x rank(B)` matrix) is a bimodule map `B -> C`.
pub fn is_bimodule_map(b: &Bimodule, c: &Bimodule, phi: &PolyMatrix) -> bool {
    (0..b.nvars()).all(|k| phi.mul(b.left_action(k)) == c.left_action(k).mul(phi))
}

/// Graded dimensions of `Hom(B, C)` up to a degree bound, with the derived
/// graded right-`S`-rank.
#[derive(Clone, Debug, Serialize)]
pub struct GradedHomSpace {
    pub side: Side,
    pub degree_bound: i32,
    pub min_degree: i32,
    /// `dim_Q Hom^delta(B, C)` for every `delta` in the window; zeros omitted.
    pub dims: BTreeMap<i32, usize>,
    /// Weight of a degree-`delta` map minus `generator_weight/2 * delta`,
    /// when it is the same for all matrix slots.
    pub weight_offset: Option<i32>,
    #[serde(skip)]
    nvars: usize,
    #[serde(skip)]
    bases: BTreeMap<i32, Vec<PolyMatrix>>,
}

impl GradedHomSpace {
    pub fn dim(&self, delta: i32) -> usize {
        self.dims.get(&delta).copied().unwrap_or(0)
    }

    /// `sum dim Hom^delta t^delta`, reported in the variable `v`.
    pub fn hilbert_series(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.dims.iter().map(|(&d, &n)| (d, n as i64)))
    }

    /// Hilbert series times `(1 - v^2)^dim_h`, truncated to the window.
    /// Fails with `DegreeBoundExceeded` if the result has a negative
    /// coefficient or does not vanish near the top of the window.
    pub fn graded_rank(&self) -> Result<LaurentPoly> {
        let mut series = self.hilbert_series();
        let factor = LaurentPoly::from_terms([(0, 1), (2, -1)]);
        for _ in 0..self.nvars {
            series = &series * &factor;
        }
        let truncated = LaurentPoly::from_terms(series.terms().filter(|(d, _)| *d <= self.degree_bound).map(|(d, c)| (d, c)));
        if let Some((d, c)) = truncated.terms().find(|(_, c)| *c < 0) {
            return Err(Error::DegreeBoundExceeded {
                bound: self.degree_bound,
                detail: format!("negative rank coefficient {c} in degree {d}"),
            });
        }
        if let Some((d, _)) = truncated.terms().find(|(d, _)| *d > self.degree_bound - RANK_GUARD) {
            return Err(Error::DegreeBoundExceeded {
                bound: self.degree_bound,
                detail: format!("rank does not stabilize: generator in degree {d}"),
            });
        }
        Ok(truncated)
    }

    /// `(degree, weight)` label of the degree-`delta` maps: on the
    /// equivariant side maps of degree `delta` sit in cohomological degree
    /// `delta`; on the monodromic side all maps sit in degree 0.
    pub fn label(&self, delta: i32) -> Option<(i32, i32)> {
        let sigma = self.side.generator_weight() / 2;
        let w = sigma * delta + self.weight_offset?;
        Some(match self.side {
            Side::Equivariant => (delta, w),
            Side::Monodromic => (0, w),
        })
    }

    /// Basis of the degree-`delta` part, empty outside the window.
    pub fn basis(&self, delta: i32) -> &[PolyMatrix] {
        self.bases.get(&delta).map_or(&[], |v| v.as_slice())
    }
}

/// Default degree bound: total word length plus 4.
pub fn default_degree_bound(b: &Bimodule, c: &Bimodule) -> i32 {
    // without a recorded word, half the degree span plays the role of length
    let len = |x: &Bimodule| match x.word() {
        Some(w) => w.len() as i32,
        None => {
            let degs = x.generators().iter().map(|g| g.degree);
            (degs.clone().max().unwrap_or(0) - degs.min().unwrap_or(0)) / 2
        }
    };
    len(b) + len(c) + RANK_GUARD
}

/// Bases and dimensions of `Hom(B, C)` in every degree from the lowest
/// possible one up to `degree_bound`. Degrees are solved in increasing
/// order, seeding each with the previous basis times the variables.
pub fn hom_graded(b: &Bimodule, c: &Bimodule, degree_bound: i32) -> Result<GradedHomSpace> {
    check_compatible(b, c)?;
    let n = b.nvars();
    let min_degree = (0..c.rank())
        .flat_map(|i| (0..b.rank()).map(move |j| (i, j)))
        .map(|(i, j)| c.degree(i) - b.degree(j))
        .min()
        .unwrap_or(0);
    let vars: Vec<GradedPoly> = (0..n).map(|k| GradedPoly::var(n, k)).collect();
    let mut bases: BTreeMap<i32, Vec<PolyMatrix>> = BTreeMap::new();
    for d in min_degree..=degree_bound {
        let known: Vec<PolyMatrix> = bases
            .get(&(d - 2))
            .map(|prev| prev.iter().flat_map(|phi| vars.iter().map(move |x| phi.mul_scalar(x))).collect())
            .unwrap_or_default();
        let basis = solve_degree(b, c, d, &known);
        if !basis.is_empty() {
            bases.insert(d, basis);
        }
    }
    Ok(GradedHomSpace {
        side: b.side(),
        degree_bound,
        min_degree,
        dims: bases.iter().map(|(&d, v)| (d, v.len())).collect(),
        weight_offset: weight_offset(b, c),
        nvars: n,
        bases,
    })
}

fn weight_offset(b: &Bimodule, c: &Bimodule) -> Option<i32> {
    let sigma = b.side().generator_weight() / 2;
    let uniform = |x: &Bimodule| {
        let mut it = x.generators().iter().map(|g| g.weight - sigma * g.degree);
        let first = it.next()?;
        it.all(|o| o == first).then_some(first)
    };
    Some(uniform(c)? - uniform(b)?)
}

/// Compose bimodule maps given as matrices: `psi . phi`.
pub fn compose(psi: &PolyMatrix, phi: &PolyMatrix) -> PolyMatrix {
    psi.mul(phi)
}

/// The polynomial `f` viewed as right multiplication, a degree-`2 deg f`
/// map `B -> B`; it is a bimodule map.
pub fn right_multiplication(b: &Bimodule, f: &GradedPoly) -> PolyMatrix {
    PolyMatrix::identity(b.rank(), b.nvars()).mul_scalar(f)
}
