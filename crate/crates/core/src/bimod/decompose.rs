use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::bimodule::Bimodule;
use super::hom::{hom_basis, hom_dimension, is_bimodule_map};
use super::matrix::PolyMatrix;
use crate::coxeter::{WeylElement, WeylGroup};
use crate::error::{Error, Result};
use crate::linalg::{rat, DenseMatrix, Echelon, Rational, SpanSolver, SparseVec};
use crate::polyring::{Monomial, Side};
use crate::unipoly::UniPoly;

/// Random elements tried per endomorphism algebra before giving up.
pub const ATTEMPT_CAP: usize = 64;

const SEED: u64 = 0x5eed_b140d;

/// One indecomposable summand, with the maps exhibiting it inside the input
/// when they were tracked.
#[derive(Clone, Debug)]
pub struct Summand {
    pub label: WeylElement,
    pub shift: i32,
    pub twist_doubled: i32,
    pub module: Bimodule,
    /// `rank(B) x rank(Q)`
    pub inclusion: Option<PolyMatrix>,
    /// `rank(Q) x rank(B)`
    pub projection: Option<PolyMatrix>,
}

impl Summand {
    pub fn graded_rank(&self) -> BTreeMap<i32, usize> {
        self.module.graded_rank()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct DecompositionEntry {
    pub label: Vec<usize>,
    pub length: usize,
    pub shift: i32,
    pub twist_doubled: i32,
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub word: Vec<usize>,
    pub side: Side,
    pub summands: Vec<Summand>,
}

impl Decomposition {
    /// Summands grouped by `(label, shift, twist)`, sorted by label length,
    /// label word, then shift.
    pub fn entries(&self) -> Vec<DecompositionEntry> {
        let mut counts: BTreeMap<(usize, Vec<usize>, i32, i32), usize> = BTreeMap::new();
        for s in &self.summands {
            *counts.entry((s.label.length(), s.label.word().to_vec(), s.shift, s.twist_doubled)).or_insert(0) += 1;
        }
        counts
            .into_iter()
            .map(|((length, label, shift, twist_doubled), multiplicity)| DecompositionEntry {
                label,
                length,
                shift,
                twist_doubled,
                multiplicity,
            })
            .collect()
    }

    /// Number of summands labeled `x`, grouped by shift.
    pub fn multiplicity(&self, x: &WeylElement) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for s in self.summands.iter().filter(|s| &s.label == x) {
            *out.entry(s.shift).or_insert(0) += 1;
        }
        out
    }

    /// `iota_i . pi_i` for each summand.
    pub fn idempotents(&self) -> Result<Vec<PolyMatrix>> {
        self.summands
            .iter()
            .map(|s| match (&s.inclusion, &s.projection) {
                (Some(i), Some(p)) => Ok(i.mul(p)),
                _ => Err(Error::InvalidBimodule("decomposition was computed without maps".into())),
            })
            .collect()
    }

    /// Checks that the inclusions and projections are bimodule maps with
    /// `pi_i iota_j = delta_ij` and that the ranks add up to that of `b`.
    pub fn verify(&self, b: &Bimodule) -> Result<()> {
        let fail = |m: String| Err(Error::InvalidBimodule(m));
        let mut total: BTreeMap<i32, usize> = BTreeMap::new();
        for s in &self.summands {
            for (d, n) in s.graded_rank() {
                *total.entry(d).or_insert(0) += n;
            }
        }
        if total != b.graded_rank() {
            return fail("summand ranks do not add up to the input".into());
        }
        for (i, s) in self.summands.iter().enumerate() {
            let (Some(inc), Some(proj)) = (&s.inclusion, &s.projection) else {
                return fail("decomposition was computed without maps".into());
            };
            if !is_bimodule_map(&s.module, b, inc) || !is_bimodule_map(b, &s.module, proj) {
                return fail(format!("summand {i}: maps are not bimodule maps"));
            }
            for (j, t) in self.summands.iter().enumerate() {
                let prod = proj.mul(t.inclusion.as_ref().unwrap());
                let want = if i == j { PolyMatrix::identity(s.module.rank(), b.nvars()) } else { PolyMatrix::zeros(prod.rows, prod.cols, b.nvars()) };
                if prod != want {
                    return fail(format!("pi_{i} iota_{j} is not {}", if i == j { "the identity" } else { "zero" }));
                }
            }
        }
        Ok(())
    }

    /// Checks `E_i^2 = E_i`, `E_i E_j = 0` and `sum E_i = 1` for the
    /// idempotents `E_i = iota_i pi_i`.
    pub fn verify_idempotents(&self, b: &Bimodule) -> Result<()> {
        let es = self.idempotents()?;
        let n = b.nvars();
        let mut sum = PolyMatrix::zeros(b.rank(), b.rank(), n);
        for (i, e) in es.iter().enumerate() {
            for (j, f) in es.iter().enumerate() {
                let prod = e.mul(f);
                let ok = if i == j { prod == *e } else { prod.is_zero() };
                if !ok {
                    return Err(Error::InvalidBimodule(format!("E_{i} E_{j} fails the idempotent relations")));
                }
            }
            sum = sum.add(e);
        }
        if sum != PolyMatrix::identity(b.rank(), n) {
            return Err(Error::InvalidBimodule("idempotents do not sum to the identity".into()));
        }
        Ok(())
    }
}

struct Piece {
    module: Bimodule,
    inclusion: Option<PolyMatrix>,
    projection: Option<PolyMatrix>,
}

/// Split a Bott–Samelson bimodule into indecomposables, tracking inclusion
/// and projection matrices.
pub fn decompose(b: &Bimodule) -> Result<Decomposition> {
    decompose_with(b, true)
}

/// As [`decompose`] but without the inclusion and projection maps, which
/// is considerably cheaper for long words.
pub fn decompose_labels(b: &Bimodule) -> Result<Decomposition> {
    decompose_with(b, false)
}

fn decompose_with(b: &Bimodule, track: bool) -> Result<Decomposition> {
    let word = b
        .word()
        .ok_or_else(|| Error::InvalidBimodule("decompose expects a Bott-Samelson product".into()))?
        .to_vec();
    let ring = b.ring().clone();
    if Bimodule::bott_samelson(ring.clone(), &word)? != *b {
        return Err(Error::InvalidBimodule("decompose expects a Bott-Samelson product".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let n = ring.nvars();
    let mut pieces = vec![Piece {
        module: Bimodule::unit(ring.clone()),
        inclusion: track.then(|| PolyMatrix::identity(1, n)),
        projection: track.then(|| PolyMatrix::identity(1, n)),
    }];
    for &s in &word {
        let ns = Bimodule::elementary_normalized(ring.clone(), s)?;
        let mut next = Vec::new();
        for p in pieces {
            let t = p.module.tensor(&ns)?;
            let inc = p.inclusion.map(|m| ns.lift_through(&m));
            let proj = p.projection.map(|m| ns.lift_through(&m));
            for (r, ri, rp) in split(&t, &mut rng)? {
                next.push(Piece {
                    module: r,
                    inclusion: inc.as_ref().map(|m| m.mul(&ri)),
                    projection: proj.as_ref().map(|m| rp.mul(m)),
                });
            }
        }
        pieces = next;
    }

    let group = WeylGroup::from_arc(ring.realization().clone());
    let mut labeler = Labeler::new(&group, b, &word);
    let mut summands = Vec::with_capacity(pieces.len());
    for p in pieces {
        let (label, n) = labeler.label(&p.module)?;
        let (shift, twist_doubled) = match ring.side() {
            Side::Equivariant => (n, n),
            Side::Monodromic => (0, -n),
        };
        summands.push(Summand { label, shift, twist_doubled, module: p.module, inclusion: p.inclusion, projection: p.projection });
    }
    Ok(Decomposition { word, side: ring.side(), summands })
}

/// Support detection: the label of an indecomposable `Q` is the longest
/// `x` with `Hom(Q, R_x) != 0`, and its shift compares the lowest degree of
/// that space with the one for the Bott–Samelson object of `x`.
struct Labeler<'a> {
    group: &'a WeylGroup,
    source: &'a Bimodule,
    candidates: Vec<WeylElement>,
    slack: i32,
    base_degree: HashMap<WeylElement, i32>,
}

impl<'a> Labeler<'a> {
    fn new(group: &'a WeylGroup, source: &'a Bimodule, word: &[usize]) -> Self {
        let mut candidates = group.subword_products(word);
        candidates.sort_by(|a, b| b.length().cmp(&a.length()).then_with(|| a.word().cmp(b.word())));
        Labeler { group, source, candidates, slack: 2 * word.len() as i32 + 4, base_degree: HashMap::new() }
    }

    fn standard(&self, x: &WeylElement) -> Bimodule {
        Bimodule::standard(self.source.ring().clone(), self.group, x, 0, 0)
    }

    fn lowest_hom_degree(&self, q: &Bimodule, r: &Bimodule) -> Result<Option<i32>> {
        let degs: Vec<i32> = q.generators().iter().map(|g| g.degree).collect();
        let (lo, hi) = (-degs.iter().max().unwrap(), -degs.iter().min().unwrap() + self.slack);
        for d in lo..=hi {
            if hom_dimension(q, r, d)? > 0 {
                return Ok(Some(d));
            }
        }
        Ok(None)
    }

    fn label(&mut self, q: &Bimodule) -> Result<(WeylElement, i32)> {
        for x in self.candidates.clone() {
            let rx = self.standard(&x);
            if let Some(low) = self.lowest_hom_degree(q, &rx)? {
                let base = match self.base_degree.get(&x) {
                    Some(&g) => g,
                    None => {
                        let bs = Bimodule::bott_samelson(self.source.ring().clone(), x.word())?;
                        let g = self.lowest_hom_degree(&bs, &rx)?.ok_or_else(|| Error::NotDecomposable(format!("no map from the Bott-Samelson object of {x:?} to its standard")))?;
                        self.base_degree.insert(x.clone(), g);
                        g
                    }
                };
                return Ok((x, low - base));
            }
        }
        Err(Error::NotDecomposable("summand has no support among the subword products".into()))
    }
}

/// Degree-0 endomorphism algebra on an explicit basis, with structure
/// constants.
struct EndAlgebra {
    basis: Vec<PolyMatrix>,
    /// `left[i]` is the matrix of left multiplication by `basis[i]`.
    left: Vec<DenseMatrix>,
    unit: Vec<Rational>,
}

impl EndAlgebra {
    fn new(m: &Bimodule, basis: Vec<PolyMatrix>) -> Result<Self> {
        let mut index: HashMap<(usize, usize, Monomial), usize> = HashMap::new();
        for a in &basis {
            for ((i, j), p) in a.entries() {
                for (mono, _) in p.terms() {
                    let next = index.len();
                    index.entry((i, j, mono.clone())).or_insert(next);
                }
            }
        }
        let flatten = |a: &PolyMatrix| -> Option<SparseVec> {
            let mut v: Vec<(usize, Rational)> = Vec::new();
            for ((i, j), p) in a.entries() {
                for (mono, c) in p.terms() {
                    v.push((*index.get(&(i, j, mono.clone()))?, c.clone()));
                }
            }
            v.sort_by_key(|e| e.0);
            Some(v)
        };
        let flat: Vec<SparseVec> = basis.iter().map(|a| flatten(a).unwrap()).collect();
        let solver = SpanSolver::new(&flat);
        let dim = basis.len();
        let coords = |a: &PolyMatrix| -> Result<Vec<Rational>> {
            flatten(a)
                .and_then(|v| solver.solve(&v))
                .ok_or_else(|| Error::InvalidBimodule("endomorphisms are not closed under composition".into()))
        };
        let mut left = vec![DenseMatrix::zeros(dim, dim); dim];
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                for (k, c) in coords(&a.mul(b))?.into_iter().enumerate() {
                    left[i].set(k, j, c);
                }
            }
        }
        let unit = coords(&PolyMatrix::identity(m.rank(), m.nvars()))?;
        Ok(EndAlgebra { basis, left, unit })
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Rank of the trace form `(y, z) -> Tr(L_y L_z)`, equal to the
    /// dimension of the semisimple quotient.
    fn trace_form_rank(&self) -> usize {
        let n = self.dim();
        let mut t = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                t.set(i, j, self.left[i].mul(&self.left[j]).trace());
            }
        }
        t.rank()
    }

    fn left_mult(&self, x: &[Rational]) -> DenseMatrix {
        let n = self.dim();
        let mut out = DenseMatrix::zeros(n, n);
        for (c, l) in x.iter().zip(&self.left) {
            if c.is_zero() {
                continue;
            }
            for (o, v) in out.data.iter_mut().zip(&l.data) {
                *o += c * v;
            }
        }
        out
    }

    /// Complete family of orthogonal idempotents cut out by the rational
    /// eigenvalues of `x`: one per rational root of its minimal polynomial
    /// plus the complement, when nonzero.
    fn idempotents_of(&self, x: &[Rational]) -> Vec<Vec<Rational>> {
        let lx = self.left_mult(x);
        let n = self.dim();
        // Krylov sequence 1, x, x^2, ... in coordinates
        let mut powers: Vec<Vec<Rational>> = vec![self.unit.clone()];
        let mut ech = Echelon::new(n);
        ech.insert(sparse(&self.unit));
        let minpoly = loop {
            let next = mat_vec(&lx, powers.last().unwrap());
            if ech.insert(sparse(&next)) {
                powers.push(next);
                continue;
            }
            let family: Vec<SparseVec> = powers.iter().map(|v| sparse(v)).collect();
            let c = SpanSolver::new(&family).solve(&sparse(&next)).expect("dependent Krylov vector");
            let mut coeffs: Vec<Rational> = c.into_iter().map(|v| -v).collect();
            coeffs.push(Rational::one());
            break UniPoly::new(coeffs);
        };
        let eval = |f: &UniPoly| -> Vec<Rational> {
            let f = f.rem(&minpoly);
            let mut out = vec![Rational::zero(); n];
            for (k, c) in f.coeffs().iter().enumerate() {
                for (o, v) in out.iter_mut().zip(&powers[k]) {
                    *o += c * v;
                }
            }
            out
        };
        let mut idems = Vec::new();
        let mut rest = self.unit.clone();
        for lambda in minpoly.rational_roots() {
            let k = minpoly.root_multiplicity(&lambda);
            let a = UniPoly::linear_root(&lambda).pow(k);
            let g = minpoly.div_rem(&a).0;
            if g.degree() == Some(0) {
                // x - lambda is nilpotent; nothing to split
                return vec![self.unit.clone()];
            }
            let (_, s, _) = UniPoly::ext_gcd(&g, &a);
            let e = eval(&s.mul(&g));
            for (r, v) in rest.iter_mut().zip(&e) {
                *r -= v;
            }
            idems.push(e);
        }
        if rest.iter().any(|v| !v.is_zero()) {
            idems.push(rest);
        }
        idems
    }

    fn element(&self, x: &[Rational]) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(self.basis[0].rows, self.basis[0].cols, self.basis[0].nvars());
        for (c, b) in x.iter().zip(&self.basis) {
            if !c.is_zero() {
                out = out.axpy(b, c);
            }
        }
        out
    }
}

fn sparse(v: &[Rational]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

fn mat_vec(m: &DenseMatrix, v: &[Rational]) -> Vec<Rational> {
    (0..m.rows).map(|i| m.row(i).iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum()).collect()
}

type Split = (Bimodule, PolyMatrix, PolyMatrix);

/// Split `m` into indecomposables: `(summand, inclusion, projection)`.
fn split(m: &Bimodule, rng: &mut ChaCha8Rng) -> Result<Vec<Split>> {
    let n = m.nvars();
    let basis = hom_basis(m, m, 0)?;
    let whole = || vec![(m.clone(), PolyMatrix::identity(m.rank(), n), PolyMatrix::identity(m.rank(), n))];
    if basis.len() <= 1 {
        return Ok(whole());
    }
    let alg = EndAlgebra::new(m, basis)?;
    if alg.trace_form_rank() == 1 {
        return Ok(whole());
    }
    for _ in 0..ATTEMPT_CAP {
        let x: Vec<Rational> = (0..alg.dim()).map(|_| rat(rng.gen_range(-3..=3))).collect();
        let idems = alg.idempotents_of(&x);
        if idems.len() < 2 {
            continue;
        }
        let mut out = Vec::new();
        for e in idems {
            let (r, inc, proj) = restrict(m, &alg.element(&e))?;
            for (r2, i2, p2) in split(&r, rng)? {
                out.push((r2, inc.mul(&i2), p2.mul(&proj)));
            }
        }
        return Ok(out);
    }
    Err(Error::NotDecomposable(format!("no splitting idempotent after {ATTEMPT_CAP} attempts")))
}

/// Image of a degree-0 idempotent endomorphism `e` of `m` as a bimodule,
/// with its inclusion and projection.
fn restrict(m: &Bimodule, e: &PolyMatrix) -> Result<Split> {
    let n = m.nvars();
    let size = m.rank();
    let id = PolyMatrix::identity(size, n);
    let comp = id.sub(e);
    let pick = |x: &DenseMatrix| -> Vec<usize> {
        let mut ech = Echelon::new(size);
        (0..size)
            .filter(|&j| {
                let col: Vec<Rational> = (0..size).map(|i| x.get(i, j).clone()).collect();
                ech.insert(sparse(&col))
            })
            .collect()
    };
    let cols_e = pick(&e.constant_part());
    let cols_c = pick(&comp.constant_part());
    if cols_e.len() + cols_c.len() != size {
        return Err(Error::InvalidBimodule("idempotent has the wrong constant part".into()));
    }
    let all: Vec<usize> = (0..size).collect();
    let r = cols_e.len();
    let mut p = PolyMatrix::zeros(size, size, n);
    for (c, &j) in cols_e.iter().enumerate() {
        for i in 0..size {
            p.set(i, c, e.get(i, j).clone());
        }
    }
    for (c, &j) in cols_c.iter().enumerate() {
        for i in 0..size {
            p.set(i, r + c, comp.get(i, j).clone());
        }
    }
    let pbar = p.constant_part();
    let pbar_inv = PolyMatrix::from_dense(&pbar.inverse().ok_or_else(|| Error::NotDecomposable("singular change of basis".into()))?, n);
    // P = Pbar + N with N raising degree, so the Neumann series terminates
    let nil = p.sub(&PolyMatrix::from_dense(&pbar, n));
    let step = pbar_inv.mul(&nil).scale(&rat(-1));
    let mut term = pbar_inv.clone();
    let mut p_inv = pbar_inv.clone();
    for _ in 0..=size {
        term = step.mul(&term);
        if term.is_zero() {
            break;
        }
        p_inv = p_inv.add(&term);
    }
    if !term.is_zero() {
        return Err(Error::NotDecomposable("inverse series does not terminate".into()));
    }
    let first: Vec<usize> = (0..r).collect();
    let inc = p.select(&all, &first);
    let proj = p_inv.select(&first, &all);
    let gens = cols_e.iter().map(|&j| m.generators()[j]).collect();
    let left = m.left_actions().iter().map(|l| proj.mul(l).mul(&inc)).collect();
    let sub = Bimodule::new(m.ring().clone(), gens, left, None)?;
    debug_assert_eq!(proj.mul(&inc), PolyMatrix::identity(r, n));
    Ok((sub, inc, proj))
}
