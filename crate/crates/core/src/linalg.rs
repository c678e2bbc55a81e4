//! Exact linear algebra over `Q`: sparse row echelon forms, null spaces and
//! small dense matrices.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Sparse vector: strictly increasing column indices, no stored zeros.
pub type SparseVec = Vec<(usize, Rational)>;

/// `a - c * b` for sparse vectors.
pub fn sparse_axpy(a: &SparseVec, c: &Rational, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, -(c * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - c * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sparse_from_dense(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn dense_from_sparse(v: &SparseVec, n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// Incrementally built row echelon form. Pivot rows are normalized so that
/// the leading entry is one; they are reduced against pivots that existed
/// when they were inserted.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    ncols: usize,
    pivots: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, pivots: BTreeMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce `row` against every pivot.
    pub fn reduce(&self, mut row: SparseVec) -> SparseVec {
        let mut idx = 0;
        while idx < row.len() {
            let col = row[idx].0;
            match self.pivots.get(&col) {
                Some(p) => {
                    let c = row[idx].1.clone();
                    row = sparse_axpy(&row, &c, p);
                }
                None => idx += 1,
            }
        }
        row
    }

    /// Insert a row; returns `true` if it increased the rank.
    pub fn insert(&mut self, row: SparseVec) -> bool {
        let mut row = self.reduce(row);
        if row.is_empty() {
            return false;
        }
        let lead = row[0].1.clone();
        if !lead.is_one() {
            let inv = lead.recip();
            for e in row.iter_mut() {
                e.1 = &e.1 * &inv;
            }
        }
        self.pivots.insert(row[0].0, row);
        true
    }

    pub fn contains(&self, row: SparseVec) -> bool {
        self.reduce(row).is_empty()
    }

    pub fn nullity(&self) -> usize {
        self.ncols - self.rank()
    }

    /// Basis of the solution space of `row . x = 0` for all inserted rows.
    /// One vector per free column, with a one in that column.
    pub fn nullspace(&self) -> Vec<SparseVec> {
        let free: Vec<usize> = (0..self.ncols).filter(|c| !self.pivots.contains_key(c)).collect();
        let mut out = Vec::with_capacity(free.len());
        for &f in &free {
            let mut x: BTreeMap<usize, Rational> = BTreeMap::new();
            x.insert(f, Rational::one());
            for (&p, row) in self.pivots.iter().rev() {
                if p > f {
                    continue;
                }
                let mut s = Rational::zero();
                for (c, v) in row.iter().skip(1) {
                    if let Some(xc) = x.get(c) {
                        s += v * xc;
                    }
                }
                if !s.is_zero() {
                    x.insert(p, -s);
                }
            }
            out.push(x.into_iter().collect());
        }
        out
    }
}

/// Expresses vectors in the span of a fixed family, tracking coefficients.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    n: usize,
    pivots: BTreeMap<usize, (SparseVec, Vec<Rational>)>,
    rank: usize,
}

impl SpanSolver {
    pub fn new(family: &[SparseVec]) -> Self {
        let n = family.len();
        let mut s = SpanSolver { n, pivots: BTreeMap::new(), rank: 0 };
        for (i, v) in family.iter().enumerate() {
            let mut combo = vec![Rational::zero(); n];
            combo[i] = Rational::one();
            let (row, combo) = s.reduce(v.clone(), combo);
            if let Some((col, lead)) = row.first().cloned() {
                let inv = lead.recip();
                let row: SparseVec = row.into_iter().map(|(c, x)| (c, x * &inv)).collect();
                let combo: Vec<Rational> = combo.into_iter().map(|x| x * &inv).collect();
                s.pivots.insert(col, (row, combo));
                s.rank += 1;
            }
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn reduce(&self, mut row: SparseVec, mut combo: Vec<Rational>) -> (SparseVec, Vec<Rational>) {
        let mut idx = 0;
        while idx < row.len() {
            let col = row[idx].0;
            match self.pivots.get(&col) {
                Some((p, pc)) => {
                    let c = row[idx].1.clone();
                    row = sparse_axpy(&row, &c, p);
                    for (a, b) in combo.iter_mut().zip(pc) {
                        if !b.is_zero() {
                            *a -= &c * b;
                        }
                    }
                }
                None => idx += 1,
            }
        }
        (row, combo)
    }

    /// Coefficients `c` with `v = sum c_i family_i`, if `v` is in the span.
    pub fn solve(&self, v: &SparseVec) -> Option<Vec<Rational>> {
        let (row, combo) = self.reduce(v.clone(), vec![Rational::zero(); self.n]);
        if row.is_empty() {
            Some(combo.into_iter().map(|x| -x).collect())
        } else {
            None
        }
    }
}

/// Dense square or rectangular matrix over `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Rational>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.cols);
        for i in 0..self.rows {
            e.insert(sparse_from_dense(self.row(i)));
        }
        e.rank()
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Option<DenseMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = DenseMatrix::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !a.get(r, c).is_zero())?;
            if p != c {
                for k in 0..n {
                    a.data.swap(p * n + k, c * n + k);
                    inv.data.swap(p * n + k, c * n + k);
                }
            }
            let piv = a.get(c, c).recip();
            for k in 0..n {
                a.data[c * n + k] *= &piv;
                inv.data[c * n + k] *= &piv;
            }
            for r in 0..n {
                if r == c || a.get(r, c).is_zero() {
                    continue;
                }
                let f = a.get(r, c).clone();
                for k in 0..n {
                    let (x, y) = (&f * a.get(c, k), &f * inv.get(c, k));
                    a.data[r * n + k] -= x;
                    inv.data[r * n + k] -= y;
                }
            }
        }
        Some(inv)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Right null space: vectors `x` with `self * x = 0`.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let mut e = Echelon::new(self.cols);
        for i in 0..self.rows {
            e.insert(sparse_from_dense(self.row(i)));
        }
        e.nullspace().iter().map(|v| dense_from_sparse(v, self.cols)).collect()
    }
}

/// Integer matrix rank via exact rational elimination.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut e = Echelon::new(ncols);
    for r in rows {
        let v: Vec<Rational> = r.iter().map(|&x| rat(x)).collect();
        e.insert(sparse_from_dense(&v));
    }
    e.rank()
}

/// Exact determinant of an integer matrix.
pub fn integer_det(m: &[Vec<i64>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det *= &piv;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &piv;
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    det
}

pub fn is_positive(x: &Rational) -> bool {
    x.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_of_rank_one_system() {
        // x + y + z = 0
        let mut e = Echelon::new(3);
        e.insert(vec![(0, rat(1)), (1, rat(1)), (2, rat(1))]);
        let ns = e.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            let s: Rational = v.iter().map(|(_, x)| x.clone()).sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn dependent_rows_do_not_raise_rank() {
        let mut e = Echelon::new(2);
        assert!(e.insert(vec![(0, rat(2)), (1, rat(4))]));
        assert!(!e.insert(vec![(0, rat(-1)), (1, rat(-2))]));
        assert_eq!(e.rank(), 1);
    }

    #[test]
    fn span_solver_recovers_coefficients() {
        let fam = vec![vec![(0, rat(1)), (1, rat(1))], vec![(1, rat(1)), (2, frac(1, 2))]];
        let s = SpanSolver::new(&fam);
        let v = vec![(0, rat(3)), (1, rat(1)), (2, rat(-1))];
        assert_eq!(s.solve(&v), Some(vec![rat(3), rat(-2)]));
        assert_eq!(s.solve(&vec![(2, rat(1))]), None);
    }

    #[test]
    fn determinants() {
        assert_eq!(integer_det(&[vec![2, -1], vec![-1, 2]]), rat(3));
        assert_eq!(integer_det(&[vec![2, -2], vec![-2, 2]]), rat(0));
        assert_eq!(integer_det(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]), rat(4));
    }
}
