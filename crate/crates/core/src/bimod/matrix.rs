use std::fmt;

use num_traits::Zero;

use crate::linalg::{DenseMatrix, Rational};
use crate::polyring::GradedPoly;

/// Dense matrix with polynomial entries, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    nvars: usize,
    data: Vec<GradedPoly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        PolyMatrix { rows, cols, nvars, data: vec![GradedPoly::zero(nvars); rows * cols] }
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        let mut m = Self::zeros(n, n, nvars);
        for i in 0..n {
            m.set(i, i, GradedPoly::one(nvars));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GradedPoly>>, nvars: usize) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data: Vec<GradedPoly> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * c);
        PolyMatrix { rows: r, cols: c, nvars, data }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &GradedPoly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: GradedPoly) {
        self.data[i * self.cols + j] = p;
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut GradedPoly {
        &mut self.data[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = PolyMatrix::zeros(self.rows, other.cols, self.nvars);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let prod = a * b;
                        out.get_mut(i, j).add_assign_scaled(&prod, &Rational::from_integer(1.into()));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        self.axpy(other, &Rational::from_integer(1.into()))
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        self.axpy(other, &Rational::from_integer((-1).into()))
    }

    /// `self + c * other`
    pub fn axpy(&self, other: &PolyMatrix, c: &Rational) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            a.add_assign_scaled(b, c);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> PolyMatrix {
        PolyMatrix { rows: self.rows, cols: self.cols, nvars: self.nvars, data: self.data.iter().map(|p| p.scale(c)).collect() }
    }

    /// Multiply every entry on the right by the polynomial `f`.
    pub fn mul_scalar(&self, f: &GradedPoly) -> PolyMatrix {
        PolyMatrix { rows: self.rows, cols: self.cols, nvars: self.nvars, data: self.data.iter().map(|p| p * f).collect() }
    }

    /// Entries at the origin (all variables set to zero).
    pub fn constant_part(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let c = self.get(i, j).constant_term();
                if !c.is_zero() {
                    m.set(i, j, c);
                }
            }
        }
        m
    }

    pub fn from_dense(m: &DenseMatrix, nvars: usize) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(m.rows, m.cols, nvars);
        for i in 0..m.rows {
            for j in 0..m.cols {
                let c = m.get(i, j);
                if !c.is_zero() {
                    out.set(i, j, GradedPoly::constant(nvars, c.clone()));
                }
            }
        }
        out
    }

    /// Sub-matrix on the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(rows.len(), cols.len(), self.nvars);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &GradedPoly)> {
        let cols = self.cols;
        self.data.iter().enumerate().map(move |(k, p)| ((k / cols, k % cols), p))
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_text()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
