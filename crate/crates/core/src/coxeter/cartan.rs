//! Generalized Cartan matrices and their realizations.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{integer_det, integer_rank, Rational};
use num_traits::{Signed, Zero};

/// Integer matrix with `a[i][i] = 2`, nonpositive off-diagonal entries and
/// `a[i][j] = 0` exactly when `a[j][i] = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneralizedCartanMatrix {
    entries: Vec<Vec<i64>>,
}

impl GeneralizedCartanMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::InvalidCartanMatrix("empty matrix".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidCartanMatrix(format!("row {i} has length {}", row.len())));
            }
            if row[i] != 2 {
                return Err(Error::InvalidCartanMatrix(format!("a[{i}][{i}] = {} != 2", row[i])));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if row[j] > 0 {
                    return Err(Error::InvalidCartanMatrix(format!("a[{i}][{j}] = {} > 0", row[j])));
                }
                if (row[j] == 0) != (entries[j][i] == 0) {
                    return Err(Error::InvalidCartanMatrix(format!(
                        "a[{i}][{j}] and a[{j}][{i}] disagree on vanishing"
                    )));
                }
            }
        }
        Ok(GeneralizedCartanMatrix { entries })
    }

    pub fn a1() -> Self {
        Self::new(vec![vec![2]]).unwrap()
    }

    pub fn a2() -> Self {
        Self::new(vec![vec![2, -1], vec![-1, 2]]).unwrap()
    }

    pub fn a3() -> Self {
        Self::new(vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]).unwrap()
    }

    /// B2 with `a[0][1] = -2`: the first simple root is short.
    pub fn b2() -> Self {
        Self::new(vec![vec![2, -2], vec![-1, 2]]).unwrap()
    }

    pub fn affine_a1() -> Self {
        Self::new(vec![vec![2, -2], vec![-2, 2]]).unwrap()
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let n = self.rank();
        let entries = (0..n).map(|i| (0..n).map(|j| self.entries[j][i]).collect()).collect();
        GeneralizedCartanMatrix { entries }
    }

    pub fn corank(&self) -> usize {
        self.rank() - integer_rank(&self.entries)
    }

    /// Principal submatrix on the given indices.
    pub fn restrict(&self, idx: &[usize]) -> Vec<Vec<i64>> {
        idx.iter().map(|&i| idx.iter().map(|&j| self.entries[i][j]).collect()).collect()
    }

    /// Finite-type test via positivity of every principal minor of the
    /// restriction to `idx`.
    pub fn is_finite_type_on(&self, idx: &[usize]) -> bool {
        let k = idx.len();
        if k == 0 {
            return true;
        }
        // all principal minors, by subset mask
        for mask in 1u64..(1u64 << k) {
            let sub: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| idx[b]).collect();
            let det: Rational = integer_det(&self.restrict(&sub));
            if !det.is_positive() {
                return false;
            }
        }
        true
    }

    /// Whether `diag(d) * A` is symmetric for some positive rational `d`.
    pub fn is_symmetrizable(&self) -> bool {
        let n = self.rank();
        // propagate ratios d_j / d_i = a[i][j] / a[j][i] along nonzero entries
        let mut d: Vec<Option<Rational>> = vec![None; n];
        for start in 0..n {
            if d[start].is_some() {
                continue;
            }
            d[start] = Some(crate::linalg::rat(1));
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                let di = d[i].clone().unwrap();
                for j in 0..n {
                    if i == j || self.entries[i][j] == 0 {
                        continue;
                    }
                    // d_i a_ij = d_j a_ji
                    let dj = &di * crate::linalg::rat(self.entries[i][j]) / crate::linalg::rat(self.entries[j][i]);
                    match &d[j] {
                        None => {
                            d[j] = Some(dj);
                            stack.push(j);
                        }
                        Some(existing) => {
                            if *existing != dj {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        d.iter().all(|x| x.as_ref().is_some_and(|x| x.is_positive() && !x.is_zero()))
    }

    /// Hex SHA-256 of the canonical JSON encoding.
    pub fn hash_hex(&self) -> String {
        let json = serde_json::to_string(&self.entries).expect("matrix serializes");
        let digest = Sha256::digest(json.as_bytes());
        hex::encode(digest)
    }
}

/// A realization: `V_H` of dimension `dim_h`, simple coroots in `V_H` and
/// simple roots in its dual, with `<coroot_i, root_j> = a[i][j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Realization {
    pub dim_h: usize,
    pub roots: Vec<Vec<i64>>,
    pub coroots: Vec<Vec<i64>>,
    pub cartan: GeneralizedCartanMatrix,
}

/// On-disk JSON document for a realization; roots and coroots are optional.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RealizationDoc {
    pub cartan: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim_h: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coroots: Option<Vec<Vec<i64>>>,
}

impl Realization {
    pub fn new(
        cartan: GeneralizedCartanMatrix,
        dim_h: usize,
        roots: Vec<Vec<i64>>,
        coroots: Vec<Vec<i64>>,
    ) -> Result<Self> {
        let n = cartan.rank();
        if dim_h < n {
            return Err(Error::InvalidRealization(format!("dim_h = {dim_h} < rank {n}")));
        }
        if roots.len() != n || coroots.len() != n {
            return Err(Error::InvalidRealization("need one root and one coroot per generator".into()));
        }
        if roots.iter().chain(coroots.iter()).any(|v| v.len() != dim_h) {
            return Err(Error::InvalidRealization("vector length differs from dim_h".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let pairing: i64 = coroots[i].iter().zip(&roots[j]).map(|(a, b)| a * b).sum();
                if pairing != cartan.entry(i, j) {
                    return Err(Error::InvalidRealization(format!(
                        "<coroot_{i}, root_{j}> = {pairing}, expected {}",
                        cartan.entry(i, j)
                    )));
                }
            }
        }
        if integer_rank(&roots) != n {
            return Err(Error::InvalidRealization("simple roots are linearly dependent".into()));
        }
        if integer_rank(&coroots) != n {
            return Err(Error::InvalidRealization("simple coroots are linearly dependent".into()));
        }
        Ok(Realization { dim_h, roots, coroots, cartan })
    }

    /// Minimal realization of dimension `rank + corank`: coroots are the first
    /// `rank` standard basis vectors and each root pairs with the extra
    /// coordinates so that the roots become independent.
    pub fn minimal(cartan: GeneralizedCartanMatrix) -> Self {
        let n = cartan.rank();
        let corank = cartan.corank();
        let dim_h = n + corank;
        // columns of A are the coordinates of roots against the coroots;
        // pick the roots outside a greedy independent set to pair with extras
        let root_rows: Vec<Vec<i64>> = (0..n).map(|j| (0..n).map(|i| cartan.entry(i, j)).collect()).collect();
        let mut chosen: Vec<Vec<i64>> = Vec::new();
        let mut dependent = Vec::new();
        for (j, row) in root_rows.iter().enumerate().rev() {
            let mut trial = chosen.clone();
            trial.push(row.clone());
            if integer_rank(&trial) == trial.len() {
                chosen = trial;
            } else {
                dependent.push(j);
            }
        }
        dependent.sort_unstable();
        assert_eq!(dependent.len(), corank);
        let mut roots = vec![vec![0i64; dim_h]; n];
        for j in 0..n {
            roots[j][..n].copy_from_slice(&root_rows[j]);
        }
        for (k, &j) in dependent.iter().enumerate() {
            roots[j][n + k] = 1;
        }
        let mut coroots = vec![vec![0i64; dim_h]; n];
        for (i, c) in coroots.iter_mut().enumerate() {
            c[i] = 1;
        }
        Realization::new(cartan, dim_h, roots, coroots).expect("minimal realization is valid")
    }

    pub fn from_doc(doc: RealizationDoc) -> Result<Self> {
        let cartan = GeneralizedCartanMatrix::new(doc.cartan)?;
        match (doc.roots, doc.coroots) {
            (None, None) => {
                let r = Realization::minimal(cartan);
                if let Some(d) = doc.dim_h {
                    if d != r.dim_h {
                        return Err(Error::InvalidRealization(format!(
                            "dim_h = {d} given without roots/coroots; minimal realization has {}",
                            r.dim_h
                        )));
                    }
                }
                Ok(r)
            }
            (Some(roots), Some(coroots)) => {
                let dim_h = doc.dim_h.unwrap_or_else(|| roots.first().map_or(0, |r| r.len()));
                Realization::new(cartan, dim_h, roots, coroots)
            }
            _ => Err(Error::InvalidRealization("roots and coroots must be given together".into())),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: RealizationDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_doc(doc)
    }

    pub fn to_doc(&self) -> RealizationDoc {
        RealizationDoc {
            cartan: self.cartan.entries().to_vec(),
            dim_h: Some(self.dim_h),
            roots: Some(self.roots.clone()),
            coroots: Some(self.coroots.clone()),
        }
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    /// The realization of the Langlands-dual datum: roots and coroots swap
    /// and the Cartan matrix is transposed.
    pub fn dual(&self) -> Realization {
        Realization {
            dim_h: self.dim_h,
            roots: self.coroots.clone(),
            coroots: self.roots.clone(),
            cartan: self.cartan.transpose(),
        }
    }

    /// Matrix of `s_i` on `V_H` in the standard basis (column convention).
    pub fn reflection_on_vh(&self, i: usize) -> Vec<Vec<i64>> {
        // s(v) = v - <root_i, v> coroot_i
        let d = self.dim_h;
        let mut m = vec![vec![0i64; d]; d];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, x) in row.iter_mut().enumerate() {
                *x = i64::from(r == c) - self.coroots[i][r] * self.roots[i][c];
            }
        }
        m
    }

    /// Matrix of `s_i` on `V_H^dual` in the dual basis (column convention).
    pub fn reflection_on_dual(&self, i: usize) -> Vec<Vec<i64>> {
        // s(l) = l - <l, coroot_i> root_i
        let d = self.dim_h;
        let mut m = vec![vec![0i64; d]; d];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, x) in row.iter_mut().enumerate() {
                *x = i64::from(r == c) - self.roots[i][r] * self.coroots[i][c];
            }
        }
        m
    }

    pub fn gcm_hash(&self) -> String {
        let json = serde_json::to_string(&self.to_doc()).expect("realization serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_matrices() {
        assert!(GeneralizedCartanMatrix::new(vec![vec![2, 1], vec![-1, 2]]).is_err());
        assert!(GeneralizedCartanMatrix::new(vec![vec![2, 0], vec![-1, 2]]).is_err());
        assert!(GeneralizedCartanMatrix::new(vec![vec![1]]).is_err());
    }

    #[test]
    fn minimal_realizations() {
        let r = Realization::minimal(GeneralizedCartanMatrix::a2());
        assert_eq!(r.dim_h, 2);
        let r = Realization::minimal(GeneralizedCartanMatrix::affine_a1());
        assert_eq!(r.dim_h, 3);
        assert_eq!(r.dual().dual(), r);
        let r = Realization::minimal(GeneralizedCartanMatrix::b2());
        assert!(Realization::new(r.cartan.transpose(), 2, r.coroots.clone(), r.roots.clone()).is_ok());
    }

    #[test]
    fn finite_type_and_symmetrizability() {
        let a = GeneralizedCartanMatrix::affine_a1();
        assert!(!a.is_finite_type_on(&[0, 1]));
        assert!(a.is_finite_type_on(&[0]));
        assert!(GeneralizedCartanMatrix::b2().is_finite_type_on(&[0, 1]));
        assert!(GeneralizedCartanMatrix::b2().is_symmetrizable());
        let weird = GeneralizedCartanMatrix::new(vec![vec![2, -1, -1], vec![-2, 2, -1], vec![-1, -1, 2]]).unwrap();
        assert!(!weird.is_symmetrizable());
    }

    #[test]
    fn json_roundtrip_and_defaults() {
        let r = Realization::from_json(r#"{"cartan": [[2,-1],[-1,2]]}"#).unwrap();
        assert_eq!(r, Realization::minimal(GeneralizedCartanMatrix::a2()));
        let again = Realization::from_json(&serde_json::to_string(&r.to_doc()).unwrap()).unwrap();
        assert_eq!(again, r);
        assert!(Realization::from_json(r#"{"cartan": [[2,-1],[-1,2]], "roots": [[2,-1],[-1,2]]}"#).is_err());
    }
}
