//! Linear algebra over prime fields and certified rational solution spaces.
//!
//! Solution spaces of exact systems are computed modulo word-size primes;
//! rational solutions are recovered by Chinese remaindering and rational
//! reconstruction and then checked exactly, so results never depend on the
//! choice of prime.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{Echelon, Rational, SparseVec};

/// Primes just below `2^31`, so products fit in a `u64`.
pub const PRIMES: [u64; 12] = [
    2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549, 2147483543, 2147483497, 2147483489,
    2147483477, 2147483423, 2147483399,
];

/// Extra random combinations beyond the column count when compressing.
const OVERSAMPLE: usize = 8;
const SEED: u64 = 0x6d6f_6470;

pub type ModVec = Vec<(usize, u64)>;

fn mul(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

/// Reduction of values below `2^63` by a fixed prime via a precomputed
/// reciprocal.
#[derive(Clone, Copy, Debug)]
struct Reducer {
    p: u64,
    recip: u64,
}

impl Reducer {
    fn new(p: u64) -> Self {
        Reducer { p, recip: u64::MAX / p }
    }

    #[inline]
    fn reduce(self, x: u64) -> u64 {
        let q = ((x as u128 * self.recip as u128) >> 64) as u64;
        let mut r = x - q * self.p;
        while r >= self.p {
            r -= self.p;
        }
        r
    }
}

fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    r
}

fn inv(a: u64, p: u64) -> u64 {
    pow(a, p - 2, p)
}

fn reduce_int(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap()
}

/// Image of a rational in `F_p`; `None` if the denominator vanishes.
pub fn reduce(x: &Rational, p: u64) -> Option<u64> {
    let d = reduce_int(x.denom(), p);
    if d == 0 {
        return None;
    }
    Some(mul(reduce_int(x.numer(), p), inv(d, p), p))
}

pub fn reduce_vec(v: &SparseVec, p: u64) -> Option<ModVec> {
    let mut out = Vec::with_capacity(v.len());
    for (c, x) in v {
        let r = reduce(x, p)?;
        if r != 0 {
            out.push((*c, r));
        }
    }
    Some(out)
}

fn densify(v: &ModVec, ncols: usize) -> Vec<u64> {
    let mut out = vec![0; ncols];
    for &(c, x) in v {
        out[c] = x;
    }
    out
}

/// Incremental dense echelon form over `F_p`. Each stored row is monic at
/// its pivot and zero at the pivots of the rows stored before it.
#[derive(Clone, Debug)]
pub struct ModEchelon {
    p: u64,
    red: Reducer,
    ncols: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl ModEchelon {
    pub fn new(ncols: usize, p: u64) -> Self {
        ModEchelon { p, red: Reducer::new(p), ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.ncols - self.rank()
    }

    /// Pivot columns in increasing order.
    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut out = self.pivots.clone();
        out.sort_unstable();
        out
    }

    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        let (p, red) = (self.p, self.red);
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let f = v[piv];
            if f == 0 {
                continue;
            }
            let neg = p - f;
            for (a, &b) in v[piv..].iter_mut().zip(&row[piv..]) {
                if b != 0 {
                    *a = red.reduce(*a + neg * b);
                }
            }
        }
        let Some(lead) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let li = inv(v[lead], p);
        for x in v[lead..].iter_mut() {
            *x = mul(*x, li, p);
        }
        self.rows.push(v);
        self.pivots.push(lead);
        true
    }

    /// Null space in reduced form: for each free column `f`, the unique
    /// solution with a one at `f` and zeros at the other free columns.
    pub fn nullspace(&self) -> Vec<(usize, ModVec)> {
        let (p, red) = (self.p, self.red);
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let mut rref: Vec<Vec<u64>> = order.iter().map(|&i| self.rows[i].clone()).collect();
        let pivots: Vec<usize> = order.iter().map(|&i| self.pivots[i]).collect();
        // clear every pivot column above its pivot
        for i in (0..rref.len()).rev() {
            let piv = pivots[i];
            let (upper, lower) = rref.split_at_mut(i);
            let row = &lower[0];
            for other in upper.iter_mut() {
                let f = other[piv];
                if f == 0 {
                    continue;
                }
                let neg = p - f;
                for (a, &b) in other[piv..].iter_mut().zip(&row[piv..]) {
                    if b != 0 {
                        *a = red.reduce(*a + neg * b);
                    }
                }
            }
        }
        let mut is_pivot = vec![false; self.ncols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.ncols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v: ModVec = vec![(f, 1)];
                for (row, &piv) in rref.iter().zip(&pivots) {
                    if row[f] != 0 {
                        v.push((piv, p - row[f]));
                    }
                }
                v.sort_unstable_by_key(|e| e.0);
                (f, v)
            })
            .collect()
    }
}

/// Smallest rational `r/s` congruent to `a` modulo `m` with
/// `|r|, s <= sqrt(m/2)`.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let x = Rational::new(r1, t1);
    // the representation must actually be congruent to a
    let num = x.numer().mod_floor(m);
    let den = x.denom().mod_floor(m);
    (num == (a * den).mod_floor(m)).then_some(x)
}

fn dot_is_zero(row: &SparseVec, x: &SparseVec) -> bool {
    let (mut i, mut j) = (0, 0);
    let mut acc = Rational::zero();
    while i < row.len() && j < x.len() {
        match row[i].0.cmp(&x[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += &row[i].1 * &x[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    acc.is_zero()
}

/// Exact basis of `{x : row . x = 0 for all rows}`.
///
/// `known` are exact solutions supplied by the caller; a maximal independent
/// subset of them is kept and completed by reconstructed solutions, each
/// checked against every row. If reconstruction does not succeed within the
/// available primes the system is solved by exact elimination.
pub fn certified_nullspace(ncols: usize, rows: &[SparseVec], known: &[SparseVec]) -> Vec<SparseVec> {
    if ncols == 0 {
        return Vec::new();
    }
    let p = PRIMES[0];
    let Some(sys) = reduce_rows(ncols, rows, p) else {
        return exact_nullspace(ncols, rows);
    };
    let nullity = sys.nullity();
    let mut span = ModEchelon::new(ncols, p);
    let mut basis: Vec<SparseVec> = Vec::new();
    for k in known {
        if basis.len() == nullity {
            break;
        }
        if let Some(m) = reduce_vec(k, p) {
            if span.insert(densify(&m, ncols)) {
                basis.push(k.clone());
            }
        }
    }
    if basis.len() == nullity {
        return basis;
    }
    // complete with reduced-form null vectors independent of the known span
    let mut wanted: Vec<usize> = Vec::new();
    let mut residues: BTreeMap<usize, ModVec> = BTreeMap::new();
    for (f, v) in sys.nullspace() {
        if basis.len() + wanted.len() == nullity {
            break;
        }
        if span.insert(densify(&v, ncols)) {
            wanted.push(f);
            residues.insert(f, v);
        }
    }
    let pivots = sys.pivot_columns();
    let mut modulus = BigInt::from(p);
    let mut lifted: BTreeMap<usize, BTreeMap<usize, BigInt>> = residues
        .iter()
        .map(|(&f, v)| (f, v.iter().map(|&(c, x)| (c, BigInt::from(x))).collect()))
        .collect();
    for (round, &q) in PRIMES.iter().enumerate() {
        if round > 0 {
            let Some(other) = reduce_rows(ncols, rows, q) else { continue };
            if other.pivot_columns() != pivots {
                continue;
            }
            let null_q: BTreeMap<usize, ModVec> = other.nullspace().into_iter().collect();
            let qb = BigInt::from(q);
            // CRT: x = a + m * ((b - a) * m^-1 mod q)
            let m_inv = BigInt::from(inv(reduce_int(&modulus, q), q));
            for f in &wanted {
                let entry = lifted.get_mut(f).unwrap();
                let vq: BTreeMap<usize, u64> = null_q[f].iter().copied().collect();
                let cols: Vec<usize> = entry.keys().copied().chain(vq.keys().copied()).collect();
                for c in cols {
                    let a = entry.get(&c).cloned().unwrap_or_else(BigInt::zero);
                    let b = BigInt::from(vq.get(&c).copied().unwrap_or(0));
                    let t = ((b - &a) * &m_inv).mod_floor(&qb);
                    entry.insert(c, a + &modulus * t);
                }
            }
            modulus *= qb;
        }
        let mut ok = true;
        let mut found = Vec::with_capacity(wanted.len());
        for f in &wanted {
            let mut x: SparseVec = Vec::new();
            for (&c, a) in &lifted[f] {
                match rational_reconstruct(a, &modulus) {
                    Some(r) if r.is_zero() => {}
                    Some(r) => x.push((c, r)),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok || !rows.iter().all(|row| dot_is_zero(row, &x)) {
                ok = false;
                break;
            }
            found.push(x);
        }
        if ok {
            basis.extend(found);
            return basis;
        }
    }
    exact_nullspace(ncols, rows)
}

/// Echelon form of the row space modulo `p`. Tall systems are first
/// compressed to `ncols + OVERSAMPLE` random combinations of the rows; the
/// compressed rank can only be smaller, so the nullity stays an upper bound.
fn reduce_rows(ncols: usize, rows: &[SparseVec], p: u64) -> Option<ModEchelon> {
    let rows: Vec<ModVec> = rows.iter().map(|r| reduce_vec(r, p)).collect::<Option<_>>()?;
    let mut e = ModEchelon::new(ncols, p);
    if rows.len() <= ncols + OVERSAMPLE {
        for r in &rows {
            if e.rank() == ncols {
                break;
            }
            e.insert(densify(r, ncols));
        }
        return Some(e);
    }
    let red = Reducer::new(p);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ p);
    for _ in 0..ncols + OVERSAMPLE {
        if e.rank() == ncols {
            break;
        }
        let mut acc = vec![0u64; ncols];
        for r in &rows {
            let c = rng.gen_range(1..p);
            for &(col, x) in r {
                acc[col] = red.reduce(acc[col] + c * x);
            }
        }
        e.insert(acc);
    }

    Some(e)
}

fn exact_nullspace(ncols: usize, rows: &[SparseVec]) -> Vec<SparseVec> {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r.clone());
    }
    e.nullspace()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frac, rat};
    use proptest::prelude::*;

    #[test]
    fn reconstruction_recovers_small_fractions() {
        let m = BigInt::from(PRIMES[0]);
        for x in [frac(-3, 7), frac(22, 9), rat(0), rat(-1), frac(1, 1024)] {
            let a = BigInt::from(reduce(&x, PRIMES[0]).unwrap());
            assert_eq!(rational_reconstruct(&a, &m), Some(x));
        }
    }

    #[test]
    fn known_solutions_are_kept() {
        // x0 + x1 - x2 = 0 in three unknowns
        let rows = vec![vec![(0, rat(1)), (1, rat(1)), (2, rat(-1))]];
        let known = vec![vec![(0, rat(1)), (2, rat(1))], vec![(0, rat(2)), (2, rat(2))]];
        let basis = certified_nullspace(3, &rows, &known);
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[0], known[0]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn agrees_with_exact_elimination(
            entries in proptest::collection::vec(-4i64..=4, 24),
            dens in proptest::collection::vec(1i64..=6, 24),
        ) {
            let rows: Vec<SparseVec> = (0..4)
                .map(|r| {
                    (0..6)
                        .filter_map(|c| {
                            let k = r * 6 + c;
                            (entries[k] != 0).then(|| (c, frac(entries[k], dens[k])))
                        })
                        .collect()
                })
                .collect();
            let fast = certified_nullspace(6, &rows, &[]);
            let slow = exact_nullspace(6, &rows);
            prop_assert_eq!(fast.len(), slow.len());
            for x in &fast {
                prop_assert!(rows.iter().all(|row| dot_is_zero(row, x)));
            }
        }
    }
}
