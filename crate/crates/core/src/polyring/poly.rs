use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{rat, Rational};

/// Exponent vector ordered graded-lexicographically: by total degree, then
/// lexicographically with `x0 > x1 > ...`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` if it divides.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_monomial(self))
    }
}

fn render_monomial(m: &Monomial) -> String {
    let parts: Vec<String> = m
        .0
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// All monomials of total degree `k` in `nvars` variables, ascending.
pub fn monomials_of_degree(nvars: usize, k: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == nvars {
            cur.push(left);
            out.push(Monomial(cur.clone()));
            cur.pop();
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(nvars, i + 1, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if k == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    rec(nvars, 0, k, &mut Vec::with_capacity(nvars), &mut out);
    out.sort();
    out
}

/// Number of monomials of degree `k` in `n` variables.
pub fn count_monomials(n: usize, k: u32) -> usize {
    if n == 0 {
        return usize::from(k == 0);
    }
    // C(k + n - 1, n - 1)
    let mut c: u128 = 1;
    for i in 0..(n as u128 - 1) {
        c = c * (k as u128 + 1 + i) / (i + 1);
    }
    c as usize
}

/// Polynomial over `Q` in a fixed number of variables. The ring it lives in
/// (realization and side) is carried by the caller.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GradedPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl GradedPoly {
    pub fn zero(nvars: usize) -> Self {
        GradedPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, i), Rational::one());
        p
    }

    /// `sum_i c_i x_i`
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    pub fn linear_int(coeffs: &[i64]) -> Self {
        Self::linear(&coeffs.iter().map(|&c| rat(c)).collect::<Vec<_>>())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(m.0.len());
        p.add_term(m, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.0.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Polynomial degree of a homogeneous element; `None` for zero.
    pub fn poly_degree(&self) -> Option<u32> {
        self.leading().map(|(m, _)| m.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| m.degree());
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn homogeneous_part(&self, k: u32) -> Self {
        GradedPoly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == k).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        GradedPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        GradedPoly { nvars: self.nvars, terms: self.terms.iter().map(|(a, x)| (a.mul(m), x * c)).collect() }
    }

    pub fn add_assign_scaled(&mut self, other: &GradedPoly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Replace each variable `x_i` by `images[i]`.
    pub fn substitute(&self, images: &[GradedPoly]) -> Self {
        assert_eq!(images.len(), self.nvars);
        let mut out = Self::zero(self.nvars);
        let mut powers: Vec<Vec<GradedPoly>> = images.iter().map(|p| vec![Self::one(p.nvars), p.clone()]).collect();
        for (m, c) in &self.terms {
            let mut t = Self::constant(self.nvars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out.add_assign_scaled(&t, &Rational::one());
        }
        out
    }

    /// Exact division by a nonzero linear form.
    pub fn div_linear(&self, l: &GradedPoly) -> Result<GradedPoly> {
        // pivot variable: the one carrying the leading term of l
        let (lead_m, lead_c) = l.leading().ok_or_else(|| Error::DivisionFailure("division by zero".into()))?;
        if lead_m.degree() != 1 || !l.is_homogeneous() {
            return Err(Error::DivisionFailure("divisor is not a linear form".into()));
        }
        let p = lead_m.0.iter().position(|&e| e == 1).unwrap();
        let lead_c = lead_c.clone();
        let mut rest = self.clone();
        let mut q = Self::zero(self.nvars);
        while let Some((m, c)) = rest.terms.iter().rev().find(|(m, _)| m.0[p] > 0).map(|(m, c)| (m.clone(), c.clone())) {
            let mut e = m.0.clone();
            e[p] -= 1;
            let qm = Monomial(e);
            let qc = c / &lead_c;
            rest.add_assign_scaled(&l.mul_monomial(&qm, &qc), &-Rational::one());
            q.add_term(qm, qc);
        }
        if !rest.is_zero() {
            return Err(Error::DivisionFailure(format!("{l} does not divide {self}")));
        }
        Ok(q)
    }

    /// Canonical text: terms in descending graded-lex order, explicit
    /// rational coefficients, e.g. `1/2*x0^2*x1 + -3*x2 + 5`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| {
                if m.degree() == 0 {
                    c.to_string()
                } else {
                    format!("{c}*{}", render_monomial(m))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn from_text(nvars: usize, text: &str) -> Result<GradedPoly> {
        let mut p = Self::zero(nvars);
        let t = text.trim();
        if t == "0" {
            return Ok(p);
        }
        for term in t.split(" + ") {
            let mut factors = term.trim().split('*');
            let coeff_text = factors.next().ok_or_else(|| Error::Parse(format!("empty term in {text:?}")))?;
            let c: Rational = coeff_text.parse().map_err(|_| Error::Parse(format!("bad coefficient {coeff_text:?}")))?;
            let mut e = vec![0u32; nvars];
            for f in factors {
                let (var, exp) = match f.split_once('^') {
                    Some((v, x)) => (v, x.parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in {f:?}")))?),
                    None => (f, 1),
                };
                let idx: usize = var
                    .strip_prefix('x')
                    .and_then(|s| s.parse().ok())
                    .filter(|&i: &usize| i < nvars)
                    .ok_or_else(|| Error::Parse(format!("bad variable {var:?}")))?;
                e[idx] += exp;
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    /// Coefficients against `basis` (monomials of one degree); `None` if some
    /// term is not in the basis.
    pub fn coords(&self, index: &std::collections::HashMap<Monomial, usize>) -> Option<Vec<(usize, Rational)>> {
        let mut out: Vec<(usize, Rational)> = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            out.push((*index.get(m)?, c.clone()));
        }
        out.sort_by_key(|(i, _)| *i);
        Some(out)
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn max_abs_coeff(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedPoly({self})")
    }
}

impl std::ops::Add for &GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &Rational::one());
        out
    }
}

impl std::ops::Sub for &GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &-Rational::one());
        out
    }
}

impl std::ops::Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        self.scale(&-Rational::one())
    }
}

impl std::ops::Mul for &GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = GradedPoly::zero(self.nvars);
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frac;

    #[test]
    fn monomial_counts_and_order() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(count_monomials(3, 2), 6);
        assert_eq!(count_monomials(2, 7), 8);
        assert_eq!(count_monomials(1, 4), 1);
        let ms = monomials_of_degree(2, 2);
        assert_eq!(ms, vec![Monomial(vec![0, 2]), Monomial(vec![1, 1]), Monomial(vec![2, 0])]);
        assert!(Monomial(vec![0, 0, 1]) > Monomial(vec![0, 0, 0]));
    }

    #[test]
    fn text_round_trip() {
        let x = GradedPoly::var(3, 0);
        let y = GradedPoly::var(3, 1);
        let p = &(&(&x * &x) * &y).scale(&frac(1, 2)) - &GradedPoly::var(3, 2).scale(&rat(3));
        let p = &p + &GradedPoly::constant(3, rat(5));
        assert_eq!(p.to_text(), "1/2*x0^2*x1 + -3*x2 + 5");
        assert_eq!(GradedPoly::from_text(3, &p.to_text()).unwrap(), p);
        assert_eq!(GradedPoly::from_text(3, "0").unwrap(), GradedPoly::zero(3));
        assert!(GradedPoly::from_text(2, "1*x5").is_err());
    }

    #[test]
    fn division_by_linear_forms() {
        let l = GradedPoly::linear_int(&[2, -1]);
        let q = &GradedPoly::var(2, 0) * &GradedPoly::var(2, 1);
        let f = &l * &q;
        assert_eq!(f.div_linear(&l).unwrap(), q);
        assert!(GradedPoly::var(2, 0).div_linear(&l).is_err());
    }
}
