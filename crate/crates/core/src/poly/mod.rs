//! Exact homogeneous multivariate polynomials over the rationals.
//!
//! A [`HomoPoly`] stores a canonical sparse term map (no zero coefficients)
//! keyed by exponent vectors in graded lexicographic order, and always
//! carries its degree, so the zero polynomial of degree 6 and the zero
//! polynomial of degree 4 are different values.

mod format;
mod nonneg;
mod numeric;
mod square;
mod substitution;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{rat, to_f64, Rational};

pub use format::{PolyJson, TermJson};
pub use nonneg::{nonneg_check, sphere_minima, NonnegReport, NonnegVerdict, SphereBudget, SphereMinimum};
pub use numeric::NumericPoly;
pub(crate) use nonneg::separated_best as separated_best_seeds;
pub use square::{perfect_square_check, perfect_square_check_seeded, SquareReport, SquareVerdict};
pub use substitution::LinearSubstitution;

/// Exponent vector of a monomial. Ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_even(&self) -> bool {
        self.0.iter().all(|e| e % 2 == 0)
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of the given degree in `nvars` variables, leading
/// (largest) first.
pub fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(prefix: &mut Vec<u32>, left: usize, remaining: u32, out: &mut Vec<Monomial>) {
        if left == 1 {
            prefix.push(remaining);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            rec(prefix, left - 1, remaining - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        return out;
    }
    rec(&mut Vec::with_capacity(nvars), nvars, degree, &mut out);
    out
}

/// Exact sparse homogeneous polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "PolyJson", into = "PolyJson")]
pub struct HomoPoly {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Monomial, Rational>,
}

impl HomoPoly {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        HomoPoly {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = HomoPoly::zero(nvars, 0);
        p.accumulate(Monomial(vec![0; nvars]), c);
        p
    }

    /// The coordinate polynomial `y_{index+1}`.
    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        let mut p = HomoPoly::zero(nvars, 1);
        p.accumulate(Monomial(e), Rational::one());
        p
    }

    pub fn monomial(exponents: &[u32], coef: Rational) -> Self {
        let degree = exponents.iter().sum();
        let mut p = HomoPoly::zero(exponents.len(), degree);
        p.accumulate(Monomial(exponents.to_vec()), coef);
        p
    }

    /// Builds a polynomial from terms, merging repeated monomials.
    pub fn from_terms<I>(nvars: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = HomoPoly::zero(nvars, degree);
        for (exp, c) in terms {
            if exp.len() != nvars {
                return Err(Error::contract(format!(
                    "exponent vector {exp:?} has length {}, expected {nvars}",
                    exp.len()
                )));
            }
            let d: u32 = exp.iter().sum();
            if d != degree {
                return Err(Error::contract(format!(
                    "term {exp:?} has degree {d}, expected {degree}"
                )));
            }
            p.accumulate(Monomial(exp), c);
        }
        Ok(p)
    }

    /// Convenience constructor with integer coefficients.
    pub fn from_i64(nvars: usize, degree: u32, terms: &[(&[u32], i64)]) -> Result<Self> {
        HomoPoly::from_terms(
            nvars,
            degree,
            terms.iter().map(|(e, c)| (e.to_vec(), rat(*c))),
        )
    }

    fn accumulate(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order, leading monomial first.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    fn check_same_space(&self, other: &HomoPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::contract(format!(
                "variable count mismatch: {} vs {}",
                self.nvars, other.nvars
            )));
        }
        if self.degree != other.degree {
            return Err(Error::contract(format!(
                "degree mismatch: {} vs {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &HomoPoly) -> Result<HomoPoly> {
        self.check_same_space(other)?;
        Ok(self.plus(other))
    }

    pub fn sub(&self, other: &HomoPoly) -> Result<HomoPoly> {
        self.check_same_space(other)?;
        Ok(self.minus(other))
    }

    pub fn mul(&self, other: &HomoPoly) -> Result<HomoPoly> {
        if self.nvars != other.nvars {
            return Err(Error::contract(format!(
                "variable count mismatch: {} vs {}",
                self.nvars, other.nvars
            )));
        }
        Ok(self.times(other))
    }

    pub fn scale(&self, c: &Rational) -> HomoPoly {
        let mut out = HomoPoly::zero(self.nvars, self.degree);
        if c.is_zero() {
            return out;
        }
        for (m, a) in &self.terms {
            out.terms.insert(m.clone(), a * c);
        }
        out
    }

    pub fn neg(&self) -> HomoPoly {
        self.scale(&rat(-1))
    }

    // Unchecked variants for internal code whose shapes agree by construction.
    pub(crate) fn plus(&self, other: &HomoPoly) -> HomoPoly {
        debug_assert_eq!((self.nvars, self.degree), (other.nvars, other.degree));
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), c.clone());
        }
        out
    }

    pub(crate) fn minus(&self, other: &HomoPoly) -> HomoPoly {
        debug_assert_eq!((self.nvars, self.degree), (other.nvars, other.degree));
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), -c.clone());
        }
        out
    }

    pub(crate) fn times(&self, other: &HomoPoly) -> HomoPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = HomoPoly::zero(self.nvars, self.degree + other.degree);
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                out.accumulate(ma.times(mb), a * b);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> HomoPoly {
        let mut out = HomoPoly::constant(self.nvars, Rational::one());
        for _ in 0..k {
            out = out.times(self);
        }
        out
    }

    /// Floating evaluation. Panics if `y.len() != nvars`.
    pub fn eval(&self, y: &[f64]) -> f64 {
        assert_eq!(y.len(), self.nvars, "point dimension must equal nvars");
        self.terms
            .iter()
            .map(|(m, c)| {
                let mono: f64 = m.0.iter().zip(y).map(|(&e, &v)| v.powi(e as i32)).product();
                to_f64(c) * mono
            })
            .sum()
    }

    /// Exact evaluation at a rational point.
    pub fn eval_exact(&self, y: &[Rational]) -> Rational {
        assert_eq!(y.len(), self.nvars, "point dimension must equal nvars");
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (&e, v) in m.0.iter().zip(y) {
                if e > 0 {
                    t *= num_traits::pow(v.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// True iff every stored exponent is even.
    pub fn is_even_in_each_variable(&self) -> bool {
        self.terms.keys().all(Monomial::is_even)
    }

    /// Average over the sign flips of all variables. Terms with an odd
    /// exponent cancel in the average, so this keeps the all-even part.
    pub fn even_symmetrize(&self) -> HomoPoly {
        HomoPoly {
            nvars: self.nvars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.is_even())
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Partial derivative with respect to variable `index` (0-based).
    pub fn partial(&self, index: usize) -> HomoPoly {
        let mut out = HomoPoly::zero(self.nvars, self.degree.saturating_sub(1));
        for (m, c) in &self.terms {
            let e = m.0[index];
            if e == 0 {
                continue;
            }
            let mut exp = m.0.clone();
            exp[index] -= 1;
            out.accumulate(Monomial(exp), c * rat(e as i64));
        }
        out
    }

    pub fn gradient(&self) -> Vec<HomoPoly> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    /// Coefficients `c_k` of `s^k` in `p(point + s * direction)`,
    /// `k = 0..=degree`.
    pub fn line_coefficients(&self, point: &[Rational], direction: &[Rational]) -> Vec<Rational> {
        let d = self.degree as usize;
        let mut out = vec![Rational::zero(); d + 1];
        let lines: Vec<Vec<Vec<Rational>>> = (0..self.nvars)
            .map(|i| linear_powers(&point[i], &direction[i], d))
            .collect();
        for (m, c) in &self.terms {
            let mut acc = vec![c.clone()];
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    acc = univariate_mul(&acc, &lines[i][e as usize]);
                }
            }
            for (k, v) in acc.into_iter().enumerate() {
                out[k] += v;
            }
        }
        out
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coefficient_norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| to_f64(c).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn numeric(&self) -> NumericPoly {
        NumericPoly::from_poly(self)
    }

    /// Replaces every coefficient through `f`, dropping zeros.
    pub fn map_coefficients(&self, mut f: impl FnMut(&Rational) -> Rational) -> HomoPoly {
        let mut out = HomoPoly::zero(self.nvars, self.degree);
        for (m, c) in &self.terms {
            out.accumulate(m.clone(), f(c));
        }
        out
    }

    /// Builds a polynomial from float coefficients on a monomial basis,
    /// converting each value exactly.
    pub fn from_f64_coefficients(nvars: usize, degree: u32, basis: &[Monomial], values: &[f64]) -> HomoPoly {
        let mut out = HomoPoly::zero(nvars, degree);
        for (m, &v) in basis.iter().zip(values) {
            out.accumulate(m.clone(), crate::rational::from_f64_exact(v));
        }
        out
    }

    /// Coefficient vector on the given basis, as floats.
    pub fn coefficients_on(&self, basis: &[Monomial]) -> Vec<f64> {
        basis
            .iter()
            .map(|m| self.terms.get(m).map(to_f64).unwrap_or(0.0))
            .collect()
    }
}

/// Powers `(a + s b)^k` for `k = 0..=max`, as univariate coefficient vectors.
fn linear_powers(a: &Rational, b: &Rational, max: usize) -> Vec<Vec<Rational>> {
    let mut out = Vec::with_capacity(max + 1);
    out.push(vec![Rational::one()]);
    let base = vec![a.clone(), b.clone()];
    for k in 1..=max {
        let next = univariate_mul(&out[k - 1], &base);
        out.push(next);
    }
    out
}

fn univariate_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Integer binomial coefficient, used by tests and fixtures.
pub fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn cyclic_sextic() -> HomoPoly {
        HomoPoly::from_i64(
            3,
            6,
            &[(&[4, 2, 0], 1), (&[0, 4, 2], 1), (&[2, 0, 4], 1), (&[2, 2, 2], -3)],
        )
        .unwrap()
    }

    #[test]
    fn monomial_basis_sizes() {
        assert_eq!(monomials_of_degree(3, 6).len(), 28);
        assert_eq!(monomials_of_degree(3, 3).len(), 10);
        let b = monomials_of_degree(3, 2);
        assert_eq!(b[0].exponents(), &[2, 0, 0]);
        assert_eq!(b.last().unwrap().exponents(), &[0, 0, 2]);
        assert!(b.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn add_mul_scale() {
        let a = HomoPoly::from_i64(3, 2, &[(&[2, 0, 0], 1)]).unwrap();
        let b = HomoPoly::from_i64(3, 2, &[(&[0, 2, 0], 1)]).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(s.len(), 2);
        let c = HomoPoly::from_i64(3, 4, &[(&[0, 2, 2], 1)]).unwrap();
        let prod = a.mul(&c).unwrap();
        assert_eq!(prod, HomoPoly::from_i64(3, 6, &[(&[2, 2, 2], 1)]).unwrap());
        let z = cyclic_sextic().scale(&rat(0));
        assert!(z.is_zero());
        assert_eq!(z.degree(), 6);
    }

    #[test]
    fn add_rejects_mismatched_shapes() {
        let a = HomoPoly::from_i64(3, 2, &[(&[2, 0, 0], 1)]).unwrap();
        let b = HomoPoly::from_i64(3, 4, &[(&[4, 0, 0], 1)]).unwrap();
        assert!(matches!(a.add(&b), Err(Error::Contract(_))));
        let c = HomoPoly::from_i64(2, 2, &[(&[2, 0], 1)]).unwrap();
        assert!(matches!(a.add(&c), Err(Error::Contract(_))));
        assert!(matches!(a.mul(&c), Err(Error::Contract(_))));
        assert!(HomoPoly::from_i64(3, 2, &[(&[1, 0, 0], 1)]).is_err());
    }

    #[test]
    fn evaluation() {
        let p = cyclic_sextic();
        assert_eq!(p.eval(&[1.0, 1.0, 1.0]), 0.0);
        assert_eq!(p.eval(&[1.0, 1.0, 0.0]), 1.0);
        let m = HomoPoly::from_i64(3, 6, &[(&[2, 2, 2], 1)]).unwrap();
        assert_eq!(m.eval(&[1.0, 2.0, 3.0]), 36.0);
        assert_eq!(m.eval_exact(&[rat(1), rat(2), rat(3)]), rat(36));
        assert_eq!(p.eval_exact(&[ratio(1, 2), rat(1), rat(2)]), {
            // 1/16 + 4 + 1/4*16 - 3*1/4*1*4
            ratio(1, 16) + rat(4) + rat(4) - rat(3)
        });
    }

    #[test]
    fn even_parts() {
        let odd = HomoPoly::from_i64(3, 6, &[(&[3, 3, 0], 1)]).unwrap();
        assert!(!odd.is_even_in_each_variable());
        assert!(odd.even_symmetrize().is_zero());
        let mixed = HomoPoly::from_i64(3, 6, &[(&[4, 2, 0], 1), (&[3, 3, 0], 1)]).unwrap();
        assert_eq!(
            mixed.even_symmetrize(),
            HomoPoly::from_i64(3, 6, &[(&[4, 2, 0], 1)]).unwrap()
        );
        assert_eq!(cyclic_sextic().even_symmetrize(), cyclic_sextic());
    }

    #[test]
    fn line_coefficients_match_substitution() {
        let p = cyclic_sextic();
        let y0 = [rat(1), rat(1), rat(1)];
        let v = [rat(1), rat(-2), ratio(1, 3)];
        let coeffs = p.line_coefficients(&y0, &v);
        // y0 is a double zero: constant and linear coefficients vanish.
        assert!(coeffs[0].is_zero());
        assert!(coeffs[1].is_zero());
        for s in [ratio(1, 2), rat(-3), ratio(2, 7)] {
            let pt: Vec<Rational> = y0.iter().zip(&v).map(|(a, b)| a + &s * b).collect();
            let direct = p.eval_exact(&pt);
            let mut horner = Rational::zero();
            for c in coeffs.iter().rev() {
                horner = horner * &s + c;
            }
            assert_eq!(direct, horner);
        }
    }

    #[test]
    fn partial_derivatives() {
        let p = cyclic_sextic();
        let g = p.gradient();
        let one = [rat(1), rat(1), rat(1)];
        for gi in &g {
            assert_eq!(gi.degree(), 5);
            assert!(gi.eval_exact(&one).is_zero());
        }
        assert_eq!(binomial(6, 2), BigInt::from(15));
    }
}
