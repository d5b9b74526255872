use num_traits::{One, Zero};

use super::{HomoPoly, Monomial};
use crate::error::{Error, Result};
use crate::rational::{to_f64, Rational};

/// Square rational matrix acting on variables by `y -> A y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearSubstitution {
    n: usize,
    entries: Vec<Rational>,
}

impl LinearSubstitution {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::contract("substitution matrix must be square and nonempty"));
        }
        Ok(LinearSubstitution {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        LinearSubstitution::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| crate::rational::rat(v)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        LinearSubstitution::diagonal((0..n).map(|_| Rational::one()).collect())
    }

    pub fn diagonal(d: Vec<Rational>) -> Self {
        let n = d.len();
        let mut entries = vec![Rational::zero(); n * n];
        for (i, v) in d.into_iter().enumerate() {
            entries[i * n + i] = v;
        }
        LinearSubstitution { n, entries }
    }

    /// Exchanges variables `i` and `j` (0-based).
    pub fn swap(n: usize, i: usize, j: usize) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(i, j);
        LinearSubstitution::permutation(&perm)
    }

    /// The matrix with `(Ay)_i = y_{perm[i]}`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut entries = vec![Rational::zero(); n * n];
        for (i, &p) in perm.iter().enumerate() {
            entries[i * n + p] = Rational::one();
        }
        LinearSubstitution { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Exact determinant by Gaussian elimination over the rationals.
    pub fn determinant(&self) -> Rational {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return Rational::zero();
            };
            if piv != col {
                for k in 0..n {
                    a.swap(piv * n + k, col * n + k);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det *= &p;
            for r in col + 1..n {
                let f = &a[r * n + col] / &p;
                if f.is_zero() {
                    continue;
                }
                for k in col..n {
                    let v = &f * &a[col * n + k];
                    a[r * n + k] -= v;
                }
            }
        }
        det
    }

    pub fn is_singular(&self) -> bool {
        self.determinant().is_zero()
    }

    /// Exact inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let w = 2 * n;
        let mut a = vec![Rational::zero(); n * w];
        for i in 0..n {
            for j in 0..n {
                a[i * w + j] = self.get(i, j).clone();
            }
            a[i * w + n + i] = Rational::one();
        }
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r * w + col].is_zero())?;
            if piv != col {
                for k in 0..w {
                    a.swap(piv * w + k, col * w + k);
                }
            }
            let p = a[col * w + col].clone();
            for k in 0..w {
                a[col * w + k] /= &p;
            }
            for r in 0..n {
                if r == col || a[r * w + col].is_zero() {
                    continue;
                }
                let f = a[r * w + col].clone();
                for k in 0..w {
                    let v = &f * &a[col * w + k];
                    a[r * w + k] -= v;
                }
            }
        }
        let entries = (0..n)
            .flat_map(|i| a[i * w + n..i * w + w].to_vec())
            .collect();
        Some(LinearSubstitution { n, entries })
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &LinearSubstitution) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::contract("substitution dimensions differ"));
        }
        let n = self.n;
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Ok(LinearSubstitution { n, entries })
    }

    pub fn apply(&self, y: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| to_f64(self.get(i, j)) * y[j]).sum())
            .collect()
    }

    pub fn apply_exact(&self, y: &[Rational]) -> Vec<Rational> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.get(i, j) * &y[j])
                    .fold(Rational::zero(), |a, b| a + b)
            })
            .collect()
    }
}

impl HomoPoly {
    /// The polynomial `y -> p(A y)`. Singular `A` is allowed.
    pub fn substitute(&self, a: &LinearSubstitution) -> Result<HomoPoly> {
        let n = self.nvars();
        if a.dim() != n {
            return Err(Error::contract(format!(
                "substitution is {}x{} but polynomial has {n} variables",
                a.dim(),
                a.dim()
            )));
        }
        let d = self.degree();
        // powers[i][e] = (row i of A . y)^e
        let powers: Vec<Vec<HomoPoly>> = (0..n)
            .map(|i| {
                let mut lin = HomoPoly::zero(n, 1);
                for j in 0..n {
                    let mut e = vec![0; n];
                    e[j] = 1;
                    lin.accumulate(Monomial(e), a.get(i, j).clone());
                }
                let mut out = vec![HomoPoly::constant(n, Rational::one())];
                for k in 1..=d as usize {
                    let next = out[k - 1].times(&lin);
                    out.push(next);
                }
                out
            })
            .collect();
        let mut result = HomoPoly::zero(n, d);
        for (m, c) in self.terms() {
            let mut term = HomoPoly::constant(n, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    term = term.times(&powers[i][e as usize]);
                }
            }
            if term.degree() != d {
                // only for a zero polynomial of nonzero degree; nothing to add
                continue;
            }
            result = result.plus(&term);
        }
        Ok(result)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    #[test]
    fn identity_and_swap() {
        let p = HomoPoly::from_i64(3, 6, &[(&[4, 2, 0], 1), (&[2, 2, 2], -3)]).unwrap();
        assert_eq!(p.substitute(&LinearSubstitution::identity(3)).unwrap(), p);
        let y1sq = HomoPoly::from_i64(3, 2, &[(&[2, 0, 0], 1)]).unwrap();
        let swapped = y1sq.substitute(&LinearSubstitution::swap(3, 0, 1)).unwrap();
        assert_eq!(swapped, HomoPoly::from_i64(3, 2, &[(&[0, 2, 0], 1)]).unwrap());
    }

    #[test]
    fn diagonal_scaling_coefficient() {
        let p = HomoPoly::from_i64(3, 6, &[(&[4, 2, 0], 1), (&[2, 2, 2], -3)]).unwrap();
        let a = LinearSubstitution::diagonal(vec![rat(2), ratio(1, 3), rat(5)]);
        let q = p.substitute(&a).unwrap();
        assert_eq!(q.coefficient(&[4, 2, 0]), rat(16) * ratio(1, 9));
    }

    #[test]
    fn determinant_and_inverse() {
        let a = LinearSubstitution::from_i64(&[&[2, 1, 0], &[0, 1, 3], &[1, 0, 1]]).unwrap();
        assert_eq!(a.determinant(), rat(5));
        let inv = a.inverse().unwrap();
        assert_eq!(a.compose(&inv).unwrap(), LinearSubstitution::identity(3));
        let s = LinearSubstitution::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]]).unwrap();
        assert!(s.is_singular());
        assert!(s.inverse().is_none());
        assert!(LinearSubstitution::swap(3, 1, 2).determinant() == rat(-1));
    }

    #[test]
    fn zero_polynomial_keeps_degree() {
        let z = HomoPoly::zero(3, 4);
        let a = LinearSubstitution::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        let s = z.substitute(&a).unwrap();
        assert!(s.is_zero());
        assert_eq!(s.degree(), 4);
    }
}
