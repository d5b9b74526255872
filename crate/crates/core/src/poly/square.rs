//! Numeric search for a single polynomial square root, with exact
//! confirmation by rational rounding.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Signed};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{monomials_of_degree, HomoPoly, Monomial};
use crate::error::{Error, Result};
use crate::rational::{self, round_rational, Rational};
use crate::sphere;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SquareVerdict {
    /// `p = scale * root^2`; `exact` when confirmed in rational arithmetic.
    Square {
        root: HomoPoly,
        #[serde(with = "rational::as_string")]
        scale: Rational,
        exact: bool,
    },
    NotSquare,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareReport {
    pub verdict: SquareVerdict,
    /// Relative coefficient residual `|p - scale*root^2| / |p|` of the best
    /// numeric candidate.
    pub residual: f64,
    pub tol: f64,
    pub starts: usize,
    pub seed: u64,
}

impl SquareReport {
    pub fn is_square(&self) -> bool {
        matches!(self.verdict, SquareVerdict::Square { .. })
    }
}

const DEFAULT_STARTS: usize = 12;
const MAX_DENOMINATOR: i128 = 1_000_000;

/// Decides whether `p` is the square of one homogeneous polynomial, up to
/// a positive constant factor. Uses seed 0 and the default start count.
pub fn perfect_square_check(p: &HomoPoly, tol: f64) -> Result<SquareReport> {
    perfect_square_check_seeded(p, tol, 0, DEFAULT_STARTS)
}

pub fn perfect_square_check_seeded(p: &HomoPoly, tol: f64, seed: u64, starts: usize) -> Result<SquareReport> {
    if p.degree() % 2 != 0 {
        return Err(Error::contract(format!(
            "a perfect square has even degree, got {}",
            p.degree()
        )));
    }
    let n = p.nvars();
    let k = p.degree() / 2;
    let report = |verdict, residual| SquareReport {
        verdict,
        residual,
        tol,
        starts,
        seed,
    };
    let Some((_, lc)) = p.leading_term() else {
        return Ok(report(
            SquareVerdict::Square {
                root: HomoPoly::zero(n, k),
                scale: Rational::one(),
                exact: true,
            },
            0.0,
        ));
    };
    if lc.is_negative() {
        // leading term of a square is a positive square
        return Ok(report(SquareVerdict::NotSquare, 1.0));
    }
    let lc = lc.clone();
    let monic = p.scale(&lc.recip());

    let problem = SquareProblem::new(&monic);
    let mut best: Option<(f64, Vec<f64>)> = None;
    let consider = |c: Vec<f64>, best: &mut Option<(f64, Vec<f64>)>| {
        let c = problem.levenberg_marquardt(c, 300);
        let res = problem.relative_residual(&c);
        if best.as_ref().is_none_or(|(r, _)| res < *r) {
            *best = Some((res, c));
        }
    };
    if let Some(c) = problem.monomial_order_seed() {
        consider(c, &mut best);
    }
    let mut rng = sphere::rng(seed);
    for s in 0..starts {
        if best.as_ref().is_some_and(|(r, _)| *r < 1e-14) {
            break;
        }
        let c = if s % 2 == 0 {
            problem.ray_seed(&mut rng)
        } else {
            (0..problem.basis.len()).map(|_| rng.sample(StandardNormal)).collect()
        };
        consider(c, &mut best);
    }
    let (residual, mut coeffs) = best.expect("at least one start runs");
    if residual > tol {
        return Ok(report(SquareVerdict::NotSquare, residual));
    }

    // sign normalisation: leading coefficient of the root positive
    if let Some(lead) = coeffs.iter().find(|c| c.abs() > 1e-12) {
        if *lead < 0.0 {
            coeffs.iter_mut().for_each(|c| *c = -*c);
        }
    }
    let rounded: Option<Vec<Rational>> = coeffs
        .iter()
        .map(|&c| round_rational(c, MAX_DENOMINATOR, 1e-9 * c.abs().max(1.0)))
        .collect();
    let exact_root = rounded.and_then(|rs| {
        let q = HomoPoly::from_terms(n, k, problem.basis.iter().zip(rs).map(|(m, c)| (m.exponents().to_vec(), c))).ok()?;
        (q.times(&q) == monic).then_some(q)
    });
    let verdict = match exact_root {
        Some(q) => match rational::rational_sqrt(&lc) {
            Some(r) => SquareVerdict::Square {
                root: q.scale(&r),
                scale: Rational::one(),
                exact: true,
            },
            None => SquareVerdict::Square {
                root: q,
                scale: lc,
                exact: true,
            },
        },
        None => SquareVerdict::Square {
            root: HomoPoly::from_f64_coefficients(n, k, &problem.basis, &coeffs),
            scale: lc,
            exact: false,
        },
    };
    Ok(report(verdict, residual))
}

struct SquareProblem {
    nvars: usize,
    basis: Vec<Monomial>,
    target: Vec<f64>,
    target_norm: f64,
    /// `(a, b, index of basis[a] + basis[b])` for `a <= b`.
    pairs: Vec<(usize, usize, usize)>,
    full: Vec<Monomial>,
    p: HomoPoly,
}

impl SquareProblem {
    fn new(p: &HomoPoly) -> Self {
        let n = p.nvars();
        let basis = monomials_of_degree(n, p.degree() / 2);
        let full = monomials_of_degree(n, p.degree());
        let index: HashMap<Monomial, usize> = full.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut pairs = Vec::new();
        for a in 0..basis.len() {
            for b in a..basis.len() {
                let m = basis[a].times(&basis[b]);
                pairs.push((a, b, index[&m]));
            }
        }
        let target = p.coefficients_on(&full);
        let target_norm = target.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
        SquareProblem {
            nvars: n,
            basis,
            target,
            target_norm,
            pairs,
            full,
            p: p.clone(),
        }
    }

    fn residual(&self, c: &[f64]) -> Vec<f64> {
        let mut r: Vec<f64> = self.target.iter().map(|t| -t).collect();
        for &(a, b, g) in &self.pairs {
            r[g] += if a == b { c[a] * c[a] } else { 2.0 * c[a] * c[b] };
        }
        r
    }

    fn relative_residual(&self, c: &[f64]) -> f64 {
        self.residual(c).iter().map(|x| x * x).sum::<f64>().sqrt() / self.target_norm
    }

    fn jacobian(&self, c: &[f64]) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(self.full.len(), self.basis.len());
        for &(a, b, g) in &self.pairs {
            if a == b {
                j[(g, a)] += 2.0 * c[a];
            } else {
                j[(g, a)] += 2.0 * c[b];
                j[(g, b)] += 2.0 * c[a];
            }
        }
        j
    }

    fn levenberg_marquardt(&self, mut c: Vec<f64>, iters: usize) -> Vec<f64> {
        let m = self.basis.len();
        let mut r = DVector::from_vec(self.residual(&c));
        let mut cost = r.norm_squared();
        let mut lambda = 1e-3;
        for _ in 0..iters {
            if cost.sqrt() < 1e-16 * self.target_norm {
                break;
            }
            let j = self.jacobian(&c);
            let jtj = j.transpose() * &j;
            let g = j.transpose() * &r;
            let mut improved = false;
            for _ in 0..30 {
                let mut a = jtj.clone();
                for i in 0..m {
                    a[(i, i)] += lambda * (jtj[(i, i)] + 1e-12);
                }
                let Some(step) = a.lu().solve(&(-&g)) else {
                    lambda *= 10.0;
                    continue;
                };
                let trial: Vec<f64> = c.iter().zip(step.iter()).map(|(x, d)| x + d).collect();
                let tr = DVector::from_vec(self.residual(&trial));
                let tc = tr.norm_squared();
                if tc < cost {
                    let rel = (cost - tc) / cost.max(1e-300);
                    c = trial;
                    r = tr;
                    cost = tc;
                    lambda = (lambda / 3.0).max(1e-15);
                    improved = rel > 1e-15;
                    break;
                }
                lambda *= 4.0;
            }
            if !improved {
                break;
            }
        }
        c
    }

    /// Float version of the term-by-term square root in graded lex order.
    fn monomial_order_seed(&self) -> Option<Vec<f64>> {
        let (lead, lc) = self.p.leading_term()?;
        if !lead.is_even() {
            return None;
        }
        let lc = rational::to_f64(lc);
        if lc <= 0.0 {
            return None;
        }
        let half = Monomial(lead.exponents().iter().map(|e| e / 2).collect());
        let pos = |m: &Monomial| self.basis.iter().position(|b| b == m);
        let top = pos(&half)?;
        let mut c = vec![0.0; self.basis.len()];
        c[top] = lc.sqrt();
        // basis is sorted leading first, so everything after `top` is smaller
        for b in top + 1..self.basis.len() {
            let target = half.times(&self.basis[b]);
            let mut v = rational::to_f64(&self.p.coefficient(target.exponents()));
            for b1 in top + 1..b {
                // b2 with basis[b1] + basis[b2] = target, both strictly between
                for b2 in b1..b {
                    if self.basis[b1].times(&self.basis[b2]) == target {
                        v -= if b1 == b2 { c[b1] * c[b1] } else { 2.0 * c[b1] * c[b2] };
                    }
                }
            }
            c[b] = v / (2.0 * c[top]);
        }
        Some(c)
    }

    /// Least-squares fit of signed square roots of `p` along random rays,
    /// with the sign pattern of a product of random linear forms.
    fn ray_seed<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let m = self.basis.len();
        let k = self.p.degree() / 2;
        let forms: Vec<Vec<f64>> = (0..k).map(|_| sphere::random_unit(rng, self.nvars)).collect();
        let rays = 3 * m;
        let mut a = DMatrix::zeros(rays, m);
        let mut rhs = DVector::zeros(rays);
        for s in 0..rays {
            let y = sphere::random_unit(rng, self.nvars);
            let sign: f64 = forms.iter().map(|f| sphere::dot(f, &y).signum()).product();
            rhs[s] = sign * self.p.eval(&y).max(0.0).sqrt();
            for (i, mono) in self.basis.iter().enumerate() {
                a[(s, i)] = mono
                    .exponents()
                    .iter()
                    .zip(&y)
                    .map(|(&e, &v)| v.powi(e as i32))
                    .product();
            }
        }
        a.svd(true, true)
            .solve(&rhs, 1e-12)
            .map(|v| v.iter().copied().collect())
            .unwrap_or_else(|_| vec![0.0; m])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    #[test]
    fn product_square() {
        let p = HomoPoly::from_i64(3, 6, &[(&[2, 2, 2], 1)]).unwrap();
        let r = perfect_square_check(&p, 1e-8).unwrap();
        match r.verdict {
            SquareVerdict::Square { root, scale, exact } => {
                assert!(exact);
                assert_eq!(scale, rat(1));
                assert_eq!(root, HomoPoly::from_i64(3, 3, &[(&[1, 1, 1], 1)]).unwrap());
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn non_square_scale_is_reported() {
        let p = HomoPoly::from_i64(3, 6, &[(&[6, 0, 0], 2)]).unwrap();
        let r = perfect_square_check(&p, 1e-8).unwrap();
        match r.verdict {
            SquareVerdict::Square { root, scale, exact } => {
                assert!(exact);
                assert_eq!(scale, rat(2));
                assert_eq!(root, HomoPoly::from_i64(3, 3, &[(&[3, 0, 0], 1)]).unwrap());
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn rational_square_with_mixed_signs() {
        let q = HomoPoly::from_terms(
            3,
            3,
            vec![
                (vec![2, 1, 0], ratio(-3, 2)),
                (vec![0, 1, 2], ratio(2, 5)),
                (vec![1, 1, 1], rat(1)),
                (vec![0, 0, 3], ratio(-7, 3)),
            ],
        )
        .unwrap();
        let p = q.times(&q);
        let r = perfect_square_check(&p, 1e-8).unwrap();
        match r.verdict {
            SquareVerdict::Square { root, exact, scale } => {
                assert!(exact);
                assert_eq!(root.times(&root).scale(&scale), p);
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn cyclic_sextic_is_not_square() {
        let p = HomoPoly::from_i64(
            3,
            6,
            &[(&[4, 2, 0], 1), (&[0, 4, 2], 1), (&[2, 0, 4], 1), (&[2, 2, 2], -3)],
        )
        .unwrap();
        let r = perfect_square_check(&p, 1e-8).unwrap();
        assert_eq!(r.verdict, SquareVerdict::NotSquare);
        assert!(r.residual > 1e-3);
        let neg = p.neg();
        assert!(!perfect_square_check(&neg, 1e-8).unwrap().is_square());
        let odd = HomoPoly::from_i64(3, 3, &[(&[3, 0, 0], 1)]).unwrap();
        assert!(perfect_square_check(&odd, 1e-8).is_err());
    }
}
