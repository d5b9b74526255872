//! Global minimisation of a form over the unit sphere.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{HomoPoly, NumericPoly};
use crate::error::{Error, Result};
use crate::sphere;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereBudget {
    pub samples: usize,
    pub refinements: usize,
    pub seed: u64,
}

impl Default for SphereBudget {
    fn default() -> Self {
        SphereBudget {
            samples: 20_000,
            refinements: 50,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonnegVerdict {
    NonnegativeUpToTol,
    NegativeWitness,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonnegReport {
    pub verdict: NonnegVerdict,
    /// Smallest value found on the unit sphere.
    pub min_value: f64,
    /// Unit vector where `min_value` was attained.
    pub argmin: Vec<f64>,
    pub tol: f64,
    pub budget: SphereBudget,
}

impl NonnegReport {
    pub fn is_nonnegative(&self) -> bool {
        self.verdict == NonnegVerdict::NonnegativeUpToTol
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphereMinimum {
    pub point: Vec<f64>,
    pub value: f64,
}

/// Minimises `p` over the unit sphere: scan, then Riemannian Newton from
/// the best well separated seeds. Deterministic for a fixed budget.
pub fn nonneg_check(p: &HomoPoly, tol: f64, budget: &SphereBudget) -> Result<NonnegReport> {
    if p.degree() % 2 != 0 {
        return Err(Error::contract(format!(
            "nonnegativity needs an even degree, got {}",
            p.degree()
        )));
    }
    let minima = sphere_minima(&p.numeric(), budget);
    let best = minima.into_iter().next().unwrap_or(SphereMinimum {
        point: unit_e1(p.nvars()),
        value: 0.0,
    });
    let verdict = if best.value < -tol {
        NonnegVerdict::NegativeWitness
    } else {
        NonnegVerdict::NonnegativeUpToTol
    };
    Ok(NonnegReport {
        verdict,
        min_value: best.value,
        argmin: best.point,
        tol,
        budget: *budget,
    })
}

fn unit_e1(n: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[0] = 1.0;
    v
}

/// Distinct local minima (up to sign) found from the best seeds, sorted by
/// value and then lexicographically.
pub fn sphere_minima(p: &NumericPoly, budget: &SphereBudget) -> Vec<SphereMinimum> {
    let n = p.nvars();
    if n == 1 {
        return vec![SphereMinimum {
            point: vec![1.0],
            value: p.eval(&[1.0]),
        }];
    }
    let pts = sphere::sample_points(n, budget.samples.max(1), budget.seed);
    let vals: Vec<f64> = pts.par_iter().map(|y| p.eval(y)).collect();
    let seeds = separated_best(&pts, &vals, budget.refinements, 0.05);
    let f = |y: &[f64]| p.eval_hessian(y);
    let mut found: Vec<SphereMinimum> = seeds
        .par_iter()
        .map(|&i| {
            let (point, value) = minimize_on_sphere(&f, &pts[i], 200);
            SphereMinimum { point, value }
        })
        .collect();
    let even = p.degree() % 2 == 0;
    for m in &mut found {
        if even {
            sphere::canonical_sign(&mut m.point, 1e-9);
        }
    }
    found.sort_by(|a, b| a.value.total_cmp(&b.value).then_with(|| sphere::lex_cmp(&a.point, &b.point)));
    let mut out: Vec<SphereMinimum> = Vec::new();
    for m in found {
        let dup = out.iter().any(|o| {
            let d: f64 = o.point.iter().zip(&m.point).map(|(a, b)| (a - b).powi(2)).sum();
            d.sqrt() < 1e-5
        });
        if !dup {
            out.push(m);
        }
    }
    out
}

/// Indices of the `k` lowest values, skipping points within `sep` (chordal,
/// modulo sign) of an already chosen one.
pub(crate) fn separated_best(pts: &[Vec<f64>], vals: &[f64], k: usize, sep: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    for i in order {
        if chosen.len() >= k {
            break;
        }
        let close = chosen.iter().any(|&j| {
            let c = sphere::dot(&pts[i], &pts[j]).abs().min(1.0);
            (2.0 * (1.0 - c)).sqrt() < sep
        });
        if !close {
            chosen.push(i);
        }
    }
    chosen
}

/// Riemannian Newton with backtracking on the unit sphere. `f` returns
/// value, Euclidean gradient and row-major Euclidean Hessian.
pub(crate) fn minimize_on_sphere<F>(f: &F, start: &[f64], max_iter: usize) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> (f64, Vec<f64>, Vec<f64>),
{
    let n = start.len();
    let mut y = start.to_vec();
    sphere::normalize(&mut y);
    let (mut val, mut grad, mut hess) = f(&y);
    for _ in 0..max_iter {
        let basis = sphere::tangent_basis(&y);
        let m = basis.len();
        let yg = sphere::dot(&y, &grad);
        let gr = DVector::from_iterator(m, basis.iter().map(|u| sphere::dot(u, &grad)));
        let gnorm = gr.norm();
        if gnorm < 1e-300 {
            break;
        }
        let mut hr = DMatrix::zeros(m, m);
        for a in 0..m {
            for b in 0..m {
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        s += basis[a][i] * hess[i * n + j] * basis[b][j];
                    }
                }
                hr[(a, b)] = s - if a == b { yg } else { 0.0 };
            }
        }
        let hscale = hr.norm().max(1e-300);
        let newton = hr
            .clone()
            .cholesky()
            .filter(|c| c.l().diagonal().iter().all(|d| *d > 1e-9 * hscale.sqrt()))
            .map(|c| -c.solve(&gr));
        let step = newton.unwrap_or_else(|| -&gr / hscale);
        let slope = gr.dot(&step);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let mut trial = y.clone();
            for (a, u) in basis.iter().enumerate() {
                for i in 0..n {
                    trial[i] += t * step[a] * u[i];
                }
            }
            sphere::normalize(&mut trial);
            let (tv, tg, th) = f(&trial);
            if tv <= val + 1e-4 * t * slope.min(0.0) && tv <= val {
                let progress = val - tv;
                y = trial;
                val = tv;
                grad = tg;
                hess = th;
                accepted = true;
                if progress == 0.0 {
                    accepted = false;
                }
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (y, val)
}
