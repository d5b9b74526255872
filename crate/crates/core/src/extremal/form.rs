//! Largest rank-one form that can be removed from a rank-one convex form.
//!
//! For unit `B` the removable multiple is
//! `t*(B) = inf_{x,y} f(x (x) y) / (x . B y)^2`, and for fixed `y` the
//! infimum over `x` is `1 / (l . T(y)^+ l)` with `l = B y`.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ExtremalityVerdict;
use crate::config::RunConfig;
use crate::elastic::{rank_one_convexity, NumericForm, QuadraticForm};
use crate::error::{Error, Result};
use crate::linalg::{jacobi3, Mat3};
use crate::sphere;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormWitness {
    /// Unit Frobenius norm.
    pub b: [[f64; 3]; 3],
    pub t: f64,
    /// Smallest acoustic eigenvalue of `f - t (B : xi)^2`.
    pub min_eigenvalue_after: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StartRecord {
    pub label: String,
    pub initial_t: f64,
    pub final_t: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormExtremalityReport {
    pub verdict: ExtremalityVerdict,
    pub witness: Option<FormWitness>,
    /// Largest removable multiple found over all starts.
    pub max_t: f64,
    pub best_t_by_start: Vec<StartRecord>,
    pub starts: usize,
    pub inner_samples: usize,
    pub symmetric_rank_one: bool,
    pub tol: f64,
    pub seed: u64,
}

const DENOMINATOR_FLOOR: f64 = 1e-6;

struct Scan {
    ys: Vec<Vec<f64>>,
    eig: Vec<([f64; 3], Mat3)>,
}

impl Scan {
    fn new(f: &NumericForm, samples: usize, seed: u64) -> Self {
        let ys = sphere::sample_points(3, samples.max(1), seed);
        let eig = ys.par_iter().map(|y| jacobi3(&f.acoustic_at(y))).collect();
        Scan { ys, eig }
    }
}

fn apply(b: &Mat3, y: &[f64]) -> [f64; 3] {
    std::array::from_fn(|i| b[i][0] * y[0] + b[i][1] * y[1] + b[i][2] * y[2])
}

/// `inf_x f(x (x) y) / (x . l)^2` from an eigendecomposition of `T(y)`.
fn ratio(e: &([f64; 3], Mat3), l: &[f64; 3]) -> f64 {
    let (vals, vecs) = e;
    let top = vals[2].max(0.0);
    if top <= 1e-300 {
        return 0.0;
    }
    let mut s = 0.0;
    for k in 0..3 {
        let p = l[0] * vecs[0][k] + l[1] * vecs[1][k] + l[2] * vecs[2][k];
        s += p * p / vals[k].max(1e-13 * top);
    }
    1.0 / s
}

fn t_at(f: &NumericForm, b: &Mat3, y: &[f64]) -> f64 {
    let l = apply(b, y);
    if sphere::norm(&l) < DENOMINATOR_FLOOR {
        return f64::INFINITY;
    }
    ratio(&jacobi3(&f.acoustic_at(y)), &l)
}

fn scan_values(scan: &Scan, b: &Mat3) -> Vec<f64> {
    scan.ys
        .iter()
        .zip(&scan.eig)
        .map(|(y, e)| {
            let l = apply(b, y);
            if sphere::norm(&l) < DENOMINATOR_FLOOR {
                f64::INFINITY
            } else {
                ratio(e, &l)
            }
        })
        .collect()
}

fn scan_min(scan: &Scan, b: &Mat3) -> f64 {
    scan_values(scan, b).into_iter().fold(f64::INFINITY, f64::min)
}

fn polished_min(f: &NumericForm, scan: &Scan, b: &Mat3) -> f64 {
    let vals = scan_values(scan, b);
    let seeds = crate::poly::separated_best_seeds(&scan.ys, &vals, 4, 0.1);
    let mut best = vals.iter().copied().fold(f64::INFINITY, f64::min);
    for i in seeds {
        let (_, v) = sphere::pattern_search(|y| t_at(f, b, y), &scan.ys[i], 0.05, 1e-12, 4000);
        best = best.min(v);
    }
    best
}

/// Removable multiple `t*(B)` for a unit `B`: scan over `samples` sphere
/// points followed by local descent from the best of them.
pub fn removable_multiple(f: &NumericForm, b: &[[f64; 3]; 3], samples: usize, seed: u64) -> f64 {
    let scan = Scan::new(f, samples, seed);
    polished_min(f, &scan, &unit(b))
}

fn unit(b: &Mat3) -> Mat3 {
    let n = b.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    if n == 0.0 {
        return *b;
    }
    b.map(|r| r.map(|x| x / n))
}

/// Orthonormal (Frobenius) basis of the admissible `B`.
fn b_basis(symmetric: bool) -> Vec<Mat3> {
    let mut out = Vec::new();
    let e = |i: usize, j: usize, v: f64| {
        let mut m = [[0.0; 3]; 3];
        m[i][j] += v;
        m
    };
    if symmetric {
        for i in 0..3 {
            out.push(e(i, i, 1.0));
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let mut m = e(i, j, h);
            m[j][i] = h;
            out.push(m);
        }
    } else {
        for i in 0..3 {
            for j in 0..3 {
                out.push(e(i, j, 1.0));
            }
        }
    }
    out
}

fn from_coords(basis: &[Mat3], c: &[f64]) -> Mat3 {
    let mut m = [[0.0; 3]; 3];
    for (b, w) in basis.iter().zip(c) {
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += w * b[i][j];
            }
        }
    }
    m
}

fn structured_starts(symmetric: bool) -> Vec<(String, Vec<f64>)> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::new();
    if symmetric {
        for k in 0..6 {
            let mut c = vec![0.0; 6];
            c[k] = 1.0;
            out.push((format!("basis[{k}]"), c));
        }
        return out;
    }
    for i in 0..3 {
        for j in 0..3 {
            let mut c = vec![0.0; 9];
            c[3 * i + j] = 1.0;
            out.push((format!("e{}e{}", i + 1, j + 1), c));
        }
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        for (name, s) in [("sym", 1.0), ("skew", -1.0)] {
            let mut c = vec![0.0; 9];
            c[3 * i + j] = h;
            c[3 * j + i] = s * h;
            out.push((format!("{name}(e{}e{})", i + 1, j + 1), c));
        }
    }
    out
}

/// Eigenvectors of the Gram matrix of `f` with positive eigenvalue,
/// projected onto the admissible `B`.
fn gram_starts(f: &NumericForm, basis: &[Mat3]) -> Vec<(String, Vec<f64>)> {
    let g = DMatrix::from_fn(9, 9, |a, b| f.g[a][b]);
    let eig = SymmetricEigen::new(g);
    let top = eig.eigenvalues.iter().fold(0.0f64, |a, b| a.max(*b));
    let mut idx: Vec<usize> = (0..9).filter(|&k| eig.eigenvalues[k] > 1e-9 * top).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    idx.into_iter()
        .enumerate()
        .filter_map(|(rank, k)| {
            let v = eig.eigenvectors.column(k);
            let mut c: Vec<f64> = basis
                .iter()
                .map(|b| (0..9).map(|a| b[a / 3][a % 3] * v[a]).sum())
                .collect();
            (sphere::normalize(&mut c) > 1e-9).then(|| (format!("gram[{rank}]"), c))
        })
        .collect()
}

/// Searches for a rank-one form that can be subtracted from `f` while
/// keeping it rank-one convex.
pub fn form_extremality(f: &QuadraticForm, cfg: &RunConfig) -> Result<FormExtremalityReport> {
    let nf = f.numeric();
    let pre = rank_one_convexity(&nf, cfg.tol.rank_one, &cfg.sphere_budget());
    if !pre.is_rank_one_convex() {
        return Err(Error::precondition(format!(
            "form is not rank-one convex (acoustic eigenvalue {:e})",
            pre.min_eigenvalue
        )));
    }
    let symmetric = cfg.symmetric_rank_one;
    let basis = b_basis(symmetric);
    let dim = basis.len();
    let scan = Scan::new(&nf, cfg.budget.form_inner_samples, cfg.seed);

    let mut starts = structured_starts(symmetric);
    starts.extend(gram_starts(&nf, &basis));
    let mut rng = sphere::rng_stream(cfg.seed, 11);
    for k in 0..cfg.budget.form_starts {
        starts.push((format!("random[{k}]"), sphere::random_unit(&mut rng, dim)));
    }
    let results: Vec<(StartRecord, Mat3)> = starts
        .par_iter()
        .map(|(label, c0)| {
            let b0 = from_coords(&basis, c0);
            let initial = polished_min(&nf, &scan, &b0);
            let (c1, _) = sphere::pattern_search(|v| -scan_min(&scan, &from_coords(&basis, v)).min(1e300), c0, 0.1, 1e-4, 400);
            let b1 = from_coords(&basis, &c1);
            let moved = polished_min(&nf, &scan, &b1);
            let (fin, b) = if moved > initial { (moved, b1) } else { (initial, b0) };
            (
                StartRecord {
                    label: label.clone(),
                    initial_t: initial,
                    final_t: fin,
                },
                b,
            )
        })
        .collect();

    let max_t = results.iter().map(|r| r.0.final_t).fold(0.0, f64::max);
    let mut report = FormExtremalityReport {
        verdict: ExtremalityVerdict::ExtremalUpToTol,
        witness: None,
        max_t,
        best_t_by_start: results.iter().map(|r| r.0.clone()).collect(),
        starts: results.len(),
        inner_samples: cfg.budget.form_inner_samples,
        symmetric_rank_one: symmetric,
        tol: cfg.tol.form_extremality,
        seed: cfg.seed,
    };
    if max_t <= cfg.tol.form_extremality {
        return Ok(report);
    }
    // candidates in decreasing t; near-ties resolved by start order
    let tie = 1e-12 * max_t.max(1.0);
    let mut order: Vec<usize> = (0..results.len())
        .filter(|&i| results[i].0.final_t >= max_t - tie)
        .collect();
    let mut rest: Vec<usize> = (0..results.len()).filter(|i| !order.contains(i)).collect();
    rest.sort_by(|&a, &b| results[b].0.final_t.total_cmp(&results[a].0.final_t).then(a.cmp(&b)));
    order.extend(rest);
    report.verdict = ExtremalityVerdict::Inconclusive;
    for &i in order.iter().take(3) {
        let (rec, b) = &results[i];
        for factor in [1.0, 1.0 - 1e-9, 1.0 - 1e-7, 1.0 - 1e-5, 1.0 - 1e-3, 0.99, 0.9, 0.5] {
            let t = rec.final_t * factor;
            if t <= cfg.tol.form_extremality {
                break;
            }
            let check = rank_one_convexity(&nf.minus_rank_one(b, t), cfg.tol.witness_eigenvalue, &cfg.sphere_budget());
            if check.is_rank_one_convex() {
                report.verdict = ExtremalityVerdict::NotExtremal;
                report.witness = Some(FormWitness {
                    b: *b,
                    t,
                    min_eigenvalue_after: check.min_eigenvalue,
                });
                return Ok(report);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elastic::{fixtures, RankOneForm};

    #[test]
    fn diagonal_form_loses_an_axial_square() {
        let r = form_extremality(&fixtures::diagonal_form(), &RunConfig::default()).unwrap();
        assert_eq!(r.verdict, ExtremalityVerdict::NotExtremal);
        let w = r.witness.unwrap();
        assert!((w.t - 1.0).abs() < 1e-9, "{w:?}");
        let e11 = [[1.0, 0.0, 0.0], [0.0; 3], [0.0; 3]];
        assert!((removable_multiple(&fixtures::diagonal_form().numeric(), &e11, 1500, 0) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cyclic_form_is_extremal() {
        let r = form_extremality(&fixtures::cyclic_extremal_form(), &RunConfig::default()).unwrap();
        assert_eq!(r.verdict, ExtremalityVerdict::ExtremalUpToTol, "max t {}", r.max_t);
        assert!(r.starts >= 200);
    }

    #[test]
    fn rank_one_form_removes_itself() {
        let b = RankOneForm::from_i64([[1, 2, 0], [0, 1, 0], [0, 0, 0]]);
        let r = form_extremality(&b.form(), &RunConfig::default()).unwrap();
        assert_eq!(r.verdict, ExtremalityVerdict::NotExtremal);
        let w = r.witness.unwrap();
        assert!(w.t > 0.5 * 6.0 - 1e-6, "{w:?}");
    }

    #[test]
    fn non_convex_form_is_rejected() {
        let f = QuadraticForm::from_terms(&[((0, 0), (0, 0), crate::rational::rat(-1))]);
        assert!(matches!(form_extremality(&f, &RunConfig::default()), Err(Error::Precondition(_))));
    }
}
