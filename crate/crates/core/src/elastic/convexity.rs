//! Rank-one convexity: `T(y)` positive semidefinite for every `y`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::NumericForm;
use crate::linalg::{sym3_eigen, sym3_min_eigenvalue};
use crate::poly::SphereBudget;
use crate::sphere;

pub type ConvexityBudget = SphereBudget;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvexityVerdict {
    RankOneConvex,
    Violated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Minimizer {
    pub y: [f64; 3],
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub verdict: ConvexityVerdict,
    /// Smallest eigenvalue of `T(y)` found over unit `y`.
    pub min_eigenvalue: f64,
    /// Unit `x, y` with `f(x (x) y) = min_eigenvalue`.
    pub witness_x: [f64; 3],
    pub witness_y: [f64; 3],
    /// Distinct directions `y` (up to sign) whose smallest eigenvalue lies
    /// within `1e-8` of the minimum, relative to the form's scale.
    pub minimizers: Vec<Minimizer>,
    pub tol: f64,
    pub budget: ConvexityBudget,
}

impl ConvexityReport {
    pub fn is_rank_one_convex(&self) -> bool {
        self.verdict == ConvexityVerdict::RankOneConvex
    }
}

fn min_eigen(f: &NumericForm, y: &[f64]) -> f64 {
    sym3_min_eigenvalue(&f.acoustic_at(y))
}

fn min_pair(m: &[[f64; 3]; 3]) -> (f64, [f64; 3]) {
    let (vals, vecs) = sym3_eigen(m);
    (vals[0], [vecs[0][0], vecs[1][0], vecs[2][0]])
}

/// Block coordinate descent on `f(x (x) y)` over unit `x` and `y`, then a
/// derivative-free polish of `y -> lambda_min(T(y))`.
fn refine(f: &NumericForm, y0: &[f64], scale: f64) -> ([f64; 3], [f64; 3], f64) {
    let mut y = [y0[0], y0[1], y0[2]];
    let (mut val, mut x) = min_pair(&f.acoustic_at(&y));
    for _ in 0..500 {
        let (_, ny) = min_pair(&f.dual_acoustic_at(&x));
        let (nv, nx) = min_pair(&f.acoustic_at(&ny));
        let gain = val - nv;
        if nv < val {
            y = ny;
            x = nx;
            val = nv;
        }
        if gain <= 1e-15 * scale {
            break;
        }
    }
    let (py, pv) = sphere::pattern_search(|v| min_eigen(f, v), &y, 1e-3, 1e-12, 4000);
    if pv < val {
        y = [py[0], py[1], py[2]];
        let (v, nx) = min_pair(&f.acoustic_at(&y));
        val = v;
        x = nx;
    }
    (x, y, val)
}

/// Minimises the smallest eigenvalue of the acoustic tensor over the unit
/// sphere and reports a violation when it drops below `-tol`.
pub fn rank_one_convexity(f: &NumericForm, tol: f64, budget: &ConvexityBudget) -> ConvexityReport {
    let scale = f.frobenius_norm().max(1e-300);
    let pts = sphere::sample_points(3, budget.samples.max(1), budget.seed);
    let vals: Vec<f64> = pts.par_iter().map(|y| min_eigen(f, y)).collect();
    let seeds = crate::poly::separated_best_seeds(&pts, &vals, budget.refinements.max(1), 0.05);
    let mut found: Vec<([f64; 3], [f64; 3], f64)> = seeds.par_iter().map(|&i| refine(f, &pts[i], scale)).collect();
    for (x, y, _) in &mut found {
        // y -> -y and x -> -x leave f(x (x) y) unchanged
        sphere::canonical_sign(y, 1e-9);
        sphere::canonical_sign(x, 1e-9);
    }
    found.sort_by(|a, b| a.2.total_cmp(&b.2).then_with(|| sphere::lex_cmp(&a.1, &b.1)));
    let (wx, wy, min) = found[0];
    let mut minimizers: Vec<Minimizer> = Vec::new();
    for (_, y, v) in &found {
        if *v > min + 1e-8 * scale {
            break;
        }
        let dup = minimizers
            .iter()
            .any(|m| (0..3).map(|i| (m.y[i] - y[i]).powi(2)).sum::<f64>().sqrt() < 1e-4);
        if !dup {
            minimizers.push(Minimizer { y: *y, value: *v });
        }
    }
    ConvexityReport {
        verdict: if min < -tol {
            ConvexityVerdict::Violated
        } else {
            ConvexityVerdict::RankOneConvex
        },
        min_eigenvalue: min,
        witness_x: wx,
        witness_y: wy,
        minimizers,
        tol,
        budget: *budget,
    }
}
