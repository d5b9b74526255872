//! Dense primal simplex for small inequality-form linear programs
//!
//! ```text
//! maximize  c.w   subject to  G w <= h,  w free
//! ```
//!
//! The solver walks vertices of the feasible polyhedron. A vertex is
//! described by a working set of `n` linearly independent active rows
//! whose inverse basis is kept up to date by column pivots and refactored
//! periodically. Successive objectives warm start from the last vertex.

use nalgebra::{DMatrix, DVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    IterationLimit,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub w: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

pub struct Simplex {
    n: usize,
    g: Vec<Vec<f64>>,
    h: Vec<f64>,
    w: Vec<f64>,
    working: Vec<usize>,
    binv: DMatrix<f64>,
    at_vertex: bool,
    pub max_iterations: usize,
}

const REFACTOR_EVERY: usize = 64;
const DEGENERATE_STREAK: usize = 50;

impl Simplex {
    /// `start` must satisfy `G start <= h` (up to rounding).
    pub fn new(g: Vec<Vec<f64>>, h: Vec<f64>, start: Vec<f64>) -> Self {
        let n = start.len();
        debug_assert!(g.iter().all(|r| r.len() == n));
        Simplex {
            n,
            g,
            h,
            w: start,
            working: Vec::new(),
            binv: DMatrix::zeros(n, n),
            at_vertex: false,
            max_iterations: 100_000,
        }
    }

    pub fn point(&self) -> &[f64] {
        &self.w
    }

    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    fn slack(&self, i: usize) -> f64 {
        (self.h[i] - Self::dot(&self.g[i], &self.w)).max(0.0)
    }

    fn row_norm(&self, i: usize) -> f64 {
        Self::dot(&self.g[i], &self.g[i]).sqrt()
    }

    /// Longest feasible step along `d`: `(step, blocking row)`. Ties go to
    /// the smallest row index.
    fn ratio_test(&self, d: &[f64], skip: &[usize]) -> Option<(f64, usize)> {
        let dn = Self::dot(d, d).sqrt();
        let mut best: Option<(f64, usize)> = None;
        for i in 0..self.g.len() {
            let gd = Self::dot(&self.g[i], d);
            if gd <= 1e-11 * dn * self.row_norm(i) {
                continue;
            }
            if skip.contains(&i) {
                continue;
            }
            let t = self.slack(i) / gd;
            match best {
                Some((bt, _)) if t >= bt => {}
                _ => best = Some((t, i)),
            }
        }
        best
    }

    /// Orthonormal basis of the complement of the working rows.
    fn null_space(&self) -> Vec<DVector<f64>> {
        let mut basis: Vec<DVector<f64>> = self
            .working
            .iter()
            .map(|&i| DVector::from_column_slice(&self.g[i]))
            .collect();
        // orthonormalise the working rows first
        let mut q: Vec<DVector<f64>> = Vec::new();
        for v in basis.drain(..) {
            let mut v = v;
            for u in &q {
                let p = u.dot(&v);
                v -= u * p;
            }
            let nv = v.norm();
            if nv > 1e-10 {
                q.push(v / nv);
            }
        }
        let k = q.len();
        for e in 0..self.n {
            let mut v = DVector::zeros(self.n);
            v[e] = 1.0;
            for u in &q {
                let p = u.dot(&v);
                v -= u * p;
            }
            let nv = v.norm();
            if nv > 1e-8 {
                q.push(v / nv);
            }
        }
        q.split_off(k)
    }

    /// Moves from the current point to a vertex without decreasing `c.w`.
    fn crash(&mut self, c: &[f64]) -> Result<(), LpStatus> {
        self.working.clear();
        // independent rows that are already tight
        let mut q: Vec<DVector<f64>> = Vec::new();
        let mut order: Vec<usize> = (0..self.g.len())
            .filter(|&i| self.slack(i) <= 1e-12 * self.h[i].abs().max(1.0))
            .collect();
        order.sort_by(|&a, &b| self.slack(a).total_cmp(&self.slack(b)).then(a.cmp(&b)));
        for i in order {
            if q.len() == self.n {
                break;
            }
            let mut v = DVector::from_column_slice(&self.g[i]);
            let norm0 = v.norm();
            for u in &q {
                let p = u.dot(&v);
                v -= u * p;
            }
            let nv = v.norm();
            if nv > 1e-6 * norm0 {
                q.push(v / nv);
                self.working.push(i);
            }
        }
        let cv = DVector::from_column_slice(c);
        while self.working.len() < self.n {
            let ns = self.null_space();
            let mut d = DVector::zeros(self.n);
            for u in &ns {
                d += u * u.dot(&cv);
            }
            if d.norm() < 1e-12 * cv.norm().max(1e-300) {
                d = ns[0].clone();
            }
            let dv: Vec<f64> = d.iter().copied().collect();
            let hit = self.ratio_test(&dv, &self.working).or_else(|| {
                if Self::dot(&dv, c) > 0.0 {
                    None
                } else {
                    let neg: Vec<f64> = dv.iter().map(|x| -x).collect();
                    self.ratio_test(&neg, &self.working).map(|(t, i)| (-t, i))
                }
            });
            let Some((t, i)) = hit else {
                return Err(LpStatus::Unbounded);
            };
            for k in 0..self.n {
                self.w[k] += t * dv[k];
            }
            self.working.push(i);
        }
        self.refactor()?;
        self.at_vertex = true;
        Ok(())
    }

    fn refactor(&mut self) -> Result<(), LpStatus> {
        let b = DMatrix::from_fn(self.n, self.n, |r, col| self.g[self.working[r]][col]);
        match b.try_inverse() {
            Some(inv) => {
                self.binv = inv;
                Ok(())
            }
            None => Err(LpStatus::IterationLimit),
        }
    }

    pub fn maximize(&mut self, c: &[f64]) -> LpSolution {
        let mut iterations = 0;
        let finish = |s: &Simplex, status, iterations| LpSolution {
            status,
            w: s.w.clone(),
            objective: Self::dot(c, &s.w),
            iterations,
        };
        if !self.at_vertex {
            if let Err(status) = self.crash(c) {
                return finish(self, status, iterations);
            }
        }
        let cv = DVector::from_column_slice(c);
        let cscale = cv.norm().max(1e-300);
        let mut degenerate = 0usize;
        loop {
            if iterations >= self.max_iterations {
                return finish(self, LpStatus::IterationLimit, iterations);
            }
            let mu = self.binv.transpose() * &cv;
            let bland = degenerate >= DEGENERATE_STREAK;
            let mut leave: Option<usize> = None;
            for j in 0..self.n {
                if mu[j] >= -1e-12 * cscale {
                    continue;
                }
                leave = match leave {
                    None => Some(j),
                    Some(l) if bland => {
                        if self.working[j] < self.working[l] {
                            Some(j)
                        } else {
                            Some(l)
                        }
                    }
                    Some(l) => {
                        if mu[j] < mu[l] {
                            Some(j)
                        } else {
                            Some(l)
                        }
                    }
                };
            }
            let Some(j) = leave else {
                return finish(self, LpStatus::Optimal, iterations);
            };
            let d: Vec<f64> = self.binv.column(j).iter().map(|x| -x).collect();
            let Some((t, enter)) = self.ratio_test(&d, &self.working) else {
                return finish(self, LpStatus::Unbounded, iterations);
            };
            iterations += 1;
            if t <= 1e-14 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            for k in 0..self.n {
                self.w[k] += t * d[k];
            }
            self.working[j] = enter;
            if iterations % REFACTOR_EVERY == 0 {
                if self.refactor().is_err() {
                    return finish(self, LpStatus::IterationLimit, iterations);
                }
            } else {
                let g = DVector::from_column_slice(&self.g[enter]);
                let alpha = self.binv.transpose() * &g;
                let pivot = alpha[j];
                let colj = self.binv.column(j) / pivot;
                for k in 0..self.n {
                    if k == j {
                        continue;
                    }
                    let f = alpha[k];
                    if f != 0.0 {
                        let upd = &colj * f;
                        let mut col = self.binv.column_mut(k);
                        col -= upd;
                    }
                }
                self.binv.set_column(j, &colj);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    /// Best objective over all vertices, by enumeration of row subsets.
    fn brute_force(g: &[Vec<f64>], h: &[f64], c: &[f64]) -> f64 {
        let n = c.len();
        let m = g.len();
        let mut best = f64::NEG_INFINITY;
        let mut idx: Vec<usize> = (0..n).collect();
        loop {
            let b = DMatrix::from_fn(n, n, |r, col| g[idx[r]][col]);
            let rhs = DVector::from_fn(n, |r, _| h[idx[r]]);
            if let Some(inv) = b.clone().try_inverse() {
                let w = inv * rhs;
                let feasible = (0..m).all(|i| {
                    g[i].iter().zip(w.iter()).map(|(a, b)| a * b).sum::<f64>() <= h[i] + 1e-9
                });
                if feasible {
                    best = best.max(c.iter().zip(w.iter()).map(|(a, b)| a * b).sum());
                }
            }
            // next combination
            let mut k = n;
            loop {
                if k == 0 {
                    return best;
                }
                k -= 1;
                if idx[k] < m - n + k {
                    idx[k] += 1;
                    for l in k + 1..n {
                        idx[l] = idx[l - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    #[test]
    fn matches_vertex_enumeration() {
        let mut rng = crate::sphere::rng(11);
        for trial in 0..60 {
            let n = 2 + trial % 3;
            let m = 12;
            let mut g: Vec<Vec<f64>> = (0..m).map(|_| crate::sphere::random_unit(&mut rng, n)).collect();
            let mut h: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..1.0)).collect();
            // a box keeps every problem bounded; some rows pass through 0
            for k in 0..n {
                let mut e = vec![0.0; n];
                e[k] = 1.0;
                g.push(e.clone());
                h.push(2.0);
                e[k] = -1.0;
                g.push(e);
                h.push(2.0);
            }
            h[0] = 0.0;
            h[1] = 0.0;
            let mut s = Simplex::new(g.clone(), h.clone(), vec![0.0; n]);
            for _ in 0..3 {
                let c = crate::sphere::random_unit(&mut rng, n);
                let sol = s.maximize(&c);
                assert_eq!(sol.status, LpStatus::Optimal);
                let oracle = brute_force(&g, &h, &c);
                assert!((sol.objective - oracle).abs() < 1e-9, "{} vs {oracle}", sol.objective);
                for (row, hi) in g.iter().zip(&h) {
                    assert!(Simplex::dot(row, &sol.w) <= hi + 1e-9);
                }
            }
        }
    }

    #[test]
    fn detects_unbounded() {
        let g = vec![vec![-1.0, 0.0], vec![0.0, -1.0]];
        let h = vec![0.0, 0.0];
        let mut s = Simplex::new(g, h, vec![0.0, 0.0]);
        assert_eq!(s.maximize(&[1.0, 1.0]).status, LpStatus::Unbounded);
    }
}
