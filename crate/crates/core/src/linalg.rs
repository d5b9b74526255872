//! Small dense helpers: symmetric 3x3 eigenproblems, the determinant
//! inequality for positive semidefinite matrices and exact row reduction.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{from_f64_exact, to_f64, Rational};

pub type Mat3 = [[f64; 3]; 3];

pub fn det3(a: &Mat3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

pub fn add3(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = *a;
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] += b[i][j];
        }
    }
    c
}

/// Eigenvalues of a symmetric matrix in ascending order, with unit
/// eigenvectors as the columns of the returned matrix.
///
/// Closed form (trigonometric) when the spectrum is well separated,
/// cyclic Jacobi otherwise.
pub fn sym3_eigen(a: &Mat3) -> ([f64; 3], Mat3) {
    let vals = sym3_eigenvalues(a);
    let scale = vals.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-300);
    let gap = (vals[1] - vals[0]).min(vals[2] - vals[1]);
    if gap > 1e-6 * scale {
        let mut vecs = [[0.0; 3]; 3];
        let mut ok = true;
        for (k, &lam) in vals.iter().enumerate() {
            match null_vector(a, lam) {
                Some(v) => {
                    for i in 0..3 {
                        vecs[i][k] = v[i];
                    }
                }
                None => ok = false,
            }
        }
        if ok {
            return (vals, vecs);
        }
    }
    jacobi3(a)
}

/// Eigenvalues, ascending. Trigonometric closed form, with Jacobi when two
/// eigenvalues cluster (the arccosine loses accuracy there).
pub fn sym3_eigenvalues(a: &Mat3) -> [f64; 3] {
    let v = trig_eigenvalues(a);
    let scale = v[0].abs().max(v[2].abs());
    if (v[1] - v[0]).min(v[2] - v[1]) < 1e-3 * scale {
        return jacobi3(a).0;
    }
    v
}

fn trig_eigenvalues(a: &Mat3) -> [f64; 3] {
    let p1 = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
    if p2 <= 1e-300 {
        return [q, q, q];
    }
    let p = (p2 / 6.0).sqrt();
    let mut b = *a;
    for (i, row) in b.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = (*v - if i == j { q } else { 0.0 }) / p;
        }
    }
    let r = (det3(&b) / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e_hi = q + 2.0 * p * phi.cos();
    let e_lo = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let e_mid = 3.0 * q - e_hi - e_lo;
    let mut v = [e_lo, e_mid, e_hi];
    v.sort_by(f64::total_cmp);
    v
}

pub fn sym3_min_eigenvalue(a: &Mat3) -> f64 {
    sym3_eigen(a).0[0]
}

fn null_vector(a: &Mat3, lam: f64) -> Option<[f64; 3]> {
    let r: Vec<[f64; 3]> = (0..3)
        .map(|i| {
            let mut row = a[i];
            row[i] -= lam;
            row
        })
        .collect();
    let cands = [
        crate::sphere::cross(&r[0], &r[1]),
        crate::sphere::cross(&r[0], &r[2]),
        crate::sphere::cross(&r[1], &r[2]),
    ];
    let best = cands
        .iter()
        .max_by(|x, y| crate::sphere::norm(&x[..]).total_cmp(&crate::sphere::norm(&y[..])))?;
    let n = crate::sphere::norm(best);
    let scale = r.iter().map(|row| crate::sphere::norm(row)).fold(0.0, f64::max);
    if n <= 1e-10 * scale * scale || n == 0.0 {
        return None;
    }
    Some([best[0] / n, best[1] / n, best[2] / n])
}

/// Cyclic Jacobi rotations; eigenvalues ascending, vectors as columns.
pub fn jacobi3(a: &Mat3) -> ([f64; 3], Mat3) {
    let mut m = *a;
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for _ in 0..64 {
        let off = m[0][1].powi(2) + m[0][2].powi(2) + m[1][2].powi(2);
        let diag = m[0][0].powi(2) + m[1][1].powi(2) + m[2][2].powi(2);
        if off <= 1e-32 * diag || off == 0.0 {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            if m[p][q] == 0.0 {
                continue;
            }
            let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            for k in 0..3 {
                let mkp = m[k][p];
                let mkq = m[k][q];
                m[k][p] = c * mkp - s * mkq;
                m[k][q] = s * mkp + c * mkq;
            }
            for k in 0..3 {
                let mpk = m[p][k];
                let mqk = m[q][k];
                m[p][k] = c * mpk - s * mqk;
                m[q][k] = s * mpk + c * mqk;
            }
            for row in v.iter_mut() {
                let vp = row[p];
                let vq = row[q];
                row[p] = c * vp - s * vq;
                row[q] = s * vp + c * vq;
            }
        }
    }
    let mut idx = [0, 1, 2];
    idx.sort_by(|&i, &j| m[i][i].total_cmp(&m[j][j]));
    let vals = [m[idx[0]][idx[0]], m[idx[1]][idx[1]], m[idx[2]][idx[2]]];
    let mut vecs = [[0.0; 3]; 3];
    for (k, &i) in idx.iter().enumerate() {
        for r in 0..3 {
            vecs[r][k] = v[r][i];
        }
    }
    (vals, vecs)
}

/// Checks `det(A+B)^(1/3) >= det(A)^(1/3) + det(B)^(1/3)` with slack
/// `1e-10` on the cube roots. Inputs must be symmetric positive
/// semidefinite (smallest eigenvalue at least `-1e-12 max(1, |M|_F)`).
pub fn brunn_minkowski_check(a: &Mat3, b: &Mat3) -> Result<bool> {
    Ok(brunn_minkowski_slack(a, b)? >= -1e-10)
}

fn exact_det3(m: &[[Rational; 3]; 3]) -> Rational {
    let minor = |i: usize, j: usize, k: usize, l: usize| &m[i][k] * &m[j][l] - &m[i][l] * &m[j][k];
    &m[0][0] * minor(1, 2, 1, 2) - &m[0][1] * minor(1, 2, 0, 2) + &m[0][2] * minor(1, 2, 0, 1)
}

/// `det(A+B)^(1/3) - det(A)^(1/3) - det(B)^(1/3)` for psd `A`, `B`.
///
/// Determinants (and the sum `A+B`) are computed exactly from the binary
/// values of the entries; only the cube roots are rounded. A negative
/// exact determinant of an accepted matrix counts as zero.
pub fn brunn_minkowski_slack(a: &Mat3, b: &Mat3) -> Result<f64> {
    let check = |m: &Mat3, name: &str| -> Result<()> {
        for i in 0..3 {
            for j in 0..i {
                let tol = 1e-12 * (m[i][j].abs() + m[j][i].abs()).max(1.0);
                if (m[i][j] - m[j][i]).abs() > tol {
                    return Err(Error::contract(format!("{name} is not symmetric")));
                }
            }
        }
        let low = sym3_eigenvalues(m)[0];
        let fro = m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
        if low < -1e-12 * fro.max(1.0) {
            return Err(Error::contract(format!(
                "{name} is not positive semidefinite (eigenvalue {low:e})"
            )));
        }
        Ok(())
    };
    check(a, "A")?;
    check(b, "B")?;
    let ea = a.map(|r| r.map(from_f64_exact));
    let eb = b.map(|r| r.map(from_f64_exact));
    let eab: [[Rational; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| &ea[i][j] + &eb[i][j]));
    let root = |m: &[[Rational; 3]; 3]| to_f64(&exact_det3(m)).max(0.0).cbrt();
    Ok(root(&eab) - root(&ea) - root(&eb))
}

/// Incrementally row-reduced span of exact rational row vectors.
#[derive(Clone, Debug)]
pub struct ExactRowSpace {
    ncols: usize,
    // (pivot column, row normalised to 1 at the pivot, zero at other pivots)
    rows: Vec<(usize, Vec<Rational>)>,
}

impl ExactRowSpace {
    pub fn new(ncols: usize) -> Self {
        ExactRowSpace { ncols, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `row` to the span; returns whether the rank grew.
    pub fn insert(&mut self, mut row: Vec<Rational>) -> bool {
        debug_assert_eq!(row.len(), self.ncols);
        for (p, r) in &self.rows {
            if !row[*p].is_zero() {
                let f = row[*p].clone();
                for (x, y) in row.iter_mut().zip(r) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        let Some(pivot) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = row[pivot].recip();
        row.iter_mut().for_each(|x| *x *= &inv);
        for (_, r) in &mut self.rows {
            if !r[pivot].is_zero() {
                let f = r[pivot].clone();
                for (x, y) in r.iter_mut().zip(&row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        self.rows.push((pivot, row));
        true
    }

    /// Basis of `{v : r . v = 0 for every row r}`, one vector per free column.
    pub fn null_space(&self) -> Vec<Vec<Rational>> {
        let pivots: Vec<usize> = self.rows.iter().map(|(p, _)| *p).collect();
        (0..self.ncols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![Rational::zero(); self.ncols];
                v[free] = Rational::one();
                for (p, r) in &self.rows {
                    v[*p] = -r[free].clone();
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_decomposition(a: &Mat3) {
        let (vals, vecs) = sym3_eigen(a);
        for k in 0..3 {
            for i in 0..3 {
                let av: f64 = (0..3).map(|j| a[i][j] * vecs[j][k]).sum();
                assert!((av - vals[k] * vecs[i][k]).abs() < 1e-9, "{a:?}");
            }
        }
        assert!(vals[0] <= vals[1] && vals[1] <= vals[2]);
    }

    #[test]
    fn eigen_generic_and_degenerate() {
        check_decomposition(&[[2.0, 1.0, 0.0], [1.0, 3.0, 0.5], [0.0, 0.5, -1.0]]);
        check_decomposition(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        check_decomposition(&[[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]]);
        check_decomposition(&[[0.0; 3]; 3]);
        let (v, _) = sym3_eigen(&[[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]]);
        assert!((v[0] - 1.0).abs() < 1e-12 && (v[2] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn determinant_inequality_equality_cases() {
        let i = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let z = [[0.0; 3]; 3];
        assert!(brunn_minkowski_slack(&i, &i).unwrap().abs() < 1e-12);
        assert!(brunn_minkowski_slack(&i, &z).unwrap().abs() < 1e-12);
        let neg = [[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert!(matches!(brunn_minkowski_check(&neg, &i), Err(Error::Contract(_))));
    }

    #[test]
    fn exact_null_space() {
        use crate::rational::rat;
        let mut rs = ExactRowSpace::new(4);
        assert!(rs.insert(vec![rat(1), rat(2), rat(0), rat(1)]));
        assert!(rs.insert(vec![rat(2), rat(4), rat(1), rat(0)]));
        assert!(!rs.insert(vec![rat(3), rat(6), rat(1), rat(1)]));
        assert_eq!(rs.rank(), 2);
        let ns = rs.null_space();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in [[1, 2, 0, 1], [2, 4, 1, 0]] {
                let d: Rational = r.iter().zip(v).map(|(a, b)| rat(*a) * b).sum();
                assert!(d.is_zero());
            }
        }
    }
}
