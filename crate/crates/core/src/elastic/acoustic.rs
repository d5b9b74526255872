use num_traits::Zero;

use super::{xi_index, QuadraticForm, RankOneForm};
use crate::poly::HomoPoly;
use crate::rational::Rational;

/// Symmetric 3x3 matrix of quadratic forms in `y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AcousticMatrix {
    entries: [[HomoPoly; 3]; 3],
}

/// `T_ik(y) = sum_jl y_j C_ijkl y_l`, exactly.
pub fn acoustic_matrix(f: &QuadraticForm) -> AcousticMatrix {
    let entries = std::array::from_fn(|i| {
        std::array::from_fn(|k| {
            let mut terms = Vec::new();
            for j in 0..3 {
                for l in 0..3 {
                    let c = f.gram(xi_index(i, j), xi_index(k, l));
                    if c.is_zero() {
                        continue;
                    }
                    let mut e = vec![0u32; 3];
                    e[j] += 1;
                    e[l] += 1;
                    terms.push((e, c.clone()));
                }
            }
            HomoPoly::from_terms(3, 2, terms).expect("degree-2 terms")
        })
    });
    AcousticMatrix { entries }
}

impl AcousticMatrix {
    pub fn entry(&self, i: usize, k: usize) -> &HomoPoly {
        &self.entries[i][k]
    }

    pub fn entries(&self) -> &[[HomoPoly; 3]; 3] {
        &self.entries
    }

    pub fn eval(&self, y: &[f64]) -> [[f64; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|k| self.entries[i][k].eval(y)))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..3).all(|i| (0..3).all(|k| self.entries[i][k] == self.entries[k][i]))
    }

    fn minor(&self, i: usize, j: usize) -> HomoPoly {
        let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
        let t = &self.entries;
        t[rows[0]][cols[0]]
            .times(&t[rows[1]][cols[1]])
            .minus(&t[rows[0]][cols[1]].times(&t[rows[1]][cols[0]]))
    }

    /// Cofactor matrix, entries of degree 4.
    pub fn cofactor(&self) -> [[HomoPoly; 3]; 3] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let m = self.minor(i, j);
                if (i + j) % 2 == 1 {
                    m.neg()
                } else {
                    m
                }
            })
        })
    }

    /// Determinant, of degree 6.
    pub fn det(&self) -> HomoPoly {
        let cof = self.cofactor();
        (0..3).fold(HomoPoly::zero(3, 6), |acc, j| acc.plus(&self.entries[0][j].times(&cof[0][j])))
    }

    /// Checks `T * cof(T)^T = det(T) I` as a polynomial identity.
    pub fn adjugate_identity_holds(&self) -> bool {
        let cof = self.cofactor();
        let det = self.det();
        (0..3).all(|i| {
            (0..3).all(|k| {
                let s = (0..3).fold(HomoPoly::zero(3, 6), |acc, j| acc.plus(&self.entries[i][j].times(&cof[k][j])));
                if i == k {
                    s == det
                } else {
                    s.is_zero()
                }
            })
        })
    }

    pub fn sub(&self, other: &AcousticMatrix) -> AcousticMatrix {
        AcousticMatrix {
            entries: std::array::from_fn(|i| std::array::from_fn(|k| self.entries[i][k].minus(&other.entries[i][k]))),
        }
    }
}

/// Compares, as exact polynomials, the determinant of the acoustic tensor
/// of `f - t (B:xi)^2` with `det T - t sum_ij l_i l_j cof_ij(T)` where
/// `l = B y`.
pub fn subtracted_det_identity_check(f: &QuadraticForm, b: &RankOneForm, t: &Rational) -> bool {
    let lhs = acoustic_matrix(&f.sub(&b.form().scale(t))).det();
    let tm = acoustic_matrix(f);
    let cof = tm.cofactor();
    let l = b.linear_forms();
    let mut sum = HomoPoly::zero(3, 6);
    for i in 0..3 {
        for j in 0..3 {
            sum = sum.plus(&l[i].times(&l[j]).times(&cof[i][j]));
        }
    }
    let rhs = tm.det().minus(&sum.scale(t));
    lhs == rhs
}
