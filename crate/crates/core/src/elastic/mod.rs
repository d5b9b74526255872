//! Quadratic forms on 3x3 matrices, elasticity tensors in Voigt notation,
//! acoustic tensors and the rank-one convexity test.

mod acoustic;
mod convexity;
pub mod fixtures;
mod io;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::HomoPoly;
use crate::rational::{self, to_f64, Rational};

pub use acoustic::{acoustic_matrix, subtracted_det_identity_check, AcousticMatrix};
pub use convexity::{rank_one_convexity, ConvexityBudget, ConvexityReport, ConvexityVerdict};
pub use io::{FormInput, FormJson, TensorJson};

/// Flat index of `xi[i][j]` in row-major order.
pub const fn xi_index(i: usize, j: usize) -> usize {
    3 * i + j
}

/// Quadratic form `f(xi) = xi . G xi` on 3x3 matrices flattened row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    gram: Vec<Rational>,
}

impl QuadraticForm {
    pub fn zero() -> Self {
        QuadraticForm {
            gram: vec![Rational::zero(); 81],
        }
    }

    pub fn from_gram(rows: Vec<Vec<Rational>>) -> Result<Self> {
        if rows.len() != 9 || rows.iter().any(|r| r.len() != 9) {
            return Err(Error::contract("gram matrix must be 9x9"));
        }
        let gram: Vec<Rational> = rows.into_iter().flatten().collect();
        for a in 0..9 {
            for b in 0..a {
                if gram[9 * a + b] != gram[9 * b + a] {
                    return Err(Error::contract(format!(
                        "gram matrix is not symmetric at ({}, {})",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        Ok(QuadraticForm { gram })
    }

    /// Sum of `c * xi[i][j] * xi[k][l]` over the given terms (0-based).
    pub fn from_terms(terms: &[((usize, usize), (usize, usize), Rational)]) -> Self {
        let mut f = QuadraticForm::zero();
        for ((i, j), (k, l), c) in terms {
            f.add_product(xi_index(*i, *j), xi_index(*k, *l), c);
        }
        f
    }

    fn add_product(&mut self, a: usize, b: usize, c: &Rational) {
        if a == b {
            self.gram[9 * a + a] += c;
        } else {
            let half = c / rational::rat(2);
            self.gram[9 * a + b] += &half;
            self.gram[9 * b + a] += half;
        }
    }

    /// The rank-one form `xi -> (B : xi)^2`.
    pub fn rank_one(b: &[[Rational; 3]; 3]) -> Self {
        let v: Vec<&Rational> = b.iter().flatten().collect();
        QuadraticForm {
            gram: (0..81).map(|k| v[k / 9] * v[k % 9]).collect(),
        }
    }

    pub fn gram(&self, a: usize, b: usize) -> &Rational {
        &self.gram[9 * a + b]
    }

    /// Coefficient `C_ijkl` of the bilinear form.
    pub fn entry(&self, i: usize, j: usize, k: usize, l: usize) -> &Rational {
        self.gram(xi_index(i, j), xi_index(k, l))
    }

    pub fn gram_rows(&self) -> Vec<Vec<Rational>> {
        self.gram.chunks(9).map(|r| r.to_vec()).collect()
    }

    pub fn add(&self, other: &QuadraticForm) -> QuadraticForm {
        QuadraticForm {
            gram: self.gram.iter().zip(&other.gram).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &QuadraticForm) -> QuadraticForm {
        QuadraticForm {
            gram: self.gram.iter().zip(&other.gram).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> QuadraticForm {
        QuadraticForm {
            gram: self.gram.iter().map(|a| a * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.gram.iter().all(Zero::is_zero)
    }

    pub fn eval_exact(&self, xi: &[Rational; 9]) -> Rational {
        let mut acc = Rational::zero();
        for a in 0..9 {
            for b in 0..9 {
                let g = &self.gram[9 * a + b];
                if !g.is_zero() {
                    acc += g * &xi[a] * &xi[b];
                }
            }
        }
        acc
    }

    pub fn numeric(&self) -> NumericForm {
        let mut g = [[0.0; 9]; 9];
        for a in 0..9 {
            for b in 0..9 {
                g[a][b] = to_f64(&self.gram[9 * a + b]);
            }
        }
        NumericForm { g }
    }

    /// `f(x (x) y)`.
    pub fn biquadratic(&self, x: &[f64; 3], y: &[f64; 3]) -> f64 {
        self.numeric().biquadratic(x, y)
    }

    pub fn eval(&self, xi: &[f64; 9]) -> f64 {
        self.numeric().eval(xi)
    }

    /// The same form written as a degree-2 polynomial in the nine entries
    /// of `xi` (variable `3i+j+1` is `xi[i][j]`).
    pub fn as_polynomial(&self) -> HomoPoly {
        let mut terms = Vec::new();
        for a in 0..9 {
            for b in a..9 {
                let g = &self.gram[9 * a + b];
                if g.is_zero() {
                    continue;
                }
                let mut e = vec![0u32; 9];
                e[a] += 1;
                e[b] += 1;
                let c = if a == b { g.clone() } else { g * rational::rat(2) };
                terms.push((e, c));
            }
        }
        HomoPoly::from_terms(9, 2, terms).expect("terms are degree 2 in 9 variables")
    }
}

/// Floating copy of a quadratic form for fast evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericForm {
    pub g: [[f64; 9]; 9],
}

impl NumericForm {
    pub fn eval(&self, xi: &[f64; 9]) -> f64 {
        let mut acc = 0.0;
        for a in 0..9 {
            if xi[a] == 0.0 {
                continue;
            }
            let mut row = 0.0;
            for b in 0..9 {
                row += self.g[a][b] * xi[b];
            }
            acc += xi[a] * row;
        }
        acc
    }

    pub fn biquadratic(&self, x: &[f64; 3], y: &[f64; 3]) -> f64 {
        let mut xi = [0.0; 9];
        for i in 0..3 {
            for j in 0..3 {
                xi[xi_index(i, j)] = x[i] * y[j];
            }
        }
        self.eval(&xi)
    }

    /// `T_ik(y) = sum_jl y_j C_ijkl y_l`.
    pub fn acoustic_at(&self, y: &[f64]) -> [[f64; 3]; 3] {
        let mut t = [[0.0; 3]; 3];
        for i in 0..3 {
            for k in i..3 {
                let mut s = 0.0;
                for j in 0..3 {
                    for l in 0..3 {
                        s += y[j] * self.g[xi_index(i, j)][xi_index(k, l)] * y[l];
                    }
                }
                t[i][k] = s;
                t[k][i] = s;
            }
        }
        t
    }

    /// `S_jl(x) = sum_ik x_i C_ijkl x_k`, the matrix of `y -> f(x (x) y)`.
    pub fn dual_acoustic_at(&self, x: &[f64]) -> [[f64; 3]; 3] {
        let mut s = [[0.0; 3]; 3];
        for j in 0..3 {
            for l in j..3 {
                let mut v = 0.0;
                for i in 0..3 {
                    for k in 0..3 {
                        v += x[i] * self.g[xi_index(i, j)][xi_index(k, l)] * x[k];
                    }
                }
                s[j][l] = v;
                s[l][j] = v;
            }
        }
        s
    }

    /// `f - t (B : xi)^2`.
    pub fn minus_rank_one(&self, b: &[[f64; 3]; 3], t: f64) -> NumericForm {
        let v: Vec<f64> = b.iter().flatten().copied().collect();
        let mut g = self.g;
        for a in 0..9 {
            for c in 0..9 {
                g[a][c] -= t * v[a] * v[c];
            }
        }
        NumericForm { g }
    }

    pub fn scale(&self, c: f64) -> NumericForm {
        let mut g = self.g;
        g.iter_mut().flatten().for_each(|v| *v *= c);
        NumericForm { g }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.g.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryClass {
    Orthotropic,
    General,
}

/// The nine orthotropic constants in Voigt notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrthotropicConstants {
    pub c11: Rational,
    pub c22: Rational,
    pub c33: Rational,
    pub c12: Rational,
    pub c13: Rational,
    pub c23: Rational,
    pub c44: Rational,
    pub c55: Rational,
    pub c66: Rational,
}

impl OrthotropicConstants {
    /// Order: C11, C22, C33, C12, C13, C23, C44, C55, C66.
    pub fn from_array(c: [Rational; 9]) -> Self {
        let [c11, c22, c33, c12, c13, c23, c44, c55, c66] = c;
        OrthotropicConstants {
            c11,
            c22,
            c33,
            c12,
            c13,
            c23,
            c44,
            c55,
            c66,
        }
    }

    pub fn from_i64(c: [i64; 9]) -> Self {
        OrthotropicConstants::from_array(c.map(rational::rat))
    }

    pub fn to_array(&self) -> [Rational; 9] {
        [
            self.c11.clone(),
            self.c22.clone(),
            self.c33.clone(),
            self.c12.clone(),
            self.c13.clone(),
            self.c23.clone(),
            self.c44.clone(),
            self.c55.clone(),
            self.c66.clone(),
        ]
    }
}

/// Stiffness in Voigt notation, acting on engineering strain
/// `(e11, e22, e33, 2e23, 2e31, 2e12)`; the energy is `e . C e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StiffnessTensor {
    voigt: Vec<Vec<Rational>>,
    symmetry: SymmetryClass,
}

/// Flat `xi` indices entering each engineering strain component.
const VOIGT_STRAIN: [&[usize]; 6] = [&[0], &[4], &[8], &[5, 7], &[6, 2], &[1, 3]];

impl StiffnessTensor {
    pub fn orthotropic(c: &OrthotropicConstants) -> Self {
        let z = Rational::zero;
        let v = vec![
            vec![c.c11.clone(), c.c12.clone(), c.c13.clone(), z(), z(), z()],
            vec![c.c12.clone(), c.c22.clone(), c.c23.clone(), z(), z(), z()],
            vec![c.c13.clone(), c.c23.clone(), c.c33.clone(), z(), z(), z()],
            vec![z(), z(), z(), c.c44.clone(), z(), z()],
            vec![z(), z(), z(), z(), c.c55.clone(), z()],
            vec![z(), z(), z(), z(), z(), c.c66.clone()],
        ];
        StiffnessTensor {
            voigt: v,
            symmetry: SymmetryClass::Orthotropic,
        }
    }

    pub fn orthotropic_from_constants(c: [Rational; 9]) -> Self {
        StiffnessTensor::orthotropic(&OrthotropicConstants::from_array(c))
    }

    pub fn general(voigt: Vec<Vec<Rational>>) -> Result<Self> {
        if voigt.len() != 6 || voigt.iter().any(|r| r.len() != 6) {
            return Err(Error::contract("Voigt matrix must be 6x6"));
        }
        for i in 0..6 {
            for j in 0..i {
                if voigt[i][j] != voigt[j][i] {
                    return Err(Error::contract(format!(
                        "Voigt matrix is not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(StiffnessTensor {
            voigt,
            symmetry: SymmetryClass::General,
        })
    }

    pub fn isotropic(lambda: Rational, mu: Rational) -> Self {
        let d = &lambda + &mu * rational::rat(2);
        StiffnessTensor::orthotropic(&OrthotropicConstants {
            c11: d.clone(),
            c22: d.clone(),
            c33: d,
            c12: lambda.clone(),
            c13: lambda.clone(),
            c23: lambda,
            c44: mu.clone(),
            c55: mu.clone(),
            c66: mu,
        })
    }

    pub fn symmetry(&self) -> SymmetryClass {
        self.symmetry
    }

    pub fn voigt(&self) -> &[Vec<Rational>] {
        &self.voigt
    }

    /// The nine constants, when the tensor is tagged orthotropic.
    pub fn constants(&self) -> Option<OrthotropicConstants> {
        if self.symmetry != SymmetryClass::Orthotropic {
            return None;
        }
        let v = &self.voigt;
        Some(OrthotropicConstants {
            c11: v[0][0].clone(),
            c22: v[1][1].clone(),
            c33: v[2][2].clone(),
            c12: v[0][1].clone(),
            c13: v[0][2].clone(),
            c23: v[1][2].clone(),
            c44: v[3][3].clone(),
            c55: v[4][4].clone(),
            c66: v[5][5].clone(),
        })
    }

    /// True when the Voigt matrix has the orthotropic zero pattern.
    pub fn has_orthotropic_pattern(&self) -> bool {
        (0..6).all(|i| {
            (0..6).all(|j| {
                let coupled = i == j || (i < 3 && j < 3);
                coupled || self.voigt[i][j].is_zero()
            })
        })
    }

    /// `C11 * C22 * C33 != 0`.
    pub fn diagonal_product_nonzero(&self) -> bool {
        !(&self.voigt[0][0] * &self.voigt[1][1] * &self.voigt[2][2]).is_zero()
    }

    /// The energy `C e : e` as a quadratic form on the full matrix `xi`.
    pub fn form(&self) -> QuadraticForm {
        let mut f = QuadraticForm::zero();
        for p in 0..6 {
            for q in 0..6 {
                let c = &self.voigt[p][q];
                if c.is_zero() {
                    continue;
                }
                for &a in VOIGT_STRAIN[p] {
                    for &b in VOIGT_STRAIN[q] {
                        f.gram[9 * a + b] += c;
                    }
                }
            }
        }
        f
    }

    pub fn numeric_form(&self) -> NumericForm {
        self.form().numeric()
    }

    /// Voigt matrix rescaled by `sqrt 2` on shear rows and columns, so its
    /// eigenvalues are those of the tensor on symmetric matrices.
    pub fn mandel(&self) -> [[f64; 6]; 6] {
        let w = |i: usize| if i < 3 { 1.0 } else { std::f64::consts::SQRT_2 };
        let mut m = [[0.0; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                m[i][j] = w(i) * w(j) * to_f64(&self.voigt[i][j]);
            }
        }
        m
    }

    pub fn sub(&self, other: &StiffnessTensor) -> StiffnessTensor {
        let voigt = (0..6)
            .map(|i| (0..6).map(|j| &self.voigt[i][j] - &other.voigt[i][j]).collect())
            .collect();
        let symmetry = if self.symmetry == other.symmetry {
            self.symmetry
        } else {
            SymmetryClass::General
        };
        StiffnessTensor { voigt, symmetry }
    }

    pub fn scale(&self, c: &Rational) -> StiffnessTensor {
        StiffnessTensor {
            voigt: self.voigt.iter().map(|r| r.iter().map(|v| v * c).collect()).collect(),
            symmetry: self.symmetry,
        }
    }

    pub fn identity_mandel() -> StiffnessTensor {
        let half = rational::ratio(1, 2);
        let one = Rational::one;
        StiffnessTensor::orthotropic(&OrthotropicConstants {
            c11: one(),
            c22: one(),
            c33: one(),
            c12: Rational::zero(),
            c13: Rational::zero(),
            c23: Rational::zero(),
            c44: half.clone(),
            c55: half.clone(),
            c66: half,
        })
    }
}

/// The rank-one form `xi -> (B : xi)^2`; on `xi = x (x) y` it equals
/// `(x . B y)^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RankOneForm {
    pub b: [[Rational; 3]; 3],
}

impl RankOneForm {
    pub fn new(b: [[Rational; 3]; 3]) -> Self {
        RankOneForm { b }
    }

    pub fn from_i64(b: [[i64; 3]; 3]) -> Self {
        RankOneForm {
            b: b.map(|r| r.map(rational::rat)),
        }
    }

    pub fn form(&self) -> QuadraticForm {
        QuadraticForm::rank_one(&self.b)
    }

    pub fn is_zero(&self) -> bool {
        self.b.iter().flatten().all(Zero::is_zero)
    }

    /// Linear forms `l_i(y) = sum_j b_ij y_j`.
    pub fn linear_forms(&self) -> [HomoPoly; 3] {
        std::array::from_fn(|i| {
            HomoPoly::from_terms(
                3,
                1,
                (0..3).map(|j| {
                    let mut e = vec![0; 3];
                    e[j] = 1;
                    (e, self.b[i][j].clone())
                }),
            )
            .expect("degree-1 terms")
        })
    }

    pub fn to_f64(&self) -> [[f64; 3]; 3] {
        self.b.clone().map(|r| r.map(|v| to_f64(&v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    #[test]
    fn identity_constants_give_identity_voigt() {
        let s = StiffnessTensor::orthotropic(&OrthotropicConstants::from_i64([1, 1, 1, 0, 0, 0, 1, 1, 1]));
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(s.voigt()[i][j], if i == j { rat(1) } else { rat(0) });
            }
        }
        assert!(s.has_orthotropic_pattern());
    }

    #[test]
    fn stiffness_form_ignores_antisymmetric_part() {
        let s = StiffnessTensor::orthotropic(&OrthotropicConstants::from_array(
            [3, 4, 5, 1, 2, -1, 7, 6, 2].map(rat),
        ));
        let f = s.numeric_form();
        let a = [0.0, 1.5, -0.3, -1.5, 0.0, 2.0, 0.3, -2.0, 0.0];
        assert!(f.eval(&a).abs() < 1e-12);
    }

    #[test]
    fn isotropic_energy() {
        // lambda = 0, mu = 1/2 gives |sym xi|^2
        let s = StiffnessTensor::isotropic(rat(0), ratio(1, 2));
        let f = s.numeric_form();
        let xi = [1.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 3.0];
        // sym part: diag (1, 0, 3), off-diagonal 1 at (1,2),(2,1)
        assert!((f.eval(&xi) - (1.0 + 9.0 + 2.0)).abs() < 1e-12);
    }

    #[test]
    fn rank_one_form_on_rank_one_matrix() {
        let b = RankOneForm::from_i64([[1, 2, 0], [0, -1, 3], [2, 0, 1]]);
        let f = b.form().numeric();
        let x = [0.3, -1.2, 0.5];
        let y = [1.1, 0.4, -0.7];
        let bf = b.to_f64();
        let xby: f64 = (0..3).map(|i| (0..3).map(|j| x[i] * bf[i][j] * y[j]).sum::<f64>()).sum();
        assert!((f.biquadratic(&x, &y) - xby * xby).abs() < 1e-12);
    }

    #[test]
    fn gram_must_be_symmetric() {
        let mut rows = QuadraticForm::zero().gram_rows();
        rows[0][1] = rat(1);
        assert!(QuadraticForm::from_gram(rows).is_err());
    }
}
