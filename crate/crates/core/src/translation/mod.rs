//! Translation bounds: positive semidefinite gaps between phase tensors and
//! a translation, and the Fourier-side energy of periodic gradient fields.

mod field;
mod fourier;

pub use field::PeriodicField;
pub use fourier::{fourier_quasiconvexity_check, modal_energy, real_space_energy, FourierReport, ModeTerm};

use nalgebra::{Matrix6, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::elastic::{FormInput, QuadraticForm, StiffnessTensor};
use crate::error::{Error, Result};

/// Two phases and a translation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoPhaseSetup {
    pub c1: StiffnessTensor,
    pub c2: StiffnessTensor,
    pub translation: FormInput,
}

impl TwoPhaseSetup {
    /// Rejects phases that are not positive definite on strains.
    pub fn new(c1: StiffnessTensor, c2: StiffnessTensor, translation: FormInput) -> Result<Self> {
        for (name, c) in [("c1", &c1), ("c2", &c2)] {
            let m = Matrix6::from_fn(|a, b| c.mandel()[a][b]);
            let low = SymmetricEigen::new(m).eigenvalues.min();
            if low <= 0.0 {
                return Err(Error::precondition(format!(
                    "{name} is not positive definite (Mandel eigenvalue {low:e})"
                )));
            }
        }
        Ok(TwoPhaseSetup { c1, c2, translation })
    }

    /// `{"c1": tensor, "c2": tensor, "translation": tensor or form}`.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s)?;
        let get = |k: &str| -> Result<String> {
            v.get(k)
                .map(|x| x.to_string())
                .ok_or_else(|| Error::parse(1, 1, format!("missing key `{k}`")))
        };
        TwoPhaseSetup::new(
            StiffnessTensor::from_json_str(&get("c1")?)?,
            StiffnessTensor::from_json_str(&get("c2")?)?,
            FormInput::from_json_str(&get("translation")?)?,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseGap {
    pub psd: bool,
    /// Ascending eigenvalues of `C_i - C` on symmetric matrices.
    pub eigenvalues: Vec<f64>,
    /// Unit symmetric matrices spanning the (numerical) kernel of the gap.
    pub degenerate_directions: Vec<[[f64; 3]; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub phases: Vec<PhaseGap>,
    pub tol: f64,
}

/// Orthonormal basis of symmetric 3x3 matrices in Mandel order
/// `11, 22, 33, 23, 13, 12`, as 9-vectors.
fn mandel_basis() -> [[f64; 9]; 6] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = [[0.0; 9]; 6];
    for i in 0..3 {
        out[i][4 * i] = 1.0;
    }
    for (a, (i, j)) in [(1, 2), (0, 2), (0, 1)].into_iter().enumerate() {
        out[3 + a][3 * i + j] = h;
        out[3 + a][3 * j + i] = h;
    }
    out
}

/// Restriction of a form to symmetric matrices, in Mandel coordinates.
pub fn strain_matrix(f: &QuadraticForm) -> [[f64; 6]; 6] {
    let g = f.numeric().g;
    let e = mandel_basis();
    let mut m = [[0.0; 6]; 6];
    for a in 0..6 {
        for b in 0..6 {
            let mut s = 0.0;
            for p in 0..9 {
                for q in 0..9 {
                    s += e[a][p] * g[p][q] * e[b][q];
                }
            }
            m[a][b] = s;
        }
    }
    m
}

fn phase_gap(gap: &QuadraticForm, tol: f64) -> PhaseGap {
    let m = strain_matrix(gap);
    let eig = SymmetricEigen::new(Matrix6::from_fn(|a, b| m[a][b]));
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let basis = mandel_basis();
    let mut dirs = Vec::new();
    for &k in &order {
        if eig.eigenvalues[k].abs() > tol {
            continue;
        }
        let mut d = [[0.0; 3]; 3];
        for a in 0..6 {
            let w = eig.eigenvectors[(a, k)];
            for p in 0..9 {
                d[p / 3][p % 3] += w * basis[a][p];
            }
        }
        let s = d.iter().flatten().find(|x| x.abs() > 1e-12).copied().unwrap_or(1.0).signum();
        dirs.push(d.map(|r| r.map(|x| x * s)));
    }
    PhaseGap {
        psd: eig.eigenvalues.min() >= -tol,
        eigenvalues: order.iter().map(|&k| eig.eigenvalues[k]).collect(),
        degenerate_directions: dirs,
    }
}

/// Eigen-analysis of `C1 - C` and `C2 - C` on symmetric matrices.
pub fn translation_gap(setup: &TwoPhaseSetup, tol: f64) -> GapReport {
    let c = setup.translation.form();
    GapReport {
        phases: [&setup.c1, &setup.c2]
            .iter()
            .map(|ci| phase_gap(&ci.form().sub(&c), tol))
            .collect(),
        tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn iso() -> StiffnessTensor {
        StiffnessTensor::isotropic(rat(1), rat(1))
    }

    #[test]
    fn zero_translation() {
        let s = TwoPhaseSetup::new(iso(), iso().scale(&rat(2)), FormInput::Form(QuadraticForm::zero())).unwrap();
        let r = translation_gap(&s, 1e-10);
        assert!(r.phases.iter().all(|p| p.psd && p.degenerate_directions.is_empty()));
    }

    #[test]
    fn translation_equal_to_a_phase() {
        let s = TwoPhaseSetup::new(iso(), iso().scale(&rat(2)), FormInput::Tensor(iso())).unwrap();
        let r = translation_gap(&s, 1e-10);
        assert!(r.phases[0].psd);
        assert_eq!(r.phases[0].degenerate_directions.len(), 6);
        assert!(r.phases[1].degenerate_directions.is_empty());
    }

    #[test]
    fn identity_gap() {
        let id = StiffnessTensor::identity_mandel();
        let s = TwoPhaseSetup::new(id.scale(&rat(2)), id.scale(&rat(3)), FormInput::Tensor(id)).unwrap();
        let r = translation_gap(&s, 1e-10);
        for (p, want) in r.phases.iter().zip([1.0, 2.0]) {
            assert!(p.eigenvalues.iter().all(|l| (l - want).abs() < 1e-12), "{:?}", p.eigenvalues);
        }
    }

    #[test]
    fn indefinite_phase_is_rejected() {
        let bad = StiffnessTensor::isotropic(rat(1), rat(-1));
        assert!(TwoPhaseSetup::new(bad, iso(), FormInput::Tensor(iso())).is_err());
    }
}
