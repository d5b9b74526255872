//! The fixed fixture battery run by `elastica verify-fixtures`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::elastic::{
    acoustic_matrix, fixtures, subtracted_det_identity_check, OrthotropicConstants, RankOneForm, StiffnessTensor,
};
use crate::extremal::{form_extremality, poly_extremality, ExtremalityVerdict};
use crate::linalg::{brunn_minkowski_slack, Mat3};
use crate::poly::{perfect_square_check_seeded, LinearSubstitution};
use crate::rational::{ratio, Rational};
use crate::sphere;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatteryItem {
    pub name: String,
    pub passed: bool,
    /// Numeric margin where the item has one (deviation, `t`, slack).
    pub margin: Option<f64>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatteryReport {
    pub items: Vec<BatteryItem>,
    pub passed: usize,
    pub failed: usize,
}

impl BatteryReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

fn item(name: &str, passed: bool, margin: Option<f64>, detail: impl Into<String>) -> BatteryItem {
    BatteryItem {
        name: name.to_string(),
        passed,
        margin,
        detail: detail.into(),
    }
}

fn error_item(name: &str, e: crate::Error) -> BatteryItem {
    item(name, false, None, format!("error: {e}"))
}

pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    ratio(rng.random_range(-9..=9), rng.random_range(1..=5))
}

pub fn random_orthotropic<R: Rng>(rng: &mut R) -> StiffnessTensor {
    StiffnessTensor::orthotropic(&OrthotropicConstants::from_array(std::array::from_fn(|_| random_rational(rng))))
}

pub fn random_rank_one<R: Rng>(rng: &mut R) -> RankOneForm {
    RankOneForm::new(std::array::from_fn(|_| std::array::from_fn(|_| random_rational(rng))))
}

/// Sum of `rank` outer products of random vectors with entries in
/// `2^-10 Z`, `|v_i| <= 4`; every product and sum is exact in `f64`, so
/// the matrix is exactly psd with exactly the requested rank (almost
/// surely).
pub fn random_psd<R: Rng>(rng: &mut R, rank: usize) -> Mat3 {
    let mut m = [[0.0; 3]; 3];
    for _ in 0..rank {
        let v: [f64; 3] = std::array::from_fn(|_| {
            let g: f64 = rng.sample(StandardNormal);
            (g.clamp(-4.0, 4.0) * 1024.0).round() / 1024.0
        });
        for i in 0..3 {
            for j in 0..=i {
                m[i][j] += v[i] * v[j];
                m[j][i] = m[i][j];
            }
        }
    }
    m
}

/// Runs `trials` cofactor-identity checks on random rational data; returns
/// the number of failures.
pub fn cofactor_identity_trials(trials: usize, seed: u64) -> usize {
    let mut rng = sphere::rng_stream(seed, 11);
    (0..trials)
        .filter(|_| {
            let c = random_orthotropic(&mut rng);
            let b = random_rank_one(&mut rng);
            let t = random_rational(&mut rng);
            !subtracted_det_identity_check(&c.form(), &b, &t)
        })
        .count()
}

/// Smallest cube-root slack over `trials` random psd pairs of random rank.
pub fn brunn_minkowski_trials(trials: usize, seed: u64) -> f64 {
    let mut rng = sphere::rng_stream(seed, 12);
    let mut worst = f64::INFINITY;
    for _ in 0..trials {
        let (ra, rb) = (rng.random_range(0..=3), rng.random_range(0..=3));
        let a = random_psd(&mut rng, ra);
        let b = random_psd(&mut rng, rb);
        let s = brunn_minkowski_slack(&a, &b).expect("generated matrices are psd");
        worst = worst.min(s);
    }
    worst
}

pub fn run_battery(cfg: &RunConfig) -> BatteryReport {
    let mut items = Vec::new();

    let det = acoustic_matrix(&fixtures::diagonal_form()).det();
    items.push(item(
        "diagonal_form_determinant",
        det == fixtures::product_sextic(),
        None,
        format!("det = {det}"),
    ));

    let det = acoustic_matrix(&fixtures::two_axis_form()).det();
    items.push(item("two_axis_form_determinant", det.is_zero(), None, format!("det = {det}")));

    let b = RankOneForm::from_i64([[1, 2, 0], [0, 1, -1], [3, 0, 1]]);
    let det = acoustic_matrix(&b.form()).det();
    items.push(item("rank_one_form_determinant", det.is_zero(), None, format!("det = {det}")));

    let det = acoustic_matrix(&fixtures::cyclic_extremal_form()).det();
    let swapped = fixtures::cyclic_sextic().substitute(&LinearSubstitution::swap(3, 1, 2));
    let ok = det == fixtures::cyclic_extremal_det() && swapped.as_ref().is_ok_and(|s| *s == det);
    items.push(item("cyclic_form_determinant", ok, None, format!("det = {det}")));

    let p = fixtures::cyclic_sextic();
    items.push(match poly_extremality(&p, cfg) {
        Ok(r) => item(
            "sextic_extremality",
            r.verdict == ExtremalityVerdict::ExtremalUpToTol,
            Some(r.max_deviation),
            format!("{:?}, max deviation {:e}, tol {:e}", r.verdict, r.max_deviation, r.tol),
        ),
        Err(e) => error_item("sextic_extremality", e),
    });

    items.push(
        match perfect_square_check_seeded(&p, cfg.tol.perfect_square, cfg.seed, cfg.budget.square_starts) {
            Ok(r) => item(
                "sextic_not_square",
                !r.is_square(),
                Some(r.residual),
                format!("{:?}", r.verdict),
            ),
            Err(e) => error_item("sextic_not_square", e),
        },
    );

    items.push(match form_extremality(&fixtures::cyclic_extremal_form(), cfg) {
        Ok(r) => item(
            "form_extremality",
            r.verdict == ExtremalityVerdict::ExtremalUpToTol,
            Some(r.max_t),
            format!("{:?}, max t {:e} over {} starts, tol {:e}", r.verdict, r.max_t, r.starts, r.tol),
        ),
        Err(e) => error_item("form_extremality", e),
    });

    let trials = 100;
    let failures = cofactor_identity_trials(trials, cfg.seed);
    items.push(item(
        "cofactor_identity",
        failures == 0,
        None,
        format!("{failures} failures in {trials} random cases"),
    ));

    let slack = brunn_minkowski_trials(cfg.budget.bm_trials, cfg.seed);
    items.push(item(
        "brunn_minkowski",
        slack >= -1e-10,
        Some(slack),
        format!("worst slack {slack:e} over {} pairs", cfg.budget.bm_trials),
    ));

    let bad: Vec<String> = fixtures::special_form_fixtures()
        .into_iter()
        .filter(|s| acoustic_matrix(&s.form).det() != s.det)
        .map(|s| s.name)
        .collect();
    items.push(item(
        "special_form_determinants",
        bad.is_empty(),
        None,
        if bad.is_empty() {
            "all closed forms match".to_string()
        } else {
            format!("mismatch: {}", bad.join(", "))
        },
    ));

    let passed = items.iter().filter(|i| i.passed).count();
    BatteryReport {
        failed: items.len() - passed,
        passed,
        items,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_psd_has_requested_rank() {
        let mut rng = sphere::rng(4);
        let m = random_psd(&mut rng, 2);
        assert!(crate::linalg::det3(&m).abs() < 1e-9);
        assert!(crate::linalg::sym3_min_eigenvalue(&random_psd(&mut rng, 3)) > 0.0);
    }

    #[test]
    fn cofactor_identity_sample() {
        assert_eq!(cofactor_identity_trials(5, 1), 0);
    }
}
