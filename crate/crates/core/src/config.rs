//! Run configuration and the defaults table.
//!
//! | key                        | default | used by                          |
//! |----------------------------|---------|----------------------------------|
//! | `seed`                     | 0       | every sampling step              |
//! | `tol.nonneg`               | 1e-9    | nonnegativity scans              |
//! | `tol.rank_one`             | 1e-9    | rank-one convexity               |
//! | `tol.poly_extremality`     | 1e-6    | LP deviation threshold           |
//! | `tol.perfect_square`       | 1e-8    | relative square residual         |
//! | `tol.form_extremality`     | 1e-4    | largest removable multiple `t`   |
//! | `tol.witness_eigenvalue`   | 1e-12   | re-check of form witnesses       |
//! | `tol.gap`                  | 1e-10   | translation gap eigenvalues      |
//! | `tol.fourier`              | 1e-8    | Fourier-side energy              |
//! | `budget.sphere_samples`    | 20000   | sphere scans                     |
//! | `budget.refinements`       | 50      | local descents per scan          |
//! | `budget.verify_samples`    | 100000  | witness re-verification scans    |
//! | `budget.lp_samples`        | 2000    | LP sample points                 |
//! | `budget.lp_directions`     | 64      | LP objectives                    |
//! | `budget.cutting_rounds`    | 3       | LP refinement rounds             |
//! | `budget.square_starts`     | 12      | square-root multistarts          |
//! | `budget.form_starts`       | 200     | random outer starts over `B`     |
//! | `budget.form_inner_samples`| 1500    | inner scan over `y`              |
//! | `budget.grid`              | 16      | periodic grid size               |
//! | `budget.bm_trials`         | 100000  | determinant inequality trials    |
//! | `symmetric_rank_one`       | false   | restrict `B` to symmetric        |

use serde::{Deserialize, Serialize};

use crate::poly::SphereBudget;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub nonneg: f64,
    pub rank_one: f64,
    pub poly_extremality: f64,
    pub perfect_square: f64,
    pub form_extremality: f64,
    pub witness_eigenvalue: f64,
    pub gap: f64,
    pub fourier: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            nonneg: 1e-9,
            rank_one: 1e-9,
            poly_extremality: 1e-6,
            perfect_square: 1e-8,
            form_extremality: 1e-4,
            witness_eigenvalue: 1e-12,
            gap: 1e-10,
            fourier: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    pub sphere_samples: usize,
    pub refinements: usize,
    pub verify_samples: usize,
    pub lp_samples: usize,
    pub lp_directions: usize,
    pub cutting_rounds: usize,
    pub square_starts: usize,
    pub form_starts: usize,
    pub form_inner_samples: usize,
    pub grid: usize,
    pub bm_trials: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            sphere_samples: 20_000,
            refinements: 50,
            verify_samples: 100_000,
            lp_samples: 2_000,
            lp_directions: 64,
            cutting_rounds: 3,
            square_starts: 12,
            form_starts: 200,
            form_inner_samples: 1_500,
            grid: 16,
            bm_trials: 100_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub tol: Tolerances,
    pub budget: Budgets,
    /// Subtract only `(B : xi)^2` with symmetric `B` in the form test.
    pub symmetric_rank_one: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            tol: Tolerances::default(),
            budget: Budgets::default(),
            symmetric_rank_one: false,
        }
    }
}

impl RunConfig {
    pub fn sphere_budget(&self) -> SphereBudget {
        SphereBudget {
            samples: self.budget.sphere_samples,
            refinements: self.budget.refinements,
            seed: self.seed,
        }
    }

    pub fn verify_budget(&self) -> SphereBudget {
        SphereBudget {
            samples: self.budget.verify_samples,
            refinements: 2 * self.budget.refinements,
            seed: self.seed.wrapping_add(0x9e37_79b9),
        }
    }
}
