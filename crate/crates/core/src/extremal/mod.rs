//! Extremality of nonnegative forms and of rank-one convex quadratic forms.

mod audit;
mod form;
mod poly;

pub use audit::{extremality_audit, AuditReport, Consistency};
pub use form::{form_extremality, removable_multiple, FormExtremalityReport, FormWitness, StartRecord};
pub use poly::{poly_extremality, PolyBasis, PolyExtremalityReport, WitnessCheck};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{HomoPoly, LinearSubstitution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremalityVerdict {
    ExtremalUpToTol,
    NotExtremal,
    /// The search found a large dominated direction but no candidate
    /// survived global verification within the refinement budget.
    Inconclusive,
}

/// `p(y) == q(A y)` exactly.
pub fn equivalence_check(p: &HomoPoly, q: &HomoPoly, a: &LinearSubstitution) -> Result<bool> {
    if a.is_singular() {
        return Err(Error::precondition("substitution matrix is singular"));
    }
    if p.nvars() != q.nvars() || q.nvars() != a.dim() {
        return Err(Error::contract("variable counts differ"));
    }
    Ok(*p == q.substitute(a)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elastic::fixtures;

    #[test]
    fn equivalences() {
        let p = fixtures::cyclic_sextic();
        assert!(equivalence_check(&p, &p, &LinearSubstitution::identity(3)).unwrap());
        let d = fixtures::cyclic_extremal_det();
        assert!(equivalence_check(&d, &p, &LinearSubstitution::swap(3, 1, 2)).unwrap());
        assert!(!equivalence_check(&d, &p, &LinearSubstitution::identity(3)).unwrap());
        let y1 = HomoPoly::from_i64(3, 6, &[(&[6, 0, 0], 1)]).unwrap();
        let y2 = HomoPoly::from_i64(3, 6, &[(&[0, 6, 0], 1)]).unwrap();
        assert!(equivalence_check(&y1, &y2, &LinearSubstitution::swap(3, 0, 1)).unwrap());
        let singular = LinearSubstitution::from_i64(&[&[1, 1, 0], &[1, 1, 0], &[0, 0, 1]]).unwrap();
        assert!(matches!(equivalence_check(&p, &p, &singular), Err(Error::Precondition(_))));
    }
}
