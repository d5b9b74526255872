//! Full hypothesis pipeline for orthotropic tensors: nonvanishing axial
//! constants, rank-one convexity, extremality of the acoustic determinant,
//! the perfect-square test, and form extremality, with a consistency flag
//! for the implication "determinant extremal and not a square => form
//! extremal".

use serde::{Deserialize, Serialize};

use super::{form_extremality, poly_extremality, ExtremalityVerdict, FormExtremalityReport, PolyExtremalityReport};
use crate::config::RunConfig;
use crate::elastic::{acoustic_matrix, rank_one_convexity, ConvexityReport, StiffnessTensor, SymmetryClass};
use crate::error::{Error, Result};
use crate::poly::{nonneg_check, perfect_square_check_seeded, HomoPoly, SquareReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Consistency {
    /// Every hypothesis holds and the form was found extremal.
    ExtremalityConfirmed,
    /// Some hypothesis fails, so nothing is claimed about the form.
    HypothesesNotSatisfied,
    /// Every hypothesis holds yet the form was found non-extremal; the
    /// tolerances need review.
    NumericalContradiction,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub axial_product_nonzero: bool,
    pub rank_one_convexity: ConvexityReport,
    pub det: HomoPoly,
    pub det_identically_zero: bool,
    pub det_nonnegative: bool,
    pub det_extremality: Option<PolyExtremalityReport>,
    pub det_square: Option<SquareReport>,
    pub form_extremality: Option<FormExtremalityReport>,
    pub hypotheses_hold: bool,
    pub consistency: Consistency,
    pub notes: Vec<String>,
}

pub fn extremality_audit(tensor: &StiffnessTensor, cfg: &RunConfig) -> Result<AuditReport> {
    if tensor.symmetry() != SymmetryClass::Orthotropic && !tensor.has_orthotropic_pattern() {
        return Err(Error::precondition("tensor is not orthotropic"));
    }
    let mut notes = Vec::new();
    let form = tensor.form();
    let axial = tensor.diagonal_product_nonzero();
    if !axial {
        notes.push("C11 C22 C33 = 0".to_string());
    }
    let r1c = rank_one_convexity(&form.numeric(), cfg.tol.rank_one, &cfg.sphere_budget());
    if !r1c.is_rank_one_convex() {
        notes.push("form is not rank-one convex".to_string());
    }
    let det = acoustic_matrix(&form).det();
    let zero = det.is_zero();
    let mut nonneg = false;
    let mut det_extremality = None;
    let mut det_square = None;
    if zero {
        notes.push("acoustic determinant vanishes identically".to_string());
    } else {
        nonneg = nonneg_check(&det, cfg.tol.nonneg * det.coefficient_norm(), &cfg.sphere_budget())?.is_nonnegative();
        if nonneg {
            det_extremality = Some(poly_extremality(&det, cfg)?);
            det_square = Some(perfect_square_check_seeded(
                &det,
                cfg.tol.perfect_square,
                cfg.seed,
                cfg.budget.square_starts,
            )?);
        } else {
            notes.push("acoustic determinant takes negative values".to_string());
        }
    }
    let form_report = if r1c.is_rank_one_convex() {
        Some(form_extremality(&form, cfg)?)
    } else {
        None
    };

    let det_extremal = det_extremality
        .as_ref()
        .is_some_and(|r| r.verdict == ExtremalityVerdict::ExtremalUpToTol);
    let det_square_flag = det_square.as_ref().is_some_and(|s| s.is_square());
    if det_extremality.is_some() && !det_extremal {
        notes.push("acoustic determinant is not extremal".to_string());
    }
    if det_square_flag {
        notes.push("acoustic determinant is a perfect square".to_string());
    }
    let hypotheses = axial && r1c.is_rank_one_convex() && det_extremal && det_square.is_some() && !det_square_flag;
    let form_extremal = form_report
        .as_ref()
        .is_some_and(|r| r.verdict == ExtremalityVerdict::ExtremalUpToTol);
    let consistency = if !hypotheses {
        Consistency::HypothesesNotSatisfied
    } else if form_extremal {
        Consistency::ExtremalityConfirmed
    } else {
        Consistency::NumericalContradiction
    };
    Ok(AuditReport {
        axial_product_nonzero: axial,
        rank_one_convexity: r1c,
        det,
        det_identically_zero: zero,
        det_nonnegative: nonneg,
        det_extremality,
        det_square,
        form_extremality: form_report,
        hypotheses_hold: hypotheses,
        consistency,
        notes,
    })
}
