//! Named forms with known acoustic determinants.

use super::{OrthotropicConstants, QuadraticForm, StiffnessTensor};
use crate::poly::HomoPoly;
use crate::rational::{rat, ratio, Rational};

fn q(terms: &[((usize, usize), (usize, usize), i64)]) -> QuadraticForm {
    QuadraticForm::from_terms(
        &terms
            .iter()
            .map(|&(a, b, c)| (a, b, rat(c)))
            .collect::<Vec<_>>(),
    )
}

/// `xi11^2 + xi22^2 + xi33^2`.
pub fn diagonal_form() -> QuadraticForm {
    q(&[((0, 0), (0, 0), 1), ((1, 1), (1, 1), 1), ((2, 2), (2, 2), 1)])
}

/// `xi11^2 + xi22^2`; its acoustic determinant vanishes identically.
pub fn two_axis_form() -> QuadraticForm {
    q(&[((0, 0), (0, 0), 1), ((1, 1), (1, 1), 1)])
}

/// `xi11^2 + xi22^2 + xi33^2 - 2(xi11 xi22 + xi11 xi33 + xi22 xi33)
///  + xi12^2 + xi23^2 + xi31^2`, an extremal rank-one convex form.
pub fn cyclic_extremal_form() -> QuadraticForm {
    q(&[
        ((0, 0), (0, 0), 1),
        ((1, 1), (1, 1), 1),
        ((2, 2), (2, 2), 1),
        ((0, 0), (1, 1), -2),
        ((0, 0), (2, 2), -2),
        ((1, 1), (2, 2), -2),
        ((0, 1), (0, 1), 1),
        ((1, 2), (1, 2), 1),
        ((2, 0), (2, 0), 1),
    ])
}

/// `y1^4 y2^2 + y2^4 y3^2 + y3^4 y1^2 - 3 y1^2 y2^2 y3^2`.
pub fn cyclic_sextic() -> HomoPoly {
    HomoPoly::from_i64(
        3,
        6,
        &[(&[4, 2, 0], 1), (&[0, 4, 2], 1), (&[2, 0, 4], 1), (&[2, 2, 2], -3)],
    )
    .expect("valid sextic")
}

/// Acoustic determinant of [`cyclic_extremal_form`]; equals
/// [`cyclic_sextic`] after exchanging `y2` and `y3`.
pub fn cyclic_extremal_det() -> HomoPoly {
    HomoPoly::from_i64(
        3,
        6,
        &[(&[4, 0, 2], 1), (&[2, 4, 0], 1), (&[0, 2, 4], 1), (&[2, 2, 2], -3)],
    )
    .expect("valid sextic")
}

/// `y1^2 y2^2 y3^2`.
pub fn product_sextic() -> HomoPoly {
    HomoPoly::from_i64(3, 6, &[(&[2, 2, 2], 1)]).expect("valid sextic")
}

/// Orthotropic tensor whose energy is [`diagonal_form`]: unit axial
/// constants, everything else zero.
pub fn diagonal_tensor() -> StiffnessTensor {
    StiffnessTensor::orthotropic(&OrthotropicConstants::from_i64([1, 1, 1, 0, 0, 0, 0, 0, 0]))
}

fn axial_square(a: &Rational, b: &Rational, c: &Rational) -> Vec<((usize, usize), (usize, usize), Rational)> {
    let coeff = [a, b, c];
    let mut out = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            out.push(((i, i), (j, j), coeff[i] * coeff[j]));
        }
    }
    out
}

/// `(a y1^2 + b y2^2 + c y3^2)`.
fn weighted_squares(a: &Rational, b: &Rational, c: &Rational) -> HomoPoly {
    HomoPoly::from_terms(
        3,
        2,
        vec![(vec![2, 0, 0], a.clone()), (vec![0, 2, 0], b.clone()), (vec![0, 0, 2], c.clone())],
    )
    .expect("degree-2 terms")
}

/// `(a xi11 + b xi22 + c xi33)^2 + sum_{i<j} (xi_ij - xi_ji)^2`.
pub fn antisymmetric_shear_form(a: &Rational, b: &Rational, c: &Rational) -> QuadraticForm {
    let mut t = axial_square(a, b, c);
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        t.push(((i, j), (i, j), rat(1)));
        t.push(((j, i), (j, i), rat(1)));
        t.push(((i, j), (j, i), rat(-2)));
    }
    QuadraticForm::from_terms(&t)
}

/// `(y1^2 + y2^2 + y3^2)(a y1^2 + b y2^2 + c y3^2)^2`.
pub fn antisymmetric_shear_det(a: &Rational, b: &Rational, c: &Rational) -> HomoPoly {
    let s = weighted_squares(&rat(1), &rat(1), &rat(1));
    let l = weighted_squares(a, b, c);
    s.times(&l).times(&l)
}

/// `(a xi11 + b xi22 + c xi33)^2 + (xi12 + xi21)^2 + (xi13 + xi31)^2`.
pub fn symmetric_shear_form(a: &Rational, b: &Rational, c: &Rational) -> QuadraticForm {
    let mut t = axial_square(a, b, c);
    for (i, j) in [(0, 1), (0, 2)] {
        t.push(((i, j), (i, j), rat(1)));
        t.push(((j, i), (j, i), rat(1)));
        t.push(((i, j), (j, i), rat(2)));
    }
    QuadraticForm::from_terms(&t)
}

/// `y1^2 (a y1^2 - b y2^2 - c y3^2)^2`.
pub fn symmetric_shear_det(a: &Rational, b: &Rational, c: &Rational) -> HomoPoly {
    let l = weighted_squares(a, &-b, &-c);
    let y1 = HomoPoly::var(3, 0);
    y1.times(&y1).times(&l).times(&l)
}

/// `(a xi11 + b xi22 + c xi33)^2 + xi12^2 + xi21^2 + 2 d xi12 xi21`.
pub fn coupled_shear_form(a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> QuadraticForm {
    let mut t = axial_square(a, b, c);
    t.push(((0, 1), (0, 1), rat(1)));
    t.push(((1, 0), (1, 0), rat(1)));
    t.push(((0, 1), (1, 0), d * rat(2)));
    QuadraticForm::from_terms(&t)
}

/// `(1 - d^2) c^2 y1^2 y2^2 y3^2`.
pub fn coupled_shear_det(c: &Rational, d: &Rational) -> HomoPoly {
    product_sextic().scale(&((rat(1) - d * d) * c * c))
}

/// `a1(xi12^2 + xi21^2) + a2(xi13^2 + xi31^2) + a3(xi23^2 + xi32^2)
///  + 2 b1 xi11 xi22 + 2 b2 xi11 xi33 + 2 b3 xi22 xi33`.
pub fn shear_coupling_form(a: &[Rational; 3], b: &[Rational; 3]) -> QuadraticForm {
    let mut t = Vec::new();
    for (k, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
        t.push(((i, j), (i, j), a[k].clone()));
        t.push(((j, i), (j, i), a[k].clone()));
        t.push(((i, i), (j, j), &b[k] * rat(2)));
    }
    QuadraticForm::from_terms(&t)
}

/// Seven-term closed form of the acoustic determinant of
/// [`shear_coupling_form`].
pub fn shear_coupling_det(a: &[Rational; 3], b: &[Rational; 3]) -> HomoPoly {
    let [a1, a2, a3] = a;
    let [b1, b2, b3] = b;
    let sq = |x: &Rational| x * x;
    let terms = vec![
        (vec![4, 2, 0], (sq(a1) - sq(b1)) * a2),
        (vec![2, 4, 0], (sq(a1) - sq(b1)) * a3),
        (vec![4, 0, 2], (sq(a2) - sq(b2)) * a1),
        (vec![2, 0, 4], (sq(a2) - sq(b2)) * a3),
        (vec![0, 4, 2], (sq(a3) - sq(b3)) * a1),
        (vec![0, 2, 4], (sq(a3) - sq(b3)) * a2),
        (vec![2, 2, 2], (a1 * a2 * a3 + b1 * b2 * b3) * rat(2)),
    ];
    HomoPoly::from_terms(3, 6, terms).expect("degree-6 terms")
}

/// A named form with its closed-form acoustic determinant.
#[derive(Clone, Debug)]
pub struct SpecialForm {
    pub name: String,
    pub form: QuadraticForm,
    pub det: HomoPoly,
}

/// Fixed battery of parameterised forms and their determinants.
pub fn special_form_fixtures() -> Vec<SpecialForm> {
    let mut out = Vec::new();
    let mut push = |name: String, form: QuadraticForm, det: HomoPoly| out.push(SpecialForm { name, form, det });
    for (a, b, c) in [(0, 0, 0), (1, 1, 1), (2, -1, 3), (1, 0, -2)] {
        let (a, b, c) = (rat(a), rat(b), rat(c));
        push(
            format!("antisymmetric_shear({a},{b},{c})"),
            antisymmetric_shear_form(&a, &b, &c),
            antisymmetric_shear_det(&a, &b, &c),
        );
        push(
            format!("symmetric_shear({a},{b},{c})"),
            symmetric_shear_form(&a, &b, &c),
            symmetric_shear_det(&a, &b, &c),
        );
    }
    for (a, b, c, d) in [(1, 2, 3, ratio(1, 2)), (0, 1, -1, rat(1)), (2, 0, 5, ratio(-3, 4))] {
        let (a, b, c) = (rat(a), rat(b), rat(c));
        push(
            format!("coupled_shear({a},{b},{c},{d})"),
            coupled_shear_form(&a, &b, &c, &d),
            coupled_shear_det(&c, &d),
        );
    }
    let g_params: [(&str, [i64; 3], [i64; 3]); 6] = [
        ("all_shear_positive_degenerate", [1, 1, 1], [-1, -1, -1]),
        ("all_shear_positive", [2, 3, 1], [1, -1, 2]),
        ("one_shear_zero", [1, 2, 0], [1, -2, 0]),
        ("two_shear_zero", [3, 0, 0], [1, 0, 0]),
        ("no_shear", [0, 0, 0], [1, 2, -1]),
        ("mixed", [1, 1, 1], [1, 1, -1]),
    ];
    for (name, a, b) in g_params {
        let a = a.map(rat);
        let b = b.map(rat);
        push(format!("shear_coupling_{name}"), shear_coupling_form(&a, &b), shear_coupling_det(&a, &b));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elastic::acoustic_matrix;
    use crate::poly::LinearSubstitution;

    #[test]
    fn special_forms_match_closed_forms() {
        for s in special_form_fixtures() {
            assert_eq!(acoustic_matrix(&s.form).det(), s.det, "{}", s.name);
        }
    }

    #[test]
    fn cyclic_form_and_sextic_are_related_by_swap() {
        let det = acoustic_matrix(&cyclic_extremal_form()).det();
        assert_eq!(det, cyclic_extremal_det());
        let swapped = cyclic_sextic().substitute(&LinearSubstitution::swap(3, 1, 2)).unwrap();
        assert_eq!(det, swapped);
    }

    #[test]
    fn degenerate_coupling_vanishes() {
        let a = [rat(1), rat(1), rat(1)];
        let b = [rat(-1), rat(-1), rat(-1)];
        assert!(shear_coupling_det(&a, &b).is_zero());
    }

    #[test]
    fn unit_antisymmetric_shear_is_a_cube() {
        let one = rat(1);
        let s = weighted_squares(&one, &one, &one);
        assert_eq!(antisymmetric_shear_det(&one, &one, &one), s.pow(3));
    }
}
