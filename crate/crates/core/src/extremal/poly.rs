//! Dominance search for nonnegative forms.
//!
//! A dominated form `0 <= Q <= P` must vanish wherever `P` does, to the
//! same order along every line. Exact zeros of `P` give exact linear
//! conditions on the coefficients of `Q`; when they leave only the
//! multiples of `P` the answer is exact. Otherwise an LP over sampled
//! points searches for a dominated direction orthogonal to `P`, and any
//! candidate is re-verified globally before it is reported.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::ExtremalityVerdict;
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::linalg::ExactRowSpace;
use crate::lp::{LpStatus, Simplex};
use crate::poly::{monomials_of_degree, nonneg_check, sphere_minima, HomoPoly, Monomial, NumericPoly, SphereBudget};
use crate::rational::{format_rational, from_f64_exact, rat, round_rational, to_f64, Rational};
use crate::sphere;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolyBasis {
    Even,
    Full,
}

/// Global minima of the witness and of its complement, on the scale where
/// `P` has unit coefficient norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessCheck {
    pub q_min: f64,
    pub p_minus_q_min: f64,
    pub budget: SphereBudget,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyExtremalityReport {
    pub verdict: ExtremalityVerdict,
    /// `Q` with `0 <= Q <= P`, not a multiple of `P`.
    pub witness: Option<HomoPoly>,
    pub witness_check: Option<WitnessCheck>,
    /// Largest LP objective over the probed directions (unit-norm scale).
    pub max_deviation: f64,
    /// Exact zeros of `P` used for the jet conditions, as primitive
    /// integer vectors.
    pub exact_zeros: Vec<Vec<String>>,
    /// The jet conditions alone leave only multiples of `P`.
    pub jet_certificate: bool,
    pub basis: PolyBasis,
    /// Dimension of the coefficient space left after the jet conditions.
    pub search_dimension: usize,
    pub samples: usize,
    pub directions: usize,
    pub rounds: usize,
    pub tol: f64,
    pub seed: u64,
}

const RING_RADII: [f64; 3] = [1e-1, 1e-2, 1e-3];
const JET_RADII: [f64; 4] = [0.0, 1e-3, 1e-2, 1e-1];
const MAX_ZEROS: usize = 32;

struct ExactZero {
    point: Vec<Rational>,
    extra_dirs: Vec<Vec<Rational>>,
}

struct Jet {
    /// `line[k][j]`: coefficient of `s^k` of monomial `j` along the line.
    line: Vec<Vec<f64>>,
    p_line: Vec<f64>,
    order: usize,
}

pub fn poly_extremality(p: &HomoPoly, cfg: &RunConfig) -> Result<PolyExtremalityReport> {
    if p.is_zero() {
        return Err(Error::precondition("polynomial is identically zero"));
    }
    if p.degree() % 2 != 0 {
        return Err(Error::precondition("a nonnegative form has even degree"));
    }
    let n = p.nvars();
    let d = p.degree();
    let tol = cfg.tol.poly_extremality;
    let norm = p.coefficient_norm();
    let scale = round_rational(1.0 / norm, 1000, 0.01 / norm).unwrap_or_else(|| from_f64_exact(1.0 / norm));
    let pw = p.scale(&scale);
    let np = pw.numeric();
    let pre = nonneg_check(&pw, cfg.tol.nonneg, &cfg.sphere_budget())?;
    if !pre.is_nonnegative() {
        return Err(Error::precondition(format!(
            "polynomial takes the value {:e} on the unit sphere",
            pre.min_value / to_f64(&scale)
        )));
    }

    let mut report = PolyExtremalityReport {
        verdict: ExtremalityVerdict::ExtremalUpToTol,
        witness: None,
        witness_check: None,
        max_deviation: 0.0,
        exact_zeros: Vec::new(),
        jet_certificate: false,
        basis: PolyBasis::Full,
        search_dimension: 0,
        samples: cfg.budget.lp_samples,
        directions: cfg.budget.lp_directions,
        rounds: 0,
        tol,
        seed: cfg.seed,
    };

    let full = monomials_of_degree(n, d);
    let minima: Vec<Vec<f64>> = if n > 1 {
        sphere_minima(&np, &cfg.sphere_budget())
            .into_iter()
            .filter(|m| m.value <= 1e-8)
            .map(|m| m.point)
            .collect()
    } else {
        Vec::new()
    };
    let zeros = exact_zeros(&pw, &np, &minima);
    report.exact_zeros = zeros
        .iter()
        .map(|z| z.point.iter().map(format_rational).collect())
        .collect();

    // jet conditions
    let mut space = ExactRowSpace::new(full.len());
    let mut jets: Vec<Jet> = Vec::new();
    let monos: Vec<HomoPoly> = full
        .iter()
        .map(|m| HomoPoly::monomial(m.exponents(), Rational::one()))
        .collect();
    for z in &zeros {
        for v in standard_directions(n).iter().chain(&z.extra_dirs) {
            let p_line = pw.line_coefficients(&z.point, v);
            let order = p_line.iter().position(|c| !c.is_zero()).unwrap_or(p_line.len());
            let cols: Vec<Vec<Rational>> = monos.iter().map(|m| m.line_coefficients(&z.point, v)).collect();
            for k in 0..order.min(d as usize + 1) {
                if space.rank() + 1 < full.len() {
                    space.insert(cols.iter().map(|c| c[k].clone()).collect());
                }
            }
            jets.push(Jet {
                line: (0..=d as usize)
                    .map(|k| cols.iter().map(|c| to_f64(&c[k])).collect())
                    .collect(),
                p_line: p_line.iter().map(to_f64).collect(),
                order,
            });
        }
    }
    if space.rank() + 1 >= full.len() {
        report.jet_certificate = true;
        report.search_dimension = 1;
        return Ok(report);
    }

    // search space
    let (basis_idx, null) = if pw.is_even_in_each_variable() {
        report.basis = PolyBasis::Even;
        let idx: Vec<usize> = (0..full.len()).filter(|&j| full[j].is_even()).collect();
        let null = restricted_null_space(&zeros, &pw, &monos, &idx, n);
        (idx, null)
    } else {
        ((0..full.len()).collect::<Vec<_>>(), space.null_space())
    };
    let basis: Vec<Monomial> = basis_idx.iter().map(|&j| full[j].clone()).collect();
    let pc: Vec<f64> = pw.coefficients_on(&basis);
    let u = orthonormal_basis(&pc, &null);
    report.search_dimension = u.len();
    if u.len() <= 1 {
        return Ok(report);
    }

    let mut rows = Rows::new(&u);
    for y in sphere::sample_points(n, cfg.budget.lp_samples.max(1), cfg.seed) {
        rows.add_point(&y, &basis, &np);
    }
    for z in &minima {
        rows.add_rings(z, &RING_RADII, &basis, &np);
    }
    for jet in &jets {
        rows.add_jet(jet, &basis_idx, d as usize);
    }

    let k = u.len();
    let mut orng = sphere::rng_stream(cfg.seed, 7);
    let objectives: Vec<Vec<f64>> = (0..cfg.budget.lp_directions.max(1))
        .map(|_| {
            let mut c = vec![0.0];
            c.extend(sphere::random_unit(&mut orng, k - 1));
            c
        })
        .collect();
    let nulls_f: Vec<Vec<f64>> = null.iter().map(|v| v.iter().map(to_f64).collect()).collect();
    let verify = Verifier {
        pw: &pw,
        pc: &pc,
        basis: &basis,
        null: &null,
        nulls_f: &nulls_f,
        cfg,
    };

    report.verdict = ExtremalityVerdict::Inconclusive;
    let mut term_pass_done = false;
    for round in 0..=cfg.budget.cutting_rounds {
        report.rounds = round + 1;
        let mut lp = Simplex::new(rows.g.clone(), rows.h.clone(), vec![0.0; k]);
        let mut found: Vec<(f64, Vec<f64>)> = Vec::new();
        for c in &objectives {
            let sol = lp.maximize(c);
            let obj = match sol.status {
                LpStatus::Unbounded => f64::INFINITY,
                _ => sol.objective,
            };
            found.push((obj, sol.w));
        }
        let max_dev = found.iter().map(|f| f.0).fold(0.0, f64::max);
        report.max_deviation = max_dev;
        if max_dev <= tol {
            report.verdict = ExtremalityVerdict::ExtremalUpToTol;
            return Ok(report);
        }
        if !term_pass_done {
            term_pass_done = true;
            if let Some((witness, check)) = verify.single_terms(tol) {
                report.verdict = ExtremalityVerdict::NotExtremal;
                report.witness = Some(witness.scale(&scale.recip()));
                report.witness_check = Some(check);
                return Ok(report);
            }
        }
        found.retain(|f| f.0 > tol && f.0.is_finite());
        found.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| sphere::lex_cmp(&a.1, &b.1)));
        let mut tried: Vec<Vec<f64>> = Vec::new();
        let mut cuts: Vec<Vec<f64>> = Vec::new();
        for (_, w) in &found {
            if tried.len() >= 4 {
                break;
            }
            if tried.iter().any(|t| sphere::norm(&sub(t, w)) < 1e-9) {
                continue;
            }
            tried.push(w.clone());
            let q: Vec<f64> = (0..basis.len()).map(|j| (0..k).map(|i| w[i] * u[i][j]).sum()).collect();
            match verify.run(&q, tol) {
                Ok((witness, check)) => {
                    report.verdict = ExtremalityVerdict::NotExtremal;
                    report.witness = Some(witness.scale(&scale.recip()));
                    report.witness_check = Some(check);
                    return Ok(report);
                }
                Err(points) => cuts.extend(points),
            }
        }
        for y in &cuts {
            rows.add_point(y, &basis, &np);
            rows.add_rings(y, &RING_RADII[1..], &basis, &np);
        }
    }
    Ok(report)
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Nonzero vectors of `{-1, 0, 1}^n` with first nonzero entry positive,
/// plus a few skew directions in three variables.
fn standard_directions(n: usize) -> Vec<Vec<Rational>> {
    let mut out = sign_cube(n);
    if n == 3 {
        for v in [[1, 2, 0], [2, 1, 0], [1, 0, 2], [0, 1, 2], [1, 2, 3], [3, 1, 2], [2, 3, 1]] {
            out.push(v.iter().map(|&x| rat(x)).collect());
        }
    }
    out
}

fn sign_cube(n: usize) -> Vec<Vec<Rational>> {
    let total = 3usize.pow(n as u32);
    let mut out = Vec::new();
    for code in 1..total {
        let mut c = code;
        let v: Vec<i64> = (0..n)
            .map(|_| {
                let d = (c % 3) as i64 - 1;
                c /= 3;
                d
            })
            .collect();
        if v.iter().find(|&&x| x != 0) == Some(&1) {
            out.push(v.into_iter().map(rat).collect());
        }
    }
    out
}

fn is_exact_zero(p: &HomoPoly, grad: &[HomoPoly], z: &[Rational]) -> bool {
    z.iter().any(|c| !c.is_zero()) && p.eval_exact(z).is_zero() && grad.iter().all(|g| g.eval_exact(z).is_zero())
}

/// Integer vector with coprime entries, first nonzero entry positive.
fn primitive(z: &[Rational]) -> Vec<Rational> {
    let lcm = z.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = z.iter().map(|c| (c * Rational::from(lcm.clone())).to_integer()).collect();
    let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if let Some(first) = ints.iter().find(|c| !c.is_zero()) {
        if first.is_negative() {
            g = -g;
        }
    }
    ints.into_iter().map(|c| Rational::from(c / &g)).collect()
}

/// Rounds `z / max|z_i|` coordinatewise.
fn round_vector(z: &[f64], max_den: i128, tol: f64) -> Option<Vec<Rational>> {
    let m = z.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    if m == 0.0 {
        return None;
    }
    z.iter().map(|x| round_rational(x / m, max_den, tol)).collect()
}

fn exact_zeros(pw: &HomoPoly, np: &NumericPoly, minima: &[Vec<f64>]) -> Vec<ExactZero> {
    let n = pw.nvars();
    let grad = pw.gradient();
    let mut out: Vec<ExactZero> = Vec::new();
    let push = |z: Vec<Rational>, extra: Vec<Vec<Rational>>, out: &mut Vec<ExactZero>| {
        let z = primitive(&z);
        if out.len() < MAX_ZEROS && !out.iter().any(|o| o.point == z) {
            out.push(ExactZero {
                point: z,
                extra_dirs: extra,
            });
        }
    };
    if n <= 6 {
        for z in sign_cube(n) {
            if is_exact_zero(pw, &grad, &z) {
                push(z, Vec::new(), &mut out);
            }
        }
    }
    for z in minima {
        // high-order zeros are located poorly in floating point, so the last
        // rungs use small denominators with a loose tolerance
        for (den, tol) in [(1000, 1e-9), (1000, 1e-6), (1000, 1e-4), (1000, 1e-3), (24, 1e-2), (12, 3e-2)] {
            if let Some(c) = round_vector(z, den, tol) {
                if is_exact_zero(pw, &grad, &c) {
                    push(c, Vec::new(), &mut out);
                    break;
                }
            }
        }
        if n == 3 {
            if let Some((c, extra)) = snap_to_plane(pw, &grad, np, z) {
                push(c, extra, &mut out);
            }
        }
    }
    out
}

/// Zeros along a rational plane: `P` vanishes to second order across it,
/// so its Hessian there has rank one with the plane normal as range.
fn snap_to_plane(
    pw: &HomoPoly,
    grad: &[HomoPoly],
    np: &NumericPoly,
    z: &[f64],
) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
    let (_, _, h) = np.eval_hessian(z);
    let eig = SymmetricEigen::new(DMatrix::from_row_slice(3, 3, &h));
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let (l1, l2) = (eig.eigenvalues[order[0]], eig.eigenvalues[order[1]]);
    if l1 <= 1e-10 || l2.abs() > 1e-6 * l1 {
        return None;
    }
    let normal: Vec<f64> = (0..3).map(|i| eig.eigenvectors[(i, order[0])]).collect();
    let zr = round_vector(z, 1000, 1e-2)?;
    for tol in [1e-6, 1e-4, 1e-3] {
        let Some(nr) = round_vector(&normal, 100, tol) else {
            continue;
        };
        let nn: Rational = nr.iter().map(|x| x * x).sum();
        let nz: Rational = nr.iter().zip(&zr).map(|(a, b)| a * b).sum();
        let f = nz / nn;
        let proj: Vec<Rational> = zr.iter().zip(&nr).map(|(a, b)| a - &f * b).collect();
        if is_exact_zero(pw, grad, &proj) {
            let extra = (0..3)
                .map(|i| {
                    let mut e = vec![Rational::zero(); 3];
                    e[i] = Rational::one();
                    vec![
                        &nr[1] * &e[2] - &nr[2] * &e[1],
                        &nr[2] * &e[0] - &nr[0] * &e[2],
                        &nr[0] * &e[1] - &nr[1] * &e[0],
                    ]
                })
                .filter(|v: &Vec<Rational>| v.iter().any(|x| !x.is_zero()))
                .collect();
            return Some((proj, extra));
        }
    }
    None
}

fn restricted_null_space(
    zeros: &[ExactZero],
    pw: &HomoPoly,
    monos: &[HomoPoly],
    idx: &[usize],
    n: usize,
) -> Vec<Vec<Rational>> {
    let mut space = ExactRowSpace::new(idx.len());
    let sub: Vec<&HomoPoly> = idx.iter().map(|&j| &monos[j]).collect();
    for z in zeros {
        for v in standard_directions(n).iter().chain(&z.extra_dirs) {
            let p_line = pw.line_coefficients(&z.point, v);
            let order = p_line.iter().position(|c| !c.is_zero()).unwrap_or(p_line.len());
            let cols: Vec<Vec<Rational>> = sub.iter().map(|m| m.line_coefficients(&z.point, v)).collect();
            for k in 0..order.min(p_line.len()) {
                if space.rank() + 1 < idx.len() {
                    space.insert(cols.iter().map(|c| c[k].clone()).collect());
                }
            }
        }
    }
    space.null_space()
}

/// Orthonormal basis of `span(p, null)` with `p / |p|` first.
fn orthonormal_basis(p: &[f64], null: &[Vec<Rational>]) -> Vec<Vec<f64>> {
    let mut u: Vec<Vec<f64>> = Vec::new();
    let mut first = p.to_vec();
    sphere::normalize(&mut first);
    u.push(first);
    for v in null {
        let mut w: Vec<f64> = v.iter().map(to_f64).collect();
        let orig = sphere::norm(&w);
        for _ in 0..2 {
            for b in &u {
                let d = sphere::dot(&w, b);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
        }
        if sphere::normalize(&mut w) > 1e-9 * orig {
            u.push(w);
        }
    }
    u
}

fn monomial_values(basis: &[Monomial], y: &[f64]) -> Vec<f64> {
    basis
        .iter()
        .map(|m| m.exponents().iter().zip(y).map(|(&e, v)| v.powi(e as i32)).product())
        .collect()
}

struct Rows<'a> {
    u: &'a [Vec<f64>],
    g: Vec<Vec<f64>>,
    h: Vec<f64>,
}

impl<'a> Rows<'a> {
    fn new(u: &'a [Vec<f64>]) -> Self {
        Rows {
            u,
            g: Vec::new(),
            h: Vec::new(),
        }
    }

    /// `0 <= row . q <= upper` in the reduced coordinates.
    fn add_pair(&mut self, row: &[f64], upper: f64) {
        let a: Vec<f64> = self.u.iter().map(|b| sphere::dot(b, row)).collect();
        let na = sphere::norm(&a);
        // near a high-order zero the projected row is pure cancellation noise
        if na < 1e-14 || na < 1e-10 * sphere::norm(row) {
            return;
        }
        self.g.push(a.iter().map(|x| -x / na).collect());
        self.h.push(0.0);
        self.g.push(a.iter().map(|x| x / na).collect());
        self.h.push(upper.max(0.0) / na);
    }

    fn add_point(&mut self, y: &[f64], basis: &[Monomial], np: &NumericPoly) {
        self.add_pair(&monomial_values(basis, y), np.eval(y));
    }

    fn add_rings(&mut self, z: &[f64], radii: &[f64], basis: &[Monomial], np: &NumericPoly) {
        let t = sphere::tangent_basis(z);
        let mut dirs: Vec<Vec<f64>> = Vec::new();
        for (a, ta) in t.iter().enumerate() {
            dirs.push(ta.clone());
            dirs.push(ta.iter().map(|x| -x).collect());
            for tb in &t[a + 1..] {
                for (s, r) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                    dirs.push(ta.iter().zip(tb).map(|(x, y)| s * x + r * y).collect());
                }
            }
        }
        for &r in radii {
            for dir in &dirs {
                let mut y: Vec<f64> = z.iter().zip(dir).map(|(a, b)| a + r * b).collect();
                sphere::normalize(&mut y);
                self.add_point(&y, basis, np);
            }
        }
    }

    /// Along a line where `P` vanishes to even order `k0`, `Q / s^k0` is
    /// squeezed between 0 and `P / s^k0`, including at `s = 0`.
    fn add_jet(&mut self, jet: &Jet, idx: &[usize], d: usize) {
        if jet.order > d || jet.order % 2 != 0 {
            return;
        }
        for &r in &JET_RADII {
            for sign in [1.0, -1.0] {
                if r == 0.0 && sign < 0.0 {
                    continue;
                }
                let s = sign * r;
                let mut row = vec![0.0; idx.len()];
                let mut upper = 0.0;
                for k in jet.order..=d {
                    let w = s.powi((k - jet.order) as i32);
                    for (c, &j) in row.iter_mut().zip(idx) {
                        *c += w * jet.line[k][j];
                    }
                    upper += w * jet.p_line[k];
                }
                self.add_pair(&row, upper);
            }
        }
    }
}

struct Verifier<'a> {
    pw: &'a HomoPoly,
    pc: &'a [f64],
    basis: &'a [Monomial],
    null: &'a [Vec<Rational>],
    nulls_f: &'a [Vec<f64>],
    cfg: &'a RunConfig,
}

impl Verifier<'_> {
    /// Shrinks the LP candidate towards `P / 2`, moves it exactly into the
    /// jet-admissible space with rational coordinates and checks both
    /// `Q >= 0` and `P - Q >= 0` globally. On failure returns the points
    /// where either went negative.
    fn run(&self, q: &[f64], tol: f64) -> std::result::Result<(HomoPoly, WitnessCheck), Vec<Vec<f64>>> {
        let nb = self.basis.len();
        let m = DMatrix::from_fn(nb, self.nulls_f.len(), |i, j| self.nulls_f[j][i]);
        let svd = m.svd(true, true);
        let mut bad: Vec<Vec<f64>> = Vec::new();
        let mut pn = self.pc.to_vec();
        sphere::normalize(&mut pn);
        for theta in [0.0, 0.25, 0.5] {
            let qt: Vec<f64> = q
                .iter()
                .zip(self.pc)
                .map(|(a, b)| (1.0 - theta) * a + 0.5 * theta * b)
                .collect();
            let Ok(r) = svd.solve(&DVector::from_vec(qt), 1e-12) else {
                continue;
            };
            let mut roundings: Vec<Vec<Rational>> = [(100, 1e-4), (10_000, 1e-8)]
                .iter()
                .filter_map(|&(den, t)| r.iter().map(|&x| round_rational(x, den, t)).collect())
                .collect();
            roundings.push(r.iter().map(|&x| from_f64_exact(x)).collect());
            for coords in roundings {
                let mut coef = vec![Rational::zero(); nb];
                for (c, v) in coords.iter().zip(self.null) {
                    if c.is_zero() {
                        continue;
                    }
                    for (x, y) in coef.iter_mut().zip(v) {
                        *x += c * y;
                    }
                }
                let Ok(cand) = HomoPoly::from_terms(
                    self.pw.nvars(),
                    self.pw.degree(),
                    self.basis.iter().zip(coef).map(|(b, c)| (b.exponents().to_vec(), c)),
                ) else {
                    continue;
                };
                match self.check(&cand, &pn, tol) {
                    Some(Ok(check)) => return Ok((cand, check)),
                    Some(Err(points)) => bad.extend(points),
                    None => {}
                }
            }
        }
        Err(bad)
    }

    /// `None` when `cand` is (numerically) a multiple of `P`.
    fn check(&self, cand: &HomoPoly, pn: &[f64], tol: f64) -> Option<std::result::Result<WitnessCheck, Vec<Vec<f64>>>> {
        let budget = self.cfg.verify_budget();
        let ntol = self.cfg.tol.nonneg;
        let cf = cand.coefficients_on(self.basis);
        let along = sphere::dot(&cf, pn);
        let ortho: Vec<f64> = cf.iter().zip(pn).map(|(a, b)| a - along * b).collect();
        if sphere::norm(&ortho) < tol {
            return None;
        }
        let rest = self.pw.minus(cand);
        let (Ok(a), Ok(b)) = (nonneg_check(cand, ntol, &budget), nonneg_check(&rest, ntol, &budget)) else {
            return None;
        };
        if a.is_nonnegative() && b.is_nonnegative() {
            return Some(Ok(WitnessCheck {
                q_min: a.min_value,
                p_minus_q_min: b.min_value,
                budget,
            }));
        }
        let mut bad = Vec::new();
        if !a.is_nonnegative() {
            bad.push(a.argmin);
        }
        if !b.is_nonnegative() {
            bad.push(b.argmin);
        }
        Some(Err(bad))
    }

    /// Tries each positive even term of `P` (a square monomial) as `Q`.
    fn single_terms(&self, tol: f64) -> Option<(HomoPoly, WitnessCheck)> {
        let mut pn = self.pc.to_vec();
        sphere::normalize(&mut pn);
        for (m, c) in self.pw.terms() {
            if !m.is_even() || !c.is_positive() {
                continue;
            }
            let cand = HomoPoly::monomial(m.exponents(), c.clone());
            if let Some(Ok(check)) = self.check(&cand, &pn, tol) {
                return Some((cand, check));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elastic::fixtures;

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    #[test]
    fn cyclic_sextic_has_a_jet_certificate() {
        let r = poly_extremality(&fixtures::cyclic_sextic(), &cfg()).unwrap();
        assert_eq!(r.verdict, ExtremalityVerdict::ExtremalUpToTol);
        assert!(r.jet_certificate);
        assert_eq!(r.exact_zeros.len(), 7);
    }

    #[test]
    fn product_sextic_is_extremal() {
        let r = poly_extremality(&fixtures::product_sextic(), &cfg()).unwrap();
        assert_eq!(r.verdict, ExtremalityVerdict::ExtremalUpToTol, "{r:?}");
    }

    #[test]
    fn sum_of_sixth_powers_is_not_extremal() {
        let p = HomoPoly::from_i64(3, 6, &[(&[6, 0, 0], 1), (&[0, 6, 0], 1)]).unwrap();
        let r = poly_extremality(&p, &cfg()).unwrap();
        assert_eq!(r.verdict, ExtremalityVerdict::NotExtremal, "{r:?}");
        let q = r.witness.unwrap();
        let b = SphereBudget::default();
        assert!(nonneg_check(&q, 1e-9, &b).unwrap().is_nonnegative());
        assert!(nonneg_check(&p.sub(&q).unwrap(), 1e-9, &b).unwrap().is_nonnegative());
    }

    #[test]
    fn perturbed_cyclic_sextic_is_not_extremal() {
        let p = fixtures::cyclic_sextic()
            .add(&HomoPoly::from_i64(3, 6, &[(&[6, 0, 0], 1)]).unwrap())
            .unwrap();
        let r = poly_extremality(&p, &cfg()).unwrap();
        assert_eq!(r.verdict, ExtremalityVerdict::NotExtremal, "{r:?}");
    }

    #[test]
    fn preconditions() {
        assert!(matches!(
            poly_extremality(&HomoPoly::zero(3, 6), &cfg()),
            Err(Error::Precondition(_))
        ));
        let neg = HomoPoly::from_i64(3, 2, &[(&[2, 0, 0], 1), (&[0, 2, 0], -1)]).unwrap();
        assert!(matches!(poly_extremality(&neg, &cfg()), Err(Error::Precondition(_))));
    }

    #[test]
    fn primitive_vectors() {
        let z = vec![crate::rational::ratio(-1, 2), rat(0), crate::rational::ratio(3, 4)];
        assert_eq!(primitive(&z), vec![rat(2), rat(0), rat(-3)]);
    }
}
