//! Acceptance battery. Runs without the libtest harness so every criterion
//! prints a PASS/FAIL line; exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use elastica::elastic::{
    acoustic_matrix, fixtures, rank_one_convexity, subtracted_det_identity_check, OrthotropicConstants,
    QuadraticForm, RankOneForm, StiffnessTensor,
};
use elastica::extremal::{form_extremality, poly_extremality, ExtremalityVerdict};
use elastica::linalg::brunn_minkowski_slack;
use elastica::poly::{perfect_square_check, SquareVerdict};
use elastica::rational::{rat, ratio};
use elastica::translation::{fourier_quasiconvexity_check, modal_energy, PeriodicField};
use elastica::{HomoPoly, Rational, RunConfig};
use nalgebra::{Matrix3, SymmetricEigen};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FIXTURE_SECONDS: f64 = 1.0;
const IDENTITY_CASES: usize = 100;
const IDENTITY_SECONDS: f64 = 30.0;
const BM_PAIRS: usize = 100_000;
const BM_SLACK: f64 = -1e-10;
const POLY_DEVIATION: f64 = 1e-6;
const POLY_SECONDS: f64 = 120.0;
const SQUARE_CASES: usize = 100;
const FORM_WITNESS_T: f64 = 1.0 - 1e-9;
const FORM_MAX_T: f64 = 1e-4;
const FORM_MIN_STARTS: usize = 200;
const FORM_SECONDS: f64 = 300.0;
const R1C_LOW: f64 = -1e-9;
const R1C_HIGH: f64 = 1e-6;
const R1C_DIRECTION: f64 = 1e-3;
const FIELDS: usize = 1_000;
const FOURIER_REL: f64 = 1e-8;
/// Independent sampling oracle for `0 <= q <= p`, relative to `|p|`.
const SAMPLE_SLACK: f64 = 1e-9;

type Check = fn() -> Result<String, String>;

fn main() {
    let criteria: [(u32, &str, Check); 9] = [
        (1, "exact determinant fixtures", c1),
        (2, "subtracted determinant identity", c2),
        (3, "determinant inequality", c3),
        (4, "polynomial extremality", c4),
        (5, "perfect squares", c5),
        (6, "form extremality", c6),
        (7, "rank-one convexity minimum", c7),
        (8, "Fourier energy of periodic fields", c8),
        (9, "deterministic reports", c9),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {id} ({name}): PASS [{secs:.2}s] {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id} ({name}): FAIL [{secs:.2}s] {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: f64, what: &str) -> Result<(), String> {
    ensure(
        elapsed.as_secs_f64() <= limit,
        format!("{what} took {:.2}s, limit {limit}s", elapsed.as_secs_f64()),
    )
}

fn poly(terms: &[(&[u32], i64)]) -> HomoPoly {
    let deg = terms[0].0.iter().sum();
    HomoPoly::from_i64(terms[0].0.len(), deg, terms).unwrap()
}

/// `y1^4 y2^2 + y2^4 y3^2 + y3^4 y1^2 - 3 y1^2 y2^2 y3^2`, typed in by hand.
fn sextic() -> HomoPoly {
    poly(&[(&[4, 2, 0], 1), (&[0, 4, 2], 1), (&[2, 0, 4], 1), (&[2, 2, 2], -3)])
}

/// Exchanges the exponents of variables `i` and `j`.
fn swap_vars(p: &HomoPoly, i: usize, j: usize) -> HomoPoly {
    let terms: Vec<(Vec<u32>, Rational)> = p
        .terms()
        .map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            e.swap(i, j);
            (e, c.clone())
        })
        .collect();
    HomoPoly::from_terms(p.nvars(), p.degree(), terms).unwrap()
}

fn det3(m: &[[Rational; 3]; 3]) -> Rational {
    let minor = |i: usize, j: usize, k: usize, l: usize| &m[i][k] * &m[j][l] - &m[i][l] * &m[j][k];
    &m[0][0] * minor(1, 2, 1, 2) - &m[0][1] * minor(1, 2, 0, 2) + &m[0][2] * minor(1, 2, 0, 1)
}

/// `T_ik(y) = sum_jl y_j G[3i+j][3k+l] y_l`, straight from the Gram matrix.
fn acoustic_at(f: &QuadraticForm, y: &[Rational; 3]) -> [[Rational; 3]; 3] {
    std::array::from_fn(|i| {
        std::array::from_fn(|k| {
            let mut s = Rational::zero();
            for j in 0..3 {
                for l in 0..3 {
                    s += &y[j] * f.gram(3 * i + j, 3 * k + l) * &y[l];
                }
            }
            s
        })
    })
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.random_range(-9..=9), rng.random_range(1..=5))
}

/// The determinant polynomial of `f` agrees with the pointwise determinant
/// at random rational points.
fn pointwise_det_agrees(f: &QuadraticForm, det: &HomoPoly, rng: &mut ChaCha8Rng) -> bool {
    (0..20).all(|_| {
        let y: [Rational; 3] = std::array::from_fn(|_| small_rational(rng));
        det.eval_exact(&y) == det3(&acoustic_at(f, &y))
    })
}

fn c1() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let diag = QuadraticForm::from_terms(&[
        ((0, 0), (0, 0), rat(1)),
        ((1, 1), (1, 1), rat(1)),
        ((2, 2), (2, 2), rat(1)),
    ]);
    let two = QuadraticForm::from_terms(&[((0, 0), (0, 0), rat(1)), ((1, 1), (1, 1), rat(1))]);
    let one = rat(1);
    let m2 = rat(-2);
    let q = QuadraticForm::from_terms(&[
        ((0, 0), (0, 0), one.clone()),
        ((1, 1), (1, 1), one.clone()),
        ((2, 2), (2, 2), one.clone()),
        ((0, 0), (1, 1), m2.clone()),
        ((0, 0), (2, 2), m2.clone()),
        ((1, 1), (2, 2), m2),
        ((0, 1), (0, 1), one.clone()),
        ((1, 2), (1, 2), one.clone()),
        ((2, 0), (2, 0), one),
    ]);
    ensure(q == fixtures::cyclic_extremal_form(), "hand-built form differs from the library fixture")?;

    let t = Instant::now();
    let d1 = acoustic_matrix(&diag).det();
    within(t.elapsed(), FIXTURE_SECONDS, "diagonal determinant")?;
    ensure(d1 == poly(&[(&[2, 2, 2], 1)]), format!("diagonal: {d1}"))?;
    ensure(pointwise_det_agrees(&diag, &d1, &mut rng), "diagonal pointwise")?;

    let t = Instant::now();
    let d2 = acoustic_matrix(&two).det();
    within(t.elapsed(), FIXTURE_SECONDS, "two-axis determinant")?;
    ensure(d2.is_zero(), format!("two-axis: {d2}"))?;
    ensure(pointwise_det_agrees(&two, &d2, &mut rng), "two-axis pointwise")?;

    let t = Instant::now();
    let d4 = acoustic_matrix(&q).det();
    within(t.elapsed(), FIXTURE_SECONDS, "cyclic determinant")?;
    ensure(d4 == swap_vars(&sextic(), 1, 2), format!("cyclic: {d4}"))?;
    ensure(pointwise_det_agrees(&q, &d4, &mut rng), "cyclic pointwise")?;
    Ok(format!("det(Q) = {d4}"))
}

fn c2() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let start = Instant::now();
    for case in 0..IDENTITY_CASES {
        let c = StiffnessTensor::orthotropic(&OrthotropicConstants::from_array(std::array::from_fn(|_| {
            small_rational(&mut rng)
        })));
        let b = RankOneForm::new(std::array::from_fn(|_| std::array::from_fn(|_| small_rational(&mut rng))));
        let t = small_rational(&mut rng);
        let f = c.form();
        ensure(subtracted_det_identity_check(&f, &b, &t), format!("polynomial identity fails in case {case}"))?;
        // matrix determinant lemma at a rational point
        let y: [Rational; 3] = std::array::from_fn(|_| small_rational(&mut rng));
        let tm = acoustic_at(&f, &y);
        let l: [Rational; 3] = std::array::from_fn(|i| (0..3).map(|j| &b.b[i][j] * &y[j]).sum());
        let sub: [[Rational; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|k| &tm[i][k] - &t * &l[i] * &l[k]));
        let cof = |i: usize, j: usize| {
            let r0: Vec<usize> = [0, 1, 2].iter().copied().filter(|&r| r != i).collect();
            let c0: Vec<usize> = [0, 1, 2].iter().copied().filter(|&c| c != j).collect();
            let m = &tm[r0[0]][c0[0]] * &tm[r0[1]][c0[1]] - &tm[r0[0]][c0[1]] * &tm[r0[1]][c0[0]];
            if (i + j) % 2 == 0 {
                m
            } else {
                -m
            }
        };
        let mut quad = Rational::zero();
        for i in 0..3 {
            for j in 0..3 {
                quad += &l[i] * &l[j] * cof(i, j);
            }
        }
        ensure(det3(&sub) == det3(&tm) - &t * quad, format!("pointwise identity fails in case {case}"))?;
    }
    within(start.elapsed(), IDENTITY_SECONDS, "identity cases")?;
    Ok(format!("{IDENTITY_CASES} cases exact"))
}

fn c3() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    // Gaussian vectors rounded to 2^-10 keep every entry and sum exact.
    let psd = |rng: &mut ChaCha8Rng| {
        let rank = rng.random_range(0..=3);
        let mut m = [[0.0f64; 3]; 3];
        for _ in 0..rank {
            let v: [f64; 3] = std::array::from_fn(|_| (rng.random_range(-4.0f64..4.0) * 1024.0).round() / 1024.0);
            for i in 0..3 {
                for j in 0..3 {
                    m[i][j] += v[i] * v[j];
                }
            }
        }
        m
    };
    let mut worst = f64::INFINITY;
    for _ in 0..BM_PAIRS {
        let a = psd(&mut rng);
        let b = psd(&mut rng);
        let s = brunn_minkowski_slack(&a, &b).map_err(|e| e.to_string())?;
        worst = worst.min(s);
    }
    ensure(worst >= BM_SLACK, format!("worst slack {worst:e}"))?;
    Ok(format!("worst slack {worst:e} over {BM_PAIRS} pairs"))
}

/// Dense-sampling oracle for `0 <= q <= p` on the unit sphere.
fn dominated(p: &HomoPoly, q: &HomoPoly) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let scale = p.coefficient_norm();
    (0..200_000).all(|_| {
        let mut y: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
        y.iter_mut().for_each(|v| *v /= n);
        let (pv, qv) = (p.eval(&y), q.eval(&y));
        qv >= -SAMPLE_SLACK * scale && pv - qv >= -SAMPLE_SLACK * scale
    })
}

fn proportional(p: &HomoPoly, q: &HomoPoly) -> bool {
    let Some((m, c)) = p.leading_term() else {
        return q.is_zero();
    };
    let r = q.coefficient(m.exponents()) / c;
    p.scale(&r) == *q
}

fn not_extremal(p: &HomoPoly, cfg: &RunConfig, label: &str) -> Result<String, String> {
    let r = poly_extremality(p, cfg).map_err(|e| e.to_string())?;
    ensure(r.verdict == ExtremalityVerdict::NotExtremal, format!("{label}: {:?}", r.verdict))?;
    let w = r.witness.ok_or(format!("{label}: no witness"))?;
    ensure(dominated(p, &w), format!("{label}: witness {w} not dominated"))?;
    ensure(!proportional(p, &w) && !w.is_zero(), format!("{label}: witness {w} is a multiple"))?;
    Ok(format!("{label} witness {w}"))
}

fn c4() -> Result<String, String> {
    let cfg = RunConfig::default();
    let start = Instant::now();
    let p = sextic();
    let r = poly_extremality(&p, &cfg).map_err(|e| e.to_string())?;
    ensure(r.verdict == ExtremalityVerdict::ExtremalUpToTol, format!("P: {:?}", r.verdict))?;
    ensure(r.max_deviation <= POLY_DEVIATION, format!("P deviation {:e}", r.max_deviation))?;
    // the zeros reported are zeros
    for z in &r.exact_zeros {
        let y: Vec<Rational> = z.iter().map(|s| elastica::rational::parse_rational(s).unwrap()).collect();
        ensure(p.eval_exact(&y).is_zero(), format!("reported zero {z:?} is not a zero"))?;
    }
    let sixth = poly(&[(&[6, 0, 0], 1), (&[0, 6, 0], 1)]);
    let a = not_extremal(&sixth, &cfg, "y1^6+y2^6")?;
    let bumped = p.add(&poly(&[(&[6, 0, 0], 1)])).unwrap();
    let b = not_extremal(&bumped, &cfg, "P+y1^6")?;
    within(start.elapsed(), POLY_SECONDS, "polynomial extremality")?;
    Ok(format!("P deviation {:e}; {a}; {b}", r.max_deviation))
}

fn c5() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cubics = elastica::poly::monomials_of_degree(3, 3);
    for case in 0..SQUARE_CASES {
        let q = loop {
            let mut terms: Vec<(Vec<u32>, Rational)> = Vec::new();
            for m in &cubics {
                if rng.random_bool(0.5) {
                    terms.push((m.exponents().to_vec(), small_rational(&mut rng)));
                }
            }
            let q = HomoPoly::from_terms(3, 3, terms).unwrap();
            if !q.is_zero() {
                break q;
            }
        };
        let sq = q.mul(&q).unwrap();
        let r = perfect_square_check(&sq, 1e-8).map_err(|e| e.to_string())?;
        match r.verdict {
            SquareVerdict::Square { root, scale, exact } => {
                ensure(exact, format!("case {case}: inexact"))?;
                ensure(root.mul(&root).unwrap().scale(&scale) == sq, format!("case {case}: recovery"))?;
                ensure(proportional(&q, &root), format!("case {case}: root {root} vs {q}"))?;
            }
            SquareVerdict::NotSquare => return Err(format!("case {case}: {q} squared not recognised")),
        }
    }
    let r = perfect_square_check(&sextic(), 1e-8).map_err(|e| e.to_string())?;
    ensure(!r.is_square(), "P classified square")?;
    Ok(format!("{SQUARE_CASES} squares recovered; P residual {:e}", r.residual))
}

fn c6() -> Result<String, String> {
    let cfg = RunConfig::default();
    let start = Instant::now();
    let r = form_extremality(&fixtures::diagonal_form(), &cfg).map_err(|e| e.to_string())?;
    ensure(r.verdict == ExtremalityVerdict::NotExtremal, format!("diagonal: {:?}", r.verdict))?;
    let w = r.witness.ok_or("diagonal: no witness")?;
    let mut e11 = [[0.0; 3]; 3];
    e11[0][0] = 1.0;
    let off: f64 = (0..9).map(|k| (w.b[k / 3][k % 3].abs() - e11[k / 3][k % 3]).powi(2)).sum::<f64>().sqrt();
    ensure(off < 1e-6, format!("witness B is not e1 e1: {:?}", w.b))?;
    ensure(w.t >= FORM_WITNESS_T, format!("witness t {}", w.t))?;
    // independent re-check of f - t (B:xi)^2 on a grid of unit y
    let g = fixtures::diagonal_form().numeric().minus_rank_one(&w.b, w.t);
    let mut low = f64::INFINITY;
    for k in 0..20_000 {
        let z = 1.0 - 2.0 * (k as f64 + 0.5) / 20_000.0;
        let phi = k as f64 * 2.399_963_229_728_653;
        let s = (1.0 - z * z).sqrt();
        let y = [s * phi.cos(), s * phi.sin(), z];
        let t = g.acoustic_at(&y);
        let m = Matrix3::from_fn(|i, j| t[i][j]);
        low = low.min(SymmetricEigen::new(m).eigenvalues.min());
    }
    ensure(low >= -1e-9, format!("remainder not rank-one convex: {low:e}"))?;

    let r = form_extremality(&fixtures::cyclic_extremal_form(), &cfg).map_err(|e| e.to_string())?;
    ensure(r.verdict == ExtremalityVerdict::ExtremalUpToTol, format!("Q: {:?}", r.verdict))?;
    ensure(r.max_t <= FORM_MAX_T, format!("Q max t {:e}", r.max_t))?;
    ensure(r.starts >= FORM_MIN_STARTS, format!("only {} starts", r.starts))?;
    within(start.elapsed(), FORM_SECONDS, "form extremality")?;
    Ok(format!("diagonal t = {}; Q max t = {:e} over {} starts", w.t, r.max_t, r.starts))
}

fn c7() -> Result<String, String> {
    let cfg = RunConfig::default();
    ensure(sextic().eval(&[1.0, 1.0, 1.0]) == 0.0, "P(1,1,1) != 0")?;
    let r = rank_one_convexity(&fixtures::cyclic_extremal_form().numeric(), cfg.tol.rank_one, &cfg.sphere_budget());
    ensure(r.is_rank_one_convex(), "Q reported violated")?;
    ensure(
        (R1C_LOW..=R1C_HIGH).contains(&r.min_eigenvalue),
        format!("observed minimum {:e}", r.min_eigenvalue),
    )?;
    let d = 1.0 / 3f64.sqrt();
    let near = |y: &[f64; 3]| y.iter().all(|v| (v.abs() - d).abs() < R1C_DIRECTION);
    ensure(
        near(&r.witness_y) || r.minimizers.iter().any(|m| near(&m.y)),
        format!("no minimizer near (1,1,1)/sqrt3: {:?}", r.witness_y),
    )?;
    Ok(format!("minimum {:e} at {:?}", r.min_eigenvalue, r.witness_y))
}

fn c8() -> Result<String, String> {
    let cfg = RunConfig::default();
    let forms = [
        ("diagonal", fixtures::diagonal_form()),
        ("Q", fixtures::cyclic_extremal_form()),
        ("isotropic", StiffnessTensor::isotropic(rat(1), rat(1)).form()),
    ];
    let n = cfg.budget.grid;
    let mut worst = f64::INFINITY;
    for (name, f) in &forms {
        let r1c = rank_one_convexity(&f.numeric(), cfg.tol.rank_one, &cfg.sphere_budget());
        ensure(r1c.is_rank_one_convex(), format!("{name} is not rank-one convex"))?;
        for k in 0..FIELDS {
            let field = PeriodicField::random(n, 1000 + k as u64);
            let r = modal_energy(&f.numeric(), &field, FOURIER_REL);
            let rel = r.total / field.energy();
            worst = worst.min(rel);
            ensure(r.total >= -FOURIER_REL * field.energy(), format!("{name}, field {k}: S = {:e}", r.total))?;
        }
    }
    // single mode along the zero direction (1,1,1), amplitude from the
    // kernel of T(1,1,1)
    let q = fixtures::cyclic_extremal_form();
    let t = q.numeric().acoustic_at(&[1.0, 1.0, 1.0]);
    let eig = SymmetricEigen::new(Matrix3::from_fn(|i, j| t[i][j]));
    let k = eig.eigenvalues.imin();
    ensure(eig.eigenvalues[k].abs() < 1e-12, "T(1,1,1) is not singular")?;
    let x = [eig.eigenvectors[(0, k)], eig.eigenvectors[(1, k)], eig.eigenvectors[(2, k)]];
    let field = PeriodicField::plane_wave(16, x, [1, 1, 1]);
    let r = fourier_quasiconvexity_check(&q, &field, &cfg).map_err(|e| e.to_string())?;
    ensure(r.special, format!("single-mode field not special: {:?}", r.violating_modes))?;
    Ok(format!("worst S/|u|^2 = {worst:e} over {} fields; single mode special", 3 * FIELDS))
}

fn c9() -> Result<String, String> {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_elastica"))
            .args(["verify-fixtures", "--seed", "7"])
            .output()
            .map_err(|e| e.to_string())
    };
    let a = run()?;
    let b = run()?;
    ensure(a.status.success(), format!("verify-fixtures failed: {}", String::from_utf8_lossy(&a.stdout)))?;
    ensure(a.stdout == b.stdout, "reports differ")?;
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).map_err(|e| e.to_string())?;
    ensure(v["config"]["seed"] == 7, "config not embedded")?;
    ensure(v["version"] == env!("CARGO_PKG_VERSION"), "version not embedded")?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}
