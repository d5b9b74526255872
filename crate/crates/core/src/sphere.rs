//! Point sets and small geometry helpers on unit spheres.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministic child stream so independent tasks do not share state.
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn normalize(v: &mut [f64]) -> f64 {
    let n = norm(v);
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

pub fn random_unit<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        if normalize(&mut v) > 1e-12 {
            return v;
        }
    }
}

/// Fibonacci lattice of `count` nearly uniform points on S².
pub fn fibonacci(count: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// Uniformly random rotation of R³ (columns of a random orthogonal matrix
/// with determinant one).
pub fn random_rotation<R: Rng>(rng: &mut R) -> [[f64; 3]; 3] {
    let a = random_unit(rng, 3);
    let mut b = random_unit(rng, 3);
    let p = dot(&a, &b);
    b.iter_mut().zip(&a).for_each(|(x, y)| *x -= p * y);
    if normalize(&mut b) < 1e-8 {
        return random_rotation(rng);
    }
    let c = cross(&[a[0], a[1], a[2]], &[b[0], b[1], b[2]]);
    [[a[0], b[0], c[0]], [a[1], b[1], c[1]], [a[2], b[2], c[2]]]
}

pub fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Quasi-uniform sample of the unit sphere in R^n. For n = 3 this is a
/// randomly rotated Fibonacci lattice, otherwise normalized Gaussians.
pub fn sample_points(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    if n == 3 {
        let rot = random_rotation(&mut r);
        fibonacci(count)
            .into_iter()
            .map(|p| {
                (0..3)
                    .map(|i| rot[i][0] * p[0] + rot[i][1] * p[1] + rot[i][2] * p[2])
                    .collect()
            })
            .collect()
    } else {
        (0..count).map(|_| random_unit(&mut r, n)).collect()
    }
}

/// Orthonormal basis of the tangent space at unit `y`.
pub fn tangent_basis(y: &[f64]) -> Vec<Vec<f64>> {
    let n = y.len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n - 1);
    let mut order: Vec<usize> = (0..n).collect();
    // start from the coordinate axes least aligned with y
    order.sort_by(|&a, &b| y[a].abs().total_cmp(&y[b].abs()));
    for &k in &order {
        if basis.len() == n - 1 {
            break;
        }
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        let p = dot(&v, y);
        v.iter_mut().zip(y).for_each(|(a, b)| *a -= p * b);
        for b in &basis {
            let p = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(a, c)| *a -= p * c);
        }
        if normalize(&mut v) > 1e-6 {
            basis.push(v);
        }
    }
    basis
}

/// Flips `v` so its first entry with magnitude above `eps` is positive.
pub fn canonical_sign(v: &mut [f64], eps: f64) {
    if let Some(x) = v.iter().find(|x| x.abs() > eps) {
        if *x < 0.0 {
            v.iter_mut().for_each(|a| *a = -*a);
        }
    }
}

/// Total order used for deterministic tie-breaking between points.
pub fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// Compass search on the unit sphere: tries `+-step` along a tangent basis
/// (and its pairwise diagonals), moves on any improvement and halves the
/// step otherwise. Returns the final point and value.
pub fn pattern_search<F>(f: F, start: &[f64], step: f64, min_step: f64, max_evals: usize) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let mut y = start.to_vec();
    normalize(&mut y);
    let mut val = f(&y);
    let mut h = step;
    let mut evals = 1;
    while h > min_step && evals < max_evals {
        let basis = tangent_basis(&y);
        let mut dirs: Vec<Vec<f64>> = Vec::new();
        for (a, u) in basis.iter().enumerate() {
            dirs.push(u.clone());
            dirs.push(u.iter().map(|v| -v).collect());
            for w in &basis[a + 1..] {
                for (s, t) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                    dirs.push(u.iter().zip(w).map(|(p, q)| (s * p + t * q) / 2f64.sqrt()).collect());
                }
            }
        }
        let mut improved = false;
        for d in &dirs {
            let mut trial: Vec<f64> = y.iter().zip(d).map(|(a, b)| a + h * b).collect();
            normalize(&mut trial);
            let v = f(&trial);
            evals += 1;
            if v < val {
                y = trial;
                val = v;
                improved = true;
                break;
            }
        }
        if improved {
            h *= 1.5;
        } else {
            h *= 0.5;
        }
    }
    (y, val)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_points_are_unit_and_spread() {
        let pts = fibonacci(500);
        for p in &pts {
            assert!((norm(p) - 1.0).abs() < 1e-12);
        }
        let mean: Vec<f64> = (0..3).map(|i| pts.iter().map(|p| p[i]).sum::<f64>() / 500.0).collect();
        assert!(norm(&mean) < 1e-2);
    }

    #[test]
    fn rotation_is_orthogonal() {
        let r = random_rotation(&mut rng(7));
        for i in 0..3 {
            for j in 0..3 {
                let d: f64 = (0..3).map(|k| r[k][i] * r[k][j]).sum();
                assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tangent_basis_is_orthonormal() {
        let mut y = vec![0.3, -0.2, 0.9, 0.1];
        normalize(&mut y);
        let b = tangent_basis(&y);
        assert_eq!(b.len(), 3);
        for (i, u) in b.iter().enumerate() {
            assert!(dot(u, &y).abs() < 1e-12);
            for (j, v) in b.iter().enumerate() {
                assert!((dot(u, v) - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }
}
