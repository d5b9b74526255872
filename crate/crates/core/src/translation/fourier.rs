//! Energy of a periodic gradient field evaluated mode by mode.
//!
//! With `u(x) = sum_m u^(m) e^{2 pi i m.x}` the spectral gradient of mode
//! `m` is `i u^(m) (x) k`, `k = 2 pi m`, and the cell average of `f(grad u)`
//! equals `S = sum_{m != 0} f(Re u^(m) (x) k) + f(Im u^(m) (x) k)`.
//! Nyquist modes are dropped so the spectral gradient is real.

use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::PeriodicField;
use crate::config::RunConfig;
use crate::elastic::{rank_one_convexity, NumericForm, QuadraticForm};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeTerm {
    pub mode: [i64; 3],
    pub term: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierReport {
    /// `S`, the cell average of `f(grad u)`.
    pub total: f64,
    /// Cell average of `|u|^2`.
    pub field_energy: f64,
    /// `S >= -tol * field_energy`.
    pub nonnegative: bool,
    /// Every modewise term is at most `tol * field_energy`.
    pub special: bool,
    pub violating_count: usize,
    /// Largest violating terms, at most 64.
    pub violating_modes: Vec<ModeTerm>,
    pub tol: f64,
}

/// Neumaier compensated sum, in slice order.
fn compensated_sum(xs: &[f64]) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for &x in xs {
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    s + c
}

fn fft3(data: &mut [Complex<f64>], n: usize, fft: &Arc<dyn Fft<f64>>) {
    for row in data.chunks_exact_mut(n) {
        fft.process(row);
    }
    let mut line = vec![Complex::new(0.0, 0.0); n];
    for stride in [n, n * n] {
        for base in 0..n * n * n {
            // first element of each line along this axis
            if (base / stride) % n != 0 {
                continue;
            }
            for (t, l) in line.iter_mut().enumerate() {
                *l = data[base + t * stride];
            }
            fft.process(&mut line);
            for (t, l) in line.iter().enumerate() {
                data[base + t * stride] = *l;
            }
        }
    }
}

/// Signed frequency of grid index `a`, `None` for the Nyquist index.
fn frequency(a: usize, n: usize) -> Option<i64> {
    if n % 2 == 0 && a == n / 2 {
        None
    } else if a <= (n - 1) / 2 {
        Some(a as i64)
    } else {
        Some(a as i64 - n as i64)
    }
}

/// Normalized spectrum `u^(m)` for each component.
fn spectrum(field: &PeriodicField) -> [Vec<Complex<f64>>; 3] {
    let n = field.n();
    let fft = FftPlanner::new().plan_fft_forward(n);
    let scale = 1.0 / (n * n * n) as f64;
    std::array::from_fn(|c| {
        let mut data: Vec<Complex<f64>> = field.values().iter().map(|v| Complex::new(v[c], 0.0)).collect();
        fft3(&mut data, n, &fft);
        data.iter_mut().for_each(|z| *z *= scale);
        data
    })
}

fn modes(n: usize) -> Vec<(usize, [i64; 3])> {
    let mut out = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if let (Some(a), Some(b), Some(c)) = (frequency(i, n), frequency(j, n), frequency(k, n)) {
                    if (a, b, c) != (0, 0, 0) {
                        out.push(((i * n + j) * n + k, [a, b, c]));
                    }
                }
            }
        }
    }
    out
}

fn mode_term(f: &NumericForm, spec: &[Vec<Complex<f64>>; 3], idx: usize, m: [i64; 3]) -> f64 {
    let k: [f64; 3] = m.map(|x| 2.0 * std::f64::consts::PI * x as f64);
    let re = [spec[0][idx].re, spec[1][idx].re, spec[2][idx].re];
    let im = [spec[0][idx].im, spec[1][idx].im, spec[2][idx].im];
    f.biquadratic(&re, &k) + f.biquadratic(&im, &k)
}

/// Modewise energy of the spectral gradient of `field` under `f`.
pub fn fourier_quasiconvexity_check(f: &QuadraticForm, field: &PeriodicField, cfg: &RunConfig) -> Result<FourierReport> {
    let nf = f.numeric();
    let r1c = rank_one_convexity(&nf, cfg.tol.rank_one, &cfg.sphere_budget());
    if !r1c.is_rank_one_convex() {
        return Err(Error::precondition(format!(
            "form is not rank-one convex (acoustic eigenvalue {:e})",
            r1c.min_eigenvalue
        )));
    }
    Ok(modal_energy(&nf, field, cfg.tol.fourier))
}

/// Modewise energy without the rank-one convexity precondition.
pub fn modal_energy(f: &NumericForm, field: &PeriodicField, tol: f64) -> FourierReport {
    let spec = spectrum(field);
    let list = modes(field.n());
    let terms: Vec<f64> = list.par_iter().map(|&(idx, m)| mode_term(f, &spec, idx, m)).collect();
    let total = compensated_sum(&terms);
    let energy = field.energy();
    let threshold = tol * energy;
    let mut violating: Vec<ModeTerm> = list
        .iter()
        .zip(&terms)
        .filter(|(_, &t)| t > threshold)
        .map(|(&(_, mode), &term)| ModeTerm { mode, term })
        .collect();
    let count = violating.len();
    violating.sort_by(|a, b| b.term.total_cmp(&a.term).then_with(|| a.mode.cmp(&b.mode)));
    violating.truncate(64);
    FourierReport {
        total,
        field_energy: energy,
        nonnegative: total >= -threshold,
        special: count == 0,
        violating_count: count,
        violating_modes: violating,
        tol,
    }
}

/// Grid average of `f(grad u(x))` with the spectral gradient evaluated in
/// real space.
pub fn real_space_energy(f: &QuadraticForm, field: &PeriodicField) -> f64 {
    let n = field.n();
    let nf = f.numeric();
    let spec = spectrum(field);
    let inverse = FftPlanner::new().plan_fft_inverse(n);
    let mut grads: Vec<Vec<f64>> = Vec::with_capacity(9);
    let mut kfac: Vec<[Option<f64>; 3]> = vec![[None; 3]; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let idx = (i * n + j) * n + k;
                let fr = [frequency(i, n), frequency(j, n), frequency(k, n)];
                kfac[idx] = if fr.iter().all(Option::is_some) {
                    fr.map(|m| m.map(|m| 2.0 * std::f64::consts::PI * m as f64))
                } else {
                    [None; 3]
                };
            }
        }
    }
    for comp in 0..3 {
        for dir in 0..3 {
            let mut data: Vec<Complex<f64>> = spec[comp]
                .iter()
                .zip(&kfac)
                .map(|(z, k)| match k[dir] {
                    Some(kd) => Complex::new(0.0, kd) * z,
                    None => Complex::new(0.0, 0.0),
                })
                .collect();
            fft3(&mut data, n, &inverse);
            grads.push(data.iter().map(|z| z.re).collect());
        }
    }
    let vals: Vec<f64> = (0..n * n * n)
        .into_par_iter()
        .map(|p| {
            let xi: [f64; 9] = std::array::from_fn(|a| grads[a][p]);
            nf.eval(&xi)
        })
        .collect();
    compensated_sum(&vals) / (n * n * n) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elastic::fixtures;

    #[test]
    fn zero_field_is_special() {
        let r = fourier_quasiconvexity_check(&fixtures::cyclic_extremal_form(), &PeriodicField::zeros(4), &RunConfig::default())
            .unwrap();
        assert_eq!(r.total, 0.0);
        assert!(r.special && r.nonnegative);
    }

    #[test]
    fn plancherel() {
        let f = fixtures::cyclic_extremal_form();
        let field = PeriodicField::random(8, 2);
        let r = fourier_quasiconvexity_check(&f, &field, &RunConfig::default()).unwrap();
        let real = real_space_energy(&f, &field);
        assert!((r.total - real).abs() <= 1e-10 * real.abs().max(1.0), "{} {}", r.total, real);
    }

    #[test]
    fn single_mode_on_the_zero_set_is_special() {
        let field = PeriodicField::plane_wave(8, [1.0, 1.0, 1.0], [1, 1, 1]);
        let r = fourier_quasiconvexity_check(&fixtures::cyclic_extremal_form(), &field, &RunConfig::default()).unwrap();
        assert!(r.special, "{r:?}");
        let off = PeriodicField::plane_wave(8, [1.0, 0.0, 0.0], [1, 1, 1]);
        let r = fourier_quasiconvexity_check(&fixtures::cyclic_extremal_form(), &off, &RunConfig::default()).unwrap();
        assert!(!r.special);
        assert_eq!(r.violating_count, 2);
    }

    #[test]
    fn frequencies() {
        assert_eq!((0..4).map(|a| frequency(a, 4)).collect::<Vec<_>>(), vec![Some(0), Some(1), None, Some(-1)]);
        assert_eq!((0..3).map(|a| frequency(a, 3)).collect::<Vec<_>>(), vec![Some(0), Some(1), Some(-1)]);
    }
}
