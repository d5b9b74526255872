use super::HomoPoly;
use crate::rational::to_f64;

/// Floating copy of a polynomial for fast evaluation with derivatives.
#[derive(Clone, Debug)]
pub struct NumericPoly {
    nvars: usize,
    degree: u32,
    exps: Vec<Vec<u32>>,
    coefs: Vec<f64>,
}

impl NumericPoly {
    pub fn from_poly(p: &HomoPoly) -> Self {
        let (exps, coefs) = p
            .terms()
            .map(|(m, c)| (m.exponents().to_vec(), to_f64(c)))
            .unzip();
        NumericPoly {
            nvars: p.nvars(),
            degree: p.degree(),
            exps,
            coefs,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    fn power_table(&self, y: &[f64]) -> Vec<Vec<f64>> {
        let d = self.degree as usize;
        y.iter()
            .map(|&v| {
                let mut row = Vec::with_capacity(d + 1);
                let mut acc = 1.0;
                for _ in 0..=d {
                    row.push(acc);
                    acc *= v;
                }
                row
            })
            .collect()
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        let pw = self.power_table(y);
        self.exps
            .iter()
            .zip(&self.coefs)
            .map(|(e, c)| c * e.iter().enumerate().map(|(i, &k)| pw[i][k as usize]).product::<f64>())
            .sum()
    }

    /// Value and gradient.
    pub fn eval_grad(&self, y: &[f64]) -> (f64, Vec<f64>) {
        let n = self.nvars;
        let pw = self.power_table(y);
        let mut val = 0.0;
        let mut grad = vec![0.0; n];
        for (e, &c) in self.exps.iter().zip(&self.coefs) {
            val += c * (0..n).map(|i| pw[i][e[i] as usize]).product::<f64>();
            for j in 0..n {
                if e[j] == 0 {
                    continue;
                }
                let mut t = c * e[j] as f64;
                for i in 0..n {
                    let k = if i == j { e[i] - 1 } else { e[i] };
                    t *= pw[i][k as usize];
                }
                grad[j] += t;
            }
        }
        (val, grad)
    }

    /// Value, gradient and Hessian (row-major `n x n`).
    pub fn eval_hessian(&self, y: &[f64]) -> (f64, Vec<f64>, Vec<f64>) {
        let n = self.nvars;
        let pw = self.power_table(y);
        let (val, grad) = self.eval_grad(y);
        let mut hess = vec![0.0; n * n];
        for (e, &c) in self.exps.iter().zip(&self.coefs) {
            for a in 0..n {
                for b in a..n {
                    let mut k: Vec<u32> = e.clone();
                    let mut t = c;
                    if k[a] == 0 {
                        continue;
                    }
                    t *= k[a] as f64;
                    k[a] -= 1;
                    if k[b] == 0 {
                        continue;
                    }
                    t *= k[b] as f64;
                    k[b] -= 1;
                    for i in 0..n {
                        t *= pw[i][k[i] as usize];
                    }
                    hess[a * n + b] += t;
                    if a != b {
                        hess[b * n + a] += t;
                    }
                }
            }
        }
        (val, grad, hess)
    }
}
