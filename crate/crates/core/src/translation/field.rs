//! Periodic displacement fields on an `N x N x N` grid of the unit cell.
//!
//! File format: one JSON header line
//! `{"N":16,"layout":"row-major","components":3}` followed by `3 N^3`
//! little-endian `f64` values, point index `(i N + j) N + k` for
//! `x = (i, j, k) / N`, components innermost.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sphere;

#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicField {
    n: usize,
    values: Vec<[f64; 3]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    #[serde(rename = "N")]
    n: usize,
    layout: String,
    components: usize,
}

impl PeriodicField {
    pub fn new(n: usize, values: Vec<[f64; 3]>) -> Result<Self> {
        if n == 0 || values.len() != n * n * n {
            return Err(Error::contract(format!(
                "expected {} grid values for N = {n}, got {}",
                n * n * n,
                values.len()
            )));
        }
        if values.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::contract("field values must be finite"));
        }
        Ok(PeriodicField { n, values })
    }

    pub fn zeros(n: usize) -> Self {
        PeriodicField {
            n,
            values: vec![[0.0; 3]; n * n * n],
        }
    }

    /// `amplitude * cos(2 pi mode . x)`.
    pub fn plane_wave(n: usize, amplitude: [f64; 3], mode: [i64; 3]) -> Self {
        let mut values = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let phase = 2.0
                        * std::f64::consts::PI
                        * (mode[0] as f64 * i as f64 + mode[1] as f64 * j as f64 + mode[2] as f64 * k as f64)
                        / n as f64;
                    let c = phase.cos();
                    values.push(amplitude.map(|a| a * c));
                }
            }
        }
        PeriodicField { n, values }
    }

    /// Independent standard normal samples with the grid mean removed.
    pub fn random(n: usize, seed: u64) -> Self {
        use rand::Rng;
        use rand_distr::StandardNormal;
        let mut rng = sphere::rng(seed);
        let mut values: Vec<[f64; 3]> = (0..n * n * n)
            .map(|_| std::array::from_fn(|_| rng.sample(StandardNormal)))
            .collect();
        let len = values.len() as f64;
        for c in 0..3 {
            let mean = values.iter().map(|v| v[c]).sum::<f64>() / len;
            values.iter_mut().for_each(|v| v[c] -= mean);
        }
        PeriodicField { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[[f64; 3]] {
        &self.values
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    /// Mean of `|u|^2` over the grid.
    pub fn energy(&self) -> f64 {
        self.values.iter().flatten().map(|x| x * x).sum::<f64>() / self.values.len() as f64
    }

    /// Zero outside `mask`: a field given on a subdomain, extended by zero
    /// to the whole cell.
    pub fn masked(&self, mask: &[bool]) -> Result<Self> {
        if mask.len() != self.values.len() {
            return Err(Error::contract("mask size differs from the grid"));
        }
        Ok(PeriodicField {
            n: self.n,
            values: self
                .values
                .iter()
                .zip(mask)
                .map(|(v, &m)| if m { *v } else { [0.0; 3] })
                .collect(),
        })
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        let header = Header {
            n: self.n,
            layout: "row-major".into(),
            components: 3,
        };
        serde_json::to_writer(&mut w, &header).map_err(|e| Error::Io(e.into()))?;
        w.write_all(b"\n")?;
        let mut buf = Vec::with_capacity(self.values.len() * 24);
        for x in self.values.iter().flatten() {
            buf.extend_from_slice(&x.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_from<R: BufRead>(mut r: R) -> Result<Self> {
        let mut line = String::new();
        r.read_line(&mut line)?;
        let header: Header = serde_json::from_str(line.trim_end())?;
        if header.layout != "row-major" || header.components != 3 {
            return Err(Error::parse(
                1,
                1,
                format!("unsupported layout `{}` with {} components", header.layout, header.components),
            ));
        }
        let count = header.n * header.n * header.n;
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        if bytes.len() != count * 24 {
            return Err(Error::parse(
                2,
                1,
                format!("expected {} data bytes, found {}", count * 24, bytes.len()),
            ));
        }
        let values = bytes
            .chunks_exact(24)
            .map(|c| std::array::from_fn(|i| f64::from_le_bytes(c[8 * i..8 * i + 8].try_into().expect("8 bytes"))))
            .collect();
        PeriodicField::new(header.n, values)
    }
}
