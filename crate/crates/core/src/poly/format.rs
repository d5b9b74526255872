//! Text and JSON encodings of [`HomoPoly`].
//!
//! Text form: `1*y1^4*y2^2 - 3*y1^2*y2^2*y3^2`, terms in canonical order.
//! The parser also accepts implicit unit coefficients (`y1^2*y2`), bare
//! variables (`y1`), whitespace anywhere and repeated factors.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{HomoPoly, Monomial};
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coef: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub nvars: usize,
    pub degree: u32,
    pub terms: Vec<TermJson>,
}

impl From<HomoPoly> for PolyJson {
    fn from(p: HomoPoly) -> Self {
        PolyJson::from(&p)
    }
}

impl From<&HomoPoly> for PolyJson {
    fn from(p: &HomoPoly) -> Self {
        PolyJson {
            nvars: p.nvars(),
            degree: p.degree(),
            terms: p
                .terms()
                .map(|(m, c)| TermJson {
                    exp: m.exponents().to_vec(),
                    coef: format_rational(c),
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyJson> for HomoPoly {
    type Error = Error;

    fn try_from(j: PolyJson) -> Result<Self> {
        if j.nvars == 0 {
            return Err(Error::parse(1, 1, "nvars must be positive"));
        }
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in j.terms {
            terms.push((t.exp, parse_rational(&t.coef)?));
        }
        HomoPoly::from_terms(j.nvars, j.degree, terms)
    }
}

impl HomoPoly {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&PolyJson::from(self)).expect("polynomial JSON is always serializable")
    }

    pub fn from_json_str(s: &str) -> Result<HomoPoly> {
        let j: PolyJson = serde_json::from_str(s)?;
        HomoPoly::try_from(j)
    }

    /// Canonical text form.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parses the text form in `nvars` variables `y1..y{nvars}`.
    pub fn parse_text(s: &str, nvars: usize) -> Result<HomoPoly> {
        Parser::new(s, nvars).parse()
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    for (i, &e) in m.exponents().iter().enumerate() {
        if e > 0 {
            write!(f, "*y{}^{}", i + 1, e)?;
        }
    }
    Ok(())
}

impl fmt::Display for HomoPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            if self.degree() == 0 || self.nvars() == 0 {
                return write!(f, "0");
            }
            return write!(f, "0*y1^{}", self.degree());
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let mag = format_rational(&c.abs());
            match (k, c.is_negative()) {
                (0, false) => write!(f, "{mag}")?,
                (0, true) => write!(f, "-{mag}")?,
                (_, false) => write!(f, " + {mag}")?,
                (_, true) => write!(f, " - {mag}")?,
            }
            write_monomial(f, m)?;
        }
        Ok(())
    }
}

impl FromStr for HomoPoly {
    type Err = Error;

    /// Parses with three variables.
    fn from_str(s: &str) -> Result<HomoPoly> {
        HomoPoly::parse_text(s, 3)
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, nvars: usize) -> Self {
        Parser {
            src,
            bytes: src.as_bytes(),
            pos: 0,
            nvars,
        }
    }

    fn error(&self, at: usize, msg: impl Into<String>) -> Error {
        let before = &self.src[..at.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Error::parse(line, column, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.src[start..self.pos])
    }

    fn parse(mut self) -> Result<HomoPoly> {
        if self.nvars == 0 {
            return Err(Error::contract("nvars must be positive"));
        }
        let mut terms: Vec<(Vec<u32>, Rational, usize)> = Vec::new();
        self.skip_ws();
        if self.peek().is_none() {
            return Err(self.error(self.pos, "empty polynomial"));
        }
        let mut sign = Rational::one();
        if let Some(b @ (b'+' | b'-')) = self.peek() {
            if b == b'-' {
                sign = -sign;
            }
            self.pos += 1;
        }
        loop {
            self.skip_ws();
            let start = self.pos;
            let (exp, coef) = self.term()?;
            terms.push((exp, sign * coef, start));
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => sign = Rational::one(),
                Some(b'-') => sign = -Rational::one(),
                Some(_) => return Err(self.error(self.pos, "expected `+`, `-` or end of input")),
            }
            self.pos += 1;
        }
        let degree: u32 = terms[0].0.iter().sum();
        for (exp, _, at) in &terms {
            let d: u32 = exp.iter().sum();
            if d != degree {
                return Err(self.error(
                    *at,
                    format!("term has degree {d} but the first term has degree {degree}"),
                ));
            }
        }
        HomoPoly::from_terms(self.nvars, degree, terms.into_iter().map(|(e, c, _)| (e, c)))
    }

    fn term(&mut self) -> Result<(Vec<u32>, Rational)> {
        let mut exp = vec![0u32; self.nvars];
        let mut coef = Rational::one();
        loop {
            self.skip_ws();
            self.factor(&mut exp, &mut coef)?;
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((exp, coef))
    }

    fn factor(&mut self, exp: &mut [u32], coef: &mut Rational) -> Result<()> {
        let at = self.pos;
        match self.peek() {
            Some(b) if b.is_ascii_digit() => {
                let num = self.digits().unwrap_or("0");
                let mut value = Rational::from_integer(num.parse::<BigInt>().map_err(|e| self.error(at, e.to_string()))?);
                self.skip_ws();
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let dat = self.pos;
                    let den = self.digits().ok_or_else(|| self.error(dat, "expected denominator"))?;
                    let den: BigInt = den.parse().map_err(|e: num_bigint::ParseBigIntError| self.error(dat, e.to_string()))?;
                    if den.is_zero() {
                        return Err(self.error(dat, "zero denominator"));
                    }
                    value /= Rational::from_integer(den);
                }
                *coef *= value;
                Ok(())
            }
            Some(b'y') => {
                self.pos += 1;
                let iat = self.pos;
                let idx: usize = self
                    .digits()
                    .ok_or_else(|| self.error(iat, "expected variable index after `y`"))?
                    .parse()
                    .map_err(|_| self.error(iat, "variable index out of range"))?;
                if idx == 0 || idx > self.nvars {
                    return Err(self.error(at, format!("variable y{idx} outside y1..y{}", self.nvars)));
                }
                self.skip_ws();
                let mut e = 1u32;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.skip_ws();
                    let eat = self.pos;
                    e = self
                        .digits()
                        .ok_or_else(|| self.error(eat, "expected exponent"))?
                        .parse()
                        .map_err(|_| self.error(eat, "exponent out of range"))?;
                }
                exp[idx - 1] += e;
                Ok(())
            }
            Some(_) => Err(self.error(at, format!("unexpected character `{}`", self.src[at..].chars().next().unwrap_or(' ')))),
            None => Err(self.error(at, "unexpected end of input")),
        }
    }
}
