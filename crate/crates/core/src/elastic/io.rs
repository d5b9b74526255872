//! JSON encodings of stiffness tensors and general forms.
//!
//! ```json
//! {"symmetry":"orthotropic","C11":"2","C22":"2","C33":"2","C12":"1",
//!  "C13":"1","C23":"1","C44":"1/2","C55":"1/2","C66":"1/2"}
//! {"symmetry":"general","voigt":[["1","0",...],...]}
//! {"gram":[["1","0",...],...]}
//! ```

use serde::{Deserialize, Serialize};

use super::{OrthotropicConstants, QuadraticForm, StiffnessTensor, SymmetryClass};
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "symmetry", rename_all = "snake_case", deny_unknown_fields)]
pub enum TensorJson {
    Orthotropic {
        #[serde(rename = "C11")]
        c11: String,
        #[serde(rename = "C22")]
        c22: String,
        #[serde(rename = "C33")]
        c33: String,
        #[serde(rename = "C12")]
        c12: String,
        #[serde(rename = "C13")]
        c13: String,
        #[serde(rename = "C23")]
        c23: String,
        #[serde(rename = "C44")]
        c44: String,
        #[serde(rename = "C55")]
        c55: String,
        #[serde(rename = "C66")]
        c66: String,
    },
    General {
        voigt: Vec<Vec<String>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormJson {
    pub gram: Vec<Vec<String>>,
}

fn field(name: &str, s: &str) -> Result<Rational> {
    parse_rational(s).map_err(|_| Error::parse(1, 1, format!("field {name}: invalid rational `{s}`")))
}

fn matrix(name: &str, rows: &[Vec<String>]) -> Result<Vec<Vec<Rational>>> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, s)| field(&format!("{name}[{i}][{j}]"), s))
                .collect()
        })
        .collect()
}

fn strings(m: &[Vec<Rational>]) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(format_rational).collect()).collect()
}

impl TryFrom<&TensorJson> for StiffnessTensor {
    type Error = Error;

    fn try_from(j: &TensorJson) -> Result<Self> {
        match j {
            TensorJson::Orthotropic {
                c11,
                c22,
                c33,
                c12,
                c13,
                c23,
                c44,
                c55,
                c66,
            } => Ok(StiffnessTensor::orthotropic(&OrthotropicConstants {
                c11: field("C11", c11)?,
                c22: field("C22", c22)?,
                c33: field("C33", c33)?,
                c12: field("C12", c12)?,
                c13: field("C13", c13)?,
                c23: field("C23", c23)?,
                c44: field("C44", c44)?,
                c55: field("C55", c55)?,
                c66: field("C66", c66)?,
            })),
            TensorJson::General { voigt } => StiffnessTensor::general(matrix("voigt", voigt)?),
        }
    }
}

impl From<&StiffnessTensor> for TensorJson {
    fn from(t: &StiffnessTensor) -> Self {
        match (t.symmetry(), t.constants()) {
            (SymmetryClass::Orthotropic, Some(c)) => TensorJson::Orthotropic {
                c11: format_rational(&c.c11),
                c22: format_rational(&c.c22),
                c33: format_rational(&c.c33),
                c12: format_rational(&c.c12),
                c13: format_rational(&c.c13),
                c23: format_rational(&c.c23),
                c44: format_rational(&c.c44),
                c55: format_rational(&c.c55),
                c66: format_rational(&c.c66),
            },
            _ => TensorJson::General {
                voigt: strings(t.voigt()),
            },
        }
    }
}

impl StiffnessTensor {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: TensorJson = serde_json::from_str(s)?;
        StiffnessTensor::try_from(&j)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&TensorJson::from(self)).expect("tensor JSON is serializable")
    }
}

impl QuadraticForm {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: FormJson = serde_json::from_str(s)?;
        QuadraticForm::from_gram(matrix("gram", &j.gram)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&FormJson {
            gram: strings(&self.gram_rows()),
        })
        .expect("form JSON is serializable")
    }
}

/// Either kind of input accepted where a quadratic form is expected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormInput {
    Tensor(StiffnessTensor),
    Form(QuadraticForm),
}

impl FormInput {
    /// Dispatches on the presence of a `gram` key.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s)?;
        if v.get("gram").is_some() {
            QuadraticForm::from_json_str(s).map(FormInput::Form)
        } else if v.get("symmetry").is_some() {
            StiffnessTensor::from_json_str(s).map(FormInput::Tensor)
        } else {
            Err(Error::parse(1, 1, "expected a `gram` or `symmetry` key"))
        }
    }

    pub fn form(&self) -> QuadraticForm {
        match self {
            FormInput::Tensor(t) => t.form(),
            FormInput::Form(f) => f.clone(),
        }
    }

    pub fn tensor(&self) -> Option<&StiffnessTensor> {
        match self {
            FormInput::Tensor(t) => Some(t),
            FormInput::Form(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    const ISO: &str = r#"{"symmetry":"orthotropic","C11":"2","C22":"2","C33":"2","C12":"1","C13":"1","C23":"1","C44":"1/2","C55":"1/2","C66":"1/2"}"#;

    #[test]
    fn orthotropic_round_trip() {
        let t = StiffnessTensor::from_json_str(ISO).unwrap();
        assert_eq!(t.constants().unwrap().c44, ratio(1, 2));
        assert_eq!(t.to_json_string(), ISO);
    }

    #[test]
    fn form_round_trip() {
        let f = crate::elastic::fixtures::cyclic_extremal_form();
        let s = f.to_json_string();
        assert_eq!(QuadraticForm::from_json_str(&s).unwrap(), f);
        assert!(matches!(FormInput::from_json_str(&s).unwrap(), FormInput::Form(_)));
        assert!(matches!(FormInput::from_json_str(ISO).unwrap(), FormInput::Tensor(_)));
    }

    #[test]
    fn malformed_inputs() {
        match StiffnessTensor::from_json_str("{\"symmetry\": \"orthotropic\",\n \"C11\": }") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(StiffnessTensor::from_json_str(&ISO.replace("\"2\"", "\"two\"")).is_err());
        assert!(StiffnessTensor::from_json_str(r#"{"symmetry":"cubic"}"#).is_err());
        assert!(FormInput::from_json_str("{}").is_err());
    }
}
