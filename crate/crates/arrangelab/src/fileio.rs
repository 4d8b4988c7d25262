//! On-disk interchange formats. Arrangement files are a single JSON document
//! with the field descriptor, the lines as triples of scalar strings in the
//! exact text grammar, and optional metadata; rendering is canonical and
//! order-preserving, so canonical files round-trip byte for byte.

use serde::{Deserialize, Serialize};

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::field::{Field, FieldDescriptor, Scalar};
use crate::geom::{Arrangement, Line};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl FileMeta {
    pub fn is_empty(&self) -> bool {
        self.name.is_none() && self.family.is_none() && self.seed.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementFile {
    pub field: FieldDescriptor,
    pub lines: Vec<[String; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<FileMeta>,
}

impl ArrangementFile {
    pub fn from_arrangement(a: &Arrangement, meta: Option<FileMeta>) -> Self {
        let f = a.field();
        ArrangementFile {
            field: f.descriptor(),
            lines: a
                .lines()
                .iter()
                .map(|l| {
                    let c = l.coeffs();
                    [f.render(&c[0]), f.render(&c[1]), f.render(&c[2])]
                })
                .collect(),
            meta: meta.filter(|m| !m.is_empty()),
        }
    }

    pub fn to_arrangement(&self) -> Result<Arrangement> {
        let field = Field::new(self.field)?;
        let mut lines = Vec::with_capacity(self.lines.len());
        for triple in &self.lines {
            let coeffs: [Scalar; 3] = [
                field.parse(&triple[0])?,
                field.parse(&triple[1])?,
                field.parse(&triple[2])?,
            ];
            lines.push(Line::new(field, coeffs)?);
        }
        Arrangement::new(field, lines)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(Error::FileFormat("empty document".into()));
        }
        serde_json::from_str(text)
            .map_err(|e| Error::FileFormat(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

/// A derivation as degree plus the three coefficient vectors over the
/// canonical monomial basis, in the scalar grammar.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationFile {
    pub degree: usize,
    pub theta_x: Vec<String>,
    pub theta_y: Vec<String>,
    pub theta_z: Vec<String>,
}

impl DerivationFile {
    pub fn from_derivation(d: &Derivation) -> Self {
        let f = d.field();
        let render = |v: &[Scalar]| v.iter().map(|s| f.render(s)).collect();
        let [x, y, z] = d.components();
        DerivationFile {
            degree: d.degree(),
            theta_x: render(x),
            theta_y: render(y),
            theta_z: render(z),
        }
    }

    pub fn to_derivation(&self, field: Field) -> Result<Derivation> {
        let parse = |v: &[String]| -> Result<Vec<Scalar>> {
            v.iter().map(|s| field.parse(s)).collect()
        };
        Derivation::new(
            field,
            self.degree,
            [
                parse(&self.theta_x)?,
                parse(&self.theta_y)?,
                parse(&self.theta_z)?,
            ],
        )
    }
}

/// Candidate basis pair for Saito certification via `verify --basis`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisFile {
    pub theta2: DerivationFile,
    pub theta3: DerivationFile,
}

impl BasisFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::FileFormat(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}
