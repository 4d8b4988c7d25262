//! The full analysis report for one arrangement: every lattice, polynomial,
//! and derivation-module quantity the library computes, in one structured
//! document with a stable text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::combin::{
    char_poly0, is_divisionally_free, is_supersolvable, modular_points, mu_histogram, n2,
    n2_on_line, restriction, restriction_size, CharPoly,
};
use crate::derivation::{
    default_mdr_cap, is_free, mdr_with_cap, multi_exponents, ziegler_exponents, FreenessVerdict,
};
use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::geom::Arrangement;

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct LineReport {
    pub index: usize,
    pub coeffs: [String; 3],
    pub n2_on_line: usize,
    pub restriction_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ziegler_exponents: Option<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharPolyReport {
    /// Coefficients (1, c1, c0) of t^2 + c1 t + c0.
    pub coefficients: [i64; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integer_roots: Option<(i64, i64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModularPointReport {
    pub point: String,
    pub m: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SupersolvableReport {
    pub point: String,
    pub m: usize,
    pub k: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisionalReport {
    pub free: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_line: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub report_version: u32,
    pub field: FieldDescriptor,
    pub size: usize,
    pub essential: bool,
    pub pencil: bool,
    pub mu_histogram: BTreeMap<usize, usize>,
    pub n2: usize,
    pub lines: Vec<LineReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub char_poly: Option<CharPolyReport>,
    pub modular_points: Vec<ModularPointReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub supersolvable: Option<SupersolvableReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divisionally_free: Option<DivisionalReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mdr: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub freeness: Option<FreenessVerdict>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AnalyzeOptions {
    /// Raises the minimal-degree scan cap above the default |A| - 2.
    pub max_degree: Option<usize>,
}

pub fn analyze(a: &Arrangement, opts: AnalyzeOptions) -> Result<AnalysisReport> {
    let f = a.field();
    let essential = a.is_essential();
    let algebraic = essential && a.len() >= 3;
    let mut warnings = Vec::new();
    if !essential {
        warnings.push(
            "non-essential arrangement: polynomial and derivation invariants are omitted".into(),
        );
    }

    let mut lines = Vec::with_capacity(a.len());
    for (index, line) in a.lines().iter().enumerate() {
        let c = line.coeffs();
        lines.push(LineReport {
            index,
            coeffs: [f.render(&c[0]), f.render(&c[1]), f.render(&c[2])],
            n2_on_line: n2_on_line(a, line)?,
            restriction_size: restriction_size(a, line)?,
            ziegler_exponents: if a.len() >= 3 {
                Some(ziegler_exponents(a, line)?)
            } else {
                None
            },
        });
    }

    let char_poly = if algebraic {
        let chi: CharPoly = char_poly0(a)?;
        Some(CharPolyReport {
            coefficients: [1, chi.c1, chi.c0],
            integer_roots: chi.integer_roots(),
        })
    } else {
        None
    };

    let modular = if algebraic {
        modular_points(a)?
            .into_iter()
            .map(|(p, m)| ModularPointReport {
                point: p.to_string(),
                m,
            })
            .collect()
    } else {
        Vec::new()
    };

    let supersolvable = if algebraic {
        is_supersolvable(a)?.map(|w| SupersolvableReport {
            point: w.point.to_string(),
            m: w.m,
            k: w.k,
        })
    } else {
        None
    };

    let divisionally_free = if algebraic {
        let (free, witness_line) = is_divisionally_free(a)?;
        Some(DivisionalReport { free, witness_line })
    } else {
        None
    };

    let mdr = if algebraic {
        let cap = default_mdr_cap(a).max(opts.max_degree.unwrap_or(0));
        match mdr_with_cap(a, cap) {
            Ok(r) => Some(r),
            Err(e) => {
                warnings.push(format!("minimal-degree scan aborted: {e}"));
                None
            }
        }
    } else {
        None
    };

    let freeness = if algebraic && f.characteristic() == 0 {
        Some(is_free(a)?)
    } else {
        if algebraic {
            warnings.push(
                "freeness decision unavailable over positive characteristic; \
                 certify an explicit basis instead"
                    .into(),
            );
        }
        None
    };

    Ok(AnalysisReport {
        report_version: REPORT_VERSION,
        field: f.descriptor(),
        size: a.len(),
        essential,
        pencil: a.is_pencil()?,
        mu_histogram: mu_histogram(a)?,
        n2: n2(a)?,
        lines,
        char_poly,
        modular_points: modular,
        supersolvable,
        divisionally_free,
        mdr,
        freeness,
        warnings,
    })
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    /// The stable human rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(w, "arrangement: {} lines over {}", self.size, self.field);
        let _ = writeln!(
            w,
            "essential: {}   pencil: {}",
            yes_no(self.essential),
            yes_no(self.pencil)
        );
        let hist = self
            .mu_histogram
            .iter()
            .map(|(mu, count)| format!("{mu} -> {count}"))
            .collect::<Vec<_>>()
            .join(", ");
        let _ = writeln!(w, "points by multiplicity (mu -> count): {hist}");
        let _ = writeln!(w, "double points n2: {}", self.n2);
        if let Some(chi) = &self.char_poly {
            let roots = match chi.integer_roots {
                Some((a, b)) => format!("integer roots ({a}, {b})"),
                None => "no integer roots".into(),
            };
            let _ = writeln!(
                w,
                "characteristic polynomial: t^2 {:+}t {:+} ({roots})",
                chi.coefficients[1], chi.coefficients[2]
            );
        }
        if !self.modular_points.is_empty() {
            let pts = self
                .modular_points
                .iter()
                .map(|p| format!("{} (m={})", p.point, p.m))
                .collect::<Vec<_>>()
                .join(", ");
            let _ = writeln!(w, "modular points: {pts}");
        } else if self.essential && self.size >= 3 {
            let _ = writeln!(w, "modular points: none");
        }
        match &self.supersolvable {
            Some(s) => {
                let _ = writeln!(
                    w,
                    "supersolvable: yes at {} with m = {}, k = {}",
                    s.point, s.m, s.k
                );
            }
            None if self.essential && self.size >= 3 => {
                let _ = writeln!(w, "supersolvable: no");
            }
            None => {}
        }
        if let Some(d) = &self.divisionally_free {
            match d.witness_line {
                Some(idx) => {
                    let _ = writeln!(w, "divisionally free: yes (witness line {idx})");
                }
                None => {
                    let _ = writeln!(w, "divisionally free: no");
                }
            }
        }
        if let Some(r) = self.mdr {
            let _ = writeln!(w, "minimal derivation degree (mdr): {r}");
        }
        if let Some(v) = &self.freeness {
            match v.exponents() {
                Some((e1, e2, e3)) => {
                    let _ = writeln!(w, "free: yes, exponents ({e1}, {e2}, {e3})");
                }
                None => {
                    let _ = writeln!(
                        w,
                        "free: no (restriction exponents ({}, {}) do not match the \
                         characteristic polynomial)",
                        v.ziegler_exponents.0, v.ziegler_exponents.1
                    );
                }
            }
        }
        let _ = writeln!(w, "lines:");
        for line in &self.lines {
            let ziegler = match line.ziegler_exponents {
                Some((a, b)) => format!(" restriction exponents ({a}, {b})"),
                None => String::new(),
            };
            let _ = writeln!(
                w,
                "  [{}] ({}, {}, {})  n2_on_line={} restriction_size={}{}",
                line.index,
                line.coeffs[0],
                line.coeffs[1],
                line.coeffs[2],
                line.n2_on_line,
                line.restriction_size,
                ziegler
            );
        }
        for warning in &self.warnings {
            let _ = writeln!(w, "warning: {warning}");
        }
        out
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RestrictPoint {
    pub point: [String; 2],
    pub multiplicity: usize,
}

/// The restriction of an arrangement onto one member line, with its
/// multiarrangement exponents.
#[derive(Clone, Debug, Serialize)]
pub struct RestrictReport {
    pub report_version: u32,
    pub line_index: usize,
    pub line: [String; 3],
    pub points: Vec<RestrictPoint>,
    pub multiplicity_multiset: Vec<usize>,
    pub total_multiplicity: usize,
    pub exponents: (usize, usize),
}

pub fn restrict_line(a: &Arrangement, line_index: usize) -> Result<RestrictReport> {
    if line_index >= a.len() {
        return Err(Error::LineIndexOutOfRange {
            index: line_index,
            size: a.len(),
        });
    }
    let f = a.field();
    let h = a.lines()[line_index].clone();
    let ma = restriction(a, &h)?;
    let exponents = multi_exponents(&ma)?;
    let c = h.coeffs();
    Ok(RestrictReport {
        report_version: REPORT_VERSION,
        line_index,
        line: [f.render(&c[0]), f.render(&c[1]), f.render(&c[2])],
        points: ma
            .points()
            .iter()
            .zip(ma.multiplicities())
            .map(|(p, &m)| RestrictPoint {
                point: [f.render(&p.coords()[0]), f.render(&p.coords()[1])],
                multiplicity: m,
            })
            .collect(),
        multiplicity_multiset: ma.multiplicity_multiset(),
        total_multiplicity: ma.total_multiplicity(),
        exponents,
    })
}

impl RestrictReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(
            w,
            "restriction of line [{}] ({}, {}, {}):",
            self.line_index, self.line[0], self.line[1], self.line[2]
        );
        for p in &self.points {
            let _ = writeln!(
                w,
                "  point [{}:{}] multiplicity {}",
                p.point[0], p.point[1], p.multiplicity
            );
        }
        let _ = writeln!(
            w,
            "multiplicities: {:?}   total: {}",
            self.multiplicity_multiset, self.total_multiplicity
        );
        let _ = writeln!(w, "exponents: ({}, {})", self.exponents.0, self.exponents.1);
        out
    }
}
