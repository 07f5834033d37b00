//! Problem documents and reports.
//!
//! A problem is a JSON object with fields `"A"`, `"B"`, `"c"` and optional
//! `"classes"` (block sizes), `"tolerances"`, `"name"`, `"description"` and
//! `"expected"`. Entries of `A` and `B` are numbers or strings such as
//! `"3/4"`; a decimal anywhere in `B` selects floating-point exponents.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::framework::{Certificate, Classification, ExponentMatrix, ProblemInstance, Tolerances};
use crate::geometry::ClassPartition;
use crate::linalg::{format_rational, parse_rational, to_f64, RatMatrix, Rational};

/// Checks a bundled fixture declares about itself.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solutions: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniqueness: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unique_existence: Option<bool>,
    /// Solutions that must appear, within `1e-8`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub x: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lambda: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tau: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<Value>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<Value>>,
    pub c: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

/// Text of a scalar entry and whether it is a decimal literal.
fn entry_text(v: &Value) -> Option<(String, bool)> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => Some((n.to_string(), false)),
        Value::Number(n) => Some((n.to_string(), true)),
        Value::String(s) => {
            let decimal = !s.contains('/') && s.contains(['.', 'e', 'E']);
            Some((s.trim().to_string(), decimal))
        }
        _ => None,
    }
}

fn parse_entry(v: &Value, field: &str) -> Result<(Rational, bool)> {
    let (text, decimal) =
        entry_text(v).ok_or_else(|| Error::parse(field, format!("expected a number or rational string, found {v}")))?;
    let r = parse_rational(&text).ok_or_else(|| Error::parse(field, format!("cannot read `{text}` as a rational")))?;
    Ok((r, decimal))
}

fn check_width(rows: &[Vec<Value>], m: usize, name: &str) -> Result<()> {
    for (i, row) in rows.iter().enumerate() {
        if row.len() != m {
            return Err(Error::DimensionMismatch(format!("{name} row {} has {} entries, expected {m}", i + 1, row.len())));
        }
    }
    Ok(())
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            field: "document".into(),
            line: Some(e.line()),
            message: e.to_string(),
        })
    }

    pub fn to_instance(&self) -> Result<ProblemInstance> {
        let m = self.c.len();
        check_width(&self.a, m, "A")?;
        check_width(&self.b, m, "B")?;
        if self.a.is_empty() {
            return Err(Error::DimensionMismatch("A has no rows".into()));
        }
        let a_rows: Vec<Vec<Rational>> = self
            .a
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, v)| parse_entry(v, &format!("A[{i}][{j}]")).map(|(r, _)| r))
                    .collect()
            })
            .collect::<Result<_>>()?;
        let mut any_decimal = false;
        let b_rows: Vec<Vec<Rational>> = self
            .b
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, v)| {
                        let (r, decimal) = parse_entry(v, &format!("B[{i}][{j}]"))?;
                        any_decimal |= decimal;
                        Ok(r)
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let b = if any_decimal {
            let rows: Vec<Vec<f64>> = b_rows.iter().map(|r| r.iter().map(to_f64).collect()).collect();
            ExponentMatrix::from_f64_rows(&rows, m)
        } else {
            ExponentMatrix::Exact(RatMatrix::from_rows(b_rows, m))
        };
        let c: Vec<f64> = self
            .c
            .iter()
            .enumerate()
            .map(|(j, v)| parse_entry(v, &format!("c[{j}]")).map(|(r, _)| to_f64(&r)))
            .collect::<Result<_>>()?;
        let partition = match &self.classes {
            Some(sizes) => {
                let total: usize = sizes.iter().sum();
                if total != m {
                    return Err(Error::DimensionMismatch(format!("classes cover {total} columns, expected {m}")));
                }
                Some(ClassPartition::contiguous(sizes.clone()))
            }
            None => None,
        };
        let p = ProblemInstance::new(RatMatrix::from_rows(a_rows, m), b, c, partition)?;
        Ok(match self.tolerances {
            Some(t) => p.with_tolerances(t),
            None => p,
        })
    }

    /// Document for an instance; rationals are written as strings.
    pub fn from_instance(p: &ProblemInstance) -> Self {
        let rat_rows = |m: &RatMatrix| -> Vec<Vec<Value>> {
            m.to_rows()
                .iter()
                .map(|r| r.iter().map(|x| Value::String(format_rational(x))).collect())
                .collect()
        };
        let b = match &p.b {
            ExponentMatrix::Exact(b) => rat_rows(b),
            ExponentMatrix::Float(b) => {
                let d = &b.data;
                (0..d.nrows())
                    .map(|i| (0..d.ncols()).map(|j| float_value(d[(i, j)])).collect())
                    .collect()
            }
        };
        let contiguous = p.partition.permutation.iter().enumerate().all(|(k, &j)| k == j);
        ProblemFile {
            name: None,
            description: None,
            a: rat_rows(&p.a),
            b,
            c: p.c.iter().map(|&x| float_value(x)).collect(),
            classes: contiguous.then(|| p.partition.sizes.clone()),
            tolerances: Some(p.tol),
            expected: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem documents serialize")
    }
}

/// A float as a JSON number that reads back as a decimal.
fn float_value(x: f64) -> Value {
    let text = if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{x:.1}")
    } else {
        format!("{x:e}")
    };
    serde_json::from_str(&text).unwrap_or(Value::Null)
}

pub fn parse_problem(text: &str) -> Result<ProblemInstance> {
    ProblemFile::parse(text)?.to_instance()
}

pub fn problem_to_json(p: &ProblemInstance) -> String {
    ProblemFile::from_instance(p).to_json()
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ClassReport {
    pub columns: Vec<usize>,
    pub rays: Vec<Vec<String>>,
    pub vertices: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SolutionReport {
    pub x: Vec<f64>,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<u8>,
    /// Curve or segment parameter, when the solver has one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameter: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateReport {
    pub name: String,
    #[serde(flatten)]
    pub certificate: Certificate,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub classes: Vec<ClassReport>,
    /// Columns of `G'`, one per dependency condition.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub g_prime: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub conditions: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub parametrization: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub solutions: Vec<SolutionReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub bounds: Vec<BoundReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<CertificateReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn join_f64(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.12}")).collect::<Vec<_>>().join(", ")
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            let _ = writeln!(out, "instance: {name}");
        }
        if let Some(c) = &self.classification {
            let _ = writeln!(
                out,
                "classification: classes={} m={} n={} equations={} d={} dim_L={} dim_P={} generic={} case={}",
                c.l,
                c.m,
                c.n,
                c.n_eq,
                c.d,
                c.dim_l,
                c.dim_p,
                c.generic,
                c.case.label()
            );
        }
        for (k, class) in self.classes.iter().enumerate() {
            let cols: Vec<String> = class.columns.iter().map(|j| (j + 1).to_string()).collect();
            let rays: Vec<String> = class.rays.iter().map(|r| format!("({})", r.join(","))).collect();
            let _ = writeln!(out, "class {}: columns {} rays {}", k + 1, cols.join(","), rays.join(" "));
        }
        for (k, z) in self.g_prime.iter().enumerate() {
            let _ = writeln!(out, "dependency {}: z = ({})", k + 1, z.join(","));
        }
        for c in &self.conditions {
            let _ = writeln!(out, "condition: {c}");
        }
        for f in &self.parametrization {
            let _ = writeln!(out, "  {f}");
        }
        if let Some(s) = &self.solver {
            let _ = writeln!(out, "solver: {s}");
        }
        for (k, s) in self.solutions.iter().enumerate() {
            let _ = write!(out, "solution {}: x = ({})  residual {:.2e}", k + 1, join_f64(&s.x), s.residual);
            if let Some(m) = s.multiplicity.filter(|m| *m > 1) {
                let _ = write!(out, "  multiplicity {m}");
            }
            if let Some(t) = s.parameter {
                let _ = write!(out, "  parameter {t:.12}");
            }
            out.push('\n');
        }
        for b in &self.bounds {
            let _ = writeln!(out, "bound ({}): {}", b.name, b.value);
        }
        for c in &self.certificates {
            let witness = c.certificate.witness.as_ref().map(|w| format!(" witness {w}")).unwrap_or_default();
            let _ = writeln!(out, "certificate {}: {}{}  ({})", c.name, c.certificate.holds, witness, c.certificate.reason);
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}
