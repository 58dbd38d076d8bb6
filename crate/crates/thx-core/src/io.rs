//! JSON file formats: triple input, morphism input, hierarchy output.
//!
//! Every rational is a string, `"p/q"` or `"p"`. Maps keyed by degree are
//! `BTreeMap`s so output is byte-deterministic.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::dgla::{DgLa, HomologyRow};
use crate::exactla::{format_rat, parse_rat, Rat, RatMatrix};
use crate::functor::{DglaMorphism, TripleMorphism};
use crate::report::{Check, VerificationReport};
use crate::triple::{GAction, LieAlgebra, LieLeibnizTriple, TripleError};

pub const FIELD: &str = "rational";
pub const HIERARCHY_KIND: &str = "hierarchy";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{0}")]
    Syntax(String),
    #[error("{path}: {message}")]
    Shape { path: String, message: String },
    #[error("unsupported field {0:?}, expected \"rational\"")]
    Field(String),
    #[error(transparent)]
    Triple(#[from] TripleError),
}

impl IoError {
    /// Malformed input rather than a mathematically invalid triple.
    pub fn is_parse(&self) -> bool {
        !matches!(self, IoError::Triple(e) if !matches!(e, TripleError::Shape(_)))
    }
}

fn shape(path: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Shape { path: path.into(), message: message.into() }
}

/// Parses JSON, reporting the field path and line of the first error.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            IoError::Syntax(inner.to_string())
        } else {
            IoError::Syntax(format!("{path}: {inner}"))
        }
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("file types serialize");
    s.push('\n');
    s
}

/// A rational that travels as a canonical string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatStr(pub Rat);

impl Serialize for RatStr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(&self.0))
    }
}

impl<'de> Deserialize<'de> for RatStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map(RatStr).map_err(serde::de::Error::custom)
    }
}

type Rows = Vec<Vec<RatStr>>;

fn wrap(v: &[Rat]) -> Vec<RatStr> {
    v.iter().cloned().map(RatStr).collect()
}

fn unwrap(v: &[RatStr]) -> Vec<Rat> {
    v.iter().map(|r| r.0.clone()).collect()
}

fn rows_of(m: &RatMatrix) -> Rows {
    m.row_vecs().iter().map(|r| wrap(r)).collect()
}

fn tensor_of(t: &[Vec<Vec<Rat>>]) -> Vec<Rows> {
    t.iter().map(|m| m.iter().map(|v| wrap(v)).collect()).collect()
}

fn matrix(path: &str, rows: &Rows, r: usize, c: usize) -> Result<RatMatrix, IoError> {
    if rows.len() != r {
        return Err(shape(path, format!("expected {r} rows, found {}", rows.len())));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != c {
            return Err(shape(format!("{path}[{i}]"), format!("expected {c} entries, found {}", row.len())));
        }
    }
    Ok(RatMatrix::from_rows(rows.iter().map(|row| unwrap(row)).collect(), c))
}

fn tensor(path: &str, t: &[Rows], n: usize, out: usize) -> Result<Vec<Vec<Vec<Rat>>>, IoError> {
    if t.len() != n {
        return Err(shape(path, format!("expected {n} entries, found {}", t.len())));
    }
    t.iter().enumerate().map(|(i, m)| Ok(matrix(&format!("{path}[{i}]"), m, n, out)?.row_vecs())).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieFile {
    pub dim: usize,
    /// `brackets[i][j][k]`: coefficient of `e_k` in `[e_i, e_j]`.
    pub brackets: Vec<Rows>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleFile {
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleFile {
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub g: LieFile,
    pub v: ModuleFile,
    /// One `dim V × dim V` matrix per basis element of `g`.
    pub rho: Vec<Rows>,
    /// `dim g × dim V`.
    pub theta: Rows,
    /// Checked against the derived product when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leibniz: Option<Vec<Rows>>,
}

impl TripleFile {
    pub fn from_triple(t: &LieLeibnizTriple, description: Option<&str>) -> Self {
        TripleFile {
            field: FIELD.into(),
            name: Some(t.name.clone()),
            description: description.map(str::to_string),
            g: LieFile { dim: t.dim_g(), brackets: tensor_of(t.g.constants()) },
            v: ModuleFile { dim: t.dim_v },
            rho: t.rho.mats.iter().map(rows_of).collect(),
            theta: rows_of(&t.theta),
            leibniz: Some(tensor_of(&t.leib)),
        }
    }

    pub fn parse(text: &str) -> Result<Self, IoError> {
        from_json(text)
    }

    /// Shape checks, then derivation and every constraint of the triple.
    pub fn to_triple(&self) -> Result<LieLeibnizTriple, IoError> {
        if self.field != FIELD {
            return Err(IoError::Field(self.field.clone()));
        }
        let (n, m) = (self.g.dim, self.v.dim);
        let g = LieAlgebra::new(n, tensor("g.brackets", &self.g.brackets, n, n)?)?;
        if self.rho.len() != n {
            return Err(shape("rho", format!("expected {n} matrices, found {}", self.rho.len())));
        }
        let mats = self
            .rho
            .iter()
            .enumerate()
            .map(|(a, rows)| matrix(&format!("rho[{a}]"), rows, m, m))
            .collect::<Result<_, _>>()?;
        let theta = matrix("theta", &self.theta, n, m)?;
        let name = self.name.clone().unwrap_or_else(|| "unnamed".into());
        let t = LieLeibnizTriple::derive(name, g, GAction::new(m, mats)?, theta)?;
        if let Some(declared) = &self.leibniz {
            t.check_declared_product(&tensor("leibniz", declared, m, m)?)?;
        }
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// `dim g′ × dim g`.
    pub phi: Rows,
    /// `dim V′ × dim V`.
    pub chi: Rows,
}

impl MorphismFile {
    pub fn from_morphism(m: &TripleMorphism, name: Option<&str>) -> Self {
        MorphismFile { name: name.map(str::to_string), phi: rows_of(&m.phi), chi: rows_of(&m.chi) }
    }

    pub fn parse(text: &str) -> Result<Self, IoError> {
        from_json(text)
    }

    pub fn to_morphism(&self, src: &LieLeibnizTriple, dst: &LieLeibnizTriple) -> Result<TripleMorphism, IoError> {
        Ok(TripleMorphism {
            phi: matrix("phi", &self.phi, dst.dim_g(), src.dim_g())?,
            chi: matrix("chi", &self.chi, dst.dim_v, src.dim_v)?,
        })
    }
}

/// One nonzero bracket of basis elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    /// `(degree, index)`.
    pub x: (i64, usize),
    pub y: (i64, usize),
    /// Coordinates in degree `x.0 + y.0`.
    pub value: Vec<RatStr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportSummary {
    pub ok: bool,
    pub checked: usize,
    pub failed: usize,
    pub out_of_range: usize,
    pub checks: Vec<Check>,
    pub homology: Vec<HomologyRow>,
}

impl ReportSummary {
    pub fn new(report: &VerificationReport, homology: Vec<HomologyRow>) -> Self {
        ReportSummary {
            ok: report.ok(),
            checked: report.total_checked(),
            failed: report.total_failed(),
            out_of_range: report.total_skipped(),
            checks: report.checks.clone(),
            homology,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HierarchyFile {
    pub kind: String,
    pub field: String,
    pub name: String,
    pub depth: usize,
    pub dims: BTreeMap<i64, usize>,
    pub labels: BTreeMap<i64, Vec<String>>,
    /// Rows of the differential leaving each degree.
    pub differential: BTreeMap<i64, Rows>,
    pub brackets: Vec<BracketEntry>,
    pub r_theta_words: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<ReportSummary>,
}

impl HierarchyFile {
    pub fn from_dgla(d: &DgLa, report: Option<ReportSummary>) -> Self {
        HierarchyFile {
            kind: HIERARCHY_KIND.into(),
            field: FIELD.into(),
            name: d.name.clone(),
            depth: d.depth,
            dims: d.dims.clone(),
            labels: d.labels.clone(),
            differential: d.degrees().map(|k| (k, rows_of(d.differential(k)))).collect(),
            brackets: d
                .entries()
                .map(|((dx, i, dy, j), v)| BracketEntry { x: (dx, i), y: (dy, j), value: wrap(v) })
                .collect(),
            r_theta_words: d.r_theta_words.clone(),
            report,
        }
    }

    pub fn parse(text: &str) -> Result<Self, IoError> {
        from_json(text)
    }

    pub fn to_dgla(&self) -> Result<DgLa, IoError> {
        if self.field != FIELD {
            return Err(IoError::Field(self.field.clone()));
        }
        if self.kind != HIERARCHY_KIND {
            return Err(shape("kind", format!("expected {HIERARCHY_KIND:?}")));
        }
        let lo = -(self.depth as i64);
        let range = lo..=1;
        if let Some(k) = self.dims.keys().find(|k| !range.contains(k)) {
            return Err(shape("dims", format!("degree {k} outside {lo}..=1")));
        }
        let mut d = DgLa::zero(
            self.name.clone(),
            self.depth,
            self.dims.clone(),
            self.labels.clone(),
            self.r_theta_words.clone(),
        );
        for (k, rows) in &self.differential {
            if !range.contains(k) {
                return Err(shape("differential", format!("degree {k} outside {lo}..=1")));
            }
            let m = matrix(&format!("differential.{k}"), rows, d.dim(k + 1), d.dim(*k))?;
            d.set_differential(*k, m);
        }
        for (n, e) in self.brackets.iter().enumerate() {
            let path = format!("brackets[{n}]");
            let ((dx, i), (dy, j)) = (e.x, e.y);
            let out = dx + dy;
            if !range.contains(&dx) || !range.contains(&dy) || !range.contains(&out) {
                return Err(shape(path, format!("degrees ({dx}, {dy}) outside the truncation")));
            }
            if i >= d.dim(dx) || j >= d.dim(dy) {
                return Err(shape(path, format!("index ({i}, {j}) out of range")));
            }
            if e.value.len() != d.dim(out) {
                return Err(shape(path, format!("expected {} coordinates, found {}", d.dim(out), e.value.len())));
            }
            d.set_bracket((dx, i, dy, j), unwrap(&e.value));
        }
        Ok(d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismOutput {
    pub source: String,
    pub target: String,
    pub depth: usize,
    /// Rows of the component in each degree.
    pub components: BTreeMap<i64, Rows>,
    pub report: ReportSummary,
}

impl MorphismOutput {
    pub fn new(src: &DgLa, dst: &DgLa, f: &DglaMorphism, report: &VerificationReport) -> Self {
        MorphismOutput {
            source: src.name.clone(),
            target: dst.name.clone(),
            depth: f.depth,
            components: f.components.iter().map(|(k, m)| (*k, rows_of(m))).collect(),
            report: ReportSummary::new(report, Vec::new()),
        }
    }
}

/// Whether a JSON document is a hierarchy file rather than a triple file.
pub fn is_hierarchy(text: &str) -> bool {
    serde_json::from_str::<serde_json::Value>(text)
        .ok()
        .and_then(|v| v.get("kind").and_then(|k| k.as_str().map(|s| s == HIERARCHY_KIND)))
        .unwrap_or(false)
}
