//! Text formats: JSON state specifications, ordered JSON output, OBJ meshes
//! and contour CSV.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use nalgebra::{Matrix4, Vector3};
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geometry::{ContourSet, IsoMesh};
use crate::qstate::{BellDiag, DeformedBellDiag, TwoQubitDensity};

/// Shortest scientific form carrying 17 significant digits; parses back
/// to the same double.
pub fn fmt_sig17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// 9 significant digits, used for mesh coordinates.
pub fn fmt_sig9(v: f64) -> String {
    format!("{v:.8e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformedSpec {
    pub r: f64,
    pub s: f64,
    pub c: [f64; 3],
}

/// A state as written in a JSON file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    BellDiag([f64; 3]),
    Deformed(DeformedSpec),
    Matrix(Box<[[[f64; 2]; 4]; 4]>),
}

/// A validated state, keeping the parameter form when one was given.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    BellDiag(BellDiag),
    Deformed(DeformedBellDiag),
    Matrix(Box<TwoQubitDensity>),
}

impl State {
    pub fn density(&self) -> TwoQubitDensity {
        match self {
            State::BellDiag(bd) => bd.to_density(),
            State::Deformed(d) => d.to_density(),
            State::Matrix(rho) => (**rho).clone(),
        }
    }

    /// The Bell-diagonal parameters, also for deformed states with `r = s = 0`.
    pub fn bell_diag(&self) -> Option<BellDiag> {
        match self {
            State::BellDiag(bd) => Some(*bd),
            State::Deformed(d) if d.r() == 0.0 && d.s() == 0.0 => BellDiag::from_array(d.c()).ok(),
            _ => None,
        }
    }
}

impl StateSpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("state specification: {e}")))
    }

    pub fn into_state(self) -> Result<State> {
        match self {
            StateSpec::BellDiag(c) => {
                check_finite("bell_diag", &c)?;
                BellDiag::from_array(c).map(State::BellDiag)
            }
            StateSpec::Deformed(d) => {
                check_finite("deformed.c", &d.c)?;
                check_finite("deformed.r/s", &[d.r, d.s])?;
                DeformedBellDiag::new(d.r, d.s, d.c).map(State::Deformed)
            }
            StateSpec::Matrix(rows) => {
                let m = Matrix4::from_fn(|i, j| Complex64::new(rows[i][j][0], rows[i][j][1]));
                if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(Error::InvalidInput("matrix: entries must be finite".into()));
                }
                TwoQubitDensity::new(m).map(|rho| State::Matrix(Box::new(rho)))
            }
        }
    }
}

fn check_finite(field: &str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{field}: entries must be finite")))
    }
}

pub fn parse_state(text: &str) -> Result<State> {
    StateSpec::parse(text)?.into_state()
}

/// Minimal JSON value that keeps insertion order and prints doubles with
/// 17 significant digits.
#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Array(Vec<Json>),
    Object(Vec<(String, Json)>),
}

impl Json {
    pub fn object() -> Self {
        Json::Object(Vec::new())
    }

    /// Appends a field; no-op on non-objects.
    pub fn with(mut self, key: &str, value: impl Into<Json>) -> Self {
        if let Json::Object(fields) = &mut self {
            fields.push((key.to_owned(), value.into()));
        }
        self
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, indent: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => {
                let _ = write!(out, "{i}");
            }
            Json::Num(v) if v.is_finite() => out.push_str(&fmt_sig17(*v)),
            Json::Num(_) => out.push_str("null"),
            Json::Str(s) => out.push_str(&serde_json::to_string(s).expect("strings serialize")),
            Json::Array(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    item.render_into(out, indent);
                }
                out.push(']');
            }
            Json::Object(fields) => {
                if fields.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push_str("{\n");
                for (i, (key, value)) in fields.iter().enumerate() {
                    out.push_str(&"  ".repeat(indent + 1));
                    out.push_str(&serde_json::to_string(key).expect("strings serialize"));
                    out.push_str(": ");
                    value.render_into(out, indent + 1);
                    if i + 1 < fields.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                out.push_str(&"  ".repeat(indent));
                out.push('}');
            }
        }
    }
}

impl From<f64> for Json {
    fn from(v: f64) -> Self {
        Json::Num(v)
    }
}

impl From<bool> for Json {
    fn from(v: bool) -> Self {
        Json::Bool(v)
    }
}

impl From<usize> for Json {
    fn from(v: usize) -> Self {
        Json::Int(v as i64)
    }
}

impl From<u64> for Json {
    fn from(v: u64) -> Self {
        Json::Int(v as i64)
    }
}

impl From<&str> for Json {
    fn from(v: &str) -> Self {
        Json::Str(v.to_owned())
    }
}

impl From<String> for Json {
    fn from(v: String) -> Self {
        Json::Str(v)
    }
}

impl<T: Into<Json>> From<Option<T>> for Json {
    fn from(v: Option<T>) -> Self {
        v.map_or(Json::Null, Into::into)
    }
}

impl<T: Into<Json> + Copy, const N: usize> From<[T; N]> for Json {
    fn from(v: [T; N]) -> Self {
        Json::Array(v.iter().map(|x| (*x).into()).collect())
    }
}

impl From<Vec<Json>> for Json {
    fn from(v: Vec<Json>) -> Self {
        Json::Array(v)
    }
}

pub fn write_obj<W: Write>(mesh: &IsoMesh, mut out: W) -> io::Result<()> {
    for v in mesh.vertices() {
        writeln!(out, "v {} {} {}", fmt_sig9(v.x), fmt_sig9(v.y), fmt_sig9(v.z))?;
    }
    for t in mesh.triangles() {
        writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    Ok(())
}

/// Reads `v` and `f` records; other records are ignored. Faces may use the
/// `i/j/k` form, only the position index is kept.
pub fn read_obj<R: BufRead>(input: R) -> Result<IsoMesh> {
    let bad = |line: usize, what: &str| Error::InvalidInput(format!("obj line {line}: {what}"));
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for (n, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::InvalidInput(format!("obj: {e}")))?;
        let mut fields = line.split_whitespace();
        match fields.next() {
            Some("v") => {
                let xyz: Vec<f64> = fields
                    .take(3)
                    .map(|f| f.parse().map_err(|_| bad(n + 1, "bad coordinate")))
                    .collect::<Result<_>>()?;
                if xyz.len() != 3 {
                    return Err(bad(n + 1, "vertex needs 3 coordinates"));
                }
                vertices.push(Vector3::new(xyz[0], xyz[1], xyz[2]));
            }
            Some("f") => {
                let idx: Vec<usize> = fields
                    .map(|f| {
                        f.split('/')
                            .next()
                            .and_then(|i| i.parse::<usize>().ok())
                            .filter(|&i| i >= 1)
                            .map(|i| i - 1)
                            .ok_or_else(|| bad(n + 1, "bad face index"))
                    })
                    .collect::<Result<_>>()?;
                if idx.len() != 3 {
                    return Err(bad(n + 1, "only triangles are supported"));
                }
                triangles.push([idx[0], idx[1], idx[2]]);
            }
            _ => {}
        }
    }
    IsoMesh::from_parts(vertices, triangles)
}

pub const CONTOUR_CSV_HEADER: &str = "polyline_id,c1,c2";

pub fn write_contour_csv<W: Write>(contours: &ContourSet, mut out: W) -> io::Result<()> {
    writeln!(out, "{CONTOUR_CSV_HEADER}")?;
    for (id, line) in contours.polylines.iter().enumerate() {
        for pt in line {
            writeln!(out, "{id},{},{}", fmt_sig17(pt[0]), fmt_sig17(pt[1]))?;
        }
    }
    Ok(())
}
