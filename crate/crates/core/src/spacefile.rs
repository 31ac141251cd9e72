//! The `msw-1` JSON file formats for matrix spaces and single matrices.
//!
//! Validation errors carry the line and column of the offending value.

use std::fmt;

use serde::de::{self, DeserializeSeed, Deserializer, IgnoredAny, MapAccess, SeqAccess, Visitor};
use serde::Serialize;
use serde_json::Value;

use crate::field::FieldSpec;
use crate::matrix::Matrix;
use crate::space::MatrixSpace;

pub const FORMAT_VERSION: &str = "msw-1";

/// A malformed input file, with a 1-based position when one is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FileError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for FileError {}

impl From<serde_json::Error> for FileError {
    fn from(e: serde_json::Error) -> Self {
        // serde_json appends " at line L column C" to custom messages
        let text = e.to_string();
        let message = match text.rfind(" at line ") {
            Some(i) => text[..i].to_string(),
            None => text,
        };
        Self {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

fn top_level_error(message: impl Into<String>) -> FileError {
    FileError {
        line: 1,
        column: 1,
        message: message.into(),
    }
}

#[derive(Serialize)]
struct SpaceFileOut {
    version: &'static str,
    p: u32,
    rows: usize,
    cols: usize,
    basis: Vec<Vec<Vec<u32>>>,
}

#[derive(Serialize)]
struct MatrixFileOut {
    version: &'static str,
    p: u32,
    matrix: Vec<Vec<u32>>,
}

/// Serialize the canonical basis. Entries are written row-major as nested arrays.
pub fn render_space(space: &MatrixSpace, indent: usize) -> String {
    let out = SpaceFileOut {
        version: FORMAT_VERSION,
        p: space.field().p(),
        rows: space.rows(),
        cols: space.cols(),
        basis: space.basis().iter().map(Matrix::to_rows).collect(),
    };
    to_json(&out, indent)
}

pub fn render_matrix(m: &Matrix, indent: usize) -> String {
    let out = MatrixFileOut {
        version: FORMAT_VERSION,
        p: m.field().p(),
        matrix: m.to_rows(),
    };
    to_json(&out, indent)
}

/// Pretty-print with the given indent width; 0 gives compact output.
pub fn to_json<T: Serialize>(value: &T, indent: usize) -> String {
    if indent == 0 {
        return serde_json::to_string(value).expect("serializable");
    }
    let pad = vec![b' '; indent];
    let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
    value.serialize(&mut ser).expect("serializable");
    String::from_utf8(out).expect("utf-8 json")
}

/// Shape information read in a first, lenient pass.
#[derive(Clone, Copy)]
struct Shape {
    p: u32,
    rows: Option<usize>,
    cols: Option<usize>,
}

fn header(text: &str) -> Result<(serde_json::Map<String, Value>, FieldSpec), FileError> {
    let value: Value = serde_json::from_str(text)?;
    let Value::Object(obj) = value else {
        return Err(top_level_error("expected a JSON object"));
    };
    match obj.get("version") {
        Some(Value::String(v)) if v == FORMAT_VERSION => {}
        Some(other) => return Err(top_level_error(format!("unsupported version {other}, expected \"{FORMAT_VERSION}\""))),
        None => return Err(top_level_error("missing field `version`")),
    }
    let p = obj
        .get("p")
        .and_then(Value::as_u64)
        .ok_or_else(|| top_level_error("missing or non-integer field `p`"))?;
    let field = FieldSpec::new(p).map_err(|e| top_level_error(e.to_string()))?;
    Ok((obj, field))
}

fn size_field(obj: &serde_json::Map<String, Value>, key: &str) -> Result<usize, FileError> {
    obj.get(key)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| top_level_error(format!("missing or non-integer field `{key}`")))
}

pub fn parse_space(text: &str) -> Result<MatrixSpace, FileError> {
    let (obj, field) = header(text)?;
    let rows = size_field(&obj, "rows")?;
    let cols = size_field(&obj, "cols")?;
    if rows == 0 || cols == 0 {
        return Err(top_level_error("`rows` and `cols` must be positive"));
    }
    let shape = Shape {
        p: field.p(),
        rows: Some(rows),
        cols: Some(cols),
    };
    let mut de = serde_json::Deserializer::from_str(text);
    let basis = FileSeed { shape, key: "basis" }.deserialize(&mut de)?;
    de.end()?;
    let mats: Vec<Matrix> = basis
        .into_iter()
        .map(|m| Matrix::from_vec(field, rows, cols, m.concat()).expect("validated entries"))
        .collect();
    Ok(MatrixSpace::span(field, rows, cols, &mats).expect("validated shape"))
}

pub fn parse_matrix(text: &str) -> Result<Matrix, FileError> {
    let (_, field) = header(text)?;
    let shape = Shape {
        p: field.p(),
        rows: None,
        cols: None,
    };
    let mut de = serde_json::Deserializer::from_str(text);
    let rows = FileSeed { shape, key: "matrix" }.deserialize(&mut de)?;
    de.end()?;
    let rows = rows.into_iter().next().unwrap_or_default();
    if rows.is_empty() {
        return Err(top_level_error("`matrix` must be nonempty"));
    }
    let (r, c) = (rows.len(), rows[0].len());
    Ok(Matrix::from_vec(field, r, c, rows.concat()).expect("validated entries"))
}

/// Second pass over the whole file: validates the payload key against the
/// shape and rejects unknown keys.
struct FileSeed {
    shape: Shape,
    key: &'static str,
}

impl<'de> DeserializeSeed<'de> for FileSeed {
    type Value = Vec<Vec<Vec<u32>>>;

    fn deserialize<D: Deserializer<'de>>(self, d: D) -> Result<Self::Value, D::Error> {
        d.deserialize_map(self)
    }
}

impl<'de> Visitor<'de> for FileSeed {
    type Value = Vec<Vec<Vec<u32>>>;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an msw-1 object")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
        let mut payload = None;
        while let Some(k) = map.next_key::<String>()? {
            match k.as_str() {
                "version" | "p" | "rows" | "cols" if self.key == "basis" => {
                    map.next_value::<IgnoredAny>()?;
                }
                "version" | "p" if self.key == "matrix" => {
                    map.next_value::<IgnoredAny>()?;
                }
                k if k == self.key => {
                    if payload.is_some() {
                        return Err(de::Error::custom(format!("duplicate field `{k}`")));
                    }
                    payload = Some(if self.key == "basis" {
                        map.next_value_seed(SeqSeed {
                            inner: MatrixSeed(self.shape),
                        })?
                    } else {
                        vec![map.next_value_seed(MatrixSeed(self.shape))?]
                    });
                }
                other => return Err(de::Error::custom(format!("unknown field `{other}`"))),
            }
        }
        payload.ok_or_else(|| de::Error::custom(format!("missing field `{}`", self.key)))
    }
}

/// A JSON array whose elements are read with `inner`.
struct SeqSeed<S> {
    inner: S,
}

impl<'de, S: DeserializeSeed<'de> + Copy> DeserializeSeed<'de> for SeqSeed<S> {
    type Value = Vec<S::Value>;

    fn deserialize<D: Deserializer<'de>>(self, d: D) -> Result<Self::Value, D::Error> {
        d.deserialize_seq(self)
    }
}

impl<'de, S: DeserializeSeed<'de> + Copy> Visitor<'de> for SeqSeed<S> {
    type Value = Vec<S::Value>;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an array")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
        let mut out = Vec::new();
        while let Some(v) = seq.next_element_seed(self.inner)? {
            out.push(v);
        }
        Ok(out)
    }
}

#[derive(Clone, Copy)]
struct MatrixSeed(Shape);

impl<'de> DeserializeSeed<'de> for MatrixSeed {
    type Value = Vec<Vec<u32>>;

    fn deserialize<D: Deserializer<'de>>(self, d: D) -> Result<Self::Value, D::Error> {
        d.deserialize_seq(self)
    }
}

impl<'de> Visitor<'de> for MatrixSeed {
    type Value = Vec<Vec<u32>>;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a matrix given as an array of rows")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
        let mut rows: Vec<Vec<u32>> = Vec::new();
        let mut cols = self.0.cols;
        while let Some(row) = seq.next_element_seed(RowSeed(self.0.p))? {
            match cols {
                Some(c) if c != row.len() => {
                    return Err(de::Error::custom(format!("row has {} entries, expected {c}", row.len())))
                }
                None => cols = Some(row.len()),
                _ => {}
            }
            rows.push(row);
        }
        if let Some(r) = self.0.rows {
            if rows.len() != r {
                return Err(de::Error::custom(format!("matrix has {} rows, expected {r}", rows.len())));
            }
        }
        Ok(rows)
    }
}

#[derive(Clone, Copy)]
struct RowSeed(u32);

impl<'de> DeserializeSeed<'de> for RowSeed {
    type Value = Vec<u32>;

    fn deserialize<D: Deserializer<'de>>(self, d: D) -> Result<Self::Value, D::Error> {
        d.deserialize_seq(self)
    }
}

impl<'de> Visitor<'de> for RowSeed {
    type Value = Vec<u32>;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a row of integers")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
        let mut row = Vec::new();
        while let Some(x) = seq.next_element_seed(EntrySeed(self.0))? {
            row.push(x);
        }
        Ok(row)
    }
}

/// One entry, range-checked while the parser still sits on it.
#[derive(Clone, Copy)]
struct EntrySeed(u32);

impl<'de> DeserializeSeed<'de> for EntrySeed {
    type Value = u32;

    fn deserialize<D: Deserializer<'de>>(self, d: D) -> Result<Self::Value, D::Error> {
        d.deserialize_u64(self)
    }
}

impl<'de> Visitor<'de> for EntrySeed {
    type Value = u32;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "an integer in [0, {})", self.0)
    }

    fn visit_u64<E: de::Error>(self, x: u64) -> Result<u32, E> {
        if x >= self.0 as u64 {
            return Err(E::custom(format!("entry {x} is not in [0, {})", self.0)));
        }
        Ok(x as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::wedge_space;

    #[test]
    fn round_trip_is_byte_identical() {
        let f = FieldSpec::new(3).unwrap();
        let w = wedge_space(f, 3).unwrap();
        let text = render_space(&w, 2);
        let back = parse_space(&text).unwrap();
        assert_eq!(back, w);
        assert_eq!(render_space(&back, 2), text);
    }

    #[test]
    fn canonicalizes_redundant_basis() {
        let text = r#"{"version":"msw-1","p":2,"rows":1,"cols":2,"basis":[[[1,1]],[[1,0]],[[0,1]]]}"#;
        let s = parse_space(text).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(render_space(&s, 0), r#"{"version":"msw-1","p":2,"rows":1,"cols":2,"basis":[[[1,0]],[[0,1]]]}"#);
    }

    #[test]
    fn entry_out_of_range_has_position() {
        let text = "{\n  \"version\": \"msw-1\",\n  \"p\": 3,\n  \"rows\": 1,\n  \"cols\": 2,\n  \"basis\": [\n    [[0, 3]]\n  ]\n}";
        let e = parse_space(text).unwrap_err();
        assert_eq!((e.line, e.column), (7, 10));
        assert!(e.message.contains("entry 3"), "{e}");
    }

    #[test]
    fn shape_errors() {
        let bad_row = r#"{"version":"msw-1","p":3,"rows":1,"cols":2,"basis":[[[0,1,2]]]}"#;
        assert!(parse_space(bad_row).unwrap_err().message.contains("expected 2"));
        let bad_rows = r#"{"version":"msw-1","p":3,"rows":2,"cols":1,"basis":[[[0]]]}"#;
        assert!(parse_space(bad_rows).unwrap_err().message.contains("expected 2"));
        let not_prime = r#"{"version":"msw-1","p":4,"rows":1,"cols":1,"basis":[]}"#;
        assert!(parse_space(not_prime).is_err());
        let version = r#"{"version":"msw-0","p":3,"rows":1,"cols":1,"basis":[]}"#;
        assert!(parse_space(version).unwrap_err().message.contains("version"));
        let extra = r#"{"version":"msw-1","p":3,"rows":1,"cols":1,"basis":[],"x":1}"#;
        assert!(parse_space(extra).unwrap_err().message.contains("unknown field"));
        let syntax = "{\"version\": \"msw-1\",\n \"p\": 3,\n \"rows\": [";
        assert_eq!(parse_space(syntax).unwrap_err().line, 3);
    }

    #[test]
    fn matrix_files() {
        let f = FieldSpec::new(5).unwrap();
        let m = Matrix::from_rows(f, &[[1, 2], [3, 4]]).unwrap();
        assert_eq!(parse_matrix(&render_matrix(&m, 2)).unwrap(), m);
        assert!(parse_matrix(r#"{"version":"msw-1","p":5,"matrix":[[1,2],[3]]}"#).is_err());
        assert!(parse_matrix(r#"{"version":"msw-1","p":5,"matrix":[[5]]}"#).is_err());
    }
}
