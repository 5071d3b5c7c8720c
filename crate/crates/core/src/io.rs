//! Canonical JSON documents: sorted keys, floats with 17 significant digits,
//! a top-level `schema_version`, and atomic file writes.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::ser::Formatter;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::reps::FunctionRep;
use crate::weights::Weight;

pub const SCHEMA_VERSION: u64 = 1;

struct CanonicalFormatter;

impl Formatter for CanonicalFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Canonical text of any serializable value; objects gain `schema_version`,
/// anything else is wrapped as `{"data": …, "schema_version": 1}`.
pub fn to_canonical_string<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value)?;
    match &mut v {
        Value::Object(map) => {
            map.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
        }
        _ => {
            let mut map = serde_json::Map::new();
            map.insert("data".into(), v);
            map.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
            v = Value::Object(map);
        }
    }
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, CanonicalFormatter);
    v.serialize(&mut ser)?;
    out.push(b'\n');
    String::from_utf8(out).map_err(|e| Error::Parse(e.to_string()))
}

/// Parses a canonical document, checking and stripping `schema_version`.
pub fn from_canonical_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    let mut v: Value = serde_json::from_str(text)?;
    if let Value::Object(map) = &mut v {
        match map.remove("schema_version") {
            None => {}
            Some(Value::Number(n)) if n.as_u64() == Some(SCHEMA_VERSION) => {}
            Some(other) => return Err(Error::Parse(format!("unsupported schema_version {other}"))),
        }
        if map.len() == 1 && map.contains_key("data") {
            v = map.remove("data").expect("checked");
        }
    }
    Ok(serde_json::from_value(v)?)
}

/// Writes through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = Path::new(&tmp);
    fs::write(tmp, contents)?;
    fs::rename(tmp, path)?;
    Ok(())
}

pub fn write_document<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_atomic(path, &to_canonical_string(value)?)
}

pub fn read_document<T: DeserializeOwned>(path: &Path) -> Result<T> {
    from_canonical_str(&fs::read_to_string(path)?)
}

pub fn read_function(path: &Path) -> Result<FunctionRep> {
    read_document(path)
}

pub fn read_weight(path: &Path) -> Result<Weight> {
    let w: Weight = read_document(path)?;
    w.validate()?;
    Ok(w)
}

/// Serde adapter keeping `±∞` and `NaN` representable: they travel as the
/// strings `"inf"`, `"-inf"`, `"nan"`.
pub mod extended_float {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    fn to_repr(x: f64) -> Repr {
        if x.is_finite() {
            Repr::Num(x)
        } else if x.is_nan() {
            Repr::Text("nan".into())
        } else if x > 0.0 {
            Repr::Text("inf".into())
        } else {
            Repr::Text("-inf".into())
        }
    }

    fn from_repr<E: serde::de::Error>(r: Repr) -> std::result::Result<f64, E> {
        match r {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(E::custom(format!("expected a number, 'inf', '-inf' or 'nan', got '{other}'"))),
            },
        }
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_repr(*x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        from_repr(Repr::deserialize(d)?)
    }

    pub mod pair {
        use super::*;

        pub fn serialize<S: Serializer>(x: &(f64, f64), s: S) -> std::result::Result<S::Ok, S::Error> {
            (to_repr(x.0), to_repr(x.1)).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<(f64, f64), D::Error> {
            let (a, b) = <(Repr, Repr)>::deserialize(d)?;
            Ok((from_repr(a)?, from_repr(b)?))
        }
    }
}
