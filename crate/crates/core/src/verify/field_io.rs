//! Text format for fields:
//!
//! ```text
//! {"n": 2, "rank": 1,
//!  "components": {"1": [{"exp": [1, 0], "coef": "-1/2"}], "2": []}}
//! ```
//!
//! Keys are comma-separated 1-based index tuples in any order; two keys with
//! the same canonical form are rejected. Coefficients are `"p"` or `"p/q"`.

use crate::error::{Error, Result};
use crate::polygauss::rational::{format_rational, parse_rational};
use crate::polygauss::{PolyGauss, Polynomial, Rational};
use crate::symtensor::{canonical, SymStorage};
use crate::SymField;
use serde::de::{self, DeserializeSeed, MapAccess, SeqAccess, Visitor};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Deserializer, Serialize, Serializer};
use std::collections::BTreeSet;
use std::fmt;

/// Pretty-printed text for `f`, components in canonical order.
pub fn serialize_field(f: &SymField) -> String {
    let mut s = serde_json::to_string_pretty(&FieldOut(f)).expect("field serializes");
    s.push('\n');
    s
}

/// Parses the text format. Syntax and content errors carry line/column.
pub fn parse_field(text: &str) -> Result<SymField> {
    let header: serde_json::Value = serde_json::from_str(text).map_err(parse_error)?;
    let obj = header
        .as_object()
        .ok_or_else(|| positioned("top level must be an object"))?;
    let n = header_usize(obj, "n")?;
    let rank = header_usize(obj, "rank")?;
    if n < 2 {
        return Err(positioned(format!("n must be at least 2, got {n}")));
    }
    let mut de = serde_json::Deserializer::from_str(text);
    let components = FileSeed { n, rank }
        .deserialize(&mut de)
        .map_err(parse_error)?;
    de.end().map_err(parse_error)?;
    let mut f = SymStorage::new(n, rank)?;
    for (key, poly) in components {
        if !poly.is_zero() {
            f.set(&key, PolyGauss::new(poly))?;
        }
    }
    Ok(f)
}

fn header_usize(obj: &serde_json::Map<String, serde_json::Value>, key: &str) -> Result<usize> {
    obj.get(key)
        .and_then(|v| v.as_u64())
        .map(|v| v as usize)
        .ok_or_else(|| positioned(format!("missing or non-integer field {key:?}")))
}

fn positioned(message: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        column: 1,
        message: message.into(),
    }
}

fn parse_error(e: serde_json::Error) -> Error {
    let text = e.to_string();
    let message = match text.rfind(" at line ") {
        Some(i) => text[..i].to_string(),
        None => text,
    };
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message,
    }
}

struct FieldOut<'a>(&'a SymField);
struct ComponentsOut<'a>(&'a SymField);
struct TermsOut<'a>(&'a Polynomial);

#[derive(Serialize)]
struct TermOut<'a> {
    exp: &'a [u32],
    coef: String,
}

impl Serialize for FieldOut<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Field", 3)?;
        st.serialize_field("n", &self.0.n())?;
        st.serialize_field("rank", &self.0.rank())?;
        st.serialize_field("components", &ComponentsOut(self.0))?;
        st.end()
    }
}

impl Serialize for ComponentsOut<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.nnz()))?;
        for (key, value) in self.0.iter() {
            let k: Vec<String> = key.iter().map(|i| i.to_string()).collect();
            map.serialize_entry(&k.join(","), &TermsOut(value.poly()))?;
        }
        map.end()
    }
}

impl Serialize for TermsOut<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.terms().map(|(exp, c)| TermOut {
            exp,
            coef: format_rational(c),
        }))
    }
}

type Components = Vec<(Vec<usize>, Polynomial)>;

struct FileSeed {
    n: usize,
    rank: usize,
}

impl<'de> DeserializeSeed<'de> for FileSeed {
    type Value = Components;

    fn deserialize<D: Deserializer<'de>>(self, d: D) -> std::result::Result<Components, D::Error> {
        d.deserialize_map(self)
    }
}

impl<'de> Visitor<'de> for FileSeed {
    type Value = Components;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an object with \"n\", \"rank\" and \"components\"")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Components, A::Error> {
        let mut components = None;
        let mut seen = BTreeSet::new();
        while let Some(key) = map.next_key::<String>()? {
            if !seen.insert(key.clone()) {
                return Err(de::Error::custom(format!("duplicate field {key:?}")));
            }
            match key.as_str() {
                "n" | "rank" => {
                    map.next_value::<usize>()?;
                }
                "components" => {
                    components = Some(map.next_value_seed(ComponentsSeed {
                        n: self.n,
                        rank: self.rank,
                    })?);
                }
                other => return Err(de::Error::custom(format!("unknown field {other:?}"))),
            }
        }
        components.ok_or_else(|| de::Error::missing_field("components"))
    }
}

struct ComponentsSeed {
    n: usize,
    rank: usize,
}

impl<'de> DeserializeSeed<'de> for ComponentsSeed {
    type Value = Components;

    fn deserialize<D: Deserializer<'de>>(self, d: D) -> std::result::Result<Components, D::Error> {
        d.deserialize_map(self)
    }
}

impl<'de> Visitor<'de> for ComponentsSeed {
    type Value = Components;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a map from index tuples to term lists")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Components, A::Error> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        while let Some(key) = map.next_key::<String>()? {
            let idx = parse_key(&key, self.n, self.rank).map_err(de::Error::custom)?;
            if !seen.insert(idx.clone()) {
                return Err(de::Error::custom(format!(
                    "duplicate component {key:?} (canonical form already present)"
                )));
            }
            let poly = map.next_value_seed(TermsSeed { n: self.n })?;
            out.push((idx, poly));
        }
        Ok(out)
    }
}

fn parse_key(key: &str, n: usize, rank: usize) -> std::result::Result<Vec<usize>, String> {
    let idx: Vec<usize> = if key.trim().is_empty() {
        Vec::new()
    } else {
        key.split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| format!("invalid index tuple {key:?}"))?
    };
    if idx.len() != rank {
        return Err(format!(
            "index tuple {key:?} has length {}, expected {rank}",
            idx.len()
        ));
    }
    if let Some(&bad) = idx.iter().find(|&&i| i == 0 || i > n) {
        return Err(format!("index {bad} in {key:?} is outside 1..={n}"));
    }
    Ok(canonical(&idx))
}

struct TermsSeed {
    n: usize,
}

impl<'de> DeserializeSeed<'de> for TermsSeed {
    type Value = Polynomial;

    fn deserialize<D: Deserializer<'de>>(self, d: D) -> std::result::Result<Polynomial, D::Error> {
        d.deserialize_seq(self)
    }
}

impl<'de> Visitor<'de> for TermsSeed {
    type Value = Polynomial;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a list of {\"exp\", \"coef\"} terms")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Polynomial, A::Error> {
        let mut poly = Polynomial::zero(self.n);
        while let Some((exp, coef)) = seq.next_element_seed(TermSeed { n: self.n })? {
            poly.add_term(exp, coef).map_err(de::Error::custom)?;
        }
        Ok(poly)
    }
}

struct TermSeed {
    n: usize,
}

impl<'de> DeserializeSeed<'de> for TermSeed {
    type Value = (Vec<u32>, Rational);

    fn deserialize<D: Deserializer<'de>>(self, d: D) -> std::result::Result<Self::Value, D::Error> {
        d.deserialize_map(self)
    }
}

impl<'de> Visitor<'de> for TermSeed {
    type Value = (Vec<u32>, Rational);

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a term {\"exp\": [...], \"coef\": \"p/q\"}")
    }

    fn visit_map<A: MapAccess<'de>>(
        self,
        mut map: A,
    ) -> std::result::Result<Self::Value, A::Error> {
        let mut exp: Option<Vec<u32>> = None;
        let mut coef: Option<Rational> = None;
        while let Some(key) = map.next_key::<String>()? {
            match key.as_str() {
                "exp" if exp.is_none() => {
                    let e: Vec<u32> = map.next_value()?;
                    if e.len() != self.n {
                        return Err(de::Error::custom(format!(
                            "exponent has {} entries, expected {}",
                            e.len(),
                            self.n
                        )));
                    }
                    exp = Some(e);
                }
                "coef" if coef.is_none() => {
                    let text: String = map.next_value()?;
                    coef = Some(parse_rational(&text).map_err(de::Error::custom)?);
                }
                "exp" | "coef" => {
                    return Err(de::Error::custom(format!("duplicate field {key:?}")))
                }
                other => return Err(de::Error::custom(format!("unknown field {other:?}"))),
            }
        }
        let exp = exp.ok_or_else(|| de::Error::missing_field("exp"))?;
        let coef = coef.ok_or_else(|| de::Error::missing_field("coef"))?;
        Ok((exp, coef))
    }
}
