//! The JSON document format for algebras and matrices.
//!
//! ```json
//! {"dim":3,"bracket":[{"args":[1,2,3],"value":{"1":"1"}}],"product":[{"args":[2,2],"value":{"2":"1/2"}}],"meta":{"family":"T1"}}
//! ```
//!
//! Indices are 1-based; bracket args strictly increase, product args do not
//! decrease; absent entries are zero. [`serialize_document`] is canonical:
//! no whitespace, entries sorted by args, components by index, meta by key,
//! rationals reduced, zero components dropped.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{CommProduct, TriBracket};
use crate::error::{Error, Result};
use crate::families::FamilyInstance;
use crate::linalg::{Matrix, Vector};
use crate::rational::Rational;

/// A bracket, an optional product and free-form string metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub bracket: TriBracket,
    pub product: Option<CommProduct>,
    pub meta: BTreeMap<String, String>,
}

impl Document {
    pub fn new(bracket: TriBracket, product: Option<CommProduct>) -> Self {
        Document { bracket, product, meta: BTreeMap::new() }
    }

    /// `[e1,e2,e3] = e1` with the instance's product, tagged with the family
    /// and its parameters.
    pub fn from_instance(inst: &FamilyInstance) -> Self {
        let mut meta: BTreeMap<String, String> =
            inst.params.iter().map(|(k, v)| (k.name().to_string(), v.to_string())).collect();
        meta.insert("family".into(), inst.family.to_string());
        Document { bracket: TriBracket::a3(), product: Some(inst.product()), meta }
    }
}

/// Component map `{"k": "rational"}`; duplicate keys are rejected while
/// parsing so the error carries a position.
struct Components(Vec<(String, Rational)>);

impl<'de> Deserialize<'de> for Components {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Components;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from component index to rational string")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut m: A) -> std::result::Result<Components, A::Error> {
                let mut out: Vec<(String, Rational)> = Vec::new();
                while let Some((k, v)) = m.next_entry::<String, Rational>()? {
                    if out.iter().any(|(seen, _)| *seen == k) {
                        return Err(de::Error::custom(format!("duplicate component \"{k}\"")));
                    }
                    out.push((k, v));
                }
                Ok(Components(out))
            }
        }
        d.deserialize_map(V)
    }
}

impl Serialize for Components {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

/// Args are checked for order while parsing.
struct Args<const N: usize>([usize; N]);

impl<'de, const N: usize> Deserialize<'de> for Args<N> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        let arr: [usize; N] = v
            .clone()
            .try_into()
            .map_err(|_| de::Error::custom(format!("args must have {N} entries, got {}", v.len())))?;
        // brackets need distinct indices, products only sorted ones
        let ok = arr.windows(2).all(|w| if N == 3 { w[0] < w[1] } else { w[0] <= w[1] });
        if !ok {
            let what = if N == 3 { "strictly increasing" } else { "non-decreasing" };
            return Err(de::Error::custom(format!("non-monotone args {v:?}: must be {what}")));
        }
        Ok(Args(arr))
    }
}

impl<const N: usize> Serialize for Args<N> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry<const N: usize> {
    args: Args<N>,
    value: Components,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    dim: usize,
    bracket: Vec<Entry<3>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    product: Option<Vec<Entry<2>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    meta: Option<BTreeMap<String, String>>,
}

fn json_error(e: serde_json::Error) -> Error {
    let message = e.to_string();
    // serde_json appends " at line L column C"; keep it as the location
    let message = match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message,
    };
    Error::Parse { at: format!("line {} column {}", e.line(), e.column()), message }
}

fn field_error(at: String, message: impl Into<String>) -> Error {
    Error::Parse { at, message: message.into() }
}

fn index_in_range(i: usize, dim: usize, at: impl Fn() -> String) -> Result<()> {
    if (1..=dim).contains(&i) {
        Ok(())
    } else {
        Err(field_error(at(), format!("index {i} out of range 1..={dim}")))
    }
}

fn to_vector(c: &Components, dim: usize, at: &str) -> Result<Vector> {
    let mut v = vec![Rational::zero(); dim];
    for (k, x) in &c.0 {
        let here = || format!("{at}.value.\"{k}\"");
        // canonical decimal only, so "01" cannot alias "1"
        let i = k
            .parse::<usize>()
            .ok()
            .filter(|i| i.to_string() == *k)
            .ok_or_else(|| field_error(here(), format!("component key \"{k}\" is not an index")))?;
        index_in_range(i, dim, here)?;
        v[i - 1] = x.clone();
    }
    Ok(Vector::new(v))
}

fn from_vector(v: &Vector) -> Components {
    Components(
        v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| ((i + 1).to_string(), x.clone())).collect(),
    )
}

/// Reads a document; errors name a line and column for syntax and
/// type problems, or a field path such as `bracket[0].args` otherwise.
pub fn parse_document(text: &str) -> Result<Document> {
    let raw: Raw = serde_json::from_str(text).map_err(json_error)?;
    let dim = raw.dim;
    let mut bracket = TriBracket::zero(dim);
    let mut seen = BTreeSet::new();
    for (n, e) in raw.bracket.iter().enumerate() {
        let at = format!("bracket[{n}]");
        for &i in &e.args.0 {
            index_in_range(i, dim, || format!("{at}.args"))?;
        }
        if !seen.insert(e.args.0) {
            return Err(field_error(format!("{at}.args"), format!("duplicate args {:?}", e.args.0)));
        }
        bracket.set(e.args.0, to_vector(&e.value, dim, &at)?)?;
    }
    let product = match raw.product {
        None => None,
        Some(entries) => {
            let mut p = CommProduct::zero(dim);
            let mut seen = BTreeSet::new();
            for (n, e) in entries.iter().enumerate() {
                let at = format!("product[{n}]");
                for &i in &e.args.0 {
                    index_in_range(i, dim, || format!("{at}.args"))?;
                }
                if !seen.insert(e.args.0) {
                    return Err(field_error(format!("{at}.args"), format!("duplicate args {:?}", e.args.0)));
                }
                let [i, j] = e.args.0;
                p.set(i, j, to_vector(&e.value, dim, &at)?)?;
            }
            Some(p)
        }
    };
    Ok(Document { bracket, product, meta: raw.meta.unwrap_or_default() })
}

/// Canonical bytes; `parse_document` inverts it exactly.
pub fn serialize_document(doc: &Document) -> String {
    let bracket = doc.bracket.entries().map(|(k, v)| Entry { args: Args(*k), value: from_vector(v) }).collect();
    let product = doc
        .product
        .as_ref()
        .map(|p| p.entries().map(|(k, v)| Entry { args: Args(*k), value: from_vector(v) }).collect());
    let raw = Raw { dim: doc.bracket.dim(), bracket, product, meta: (!doc.meta.is_empty()).then(|| doc.meta.clone()) };
    serde_json::to_string(&raw).expect("documents always serialize")
}

/// A square matrix as a JSON array of rows of rational strings.
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let m: Matrix = serde_json::from_str(text).map_err(json_error)?;
    if m.rows() != m.cols() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    Ok(m)
}

pub fn serialize_matrix(m: &Matrix) -> String {
    serde_json::to_string(m).expect("matrices always serialize")
}
