//! WebAssembly bindings behind the static demo page in `www/`.
//!
//! Every export takes and returns JSON text. Results come back as
//! `{"ok": …}` or `{"error": "…"}` so the page never has to catch.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use trilie::algebra::CommProduct;
use trilie::classify::{classify as classify_product, Outcome};
use trilie::document::{parse_document, parse_matrix, serialize_document, Document};
use trilie::families::{Family, FamilyInstance, Param};
use trilie::morphisms::{transport_bracket, transport_product, AutoMatrix};
use trilie::rational::Rational;

fn envelope(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => json!({ "ok": v }),
        Err(e) => json!({ "error": e }),
    }
    .to_string()
}

fn document_value(doc: &Document) -> Value {
    serde_json::from_str(&serialize_document(doc)).expect("canonical documents are JSON")
}

/// The sixteen families with their parameter names and subcases.
#[wasm_bindgen]
pub fn families() -> String {
    let list: Vec<Value> = Family::ALL
        .iter()
        .map(|f| {
            let params: Vec<&str> = f.params().iter().map(|p| p.name()).collect();
            json!({ "id": f.to_string(), "params": params, "case": f.case().to_string() })
        })
        .collect();
    envelope(Ok(Value::Array(list)))
}

/// The document of a family instance; `params` maps names to rationals.
#[wasm_bindgen]
pub fn instantiate(family: &str, params: &str) -> String {
    envelope((|| {
        let family: Family = family.parse().map_err(|e| format!("{e}"))?;
        let raw: BTreeMap<String, String> = serde_json::from_str(params).map_err(|e| e.to_string())?;
        let mut values = BTreeMap::new();
        for (k, v) in raw {
            let p: Param = k.parse().map_err(|e| format!("{e}"))?;
            let x: Rational = v.trim().parse().map_err(|e| format!("{k}: {e}"))?;
            values.insert(p, x);
        }
        let inst = FamilyInstance::new(family, values).map_err(|e| e.to_string())?;
        Ok(document_value(&Document::from_instance(&inst)))
    })())
}

/// Pushes a document forward along an invertible matrix.
#[wasm_bindgen]
pub fn transport(document: &str, matrix: &str) -> String {
    envelope((|| {
        let doc = parse_document(document).map_err(|e| e.to_string())?;
        let m = parse_matrix(matrix).and_then(AutoMatrix::new).map_err(|e| e.to_string())?;
        let product = match &doc.product {
            Some(p) => Some(transport_product(p, &m).map_err(|e| e.to_string())?),
            None => None,
        };
        let bracket = transport_bracket(&doc.bracket, &m).map_err(|e| e.to_string())?;
        Ok(document_value(&Document { bracket, product, meta: BTreeMap::new() }))
    })())
}

/// Normalizes the document's product onto a family.
#[wasm_bindgen]
pub fn classify(document: &str) -> String {
    envelope((|| {
        let doc = parse_document(document).map_err(|e| e.to_string())?;
        let p = doc.product.clone().unwrap_or_else(|| CommProduct::zero(doc.bracket.dim()));
        Ok(match classify_product(&doc.bracket, &p) {
            Ok(Outcome::Certificate(c)) => json!({ "result": "certificate", "data": c }),
            Ok(Outcome::NeedsExtension(e)) => json!({ "result": "needs-extension", "data": e }),
            Ok(Outcome::Unclassified(why)) => json!({ "result": "unclassified", "data": { "reason": why } }),
            Err(trilie::Error::NotTransposedPoisson(v)) => {
                json!({ "result": "not-transposed-poisson", "data": { "witness": v.witness } })
            }
            Err(e) => return Err(e.to_string()),
        })
    })())
}
