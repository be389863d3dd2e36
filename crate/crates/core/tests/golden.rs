use std::fs;
use std::path::PathBuf;

use trilie::algebra::TriBracket;
use trilie::document::{parse_document, serialize_document, Document};
use trilie::families::{instantiate_family, Family, FamilyInstance};

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn family_names() -> Vec<String> {
    (1..=16).map(|i| format!("t{i}.json")).collect()
}

#[test]
fn fixtures_round_trip_byte_for_byte() {
    for name in family_names().into_iter().chain(["a3.json".to_string(), "zero_product.json".to_string()]) {
        let text = fixture(&name);
        let doc = parse_document(&text).unwrap();
        assert_eq!(serialize_document(&doc), text, "{name}");
    }
}

#[test]
fn a3_fixture_is_a3() {
    assert_eq!(parse_document(&fixture("a3.json")).unwrap(), Document::new(TriBracket::a3(), None));
}

/// The fixtures were produced from independently typed tables; the library
/// must rebuild them exactly from their metadata.
#[test]
fn instantiation_matches_fixtures() {
    for name in family_names() {
        let text = fixture(&name);
        let doc = parse_document(&text).unwrap();
        let family: Family = doc.meta["family"].parse().unwrap();
        let params = family.params().iter().map(|p| (*p, doc.meta[p.name()].parse().unwrap())).collect();
        let inst = FamilyInstance::new(family, params).unwrap();
        assert_eq!(Some(inst.product()), doc.product, "{name}");
        assert_eq!(instantiate_family(&inst), inst.product());
        assert_eq!(serialize_document(&Document::from_instance(&inst)), text, "{name}");
    }
}
