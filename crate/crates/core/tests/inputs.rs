use ringlat::analysis::{detect, load_fixture, load_text, Instance};
use ringlat::fixtures::FixtureClass;
use ringlat::report::canonical_hash;
use ringlat::Limits;

fn err_line(text: &str) -> Option<usize> {
    load_text(text, Limits::default()).unwrap_err().line()
}

#[test]
fn kinds_are_detected_by_key() {
    assert_eq!(detect(r#"{"name":"x","ambient":{}}"#).unwrap(), FixtureClass::Extension);
    assert_eq!(detect(r#"{"nodes":[]}"#).unwrap(), FixtureClass::Poset);
    assert_eq!(detect(r#"{"elements":[]}"#).unwrap(), FixtureClass::Labeled);
    assert_eq!(detect(r#"{"components":[]}"#).unwrap(), FixtureClass::Composite);
    assert!(detect(r#"{"something":1}"#).is_err());
    assert!(detect("[1, 2]").is_err());
}

#[test]
fn syntax_errors_point_at_their_line() {
    assert_eq!(err_line("{\n  \"nodes\": [\"a\",\n  \"b\"\n  \"covers\": []\n}"), Some(4));
}

#[test]
fn poset_errors_point_at_the_node() {
    let text = "{\n  \"nodes\": [\"P\", \"M\"],\n  \"covers\": [\n    [\"P\", \"M\"],\n    [\"M\", \"Q\"]\n  ]\n}";
    let e = load_text(text, Limits::default()).unwrap_err();
    assert_eq!(e.line(), Some(5), "{e}");
    let cyclic = "{\n  \"nodes\": [\"P\", \"M\"],\n  \"covers\": [[\"P\", \"M\"],\n  [\"M\", \"P\"]]\n}";
    assert!(load_text(cyclic, Limits::default()).is_err());
}

#[test]
fn labeled_errors_point_at_the_element() {
    let text = r#"{
  "name": "bad",
  "elements": ["R", "S"],
  "covers": [["R", "X"]],
  "maximal_ideals": ["M"],
  "labels": {},
  "integral_closure": "R",
  "prufer_hull": "S",
  "almost_prufer_closure": "S"
}"#;
    assert_eq!(err_line(text), Some(4));
}

#[test]
fn composite_label_clash_is_reported() {
    let text = r#"{
  "name": "clash",
  "components": [
    {"kind": "integral", "label": "a", "extension": {"name": "f", "ambient": {"kind": "gf", "parameters": {"q": 4}}}},
    {"kind": "prufer", "label": "a", "poset": {"nodes": ["M"], "covers": []}}
  ]
}"#;
    let e = load_text(text, Limits::default()).unwrap_err();
    assert!(e.to_string().contains("used twice"), "{e}");
    assert_eq!(e.line(), Some(4));
}

#[test]
fn ring_size_cap_is_an_input_error() {
    let text = r#"{"name": "big", "ambient": {"kind": "gf", "parameters": {"q": 16}}}"#;
    let limits = Limits { size_cap: 8, ..Limits::default() };
    assert!(load_text(text, limits).is_err());
}

#[test]
fn shipped_files_hash_like_their_fixtures() {
    let text = include_str!("../fixtures/decomposed-then-ramified.json");
    let file = load_text(text, Limits::default()).unwrap();
    let fixture = load_fixture("decomposed-then-ramified", Limits::default()).unwrap();
    assert_eq!(canonical_hash(&file.source), canonical_hash(&fixture.source));
    let composite = load_text(include_str!("../fixtures/inert-times-chain.composite.json"), Limits::default()).unwrap();
    match composite.instance {
        Instance::Composite(c) => assert_eq!(c.labeled.len(), 6),
        _ => panic!("expected a composite"),
    }
}
