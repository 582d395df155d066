#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use pyts_core::frontend::{Project, ProjectOptions};
use pyts_core::types::{alpha_eq, parse_type_with_vars};
use pyts_core::TypeExpr;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn fixture(name: &str) -> Project {
    Project::load_files(&[fixture_path(name)], ProjectOptions::default()).expect("fixture loads")
}

pub fn source(src: &str) -> Project {
    Project::from_sources(&[("t.py".to_string(), src.to_string())], ProjectOptions::default()).expect("source loads")
}

pub fn ty(src: &str) -> TypeExpr {
    parse_type_with_vars(src, &BTreeSet::new()).expect("type parses")
}

pub fn class_type(p: &Project, class: &str) -> TypeExpr {
    p.definition(class).unwrap_or_else(|| panic!("{class} elaborated")).to_type()
}

pub fn assert_alpha(actual: &TypeExpr, expected: &str) {
    let e = ty(expected);
    assert!(alpha_eq(actual, &e), "expected {e}\n   found {actual}");
}

/// Like `assert_alpha`, with `vars` read as free type variables.
pub fn assert_alpha_vars(actual: &TypeExpr, expected: &str, vars: &[&str]) {
    let free: BTreeSet<String> = vars.iter().map(|v| v.to_string()).collect();
    let e = parse_type_with_vars(expected, &free).expect("type parses");
    assert!(alpha_eq(actual, &e), "expected {e}\n   found {actual}");
}
