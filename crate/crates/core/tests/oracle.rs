mod common;

use common::*;
use pyts_core::oracle::{diff, CheckResult, DivergenceClass, OracleRecord};

fn record(name: &str) -> OracleRecord {
    let text = std::fs::read_to_string(fixture_path(&format!("oracle/{name}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn diverging(name: &str) -> Vec<(String, String, DivergenceClass)> {
    let d = diff(&fixture(&format!("{name}.py")), &record(name));
    d.divergences.into_iter().map(|d| (d.subject, d.target, d.class)).collect()
}

#[test]
fn protocol_presence_checks_are_expected() {
    let e = DivergenceClass::Expected;
    assert_eq!(
        diverging("protocols"),
        vec![("Sub1".into(), "MyProtocol".into(), e), ("Sub2".into(), "MyProtocol".into(), e)]
    );
}

#[test]
fn abc_registrations_and_hooks_are_expected() {
    let d = diverging("abc_hooks");
    assert!(d.iter().all(|(_, _, c)| *c == DivergenceClass::Expected), "{d:?}");
    assert!(d.contains(&("Sub2".into(), "MyABC".into(), DivergenceClass::Expected)));
    assert!(d.contains(&("Sub3".into(), "MyABCHooked".into(), DivergenceClass::Expected)));
    assert!(!d.iter().any(|(s, t, _)| s == "Sub3" && t == "MyABC"));
}

#[test]
fn agreeing_corpora_have_no_divergences() {
    for name in ["magic_number", "duck", "mylist"] {
        assert_eq!(diverging(name), vec![], "{name}");
    }
}

#[test]
fn runtime_mro_matches_static() {
    for name in ["protocols", "abc_hooks", "magic_number", "mylist", "duck"] {
        let p = fixture(&format!("{name}.py"));
        for c in record(name).classes {
            assert_eq!(p.mro(&c.name).unwrap(), c.mro, "{name}: {}", c.name);
            assert_eq!(p.metaclass_of(&c.name).unwrap(), c.metaclass, "{name}: {}", c.name);
        }
    }
}

#[test]
fn unexpected_divergences_are_flagged() {
    let p = source("class A:\n    pass\nclass B:\n    pass\n");
    let mut r = OracleRecord::default();
    r.subclass_checks.push(pyts_core::oracle::SubclassCheck {
        sub: "A".into(),
        sup: "B".into(),
        result: CheckResult::Bool(true),
    });
    let d = diff(&p, &r);
    assert_eq!(d.unexpected().count(), 1);
}

#[test]
fn non_runtime_checkable_protocols_raise() {
    let p = source("from typing import Protocol\nclass P(Protocol):\n    def f(self) -> int: ...\nclass A:\n    pass\n");
    let r: OracleRecord = serde_json::from_str(
        r#"{"classes": [], "subclass_checks": [{"sub": "A", "sup": "P", "result": "error:TypeError"}]}"#,
    )
    .unwrap();
    let d = diff(&p, &r);
    assert_eq!(d.expected().count(), 1);
    assert_eq!(d.unexpected().count(), 0);
}
