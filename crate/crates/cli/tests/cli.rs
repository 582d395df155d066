use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> String {
    root().join("crates/core/tests/fixtures").join(name).display().to_string()
}

fn pyts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pyts")).args(args).env_remove("PYTS_VIRTUAL_TABLE").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> Value {
    let o = pyts(args);
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", stdout(&o)))
}

fn validate(schema: &str, instance: &Value) {
    let path = root().join("schemas").join(format!("{schema}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    if let Err(e) = validator.validate(instance) {
        panic!("{instance} does not match the schema: {e}");
    }
}

#[test]
fn check_exit_codes() {
    let file = fixture("protocols.py");
    let o = pyts(&["check", &file, "--subject", "Sub2", "--target", "MyProtocol"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("expected: Self x IntET -> BoolET"));
    let o = pyts(&["check", &file, "--subject", "Sub3", "--target", "MyProtocol"]);
    assert_eq!(o.status.code(), Some(0));
    let o = pyts(&["check", &file, "--subject", "Nope", "--target", "MyProtocol"]);
    assert_eq!(o.status.code(), Some(2));
    let o = pyts(&["check", &file, "--subject", "Sub3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numeric_tower_flag() {
    let file = fixture("protocols.py");
    // Sub1 takes float where int is expected; without the tower even the
    // parameter fails.
    let on = stdout(&pyts(&["check", &file, "--subject", "Sub1", "--target", "MyProtocol"]));
    let off = stdout(&pyts(&["check", &file, "--subject", "Sub1", "--target", "MyProtocol", "--numeric-tower", "false"]));
    assert!(!on.contains("parameter 1"), "{on}");
    assert!(off.contains("parameter 1 (x): IntET is not a subtype of FloatET"), "{off}");
}

#[test]
fn parse_errors_exit_3() {
    let dir = std::env::temp_dir().join(format!("pyts-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.py");
    std::fs::write(&bad, "class C(:\n    pass\n").unwrap();
    let o = pyts(&["elaborate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("syntax error"));
    let o = pyts(&["elaborate", dir.join("missing.py").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(pyts(&["relations"]).status.code(), Some(2));
    assert_eq!(pyts(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(pyts(&["oracle-diff", &fixture("duck.py")]).status.code(), Some(2));
    assert_eq!(pyts(&["elaborate", &fixture("duck.py"), "--format", "dot"]).status.code(), Some(2));
}

#[test]
fn mro_output() {
    let o = pyts(&["mro", &fixture("point.py")]);
    assert_eq!(stdout(&o), "Point -> object\n");
    let o = pyts(&["mro", &fixture("protocols.py"), "--class", "MyProtocol"]);
    assert_eq!(stdout(&o), "MyProtocol -> Protocol -> Generic -> object\n");
}

#[test]
fn relations_dot() {
    let o = pyts(&["relations", &fixture("magic_number.py")]);
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph relations {"));
    assert!(dot.contains("\"MagicNumber\" -> \"SupportsInt\" [style=dotted, label=\"type-instance-of\"];"));
    assert!(dot.contains("\"MagicNumber\" -> \"object\" [style=solid, label=\"subclass-of\"];"));
    assert!(dot.contains("\"MagicNumber\" -> \"type\" [style=dashed, label=\"object-instance-of\"];"));
    assert!(dot.contains("\"SupportsInt\" [shape=ellipse];"));
}

#[test]
fn oracle_diff_classification() {
    let o = pyts(&["oracle-diff", &fixture("protocols.py"), "--oracle", &fixture("oracle/protocols.json")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("[expected] issubclass(Sub1, MyProtocol)"));
    assert!(out.contains("[expected] issubclass(Sub2, MyProtocol)"));
    assert!(!out.contains("Sub3, MyProtocol"));

    // The same record against a corpus where Sub3 no longer has foo.
    let dir = std::env::temp_dir().join(format!("pyts-diff-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let changed = dir.join("protocols.py");
    let src = std::fs::read_to_string(fixture("protocols.py")).unwrap();
    let mut f = std::fs::File::create(&changed).unwrap();
    write!(f, "{}", src.replace("class Sub3:\n    def foo", "class Sub3:\n    def bar")).unwrap();
    let o = pyts(&["oracle-diff", changed.to_str().unwrap(), "--oracle", &fixture("oracle/protocols.json")]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("[UNEXPECTED] issubclass(Sub3, MyProtocol)"));
}

#[test]
fn virtual_table_from_env() {
    let dir = std::env::temp_dir().join(format!("pyts-vt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let table = dir.join("virtual.txt");
    std::fs::write(&table, "Sub2 MyABC\n").unwrap();
    let file = fixture("abc_hooks.py");
    let oracle = fixture("oracle/abc_hooks.json");
    let without = stdout(&pyts(&["oracle-diff", &file, "--oracle", &oracle]));
    assert!(without.contains("issubclass(Sub2, MyABC)"));
    let o = Command::new(env!("CARGO_BIN_EXE_pyts"))
        .args(["oracle-diff", &file, "--oracle", &oracle])
        .env("PYTS_VIRTUAL_TABLE", &table)
        .output()
        .unwrap();
    assert!(!stdout(&o).contains("issubclass(Sub2, MyABC)"), "{}", stdout(&o));
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        vec!["elaborate".to_string(), fixture("abc_hooks.py"), fixture("supports.py")],
        vec!["relations".to_string(), fixture("abc_hooks.py")],
        vec!["elaborate".to_string(), "--format".into(), "json".into(), fixture("mylist.py")],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(pyts(&args).stdout, pyts(&args).stdout, "{args:?}");
    }
}

#[test]
fn json_outputs_match_schemas() {
    for f in ["supports.py", "mylist.py", "point.py", "abc_hooks.py", "protocols.py"] {
        let out = json(&["elaborate", "--format", "json", &fixture(f)]);
        for d in out["definitions"].as_array().unwrap() {
            validate("definition", d);
        }
    }
    for d in json(&["dump-prelude", "--format", "json"]).as_array().unwrap() {
        validate("definition", d);
    }
    for s in ["Sub1", "Sub2", "Sub3"] {
        validate("conformance_report", &json(&["check", "--format", "json", &fixture("protocols.py"), "--subject", s, "--target", "MyProtocol"]));
    }
    let g = json(&["relations", "--format", "json", &fixture("abc_hooks.py")]);
    for e in g["edges"].as_array().unwrap() {
        validate("relation_edge", e);
    }
    for o in ["protocols", "abc_hooks", "magic_number", "mylist", "duck"] {
        let text = std::fs::read_to_string(fixture(&format!("oracle/{o}.json"))).unwrap();
        validate("oracle_record", &serde_json::from_str(&text).unwrap());
    }
}

#[test]
fn elaborate_text() {
    let out = stdout(&pyts(&["elaborate", &fixture("mylist.py")]));
    assert_eq!(
        out,
        "MyListET = ∀T.∃ML<:ListET[T].{pretty_string: ML -> StrET, ...}\nbar: ListET[TypeET]\nfoo: MyListET[IntET]\n"
    );
}

#[test]
fn sequential_flag_matches_default() {
    let file = fixture("abc_hooks.py");
    assert_eq!(pyts(&["relations", &file]).stdout, pyts(&["relations", &file, "--sequential"]).stdout);
}
