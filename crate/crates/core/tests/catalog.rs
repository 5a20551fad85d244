use little_core::catalog::{self, registry};
use little_core::syntax::{parse, print};
use little_core::tool::{run, ActiveState, EditorState, Options, Selection};

fn state(src: &str, sels: &[&str]) -> EditorState {
    let p = parse(src).unwrap();
    EditorState::with_selections(p, sels.iter().map(|s| s.parse::<Selection>().unwrap()).collect())
}

fn texts(key: &str, st: &EditorState) -> Vec<String> {
    let t = catalog::tool(key).unwrap();
    run(t.as_ref(), st, &Options::None)
        .unwrap()
        .iter()
        .map(|r| print(&r.code))
        .collect()
}

const RED: &str = "(def redSquare (rect 'red' 100 100 120 80))\n\n(def main (svg [redSquare]))";

#[test]
fn make_equal_red_square() {
    let st = state(RED, &["def:0/bound/arg:4", "def:0/bound/arg:5"]);
    let t = catalog::tool("make_equal_single_var").unwrap();
    assert_eq!(t.active(&st), ActiveState::Active);
    let rs = run(t.as_ref(), &st, &Options::None).unwrap();
    let names: Vec<_> = rs.iter().map(|r| r.description.clone()).collect();
    assert_eq!(
        names,
        [
            "New variable: h",
            "New variable: w",
            "New variable: redSquare1",
            "New variable: x1"
        ]
    );
    assert_eq!(
        print(&rs[1].code),
        "(def redSquare (let w 80 (rect 'red' 100 100 w w)))\n\n(def main (svg [redSquare]))"
    );
    assert!(rs.iter().all(|r| r.safety.is_safe()));
}

#[test]
fn registry_keys_are_unique() {
    let mut keys: Vec<_> = registry().iter().map(|t| t.key()).collect();
    keys.sort();
    let n = keys.len();
    keys.dedup();
    assert_eq!(keys.len(), n);
}

#[test]
fn introduce_variable_in_svg() {
    let st = state(RED, &["def:1/bound/arg:1"]);
    let out = texts("introduce_variable", &st);
    assert_eq!(
        out[0],
        "(def redSquare (rect 'red' 100 100 120 80))\n\n(def main (let shapes [redSquare] (svg shapes)))"
    );
}

#[test]
fn rename_and_capture() {
    let src = "(def x 1)\n(def main (let y 2 (+ x y)))";
    let st = state(src, &["def:0/pat"]);
    let t = catalog::tool("rename").unwrap();
    let r = run(t.as_ref(), &st, &Options::Str("z".into())).unwrap();
    assert_eq!(print(&r[0].code), "(def z 1)\n(def main (let y 2 (+ z y)))");
    assert!(r[0].safety.is_safe());
    let r = run(t.as_ref(), &st, &Options::Str("y".into())).unwrap();
    assert!(!r[0].safety.is_safe());
    assert!(run(t.as_ref(), &st, &Options::Str("1x".into())).is_err());
}

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/fixtures/{name}.little", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn results(key: &str, st: &EditorState) -> Vec<little_core::tool::TransformResult> {
    let t = catalog::tool(key).unwrap();
    run(t.as_ref(), st, &Options::None).unwrap()
}

#[test]
fn move_a_offers_two_renamings() {
    let st = state(&fixture("move_def_a"), &["def:3", "def:1@before"]);
    let rs = results("move_definitions", &st);
    for r in &rs {
        eprintln!("{} {:?}\n{}", r.description, r.safety, print(&r.code));
    }
    assert_eq!(rs.len(), 3);
    assert!(!rs[0].safety.is_safe());
    assert!(rs[1].safety.is_safe() && rs[2].safety.is_safe());
}

#[test]
fn move_b_lifts_dependency() {
    let st = state(&fixture("move_def_b"), &["def:3", "def:1@before"]);
    let rs = results("move_definitions", &st);
    for r in &rs {
        eprintln!("{} {:?}\n{}", r.description, r.safety, print(&r.code));
    }
    assert_eq!(rs.len(), 2);
    assert_eq!(
        print(&rs[1].code),
        "(def a1 1)\n(def a2 a1)\n(def a3 a2)\n(def b 'b')\n(def main [a3 b])\n"
    );
}

#[test]
fn move_c_inverts() {
    let src = fixture("move_def_c");
    let st = state(&src, &["def:2", "def:1@before"]);
    let rs = results("move_definitions", &st);
    for r in &rs {
        eprintln!("{} {:?}\n{}", r.description, r.safety, print(&r.code));
    }
    let inv = rs.iter().find(|r| r.description.contains("solving")).unwrap();
    let once = print(&inv.code);
    let st2 = state(&once, &["def:2", "def:1@before"]);
    let rs2 = results("move_definitions", &st2);
    let inv2 = rs2.iter().find(|r| r.description.contains("solving")).unwrap();
    assert_eq!(print(&inv2.code), src);
}

#[test]
fn move_d_gathers_patterns() {
    let st = state(&fixture("move_def_d"), &["def:2/pat", "def:3/pat", "def:1@before"]);
    let rs = results("move_definitions", &st);
    assert_eq!(
        print(&rs[0].code),
        "(def a \"a\")\n(def [c d] [\"c\" \"d\"])\n(def b \"b\")\n(def main [a b c d])\n"
    );
}

#[test]
fn registry_has_the_full_catalog_in_order() {
    let keys: Vec<_> = registry().iter().map(|t| t.key()).collect();
    assert_eq!(
        keys,
        [
            "create_function_from_definition",
            "create_function_from_arguments",
            "merge",
            "move_definitions",
            "swap_definitions",
            "introduce_variable",
            "add_arguments",
            "remove_arguments",
            "reorder_arguments",
            "reorder_list_items",
            "rename",
            "swap_names_and_usages",
            "inline_definition",
            "duplicate_definition",
            "clean_up",
            "make_single_line",
            "make_multi_line",
            "align",
            "make_equal_single_var",
            "make_equal_by_copying",
            "reorder_expressions",
            "swap_usages",
        ]
    );
    let empty: Vec<_> = registry()
        .iter()
        .filter(|t| t.requirements().is_empty())
        .map(|t| t.key())
        .collect();
    assert_eq!(empty, ["clean_up"]);
}

#[test]
fn nothing_but_clean_up_is_active_without_selections() {
    let st = state(RED, &[]);
    for t in registry() {
        let a = t.active(&st);
        if t.key() == "clean_up" {
            assert_eq!(a, ActiveState::Active);
        } else {
            assert_ne!(a, ActiveState::Active, "{}", t.key());
        }
    }
}

#[test]
fn example_one_menu_offers_both_make_equal_tools() {
    let st = state(RED, &["def:0/bound/arg:4", "def:0/bound/arg:5"]);
    let tools = registry();
    let menu = little_core::tool::menu(&tools, &st);
    let keys: Vec<_> = menu.iter().map(|(t, _)| t.key()).collect();
    assert!(keys.contains(&"make_equal_by_copying"));
    assert!(keys.contains(&"make_equal_single_var"));
    assert!(little_core::tool::menu(&tools, &state(RED, &[])).is_empty());
}

#[test]
fn example_two_menu_offers_create_function() {
    let src = include_str!("../fixtures/task_two_circles.little");
    let tools = registry();
    let menu = little_core::tool::menu(&tools, &state(src, &["def:0"]));
    assert!(menu.iter().any(|(t, _)| t.key() == "create_function_from_definition"));
}
