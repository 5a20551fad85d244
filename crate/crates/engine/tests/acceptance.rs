//! End-to-end acceptance checks. Each check prints one PASS or FAIL line
//! with its measured value and the tolerance it is held to; the test fails
//! if any line is FAIL. It runs without the test harness so the lines are
//! always shown.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use little_core::catalog;
use little_core::gen::{expression_pair, program, GenConfig};
use little_core::index::{dump_polygons, enumerate_items, hover_in, polygons};
use little_core::syntax::{canonical, parse, print, Exp, ExpKind, ItemKind, Pat, PatKind, Program, Step};
use little_core::tool::{menu, run, ActiveState, EditorState, Options, Selection, TransformResult};
use little_engine::Session;

use support::{drive, HoverOracle};

struct Report {
    lines: Vec<(bool, String)>,
}

impl Report {
    fn check(&mut self, name: &str, pass: bool, detail: String) {
        let line = format!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        println!("{line}");
        self.lines.push((pass, line));
    }
}

fn core_fixtures() -> Vec<(String, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures");
    let mut paths: Vec<PathBuf> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    paths
        .into_iter()
        .filter(|p| p.extension().is_some_and(|x| x == "little"))
        .map(|p| {
            (
                p.file_stem().unwrap().to_string_lossy().into_owned(),
                fs::read_to_string(&p).unwrap(),
            )
        })
        .collect()
}

fn fixture(name: &str) -> String {
    core_fixtures().into_iter().find(|(n, _)| n == name).unwrap().1
}

fn state(src: &str, sels: &[&str]) -> EditorState {
    let sels = sels.iter().map(|s| s.parse::<Selection>().unwrap()).collect();
    EditorState::with_selections(parse(src).unwrap(), sels)
}

fn results(key: &str, st: &EditorState) -> Vec<TransformResult> {
    let t = catalog::tool(key).unwrap();
    if t.active(st) != ActiveState::Active {
        return Vec::new();
    }
    run(t.as_ref(), st, &Options::None).unwrap_or_default()
}

fn same_tree(a: &str, b: &str) -> bool {
    matches!((parse(a), parse(b)), (Ok(x), Ok(y)) if canonical(&x) == canonical(&y))
}

fn round_trip(r: &mut Report) {
    let fixtures = core_fixtures();
    let tasks: Vec<usize> = fixtures
        .iter()
        .filter(|(n, _)| n.starts_with("task_"))
        .map(|(_, s)| s.lines().count())
        .collect();
    let start = Instant::now();
    let exact = fixtures
        .iter()
        .filter(|(_, s)| parse(s).map(|p| print(&p) == *s).unwrap_or(false))
        .count();
    let took = start.elapsed();
    let pass = fixtures.len() >= 20
        && exact == fixtures.len()
        && tasks.len() == 6
        && tasks.iter().all(|n| (7..=11).contains(n))
        && took < Duration::from_secs(1);
    r.check(
        "round_trip",
        pass,
        format!(
            "{exact}/{} fixtures byte-exact (need >= 20, all), task programs {tasks:?} lines (need six, 7..=11), {took:.1?} (< 1s)",
            fixtures.len()
        ),
    );
}

fn example_one(r: &mut Report) {
    let src = fixture("example1_red_square");
    let st = state(&src, &["def:0/bound/arg:4", "def:0/bound/arg:5"]);
    let tools = catalog::registry();
    let in_menu = menu(&tools, &st)
        .iter()
        .any(|(t, _)| t.key() == "make_equal_single_var");
    let rs = results("make_equal_single_var", &st);
    let names: Vec<&str> = rs
        .iter()
        .filter_map(|x| x.description.strip_prefix("New variable: "))
        .collect();
    let applied = rs
        .iter()
        .find(|x| x.description == "New variable: w")
        .map(|x| print(&x.code));
    let want = "(def redSquare (let w 80 (rect 'red' 100 100 w w)))\n\n(def main (svg [redSquare]))\n";
    let exact = applied.as_deref().is_some_and(|t| same_tree(t, want));
    let pass = in_menu && rs.len() == 4 && names.len() == 4 && names.contains(&"w") && names.contains(&"h") && exact;
    r.check(
        "example_1_make_equal",
        pass,
        format!(
            "menu={in_menu}, names {names:?} (need exactly 4 incl. w, h), applying w gives `w w` bound to 80: {exact}"
        ),
    );
}

fn example_two(r: &mut Report) {
    let src = fixture("task_two_circles");
    let rs = results("create_function_from_definition", &state(&src, &["def:0"]));
    let Some(named) = rs
        .iter()
        .map(|x| print(&x.code))
        .find(|t| t.contains("(\\(startX endY startY endX)"))
    else {
        r.check(
            "example_2_create_and_reorder",
            false,
            format!("no named result among {}", rs.len()),
        );
        return;
    };
    let calls_rewritten = named.contains("(svg (connectedCircles 100 300 150 400))");
    let sels = [
        "def:0/bound/param:2",
        "def:0/bound/param:3",
        "def:0/bound/param:0@after",
    ];
    let rs = results("reorder_arguments", &state(&named, &sels));
    let reordered = rs.first().map(|x| (print(&x.code), x.safety.is_safe()));
    let ok = reordered.as_ref().is_some_and(|(t, safe)| {
        *safe && t.contains("(\\(startX startY endX endY)") && t.contains("(connectedCircles 100 150 400 300)")
    });
    r.check(
        "example_2_create_and_reorder",
        calls_rewritten && ok,
        format!(
            "uses rewritten to calls: {calls_rewritten}, params and call reordered to startX startY endX endY: {ok}"
        ),
    );
}

fn move_definitions(r: &mut Report) {
    let mut notes = Vec::new();
    let st = state(&fixture("move_def_a"), &["def:3", "def:1@before"]);
    let rs = results("move_definitions", &st);
    let unsafe_ = rs.iter().filter(|x| !x.safety.is_safe()).count();
    let renamings = rs
        .iter()
        .filter(|x| x.safety.is_safe() && x.description.contains("renaming"))
        .count();
    let a = rs.len() == 3 && unsafe_ == 1 && renamings == 2;
    notes.push(format!(
        "(a) {} results, {unsafe_} unsafe, {renamings} safe renamings",
        rs.len()
    ));

    let st = state(&fixture("move_def_b"), &["def:3", "def:1@before"]);
    let rs = results("move_definitions", &st);
    let lift = rs.iter().find(|x| x.safety.is_safe()).map(|x| print(&x.code));
    let b = rs.len() == 2
        && lift.as_deref() == Some("(def a1 1)\n(def a2 a1)\n(def a3 a2)\n(def b 'b')\n(def main [a3 b])\n");
    notes.push(format!("(b) {} results, a2 lifted: {b}", rs.len()));

    let src = fixture("move_def_c");
    let sels = ["def:2", "def:1@before"];
    let invert = |text: &str| {
        results("move_definitions", &state(text, &sels))
            .into_iter()
            .find(|x| x.description.contains("solving"))
            .map(|x| print(&x.code))
    };
    let c = invert(&src)
        .and_then(|once| invert(&once))
        .is_some_and(|twice| twice == src);
    notes.push(format!("(c) inversion twice is identity: {c}"));

    let src = fixture("move_def_d");
    let pats = results(
        "move_definitions",
        &state(&src, &["def:2/pat", "def:3/pat", "def:1@before"]),
    );
    let tuple = pats.first().map(|x| print(&x.code));
    let d1 =
        tuple.as_deref() == Some("(def a \"a\")\n(def [c d] [\"c\" \"d\"])\n(def b \"b\")\n(def main [a b c d])\n");
    let defs = results("move_definitions", &state(&src, &["def:2", "def:3", "def:1@before"]));
    let d2 = defs.first().is_some_and(|x| {
        print(&x.code) == "(def a \"a\")\n(def c \"c\")\n(def d \"d\")\n(def b \"b\")\n(def main [a b c d])\n"
    });
    notes.push(format!("(d) patterns make one tuple: {d1}, definitions stay two: {d2}"));

    r.check("move_definitions_suite", a && b && c && d1 && d2, notes.join("; "));
}

/// Structure-only view of an expression for the anti-unification oracle:
/// a label that must agree for two nodes to be shared, the number of
/// pattern nodes the label carries, and the child expressions.
struct Shape {
    label: String,
    pat_nodes: usize,
    kids: Vec<Shape>,
}

fn pat_text(p: &Pat, nodes: &mut usize) -> String {
    *nodes += 1;
    match &p.kind {
        PatKind::Num(n) => n.text.clone(),
        PatKind::Str(s) => format!("{:?}", s.content),
        PatKind::Bool(b) => b.to_string(),
        PatKind::Var(x) => x.clone(),
        PatKind::List { elems, tail, .. } => {
            let inner: Vec<String> = elems.iter().map(|e| pat_text(e, nodes)).collect();
            let tail = tail
                .as_ref()
                .map(|t| format!("|{}", pat_text(&t.node, nodes)))
                .unwrap_or_default();
            format!("[{}{tail}]", inner.join(" "))
        }
    }
}

fn shape(e: &Exp) -> Shape {
    let mut pat_nodes = 0;
    let (label, kids): (String, Vec<&Exp>) = match &e.kind {
        ExpKind::Num(n) => (format!("num {} {} {:?}", n.text, n.frozen, n.range), vec![]),
        ExpKind::Str(s) => (format!("str {:?}", s.content), vec![]),
        ExpKind::Bool(b) => (format!("bool {b}"), vec![]),
        ExpKind::Var(x) => (format!("var {x}"), vec![]),
        ExpKind::Fun { params, body, .. } => {
            let ps: Vec<String> = params.pats.iter().map(|p| pat_text(p, &mut pat_nodes)).collect();
            (format!("fun {}", ps.join(" ")), vec![body])
        }
        ExpKind::App { head, args, .. } => (
            format!("app {}", args.len()),
            std::iter::once(&**head).chain(args).collect(),
        ),
        ExpKind::List { elems, tail, .. } => (
            format!("list {} {}", elems.len(), tail.is_some()),
            elems.iter().chain(tail.as_ref().map(|t| &*t.node)).collect(),
        ),
        ExpKind::Let { def, body, .. } => {
            let p = pat_text(&def.pat, &mut pat_nodes);
            (format!("let {} {p}", def.rec), vec![&def.bound, body])
        }
        ExpKind::Case {
            scrutinee, branches, ..
        } => {
            let ps: Vec<String> = branches.iter().map(|b| pat_text(&b.pat, &mut pat_nodes)).collect();
            (
                format!("case {}", ps.join(" ")),
                std::iter::once(&**scrutinee)
                    .chain(branches.iter().map(|b| &b.body))
                    .collect(),
            )
        }
    };
    Shape {
        label,
        pat_nodes,
        kids: kids.into_iter().map(shape).collect(),
    }
}

fn flat(s: &Shape) -> String {
    let kids: Vec<String> = s.kids.iter().map(flat).collect();
    format!("({} {})", s.label, kids.join(" "))
}

/// Node count of the most specific common template of `a` and `b`, with
/// each differing pair of subtrees recorded as a hole.
fn anti_unify(a: &Shape, b: &Shape, holes: &mut Vec<(String, String)>) -> usize {
    if a.label != b.label || a.kids.len() != b.kids.len() {
        let key = (flat(a), flat(b));
        if !holes.contains(&key) {
            holes.push(key);
        }
        return 1;
    }
    1 + a.pat_nodes
        + a.kids
            .iter()
            .zip(&b.kids)
            .map(|(x, y)| anti_unify(x, y, holes))
            .sum::<usize>()
}

fn merge_threshold(r: &mut Report) {
    let tools = catalog::registry();
    let mut agree = 0;
    let mut offered = 0;
    let mut first_miss = None;
    let n = 200;
    for seed in 0..n {
        let rate = [0.05, 0.15, 0.3, 0.6][seed as usize % 4];
        let (a, b) = expression_pair(seed, 3, rate);
        let src = format!("(def main [{a} {b}])");
        let p = parse(&src).unwrap();
        let ExpKind::List { elems, .. } = &p.defs[0].bound.kind else {
            unreachable!()
        };
        let mut holes = Vec::new();
        let body_nodes = anti_unify(&shape(&elems[0]), &shape(&elems[1]), &mut holes);
        let expected = body_nodes >= 2 * holes.len();
        let st = state(&src, &["def:0/bound/elem:0", "def:0/bound/elem:1"]);
        let present = menu(&tools, &st).iter().any(|(t, _)| t.key() == "merge");
        offered += present as usize;
        if present == expected {
            agree += 1;
        } else if first_miss.is_none() {
            first_miss = Some(format!("{src} (nodes {body_nodes}, args {})", holes.len()));
        }
    }
    r.check(
        "merge_threshold",
        agree == n && offered > 0 && offered < n as usize,
        format!(
            "{agree}/{n} pairs agree with bodyNodes >= 2*args (need all), offered on {offered}{}",
            first_miss
                .map(|m| format!(", first disagreement {m}"))
                .unwrap_or_default()
        ),
    );
}

fn safety(r: &mut Report) {
    let tools = catalog::registry();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut safe, mut unsafe_) = (0, 0);
    let mut failure = None;
    let start = Instant::now();
    let mut seed = 0;
    while safe < 1000 && failure.is_none() && seed < 2000 {
        let src = program(seed, &GenConfig::default());
        let p = parse(&src).unwrap();
        seed += 1;
        for _ in 0..8 {
            let st = EditorState::with_selections(p.clone(), drive::random_selections(&p, &mut rng));
            for t in &tools {
                match drive::check_tool(t.as_ref(), &st, &mut rng) {
                    Ok(tally) => {
                        safe += tally.safe;
                        unsafe_ += tally.unsafe_;
                    }
                    Err(e) => failure = Some(e),
                }
            }
        }
    }
    let took = start.elapsed();
    let pass = failure.is_none() && safe >= 1000 && took < Duration::from_secs(30);
    r.check(
        "safety_soundness",
        pass,
        format!(
            "{safe} safe results kept every binding (need >= 1000), {unsafe_} unsafe conflicts confirmed, {seed} programs, {took:.1?} (< 30s){}",
            failure.map(|e| format!(", violation: {e}")).unwrap_or_default()
        ),
    );
}

fn apply_first(key: &str, p: &Program, sels: &[String]) -> Option<(String, bool)> {
    let sels: Vec<&str> = sels.iter().map(String::as_str).collect();
    let st = EditorState::with_selections(p.clone(), sels.iter().map(|s| s.parse().unwrap()).collect());
    let r = results(key, &st).into_iter().next()?;
    Some((print(&r.code), r.safety.is_safe()))
}

fn paths(p: &Program, kind: ItemKind) -> Vec<String> {
    enumerate_items(p)
        .iter()
        .filter(|i| i.kind == kind)
        .map(|i| i.path.to_string())
        .collect()
}

/// The first pair of `candidates`, in random order, on which `key` gives a
/// result (a safe one when `safe_only`), with that result's text.
fn first_active(
    key: &str,
    p: &Program,
    candidates: &[String],
    safe_only: bool,
    rng: &mut ChaCha8Rng,
) -> Option<(Vec<String>, String)> {
    let mut pairs: Vec<Vec<String>> = Vec::new();
    for (i, a) in candidates.iter().enumerate() {
        for b in &candidates[i + 1..] {
            pairs.push(vec![a.clone(), b.clone()]);
        }
    }
    pairs.shuffle(rng);
    pairs
        .into_iter()
        .take(20)
        .find_map(|two| match apply_first(key, p, &two) {
            Some((text, safe)) if safe || !safe_only => Some((two, text)),
            _ => None,
        })
}

fn involutions(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (mut defs, mut names, mut rotations) = (0, 0, 0);
    let mut broken = Vec::new();
    for seed in 0..100 {
        let src = program(10_000 + seed, &GenConfig::default());
        let p = parse(&src).unwrap();

        // `main` is never swapped, so pairs come from the other definitions.
        let mut ds = paths(&p, ItemKind::Def);
        ds.pop();
        if let Some((two, once)) = first_active("swap_definitions", &p, &ds, false, &mut rng) {
            defs += 1;
            let twice = apply_first("swap_definitions", &parse(&once).unwrap(), &two);
            if twice.map(|t| t.0) != Some(src.clone()) {
                broken.push(format!("swap_definitions on program {seed}"));
            }
        }

        let pats = paths(&p, ItemKind::Pat);
        if let Some((two, once)) = first_active("swap_names_and_usages", &p, &pats, true, &mut rng) {
            names += 1;
            let twice = apply_first("swap_names_and_usages", &parse(&once).unwrap(), &two);
            if twice.map(|t| t.0) != Some(src.clone()) {
                broken.push(format!("swap_names_and_usages on program {seed}"));
            }
        }

        let items = enumerate_items(&p);
        for fun in items
            .iter()
            .filter(|i| i.path.last() == Some(Step::Param(0)))
            .filter_map(|i| i.path.parent())
        {
            let n = items
                .iter()
                .filter(|j| j.path.parent().as_ref() == Some(&fun) && matches!(j.path.last(), Some(Step::Param(_))))
                .count();
            if n < 2 {
                continue;
            }
            let sels = vec![format!("{fun}/param:0"), format!("{fun}/param:{}@after", n - 1)];
            let mut cur = p.clone();
            let mut done = 0;
            while done < n {
                let Some((text, _)) = apply_first("reorder_arguments", &cur, &sels) else {
                    break;
                };
                cur = parse(&text).unwrap();
                done += 1;
            }
            if done == n {
                rotations += 1;
                if print(&cur) != src {
                    broken.push(format!("reorder_arguments on {fun} of program {seed}"));
                }
            } else if done > 0 {
                broken.push(format!(
                    "reorder_arguments stopped after {done} of {n} on {fun} of program {seed}"
                ));
            }
        }
    }
    let pass = broken.is_empty() && defs >= 60 && names >= 75 && rotations >= 50;
    r.check(
        "involutions",
        pass,
        format!(
            "100 programs: swap_definitions^2 on {defs} (need >= 60), swap_names_and_usages^2 on {names} (need >= 75), full argument rotations on {rotations} (need >= 50), {} mismatches{}",
            broken.len(),
            broken.first().map(|b| format!(", first {b}")).unwrap_or_default()
        ),
    );
}

fn geometry(r: &mut Report) {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut goldens: Vec<PathBuf> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "little"))
        .collect();
    goldens.sort();
    let matching = goldens
        .iter()
        .filter(|p| {
            let dump = dump_polygons(&parse(&fs::read_to_string(p).unwrap()).unwrap());
            fs::read_to_string(p.with_extension("polygons")).is_ok_and(|want| want == dump)
        })
        .count();

    let mut programs: Vec<(String, String)> = core_fixtures();
    programs.extend(
        goldens
            .iter()
            .map(|p| (p.display().to_string(), fs::read_to_string(p).unwrap())),
    );
    let mut points = 0usize;
    let mut miss = None;
    for (name, src) in &programs {
        let p = parse(src).unwrap();
        let polys = polygons(&p);
        let oracle = HoverOracle::new(&p, src);
        for line in 1..=oracle.lines() + 1 {
            let mut col = -0.75;
            while col <= oracle.max_width() + 1.0 {
                points += 1;
                let got = hover_in(&polys, line, col).map(|q| q.owner.to_string());
                let want = oracle.at(line, col);
                if got != want && miss.is_none() {
                    miss = Some(format!("{name} at {line}:{col}: {got:?} vs {want:?}"));
                }
                col += 0.25;
            }
        }
    }
    r.check(
        "geometry",
        matching == 4 && goldens.len() == 4 && miss.is_none(),
        format!(
            "{matching}/{} polygon goldens match (need 4), hover agrees with the oracle on {points} quarter cells of {} programs{}",
            goldens.len(),
            programs.len(),
            miss.map(|m| format!(", first mismatch {m}")).unwrap_or_default()
        ),
    );
}

fn protocol(r: &mut Report) {
    let src = fixture("example1_red_square");
    let script: Vec<String> = [
        json!({"cmd": "load", "text": src}),
        json!({"cmd": "select", "id": "def:0/bound/arg:4"}),
        json!({"cmd": "select", "id": "def:0/bound/arg:5"}),
        json!({"cmd": "tools"}),
        json!({"cmd": "run", "tool": "make_equal_single_var"}),
        json!({"cmd": "preview", "tool": "make_equal_single_var", "index": 0}),
        json!({"cmd": "state"}),
        json!({"cmd": "apply", "tool": "make_equal_single_var", "index": 0}),
        json!({"cmd": "undo"}),
        json!({"cmd": "state"}),
    ]
    .iter()
    .map(Value::to_string)
    .collect();
    let transcript = || {
        let mut s = Session::new();
        script.iter().map(|l| s.handle_line(l) + "\n").collect::<Vec<String>>()
    };
    let (a, b) = (transcript(), transcript());
    let identical = a == b && a.iter().all(|l| l.contains("\"ok\":true"));
    let result = |l: &str| serde_json::from_str::<Value>(l).unwrap()["result"].clone();
    let before = result(&a[6]);
    let after = result(&a[9]);
    let applied = result(&a[7]);
    let restored = before == after
        && after["text"] == src
        && after["selections"] == json!(["def:0/bound/arg:4", "def:0/bound/arg:5"])
        && applied["text"] != src;
    r.check(
        "protocol",
        identical && restored,
        format!("{}-step transcript byte-identical across two runs: {identical}, undo restores text and selections: {restored}", script.len()),
    );
}

fn main() {
    let mut r = Report { lines: Vec::new() };
    round_trip(&mut r);
    example_one(&mut r);
    example_two(&mut r);
    move_definitions(&mut r);
    merge_threshold(&mut r);
    safety(&mut r);
    involutions(&mut r);
    geometry(&mut r);
    protocol(&mut r);
    let failed: Vec<&String> = r.lines.iter().filter(|(ok, _)| !ok).map(|(_, l)| l).collect();
    println!("{} of {} criteria passed", r.lines.len() - failed.len(), r.lines.len());
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
