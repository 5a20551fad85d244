//! Property tests over generated programs, checked against the reference
//! implementations in `support`.

mod support;

use little_core::binding::{free_vars, resolve, Resolution};
use little_core::catalog;
use little_core::gen::{program, GenConfig};
use little_core::index::{enumerate_items, hover_in, offset_of, polygons};
use little_core::syntax::{
    canonical, canonical_exp, parse, parse_exp_fragment, print, ItemKind, NodeRef, Program, Step,
};
use little_core::tool::{run, ActiveState, EditorState, Options, Selection};
use proptest::prelude::*;
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use support::{drive, ref_free_vars, ref_resolve_all, HoverOracle, RefRes};

/// `cases` unless `PROPTEST_CASES` says otherwise; failures are reported
/// but not written back to the source tree.
fn config(cases: u32) -> ProptestConfig {
    let cases = std::env::var("PROPTEST_CASES")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(cases);
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn gen(seed: u64) -> (String, Program) {
    let src = program(seed, &GenConfig::default());
    let p = parse(&src).expect("generated programs parse");
    (src, p)
}

fn sel(s: &str) -> Selection {
    s.parse().expect("selection")
}

/// Runs `key` on `p` with selections given as strings and returns the
/// printed text of the first result, if the tool is active.
fn apply(key: &str, p: &Program, sels: &[String]) -> Option<(String, bool)> {
    let tool = catalog::tool(key).expect("tool");
    let st = EditorState::with_selections(p.clone(), sels.iter().map(|s| sel(s)).collect());
    if tool.active(&st) != ActiveState::Active {
        return None;
    }
    let r = run(tool.as_ref(), &st, &Options::None).ok()?.into_iter().next()?;
    Some((print(&r.code), r.safety.is_safe()))
}

fn paths_of(p: &Program, pred: impl Fn(&little_core::index::Item) -> bool) -> Vec<String> {
    enumerate_items(p)
        .iter()
        .filter(|i| pred(i))
        .map(|i| i.path.to_string())
        .collect()
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn printing_is_lossless_and_spans_cover_their_text(seed in any::<u64>()) {
        let (src, p) = gen(seed);
        prop_assert_eq!(print(&p), src.clone());
        for it in enumerate_items(&p) {
            let Ok(NodeRef::Exp(e)) = little_core::syntax::node_at(&p, &it.path) else { continue };
            let a = offset_of(&src, it.span.start.line, it.span.start.col).expect("start");
            let b = offset_of(&src, it.span.end.line, it.span.end.col).expect("end");
            let frag = parse_exp_fragment(&src[a..b])
                .map_err(|e| TestCaseError::fail(format!("{}: {e}", it.path)))?;
            prop_assert_eq!(canonical_exp(&frag), canonical_exp(e), "{}", it.path);
        }
    }

    #[test]
    fn items_survive_reprinting(seed in any::<u64>()) {
        let (src, p) = gen(seed);
        let q = parse(&print(&p)).expect("reparse");
        let key = |p: &Program| {
            enumerate_items(p).into_iter().map(|i| (i.path.to_string(), i.kind, i.span)).collect::<Vec<_>>()
        };
        prop_assert_eq!(key(&p), key(&q));
        prop_assert_eq!(print(&q), src);
    }

    #[test]
    fn resolver_agrees_with_reference(seed in any::<u64>()) {
        let (_, p) = gen(seed);
        let got: Vec<_> = resolve(&p)
            .uses
            .iter()
            .map(|u| {
                let r = match &u.res {
                    Resolution::Bound(b) => RefRes::Bound(*b),
                    Resolution::Primitive(x) | Resolution::Unbound(x) => RefRes::Free(x.clone()),
                };
                (u.id, r)
            })
            .collect();
        let mut want = ref_resolve_all(&p);
        let mut got = got;
        want.sort_by_key(|(id, _)| *id);
        got.sort_by_key(|(id, _)| *id);
        prop_assert_eq!(got, want);
    }

    #[test]
    fn free_variables_agree_with_reference(seed in any::<u64>()) {
        let cfg = GenConfig { free_var_rate: 0.1, ..GenConfig::default() };
        let p = parse(&program(seed, &cfg)).expect("parse");
        for it in enumerate_items(&p) {
            if let Ok(NodeRef::Exp(e)) = little_core::syntax::node_at(&p, &it.path) {
                prop_assert_eq!(free_vars(e), ref_free_vars(e), "{}", it.path);
            }
        }
    }

    #[test]
    fn swapping_definitions_twice_is_identity(seed in any::<u64>(), pick in any::<u64>()) {
        let (src, p) = gen(seed);
        let defs = paths_of(&p, |i| i.kind == ItemKind::Def);
        let mut rng = ChaCha8Rng::seed_from_u64(pick);
        let two: Vec<String> = defs.choose_multiple(&mut rng, 2).cloned().collect();
        if let Some((once, _)) = apply("swap_definitions", &p, &two) {
            let (twice, _) = apply("swap_definitions", &parse(&once).unwrap(), &two).expect("still active");
            prop_assert_eq!(twice, src);
        }
    }

    #[test]
    fn swapping_names_twice_is_identity(seed in any::<u64>(), pick in any::<u64>()) {
        let (src, p) = gen(seed);
        let vars = paths_of(&p, |i| i.kind == ItemKind::Pat);
        let mut rng = ChaCha8Rng::seed_from_u64(pick);
        for key in ["swap_names_and_usages", "swap_usages"] {
            let two: Vec<String> = vars.choose_multiple(&mut rng, 2).cloned().collect();
            if let Some((once, safe)) = apply(key, &p, &two) {
                if !safe {
                    continue;
                }
                let (twice, _) = apply(key, &parse(&once).unwrap(), &two).expect("still active");
                prop_assert_eq!(twice, src.clone(), "{}", key);
            }
        }
    }

    #[test]
    fn rotating_arguments_round_trips(seed in any::<u64>()) {
        let (src, p) = gen(seed);
        // Functions with two or more parameters, by path.
        let funs: Vec<(String, usize)> = enumerate_items(&p)
            .iter()
            .filter(|i| i.path.last() == Some(Step::Param(0)))
            .filter_map(|i| {
                let fun = i.path.parent()?;
                let n = enumerate_items(&p)
                    .iter()
                    .filter(|j| j.path.parent().as_ref() == Some(&fun) && matches!(j.path.last(), Some(Step::Param(_))))
                    .count();
                (n >= 2).then(|| (fun.to_string(), n))
            })
            .collect();
        for (fun, n) in funs {
            let sels = vec![format!("{fun}/param:0"), format!("{fun}/param:{}@after", n - 1)];
            let mut cur = p.clone();
            let mut rotated = 0;
            while rotated < n {
                let Some((text, _)) = apply("reorder_arguments", &cur, &sels) else { break };
                cur = parse(&text).expect("reparse");
                rotated += 1;
            }
            if rotated == n {
                prop_assert_eq!(print(&cur), src.clone(), "{}", fun);
            } else {
                prop_assert_eq!(rotated, 0, "{} stopped part way", fun);
            }
        }
    }

    #[test]
    fn layout_tools_keep_the_tree(seed in any::<u64>(), pick in any::<u64>()) {
        let (_, p) = gen(seed);
        let want = canonical(&p);
        let exps = paths_of(&p, |i| i.kind == ItemKind::Exp);
        let mut rng = ChaCha8Rng::seed_from_u64(pick);
        let mut tries: Vec<(&str, Vec<String>)> = vec![("clean_up", vec![])];
        for _ in 0..4 {
            tries.push(("make_single_line", exps.choose_multiple(&mut rng, 1).cloned().collect()));
            tries.push(("make_multi_line", exps.choose_multiple(&mut rng, 1).cloned().collect()));
            tries.push(("align", exps.choose_multiple(&mut rng, 2).cloned().collect()));
        }
        for (key, sels) in tries {
            if let Some((text, safe)) = apply(key, &p, &sels) {
                let q = parse(&text).map_err(|e| TestCaseError::fail(format!("{key}: {e}\n{text}")))?;
                prop_assert_eq!(canonical(&q), want.clone(), "{}", key);
                prop_assert!(safe, "{}", key);
            }
        }
    }

    #[test]
    fn clean_up_is_idempotent(seed in any::<u64>()) {
        let (_, p) = gen(seed);
        let once = catalog::clean_up(&p);
        let twice = catalog::clean_up(&parse(&print(&once)).unwrap());
        prop_assert_eq!(print(&twice), print(&once));
    }

    #[test]
    fn safe_results_keep_every_binding(seed in any::<u64>(), pick in any::<u64>()) {
        let (_, p) = gen(seed);
        let tools = catalog::registry();
        let mut rng = ChaCha8Rng::seed_from_u64(pick);
        for _ in 0..24 {
            let sels = drive::random_selections(&p, &mut rng);
            let st = EditorState::with_selections(p.clone(), sels);
            for t in &tools {
                drive::check_tool(t.as_ref(), &st, &mut rng).map_err(TestCaseError::fail)?;
            }
        }
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn hover_matches_reference_geometry(seed in any::<u64>()) {
        let cfg = GenConfig { max_defs: 3, max_depth: 3, ..GenConfig::default() };
        let src = program(seed, &cfg);
        let p = parse(&src).expect("parse");
        let polys = polygons(&p);
        let oracle = HoverOracle::new(&p, &src);
        let max = oracle.max_width();
        for line in 1..=oracle.lines() + 1 {
            let mut col = -0.75;
            while col <= max + 1.0 {
                let got = hover_in(&polys, line, col).map(|q| q.owner.to_string());
                prop_assert_eq!(got, oracle.at(line, col), "line {} col {}", line, col);
                col += 0.25;
            }
        }
    }
}

#[test]
fn random_selections_reach_most_tools() {
    let tools = catalog::registry();
    let mut safe = std::collections::BTreeMap::<&str, usize>::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for seed in 0..150 {
        let (_, p) = gen(seed);
        for _ in 0..40 {
            let st = EditorState::with_selections(p.clone(), drive::random_selections(&p, &mut rng));
            for t in &tools {
                let tally = drive::check_tool(t.as_ref(), &st, &mut rng).unwrap();
                *safe.entry(t.key()).or_default() += tally.safe;
            }
        }
    }
    let missing: Vec<_> = tools
        .iter()
        .map(|t| t.key())
        .filter(|k| safe.get(k).copied().unwrap_or(0) == 0)
        .collect();
    assert!(missing.is_empty(), "no safe results from {missing:?}");
}
