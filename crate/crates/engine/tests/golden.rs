//! Hover polygon goldens. Each `tests/golden/*.little` program has a
//! `.polygons` file holding its exact dump; set `UPDATE_GOLDEN=1` to
//! rewrite them after an intended change.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use little_core::index::{dump_polygons, enumerate_targets};
use little_core::syntax::parse;

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn programs() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = fs::read_dir(golden_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "little"))
        .collect();
    out.sort();
    out
}

/// A parsed dump row: owner, z, cells as (line, lo, hi).
type Row = (String, u32, Vec<(u32, f64, f64)>);

fn rows(name: &str) -> Vec<Row> {
    let src = fs::read_to_string(golden_dir().join(name)).unwrap();
    dump_polygons(&parse(&src).unwrap())
        .lines()
        .map(|l| {
            let mut parts = l.split(' ');
            let owner = parts.next().unwrap().to_string();
            let z = parts.next().unwrap().parse().unwrap();
            let cells = parts
                .map(|c| {
                    let v: Vec<&str> = c.split(':').collect();
                    (v[0].parse().unwrap(), v[1].parse().unwrap(), v[2].parse().unwrap())
                })
                .collect();
            (owner, z, cells)
        })
        .collect()
}

fn cells_of<'a>(rows: &'a [Row], owner: &str) -> Option<&'a [(u32, f64, f64)]> {
    rows.iter().find(|r| r.0 == owner).map(|r| r.2.as_slice())
}

#[test]
fn polygon_dumps_match_goldens() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let programs = programs();
    assert_eq!(programs.len(), 4);
    for path in programs {
        let src = fs::read_to_string(&path).unwrap();
        let dump = dump_polygons(&parse(&src).unwrap());
        let golden = path.with_extension("polygons");
        if update {
            fs::write(&golden, &dump).unwrap();
            continue;
        }
        let want = fs::read_to_string(&golden).unwrap_or_else(|_| panic!("missing {}", golden.display()));
        assert_eq!(dump, want, "{}", path.display());
    }
}

#[test]
fn cli_prints_the_golden_dump() {
    let path = golden_dir().join("newline_split.little");
    let out = Command::new(env!("CARGO_BIN_EXE_engine"))
        .arg("dump-polygons")
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let want = fs::read_to_string(path.with_extension("polygons")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), want);
}

#[test]
fn equivalent_gaps_share_one_polygon() {
    let rows = rows("redundant_gaps.little");
    // After 1 and before 2 are the same gap: one polygon, named after the
    // following item.
    assert_eq!(
        cells_of(&rows, "def:0/bound/elem:1@before"),
        Some(&[(1, 12.0, 13.0)][..])
    );
    assert!(cells_of(&rows, "def:0/bound/elem:0@after").is_none());
    let src = fs::read_to_string(golden_dir().join("redundant_gaps.little")).unwrap();
    let targets = enumerate_targets(&parse(&src).unwrap());
    let t = targets
        .iter()
        .find(|t| t.id.to_string() == "def:0/bound/elem:1@before")
        .unwrap();
    let aliases: Vec<String> = t.aliases.iter().map(ToString::to_string).collect();
    assert!(aliases.contains(&"def:0/bound/elem:0@after".to_string()));
    // The two-space gap is still one polygon.
    assert_eq!(
        cells_of(&rows, "def:0/bound/elem:2@before"),
        Some(&[(1, 14.0, 16.0)][..])
    );
}

#[test]
fn gap_with_a_newline_splits_at_the_first_newline() {
    let rows = rows("newline_split.little");
    // The comment line belongs after the pattern and pads to the widest
    // line; the indentation of the next line comes before the bound.
    assert_eq!(cells_of(&rows, "def:0/pat@after"), Some(&[(1, 6.0, 18.0)][..]));
    assert_eq!(cells_of(&rows, "def:0/bound@before"), Some(&[(2, -0.5, 2.0)][..]));
    // A gap between definitions stays one connected polygon.
    assert_eq!(
        cells_of(&rows, "def:1@before"),
        Some(&[(2, 6.0, 18.0), (3, -0.5, 0.0)][..])
    );
}

#[test]
fn gap_without_a_newline_has_no_before_expression_target() {
    let rows = rows("no_newline.little");
    assert!(cells_of(&rows, "def:0/bound@before").is_none());
    assert!(cells_of(&rows, "def:1/bound/def/bound@before").is_none());
    assert_eq!(cells_of(&rows, "def:0/pat@after"), Some(&[(1, 6.0, 7.0)][..]));
    // The let body is not on the pattern side, so it keeps its target.
    assert!(cells_of(&rows, "def:1/bound/body@before").is_some());
}

#[test]
fn empty_gaps_get_slim_polygons() {
    let rows = rows("slim_gaps.little");
    let slim: Vec<_> = rows
        .iter()
        .filter(|r| r.2.len() == 1 && r.2[0].1 > 0.0 && r.2[0].2 - r.2[0].1 == 0.5)
        .collect();
    assert!(slim.iter().any(|r| r.0 == "def:0/bound/elem:0@before"));
    assert!(slim.iter().any(|r| r.0 == "def:0/bound/elem:1@before"));
    for (owner, _, cells) in slim {
        let (_, lo, hi) = cells[0];
        let mid = (lo + hi) / 2.0;
        assert_eq!(mid.fract(), 0.0, "{owner} is centred on a column boundary");
    }
}
