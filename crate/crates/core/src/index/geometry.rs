//! Hover polygons in character-cell coordinates.
//!
//! Columns are real-valued so that a polygon can reach half a cell to the
//! left of column 0 and so that empty gaps still get a sliver of width.

use std::fmt;

use super::{enumerate_items, enumerate_targets, ItemPath, Target, TargetId};
use crate::syntax::{print, Pos, Program, Span};

/// Width of the sliver drawn for a gap with no characters.
const SLIM: f64 = 0.5;
/// How far polygons that start at column 0 reach to the left.
const LEFT_PAD: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Owner {
    Item(ItemPath),
    Target(TargetId),
}

impl fmt::Display for Owner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Owner::Item(p) => write!(f, "{p}"),
            Owner::Target(t) => write!(f, "{t}"),
        }
    }
}

/// One row of a polygon: the half-open column interval `[lo, hi)` on `line`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell {
    pub line: u32,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HoverPolygon {
    pub owner: Owner,
    pub cells: Vec<Cell>,
    pub z: u32,
}

impl HoverPolygon {
    pub fn contains(&self, line: u32, col: f64) -> bool {
        self.cells.iter().any(|c| c.line == line && c.lo <= col && col < c.hi)
    }

    pub fn area(&self) -> f64 {
        self.cells.iter().map(|c| c.hi - c.lo).sum()
    }
}

fn line_widths(text: &str) -> Vec<u32> {
    text.split('\n').map(|l| l.chars().count() as u32).collect()
}

/// Length in characters of the longest line.
pub fn max_line_width(text: &str) -> u32 {
    line_widths(text).into_iter().max().unwrap_or(0)
}

fn item_cells(span: Span, widths: &[u32]) -> Vec<Cell> {
    let mut cells = Vec::new();
    for line in span.start.line..=span.end.line {
        let lo = if line == span.start.line { span.start.col } else { 0 };
        let hi = if line == span.end.line {
            span.end.col
        } else {
            widths[(line - 1) as usize]
        };
        if hi > lo {
            cells.push(Cell {
                line,
                lo: lo as f64,
                hi: hi as f64,
            });
        }
    }
    cells
}

fn left(col: u32) -> f64 {
    if col == 0 {
        -LEFT_PAD
    } else {
        col as f64
    }
}

fn target_cells(t: &Target, max_w: u32) -> Vec<Cell> {
    let (s, e): (Pos, Pos) = (t.start, t.end);
    let max_w = max_w as f64;
    if s.line == e.line {
        let (lo, hi) = if s.col == e.col {
            if s.col == 0 {
                (-LEFT_PAD, 0.0)
            } else {
                (s.col as f64 - SLIM / 2.0, s.col as f64 + SLIM / 2.0)
            }
        } else {
            (left(s.col), e.col as f64)
        };
        return vec![Cell { line: s.line, lo, hi }];
    }
    let mut cells = vec![Cell {
        line: s.line,
        lo: left(s.col),
        hi: max_w.max(s.col as f64 + SLIM),
    }];
    for line in s.line + 1..e.line {
        cells.push(Cell {
            line,
            lo: -LEFT_PAD,
            hi: max_w.max(0.0),
        });
    }
    if !t.ends_at_split {
        cells.push(Cell {
            line: e.line,
            lo: -LEFT_PAD,
            hi: e.col as f64,
        });
    }
    cells
}

/// Stacking order of an item: twice its depth, so that a gap inside an item
/// can sit strictly between that item and its children.
fn item_z(path: &ItemPath) -> u32 {
    2 * path.depth() as u32
}

/// Targets sit above both the item enclosing them and its children, whose
/// slivers and padding they may overlap.
fn target_z(t: &Target) -> u32 {
    let parent_depth = t.parent.as_ref().map_or(0, |p| p.depth()) as u32;
    2 * (parent_depth + 1) + 1
}

/// Every hover polygon: items first in pre-order, then targets in document
/// order.
pub fn polygons(p: &Program) -> Vec<HoverPolygon> {
    let text = print(p);
    let widths = line_widths(&text);
    let max_w = widths.iter().copied().max().unwrap_or(0);
    let mut out: Vec<HoverPolygon> = enumerate_items(p)
        .into_iter()
        .map(|it| HoverPolygon {
            z: item_z(&it.path),
            cells: item_cells(it.span, &widths),
            owner: Owner::Item(it.path),
        })
        .filter(|poly| !poly.cells.is_empty())
        .collect();
    out.extend(enumerate_targets(p).iter().map(|t| HoverPolygon {
        owner: Owner::Target(t.id.clone()),
        cells: target_cells(t, max_w),
        z: target_z(t),
    }));
    out
}

/// Picks the polygon under a position from a precomputed list: highest
/// `z`, then smallest area, then earliest in the list.
pub fn hover_in(polys: &[HoverPolygon], line: u32, col: f64) -> Option<&HoverPolygon> {
    let mut best: Option<&HoverPolygon> = None;
    for poly in polys.iter().filter(|q| q.contains(line, col)) {
        best = match best {
            None => Some(poly),
            Some(b) if poly.z > b.z || (poly.z == b.z && poly.area() < b.area()) => Some(poly),
            keep => keep,
        };
    }
    best
}

/// Owner of the topmost polygon at `(line, col)`.
pub fn hover(p: &Program, line: u32, col: f64) -> Option<Owner> {
    hover_in(&polygons(p), line, col).map(|poly| poly.owner.clone())
}

/// Text dump used by golden files: one polygon per line as
/// `owner z line:lo:hi ...`, ordered by first cell then `z`.
pub fn dump_polygons(p: &Program) -> String {
    let mut polys = polygons(p);
    polys.sort_by(|a, b| {
        let ka = (a.cells[0].line, a.cells[0].lo, a.z);
        let kb = (b.cells[0].line, b.cells[0].lo, b.z);
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut out = String::new();
    for poly in polys {
        out.push_str(&format!("{} {}", poly.owner, poly.z));
        for c in &poly.cells {
            out.push_str(&format!(" {}:{}:{}", c.line, c.lo, c.hi));
        }
        out.push('\n');
    }
    out
}
