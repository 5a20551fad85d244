//! Wire format: one JSON object per line in each direction.
//!
//! A request names its command in `cmd` and may carry a client `seq` and
//! the `rev` it was issued against. A response echoes `seq`, reports the
//! session revision after handling, and holds either `result` or `error`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use little_core::index::{HoverPolygon, Item, Target};
use little_core::syntax::Pos;

#[derive(Debug, Clone, Deserialize)]
pub struct Envelope {
    #[serde(default)]
    pub seq: Option<u64>,
    /// Revision the client believes is current. Mismatches are rejected.
    #[serde(default)]
    pub rev: Option<u64>,
    #[serde(flatten)]
    pub request: Request,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "cmd", rename_all = "snake_case")]
pub enum Request {
    Load {
        text: String,
    },
    /// Current text, selections and undo depth.
    State,
    Items,
    Targets,
    Polygons,
    Hover {
        line: u32,
        col: f64,
    },
    Select {
        id: String,
    },
    Deselect {
        id: String,
    },
    Clear,
    Tools,
    Run {
        tool: String,
        #[serde(default)]
        option: Option<String>,
    },
    Preview {
        tool: String,
        #[serde(default)]
        option: Option<String>,
        index: usize,
    },
    Apply {
        tool: String,
        #[serde(default)]
        option: Option<String>,
        index: usize,
    },
    Undo,
    ResolveText {
        span: WireSpan,
    },
}

impl Request {
    pub fn name(&self) -> &'static str {
        match self {
            Request::Load { .. } => "load",
            Request::State => "state",
            Request::Items => "items",
            Request::Targets => "targets",
            Request::Polygons => "polygons",
            Request::Hover { .. } => "hover",
            Request::Select { .. } => "select",
            Request::Deselect { .. } => "deselect",
            Request::Clear => "clear",
            Request::Tools => "tools",
            Request::Run { .. } => "run",
            Request::Preview { .. } => "preview",
            Request::Apply { .. } => "apply",
            Request::Undo => "undo",
            Request::ResolveText { .. } => "resolve_text",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WirePos {
    pub line: u32,
    pub col: u32,
}

impl From<Pos> for WirePos {
    fn from(p: Pos) -> Self {
        WirePos {
            line: p.line,
            col: p.col,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireSpan {
    pub start: WirePos,
    pub end: WirePos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErrorCode {
    ParseError,
    UnknownId,
    NotActive,
    MissingOption,
    NothingToUndo,
    StaleRevision,
    NotLoaded,
    UnknownTool,
    InvalidOption,
    UnknownResult,
    BadRequest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub code: ErrorCode,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Response {
    pub seq: u64,
    pub rev: u64,
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorRecord>,
}

#[derive(Debug, Serialize)]
pub struct WireItem {
    pub id: String,
    pub kind: little_core::syntax::ItemKind,
    pub span: WireSpan,
}

impl From<&Item> for WireItem {
    fn from(i: &Item) -> Self {
        WireItem {
            id: i.path.to_string(),
            kind: i.kind,
            span: WireSpan {
                start: i.span.start.into(),
                end: i.span.end.into(),
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct WireTarget {
    pub id: String,
    pub aliases: Vec<String>,
    pub parent: Option<String>,
    pub span: WireSpan,
}

impl From<&Target> for WireTarget {
    fn from(t: &Target) -> Self {
        WireTarget {
            id: t.id.to_string(),
            aliases: t.aliases.iter().map(ToString::to_string).collect(),
            parent: t.parent.as_ref().map(ToString::to_string),
            span: WireSpan {
                start: t.start.into(),
                end: t.end.into(),
            },
        }
    }
}

/// A polygon as rows of `[line, lo, hi)` column intervals.
#[derive(Debug, Serialize)]
pub struct WirePolygon {
    pub owner: String,
    pub z: u32,
    pub cells: Vec<(u32, f64, f64)>,
}

impl From<&HoverPolygon> for WirePolygon {
    fn from(p: &HoverPolygon) -> Self {
        WirePolygon {
            owner: p.owner.to_string(),
            z: p.z,
            cells: p.cells.iter().map(|c| (c.line, c.lo, c.hi)).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct WireTool {
    pub key: &'static str,
    pub name: &'static str,
    pub state: little_core::tool::ActiveState,
    pub needs: &'static str,
    pub takes_option: bool,
    /// Results for active tools that need no option.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub results: Option<Vec<WireResult>>,
}

#[derive(Debug, Serialize)]
pub struct WireResult {
    pub index: usize,
    pub description: String,
    pub safe: bool,
    pub reasons: Vec<String>,
}
