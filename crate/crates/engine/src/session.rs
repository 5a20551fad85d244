//! One editing session: the program text, the selections over it, and an
//! undo stack of earlier (text, selections) snapshots.

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use little_core::catalog;
use little_core::index::{enumerate_items, enumerate_targets, hover_in, polygons, resolve_text_selection};
use little_core::syntax::{parse, print, IdError, ParseError};
use little_core::tool::{
    self, ActiveState, Classified, CodeTool, EditorState, Options, Selection, ToolError, TransformResult,
};

use crate::protocol::{
    Envelope, ErrorCode, ErrorRecord, Request, Response, WireItem, WirePolygon, WireResult, WireTarget, WireTool,
};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Id(#[from] IdError),
    #[error(transparent)]
    Tool(#[from] ToolError),
    #[error("nothing to undo")]
    NothingToUndo,
    #[error("request was issued against revision {got} but the session is at {current}")]
    StaleRevision { got: u64, current: u64 },
    #[error("no program loaded")]
    NotLoaded,
    #[error("bad request: {0}")]
    BadRequest(String),
}

impl EngineError {
    pub fn code(&self) -> ErrorCode {
        match self {
            EngineError::Parse(_) => ErrorCode::ParseError,
            EngineError::Id(_) => ErrorCode::UnknownId,
            EngineError::Tool(e) => match e {
                ToolError::NotActive(_) => ErrorCode::NotActive,
                ToolError::MissingOption(_) => ErrorCode::MissingOption,
                ToolError::InvalidOption(_) => ErrorCode::InvalidOption,
                ToolError::UnknownResult(_) => ErrorCode::UnknownResult,
                ToolError::UnknownTool(_) => ErrorCode::UnknownTool,
                ToolError::Id(_) => ErrorCode::UnknownId,
            },
            EngineError::NothingToUndo => ErrorCode::NothingToUndo,
            EngineError::StaleRevision { .. } => ErrorCode::StaleRevision,
            EngineError::NotLoaded => ErrorCode::NotLoaded,
            EngineError::BadRequest(_) => ErrorCode::BadRequest,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Snapshot {
    text: String,
    selections: Vec<Selection>,
}

pub struct Session {
    tools: Vec<Box<dyn CodeTool>>,
    state: Option<EditorState>,
    text: String,
    undo: Vec<Snapshot>,
    rev: u64,
    handled: u64,
}

impl Default for Session {
    fn default() -> Self {
        Session::new()
    }
}

fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("wire types serialize")
}

fn options(option: Option<String>) -> Options {
    option.map_or(Options::None, Options::Str)
}

fn selection_ids(st: &EditorState) -> Vec<String> {
    st.selections().iter().map(ToString::to_string).collect()
}

impl Session {
    pub fn new() -> Self {
        Session {
            tools: catalog::registry(),
            state: None,
            text: String::new(),
            undo: Vec::new(),
            rev: 0,
            handled: 0,
        }
    }

    pub fn rev(&self) -> u64 {
        self.rev
    }

    /// Current program text; empty before the first load.
    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn selections(&self) -> Vec<String> {
        self.state.as_ref().map(selection_ids).unwrap_or_default()
    }

    /// Handles one line of the protocol and returns the response line
    /// (without a trailing newline).
    pub fn handle_line(&mut self, line: &str) -> String {
        let response = match serde_json::from_str::<Envelope>(line) {
            Ok(env) => self.handle(env),
            Err(e) => {
                self.handled += 1;
                self.respond(None, Err(EngineError::BadRequest(e.to_string())))
            }
        };
        serde_json::to_string(&response).expect("responses serialize")
    }

    pub fn handle(&mut self, env: Envelope) -> Response {
        self.handled += 1;
        let out = match env.rev {
            Some(got) if got != self.rev => Err(EngineError::StaleRevision { got, current: self.rev }),
            _ => {
                log::debug!("rev {} {}", self.rev, env.request.name());
                self.dispatch(env.request)
            }
        };
        if let Err(e) = &out {
            log::info!("request failed: {e}");
        }
        self.respond(env.seq, out)
    }

    fn respond(&self, seq: Option<u64>, out: Result<Value, EngineError>) -> Response {
        let seq = seq.unwrap_or(self.handled);
        match out {
            Ok(result) => Response {
                seq,
                rev: self.rev,
                ok: true,
                result: Some(result),
                error: None,
            },
            Err(e) => Response {
                seq,
                rev: self.rev,
                ok: false,
                result: None,
                error: Some(ErrorRecord {
                    code: e.code(),
                    message: e.to_string(),
                }),
            },
        }
    }

    fn state(&self) -> Result<&EditorState, EngineError> {
        self.state.as_ref().ok_or(EngineError::NotLoaded)
    }

    fn tool(&self, key: &str) -> Result<&dyn CodeTool, EngineError> {
        self.tools
            .iter()
            .find(|t| t.key() == key)
            .map(|t| t.as_ref())
            .ok_or_else(|| ToolError::UnknownTool(key.to_string()).into())
    }

    fn bump(&mut self) {
        self.rev += 1;
    }

    fn selection_result(&self) -> Value {
        json!({ "selections": self.selections() })
    }

    fn dispatch(&mut self, req: Request) -> Result<Value, EngineError> {
        match req {
            Request::Load { text } => {
                let p = parse(&text)?;
                let defs = p.defs.len();
                self.state = Some(EditorState::new(p));
                self.text = text;
                self.undo.clear();
                self.bump();
                Ok(json!({ "defs": defs, "items": enumerate_items(&self.state()?.code).len() }))
            }
            Request::State => {
                let st = self.state()?;
                Ok(json!({
                    "text": self.text,
                    "selections": selection_ids(st),
                    "undo_depth": self.undo.len(),
                }))
            }
            Request::Items => {
                let items: Vec<WireItem> = enumerate_items(&self.state()?.code).iter().map(Into::into).collect();
                Ok(to_value(items))
            }
            Request::Targets => {
                let targets: Vec<WireTarget> = enumerate_targets(&self.state()?.code).iter().map(Into::into).collect();
                Ok(to_value(targets))
            }
            Request::Polygons => {
                let polys: Vec<WirePolygon> = polygons(&self.state()?.code).iter().map(Into::into).collect();
                Ok(to_value(polys))
            }
            Request::Hover { line, col } => {
                let polys = polygons(&self.state()?.code);
                let id = hover_in(&polys, line, col).map(|p| p.owner.to_string());
                Ok(json!({ "id": id }))
            }
            Request::Select { id } => {
                let s: Selection = id.parse()?;
                let st = self.state.as_mut().ok_or(EngineError::NotLoaded)?;
                Classified::new(&st.code, std::slice::from_ref(&s))?;
                st.select(s);
                self.bump();
                Ok(self.selection_result())
            }
            Request::Deselect { id } => {
                let s: Selection = id.parse()?;
                let st = self.state.as_mut().ok_or(EngineError::NotLoaded)?;
                if !st.deselect(&s) {
                    return Err(IdError::UnknownId(id).into());
                }
                self.bump();
                Ok(self.selection_result())
            }
            Request::Clear => {
                self.state.as_mut().ok_or(EngineError::NotLoaded)?.clear();
                self.bump();
                Ok(self.selection_result())
            }
            Request::Tools => {
                let st = self.state()?;
                let tools: Vec<WireTool> = self.tools.iter().map(|t| describe(t.as_ref(), st)).collect();
                Ok(to_value(tools))
            }
            Request::Run { tool, option } => {
                let results = tool::run(self.tool(&tool)?, self.state()?, &options(option))?;
                Ok(to_value(wire_results(&results)))
            }
            Request::Preview { tool, option, index } => {
                let (text, diff) = tool::preview(self.tool(&tool)?, self.state()?, &options(option), index)?;
                Ok(json!({ "text": text, "diff": diff }))
            }
            Request::Apply { tool, option, index } => {
                let st = self.state()?;
                let results = tool::run(self.tool(&tool)?, st, &options(option))?;
                let r = results.get(index).ok_or(ToolError::UnknownResult(index))?;
                let text = print(&r.code);
                let p = parse(&text)?;
                let selections = st.selections().to_vec();
                let description = r.description.clone();
                let safe = r.safety.is_safe();
                let old = std::mem::replace(&mut self.text, text);
                self.undo.push(Snapshot { text: old, selections });
                self.state = Some(EditorState::new(p));
                self.bump();
                Ok(json!({ "text": self.text, "description": description, "safe": safe }))
            }
            Request::Undo => {
                let snap = self.undo.last().ok_or(EngineError::NothingToUndo)?;
                let p = parse(&snap.text)?;
                let snap = self.undo.pop().expect("checked above");
                self.state = Some(EditorState::with_selections(p, snap.selections));
                self.text = snap.text;
                self.bump();
                Ok(json!({ "text": self.text, "selections": self.selections() }))
            }
            Request::ResolveText { span } => {
                let id = resolve_text_selection(
                    &self.state()?.code,
                    (span.start.line, span.start.col),
                    (span.end.line, span.end.col),
                );
                Ok(json!({ "id": id.map(|p| p.to_string()) }))
            }
        }
    }
}

fn wire_results(results: &[TransformResult]) -> Vec<WireResult> {
    results
        .iter()
        .enumerate()
        .map(|(index, r)| WireResult {
            index,
            description: r.description.clone(),
            safe: r.safety.is_safe(),
            reasons: match &r.safety {
                tool::Safety::Safe => Vec::new(),
                tool::Safety::Unsafe(rs) => rs.iter().map(ToString::to_string).collect(),
            },
        })
        .collect()
}

fn describe(t: &dyn CodeTool, st: &EditorState) -> WireTool {
    let state = t.active(st);
    let results = (state == ActiveState::Active && !t.takes_string_option()).then(|| {
        t.results(st, &Options::None)
            .map(|r| wire_results(&r))
            .unwrap_or_default()
    });
    WireTool {
        key: t.key(),
        name: t.name(),
        state,
        needs: t.requirements().text,
        takes_option: t.takes_string_option(),
        results,
    }
}
