//! The code tool interface: selections, activation, results and previews.

mod select;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::binding::{preservation_conflicts, resolve, Conflict, Resolution};
use crate::index::TargetId;
use crate::syntax::{parse, print, relayout, IdError, ItemPath, Program};

pub use select::{Classified, SelItem};

/// A selected code item or target position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Selection {
    Item(ItemPath),
    Target(TargetId),
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selection::Item(p) => write!(f, "{p}"),
            Selection::Target(t) => write!(f, "{t}"),
        }
    }
}

impl FromStr for Selection {
    type Err = IdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.contains('@') {
            Ok(Selection::Target(s.parse()?))
        } else {
            Ok(Selection::Item(s.parse()?))
        }
    }
}

/// A program together with the ordered set of current selections.
#[derive(Clone, Debug)]
pub struct EditorState {
    pub code: Program,
    selections: Vec<Selection>,
}

impl EditorState {
    pub fn new(code: Program) -> Self {
        EditorState {
            code,
            selections: Vec::new(),
        }
    }

    pub fn with_selections(code: Program, selections: Vec<Selection>) -> Self {
        let mut st = EditorState::new(code);
        for s in selections {
            st.select(s);
        }
        st
    }

    pub fn selections(&self) -> &[Selection] {
        &self.selections
    }

    /// Adds a selection at the end; selecting something twice has no effect.
    pub fn select(&mut self, s: Selection) {
        if !self.selections.contains(&s) {
            self.selections.push(s);
        }
    }

    pub fn deselect(&mut self, s: &Selection) -> bool {
        let before = self.selections.len();
        self.selections.retain(|x| x != s);
        before != self.selections.len()
    }

    pub fn clear(&mut self) {
        self.selections.clear();
    }

    pub fn classify(&self) -> Result<Classified, IdError> {
        Classified::new(&self.code, &self.selections)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum ActiveState {
    Active,
    NotYetActive,
    Inactive,
}

/// Tool configuration. Only Rename takes a string.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Options {
    #[default]
    None,
    Str(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnsafeReason {
    /// Uses whose binder would change.
    Capture(Vec<Conflict>),
    /// The function is used other than by direct calls, so some calls may
    /// not be rewritten.
    EscapingFunction { name: String },
    /// Call sites pass different arguments for a removed parameter; one of
    /// them was chosen.
    AmbiguousActuals { param: String },
}

impl fmt::Display for UnsafeReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnsafeReason::Capture(cs) => {
                write!(f, "changes the binding of {} use(s)", cs.len())
            }
            UnsafeReason::EscapingFunction { name } => {
                write!(f, "`{name}` is used other than in calls")
            }
            UnsafeReason::AmbiguousActuals { param } => {
                write!(f, "call sites disagree on the argument for `{param}`")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Safety {
    Safe,
    Unsafe(Vec<UnsafeReason>),
}

impl Safety {
    pub fn is_safe(&self) -> bool {
        matches!(self, Safety::Safe)
    }

    pub fn from_reasons(reasons: Vec<UnsafeReason>) -> Self {
        if reasons.is_empty() {
            Safety::Safe
        } else {
            Safety::Unsafe(reasons)
        }
    }

    pub fn conflicts(&self) -> Vec<&Conflict> {
        match self {
            Safety::Safe => Vec::new(),
            Safety::Unsafe(rs) => rs
                .iter()
                .flat_map(|r| match r {
                    UnsafeReason::Capture(cs) => cs.iter().collect(),
                    _ => Vec::new(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TransformResult {
    pub description: String,
    pub code: Program,
    pub safety: Safety,
}

impl TransformResult {
    /// Finishes a transformed program: recomputes spans and classifies the
    /// result by comparing its bindings against `before`, expecting every
    /// surviving use to keep its binder.
    pub fn checked(description: impl Into<String>, before: &Program, code: Program) -> Self {
        Self::checked_with(description, before, code, Vec::new(), |r| r.clone())
    }

    /// Like [`TransformResult::checked`] with extra reasons and a mapping
    /// from old to expected resolutions.
    pub fn checked_with(
        description: impl Into<String>,
        before: &Program,
        mut code: Program,
        mut reasons: Vec<UnsafeReason>,
        expect: impl Fn(&Resolution) -> Resolution,
    ) -> Self {
        relayout(&mut code);
        let conflicts = preservation_conflicts(&resolve(before), &resolve(&code), expect);
        if !conflicts.is_empty() {
            reasons.insert(0, UnsafeReason::Capture(conflicts));
        }
        TransformResult {
            description: description.into(),
            code,
            safety: Safety::from_reasons(reasons),
        }
    }

    /// A result whose safety was established by the tool itself.
    pub fn with_safety(description: impl Into<String>, mut code: Program, safety: Safety) -> Self {
        relayout(&mut code);
        TransformResult {
            description: description.into(),
            code,
            safety,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToolError {
    #[error("tool `{0}` is not active for the current selections")]
    NotActive(String),
    #[error("tool `{0}` needs a string option")]
    MissingOption(String),
    #[error("invalid option: {0}")]
    InvalidOption(String),
    #[error("no result #{0}")]
    UnknownResult(usize),
    #[error("unknown tool `{0}`")]
    UnknownTool(String),
    #[error(transparent)]
    Id(#[from] IdError),
}

/// Allowed number of selections of one kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Count {
    pub min: usize,
    pub max: Option<usize>,
}

impl Count {
    pub const ZERO: Count = Count { min: 0, max: Some(0) };

    pub const fn exactly(n: usize) -> Count {
        Count { min: n, max: Some(n) }
    }

    pub const fn at_least(n: usize) -> Count {
        Count { min: n, max: None }
    }

    pub const fn range(min: usize, max: usize) -> Count {
        Count { min, max: Some(max) }
    }

    pub fn admits(&self, n: usize) -> bool {
        n >= self.min && self.max.is_none_or(|m| n <= m)
    }

    pub fn exceeded_by(&self, n: usize) -> bool {
        self.max.is_some_and(|m| n > m)
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.max {
            Some(m) if m == self.min => write!(f, "{m}"),
            Some(m) => write!(f, "{}..{m}", self.min),
            None => write!(f, "{}+", self.min),
        }
    }
}

/// Selection counts a tool needs, with a sentence for users.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Requirements {
    pub exps: Count,
    /// Patterns and definitions together.
    pub defs: Count,
    pub targets: Count,
    /// Case branches may stand in for expressions.
    pub branches: bool,
    pub text: &'static str,
}

impl Requirements {
    pub fn is_empty(&self) -> bool {
        self.exps == Count::ZERO && self.defs == Count::ZERO && self.targets == Count::ZERO
    }

    /// Activation from counts alone: `Some(Inactive)` when too many or
    /// wrong-kind selections exist, `Some(NotYetActive)` when more are
    /// needed, `None` when the counts are satisfied.
    pub fn gate(&self, c: &Classified) -> Option<ActiveState> {
        let exps = c.exps.len() + c.branches.len();
        if (!self.branches && !c.branches.is_empty())
            || self.exps.exceeded_by(exps)
            || self.defs.exceeded_by(c.pats.len() + c.defs.len())
            || self.targets.exceeded_by(c.targets.len())
        {
            return Some(ActiveState::Inactive);
        }
        if c.is_empty() && !self.is_empty() {
            return Some(ActiveState::NotYetActive);
        }
        if !self.exps.admits(exps)
            || !self.defs.admits(c.pats.len() + c.defs.len())
            || !self.targets.admits(c.targets.len())
        {
            return Some(ActiveState::NotYetActive);
        }
        None
    }

    /// Activation for a tool with shape predicates. `partial` must hold for
    /// any selection that could still be completed, `complete` decides the
    /// final check once the counts are met.
    pub fn activation(
        &self,
        c: &Classified,
        partial: impl FnOnce(&Classified) -> bool,
        complete: impl FnOnce(&Classified) -> bool,
    ) -> ActiveState {
        match self.gate(c) {
            Some(ActiveState::Inactive) => ActiveState::Inactive,
            Some(_) => {
                if partial(c) {
                    ActiveState::NotYetActive
                } else {
                    ActiveState::Inactive
                }
            }
            None => {
                if partial(c) && complete(c) {
                    ActiveState::Active
                } else {
                    ActiveState::Inactive
                }
            }
        }
    }
}

/// A program transformation.
pub trait CodeTool: Send + Sync {
    fn name(&self) -> &'static str;
    /// Stable snake_case key used in the protocol.
    fn key(&self) -> &'static str;
    fn requirements(&self) -> Requirements;
    fn active(&self, st: &EditorState) -> ActiveState;
    /// Results ordered best first. Only called when the tool is active.
    fn results(&self, st: &EditorState, opts: &Options) -> Result<Vec<TransformResult>, ToolError>;
    fn takes_string_option(&self) -> bool {
        false
    }
}

/// Runs `tool`, checking activation and options first.
pub fn run(tool: &dyn CodeTool, st: &EditorState, opts: &Options) -> Result<Vec<TransformResult>, ToolError> {
    if tool.active(st) != ActiveState::Active {
        return Err(ToolError::NotActive(tool.name().to_string()));
    }
    if tool.takes_string_option() && *opts == Options::None {
        return Err(ToolError::MissingOption(tool.name().to_string()));
    }
    tool.results(st, opts)
}

/// Active tools for the current selections, each with its results. Tools
/// that need a string option are listed with no results.
pub fn menu<'a>(tools: &'a [Box<dyn CodeTool>], st: &EditorState) -> Vec<(&'a dyn CodeTool, Vec<TransformResult>)> {
    if st.selections().is_empty() {
        return Vec::new();
    }
    tools
        .iter()
        .filter(|t| t.active(st) == ActiveState::Active)
        .map(|t| {
            let results = if t.takes_string_option() {
                Vec::new()
            } else {
                t.results(st, &Options::None).unwrap_or_default()
            };
            (t.as_ref(), results)
        })
        .collect()
}

/// Kind of a changed region in a line diff.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HunkKind {
    Added,
    Removed,
    Changed,
}

/// A changed region: lines `[old_start, old_end)` of the old text became
/// lines `[new_start, new_end)` of the new text (1-based).
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Hunk {
    pub kind: HunkKind,
    pub old_start: usize,
    pub old_end: usize,
    pub new_start: usize,
    pub new_end: usize,
}

/// Line-level differences between two texts.
pub fn line_diff(old: &str, new: &str) -> Vec<Hunk> {
    use similar::{DiffOp, TextDiff};
    let diff = TextDiff::from_lines(old, new);
    diff.ops()
        .iter()
        .filter_map(|op| {
            let (kind, o, n) = match *op {
                DiffOp::Equal { .. } => return None,
                DiffOp::Delete {
                    old_index,
                    old_len,
                    new_index,
                } => (HunkKind::Removed, (old_index, old_len), (new_index, 0)),
                DiffOp::Insert {
                    old_index,
                    new_index,
                    new_len,
                } => (HunkKind::Added, (old_index, 0), (new_index, new_len)),
                DiffOp::Replace {
                    old_index,
                    old_len,
                    new_index,
                    new_len,
                } => (HunkKind::Changed, (old_index, old_len), (new_index, new_len)),
            };
            Some(Hunk {
                kind,
                old_start: o.0 + 1,
                old_end: o.0 + o.1 + 1,
                new_start: n.0 + 1,
                new_end: n.0 + n.1 + 1,
            })
        })
        .collect()
}

/// Text of result `index` and its diff against the current text. The state
/// is not modified.
pub fn preview(
    tool: &dyn CodeTool,
    st: &EditorState,
    opts: &Options,
    index: usize,
) -> Result<(String, Vec<Hunk>), ToolError> {
    let results = run(tool, st, opts)?;
    let r = results.get(index).ok_or(ToolError::UnknownResult(index))?;
    let old = print(&st.code);
    let new = print(&r.code);
    let diff = line_diff(&old, &new);
    Ok((new, diff))
}

/// Checks that a result's program prints to text that parses back to the
/// same program.
pub fn reparses(code: &Program) -> bool {
    let text = print(code);
    match parse(&text) {
        Ok(q) => print(&q) == text && crate::syntax::canonical(&q) == crate::syntax::canonical(code),
        Err(_) => false,
    }
}
