//! The transformation catalog.

mod equal;
mod format;
mod functions;
mod moves;
pub mod names;
pub mod place;
mod rename;
mod reorder;

use crate::tool::CodeTool;

pub use equal::{IntroduceVariable, MakeEqualByCopying, MakeEqualSingleVar, NAME_CHOICES};
pub use format::{clean_up, AlignExpressions, CleanUp, MakeMultiLine, MakeSingleLine, LINE_WIDTH};
pub use functions::{
    node_count, permutation, AddArguments, CreateFunctionFromArguments, CreateFunctionFromDefinition, MergeExpressions,
    RemoveArguments, ReorderArguments,
};
pub use moves::{DuplicateDefinition, InlineDefinition, MoveDefinitions, SwapDefinitions};
pub use rename::{apply_renaming, Rename, SwapNamesAndUsages, SwapUsages};
pub use reorder::{ReorderExpressions, ReorderListItems};

/// Every tool, in menu order.
pub fn registry() -> Vec<Box<dyn CodeTool>> {
    vec![
        Box::new(CreateFunctionFromDefinition),
        Box::new(CreateFunctionFromArguments),
        Box::new(MergeExpressions),
        Box::new(MoveDefinitions),
        Box::new(SwapDefinitions),
        Box::new(IntroduceVariable),
        Box::new(AddArguments),
        Box::new(RemoveArguments),
        Box::new(ReorderArguments),
        Box::new(ReorderListItems),
        Box::new(Rename),
        Box::new(SwapNamesAndUsages),
        Box::new(InlineDefinition),
        Box::new(DuplicateDefinition),
        Box::new(CleanUp),
        Box::new(MakeSingleLine),
        Box::new(MakeMultiLine),
        Box::new(AlignExpressions),
        Box::new(MakeEqualSingleVar),
        Box::new(MakeEqualByCopying),
        Box::new(ReorderExpressions),
        Box::new(SwapUsages),
    ]
}

/// Looks up a tool by key.
pub fn tool(key: &str) -> Option<Box<dyn CodeTool>> {
    registry().into_iter().find(|t| t.key() == key)
}
