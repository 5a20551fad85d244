//! Structured editing engine for the Little language.
//!
//! The crate is layered: [`syntax`] gives lossless trees, [`index`] exposes
//! selectable items and target positions with their hover geometry,
//! [`binding`] answers scoping questions, and [`tool`] plus [`catalog`]
//! provide the code tools that transform programs.

pub mod binding;
pub mod catalog;
pub mod edit;
#[cfg(feature = "testgen")]
pub mod gen;
pub mod index;
pub mod syntax;
pub mod tool;
