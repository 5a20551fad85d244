//! Session protocol, HTTP endpoint and batch runner for the Little
//! structured editing engine.

pub mod batch;
pub mod protocol;
pub mod service;
pub mod session;

pub use protocol::{Envelope, ErrorCode, ErrorRecord, Request, Response};
pub use session::{EngineError, Session};
