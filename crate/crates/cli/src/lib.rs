//! Parser, printer and command implementations for the `cubical` tool.

pub mod parse;
pub mod print;
pub mod repl;
pub mod session;

pub use parse::{Decl, ParseError};
pub use session::{Emit, Session, SessionError};
