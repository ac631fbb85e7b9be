//! The term calculus: simple types, terms with oracle constants, the typing
//! judgment, substitution, and the printed syntax.

pub mod library;
mod print;
mod term;
mod typecheck;
mod types;

pub use term::{Const, LibOp, Term, TermError};
pub use typecheck::{typecheck, DuplicateBinding, PathStep, TypeError, TypingContext};
pub use types::SimpleType;

pub(crate) use print::{fmt_term_in_scope, pick_fresh};

