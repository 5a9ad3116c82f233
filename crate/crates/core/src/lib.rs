//! Deductive query answering over confidence-scored fact sources, filtered
//! through a context of positive, negative and key constraints.
//!
//! The pipeline: parse sources, a context and queries ([`text`]), evaluate
//! queries over the trusted sources ([`engine`]), chase answer images with
//! the positive constraints ([`chase`]) and keep the answers whose
//! consequences are witnessed without violating any constraint
//! ([`validator`]).

pub mod chase;
pub mod engine;
pub mod model;
pub mod text;
mod util;
pub mod validator;

pub use model::*;
