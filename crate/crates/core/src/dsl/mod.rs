//! The presentation language.
//!
//! A document is a sequence of `space`, `bundle` and `map` blocks:
//!
//! ```text
//! # polynomial quotient by a monomial ideal
//! space "RP5" { dim 5
//!   gen a:1
//!   rel a^6
//!   meta poincare true
//! }
//!
//! # explicit multiplication table; unspecified products are zero
//! space "M(Z2,2)" { dim 3
//!   basis x2:2  basis x3:3
//!   meta suspension true
//!   meta sq1 x2 = x3
//!   meta constraint wu-sq1
//! }
//!
//! bundle "gamma" on "RP5" { w1 = a; }
//! map "fold" from "RP5" to "RP5" { a -> a; }
//! ```
//!
//! Polynomial expressions support `+`, `*` and `^` with the usual
//! precedence, parentheses, and the constants `0` and `1`. Comments run
//! from `#` to the end of the line. [`parse`] checks syntax, resolves every
//! cross-reference and rejects inhomogeneous assignments; [`realize`] turns
//! a presentation into a validated algebra.

mod ast;
mod emit;
mod lexer;
mod parser;
mod realize;

pub use ast::{
    Atom, BasisDecl, Body, Document, Factor, Generator, MetaBlock, Monomial, Poly, Pos,
    Presentation, ProdDecl, RingMapSource, SWProfileSource, Term,
};
pub use emit::{render_bundle, render_document, render_map, render_presentation, table_presentation};
pub use parser::parse;
pub use realize::{realize, realize_document, realize_map, realize_profile, Realized};

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownName,
    Inhomogeneous,
    DegreeOverflow,
    Duplicate,
}

/// A source error with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(pos: Pos, kind: ParseErrorKind, message: impl Into<String>) -> Self {
        Self {
            pos,
            kind,
            message: message.into(),
        }
    }
}

/// Errors turning a parsed presentation into algebra values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Invalid(String),
    #[error("algebra validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
}
