//! Classical Kripke models and intuitionistic IK/MIPC models, product update and evaluation.

mod eval;
mod model;
mod relation;
mod update;

use thiserror::Error;

pub use eval::{eval, eval_classical, eval_ik, product_update, Evaluator, Updated};
pub use model::{check_ik_frame, satisfies_ik, Frame, FrameReport, Model, ModelKind, Violation};
pub use relation::Relation;
pub use update::{
    action_successors, coproduct_frame, coproduct_model, restrict_frame, update_with_preconditions, UpdateTrace,
};

use crate::syntax::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationalError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("atom `{0}` has no valuation")]
    UnknownAtom(String),
    #[error("agent `{0}` is not an agent of the model")]
    UnknownAgent(String),
    #[error("valuation of `{0}` is not a downset")]
    NotDownset(String),
    #[error("action `{action}` has no relation for agent `{agent}`")]
    MissingActionRelation { action: String, agent: String },
    #[error("expected a {expected} model, found {found}")]
    WrongKind { expected: ModelKind, found: ModelKind },
    #[error("invalid model: {0}")]
    Invalid(String),
}
