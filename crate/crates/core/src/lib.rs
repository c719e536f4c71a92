//! Dynamic epistemic logic over relational models and finite Heyting algebras with operators.

pub mod syntax;
pub mod relational;
pub mod algebra;
pub mod duality;
pub mod enumerate;
pub mod semantics;
pub mod rewriter;
pub mod suites;
