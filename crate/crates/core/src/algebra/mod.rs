//! Finite Heyting algebras with operators, indexed products and their quotients.

mod check;
mod lattice;
mod product;
mod table;

use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

use crate::syntax::Agent;

pub use check::{check_fsa, check_heyting, AgentVerdict, AlgebraReport, Law, LawVerdict};
pub use lattice::{heyting_implies, Lattice};
pub use product::{i_prime, pi, pi_k, product_algebra, quotient_algebra, AlgebraAction, ProductAlgebra, QuotientAlgebra};
pub use table::{tense_adjoints, TableAlgebra, MAX_TABLE_SIZE};

/// An algebra element: one table index per coordinate of the underlying base algebra.
pub type Elem = SmallVec<[u32; 8]>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("not a partial order: {0}")]
    NotPartialOrder(String),
    #[error("not a lattice: {0}")]
    NotLattice(String),
    #[error("not a Heyting algebra: {0}")]
    NotHeyting(String),
    #[error("adjunction fails for agent `{agent}`: {detail}")]
    Adjunction { agent: String, detail: String },
    #[error("algebra has {size} elements, above the cap of {cap}")]
    TooLarge { size: String, cap: usize },
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("action `{action}` has no relation for agent `{agent}`")]
    MissingActionRelation { action: String, agent: String },
    #[error("invalid algebra: {0}")]
    Invalid(String),
}

/// A finite Heyting algebra with one `◇` and one `□` per agent.
///
/// Elements are flat index vectors of length [`Hao::width`]. The tense adjoints
/// default to a search over all elements.
pub trait Hao: fmt::Debug + Send + Sync {
    fn agents(&self) -> &[Agent];
    fn width(&self) -> usize;
    fn bot(&self) -> Elem;
    fn top(&self) -> Elem;
    fn leq(&self, x: &[u32], y: &[u32]) -> bool;
    fn meet(&self, x: &[u32], y: &[u32]) -> Elem;
    fn join(&self, x: &[u32], y: &[u32]) -> Elem;
    fn imp(&self, x: &[u32], y: &[u32]) -> Elem;
    fn dia(&self, agent: usize, x: &[u32]) -> Elem;
    fn boxed(&self, agent: usize, x: &[u32]) -> Elem;
    /// All elements in a fixed order.
    fn elements(&self) -> Vec<Elem>;
    /// Number of elements, if it fits in `usize`.
    fn size(&self) -> Option<usize>;
    fn label(&self, x: &[u32]) -> String;
    fn contains(&self, x: &[u32]) -> bool;

    /// Left adjoint of `□`: `⋀{y | x ≤ □y}`.
    fn black_dia(&self, agent: usize, x: &[u32]) -> Elem {
        self.elements()
            .into_iter()
            .filter(|y| self.leq(x, &self.boxed(agent, y)))
            .fold(self.top(), |acc, y| self.meet(&acc, &y))
    }

    /// Right adjoint of `◇`: `⋁{x | ◇x ≤ y}`.
    fn black_box(&self, agent: usize, y: &[u32]) -> Elem {
        self.elements()
            .into_iter()
            .filter(|x| self.leq(&self.dia(agent, x), y))
            .fold(self.bot(), |acc, x| self.join(&acc, &x))
    }

    fn agent_index(&self, a: &Agent) -> Option<usize> {
        self.agents().iter().position(|b| b == a)
    }

    fn eq_elem(&self, x: &[u32], y: &[u32]) -> bool {
        x == y
    }

    fn neg(&self, x: &[u32]) -> Elem {
        self.imp(x, &self.bot())
    }
}

/// Join of a family; `⊥` when empty.
pub fn join_all<'a>(alg: &dyn Hao, items: impl IntoIterator<Item = &'a [u32]>) -> Elem {
    items.into_iter().fold(alg.bot(), |acc, x| alg.join(&acc, x))
}

/// Meet of a family; `⊤` when empty.
pub fn meet_all<'a>(alg: &dyn Hao, items: impl IntoIterator<Item = &'a [u32]>) -> Elem {
    items.into_iter().fold(alg.top(), |acc, x| alg.meet(&acc, x))
}

pub(crate) fn single(i: u32) -> Elem {
    let mut e = Elem::new();
    e.push(i);
    e
}
