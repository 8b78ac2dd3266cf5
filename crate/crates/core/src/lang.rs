//! The parameter bundle a choreographic language is built over.
//!
//! A [`Language`] fixes the types of process identifiers, variables, values,
//! expressions, boolean guards and procedure names, together with the two
//! local evaluators. Everything in [`crate::syntax`], [`crate::wf`] and
//! [`crate::semantics`] is generic over it; [`crate::encoding::Concrete`] is
//! the instance used by the compiler from partial recursive functions.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use serde::Serialize;

use crate::state::GlobalState;

/// Bounds shared by every parameter type: decidable (total) equality and
/// ordering, hashing for memoisation, printing, and JSON output.
pub trait Atom: Clone + Ord + Hash + Debug + Display + Serialize + Send + Sync + 'static {}

impl<T> Atom for T where T: Clone + Ord + Hash + Debug + Display + Serialize + Send + Sync + 'static {}

pub trait Language:
    Copy + Clone + Debug + Default + PartialEq + Eq + PartialOrd + Ord + Hash + Send + Sync + 'static
{
    type Pid: Atom;
    type Var: Atom;
    type Value: Atom;
    type Expr: Atom;
    type BExpr: Atom;
    type ProcName: Atom;

    /// Evaluates an expression against one process's local state.
    ///
    /// Must depend on `local` only through [`LocalState::get`], so that
    /// extensionally equal states give equal results.
    fn eval_expr(expr: &Self::Expr, local: &LocalState<'_, Self>) -> Self::Value;

    fn eval_bexpr(guard: &Self::BExpr, local: &LocalState<'_, Self>) -> bool;
}

/// Read-only view of the variables of a single process.
pub struct LocalState<'a, L: Language> {
    state: &'a GlobalState<L>,
    pid: &'a L::Pid,
}

impl<'a, L: Language> LocalState<'a, L> {
    pub fn new(state: &'a GlobalState<L>, pid: &'a L::Pid) -> Self {
        Self { state, pid }
    }

    pub fn pid(&self) -> &L::Pid {
        self.pid
    }

    pub fn get(&self, var: &L::Var) -> &L::Value {
        self.state.get(self.pid, var)
    }
}
