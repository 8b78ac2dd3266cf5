//! Global states: total maps from `(process, variable)` to values.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::lang::{Language, LocalState};

type Overrides<L> = BTreeMap<(<L as Language>::Pid, <L as Language>::Var), <L as Language>::Value>;

/// A total map realised as a default value plus a table of overrides.
///
/// The table never stores a value equal to the default, so two states built
/// over the same default are extensionally equal exactly when they are
/// structurally equal. The table is shared between copies until one of them
/// is updated.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GlobalState<L: Language> {
    default: L::Value,
    overrides: Arc<Overrides<L>>,
}

impl<L: Language> GlobalState<L> {
    pub fn new(default: L::Value) -> Self {
        Self {
            default,
            overrides: Arc::new(BTreeMap::new()),
        }
    }

    pub fn default_value(&self) -> &L::Value {
        &self.default
    }

    pub fn get(&self, pid: &L::Pid, var: &L::Var) -> &L::Value {
        self.overrides
            .get(&(pid.clone(), var.clone()))
            .unwrap_or(&self.default)
    }

    pub fn local<'a>(&'a self, pid: &'a L::Pid) -> LocalState<'a, L> {
        LocalState::new(self, pid)
    }

    /// Returns a copy of `self` with `(pid, var)` mapped to `value`.
    #[must_use]
    pub fn update(&self, pid: &L::Pid, var: &L::Var, value: L::Value) -> Self {
        let mut next = self.clone();
        next.set(pid.clone(), var.clone(), value);
        next
    }

    pub fn set(&mut self, pid: L::Pid, var: L::Var, value: L::Value) {
        let table = Arc::make_mut(&mut self.overrides);
        if value == self.default {
            table.remove(&(pid, var));
        } else {
            table.insert((pid, var), value);
        }
    }

    /// Pointwise equality over every `(process, variable)` key.
    ///
    /// States over different defaults are never considered equal: the key
    /// space is unbounded, so they differ somewhere.
    pub fn ext_eq(&self, other: &Self) -> bool {
        self.default == other.default && self.overrides == other.overrides
    }

    /// The stored overrides, in key order.
    pub fn overrides(&self) -> impl Iterator<Item = (&L::Pid, &L::Var, &L::Value)> {
        self.overrides.iter().map(|((p, x), v)| (p, x, v))
    }

    pub fn is_canonical(&self) -> bool {
        self.overrides.values().all(|v| *v != self.default)
    }
}

impl<L: Language> fmt::Debug for GlobalState<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<L: Language> fmt::Display for GlobalState<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, ((p, x), v)) in self.overrides.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}.{x} = {v}")?;
        }
        write!(f, "}} (default {})", self.default)
    }
}

pub fn update_state<L: Language>(
    s: &GlobalState<L>,
    pid: &L::Pid,
    var: &L::Var,
    value: L::Value,
) -> GlobalState<L> {
    s.update(pid, var, value)
}

pub fn states_ext_equal<L: Language>(s1: &GlobalState<L>, s2: &GlobalState<L>) -> bool {
    s1.ext_eq(s2)
}
