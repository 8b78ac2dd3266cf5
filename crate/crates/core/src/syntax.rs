//! Abstract syntax of choreographies and programs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::lang::Language;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Left,
    Right,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Left => write!(f, "left"),
            Label::Right => write!(f, "right"),
        }
    }
}

/// A single interaction between two processes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Eta<L: Language> {
    /// `p.e -> q.x`: `p` evaluates `e` and `q` stores the result in `x`.
    Com {
        sender: L::Pid,
        expr: L::Expr,
        receiver: L::Pid,
        var: L::Var,
    },
    /// `p -> q[l]`
    Sel {
        sender: L::Pid,
        receiver: L::Pid,
        label: Label,
    },
}

impl<L: Language> Eta<L> {
    pub fn sender(&self) -> &L::Pid {
        match self {
            Eta::Com { sender, .. } | Eta::Sel { sender, .. } => sender,
        }
    }

    pub fn receiver(&self) -> &L::Pid {
        match self {
            Eta::Com { receiver, .. } | Eta::Sel { receiver, .. } => receiver,
        }
    }

    pub fn processes(&self) -> [&L::Pid; 2] {
        [self.sender(), self.receiver()]
    }
}

/// The set of processes in a procedure annotation or a pending call list.
pub type ProcessSet<L> = BTreeSet<<L as Language>::Pid>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Choreography<L: Language> {
    Interaction(Eta<L>, Arc<Choreography<L>>),
    Cond {
        pid: L::Pid,
        guard: L::BExpr,
        then_branch: Arc<Choreography<L>>,
        else_branch: Arc<Choreography<L>>,
    },
    Call(L::ProcName),
    /// A call some processes have entered; `pending` have not yet.
    RtCall {
        name: L::ProcName,
        pending: ProcessSet<L>,
        cont: Arc<Choreography<L>>,
    },
    End,
}

impl<L: Language> Choreography<L> {
    pub fn end() -> Self {
        Choreography::End
    }

    pub fn call(name: L::ProcName) -> Self {
        Choreography::Call(name)
    }

    pub fn interaction(eta: Eta<L>, cont: Self) -> Self {
        Choreography::Interaction(eta, Arc::new(cont))
    }

    pub fn com(sender: L::Pid, expr: L::Expr, receiver: L::Pid, var: L::Var, cont: Self) -> Self {
        Self::interaction(
            Eta::Com {
                sender,
                expr,
                receiver,
                var,
            },
            cont,
        )
    }

    pub fn sel(sender: L::Pid, receiver: L::Pid, label: Label, cont: Self) -> Self {
        Self::interaction(
            Eta::Sel {
                sender,
                receiver,
                label,
            },
            cont,
        )
    }

    pub fn cond(pid: L::Pid, guard: L::BExpr, then_branch: Self, else_branch: Self) -> Self {
        Choreography::Cond {
            pid,
            guard,
            then_branch: Arc::new(then_branch),
            else_branch: Arc::new(else_branch),
        }
    }

    pub fn rt_call(
        name: L::ProcName,
        pending: impl IntoIterator<Item = L::Pid>,
        cont: Self,
    ) -> Self {
        Choreography::RtCall {
            name,
            pending: pending.into_iter().collect(),
            cont: Arc::new(cont),
        }
    }

    pub fn is_end(&self) -> bool {
        matches!(self, Choreography::End)
    }

    /// Number of constructors in the term.
    pub fn size(&self) -> usize {
        match self {
            Choreography::Interaction(_, c) | Choreography::RtCall { cont: c, .. } => 1 + c.size(),
            Choreography::Cond {
                then_branch,
                else_branch,
                ..
            } => 1 + then_branch.size() + else_branch.size(),
            Choreography::Call(_) | Choreography::End => 1,
        }
    }

    /// Every procedure name occurring in a `Call` or `RtCall`, in syntactic order.
    pub fn called_procedures(&self) -> Vec<&L::ProcName> {
        let mut out = Vec::new();
        self.collect_calls(&mut out);
        out
    }

    fn collect_calls<'a>(&'a self, out: &mut Vec<&'a L::ProcName>) {
        match self {
            Choreography::Interaction(_, c) => c.collect_calls(out),
            Choreography::Cond {
                then_branch,
                else_branch,
                ..
            } => {
                then_branch.collect_calls(out);
                else_branch.collect_calls(out);
            }
            Choreography::Call(x) => out.push(x),
            Choreography::RtCall { name, cont, .. } => {
                out.push(name);
                cont.collect_calls(out);
            }
            Choreography::End => {}
        }
    }
}

/// One procedure: the processes it uses and its body.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProcDef<L: Language> {
    pub annotation: ProcessSet<L>,
    pub body: Arc<Choreography<L>>,
}

impl<L: Language> ProcDef<L> {
    pub fn new(annotation: impl IntoIterator<Item = L::Pid>, body: Choreography<L>) -> Self {
        Self {
            annotation: annotation.into_iter().collect(),
            body: Arc::new(body),
        }
    }
}

impl<L: Language> Default for ProcDef<L> {
    fn default() -> Self {
        Self {
            annotation: BTreeSet::new(),
            body: Arc::new(Choreography::End),
        }
    }
}

/// A total map from procedure names to definitions.
///
/// Names without an explicit entry resolve to the empty annotation and `End`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct DefSet<L: Language> {
    entries: BTreeMap<L::ProcName, ProcDef<L>>,
    fallback: ProcDef<L>,
}

impl<L: Language> DefSet<L> {
    pub fn new() -> Self {
        Self {
            entries: BTreeMap::new(),
            fallback: ProcDef::default(),
        }
    }

    pub fn get(&self, name: &L::ProcName) -> &ProcDef<L> {
        self.entries.get(name).unwrap_or(&self.fallback)
    }

    pub fn insert(&mut self, name: L::ProcName, def: ProcDef<L>) {
        self.entries.insert(name, def);
    }

    pub fn define(
        mut self,
        name: L::ProcName,
        annotation: impl IntoIterator<Item = L::Pid>,
        body: Choreography<L>,
    ) -> Self {
        self.insert(name, ProcDef::new(annotation, body));
        self
    }

    pub fn is_defined(&self, name: &L::ProcName) -> bool {
        self.entries.contains_key(name)
    }

    /// Explicit entries, in name order.
    pub fn iter(&self) -> impl Iterator<Item = (&L::ProcName, &ProcDef<L>)> {
        self.entries.iter()
    }

    pub fn names(&self) -> impl Iterator<Item = &L::ProcName> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Program<L: Language> {
    pub procedures: Arc<DefSet<L>>,
    pub main: Arc<Choreography<L>>,
}

impl<L: Language> Program<L> {
    pub fn new(procedures: DefSet<L>, main: Choreography<L>) -> Self {
        Self {
            procedures: Arc::new(procedures),
            main: Arc::new(main),
        }
    }

    /// Same procedures, different main choreography.
    pub fn with_main(&self, main: Arc<Choreography<L>>) -> Self {
        Self {
            procedures: Arc::clone(&self.procedures),
            main,
        }
    }
}

// Printing. Initial choreographies print in the surface syntax accepted by
// the CLI parser; runtime calls print in a bracketed form the parser rejects.

impl<L: Language> fmt::Display for Eta<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eta::Com {
                sender,
                expr,
                receiver,
                var,
            } => write!(f, "{sender}.{expr} -> {receiver}.{var}"),
            Eta::Sel {
                sender,
                receiver,
                label,
            } => write!(f, "{sender} -> {receiver}[{label}]"),
        }
    }
}

impl<L: Language> fmt::Display for Choreography<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Choreography::Interaction(eta, cont) => write!(f, "{eta}; {cont}"),
            Choreography::Cond {
                pid,
                guard,
                then_branch,
                else_branch,
            } => write!(
                f,
                "if {pid} ? {guard} then {{ {then_branch} }} else {{ {else_branch} }}"
            ),
            Choreography::Call(x) => write!(f, "call X{x}"),
            Choreography::RtCall {
                name,
                pending,
                cont,
            } => {
                write!(f, "<X{name} waiting ")?;
                write_list(f, pending.iter())?;
                write!(f, "> {{ {cont} }}")
            }
            Choreography::End => write!(f, "end"),
        }
    }
}

fn write_list<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    items: impl Iterator<Item = T>,
) -> fmt::Result {
    for (i, item) in items.enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

impl<L: Language> fmt::Display for Program<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, def) in self.procedures.iter() {
            write!(f, "def X{name}(")?;
            write_list(f, def.annotation.iter())?;
            writeln!(f, ") = {}", def.body)?;
        }
        writeln!(f, "main = {}", self.main)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{BExpr, Concrete, Expr, Var};

    type C = Choreography<Concrete>;

    #[test]
    fn printing_uses_surface_syntax() {
        let c = C::com(
            1,
            Expr::Zero,
            0,
            Var::Xx,
            C::sel(
                0,
                2,
                Label::Left,
                C::cond(2, BExpr::Compare, C::call(3), C::end()),
            ),
        );
        assert_eq!(
            c.to_string(),
            "1.zero -> 0.xx; 0 -> 2[left]; if 2 ? compare then { call X3 } else { end }"
        );
    }

    #[test]
    fn defset_lookup_is_total() {
        let defs: DefSet<Concrete> = DefSet::new().define(4, [1, 2], C::end());
        assert_eq!(defs.get(&4).annotation.len(), 2);
        let missing = defs.get(&9);
        assert!(missing.annotation.is_empty());
        assert!(missing.body.is_end());
    }

    #[test]
    fn called_procedures_in_order() {
        let c = C::cond(
            1,
            BExpr::Compare,
            C::call(2),
            C::rt_call(5, [1], C::call(7)),
        );
        assert_eq!(c.called_procedures(), vec![&2, &5, &7]);
    }
}
