//! Labelled-transition semantics.
//!
//! [`enumerate_transitions`] is the single-step relation on choreographies,
//! computed rule by rule. Every other operation here (stepping configurations,
//! scheduled runs, exhaustive exploration) is built on it.

use std::borrow::Cow;
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value as Json};

use crate::error::ChorError;
use crate::lang::Language;
use crate::sched::Scheduler;
use crate::state::GlobalState;
use crate::syntax::{Choreography, DefSet, Eta, Label, ProcessSet, Program};

/// Transition label carrying every detail of the action.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RichLabel<L: Language> {
    Com {
        sender: L::Pid,
        value: L::Value,
        receiver: L::Pid,
        var: L::Var,
    },
    Sel {
        sender: L::Pid,
        receiver: L::Pid,
        label: Label,
    },
    Cond(L::Pid),
    Call(L::ProcName, L::Pid),
}

/// Observable transition label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TransitionLabel<L: Language> {
    Com {
        sender: L::Pid,
        value: L::Value,
        receiver: L::Pid,
    },
    Sel {
        sender: L::Pid,
        receiver: L::Pid,
        label: Label,
    },
    Tau(L::Pid),
}

pub fn forget<L: Language>(rl: &RichLabel<L>) -> TransitionLabel<L> {
    match rl {
        RichLabel::Com {
            sender,
            value,
            receiver,
            ..
        } => TransitionLabel::Com {
            sender: sender.clone(),
            value: value.clone(),
            receiver: receiver.clone(),
        },
        RichLabel::Sel {
            sender,
            receiver,
            label,
        } => TransitionLabel::Sel {
            sender: sender.clone(),
            receiver: receiver.clone(),
            label: *label,
        },
        RichLabel::Cond(p) | RichLabel::Call(_, p) => TransitionLabel::Tau(p.clone()),
    }
}

pub fn label_processes<L: Language>(rl: &RichLabel<L>) -> BTreeSet<L::Pid> {
    match rl {
        RichLabel::Com {
            sender, receiver, ..
        }
        | RichLabel::Sel {
            sender, receiver, ..
        } => [sender.clone(), receiver.clone()].into(),
        RichLabel::Cond(p) | RichLabel::Call(_, p) => [p.clone()].into(),
    }
}

impl<L: Language> RichLabel<L> {
    pub fn involves(&self, p: &L::Pid) -> bool {
        match self {
            RichLabel::Com {
                sender, receiver, ..
            }
            | RichLabel::Sel {
                sender, receiver, ..
            } => sender == p || receiver == p,
            RichLabel::Cond(q) | RichLabel::Call(_, q) => q == p,
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            RichLabel::Com {
                sender,
                value,
                receiver,
                var,
            } => json!({"kind": "com", "p": sender, "v": value, "q": receiver, "x": var}),
            RichLabel::Sel {
                sender,
                receiver,
                label,
            } => json!({"kind": "sel", "p": sender, "q": receiver, "l": label.to_string()}),
            RichLabel::Cond(p) => json!({"kind": "cond", "p": p}),
            RichLabel::Call(x, p) => json!({"kind": "call", "X": x, "p": p}),
        }
    }
}

impl<L: Language> fmt::Display for RichLabel<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RichLabel::Com {
                sender,
                value,
                receiver,
                var,
            } => write!(f, "{sender}.{value} -> {receiver}.{var}"),
            RichLabel::Sel {
                sender,
                receiver,
                label,
            } => write!(f, "{sender} -> {receiver}[{label}]"),
            RichLabel::Cond(p) => write!(f, "cond@{p}"),
            RichLabel::Call(x, p) => write!(f, "call X{x}@{p}"),
        }
    }
}

/// The rule at the root of a transition's derivation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Com,
    Sel,
    Then,
    Else,
    DelayEta,
    DelayCond,
    DelayCall,
    CallStart,
    CallLocal,
    CallEnter,
    CallFinish,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Com => "C_Com",
            Rule::Sel => "C_Sel",
            Rule::Then => "C_Then",
            Rule::Else => "C_Else",
            Rule::DelayEta => "C_Delay_Eta",
            Rule::DelayCond => "C_Delay_Cond",
            Rule::DelayCall => "C_Delay_Call",
            Rule::CallStart => "C_Call_Start",
            Rule::CallLocal => "C_Call_Local",
            Rule::CallEnter => "C_Call_Enter",
            Rule::CallFinish => "C_Call_Finish",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One derivable step `(C, s) --label--> (target, state)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition<L: Language> {
    pub rule: Rule,
    pub label: RichLabel<L>,
    pub target: Arc<Choreography<L>>,
    pub state: GlobalState<L>,
}

/// A transition without its target choreography, which [`fire`] rebuilds
/// from the label on demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enabled<L: Language> {
    pub rule: Rule,
    pub label: RichLabel<L>,
    pub state: GlobalState<L>,
}

/// All single-step transitions of `c` from `s`, one per derivation.
///
/// The order is fixed: rules in the order of [`Rule`], inner positions
/// left to right, call entries by ascending process id.
pub fn enumerate_transitions<L: Language>(
    defs: &DefSet<L>,
    c: &Choreography<L>,
    s: &GlobalState<L>,
) -> Result<Vec<Transition<L>>, ChorError> {
    let mut out = Vec::new();
    found_into(defs, c, s, &BTreeSet::new(), true, &mut out)?;
    Ok(out
        .into_iter()
        .map(|f| Transition {
            rule: f.rule,
            label: f.label,
            target: f.target.expect("targets requested"),
            state: f.state,
        })
        .collect())
}

/// Same list and order as [`enumerate_transitions`], without building targets.
pub fn enumerate_enabled<L: Language>(
    defs: &DefSet<L>,
    c: &Choreography<L>,
    s: &GlobalState<L>,
) -> Result<Vec<Enabled<L>>, ChorError> {
    let mut out = Vec::new();
    found_into(defs, c, s, &BTreeSet::new(), false, &mut out)?;
    Ok(out
        .into_iter()
        .map(|f| Enabled {
            rule: f.rule,
            label: f.label,
            state: f.state,
        })
        .collect())
}

struct Found<L: Language> {
    rule: Rule,
    label: RichLabel<L>,
    target: Option<Arc<Choreography<L>>>,
    state: GlobalState<L>,
}

type Blocked<'c, L> = BTreeSet<&'c <L as Language>::Pid>;

/// `blocked` ∪ `more`, borrowing `blocked` when nothing is new.
fn extend_blocked<'c, 'b, L: Language>(
    blocked: &'b Blocked<'c, L>,
    more: impl IntoIterator<Item = &'c L::Pid> + Clone,
) -> Cow<'b, Blocked<'c, L>> {
    if more.clone().into_iter().all(|p| blocked.contains(p)) {
        Cow::Borrowed(blocked)
    } else {
        let mut wider = blocked.clone();
        wider.extend(more);
        Cow::Owned(wider)
    }
}

fn is_blocked<L: Language>(label: &RichLabel<L>, blocked: &Blocked<'_, L>) -> bool {
    match label {
        RichLabel::Com {
            sender, receiver, ..
        }
        | RichLabel::Sel {
            sender, receiver, ..
        } => blocked.contains(sender) || blocked.contains(receiver),
        RichLabel::Cond(p) | RichLabel::Call(_, p) => blocked.contains(p),
    }
}

fn push_free<L: Language>(out: &mut Vec<Found<L>>, blocked: &Blocked<'_, L>, f: Found<L>) {
    if !is_blocked(&f.label, blocked) {
        out.push(f);
    }
}

/// Transitions of `c` whose labels avoid `blocked`, with targets iff `build`.
///
/// The blocked processes are those of enclosing interactions, conditionals
/// and runtime calls: every delay rule above `c` would discard a transition
/// involving one of them, so it is never built.
fn found_into<'c, L: Language>(
    defs: &DefSet<L>,
    c: &'c Choreography<L>,
    s: &GlobalState<L>,
    blocked: &Blocked<'c, L>,
    build: bool,
    out: &mut Vec<Found<L>>,
) -> Result<(), ChorError> {
    match c {
        Choreography::End => {}
        Choreography::Interaction(eta, cont) => {
            let target = build.then(|| Arc::clone(cont));
            match eta {
                Eta::Com {
                    sender,
                    expr,
                    receiver,
                    var,
                } => {
                    let value = L::eval_expr(expr, &s.local(sender));
                    push_free(
                        out,
                        blocked,
                        Found {
                            rule: Rule::Com,
                            state: s.update(receiver, var, value.clone()),
                            label: RichLabel::Com {
                                sender: sender.clone(),
                                value,
                                receiver: receiver.clone(),
                                var: var.clone(),
                            },
                            target,
                        },
                    );
                }
                Eta::Sel {
                    sender,
                    receiver,
                    label,
                } => push_free(
                    out,
                    blocked,
                    Found {
                        rule: Rule::Sel,
                        label: RichLabel::Sel {
                            sender: sender.clone(),
                            receiver: receiver.clone(),
                            label: *label,
                        },
                        target,
                        state: s.clone(),
                    },
                ),
            }
            let inner = extend_blocked::<L>(blocked, eta.processes());
            let mut delayed = Vec::new();
            found_into(defs, cont, s, &inner, build, &mut delayed)?;
            out.extend(delayed.into_iter().map(|f| {
                Found {
                    rule: Rule::DelayEta,
                    target: f
                        .target
                        .map(|t| Arc::new(Choreography::Interaction(eta.clone(), t))),
                    ..f
                }
            }));
        }
        Choreography::Cond {
            pid,
            guard,
            then_branch,
            else_branch,
        } => {
            let (rule, target) = if L::eval_bexpr(guard, &s.local(pid)) {
                (Rule::Then, then_branch)
            } else {
                (Rule::Else, else_branch)
            };
            push_free(
                out,
                blocked,
                Found {
                    rule,
                    label: RichLabel::Cond(pid.clone()),
                    target: build.then(|| Arc::clone(target)),
                    state: s.clone(),
                },
            );
            let inner = extend_blocked::<L>(blocked, [pid]);
            let mut left = Vec::new();
            found_into(defs, then_branch, s, &inner, build, &mut left)?;
            if left.is_empty() {
                return Ok(());
            }
            let mut right = Vec::new();
            found_into(defs, else_branch, s, &inner, build, &mut right)?;
            for t in left {
                let joined = right
                    .iter()
                    .find(|u| u.label == t.label && u.state.ext_eq(&t.state));
                if let Some(u) = joined {
                    out.push(Found {
                        rule: Rule::DelayCond,
                        target: t.target.zip(u.target.clone()).map(|(l, r)| {
                            Arc::new(Choreography::Cond {
                                pid: pid.clone(),
                                guard: guard.clone(),
                                then_branch: l,
                                else_branch: r,
                            })
                        }),
                        label: t.label,
                        state: t.state,
                    });
                }
            }
        }
        Choreography::Call(x) => {
            let def = defs.get(x);
            if def.annotation.len() == 1 {
                let p = def.annotation.iter().next().expect("singleton");
                push_free(
                    out,
                    blocked,
                    Found {
                        rule: Rule::CallLocal,
                        label: RichLabel::Call(x.clone(), p.clone()),
                        target: build.then(|| Arc::clone(&def.body)),
                        state: s.clone(),
                    },
                );
            } else {
                for p in def.annotation.iter().filter(|p| !blocked.contains(p)) {
                    out.push(Found {
                        rule: Rule::CallStart,
                        label: RichLabel::Call(x.clone(), p.clone()),
                        target: build.then(|| call_start(x, &def.annotation, p, &def.body)),
                        state: s.clone(),
                    });
                }
            }
        }
        Choreography::RtCall {
            name,
            pending,
            cont,
        } => {
            if pending.is_empty() {
                return Err(ChorError::EmptyPending(name.to_string()));
            }
            let inner = extend_blocked::<L>(blocked, pending.iter());
            let mut delayed = Vec::new();
            found_into(defs, cont, s, &inner, build, &mut delayed)?;
            out.extend(delayed.into_iter().map(|f| Found {
                rule: Rule::DelayCall,
                target: f.target.map(|t| {
                    Arc::new(Choreography::RtCall {
                        name: name.clone(),
                        pending: pending.clone(),
                        cont: t,
                    })
                }),
                ..f
            }));
            if pending.len() == 1 {
                let p = pending.iter().next().expect("singleton");
                push_free(
                    out,
                    blocked,
                    Found {
                        rule: Rule::CallFinish,
                        label: RichLabel::Call(name.clone(), p.clone()),
                        target: build.then(|| Arc::clone(cont)),
                        state: s.clone(),
                    },
                );
            } else {
                for p in pending.iter().filter(|p| !blocked.contains(p)) {
                    out.push(Found {
                        rule: Rule::CallEnter,
                        label: RichLabel::Call(name.clone(), p.clone()),
                        target: build.then(|| call_start(name, pending, p, cont)),
                        state: s.clone(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// `RtCall(x, waiting \ {p}, body)`
fn call_start<L: Language>(
    x: &L::ProcName,
    waiting: &ProcessSet<L>,
    p: &L::Pid,
    body: &Arc<Choreography<L>>,
) -> Arc<Choreography<L>> {
    let mut pending = waiting.clone();
    pending.remove(p);
    Arc::new(Choreography::RtCall {
        name: x.clone(),
        pending,
        cont: Arc::clone(body),
    })
}

/// The target of the transition of `c` labelled `label`.
///
/// A label determines its derivation: the delay rules only pass on actions
/// of processes not involved in the term they delay, so at every node the
/// label either is the node's own action or comes from below. `label` must
/// be enabled; otherwise the result is unspecified.
pub fn fire<L: Language>(
    defs: &DefSet<L>,
    c: &Choreography<L>,
    s: &GlobalState<L>,
    label: &RichLabel<L>,
) -> Arc<Choreography<L>> {
    match c {
        Choreography::End => panic!("end has no transitions"),
        Choreography::Interaction(eta, cont) => {
            if eta.processes().into_iter().any(|p| label.involves(p)) {
                Arc::clone(cont)
            } else {
                Arc::new(Choreography::Interaction(
                    eta.clone(),
                    fire(defs, cont, s, label),
                ))
            }
        }
        Choreography::Cond {
            pid,
            guard,
            then_branch,
            else_branch,
        } => {
            if label.involves(pid) {
                if L::eval_bexpr(guard, &s.local(pid)) {
                    Arc::clone(then_branch)
                } else {
                    Arc::clone(else_branch)
                }
            } else {
                Arc::new(Choreography::Cond {
                    pid: pid.clone(),
                    guard: guard.clone(),
                    then_branch: fire(defs, then_branch, s, label),
                    else_branch: fire(defs, else_branch, s, label),
                })
            }
        }
        Choreography::Call(x) => {
            let def = defs.get(x);
            match label {
                RichLabel::Call(_, p) if def.annotation.len() > 1 => {
                    call_start(x, &def.annotation, p, &def.body)
                }
                _ => Arc::clone(&def.body),
            }
        }
        Choreography::RtCall {
            name,
            pending,
            cont,
        } => match label {
            RichLabel::Call(_, p) if pending.contains(p) => {
                if pending.len() == 1 {
                    Arc::clone(cont)
                } else {
                    call_start(name, pending, p, cont)
                }
            }
            _ => Arc::new(Choreography::RtCall {
                name: name.clone(),
                pending: pending.clone(),
                cont: fire(defs, cont, s, label),
            }),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration<L: Language> {
    pub program: Program<L>,
    pub state: GlobalState<L>,
}

impl<L: Language> Configuration<L> {
    pub fn new(program: Program<L>, state: GlobalState<L>) -> Self {
        Self { program, state }
    }

    pub fn is_terminated(&self) -> bool {
        self.program.main.is_end()
    }

    pub fn transitions(&self) -> Result<Vec<Transition<L>>, ChorError> {
        enumerate_transitions(&self.program.procedures, &self.program.main, &self.state)
    }

    /// Enabled steps without their targets, in the order of [`Self::transitions`].
    pub fn enabled(&self) -> Result<Vec<Enabled<L>>, ChorError> {
        enumerate_enabled(&self.program.procedures, &self.program.main, &self.state)
    }

    /// The configuration reached by taking `e`, which must come from `self.enabled()`.
    pub fn fire(&self, e: Enabled<L>) -> Self {
        let target = fire(
            &self.program.procedures,
            &self.program.main,
            &self.state,
            &e.label,
        );
        Self {
            program: self.program.with_main(target),
            state: e.state,
        }
    }

    /// The configuration reached by taking `t`, which must come from `self.transitions()`.
    pub fn apply(&self, t: Transition<L>) -> Self {
        Self {
            program: self.program.with_main(t.target),
            state: t.state,
        }
    }
}

/// The successor of `c` under `rl`.
pub fn step<L: Language>(
    c: &Configuration<L>,
    rl: &RichLabel<L>,
) -> Result<Configuration<L>, ChorError> {
    c.transitions()?
        .into_iter()
        .find(|t| &t.label == rl)
        .map(|t| c.apply(t))
        .ok_or_else(|| ChorError::NoSuchTransition(rl.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep<L: Language> {
    pub rule: Rule,
    pub label: RichLabel<L>,
}

impl<L: Language> TraceStep<L> {
    pub fn to_json(&self) -> Json {
        json!({"rule": self.rule.name(), "label": self.label.to_json()})
    }
}

/// The steps of a run, in order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Trace<L: Language> {
    pub steps: Vec<TraceStep<L>>,
}

impl<L: Language> Trace<L> {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &RichLabel<L>> {
        self.steps.iter().map(|s| &s.label)
    }

    pub fn observable(&self) -> Vec<TransitionLabel<L>> {
        self.labels().map(forget).collect()
    }

    /// Newline-delimited JSON, one object per step.
    pub fn to_ndjson(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            out.push_str(&s.to_json().to_string());
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RunStatus {
    Terminated,
    /// Not `End` and nothing enabled. Never happens for well-formed programs.
    Stuck,
    OutOfFuel,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunStatus::Terminated => "terminated",
            RunStatus::Stuck => "stuck",
            RunStatus::OutOfFuel => "out-of-fuel",
        })
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome<L: Language> {
    pub config: Configuration<L>,
    pub trace: Trace<L>,
    pub status: RunStatus,
}

/// Runs `c` for at most `fuel` steps, letting `scheduler` pick each step.
pub fn run<L: Language>(
    c: Configuration<L>,
    fuel: u64,
    scheduler: &mut dyn Scheduler,
) -> Result<RunOutcome<L>, ChorError> {
    run_observed(c, fuel, scheduler, |_, _| {})
}

/// Like [`run`], calling `observe` on every visited configuration together
/// with its enabled transitions, the final one included.
pub fn run_observed<L: Language>(
    mut c: Configuration<L>,
    fuel: u64,
    scheduler: &mut dyn Scheduler,
    mut observe: impl FnMut(&Configuration<L>, &[Enabled<L>]),
) -> Result<RunOutcome<L>, ChorError> {
    let mut trace = Trace::default();
    let mut remaining = fuel;
    loop {
        let mut enabled = c.enabled()?;
        observe(&c, &enabled);
        let status = if c.is_terminated() {
            Some(RunStatus::Terminated)
        } else if enabled.is_empty() {
            Some(RunStatus::Stuck)
        } else if remaining == 0 {
            Some(RunStatus::OutOfFuel)
        } else {
            None
        };
        if let Some(status) = status {
            return Ok(RunOutcome {
                config: c,
                trace,
                status,
            });
        }
        let pick = scheduler.pick(enabled.len());
        let t = enabled.swap_remove(pick);
        trace.steps.push(TraceStep {
            rule: t.rule,
            label: t.label.clone(),
        });
        c = c.fire(t);
        remaining -= 1;
    }
}

/// Exploration cap used when callers do not choose one.
pub const DEFAULT_NODE_LIMIT: usize = 200_000;

type Node<L> = (Arc<Choreography<L>>, GlobalState<L>);

/// Every configuration reachable from `c` in at most `depth` steps, keyed by
/// main choreography and state (the procedures never change).
pub fn reachable_configurations<L: Language>(
    c: &Configuration<L>,
    depth: usize,
    node_limit: usize,
) -> Result<HashSet<Node<L>>, ChorError> {
    let defs = &c.program.procedures;
    let start: Node<L> = (Arc::clone(&c.program.main), c.state.clone());
    let mut seen: HashSet<Node<L>> = HashSet::new();
    seen.insert(start.clone());
    let mut frontier = vec![start];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (chor, state) in &frontier {
            for t in enumerate_transitions(defs, chor, state)? {
                let node = (t.target, t.state);
                if !seen.contains(&node) {
                    if seen.len() >= node_limit {
                        return Err(ChorError::BudgetExceeded(node_limit));
                    }
                    seen.insert(node.clone());
                    next.push(node);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(seen)
}

/// Final states of all terminated configurations reachable within `depth` steps.
pub fn reachable_terminals<L: Language>(
    c: &Configuration<L>,
    depth: usize,
    node_limit: usize,
) -> Result<Vec<GlobalState<L>>, ChorError> {
    let terminals: BTreeSet<GlobalState<L>> = reachable_configurations(c, depth, node_limit)?
        .into_iter()
        .filter(|(chor, _)| chor.is_end())
        .map(|(_, s)| s)
        .collect();
    Ok(terminals.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{BExpr, Concrete, Expr, Var};
    use crate::sched::First;

    type C = Choreography<Concrete>;

    fn s0() -> GlobalState<Concrete> {
        GlobalState::new(0)
    }

    fn two_coms() -> C {
        C::com(
            1,
            Expr::SuccThis,
            2,
            Var::Xx,
            C::com(3, Expr::SuccThis, 4, Var::Xx, C::end()),
        )
    }

    #[test]
    fn forget_erases_internal_details() {
        let com: RichLabel<Concrete> = RichLabel::Com {
            sender: 1,
            value: 5,
            receiver: 2,
            var: Var::Xx,
        };
        assert_eq!(
            forget(&com),
            TransitionLabel::Com {
                sender: 1,
                value: 5,
                receiver: 2
            }
        );
        assert_eq!(
            forget::<Concrete>(&RichLabel::Cond(3)),
            TransitionLabel::Tau(3)
        );
        assert_eq!(
            forget::<Concrete>(&RichLabel::Call(0, 7)),
            TransitionLabel::Tau(7)
        );
    }

    #[test]
    fn label_processes_cases() {
        let com: RichLabel<Concrete> = RichLabel::Com {
            sender: 1,
            value: 5,
            receiver: 2,
            var: Var::Xx,
        };
        assert_eq!(label_processes(&com), [1, 2].into());
        assert_eq!(label_processes::<Concrete>(&RichLabel::Cond(3)), [3].into());
        let sel: RichLabel<Concrete> = RichLabel::Sel {
            sender: 4,
            receiver: 4,
            label: Label::Left,
        };
        assert_eq!(label_processes(&sel), [4].into());
    }

    #[test]
    fn independent_communications_in_either_order() {
        let ts = enumerate_transitions(&DefSet::new(), &two_coms(), &s0()).unwrap();
        assert_eq!(ts.len(), 2);
        assert_eq!(ts[0].rule, Rule::Com);
        assert_eq!(ts[1].rule, Rule::DelayEta);
        assert!(matches!(
            ts[0].label,
            RichLabel::Com {
                sender: 1,
                receiver: 2,
                value: 1,
                ..
            }
        ));
        assert!(matches!(
            ts[1].label,
            RichLabel::Com {
                sender: 3,
                receiver: 4,
                value: 1,
                ..
            }
        ));
    }

    #[test]
    fn dependent_communication_is_not_delayed() {
        let c = C::com(
            1,
            Expr::This,
            2,
            Var::Xx,
            C::com(2, Expr::This, 3, Var::Xx, C::end()),
        );
        let ts = enumerate_transitions(&DefSet::new(), &c, &s0()).unwrap();
        assert_eq!(ts.len(), 1);
    }

    #[test]
    fn end_has_no_transitions() {
        assert!(enumerate_transitions(&DefSet::new(), &C::end(), &s0())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn single_process_call_enters_directly() {
        let body = C::cond(7, BExpr::Compare, C::end(), C::end());
        let defs = DefSet::new().define(0, [7], body.clone());
        let ts = enumerate_transitions(&defs, &C::call(0), &s0()).unwrap();
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].rule, Rule::CallLocal);
        assert_eq!(ts[0].label, RichLabel::Call(0, 7));
        assert_eq!(*ts[0].target, body);
    }

    #[test]
    fn multi_process_call_goes_through_runtime_term() {
        let body = C::com(1, Expr::This, 2, Var::Xx, C::end());
        let defs = DefSet::new().define(0, [1, 2, 3], body.clone());
        let ts = enumerate_transitions(&defs, &C::call(0), &s0()).unwrap();
        assert_eq!(ts.len(), 3);
        assert!(ts.iter().all(|t| t.rule == Rule::CallStart));
        assert_eq!(*ts[0].target, C::rt_call(0, [2, 3], body.clone()));

        let rt = C::rt_call(0, [2, 3], body.clone());
        let ts = enumerate_transitions(&defs, &rt, &s0()).unwrap();
        // the body's communication needs 2, which has not entered yet
        assert_eq!(
            ts.iter().map(|t| t.rule).collect::<Vec<_>>(),
            [Rule::CallEnter; 2]
        );

        let rt = C::rt_call(0, [3], body.clone());
        let ts = enumerate_transitions(&defs, &rt, &s0()).unwrap();
        assert_eq!(ts[0].rule, Rule::DelayCall);
        assert_eq!(ts[1].rule, Rule::CallFinish);
        assert_eq!(*ts[1].target, body);
    }

    #[test]
    fn empty_pending_list_is_malformed() {
        let rt = C::rt_call(0, [], C::end());
        assert!(matches!(
            enumerate_transitions(&DefSet::new(), &rt, &s0()),
            Err(ChorError::EmptyPending(_))
        ));
    }

    #[test]
    fn conditional_delay_needs_both_branches() {
        let both = C::cond(
            5,
            BExpr::Compare,
            C::com(1, Expr::Zero, 2, Var::Xx, C::end()),
            C::com(1, Expr::Zero, 2, Var::Xx, C::call(0)),
        );
        let ts = enumerate_transitions(&DefSet::new(), &both, &s0()).unwrap();
        assert_eq!(
            ts.iter().map(|t| t.rule).collect::<Vec<_>>(),
            [Rule::Then, Rule::DelayCond]
        );

        let one = C::cond(
            5,
            BExpr::Compare,
            C::com(1, Expr::Zero, 2, Var::Xx, C::end()),
            C::end(),
        );
        assert_eq!(
            enumerate_transitions(&DefSet::new(), &one, &s0())
                .unwrap()
                .len(),
            1
        );

        let involved = C::cond(
            1,
            BExpr::Compare,
            C::com(1, Expr::Zero, 2, Var::Xx, C::end()),
            C::com(1, Expr::Zero, 2, Var::Xx, C::end()),
        );
        assert_eq!(
            enumerate_transitions(&DefSet::new(), &involved, &s0())
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn fire_rebuilds_every_target() {
        let defs = DefSet::new()
            .define(7u64, [1, 2], C::com(1, Expr::This, 2, Var::Xx, C::end()))
            .define(8u64, [3], C::end());
        let c = C::sel(
            5,
            6,
            Label::Left,
            C::cond(
                1,
                BExpr::Compare,
                C::rt_call(7, [1], C::call(8)),
                C::rt_call(7, [1], C::call(8)),
            ),
        );
        let s = s0();
        let ts = enumerate_transitions(&defs, &c, &s).unwrap();
        let es = enumerate_enabled(&defs, &c, &s).unwrap();
        assert_eq!(ts.len(), es.len());
        assert!(ts.len() >= 3);
        for (t, e) in ts.iter().zip(&es) {
            assert_eq!((t.rule, &t.label, &t.state), (e.rule, &e.label, &e.state));
            assert_eq!(fire(&defs, &c, &s, &t.label), t.target);
        }
    }

    #[test]
    fn step_by_label() {
        let p = Program::new(
            DefSet::new(),
            C::com(1, Expr::SuccThis, 2, Var::Xx, C::end()),
        );
        let start = Configuration::new(p, s0().update(&1, &Var::Xx, 4));
        let label = RichLabel::Com {
            sender: 1,
            value: 5,
            receiver: 2,
            var: Var::Xx,
        };
        let next = step(&start, &label).unwrap();
        assert!(next.is_terminated());
        assert_eq!(*next.state.get(&2, &Var::Xx), 5);
        assert!(matches!(
            step(&next, &label),
            Err(ChorError::NoSuchTransition(_))
        ));
    }

    #[test]
    fn step_through_local_call() {
        let p = Program::new(DefSet::new().define(0, [7], C::end()), C::call(0));
        let start = Configuration::new(p, s0());
        let next = step(&start, &RichLabel::Call(0, 7)).unwrap();
        assert!(next.is_terminated());
        assert_eq!(next.state, s0());
    }

    #[test]
    fn run_to_termination() {
        let done = run(
            Configuration::new(Program::new(DefSet::new(), C::end()), s0()),
            10,
            &mut First,
        )
        .unwrap();
        assert_eq!(done.status, RunStatus::Terminated);
        assert!(done.trace.is_empty());

        let p = Program::new(
            DefSet::new(),
            C::com(1, Expr::SuccThis, 2, Var::Xx, C::end()),
        );
        let out = run(
            Configuration::new(p, s0().update(&1, &Var::Xx, 2)),
            10,
            &mut First,
        )
        .unwrap();
        assert_eq!(out.status, RunStatus::Terminated);
        assert_eq!(out.trace.len(), 1);
        assert_eq!(*out.config.state.get(&2, &Var::Xx), 3);
    }

    #[test]
    fn run_out_of_fuel_on_a_loop() {
        let p = Program::new(
            DefSet::new().define(0, [1, 2], C::com(1, Expr::SuccThis, 2, Var::Xx, C::call(0))),
            C::call(0),
        );
        let out = run(Configuration::new(p, s0()), 50, &mut First).unwrap();
        assert_eq!(out.status, RunStatus::OutOfFuel);
        assert_eq!(out.trace.len(), 50);
    }

    #[test]
    fn terminals_of_independent_communications() {
        let c = Configuration::new(Program::new(DefSet::new(), two_coms()), s0());
        let terminals = reachable_terminals(&c, 4, DEFAULT_NODE_LIMIT).unwrap();
        assert_eq!(
            terminals,
            vec![s0().update(&2, &Var::Xx, 1).update(&4, &Var::Xx, 1)]
        );

        let end = Configuration::new(Program::new(DefSet::new(), C::end()), s0());
        assert_eq!(
            reachable_terminals(&end, 0, DEFAULT_NODE_LIMIT).unwrap(),
            vec![s0()]
        );
    }

    #[test]
    fn exploration_budget() {
        let c = Configuration::new(Program::new(DefSet::new(), two_coms()), s0());
        assert_eq!(
            reachable_configurations(&c, 4, 2),
            Err(ChorError::BudgetExceeded(2))
        );
    }

    #[test]
    fn trace_json_shape() {
        let p = Program::new(DefSet::new(), C::com(1, Expr::Zero, 0, Var::Xx, C::end()));
        let out = run(Configuration::new(p, s0()), 10, &mut First).unwrap();
        assert_eq!(
            out.trace.to_ndjson(),
            "{\"label\":{\"kind\":\"com\",\"p\":1,\"q\":0,\"v\":0,\"x\":\"xx\"},\"rule\":\"C_Com\"}\n"
        );
    }
}
