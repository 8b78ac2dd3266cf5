//! Well-formedness of choreographies and programs.
//!
//! Program well-formedness quantifies over "some finite list of procedure
//! names"; here that list is an explicit `universe` argument, and
//! [`call_graph_closure`] computes the natural one for a program.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::ChorError;
use crate::lang::Language;
use crate::syntax::{Choreography, DefSet, Program};

/// No self-communication anywhere and no runtime call with an empty pending list.
pub fn choreography_wf<L: Language>(c: &Choreography<L>) -> bool {
    match c {
        Choreography::Interaction(eta, cont) => {
            eta.sender() != eta.receiver() && choreography_wf(cont)
        }
        Choreography::Cond {
            then_branch,
            else_branch,
            ..
        } => choreography_wf(then_branch) && choreography_wf(else_branch),
        Choreography::Call(_) | Choreography::End => true,
        Choreography::RtCall { pending, cont, .. } => !pending.is_empty() && choreography_wf(cont),
    }
}

/// True iff `c` contains no runtime call.
pub fn is_initial<L: Language>(c: &Choreography<L>) -> bool {
    match c {
        Choreography::Interaction(_, cont) => is_initial(cont),
        Choreography::Cond {
            then_branch,
            else_branch,
            ..
        } => is_initial(then_branch) && is_initial(else_branch),
        Choreography::Call(_) | Choreography::End => true,
        Choreography::RtCall { .. } => false,
    }
}

/// Processes used by `c`. A call contributes the callee's annotation.
pub fn chor_processes<L: Language>(
    c: &Choreography<L>,
    defs: &DefSet<L>,
    known: &[L::ProcName],
) -> Result<BTreeSet<L::Pid>, ChorError> {
    let mut out = BTreeSet::new();
    collect_processes(c, defs, known, &mut out)?;
    Ok(out)
}

fn collect_processes<L: Language>(
    c: &Choreography<L>,
    defs: &DefSet<L>,
    known: &[L::ProcName],
    out: &mut BTreeSet<L::Pid>,
) -> Result<(), ChorError> {
    match c {
        Choreography::Interaction(eta, cont) => {
            out.extend(eta.processes().into_iter().cloned());
            collect_processes(cont, defs, known, out)
        }
        Choreography::Cond {
            pid,
            then_branch,
            else_branch,
            ..
        } => {
            out.insert(pid.clone());
            collect_processes(then_branch, defs, known, out)?;
            collect_processes(else_branch, defs, known, out)
        }
        Choreography::Call(x) => {
            require_known::<L>(x, known)?;
            out.extend(defs.get(x).annotation.iter().cloned());
            Ok(())
        }
        Choreography::RtCall {
            name,
            pending,
            cont,
        } => {
            require_known::<L>(name, known)?;
            out.extend(pending.iter().cloned());
            collect_processes(cont, defs, known, out)
        }
        Choreography::End => Ok(()),
    }
}

fn require_known<L: Language>(x: &L::ProcName, known: &[L::ProcName]) -> Result<(), ChorError> {
    if known.contains(x) {
        Ok(())
    } else {
        Err(ChorError::UnknownProcedure(x.to_string()))
    }
}

fn within<L: Language>(c: &Choreography<L>, xs: &[L::ProcName]) -> Option<L::ProcName> {
    c.called_procedures()
        .into_iter()
        .find(|x| !xs.contains(x))
        .cloned()
}

/// Every runtime call `RtCall(X, ps, _)` has `ps` within the annotation of `X`.
fn inconsistent_call<L: Language>(c: &Choreography<L>, defs: &DefSet<L>) -> Option<L::ProcName> {
    match c {
        Choreography::Interaction(_, cont) => inconsistent_call(cont, defs),
        Choreography::Cond {
            then_branch,
            else_branch,
            ..
        } => inconsistent_call(then_branch, defs).or_else(|| inconsistent_call(else_branch, defs)),
        Choreography::Call(_) | Choreography::End => None,
        Choreography::RtCall {
            name,
            pending,
            cont,
        } => {
            if pending.is_subset(&defs.get(name).annotation) {
                inconsistent_call(cont, defs)
            } else {
                Some(name.clone())
            }
        }
    }
}

/// The first clause of program well-formedness that fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WfViolation<L: Language> {
    MainIllFormed,
    MainCallsOutside(L::ProcName),
    InconsistentRuntimeCall(L::ProcName),
    BodyIllFormed(L::ProcName),
    BodyNotInitial(L::ProcName),
    EmptyAnnotation(L::ProcName),
    BodyCallsOutside {
        procedure: L::ProcName,
        callee: L::ProcName,
    },
    UnderAnnotated {
        procedure: L::ProcName,
        missing: Vec<L::Pid>,
    },
    UnknownProcedure(String),
}

impl<L: Language> fmt::Display for WfViolation<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WfViolation::MainIllFormed => {
                write!(f, "main self-communicates or has an empty runtime call")
            }
            WfViolation::MainCallsOutside(x) => {
                write!(f, "main calls X{x}, which is outside the universe")
            }
            WfViolation::InconsistentRuntimeCall(x) => write!(
                f,
                "a runtime call to X{x} waits for processes outside its annotation"
            ),
            WfViolation::BodyIllFormed(x) => write!(f, "body of X{x} is ill-formed"),
            WfViolation::BodyNotInitial(x) => {
                write!(f, "body of X{x} contains a runtime call")
            }
            WfViolation::EmptyAnnotation(x) => write!(f, "X{x} has an empty annotation"),
            WfViolation::BodyCallsOutside { procedure, callee } => write!(
                f,
                "X{procedure} calls X{callee}, which is outside the universe"
            ),
            WfViolation::UnderAnnotated { procedure, missing } => {
                write!(
                    f,
                    "X{procedure} uses processes missing from its annotation:"
                )?;
                for p in missing {
                    write!(f, " {p}")?;
                }
                Ok(())
            }
            WfViolation::UnknownProcedure(x) => {
                write!(f, "X{x} is reachable but outside the universe")
            }
        }
    }
}

/// Decidable program well-formedness relative to the procedure list `xs`,
/// reporting the first violated clause.
pub fn program_wf_diagnose<L: Language>(
    xs: &[L::ProcName],
    p: &Program<L>,
) -> Result<(), WfViolation<L>> {
    if !choreography_wf(&p.main) {
        return Err(WfViolation::MainIllFormed);
    }
    if let Some(x) = within(&p.main, xs) {
        return Err(WfViolation::MainCallsOutside(x));
    }
    if let Some(x) = inconsistent_call(&p.main, &p.procedures) {
        return Err(WfViolation::InconsistentRuntimeCall(x));
    }
    for x in xs {
        let def = p.procedures.get(x);
        if !choreography_wf(&def.body) {
            return Err(WfViolation::BodyIllFormed(x.clone()));
        }
        if !is_initial(&def.body) {
            return Err(WfViolation::BodyNotInitial(x.clone()));
        }
        if def.annotation.is_empty() {
            return Err(WfViolation::EmptyAnnotation(x.clone()));
        }
        if let Some(callee) = within(&def.body, xs) {
            return Err(WfViolation::BodyCallsOutside {
                procedure: x.clone(),
                callee,
            });
        }
    }
    Ok(())
}

pub fn program_wf<L: Language>(xs: &[L::ProcName], p: &Program<L>) -> bool {
    program_wf_diagnose(xs, p).is_ok()
}

fn closure_holds<L: Language>(p: &Program<L>, universe: &[L::ProcName]) -> Result<(), ChorError> {
    let bodies = universe.iter().map(|x| p.procedures.get(x).body.as_ref());
    for c in std::iter::once(p.main.as_ref()).chain(bodies) {
        if let Some(x) = within(c, universe) {
            return Err(ChorError::UnknownProcedure(x.to_string()));
        }
    }
    Ok(())
}

fn well_ann_diagnose<L: Language>(
    p: &Program<L>,
    universe: &[L::ProcName],
) -> Result<Result<(), WfViolation<L>>, ChorError> {
    closure_holds(p, universe)?;
    for x in universe {
        let def = p.procedures.get(x);
        let used = chor_processes(&def.body, &p.procedures, universe)?;
        let missing: Vec<_> = used.difference(&def.annotation).cloned().collect();
        if !missing.is_empty() {
            return Ok(Err(WfViolation::UnderAnnotated {
                procedure: x.clone(),
                missing,
            }));
        }
    }
    Ok(Ok(()))
}

/// Every procedure in `universe` uses only processes in its annotation.
///
/// Fails with [`ChorError::UnknownProcedure`] when `universe` is not closed
/// under the call graph from `main`.
pub fn well_ann<L: Language>(p: &Program<L>, universe: &[L::ProcName]) -> Result<bool, ChorError> {
    Ok(well_ann_diagnose(p, universe)?.is_ok())
}

pub fn ccp_wf<L: Language>(p: &Program<L>, universe: &[L::ProcName]) -> Result<bool, ChorError> {
    Ok(ccp_wf_diagnose(p, universe)?.is_ok())
}

pub fn ccp_wf_diagnose<L: Language>(
    p: &Program<L>,
    universe: &[L::ProcName],
) -> Result<Result<(), WfViolation<L>>, ChorError> {
    match well_ann_diagnose(p, universe)? {
        Ok(()) => Ok(program_wf_diagnose(universe, p)),
        Err(v) => Ok(Err(v)),
    }
}

/// Procedure names reachable from `main`, in discovery order.
pub fn call_graph_closure<L: Language>(p: &Program<L>) -> Vec<L::ProcName> {
    let mut seen: BTreeSet<L::ProcName> = BTreeSet::new();
    let mut order = Vec::new();
    let mut queue: VecDeque<L::ProcName> =
        p.main.called_procedures().into_iter().cloned().collect();
    while let Some(x) = queue.pop_front() {
        if !seen.insert(x.clone()) {
            continue;
        }
        queue.extend(
            p.procedures
                .get(&x)
                .body
                .called_procedures()
                .into_iter()
                .cloned(),
        );
        order.push(x);
    }
    order
}

/// Full well-formedness with the universe computed from the call graph.
pub fn check_program<L: Language>(p: &Program<L>) -> Result<(), WfViolation<L>> {
    let universe = call_graph_closure(p);
    match ccp_wf_diagnose(p, &universe) {
        Ok(r) => r,
        Err(e) => Err(WfViolation::UnknownProcedure(e.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{BExpr, Concrete, Expr, Var};

    type C = Choreography<Concrete>;

    fn com(p: u64, q: u64, cont: C) -> C {
        C::com(p, Expr::This, q, Var::Xx, cont)
    }

    #[test]
    fn choreography_wf_cases() {
        assert!(choreography_wf(&C::end()));
        assert!(!choreography_wf(&com(1, 1, C::end())));
        assert!(!choreography_wf(&C::rt_call(0, [], C::end())));
        assert!(choreography_wf(&C::rt_call(0, [3], C::end())));
    }

    #[test]
    fn initial_cases() {
        assert!(is_initial(&C::call(0)));
        assert!(!is_initial(&C::rt_call(0, [1], C::end())));
        let nested = C::cond(1, BExpr::Compare, C::end(), C::rt_call(0, [1], C::end()));
        assert!(!is_initial(&nested));
    }

    #[test]
    fn processes_of_calls_come_from_annotations() {
        let defs = DefSet::new().define(0, [3, 4], C::end());
        let c = com(1, 2, C::end());
        assert_eq!(chor_processes(&c, &defs, &[]).unwrap(), [1, 2].into());
        assert_eq!(
            chor_processes(&C::call(0), &defs, &[0]).unwrap(),
            [3, 4].into()
        );
        let cond = C::cond(5, BExpr::Compare, com(1, 2, C::end()), C::end());
        assert_eq!(chor_processes(&cond, &defs, &[]).unwrap(), [1, 2, 5].into());
        assert!(matches!(
            chor_processes(&C::call(7), &defs, &[0]),
            Err(ChorError::UnknownProcedure(_))
        ));
    }

    #[test]
    fn program_wf_cases() {
        let empty = Program::new(DefSet::new(), C::end());
        assert!(program_wf(&[], &empty));

        let unannotated = Program::new(DefSet::new().define(0, [], C::end()), C::call(0));
        assert_eq!(
            program_wf_diagnose(&[0], &unannotated),
            Err(WfViolation::EmptyAnnotation(0))
        );

        let outside = Program::new(DefSet::new(), C::call(0));
        assert!(!program_wf(&[], &outside));

        let inconsistent = Program::new(
            DefSet::new().define(0, [1], C::end()),
            C::rt_call(0, [2], C::end()),
        );
        assert_eq!(
            program_wf_diagnose(&[0], &inconsistent),
            Err(WfViolation::InconsistentRuntimeCall(0))
        );

        let runtime_body = Program::new(
            DefSet::new().define(0, [1], C::rt_call(0, [1], C::end())),
            C::call(0),
        );
        assert_eq!(
            program_wf_diagnose(&[0], &runtime_body),
            Err(WfViolation::BodyNotInitial(0))
        );
    }

    #[test]
    fn well_annotation_cases() {
        let exact = Program::new(
            DefSet::new().define(0, [1, 2], com(1, 2, C::end())),
            C::end(),
        );
        assert!(well_ann(&exact, &[0]).unwrap());

        let missing = Program::new(DefSet::new().define(0, [1], com(1, 2, C::end())), C::end());
        assert!(!well_ann(&missing, &[0]).unwrap());

        let over = Program::new(
            DefSet::new().define(0, [1, 2, 3], com(1, 2, C::end())),
            C::end(),
        );
        assert!(well_ann(&over, &[0]).unwrap());

        let open = Program::new(DefSet::new().define(0, [1], C::call(1)), C::call(0));
        assert!(well_ann(&open, &[0]).is_err());
    }

    #[test]
    fn ccp_wf_cases() {
        assert!(ccp_wf(&Program::new(DefSet::new(), C::end()), &[]).unwrap());
        let selfcom = Program::new(DefSet::new(), com(3, 3, C::end()));
        assert!(!ccp_wf(&selfcom, &[]).unwrap());
    }

    #[test]
    fn closure_follows_bodies() {
        let defs = DefSet::new()
            .define(0, [1], C::call(2))
            .define(2, [1], C::call(0))
            .define(9, [1], C::end());
        let p = Program::new(defs, C::call(0));
        assert_eq!(call_graph_closure(&p), vec![0, 2]);
    }
}
