//! The concrete choreographic language over naturals and the compiler from
//! partial recursive functions into it.
//!
//! Each function compiles to a *block* of consecutive procedures. A block is
//! entered by calling its first procedure, reads its inputs from the `xx`
//! variables of the input processes, leaves its result in the output
//! process's `xx`, and exits by calling the first procedure after the block.
//! Intermediate values live in auxiliary processes numbered from the first
//! unused process index upwards.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::EncodingError;
use crate::lang::{Language, LocalState};
use crate::prf::{converges_within, Kind, PRFunction};
use crate::sched::{First, Random, Scheduler};
use crate::semantics::{run, Configuration, RunStatus};
use crate::state::GlobalState;
use crate::syntax::{Choreography, DefSet, Eta, Program};

/// Naturals for processes, values and procedure names; two variables per process.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Concrete;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Var {
    #[serde(rename = "xx")]
    Xx,
    #[serde(rename = "yy")]
    Yy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Expr {
    /// The process's own `xx`.
    #[serde(rename = "this")]
    This,
    #[serde(rename = "zero")]
    Zero,
    /// `xx + 1`.
    #[serde(rename = "succ")]
    SuccThis,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BExpr {
    /// `xx == yy`.
    #[serde(rename = "compare")]
    Compare,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::Xx => "xx",
            Var::Yy => "yy",
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expr::This => "this",
            Expr::Zero => "zero",
            Expr::SuccThis => "succ",
        })
    }
}

impl fmt::Display for BExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("compare")
    }
}

impl Language for Concrete {
    type Pid = u64;
    type Var = Var;
    type Value = u64;
    type Expr = Expr;
    type BExpr = BExpr;
    type ProcName = u64;

    fn eval_expr(expr: &Expr, local: &LocalState<'_, Self>) -> u64 {
        match expr {
            Expr::This => *local.get(&Var::Xx),
            Expr::Zero => 0,
            Expr::SuccThis => local
                .get(&Var::Xx)
                .checked_add(1)
                .expect("natural number overflow"),
        }
    }

    fn eval_bexpr(guard: &BExpr, local: &LocalState<'_, Self>) -> bool {
        match guard {
            BExpr::Compare => local.get(&Var::Xx) == local.get(&Var::Yy),
        }
    }
}

pub type Chor = Choreography<Concrete>;

/// `p.e -> q.xx`
pub fn send_macro(p: u64, e: Expr, q: u64) -> Result<Eta<Concrete>, EncodingError> {
    if p == q {
        return Err(EncodingError::SelfCommunication(p));
    }
    Ok(send(p, e, q))
}

/// `q.this -> p.yy; if p ? compare then c1 else c2`
pub fn ifeq_macro(p: u64, q: u64, c1: Chor, c2: Chor) -> Result<Chor, EncodingError> {
    if p == q {
        return Err(EncodingError::SelfCommunication(p));
    }
    Ok(ifeq(p, q, c1, c2))
}

fn send(p: u64, e: Expr, q: u64) -> Eta<Concrete> {
    debug_assert_ne!(p, q);
    Eta::Com {
        sender: p,
        expr: e,
        receiver: q,
        var: Var::Xx,
    }
}

fn then_send(p: u64, e: Expr, q: u64, cont: Chor) -> Chor {
    Chor::interaction(send(p, e, q), cont)
}

fn ifeq(p: u64, q: u64, c1: Chor, c2: Chor) -> Chor {
    Chor::com(
        q,
        Expr::This,
        p,
        Var::Yy,
        Chor::cond(p, BExpr::Compare, c1, c2),
    )
}

/// Auxiliary processes a block for `f` may use above its first unused index.
pub fn pi(f: &PRFunction) -> u64 {
    match f.kind() {
        Kind::Zero | Kind::Successor | Kind::Projection(_) => 0,
        Kind::Composition { outer, inner } => {
            inner.len() as u64 + inner.iter().map(pi).sum::<u64>() + pi(outer)
        }
        Kind::Recursion { base, step } => 3 + pi(base) + pi(step),
        Kind::Minimization(h) => 2 + pi(h),
    }
}

/// Procedures in the block for `f`.
pub fn gamma(f: &PRFunction) -> u64 {
    match f.kind() {
        Kind::Zero | Kind::Successor | Kind::Projection(_) => 1,
        Kind::Composition { outer, inner } => {
            inner.iter().map(gamma).sum::<u64>() + gamma(outer) + inner.len() as u64
        }
        Kind::Recursion { base, step } => 3 + gamma(base) + gamma(step),
        Kind::Minimization(h) => 2 + gamma(h),
    }
}

/// The processes and procedures a block is compiled against.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EncodingContext {
    pub inputs: Vec<u64>,
    pub output: u64,
    /// First process index the block may claim for itself.
    pub next_process: u64,
    /// Index of the block's entry procedure.
    pub first_procedure: u64,
}

impl EncodingContext {
    fn sub(&self, inputs: Vec<u64>, output: u64, next_process: u64, first_procedure: u64) -> Self {
        Self {
            inputs,
            output,
            next_process,
            first_procedure,
        }
    }
}

/// Nested blocks of `f` with their contexts, in procedure order.
fn sub_blocks<'f>(
    f: &'f PRFunction,
    ctx: &EncodingContext,
) -> Vec<(&'f PRFunction, EncodingContext)> {
    let n = ctx.next_process;
    let x = ctx.first_procedure;
    match f.kind() {
        Kind::Zero | Kind::Successor | Kind::Projection(_) => vec![],
        Kind::Composition { outer, inner } => {
            let m = inner.len() as u64;
            let mut out = Vec::with_capacity(inner.len() + 1);
            let mut next_proc = x;
            let mut next_pid = n + m;
            for (i, g) in inner.iter().enumerate() {
                // one glue procedure precedes each inner block
                next_proc += 1;
                out.push((
                    g,
                    ctx.sub(ctx.inputs.clone(), n + i as u64, next_pid, next_proc),
                ));
                next_proc += gamma(g);
                next_pid += pi(g);
            }
            out.push((
                outer.as_ref(),
                ctx.sub((n..n + m).collect(), ctx.output, next_pid, next_proc),
            ));
            out
        }
        Kind::Recursion { base, step } => {
            let tail = ctx.inputs[1..].to_vec();
            let loop_test = x + 1 + gamma(base);
            let mut step_inputs = vec![n + 1, n];
            step_inputs.extend_from_slice(&tail);
            vec![
                (base.as_ref(), ctx.sub(tail, n, n + 3, x + 1)),
                (
                    step.as_ref(),
                    ctx.sub(step_inputs, n + 2, n + 3 + pi(base), loop_test + 1),
                ),
            ]
        }
        Kind::Minimization(h) => {
            let mut inputs = ctx.inputs.clone();
            inputs.push(n);
            vec![(h.as_ref(), ctx.sub(inputs, n + 1, n + 2, x + 1))]
        }
    }
}

/// Bodies of every procedure in the block for `f`, keyed by procedure index.
pub fn encode_block(f: &PRFunction, ctx: &EncodingContext) -> BTreeMap<u64, Chor> {
    let mut out = BTreeMap::new();
    build_block(f, ctx, &mut out);
    out
}

fn build_block(f: &PRFunction, ctx: &EncodingContext, out: &mut BTreeMap<u64, Chor>) {
    let n = ctx.next_process;
    let x = ctx.first_procedure;
    let q = ctx.output;
    let exit = x + gamma(f);
    let children = sub_blocks(f, ctx);
    match f.kind() {
        Kind::Zero => {
            out.insert(
                x,
                then_send(ctx.inputs[0], Expr::Zero, q, Chor::call(x + 1)),
            );
        }
        Kind::Successor => {
            out.insert(
                x,
                then_send(ctx.inputs[0], Expr::SuccThis, q, Chor::call(x + 1)),
            );
        }
        Kind::Projection(k) => {
            out.insert(
                x,
                then_send(ctx.inputs[*k], Expr::This, q, Chor::call(x + 1)),
            );
        }
        Kind::Composition { .. } => {
            for (g, sub) in &children {
                if sub.output != q {
                    let glue = sub.first_procedure - 1;
                    out.insert(glue, Chor::call(sub.first_procedure));
                }
                build_block(g, sub, out);
            }
        }
        Kind::Recursion { .. } => {
            let (base, base_ctx) = &children[0];
            let (step, step_ctx) = &children[1];
            let (acc, counter, scratch) = (n, n + 1, n + 2);
            let loop_test = base_ctx.first_procedure + gamma(base);
            let increment = step_ctx.first_procedure + gamma(step);
            out.insert(
                x,
                then_send(scratch, Expr::Zero, counter, Chor::call(x + 1)),
            );
            build_block(base, base_ctx, out);
            out.insert(
                loop_test,
                ifeq(
                    counter,
                    ctx.inputs[0],
                    then_send(acc, Expr::This, q, Chor::call(exit)),
                    Chor::call(loop_test + 1),
                ),
            );
            build_block(step, step_ctx, out);
            out.insert(
                increment,
                then_send(
                    scratch,
                    Expr::This,
                    acc,
                    then_send(
                        counter,
                        Expr::SuccThis,
                        scratch,
                        then_send(scratch, Expr::This, counter, Chor::call(loop_test)),
                    ),
                ),
            );
        }
        Kind::Minimization(_) => {
            let (h, h_ctx) = &children[0];
            let (counter, result) = (n, n + 1);
            let test = h_ctx.first_procedure + gamma(h);
            out.insert(x, then_send(result, Expr::Zero, counter, Chor::call(x + 1)));
            build_block(h, h_ctx, out);
            out.insert(
                test,
                Chor::com(
                    counter,
                    Expr::Zero,
                    result,
                    Var::Yy,
                    Chor::cond(
                        result,
                        BExpr::Compare,
                        then_send(counter, Expr::This, q, Chor::call(exit)),
                        then_send(
                            counter,
                            Expr::SuccThis,
                            result,
                            then_send(result, Expr::This, counter, Chor::call(x + 1)),
                        ),
                    ),
                ),
            );
        }
    }
}

/// The body of procedure `y` in the block for `f`.
pub fn encoding_rec(f: &PRFunction, ctx: &EncodingContext, y: u64) -> Result<Chor, EncodingError> {
    let start = ctx.first_procedure;
    let end = start + gamma(f);
    if !(start..end).contains(&y) {
        return Err(EncodingError::OutsideBlock {
            name: y,
            start,
            end,
        });
    }
    Ok(encode_block(f, ctx)
        .remove(&y)
        .expect("every index of a block is defined"))
}

fn direct_processes(c: &Chor, out: &mut BTreeSet<u64>) {
    match c {
        Choreography::Interaction(eta, cont) => {
            out.extend(eta.processes().into_iter().copied());
            direct_processes(cont, out);
        }
        Choreography::Cond {
            pid,
            then_branch,
            else_branch,
            ..
        } => {
            out.insert(*pid);
            direct_processes(then_branch, out);
            direct_processes(else_branch, out);
        }
        Choreography::RtCall { pending, cont, .. } => {
            out.extend(pending.iter().copied());
            direct_processes(cont, out);
        }
        Choreography::Call(_) | Choreography::End => {}
    }
}

/// Least annotations satisfying `ann(Y) ⊇ processes(body(Y)) ∪ ann(callees of Y)`.
///
/// `seeds` gives starting annotations (e.g. for procedures with empty bodies).
pub fn least_annotations(
    bodies: &BTreeMap<u64, Chor>,
    seeds: &BTreeMap<u64, BTreeSet<u64>>,
) -> BTreeMap<u64, BTreeSet<u64>> {
    let mut ann: BTreeMap<u64, BTreeSet<u64>> = bodies
        .iter()
        .map(|(y, body)| {
            let mut set = seeds.get(y).cloned().unwrap_or_default();
            direct_processes(body, &mut set);
            (*y, set)
        })
        .collect();
    let calls: BTreeMap<u64, Vec<u64>> = bodies
        .iter()
        .map(|(y, body)| (*y, body.called_procedures().into_iter().copied().collect()))
        .collect();
    loop {
        let mut changed = false;
        for (y, callees) in &calls {
            let mut extra = BTreeSet::new();
            for z in callees {
                if let Some(a) = ann.get(z) {
                    extra.extend(a.iter().copied());
                }
            }
            let own = ann.get_mut(y).expect("every body has an entry");
            let before = own.len();
            own.extend(extra);
            changed |= own.len() != before;
        }
        if !changed {
            return ann;
        }
    }
}

/// Compiles `f` reading inputs from `inputs` and writing its result to `output`.
///
/// `main` is `Call 0`; procedures `0..gamma(f)` hold the block and the exit
/// procedure `gamma(f)` is `End` annotated with the output process.
pub fn encode(
    f: &PRFunction,
    inputs: &[u64],
    output: u64,
) -> Result<Program<Concrete>, EncodingError> {
    if inputs.len() != f.arity() {
        return Err(EncodingError::InputCount {
            expected: f.arity(),
            found: inputs.len(),
        });
    }
    if inputs.contains(&output) {
        return Err(EncodingError::OutputAmongInputs(output));
    }
    let mut seen = BTreeSet::new();
    if let Some(dup) = inputs.iter().find(|p| !seen.insert(**p)) {
        return Err(EncodingError::DuplicateInput(*dup));
    }
    let ctx = default_context(inputs, output);
    let exit = gamma(f);
    let mut bodies = encode_block(f, &ctx);
    bodies.insert(exit, Chor::end());
    let seeds = BTreeMap::from([(exit, BTreeSet::from([output]))]);
    let annotations = least_annotations(&bodies, &seeds);
    let mut defs = DefSet::new();
    for (y, body) in bodies {
        defs = defs.define(y, annotations[&y].iter().copied(), body);
    }
    Ok(Program::new(defs, Chor::call(0)))
}

/// Context of the outermost block: auxiliaries start after every input and the output.
pub fn default_context(inputs: &[u64], output: u64) -> EncodingContext {
    let top = inputs
        .iter()
        .copied()
        .chain([output])
        .max()
        .expect("non-empty");
    EncodingContext {
        inputs: inputs.to_vec(),
        output,
        next_process: top + 1,
        first_procedure: 0,
    }
}

/// Inputs `1..=arity`, output 0.
pub fn default_inputs(f: &PRFunction) -> Vec<u64> {
    (1..=f.arity() as u64).collect()
}

pub fn encode_default(f: &PRFunction) -> Program<Concrete> {
    encode(f, &default_inputs(f), 0).expect("default processes are distinct")
}

/// Procedure names of an encoded program: the block and its exit.
pub fn encoding_universe(f: &PRFunction) -> Vec<u64> {
    (0..=gamma(f)).collect()
}

/// A use of a process or procedure outside a block's budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResourceViolation {
    Process {
        block: String,
        process: u64,
        limit: u64,
    },
    DefinedProcedure {
        block: String,
        procedure: u64,
    },
    CalledProcedure {
        block: String,
        procedure: u64,
    },
}

impl fmt::Display for ResourceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResourceViolation::Process {
                block,
                process,
                limit,
            } => write!(f, "block {block} uses process {process}, limit {limit}"),
            ResourceViolation::DefinedProcedure { block, procedure } => {
                write!(f, "block {block} defines X{procedure} outside its range")
            }
            ResourceViolation::CalledProcedure { block, procedure } => {
                write!(f, "block {block} calls X{procedure} outside its range")
            }
        }
    }
}

/// Checks the block for `f` and every nested block against `pi` and `gamma`:
/// processes used are inputs, the output, or below `next_process + pi(f)`;
/// procedures defined lie in `[first, first + gamma(f))` and calls in
/// `[first, first + gamma(f)]`.
pub fn scan_resources(f: &PRFunction, ctx: &EncodingContext) -> Result<(), ResourceViolation> {
    let block = f.to_string();
    let start = ctx.first_procedure;
    let end = start + gamma(f);
    let limit = ctx.next_process + pi(f);
    for (y, body) in encode_block(f, ctx) {
        if !(start..end).contains(&y) {
            return Err(ResourceViolation::DefinedProcedure {
                block,
                procedure: y,
            });
        }
        if let Some(&z) = body
            .called_procedures()
            .into_iter()
            .find(|z| !(start..=end).contains(*z))
        {
            return Err(ResourceViolation::CalledProcedure {
                block,
                procedure: z,
            });
        }
        let mut used = BTreeSet::new();
        direct_processes(&body, &mut used);
        let outside = used.into_iter().find(|p| {
            !(ctx.inputs.contains(p) || *p == ctx.output || (ctx.next_process..limit).contains(p))
        });
        if let Some(process) = outside {
            return Err(ResourceViolation::Process {
                block,
                process,
                limit,
            });
        }
    }
    for (g, sub) in sub_blocks(f, ctx) {
        scan_resources(g, &sub)?;
    }
    Ok(())
}

/// One scheduled run of one input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunVerdict {
    pub scheduler: String,
    pub status: String,
    pub steps: usize,
    pub output: Option<u64>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputVerdict {
    pub input: Vec<u64>,
    /// `None` when the function does not converge within the fuel.
    pub expected: Option<u64>,
    pub runs: Vec<RunVerdict>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImplementsReport {
    pub function: String,
    pub inputs: Vec<Vec<u64>>,
    pub verdicts: Vec<InputVerdict>,
    pub pass: bool,
}

impl ImplementsReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn failures(&self) -> impl Iterator<Item = &InputVerdict> {
        self.verdicts.iter().filter(|v| !v.pass)
    }
}

/// The state with `xs[i]` in `ps[i].xx` and 0 everywhere else.
pub fn input_state(ps: &[u64], xs: &[u64]) -> GlobalState<Concrete> {
    let mut s = GlobalState::new(0);
    for (p, x) in ps.iter().zip(xs) {
        s.set(*p, Var::Xx, *x);
    }
    s
}

/// Every vector of length `arity` with entries in `0..=max`.
pub fn input_grid(arity: usize, max: u64) -> Vec<Vec<u64>> {
    (0..arity).fold(vec![vec![]], |acc, _| {
        acc.into_iter()
            .flat_map(|v| {
                (0..=max).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect()
    })
}

/// Checks that `program` implements `f` on each input vector, under the
/// `first` scheduler and one random scheduler per seed.
///
/// Convergent inputs must terminate within `fuel` steps with the value at
/// `output.xx`; inputs without a value within `fuel` must not terminate.
pub fn check_implements(
    program: &Program<Concrete>,
    f: &PRFunction,
    ps: &[u64],
    output: u64,
    inputs: &[Vec<u64>],
    fuel: u64,
    seeds: &[u64],
) -> ImplementsReport {
    let verdicts: Vec<InputVerdict> = inputs
        .par_iter()
        .map(|xs| check_input(program, f, ps, output, xs, fuel, seeds))
        .collect();
    ImplementsReport {
        function: f.to_string(),
        inputs: inputs.to_vec(),
        pass: verdicts.iter().all(|v| v.pass),
        verdicts,
    }
}

fn check_input(
    program: &Program<Concrete>,
    f: &PRFunction,
    ps: &[u64],
    output: u64,
    xs: &[u64],
    fuel: u64,
    seeds: &[u64],
) -> InputVerdict {
    let expected = converges_within(f, xs, fuel)
        .expect("input length matches arity")
        .map(|c| c.value);
    let mut schedulers: Vec<Box<dyn Scheduler>> = vec![Box::new(First)];
    schedulers.extend(
        seeds
            .iter()
            .map(|s| Box::new(Random::new(*s)) as Box<dyn Scheduler>),
    );
    let start = Configuration::new(program.clone(), input_state(ps, xs));
    let runs: Vec<RunVerdict> = schedulers
        .into_iter()
        .map(|mut sched| {
            let name = sched.name();
            match run(start.clone(), fuel, sched.as_mut()) {
                Ok(outcome) => {
                    let value = *outcome.config.state.get(&output, &Var::Xx);
                    let terminated = outcome.status == RunStatus::Terminated;
                    let ok = match expected {
                        Some(y) => terminated && value == y,
                        None => outcome.status == RunStatus::OutOfFuel,
                    };
                    RunVerdict {
                        scheduler: name,
                        status: outcome.status.to_string(),
                        steps: outcome.trace.len(),
                        output: terminated.then_some(value),
                        ok,
                    }
                }
                Err(e) => RunVerdict {
                    scheduler: name,
                    status: format!("error: {e}"),
                    steps: 0,
                    output: None,
                    ok: false,
                },
            }
        })
        .collect();
    InputVerdict {
        input: xs.to_vec(),
        expected,
        pass: runs.iter().all(|r| r.ok),
        runs,
    }
}
