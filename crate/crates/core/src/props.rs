//! Executable metatheory: progress, deadlock-freedom, the diamond property,
//! confluence and uniqueness of terminal states, checked on concrete
//! configurations and on randomly generated well-formed programs.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::encoding::{least_annotations, BExpr, Chor, Concrete, Expr, Var};
use crate::error::ChorError;
use crate::lang::Language;
use crate::sched::Random;
use crate::semantics::{
    reachable_configurations, reachable_terminals, run_observed, step, Configuration, RichLabel,
    DEFAULT_NODE_LIMIT,
};
use crate::state::GlobalState;
use crate::syntax::{Choreography, DefSet, Label, Program};
use crate::wf::{call_graph_closure, ccp_wf_diagnose};

/// Shape of generated programs.
#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_depth: usize,
    /// Processes are `0..processes`; at least 2.
    pub processes: u64,
    /// Procedures are `0..procedures`.
    pub procedures: u64,
    /// Chance that a leaf is a call rather than `end`.
    pub recursion_prob: f64,
    /// Chance that a procedure's annotation gets an unused extra process.
    pub over_annotation_prob: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            max_depth: 4,
            processes: 4,
            procedures: 3,
            recursion_prob: 0.3,
            over_annotation_prob: 0.2,
        }
    }
}

impl GenConfig {
    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }
}

fn gen_chor(rng: &mut ChaCha8Rng, cfg: &GenConfig, depth: usize) -> Chor {
    let leaf = |rng: &mut ChaCha8Rng| {
        if cfg.procedures > 0 && rng.gen_bool(cfg.recursion_prob) {
            Chor::call(rng.gen_range(0..cfg.procedures))
        } else {
            Chor::end()
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    let pair = |rng: &mut ChaCha8Rng| {
        let p = rng.gen_range(0..cfg.processes);
        let q = (p + rng.gen_range(1..cfg.processes)) % cfg.processes;
        (p, q)
    };
    match rng.gen_range(0..10) {
        0..=4 => {
            let (p, q) = pair(rng);
            let e = [Expr::This, Expr::Zero, Expr::SuccThis][rng.gen_range(0..3)];
            let x = if rng.gen_bool(0.5) { Var::Xx } else { Var::Yy };
            Chor::com(p, e, q, x, gen_chor(rng, cfg, depth - 1))
        }
        5..=6 => {
            let (p, q) = pair(rng);
            let l = if rng.gen_bool(0.5) {
                Label::Left
            } else {
                Label::Right
            };
            Chor::sel(p, q, l, gen_chor(rng, cfg, depth - 1))
        }
        7..=8 => Chor::cond(
            rng.gen_range(0..cfg.processes),
            BExpr::Compare,
            gen_chor(rng, cfg, depth - 1),
            gen_chor(rng, cfg, depth - 1),
        ),
        _ => leaf(rng),
    }
}

/// A random program over `0..processes` and procedures `0..procedures`,
/// well-formed over that universe, with least annotations plus optional
/// unused extras. Deterministic in `cfg.seed`.
pub fn gen_program(cfg: &GenConfig) -> Program<Concrete> {
    assert!(cfg.processes >= 2, "communications need two processes");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let bodies: BTreeMap<u64, Chor> = (0..cfg.procedures)
        .map(|x| (x, gen_chor(&mut rng, cfg, cfg.max_depth)))
        .collect();
    let main = gen_chor(&mut rng, cfg, cfg.max_depth);
    let mut seeds: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
    for x in 0..cfg.procedures {
        if rng.gen_bool(cfg.over_annotation_prob) {
            seeds
                .entry(x)
                .or_default()
                .insert(rng.gen_range(0..cfg.processes));
        }
    }
    let annotations = loop {
        let ann = least_annotations(&bodies, &seeds);
        match ann.iter().find(|(_, a)| a.is_empty()) {
            None => break ann,
            Some((x, _)) => {
                seeds
                    .entry(*x)
                    .or_default()
                    .insert(rng.gen_range(0..cfg.processes));
            }
        }
    };
    let mut defs = DefSet::new();
    for (x, body) in bodies {
        defs = defs.define(x, annotations[&x].iter().copied(), body);
    }
    Program::new(defs, main)
}

/// A state assigning small random values to both variables of `0..processes`.
pub fn gen_state(rng: &mut impl Rng, processes: u64, max_value: u64) -> GlobalState<Concrete> {
    let mut s = GlobalState::new(0);
    for p in 0..processes {
        for x in [Var::Xx, Var::Yy] {
            s.set(p, x, rng.gen_range(0..=max_value));
        }
    }
    s
}

/// A generated program paired with a generated state, both from `cfg.seed`.
pub fn gen_configuration(cfg: &GenConfig) -> Configuration<Concrete> {
    let program = gen_program(cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_57a7e);
    let state = gen_state(&mut rng, cfg.processes, 3);
    Configuration::new(program, state)
}

/// Defined procedures together with everything reachable from main.
pub fn program_universe<L: Language>(p: &Program<L>) -> Vec<L::ProcName> {
    let mut names: BTreeSet<L::ProcName> = p.procedures.names().cloned().collect();
    names.extend(call_graph_closure(p));
    names.into_iter().collect()
}

/// A configuration on which a property fails, with the labels leading from
/// it to the failure.
#[derive(Clone, Debug)]
pub struct Counterexample<L: Language> {
    pub config: Configuration<L>,
    pub labels: Vec<RichLabel<L>>,
    pub diagnostic: String,
}

#[derive(Clone, Debug)]
pub struct PropertyReport<L: Language> {
    pub name: String,
    pub trials: usize,
    pub counterexample: Option<Counterexample<L>>,
    /// Trials whose exploration budget ran out.
    pub inconclusive: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

impl<L: Language> PropertyReport<L> {
    fn single(name: &str) -> Self {
        Self {
            name: name.into(),
            trials: 1,
            counterexample: None,
            inconclusive: 0,
        }
    }

    fn failed(name: &str, cx: Counterexample<L>) -> Self {
        Self {
            counterexample: Some(cx),
            ..Self::single(name)
        }
    }

    fn inconclusive(name: &str) -> Self {
        Self {
            inconclusive: 1,
            ..Self::single(name)
        }
    }

    pub fn verdict(&self) -> Verdict {
        if self.counterexample.is_some() {
            Verdict::Fail
        } else if self.inconclusive > 0 {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict() == Verdict::Pass
    }

    /// Folds per-trial reports, keeping the first counterexample in trial order.
    pub fn merge(name: &str, reports: impl IntoIterator<Item = Self>) -> Self {
        let mut out = Self {
            name: name.into(),
            trials: 0,
            counterexample: None,
            inconclusive: 0,
        };
        for r in reports {
            out.trials += r.trials;
            out.inconclusive += r.inconclusive;
            if out.counterexample.is_none() {
                out.counterexample = r.counterexample;
            }
        }
        out
    }
}

fn error_report<L: Language>(name: &str, c: &Configuration<L>, e: ChorError) -> PropertyReport<L> {
    match e {
        ChorError::BudgetExceeded(_) => PropertyReport::inconclusive(name),
        other => PropertyReport::failed(
            name,
            Counterexample {
                config: c.clone(),
                labels: vec![],
                diagnostic: other.to_string(),
            },
        ),
    }
}

/// Passes iff `c` is terminated or has an enabled transition.
pub fn check_progress<L: Language>(c: &Configuration<L>) -> PropertyReport<L> {
    const NAME: &str = "progress";
    match c.transitions() {
        Ok(ts) if c.is_terminated() || !ts.is_empty() => PropertyReport::single(NAME),
        Ok(_) => PropertyReport::failed(
            NAME,
            Counterexample {
                config: c.clone(),
                labels: vec![],
                diagnostic: format!("no transition from {}", c.program.main),
            },
        ),
        Err(e) => error_report(NAME, c, e),
    }
}

/// Options shared by the run-based checks.
#[derive(Clone, Debug)]
pub struct RunChecks {
    pub fuel: u64,
    pub seed: u64,
    /// Re-check well-formedness at every visited configuration.
    pub recheck_wf: bool,
}

/// Runs `c` under a seeded random scheduler, failing at the first visited
/// configuration that is neither terminated nor able to move (or, with
/// `recheck_wf`, is not well-formed).
pub fn check_deadlock_freedom<L: Language>(
    c: &Configuration<L>,
    opts: &RunChecks,
) -> PropertyReport<L> {
    const NAME: &str = "deadlock-freedom";
    let universe = program_universe(&c.program);
    let mut sched = Random::new(opts.seed);
    let mut visited = 0usize;
    let mut failure: Option<(usize, String)> = None;
    let outcome = run_observed(c.clone(), opts.fuel, &mut sched, |cfg, enabled| {
        visited += 1;
        if failure.is_some() {
            return;
        }
        let diagnostic = if !cfg.is_terminated() && enabled.is_empty() {
            Some(format!("stuck at {}", cfg.program.main))
        } else if opts.recheck_wf {
            match ccp_wf_diagnose(&cfg.program, &universe) {
                Ok(Ok(())) => None,
                Ok(Err(v)) => Some(format!("well-formedness lost: {v}")),
                Err(e) => Some(format!("well-formedness lost: {e}")),
            }
        } else {
            None
        };
        failure = diagnostic.map(|d| (visited - 1, d));
    });
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => return error_report(NAME, c, e),
    };
    match failure {
        Some((steps, diagnostic)) => PropertyReport::failed(
            NAME,
            Counterexample {
                config: c.clone(),
                labels: outcome.trace.labels().take(steps).cloned().collect(),
                diagnostic,
            },
        ),
        None => PropertyReport::single(NAME),
    }
}

fn same_configuration<L: Language>(a: &Configuration<L>, b: &Configuration<L>) -> bool {
    a.program.main == b.program.main && a.state.ext_eq(&b.state)
}

/// For every pair of distinct enabled labels, both orders must be possible
/// and reach the same choreography and extensionally equal states.
pub fn check_diamond<L: Language>(c: &Configuration<L>) -> PropertyReport<L> {
    const NAME: &str = "diamond";
    let ts = match c.transitions() {
        Ok(ts) => ts,
        Err(e) => return error_report(NAME, c, e),
    };
    let fail = |labels: Vec<RichLabel<L>>, diagnostic: String| {
        PropertyReport::failed(
            NAME,
            Counterexample {
                config: c.clone(),
                labels,
                diagnostic,
            },
        )
    };
    let after: Vec<Configuration<L>> = ts.iter().map(|t| c.apply(t.clone())).collect();
    for i in 0..ts.len() {
        for j in i + 1..ts.len() {
            let (l1, l2) = (&ts[i].label, &ts[j].label);
            if l1 == l2 {
                continue;
            }
            let c12 = match step(&after[i], l2) {
                Ok(x) => x,
                Err(e) => {
                    return fail(
                        vec![l1.clone(), l2.clone()],
                        format!("{l2} disabled after {l1}: {e}"),
                    )
                }
            };
            let c21 = match step(&after[j], l1) {
                Ok(x) => x,
                Err(e) => {
                    return fail(
                        vec![l2.clone(), l1.clone()],
                        format!("{l1} disabled after {l2}: {e}"),
                    )
                }
            };
            if !same_configuration(&c12, &c21) {
                return fail(
                    vec![l1.clone(), l2.clone()],
                    format!(
                        "orders disagree: {} with {} vs {} with {}",
                        c12.program.main, c12.state, c21.program.main, c21.state
                    ),
                );
            }
        }
    }
    PropertyReport::single(NAME)
}

/// End configuration, labels taken, and the first well-formedness failure seen.
type RandomRun<L> = (Configuration<L>, Vec<RichLabel<L>>, Option<String>);

fn random_run<L: Language>(
    c: &Configuration<L>,
    k: u64,
    seed: u64,
    universe: Option<&[L::ProcName]>,
) -> Result<RandomRun<L>, ChorError> {
    let mut wf_failure = None;
    let out = run_observed(c.clone(), k, &mut Random::new(seed), |cfg, _| {
        if let (Some(u), None) = (universe, &wf_failure) {
            match ccp_wf_diagnose(&cfg.program, u) {
                Ok(Ok(())) => {}
                Ok(Err(v)) => wf_failure = Some(format!("well-formedness lost: {v}")),
                Err(e) => wf_failure = Some(format!("well-formedness lost: {e}")),
            }
        }
    })?;
    Ok((
        out.config,
        out.trace.labels().cloned().collect(),
        wf_failure,
    ))
}

/// Options for the exploration-based checks.
#[derive(Clone, Debug)]
pub struct ExploreChecks {
    /// Steps explored from each endpoint when looking for a join.
    pub join_depth: usize,
    pub node_limit: usize,
    pub recheck_wf: bool,
}

impl ExploreChecks {
    pub fn for_steps(k: u64) -> Self {
        Self {
            join_depth: k as usize,
            node_limit: DEFAULT_NODE_LIMIT,
            recheck_wf: false,
        }
    }
}

/// Runs two seeded random schedulers for up to `k` steps each and searches
/// for a configuration reachable from both endpoints.
pub fn check_confluence<L: Language>(
    c: &Configuration<L>,
    k: u64,
    seeds: (u64, u64),
) -> PropertyReport<L> {
    check_confluence_with(c, k, seeds, &ExploreChecks::for_steps(k))
}

pub fn check_confluence_with<L: Language>(
    c: &Configuration<L>,
    k: u64,
    seeds: (u64, u64),
    opts: &ExploreChecks,
) -> PropertyReport<L> {
    const NAME: &str = "confluence";
    let universe = program_universe(&c.program);
    let watch = opts.recheck_wf.then_some(universe.as_slice());
    let runs =
        random_run(c, k, seeds.0, watch).and_then(|a| Ok((a, random_run(c, k, seeds.1, watch)?)));
    let ((c1, labels1, wf1), (c2, labels2, wf2)) = match runs {
        Ok(r) => r,
        Err(e) => return error_report(NAME, c, e),
    };
    for (labels, wf) in [(&labels1, wf1), (&labels2, wf2)] {
        if let Some(diagnostic) = wf {
            return PropertyReport::failed(
                NAME,
                Counterexample {
                    config: c.clone(),
                    labels: labels.clone(),
                    diagnostic,
                },
            );
        }
    }
    let joined = reachable_configurations(&c1, opts.join_depth, opts.node_limit).and_then(|r1| {
        let r2 = reachable_configurations(&c2, opts.join_depth, opts.node_limit)?;
        Ok(joinable(&r1, &r2))
    });
    match joined {
        Ok(true) => PropertyReport::single(NAME),
        Ok(false) => {
            let mut labels = labels1;
            labels.extend(labels2);
            PropertyReport::failed(
                NAME,
                Counterexample {
                    config: c.clone(),
                    diagnostic: format!(
                        "no common configuration within {} steps of {} and {}",
                        opts.join_depth, c1.program.main, c2.program.main
                    ),
                    labels,
                },
            )
        }
        Err(e) => error_report(NAME, c, e),
    }
}

type Node<L> = (Arc<Choreography<L>>, GlobalState<L>);

fn joinable<L: Language>(a: &HashSet<Node<L>>, b: &HashSet<Node<L>>) -> bool {
    // states are canonical, so structural equality is extensional equality
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small.iter().any(|n| large.contains(n))
}

/// Passes iff at most one terminal state is reachable within `depth` steps.
pub fn check_termination_unique<L: Language>(
    c: &Configuration<L>,
    depth: usize,
    node_limit: usize,
) -> PropertyReport<L> {
    const NAME: &str = "termination-unique";
    match reachable_terminals(c, depth, node_limit) {
        Ok(ts) if ts.len() <= 1 => PropertyReport::single(NAME),
        Ok(ts) => PropertyReport::failed(
            NAME,
            Counterexample {
                config: c.clone(),
                labels: vec![],
                diagnostic: format!(
                    "{} distinct terminal states, e.g. {} and {}",
                    ts.len(),
                    ts[0],
                    ts[1]
                ),
            },
        ),
        Err(e) => error_report(NAME, c, e),
    }
}

/// Passes iff `c` and every configuration a seeded random run visits within
/// `fuel` steps is well-formed.
pub fn check_wf_preservation<L: Language>(
    c: &Configuration<L>,
    fuel: u64,
    seed: u64,
) -> PropertyReport<L> {
    const NAME: &str = "wf-preservation";
    let universe = program_universe(&c.program);
    match random_run(c, fuel, seed, Some(&universe)) {
        Ok((_, labels, Some(diagnostic))) => PropertyReport::failed(
            NAME,
            Counterexample {
                config: c.clone(),
                labels,
                diagnostic,
            },
        ),
        Ok(_) => PropertyReport::single(NAME),
        Err(e) => error_report(NAME, c, e),
    }
}

/// Trial settings for registry-driven checks.
#[derive(Clone, Debug)]
pub struct PropOptions {
    pub trials: usize,
    pub seed: u64,
    /// Steps per random run (confluence) or exploration depth (termination).
    pub depth: usize,
    /// Steps for run-based properties.
    pub fuel: u64,
    pub node_limit: usize,
    pub gen: GenConfig,
}

impl Default for PropOptions {
    fn default() -> Self {
        Self {
            trials: 1000,
            seed: 0,
            depth: 6,
            fuel: 200,
            node_limit: DEFAULT_NODE_LIMIT,
            gen: GenConfig::default(),
        }
    }
}

/// A property checkable on one generated configuration.
pub trait Property: Sync {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    /// Checks one configuration; `seed` drives any scheduling choices.
    fn check(
        &self,
        c: &Configuration<Concrete>,
        opts: &PropOptions,
        seed: u64,
    ) -> PropertyReport<Concrete>;
}

struct Progress;
struct DeadlockFreedom;
struct Diamond;
struct Confluence;
struct TerminationUnique;
struct WfPreservation;

impl Property for Progress {
    fn name(&self) -> &'static str {
        "progress"
    }
    fn about(&self) -> &'static str {
        "a non-terminated configuration has an enabled transition"
    }
    fn check(
        &self,
        c: &Configuration<Concrete>,
        _: &PropOptions,
        _: u64,
    ) -> PropertyReport<Concrete> {
        check_progress(c)
    }
}

impl Property for DeadlockFreedom {
    fn name(&self) -> &'static str {
        "deadlock-freedom"
    }
    fn about(&self) -> &'static str {
        "no configuration on a random run is stuck"
    }
    fn check(
        &self,
        c: &Configuration<Concrete>,
        opts: &PropOptions,
        seed: u64,
    ) -> PropertyReport<Concrete> {
        check_deadlock_freedom(
            c,
            &RunChecks {
                fuel: opts.fuel,
                seed,
                recheck_wf: false,
            },
        )
    }
}

impl Property for Diamond {
    fn name(&self) -> &'static str {
        "diamond"
    }
    fn about(&self) -> &'static str {
        "distinct enabled transitions commute"
    }
    fn check(
        &self,
        c: &Configuration<Concrete>,
        _: &PropOptions,
        _: u64,
    ) -> PropertyReport<Concrete> {
        check_diamond(c)
    }
}

impl Property for Confluence {
    fn name(&self) -> &'static str {
        "confluence"
    }
    fn about(&self) -> &'static str {
        "two random runs of DEPTH steps can be joined"
    }
    fn check(
        &self,
        c: &Configuration<Concrete>,
        opts: &PropOptions,
        seed: u64,
    ) -> PropertyReport<Concrete> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = opts.depth as u64;
        let explore = ExploreChecks {
            node_limit: opts.node_limit,
            ..ExploreChecks::for_steps(k)
        };
        check_confluence_with(c, k, (rng.gen(), rng.gen()), &explore)
    }
}

impl Property for TerminationUnique {
    fn name(&self) -> &'static str {
        "termination-unique"
    }
    fn about(&self) -> &'static str {
        "at most one terminal state is reachable within DEPTH steps"
    }
    fn check(
        &self,
        c: &Configuration<Concrete>,
        opts: &PropOptions,
        _: u64,
    ) -> PropertyReport<Concrete> {
        check_termination_unique(c, opts.depth, opts.node_limit)
    }
}

impl Property for WfPreservation {
    fn name(&self) -> &'static str {
        "wf-preservation"
    }
    fn about(&self) -> &'static str {
        "every configuration on a random run is well-formed"
    }
    fn check(
        &self,
        c: &Configuration<Concrete>,
        opts: &PropOptions,
        seed: u64,
    ) -> PropertyReport<Concrete> {
        check_wf_preservation(c, opts.fuel, seed)
    }
}

static PROPERTIES: &[&dyn Property] = &[
    &Progress,
    &DeadlockFreedom,
    &Diamond,
    &Confluence,
    &TerminationUnique,
    &WfPreservation,
];

pub fn properties() -> &'static [&'static dyn Property] {
    PROPERTIES
}

pub fn property_by_name(name: &str) -> Option<&'static dyn Property> {
    PROPERTIES.iter().copied().find(|p| p.name() == name)
}

/// Per-trial seeds derived from one master seed.
pub fn trial_seeds(seed: u64, trials: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).map(|_| rng.gen()).collect()
}

/// Checks `prop` on `opts.trials` generated configurations in parallel.
pub fn run_property(prop: &dyn Property, opts: &PropOptions) -> PropertyReport<Concrete> {
    let reports: Vec<PropertyReport<Concrete>> = trial_seeds(opts.seed, opts.trials)
        .into_par_iter()
        .map(|seed| {
            let c = gen_configuration(&opts.gen.with_seed(seed));
            prop.check(&c, opts, seed)
        })
        .collect();
    PropertyReport::merge(prop.name(), reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{encode_default, input_state};
    use crate::prf::library;
    use crate::semantics::RunStatus;
    use crate::wf::ccp_wf;

    fn cfg(main: Chor) -> Configuration<Concrete> {
        Configuration::new(Program::new(DefSet::new(), main), GlobalState::new(0))
    }

    fn two_coms() -> Chor {
        Chor::com(
            1,
            Expr::Zero,
            2,
            Var::Xx,
            Chor::com(3, Expr::SuccThis, 4, Var::Xx, Chor::end()),
        )
    }

    #[test]
    fn smallest_generated_program() {
        let g = GenConfig {
            procedures: 0,
            max_depth: 0,
            ..GenConfig::default()
        };
        let p = gen_program(&g);
        assert!(p.main.is_end());
        assert!(p.procedures.is_empty());
    }

    #[test]
    fn generator_is_deterministic_and_well_formed() {
        let g = GenConfig::default().with_seed(42);
        assert_eq!(gen_program(&g), gen_program(&g));
        for seed in 0..200 {
            let p = gen_program(&g.with_seed(seed));
            let universe: Vec<u64> = (0..g.procedures).collect();
            assert_eq!(
                ccp_wf_diagnose(&p, &universe),
                Ok(Ok(())),
                "seed {seed}:\n{p}"
            );
        }
    }

    #[test]
    fn progress_examples() {
        assert!(check_progress(&cfg(Chor::end())).passed());
        let c = cfg(Chor::com(1, Expr::This, 2, Var::Xx, Chor::end()));
        assert_eq!(c.transitions().unwrap().len(), 1);
        assert!(check_progress(&c).passed());
    }

    #[test]
    fn deadlock_freedom_of_encoded_add() {
        let f = library::add();
        let c = Configuration::new(encode_default(&f), input_state(&[1, 2], &[2, 1]));
        let opts = RunChecks {
            fuel: 100_000,
            seed: 5,
            recheck_wf: true,
        };
        assert!(check_deadlock_freedom(&c, &opts).passed());
        let out = crate::semantics::run(c, 100_000, &mut Random::new(5)).unwrap();
        assert_eq!(out.status, RunStatus::Terminated);
    }

    #[test]
    fn stuck_configuration_is_reported() {
        // a call to a procedure with an empty annotation cannot move
        let c = Configuration::new(
            Program::new(DefSet::new().define(0u64, [], Chor::end()), Chor::call(0)),
            GlobalState::new(0),
        );
        assert!(!ccp_wf(&c.program, &[0]).unwrap());
        let report = check_progress(&c);
        assert_eq!(report.verdict(), Verdict::Fail);
        let report = check_deadlock_freedom(
            &c,
            &RunChecks {
                fuel: 10,
                seed: 0,
                recheck_wf: false,
            },
        );
        let cx = report.counterexample.expect("stuck");
        assert!(cx.labels.is_empty());
        // replaying on the embedded configuration fails again
        assert_eq!(check_progress(&cx.config).verdict(), Verdict::Fail);
    }

    #[test]
    fn diamond_examples() {
        assert!(check_diamond(&cfg(Chor::com(1, Expr::This, 2, Var::Xx, Chor::end()))).passed());
        let c = cfg(two_coms());
        assert_eq!(c.transitions().unwrap().len(), 2);
        assert!(check_diamond(&c).passed());
    }

    #[test]
    fn confluence_examples() {
        let c = cfg(two_coms());
        assert!(check_confluence(&c, 0, (1, 2)).passed());
        for seeds in [(1, 2), (3, 4), (5, 6)] {
            assert!(check_confluence(&c, 1, seeds).passed());
        }
    }

    #[test]
    fn termination_unique_examples() {
        assert!(check_termination_unique(&cfg(Chor::end()), 0, 10).passed());
        let c = cfg(two_coms());
        assert_eq!(reachable_terminals(&c, 2, 100).unwrap().len(), 1);
        assert!(check_termination_unique(&c, 2, 100).passed());
    }

    #[test]
    fn termination_unique_for_encoded_add() {
        let f = library::add();
        let c = Configuration::new(encode_default(&f), input_state(&[1, 2], &[1, 1]));
        let first = crate::semantics::run(c.clone(), 100_000, &mut crate::sched::First).unwrap();
        assert_eq!(first.status, RunStatus::Terminated);
        let report = check_termination_unique(&c, first.trace.len() + 2, DEFAULT_NODE_LIMIT);
        assert!(report.passed());
    }

    #[test]
    fn exhausted_budget_is_inconclusive() {
        let c = cfg(two_coms());
        assert_eq!(
            check_termination_unique(&c, 2, 1).verdict(),
            Verdict::Inconclusive
        );
    }

    #[test]
    fn registry_runs_every_property() {
        let opts = PropOptions {
            trials: 20,
            ..PropOptions::default()
        };
        for prop in properties() {
            let report = run_property(*prop, &opts);
            assert_eq!(report.trials, 20);
            assert!(
                report.passed(),
                "{}: {:?}",
                prop.name(),
                report.counterexample
            );
        }
        assert!(property_by_name("diamond").is_some());
        assert!(property_by_name("nope").is_none());
    }
}
