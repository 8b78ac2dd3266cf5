use std::collections::BTreeSet;

use corechor::props::{gen_configuration, program_universe, GenConfig};
use corechor::sched::Random;
use corechor::semantics::{forget, label_processes, run_observed, RunStatus};
use corechor::wf::{ccp_wf, chor_processes};
use corechor::{Concrete, Configuration, RichLabel, TransitionLabel};
use proptest::prelude::*;

type Config = Configuration<Concrete>;

fn configuration(seed: u64) -> Config {
    gen_configuration(&GenConfig::default().with_seed(seed))
}

/// Every configuration along a random run of at most `fuel` steps.
fn visited(c: Config, fuel: u64, seed: u64) -> Vec<Config> {
    let mut out = Vec::new();
    run_observed(c, fuel, &mut Random::new(seed), |cfg, _| {
        out.push(cfg.clone())
    })
    .expect("generated programs only call defined procedures");
    out
}

fn processes(c: &Config, universe: &[u64]) -> BTreeSet<u64> {
    chor_processes(&c.program.main, &c.program.procedures, universe).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Labels identify transitions, so stepping by label is deterministic.
    #[test]
    fn enabled_labels_are_distinct(seed in any::<u64>(), walk in any::<u64>()) {
        for cfg in visited(configuration(seed), 40, walk) {
            let ts = cfg.transitions().unwrap();
            let labels: BTreeSet<&RichLabel<Concrete>> = ts.iter().map(|t| &t.label).collect();
            prop_assert_eq!(labels.len(), ts.len());
        }
    }

    #[test]
    fn lazy_targets_match_eager_ones(seed in any::<u64>(), walk in any::<u64>()) {
        for cfg in visited(configuration(seed), 40, walk) {
            let ts = cfg.transitions().unwrap();
            let es = cfg.enabled().unwrap();
            prop_assert_eq!(ts.len(), es.len());
            for (t, e) in ts.into_iter().zip(es) {
                prop_assert_eq!(t.rule, e.rule);
                prop_assert_eq!(&t.label, &e.label);
                prop_assert_eq!(&t.state, &e.state);
                prop_assert_eq!(cfg.apply(t), cfg.fire(e));
            }
        }
    }

    #[test]
    fn enumeration_is_deterministic(seed in any::<u64>(), walk in any::<u64>()) {
        for cfg in visited(configuration(seed), 20, walk) {
            prop_assert_eq!(cfg.transitions().unwrap(), cfg.transitions().unwrap());
        }
    }

    /// A communication writes exactly the receiver's variable; nothing else touches the state.
    #[test]
    fn steps_only_write_the_receiver(seed in any::<u64>(), walk in any::<u64>()) {
        for cfg in visited(configuration(seed), 40, walk) {
            for t in cfg.transitions().unwrap() {
                let expected = match &t.label {
                    RichLabel::Com { value, receiver, var, .. } => cfg.state.update(receiver, var, *value),
                    _ => cfg.state.clone(),
                };
                prop_assert!(t.state.ext_eq(&expected), "{}", t.label);
                prop_assert!(t.state.is_canonical());
            }
        }
    }

    /// Steps only involve processes the choreography uses, and never add new ones.
    #[test]
    fn steps_stay_within_used_processes(seed in any::<u64>(), walk in any::<u64>()) {
        let c = configuration(seed);
        let universe = program_universe(&c.program);
        for cfg in visited(c, 40, walk) {
            let used = processes(&cfg, &universe);
            for t in cfg.transitions().unwrap() {
                prop_assert!(label_processes(&t.label).is_subset(&used), "{}", t.label);
                let next = cfg.apply(t);
                prop_assert!(processes(&next, &universe).is_subset(&used));
            }
        }
    }

    #[test]
    fn well_formedness_is_preserved(seed in any::<u64>(), walk in any::<u64>()) {
        let c = configuration(seed);
        let universe = program_universe(&c.program);
        prop_assert!(ccp_wf(&c.program, &universe).unwrap());
        for cfg in visited(c, 60, walk) {
            prop_assert!(ccp_wf(&cfg.program, &universe).unwrap());
        }
    }

    /// Generated well-formed programs never get stuck.
    #[test]
    fn runs_never_get_stuck(seed in any::<u64>(), walk in any::<u64>()) {
        let out = corechor::semantics::run(configuration(seed), 200, &mut Random::new(walk)).unwrap();
        prop_assert_ne!(out.status, RunStatus::Stuck);
        prop_assert_eq!(out.status == RunStatus::Terminated, out.config.is_terminated());
    }

    #[test]
    fn forgetting_keeps_the_acting_processes(seed in any::<u64>(), walk in any::<u64>()) {
        for cfg in visited(configuration(seed), 40, walk) {
            for t in cfg.transitions().unwrap() {
                let acting: BTreeSet<u64> = match forget(&t.label) {
                    TransitionLabel::Com { sender, receiver, .. }
                    | TransitionLabel::Sel { sender, receiver, .. } => [sender, receiver].into(),
                    TransitionLabel::Tau(p) => [p].into(),
                };
                prop_assert_eq!(acting, label_processes(&t.label));
            }
        }
    }

    /// Replaying a run's labels with `step` reaches the same configuration.
    #[test]
    fn replay_by_label(seed in any::<u64>(), walk in any::<u64>()) {
        let c = configuration(seed);
        let out = corechor::semantics::run(c.clone(), 60, &mut Random::new(walk)).unwrap();
        let mut cur = c;
        for l in out.trace.labels() {
            cur = corechor::semantics::step(&cur, l).unwrap();
        }
        prop_assert_eq!(cur, out.config);
    }
}
