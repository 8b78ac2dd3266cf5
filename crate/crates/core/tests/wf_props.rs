use std::collections::BTreeSet;

use corechor::props::{gen_configuration, gen_program, program_universe, GenConfig};
use corechor::sched::Random;
use corechor::semantics::run_observed;
use corechor::wf::{call_graph_closure, ccp_wf, check_program, chor_processes, is_initial};
use corechor::{Choreography, Concrete, DefSet, Eta};
use proptest::prelude::*;

type C = Choreography<Concrete>;

/// Every subterm of `c`, `c` included.
fn subterms(c: &C) -> Vec<&C> {
    let mut out = vec![c];
    let mut i = 0;
    while i < out.len() {
        match out[i] {
            C::Interaction(_, k) | C::RtCall { cont: k, .. } => out.push(k),
            C::Cond {
                then_branch,
                else_branch,
                ..
            } => {
                out.push(then_branch);
                out.push(else_branch);
            }
            C::Call(_) | C::End => {}
        }
        i += 1;
    }
    out
}

/// Processes read off each subterm independently.
fn scanned_processes(c: &C, defs: &DefSet<Concrete>) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for t in subterms(c) {
        match t {
            C::Interaction(
                Eta::Com {
                    sender, receiver, ..
                },
                _,
            )
            | C::Interaction(
                Eta::Sel {
                    sender, receiver, ..
                },
                _,
            ) => {
                out.insert(*sender);
                out.insert(*receiver);
            }
            C::Cond { pid, .. } => {
                out.insert(*pid);
            }
            C::Call(x) => out.extend(defs.get(x).annotation.iter().copied()),
            C::RtCall { pending, .. } => out.extend(pending.iter().copied()),
            C::End => {}
        }
    }
    out
}

fn cfg(seed: u64, depth: usize) -> GenConfig {
    GenConfig {
        max_depth: depth,
        ..GenConfig::default().with_seed(seed)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn processes_match_a_subterm_scan(seed in any::<u64>(), depth in 0usize..=6, walk in any::<u64>()) {
        let c = gen_configuration(&cfg(seed, depth));
        let universe = program_universe(&c.program);
        let defs = c.program.procedures.clone();
        for (_, def) in defs.iter() {
            prop_assert_eq!(
                chor_processes(&def.body, &defs, &universe).unwrap(),
                scanned_processes(&def.body, &defs)
            );
        }
        // runtime calls appear only after some steps
        let mut mains = Vec::new();
        run_observed(c, 30, &mut Random::new(walk), |cur, _| mains.push(cur.program.main.clone())).unwrap();
        for main in mains {
            prop_assert_eq!(chor_processes(&main, &defs, &universe).unwrap(), scanned_processes(&main, &defs));
        }
    }

    #[test]
    fn generated_programs_are_well_formed(seed in any::<u64>(), depth in 0usize..=6) {
        let p = gen_program(&cfg(seed, depth));
        let universe = program_universe(&p);
        prop_assert!(ccp_wf(&p, &universe).unwrap());
        prop_assert!(check_program(&p).is_ok());
        prop_assert!(is_initial(&p.main));
        for (_, def) in p.procedures.iter() {
            prop_assert!(is_initial(&def.body));
            prop_assert!(!def.annotation.is_empty());
        }
    }

    #[test]
    fn generation_is_deterministic(seed in any::<u64>()) {
        prop_assert_eq!(gen_configuration(&cfg(seed, 4)), gen_configuration(&cfg(seed, 4)));
    }

    /// Least annotations: each procedure's annotation is exactly what its body uses,
    /// unless over-annotation is switched on.
    #[test]
    fn annotations_are_exact_without_extras(seed in any::<u64>()) {
        let p = gen_program(&GenConfig { over_annotation_prob: 0.0, ..cfg(seed, 4) });
        let universe = program_universe(&p);
        for (x, def) in p.procedures.iter() {
            let used = chor_processes(&def.body, &p.procedures, &universe).unwrap();
            if !used.is_empty() {
                prop_assert_eq!(&def.annotation, &used, "procedure {}", x);
            }
        }
    }

    #[test]
    fn universe_covers_every_call(seed in any::<u64>()) {
        let p = gen_program(&cfg(seed, 4));
        let universe = program_universe(&p);
        for x in call_graph_closure(&p) {
            prop_assert!(universe.contains(&x));
        }
        for (_, def) in p.procedures.iter() {
            for x in def.body.called_procedures() {
                prop_assert!(universe.contains(x));
            }
        }
    }
}

#[test]
fn smallest_generated_program_is_end() {
    let p = gen_program(&GenConfig {
        procedures: 0,
        max_depth: 0,
        ..GenConfig::default()
    });
    assert!(p.main.is_end());
    assert!(p.procedures.is_empty());
}
