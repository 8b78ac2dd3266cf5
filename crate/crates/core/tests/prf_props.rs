use corechor::prf::{converges_within, eval, library, random_function, Kind};
use corechor::PRFunction;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn function(seed: u64, arity: usize, depth: usize) -> PRFunction {
    random_function(&mut ChaCha8Rng::seed_from_u64(seed), arity, depth)
}

fn args(arity: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..5, arity)
}

fn case() -> impl Strategy<Value = (PRFunction, Vec<u64>)> {
    (any::<u64>(), 0usize..=3, 1usize..=3)
        .prop_flat_map(|(seed, arity, depth)| (Just(function(seed, arity, depth)), args(arity)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// More fuel never loses or changes a value.
    #[test]
    fn evaluation_is_stable_in_fuel((f, xs) in case(), s in 0u64..20, extra in 0u64..20) {
        if let Some(v) = eval(&f, s, &xs).unwrap() {
            prop_assert_eq!(eval(&f, s + extra, &xs).unwrap(), Some(v));
        }
    }

    #[test]
    fn witness_is_the_least_fuel((f, xs) in case(), fuel in 0u64..25) {
        if let Some(c) = converges_within(&f, &xs, fuel).unwrap() {
            prop_assert!(c.witness_steps <= fuel);
            prop_assert_eq!(eval(&f, c.witness_steps, &xs).unwrap(), Some(c.value));
            if c.witness_steps > 0 {
                prop_assert_eq!(eval(&f, c.witness_steps - 1, &xs).unwrap(), None);
            }
        } else {
            prop_assert_eq!(eval(&f, fuel, &xs).unwrap(), None);
        }
    }

    #[test]
    fn defining_equations_hold((f, xs) in case(), fuel in 0u64..12) {
        let value = eval(&f, fuel, &xs).unwrap();
        match f.kind() {
            Kind::Zero => prop_assert_eq!(value, Some(0)),
            Kind::Successor => prop_assert_eq!(value, Some(xs[0] + 1)),
            Kind::Projection(k) => prop_assert_eq!(value, Some(xs[*k])),
            Kind::Composition { outer, inner } => {
                let mid: Option<Vec<u64>> = inner.iter().map(|g| eval(g, fuel, &xs).unwrap()).collect();
                let expected = match mid {
                    Some(ys) => eval(outer, fuel, &ys).unwrap(),
                    None => None,
                };
                prop_assert_eq!(value, expected);
            }
            Kind::Recursion { base, step } => {
                let expected = match xs[0] {
                    0 => eval(base, fuel, &xs[1..]).unwrap(),
                    n => {
                        let mut prev = xs.clone();
                        prev[0] = n - 1;
                        match eval(&f, fuel, &prev).unwrap() {
                            Some(r) => {
                                let mut ys = vec![n - 1, r];
                                ys.extend_from_slice(&xs[1..]);
                                eval(step, fuel, &ys).unwrap()
                            }
                            None => None,
                        }
                    }
                };
                prop_assert_eq!(value, expected);
            }
            Kind::Minimization(h) => {
                if let Some(z) = value {
                    prop_assert!(z < fuel.max(1));
                    let at = |n: u64| {
                        let mut ys = xs.clone();
                        ys.push(n);
                        eval(h, fuel, &ys).unwrap()
                    };
                    prop_assert_eq!(at(z), Some(0));
                    for n in 0..z {
                        prop_assert!(matches!(at(n), Some(v) if v > 0));
                    }
                }
            }
        }
    }

    #[test]
    fn library_matches_machine_arithmetic(m in 0u64..25, n in 0u64..25, fuel in 0u64..3) {
        let two = |f: PRFunction| eval(&f, fuel, &[m, n]).unwrap();
        prop_assert_eq!(two(library::add()), Some(m + n));
        prop_assert_eq!(two(library::mul()), Some(m * n));
        prop_assert_eq!(two(library::sub()), Some(m.saturating_sub(n)));
        prop_assert_eq!(two(library::gt()), Some(u64::from(m > n)));
        prop_assert_eq!(two(library::lt()), Some(u64::from(m < n)));
        prop_assert_eq!(two(library::eq()), Some(u64::from(m == n)));
        let one = |f: PRFunction| eval(&f, fuel, &[m]).unwrap();
        prop_assert_eq!(one(library::sign()), Some(u64::from(m > 0)));
        prop_assert_eq!(one(library::is_zero()), Some(u64::from(m == 0)));
        prop_assert_eq!(one(library::pred()), Some(m.saturating_sub(1)));
    }

    #[test]
    fn arity_mismatch_is_an_error((f, xs) in case()) {
        let mut longer = xs.clone();
        longer.push(0);
        prop_assert!(eval(&f, 3, &longer).is_err());
    }

    #[test]
    fn generated_functions_respect_bounds(seed in any::<u64>(), arity in 0usize..=3, depth in 1usize..=4) {
        let f = function(seed, arity, depth);
        prop_assert_eq!(f.arity(), arity);
        prop_assert!(f.depth() <= depth);
    }
}
