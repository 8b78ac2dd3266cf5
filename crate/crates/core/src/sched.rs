//! Scheduling policies for runs, selectable by name.
//!
//! A policy is written `name` or `name:arg`, e.g. `first` or `random:42`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Picks which of the enabled transitions a run takes next.
pub trait Scheduler: Send {
    fn name(&self) -> String;

    /// Index into a non-empty list of `enabled` transitions.
    fn pick(&mut self, enabled: usize) -> usize;
}

/// Always the first enabled transition.
#[derive(Debug, Clone, Copy, Default)]
pub struct First;

impl Scheduler for First {
    fn name(&self) -> String {
        "first".into()
    }

    fn pick(&mut self, _enabled: usize) -> usize {
        0
    }
}

/// Always the last enabled transition.
#[derive(Debug, Clone, Copy, Default)]
pub struct Last;

impl Scheduler for Last {
    fn name(&self) -> String {
        "last".into()
    }

    fn pick(&mut self, enabled: usize) -> usize {
        enabled - 1
    }
}

/// Uniform choice from a seeded generator.
#[derive(Debug, Clone)]
pub struct Random {
    seed: u64,
    rng: ChaCha8Rng,
}

impl Random {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Scheduler for Random {
    fn name(&self) -> String {
        format!("random:{}", self.seed)
    }

    fn pick(&mut self, enabled: usize) -> usize {
        self.rng.gen_range(0..enabled)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchedError {
    #[error("unknown scheduler `{0}` (known: {known})", known = known_names())]
    Unknown(String),
    #[error("scheduler `{name}` got a bad argument `{arg}`")]
    BadArgument { name: String, arg: String },
}

type Builder = fn(Option<&str>) -> Result<Box<dyn Scheduler>, SchedError>;

pub struct SchedulerEntry {
    pub name: &'static str,
    pub about: &'static str,
    build: Builder,
}

impl fmt::Debug for SchedulerEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SchedulerEntry")
            .field("name", &self.name)
            .finish()
    }
}

fn no_arg(name: &str, arg: Option<&str>) -> Result<(), SchedError> {
    match arg {
        None => Ok(()),
        Some(a) => Err(SchedError::BadArgument {
            name: name.into(),
            arg: a.into(),
        }),
    }
}

static SCHEDULERS: &[SchedulerEntry] = &[
    SchedulerEntry {
        name: "first",
        about: "take the first enabled transition",
        build: |arg| {
            no_arg("first", arg)?;
            Ok(Box::new(First))
        },
    },
    SchedulerEntry {
        name: "last",
        about: "take the last enabled transition",
        build: |arg| {
            no_arg("last", arg)?;
            Ok(Box::new(Last))
        },
    },
    SchedulerEntry {
        name: "random",
        about: "uniform choice, seeded (random:SEED, default seed 0)",
        build: |arg| {
            let seed = match arg {
                None => 0,
                Some(a) => a.parse().map_err(|_| SchedError::BadArgument {
                    name: "random".into(),
                    arg: a.into(),
                })?,
            };
            Ok(Box::new(Random::new(seed)))
        },
    },
];

pub fn schedulers() -> &'static [SchedulerEntry] {
    SCHEDULERS
}

fn known_names() -> String {
    SCHEDULERS
        .iter()
        .map(|e| e.name)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Builds a scheduler from `name` or `name:arg`.
pub fn scheduler_from_spec(spec: &str) -> Result<Box<dyn Scheduler>, SchedError> {
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    let entry = SCHEDULERS
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| SchedError::Unknown(name.into()))?;
    (entry.build)(arg)
}
