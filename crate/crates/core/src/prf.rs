//! Kleene's partial recursive functions with fuel-bounded evaluation.
//!
//! Fuel only bounds the search performed by minimisation: base functions
//! answer at any fuel, and composition and recursion hand the same fuel to
//! their parts. Raising the fuel can only turn an absent result into a
//! present one.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::error::PrfError;

/// A partial recursive function together with its arity.
///
/// Values are built through the checked constructors, so every node is
/// arity-consistent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PRFunction {
    arity: usize,
    kind: Kind,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Zero,
    Successor,
    /// 0-based index into the arguments.
    Projection(usize),
    Composition {
        outer: Box<PRFunction>,
        inner: Vec<PRFunction>,
    },
    Recursion {
        base: Box<PRFunction>,
        step: Box<PRFunction>,
    },
    Minimization(Box<PRFunction>),
}

impl PRFunction {
    pub fn zero() -> Self {
        Self {
            arity: 1,
            kind: Kind::Zero,
        }
    }

    pub fn successor() -> Self {
        Self {
            arity: 1,
            kind: Kind::Successor,
        }
    }

    /// Projection onto argument `index` (0-based) of `arity` arguments.
    pub fn projection(index: usize, arity: usize) -> Result<Self, PrfError> {
        if index >= arity {
            return Err(PrfError::ProjectionOutOfRange { index, arity });
        }
        Ok(Self {
            arity,
            kind: Kind::Projection(index),
        })
    }

    /// `outer(inner[0](xs), ..., inner[m-1](xs))` where every inner function
    /// takes `arity` arguments.
    pub fn composition(
        outer: PRFunction,
        inner: Vec<PRFunction>,
        arity: usize,
    ) -> Result<Self, PrfError> {
        if inner.len() != outer.arity {
            return Err(PrfError::CompositionWidth {
                expected: outer.arity,
                found: inner.len(),
            });
        }
        if let Some((position, f)) = inner.iter().enumerate().find(|(_, f)| f.arity != arity) {
            return Err(PrfError::CompositionArity {
                position,
                expected: arity,
                found: f.arity,
            });
        }
        Ok(Self {
            arity,
            kind: Kind::Composition {
                outer: Box::new(outer),
                inner,
            },
        })
    }

    /// Composition with the arity taken from the first inner function.
    ///
    /// Panics when `inner` is empty; use [`PRFunction::composition`] there.
    pub fn compose(outer: PRFunction, inner: Vec<PRFunction>) -> Result<Self, PrfError> {
        let arity = inner
            .first()
            .expect("compose needs at least one inner function")
            .arity;
        Self::composition(outer, inner, arity)
    }

    /// Primitive recursion on the first argument.
    pub fn recursion(base: PRFunction, step: PRFunction) -> Result<Self, PrfError> {
        if step.arity != base.arity + 2 {
            return Err(PrfError::RecursionArity {
                expected: base.arity + 2,
                found: step.arity,
            });
        }
        Ok(Self {
            arity: base.arity + 1,
            kind: Kind::Recursion {
                base: Box::new(base),
                step: Box::new(step),
            },
        })
    }

    /// Least `n` with `h(xs, n) = 0`; the searched argument comes last.
    pub fn minimization(h: PRFunction) -> Result<Self, PrfError> {
        if h.arity == 0 {
            return Err(PrfError::MinimizationArity);
        }
        Ok(Self {
            arity: h.arity - 1,
            kind: Kind::Minimization(Box::new(h)),
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    /// Height of the syntax tree; base functions have depth 0.
    pub fn depth(&self) -> usize {
        match &self.kind {
            Kind::Zero | Kind::Successor | Kind::Projection(_) => 0,
            Kind::Composition { outer, inner } => {
                1 + inner
                    .iter()
                    .map(PRFunction::depth)
                    .max()
                    .unwrap_or(0)
                    .max(outer.depth())
            }
            Kind::Recursion { base, step } => 1 + base.depth().max(step.depth()),
            Kind::Minimization(h) => 1 + h.depth(),
        }
    }

    pub fn has_minimization(&self) -> bool {
        match &self.kind {
            Kind::Zero | Kind::Successor | Kind::Projection(_) => false,
            Kind::Composition { outer, inner } => {
                outer.has_minimization() || inner.iter().any(PRFunction::has_minimization)
            }
            Kind::Recursion { base, step } => base.has_minimization() || step.has_minimization(),
            Kind::Minimization(_) => true,
        }
    }
}

pub fn arity(f: &PRFunction) -> usize {
    f.arity()
}

pub fn depth(f: &PRFunction) -> usize {
    f.depth()
}

/// Searches for the first zero of `h(ns ++ [n])` for `n = init, init+1, ...`,
/// spending one unit of `steps` per probe.
pub fn find_zero_from<H>(h: H, ns: &[Option<u64>], init: u64, steps: u64) -> Option<u64>
where
    H: Fn(&[Option<u64>]) -> Option<u64>,
{
    let mut args = ns.to_vec();
    args.push(None);
    let mut candidate = init;
    for _ in 0..steps {
        *args.last_mut().expect("pushed above") = Some(candidate);
        match h(&args)? {
            0 => return Some(candidate),
            _ => candidate += 1,
        }
    }
    None
}

/// Evaluation over possibly-undefined arguments.
pub fn eval_opt(f: &PRFunction, steps: u64, ns: &[Option<u64>]) -> Result<Option<u64>, PrfError> {
    if ns.len() != f.arity {
        return Err(PrfError::ArityMismatch {
            expected: f.arity,
            found: ns.len(),
        });
    }
    Ok(eval_checked(f, steps, ns))
}

fn eval_checked(f: &PRFunction, steps: u64, ns: &[Option<u64>]) -> Option<u64> {
    if ns.iter().any(Option::is_none) {
        return None;
    }
    match &f.kind {
        Kind::Zero => Some(0),
        Kind::Successor => Some(ns[0]?.checked_add(1).expect("natural number overflow")),
        Kind::Projection(k) => ns[*k],
        Kind::Composition { outer, inner } => {
            let mid: Vec<Option<u64>> = inner.iter().map(|g| eval_checked(g, steps, ns)).collect();
            eval_checked(outer, steps, &mid)
        }
        Kind::Recursion { base, step } => {
            let head = ns[0]?;
            let tail = &ns[1..];
            let mut acc = eval_checked(base, steps, tail);
            let mut args = Vec::with_capacity(ns.len() + 1);
            for x in 0..head {
                args.clear();
                args.push(Some(x));
                args.push(acc);
                args.extend_from_slice(tail);
                acc = eval_checked(step, steps, &args);
            }
            acc
        }
        Kind::Minimization(h) => find_zero_from(|v| eval_checked(h, steps, v), ns, 0, steps),
    }
}

pub fn eval(f: &PRFunction, steps: u64, ns: &[u64]) -> Result<Option<u64>, PrfError> {
    let lifted: Vec<Option<u64>> = ns.iter().copied().map(Some).collect();
    eval_opt(f, steps, &lifted)
}

/// A value of `f` at `ns` together with the least fuel producing it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Convergence {
    pub value: u64,
    pub witness_steps: u64,
}

/// The least fuel `<= fuel` at which `f(ns)` is defined, if any.
///
/// Relies on stability of evaluation in the fuel: it probes `fuel` first and
/// then bisects for the least defined point.
pub fn converges_within(
    f: &PRFunction,
    ns: &[u64],
    fuel: u64,
) -> Result<Option<Convergence>, PrfError> {
    let Some(value) = eval(f, fuel, ns)? else {
        return Ok(None);
    };
    let (mut lo, mut hi) = (0u64, fuel);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if eval(f, mid, ns)?.is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(Convergence {
        value,
        witness_steps: lo,
    }))
}

/// Printed in the surface syntax: `Z`, `S`, `P[k/m]` (1-based), `C(g; f1, ..., fm)`,
/// `R(g, h)`, `M(h)`. A composition with no inner functions carries its arity
/// as `C(g; /k)`.
impl fmt::Display for PRFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Zero => write!(f, "Z"),
            Kind::Successor => write!(f, "S"),
            Kind::Projection(k) => write!(f, "P[{}/{}]", k + 1, self.arity),
            Kind::Composition { outer, inner } if inner.is_empty() => {
                write!(f, "C({outer}; /{})", self.arity)
            }
            Kind::Composition { outer, inner } => {
                write!(f, "C({outer};")?;
                for (i, g) in inner.iter().enumerate() {
                    write!(f, "{}{g}", if i == 0 { " " } else { ", " })?;
                }
                write!(f, ")")
            }
            Kind::Recursion { base, step } => write!(f, "R({base}, {step})"),
            Kind::Minimization(h) => write!(f, "M({h})"),
        }
    }
}

/// Textbook definitions without minimisation. Relations answer 1 for true
/// and 0 for false.
pub mod library {
    use super::PRFunction;

    fn p(index: usize, arity: usize) -> PRFunction {
        PRFunction::projection(index, arity).expect("valid projection")
    }

    fn c(outer: PRFunction, inner: Vec<PRFunction>) -> PRFunction {
        PRFunction::compose(outer, inner).expect("arity-consistent composition")
    }

    fn r(base: PRFunction, step: PRFunction) -> PRFunction {
        PRFunction::recursion(base, step).expect("arity-consistent recursion")
    }

    /// `add(m, n) = m + n`, by recursion on `m`.
    pub fn add() -> PRFunction {
        r(p(0, 1), c(PRFunction::successor(), vec![p(1, 3)]))
    }

    /// `mul(m, n) = m * n`, by recursion on `m`: `mul(x+1, n) = mul(x, n) + n`.
    pub fn mul() -> PRFunction {
        r(PRFunction::zero(), c(add(), vec![p(1, 3), p(2, 3)]))
    }

    /// Binary helper `(a, b) -> [a > 0]`; unary functions cannot recurse
    /// without a constant of arity 0.
    fn positive2() -> PRFunction {
        let one = c(
            PRFunction::successor(),
            vec![c(PRFunction::zero(), vec![p(0, 3)])],
        );
        r(PRFunction::zero(), one)
    }

    /// Binary helper `(a, b) -> [a = 0]`.
    fn is_zero2() -> PRFunction {
        let one = c(PRFunction::successor(), vec![PRFunction::zero()]);
        r(one, c(PRFunction::zero(), vec![p(0, 3)]))
    }

    fn diagonal(f: PRFunction) -> PRFunction {
        c(f, vec![p(0, 1), p(0, 1)])
    }

    /// `sign(n)` is 0 at 0 and 1 elsewhere.
    pub fn sign() -> PRFunction {
        diagonal(positive2())
    }

    /// `1 - sign(n)`.
    pub fn is_zero() -> PRFunction {
        diagonal(is_zero2())
    }

    /// Truncated predecessor.
    pub fn pred() -> PRFunction {
        diagonal(r(PRFunction::zero(), p(0, 3)))
    }

    /// `(a, b) -> b - a`, truncated, by recursion on `a`.
    fn sub_from() -> PRFunction {
        r(p(0, 1), c(pred(), vec![p(1, 3)]))
    }

    /// Truncated subtraction `m - n`.
    pub fn sub() -> PRFunction {
        c(sub_from(), vec![p(1, 2), p(0, 2)])
    }

    /// `gt(m, n) = [m > n]`.
    pub fn gt() -> PRFunction {
        c(sign(), vec![sub()])
    }

    /// `lt(m, n) = [m < n]`.
    pub fn lt() -> PRFunction {
        c(sign(), vec![sub_from()])
    }

    /// `eq(m, n) = 1 - ([m > n] + [m < n])`.
    pub fn eq() -> PRFunction {
        c(is_zero(), vec![c(add(), vec![gt(), lt()])])
    }
}

/// The named standard functions.
pub fn standard_library() -> BTreeMap<&'static str, PRFunction> {
    BTreeMap::from([
        ("add", library::add()),
        ("mul", library::mul()),
        ("sign", library::sign()),
        ("gt", library::gt()),
        ("lt", library::lt()),
        ("eq", library::eq()),
        ("pred", library::pred()),
        ("sub", library::sub()),
        ("is_zero", library::is_zero()),
    ])
}

/// A random well-formed function of the given arity and depth at most `max_depth`.
///
/// Arity 0 needs depth at least 1 (the smallest such function is `M(P[1/1])`).
pub fn random_function<R: Rng + ?Sized>(rng: &mut R, arity: usize, max_depth: usize) -> PRFunction {
    assert!(
        arity > 0 || max_depth > 0,
        "no function of arity 0 has depth 0"
    );
    let leaf_ok = arity > 0;
    // a child of arity a at depth d is possible iff a > 0 or d > 0
    let child_ok = |a: usize| a > 0 || max_depth > 1;
    let mut options: Vec<u8> = Vec::new();
    if leaf_ok {
        options.extend([0, 0]);
    }
    if max_depth > 0 {
        if child_ok(arity) {
            options.push(1);
        }
        if arity > 0 && child_ok(arity - 1) {
            options.push(2);
        }
        options.push(3);
    }
    match options[rng.gen_range(0..options.len())] {
        0 => match rng.gen_range(0..3) {
            0 if arity == 1 => PRFunction::zero(),
            1 if arity == 1 => PRFunction::successor(),
            _ => PRFunction::projection(rng.gen_range(0..arity), arity).expect("index < arity"),
        },
        1 => {
            let width = rng.gen_range(1..=2);
            let outer = random_function(rng, width, max_depth - 1);
            let inner = (0..width)
                .map(|_| random_function(rng, arity, max_depth - 1))
                .collect();
            PRFunction::composition(outer, inner, arity).expect("arity-consistent")
        }
        2 => {
            let base = random_function(rng, arity - 1, max_depth - 1);
            let step = random_function(rng, arity + 1, max_depth - 1);
            PRFunction::recursion(base, step).expect("arity-consistent")
        }
        _ => PRFunction::minimization(random_function(rng, arity + 1, max_depth - 1))
            .expect("positive arity"),
    }
}
