//! Core Choreographies: a minimal choreographic language with a labelled
//! transition semantics, well-formedness checks, metatheory property
//! checkers, and a compiler from partial recursive functions.

pub mod encoding;
pub mod error;
pub mod lang;
pub mod prf;
pub mod props;
pub mod sched;
pub mod semantics;
pub mod state;
pub mod syntax;
pub mod wf;

pub use encoding::{BExpr, Concrete, Expr, Var};
pub use error::{ChorError, EncodingError, PrfError};
pub use lang::{Language, LocalState};
pub use prf::PRFunction;
pub use sched::{scheduler_from_spec, Scheduler};
pub use semantics::{Configuration, RichLabel, Transition, TransitionLabel};
pub use state::GlobalState;
pub use syntax::{Choreography, DefSet, Eta, Label, ProcDef, Program};
